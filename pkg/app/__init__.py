# Schnizer 模块认证 - 应用包
__version__ = "1.0.0"
__author__ = "QGR Certifier"
