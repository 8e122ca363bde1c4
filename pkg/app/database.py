"""
证书归档模块
使用 SQLite 保存每次运行的证书, 可导出为 Excel
"""
import json
import logging
import sqlite3
from contextlib import contextmanager
from datetime import datetime
from typing import Dict, List, Optional

from .models import Certificate

try:
    import pandas as pd
    PANDAS_AVAILABLE = True
except ImportError:
    PANDAS_AVAILABLE = False

logger = logging.getLogger(__name__)


class CertificateArchive:
    """证书归档"""

    def __init__(self, db_path: str):
        self.db_path = db_path
        self.init_db()

    @contextmanager
    def get_connection(self):
        """获取数据库连接的上下文管理器"""
        # 扫描在工作线程中运行, 连接可能跨线程
        conn = sqlite3.connect(self.db_path, check_same_thread=False, timeout=10.0)
        conn.execute("PRAGMA busy_timeout = 5000")
        conn.row_factory = sqlite3.Row
        try:
            yield conn
            conn.commit()
        except Exception as e:
            conn.rollback()
            raise e
        finally:
            conn.close()

    def init_db(self):
        """初始化数据库表"""
        with self.get_connection() as conn:
            cursor = conn.cursor()
            cursor.execute("PRAGMA journal_mode=WAL;")
            cursor.execute("""
                CREATE TABLE IF NOT EXISTS runs (
                    id INTEGER PRIMARY KEY AUTOINCREMENT,
                    created_at TEXT NOT NULL,
                    type TEXT NOT NULL,
                    rank INTEGER NOT NULL,
                    ell INTEGER NOT NULL,
                    lam TEXT NOT NULL,
                    backend TEXT NOT NULL,
                    seed INTEGER NOT NULL,
                    status TEXT NOT NULL,
                    certificate TEXT NOT NULL
                )
            """)
            cursor.execute("""
                CREATE TABLE IF NOT EXISTS checks (
                    run_id INTEGER NOT NULL REFERENCES runs(id),
                    name TEXT NOT NULL,
                    status TEXT NOT NULL,
                    detail TEXT DEFAULT ''
                )
            """)
            cursor.execute("CREATE INDEX IF NOT EXISTS idx_checks_run ON checks(run_id)")
            cursor.execute("CREATE INDEX IF NOT EXISTS idx_checks_status ON checks(status)")

    def add_certificate(self, cert: Certificate) -> int:
        """保存一份证书, 返回 run id"""
        spec = cert.spec
        with self.get_connection() as conn:
            cursor = conn.cursor()
            cursor.execute(
                """
                INSERT INTO runs (created_at, type, rank, ell, lam, backend, seed, status, certificate)
                VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?)
                """,
                (
                    datetime.now().isoformat(timespec="seconds"),
                    spec["type"],
                    spec["rank"],
                    spec["ell"],
                    ",".join(str(x) for x in spec["lambda"]),
                    cert.backend,
                    cert.seed,
                    "pass" if cert.passed else "fail",
                    cert.to_json(),
                ),
            )
            run_id = cursor.lastrowid
            cursor.executemany(
                "INSERT INTO checks (run_id, name, status, detail) VALUES (?, ?, ?, ?)",
                [(run_id, c.name, c.status, c.detail) for c in cert.checks],
            )
        logger.debug("archived run %d in %s", run_id, self.db_path)
        return run_id

    def get_certificate(self, run_id: int) -> Optional[Certificate]:
        with self.get_connection() as conn:
            row = conn.execute("SELECT certificate FROM runs WHERE id = ?", (run_id,)).fetchone()
        return Certificate.from_db_row(row) if row else None

    def list_runs(self, status: Optional[str] = None) -> List[Dict]:
        """按 id 升序列出运行摘要"""
        query = "SELECT id, created_at, type, rank, ell, lam, backend, seed, status FROM runs"
        params = ()
        if status:
            query += " WHERE status = ?"
            params = (status,)
        with self.get_connection() as conn:
            rows = conn.execute(query + " ORDER BY id", params).fetchall()
        return [dict(r) for r in rows]

    def failed_checks(self) -> List[Dict]:
        with self.get_connection() as conn:
            rows = conn.execute(
                "SELECT run_id, name, detail FROM checks WHERE status = 'fail' ORDER BY run_id"
            ).fetchall()
        return [dict(r) for r in rows]

    def export_to_excel(self, target_path: str) -> bool:
        """导出检查项到 Excel"""
        if not PANDAS_AVAILABLE:
            logger.error("Export failed: pandas is not installed")
            return False

        try:
            with self.get_connection() as conn:
                df = pd.read_sql_query(
                    """
                    SELECT r.id, r.created_at, r.type, r.rank, r.ell, r.lam, r.backend, r.seed,
                           c.name, c.status, c.detail
                    FROM checks c JOIN runs r ON r.id = c.run_id
                    ORDER BY r.id
                    """,
                    conn,
                )

            df = df.rename(columns={
                "id": "运行",
                "created_at": "时间",
                "type": "型",
                "rank": "秩",
                "ell": "l",
                "lam": "最高权",
                "backend": "后端",
                "seed": "种子",
                "name": "检查项",
                "status": "结果",
                "detail": "说明",
            })

            df.to_excel(target_path, index=False, engine="openpyxl")
            return True
        except Exception as e:
            logger.error("Export failed: %s", e)
            return False


def spec_echo(cert: Certificate) -> str:
    """证书对应模块的简短标签, 如 C2 l=5 λ=(3,1)"""
    spec = cert.spec
    lam = ",".join(str(x) for x in spec["lambda"])
    return f"{spec['type']}{spec['rank']} l={spec['ell']} λ=({lam})"


def load_certificate(path: str) -> Certificate:
    with open(path, "r", encoding="utf-8") as fh:
        return Certificate.from_dict(json.load(fh))
