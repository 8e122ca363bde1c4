import pytest
from hypothesis import given
from hypothesis import strategies as st

from app.cyclotomic import get_field
from app.errors import DomainError, StructuralError
from app.weylrep import (
    IndexShape,
    SparseVec,
    Term,
    XWord,
    ZWord,
    index_decode,
    index_encode,
    term_apply,
    x_apply,
    z_eval,
)

F5 = get_field(5)
C2 = IndexShape("C", 2, 5)

c2_indices = st.lists(st.integers(0, 4), min_size=4, max_size=4).map(tuple)


@pytest.mark.parametrize("kind,n,N", [("A", 1, 1), ("A", 2, 3), ("C", 2, 4), ("B", 3, 9), ("D", 4, 12), ("D", 5, 20)])
def test_grid_sizes(kind, n, N):
    shape = IndexShape(kind, n, 5)
    assert shape.N == N
    assert shape.size == 5 ** N


def test_rank_below_minimum():
    with pytest.raises(DomainError):
        IndexShape("B", 2, 5)
    with pytest.raises(DomainError):
        IndexShape("E", 6, 5)


@given(c2_indices)
def test_encode_decode(m):
    assert index_decode(C2, index_encode(C2, m)) == m


@given(c2_indices, c2_indices)
def test_encoding_preserves_order(m1, m2):
    assert (m1 < m2) == (C2.encode(m1) < C2.encode(m2))


def test_encoding_examples():
    assert C2.encode((0, 0, 0, 0)) == 0
    assert C2.decode(5 ** 4 - 1) == (4, 4, 4, 4)
    assert C2.encode(C2.unit((1, 1))) == 5 ** 3
    with pytest.raises(StructuralError):
        C2.check((0, 0, 5, 0))
    with pytest.raises(StructuralError):
        C2.check((0, 0, 0))
    with pytest.raises(StructuralError):
        C2.decode(5 ** 4)


def test_sparse_vector_arithmetic():
    u = SparseVec.basis(C2, F5, (1, 0, 0, 0))
    w = SparseVec.basis(C2, F5, (0, 0, 0, 1))
    s = u + w.scale(F5.eps_pow(2))
    assert len(s) == 2
    assert (s - u) == w.scale(F5.eps_pow(2))
    assert not (u - u)
    assert not u.scale(F5.zero)
    assert s.support() == [(0, 0, 0, 1), (1, 0, 0, 0)]
    assert SparseVec.from_json(s.to_json(), F5) == s


def test_sparse_vector_shape_mismatch():
    u = SparseVec.basis(C2, F5, C2.zero())
    v = SparseVec.basis(IndexShape("A", 2, 5), F5, (0, 0, 0))
    with pytest.raises(StructuralError):
        u + v


def test_x_apply_wraps():
    u0 = SparseVec.basis(C2, F5, C2.zero())
    out = x_apply(C2, XWord.of({(1, 1): 1}), u0)
    assert out.support() == [(4, 0, 0, 0)]
    assert x_apply(C2, XWord(), u0) == u0
    v = u0 + SparseVec.basis(C2, F5, (2, 3, 1, 0))
    back = x_apply(C2, XWord.of({(1, 1): 1}), x_apply(C2, XWord.of({(1, 1): -1}), v))
    assert back == v


def test_z_eval_examples():
    w = ZWord.of({(1, 1): -1}, 0, 1)
    b = {(1, 1): 1}
    assert z_eval(C2, w, b, 0, (0, 0, 0, 0), F5) == -F5.one
    assert z_eval(C2, ZWord.of({(1, 1): -1}, 1, 1), b, 0, (0, 0, 0, 0), F5) == F5.zero
    assert z_eval(C2, ZWord(), {}, 0, C2.zero(), F5) == F5.one
    assert z_eval(C2, ZWord(d=1), {}, 0, C2.zero(), F5) == F5.zero


def test_term_evaluates_after_the_shift():
    # {z11^-1} x11 u(m) = [-(m11 - 1 + b11)] u(m - e11)
    term = Term(ZWord.of({(1, 1): -1}, 0, 1), XWord.of({(1, 1): 1}))
    b = {(1, 1): 1}
    u = SparseVec.basis(C2, F5, C2.unit((1, 1)))
    out = term_apply(C2, term, b, u)
    assert out == SparseVec.basis(C2, F5, C2.zero()).scale(-F5.one)
    u0 = SparseVec.basis(C2, F5, C2.zero())
    assert not term_apply(C2, term, b, u0)
    assert term_apply(C2, Term(), {}, u) == u


def test_x_z_commutation():
    # X Z = ε Z X on every basis vector, distinct positions commute
    shape = IndexShape("A", 2, 5)
    for m in shape.all_indices():
        u = SparseVec.basis(shape, F5, m)
        for p in shape.positions:
            for q in shape.positions:
                x = Term(ZWord(), XWord.of({p: 1}))
                z = Term(ZWord.of({q: 1}), XWord())
                xz = term_apply(shape, x, {}, term_apply(shape, z, {}, u))
                zx = term_apply(shape, z, {}, term_apply(shape, x, {}, u))
                factor = F5.eps_pow(1) if p == q else F5.one
                assert xz == zx.scale(factor)


def test_left_x_adds_the_pairing():
    t = Term(ZWord.of({(1, 1): 1, (1, 2): -1}, 3, 1), XWord.of({(1, 2): 1}))
    moved = t.left_x(XWord.of({(1, 1): 2}))
    assert moved.brace.offset == 3 + 2
    assert moved.shift.as_dict() == {(1, 1): 2, (1, 2): 1}
