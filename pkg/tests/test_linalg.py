import random

from hypothesis import given, settings
from hypothesis import strategies as st

from app.cyclotomic import get_field, get_modular_field
from app.linalg import EchelonBasis, block_kernel, dense_nullspace, dense_rank, dense_rref

F5 = get_field(5)
F11 = get_modular_field(5, 11)


def _row(field, values):
    return {k: field.from_int(v) for k, v in enumerate(values) if v % 11}


def _mat(field, rows):
    return [[field.from_int(x) for x in r] for r in rows]


def test_echelon_basics():
    ech = EchelonBasis(F5)
    assert ech.insert(_row(F5, [0, 2, 4])) == 1
    assert ech.insert(_row(F5, [0, 1, 2])) is None
    assert ech.insert(_row(F5, [3, 0, 1])) == 0
    assert ech.dim == 2
    assert ech.pivots() == [0, 1]
    for p, row in ech.sorted_rows():
        assert row[p] == F5.one
        for q in ech.pivots():
            if q != p:
                assert q not in row
    assert ech.contains(_row(F5, [3, 2, 5]))
    assert not ech.contains(_row(F5, [0, 0, 1]))


@settings(max_examples=30, deadline=None)
@given(st.lists(st.lists(st.integers(0, 10), min_size=4, max_size=4), min_size=1, max_size=6), st.randoms())
def test_echelon_is_independent_of_order(rows, rnd):
    first = EchelonBasis(F11)
    for r in rows:
        first.insert(_row(F11, r))
    shuffled = list(rows)
    rnd.shuffle(shuffled)
    second = EchelonBasis(F11)
    for r in shuffled:
        second.insert(_row(F11, r))
    assert first.rows == second.rows
    assert first.dim == dense_rank(_mat(F11, rows), F11)


def test_block_kernel():
    # 0 -> (1,1), 1 -> (2,2), 2 -> (0,1), 3 -> 0
    cols = [
        ("a", _row(F5, [1, 1])),
        ("b", _row(F5, [2, 2])),
        ("c", _row(F5, [0, 1])),
        ("d", {}),
    ]
    kernel = block_kernel(F5, cols)
    assert len(kernel) == 2
    images = dict(cols)
    for combo in kernel:
        acc = {}
        for key, c in combo.items():
            for k, x in images[key].items():
                acc[k] = acc.get(k, F5.zero) + c * x
        assert all(not v for v in acc.values())
    assert {"d": F5.one} in kernel


def test_dense_rref_and_nullspace():
    m = _mat(F5, [[1, 2, 3], [2, 4, 6], [0, 1, 1]])
    A, pivots = dense_rref(m, F5)
    assert pivots == [0, 1]
    assert A[0, 0] == F5.one and A[1, 1] == F5.one
    null = dense_nullspace(m, F5)
    assert len(null) == 1
    for r in m:
        assert not sum((x * y for x, y in zip(r, null[0])), F5.zero)
    assert dense_rank(m, F5) == 2


def test_dense_and_sparse_agree_over_the_cyclotomic_field():
    rng = random.Random(4)
    for _ in range(5):
        rows = [[F5.eps_pow(rng.randrange(5)) * rng.randrange(3) for _ in range(5)] for _ in range(4)]
        ech = EchelonBasis(F5)
        for r in rows:
            ech.insert({k: x for k, x in enumerate(r) if x})
        assert ech.dim == dense_rank(rows, F5)
        assert len(dense_nullspace(rows, F5)) == 5 - ech.dim
