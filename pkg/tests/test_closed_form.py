import random

import pytest

from app.closed_form import closed_form_e, closed_form_f
from app.errors import UnsupportedConfiguration
from app.schnizer import ModuleSpec, build_generators, lowest_index


def _agree(spec, ops, letter, indices):
    gens = build_generators(spec)
    for m in indices:
        u = gens.basis(m)
        for i, op in ops.items():
            assert op.apply(u) == gens.apply(f"{letter}{i}", u), (letter, i, m)


@pytest.mark.parametrize("lam", [(0, 0), (2, 1), (4, 3)])
def test_a2_routes_agree_everywhere(lam):
    spec = ModuleSpec("A", 2, 5, lam)
    indices = list(spec.shape.all_indices())
    _agree(spec, closed_form_e(spec), "e", indices)
    _agree(spec, closed_form_f(spec), "f", indices)


@pytest.mark.parametrize("lam", [(3, 1), (0, 4)])
def test_c2_routes_agree_everywhere(lam):
    spec = ModuleSpec("C", 2, 5, lam)
    indices = list(spec.shape.all_indices())
    _agree(spec, closed_form_e(spec), "e", indices)
    _agree(spec, closed_form_f(spec), "f", indices)


@pytest.mark.parametrize("kind,n", [("C", 3), ("B", 3), ("D", 4), ("D", 5)])
def test_e_routes_agree_on_samples(kind, n):
    rng = random.Random(5)
    spec = ModuleSpec(kind, n, 5, tuple(rng.randrange(5) for _ in range(n)))
    indices = [tuple(rng.randrange(5) for _ in range(spec.shape.N)) for _ in range(200)]
    _agree(spec, closed_form_e(spec), "e", indices)


def test_c2_e2_example():
    spec = ModuleSpec("C", 2, 5, (3, 1))
    e2 = closed_form_e(spec)[2]
    u0 = build_generators(spec).basis(spec.shape.zero())
    assert not e2.apply(u0)


@pytest.mark.parametrize("lam", [(0, 0), (1, 1), (3, 2), (4, 4)])
def test_f_kills_the_lowest_vector(lam):
    spec = ModuleSpec("C", 2, 5, lam)
    gens = build_generators(spec)
    low = gens.basis(lowest_index("C", lam, 5))
    for j, op in closed_form_f(spec).items():
        assert not op.apply(low), j


def test_u0_never_occurs_at_top_weight():
    spec = ModuleSpec("C", 2, 5, (4, 4))
    ops = closed_form_f(spec)
    gens = build_generators(spec)
    zero = spec.shape.zero()
    for m in spec.shape.all_indices():
        u = gens.basis(m)
        for op in ops.values():
            assert zero not in op.apply(u)


def test_unsupported_routes():
    with pytest.raises(UnsupportedConfiguration):
        closed_form_f(ModuleSpec("B", 3, 5, (0, 0, 0)))
    with pytest.raises(UnsupportedConfiguration):
        closed_form_f(ModuleSpec("D", 4, 5, (0, 0, 0, 0)))
    mutated = ModuleSpec("C", 2, 5, (1, 1)).mutated_b((1, 1))
    with pytest.raises(UnsupportedConfiguration):
        closed_form_e(mutated)
