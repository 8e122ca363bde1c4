import pytest

from app.errors import DomainError
from app.rootdata import (
    alternate_w0_word,
    cartan_matrix,
    default_w0_word,
    height_sum,
    num_positive_roots,
    positive_root_sequence,
    symmetrizer,
    validate_reduced_word,
    weight_shift,
    word_length,
)

TYPES = [("A", 1), ("A", 2), ("A", 3), ("B", 3), ("C", 2), ("C", 3), ("D", 4), ("D", 5)]


@pytest.mark.parametrize("kind,n", TYPES)
def test_cartan_is_symmetrizable(kind, n):
    a = cartan_matrix(kind, n)
    d = symmetrizer(kind, n)
    for i in range(n):
        assert a[i][i] == 2
        for j in range(n):
            assert d[i] * a[i][j] == d[j] * a[j][i]


@pytest.mark.parametrize("kind,n", TYPES)
def test_default_word_is_reduced(kind, n):
    word = default_w0_word(kind, n)
    assert len(word) == num_positive_roots(kind, n)
    assert word_length(kind, n, word) == len(word)
    roots = positive_root_sequence(kind, n, word)
    assert len(set(roots)) == len(roots)
    assert all(min(beta) >= 0 for beta in roots)
    for i in range(n):
        simple = tuple(1 if k == i else 0 for k in range(n))
        assert simple in roots


def test_small_words():
    assert default_w0_word("A", 1) == (1,)
    assert default_w0_word("A", 2) == (1, 2, 1)
    assert default_w0_word("C", 2) == (1, 2, 1, 2)
    assert positive_root_sequence("A", 2, (1, 2, 1)) == [(1, 0), (1, 1), (0, 1)]
    assert positive_root_sequence("C", 2, (1, 2, 1, 2)) == [(1, 0), (2, 1), (1, 1), (0, 1)]
    assert height_sum("C", 2) == 7
    assert height_sum("A", 2) == 4


def test_non_reduced_words_rejected():
    with pytest.raises(DomainError):
        validate_reduced_word("A", 2, (1, 1, 2))
    with pytest.raises(DomainError):
        validate_reduced_word("A", 2, (1, 2))
    with pytest.raises(DomainError):
        validate_reduced_word("C", 2, (1, 2, 2, 1))
    assert validate_reduced_word("A", 2, [2, 1, 2]) == (2, 1, 2)


def test_weight_shift_of_simple_roots():
    a = cartan_matrix("C", 2)
    d = symmetrizer("C", 2)
    assert weight_shift("C", 2, (1, 0)) == (d[0] * a[0][0], d[1] * a[1][0])
    assert weight_shift("C", 2, (0, 1)) == (d[0] * a[0][1], d[1] * a[1][1])


def test_alternate_words():
    assert alternate_w0_word("A", 2) == (2, 1, 2)
    assert alternate_w0_word("C", 2) == (2, 1, 2, 1)
    assert positive_root_sequence("C", 2, (2, 1, 2, 1)) == [(0, 1), (1, 1), (2, 1), (1, 0)]
    assert alternate_w0_word("A", 3) is None
    assert alternate_w0_word("D", 4) is None
