import random

import pytest

from knotss.fields import F2, F3, QQ
from knotss.linalg import Matrix
from knotss.spectral import (FilteredComplex, einf_dims, random_filtered_complex,
                             ss_pages, total_homology_graded)

FIELDS = [F2, F3, QQ]


def test_rejects_bad_differential():
    D = Matrix(QQ, [[0, 0], [1, 0]])
    with pytest.raises(ValueError):
        # target slot violates the (p-r, q-r+1) pattern
        FilteredComplex(QQ, [(2, 1), (1, 5)], D)
    D2 = Matrix(QQ, [[0, 1], [1, 0]])
    with pytest.raises(ValueError):
        FilteredComplex(QQ, [(1, 1), (1, 2)], D2)


def test_two_term_drop_one():
    # x at (2,1) -> y at (1,1): d_1 an isomorphism, E_2 = 0
    D = Matrix(QQ, [[0, 0], [1, 0]])
    C = FilteredComplex(QQ, [(2, 1), (1, 1)], D)
    pages = ss_pages(C, 2)
    assert pages[1].dims() == {(-2, 1): 1, (-1, 1): 1}
    assert pages[1].dr_rank(-2, 1) == 1
    assert pages[2].dims() == {}


def test_two_term_drop_two():
    # x at (2,1) -> y at (0,0): d_1 = 0, d_2 != 0, E_3 = 0
    D = Matrix(QQ, [[0, 0], [1, 0]])
    C = FilteredComplex(QQ, [(2, 1), (0, 0)], D)
    pages = ss_pages(C, 3)
    assert pages[1].dr_rank(-2, 1) == 0
    assert pages[2].dims() == {(-2, 1): 1, (0, 0): 1}
    assert pages[2].dr_rank(-2, 1) == 1
    assert pages[3].dims() == {}
    assert einf_dims(C) == {}
    assert total_homology_graded(C) == {}


def test_free_generator_survives():
    D = Matrix.zeros(F2, 1, 1)
    C = FilteredComplex(F2, [(3, 4)], D)
    pages = ss_pages(C, 4)
    for page in pages:
        assert page.dims() == {(-3, 4): 1}
    assert einf_dims(C) == {(3, 4): 1}
    assert total_homology_graded(C) == {(3, 4): 1}


def test_euler_characteristic_conserved_across_pages():
    # d_r raises total degree q - p by one, so the alternating sum of
    # dimensions by total degree is the same on every page
    rng = random.Random(7)
    for _ in range(10):
        field = rng.choice(FIELDS)
        C = random_filtered_complex(rng, field, max_basis=14)
        pages = ss_pages(C, 3)
        totals = [sum((-1) ** (q + mp) * e["dim"]
                      for (mp, q), e in page.table.items())
                  for page in pages]
        assert len(set(totals)) == 1


def test_einf_matches_total_homology_oracle():
    rng = random.Random(20260823)
    for k in range(25):
        field = FIELDS[k % 3]
        C = random_filtered_complex(rng, field, max_basis=20)
        assert einf_dims(C) == total_homology_graded(C), \
            "oracle mismatch on complex %d" % k
