import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from latres.forestry import bad_primes_for_module
from latres.koszul import (
    GeneratedModule,
    LatticeModule,
    SearchConfig,
    betti,
    betti_support,
    koszul_complex,
    member,
)
from latres.lattice import certify_lattice
from latres.linalg import GF, kernel_basis

from oracles import generated_betti_table, koszul_faces, lattice_points

SEG = LatticeModule(certify_lattice([[1, -1]], 2))
XY = GeneratedModule(2, ((1, 0), (0, 1)))
K3 = LatticeModule(certify_lattice([[2, -1, -1], [-1, 2, -1]], 3))
CUBIC = LatticeModule(certify_lattice(kernel_basis([[1, 1, 1, 1], [0, 1, 2, 3]]), 4))

gen_lists = st.lists(st.lists(st.integers(0, 4), min_size=3, max_size=3), min_size=1, max_size=5)


def test_member_examples():
    assert member(SEG, (1, -1))
    assert not member(SEG, (-1, 0))
    assert not member(XY, (0, 0))


def test_koszul_examples():
    assert koszul_complex(SEG, (1, 0)).faces == frozenset({(), (1,), (2,)})
    assert koszul_complex(SEG, (0, 0)).faces == frozenset({()})
    assert koszul_complex(XY, (1, 1)).faces == frozenset({(), (1,), (2,)})
    assert koszul_complex(XY, (0, 0)).is_void


def test_betti_examples():
    assert betti(SEG, 1, (1, 0)) == 1
    assert betti(SEG, 0, (0, 0)) == 1
    assert betti(XY, 1, (1, 1)) == 1


def test_support_examples():
    s = betti_support(SEG)
    assert s.certified
    assert [(e.i, e.lift, e.rank) for e in s.entries] == [(0, (0, 0), 1), (1, (1, 0), 1)]
    s = betti_support(XY)
    assert [(e.i, e.lift) for e in s.entries] == [(0, (0, 1)), (0, (1, 0)), (1, (1, 1))]
    assert betti_support(CUBIC).ranks() == {0: 1, 1: 3, 2: 2}
    assert betti_support(K3).ranks() == {0: 1, 1: 3, 2: 2}


def test_radius_cap_leaves_support_uncertified():
    s = betti_support(CUBIC, config=SearchConfig(radius_cap=2))
    assert not s.certified
    with pytest.raises(ValueError):
        SearchConfig(initial_radius=5, radius_cap=2).resolved(CUBIC.lattice)


def test_koszul_matches_bruteforce_membership():
    pts = lattice_points([(2, -1, -1), (-1, 2, -1)], 12)

    def mem(c):
        return any(all(a <= b for a, b in zip(p, c)) for p in pts)

    for b in [(0, 0, 0), (1, 1, 0), (2, 0, 0), (1, 2, 0), (2, 2, 1), (-1, 3, 0)]:
        assert koszul_complex(K3, b).faces == koszul_faces(mem, b)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from([SEG, K3, CUBIC]), st.data())
def test_koszul_translation_invariant(M, data):
    n = M.n
    b = data.draw(st.lists(st.integers(-4, 4), min_size=n, max_size=n))
    z = data.draw(st.lists(st.integers(-3, 3), min_size=len(M.lattice.basis), max_size=len(M.lattice.basis)))
    ell = M.lattice.combine(z)
    bl = [x + y for x, y in zip(b, ell)]
    assert koszul_complex(M, b, use_cache=False) == koszul_complex(M, bl, use_cache=False)


@settings(max_examples=60, deadline=None)
@given(gen_lists, st.lists(st.integers(-2, 2), min_size=3, max_size=3),
       st.lists(st.integers(-1, 5), min_size=3, max_size=3))
def test_shifted_module(gens, ell, c):
    M = GeneratedModule(3, gens)
    shifted = M.shifted(ell)
    assert koszul_complex(shifted, [x + y for x, y in zip(c, ell)]) == koszul_complex(M, c)


@settings(max_examples=60, deadline=None)
@given(gen_lists, st.lists(st.integers(-1, 5), min_size=3, max_size=3),
       st.lists(st.integers(0, 2), min_size=3, max_size=3))
def test_monotone(gens, a, step):
    M = GeneratedModule(3, gens)
    b = [x + y for x, y in zip(a, step)]
    assert koszul_complex(M, a).faces <= koszul_complex(M, b).faces


@settings(max_examples=40, deadline=None)
@given(gen_lists)
def test_generated_support_matches_oracle(gens):
    M = GeneratedModule(3, gens)
    s = betti_support(M)
    assert sum(e.rank for e in s.entries if e.i == 0) == len(M.gens)
    got = {(e.i, e.lift): e.rank for e in s.entries}
    assert got == generated_betti_table(list(M.gens))


def test_field_independence_off_bad_primes():
    rng = random.Random(3)
    for _ in range(10):
        gens = [tuple(rng.randint(0, 3) for _ in range(3)) for _ in range(rng.randint(1, 5))]
        M = GeneratedModule(3, gens)
        s = betti_support(M)
        bad = bad_primes_for_module(M, [e.lift for e in s.entries])
        for p in (2, 3, 5, 7):
            if p not in bad:
                assert betti_support(M, GF(p)).entries == s.entries
