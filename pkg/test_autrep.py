import random
from fractions import Fraction
from math import comb
import pytest
import sympy
from termcolor import cprint
from autrep import (
    ReductivePoint,
    UnipotentPoint,
    c_block,
    check_automorphism,
    det_embed_reductive_closed_form,
    embed_reductive,
    embed_unipotent,
    factor_element,
    is_automorphism,
    sym_power_rho1,
    sym_power_rho2,
    trilinear_form_preserved,
)
from lattice import build_lattice, multi_indices

GRID = [(1, 2), (1, 3), (2, 2), (2, 3), (3, 2), (3, 3)]
RANDOM_POINTS = 100


def random_rational(rng: random.Random, size: int = 5) -> Fraction:
    return Fraction(rng.randint(-size, size), rng.randint(1, size))


def random_invertible(rng: random.Random, n: int) -> sympy.Matrix:
    while True:
        A = sympy.Matrix(n, n, lambda i, j: sympy.Rational(rng.randint(-3, 3), rng.randint(1, 3)))
        if A.det() != 0:
            return A


def random_reductive(rng: random.Random, n: int) -> ReductivePoint:
    lam = Fraction(0)
    while lam == 0:
        lam = random_rational(rng)
    return ReductivePoint(A=random_invertible(rng, n), lam=lam)


def random_unipotent(rng: random.Random, m: int, n: int) -> UnipotentPoint:
    r1, r2 = comb(m + n - 2, n - 1), comb(m + n - 1, n - 1)
    return UnipotentPoint(
        b={tuple(g): random_rational(rng) for g in multi_indices(n, 2 * m - 1)},
        D1=[[random_rational(rng) for _ in range(n)] for _ in range(r1)],
        D2=[[random_rational(rng) for _ in range(n)] for _ in range(r2)],
    )


def test_rho1_identity_and_diagonal():
    assert sym_power_rho1(sympy.eye(3), 3, 3) == sympy.eye(comb(4, 2))
    rho1 = sym_power_rho1(sympy.diag(2, 3), 2, 2)
    assert rho1 == sympy.diag(sympy.Rational(1, 2), sympy.Rational(1, 3))


def test_rho2_identity_and_natural_representation():
    assert sym_power_rho2(sympy.eye(2), 3, 2) == sympy.eye(4)
    A = sympy.Matrix([[1, 2], [sympy.Rational(-1, 3), 5]])
    assert sym_power_rho2(A, 1, 2) == A


@pytest.mark.parametrize("m", [2, 3])
def test_symmetric_powers_are_multiplicative(m):
    rng = random.Random(7 + m)
    for _ in range(3):
        A, B = random_invertible(rng, 3), random_invertible(rng, 3)
        assert sym_power_rho1(A * B, m, 3) == sym_power_rho1(A, m, 3) * sym_power_rho1(B, m, 3)
        assert sym_power_rho2(A * B, m, 3) == sym_power_rho2(A, m, 3) * sym_power_rho2(B, m, 3)


def test_trilinear_form_is_preserved():
    assert trilinear_form_preserved(sympy.Matrix([[1, 1], [0, 1]]), 2, 2)
    rng = random.Random(11)
    for m, n in [(2, 3), (3, 2)]:
        assert trilinear_form_preserved(random_invertible(rng, n), m, n)


def test_embed_reductive_blocks():
    h = ReductivePoint(A=sympy.eye(3), lam=1)
    assert embed_reductive(h, 2, 3) == sympy.eye(12)

    A = sympy.diag(2, 5)
    M = embed_reductive(ReductivePoint(A=A, lam=3), 1, 2)
    assert M == sympy.diag(3, sympy.Rational(2, 3), sympy.Rational(5, 3), 2, 5)


@pytest.mark.parametrize("m,n", [(1, 2), (2, 2), (2, 3), (3, 2)])
def test_det_closed_form(m, n):
    rng = random.Random(100 * m + n)
    for _ in range(3):
        entries = [random_rational(rng) or Fraction(1) for _ in range(n)]
        h = ReductivePoint(A=sympy.diag(*[sympy.Rational(x.numerator, x.denominator) for x in entries]), lam=random_rational(rng) or 2)
        assert embed_reductive(h, m, n).det() == det_embed_reductive_closed_form(h, m, n)


def test_c_block_pattern():
    u = UnipotentPoint(b={(1, 0): 4, (0, 1): 7}, D1=sympy.zeros(1, 2), D2=sympy.zeros(2, 2))
    assert c_block(u, 1, 2) == sympy.Matrix([[4, 7]])

    rng = random.Random(3)
    u = random_unipotent(rng, 2, 2)
    C = c_block(u, 2, 2)
    E, F = multi_indices(2, 1), multi_indices(2, 2)
    assert C.shape == (2, 3)
    assert C[E.index((1, 0)), F.index((1, 1))] == C[E.index((0, 1)), F.index((2, 0))] == u.b[(2, 1)]


def test_c_block_rejects_wrong_index():
    u = UnipotentPoint(b={(2, 0): 1}, D1=sympy.zeros(1, 2), D2=sympy.zeros(2, 2))
    with pytest.raises(ValueError):
        c_block(u, 1, 2)


def test_zero_unipotent_is_identity():
    assert embed_unipotent(UnipotentPoint.zero(2, 3), 2, 3) == sympy.eye(12)


@pytest.mark.parametrize("m,n", GRID)
def test_random_reductive_points_are_automorphisms(m, n):
    L = build_lattice(m, n)
    rng = random.Random(1000 + 10 * m + n)
    assert is_automorphism(L, sympy.eye(L.d))
    for _ in range(RANDOM_POINTS):
        assert is_automorphism(L, embed_reductive(random_reductive(rng, n), m, n))


@pytest.mark.parametrize("m,n", GRID)
def test_random_unipotent_points_are_automorphisms(m, n):
    L = build_lattice(m, n)
    rng = random.Random(2000 + 10 * m + n)
    for _ in range(RANDOM_POINTS):
        assert is_automorphism(L, embed_unipotent(random_unipotent(rng, m, n), m, n))


@pytest.mark.parametrize("m,n", [(2, 2), (2, 3), (3, 2), (3, 3)])
def test_single_entry_c_perturbation_fails(m, n):
    """Breaking c_(e,f) = b_(e+f) at any shared g destroys the bracket"""
    L = build_lattice(m, n)
    u = random_unipotent(random.Random(5), m, n)
    M = embed_unipotent(u, m, n)
    E, F = multi_indices(n, m - 1), multi_indices(n, m)
    sharing = {}
    for a, e in enumerate(E):
        for c, f in enumerate(F):
            sharing.setdefault(tuple(e + f), []).append((a, c))
    shared = [cells for cells in sharing.values() if len(cells) > 1]
    assert shared
    for cells in shared:
        for a, c in cells:
            perturbed = M.copy()
            perturbed[a, L.r1 + c] += 1
            verdict = check_automorphism(L, perturbed)
            assert not verdict.holds
            assert verdict.reason == "bracket"


def test_singular_matrix_is_reported():
    L = build_lattice(1, 2)
    verdict = check_automorphism(L, sympy.zeros(5, 5))
    assert (verdict.holds, verdict.reason) == (False, "singular")


def test_reductive_point_validation():
    with pytest.raises(ValueError):
        ReductivePoint(A=[[1, 2], [2, 4]], lam=1)
    with pytest.raises(ValueError):
        ReductivePoint(A=sympy.eye(2), lam=0)
    h = ReductivePoint(A=[[1, 2], [0, 1]], lam=Fraction(2, 3))
    assert h.inverse().lam == sympy.Rational(3, 2)


@pytest.mark.parametrize("m,n", [(1, 2), (2, 2), (2, 3)])
def test_factor_element_recovers_both_parts(m, n):
    rng = random.Random(40 + m + n)
    h, u = random_reductive(rng, n), random_unipotent(rng, m, n)
    M = embed_reductive(h, m, n) * embed_unipotent(u, m, n)
    h2, u2 = factor_element(M, m, n)
    assert embed_reductive(h2, m, n) * embed_unipotent(u2, m, n) == M


@pytest.mark.parametrize("m,n", [(2, 2), (2, 3)])
def test_products_refactor(m, n):
    """Products of automorphisms split again into reductive times unipotent"""
    rng = random.Random(90 + m + n)
    L = build_lattice(m, n)
    first = embed_reductive(random_reductive(rng, n), m, n) * embed_unipotent(random_unipotent(rng, m, n), m, n)
    second = embed_reductive(random_reductive(rng, n), m, n) * embed_unipotent(random_unipotent(rng, m, n), m, n)
    product = first * second
    h, u = factor_element(product, m, n)
    assert is_automorphism(L, embed_unipotent(u, m, n))
    assert is_automorphism(L, product)


def test_factor_element_rejects_lower_blocks():
    M = sympy.eye(7)
    M[3, 0] = 1
    with pytest.raises(ValueError):
        factor_element(M, 2, 2)


if __name__ == "__main__":
    cprint("Running automorphism tests...", "yellow")
    pytest.main([__file__, "-v"])
