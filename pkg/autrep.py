"""
Elements of the algebraic automorphism group N x| H of L_{m,n} over the rationals.

Matrices act on row vectors from the right: row i of a matrix is the image of
the i-th basis vector. H consists of (A, lambda) acting by
diag(lambda*rho1(A), lambda^-1*rho2(A), A); N consists of block
upper-unitriangular matrices whose X-Y block obeys c_{e,f} = b_{e+f}.
"""
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, prod
from typing import Any, Dict, Optional, Tuple
import sympy
from pydantic import BaseModel, ConfigDict, field_validator
from sympy.polys.matrices import DomainMatrix
from lattice import LieLattice, MultiIndex, bracket, multi_indices, unit_vector
from settings import report


class SingularMatrixError(ValueError):
    """Raised when an invertible matrix was required."""


def _rational(value: Any) -> sympy.Rational:
    if isinstance(value, Fraction):
        return sympy.Rational(value.numerator, value.denominator)
    value = sympy.sympify(value)
    if not value.is_Rational:
        raise ValueError(f"Expected an exact rational, got {value}")
    return value


def _rational_matrix(value: Any) -> sympy.Matrix:
    if isinstance(value, sympy.MatrixBase):
        matrix = sympy.Matrix(value)
    else:
        matrix = sympy.Matrix([[_rational(entry) for entry in row] for row in value])
    if not all(entry.is_Rational for entry in matrix):
        raise ValueError("Matrix entries must be exact rationals")
    return matrix


def _is_singular(matrix: sympy.Matrix) -> bool:
    if matrix.rows != matrix.cols:
        return True
    return DomainMatrix.from_Matrix(matrix).convert_to(sympy.QQ).det() == 0


class ReductivePoint(BaseModel):
    """A point (A, lambda) of GL_n x GL_1."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    A: sympy.Matrix
    lam: sympy.Rational

    @field_validator("A", mode="before")
    @classmethod
    def _check_A(cls, value):
        matrix = _rational_matrix(value)
        if _is_singular(matrix):
            raise SingularMatrixError("A must be an invertible square matrix")
        return matrix

    @field_validator("lam", mode="before")
    @classmethod
    def _check_lam(cls, value):
        lam = _rational(value)
        if lam == 0:
            raise ValueError("lambda must be nonzero")
        return lam

    def inverse(self) -> "ReductivePoint":
        return ReductivePoint(A=self.A.inv(), lam=1 / self.lam)


class UnipotentPoint(BaseModel):
    """Parameters b_g (g of weight 2m-1) and the Z-columns D1 (r1 x n), D2 (r2 x n)."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    b: Dict[Tuple[int, ...], sympy.Rational]
    D1: sympy.Matrix
    D2: sympy.Matrix

    @field_validator("b", mode="before")
    @classmethod
    def _check_b(cls, value):
        return {tuple(g): _rational(c) for g, c in value.items()}

    @field_validator("D1", "D2", mode="before")
    @classmethod
    def _check_blocks(cls, value):
        return _rational_matrix(value)

    @classmethod
    def zero(cls, m: int, n: int) -> "UnipotentPoint":
        r1, r2 = comb(m + n - 2, n - 1), comb(m + n - 1, n - 1)
        return cls(b={}, D1=sympy.zeros(r1, n), D2=sympy.zeros(r2, n))


class AutomorphismCheck(BaseModel):
    """Outcome of `check_automorphism`; `reason` is 'ok', 'singular' or 'bracket'."""

    holds: bool
    reason: str
    pair: Optional[Tuple[int, int]] = None


@lru_cache(maxsize=None)
def _symbols(n: int):
    return sympy.symbols(f"xi1:{n + 1}")


def _sym_power(P: sympy.Matrix, n: int, degree: int) -> sympy.Matrix:
    """
    Matrix of the degree-th symmetric power of the right action given by P
    on the monomial basis multi_indices(n, degree).
    """
    gens = _symbols(n)
    basis = multi_indices(n, degree)
    images = [
        sympy.Poly(sum(P[i, k] * gens[k] for k in range(n)), *gens, domain=sympy.QQ)
        for i in range(n)
    ]
    position = {tuple(e): col for col, e in enumerate(basis)}
    result = sympy.zeros(len(basis), len(basis))
    for row, e in enumerate(basis):
        image = sympy.Poly(1, *gens, domain=sympy.QQ)
        for i, exponent in enumerate(e):
            if exponent:
                image = image * images[i] ** exponent
        for monomial, coeff in image.as_dict().items():
            result[row, position[tuple(monomial)]] = coeff
    return result


def _require_invertible(A: Any, n: int) -> sympy.Matrix:
    A = _rational_matrix(A)
    if A.shape != (n, n):
        raise ValueError(f"A must be {n}x{n}, got {A.shape}")
    if _is_singular(A):
        raise SingularMatrixError("A is singular")
    return A


def sym_power_rho1(A: Any, m: int, n: int) -> sympy.Matrix:
    """
    rho1(A): the (m-1)-th symmetric power of the contragredient action
    xi_k -> xi_k psi*, where psi* has matrix A^{-T}.
    """
    A = _require_invertible(A, n)
    return _sym_power(A.inv().T, n, m - 1)


def sym_power_rho2(A: Any, m: int, n: int) -> sympy.Matrix:
    """
    rho2(A): the m-th symmetric power of the natural action on the Z-layer in
    the scaled basis (prod f_j!)^{-1} z^f.
    """
    A = _require_invertible(A, n)
    raw = _sym_power(A, n, m)
    F = multi_indices(n, m)
    scale = [prod(factorial(x) for x in f) for f in F]
    return sympy.Matrix(len(F), len(F), lambda r, c: raw[r, c] * sympy.Rational(scale[c], scale[r]))


def embed_reductive(h: ReductivePoint, m: int, n: int) -> sympy.Matrix:
    """Block-diagonal d x d matrix diag(lambda*rho1(A), lambda^-1*rho2(A), A)."""
    rho1 = sym_power_rho1(h.A, m, n)
    rho2 = sym_power_rho2(h.A, m, n)
    return sympy.diag(h.lam * rho1, rho2 / h.lam, h.A)


def c_block(u: UnipotentPoint, m: int, n: int) -> sympy.Matrix:
    """The r1 x r2 block with c_{e,f} = b_{e+f}."""
    E, F = multi_indices(n, m - 1), multi_indices(n, m)
    G = set(multi_indices(n, 2 * m - 1))
    stray = [g for g in u.b if g not in G]
    if stray:
        raise ValueError(f"b is indexed by weight-{2 * m - 1} tuples of length {n}, got {stray}")
    return sympy.Matrix(len(E), len(F), lambda a, c: u.b.get(tuple(E[a] + F[c]), sympy.Integer(0)))


def embed_unipotent(u: UnipotentPoint, m: int, n: int) -> sympy.Matrix:
    """Block upper-unitriangular matrix [[I, C, D1], [0, I, D2], [0, 0, I]]."""
    C = c_block(u, m, n)
    r1, r2 = C.shape
    if u.D1.shape != (r1, n) or u.D2.shape != (r2, n):
        raise ValueError(f"D1 must be {r1}x{n} and D2 {r2}x{n}, got {u.D1.shape}, {u.D2.shape}")
    d = r1 + r2 + n
    M = sympy.eye(d)
    M[0:r1, r1:r1 + r2] = C
    M[0:r1, r1 + r2:d] = u.D1
    M[r1:r1 + r2, r1 + r2:d] = u.D2
    return M


def _fraction(entry) -> Fraction:
    entry = sympy.sympify(entry)
    if not entry.is_Rational:
        raise ValueError(f"Expected an exact rational entry, got {entry}")
    return Fraction(int(entry.p), int(entry.q))


def check_automorphism(L: LieLattice, M: Any) -> AutomorphismCheck:
    """
    Check bracket(uM, vM) == bracket(u, v) M on all basis pairs.

    Basis pairs suffice by bilinearity. A singular M is reported with
    reason 'singular' rather than as a bracket failure.
    """
    M = _rational_matrix(M)
    if M.shape != (L.d, L.d):
        raise ValueError(f"M must be {L.d}x{L.d}, got {M.shape}")
    if _is_singular(M):
        return AutomorphismCheck(holds=False, reason="singular")

    rows = []
    for r in range(L.d):
        row = {}
        for c in range(L.d):
            entry = M[r, c]
            if entry != 0:
                row[c] = _fraction(entry)
        rows.append(row)

    for a in range(L.d):
        for b in range(a + 1, L.d):
            lhs = bracket(L, rows[a], rows[b])
            rhs: Dict[int, Fraction] = {}
            for k, coeff in bracket(L, {a: 1}, {b: 1}).items():
                for c, entry in rows[k].items():
                    rhs[c] = rhs.get(c, 0) + coeff * entry
            rhs = {c: v for c, v in rhs.items() if v != 0}
            if lhs != rhs:
                return AutomorphismCheck(holds=False, reason="bracket", pair=(a, b))
    return AutomorphismCheck(holds=True, reason="ok")


def is_automorphism(L: LieLattice, M: Any) -> bool:
    verdict = check_automorphism(L, M)
    if not verdict.holds:
        report(f"Not an automorphism of L_({L.m},{L.n}): {verdict.reason} {verdict.pair or ''}", "yellow")
    return verdict.holds


def det_embed_reductive_closed_form(h: ReductivePoint, m: int, n: int) -> sympy.Rational:
    """lambda^{-binom(m+n-2,n-2)} * det(A)^{1+binom(m+n-2,n-1)}."""
    return h.lam ** (-comb(m + n - 2, n - 2)) * h.A.det() ** (1 + comb(m + n - 2, n - 1))


def trilinear_form_preserved(A: Any, m: int, n: int) -> bool:
    """
    Evaluate Phi(xi^e, xi_k, (prod f!)^{-1} z^f) = [e + unit_k == f] on all
    basis triples after acting by (rho1(A), A^{-T}, rho2(A)) and compare.
    """
    A = _require_invertible(A, n)
    rho1, rho2, P = sym_power_rho1(A, m, n), sym_power_rho2(A, m, n), A.inv().T
    E, F = multi_indices(n, m - 1), multi_indices(n, m)
    f_position = {tuple(f): c for c, f in enumerate(F)}
    units = [MultiIndex(unit_vector(n, k)) for k in range(1, n + 1)]
    for a, e in enumerate(E):
        for k in range(n):
            for c, f in enumerate(F):
                value = sympy.Integer(0)
                for a2, e2 in enumerate(E):
                    if rho1[a, a2] == 0:
                        continue
                    for l in range(n):
                        if P[k, l] == 0:
                            continue
                        value += rho1[a, a2] * P[k, l] * rho2[c, f_position[tuple(e2 + units[l])]]
                expected = 1 if tuple(e + units[k]) == tuple(f) else 0
                if value != expected:
                    return False
    return True


def factor_element(M: Any, m: int, n: int) -> Tuple[ReductivePoint, UnipotentPoint]:
    """
    Split M = embed_reductive(h) * embed_unipotent(u).

    Raises:
        ValueError: if M is not of that shape
    """
    M = _rational_matrix(M)
    r1, r2 = comb(m + n - 2, n - 1), comb(m + n - 1, n - 1)
    d = r1 + r2 + n
    if M.shape != (d, d):
        raise ValueError(f"M must be {d}x{d}, got {M.shape}")

    A = M[r1 + r2:d, r1 + r2:d]
    rho1 = sym_power_rho1(A, m, n)
    pivot = next((i, j) for i in range(r1) for j in range(r1) if rho1[i, j] != 0)
    lam = M[pivot] / rho1[pivot]
    if lam == 0:
        raise ValueError("M has a vanishing scalar block")
    h = ReductivePoint(A=A, lam=lam)
    U = embed_reductive(h.inverse(), m, n) * M

    def block(r0, r_end, c0, c_end):
        return U[r0:r_end, c0:c_end]

    if block(0, r1, 0, r1) != sympy.eye(r1) or block(r1, r1 + r2, r1, r1 + r2) != sympy.eye(r2) \
            or block(r1 + r2, d, r1 + r2, d) != sympy.eye(n):
        raise ValueError("M is not a reductive element times a unitriangular element")
    if any(block(r1, d, 0, r1)) or any(block(r1 + r2, d, r1, r1 + r2)):
        raise ValueError("M has nonzero entries below the block diagonal")

    E, F = multi_indices(n, m - 1), multi_indices(n, m)
    b: Dict[Tuple[int, ...], sympy.Rational] = {}
    for a, e in enumerate(E):
        for c, f in enumerate(F):
            g = tuple(e + f)
            entry = U[a, r1 + c]
            if g in b and b[g] != entry:
                raise ValueError(f"C-block breaks c_(e,f) = b_(e+f) at g={g}")
            b[g] = entry
    u = UnipotentPoint(b=b, D1=block(0, r1, r1 + r2, d), D2=block(r1, r1 + r2, r1 + r2, d))
    return h, u
