"""
Closed-form local pro-isomorphic zeta functions of L_{m,n} and the rational
identities they satisfy.

With X_i = q^{A_i} t^{B_i} the local factor is

    sum_w q^{-l(w)} prod_i X_i^{nu_i(w)}
    ------------------------------------------------
    prod_{i=1}^{n-1} (1 - X_i) (1 - X~_0) (1 - X~_n)

summed over the symmetric group W = Sym(n).
"""
from collections import Counter
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from math import comb
from typing import Dict, List, Optional, Tuple
from pydantic import BaseModel, ConfigDict, model_validator
from polyring import LaurentPoly, RationalFnQT, monomial_ratio, rational_equal, series_expand, specialize_prime
from settings import current, report


class RangeError(ValueError):
    """Raised when n lies outside the supported Weyl-group range."""


def _check_mn(m: int, n: int) -> None:
    if m < 1 or n < 2:
        raise ValueError(f"Need m >= 1 and n >= 2, got m={m}, n={n}")


def _check_rank(n: int, upper: Optional[int] = None) -> None:
    cap = current().max_weyl_rank if upper is None else min(upper, current().max_weyl_rank)
    if not 2 <= n <= cap:
        raise RangeError(f"n must lie in 2..{cap} for Weyl-group sums, got n={n}")


@lru_cache(maxsize=None)
def theta1_coefficients(m: int, n: int) -> Tuple[int, ...]:
    """
    C_1..C_n with C_i = sum_{j<=i} (1 + (m-1)(i-j+1)/(n-j+1)) binom(m+j-2,m-1) binom(m+n-j-1,m-1).

    Each summand is rational; the sum is an integer.
    """
    coefficients = []
    plain = Fraction(0)
    weighted = Fraction(0)
    indexed = Fraction(0)
    for i in range(1, n + 1):
        pair = comb(m + i - 2, m - 1) * comb(m + n - i - 1, m - 1)
        plain += pair
        weighted += Fraction(pair, n - i + 1)
        indexed += Fraction(i * pair, n - i + 1)
        value = plain + (m - 1) * ((i + 1) * weighted - indexed)
        if value.denominator != 1:
            raise ArithmeticError(f"C_{i}({m},{n}) = {value} is not an integer")
        coefficients.append(int(value))
    return tuple(coefficients)


def _a_param(m: int, n: int, i: int) -> int:
    central = comb(m + n - 2, m - 1) + comb(m + n - 1, m)
    theta1 = theta1_coefficients(m, n)[i - 1] if i >= 1 else 0
    return i * (n - i) + central * ((m - 1) * n + i) + theta1


def _b_param(m: int, n: int, i: int) -> int:
    return -m * (m - 1) * comb(m + n - 2, m) + (1 + comb(m + n - 2, m - 1)) * ((m - 1) * n + i)


class ZetaParameters(BaseModel):
    """The exponents A_i, B_i (0 <= i <= n), the tilde pairs and the functional-equation pair."""

    model_config = ConfigDict(frozen=True)

    m: int
    n: int
    A: Tuple[int, ...]
    B: Tuple[int, ...]
    Atilde0: int
    Atilden: int
    Btilde0: int
    Btilden: int
    fe_a: int
    fe_b: int

    @model_validator(mode="after")
    def _relations(self):
        m, n = self.m, self.n
        if len(self.A) != n + 1 or len(self.B) != n + 1:
            raise ValueError("A and B must have n+1 entries")
        if (m - 1) * self.Atilde0 != self.A[0] or (m - 1) * self.Btilde0 != self.B[0]:
            raise ValueError(f"(m-1)-relations fail for (m,n)=({m},{n})")
        if m * self.Atilden != self.A[n] or m * self.Btilden != self.B[n]:
            raise ValueError(f"m-relations fail for (m,n)=({m},{n})")
        if self.Btilden != self.Btilde0 + comb(m + n - 2, m):
            raise ValueError(f"B~_n - B~_0 != binom(m+n-2,m) for (m,n)=({m},{n})")
        if any(self.B[i] < 1 for i in range(1, n)) or self.Btilde0 < 3 or self.Btilden < 3:
            raise ValueError(f"t-exponents too small for (m,n)=({m},{n})")
        return self

    def factor_pairs(self) -> List[Tuple[int, int]]:
        """(A_i, B_i) for 1 <= i <= n-1, then (A~_0, B~_0), (A~_n, B~_n)."""
        pairs = [(self.A[i], self.B[i]) for i in range(1, self.n)]
        return pairs + [(self.Atilde0, self.Btilde0), (self.Atilden, self.Btilden)]


@lru_cache(maxsize=4096)
def zeta_parameters(m: int, n: int) -> ZetaParameters:
    """
    Exact parameter set. A_0, B_0, A_n, B_n come from the i-indexed formulas
    (empty theta sum at i=0) and are validated against the tilde values.
    """
    _check_mn(m, n)
    central = comb(m + n - 2, m - 1) + comb(m + n - 1, m)
    atilde0 = n * central
    btilde0 = comb(m + n - 2, m - 1) + n
    atilden = atilde0 + comb(2 * m + n - 2, 2 * m - 1)
    btilden = comb(m + n - 1, m) + n
    fe_a = comb(n, 2) + 2 * n * central + comb(2 * m + n - 2, 2 * m - 1)
    fe_b = (2 * m - 1) * comb(m + n - 2, m) - 2 * n * (1 + comb(m + n - 2, m - 1))
    return ZetaParameters(
        m=m,
        n=n,
        A=tuple(_a_param(m, n, i) for i in range(n + 1)),
        B=tuple(_b_param(m, n, i) for i in range(n + 1)),
        Atilde0=atilde0,
        Atilden=atilden,
        Btilde0=btilde0,
        Btilden=btilden,
        fe_a=fe_a,
        fe_b=fe_b,
    )


def parameter_relations_hold(m: int, n: int) -> bool:
    try:
        params = zeta_parameters(m, n)
    except ValueError as e:
        report(f"Parameter relations fail at ({m},{n}): {e}", "red")
        return False
    return -(params.Btilde0 + params.Btilden) == params.fe_b and \
        comb(n, 2) + params.Atilde0 + params.Atilden == params.fe_a


class WeylElement(BaseModel):
    """A permutation of 1..n (one-line notation), its length and descent vector."""

    model_config = ConfigDict(frozen=True)

    perm: Tuple[int, ...]
    length: int
    descent: Tuple[int, ...]


def _inversions(perm: Tuple[int, ...]) -> int:
    return sum(1 for a in range(len(perm)) for b in range(a + 1, len(perm)) if perm[a] > perm[b])


def _descent(perm: Tuple[int, ...]) -> Tuple[int, ...]:
    """nu_i(w) = 1 iff w^{-1}(i) > w^{-1}(i+1)."""
    inverse = [0] * len(perm)
    for position, value in enumerate(perm):
        inverse[value - 1] = position
    return tuple(1 if inverse[i] > inverse[i + 1] else 0 for i in range(len(perm) - 1))


def weyl_element(perm: Tuple[int, ...]) -> WeylElement:
    perm = tuple(perm)
    if sorted(perm) != list(range(1, len(perm) + 1)):
        raise ValueError(f"{perm} is not a permutation of 1..{len(perm)}")
    return WeylElement(perm=perm, length=_inversions(perm), descent=_descent(perm))


def weyl_elements(n: int) -> List[WeylElement]:
    """All n! elements of Sym(n) in lexicographic order of one-line notation."""
    _check_rank(n)
    return [weyl_element(perm) for perm in permutations(range(1, n + 1))]


@lru_cache(maxsize=None)
def descent_length_table(n: int) -> Dict[Tuple[Tuple[int, ...], int], int]:
    """Number of w in Sym(n) with given (descent vector, length)."""
    _check_rank(n)
    table: Counter = Counter()
    for perm in permutations(range(1, n + 1)):
        table[(_descent(perm), _inversions(perm))] += 1
    return dict(table)


def longest_element(n: int) -> WeylElement:
    return weyl_element(tuple(range(n, 0, -1)))


def compose(w: WeylElement, v: WeylElement) -> WeylElement:
    """(wv)(i) = w(v(i))."""
    return weyl_element(tuple(w.perm[v.perm[i] - 1] for i in range(len(v.perm))))


def weyl_symmetry_check(n: int) -> bool:
    """l(w) + l(w w0) = binom(n,2) and nu_i(w w0) = 1 - nu_i(w) for every w."""
    w0 = longest_element(n)
    for w in weyl_elements(n):
        ww0 = compose(w, w0)
        if w.length + ww0.length != comb(n, 2):
            return False
        if any(a + b != 1 for a, b in zip(w.descent, ww0.descent)):
            return False
    return True


def poincare_polynomial(n: int) -> List[int]:
    """Coefficients of sum_w x^{l(w)}, ascending."""
    coefficients = [0] * (comb(n, 2) + 1)
    for (_, length), count in descent_length_table(n).items():
        coefficients[length] += count
    return coefficients


def q_factorial(n: int) -> List[int]:
    """Coefficients of [n]_x! = prod_{k=1}^n (1 + x + ... + x^{k-1})."""
    product = [1]
    for k in range(1, n + 1):
        nxt = [0] * (len(product) + k - 1)
        for a, c in enumerate(product):
            for b in range(k):
                nxt[a + b] += c
        product = nxt
    return product


def weyl_numerator_terms(m: int, n: int) -> List[Tuple[int, int, int]]:
    """One monomial (coeff, eq, et) = q^{-l(w)} prod X_i^{nu_i(w)} per Weyl element."""
    params = zeta_parameters(m, n)
    terms = []
    for w in weyl_elements(n):
        eq = -w.length + sum(params.A[i + 1] for i, nu in enumerate(w.descent) if nu)
        et = sum(params.B[i + 1] for i, nu in enumerate(w.descent) if nu)
        terms.append((1, eq, et))
    return terms


def _weyl_sum(n: int, exponents: List[Tuple[int, int]]) -> LaurentPoly:
    """sum_w q^{-l(w)} prod_i (q^{a_i} t^{b_i})^{nu_i(w)} with exponents[i-1] = (a_i, b_i)."""
    terms: Dict[Tuple[int, int], int] = {}
    for (descent, length), count in descent_length_table(n).items():
        eq = -length + sum(exponents[i][0] for i, nu in enumerate(descent) if nu)
        et = sum(exponents[i][1] for i, nu in enumerate(descent) if nu)
        terms[(eq, et)] = terms.get((eq, et), 0) + count
    return LaurentPoly(terms)


@lru_cache(maxsize=256)
def local_zeta(m: int, n: int) -> RationalFnQT:
    """The local zeta function of L_{m,n} as a canonical RationalFnQT."""
    _check_mn(m, n)
    _check_rank(n)
    params = zeta_parameters(m, n)
    report(f"Assembling local zeta function for (m,n)=({m},{n})", "blue")
    numerator = _weyl_sum(n, [(params.A[i], params.B[i]) for i in range(1, n)])
    zeta = RationalFnQT(numerator, params.factor_pairs())
    report(f"Local zeta for ({m},{n}) has {len(zeta.numerator)} numerator terms", "green")
    return zeta


def dstar_zeta(m: int) -> RationalFnQT:
    """The n = 2 closed form with numerator 1 + q^{(9m^2+m-2)/2} t^{m^2+2m-1}."""
    if m < 1:
        raise ValueError(f"Need m >= 1, got m={m}")
    top = m * m + 2 * m - 1
    numerator = LaurentPoly({(0, 0): 1, ((9 * m * m + m - 2) // 2, top): 1})
    factors = [((m * (9 * m + 1)) // 2, top), (4 * m + 2, m + 2), (6 * m + 2, m + 3)]
    return RationalFnQT(numerator, factors)


def grenham_display_one(n: int) -> RationalFnQT:
    """Weyl-sum form with X_i = q^{i(2n+2-i)} t^{2i}."""
    exponents = [(i * (2 * n + 2 - i), 2 * i) for i in range(1, n)]
    factors = [(n * (n + 1), n + 1)] + [(i * (2 * n + 2 - i), 2 * i) for i in range(1, n + 1)]
    return RationalFnQT(_weyl_sum(n, exponents), factors)


def grenham_display_two(n: int) -> RationalFnQT:
    """Fully split form 1 / ((1 - q^{n(n+1)} t^{n+1}) prod_i (1 - q^{n+1+i} t^2))."""
    factors = [(n * (n + 1), n + 1)] + [(n + 1 + i, 2) for i in range(1, n + 1)]
    return RationalFnQT(LaurentPoly.one(), factors)


def gl_integral_identity(n: int, exponent_shift: int = 0) -> Tuple[RationalFnQT, RationalFnQT]:
    """
    Both sides of the Weyl-sum/product identity in (q, u), with u stored as t:

        sum_w q^{-l(w)} prod (q^{i(n-i)} u^i)^{nu_i} / prod_{i=1}^n (1 - q^{i(n-i)} u^i)
        = 1 / prod_{i=1}^n (1 - q^{i-1} u)

    `exponent_shift` perturbs the first right-hand q-exponent.
    """
    exponents = [(i * (n - i), i) for i in range(1, n)]
    lhs = RationalFnQT(_weyl_sum(n, exponents), [(i * (n - i), i) for i in range(1, n + 1)])
    rhs_factors = [(i - 1, 1) for i in range(1, n + 1)]
    rhs_factors[0] = (exponent_shift, 1)
    return lhs, RationalFnQT(LaurentPoly.one(), rhs_factors)


def grenham_identity_check(n: int, K: int = 8) -> bool:
    """
    local_zeta(1,n) equals both m = 1 displays, and the GL_n identity holds;
    the first comparison is repeated on power series to t^K.
    """
    _check_rank(n, upper=7)
    zeta = local_zeta(1, n)
    one, two = grenham_display_one(n), grenham_display_two(n)
    if not (rational_equal(zeta, one) and rational_equal(zeta, two)):
        return False
    if series_expand(zeta, K) != series_expand(two, K):
        return False
    lhs, rhs = gl_integral_identity(n)
    return rational_equal(lhs, rhs)


class FunctionalEquationReport(BaseModel):
    """zeta(1/q, 1/t) = sign * q^a t^{-b} * zeta(q, t), i.e. sign * p^{a + b s}."""

    holds: bool
    sign: int
    a: int
    b: int


def functional_equation_check(m: int, n: int) -> FunctionalEquationReport:
    """Invert q and t factor by factor and read off the symmetry monomial."""
    _check_mn(m, n)
    _check_rank(n, upper=8)
    zeta = local_zeta(m, n)
    inverted = zeta.substitute_inverse()
    ratio = None
    if inverted.denominator_factors == zeta.denominator_factors:
        ratio = monomial_ratio(inverted.numerator, zeta.numerator)
    if ratio is None:
        report(f"No symmetry monomial for ({m},{n})", "red")
        return FunctionalEquationReport(holds=False, sign=0, a=0, b=0)
    sign, a, et = ratio
    params = zeta_parameters(m, n)
    holds = sign == (-1) ** (n - 1) and a == params.fe_a and -et == params.fe_b
    color = "green" if holds else "red"
    report(f"Functional equation for ({m},{n}): sign={sign}, a={a}, b={-et}", color)
    return FunctionalEquationReport(holds=holds, sign=sign, a=a, b=-et)


def subgroup_counts(m: int, n: int, p: int, K: int) -> List[int]:
    """a_{p^k} for k <= K at the prime p."""
    values = specialize_prime(local_zeta(m, n), p).expand(K)
    if any(v.denominator != 1 for v in values):
        raise ArithmeticError(f"Non-integral subgroup counts at p={p}: {values}")
    return [int(v) for v in values]
