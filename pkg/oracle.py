"""
Independent re-derivation of the local zeta functions as a sum over Weyl
cones of cocharacters xi = prod xi_i^{e_i}, with every weight computed from
valuations of the torus element (A, lambda) = (diag(a_1..a_n), lambda):

    sum_w q^{-l(w)} sum_{e in cone(w)} q^{<beta0, e> + log theta1 + log theta2} t^{v(det)}

Nothing here reads the closed-form exponents A_i, B_i.
"""
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache
from math import comb
from typing import Callable, Dict, List, NamedTuple, Sequence, Tuple
from lattice import multi_indices
from polyring import LaurentPoly, TruncatedSeries, series_expand
from settings import current, report
from zetacore import descent_length_table, local_zeta, theta1_coefficients

ConePoint = Tuple[int, ...]


class TermBudgetError(ValueError):
    """Raised when a cone enumeration would exceed the configured budget."""


class TorusValuations(NamedTuple):
    va: Tuple[int, ...]
    vlambda: int


def _check_point(n: int, e: Sequence[int]) -> ConePoint:
    e = tuple(int(x) for x in e)
    if len(e) != n + 1 or any(x < 0 for x in e):
        raise ValueError(f"A cone point for n={n} has {n + 1} non-negative entries, got {e}")
    return e


def in_weyl_cone(e: ConePoint, descent: Sequence[int]) -> bool:
    """e_i >= nu_i(w) for 1 <= i <= n-1; e_0 and e_n are free."""
    return all(e[i + 1] >= nu for i, nu in enumerate(descent))


def torus_valuations(m: int, n: int, e: Sequence[int]) -> TorusValuations:
    """
    v(a_i) = (m-1) sum_{l<i} e_l + m sum_{l=i}^{n-1} e_l + e_0 + e_n and
    v(lambda) = m(m-1) sum_{l=1}^{n-1} e_l + m e_0 + (m-1) e_n.
    """
    e = _check_point(n, e)
    inner = e[1:n]
    va = tuple(
        (m - 1) * sum(inner[:i - 1]) + m * sum(inner[i - 1:]) + e[0] + e[n]
        for i in range(1, n + 1)
    )
    vlambda = m * (m - 1) * sum(inner) + m * e[0] + (m - 1) * e[n]
    return TorusValuations(va=va, vlambda=vlambda)


def valuations_monotone(valuations: TorusValuations) -> bool:
    """|a_1| <= ... <= |a_n|, i.e. the valuations do not increase."""
    va = valuations.va
    return all(va[i] >= va[i + 1] for i in range(len(va) - 1))


@lru_cache(maxsize=None)
def det_coefficients(m: int, n: int) -> Tuple[int, ...]:
    """Coefficient of e_0, e_1, ..., e_n in v(det)."""
    inner = [
        -m * (m - 1) * comb(m + n - 2, m) + (1 + comb(m + n - 2, m - 1)) * ((m - 1) * n + i)
        for i in range(1, n)
    ]
    first = comb(m + n - 2, m - 1) + n
    last = comb(m + n - 1, m) + n
    return (first, *inner, last)


def det_valuation(m: int, n: int, e: Sequence[int]) -> int:
    """
    v(det) from the coefficient formulas, recomputed as
    -binom(m+n-2,n-2) v(lambda) + (1 + binom(m+n-2,n-1)) sum v(a_i).
    """
    e = _check_point(n, e)
    by_coefficients = sum(c * x for c, x in zip(det_coefficients(m, n), e))
    valuations = torus_valuations(m, n, e)
    by_torus = -comb(m + n - 2, n - 2) * valuations.vlambda + (1 + comb(m + n - 2, n - 1)) * sum(valuations.va)
    if by_coefficients != by_torus:
        raise ArithmeticError(f"det valuation mismatch at {e}: {by_coefficients} != {by_torus}")
    return by_coefficients


@lru_cache(maxsize=None)
def _dominance(m: int, n: int) -> Tuple[Tuple[Tuple[int, ...], ...], ...]:
    """For each g in G, the f in F with f <= g componentwise."""
    F = multi_indices(n, m)
    G = multi_indices(n, 2 * m - 1)
    return tuple(tuple(tuple(f) for f in F if f.dominated_by(g)) for g in G)


def _f_value(f: Tuple[int, ...], valuations: TorusValuations) -> int:
    """v(lambda^{-1} prod a_i^{f_i})."""
    return -valuations.vlambda + sum(x * v for x, v in zip(f, valuations.va))


def theta1_direct(m: int, n: int, e: Sequence[int]) -> int:
    """
    log_q theta1 = sum_{g in G} min { v(lambda^{-1} prod a_i^{f_i}) : f in F, f <= g },
    by enumeration over all of F and G.
    """
    valuations = torus_valuations(m, n, e)
    return sum(min(_f_value(f, valuations) for f in below) for below in _dominance(m, n))


def theta1_closed(m: int, n: int, e: Sequence[int]) -> int:
    """sum_{i=1}^{n-1} C_i(m,n) e_i + binom(2m+n-2, n-1) e_n."""
    e = _check_point(n, e)
    coefficients = theta1_coefficients(m, n)
    return sum(coefficients[i - 1] * e[i] for i in range(1, n)) + comb(2 * m + n - 2, n - 1) * e[n]


def theta2(m: int, n: int, e: Sequence[int]) -> int:
    """log_q theta2 = (r1 + r2) sum v(a_i), checked against its e-coefficient form."""
    e = _check_point(n, e)
    central = comb(m + n - 2, m - 1) + comb(m + n - 1, m)
    by_torus = central * sum(torus_valuations(m, n, e).va)
    by_coefficients = central * (
        sum(((m - 1) * n + l) * e[l] for l in range(1, n)) + n * (e[0] + e[n])
    )
    if by_torus != by_coefficients:
        raise ArithmeticError(f"theta2 mismatch at {e}: {by_torus} != {by_coefficients}")
    return by_torus


def r_sum(m: int, n: int) -> int:
    """The e_0-coefficient of log theta1 before simplification; it vanishes."""
    total = 0
    for i in range(1, n + 1):
        total += comb(m + i - 2, i - 1) * comb(m + n - i - 1, n - i)
        total += sum(comb(m + k - 2, k - 1) * comb(m + n - k - 1, n - k + 1) for k in range(1, i + 1))
    return total - m * comb(2 * m + n - 2, n - 1)


def lex_minimal_attains(m: int, n: int, e: Sequence[int]) -> bool:
    """For every g the minimum over f <= g is attained at the lexicographically smallest f."""
    valuations = torus_valuations(m, n, e)
    for below in _dominance(m, n):
        best = min(_f_value(f, valuations) for f in below)
        if _f_value(min(below), valuations) != best:
            return False
    return True


def theta1_counting_check(m: int, n: int) -> bool:
    """
    |F(k)| = binom(m+n-k-1, n-k); N(n,m) = sum_{f in F} f_1 = binom(m+n-1, n); and
    each f in F(k) is the lexicographically smallest f <= g for exactly
    binom(m+k-2, k-1) of the g in G.
    """
    F = [tuple(f) for f in multi_indices(n, m)]

    def block(f):
        return next(k for k, x in enumerate(f, start=1) if x > 0)

    for k in range(1, n + 1):
        if sum(1 for f in F if block(f) == k) != comb(m + n - k - 1, n - k):
            return False
    if sum(f[0] for f in F) != comb(m + n - 1, n):
        return False
    owners: Dict[Tuple[int, ...], int] = {}
    for below in _dominance(m, n):
        owner = min(below)
        owners[owner] = owners.get(owner, 0) + 1
    return all(owners.get(f, 0) == comb(m + block(f) - 2, block(f) - 1) for f in F)


def _count_points(coefficients: Sequence[int], K: int) -> int:
    """Number of non-negative integer vectors e with sum c_i e_i <= K."""
    ways = [1] + [0] * K
    for c in coefficients:
        for total in range(c, K + 1):
            ways[total] += ways[total - c]
    return sum(ways)


def enumerate_cone_points(m: int, n: int, K: int) -> List[ConePoint]:
    """All e >= 0 with v(det) <= K, by a bounded product with pruning."""
    coefficients = det_coefficients(m, n)
    if min(coefficients) < 1:
        raise ArithmeticError(f"Non-positive det coefficient for ({m},{n}): {coefficients}")
    budget = current().term_budget
    expected = _count_points(coefficients, K)
    if expected > budget:
        raise TermBudgetError(f"{expected} cone points at depth {K} exceed the budget of {budget}")

    points: List[ConePoint] = []

    def extend(prefix: Tuple[int, ...], remaining: int):
        index = len(prefix)
        if index == n + 1:
            points.append(prefix)
            return
        c = coefficients[index]
        for x in range(remaining // c + 1):
            extend(prefix + (x,), remaining - c * x)

    extend((), K)
    return points


def _point_monomial(m: int, n: int, e: ConePoint, theta1: Callable) -> Tuple[int, int]:
    beta0 = sum(i * (n - i) * e[i] for i in range(1, n))
    return beta0 + theta1(m, n, e) + theta2(m, n, e), det_valuation(m, n, e)


def _cone_sum(args) -> Tuple[Tuple[int, ...], Dict[Tuple[int, int], int]]:
    descent, monomials = args
    total: Dict[Tuple[int, int], int] = {}
    for e, key in monomials:
        if in_weyl_cone(e, descent):
            total[key] = total.get(key, 0) + 1
    return descent, total


def cone_series(m: int, n: int, K: int, theta1: Callable = theta1_direct) -> TruncatedSeries:
    """
    The cone sum truncated at t-degree K.

    Args:
        m, n: lattice parameters, m >= 1 and 2 <= n <= 6
        K: truncation degree
        theta1: the log theta1 evaluator (theta1_direct unless testing)
    """
    if m < 1 or not 2 <= n <= 6 or K < 0:
        raise ValueError(f"cone_series needs m >= 1, 2 <= n <= 6, K >= 0; got ({m},{n},{K})")
    report(f"Enumerating cone points for (m,n)=({m},{n}) to depth {K}", "blue")
    points = enumerate_cone_points(m, n, K)
    monomials = [(e, _point_monomial(m, n, e, theta1)) for e in points]
    report(f"{len(points)} cone points evaluated", "cyan")

    table = descent_length_table(n)
    descents = sorted({descent for descent, _ in table})
    jobs = [(descent, monomials) for descent in descents]
    workers = current().workers
    if workers > 0 and theta1 is theta1_direct:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            sums = dict(executor.map(_cone_sum, jobs))
    else:
        sums = dict(map(_cone_sum, jobs))

    rows: List[Dict[int, int]] = [dict() for _ in range(K + 1)]
    for (descent, length), count in table.items():
        for (eq, et), multiplicity in sums[descent].items():
            rows[et][eq - length] = rows[et].get(eq - length, 0) + count * multiplicity
    coeffs = tuple(LaurentPoly({(eq, 0): c for eq, c in row.items()}) for row in rows)
    return TruncatedSeries(max_t_degree=K, coeffs=coeffs)


def oracle_compare(m: int, n: int, K: int, theta1: Callable = theta1_direct) -> bool:
    """cone_series(m,n,K) == series_expand(local_zeta(m,n), K), coefficient by coefficient."""
    expected = series_expand(local_zeta(m, n), K)
    actual = cone_series(m, n, K, theta1=theta1)
    agree = actual == expected
    report(f"Oracle comparison ({m},{n},{K}): {'agree' if agree else 'DISAGREE'}", "green" if agree else "red")
    return agree
