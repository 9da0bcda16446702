"""
Abscissae of convergence, the exceptional set C, the polynomials f_m, g_m,
h_m and the scans behind the plot of abscissae against (m, n).
"""
import csv
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from math import comb, factorial, prod
from typing import Dict, List, Literal, Optional, Sequence, TextIO, Tuple
import mpmath
import sympy
from pydantic import BaseModel, ConfigDict, field_validator
from settings import current, report
from zetacore import descent_length_table, local_zeta, zeta_parameters

CSV_HEADER = ["m", "n", "alpha_num", "alpha_den", "alpha_decimal", "regime"]
LIMIT_VALUES = {n: 2 * n + 2 ** (n - 1) for n in range(2, 8)}


def decimal_string(value: Fraction, digits: Optional[int] = None) -> str:
    """Decimal rendering with a fixed number of significant digits."""
    digits = digits or current().decimal_digits
    with mpmath.workdps(digits + 5):
        text = mpmath.nstr(mpmath.mpf(value.numerator) / value.denominator, digits,
                           min_fixed=-mpmath.inf, max_fixed=mpmath.inf)
    return text[:-2] if text.endswith(".0") else text


class AbscissaReport(BaseModel):
    """alpha(m,n), the branch that produced it, and beta(m,n)."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    m: int
    n: int
    alpha: Fraction
    regime: Literal["M1", "C0", "CN"]
    beta: Fraction
    in_exceptional_set: bool

    def to_json_obj(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "alpha": [self.alpha.numerator, self.alpha.denominator],
            "alpha_decimal": decimal_string(self.alpha),
            "regime": self.regime,
            "beta": [self.beta.numerator, self.beta.denominator],
            "in_exceptional_set": self.in_exceptional_set,
        }


class IntPolynomial(BaseModel):
    """Integer polynomial in one variable, coefficients in ascending degree."""

    model_config = ConfigDict(frozen=True)

    coefficients: Tuple[int, ...]

    @field_validator("coefficients")
    @classmethod
    def _strip(cls, value):
        value = list(value)
        while value and value[-1] == 0:
            value.pop()
        return tuple(value)

    @classmethod
    def from_sympy(cls, expression, variable) -> "IntPolynomial":
        poly = sympy.Poly(sympy.expand(expression), variable)
        descending = poly.all_coeffs()
        if not all(c.is_Integer for c in descending):
            raise ArithmeticError(f"Non-integral coefficients in {expression}")
        return cls(coefficients=tuple(int(c) for c in reversed(descending)))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x):
        value = 0
        for c in reversed(self.coefficients):
            value = value * x + c
        return value

    def as_expr(self, variable) -> sympy.Expr:
        return sum((c * variable ** k for k, c in enumerate(self.coefficients)), sympy.Integer(0))

    def coefficient(self, k: int) -> int:
        return self.coefficients[k] if k < len(self.coefficients) else 0

    def nonnegative(self) -> bool:
        return all(c >= 0 for c in self.coefficients)

    def to_text(self, variable: str = "t") -> str:
        pieces = []
        for k in range(len(self.coefficients) - 1, -1, -1):
            c = self.coefficients[k]
            if c == 0:
                continue
            power = "" if k == 0 else (variable if k == 1 else f"{variable}^{k}")
            magnitude = abs(c)
            body = str(magnitude) if not power else (power if magnitude == 1 else f"{magnitude}{power}")
            sign = "-" if c < 0 else "+"
            pieces.append(f"{sign} {body}" if pieces else ("-" + body if c < 0 else body))
        return " ".join(pieces) or "0"


def in_explicit_set(m: int, n: int) -> bool:
    """({2,3} x N_{>=3}) u ({4} x {4..38}) u ({5} x {5..9})."""
    return (m in (2, 3) and n >= 3) or (m == 4 and 4 <= n <= 38) or (m == 5 and 5 <= n <= 9)


def tilde_ratios(m: int, n: int) -> Tuple[Fraction, Fraction]:
    """(A~_0 + 1)/B~_0 and (A~_n + 1)/B~_n."""
    params = zeta_parameters(m, n)
    return Fraction(params.Atilde0 + 1, params.Btilde0), Fraction(params.Atilden + 1, params.Btilden)


def in_exceptional_set(m: int, n: int) -> bool:
    """Decided by the inequality (A~_0+1)/B~_0 > (A~_n+1)/B~_n, for m >= 2."""
    if m < 2:
        return False
    first, last = tilde_ratios(m, n)
    return first > last


def beta(m: int, n: int) -> Fraction:
    """max_{1<=i<=n-1} A_i / B_i."""
    params = zeta_parameters(m, n)
    return max(Fraction(params.A[i], params.B[i]) for i in range(1, n))


def abscissa(m: int, n: int) -> AbscissaReport:
    """Abscissa of convergence, cross-checking the C test against the explicit set."""
    params = zeta_parameters(m, n)
    if m == 1:
        alpha = Fraction(params.A[1] + 1, params.B[1])
        regime, exceptional = "M1", False
    else:
        exceptional = in_exceptional_set(m, n)
        if exceptional != in_explicit_set(m, n):
            raise ArithmeticError(f"Exceptional-set tests disagree at ({m},{n})")
        first, last = tilde_ratios(m, n)
        alpha, regime = (first, "C0") if exceptional else (last, "CN")
    bound = beta(m, n)
    if not bound < alpha:
        raise ArithmeticError(f"beta={bound} is not below alpha={alpha} at ({m},{n})")
    return AbscissaReport(m=m, n=n, alpha=alpha, regime=regime, beta=bound, in_exceptional_set=exceptional)


def convexity_check(m: int, n: int) -> bool:
    """
    With x_i = A_i - A_{i-1}, y_i = B_i - B_{i-1}: y_i is constant, x_1 > 0,
    x_i matches its closed form, d_i = x_i - x_{i-1} = -2 + binom(m+i-3,m-2) binom(m+n-i,m-1) >= 0
    (strict for i < n, and for all i once m >= 3, where also d_i >= i(n-i+2) - 2), and the
    interior ratios (A_i+1)/B_i stay strictly below the larger tilde ratio.
    """
    if m < 2:
        raise ValueError(f"convexity_check needs m >= 2, got m={m}")
    params = zeta_parameters(m, n)
    A, B = params.A, params.B
    step = 1 + comb(m + n - 2, m - 1)
    if any(B[i] - B[i - 1] != step for i in range(1, n + 1)):
        return False

    x = [None] + [A[i] - A[i - 1] for i in range(1, n + 1)]
    base = comb(m + n - 2, m - 1) + comb(m + n - 1, m) + n + 1
    running = Fraction(0)
    for i in range(1, n + 1):
        pair = comb(m + i - 2, m - 1) * comb(m + n - i - 1, m - 1)
        running += Fraction((m - 1) * pair, n - i + 1)
        if x[i] != base - 2 * i + pair + running:
            return False
    if x[1] <= 0:
        return False
    for i in range(2, n + 1):
        d = x[i] - x[i - 1]
        if d != -2 + comb(m + i - 3, m - 2) * comb(m + n - i, m - 1):
            return False
        if d < 0 or (d == 0 and (i < n or m >= 3)):
            return False
        if m >= 3 and d < i * (n - i + 2) - 2:
            return False

    interior = max(Fraction(A[i] + 1, B[i]) for i in range(1, n))
    return interior < max(tilde_ratios(m, n))


def _t():
    return sympy.Symbol("t")


def _product(terms) -> sympy.Expr:
    return sympy.Mul(*terms) if terms else sympy.Integer(1)


def f_m_polynomial(m: int) -> IntPolynomial:
    """
    f_m = m t prod_{i=m-1}^{2m-2}(t+i) (prod_{i=1}^{m-2}(t+i) + (m-1)!)
          - (t-1) prod_{i=m+1}^{2m-1} i (t^2 (t+2m-1) prod_{i=1}^{m-2}(t+i) + m!).
    """
    if m < 2:
        raise ValueError(f"f_m is defined for m >= 2, got m={m}")
    t = _t()
    low = _product([t + i for i in range(1, m - 1)])
    high = _product([t + i for i in range(m - 1, 2 * m - 1)])
    constant = prod(range(m + 1, 2 * m))
    expression = m * t * high * (low + factorial(m - 1)) - (t - 1) * constant * (t ** 2 * (t + 2 * m - 1) * low + factorial(m))
    return IntPolynomial.from_sympy(expression, t)


def g_m_polynomial(m: int) -> IntPolynomial:
    """g_m = m! t prod_{i=m-1}^{2m-2}(t+i) - (2m-1)! (t-1)."""
    t = _t()
    high = _product([t + i for i in range(m - 1, 2 * m - 1)])
    return IntPolynomial.from_sympy(factorial(m) * t * high - factorial(2 * m - 1) * (t - 1), t)


def h_m_polynomial(m: int) -> IntPolynomial:
    """h_m = m prod_{i=m-1}^{2m-2}(t+i) - (2m-1)!/m! (t-1) t (t+2m-1)."""
    t = _t()
    high = _product([t + i for i in range(m - 1, 2 * m - 1)])
    return IntPolynomial.from_sympy(m * high - (factorial(2 * m - 1) // factorial(m)) * (t - 1) * t * (t + 2 * m - 1), t)


def F_value(m: int, n: int) -> Fraction:
    """F(m,n) from its binomial definition."""
    first = Fraction(comb(2 * m + n - 2, 2 * m - 1), comb(m + n - 2, m))
    b = comb(m + n - 2, m - 1)
    second = (b * (Fraction(n * (n - 1), m) + 2 * n) + 1) / (b + n)
    return first - second


def F_denominator(m: int, n: int) -> int:
    """(2m-1)!/(m-1)! (n-1) n (prod_{i=1}^{m-2}(n+i) + (m-1)!)."""
    return factorial(2 * m - 1) // factorial(m - 1) * (n - 1) * n * (prod(n + i for i in range(1, m - 1)) + factorial(m - 1))


def fm_consistency(m: int, n_max: int) -> bool:
    """
    For 2 <= n <= n_max: f_m(n) != 0, F(m,n) = f_m(n) / F_denominator(m,n), and
    f_m(n) < 0 exactly when (m,n) lies in C (by the inequality and by the explicit set).
    """
    if m < 2:
        raise ValueError(f"fm_consistency needs m >= 2, got m={m}")
    f = f_m_polynomial(m)
    for n in range(2, n_max + 1):
        value = f(n)
        if value == 0:
            return False
        if F_value(m, n) != Fraction(value, F_denominator(m, n)):
            return False
        negative = value < 0
        if negative != in_exceptional_set(m, n) or negative != in_explicit_set(m, n):
            return False
    return True


def gm_hm_check(m: int) -> bool:
    """
    f_m = g_m + prod_{i=0}^{m-2}(t+i) h_m; for m >= 7 also f_m >= 0 coefficientwise,
    g_m >= 0 with t-coefficient (m^2-3m+1)(2m-2)!; for m >= 30 also h_m >= 0.
    """
    if m < 2:
        raise ValueError(f"gm_hm_check needs m >= 2, got m={m}")
    t = _t()
    f, g, h = f_m_polynomial(m), g_m_polynomial(m), h_m_polynomial(m)
    rebuilt = IntPolynomial.from_sympy(g.as_expr(t) + _product([t + i for i in range(0, m - 1)]) * h.as_expr(t), t)
    if rebuilt != f:
        return False
    if m >= 7:
        if not f.nonnegative() or not g.nonnegative():
            return False
        if g.coefficient(1) != (m * m - 3 * m + 1) * factorial(2 * m - 2):
            return False
    if m >= 30 and not h.nonnegative():
        return False
    return True


def table_one(n_max: int = 40) -> Dict[int, Tuple[IntPolynomial, List[int]]]:
    """f_m for 2 <= m <= 6 with the n in 2..n_max where f_m(n) < 0."""
    table = {}
    for m in range(2, 7):
        f = f_m_polynomial(m)
        table[m] = (f, [n for n in range(2, n_max + 1) if f(n) < 0])
    return table


class LimitReport(BaseModel):
    """Limit 2n + 2^{n-1} of alpha(m,n) as m grows, with the error at m_max."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int
    limit: int
    max_abs_error_at_m_max: Fraction
    monotone_tail: bool
    samples: Tuple[Tuple[int, Fraction], ...]


def limit_check(n: int, m_max: int) -> LimitReport:
    """
    |alpha(m,n) - (2n + 2^{n-1})| sampled at powers of two up to m_max and at m_max;
    the tail from m = 64 on must be non-increasing.
    """
    if n < 2 or m_max < 10:
        raise ValueError(f"limit_check needs n >= 2 and m_max >= 10, got n={n}, m_max={m_max}")
    limit = 2 * n + 2 ** (n - 1)
    sampled = []
    m = 1
    while m < m_max:
        sampled.append(m)
        m *= 2
    sampled.append(m_max)
    errors = [(m, abs(abscissa(m, n).alpha - limit)) for m in sampled]
    tail = [error for m, error in errors if m >= 64]
    monotone = all(a >= b for a, b in zip(tail, tail[1:]))
    report(f"alpha(m,{n}) -> {limit}: error {decimal_string(errors[-1][1])} at m={m_max}", "cyan")
    return LimitReport(n=n, limit=limit, max_abs_error_at_m_max=errors[-1][1], monotone_tail=monotone, samples=tuple(errors))


class ScanRow(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    m: int
    n: int
    alpha: Fraction
    regime: str

    def csv_row(self) -> List[str]:
        return [str(self.m), str(self.n), str(self.alpha.numerator), str(self.alpha.denominator),
                decimal_string(self.alpha), self.regime]


def _scan_m(args) -> List[ScanRow]:
    m, n_max, low, high = args
    rows = []
    for n in range(2, n_max + 1):
        result = abscissa(m, n)
        if low <= result.alpha <= high:
            rows.append(ScanRow(m=m, n=n, alpha=result.alpha, regime=result.regime))
    return rows


def scan_abscissae(m_max: int = 500, n_max: int = 20, window: Sequence = (0, 80), m_min: int = 2) -> List[ScanRow]:
    """All alpha(m,n) with m_min <= m <= m_max, 2 <= n <= n_max inside the window, m-major."""
    if m_max < 2 or n_max < 2:
        raise ValueError(f"scan bounds must be >= 2, got m_max={m_max}, n_max={n_max}")
    low, high = Fraction(window[0]), Fraction(window[1])
    jobs = [(m, n_max, low, high) for m in range(m_min, m_max + 1)]
    workers = current().workers
    report(f"Scanning {len(jobs)} values of m with n <= {n_max}", "blue")
    if workers > 0:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            chunks = list(executor.map(_scan_m, jobs))
    else:
        chunks = [_scan_m(job) for job in jobs]
    rows = [row for chunk in chunks for row in chunk]
    report(f"Scan produced {len(rows)} rows", "green")
    return rows


def write_scan_csv(rows: Sequence[ScanRow], handle: TextIO) -> None:
    writer = csv.writer(handle, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow(row.csv_row())


def simple_pole_witness(m: int, n: int) -> Tuple[Tuple[int, int], int]:
    """The denominator factor (a, b) of local_zeta with (a+1)/b = alpha, and how often it occurs."""
    alpha = abscissa(m, n).alpha
    hits = [f for f in local_zeta(m, n).denominator_factors if Fraction(f[0] + 1, f[1]) == alpha]
    if not hits:
        raise ArithmeticError(f"No denominator factor realises alpha={alpha} at ({m},{n})")
    return hits[0], len(hits)


class NumeratorBounds(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    max_bound: Fraction
    beta: Fraction
    attained_by_simple_reflection: bool


def numerator_bounds(m: int, n: int) -> NumeratorBounds:
    """
    Convergence bounds (1 - l(w) + sum_{i in I(w)} A_i) / sum_{i in I(w)} B_i of the
    Euler products over the numerator terms, for w != 1.
    """
    params = zeta_parameters(m, n)
    bounds = []
    for (descent, length), _ in descent_length_table(n).items():
        if length == 0:
            continue
        indices = [i + 1 for i, nu in enumerate(descent) if nu]
        bound = Fraction(1 - length + sum(params.A[i] for i in indices), sum(params.B[i] for i in indices))
        bounds.append((bound, length == 1))
    top = max(bound for bound, _ in bounds)
    simple = any(bound == top and is_simple for bound, is_simple in bounds)
    return NumeratorBounds(max_bound=top, beta=beta(m, n), attained_by_simple_reflection=simple)
