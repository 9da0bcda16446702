"""
Exact sparse Laurent polynomials in q (standing for p) and t (standing for
p^{-s}), and rational functions with denominators kept as products of
factors (1 - q^a t^b).

A monomial p^{alpha - beta s} is stored as q^alpha t^beta.
"""
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

Exponent = Tuple[int, int]
Factor = Tuple[int, int]


class NotExpandableError(ValueError):
    """Raised when a rational function has no power series in t."""


class LaurentPoly:
    """
    Immutable sparse polynomial sum c * q^eq * t^et with integer coefficients.

    The term map never stores zero coefficients, so equal polynomials have
    equal term maps.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Mapping[Exponent, int]] = None):
        cleaned = {}
        for (eq, et), coeff in (terms or {}).items():
            if coeff:
                cleaned[(int(eq), int(et))] = coeff
        self._terms = cleaned

    @classmethod
    def monomial(cls, coeff: int = 1, eq: int = 0, et: int = 0) -> "LaurentPoly":
        return cls({(eq, et): coeff})

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls({(0, 0): 1})

    @classmethod
    def binomial(cls, a: int, b: int) -> "LaurentPoly":
        """The polynomial 1 - q^a t^b."""
        return cls({(0, 0): 1}) - cls({(a, b): 1})

    @property
    def terms(self) -> Dict[Exponent, int]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPoly.monomial(other)
        return isinstance(other, LaurentPoly) and self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        result = dict(self._terms)
        for key, coeff in other._terms.items():
            result[key] = result.get(key, 0) + coeff
        return LaurentPoly(result)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({key: -coeff for key, coeff in self._terms.items()})

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: Union["LaurentPoly", int]) -> "LaurentPoly":
        if isinstance(other, int):
            return LaurentPoly({key: coeff * other for key, coeff in self._terms.items()})
        result: Dict[Exponent, int] = {}
        for (eq1, et1), c1 in self._terms.items():
            for (eq2, et2), c2 in other._terms.items():
                key = (eq1 + eq2, et1 + et2)
                result[key] = result.get(key, 0) + c1 * c2
        return LaurentPoly(result)

    __rmul__ = __mul__

    def shift(self, eq: int, et: int, coeff: int = 1) -> "LaurentPoly":
        """Multiply by coeff * q^eq * t^et."""
        return LaurentPoly({(a + eq, b + et): c * coeff for (a, b), c in self._terms.items()})

    def substitute_inverse(self) -> "LaurentPoly":
        """q -> 1/q, t -> 1/t."""
        return LaurentPoly({(-eq, -et): coeff for (eq, et), coeff in self._terms.items()})

    def t_degrees(self) -> Tuple[int, int]:
        degrees = [et for (_, et) in self._terms]
        return min(degrees), max(degrees)

    def evaluate_q(self, p: int) -> Dict[int, Fraction]:
        """Substitute q := p; returns t-exponent -> exact coefficient."""
        result: Dict[int, Fraction] = {}
        for (eq, et), coeff in self._terms.items():
            value = coeff * (Fraction(p) ** eq)
            result[et] = result.get(et, 0) + value
        return {et: c for et, c in result.items() if c != 0}

    def sorted_terms(self) -> List[Tuple[int, int, int]]:
        """Terms as (eq, et, coeff), ordered by t-degree then q-degree."""
        return [(eq, et, c) for (eq, et), c in sorted(self._terms.items(), key=lambda kv: (kv[0][1], kv[0][0]))]

    def to_text(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for eq, et, coeff in self.sorted_terms():
            body = _monomial_text(eq, et)
            magnitude = abs(coeff)
            if body == "1":
                text = str(magnitude)
            elif magnitude == 1:
                text = body
            else:
                text = f"{magnitude}*{body}"
            pieces.append(("-" if coeff < 0 else "+", text))
        first_sign, first_text = pieces[0]
        out = ("-" if first_sign == "-" else "") + first_text
        for sign, text in pieces[1:]:
            out += f" {sign} {text}"
        return out

    def to_latex(self) -> str:
        if not self._terms:
            return "0"
        out = ""
        for index, (eq, et, coeff) in enumerate(self.sorted_terms()):
            body = _monomial_latex(eq, et)
            magnitude = abs(coeff)
            text = str(magnitude) if body == "1" else (body if magnitude == 1 else f"{magnitude}{body}")
            if index == 0:
                out = ("-" if coeff < 0 else "") + text
            else:
                out += (" - " if coeff < 0 else " + ") + text
        return out

    def __repr__(self) -> str:
        return f"LaurentPoly({self.to_text()})"


def _monomial_text(eq: int, et: int) -> str:
    parts = []
    if eq:
        parts.append("q" if eq == 1 else f"q^{eq}")
    if et:
        parts.append("t" if et == 1 else f"t^{et}")
    return " ".join(parts) if parts else "1"


def _exponent_latex(a: int, b: int) -> str:
    """The exponent a - b s of p^{a - b s}."""
    pieces = []
    if a:
        pieces.append(str(a))
    if b:
        magnitude = "" if abs(b) == 1 else str(abs(b))
        sign = "-" if b > 0 else ("+" if pieces else "")
        pieces.append(f"{sign}{magnitude}s")
    return "".join(pieces)


def _monomial_latex(eq: int, et: int) -> str:
    if eq == 0 and et == 0:
        return "1"
    return f"p^{{{_exponent_latex(eq, et)}}}"


def poly_arith(op: str, left: LaurentPoly, right: Optional[LaurentPoly] = None) -> LaurentPoly:
    """Dispatch 'add', 'mul' or 'substitute_inverse' on Laurent polynomials."""
    if op == "add":
        return left + right
    if op == "mul":
        return left * right
    if op == "substitute_inverse":
        return left.substitute_inverse()
    raise ValueError(f"Unknown polynomial operation: {op}")


def _direction(a: int, b: int):
    """An integer linear functional that is positive on (a, b)."""
    if b != 0:
        sign = 1 if b > 0 else -1
        return lambda eq, et: sign * et
    sign = 1 if a > 0 else -1
    return lambda eq, et: sign * eq


def divide_by_factor(numerator: LaurentPoly, a: int, b: int) -> Optional[LaurentPoly]:
    """
    Exact quotient numerator / (1 - q^a t^b), or None if it does not divide.
    """
    if (a, b) == (0, 0):
        raise ValueError("Factor (1 - q^0 t^0) is zero")
    if not numerator:
        return LaurentPoly()
    phi = _direction(a, b)
    bound = max(phi(eq, et) for (eq, et) in numerator._terms) - phi(a, b)

    remainder = dict(numerator._terms)
    quotient: Dict[Exponent, int] = {}
    while remainder:
        low = min(phi(eq, et) for (eq, et) in remainder)
        if low > bound:
            return None
        layer = [key for key in remainder if phi(*key) == low]
        for key in layer:
            coeff = remainder.pop(key)
            quotient[key] = quotient.get(key, 0) + coeff
            shifted = (key[0] + a, key[1] + b)
            remainder[shifted] = remainder.get(shifted, 0) + coeff
            if remainder[shifted] == 0:
                del remainder[shifted]
    return LaurentPoly(quotient)


def expand_factors(factors: Iterable[Factor]) -> LaurentPoly:
    product = LaurentPoly.one()
    for a, b in factors:
        product = product * LaurentPoly.binomial(a, b)
    return product


class RationalFnQT:
    """
    numerator / prod (1 - q^a t^b), stored in canonical form: the factor
    multiset is sorted and no factor divides the numerator exactly.
    """

    __slots__ = ("numerator", "denominator_factors")

    def __init__(self, numerator: LaurentPoly, denominator_factors: Iterable[Factor] = ()):
        factors = [(int(a), int(b)) for a, b in denominator_factors]
        if any(f == (0, 0) for f in factors):
            raise ValueError("Denominator factor (1 - q^0 t^0) vanishes identically")
        numerator, factors = _cancel(numerator, factors)
        self.numerator = numerator
        self.denominator_factors: Tuple[Factor, ...] = tuple(sorted(factors))

    @classmethod
    def from_parts(cls, terms: Iterable[Tuple[int, int, int]], factors: Iterable[Factor]) -> "RationalFnQT":
        numerator: Dict[Exponent, int] = {}
        for eq, et, coeff in terms:
            numerator[(eq, et)] = numerator.get((eq, et), 0) + coeff
        return cls(LaurentPoly(numerator), factors)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RationalFnQT)
            and self.numerator == other.numerator
            and self.denominator_factors == other.denominator_factors
        )

    def __hash__(self) -> int:
        return hash((self.numerator, self.denominator_factors))

    def substitute_inverse(self) -> "RationalFnQT":
        """
        q -> 1/q, t -> 1/t applied factor by factor:
        1 - q^-a t^-b = -q^-a t^-b (1 - q^a t^b).
        """
        total_a = sum(a for a, _ in self.denominator_factors)
        total_b = sum(b for _, b in self.denominator_factors)
        sign = -1 if len(self.denominator_factors) % 2 else 1
        numerator = self.numerator.substitute_inverse().shift(total_a, total_b, sign)
        return RationalFnQT(numerator, self.denominator_factors)

    def to_text(self) -> str:
        numerator = self.numerator.to_text()
        if not self.denominator_factors:
            return numerator
        if len(self.numerator) > 1:
            numerator = f"({numerator})"
        factors = "".join(f"(1-{_monomial_text(a, b)})" for a, b in self.denominator_factors)
        if len(self.denominator_factors) > 1:
            factors = f"({factors})"
        return f"{numerator} / {factors}"

    def to_latex(self) -> str:
        numerator = self.numerator.to_latex()
        if not self.denominator_factors:
            return numerator
        factors = "".join(f"(1-{_monomial_latex(a, b)})" for a, b in self.denominator_factors)
        return f"\\frac{{{numerator}}}{{{factors}}}"

    def to_json_obj(self) -> dict:
        return {
            "num": [[eq, et, c] for eq, et, c in self.numerator.sorted_terms()],
            "den": [[a, b] for a, b in self.denominator_factors],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)

    @classmethod
    def from_json(cls, payload: Union[str, dict]) -> "RationalFnQT":
        data = json.loads(payload) if isinstance(payload, str) else payload
        return cls.from_parts((tuple(term) for term in data["num"]), (tuple(f) for f in data["den"]))

    def __repr__(self) -> str:
        return f"RationalFnQT({self.to_text()})"


def _cancel(numerator: LaurentPoly, factors: List[Factor]) -> Tuple[LaurentPoly, List[Factor]]:
    remaining = []
    for a, b in factors:
        quotient = divide_by_factor(numerator, a, b)
        if quotient is None:
            remaining.append((a, b))
        else:
            numerator = quotient
    return numerator, remaining


def _multiset_difference(left: Sequence[Factor], right: Sequence[Factor]) -> Tuple[List[Factor], List[Factor]]:
    rest_right = list(right)
    rest_left = []
    for factor in left:
        if factor in rest_right:
            rest_right.remove(factor)
        else:
            rest_left.append(factor)
    return rest_left, rest_right


def rational_equal(f: RationalFnQT, g: RationalFnQT) -> bool:
    """f == g as rational functions, by cross multiplication after removing shared factors."""
    only_f, only_g = _multiset_difference(f.denominator_factors, g.denominator_factors)
    return f.numerator * expand_factors(only_g) == g.numerator * expand_factors(only_f)


def monomial_ratio(left: LaurentPoly, right: LaurentPoly) -> Optional[Tuple[int, int, int]]:
    """
    (c, eq, et) with left == c * q^eq * t^et * right, if such a monomial exists.
    """
    if not left or not right or len(left) != len(right):
        return None
    key = lambda kv: (kv[0][1], kv[0][0])
    (top_left, c_left) = max(left.items(), key=key)
    (top_right, c_right) = max(right.items(), key=key)
    if c_left % c_right:
        return None
    coeff = c_left // c_right
    eq, et = top_left[0] - top_right[0], top_left[1] - top_right[1]
    if right.shift(eq, et, coeff) != left:
        return None
    return coeff, eq, et


@dataclass(frozen=True)
class TruncatedSeries:
    """Coefficients of t^0..t^max_t_degree, each a polynomial in q."""

    max_t_degree: int
    coeffs: Tuple[LaurentPoly, ...]

    def coefficient(self, k: int) -> LaurentPoly:
        return self.coeffs[k]

    def specialize(self, p: int) -> List[Fraction]:
        return [sum(c.evaluate_q(p).values(), Fraction(0)) for c in self.coeffs]

    def has_nonnegative_coefficients(self) -> bool:
        return all(coeff >= 0 for poly in self.coeffs for _, coeff in poly.items())

    def to_rows(self) -> List[List[Tuple[int, int]]]:
        """Per t-degree, the (q-exponent, coefficient) pairs."""
        return [[(eq, c) for eq, _, c in poly.sorted_terms()] for poly in self.coeffs]


def _geometric_multiply(rows: List[Dict[int, int]], a: int, b: int, K: int) -> List[Dict[int, int]]:
    """rows / (1 - q^a t^b) truncated at t-degree K (b >= 1)."""
    result = [dict(row) for row in rows]
    for k in range(b, K + 1):
        for eq, coeff in result[k - b].items():
            result[k][eq + a] = result[k].get(eq + a, 0) + coeff
    return [{eq: c for eq, c in row.items() if c} for row in result]


def series_expand(f: RationalFnQT, K: int) -> TruncatedSeries:
    """
    Power series of f in t up to t^K, exact in q.

    Raises:
        NotExpandableError: a denominator factor has b <= 0, or the numerator
        has negative t-exponents
    """
    if K < 0:
        raise ValueError(f"Truncation degree must be >= 0, got {K}")
    bad = [(a, b) for a, b in f.denominator_factors if b <= 0]
    if bad:
        raise NotExpandableError(f"Denominator factors {bad} have no geometric expansion in t")
    if f.numerator and f.numerator.t_degrees()[0] < 0:
        raise NotExpandableError("Numerator has negative t-exponents")

    rows: List[Dict[int, int]] = [dict() for _ in range(K + 1)]
    for (eq, et), coeff in f.numerator.items():
        if et <= K:
            rows[et][eq] = rows[et].get(eq, 0) + coeff
    for a, b in f.denominator_factors:
        rows = _geometric_multiply(rows, a, b, K)
    coeffs = tuple(LaurentPoly({(eq, 0): c for eq, c in row.items()}) for row in rows)
    return TruncatedSeries(max_t_degree=K, coeffs=coeffs)


@dataclass(frozen=True)
class PrimeSpecialization:
    """
    A rational function in t alone: numerator coefficients by t-exponent
    over prod (1 - c t^b).
    """

    p: int
    numerator: Dict[int, Fraction]
    denominator_factors: Tuple[Tuple[Fraction, int], ...]

    def expand(self, K: int) -> List[Fraction]:
        if any(b <= 0 for _, b in self.denominator_factors):
            raise NotExpandableError("Specialised denominator is not expandable in t")
        if self.numerator and min(self.numerator) < 0:
            raise NotExpandableError("Numerator has negative t-exponents")
        series = [Fraction(0)] * (K + 1)
        for et, coeff in self.numerator.items():
            if et <= K:
                series[et] += coeff
        for c, b in self.denominator_factors:
            for k in range(b, K + 1):
                series[k] += c * series[k - b]
        return series

    def to_text(self) -> str:
        numerator = " + ".join(
            f"{c}" if et == 0 else (f"t^{et}" if c == 1 else f"{c}*t^{et}")
            for et, c in sorted(self.numerator.items())
        ) or "0"
        if not self.denominator_factors:
            return numerator
        factors = "".join(f"(1-{c}*t^{b})" if c != 1 else f"(1-t^{b})" for c, b in self.denominator_factors)
        return f"({numerator}) / ({factors})"


def specialize_prime(f: RationalFnQT, p: int) -> PrimeSpecialization:
    """Substitute q := p exactly."""
    if not isinstance(p, int) or p < 2:
        raise ValueError(f"Prime specialisation needs an integer p >= 2, got {p}")
    factors = tuple((Fraction(p) ** a, b) for a, b in f.denominator_factors)
    return PrimeSpecialization(p=p, numerator=f.numerator.evaluate_q(p), denominator_factors=factors)
