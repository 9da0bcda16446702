"""
The class-2 nilpotent Lie lattices L_{m,n}.

L_{m,n} has basis x_e (e of weight m-1), y_f (f of weight m) and z_1..z_n,
with [x_e, y_f] = z_i exactly when f - e is the i-th unit vector and all
other basis brackets zero. Basis vectors are addressed by their position in
`LieLattice.basis`; vectors are sparse dicts position -> coefficient.
"""
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Dict, Iterable, List, Literal, Mapping, Tuple, Union
from pydantic import BaseModel, ConfigDict
from settings import report

Vector = Mapping[int, object]


class MultiIndex(tuple):
    """An n-tuple of non-negative integers; `weight` is the entry sum."""

    def __new__(cls, entries: Iterable[int]):
        entries = tuple(int(x) for x in entries)
        if any(x < 0 for x in entries):
            raise ValueError(f"MultiIndex entries must be non-negative, got {entries}")
        return super().__new__(cls, entries)

    @property
    def entries(self) -> Tuple[int, ...]:
        return tuple(self)

    @property
    def weight(self) -> int:
        return sum(self)

    def __add__(self, other):
        return MultiIndex(a + b for a, b in zip(self, other))

    def __sub__(self, other):
        return tuple(a - b for a, b in zip(self, other))

    def dominated_by(self, other: "MultiIndex") -> bool:
        """Componentwise self <= other."""
        return all(a <= b for a, b in zip(self, other))


def unit_vector(n: int, i: int) -> Tuple[int, ...]:
    """The i-th standard unit vector of length n, i counted from 1."""
    return tuple(1 if k == i - 1 else 0 for k in range(n))


@lru_cache(maxsize=None)
def multi_indices(n: int, weight: int) -> Tuple[MultiIndex, ...]:
    """
    All n-tuples of non-negative integers summing to `weight`, in
    degree-lexicographic descending order: (1,0) comes before (0,1).

    >>> [tuple(e) for e in multi_indices(2, 2)]
    [(2, 0), (1, 1), (0, 2)]
    """
    if n < 1:
        raise ValueError(f"multi_indices needs n >= 1, got n={n}")
    if weight < 0:
        raise ValueError(f"multi_indices needs weight >= 0, got weight={weight}")

    def compositions(slots: int, total: int):
        if slots == 1:
            yield (total,)
            return
        for head in range(total, -1, -1):
            for tail in compositions(slots - 1, total - head):
                yield (head,) + tail

    return tuple(MultiIndex(c) for c in compositions(n, weight))


class BasisLabel(BaseModel):
    """Layer plus index of a basis vector: a MultiIndex for X/Y, j in 1..n for Z."""

    model_config = ConfigDict(frozen=True)

    layer: Literal["X", "Y", "Z"]
    index: Union[int, Tuple[int, ...]]

    def __str__(self) -> str:
        if self.layer == "Z":
            return f"z_{self.index}"
        return f"{self.layer.lower()}_{tuple(self.index)}"


@dataclass(frozen=True)
class LieLattice:
    """
    Basis and integer structure constants of L_{m,n}.

    `constants` maps an ordered position pair (i, j) to the sparse vector
    [b_i, b_j]; the reversed pair is implied by antisymmetry and not stored.
    """

    m: int
    n: int
    basis: Tuple[BasisLabel, ...]
    r1: int
    r2: int
    r3: int
    constants: Dict[Tuple[int, int], Dict[int, int]] = field(repr=False)

    @property
    def d(self) -> int:
        return self.r1 + self.r2 + self.r3

    @property
    def E(self) -> Tuple[MultiIndex, ...]:
        return multi_indices(self.n, self.m - 1)

    @property
    def F(self) -> Tuple[MultiIndex, ...]:
        return multi_indices(self.n, self.m)

    def x(self, e) -> int:
        return self.E.index(MultiIndex(e))

    def y(self, f) -> int:
        return self.r1 + self.F.index(MultiIndex(f))

    def z(self, j: int) -> int:
        if not 1 <= j <= self.n:
            raise ValueError(f"z-index must lie in 1..{self.n}, got {j}")
        return self.r1 + self.r2 + j - 1

    def layer_positions(self, layer: str) -> range:
        if layer == "X":
            return range(0, self.r1)
        if layer == "Y":
            return range(self.r1, self.r1 + self.r2)
        if layer == "Z":
            return range(self.r1 + self.r2, self.d)
        raise ValueError(f"Unknown layer {layer}")

    @property
    def brackets(self) -> Dict[Tuple[BasisLabel, BasisLabel], Dict[BasisLabel, int]]:
        """The nonzero structure constants keyed by basis labels."""
        return {
            (self.basis[i], self.basis[j]): {self.basis[k]: c for k, c in value.items()}
            for (i, j), value in self.constants.items()
        }


def build_lattice(m: int, n: int) -> LieLattice:
    """
    Construct L_{m,n}.

    Args:
        m: degree parameter, m >= 1
        n: number of central generators, n >= 2

    Returns:
        LieLattice: basis X-layer, then Y-layer, then Z-layer, each in the
        canonical multi-index order
    """
    if m < 1 or n < 2:
        raise ValueError(f"build_lattice needs m >= 1 and n >= 2, got m={m}, n={n}")

    E = multi_indices(n, m - 1)
    F = multi_indices(n, m)
    r1, r2, r3 = len(E), len(F), n
    basis = (
        tuple(BasisLabel(layer="X", index=tuple(e)) for e in E)
        + tuple(BasisLabel(layer="Y", index=tuple(f)) for f in F)
        + tuple(BasisLabel(layer="Z", index=j) for j in range(1, n + 1))
    )

    f_position = {f: r1 + k for k, f in enumerate(F)}
    constants: Dict[Tuple[int, int], Dict[int, int]] = {}
    for a, e in enumerate(E):
        for i in range(1, n + 1):
            f = e + MultiIndex(unit_vector(n, i))
            constants[(a, f_position[f])] = {r1 + r2 + i - 1: 1}

    report(f"Built L_({m},{n}) with d={r1 + r2 + r3}, {len(constants)} nonzero brackets", "green")
    return LieLattice(m=m, n=n, basis=basis, r1=r1, r2=r2, r3=r3, constants=constants)


def bracket(L: LieLattice, u: Vector, v: Vector) -> Dict[int, object]:
    """
    Bilinear antisymmetric bracket of two sparse vectors.

    Coefficients may be ints or exact rationals; the result has no zero entries.
    """
    result: Dict[int, object] = {}
    for (i, j), value in L.constants.items():
        coeff = u.get(i, 0) * v.get(j, 0) - u.get(j, 0) * v.get(i, 0)
        if coeff == 0:
            continue
        for k, c in value.items():
            result[k] = result.get(k, 0) + coeff * c
    return {k: c for k, c in result.items() if c != 0}


def z_coordinates(L: LieLattice, vector: Vector) -> Tuple[object, ...]:
    """Coordinates of a Z-layer vector with respect to z_1..z_n."""
    stray = [k for k in vector if k not in L.layer_positions("Z")]
    if stray:
        raise ValueError(f"Vector has components outside the Z-layer: {stray}")
    return tuple(vector.get(k, 0) for k in L.layer_positions("Z"))


def check_lie_axioms(L: LieLattice) -> bool:
    """
    Antisymmetry on basis pairs and vanishing of all triple brackets on
    basis triples (class 2 makes Jacobi automatic once these hold).
    """
    for (i, j), value in L.constants.items():
        if i == j and any(value.values()):
            return False
        reverse = L.constants.get((j, i))
        if reverse is not None and i < j:
            if any(reverse.get(k, 0) != -value.get(k, 0) for k in set(reverse) | set(value)):
                return False

    for value in L.constants.values():
        uv = {k: c for k, c in value.items() if c != 0}
        if not uv:
            continue
        for w in range(L.d):
            if bracket(L, uv, {w: 1}):
                return False
    return True


def derived_equals_centre(L: LieLattice) -> bool:
    """[L, L] is exactly the Z-layer span and every z_j is central."""
    z_layer = set(L.layer_positions("Z"))
    realised = set()
    for value in L.constants.values():
        if not set(value) <= z_layer:
            return False
        if len(value) == 1:
            realised.update(value)
    if realised != z_layer:
        return False
    return all(not bracket(L, {z: 1}, {w: 1}) for z in z_layer for w in range(L.d))


def abelian_ideal_check(L: LieLattice) -> bool:
    """The span of the Y- and Z-layers is an abelian ideal of dimension r2 + r3."""
    ideal = list(L.layer_positions("Y")) + list(L.layer_positions("Z"))
    if len(ideal) != L.r2 + L.r3:
        return False
    members = set(ideal)
    for a in ideal:
        for b in ideal:
            if bracket(L, {a: 1}, {b: 1}):
                return False
        for w in range(L.d):
            if not set(bracket(L, {a: 1}, {w: 1})) <= members:
                return False
    return True


def hirsch_length(m: int, n: int) -> int:
    """d = binom(m+n-2, n-1) + binom(m+n-1, n-1) + n."""
    return comb(m + n - 2, n - 1) + comb(m + n - 1, n - 1) + n


def describe(L: LieLattice) -> List[str]:
    """Human-readable list of the nonzero basis brackets."""
    lines = []
    for (u, v), value in L.brackets.items():
        rhs = " + ".join(f"{c}*{w}" if c != 1 else str(w) for w, c in value.items())
        lines.append(f"[{u}, {v}] = {rhs}")
    return lines
