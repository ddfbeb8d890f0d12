"""
Modules over the numerical semigroup generated by n and d.

A module Delta is a cofinite subset of Z>=0 closed under +n and +d. It is
stored through its n-generator vector: ``genvec[i]`` is the least element of
Delta congruent to i mod n. Modules over the ambient Z>=0 (kind S) index
torus-fixed points of the Quot scheme, modules inside <n, d> (kind R) those
of the Hilbert scheme.
"""

import logging
import math
from collections.abc import Iterable
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from itertools import combinations

from pydantic import BaseModel, ConfigDict, PositiveInt
from sympy import Matrix

from .exactpoly import ONE, A, LaurentPoly, T

logger = logging.getLogger(__name__)


class GermParams(BaseModel):
    """The germ y^n = x^d."""

    model_config = ConfigDict(frozen=True)

    n: PositiveInt
    d: PositiveInt

    @property
    def g(self) -> int:
        return math.gcd(self.n, self.d)

    @property
    def b(self) -> int:
        """Number of branches."""
        return self.g

    @property
    def e(self) -> int:
        """Braid length (n - 1) d of the torus link."""
        return (self.n - 1) * self.d

    @property
    def delta(self) -> int:
        return (self.n * self.d - self.n - self.d + self.g) // 2

    @property
    def is_coprime(self) -> bool:
        return self.g == 1

    def require_coprime(self, what: str) -> None:
        if not self.is_coprime:
            msg = f"{what} needs coprime (n, d), got ({self.n}, {self.d})"
            raise ValueError(msg)

    def __str__(self) -> str:
        return f"({self.n},{self.d})"


class AmbientKind(str, Enum):
    S = "S"
    R = "R"


@dataclass(frozen=True)
class AmbientModule:
    kind: AmbientKind
    minvec: tuple[int, ...]


def ambient_module(params: GermParams, kind: AmbientKind | str) -> AmbientModule:
    """Gamma(S) = Z>=0 or Gamma(R) = nZ>=0 + dZ>=0, as a minimal-element vector."""
    kind = AmbientKind(kind)
    n, d = params.n, params.d
    if kind is AmbientKind.S:
        return AmbientModule(kind, tuple(range(n)))
    params.require_coprime("the ambient module Gamma(R)")
    minvec = [0] * n
    for j in range(n):
        minvec[(j * d) % n] = j * d
    return AmbientModule(kind, tuple(minvec))


class GammaModuleModel(BaseModel):
    """JSON form, e.g. {"n":3,"d":4,"ambient":"S","genvec":[3,4,5]}."""

    n: PositiveInt
    d: PositiveInt
    ambient: AmbientKind
    genvec: list[int]


@dataclass(frozen=True)
class GammaModule:
    """A module Delta, ordered lexicographically by genvec."""

    genvec: tuple[int, ...]
    params: GermParams
    kind: AmbientKind = AmbientKind.S

    def __post_init__(self):
        n, d = self.params.n, self.params.d
        if len(self.genvec) != n:
            msg = f"genvec needs {n} entries, got {len(self.genvec)}"
            raise ValueError(msg)
        minvec = self.ambient.minvec
        for i, value in enumerate(self.genvec):
            if value % n != i or value < minvec[i]:
                msg = f"genvec[{i}] = {value} is not an element of Gamma({self.kind.value}) in residue {i}"
                raise ValueError(msg)
        for i, value in enumerate(self.genvec):
            if self.genvec[(i + d) % n] > value + d:
                msg = f"genvec {list(self.genvec)} is not closed under +{d}"
                raise ValueError(msg)

    @classmethod
    def from_generator_set(
        cls, params: GermParams, values: Iterable[int], kind: AmbientKind | str = AmbientKind.S
    ) -> "GammaModule":
        """Build Delta from its set of n-generators, one per residue class."""
        n = params.n
        genvec: list[int | None] = [None] * n
        for value in values:
            if genvec[value % n] is not None:
                msg = f"two n-generators in residue {value % n}"
                raise ValueError(msg)
            genvec[value % n] = value
        if any(v is None for v in genvec):
            msg = f"n-generators must cover every residue mod {n}"
            raise ValueError(msg)
        return cls(tuple(genvec), params, AmbientKind(kind))

    @cached_property
    def ambient(self) -> AmbientModule:
        return ambient_module(self.params, self.kind)

    def with_genvec(self, genvec: Iterable[int]) -> "GammaModule":
        return GammaModule(tuple(genvec), self.params, self.kind)

    def __lt__(self, other: "GammaModule") -> bool:
        return self.genvec < other.genvec

    def __contains__(self, k: int) -> bool:
        return k >= self.genvec[k % self.params.n]

    @property
    def min(self) -> int:
        return min(self.genvec)

    @property
    def codim(self) -> int:
        excess = sum(g - m for g, m in zip(self.genvec, self.ambient.minvec, strict=True))
        return excess // self.params.n

    def gaps(self) -> list[int]:
        """Z>=0 minus Delta."""
        n = self.params.n
        return sorted(k for r, g in enumerate(self.genvec) for k in range(r, g, n))

    def shift(self, j: int) -> "GammaModule":
        """Delta + j."""
        n = self.params.n
        genvec = [0] * n
        for g in self.genvec:
            genvec[(g + j) % n] = g + j
        return self.with_genvec(genvec)

    def label(self) -> str:
        return "Delta_{" + ",".join(str(g) for g in self.genvec) + "}"

    def to_json(self) -> dict:
        return GammaModuleModel(
            n=self.params.n, d=self.params.d, ambient=self.kind, genvec=list(self.genvec)
        ).model_dump(mode="json")

    @classmethod
    def from_json(cls, data: dict) -> "GammaModule":
        model = GammaModuleModel.model_validate(data)
        return cls(tuple(model.genvec), GermParams(n=model.n, d=model.d), model.ambient)

    def __str__(self) -> str:
        return self.label()


def _excess_above(module: GammaModule, x: int, ambient: AmbientModule) -> int:
    """|Gamma(E)_{>x} minus module|, counted residue by residue."""
    n = module.params.n
    total = 0
    for r, (low, high) in enumerate(zip(ambient.minvec, module.genvec, strict=True)):
        # elements low, low + n, ..., high - n are missing from the module
        start = max(low, x + 1 + ((r - x - 1) % n))
        if start < high:
            total += (high - start) // n
    return total


def enumerate_modules(ambient: AmbientModule, params: GermParams, ell: int) -> list[GammaModule]:
    """
    All modules of codimension ``ell`` in Gamma(E), sorted by genvec.

    Depth-first over the per-residue increments c_i (genvec[i] = minvec[i] + n c_i),
    pruned by the d-closure constraint between assigned residues.
    """
    if ambient.kind is AmbientKind.R:
        params.require_coprime("enumeration over Gamma(R)")
    if ell < 0:
        msg = f"codimension must be nonnegative, got {ell}"
        raise ValueError(msg)
    n, d = params.n, params.d
    minvec = ambient.minvec
    genvec = [0] * n
    found: list[tuple[int, ...]] = []

    def consistent(i: int) -> bool:
        # only the closure constraints touching residue i are new
        for src in (i, (i - d) % n):
            dst = (src + d) % n
            if src <= i and dst <= i and genvec[dst] > genvec[src] + d:
                return False
        return True

    def walk(i: int, budget: int) -> None:
        if i == n - 1:
            genvec[i] = minvec[i] + n * budget
            if consistent(i):
                found.append(tuple(genvec))
            return
        for c in range(budget + 1):
            genvec[i] = minvec[i] + n * c
            if consistent(i):
                walk(i + 1, budget - c)

    walk(0, ell)
    modules = sorted(GammaModule(g, params, ambient.kind) for g in found)
    logger.debug(f"I^{ell}({ambient.kind.value}) for {params}: {len(modules)} modules")
    return modules


def fundamental_domain(params: GermParams) -> list[GammaModule]:
    """D_{n,d}: modules over Z>=0 with minimum 0, sorted by genvec."""
    params.require_coprime("the fundamental domain")
    ambient = ambient_module(params, AmbientKind.S)
    domain = []
    for ell in range(params.delta + 1):
        domain.extend(m for m in enumerate_modules(ambient, params, ell) if m.min == 0)
    return sorted(domain)


def generators(delta: GammaModule) -> list[int]:
    d = delta.params.d
    return sorted(g for g in delta.genvec if g - d not in delta)


def cogenerators(delta: GammaModule) -> list[int]:
    if delta.kind is not AmbientKind.S:
        msg = "cogenerators are defined for modules over Z>=0"
        raise ValueError(msg)
    n, d = delta.params.n, delta.params.d
    return sorted(g - n for g in delta.genvec if g - n >= 0 and g - n + d in delta)


def syzygy_of(delta: GammaModule, gamma: int) -> int:
    """gamma + n*a for the least a >= 1 with gamma + a*n - d in Delta."""
    n, d = delta.params.n, delta.params.d
    a = 1
    while gamma + a * n - d not in delta:
        a += 1
    return gamma + a * n


def syzygies(delta: GammaModule) -> list[int]:
    """
    Degrees of the minimal first syzygies, one per generator.

    Equivalently the k with k - n and k - d in Delta but k - n - d not in Delta.
    """
    delta.params.require_coprime("syzygies")
    return sorted(syzygy_of(delta, gamma) for gamma in generators(delta))


def syzygies_oracle(delta: GammaModule, window: int | None = None) -> list[int]:
    """
    Minimal first-syzygy degrees by linear algebra over C[u, v].

    The free cover sends e_gamma to t^gamma for every generator; u acts as +n
    and v as +d. In degree k the kernel is spanned by differences of the free
    monomials, and the minimal syzygies are the kernel vectors not in
    u*K_{k-n} + v*K_{k-d}.
    """
    n, d = delta.params.n, delta.params.d
    gens = generators(delta)
    if window is None:
        window = max(gens) + n * d + n + d

    def monomials(k: int) -> list[tuple[int, int, int]]:
        out = []
        for gamma in gens:
            i = 0
            while gamma + i * n <= k:
                rest = k - gamma - i * n
                if rest % d == 0:
                    out.append((gamma, i, rest // d))
                i += 1
        return out

    result = []
    for k in range(window + 1):
        basis = monomials(k)
        if len(basis) < 2:
            continue
        index = {m: pos for pos, m in enumerate(basis)}
        rows = []
        for step, (du, dv) in ((n, (1, 0)), (d, (0, 1))):
            lower = [(g, i + du, j + dv) for g, i, j in monomials(k - step)]
            for m in lower[1:]:
                row = [0] * len(basis)
                row[index[m]] += 1
                row[index[lower[0]]] -= 1
                rows.append(row)
        rank = Matrix(rows).rank() if rows else 0
        result.extend([k] * (len(basis) - 1 - rank))
    return result


def cell_dim(delta: GammaModule) -> int:
    """Dimension of the affine cell of Delta: sum over generator/syzygy pairs."""
    ambient = delta.ambient
    gens = generators(delta)
    syz = syzygies(delta)
    dim = sum(_excess_above(delta, g, ambient) for g in gens) - sum(
        _excess_above(delta, s, ambient) for s in syz
    )
    if dim < 0:
        msg = f"negative cell dimension {dim} for {delta}"
        raise RuntimeError(msg)
    return dim


def xi_count(delta: GammaModule, k: int) -> int:
    if k not in generators(delta):
        msg = f"{k} is not a generator of {delta}"
        raise ValueError(msg)
    d = delta.params.d
    return sum(1 for j in delta.genvec if k - d < j < k)


def lambda_count(delta: GammaModule, k: int) -> int:
    if k not in cogenerators(delta):
        msg = f"{k} is not a cogenerator of {delta}"
        raise ValueError(msg)
    n, d = delta.params.n, delta.params.d
    return sum(1 for j in delta.genvec if k + n < j < k + n + d)


def pi_gen(delta: GammaModule) -> LaurentPoly:
    """prod over Gen(Delta) of (1 + a t^xi), t-graded."""
    product = ONE
    for k in generators(delta):
        product = product * (ONE + A * T ** xi_count(delta, k))
    return product


def pi_cogen(delta: GammaModule, b: LaurentPoly = A) -> LaurentPoly:
    """prod over Cogen(Delta) of (1 + b t^lambda)."""
    product = ONE
    for k in cogenerators(delta):
        product = product * (ONE + b * T ** lambda_count(delta, k))
    return product


def nested_pairs(delta: GammaModule, m: int) -> list[GammaModule]:
    """Delta' = Delta minus m of its generators, sorted by genvec."""
    n = delta.params.n
    if not 0 <= m <= n:
        msg = f"m must lie in [0, {n}], got {m}"
        raise ValueError(msg)
    out = []
    for removed in combinations(generators(delta), m):
        genvec = list(delta.genvec)
        for k in removed:
            genvec[k % n] = k + n
        out.append(delta.with_genvec(genvec))
    return sorted(out)


def nested_dim(delta: GammaModule, inner: GammaModule) -> int:
    """Dimension of the cell of the nested pair (Delta, Delta')."""
    gens = generators(delta)
    n = delta.params.n
    nested = inner.params == delta.params and inner.kind is delta.kind
    if nested:
        for outer_g, inner_g in zip(delta.genvec, inner.genvec, strict=True):
            if inner_g == outer_g + n:
                nested = outer_g in gens
            elif inner_g != outer_g:
                nested = False
            if not nested:
                break
    if not nested:
        msg = f"{inner} is not nested in {delta}"
        raise ValueError(msg)
    ambient = delta.ambient
    total = 0
    for gamma in gens:
        if gamma in inner:
            total += _excess_above(inner, gamma, ambient)
        else:
            total += _excess_above(delta, gamma, ambient)
    total -= sum(_excess_above(inner, s, ambient) for s in syzygies(delta))
    if total < 0:
        msg = f"negative nested dimension {total} for ({delta}, {inner})"
        raise RuntimeError(msg)
    return total


def cell_dim_nested_sum(delta: GammaModule) -> LaurentPoly:
    """sum_m a^m t^(m(m-1)) sum over nested partners of t^(2 dim), in (a, t)."""
    total = LaurentPoly.zero()
    for m in range(len(generators(delta)) + 1):
        inner_sum = LaurentPoly.zero()
        for inner in nested_pairs(delta, m):
            inner_sum = inner_sum + T ** (2 * nested_dim(delta, inner))
        total = total + A**m * T ** (m * (m - 1)) * inner_sum
    return total


def shift_normalize(delta: GammaModule) -> tuple[GammaModule, int]:
    """Split Delta = Delta0 + j with min(Delta0) = 0."""
    if delta.kind is not AmbientKind.S:
        msg = "shift normalization is defined for modules over Z>=0"
        raise ValueError(msg)
    j = delta.min
    return delta.shift(-j), j


def delta_label(delta: GammaModule) -> tuple[int, ...]:
    """
    n-generators of Delta in D_{n,d}, listed by the residue they take after
    the shift Delta + (delta - codim) into I^delta(S).
    """
    shift = delta.params.delta - delta.codim
    return tuple(g - shift for g in delta.shift(shift).genvec)
