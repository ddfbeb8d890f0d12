"""
Degree-n symmetric functions with exact (q, t) coefficients.

Values are stored in Schur coordinates. Changes of basis go through the
power sums, using the character table of the symmetric group computed by the
Murnaghan-Nakayama rule on beta-sets.

Modified Macdonald polynomials are pinned down by their triangularity:
H~_mu[X(1-q)] lies in the span of s_lambda for lambda >= mu, H~_mu[X(1-t)] in
the span for lambda >= mu', and <H~_mu, s_(n)> = 1. That linear system is
solved exactly at integer points (q, t) and the Schur coefficients are
recovered by bivariate interpolation, then checked at spare points.
"""

import logging
import math
from collections.abc import Callable, Mapping
from fractions import Fraction
from functools import lru_cache

from sympy import Matrix, Rational, prime
from tqdm import tqdm

from .exactpoly import ONE, A, LaurentPoly, Number, Q, T
from .htilde_cache import HtildeCache

logger = logging.getLogger(__name__)

Partition = tuple[int, ...]

MAX_BASIS_DEGREE = 8
MAX_MACDONALD_DEGREE = 6


# -- partitions -------------------------------------------------------------


@lru_cache(maxsize=None)
def partitions(n: int) -> tuple[Partition, ...]:
    """Partitions of n in decreasing lexicographic order, starting with (n)."""

    def build(remaining: int, largest: int) -> list[Partition]:
        if remaining == 0:
            return [()]
        out = []
        for first in range(min(remaining, largest), 0, -1):
            out.extend((first, *rest) for rest in build(remaining - first, first))
        return out

    return tuple(build(n, n))


def conjugate(lam: Partition) -> Partition:
    if not lam:
        return ()
    return tuple(sum(1 for part in lam if part > j) for j in range(lam[0]))


def n_stat(lam: Partition) -> int:
    """n(lambda) = sum (i - 1) lambda_i."""
    return sum(i * part for i, part in enumerate(lam))


def cells(lam: Partition) -> list[tuple[int, int]]:
    return [(i, j) for i, part in enumerate(lam) for j in range(part)]


def arm(lam: Partition, cell: tuple[int, int]) -> int:
    i, j = cell
    return lam[i] - j - 1


def leg(lam: Partition, cell: tuple[int, int]) -> int:
    i, j = cell
    return conjugate(lam)[j] - i - 1


def dominates(lam: Partition, mu: Partition) -> bool:
    """lam >= mu in dominance order."""
    total_lam = total_mu = 0
    for k in range(max(len(lam), len(mu))):
        total_lam += lam[k] if k < len(lam) else 0
        total_mu += mu[k] if k < len(mu) else 0
        if total_lam < total_mu:
            return False
    return True


def z_lambda(rho: Partition) -> int:
    out = 1
    for part in set(rho):
        m = rho.count(part)
        out *= part**m * math.factorial(m)
    return out


def hook_count(lam: Partition) -> int:
    """f^lambda, the number of standard Young tableaux."""
    n = sum(lam)
    hooks = math.prod(arm(lam, c) + leg(lam, c) + 1 for c in cells(lam))
    return math.factorial(n) // hooks


@lru_cache(maxsize=None)
def character(lam: Partition, rho: Partition) -> int:
    """chi^lambda(rho) by the Murnaghan-Nakayama rule on beta-sets."""
    if not rho:
        return 1 if not lam else 0
    r, rest = rho[0], rho[1:]
    length = len(lam)
    beta = [part + length - 1 - i for i, part in enumerate(lam)]
    occupied = set(beta)
    total = 0
    for bead in beta:
        target = bead - r
        if target < 0 or target in occupied:
            continue
        sign = -1 if sum(1 for c in beta if target < c < bead) % 2 else 1
        new_beta = sorted((occupied - {bead}) | {target}, reverse=True)
        new_lam = tuple(b - (length - 1 - i) for i, b in enumerate(new_beta))
        total += sign * character(tuple(p for p in new_lam if p > 0), rest)
    return total


@lru_cache(maxsize=None)
def _character_matrix(n: int) -> Matrix:
    parts = partitions(n)
    return Matrix(len(parts), len(parts), lambda i, j: character(parts[i], parts[j]))


# -- symmetric functions ----------------------------------------------------


def _as_poly(c: "LaurentPoly | Number") -> LaurentPoly:
    return c if isinstance(c, LaurentPoly) else LaurentPoly.constant(c)


class SymFunc:
    """A homogeneous symmetric function of degree n in Schur coordinates."""

    __slots__ = ("_coeffs", "n")

    def __init__(self, n: int, coeffs: Mapping[Partition, "LaurentPoly | Number"] | None = None):
        self.n = n
        cleaned = {}
        for lam, c in (coeffs or {}).items():
            lam = tuple(lam)
            if sum(lam) != n:
                msg = f"partition {lam} does not have size {n}"
                raise ValueError(msg)
            poly = _as_poly(c)
            if poly:
                cleaned[lam] = poly
        self._coeffs = cleaned

    @property
    def coeffs(self) -> dict[Partition, LaurentPoly]:
        return dict(self._coeffs)

    def __getitem__(self, lam: Partition) -> LaurentPoly:
        return self._coeffs.get(tuple(lam), LaurentPoly.zero())

    def vector(self) -> list[LaurentPoly]:
        return [self[lam] for lam in partitions(self.n)]

    def _check_degree(self, other: "SymFunc") -> None:
        if self.n != other.n:
            msg = f"degree mismatch: {self.n} vs {other.n}"
            raise ValueError(msg)

    def __add__(self, other: "SymFunc") -> "SymFunc":
        self._check_degree(other)
        out = dict(self._coeffs)
        for lam, c in other._coeffs.items():
            out[lam] = out.get(lam, LaurentPoly.zero()) + c
        return SymFunc(self.n, out)

    def __neg__(self) -> "SymFunc":
        return SymFunc(self.n, {lam: -c for lam, c in self._coeffs.items()})

    def __sub__(self, other: "SymFunc") -> "SymFunc":
        return self + (-other)

    def __mul__(self, scalar: "LaurentPoly | Number") -> "SymFunc":
        factor = _as_poly(scalar)
        return SymFunc(self.n, {lam: c * factor for lam, c in self._coeffs.items()})

    __rmul__ = __mul__

    def map_coeffs(self, func: Callable[[LaurentPoly], LaurentPoly]) -> "SymFunc":
        return SymFunc(self.n, {lam: func(c) for lam, c in self._coeffs.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, SymFunc):
            return NotImplemented
        return self.n == other.n and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash((self.n, frozenset(self._coeffs.items())))

    def __str__(self) -> str:
        if not self._coeffs:
            return "0"
        pieces = []
        for lam in partitions(self.n):
            if lam in self._coeffs:
                name = "s[" + ",".join(str(p) for p in lam) + "]"
                pieces.append(f"({self._coeffs[lam]})*{name}")
        return " + ".join(pieces)

    def __repr__(self) -> str:
        return f"SymFunc({self})"


def _to_power(f: SymFunc) -> dict[Partition, LaurentPoly]:
    out = {}
    for rho in partitions(f.n):
        total = LaurentPoly.zero()
        for lam, c in f.coeffs.items():
            chi = character(lam, rho)
            if chi:
                total = total + c * chi
        if total:
            out[rho] = total * Fraction(1, z_lambda(rho))
    return out


def _from_power(n: int, power: Mapping[Partition, LaurentPoly]) -> SymFunc:
    out = {}
    for lam in partitions(n):
        total = LaurentPoly.zero()
        for rho, c in power.items():
            chi = character(lam, rho)
            if chi:
                total = total + c * chi
        out[lam] = total
    return SymFunc(n, out)


def _power_product(factors: list[dict[Partition, Fraction]]) -> dict[Partition, Fraction]:
    product: dict[Partition, Fraction] = {(): Fraction(1)}
    for factor in factors:
        step: dict[Partition, Fraction] = {}
        for rho, c in product.items():
            for sigma, e in factor.items():
                key = tuple(sorted(rho + sigma, reverse=True))
                step[key] = step.get(key, 0) + c * e
        product = step
    return product


def _h_power(k: int) -> dict[Partition, Fraction]:
    return {rho: Fraction(1, z_lambda(rho)) for rho in partitions(k)}


def _e_power(k: int) -> dict[Partition, Fraction]:
    return {rho: Fraction((-1) ** (k - len(rho)), z_lambda(rho)) for rho in partitions(k)}


def basis_element(kind: str, lam: Partition) -> SymFunc:
    """
    s_lambda, h_lambda, e_lambda or p_lambda in Schur coordinates.

    Raises:
        ValueError: If the kind is unknown or the degree exceeds the guard

    """
    lam = tuple(sorted(lam, reverse=True))
    n = sum(lam)
    if n > MAX_BASIS_DEGREE:
        msg = f"degree {n} exceeds the limit {MAX_BASIS_DEGREE}"
        raise ValueError(msg)
    if kind == "schur":
        return SymFunc(n, {lam: 1})
    if kind == "power":
        return SymFunc(n, {mu: character(mu, lam) for mu in partitions(n)})
    if kind == "homog":
        power = _power_product([_h_power(k) for k in lam])
    elif kind == "elem":
        power = _power_product([_e_power(k) for k in lam])
    else:
        available = ["schur", "homog", "elem", "power"]
        msg = f"Unknown basis: {kind}. Available: {available}"
        raise ValueError(msg)
    return _from_power(n, {rho: LaurentPoly.constant(c) for rho, c in power.items()})


def hall_pair(f: SymFunc, g: SymFunc) -> LaurentPoly:
    f._check_degree(g)
    total = LaurentPoly.zero()
    for lam, c in f.coeffs.items():
        total = total + c * g[lam]
    return total


def omega(f: SymFunc) -> SymFunc:
    return SymFunc(f.n, {conjugate(lam): c for lam, c in f.coeffs.items()})


def bar(f: SymFunc) -> SymFunc:
    """Invert q and t in every coefficient."""
    images = {"q": Q**-1, "t": T**-1}
    return f.map_coeffs(lambda c: c.substitute(images))


def plethystic_scale(f: SymFunc, base: LaurentPoly) -> SymFunc:
    """f[X(1 - base)]: p_k is sent to (1 - base^k) p_k."""
    power = _to_power(f)
    scaled = {}
    for rho, c in power.items():
        factor = ONE
        for part in rho:
            factor = factor * (ONE - base**part)
        scaled[rho] = c * factor
    return _from_power(f.n, scaled)


def psi(f: SymFunc) -> LaurentPoly:
    """(1 + a) sum_k a^k <s_(n-k, 1^k), f>."""
    n = f.n
    total = LaurentPoly.zero()
    for k in range(n):
        hook = (n - k,) + (1,) * k
        total = total + A**k * f[hook]
    return (ONE + A) * total


# -- exact evaluation and interpolation ------------------------------------


def _rational(x: Fraction) -> Rational:
    return Rational(x.numerator, x.denominator)


def _fraction(x) -> Fraction:
    x = Rational(x)
    return Fraction(int(x.p), int(x.q))


def grid_values(count: int, parity: int) -> list[int]:
    """Distinct primes: odd-indexed ones for q (parity 1), even-indexed for t (parity 0)."""
    return [int(prime(2 * i + 2 - parity)) for i in range(count)]


@lru_cache(maxsize=None)
def _vandermonde_inverse(points: tuple[int, ...]) -> Matrix:
    size = len(points)
    return Matrix(size, size, lambda i, j: points[i] ** j).inv()


def fit_polynomials(
    evaluate: Callable[[int, int], list[Fraction]],
    dq: int,
    dt: int,
    what: str,
) -> list[LaurentPoly]:
    """
    Recover polynomials of q-degree <= dq and t-degree <= dt from exact values.

    ``evaluate(q, t)`` returns one value per component. Two spare points
    outside the interpolation grid must agree with the fitted polynomials.

    Raises:
        RuntimeError: If a spare point disagrees

    """
    qs = grid_values(dq + 2, 1)
    ts = grid_values(dt + 2, 0)
    logger.debug(f"Interpolating {what} on a {dq + 1}x{dt + 1} grid")
    values: dict[tuple[int, int], list[Fraction]] = {}
    points = [(i, j) for i in range(dq + 1) for j in range(dt + 1)]
    for i, j in tqdm(points, desc=what, leave=False, disable=None):
        values[(i, j)] = evaluate(qs[i], ts[j])
    width = len(next(iter(values.values())))
    vq_inv = _vandermonde_inverse(tuple(qs[: dq + 1]))
    vt_inv = _vandermonde_inverse(tuple(ts[: dt + 1]))
    polys = []
    for c in range(width):
        grid = Matrix(dq + 1, dt + 1, lambda i, j: _rational(values[(i, j)][c]))
        coeffs = vq_inv * grid * vt_inv.T
        terms = {}
        for a in range(dq + 1):
            for b in range(dt + 1):
                value = _fraction(coeffs[a, b])
                if value:
                    terms[(0, 2 * a, 2 * b)] = value
        polys.append(LaurentPoly(terms))
    for qv, tv in ((qs[dq + 1], ts[dt + 1]), (qs[dq + 1], ts[0])):
        expected = evaluate(qv, tv)
        for c, poly in enumerate(polys):
            if poly.evaluate(q=qv, t=tv) != expected[c]:
                msg = f"interpolation of {what} fails its check at q={qv}, t={tv}"
                raise RuntimeError(msg)
    return polys


@lru_cache(maxsize=None)
def _plethysm_matrix(n: int, value: int) -> Matrix:
    """Matrix of f -> f[X(1 - value)] on Schur coordinates."""
    chars = _character_matrix(n)
    parts = partitions(n)
    scale = Matrix.diag(
        *[
            Rational(math.prod(1 - value**part for part in rho), z_lambda(rho))
            for rho in parts
        ]
    )
    return chars * scale * chars.T


def _htilde_at(mu: Partition, qv: int, tv: int) -> list[Fraction]:
    n = sum(mu)
    parts = partitions(n)
    mu_conj = conjugate(mu)
    pleth_q = _plethysm_matrix(n, qv)
    pleth_t = _plethysm_matrix(n, tv)
    rows = []
    for i, lam in enumerate(parts):
        if not dominates(lam, mu):
            rows.append(pleth_q.row(i))
        if not dominates(lam, mu_conj):
            rows.append(pleth_t.row(i))
    normalization = Matrix.zeros(1, len(parts))
    normalization[0, 0] = 1
    rows.append(normalization)
    system = Matrix.vstack(*rows)
    rhs = Matrix.zeros(len(rows), 1)
    rhs[len(rows) - 1, 0] = 1
    solution, free = system.gauss_jordan_solve(rhs)
    if free.shape[0]:
        msg = f"triangularity conditions do not determine H~_{mu} at q={qv}, t={tv}"
        raise RuntimeError(msg)
    return [_fraction(x) for x in solution]


_KNOWN_HTILDE = {
    (1,): {(1,): ONE},
    (2,): {(2,): ONE, (1, 1): Q},
    (1, 1): {(2,): ONE, (1, 1): T},
    (3,): {(3,): ONE, (2, 1): Q + Q**2, (1, 1, 1): Q**3},
    (2, 1): {(3,): ONE, (2, 1): Q + T, (1, 1, 1): Q * T},
    (1, 1, 1): {(3,): ONE, (2, 1): T + T**2, (1, 1, 1): T**3},
}


def _verify_htilde(mu: Partition, h: SymFunc) -> None:
    n = h.n
    if mu in _KNOWN_HTILDE and h != SymFunc(n, _KNOWN_HTILDE[mu]):
        msg = f"H~_{mu} = {h} disagrees with its known value"
        raise RuntimeError(msg)
    if h[(n,)] != ONE:
        msg = f"<s_({n}), H~_{mu}> is {h[(n,)]}, expected 1"
        raise RuntimeError(msg)
    for lam, c in h.coeffs.items():
        if not c.coefficients_nonnegative_integers():
            msg = f"H~_{mu} has a non-positive coefficient {c} at s_{lam}"
            raise RuntimeError(msg)
        if c.evaluate(q=1, t=1) != hook_count(lam):
            msg = f"H~_{mu} at q=t=1 does not give p_1^{n} (coefficient of s_{lam})"
            raise RuntimeError(msg)


_disk_cache: HtildeCache | None = None


def use_cache(cache: HtildeCache | None) -> None:
    """Attach (or detach) the on-disk H~ cache."""
    global _disk_cache
    _disk_cache = cache


@lru_cache(maxsize=None)
def macdonald_htilde(mu: Partition) -> SymFunc:
    """
    The modified Macdonald polynomial H~_mu in Schur coordinates.

    Raises:
        ValueError: If |mu| exceeds the supported degree
        RuntimeError: If the computed value fails its checks

    """
    mu = tuple(sorted(mu, reverse=True))
    n = sum(mu)
    if n > MAX_MACDONALD_DEGREE:
        msg = f"H~ is limited to degree {MAX_MACDONALD_DEGREE}, got {n}"
        raise ValueError(msg)
    if _disk_cache is not None:
        try:
            return SymFunc(n, _disk_cache.get(mu))
        except KeyError:
            pass
    polys = fit_polynomials(
        lambda qv, tv: _htilde_at(mu, qv, tv),
        n_stat(conjugate(mu)),
        n_stat(mu),
        f"H~_{list(mu)}",
    )
    h = SymFunc(n, dict(zip(partitions(n), polys, strict=True)))
    _verify_htilde(mu, h)
    logger.info(f"Computed H~_{list(mu)}")
    if _disk_cache is not None:
        _disk_cache.put(mu, h.coeffs)
    return h


def nabla_eigenvalue(mu: Partition) -> LaurentPoly:
    """t^n(mu) q^n(mu')."""
    return T ** n_stat(mu) * Q ** n_stat(conjugate(mu))


def _evaluate_vector(vector: list[LaurentPoly], qv: int, tv: int) -> Matrix:
    return Matrix([_rational(c.evaluate(q=qv, t=tv)) for c in vector])


def _htilde_matrix(n: int, qv: int, tv: int) -> Matrix:
    columns = [_evaluate_vector(macdonald_htilde(mu).vector(), qv, tv) for mu in partitions(n)]
    return Matrix.hstack(*columns)


def _nonnegative_shift(f: SymFunc) -> tuple[SymFunc, LaurentPoly]:
    """Multiply by a monomial so that no coefficient has negative q or t powers."""
    shift_q = shift_t = 0
    for c in f.coeffs.values():
        shift_q = max(shift_q, -c.low_degree("q").value)
        shift_t = max(shift_t, -c.low_degree("t").value)
    monomial = LaurentPoly.monomial(q=shift_q, t=shift_t)
    return f * monomial, monomial


def _degree(f: SymFunc, name: str) -> int:
    degrees = [int(c.degree(name).value) for c in f.coeffs.values()]
    return max(degrees, default=0)


def nabla_pow(f: SymFunc, k: int) -> SymFunc:
    """
    Apply the k-th power of nabla, which scales H~_mu by (t^n(mu) q^n(mu'))^k.

    Negative powers use nabla^-1 = bar . omega . nabla . omega . bar.
    """
    if k == 0 or not f.coeffs:
        return f
    if k < 0:
        inner = nabla_pow(omega(bar(f)), -k)
        return omega(bar(inner))
    n = f.n
    if any(c._uses("a") for c in f.coeffs.values()):
        msg = "nabla acts on symmetric functions with coefficients in q and t only"
        raise ValueError(msg)
    shifted, monomial = _nonnegative_shift(f)
    parts = partitions(n)
    eigen = [nabla_eigenvalue(mu) for mu in parts]
    vector = shifted.vector()

    def evaluate(qv: int, tv: int) -> list[Fraction]:
        basis = _htilde_matrix(n, qv, tv)
        coords = basis.LUsolve(_evaluate_vector(vector, qv, tv))
        for i, e in enumerate(eigen):
            coords[i] = coords[i] * _rational(e.evaluate(q=qv, t=tv)) ** k
        return [_fraction(x) for x in basis * coords]

    bound = (k + 1) * math.comb(n, 2)
    polys = fit_polynomials(
        evaluate,
        _degree(shifted, "q") + bound,
        _degree(shifted, "t") + bound,
        f"nabla^{k} at degree {n}",
    )
    inverse = monomial**-1
    return SymFunc(n, {lam: poly * inverse for lam, poly in zip(parts, polys, strict=True)})


def htilde_norm(mu: Partition) -> LaurentPoly:
    """w~_mu = prod over cells of (q^a - t^(l+1)) (t^l - q^(a+1))."""
    product = ONE
    for cell in cells(mu):
        a, l = arm(mu, cell), leg(mu, cell)
        product = product * (Q**a - T ** (l + 1)) * (T**l - Q ** (a + 1))
    return product


def macdonald_cauchy_pairing(n: int, k: int) -> SymFunc:
    """
    ((1-q)(1-t))^n <nabla^k e_n[XY/((1-q)(1-t))], p_1^n[X]>_X as a function of Y.

    Expands the kernel as sum_mu H~_mu[X] H~_mu[Y] / w~_mu.
    """
    parts = partitions(n)
    p1n = [hook_count(lam) for lam in parts]
    norms = [htilde_norm(mu) for mu in parts]
    eigen = [nabla_eigenvalue(mu) for mu in parts]

    def evaluate(qv: int, tv: int) -> list[Fraction]:
        basis = _htilde_matrix(n, qv, tv)
        scale = Rational((1 - qv) * (1 - tv)) ** n
        total = Matrix.zeros(len(parts), 1)
        for i in range(len(parts)):
            column = basis.col(i)
            pairing = sum(column[j] * p1n[j] for j in range(len(parts)))
            weight = _rational(eigen[i].evaluate(q=qv, t=tv)) ** k
            total += column * (weight * pairing / _rational(norms[i].evaluate(q=qv, t=tv)))
        return [_fraction(x * scale) for x in total]

    bound = (k + 1) * math.comb(n, 2)
    polys = fit_polynomials(evaluate, bound, bound, f"Cauchy pairing n={n} k={k}")
    return SymFunc(n, dict(zip(parts, polys, strict=True)))
