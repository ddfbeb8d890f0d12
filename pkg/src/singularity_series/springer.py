"""
Cocharacters of SL_n and the fixed points of the Picard-side paving.

A cocharacter mu is an integer n-vector with zero sum. Hikita's a-statistic
identifies cocharacters with Z>=0^(n-1); the valid ones for the germ
y^n = x^d are exactly those whose module Delta(mu) lies in I^delta(S).
"""

import itertools
import logging
from collections.abc import Sequence

from pydantic import BaseModel

from .exactpoly import LaurentPoly, Q, T
from .gammamod import (
    AmbientKind,
    GammaModule,
    GermParams,
    ambient_module,
    cell_dim,
    enumerate_modules,
)

logger = logging.getLogger(__name__)

Cocharacter = tuple[int, ...]


def validate_cocharacter(mu: Sequence[int]) -> Cocharacter:
    mu = tuple(mu)
    if not mu:
        msg = "a cocharacter needs at least one entry"
        raise ValueError(msg)
    if sum(mu) != 0:
        msg = f"cocharacter {mu} does not sum to zero"
        raise ValueError(msg)
    return mu


def _largest_argmin(mu: Cocharacter) -> int:
    """1-based index k of the last minimal entry."""
    low = min(mu)
    return max(i for i, x in enumerate(mu, start=1) if x == low)


def a_stat(mu: Sequence[int]) -> tuple[int, ...]:
    """
    Hikita's a-statistic.

    With k the largest index where mu is minimal, returns
    (mu_(k+1) - mu_k - 1, ..., mu_n - mu_k - 1, mu_1 - mu_k, ..., mu_(k-1) - mu_k).
    """
    mu = validate_cocharacter(mu)
    k = _largest_argmin(mu)
    m = mu[k - 1]
    after = [x - m - 1 for x in mu[k:]]
    before = [x - m for x in mu[: k - 1]]
    return tuple(after + before)


def a_stat_inverse(a: Sequence[int], n: int | None = None) -> Cocharacter:
    """
    The unique cocharacter with the given a-statistic.

    Raises:
        ValueError: If an entry is negative or the length does not match n - 1

    """
    a = tuple(a)
    n = len(a) + 1 if n is None else n
    if len(a) != n - 1:
        msg = f"a-statistic for n={n} needs {n - 1} entries, got {len(a)}"
        raise ValueError(msg)
    if any(x < 0 for x in a):
        msg = f"a-statistic entries must be nonnegative, got {a}"
        raise ValueError(msg)
    size = sum(a)
    tail = (-size) % n  # n - k
    k = n - tail
    m = -(tail + size) // n
    mu = [0] * n
    mu[k - 1] = m
    for j in range(k + 1, n + 1):
        mu[j - 1] = m + 1 + a[j - k - 1]
    for j in range(1, k):
        mu[j - 1] = m + a[n - k + j - 1]
    return tuple(mu)


def iota(mu: Sequence[int]) -> Cocharacter:
    """(mu_1, ..., mu_n) -> (-mu_n, ..., -mu_1)."""
    mu = validate_cocharacter(mu)
    return tuple(-x for x in reversed(mu))


def mu_values(mu: Sequence[int]) -> tuple[int, ...]:
    """(n mu_i + n - i) for i = 1..n."""
    mu = tuple(mu)
    n = len(mu)
    return tuple(n * x + n - i for i, x in enumerate(mu, start=1))


def mu_to_delta(mu: Sequence[int], params: GermParams) -> GammaModule:
    """
    The module with n-generators {n mu_i + n - i + delta}.

    Raises:
        ValueError: If mu is not valid for the germ, i.e. the generators do
            not form a module over Z>=0 of codimension delta

    """
    mu = validate_cocharacter(mu)
    params.require_coprime("the cocharacter dictionary")
    if len(mu) != params.n:
        msg = f"cocharacter {mu} has {len(mu)} entries, expected {params.n}"
        raise ValueError(msg)
    values = [v + params.delta for v in mu_values(mu)]
    try:
        delta = GammaModule.from_generator_set(params, values, AmbientKind.S)
    except ValueError as e:
        msg = f"cocharacter {mu} is not valid for {params}: {e}"
        raise ValueError(msg) from e
    if delta.codim != params.delta:
        msg = f"cocharacter {mu} is not valid for {params}: codimension {delta.codim} != {params.delta}"
        raise ValueError(msg)
    return delta


def _require_top_stratum(delta: GammaModule) -> None:
    if delta.kind is not AmbientKind.S or delta.codim != delta.params.delta:
        msg = f"{delta} is not in I^delta(S) (codim {delta.codim}, delta {delta.params.delta})"
        raise ValueError(msg)


def gap_stat(delta: GammaModule) -> int:
    """delta - min(Delta) for Delta in I^delta(S)."""
    _require_top_stratum(delta)
    return delta.params.delta - delta.min


def gm_dual(delta: GammaModule) -> GammaModule:
    """
    The dual module with n-generators {d(n-1) - k}.

    Raises:
        RuntimeError: If the image is not a module of codimension delta

    """
    _require_top_stratum(delta)
    params = delta.params
    params.require_coprime("the duality on I^delta(S)")
    top = params.d * (params.n - 1)
    try:
        dual = GammaModule.from_generator_set(params, [top - k for k in delta.genvec], AmbientKind.S)
    except ValueError as e:
        msg = f"dual of {delta} is not a module: {e}"
        raise RuntimeError(msg) from e
    if dual.codim != params.delta:
        msg = f"dual of {delta} has codimension {dual.codim}, expected {params.delta}"
        raise RuntimeError(msg)
    return dual


def top_stratum(params: GermParams) -> list[GammaModule]:
    """I^delta(S)."""
    return enumerate_modules(ambient_module(params, AmbientKind.S), params, params.delta)


def valid_cocharacters(params: GermParams) -> list[Cocharacter]:
    """
    All cocharacters valid for the germ, ordered by |a| and then a.

    Every valid mu has |a(mu)| <= delta, so the search over a is finite.
    """
    params.require_coprime("the cocharacter dictionary")
    n, delta = params.n, params.delta
    candidates = [a for a in itertools.product(range(delta + 1), repeat=n - 1) if sum(a) <= delta]
    candidates.sort(key=lambda a: (sum(a), a))
    valid = []
    for a in candidates:
        mu = a_stat_inverse(a, n)
        try:
            mu_to_delta(mu, params)
        except ValueError:
            continue
        valid.append(mu)
    logger.debug(f"{len(valid)} valid cocharacters for {params} out of {len(candidates)} candidates")
    return valid


class HikitaRow(BaseModel):
    mu: list[int]
    a: list[int]
    a_size: int
    values: list[int]
    module: str
    min: int


def hikita_rows(params: GermParams) -> list[HikitaRow]:
    rows = []
    for mu in valid_cocharacters(params):
        a = a_stat(mu)
        delta = mu_to_delta(mu, params)
        rows.append(
            HikitaRow(
                mu=list(mu),
                a=list(a),
                a_size=sum(a),
                values=list(mu_values(mu)),
                module=delta.label(),
                min=delta.min,
            )
        )
    return rows


def gap_generating_sum(params: GermParams) -> LaurentPoly:
    """sum over I^delta(S) of q^gap t^(2 dim)."""
    total = LaurentPoly.zero()
    for delta in top_stratum(params):
        total = total + Q ** gap_stat(delta) * T ** (2 * cell_dim(delta))
    return total
