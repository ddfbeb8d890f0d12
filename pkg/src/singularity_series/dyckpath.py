"""
Rational Dyck paths and the bijection with the fundamental domain D_{n,d}.

The grid is n columns wide and d rows tall. Square (x, y) carries the label
n*y - d*(x + 1): the bottom-left square is -d, labels drop by d to the right
and grow by n upwards. A module Delta with min 0 is sent to the path that
separates squares labelled by elements of Delta (above) from the rest (below).
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .exactpoly import ONE, A, LaurentPoly, T
from .gammamod import (
    AmbientKind,
    GammaModule,
    GermParams,
    cell_dim,
    cogenerators,
    fundamental_domain,
    generators,
)

logger = logging.getLogger(__name__)

Point = tuple[int, int]


@dataclass(frozen=True)
class DyckPath:
    """A lattice path over {N, E} from (0,0) to (n,d) weakly above y = (d/n) x."""

    steps: str

    def __post_init__(self):
        if set(self.steps) - {"N", "E"}:
            msg = f"path must use only N and E steps, got {self.steps!r}"
            raise ValueError(msg)
        n, d = self.n, self.d
        if n == 0 or d == 0:
            msg = "path needs at least one N and one E step"
            raise ValueError(msg)
        for x, y in self.points:
            if n * y < d * x:
                msg = f"path {self.steps} dips below the diagonal at ({x},{y})"
                raise ValueError(msg)

    @property
    def n(self) -> int:
        return self.steps.count("E")

    @property
    def d(self) -> int:
        return self.steps.count("N")

    @cached_property
    def points(self) -> list[Point]:
        x = y = 0
        out = [(0, 0)]
        for step in self.steps:
            if step == "E":
                x += 1
            else:
                y += 1
            out.append((x, y))
        return out

    def __str__(self) -> str:
        return self.steps


def square_label(params: GermParams, x: int, y: int) -> int:
    return params.n * y - params.d * (x + 1)


def _floor_height(params: GermParams, x: int) -> int:
    """Lowest admissible height of column x."""
    return math.ceil(Fraction(params.d * (x + 1), params.n))


def heights(path: DyckPath) -> list[int]:
    """Height of the path above each column."""
    out = []
    y = 0
    for step in path.steps:
        if step == "N":
            y += 1
        else:
            out.append(y)
    return out


def _from_heights(h: list[int]) -> DyckPath:
    steps = []
    previous = 0
    for height in h:
        steps.append("N" * (height - previous) + "E")
        previous = height
    return DyckPath("".join(steps))


def to_dyck(delta: GammaModule) -> DyckPath:
    params = delta.params
    params.require_coprime("the Dyck path bijection")
    if delta.kind is not AmbientKind.S or delta.min != 0:
        msg = f"{delta} is not in the fundamental domain (needs ambient S and min 0)"
        raise ValueError(msg)
    n, d = params.n, params.d
    h = [(delta.genvec[(-d * (x + 1)) % n] + d * (x + 1)) // n for x in range(n)]
    return _from_heights(h)


def from_dyck(path: DyckPath, params: GermParams) -> GammaModule:
    n, d = params.n, params.d
    if (path.n, path.d) != (n, d):
        msg = f"path {path} does not fit the {n}x{d} grid"
        raise ValueError(msg)
    genvec = [0] * n
    for x, height in enumerate(heights(path)):
        genvec[(-d * (x + 1)) % n] = n * height - d * (x + 1)
    return GammaModule(tuple(genvec), params, AmbientKind.S)


def all_dyck_paths(params: GermParams) -> list[DyckPath]:
    """Every n x d Dyck path, as nondecreasing column heights."""
    params.require_coprime("Dyck path enumeration")
    n, d = params.n, params.d
    out: list[DyckPath] = []
    h: list[int] = []

    def walk(x: int) -> None:
        if x == n:
            out.append(_from_heights(h))
            return
        # the last column always reaches the top
        low = d if x == n - 1 else max(_floor_height(params, x), h[-1] if h else 0)
        for height in range(low, d + 1):
            h.append(height)
            walk(x + 1)
            h.pop()

    walk(0)
    return out


def area(path: DyckPath) -> int:
    """Full squares between the path and the diagonal."""
    params = GermParams(n=path.n, d=path.d)
    return sum(height - _floor_height(params, x) for x, height in enumerate(heights(path)))


def codinv(path: DyckPath) -> int:
    """Defined through the bijection: the cell dimension of the module."""
    params = GermParams(n=path.n, d=path.d)
    return cell_dim(from_dyck(path, params))


def vertex_sets(path: DyckPath) -> tuple[list[Point], list[Point]]:
    """Inner vertices (E in, N out) and outer vertices (N in, E out)."""
    inner, outer = [], []
    points = path.points
    for i in range(1, len(path.steps)):
        before, after = path.steps[i - 1], path.steps[i]
        if before == "E" and after == "N":
            inner.append(points[i])
        elif before == "N" and after == "E":
            outer.append(points[i])
    return inner, outer


def kappa(path: DyckPath, p: Point) -> int:
    """
    Number of E-steps whose interior meets the slope-d/n line through p.

    Raises:
        ValueError: If p is not a lattice point of the path

    """
    if p not in path.points:
        msg = f"{p} is not on the path {path}"
        raise ValueError(msg)
    n, d = path.n, path.d
    px, py = p
    count = 0
    for (x, y), step in zip(path.points[:-1], path.steps, strict=True):
        if step != "E":
            continue
        crossing = px + Fraction(n, d) * (y - py)
        if x < crossing < x + 1:
            count += 1
    return count


def diagonal_distance(path: DyckPath, p: Point) -> int:
    """n*y - d*x, proportional to the distance of p above the diagonal."""
    return path.n * p[1] - path.d * p[0]


@dataclass(frozen=True)
class VertexInfo:
    point: Point
    kind: str
    kappa: int
    distance: int


def distance_order(path: DyckPath) -> list[VertexInfo]:
    """
    Inner and outer vertices sorted by decreasing distance from the diagonal.

    The first entry is the farthest outer vertex; the kappa values of the
    rest form the tau sequence.
    """
    inner, outer = vertex_sets(path)
    infos = [
        VertexInfo(p, kind, kappa(path, p), diagonal_distance(path, p))
        for kind, points in (("inner", inner), ("outer", outer))
        for p in points
    ]
    infos.sort(key=lambda v: -v.distance)
    if len({v.distance for v in infos}) != len(infos):
        msg = f"two corners of {path} are equidistant from the diagonal"
        raise RuntimeError(msg)
    return infos


def tau_sequence(path: DyckPath) -> list[int]:
    return [v.kappa for v in distance_order(path)[1:]]


def inner_vertex_generator(path: DyckPath, p: Point) -> int:
    """The generator n*y - d*x labelling the square left of an inner vertex."""
    return diagonal_distance(path, p)


def vertex_product(path: DyckPath, which: str) -> LaurentPoly:
    """prod (1 + a t^kappa) over the inner or outer vertices."""
    inner, outer = vertex_sets(path)
    points = inner if which == "inner" else outer
    product = ONE
    for p in points:
        product = product * (ONE + A * T ** kappa(path, p))
    return product


def check_updown(path: DyckPath) -> bool:
    """(1 + a) prod over inner vertices equals the product over outer vertices."""
    return (ONE + A) * vertex_product(path, "inner") == vertex_product(path, "outer")


def rowmotion(delta: GammaModule, domain: list[GammaModule] | None = None) -> GammaModule:
    """
    The unique Delta' in D_{n,d} with Cogen(Delta') = Gen(Delta) minus {0}.

    Raises:
        RuntimeError: If no module or more than one module qualifies

    """
    if delta.min != 0:
        msg = f"{delta} is not in the fundamental domain"
        raise ValueError(msg)
    if domain is None:
        domain = fundamental_domain(delta.params)
    target = [g for g in generators(delta) if g != 0]
    matches = [m for m in domain if cogenerators(m) == target]
    if len(matches) != 1:
        msg = f"rowmotion of {delta} has {len(matches)} candidates, expected exactly one"
        raise RuntimeError(msg)
    return matches[0]


def grid_svg(delta: GammaModule, cell: int = 40) -> str:
    """SVG drawing of the labelled grid with the squares of Delta shaded and the path on top."""
    params = delta.params
    path = to_dyck(delta)
    n, d = params.n, params.d
    width, height = n * cell, d * cell
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width + 2}" height="{height + 2}" '
        f'viewBox="-1 -1 {width + 2} {height + 2}" font-family="monospace" font-size="{cell // 3}">'
    ]
    for x in range(n):
        for y in range(d):
            label = square_label(params, x, y)
            left, top = x * cell, height - (y + 1) * cell
            fill = "#cfe3ff" if label in delta else "#ffffff"
            parts.append(
                f'<rect x="{left}" y="{top}" width="{cell}" height="{cell}" fill="{fill}" stroke="#999"/>'
            )
            parts.append(
                f'<text x="{left + cell // 2}" y="{top + cell // 2}" text-anchor="middle" '
                f'dominant-baseline="central">{label}</text>'
            )
    parts.append(
        f'<line x1="0" y1="{height}" x2="{width}" y2="0" stroke="#c33" stroke-dasharray="4 3"/>'
    )
    coords = " ".join(f"{x * cell},{height - y * cell}" for x, y in path.points)
    parts.append(f'<polyline points="{coords}" fill="none" stroke="#000" stroke-width="3"/>')
    parts.append("</svg>")
    return "\n".join(parts)
