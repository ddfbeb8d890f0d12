"""
Exact Laurent polynomials and truncated q-series in the variables a, q, t.

Exponents are half-integers, stored doubled, so substitutions such as
t -> q^(1/2) t stay exact. Coefficients are ``fractions.Fraction``.

The canonical text form prints terms sorted by (q, a, t) exponent, for example
``q^(-1/2) + 1 + a*t + q*t - 2*q^2*t^(3/2)``.
``parse`` inverts the printer.
"""

import logging
import math
import re
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from fractions import Fraction

from pydantic import BaseModel

logger = logging.getLogger(__name__)

VARIABLES = ("a", "q", "t")
_INDEX = {name: i for i, name in enumerate(VARIABLES)}

Key = tuple[int, int, int]
Number = int | Fraction


@dataclass(frozen=True, order=True)
class HalfInt:
    """A half-integer, stored as twice its value."""

    doubled: int

    @classmethod
    def of(cls, value: "Number | HalfInt") -> "HalfInt":
        if isinstance(value, HalfInt):
            return value
        twice = Fraction(value) * 2
        if twice.denominator != 1:
            msg = f"{value} is not a half-integer"
            raise ValueError(msg)
        return cls(int(twice))

    @property
    def value(self) -> Fraction:
        return Fraction(self.doubled, 2)

    @property
    def is_integer(self) -> bool:
        return self.doubled % 2 == 0

    def __add__(self, other: "HalfInt") -> "HalfInt":
        return HalfInt(self.doubled + HalfInt.of(other).doubled)

    def __sub__(self, other: "HalfInt") -> "HalfInt":
        return HalfInt(self.doubled - HalfInt.of(other).doubled)

    def __neg__(self) -> "HalfInt":
        return HalfInt(-self.doubled)

    def __str__(self) -> str:
        return _format_exponent(self.doubled)


def _format_exponent(doubled: int) -> str:
    if doubled % 2 == 0:
        return str(doubled // 2)
    return f"{doubled}/2"


def _to_doubled(value: "Number | HalfInt") -> int:
    return HalfInt.of(value).doubled


def _format_coefficient(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


class TermModel(BaseModel):
    """JSON encoding of one term; ``*2`` fields are doubled exponents."""

    a2: int
    q2: int
    t2: int
    c: str


class SeriesModel(BaseModel):
    """JSON encoding of a truncated q-series."""

    trunc2: int
    terms: list[TermModel]


class LaurentPoly:
    """
    Immutable Laurent polynomial in a, q, t with rational coefficients.

    Keys of ``terms`` are doubled exponent triples (a, q, t). Zero
    coefficients are never stored.
    """

    __slots__ = ("_hash", "_terms")

    def __init__(self, terms: Mapping[Key, Number] | None = None):
        cleaned: dict[Key, Fraction] = {}
        if terms:
            for key, coeff in terms.items():
                value = Fraction(coeff)
                if value:
                    cleaned[tuple(key)] = value
        self._terms = cleaned
        self._hash: int | None = None

    # -- construction -------------------------------------------------------

    @classmethod
    def _raw(cls, terms: dict[Key, Fraction]) -> "LaurentPoly":
        poly = cls.__new__(cls)
        poly._terms = terms
        poly._hash = None
        return poly

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls()

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls.constant(1)

    @classmethod
    def constant(cls, c: Number) -> "LaurentPoly":
        return cls({(0, 0, 0): c})

    @classmethod
    def monomial(
        cls,
        a: "Number | HalfInt" = 0,
        q: "Number | HalfInt" = 0,
        t: "Number | HalfInt" = 0,
        coeff: Number = 1,
    ) -> "LaurentPoly":
        return cls({(_to_doubled(a), _to_doubled(q), _to_doubled(t)): coeff})

    @classmethod
    def var(cls, name: str) -> "LaurentPoly":
        exps = dict.fromkeys(VARIABLES, 0)
        exps[name] = 1
        return cls.monomial(**exps)

    # -- inspection ---------------------------------------------------------

    @property
    def terms(self) -> dict[Key, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[Key, Fraction]]:
        return iter(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def sorted_terms(self) -> list[tuple[Key, Fraction]]:
        """Terms in canonical order: by (q, a, t) exponent."""
        return sorted(self._terms.items(), key=lambda kv: (kv[0][1], kv[0][0], kv[0][2]))

    def degree(self, name: str) -> HalfInt:
        if not self._terms:
            msg = "degree of the zero polynomial is undefined"
            raise ValueError(msg)
        i = _INDEX[name]
        return HalfInt(max(key[i] for key in self._terms))

    def low_degree(self, name: str) -> HalfInt:
        if not self._terms:
            msg = "low degree of the zero polynomial is undefined"
            raise ValueError(msg)
        i = _INDEX[name]
        return HalfInt(min(key[i] for key in self._terms))

    def coefficient(self, name: str, exponent: "Number | HalfInt") -> "LaurentPoly":
        """The part of degree ``exponent`` in ``name``, with that variable removed."""
        i = _INDEX[name]
        target = _to_doubled(exponent)
        out = {}
        for key, c in self._terms.items():
            if key[i] == target:
                stripped = list(key)
                stripped[i] = 0
                out[tuple(stripped)] = c
        return LaurentPoly._raw(out)

    def constant_term(self) -> Fraction:
        return self._terms.get((0, 0, 0), Fraction(0))

    def coefficients_nonnegative_integers(self) -> bool:
        return all(c.denominator == 1 and c >= 0 for c in self._terms.values())

    def has_integer_coefficients(self) -> bool:
        return all(c.denominator == 1 for c in self._terms.values())

    # -- arithmetic ---------------------------------------------------------

    @staticmethod
    def _coerce(other) -> "LaurentPoly | None":
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPoly.constant(other)
        return None

    def __add__(self, other) -> "LaurentPoly":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self._terms)
        for key, c in other._terms.items():
            value = out.get(key, 0) + c
            if value:
                out[key] = value
            else:
                out.pop(key, None)
        return LaurentPoly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._raw({key: -c for key, c in self._terms.items()})

    def __sub__(self, other) -> "LaurentPoly":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "LaurentPoly":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, (int, Fraction)):
            if not other:
                return LaurentPoly.zero()
            return LaurentPoly._raw({key: c * other for key, c in self._terms.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        out: dict[Key, Fraction] = {}
        for (a1, q1, t1), c1 in self._terms.items():
            for (a2, q2, t2), c2 in other._terms.items():
                key = (a1 + a2, q1 + q2, t1 + t2)
                out[key] = out.get(key, 0) + c1 * c2
        return LaurentPoly._raw({k: v for k, v in out.items() if v})

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "LaurentPoly":
        if exponent < 0:
            if not self.is_monomial():
                msg = "only monomials can be raised to negative powers"
                raise ValueError(msg)
            ((key, c),) = self._terms.items()
            return LaurentPoly._raw(
                {tuple(e * exponent for e in key): Fraction(1) / c**-exponent}
            )
        result = LaurentPoly.one()
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def divide_exact(self, divisor: "LaurentPoly") -> "LaurentPoly":
        """
        Exact division by ``divisor``.

        Raises:
            ZeroDivisionError: If the divisor is zero
            RuntimeError: If the quotient is not a Laurent polynomial

        """
        if divisor.is_zero():
            msg = "division by the zero polynomial"
            raise ZeroDivisionError(msg)
        if self.is_zero():
            return LaurentPoly.zero()
        # per-variable exponent window every quotient term must lie in
        lows = [
            min(k[i] for k in self._terms) - min(k[i] for k in divisor._terms)
            for i in range(3)
        ]
        highs = [
            max(k[i] for k in self._terms) - max(k[i] for k in divisor._terms)
            for i in range(3)
        ]
        lead_key = max(divisor._terms)
        lead_coeff = divisor._terms[lead_key]
        remainder = dict(self._terms)
        quotient: dict[Key, Fraction] = {}
        while remainder:
            top = max(remainder)
            shift = tuple(top[i] - lead_key[i] for i in range(3))
            if any(not lows[i] <= shift[i] <= highs[i] for i in range(3)):
                msg = f"{self} is not divisible by {divisor}"
                raise RuntimeError(msg)
            factor = remainder[top] / lead_coeff
            quotient[shift] = quotient.get(shift, 0) + factor
            for key, c in divisor._terms.items():
                k = (key[0] + shift[0], key[1] + shift[1], key[2] + shift[2])
                value = remainder.get(k, 0) - factor * c
                if value:
                    remainder[k] = value
                else:
                    remainder.pop(k, None)
        return LaurentPoly._raw({k: v for k, v in quotient.items() if v})

    # -- substitution and evaluation ---------------------------------------

    def substitute(self, images: Mapping[str, "LaurentPoly"]) -> "LaurentPoly":
        """
        Apply a monomial substitution such as ``{"t": q*t^2}``.

        Each image must be a nonzero rational multiple of a monomial. Variables
        missing from ``images`` are left alone.

        Raises:
            ValueError: If an image is not a monomial, or if the result would
                need exponents finer than half-integers

        """
        maps = []
        for i, name in enumerate(VARIABLES):
            image = images.get(name)
            if image is None:
                unit = [0, 0, 0]
                unit[i] = 2
                maps.append((tuple(unit), Fraction(1)))
                continue
            if not isinstance(image, LaurentPoly) or not image.is_monomial():
                msg = f"image of {name} must be a single monomial, got {image}"
                raise ValueError(msg)
            ((key, c),) = image._terms.items()
            maps.append((key, c))

        out: dict[Key, Fraction] = {}
        for key, coeff in self._terms.items():
            new = [0, 0, 0]
            value = coeff
            for i, (img_key, img_coeff) in enumerate(maps):
                e2 = key[i]
                if not e2:
                    continue
                for j in range(3):
                    prod = e2 * img_key[j]
                    if prod % 2:
                        msg = (
                            f"substituting {VARIABLES[i]} into exponent "
                            f"{_format_exponent(e2)} leaves the half-integer grid"
                        )
                        raise ValueError(msg)
                    new[j] += prod // 2
                if img_coeff != 1:
                    if e2 % 2:
                        msg = "cannot raise a non-unit coefficient to a half-integer power"
                        raise ValueError(msg)
                    value *= img_coeff ** (e2 // 2)
            k = tuple(new)
            out[k] = out.get(k, 0) + value
        return LaurentPoly._raw({k: v for k, v in out.items() if v})

    def specialize(self, **values: Number) -> "LaurentPoly":
        """
        Set variables to rational values; only integer exponents are allowed,
        and a zero value requires nonnegative exponents in that variable.
        """
        indices = {_INDEX[name]: Fraction(v) for name, v in values.items()}
        out: dict[Key, Fraction] = {}
        for key, coeff in self._terms.items():
            new = list(key)
            value = coeff
            for i, x in indices.items():
                e2 = key[i]
                if e2 % 2:
                    msg = f"cannot specialize {VARIABLES[i]} in a half-integer exponent"
                    raise ValueError(msg)
                e = e2 // 2
                if x == 0:
                    if e < 0:
                        msg = f"{VARIABLES[i]} = 0 in a negative power"
                        raise ValueError(msg)
                    if e > 0:
                        value = Fraction(0)
                        break
                else:
                    value *= x**e
                new[i] = 0
            if value:
                k = tuple(new)
                out[k] = out.get(k, 0) + value
        return LaurentPoly._raw({k: v for k, v in out.items() if v})

    def evaluate(self, **values: Number) -> Fraction:
        missing = [v for v in VARIABLES if v not in values and self._uses(v)]
        if missing:
            msg = f"no value given for {missing}"
            raise ValueError(msg)
        return self.specialize(**values).constant_term()

    def _uses(self, name: str) -> bool:
        i = _INDEX[name]
        return any(key[i] for key in self._terms)

    def map_coefficients(self, func) -> "LaurentPoly":
        return LaurentPoly({k: func(c) for k, c in self._terms.items()})

    # -- text and JSON ------------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for index, (key, c) in enumerate(self.sorted_terms()):
            factors = []
            for name, e2 in zip(VARIABLES, key, strict=True):
                if e2 == 0:
                    continue
                if e2 == 2:
                    factors.append(name)
                elif e2 > 0 and e2 % 2 == 0:
                    factors.append(f"{name}^{e2 // 2}")
                else:
                    factors.append(f"{name}^({_format_exponent(e2)})")
            magnitude = abs(c)
            if factors and magnitude == 1:
                body = "*".join(factors)
            else:
                body = "*".join([_format_coefficient(magnitude), *factors])
            if index == 0:
                pieces.append(f"-{body}" if c < 0 else body)
            else:
                pieces.append(f" - {body}" if c < 0 else f" + {body}")
        return "".join(pieces)

    def __repr__(self) -> str:
        return f"LaurentPoly({self})"

    def to_json(self) -> list[dict]:
        return [
            TermModel(a2=k[0], q2=k[1], t2=k[2], c=_format_coefficient(c)).model_dump()
            for k, c in self.sorted_terms()
        ]

    @classmethod
    def from_json(cls, data: Iterable[dict]) -> "LaurentPoly":
        terms: dict[Key, Fraction] = {}
        for raw in data:
            term = TermModel.model_validate(raw)
            key = (term.a2, term.q2, term.t2)
            terms[key] = terms.get(key, 0) + Fraction(term.c)
        return cls(terms)


A = LaurentPoly.var("a")
Q = LaurentPoly.var("q")
T = LaurentPoly.var("t")
ONE = LaurentPoly.one()

_FACTOR = re.compile(r"^(?P<name>[aqt])(?:\^(?:\((?P<paren>-?\d+(?:/2)?)\)|(?P<plain>\d+)))?$")


def _split_terms(text: str) -> list[str]:
    terms, depth, current = [], 0, ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch in "+-" and depth == 0 and current.strip():
            terms.append(current)
            current = ch
        else:
            current += ch
    if current.strip():
        terms.append(current)
    return terms


def parse(text: str) -> LaurentPoly:
    """
    Parse the canonical printed form back into a LaurentPoly.

    Raises:
        ValueError: If the text is not in canonical form

    """
    text = text.replace(" ", "")
    if text in {"", "0"}:
        return LaurentPoly.zero()
    result: dict[Key, Fraction] = {}
    for raw in _split_terms(text):
        sign = -1 if raw.startswith("-") else 1
        body = raw.lstrip("+-")
        coeff = Fraction(sign)
        exps = [0, 0, 0]
        for factor in body.split("*"):
            match = _FACTOR.match(factor)
            if match:
                exponent = match.group("paren") or match.group("plain") or "1"
                exps[_INDEX[match.group("name")]] += _to_doubled(Fraction(exponent))
                continue
            try:
                coeff *= Fraction(factor)
            except (ValueError, ZeroDivisionError) as e:
                msg = f"cannot parse factor {factor!r} in {text!r}"
                raise ValueError(msg) from e
        key = tuple(exps)
        result[key] = result.get(key, 0) + coeff
    return LaurentPoly(result)


MOTIVIC_CLASSES = {
    "pt": ONE,
    "A1": T**2,
    "Gm": T**2 - 1,
    "P1": 1 + T**2,
}


def motivic(**counts: Number) -> LaurentPoly:
    """
    Virtual weight polynomial of a sum of motivic classes, e.g.
    ``motivic(pt=2, Gm=1)`` for ``2 + [G_m]``.
    """
    total = LaurentPoly.zero()
    for name, count in counts.items():
        if name not in MOTIVIC_CLASSES:
            available = list(MOTIVIC_CLASSES)
            msg = f"Unknown motivic class: {name}. Available: {available}"
            raise ValueError(msg)
        total = total + MOTIVIC_CLASSES[name] * count
    return total


class QSeries:
    """
    A q-series with LaurentPoly coefficients in (a, t), known for all
    q-exponents up to and including ``trunc``.
    """

    __slots__ = ("_coeffs", "_trunc2")

    def __init__(self, coeffs: Mapping["Number | HalfInt", LaurentPoly], trunc: "Number | HalfInt"):
        self._trunc2 = _to_doubled(trunc)
        stored: dict[int, LaurentPoly] = {}
        for exponent, coeff in coeffs.items():
            e2 = _to_doubled(exponent)
            if e2 > self._trunc2 or not coeff:
                continue
            if coeff._uses("q"):
                msg = "QSeries coefficients must not contain q"
                raise ValueError(msg)
            stored[e2] = stored[e2] + coeff if e2 in stored else coeff
        self._coeffs = {e: c for e, c in stored.items() if c}

    @classmethod
    def _raw(cls, coeffs: dict[int, LaurentPoly], trunc2: int) -> "QSeries":
        series = cls.__new__(cls)
        series._coeffs = {e: c for e, c in coeffs.items() if c and e <= trunc2}
        series._trunc2 = trunc2
        return series

    @classmethod
    def from_poly(cls, poly: LaurentPoly, trunc: "Number | HalfInt") -> "QSeries":
        buckets: dict[int, dict[Key, Fraction]] = {}
        for (a2, q2, t2), c in poly.items():
            buckets.setdefault(q2, {})[(a2, 0, t2)] = c
        return cls._raw({e: LaurentPoly._raw(b) for e, b in buckets.items()}, _to_doubled(trunc))

    @classmethod
    def zero(cls, trunc: "Number | HalfInt") -> "QSeries":
        return cls._raw({}, _to_doubled(trunc))

    @property
    def trunc(self) -> HalfInt:
        return HalfInt(self._trunc2)

    def exponents(self) -> list[HalfInt]:
        return [HalfInt(e) for e in sorted(self._coeffs)]

    def __getitem__(self, exponent: "Number | HalfInt") -> LaurentPoly:
        e2 = _to_doubled(exponent)
        if e2 > self._trunc2:
            msg = f"coefficient of q^{_format_exponent(e2)} is beyond the truncation {self.trunc}"
            raise ValueError(msg)
        return self._coeffs.get(e2, LaurentPoly.zero())

    def items(self) -> Iterator[tuple[HalfInt, LaurentPoly]]:
        for e in sorted(self._coeffs):
            yield HalfInt(e), self._coeffs[e]

    def valuation2(self) -> int:
        """Doubled lowest stored exponent, or just past the truncation when empty."""
        return min(self._coeffs) if self._coeffs else self._trunc2 + 1

    def to_poly(self) -> LaurentPoly:
        out: dict[Key, Fraction] = {}
        for e2, coeff in self._coeffs.items():
            for (a2, _, t2), c in coeff.items():
                out[(a2, e2, t2)] = c
        return LaurentPoly._raw(out)

    def truncate(self, trunc: "Number | HalfInt") -> "QSeries":
        t2 = _to_doubled(trunc)
        if t2 > self._trunc2:
            msg = f"cannot extend truncation from {self.trunc} to {HalfInt(t2)}"
            raise ValueError(msg)
        return QSeries._raw(self._coeffs, t2)

    def map_coeffs(self, func) -> "QSeries":
        return QSeries._raw({e: func(c) for e, c in self._coeffs.items()}, self._trunc2)

    def __add__(self, other: "QSeries") -> "QSeries":
        if not isinstance(other, QSeries):
            return NotImplemented
        trunc2 = min(self._trunc2, other._trunc2)
        out = dict(self._coeffs)
        for e, c in other._coeffs.items():
            out[e] = out[e] + c if e in out else c
        return QSeries._raw(out, trunc2)

    def __neg__(self) -> "QSeries":
        return self.map_coeffs(lambda c: -c)

    def __sub__(self, other: "QSeries") -> "QSeries":
        return self + (-other)

    def __mul__(self, other) -> "QSeries":
        if isinstance(other, (int, Fraction)):
            return self.map_coeffs(lambda c: c * other)
        if isinstance(other, LaurentPoly):
            return self.scale(other)
        if not isinstance(other, QSeries):
            return NotImplemented
        trunc2 = min(
            self._trunc2 + min(other.valuation2(), 0),
            other._trunc2 + min(self.valuation2(), 0),
        )
        out: dict[int, LaurentPoly] = {}
        for e1, c1 in self._coeffs.items():
            for e2, c2 in other._coeffs.items():
                e = e1 + e2
                if e > trunc2:
                    continue
                out[e] = out[e] + c1 * c2 if e in out else c1 * c2
        return QSeries._raw(out, trunc2)

    __rmul__ = __mul__

    def scale(self, poly: LaurentPoly) -> "QSeries":
        """Multiply by a Laurent polynomial; its lowest q-power lowers the truncation."""
        if poly.is_zero():
            return QSeries._raw({}, self._trunc2)
        low2 = poly.low_degree("q").doubled
        trunc2 = self._trunc2 + min(low2, 0)
        out: dict[int, LaurentPoly] = {}
        factor = QSeries.from_poly(poly, poly.degree("q"))
        for e1, c1 in self._coeffs.items():
            for e2, c2 in factor._coeffs.items():
                e = e1 + e2
                if e > trunc2:
                    continue
                out[e] = out[e] + c1 * c2 if e in out else c1 * c2
        return QSeries._raw(out, trunc2)

    def shift(self, exponent: "Number | HalfInt") -> "QSeries":
        """Multiply by q^exponent."""
        s2 = _to_doubled(exponent)
        return QSeries._raw({e + s2: c for e, c in self._coeffs.items()}, self._trunc2 + s2)

    def substitute(self, images: Mapping[str, LaurentPoly]) -> "QSeries":
        """
        Monomial substitution on a series.

        ``q`` may only map to a monomial with a positive q-power. Images of
        ``a`` and ``t`` may carry nonnegative q-powers, provided the
        coefficients have nonnegative exponents in the variables whose images
        carry q; this keeps every unknown term above the new truncation.
        """
        q_image = images.get("q", Q)
        ((q_key, _),) = q_image.items() if q_image.is_monomial() else ((None, None),)
        if q_key is None or q_key[1] <= 0:
            msg = f"q must map to a monomial with a positive q-power, got {q_image}"
            raise ValueError(msg)
        for name in ("a", "t"):
            image = images.get(name)
            if image is None:
                continue
            if not image.is_monomial():
                msg = f"image of {name} must be a single monomial, got {image}"
                raise ValueError(msg)
            ((key, _),) = image.items()
            if key[1] < 0:
                msg = f"image of {name} may not lower the q-degree"
                raise ValueError(msg)
            if key[1] > 0:
                i = _INDEX[name]
                if any(k[i] < 0 for c in self._coeffs.values() for k, _ in c.items()):
                    msg = f"coefficients have negative {name}-exponents; truncation would be lost"
                    raise ValueError(msg)
        image_poly = self.to_poly().substitute(images)
        trunc2 = math.floor(Fraction(self._trunc2 * q_key[1], 2))
        return QSeries.from_poly(image_poly, HalfInt(trunc2))

    def coefficients_nonnegative_integers(self) -> bool:
        return all(c.coefficients_nonnegative_integers() for c in self._coeffs.values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        return self._trunc2 == other._trunc2 and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash((self._trunc2, frozenset(self._coeffs.items())))

    def __str__(self) -> str:
        return f"{self.to_poly()} + O(q^({_format_exponent(self._trunc2 + 1)}))"

    def __repr__(self) -> str:
        return f"QSeries({self})"

    def to_json(self) -> dict:
        return SeriesModel(
            trunc2=self._trunc2,
            terms=[TermModel(**term) for term in self.to_poly().to_json()],
        ).model_dump()

    @classmethod
    def from_json(cls, data: dict) -> "QSeries":
        model = SeriesModel.model_validate(data)
        poly = LaurentPoly.from_json([term.model_dump() for term in model.terms])
        return cls.from_poly(poly, HalfInt(model.trunc2))


def series_div_geometric(s: QSeries, b: int, step: int = 1) -> QSeries:
    """
    Divide by (1 - q^step)^b through the geometric expansion
    sum_j binom(b - 1 + j, j) q^(step*j); the truncation is unchanged.
    """
    if b < 0 or step <= 0:
        msg = f"need b >= 0 and step > 0, got b={b}, step={step}"
        raise ValueError(msg)
    if b == 0 or not s._coeffs:
        return s
    trunc2 = s._trunc2
    step2 = 2 * step
    out: dict[int, LaurentPoly] = {}
    for e, c in s._coeffs.items():
        j = 0
        while e + j * step2 <= trunc2:
            target = e + j * step2
            term = c * math.comb(b - 1 + j, j)
            out[target] = out[target] + term if target in out else term
            j += 1
    return QSeries._raw(out, trunc2)


def one_minus_q_power(b: int, trunc: "Number | HalfInt", step: int = 1) -> QSeries:
    """(1 - q^step)^b as a QSeries."""
    poly = (ONE - Q**step) ** b
    return QSeries.from_poly(poly, trunc)


def equal_upto(p: QSeries, r: QSeries, order: "Number | HalfInt") -> bool:
    """
    Compare two series coefficientwise for all q-exponents <= order.

    Raises:
        ValueError: If order exceeds either truncation

    """
    o2 = _to_doubled(order)
    if o2 > min(p._trunc2, r._trunc2):
        msg = f"order {HalfInt(o2)} exceeds a truncation ({p.trunc}, {r.trunc})"
        raise ValueError(msg)
    return first_difference(p, r, order) is None


def first_difference(
    p: QSeries, r: QSeries, order: "Number | HalfInt"
) -> tuple[HalfInt, LaurentPoly, LaurentPoly] | None:
    """The lowest q-exponent <= order where p and r differ, with both coefficients."""
    o2 = _to_doubled(order)
    for e in sorted(set(p._coeffs) | set(r._coeffs)):
        if e > o2:
            break
        left = p._coeffs.get(e, LaurentPoly.zero())
        right = r._coeffs.get(e, LaurentPoly.zero())
        if left != right:
            return HalfInt(e), left, right
    return None


def substitute(p: LaurentPoly, images: Mapping[str, LaurentPoly]) -> LaurentPoly:
    return p.substitute(images)


def substitute_series(s: QSeries, images: Mapping[str, LaurentPoly]) -> QSeries:
    return s.substitute(images)
