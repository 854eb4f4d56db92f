"""Exact truncated power series and the solver for ``G(F(s)) = s**2``.

A series of truncation order ``K`` stores the coefficients of ``s**0 .. s**K``
as :class:`fractions.Fraction`; everything beyond ``K`` is unknown.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

DEFAULT_ORDER = 12


class NonzeroConstantTerm(ValueError):
    """Inner series of a composition has a nonzero constant term."""


class BadNormalization(ValueError):
    """G is not of the form ``s**2 + C_3 s**3 + ...``."""


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        # floats go through their shortest repr so that 0.1 means 1/10
        return Fraction(repr(value))
    return Fraction(value)


@dataclass(frozen=True)
class TruncatedSeries:
    coefficients: tuple[Fraction, ...]

    def __init__(self, coefficients: Iterable, order: int | None = None):
        coeffs = [_as_fraction(c) for c in coefficients]
        if order is not None:
            if order < 0:
                raise ValueError("truncation order must be non-negative")
            coeffs = (coeffs + [Fraction(0)] * (order + 1))[: order + 1]
        if not coeffs:
            raise ValueError("a series needs at least the constant coefficient")
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    truncation_order = order

    @classmethod
    def zero(cls, order: int = DEFAULT_ORDER) -> TruncatedSeries:
        return cls([], order)

    @classmethod
    def monomial(cls, power: int, order: int = DEFAULT_ORDER, coefficient=1) -> TruncatedSeries:
        coeffs = [Fraction(0)] * (order + 1)
        if power <= order:
            coeffs[power] = _as_fraction(coefficient)
        return cls(coeffs)

    def __getitem__(self, k: int) -> Fraction:
        if k < 0 or k > self.order:
            raise IndexError(f"coefficient {k} is beyond truncation order {self.order}")
        return self.coefficients[k]

    def __len__(self) -> int:
        return len(self.coefficients)

    def truncate(self, order: int) -> TruncatedSeries:
        if order > self.order:
            raise ValueError("cannot raise the truncation order of a series")
        return TruncatedSeries(self.coefficients[: order + 1])

    def __add__(self, other: TruncatedSeries) -> TruncatedSeries:
        return add(self, other)

    def __sub__(self, other: TruncatedSeries) -> TruncatedSeries:
        k = min(self.order, other.order)
        return TruncatedSeries(a - b for a, b in zip(self.coefficients[: k + 1], other.coefficients))

    def __neg__(self) -> TruncatedSeries:
        return TruncatedSeries(-c for c in self.coefficients)

    def __mul__(self, other) -> TruncatedSeries:
        if isinstance(other, TruncatedSeries):
            return multiply(self, other)
        c = _as_fraction(other)
        return TruncatedSeries(c * a for a in self.coefficients)

    __rmul__ = __mul__

    def __call__(self, inner: TruncatedSeries) -> TruncatedSeries:
        return compose(self, inner)

    def reflect(self) -> TruncatedSeries:
        """Return the series of ``s -> self(-s)``."""
        return TruncatedSeries(c if k % 2 == 0 else -c for k, c in enumerate(self.coefficients))

    def to_floats(self) -> list[float]:
        return [float(c) for c in self.coefficients]

    def to_strings(self) -> list[str]:
        return [str(c) for c in self.coefficients]

    def to_json(self) -> str:
        return json.dumps(self.to_strings())

    @classmethod
    def from_strings(cls, items: Sequence[str]) -> TruncatedSeries:
        return cls(Fraction(str(x).strip()) for x in items)

    @classmethod
    def from_json(cls, text: str) -> TruncatedSeries:
        return cls.from_strings(json.loads(text))

    def pretty(self, var: str = "s") -> str:
        terms = []
        for k, c in enumerate(self.coefficients):
            if c == 0:
                continue
            mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            if mono and c == 1:
                body = mono
            elif mono and c == -1:
                body = "-" + mono
            else:
                body = f"{c}" + (f"*{mono}" if mono else "")
            terms.append(body)
        text = " + ".join(terms).replace("+ -", "- ") if terms else "0"
        return f"{text} + O({var}^{self.order + 1})"

    def __str__(self) -> str:
        return self.pretty()


def add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    k = min(a.order, b.order)
    return TruncatedSeries(x + y for x, y in zip(a.coefficients[: k + 1], b.coefficients))


def multiply(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    k = min(a.order, b.order)
    out = [Fraction(0)] * (k + 1)
    for i, x in enumerate(a.coefficients[: k + 1]):
        if x == 0:
            continue
        for j, y in enumerate(b.coefficients[: k + 1 - i]):
            out[i + j] += x * y
    return TruncatedSeries(out)


def compose(g: TruncatedSeries, f: TruncatedSeries) -> TruncatedSeries:
    """Return ``g(f(s))`` truncated to ``min(g.order, f.order)``."""
    if f.coefficients[0] != 0:
        raise NonzeroConstantTerm(f"inner series has constant term {f.coefficients[0]}")
    k = min(g.order, f.order)
    f = f.truncate(k)
    # Horner: g0 + f*(g1 + f*(g2 + ...))
    acc = TruncatedSeries([g.coefficients[k]], k)
    for j in range(k - 1, -1, -1):
        acc = multiply(acc, f)
        acc = TruncatedSeries((acc.coefficients[0] + g.coefficients[j],) + acc.coefficients[1:])
    return acc


def _check_normalized(G: TruncatedSeries) -> None:
    if G.order < 2:
        raise BadNormalization("G must be known at least through s^2")
    if G[0] != 0 or G[1] != 0 or G[2] != 1:
        raise BadNormalization(
            f"expected G = s^2 + O(s^3), got leading coefficients {G[0]}, {G[1]}, {G[2]}"
        )


def solve_branch(G: TruncatedSeries, sign: int) -> TruncatedSeries:
    """Solve ``G(F(s)) = s**2`` for the branch with ``F'(0) = sign``.

    ``G`` of order ``K`` determines ``c_1 .. c_{K-1}``; the result has order
    ``K - 1``.  Since ``G`` has no linear term, ``G(F)`` is then known through
    ``s**K`` and equals ``s**2`` there.

    The coefficient of ``s**k`` in ``G(F)`` is linear in ``c_{k-1}`` with slope
    ``2 c_1``; every other contribution involves ``c_1 .. c_{k-2}`` only, so the
    coefficients are fixed one at a time in increasing order.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    _check_normalized(G)
    K = G.order
    c = [Fraction(0), Fraction(sign)]
    # pw[j][m] is the s**m coefficient of F**j, filled one column per step
    pw = [None, c, [Fraction(0), Fraction(0), Fraction(1)]]
    for k in range(3, K + 1):
        c.append(Fraction(0))
        for j in range(2, k + 1):
            if j == len(pw):
                pw.append([Fraction(0)] * j)
            prev = pw[j - 1]
            pw[j].append(sum((prev[i] * c[k - i] for i in range(j - 1, k)), Fraction(0)))
        # with c_{k-1} = 0 the residual is P + c_1^k C_k
        residual = sum((G[j] * pw[j][k] for j in range(2, k + 1)), Fraction(0))
        c[k - 1] = -residual / (2 * c[1])
        # c_{k-1} enters column k only through the 2 c_1 c_{k-1} term of F**2
        pw[2][k] += 2 * c[1] * c[k - 1]
    return TruncatedSeries(c[:K], K - 1)


def ball_mass_expansion(G: TruncatedSeries) -> TruncatedSeries:
    """Taylor series of ``f(r) = f_+(r) - f_-(r)`` for the squared-distance series ``G``."""
    return solve_branch(G, 1) - solve_branch(G, -1)


def squared_distance_series(C: Sequence, order: int | None = None) -> TruncatedSeries:
    """Build G from a list of coefficients ``[C_0, C_1, C_2, ...]``.

    ``C_0 = C_1 = 0`` and ``C_2 = 1`` are enforced, so callers may pass either the
    full list or one starting at ``C_3`` through :func:`from_higher_coefficients`.
    """
    G = TruncatedSeries(C, order)
    _check_normalized(G)
    return G


def from_higher_coefficients(higher: Sequence, order: int | None = None) -> TruncatedSeries:
    """``s**2 + higher[0] s**3 + higher[1] s**4 + ...``"""
    return TruncatedSeries([0, 0, 1, *higher], order)


def circle_series(radius, order: int = DEFAULT_ORDER) -> TruncatedSeries:
    """Squared chord length ``2R^2 (1 - cos(s/R))`` as an exact series."""
    R = _as_fraction(radius)
    coeffs = [Fraction(0)] * (order + 1)
    fact = 1
    for j in range(1, order // 2 + 1):
        fact *= (2 * j - 1) * (2 * j)
        sign = 1 if j % 2 == 1 else -1
        coeffs[2 * j] = Fraction(2 * sign, fact) * R ** (2 - 2 * j)
    return TruncatedSeries(coeffs)
