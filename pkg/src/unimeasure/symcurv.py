"""Curvature polynomials for the Taylor coefficients of ``|gamma(s) - gamma(0)|**2``.

Curvature symbols are ``k_h`` (``h >= 1``) together with their arclength
derivatives.  A factor is the pair ``(h, m)`` meaning the ``m``-th derivative of
``k_h``; a monomial is a sorted tuple of factors (repetition encodes powers).

Derivatives of a unit-speed curve are expanded in its Frenet frame with
``E_j' = -k_{j-1} E_{j-1} + k_j E_{j+1}``, either by direct formal
differentiation or by summing weighted walks on the chain graph
``* -> E_1 - E_2 - ... - E_n``.  The two routes must agree.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

Factor = tuple[int, int]
Key = tuple[Factor, ...]

DEFAULT_ORDER_BOUND = 12


class StructureViolation(RuntimeError):
    """The top-monomial structure of an even coefficient is not as expected."""


@dataclass(frozen=True)
class CurvatureMonomial:
    factors: Key
    coefficient: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(sorted(self.factors)))
        object.__setattr__(self, "coefficient", Fraction(self.coefficient))

    def degree(self) -> int:
        return len(self.factors)

    def derivative_count(self) -> int:
        return sum(m for _, m in self.factors)

    def powers(self) -> dict[Factor, int]:
        out: dict[Factor, int] = {}
        for f in self.factors:
            out[f] = out.get(f, 0) + 1
        return out

    def contains_index(self, h: int) -> bool:
        return any(i == h for i, _ in self.factors)

    def __str__(self) -> str:
        return format_monomial(self.factors, self.coefficient)


def _factor_name(factor: Factor) -> str:
    h, m = factor
    return f"k{h}" + "'" * m


def format_monomial(key: Key, coefficient: Fraction) -> str:
    parts = []
    for factor, group in itertools.groupby(key):
        e = len(list(group))
        parts.append(_factor_name(factor) + (f"^{e}" if e > 1 else ""))
    if not parts:
        return str(coefficient)
    return f"{coefficient} * " + " * ".join(parts)


class CurvaturePolynomial(Mapping[Key, Fraction]):
    """Immutable sparse polynomial ``{monomial key: coefficient}`` with no zero entries."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Key, Fraction] | Iterable[tuple[Key, Fraction]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Key, Fraction] = defaultdict(Fraction)
        for key, c in items:
            acc[tuple(sorted(key))] += Fraction(c)
        self._terms = {k: acc[k] for k in sorted(acc) if acc[k] != 0}

    @classmethod
    def constant(cls, c) -> CurvaturePolynomial:
        return cls({(): Fraction(c)})

    @classmethod
    def symbol(cls, h: int, m: int = 0) -> CurvaturePolynomial:
        return cls({((h, m),): Fraction(1)})

    def __getitem__(self, key: Key) -> Fraction:
        return self._terms[key]

    def __iter__(self) -> Iterator[Key]:
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, CurvaturePolynomial):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == CurvaturePolynomial.constant(other)._terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash(tuple(self._terms.items()))

    def is_zero(self) -> bool:
        return not self._terms

    def monomials(self) -> list[CurvatureMonomial]:
        return [CurvatureMonomial(k, c) for k, c in self._terms.items()]

    def __add__(self, other: CurvaturePolynomial) -> CurvaturePolynomial:
        return CurvaturePolynomial(itertools.chain(self._terms.items(), other._terms.items()))

    def __neg__(self) -> CurvaturePolynomial:
        return CurvaturePolynomial({k: -c for k, c in self._terms.items()})

    def __sub__(self, other: CurvaturePolynomial) -> CurvaturePolynomial:
        return self + (-other)

    def __mul__(self, other) -> CurvaturePolynomial:
        if not isinstance(other, CurvaturePolynomial):
            c = Fraction(other)
            return CurvaturePolynomial({k: c * v for k, v in self._terms.items()})
        return CurvaturePolynomial(
            (a + b, ca * cb)
            for (a, ca), (b, cb) in itertools.product(self._terms.items(), other._terms.items())
        )

    __rmul__ = __mul__

    def differentiate(self) -> CurvaturePolynomial:
        """Arclength derivative, by the product rule over the factors."""
        out = []
        for key, c in self._terms.items():
            for i, (h, m) in enumerate(key):
                out.append((key[:i] + ((h, m + 1),) + key[i + 1 :], c))
        return CurvaturePolynomial(out)

    def evaluate(self, kappas: Sequence, derivatives: Mapping[Factor, object] | None = None):
        """Value at curvatures ``kappas[h-1]``; derivative factors default to 0 (constant curvatures)."""
        total = 0
        for key, c in self._terms.items():
            term = c
            for h, m in key:
                if m == 0:
                    v = kappas[h - 1] if h <= len(kappas) else 0
                else:
                    v = (derivatives or {}).get((h, m), 0)
                term = term * v
                if term == 0:
                    break
            total = total + term
        return total

    def to_lines(self) -> list[str]:
        if not self._terms:
            return ["0"]
        return [format_monomial(k, c) for k, c in self._terms.items()]

    def to_json_obj(self) -> list[dict]:
        return [
            {"coefficient": str(c), "factors": [[h, m] for h, m in k]}
            for k, c in self._terms.items()
        ]

    @classmethod
    def from_json_obj(cls, items: list[dict]) -> CurvaturePolynomial:
        return cls((tuple((int(h), int(m)) for h, m in it["factors"]), Fraction(it["coefficient"])) for it in items)

    def __str__(self) -> str:
        return " + ".join(self.to_lines()).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"CurvaturePolynomial({self})"


ZERO = CurvaturePolynomial()
ONE = CurvaturePolynomial.constant(1)


@dataclass(frozen=True)
class FrameExpansion:
    derivative_order: int
    ambient_dimension: int
    components: tuple[CurvaturePolynomial, ...]

    def __post_init__(self):
        if len(self.components) != self.ambient_dimension:
            raise ValueError("one component per frame vector is required")

    def __getitem__(self, j: int) -> CurvaturePolynomial:
        """Coefficient of ``E_j`` (1-based)."""
        return self.components[j - 1]


def kappa(h: int, n: int) -> CurvaturePolynomial:
    """``k_h`` as a polynomial, zero outside ``1 <= h <= n-1``."""
    if 1 <= h <= n - 1:
        return CurvaturePolynomial.symbol(h)
    return ZERO


def _differentiate_components(comps: Sequence[CurvaturePolynomial], n: int) -> tuple[CurvaturePolynomial, ...]:
    out = [p.differentiate() for p in comps]
    for j, p in enumerate(comps, start=1):
        if p.is_zero():
            continue
        # p E_j  ->  p (-k_{j-1} E_{j-1} + k_j E_{j+1})
        if j > 1:
            out[j - 2] = out[j - 2] - p * kappa(j - 1, n)
        if j < n:
            out[j] = out[j] + p * kappa(j, n)
    return tuple(out)


@lru_cache(maxsize=None)
def expand_derivative(alpha: int, n: int) -> FrameExpansion:
    """Frenet-frame coordinates of ``gamma^(alpha)`` by repeated differentiation."""
    if alpha < 1 or n < 2:
        raise ValueError("need alpha >= 1 and n >= 2")
    if alpha == 1:
        comps = (ONE,) + (ZERO,) * (n - 1)
    else:
        comps = _differentiate_components(expand_derivative(alpha - 1, n).components, n)
    return FrameExpansion(alpha, n, comps)


@dataclass(frozen=True)
class GraphPath:
    """A walk ``* -> E_1 -> ...`` on the frame graph together with its derivative placements.

    ``vertices`` lists the frame indices visited after ``*``; the walk's
    ``kappa`` factors are ``(h, sign)`` pairs, one per step between frame
    vectors.  Each placement assigns a derivative count to every factor, and
    ``weights`` holds the number of Leibniz-rule orderings producing it.
    """

    vertices: tuple[int, ...]
    alpha: int
    placements: tuple[tuple[int, ...], ...] = field(default=())
    weights: tuple[int, ...] = field(default=())

    @property
    def length(self) -> int:
        """Number of steps including the initial ``* -> E_1``."""
        return len(self.vertices)

    @property
    def end(self) -> int:
        return self.vertices[-1]

    @property
    def factors(self) -> tuple[tuple[int, int], ...]:
        out = []
        for a, b in zip(self.vertices, self.vertices[1:]):
            out.append((a, 1) if b == a + 1 else (b, -1))
        return tuple(out)

    def monomials(self) -> list[CurvatureMonomial]:
        facs = self.factors
        sign = math.prod(s for _, s in facs)
        return [
            CurvatureMonomial(tuple((h, m) for (h, _), m in zip(facs, place)), Fraction(sign * w))
            for place, w in zip(self.placements, self.weights)
        ]


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All ``parts``-tuples of non-negative integers summing to ``total`` (stars and bars)."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for bars in itertools.combinations(range(total + parts - 1), parts - 1):
        prev = -1
        out = []
        for b in bars:
            out.append(b - prev - 1)
            prev = b
        out.append(total + parts - 2 - prev)
        yield tuple(out)


def leibniz_weight(placement: Sequence[int]) -> int:
    """Number of differentiation orders yielding a given derivative placement.

    Factor ``i`` is created by the ``i``-th frame step and may only be
    differentiated afterwards.  Among the ``L_i`` operations after that step,
    the ``m_i`` derivative hits on factor ``i`` can sit anywhere; the rest start
    with step ``i+1``.
    """
    p = len(placement)
    weight = 1
    for i in range(p):
        later = (p - 1 - i) + sum(placement[i:])
        weight *= math.comb(later, placement[i])
    return weight


def _walks(n: int, max_len: int) -> Iterator[tuple[int, ...]]:
    stack = [(1,)]
    while stack:
        walk = stack.pop()
        yield walk
        if len(walk) == max_len:
            continue
        last = walk[-1]
        for nxt in (last - 1, last + 1):
            if 1 <= nxt <= n:
                stack.append(walk + (nxt,))


def enumerate_paths(alpha: int, n: int, end_j: int) -> list[GraphPath]:
    """All admissible walks of length at most ``alpha`` ending at ``E_{end_j}``."""
    if not 1 <= end_j <= n:
        raise ValueError("end_j must lie in 1..n")
    out = []
    for walk in _walks(n, alpha):
        if walk[-1] != end_j:
            continue
        n_factors = len(walk) - 1
        extra = alpha - len(walk)
        places = tuple(_compositions(extra, n_factors))
        if not places:
            continue
        out.append(GraphPath(walk, alpha, places, tuple(leibniz_weight(p) for p in places)))
    out.sort(key=lambda p: (p.length, p.vertices))
    return out


def expansion_from_paths(alpha: int, n: int) -> FrameExpansion:
    comps = []
    for j in range(1, n + 1):
        terms = []
        for path in enumerate_paths(alpha, n, j):
            terms.extend((m.factors, m.coefficient) for m in path.monomials())
        comps.append(CurvaturePolynomial(terms))
    return FrameExpansion(alpha, n, tuple(comps))


def inner(a: FrameExpansion, b: FrameExpansion) -> CurvaturePolynomial:
    """Scalar product in the orthonormal frame."""
    total = ZERO
    for p, q in zip(a.components, b.components):
        if not p.is_zero() and not q.is_zero():
            total = total + p * q
    return total


@lru_cache(maxsize=None)
def C_coefficient(k: int, n: int) -> CurvaturePolynomial:
    """Coefficient of ``s**k`` in ``|gamma(s) - gamma(0)|**2`` as a curvature polynomial."""
    if k < 2:
        raise ValueError("k must be at least 2")
    total = ZERO
    for h in range(1, k):
        hp = k - h
        w = Fraction(1, math.factorial(h) * math.factorial(hp))
        total = total + inner(expand_derivative(h, n), expand_derivative(hp, n)) * w
    return total


def specialize_constant(p: CurvaturePolynomial, up_to_h: int) -> CurvaturePolynomial:
    """Drop every monomial holding a derivative of some ``k_h`` with ``h <= up_to_h``."""
    return CurvaturePolynomial(
        (key, c) for key, c in p.items() if not any(m >= 1 and h <= up_to_h for h, m in key)
    )


@dataclass(frozen=True)
class OddVanishing:
    holds: bool
    k: int
    survivors: tuple[CurvatureMonomial, ...]


def verify_odd_vanishing(h: int, n: int) -> OddVanishing:
    """Check that ``C_{2h+3}`` vanishes once ``k_1 .. k_h`` are constant."""
    if h < 1:
        raise ValueError("h must be at least 1")
    k = 2 * h + 3
    reduced = specialize_constant(C_coefficient(k, n), h)
    return OddVanishing(reduced.is_zero(), k, tuple(reduced.monomials()))


def top_monomial(h: int, n: int) -> CurvatureMonomial:
    """The ``k_{h+1}``-bearing part of ``C_{2(h+2)}`` with ``k_1 .. k_h`` constant.

    Raises :class:`StructureViolation` unless that part is a single multiple of
    ``(k_1 ... k_{h+1})**2``.  The sign is not checked here.
    """
    if n < h + 2:
        raise ValueError("need n >= h + 2 for k_{h+1} to exist")
    k = 2 * (h + 2)
    reduced = specialize_constant(C_coefficient(k, n), h)
    bearing = [m for m in reduced.monomials() if m.contains_index(h + 1)]
    if len(bearing) != 1:
        raise StructureViolation(
            f"C_{k} has {len(bearing)} monomials with k{h + 1}: " + "; ".join(map(str, bearing))
        )
    expected = tuple(sorted((j, 0) for j in range(1, h + 2) for _ in range(2)))
    if bearing[0].factors != expected:
        raise StructureViolation(f"top monomial of C_{k} is {bearing[0]}, not (k1...k{h + 1})^2")
    return bearing[0]


def extract_top_monomial(h: int, n: int) -> CurvatureMonomial:
    """:func:`top_monomial`, additionally requiring a strictly positive coefficient.

    The computed coefficients alternate in sign with ``h`` (``-1/12`` for
    ``C_4``, ``+1/360`` for ``C_6``), so this raises for even ``h``.
    """
    mono = top_monomial(h, n)
    if mono.coefficient <= 0:
        raise StructureViolation(
            f"top monomial of C_{2 * (h + 2)} is {mono}: coefficient is not positive"
        )
    return mono
