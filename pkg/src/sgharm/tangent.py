"""One-sided tangent directions of the boundary curve.

Directions live on the projective cone spanned by the two major
eigenvectors, charted by the coefficient ratio in the orthogonal chart
basis.  In that chart both projective generator maps are Moebius maps with
Lipschitz constant 3/4, which gives certified stopping rules; at rational
parameters the direction is an exact quadratic number.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Union

from .exact import (
    CHART_BASIS,
    DIFFERENCE_CONE,
    Expansion,
    ExpansionVariant,
    QuadraticValue,
    RationalLike,
    Vec3Q,
    expand,
    quad_sign,
)
from .harmonic import LinearForm

CHART_LO = Fraction(-1, 3)
CHART_HI = Fraction(1, 3)
CHART_DIAMETER = Fraction(2, 3)
CONTRACTION_FACTOR = Fraction(3, 4)

# Orientation of the chart along the side, frozen after sampling: the chart
# decreases from 1/3 at parameter 0 to -1/3 at parameter 1.
CHART_DECREASES = True

# Chart-basis generator matrices scaled by 10; only the projective action is
# used, so the scale is irrelevant.
_PROJ_GEN = {"0": ((3, 1), (3, 5)), "1": ((3, -1), (-3, 5))}

Mat2i = tuple[tuple[int, int], tuple[int, int]]


class ConeError(ValueError):
    """Vector is outside the difference cone."""


class SideError(ValueError):
    """One-sided limit requested on the wrong side of an endpoint."""


class Side(Enum):
    RIGHT = "right"
    LEFT = "left"


class KernelVerdict(Enum):
    IN_KERNEL = "in_kernel"
    NOT_IN_KERNEL = "not_in_kernel"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class ProjDir:
    """Chart coordinate of a direction, with a certified error radius."""

    chart: Fraction
    exact: bool
    error: Optional[Fraction] = None
    source: Optional[Expansion] = None
    side: Optional[Side] = None


@dataclass(frozen=True)
class QuadDir:
    """Exact direction chart at a rational parameter."""

    chart: QuadraticValue
    period: str
    preperiod: str
    side: Side


def chart_of(v: Vec3Q) -> Fraction:
    """Chart coordinate of a cone vector: ratio a/b in the chart basis."""
    if not DIFFERENCE_CONE.contains(v):
        raise ConeError(f"{v} is not in the difference cone")
    a = v.z
    b = 2 * v.y + v.z
    return a / b


def projective_word_matrix(word: str) -> Mat2i:
    """Integer chart-basis matrix (up to scale) of a binary word product."""
    m = ((1, 0), (0, 1))
    for ch in word:
        if ch not in _PROJ_GEN:
            raise ValueError(f"word letter must be 0 or 1, got {ch!r}")
        g = _PROJ_GEN[ch]
        m = (
            (m[0][0] * g[0][0] + m[0][1] * g[1][0], m[0][0] * g[0][1] + m[0][1] * g[1][1]),
            (m[1][0] * g[0][0] + m[1][1] * g[1][0], m[1][0] * g[0][1] + m[1][1] * g[1][1]),
        )
    return m


def _moebius(m: Mat2i, x: Fraction) -> Fraction:
    (p, q), (r, s) = m
    den = r * x + s
    if den == 0:
        raise ConeError("chart left the domain of the projective map")
    return (p * x + q) / den


def apply_projective(word: str, chart: Fraction) -> Fraction:
    """Image of a chart coordinate under the projective map of a word."""
    return _moebius(projective_word_matrix(word), Fraction(chart))


def _iterations_for(tol: Fraction) -> int:
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    n = 0
    cur = CHART_DIAMETER
    while cur > tol:
        cur = cur * 3 / 4
        n += 1
        if n > 20000:
            raise ValueError("tolerance is unreasonably small")
    return n


def _expansion_for(s, side: Side) -> Expansion:
    if isinstance(s, Expansion):
        frac = s.value()
        given: Optional[Expansion] = s
    else:
        frac = Fraction(s)
        given = None
    if side is Side.RIGHT:
        if frac >= 1:
            raise SideError("no right-side limit at parameter 1")
        want = ExpansionVariant.UPPER
    else:
        if frac <= 0:
            raise SideError("no left-side limit at parameter 0")
        want = ExpansionVariant.LOWER
    if given is not None and given.variant is want:
        return given
    return expand(frac, want)


def direction_at(s: Union[Expansion, RationalLike], side: Side = Side.RIGHT,
                 tol: Union[float, Fraction] = Fraction(1, 10 ** 9)) -> ProjDir:
    """One-sided direction chart within tol, by iterating the projective maps."""
    e = _expansion_for(s, side)
    tol = Fraction(tol)
    n = _iterations_for(tol)
    chart = _moebius(projective_word_matrix(e.bits(n)), Fraction(0))
    err = CHART_DIAMETER * CONTRACTION_FACTOR ** n
    return ProjDir(chart=chart, exact=False, error=err, source=e, side=side)


def _attracting_fixed_point(m: Mat2i) -> QuadraticValue:
    """The unique fixed point of the Moebius map inside the chart interval."""
    (p, q), (r, s) = m
    if r == 0:
        if p == s:
            raise ValueError("projective map is the identity")
        return QuadraticValue.from_pair(Fraction(q, s - p), Fraction(0), Fraction(0))
    disc = Fraction((s - p) ** 2 + 4 * r * q)
    if disc < 0:
        raise ValueError("projective map has no real fixed point")
    t0 = Fraction(p - s, r)
    d0 = disc / Fraction(r * r)
    candidates = [QuadraticValue(t0, d0, True), QuadraticValue(t0, d0, False)]
    inside = [c for c in candidates
              if c.compare(CHART_LO) >= 0 and c.compare(CHART_HI) <= 0]
    if len(inside) != 1:
        raise ValueError("expected exactly one fixed point in the chart interval")
    return inside[0]


def _moebius_quad(m: Mat2i, x: QuadraticValue) -> QuadraticValue:
    (pp, qq), (rr, ss) = m
    p, q = x.as_pair()
    d = x.d
    num = (pp * p + qq, pp * q)
    den = (rr * p + ss, rr * q)
    norm = den[0] * den[0] - den[1] * den[1] * d
    if norm == 0:
        raise ConeError("chart left the domain of the projective map")
    rp = (num[0] * den[0] - num[1] * den[1] * d) / norm
    rq = (num[1] * den[0] - num[0] * den[1]) / norm
    return QuadraticValue.from_pair(rp, rq, d)


def direction_at_rational(s: RationalLike, side: Optional[Side] = None) -> QuadDir:
    """Exact one-sided direction at a rational parameter.

    The chart is the dominant eigendirection of the period's restriction,
    pushed through the preperiod's projective map.
    """
    frac = Fraction(s)
    if not 0 <= frac <= 1:
        raise ValueError(f"{frac} is outside [0,1]")
    if side is None:
        side = Side.RIGHT if frac < 1 else Side.LEFT
    e = _expansion_for(frac, side)
    fixed = _attracting_fixed_point(projective_word_matrix(e.period))
    chart = fixed
    if e.preperiod:
        chart = _moebius_quad(projective_word_matrix(e.preperiod), fixed)
    return QuadDir(chart=chart, period=e.period, preperiod=e.preperiod, side=side)


def _form_chart_coeffs(form: LinearForm) -> tuple[Fraction, Fraction]:
    # value along direction with chart x is proportional to B*x + A
    return (form(CHART_BASIS[1]), form(CHART_BASIS[0]))


MAX_REFINE_ERROR = Fraction(1, 2 ** 256)


def kernel_test(form: LinearForm, direction: Union[QuadDir, ProjDir]) -> KernelVerdict:
    """Exact or interval test of whether a direction lies in a form's kernel."""
    A, B = _form_chart_coeffs(form)
    if isinstance(direction, QuadDir):
        p, q = direction.chart.as_pair()
        sign = quad_sign(A + B * p, B * q, direction.chart.d)
        return KernelVerdict.IN_KERNEL if sign == 0 else KernelVerdict.NOT_IN_KERNEL
    pd = direction
    while True:
        lo = A + B * pd.chart - abs(B) * pd.error
        hi = A + B * pd.chart + abs(B) * pd.error
        if lo > 0 or hi < 0:
            return KernelVerdict.NOT_IN_KERNEL
        if pd.source is None or pd.error <= MAX_REFINE_ERROR:
            return KernelVerdict.UNDETERMINED
        pd = direction_at(pd.source, pd.side or Side.RIGHT,
                          tol=max(pd.error / 1024, MAX_REFINE_ERROR))


def direction_vector(direction) -> tuple[float, float, float]:
    """Unit vector (2-norm) in the plane x+y+z=0 for a direction chart."""
    if isinstance(direction, QuadDir):
        x = float(direction.chart)
    elif isinstance(direction, ProjDir):
        x = float(direction.chart)
    elif isinstance(direction, QuadraticValue):
        x = float(direction)
    else:
        x = float(Fraction(direction))
    vx, vy, vz = (-x / 2 - 0.5, -x / 2 + 0.5, x)
    norm = math.sqrt(vx * vx + vy * vy + vz * vz)
    return (vx / norm, vy / norm, vz / norm)
