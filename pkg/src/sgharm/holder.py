"""Holder exponents and derivative classification along the side.

Exact exponents at rational parameters through the dominant eigenvalue of
the period's plane restriction, log-space norm estimates on arbitrary bit
streams, transition-density bounds, the exponent table for short periods,
and the two exploratory experiments.
"""

from __future__ import annotations

import math
import random
import statistics
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from mpmath import iv, mp

from .exact import (
    Expansion,
    QuadraticValue,
    RationalLike,
    ScaledIntMat2,
    edge_word_matrix,
    expand_auto,
    expansion_value,
    max_cyclic_run,
    necklace_classes,
    transition_density,
)
from .harmonic import LinearForm
from .tangent import KernelVerdict, Side, direction_at_rational, kernel_test

LN2 = math.log(2.0)
LN5 = math.log(5.0)

# Exponent at every dyadic parameter; also the global lower bound.
MIN_EXPONENT = math.log2(5.0 / 3.0)

TABLE_LENGTH_CAP = 20


class TableCapExceeded(RuntimeError):
    """Requested table length is above the configured cap."""


class DerivativeClass(Enum):
    ZERO = "zero"
    INFINITE = "infinite"
    EXCEPTIONAL = "exceptional"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class HolderReport:
    """Full exponent analysis of one rational parameter."""

    s: Fraction
    expansion: Expansion
    period: str
    period_length: int
    scaled_trace: int
    top_eigenvalue: QuadraticValue
    alpha: float
    alpha_lo: float
    alpha_hi: float
    derivative_class: DerivativeClass

    @property
    def enclosure_width(self) -> float:
        return self.alpha_hi - self.alpha_lo

    def to_dict(self) -> dict:
        return {
            "s": str(self.s),
            "expansion": str(self.expansion),
            "period": self.period,
            "period_length": self.period_length,
            "scaled_trace": self.scaled_trace,
            "alpha": self.alpha,
            "alpha_enclosure_width": self.enclosure_width,
            "derivative_class": self.derivative_class.value,
        }

    def csv_row(self) -> list[str]:
        return [str(self.s), self.period, str(self.period_length),
                str(self.scaled_trace), repr(self.alpha),
                repr(self.enclosure_width), self.derivative_class.value]


TABLE_CSV_HEADER = ["s", "period", "n", "scaled_trace", "alpha",
                    "alpha_enclosure_width", "derivative_class"]


@dataclass(frozen=True)
class EstimateTrace:
    """Exponent estimates read off finite prefixes of a bit stream."""

    points: tuple[tuple[int, float], ...]
    norm: str

    def final(self) -> float:
        return self.points[-1][1]


def _iv_fraction(f: Fraction):
    return iv.mpf(f.numerator) / iv.mpf(f.denominator)


def alpha_enclosure(T: Fraction, disc: Fraction, n: int,
                    width: float = 1e-12, exclude_one: bool = True) -> tuple[float, float]:
    """Certified float enclosure of ln(lam)/(n ln 1/2) for lam = (T+sqrt(disc))/2.

    Precision is doubled until the enclosure is narrower than `width` and,
    when requested, separated from 1 (always possible: the exponent of a
    rational parameter is never 1).
    """
    prec = 64
    while True:
        saved = iv.prec
        try:
            iv.prec = prec
            lam = (_iv_fraction(T) + iv.sqrt(_iv_fraction(disc))) / 2
            ok = lam.a > 0
            if ok:
                alpha = iv.log(lam) / (n * iv.log(iv.mpf(0.5)))
                lo = math.nextafter(float(mp.mpf(alpha.a)), -math.inf)
                hi = math.nextafter(float(mp.mpf(alpha.b)), math.inf)
        finally:
            iv.prec = saved
        if ok and hi - lo <= width and not (exclude_one and lo <= 1.0 <= hi):
            return lo, hi
        prec *= 2
        if prec > 1 << 15:
            raise ArithmeticError("exponent enclosure did not converge")


def _period_data(period: str) -> tuple[ScaledIntMat2, Fraction, Fraction, int]:
    m = edge_word_matrix(period)
    T = m.trace()
    D = m.det()
    n = len(period)
    if D != Fraction(3, 25) ** n:
        raise AssertionError("restriction determinant is off")
    disc = T * T - 4 * D
    return m, T, disc, n


def _exact_class(period: str) -> DerivativeClass:
    """Exact comparison of the dominant eigenvalue with (1/2)**n."""
    _, T, disc, n = _period_data(period)
    lam = QuadraticValue(T, disc)
    cmp = lam.compare(Fraction(1, 1 << n))
    if cmp == 0:
        raise AssertionError("exponent 1 is impossible at rational parameters")
    return DerivativeClass.ZERO if cmp < 0 else DerivativeClass.INFINITE


def holder_exponent(s: RationalLike, width: float = 1e-12) -> HolderReport:
    """Exact exponent report at a rational parameter in [0,1].

    The preperiod of the expansion is irrelevant to the exponent and is
    dropped; only the period word enters.
    """
    frac = Fraction(s)
    if not 0 <= frac <= 1:
        raise ValueError(f"{frac} is outside [0,1]")
    e = expand_auto(frac)
    m, T, disc, n = _period_data(e.period)
    scaled = m.entries[0][0] + m.entries[1][1]
    lam = QuadraticValue(T, disc)
    lo, hi = alpha_enclosure(T, disc, n, width=width, exclude_one=True)
    cls = DerivativeClass.ZERO if lam.compare(Fraction(1, 1 << n)) < 0 \
        else DerivativeClass.INFINITE
    return HolderReport(
        s=frac, expansion=e, period=e.period, period_length=n,
        scaled_trace=scaled, top_eigenvalue=lam,
        alpha=0.5 * (lo + hi), alpha_lo=lo, alpha_hi=hi,
        derivative_class=cls,
    )


def _ln_big(x: int) -> float:
    nb = x.bit_length()
    if nb <= 512:
        return math.log(x)
    shift = nb - 64
    return math.log(x >> shift) + shift * LN2


def _ln_norm(entries, norm: str) -> float:
    vals = [entries[0][0], entries[0][1], entries[1][0], entries[1][1]]
    if norm == "fro":
        return 0.5 * _ln_big(sum(v * v for v in vals))
    if norm == "max":
        return _ln_big(max(abs(v) for v in vals))
    raise ValueError(f"unknown norm {norm!r}")


_EDGE_GEN_INT = {"0": ((3, 0), (1, 1)), "1": ((2, -1), (-1, 2))}


def _mul2(a, b):
    return (
        (a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]),
        (a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]),
    )


def _estimate(entries, n: int, norm: str) -> float:
    return (n * LN5 - _ln_norm(entries, norm)) / (n * LN2)


def exponent_estimate(bits: str, norm: str = "fro",
                      ns: Optional[Iterable[int]] = None) -> EstimateTrace:
    """Exponent estimates from the restriction-norm of bit-prefix products.

    The integer matrices are exact; only the logarithm of the norm is taken
    in floating point, with the power-of-five scale handled additively.
    """
    if not bits or set(bits) - {"0", "1"}:
        raise ValueError("bits must be a nonempty 0/1 word")
    wanted = set(ns) if ns is not None else None
    m = ((1, 0), (0, 1))
    points = []
    for i, ch in enumerate(bits):
        m = _mul2(m, _EDGE_GEN_INT[ch])
        n = i + 1
        if wanted is None or n in wanted:
            points.append((n, _estimate(m, n, norm)))
    return EstimateTrace(tuple(points), norm)


def _mat_power(m, k: int):
    out = ((1, 0), (0, 1))
    base = m
    while k:
        if k & 1:
            out = _mul2(out, base)
        base = _mul2(base, base)
        k >>= 1
    return out


def estimate_at_bits(preperiod: str, period: str, nbits: int,
                     norm: str = "fro") -> float:
    """Single estimate at exactly nbits letters of preperiod + period-cycle.

    Equivalent to exponent_estimate on the expanded word but computed by
    powering the period matrix, so large nbits stay cheap.
    """
    if nbits < 1:
        raise ValueError("nbits must be >= 1")
    if set(preperiod + period) - {"0", "1"} or not period:
        raise ValueError("words must be over {0,1} with a nonempty period")
    head = preperiod[:nbits]
    m = ((1, 0), (0, 1))
    for ch in head:
        m = _mul2(m, _EDGE_GEN_INT[ch])
    rest = nbits - len(head)
    if rest:
        per = edge_word_matrix(period).entries
        q, r = divmod(rest, len(period))
        m = _mul2(m, _mat_power(per, q))
        for ch in period[:r]:
            m = _mul2(m, _EDGE_GEN_INT[ch])
    return _estimate(m, nbits, norm)


def classify_curve(s: RationalLike) -> DerivativeClass:
    """Derivative class of the vector curve at a rational parameter.

    Zero iff the exponent exceeds 1, infinite iff it is below 1; the value 1
    itself cannot occur, so the verdict is always decided.
    """
    frac = Fraction(s)
    if not 0 <= frac <= 1:
        raise ValueError(f"{frac} is outside [0,1]")
    return _exact_class(expand_auto(frac).period)


def classify_form(form: LinearForm, s: RationalLike) -> DerivativeClass:
    """Derivative class of a scalar harmonic side function at a rational.

    Inherits the curve's class when the tangent direction avoids the form's
    kernel; kernel directions are reported as EXCEPTIONAL.
    """
    frac = Fraction(s)
    if not 0 <= frac <= 1:
        raise ValueError(f"{frac} is outside [0,1]")
    side = Side.RIGHT if frac < 1 else Side.LEFT
    verdict = kernel_test(form, direction_at_rational(frac, side))
    if verdict is KernelVerdict.IN_KERNEL:
        return DerivativeClass.EXCEPTIONAL
    if verdict is KernelVerdict.UNDETERMINED:
        return DerivativeClass.UNDETERMINED
    return classify_curve(frac)


def exponent_bound(e: Expansion) -> tuple[float, float]:
    """Upper bounds for the lower and upper exponents from transition density.

    For eventually periodic expansions both densities coincide, so the two
    bounds are equal.
    """
    d = float(transition_density(e.period))
    bound = MIN_EXPONENT + d
    return (bound, bound)


def infinite_derivative_guaranteed(e: Expansion) -> bool:
    """Exact test of the sufficient density condition for an infinite derivative.

    True iff the transition density is below 1 - log2(5/3); comparison done
    in integers.
    """
    d = transition_density(e.period)
    p, q = d.numerator, d.denominator
    return 2 ** (q - p) * 3 ** q > 5 ** q


def exponent_excludes_one(period: str) -> bool:
    """Exact certificate that the period's exponent differs from 1.

    Compares the dominant eigenvalue with (1/2)**n in the quadratic field;
    equality would force a non-integer scaled trace, so this always holds.
    """
    _, T, disc, n = _period_data(period)
    return QuadraticValue(T, disc).compare(Fraction(1, 1 << n)) != 0


def generate_table(max_len: int, dedupe_complement: bool = True,
                   cap: int = TABLE_LENGTH_CAP) -> list[HolderReport]:
    """Exponent reports for every necklace class of period length <= max_len.

    Sorted by exponent descending, ties broken by parameter ascending.
    """
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    if max_len > cap:
        raise TableCapExceeded(f"max_len {max_len} exceeds cap {cap}")
    reports = []
    for length in range(1, max_len + 1):
        for word in necklace_classes(length, dedupe_complement):
            s = expansion_value(Expansion("", word)) if word != "1" else Fraction(1)
            reports.append(holder_exponent(s))
    reports.sort(key=lambda r: (-r.alpha, r.s))
    return reports


def table_csv(reports: Sequence[HolderReport]) -> str:
    lines = [",".join(TABLE_CSV_HEADER)]
    lines.extend(",".join(r.csv_row()) for r in reports)
    return "\n".join(lines) + "\n"


def maxrun_experiment(max_len: int) -> list[tuple[str, float, bool]]:
    """Exponents of all necklace classes whose cyclic runs never exceed 2.

    Returns (period, exponent, exponent > 1) rows; the comparison with 1 is
    exact.  Supports the observation that such parameters appear to have
    vanishing derivative; nothing here is a proof.
    """
    rows = []
    for length in range(1, max_len + 1):
        for word in necklace_classes(length, dedupe_complement=True):
            if max_cyclic_run(word) > 2:
                continue
            _, T, disc, n = _period_data(word)
            lo, hi = alpha_enclosure(T, disc, n)
            gt_one = QuadraticValue(T, disc).compare(Fraction(1, 1 << n)) < 0
            rows.append((word, 0.5 * (lo + hi), gt_one))
    return rows


def lyapunov_sample(nbits: int, trials: int, seed: int) -> dict:
    """Exponent estimates on independent uniform bit streams.

    Deterministic for a fixed seed.  Small nbits give noisy estimates and
    are flagged as low confidence.
    """
    if nbits < 1 or trials < 1:
        raise ValueError("nbits and trials must be >= 1")
    rng = random.Random(seed)
    estimates = []
    for _ in range(trials):
        bits = format(rng.getrandbits(nbits), f"0{nbits}b")
        m = ((1, 0), (0, 1))
        for ch in bits:
            m = _mul2(m, _EDGE_GEN_INT[ch])
        estimates.append(_estimate(m, nbits, "fro"))
    above = sum(e > 1.0 for e in estimates)
    return {
        "nbits": nbits,
        "trials": trials,
        "seed": seed,
        "mean": statistics.fmean(estimates),
        "median": statistics.median(estimates),
        "fraction_above_one": above / trials,
        "min": min(estimates),
        "max": max(estimates),
        "low_confidence": nbits < 256,
    }
