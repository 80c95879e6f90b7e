"""Exact arithmetic backbone.

Integer-scaled transition matrices and their plane restrictions, quadratic
eigenvalues, eventually periodic binary expansions of rationals, and the
necklace combinatorics behind the exponent table.  Everything here is pure
and exact: no floats except in explicitly named conversion helpers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterator, Optional, Union

RationalLike = Union[Fraction, int, str]


# ---------------------------------------------------------------------------
# Vectors in the value space


@dataclass(frozen=True)
class Vec3Q:
    """Exact vector in the 3-dimensional value space."""

    x: Fraction
    y: Fraction
    z: Fraction

    @classmethod
    def of(cls, x, y, z) -> "Vec3Q":
        return cls(Fraction(x), Fraction(y), Fraction(z))

    @property
    def coords(self) -> tuple[Fraction, Fraction, Fraction]:
        return (self.x, self.y, self.z)

    def __add__(self, other: "Vec3Q") -> "Vec3Q":
        return Vec3Q(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "Vec3Q") -> "Vec3Q":
        return Vec3Q(self.x - other.x, self.y - other.y, self.z - other.z)

    def __neg__(self) -> "Vec3Q":
        return Vec3Q(-self.x, -self.y, -self.z)

    def __mul__(self, scalar) -> "Vec3Q":
        return Vec3Q(self.x * scalar, self.y * scalar, self.z * scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "Vec3Q":
        return Vec3Q(self.x / scalar, self.y / scalar, self.z / scalar)

    def dot(self, row) -> Fraction:
        a, b, c = row
        return a * self.x + b * self.y + c * self.z

    def coord_sum(self) -> Fraction:
        return self.x + self.y + self.z

    def floats(self) -> tuple[float, float, float]:
        return (float(self.x), float(self.y), float(self.z))

    def norm2(self) -> float:
        return math.sqrt(float(self.x * self.x + self.y * self.y + self.z * self.z))

    def max_abs(self) -> Fraction:
        return max(abs(self.x), abs(self.y), abs(self.z))


E0 = Vec3Q.of(1, 0, 0)
E1 = Vec3Q.of(0, 1, 0)
EW = Vec3Q.of(0, 0, 1)

# Eigenvectors of the plane restrictions: MAJOR carries eigenvalue 3/5,
# MINOR carries 1/5.
MAJOR_EIGVEC_0 = Vec3Q.of(-1, Fraction(1, 2), Fraction(1, 2))
MAJOR_EIGVEC_1 = Vec3Q.of(Fraction(-1, 2), 1, Fraction(-1, 2))
MINOR_EIGVEC_0 = Vec3Q.of(0, Fraction(1, 2), Fraction(-1, 2))
MINOR_EIGVEC_1 = Vec3Q.of(Fraction(-1, 2), 0, Fraction(1, 2))

# Basis pairs of the vector plane x+y+z = 0 used for restrictions.
EDGE_BASIS = (E0 - E1, E1 - EW)
CHART_BASIS = (
    Vec3Q.of(Fraction(-1, 2), Fraction(-1, 2), 1),
    Vec3Q.of(Fraction(-1, 2), Fraction(1, 2), 0),
)


# ---------------------------------------------------------------------------
# Scaled integer matrices


def _norm_symbol(symbol) -> str:
    s = str(symbol)
    if s in ("0", "1"):
        return s
    if s in ("w", "W", "ω", "2"):
        return "w"
    raise ValueError(f"unknown generator symbol {symbol!r}")


@dataclass(frozen=True)
class ScaledIntMat3:
    """3x3 integer matrix understood as entries / 5**pow5.

    Every column of `entries` must sum to 5**pow5 (column-stochastic after
    scaling), which is preserved by products.
    """

    entries: tuple[tuple[int, int, int], ...]
    pow5: int

    def __post_init__(self):
        if len(self.entries) != 3 or any(len(r) != 3 for r in self.entries):
            raise ValueError("entries must be 3x3")
        if self.pow5 < 0:
            raise ValueError("pow5 must be nonnegative")
        target = 5 ** self.pow5
        for j in range(3):
            col = sum(self.entries[i][j] for i in range(3))
            if col != target:
                raise ValueError("column sums must equal 5**pow5")

    @classmethod
    def identity(cls) -> "ScaledIntMat3":
        return cls(((1, 0, 0), (0, 1, 0), (0, 0, 1)), 0)

    @property
    def denominator(self) -> int:
        return 5 ** self.pow5

    def trace(self) -> Fraction:
        e = self.entries
        return Fraction(e[0][0] + e[1][1] + e[2][2], self.denominator)

    def __matmul__(self, other: "ScaledIntMat3") -> "ScaledIntMat3":
        a, b = self.entries, other.entries
        rows = tuple(
            tuple(sum(a[i][k] * b[k][j] for k in range(3)) for j in range(3))
            for i in range(3)
        )
        return ScaledIntMat3(rows, self.pow5 + other.pow5)

    def apply_int(self, col: tuple[int, int, int]) -> tuple[int, int, int]:
        e = self.entries
        return tuple(e[i][0] * col[0] + e[i][1] * col[1] + e[i][2] * col[2] for i in range(3))

    def apply(self, v: Vec3Q) -> Vec3Q:
        den = self.denominator
        e = self.entries
        return Vec3Q(
            (e[0][0] * v.x + e[0][1] * v.y + e[0][2] * v.z) / den,
            (e[1][0] * v.x + e[1][1] * v.y + e[1][2] * v.z) / den,
            (e[2][0] * v.x + e[2][1] * v.y + e[2][2] * v.z) / den,
        )

    def fractions(self) -> tuple[tuple[Fraction, ...], ...]:
        den = self.denominator
        return tuple(tuple(Fraction(v, den) for v in row) for row in self.entries)


_GEN3 = {
    "0": ScaledIntMat3(((5, 2, 2), (0, 2, 1), (0, 1, 2)), 1),
    "1": ScaledIntMat3(((2, 0, 1), (2, 5, 2), (1, 0, 2)), 1),
    "w": ScaledIntMat3(((2, 1, 0), (1, 2, 0), (2, 2, 5)), 1),
}

# Swaps the first two coordinates; conjugates the two generators into each
# other and implements the mirror symmetry of the boundary curve.
SWAP_XY = ScaledIntMat3(((0, 1, 0), (1, 0, 0), (0, 0, 1)), 0)


def generator_matrix(symbol) -> ScaledIntMat3:
    """Exact transition matrix of one subdivision map (symbol 0, 1 or w)."""
    return _GEN3[_norm_symbol(symbol)]


def word_product(word: str) -> ScaledIntMat3:
    """Left-to-right product of generator matrices for a word over {0,1,w}."""
    out = ScaledIntMat3.identity()
    for ch in word:
        out = out @ _GEN3[_norm_symbol(ch)]
    return out


def plane_trace(m: ScaledIntMat3) -> Fraction:
    """Trace of the restriction to the vector plane: trace(m) - 1."""
    e = m.entries
    den = m.denominator
    return Fraction(e[0][0] + e[1][1] + e[2][2] - den, den)


class PlaneBasis(Enum):
    EDGE = "edge"    # (e0 - e1, e1 - ew); keeps integer entries over 5**n
    CHART = "chart"  # the orthogonal chart pair; entries over 2**n * 5**n


@dataclass(frozen=True)
class ScaledIntMat2:
    """2x2 integer matrix understood as entries / (5**pow5 * 2**pow2).

    pow2 is 0 for the EDGE basis; the CHART basis needs one factor of 2 per
    word letter to keep entries integral.
    """

    entries: tuple[tuple[int, int], tuple[int, int]]
    pow5: int
    pow2: int = 0
    basis: PlaneBasis = PlaneBasis.EDGE

    def __post_init__(self):
        if len(self.entries) != 2 or any(len(r) != 2 for r in self.entries):
            raise ValueError("entries must be 2x2")
        if self.pow5 < 0 or self.pow2 < 0:
            raise ValueError("scales must be nonnegative")

    @property
    def denominator(self) -> int:
        return 5 ** self.pow5 * 2 ** self.pow2

    def trace(self) -> Fraction:
        e = self.entries
        return Fraction(e[0][0] + e[1][1], self.denominator)

    def det(self) -> Fraction:
        e = self.entries
        return Fraction(e[0][0] * e[1][1] - e[0][1] * e[1][0], self.denominator ** 2)

    def __matmul__(self, other: "ScaledIntMat2") -> "ScaledIntMat2":
        if self.basis is not other.basis:
            raise ValueError("cannot multiply restrictions in different bases")
        a, b = self.entries, other.entries
        rows = (
            (a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]),
            (a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]),
        )
        return ScaledIntMat2(rows, self.pow5 + other.pow5, self.pow2 + other.pow2, self.basis)

    def fractions(self) -> tuple[tuple[Fraction, ...], ...]:
        den = self.denominator
        return tuple(tuple(Fraction(v, den) for v in row) for row in self.entries)


def restrict_to_plane(m: ScaledIntMat3, basis: PlaneBasis = PlaneBasis.EDGE) -> ScaledIntMat2:
    """Exact matrix of m's action on the vector plane in the requested basis."""
    e = m.entries
    col = lambda j: (e[0][j], e[1][j], e[2][j])
    c0, c1, c2 = col(0), col(1), col(2)
    if basis is PlaneBasis.EDGE:
        # images of (e0 - e1) and (e1 - ew); coefficients are (x, -z)
        i1 = tuple(c0[k] - c1[k] for k in range(3))
        i2 = tuple(c1[k] - c2[k] for k in range(3))
        rows = ((i1[0], i2[0]), (-i1[2], -i2[2]))
        return ScaledIntMat2(rows, m.pow5, 0, PlaneBasis.EDGE)
    # chart basis: image coefficients are (z, 2y + z); basis vectors doubled
    # to stay integral, which introduces the extra power of two
    iv = tuple(-c0[k] - c1[k] + 2 * c2[k] for k in range(3))
    iw = tuple(-c0[k] + c1[k] for k in range(3))
    rows = ((iv[2], iw[2]), (2 * iv[1] + iv[2], 2 * iw[1] + iw[2]))
    return ScaledIntMat2(rows, m.pow5, 1, PlaneBasis.CHART)


_EDGE_GEN = {"0": ((3, 0), (1, 1)), "1": ((2, -1), (-1, 2))}
_CHART_GEN = {"0": ((3, 1), (3, 5)), "1": ((3, -1), (-3, 5))}


def _fold2(word: str, gens) -> tuple[tuple[int, int], tuple[int, int]]:
    m = ((1, 0), (0, 1))
    for ch in word:
        if ch not in gens:
            raise ValueError(f"word letter must be 0 or 1, got {ch!r}")
        g = gens[ch]
        m = (
            (m[0][0] * g[0][0] + m[0][1] * g[1][0], m[0][0] * g[0][1] + m[0][1] * g[1][1]),
            (m[1][0] * g[0][0] + m[1][1] * g[1][0], m[1][0] * g[0][1] + m[1][1] * g[1][1]),
        )
    return m


def edge_word_matrix(word: str) -> ScaledIntMat2:
    """Plane restriction of a binary word product, computed directly in 2x2."""
    return ScaledIntMat2(_fold2(word, _EDGE_GEN), len(word), 0, PlaneBasis.EDGE)


def chart_word_matrix(word: str) -> ScaledIntMat2:
    """Chart-basis restriction of a binary word product."""
    return ScaledIntMat2(_fold2(word, _CHART_GEN), len(word), len(word), PlaneBasis.CHART)


# ---------------------------------------------------------------------------
# Quadratic values


def quad_sign(p: Fraction, q: Fraction, d: Fraction) -> int:
    """Exact sign of p + q*sqrt(d) with d >= 0."""
    if d < 0:
        raise ValueError("negative radicand")
    sgn = lambda v: (v > 0) - (v < 0)
    if q == 0 or d == 0:
        return sgn(p)
    sp, sq = sgn(p), sgn(q)
    if sp == sq:
        return sp
    if sp == 0:
        return sq
    c = p * p - q * q * d
    return sgn(c) if sp > 0 else -sgn(c)


@dataclass(frozen=True)
class QuadraticValue:
    """Exact number (t + sqrt(d))/2, or (t - sqrt(d))/2 when plus_root is False."""

    t: Fraction
    d: Fraction
    plus_root: bool = True

    def __post_init__(self):
        if self.d < 0:
            raise ValueError("negative radicand")

    @classmethod
    def from_pair(cls, p: Fraction, q: Fraction, d: Fraction) -> "QuadraticValue":
        """Build from the representation p + q*sqrt(d)."""
        if q == 0 or d == 0:
            return cls(2 * p, Fraction(0))
        return cls(2 * p, 4 * q * q * d, plus_root=q > 0)

    def as_pair(self) -> tuple[Fraction, Fraction]:
        half = Fraction(1, 2) if self.plus_root else Fraction(-1, 2)
        return (self.t / 2, half)

    def conjugate(self) -> "QuadraticValue":
        return QuadraticValue(self.t, self.d, not self.plus_root)

    def compare(self, r: RationalLike) -> int:
        """Exact three-way comparison with a rational."""
        p, q = self.as_pair()
        return quad_sign(p - Fraction(r), q, self.d)

    def sum_with_conjugate(self) -> Fraction:
        return self.t

    def product_with_conjugate(self) -> Fraction:
        return (self.t * self.t - self.d) / 4

    def as_fraction(self) -> Optional[Fraction]:
        """Exact rational value when the radicand is a perfect square."""
        num, den = self.d.numerator, self.d.denominator
        rn, rd = math.isqrt(num), math.isqrt(den)
        if rn * rn != num or rd * rd != den:
            return None
        root = Fraction(rn, rd)
        return (self.t + root) / 2 if self.plus_root else (self.t - root) / 2

    def __float__(self) -> float:
        root = math.sqrt(float(self.d))
        return (float(self.t) + root) / 2 if self.plus_root else (float(self.t) - root) / 2


class DegenerateEigenvalueError(ValueError):
    """Raised when a 2x2 matrix has a nonpositive eigenvalue discriminant."""


def dominant_eigen(m: ScaledIntMat2):
    """Both eigenvalues (largest first) and an exact dominant eigenvector.

    Requires a positive discriminant; word restrictions always satisfy this.
    """
    T = m.trace()
    D = m.det()
    disc = T * T - 4 * D
    if disc <= 0:
        raise DegenerateEigenvalueError(f"discriminant {disc} is not positive")
    lam = QuadraticValue(T, disc, True)
    mu = QuadraticValue(T, disc, False)
    (a, b), (c, d) = m.fractions()
    if b != 0:
        vec = (
            QuadraticValue.from_pair(b, Fraction(0), disc),
            QuadraticValue(T - 2 * a, disc, True),
        )
    elif c != 0:
        vec = (
            QuadraticValue(T - 2 * d, disc, True),
            QuadraticValue.from_pair(c, Fraction(0), disc),
        )
    else:
        vec = (
            QuadraticValue.from_pair(Fraction(int(a > d)), Fraction(0), disc),
            QuadraticValue.from_pair(Fraction(int(a < d)), Fraction(0), disc),
        )
    return lam, mu, vec


# ---------------------------------------------------------------------------
# Binary expansions of rationals


class ExpansionVariant(Enum):
    UPPER = "upper"  # never ends in all ones
    LOWER = "lower"  # never ends in all zeros


def _is_primitive(word: str) -> bool:
    n = len(word)
    for d in range(1, n):
        if n % d == 0 and word == word[:d] * (n // d):
            return False
    return True


@dataclass(frozen=True)
class Expansion:
    """Eventually periodic binary expansion 0.preperiod(period)."""

    preperiod: str
    period: str
    variant: ExpansionVariant = ExpansionVariant.UPPER

    def __post_init__(self):
        word = self.preperiod + self.period
        if not self.period:
            raise ValueError("period must be nonempty")
        if set(word) - {"0", "1"}:
            raise ValueError("expansion words must be over {0,1}")
        if not _is_primitive(self.period):
            raise ValueError(f"period {self.period!r} is not primitive")
        if self.preperiod and self.preperiod[-1] == self.period[-1]:
            raise ValueError("preperiod is not minimal (last bits merge)")

    def value(self) -> Fraction:
        k, m = len(self.preperiod), len(self.period)
        head = int(self.preperiod, 2) if self.preperiod else 0
        tail = Fraction(int(self.period, 2), (1 << m) - 1)
        return Fraction(head + tail, 1 << k)

    def bits(self, n: int) -> str:
        if n <= len(self.preperiod):
            return self.preperiod[:n]
        rest = n - len(self.preperiod)
        reps = rest // len(self.period) + 1
        return self.preperiod + (self.period * reps)[:rest]

    def bit(self, i: int) -> int:
        if i < len(self.preperiod):
            return int(self.preperiod[i])
        return int(self.period[(i - len(self.preperiod)) % len(self.period)])

    def __str__(self) -> str:
        return f"0.{self.preperiod}({self.period})"

    @classmethod
    def parse(cls, text: str, variant: ExpansionVariant = ExpansionVariant.UPPER) -> "Expansion":
        body = text.strip()
        if not body.startswith("0."):
            raise ValueError(f"expansion must start with '0.': {text!r}")
        body = body[2:]
        if "(" in body:
            pre, _, rest = body.partition("(")
            if not rest.endswith(")"):
                raise ValueError(f"unbalanced parentheses in {text!r}")
            return cls(pre, rest[:-1], variant)
        return cls(body.rstrip("0"), "0", variant)


def _factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _carmichael(m: int) -> int:
    lam = 1
    for p, e in _factorize(m).items():
        if p == 2:
            piece = 1 if e == 1 else (2 if e == 2 else 1 << (e - 2))
        else:
            piece = p ** (e - 1) * (p - 1)
        lam = lam * piece // math.gcd(lam, piece)
    return lam


def _divisors_sorted(n: int) -> list[int]:
    divs = [1]
    for p, e in _factorize(n).items():
        divs = [d * p ** k for d in divs for k in range(e + 1)]
    return sorted(divs)


def _mult_order_2(m: int) -> int:
    # m odd, m > 1
    for d in _divisors_sorted(_carmichael(m)):
        if pow(2, d, m) == 1:
            return d
    raise ArithmeticError(f"no multiplicative order for 2 mod {m}")


def expand(s: RationalLike, variant: ExpansionVariant = ExpansionVariant.UPPER) -> Expansion:
    """Binary expansion of a rational in [0,1] in the requested variant.

    Dyadic endpoints only admit one variant: 0 has no lower expansion and 1
    has no upper expansion; those combinations raise ValueError.
    """
    s = Fraction(s)
    if not 0 <= s <= 1:
        raise ValueError(f"{s} is outside [0,1]")
    p, q = s.numerator, s.denominator
    a = (q & -q).bit_length() - 1
    m = q >> a
    if m == 1:
        if variant is ExpansionVariant.UPPER:
            if s == 1:
                raise ValueError("1 has no upper expansion")
            pre = format(p, f"0{a}b") if a else ""
            return Expansion(pre, "0", variant)
        if s == 0:
            raise ValueError("0 has no lower expansion")
        pre = format(p - 1, f"0{a}b") if a else ""
        return Expansion(pre, "1", variant)
    head, tail = divmod(p, m)
    pre = format(head, f"0{a}b") if a else ""
    k = _mult_order_2(m)
    period_int = tail * ((1 << k) - 1) // m
    return Expansion(pre, format(period_int, f"0{k}b"), variant)


def expand_auto(s: RationalLike, preferred: ExpansionVariant = ExpansionVariant.UPPER) -> Expansion:
    """expand() falling back to the other variant at the endpoints 0 and 1."""
    try:
        return expand(s, preferred)
    except ValueError:
        other = (ExpansionVariant.LOWER if preferred is ExpansionVariant.UPPER
                 else ExpansionVariant.UPPER)
        return expand(s, other)


def expansion_value(e: Expansion) -> Fraction:
    return e.value()


# ---------------------------------------------------------------------------
# Word combinatorics


def lyndon_words(length: int, alphabet: str = "01") -> Iterator[str]:
    """All Lyndon words of exactly the given length, lexicographically (Duval)."""
    if length < 1:
        raise ValueError("length must be >= 1")
    w = [-1]
    while w:
        w[-1] += 1
        m = len(w)
        if m == length:
            yield "".join(alphabet[c] for c in w)
        while len(w) < length:
            w.append(w[-m])
        while w and w[-1] == len(alphabet) - 1:
            w.pop()


def complement_word(word: str) -> str:
    return word.translate(str.maketrans("01", "10"))


def min_rotation(word: str) -> str:
    return min(word[i:] + word[:i] for i in range(len(word)))


def necklace_classes(length: int, dedupe_complement: bool = False) -> list[str]:
    """Canonical representatives of primitive rotation classes of one length.

    The canonical representative is the lexicographically smallest rotation.
    With dedupe_complement, each {class, bitwise-complement class} pair keeps
    the representative with the smaller value.
    """
    words = list(lyndon_words(length))
    if not dedupe_complement:
        return words
    keep = []
    for w in words:
        cc = min_rotation(complement_word(w))
        if cc == w or int(w, 2) < int(cc, 2):
            keep.append(w)
    return keep


def transition_density(word: str) -> Fraction:
    """Cyclic fraction of adjacent positions whose bits differ."""
    if not word:
        raise ValueError("word must be nonempty")
    n = len(word)
    flips = sum(word[i] != word[(i + 1) % n] for i in range(n))
    return Fraction(flips, n)


def max_cyclic_run(word: str):
    """Longest run of equal bits in the periodic repetition of the word.

    Constant words repeat into a single infinite run, reported as math.inf.
    """
    if not word:
        raise ValueError("word must be nonempty")
    if len(set(word)) == 1:
        return math.inf
    doubled = word + word
    best = run = 1
    for i in range(1, len(doubled)):
        run = run + 1 if doubled[i] == doubled[i - 1] else 1
        best = max(best, run)
    return best


# ---------------------------------------------------------------------------
# Cones in the vector plane


@dataclass(frozen=True)
class ConeSpec:
    """Closed cone spanned by two independent vectors of the plane x+y+z=0."""

    gen0: Vec3Q
    gen1: Vec3Q

    def __post_init__(self):
        g0, g1 = self.gen0, self.gen1
        cross = (
            g0.y * g1.z - g0.z * g1.y,
            g0.z * g1.x - g0.x * g1.z,
            g0.x * g1.y - g0.y * g1.x,
        )
        if not any(cross):
            raise ValueError("cone generators must be linearly independent")

    def coefficients(self, v: Vec3Q) -> Optional[tuple[Fraction, Fraction]]:
        """Exact (a, b) with a*gen0 + b*gen1 = v, or None if v is outside the span."""
        g0, g1 = self.gen0.coords, self.gen1.coords
        w = v.coords
        for i, j in ((0, 1), (0, 2), (1, 2)):
            det = g0[i] * g1[j] - g0[j] * g1[i]
            if det == 0:
                continue
            a = (w[i] * g1[j] - w[j] * g1[i]) / det
            b = (g0[i] * w[j] - g0[j] * w[i]) / det
            k = 3 - i - j
            if a * g0[k] + b * g1[k] != w[k]:
                return None
            return (a, b)
        return None

    def contains(self, v: Vec3Q) -> bool:
        """Membership in the cone minus the origin."""
        coeffs = self.coefficients(v)
        if coeffs is None:
            return False
        a, b = coeffs
        return a >= 0 and b >= 0 and (a, b) != (0, 0)


DIFFERENCE_CONE = ConeSpec(MAJOR_EIGVEC_0, MAJOR_EIGVEC_1)
OUTER_CONE = ConeSpec(MINOR_EIGVEC_0, MINOR_EIGVEC_1)


def in_value_triangle(v: Vec3Q) -> bool:
    """Membership in the closed triangle of nonnegative affine coordinates."""
    return v.x >= 0 and v.y >= 0 and v.z >= 0 and v.coord_sum() == 1
