import math
import random
from fractions import Fraction

import pytest

from sgharm.cli import REFERENCE_ROWS
from sgharm.exact import Expansion, expand, expand_auto
from sgharm.harmonic import FORM_PRESETS
from sgharm.holder import (
    DerivativeClass,
    MIN_EXPONENT,
    TableCapExceeded,
    classify_curve,
    classify_form,
    estimate_at_bits,
    exponent_bound,
    exponent_estimate,
    exponent_excludes_one,
    generate_table,
    holder_exponent,
    infinite_derivative_guaranteed,
    lyapunov_sample,
    maxrun_experiment,
    table_csv,
)


# ---------------------------------------------------------------------------
# exact exponents


def test_exponent_at_zero():
    r = holder_exponent(0)
    assert r.period == "0" and r.period_length == 1 and r.scaled_trace == 4
    assert r.top_eigenvalue.as_fraction() == Fraction(3, 5)
    assert abs(r.alpha - MIN_EXPONENT) <= 1e-12
    assert r.derivative_class is DerivativeClass.INFINITE


def test_exponent_at_third():
    r = holder_exponent(Fraction(1, 3))
    assert (r.period, r.period_length, r.scaled_trace) == ("01", 2, 7)
    assert abs(r.alpha - 1.119) <= 1e-3
    assert r.derivative_class is DerivativeClass.ZERO
    assert r.enclosure_width <= 1e-12
    assert r.alpha_lo <= math.log((7 + math.sqrt(13)) / 50) / (2 * math.log(0.5)) <= r.alpha_hi


def test_exponent_at_fifth():
    r = holder_exponent(Fraction(1, 5))
    assert (r.period, r.period_length, r.scaled_trace) == ("0011", 4, 34)
    assert abs(r.alpha - 1.078) <= 1e-3


def test_exponent_at_one():
    r = holder_exponent(1)
    assert r.period == "1"
    assert abs(r.alpha - MIN_EXPONENT) <= 1e-12


def test_exponent_domain():
    with pytest.raises(ValueError):
        holder_exponent(Fraction(9, 8))


def test_preperiod_dropped():
    base = holder_exponent(Fraction(1, 3))
    # push 1/3 through the half-scale map chain for prefix 10
    shifted = holder_exponent((Fraction(1, 3) + 2) / 4)
    assert shifted.expansion.preperiod != ""
    assert shifted.alpha == base.alpha
    assert shifted.scaled_trace == base.scaled_trace


def test_preperiod_invariance_through_half_maps():
    rng = random.Random(31)
    for _ in range(20):
        q = rng.randint(3, 200)
        p = rng.randint(0, q)
        s = Fraction(p, q)
        w = "".join(rng.choice("01") for _ in range(rng.randint(1, 8)))
        mapped = Fraction(int(w, 2) + s, 2 ** len(w))
        a, b = holder_exponent(s), holder_exponent(mapped)
        assert a.scaled_trace == b.scaled_trace
        assert a.period_length == b.period_length
        assert (a.top_eigenvalue.t, a.top_eigenvalue.d) == \
            (b.top_eigenvalue.t, b.top_eigenvalue.d)
        assert a.alpha == b.alpha


def test_symmetry_and_rotation_invariance():
    rng = random.Random(32)
    for ref_s, period, *_ in REFERENCE_ROWS:
        s = Fraction(ref_s)
        a, b = holder_exponent(s), holder_exponent(1 - s)
        assert a.scaled_trace == b.scaled_trace and a.alpha == b.alpha
    for _ in range(10):
        w = "".join(rng.choice("01") for _ in range(rng.randint(1, 10)))
        base = None
        for r in range(len(w)):
            rot = w[r:] + w[:r]
            if not Expansion_is_primitive(rot):
                continue
            rep = holder_exponent(Expansion("", rot).value())
            if base is None:
                base = rep
            else:
                assert rep.scaled_trace == base.scaled_trace
                assert rep.alpha == base.alpha


def Expansion_is_primitive(word):
    n = len(word)
    return not any(n % d == 0 and word == word[:d] * (n // d) for d in range(1, n))


# ---------------------------------------------------------------------------
# classification


def test_classify_examples():
    assert classify_curve(Fraction(1, 3)) is DerivativeClass.ZERO
    assert classify_curve(Fraction(1, 2)) is DerivativeClass.INFINITE
    assert classify_curve(Fraction(1, 127)) is DerivativeClass.INFINITE


def test_classify_form_examples():
    chi, xi, phi, psi = (FORM_PRESETS[k] for k in ("chi", "xi", "phi", "psi"))
    assert classify_form(chi, 0) is DerivativeClass.EXCEPTIONAL
    assert classify_form(xi, 1) is DerivativeClass.EXCEPTIONAL
    assert classify_form(phi, Fraction(1, 2)) is DerivativeClass.INFINITE
    assert classify_form(phi, Fraction(1, 3)) is DerivativeClass.ZERO
    assert classify_form(psi, Fraction(1, 2)) is DerivativeClass.INFINITE
    # the mirrored pairs are regular
    assert classify_form(chi, 1) is DerivativeClass.INFINITE
    assert classify_form(xi, 0) is DerivativeClass.INFINITE


# ---------------------------------------------------------------------------
# bounds


def test_exponent_bound_examples():
    lo, hi = exponent_bound(expand_auto(Fraction(0)))
    assert lo == hi
    assert abs(lo - MIN_EXPONENT) < 1e-15
    lo, hi = exponent_bound(expand(Fraction(1, 3)))
    assert abs(hi - (MIN_EXPONENT + 1.0)) < 1e-15
    assert holder_exponent(Fraction(1, 3)).alpha <= hi
    lo, hi = exponent_bound(expand(Fraction(1, 127)))
    assert abs(hi - (MIN_EXPONENT + 2 / 7)) < 1e-15
    assert holder_exponent(Fraction(1, 127)).alpha <= hi


def test_infinite_derivative_guaranteed():
    assert infinite_derivative_guaranteed(expand(Fraction(1, 255)))   # period 00000001
    assert not infinite_derivative_guaranteed(expand(Fraction(1, 127)))
    assert not infinite_derivative_guaranteed(expand(Fraction(1, 3)))
    assert infinite_derivative_guaranteed(expand_auto(Fraction(1, 2)))


def test_integrality_examples():
    assert exponent_excludes_one("01")
    assert exponent_excludes_one("0000101")
    assert exponent_excludes_one("0")


# ---------------------------------------------------------------------------
# estimates


def test_estimate_constant_word():
    trace = exponent_estimate("0" * 256, ns=[16, 64, 256])
    errs = [abs(v - MIN_EXPONENT) for _, v in trace.points]
    assert errs[-1] < 0.01
    assert errs[0] >= errs[-1]


def test_estimate_alternating_word():
    est = exponent_estimate("01" * 2048, ns=[4096]).final()
    exact = holder_exponent(Fraction(1, 3)).alpha
    assert abs(est - exact) < 0.01


def test_estimate_prefix_insensitive():
    rng = random.Random(33)
    prefix = "".join(rng.choice("01") for _ in range(8))
    plain = estimate_at_bits("", "01", 4096)
    with_prefix = estimate_at_bits(prefix, "01", 4096)
    assert abs(plain - with_prefix) < 0.01


def test_estimate_fast_path_matches_sequential():
    bits = ("001" * 700)[:2048]
    seq = exponent_estimate(bits, ns=[2048]).final()
    fast = estimate_at_bits("", "001", 2048)
    assert seq == fast
    pre_bits = "10110100" + bits[:-8]
    seq2 = exponent_estimate(pre_bits, ns=[2048]).final()
    fast2 = estimate_at_bits("10110100", "001", 2048)
    assert seq2 == fast2


def test_norm_independence():
    bits = "0110010101" * 40
    fro = exponent_estimate(bits, norm="fro")
    mx = exponent_estimate(bits, norm="max")
    for (n1, a), (n2, b) in zip(fro.points, mx.points):
        assert n1 == n2
        assert abs(a - b) <= 2 / n1


def test_estimate_validation():
    with pytest.raises(ValueError):
        exponent_estimate("")
    with pytest.raises(ValueError):
        exponent_estimate("012")
    with pytest.raises(ValueError):
        estimate_at_bits("", "01", 0)
    with pytest.raises(ValueError):
        exponent_estimate("01", norm="nuclear")


# ---------------------------------------------------------------------------
# table


def test_table_matches_reference():
    rows = generate_table(7)
    assert len(rows) == len(REFERENCE_ROWS) == 22
    for row, (ref_s, ref_p, ref_n, ref_tr, ref_a) in zip(rows, REFERENCE_ROWS):
        assert row.s == Fraction(ref_s)
        assert row.period == ref_p
        assert row.period_length == ref_n
        assert row.scaled_trace == ref_tr
        assert abs(row.alpha - ref_a) <= 1e-3


def test_table_small():
    rows = generate_table(1)
    assert len(rows) == 1
    assert rows[0].scaled_trace == 4 and abs(rows[0].alpha - MIN_EXPONENT) < 1e-9
    rows = generate_table(2)
    assert [r.period for r in rows] == ["01", "0"]
    assert rows[0].scaled_trace == 7


def test_table_sorted_desc_with_tie_break():
    rows = generate_table(7)
    for a, b in zip(rows, rows[1:]):
        assert a.alpha > b.alpha or (a.alpha == b.alpha and a.s < b.s)
    tied = [r for r in rows if r.scaled_trace == 472]
    assert [r.s for r in tied] == [Fraction(11, 127), Fraction(13, 127)]


def test_table_extension_preserves_order():
    seven = [(r.s, r.period) for r in generate_table(7)]
    eight = [(r.s, r.period) for r in generate_table(8) if r.period_length <= 7]
    assert seven == eight


def test_table_without_dedupe():
    rows = generate_table(3, dedupe_complement=False)
    periods = {r.period for r in rows}
    assert periods == {"0", "1", "01", "001", "011"}


def test_table_cap():
    with pytest.raises(TableCapExceeded):
        generate_table(21)
    with pytest.raises(ValueError):
        generate_table(0)


def test_table_csv_layout():
    rows = generate_table(2)
    text = table_csv(rows)
    lines = text.strip().split("\n")
    assert lines[0] == "s,period,n,scaled_trace,alpha,alpha_enclosure_width,derivative_class"
    assert lines[1].startswith("1/3,01,2,7,")
    assert lines[2].startswith("0,0,1,4,")


# ---------------------------------------------------------------------------
# experiments


def test_maxrun_experiment_rows():
    rows = maxrun_experiment(6)
    by_period = {w: (a, flag) for w, a, flag in rows}
    assert "0" not in by_period and "0001" not in by_period
    assert abs(by_period["01"][0] - 1.119) <= 1e-3 and by_period["01"][1]
    assert abs(by_period["0011"][0] - 1.078) <= 1e-3 and by_period["0011"][1]
    assert abs(by_period["001011"][0] - 1.086) <= 1e-3 and by_period["001011"][1]


def test_lyapunov_determinism_and_flags():
    a = lyapunov_sample(64, 5, seed=11)
    b = lyapunov_sample(64, 5, seed=11)
    assert a == b
    c = lyapunov_sample(64, 5, seed=12)
    assert c != a
    assert a["low_confidence"] and a["nbits"] == 64 and a["trials"] == 5
    big = lyapunov_sample(512, 3, seed=1)
    assert not big["low_confidence"]
    assert 0.0 <= big["fraction_above_one"] <= 1.0
    assert big["min"] <= big["median"] <= big["max"]


# ---------------------------------------------------------------------------
# norm bounds behind the estimates


def _rand_cone_vector(rng):
    from sgharm.exact import MAJOR_EIGVEC_0, MAJOR_EIGVEC_1
    a = Fraction(rng.randint(1, 1000), rng.randint(1, 1000))
    b = Fraction(rng.randint(0, 1000), rng.randint(1, 1000))
    return a * MAJOR_EIGVEC_0 + b * MAJOR_EIGVEC_1


def test_iterated_generator_norm_floor():
    # ||M^n u|| >= (1/2) (3/5)^n ||u|| in the 2-norm, for cone vectors
    from sgharm.exact import word_product
    rng = random.Random(41)
    for _ in range(250):
        u = _rand_cone_vector(rng)
        n = rng.randint(1, 30)
        sym = rng.choice("01")
        img = word_product(sym * n).apply(u)
        assert img.norm2() >= 0.5 * (0.6 ** n) * u.norm2() * (1 - 1e-12)


def test_generator_operator_bound():
    # ||M u|| <= (3/5) ||u|| on the whole vector plane
    from sgharm.exact import Vec3Q, word_product
    rng = random.Random(43)
    for _ in range(250):
        x = Fraction(rng.randint(-100, 100), rng.randint(1, 50))
        y = Fraction(rng.randint(-100, 100), rng.randint(1, 50))
        u = Vec3Q(x, y, -x - y)
        for sym in "01":
            img = word_product(sym).apply(u)
            assert img.norm2() <= 0.6 * u.norm2() + 1e-12


# calibrated once over 3000 random samples (observed range [0.32, 1.41]);
# frozen with margin
SEPARATION_LO = 0.15
SEPARATION_HI = 3.0


def test_matrix_vector_separation_bounds():
    import math as _math

    from sgharm.exact import edge_word_matrix, word_product
    rng = random.Random(47)
    for _ in range(400):
        length = rng.randint(1, 20)
        w = "".join(rng.choice("01") for _ in range(length))
        u = _rand_cone_vector(rng)
        m2 = edge_word_matrix(w)
        den = m2.denominator
        fro = _math.sqrt(sum((v / den) ** 2 for row in m2.entries for v in row))
        ratio = word_product(w).apply(u).norm2() / (fro * u.norm2())
        assert SEPARATION_LO <= ratio <= SEPARATION_HI
