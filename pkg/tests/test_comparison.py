import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isslab.comparison import (
    CompFn,
    DecayFn,
    DomainError,
    add,
    asymptotic_gain_from_limit,
    compose,
    envelope_overshoot_and_gain,
    fit_k_upper,
    identity,
    linear,
    piecewise_record,
    pointwise_max,
    scale_output,
)


@st.composite
def comp_fns(draw):
    n = draw(st.integers(min_value=1, max_value=5))
    dr = draw(st.lists(st.floats(0.05, 3.0), min_size=n, max_size=n))
    dv = draw(st.lists(st.floats(0.05, 3.0), min_size=n, max_size=n))
    pts = [(0.0, 0.0)]
    r = v = 0.0
    for a, b in zip(dr, dv):
        r += a
        v += b
        pts.append((r, v))
    tail = draw(st.floats(0.01, 4.0))
    return CompFn(tuple(pts), tail)


class TestEval:
    def test_value_at_zero_is_zero(self):
        f = CompFn(((0.0, 0.0), (1.0, 2.0)))
        assert f(0.0) == 0.0

    def test_linear_interpolation_midpoint(self):
        f = CompFn(((0.0, 0.0), (1.0, 2.0)))
        assert f(0.5) == 1.0

    def test_exact_at_breakpoints(self):
        f = CompFn(((0.0, 0.0), (0.5, 0.25), (2.0, 3.0)), 0.5)
        assert f(0.5) == 0.25
        assert f(2.0) == 3.0

    def test_tail_rule(self):
        f = CompFn(((0.0, 0.0), (1.0, 2.0)), tail_slope=3.0)
        assert f(2.0) == pytest.approx(5.0)

    def test_negative_argument_rejected(self):
        f = identity()
        with pytest.raises(DomainError):
            f(-0.1)

    def test_decay_tail_rule(self):
        # hand evaluation of the tail rule: v_last * exp(-rate*(t - t_last))
        g = DecayFn(((0.0, 4.0), (1.0, 2.0)), tail_rate=1.0)
        assert g(2.0) == pytest.approx(2.0 * math.exp(-1.0), rel=1e-12)

    def test_decay_interpolation_and_domain(self):
        g = DecayFn(((0.0, 4.0), (1.0, 2.0)), tail_rate=1.0)
        assert g(0.5) == pytest.approx(3.0)
        with pytest.raises(DomainError):
            g(-1.0)


class TestValidation:
    def test_compfn_must_anchor_at_origin(self):
        with pytest.raises(ValueError):
            CompFn(((0.0, 0.5), (1.0, 2.0)))

    def test_compfn_rejects_flat_segment(self):
        with pytest.raises(ValueError):
            CompFn(((0.0, 0.0), (1.0, 1.0), (2.0, 1.0)))

    def test_compfn_rejects_zero_tail_slope(self):
        with pytest.raises(ValueError):
            CompFn(((0.0, 0.0), (1.0, 1.0)), tail_slope=0.0)

    def test_decayfn_rejects_nonpositive_values(self):
        with pytest.raises(ValueError):
            DecayFn(((0.0, 1.0), (1.0, 0.0)))

    def test_decayfn_rejects_increase(self):
        with pytest.raises(ValueError):
            DecayFn(((0.0, 1.0), (1.0, 2.0)))


class TestInverse:
    def test_breakpoint_preimage(self):
        f = CompFn(((0.0, 0.0), (1.0, 2.0)))
        assert f.inverse(2.0) == 1.0

    def test_linear_inverse(self):
        f = CompFn(((0.0, 0.0), (1.0, 2.0)))
        assert f.inverse(1.0) == 0.5

    def test_identity_inverse(self):
        assert identity().inverse(3.7) == pytest.approx(3.7, rel=1e-15)

    def test_tail_inverse_is_analytic(self):
        f = CompFn(((0.0, 0.0), (1.0, 2.0)), tail_slope=4.0)
        assert f.inverse(10.0) == pytest.approx(3.0)

    def test_negative_rejected(self):
        with pytest.raises(DomainError):
            identity().inverse(-1e-9)

    @given(comp_fns(), st.floats(0.0, 50.0))
    def test_roundtrip(self, f, y):
        assert f(f.inverse(y)) == pytest.approx(y, rel=1e-12, abs=1e-12)


class TestAlgebra:
    def test_gain_from_limit_all_identity_is_triple(self):
        # id(2r) + r = 3r, checked at r in {0, 1, 2}
        f = asymptotic_gain_from_limit(identity(), identity(), identity())
        for r, want in [(0.0, 0.0), (1.0, 3.0), (2.0, 6.0)]:
            assert f(r) == pytest.approx(want, rel=1e-12)

    def test_gain_from_limit_weighted(self):
        # sigma(r)=2r, gamma_limit(r)=r, gamma_ugs(r)=r: 2*(2r)+r = 5r
        f = asymptotic_gain_from_limit(linear(2.0), identity(), identity())
        assert f(1.0) == pytest.approx(5.0, rel=1e-12)
        assert f(3.0) == pytest.approx(15.0, rel=1e-12)

    def test_gain_from_limit_zero_at_zero(self):
        f = asymptotic_gain_from_limit(linear(3.0), linear(0.5), linear(2.0))
        assert f(0.0) == 0.0

    def test_gain_from_limit_zero_gain_collapses(self):
        g = linear(0.7)
        assert asymptotic_gain_from_limit(linear(2.0), g, None) is g

    def test_overshoot_scaling(self):
        sigma, _ = envelope_overshoot_and_gain(identity(), identity(), identity())
        assert sigma(1.0) == pytest.approx(2.0)

    def test_gain_is_pointwise_max(self):
        _, gamma = envelope_overshoot_and_gain(identity(), identity(), linear(2.0))
        assert gamma(1.0) == pytest.approx(2.0)

    def test_max_on_merged_grid_with_crossing(self):
        # gamma_ugs: slope 2 to (1, 2), then slope 0.5; crosses the identity at r = 3
        kinked = CompFn(((0.0, 0.0), (1.0, 2.0)), tail_slope=0.5)
        _, gamma = envelope_overshoot_and_gain(identity(), kinked, identity())
        assert gamma(2.0) == pytest.approx(2.5, rel=1e-12)
        assert gamma(3.0) == pytest.approx(3.0, rel=1e-12)
        assert gamma(4.0) == pytest.approx(4.0, rel=1e-12)
        assert any(abs(r - 3.0) < 1e-9 for r, _ in gamma.breakpoints)

    def test_compose_exactness_on_random_grid(self):
        outer = CompFn(((0.0, 0.0), (0.5, 1.0), (2.0, 2.5)), 0.25)
        inner = CompFn(((0.0, 0.0), (1.0, 0.75), (3.0, 4.0)), 2.0)
        h = compose(outer, inner)
        for r in [0.0, 0.1, 0.9, 1.0, 1.7, 2.4, 3.0, 5.0, 11.3]:
            assert h(r) == pytest.approx(outer(inner(r)), rel=1e-12, abs=1e-300)

    def test_add_exactness(self):
        f = CompFn(((0.0, 0.0), (1.0, 2.0)), 0.5)
        g = CompFn(((0.0, 0.0), (0.4, 0.1), (2.0, 3.0)), 1.5)
        h = add(f, g)
        for r in [0.0, 0.2, 0.4, 1.0, 1.5, 2.0, 4.0]:
            assert h(r) == pytest.approx(f(r) + g(r), rel=1e-12, abs=1e-300)


class TestProperties:
    @given(comp_fns(), st.floats(0.0, 20.0), st.floats(1e-6, 10.0))
    def test_strictly_increasing(self, f, r, dr):
        assert f(r) < f(r + dr)

    @given(comp_fns(), st.floats(0.0, 10.0), st.floats(0.0, 10.0))
    def test_split_doubling_bound(self, f, a, b):
        # monotone surrogate for subadditivity: f(a+b) <= f(2a) + f(2b)
        assert f(a + b) <= f(2 * a) + f(2 * b) + 1e-9

    @settings(max_examples=50)
    @given(comp_fns(), comp_fns(), comp_fns())
    def test_compositions_stay_class_k(self, s, g1, g2):
        out = asymptotic_gain_from_limit(s, g1, g2)
        sigma, gamma = envelope_overshoot_and_gain(s, g1, g2)
        for fn in (out, sigma, gamma):
            assert isinstance(fn, CompFn)
            assert fn(0.0) == 0.0

    @settings(max_examples=50)
    @given(comp_fns(), comp_fns(), st.floats(0.0, 8.0))
    def test_max_dominates_both(self, f, g, r):
        h = pointwise_max(f, g)
        assert h(r) >= max(f(r), g(r)) - 1e-9 * max(1.0, h(r))


class TestFitKUpper:
    def test_running_max_majorant(self):
        # oracle: running maximum over increasing r
        samples = [(1.0, 1.0), (2.0, 0.5)]
        f = fit_k_upper(samples)
        assert f(1.0) >= 1.0
        assert f(2.0) >= 1.0

    def test_degenerate_single_point(self):
        f = fit_k_upper([(0.0, 0.0)])
        assert f(1.0) == pytest.approx(1e-9, rel=1e-6)

    def test_duplicate_abscissa_takes_max(self):
        f = fit_k_upper([(1.0, 1.0), (1.0, 2.0)])
        assert f(1.0) >= 2.0

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            fit_k_upper([])

    def test_positive_value_at_origin_rejected(self):
        with pytest.raises(ValueError):
            fit_k_upper([(0.0, 0.5)])

    @given(
        st.lists(
            st.tuples(st.floats(0.001, 10.0), st.floats(0.0, 10.0)),
            min_size=1,
            max_size=30,
        )
    )
    def test_majorizes_every_sample(self, samples):
        f = fit_k_upper(samples)
        for r, y in samples:
            assert f(r) >= y - 1e-12 * max(1.0, y)


class TestRecord:
    def test_record_layout(self):
        lines = piecewise_record(identity(), "sigma")
        assert lines[0].startswith("# name=sigma kind=CompFn tail=slope:")
        assert lines[1] == "r,value"
        assert len(lines) == 4

    def test_decay_record(self):
        g = DecayFn(((0.0, 2.0), (1.0, 1.0)), tail_rate=0.5)
        lines = piecewise_record(g, "beta")
        assert "kind=DecayFn" in lines[0] and "tail=exp:0.5" in lines[0]
