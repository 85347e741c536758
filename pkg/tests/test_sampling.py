import numpy as np
import pytest

from pdcsim import (
    SamplePlan,
    SolverSettings,
    TaylorDispersion,
    draw_candidate,
    landscape_table,
    run_study,
    screen_low_gain,
)
from pdcsim.errors import ConfigurationError

# a seed-5 draw known to pass all four screening predicates
ACCEPTED = TaylorDispersion(-25.2045438248044, 28.48087444616651,
                            -303.8327595353927, 298.9049814711906,
                            -138.0100738470483, 10.0)


def test_beta_zero_draws_have_no_curvature():
    plan = SamplePlan(seed=7, beta_zero=True)
    rng = plan.make_rng()
    for _ in range(20):
        c = draw_candidate(plan, rng)
        assert c.beta_p == c.beta_s == c.beta_i == 0.0
        assert plan.alpha_range[0] <= c.alpha_s <= plan.alpha_range[1]


def test_draws_are_seed_deterministic():
    plan = SamplePlan(seed=11)
    rng1, rng2 = plan.make_rng(), plan.make_rng()
    for _ in range(10):
        assert draw_candidate(plan, rng1) == draw_candidate(plan, rng2)
    other = draw_candidate(SamplePlan(seed=12), SamplePlan(seed=12).make_rng())
    assert other != draw_candidate(plan, plan.make_rng())


def test_draw_statistics_match_uniform_ranges():
    plan = SamplePlan(seed=3)
    rng = plan.make_rng()
    alphas = np.array([draw_candidate(plan, rng).alpha_s for _ in range(2000)])
    lo, hi = plan.alpha_range
    assert alphas.min() >= lo and alphas.max() <= hi
    # uniform distribution: mean 0, std (hi-lo)/sqrt(12)
    assert abs(alphas.mean()) < 2.0
    assert np.std(alphas) == pytest.approx((hi - lo) / np.sqrt(12), rel=0.1)


def test_screening_accepts_known_candidate():
    report = screen_low_gain(SamplePlan(seed=5), ACCEPTED)
    assert report.accepted
    assert report.reason is None
    assert report.fwhm_s is not None and report.fwhm_i is not None
    assert report.overlap is not None and report.overlap > 0.96
    assert report.rsd is not None and report.rsd < 0.15


def test_screening_rejects_broad_benchmark():
    # the strong-dispersion benchmark waveguide is wider than the ensemble
    # localization window: it is a valid simulation target but not a valid
    # ensemble member
    wg2 = TaylorDispersion(30.0, 20.0, 300.0, -100.0, 100.0, 10.0)
    report = screen_low_gain(SamplePlan(seed=1), wg2)
    assert not report.accepted
    assert report.reason == "delocalized"


def test_screening_rejects_delocalized():
    # alpha_s = alpha_i leaves the phase-matching ridge parallel to the pump
    # ridge, so the marginals fill the whole grid
    flat = TaylorDispersion(0.5, 0.5, 0.0, 0.0, 0.0, 10.0)
    report = screen_low_gain(SamplePlan(seed=1), flat)
    assert not report.accepted
    assert report.reason == "delocalized"


def test_screening_rejects_narrow_cross_section():
    # very steep group-velocity walk-off collapses the sinc onto a thin ridge
    steep = TaylorDispersion(3000.0, -3000.0, 0.0, 0.0, 0.0, 10.0)
    report = screen_low_gain(SamplePlan(seed=1), steep)
    assert not report.accepted
    assert report.reason in ("delocalized", "cross-section")


def test_screening_rejects_low_overlap():
    # localized but asymmetric: passes the width checks, fails Theta > 0.96
    skew = TaylorDispersion(4.298571874577242, -28.869422803852967,
                            296.4235329701289, 81.6970367606645,
                            1.2434018934738447, 10.0)
    report = screen_low_gain(SamplePlan(seed=1), skew)
    assert not report.accepted
    assert report.reason == "overlap"
    assert report.overlap is not None and report.overlap <= 0.96


def test_screening_rejects_nondegenerate_low_gain():
    # passes widths and overlap, fails the low-gain RSD < 0.15 predicate
    shifted = TaylorDispersion(-30.46232825822269, 13.426934383677128,
                               106.01753887260764, -293.75364829957743,
                               42.154594795108835, 10.0)
    report = screen_low_gain(SamplePlan(seed=1), shifted)
    assert not report.accepted
    assert report.reason == "degeneracy"
    assert report.rsd is not None and report.rsd >= 0.15


def test_screening_beta_zero_skips_overlap_checks():
    plan = SamplePlan(seed=5, beta_zero=True)
    accepted_b0 = TaylorDispersion(-5.503982893014783, -23.04303365928545,
                                   0.0, 0.0, 0.0, 10.0)
    report = screen_low_gain(plan, accepted_b0)
    assert report.accepted
    assert report.overlap is None and report.rsd is None


def test_bad_plan_rejected():
    with pytest.raises(ConfigurationError):
        SamplePlan(count=0)
    with pytest.raises(ConfigurationError):
        SamplePlan(gain_ladder=(1.0, -1.0))


@pytest.mark.slow
def test_small_study_end_to_end():
    plan = SamplePlan(seed=5, count=2, gain_ladder=(1e-5, 10.0),
                      solver=SolverSettings(steps=64))
    records = run_study(plan)
    assert len(records) == 2
    assert records[0].dispersion == ACCEPTED
    for record in records:
        assert record.screening.accepted
        assert not record.failures
        assert set(record.gain_metrics) == {1e-5, 10.0}
        assert record.gain_values[10.0] > record.gain_values[1e-5]
        assert record.tau1 >= 0 and record.tau2 >= 0
    table = landscape_table(records, 10.0, plan.pump_duration_fs)
    assert table.shape == (2, 3)
    assert np.all(table[:, :2] >= 0)
    assert np.all(table[:, 2] >= 0)


@pytest.mark.slow
def test_study_is_reproducible():
    kwargs = dict(seed=5, count=1, gain_ladder=(1e-5,),
                  solver=SolverSettings(steps=64))
    r1 = run_study(SamplePlan(**kwargs))
    r2 = run_study(SamplePlan(**kwargs))
    for a, b in zip(r1, r2):
        assert a.index == b.index
        assert a.dispersion == b.dispersion
        assert a.gain_metrics[1e-5].rsd == b.gain_metrics[1e-5].rsd


def test_exhausted_draw_budget_raises():
    plan = SamplePlan(seed=5, count=1, max_draws=2, alpha_range=(0.49, 0.51))
    with pytest.raises(ConfigurationError):
        run_study(plan)
