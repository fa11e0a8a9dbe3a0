import math

import pytest

import cslmeson as cm


def test_version_and_constants():
    assert cm.__version__ == "0.3.0"
    assert cm.HBAR_MEV_S == pytest.approx(6.582119569e-22, rel=1e-15)


def test_registry_and_rates():
    reg = cm.default_registry()
    assert reg.species_names() == ["K0", "B0", "Bs", "D0"]
    k = cm.species("K0")
    rate = cm.csl_damping_rate(cm.adler(), k)
    assert rate == pytest.approx(1.5e-38, rel=0.05)
    assert cm.csl_damping_rate_relativistic(cm.adler(), k, 0.0) == pytest.approx(rate, rel=1e-14)
    with pytest.raises(cm.ConfigError):
        reg.species("Z0")


def test_trace_and_lindblad_equivalence():
    k = cm.species("K0")
    params = cm.CslParams(1e20)
    lam = cm.csl_damping_rate(params, k)
    P, A = cm.Flavor.particle, cm.Flavor.antiparticle
    for t in (0.0, 1e-11, 2e-10):
        survive = cm.transition_probability(P, P, k, t, "csl", params)
        flip = cm.transition_probability(P, A, k, t, "csl", params)
        envelope = 0.5 * (math.exp(-k.decay_rate(cm.Eigenstate.light) * t)
                          + math.exp(-k.decay_rate(cm.Eigenstate.heavy) * t))
        assert survive + flip == pytest.approx(envelope, abs=1e-12)
        lind = cm.transition_probability(P, P, k, t, "lindblad", lambda_single=lam)
        assert survive == pytest.approx(lind, abs=1e-12)


def test_epr_and_zeta():
    k = cm.species("K0")
    P = cm.Flavor.particle
    assert abs(cm.joint_probability(k, 1e-10, 1e-10, P, P)) < 1e-12
    assert cm.zeta_joint_probability(k, 0.0, 0.0, P, P, 1.0) == pytest.approx(0.25)


def test_oracle():
    r = cm.simulate_damping(1.0, 0.0, 1.0, 1.0, n_trajectories=20000, n_steps=10, seed=3)
    assert r.analytic_prediction == pytest.approx(math.exp(-0.5), rel=1e-12)
    assert abs(r.mean_interference - r.analytic_prediction) < 4 * r.std_error
    with pytest.raises(cm.DomainError):
        cm.simulate_damping(1.0, 0.0, 1.0, 1.0, n_trajectories=10)


def test_fit_round_trip():
    k = cm.species("K0")
    events = cm.generate_events(k, 0.13, 20000, seed=5)
    fit = cm.fit_zeta(events, k)
    assert fit.converged
    assert fit.ci_low <= 0.13 <= fit.ci_high
    again = cm.events_from_csv(cm.events_to_csv(events))
    assert cm.fit_zeta(again, k).zeta_hat == fit.zeta_hat
    assert cm.lambda_to_zeta(cm.zeta_to_lambda(0.3, 4.6e-11), 4.6e-11) == pytest.approx(0.3)


def test_wavepackets():
    assert cm.cross_term_kernel_overlap(0.0, 1e-5, 1e-5) == pytest.approx(1 / math.sqrt(2))
    assert cm.log_cross_term_kernel_overlap(1.2e-2, 1e-4, 1e-5) < -3.5e3
