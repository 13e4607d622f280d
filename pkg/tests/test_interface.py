"""Tests for samples, beams, and the beam application step."""

import math

import numpy as np
import pytest

from spinlight.gaussian import (
    append_vacuum_mode,
    apply_symplectic,
    is_pure,
    qnd_pass_map,
    vacuum_state,
    variance_of,
)
from spinlight.interface import (
    Beam,
    Sample,
    apply_beam,
    coupled_combination,
    make_samples,
    verification_variance,
)

HALF_PI = math.pi / 2


def sum_x(n):
    vec = np.zeros(2 * n)
    vec[0::2] = 1.0
    return vec


def diff_x(n, i, j):
    vec = np.zeros(2 * n)
    vec[2 * (i - 1)] = 1.0
    vec[2 * (j - 1)] = -1.0
    return vec


def sum_p(n):
    vec = np.zeros(2 * n)
    vec[1::2] = 1.0
    return vec


def diff_p(n, i, j):
    vec = np.zeros(2 * n)
    vec[2 * (i - 1) + 1] = 1.0
    vec[2 * (j - 1) + 1] = -1.0
    return vec


def test_sample_validation():
    assert Sample(3).orientation == 1
    with pytest.raises(ValueError):
        Sample(0)
    with pytest.raises(ValueError):
        Sample(1, orientation=2)
    samples = make_samples([1, -1, 1])
    assert [s.id for s in samples] == [1, 2, 3]
    assert [s.orientation for s in samples] == [1, -1, 1]


def test_beam_validation():
    beam = Beam(coupling=1.0, passes=((1, 0.0), (2, 0.5)))
    assert beam.kappa == 1.0
    with pytest.raises(ValueError):
        Beam(coupling=1.0, passes=())
    with pytest.raises(ValueError):
        Beam(coupling=1.0, passes=((1, 0.0), (1, 0.5)))
    with pytest.raises(ValueError):
        Beam(coupling=1.0, passes=((0, 0.0),))
    with pytest.raises(ValueError):
        Beam(coupling=1.0, passes=((1, math.inf),))
    with pytest.raises(ValueError):
        Beam(coupling=1.0, passes=((1, 0.0),), pin=1.0)  # pin without measure
    with pytest.raises(ValueError):
        Beam(coupling=1.0, passes=((1, 0.0),), measure=True, pin=math.nan)


def test_beam_seed_rules():
    Beam(coupling=1.0, passes=((1, 0.0),), measure=True, seed=5)
    with pytest.raises(ValueError):
        Beam(coupling=1.0, passes=((1, 0.0),), seed=5)
    with pytest.raises(ValueError):
        Beam(coupling=1.0, passes=((1, 0.0),), measure=True, pin=0.0, seed=5)
    with pytest.raises(ValueError):
        Beam(coupling=1.0, passes=((1, 0.0),), measure=True, seed=-1)


def test_apply_beam_validation():
    state = vacuum_state(2)
    samples = make_samples([1, 1])
    with pytest.raises(ValueError):
        apply_beam(state, Beam(1.0, ((3, 0.0),)), samples)
    with pytest.raises(ValueError):
        apply_beam(state, Beam(1.0, ((1, 0.0),)), make_samples([1]))
    with pytest.raises(ValueError):
        apply_beam(state, Beam(1.0, ((1, 0.0),), measure=True), samples)  # no rng
    with pytest.raises(ValueError):
        apply_beam(state, Beam(1.0, ((1, 0.0),)), (Sample(1), Sample(1)))


def test_unmeasured_beam_discards_light_and_keeps_purity_with_measurement():
    samples = make_samples([1, 1])
    state = vacuum_state(2)
    measured, outcome = apply_beam(
        state, Beam(1.0, ((1, 0.0), (2, 0.0)), measure=True, pin=0.3), samples
    )
    assert outcome == 0.3
    assert measured.n_modes == 2
    assert is_pure(measured)
    discarded, none_outcome = apply_beam(state, Beam(1.0, ((1, 0.0), (2, 0.0))), samples)
    assert none_outcome is None
    assert not is_pure(discarded)  # unread light leaves the register mixed


def test_entangling_beam_closed_form():
    """One measured beam at angle 0 through both samples, kappa = 1.

    Var(x1+x2) = 3, Var(x1-x2) = 1, Var(p1+p2) = 1/3, Var(p1-p2) = 1
    (in vacuum units both sums are 1 and both differences are 1).
    """
    samples = make_samples([1, 1])
    for kappa in (0.3, 0.5, 1.0, 2.0):
        state, _ = apply_beam(
            vacuum_state(2),
            Beam(kappa, ((1, 0.0), (2, 0.0)), measure=True, pin=0.0),
            samples,
        )
        k2 = kappa * kappa
        assert variance_of(state, sum_x(2)) == pytest.approx(1.0 + 2.0 * k2, abs=1e-12)
        assert variance_of(state, diff_x(2, 1, 2)) == pytest.approx(1.0, abs=1e-12)
        assert variance_of(state, sum_p(2)) == pytest.approx(1.0 / (1.0 + 2.0 * k2), abs=1e-12)
        assert variance_of(state, diff_p(2, 1, 2)) == pytest.approx(1.0, abs=1e-12)


def test_zero_coupling_outcome_is_vacuum_shot_noise():
    samples = make_samples([1, 1])
    draws = [
        apply_beam(
            vacuum_state(2),
            Beam(0.0, ((1, 0.0), (2, 0.0)), measure=True),
            samples,
            rng=np.random.default_rng(k),
        )[1]
        for k in range(4000)
    ]
    assert abs(np.mean(draws)) < 0.05
    assert abs(np.var(draws) - 0.5) < 0.05


def test_beam_seed_changes_outcome_not_covariance():
    samples = make_samples([1, 1])
    state = vacuum_state(2)
    a, out_a = apply_beam(state, Beam(1.0, ((1, 0.0), (2, 0.0)), measure=True, seed=1), samples)
    b, out_b = apply_beam(state, Beam(1.0, ((1, 0.0), (2, 0.0)), measure=True, seed=2), samples)
    assert out_a != out_b
    assert np.array_equal(a.cov, b.cov)
    # the beam seed wins over a supplied rng
    c, out_c = apply_beam(
        state,
        Beam(1.0, ((1, 0.0), (2, 0.0)), measure=True, seed=1),
        samples,
        rng=np.random.default_rng(999),
    )
    assert out_c == out_a


def test_disjoint_passes_commute():
    samples = make_samples([1, 1, 1, -1])
    beam_a = Beam(0.8, ((1, 0.3), (2, -0.7)), measure=True, pin=0.1)
    beam_b = Beam(1.3, ((3, HALF_PI), (4, 0.0)), measure=True, pin=-0.4)
    ab = apply_beam(apply_beam(vacuum_state(4), beam_a, samples)[0], beam_b, samples)[0]
    ba = apply_beam(apply_beam(vacuum_state(4), beam_b, samples)[0], beam_a, samples)[0]
    assert np.allclose(ab.cov, ba.cov, atol=1e-12)
    assert np.allclose(ab.mean, ba.mean, atol=1e-12)


def test_coupled_combination_entries():
    samples = make_samples([1, -1])
    beam = Beam(2.0, ((1, 0.3), (2, -0.9)))
    w = coupled_combination(beam, samples, 2)
    assert w[0] == pytest.approx(math.sin(0.3))
    assert w[1] == pytest.approx(math.cos(0.3))
    assert w[2] == pytest.approx(math.sin(-0.9))
    assert w[3] == pytest.approx(-math.cos(-0.9))  # orientation -1 flips the p part
    with pytest.raises(ValueError):
        coupled_combination(Beam(1.0, ((5, 0.0),)), samples, 2)


def test_verification_variance_matches_actual_light_variance():
    """The prediction equals the x_L variance from really applying the beam."""
    samples = make_samples([1, 1, -1])
    state = vacuum_state(3)
    state, _ = apply_beam(
        state, Beam(1.2, ((1, 0.0), (2, 0.4), (3, HALF_PI)), measure=True, pin=0.0), samples
    )
    probe = Beam(0.9, ((1, math.pi / 4), (2, -math.pi / 4), (3, 0.1)))
    predicted = verification_variance(state, probe, samples)

    work = append_vacuum_mode(state)
    for sid, alpha in probe.passes:
        smap = qnd_pass_map(4, 3, sid - 1, probe.kappa, alpha, samples[sid - 1].orientation)
        work = apply_symplectic(work, smap)
    actual = work.cov[6, 6]
    assert predicted == pytest.approx(actual, abs=1e-12)


def test_verification_variance_known_values():
    samples = make_samples([1, 1])
    # vacuum probed at +-pi/4 with kappa=1: 1/2 + (1/2 + 1/2) = 3/2
    probe = Beam(1.0, ((1, math.pi / 4), (2, -math.pi / 4)))
    assert verification_variance(vacuum_state(2), probe, samples) == pytest.approx(1.5)
    # after the entangling beam at kappa=1 the same probe reads 7/6
    state, _ = apply_beam(
        vacuum_state(2), Beam(1.0, ((1, 0.0), (2, 0.0)), measure=True, pin=0.0), samples
    )
    assert verification_variance(state, probe, samples) == pytest.approx(7.0 / 6.0, abs=1e-12)
    with pytest.raises(ValueError):
        verification_variance(state, Beam(1.0, ((1, 0.0),), measure=True), samples)


def test_orientation_flip_changes_which_combination_squeezes():
    """With orientations (+1, -1) an angle-0 beam squeezes p1 - p2 instead of p1 + p2."""
    samples = make_samples([1, -1])
    state, _ = apply_beam(
        vacuum_state(2), Beam(1.0, ((1, 0.0), (2, 0.0)), measure=True, pin=0.0), samples
    )
    assert variance_of(state, diff_p(2, 1, 2)) == pytest.approx(1.0 / 3.0, abs=1e-12)
    assert variance_of(state, sum_p(2)) == pytest.approx(1.0, abs=1e-12)
