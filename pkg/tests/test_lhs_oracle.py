import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from steerlab import lhs_oracle
from steerlab.errors import CertificationError, DomainError
from steerlab.lhs_oracle import (LhsModel, adversarial_slack, certify_no_violation, convexity_gap,
                                 gaussian_bob, lhs_inferred_variances, mixture_sum_bound, qubit_bob,
                                 random_model, random_models, slack, triangle_gap)


def _enumerate_inferred(model):
    """Brute-force inferred variances by explicit loops over outcomes."""
    out = []
    w = list(model.weights)
    for s in (0, 1):
        total = 0.0
        for y in range(model.responses.shape[2]):
            joint = [w[k] * model.responses[s, k, y] for k in range(len(w))]
            py = sum(joint)
            if py == 0:
                continue
            m1 = sum(j * model.means[s, k] for k, j in enumerate(joint)) / py
            m2 = sum(j * (model.variances[s, k] + model.means[s, k] ** 2) for k, j in enumerate(joint)) / py
            total += py * (m2 - m1 * m1)
        out.append(math.sqrt(total))
    return tuple(out)


def _model(weights, responses, mean, cov):
    means, variances, sum_var = gaussian_bob(np.asarray(mean, float), np.asarray(cov, float))
    return LhsModel(np.asarray(weights, float), np.asarray(responses, float), means, variances, sum_var)


def test_single_hidden_value_gives_quantum_std():
    cov = np.array([[[0.8, 0.1], [0.1, 0.5]]])
    m = _model([1.0], np.ones((2, 1, 1)), [[0.3, -1.0]], cov)
    d1, d2 = lhs_inferred_variances(m)
    assert d1 == pytest.approx(math.sqrt(0.8), rel=1e-14)
    assert d2 == pytest.approx(math.sqrt(0.5), rel=1e-14)
    assert mixture_sum_bound(m) == pytest.approx(math.sqrt(0.8 + 0.5 + 0.2))


def test_two_values_deterministic_responses():
    cov = np.array([np.diag([0.5, 0.5]), np.diag([2.0, 0.125 / 0.5 * 2])])
    m = _model([0.25, 0.75], np.tile(np.eye(2), (2, 1, 1)), [[1.0, 2.0], [-1.0, 0.0]], cov)
    d1, d2 = lhs_inferred_variances(m)
    # Alice reveals lambda, so only the quantum spread remains
    assert d1 == pytest.approx(math.sqrt(0.25 * 0.5 + 0.75 * 2.0), rel=1e-14)
    assert d2 == pytest.approx(math.sqrt(0.25 * 0.5 + 0.75 * 0.5), rel=1e-14)
    assert (d1, d2) == pytest.approx(_enumerate_inferred(m), rel=1e-13)


def test_uniform_responses_give_total_std():
    w = np.array([0.2, 0.5, 0.3])
    mean = np.array([[1.0, 0.0], [-2.0, 1.0], [0.5, 3.0]])
    cov = np.tile(np.diag([0.6, 0.7]), (3, 1, 1))
    m = _model(w, np.full((2, 3, 4), 0.25), mean, cov)
    d1, _ = lhs_inferred_variances(m)
    total = 0.6 + w @ mean[:, 0] ** 2 - (w @ mean[:, 0]) ** 2
    assert d1 == pytest.approx(math.sqrt(total), rel=1e-13)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(["cv", "qubit"]))
def test_matches_enumeration(seed, kind):
    m = random_model(np.random.default_rng(seed), kind)
    assert lhs_inferred_variances(m) == pytest.approx(_enumerate_inferred(m), rel=1e-9, abs=1e-12)
    assert slack(m) >= -1e-12
    assert triangle_gap(m) >= -1e-12
    assert convexity_gap(m) >= -1e-12


def test_batch_matches_single_model_path():
    batch = random_models(np.random.default_rng(7), 50, "cv")
    s, tri, conv = lhs_oracle.batch_audit(batch)
    for i in range(len(batch)):
        m = batch.model(i)
        assert s[i] == pytest.approx(slack(m), abs=1e-12)
        assert tri[i] == pytest.approx(triangle_gap(m), abs=1e-12)


def test_qubit_statistics():
    means, variances, sum_var = qubit_bob(np.array([[0.0, 0.0, 1.0], [0.0, 0.0, 0.0]]))
    np.testing.assert_allclose(means, [[0, 0], [0.5, 0]])
    np.testing.assert_allclose(variances, [[0.25, 0.25], [0.0, 0.25]])
    np.testing.assert_allclose(sum_var, [0.25, 0.5])


def test_model_validation():
    with pytest.raises(DomainError):
        LhsModel(np.array([0.5, 0.6]), np.ones((2, 2, 1)), np.zeros((2, 2)), np.ones((2, 2)), np.ones(2))
    with pytest.raises(DomainError):
        LhsModel(np.array([1.0]), np.full((2, 1, 2), 0.6), np.zeros((2, 1)), np.ones((2, 1)), np.ones(1))
    with pytest.raises(DomainError):
        LhsModel(np.ones(33) / 33, np.ones((2, 33, 1)), np.zeros((2, 33)), np.ones((2, 33)), np.ones(33))


@pytest.mark.parametrize("kind", ["cv", "qubit"])
def test_certify_small(kind):
    rep = certify_no_violation(2000, 3, kind)
    assert rep.violations == 0 and rep.min_slack >= 0
    assert rep.min_triangle_gap >= -1e-12 and rep.min_convexity_gap >= -1e-12
    assert json.loads(rep.to_json()) == {"samples": 2000, "violations": 0,
                                         "min_slack": rep.min_slack, "seed": 3}


def test_certify_is_seeded():
    a = certify_no_violation(1000, 11)
    b = certify_no_violation(1000, 11)
    c = certify_no_violation(1000, 12)
    assert a.to_json() == b.to_json()
    assert a.min_slack != c.min_slack


def test_certify_validation():
    with pytest.raises(DomainError):
        certify_no_violation(999, 1)
    with pytest.raises(DomainError):
        certify_no_violation(1000, 1, kind="photonic")


def test_broken_bound_is_reported(monkeypatch):
    # an unphysical Bob (sum variance far above the quadratures) must be flagged
    real = lhs_oracle.random_models

    def broken(rng, count, kind="cv"):
        b = real(rng, count, kind)
        return lhs_oracle.ModelBatch(b.weights, b.responses, b.means, b.variances, 100 * b.sum_var + 10, kind)

    monkeypatch.setattr(lhs_oracle, "random_models", broken)
    rep = certify_no_violation(1000, 1)
    assert rep.violations == 1000 and rep.min_slack < 0
    with pytest.raises(CertificationError) as info:
        certify_no_violation(1000, 1, raise_on_violation=True)
    assert "weights" in info.value.model


def test_adversarial_slack_nonnegative():
    assert adversarial_slack() >= 0
