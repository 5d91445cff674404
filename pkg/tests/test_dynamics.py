import numpy as np
import pytest

from infogame import dynamics as dyn
from infogame.evaluation import OpinionAssessment, assess_opinion, scenario_probabilities
from infogame.model import NormalizedView

G = OpinionAssessment(0.55, 0.15, 0.30)
S_LABELS = (0.6, 0.2, 0.2)


def view(f, labels, k=0.0, c=0.0):
    return NormalizedView(k=k, c=c, p=0.0, f=f, f_plus=labels[0], f_minus=labels[1], f_rumor=labels[2])


R = view(0.5, (0.4, 0.2, 0.4))


class TestKnowledge:
    def test_receiver(self):
        assert dyn.receiver_knowledge_delta(R, G, 0.5) == pytest.approx(0.45, abs=1e-15)

    def test_receiver_full_rumor_weight(self):
        r = view(0.3, (0.5, 0.5, 0.0))
        for g in (G, OpinionAssessment(1, 0, 0), OpinionAssessment(0, 0, 1)):
            assert dyn.receiver_knowledge_delta(r, g, 1.0) == pytest.approx(0.7, abs=1e-15)

    def test_receiver_no_novelty(self):
        r = view(1.0, (0.5, 0.3, 0.2))
        assert dyn.receiver_knowledge_delta(r, OpinionAssessment(0.5, 0.3, 0.2), 0.0) == pytest.approx(0, abs=1e-15)

    def test_receiver_known(self):
        assert dyn.receiver_knowledge_delta_known(R, G, 0.5) == pytest.approx(0.2, abs=1e-15)
        assert dyn.receiver_knowledge_delta_known(R, G, 1.0) == 0
        r = view(0.5, (0.4, 0.3, 0.3))
        assert dyn.receiver_knowledge_delta_known(r, OpinionAssessment(0.2, 0.15, 0.65), 0.5) == pytest.approx(0, abs=1e-15)

    def test_sender(self):
        assert dyn.sender_knowledge_delta(0.5, S_LABELS, G, 0.5) == pytest.approx(-0.025, abs=1e-15)
        assert dyn.sender_knowledge_delta(0.0, S_LABELS, G, 0.5) == 0
        assert dyn.sender_knowledge_delta(0.7, S_LABELS, G, 1.0) == 0


class TestPopularity:
    def test_worked_example(self):
        assert dyn.sender_popularity_premium(R, G) == pytest.approx(0.815, abs=1e-15)

    def test_novel(self):
        assert dyn.sender_popularity_premium(view(0, (0, 0, 0)), G) == 1

    def test_certain_agreement(self):
        assert dyn.sender_popularity_premium(view(1, (1, 0, 0)), OpinionAssessment(1, 0, 0)) == 0


class TestReputation:
    def test_receiver(self):
        assert dyn.receiver_reputation_delta(0.5, 0.5, S_LABELS, 0.8) == pytest.approx(0.56, abs=1e-15)
        assert dyn.receiver_reputation_delta(1.0, 0.3, S_LABELS, 0.8) == 1
        assert dyn.receiver_reputation_delta(0.0, 0.0, S_LABELS, 0.8) == 0

    def test_sender(self):
        assert dyn.sender_reputation_delta(0.5, S_LABELS, G) == pytest.approx(-0.24, abs=1e-15)
        assert dyn.sender_reputation_delta(0.0, S_LABELS, G) == 0
        assert dyn.sender_reputation_delta(1.0, (0, 0, 1), OpinionAssessment(0, 0, 1)) == 1


class TestCountDeltas:
    def test_receiver(self):
        d = dyn.receiver_count_deltas(R, G)
        assert (d.d_f, d.d_plus, d.d_minus, d.d_rumor) == pytest.approx((0.5, 0.35, 0.05, 0.10), abs=1e-15)
        assert d.weighted(0.5) == pytest.approx(dyn.receiver_knowledge_delta(R, G, 0.5), abs=1e-15)

    def test_receiver_pure_acquisition(self):
        d = dyn.receiver_count_deltas(view(0, (0, 0, 0)), G)
        assert (d.d_f, d.d_plus, d.d_minus, d.d_rumor) == (1, 0.55, 0.15, 0.30)

    def test_receiver_fixed_point(self):
        labels = (0.55, 0.15, 0.30)
        d = dyn.receiver_count_deltas(view(1.0, labels), G)
        assert (d.d_f, d.d_plus, d.d_minus, d.d_rumor) == (0, 0, 0, 0)

    def test_sender(self):
        d = dyn.sender_count_deltas(0.5, S_LABELS, G)
        assert (d.d_f, d.d_plus, d.d_minus, d.d_rumor) == pytest.approx((0, -0.025, -0.025, 0.05), abs=1e-15)
        assert d.weighted(0.5) == pytest.approx(-0.025, abs=1e-15)

    def test_sender_untrusted_or_agreeing(self):
        assert dyn.sender_count_deltas(0.0, S_LABELS, G) == dyn.CountDeltas(0, 0, 0, 0)
        d = dyn.sender_count_deltas(0.9, (0.55, 0.15, 0.30), G)
        assert (d.d_plus, d.d_minus, d.d_rumor) == (0, 0, 0)


def random_cases(seed, n):
    rng = np.random.default_rng(seed)
    r_labels = rng.dirichlet([1, 1, 1], size=n)
    s_labels = rng.dirichlet([1, 1, 1], size=n)
    f, k_r, c_s, c_r, phi, lam = rng.random((6, n))
    return r_labels, s_labels, f, k_r, c_s, c_r, phi, lam


def test_algebraic_consistency_and_bounds():
    n = 100_000
    r_labels, s_labels, f, k_r, c_s, c_r, phi, lam = random_cases(3, n)
    worst_r = worst_s = worst_p = 0.0
    for i in range(n):
        r = view(f[i], r_labels[i], k=k_r[i], c=c_r[i])
        sl = tuple(s_labels[i])
        g = assess_opinion(k_r[i], c_s[i], sl, phi[i])

        rc = dyn.receiver_count_deltas(r, g)
        worst_r = max(worst_r, abs(rc.weighted(lam[i]) - dyn.receiver_knowledge_delta(r, g, lam[i])))
        assert rc.d_f == 1 - f[i]
        assert rc.d_plus + rc.d_minus + rc.d_rumor == pytest.approx(rc.d_f, abs=1e-12)

        sc = dyn.sender_count_deltas(c_r[i], sl, g)
        worst_s = max(worst_s, abs(sc.weighted(lam[i]) - dyn.sender_knowledge_delta(c_r[i], sl, g, lam[i])))
        assert sc.d_plus + sc.d_minus + sc.d_rumor == pytest.approx(0, abs=1e-12)

        p1 = scenario_probabilities(r, g).p_discard
        worst_p = max(worst_p, abs(dyn.sender_popularity_premium(r, g) - (1 - p1)))

        dc_r = dyn.receiver_reputation_delta(k_r[i], c_s[i], sl, phi[i])
        assert abs(dc_r) <= 1 + 1e-12
        assert dc_r >= k_r[i] - (1 - k_r[i]) * c_s[i] - 1e-12
        assert abs(dyn.sender_reputation_delta(c_r[i], sl, g)) <= 3 * c_r[i] + 1e-12
    assert worst_r <= 1e-10
    assert worst_s <= 1e-10
    assert worst_p <= 1e-12
