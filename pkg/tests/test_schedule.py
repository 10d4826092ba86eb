import pytest

from sgtsim import GainSchedule, InvalidGainError


def test_alpha_examples():
    assert GainSchedule(a=3, A=0, s=0.602).alpha(0) == pytest.approx(3.0)
    assert GainSchedule(a=3, A=0, s=1.0).alpha(2) == pytest.approx(1.0)


def test_beta_examples():
    assert GainSchedule(b=0.1, t=0.101).beta(0) == pytest.approx(0.1)
    assert GainSchedule(b=0.1, t=1.0).beta(9) == pytest.approx(0.01)


def test_both_gains_strictly_decreasing():
    sched = GainSchedule()
    alphas = [sched.alpha(k) for k in range(0, 10_001, 100)]
    betas = [sched.beta(k) for k in range(0, 10_001, 100)]
    assert all(a1 > a2 > 0 for a1, a2 in zip(alphas, alphas[1:]))
    assert all(b1 > b2 > 0 for b1, b2 in zip(betas, betas[1:]))


def test_validation():
    with pytest.raises(InvalidGainError):
        GainSchedule(a=0.0)
    with pytest.raises(InvalidGainError):
        GainSchedule(b=-0.1)
    with pytest.raises(InvalidGainError):
        GainSchedule(A=-1.0)
    with pytest.raises(InvalidGainError):
        GainSchedule(s=0.0)
    with pytest.raises(InvalidGainError):
        GainSchedule(t=0.0)
