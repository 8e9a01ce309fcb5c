import random

import pytest

from cardrank import (
    Action,
    card_outcomes,
    discounted_utility,
    epu_card,
    epu_list,
    expected_benefit,
    expected_cost,
)

from conftest import make_profile, random_profile


def epu_oracle(profile, p_rel):
    """Brute-force enumeration over the four (relevance, action) outcomes,
    with the probability/benefit/cost tables spelled out independently."""
    table = [
        # (P(action | relevance), P(relevance), benefit, cost)
        (profile.p_click_rel, p_rel, profile.t_read_rel, profile.t_click_rel),
        (1 - profile.p_click_rel, p_rel, 0.0, profile.t_skip_rel),
        (1 - profile.p_skip_nonrel, 1 - p_rel, 0.0, profile.t_click_nonrel),
        (profile.p_skip_nonrel, 1 - p_rel, 0.0, profile.t_skip_nonrel),
    ]
    return sum(p_action * p_relevance * (benefit - cost)
               for p_action, p_relevance, benefit, cost in table)


def test_expected_benefit_click_hand_case():
    profile = make_profile(p_click_rel=0.8, t_read_rel=30.0, p_skip_nonrel=0.7)
    assert expected_benefit(profile, Action.CLICK) == pytest.approx(24.0)


def test_expected_benefit_skip_is_zero():
    rng = random.Random(1)
    for _ in range(50):
        assert expected_benefit(random_profile(rng), Action.SKIP) == 0.0


def test_expected_benefit_zero_read_time():
    assert expected_benefit(make_profile(t_read_rel=0.0), Action.CLICK) == 0.0


def test_expected_cost_click_hand_case():
    profile = make_profile(p_click_rel=0.8, t_click_rel=4.0, p_skip_nonrel=0.7, t_click_nonrel=4.0)
    assert expected_cost(profile, Action.CLICK) == pytest.approx(4.4)


def test_expected_cost_skip_hand_case():
    profile = make_profile(p_click_rel=0.8, t_skip_rel=5.0, p_skip_nonrel=0.7, t_skip_nonrel=4.0)
    assert expected_cost(profile, Action.SKIP) == pytest.approx(3.8)


def test_expected_cost_all_zero_timings():
    profile = make_profile(t_click_rel=0, t_click_nonrel=0, t_skip_rel=0, t_skip_nonrel=0)
    assert expected_cost(profile, Action.CLICK) == 0.0
    assert expected_cost(profile, Action.SKIP) == 0.0


HAND_PROFILE = make_profile(
    p_click_rel=0.8,
    t_read_rel=10.0,
    t_click_rel=4.0,
    t_skip_rel=5.0,
    p_skip_nonrel=0.7,
    t_click_nonrel=4.0,
    t_skip_nonrel=4.0,
)


def test_epu_card_hand_case():
    assert epu_card(HAND_PROFILE, 0.5) == pytest.approx(-0.1, abs=1e-9)


def test_epu_card_p_zero_is_negative_nonrelevant_cost():
    rng = random.Random(2)
    for _ in range(100):
        profile = random_profile(rng)
        expected = -(
            profile.p_click_nonrel * profile.t_click_nonrel
            + profile.p_skip_nonrel * profile.t_skip_nonrel
        )
        assert epu_card(profile, 0.0) == pytest.approx(expected, abs=1e-12)


def test_epu_card_all_zero_profile():
    profile = make_profile(
        t_click_rel=0, t_click_nonrel=0, t_skip_rel=0, t_skip_nonrel=0, t_read_rel=0
    )
    assert epu_card(profile, 0.3) == 0.0


def test_epu_card_matches_brute_force_oracle():
    rng = random.Random(99)
    for _ in range(1000):
        profile = random_profile(rng)
        p_rel = rng.random()
        assert epu_card(profile, p_rel) == pytest.approx(epu_oracle(profile, p_rel), abs=1e-9)


def test_epu_card_matches_outcome_enumeration():
    rng = random.Random(100)
    for _ in range(200):
        profile = random_profile(rng)
        p_rel = rng.random()
        total = sum(
            o.probability * (p_rel if o.relevant else 1 - p_rel) * (o.benefit - o.cost)
            for o in card_outcomes(profile)
        )
        assert epu_card(profile, p_rel) == pytest.approx(total, abs=1e-12)


def test_epu_card_monotone_in_read_time():
    base = make_profile(t_read_rel=10.0, p_click_rel=0.5)
    longer = make_profile(t_read_rel=11.0, p_click_rel=0.5)
    assert epu_card(longer, 0.3) > epu_card(base, 0.3)


@pytest.mark.parametrize(
    "field,p_rel",
    [("t_click_rel", 0.5), ("t_skip_rel", 0.5), ("t_click_nonrel", 0.5), ("t_skip_nonrel", 0.5)],
)
def test_epu_card_decreasing_in_each_cost(field, p_rel):
    base = make_profile()
    bumped = make_profile(**{field: getattr(base, field) + 1.0})
    assert epu_card(bumped, p_rel) < epu_card(base, p_rel)


def test_epu_card_affine_in_p_rel():
    rng = random.Random(7)
    for _ in range(100):
        profile = random_profile(rng)
        y0, y_half, y1 = (epu_card(profile, p) for p in (0.0, 0.5, 1.0))
        assert y_half == pytest.approx((y0 + y1) / 2, abs=1e-9)


def test_epu_list_single_item_equals_card():
    profile = make_profile()
    assert epu_list([(0.4, profile)]) == pytest.approx(epu_card(profile, 0.4))


def test_epu_list_hand_case():
    # items with (p_rel, utility) = (0.5, 2), (0.3, 4), (0.9, 1)
    assert discounted_utility([(0.5, 2.0), (0.3, 4.0), (0.9, 1.0)]) == pytest.approx(
        4.35, abs=1e-9
    )


def test_epu_list_certain_item_collapses_tail():
    total = discounted_utility([(1.0, 3.0), (0.5, 100.0), (0.2, 100.0)])
    assert total == pytest.approx(3.0)


def test_epu_list_all_p_zero_is_plain_sum():
    rng = random.Random(11)
    profiles = [random_profile(rng) for _ in range(5)]
    total = epu_list([(0.0, p) for p in profiles])
    assert total == pytest.approx(sum(epu_card(p, 0.0) for p in profiles))


def test_epu_list_rejects_empty():
    with pytest.raises(ValueError, match="empty"):
        epu_list([])
    with pytest.raises(ValueError, match="empty"):
        discounted_utility([])
