import math

import pytest

from vrgc.analysis import (
    EmptyGrammar,
    compression_rate,
    kl_divergence,
    rank_interesting,
    rule_distribution,
)
from vrgc.engine import extract
from vrgc.enumeration import ExtractConfig
from vrgc.mdl import BitAccount
from vrgc.rules import Rule, RuleLibrary


def account(original, rule=0, app=0, residual=0):
    return BitAccount(
        original_bits=original,
        rule_bits=rule,
        application_bits=app,
        residual_bits=residual,
    )


def test_compression_rate_arithmetic():
    assert compression_rate(account(100, residual=100)) == 0.0
    assert compression_rate(account(100, rule=20, app=20, residual=10)) == 0.5
    assert compression_rate(account(100, rule=120)) == pytest.approx(-0.2)
    with pytest.raises(ValueError):
        compression_rate(account(0))


def library_with_counts(counts):
    lib = RuleLibrary()
    shapes = [
        Rule(2, (2, 0), 0, 0),
        Rule(2, (2, 0), 1, 0),
        Rule(2, (2, 0), 2, 0),
        Rule(2, (2, 0), 3, 0),
    ]
    for shape, count in zip(shapes, counts):
        rid, _ = lib.intern(shape)
        lib.frequency[rid] = count
    return lib


def test_rule_distribution():
    lib = library_with_counts([3, 1])
    dist = rule_distribution(lib)
    assert sorted(dist.probs.values()) == [0.25, 0.75]
    assert abs(sum(dist.probs.values()) - 1) < 1e-9
    with pytest.raises(EmptyGrammar):
        rule_distribution(library_with_counts([0, 0]))


def test_single_rule_carries_full_mass(demo6):
    res = extract(demo6, ExtractConfig(k_min=2, k_max=2, shortcut_s=None))
    dist = rule_distribution(res.grammar)
    assert max(dist.probs.values()) >= 0.5
    assert abs(sum(dist.probs.values()) - 1) < 1e-9


def test_kl_identity():
    dist = rule_distribution(library_with_counts([3, 2, 1]))
    total, contributions = kl_divergence(dist, dist)
    assert total == 0
    assert all(v == 0 for v in contributions.values())


def test_kl_hand_case():
    """counts p=(2,1,0), q=(0,1,2): smoothed total is (1/3) ln 3."""
    p = rule_distribution(library_with_counts([2, 1]))
    q = rule_distribution(library_with_counts([0, 1, 2]))
    total, contributions = kl_divergence(p, q)
    assert total == pytest.approx(math.log(3) / 3, abs=1e-9)
    assert sum(contributions.values()) == pytest.approx(total, abs=1e-9)


def test_kl_nonnegative_random():
    p = rule_distribution(library_with_counts([5, 1, 2]))
    q = rule_distribution(library_with_counts([1, 4, 0, 2]))
    total, _ = kl_divergence(p, q)
    assert total >= 0


def test_rank_interesting_hand_case():
    p_lib = library_with_counts([2, 1])
    p = rule_distribution(p_lib)
    q = rule_distribution(library_with_counts([0, 1, 2]))
    ranked = rank_interesting(p, q, p_lib)
    # the rule with counts (2, 0) must rank first
    assert ranked[0] == p_lib.codes[0]


def test_rank_ties_fall_back_to_library_id():
    lib = library_with_counts([1, 1, 1])
    dist = rule_distribution(lib)
    ranked = rank_interesting(dist, dist, lib)
    assert ranked == [lib.codes[0], lib.codes[1], lib.codes[2]]
