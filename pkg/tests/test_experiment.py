import itertools
import json

import numpy as np
import pytest

from bellsquare.experiment import (
    BatchReport,
    Color,
    Fixed,
    PanelGrid,
    RoundRecord,
    RowsForAliceColsForBob,
    UniformRandom,
    common_panels,
    joint_distribution,
    measurement_order_deviation,
    no_signaling_check,
    parse_policy,
    party_order_deviation,
    policy_label,
    round_fingerprint,
    run_batch,
    run_round,
    setting_distribution,
    triple_key,
    valid_outcome_triples,
    verify_correlation,
    verify_parity,
    verify_record,
)
from bellsquare.magic_square import SETTINGS, Setting, Variant, required_sign
from bellsquare.quantum import ATOL, Party

R, G = Color.RED, Color.GREEN


def grid(setting, colors):
    return PanelGrid(setting=setting, colors=colors)


class TestColor:
    def test_bijection_with_outcomes(self):
        assert Color.from_outcome(1) is G and G.outcome == 1
        assert Color.from_outcome(-1) is R and R.outcome == -1
        with pytest.raises(ValueError):
            Color.from_outcome(0)


class TestPanelGrid:
    def test_color_at_lit_and_unlit(self):
        g = grid(Setting.R2, (R, G, R))
        assert g.color_at(1, 0) is R and g.color_at(1, 1) is G and g.color_at(1, 2) is R
        assert g.color_at(0, 0) is None and g.color_at(2, 2) is None

    def test_red_count_and_outcomes(self):
        g = grid(Setting.C1, (G, R, R))
        assert g.red_count() == 2
        assert g.outcomes() == (1, -1, -1)


class TestVerifyParity:
    def test_two_reds_on_row_is_even(self):
        assert verify_parity(grid(Setting.R1, (R, G, R)), Setting.R1, Variant.STANDARD)

    def test_all_green_fails_c3(self):
        assert not verify_parity(grid(Setting.C3, (G, G, G)), Setting.C3, Variant.STANDARD)

    def test_all_red_passes_c3(self):
        assert verify_parity(grid(Setting.C3, (R, R, R)), Setting.C3, Variant.STANDARD)

    def test_signed_variant_flips_column_requirement(self):
        assert not verify_parity(grid(Setting.C1, (G, G, G)), Setting.C1, Variant.SIGNED_SYMMETRIC)
        assert verify_parity(grid(Setting.C1, (R, G, G)), Setting.C1, Variant.SIGNED_SYMMETRIC)

    def test_mismatched_setting_raises(self):
        with pytest.raises(ValueError):
            verify_parity(grid(Setting.R1, (R, G, R)), Setting.R2, Variant.STANDARD)


class TestVerifyCorrelation:
    def test_row1_column2_sharing_a_green(self):
        alice = grid(Setting.R1, (R, G, R))
        bob = grid(Setting.C2, (G, G, G))
        assert verify_correlation(alice, bob)

    def test_mismatch_detected(self):
        alice = grid(Setting.R1, (R, G, R))
        bob = grid(Setting.C1, (G, R, R))  # position (0,0) green vs red
        assert not verify_correlation(alice, bob)

    def test_disjoint_rows_vacuously_true(self):
        assert verify_correlation(grid(Setting.R1, (R, G, R)), grid(Setting.R2, (G, G, G)))

    def test_common_panels_geometry(self):
        assert common_panels(Setting.R1, Setting.C2) == ((0, 1),)
        assert common_panels(Setting.R2, Setting.C1) == ((1, 0),)
        assert common_panels(Setting.R1, Setting.R2) == ()
        assert common_panels(Setting.C3, Setting.C3) == ((0, 2), (1, 2), (2, 2))
        assert common_panels(Setting.R2, Setting.R2) == ((1, 0), (1, 1), (1, 2))


class TestRunRound:
    def test_reproduces_the_canonical_run(self):
        # seed found by search: Alice R1 shows red, green, red and Bob C2 all
        # green, agreeing on the shared panel (1,2)
        record = run_round(Fixed(Setting.R1, Setting.C2), seed=17)
        assert record.alice_panels.colors == (R, G, R)
        assert record.bob_panels.colors == (G, G, G)
        assert record.alice_panels.color_at(0, 1) is record.bob_panels.color_at(0, 1) is G

    @pytest.mark.parametrize("index", range(60))
    def test_same_setting_gives_identical_grids(self, index):
        record = run_round(Fixed(Setting.R1, Setting.R1), seed=23, round_index=index)
        assert record.alice_panels.colors == record.bob_panels.colors

    @pytest.mark.parametrize("index", range(60))
    def test_r2_c1_share_one_equal_panel(self, index):
        record = run_round(Fixed(Setting.R2, Setting.C1), seed=29, round_index=index)
        assert record.alice_panels.color_at(1, 0) is record.bob_panels.color_at(1, 0)

    def test_round_is_replayable_in_isolation(self):
        a = run_round(UniformRandom(), seed=101, round_index=5)
        b = run_round(UniformRandom(), seed=101, round_index=5)
        assert a == b
        assert a.seed_fingerprint == round_fingerprint(101, 5)

    def test_distinct_rounds_have_distinct_fingerprints(self):
        prints = {round_fingerprint(55, i) for i in range(100)}
        assert len(prints) == 100

    def test_none_side_is_drawn(self):
        settings = {
            run_round(Fixed(Setting.R1, None), seed=3, round_index=i).bob_setting
            for i in range(40)
        }
        assert len(settings) > 1  # Bob's side actually varies

    @pytest.mark.parametrize("variant", Variant)
    def test_outcome_product_forced_every_round(self, variant):
        # the third eigenvalue is determined by the first two and the
        # setting's operator-product sign, exactly, in every round
        for index in range(40):
            record = run_round(UniformRandom(), variant, seed=31, round_index=index)
            for setting, panels in (
                (record.alice_setting, record.alice_panels),
                (record.bob_setting, record.bob_panels),
            ):
                o1, o2, o3 = panels.outcomes()
                assert o3 == required_sign(setting, variant) * o1 * o2


class TestRecordSerialization:
    def test_documented_schema(self):
        record = run_round(Fixed(Setting.R1, Setting.C2), seed=17)
        data = record.to_json_dict()
        assert set(data) == {"round", "alice", "bob", "seed_fingerprint"}
        assert data["round"] == 0
        assert data["alice"]["setting"] == "R1"
        assert data["alice"]["panels"] == [
            {"row": 1, "col": 1, "color": "red"},
            {"row": 1, "col": 2, "color": "green"},
            {"row": 1, "col": 3, "color": "red"},
        ]
        assert data["bob"]["panels"][0] == {"row": 1, "col": 2, "color": "green"}
        fp = data["seed_fingerprint"]
        assert len(fp) == 16 and int(fp, 16) == record.seed_fingerprint

    def test_round_trip(self):
        for index in range(10):
            record = run_round(UniformRandom(), seed=43, round_index=index)
            assert RoundRecord.from_json_dict(record.to_json_dict()) == record


class TestPolicies:
    def test_parse_and_label(self):
        assert parse_policy("random") == UniformRandom()
        assert parse_policy("cleve") == RowsForAliceColsForBob()
        assert parse_policy("fixed:R1:C2") == Fixed(Setting.R1, Setting.C2)
        assert policy_label(parse_policy("fixed:R1:C2")) == "fixed:R1:C2"
        for bad in ("fixed:R1", "fixed:R9:C2", "sometimes", "fixed:R1:C2:R3"):
            with pytest.raises(ValueError):
                parse_policy(bad)

    def test_cleve_policy_restricts_sides(self):
        for index in range(50):
            record = run_round(RowsForAliceColsForBob(), seed=47, round_index=index)
            assert record.alice_setting.is_row
            assert not record.bob_setting.is_row


class TestRunBatch:
    def test_zero_violations_and_determinism(self):
        first = run_batch(1500, UniformRandom(), seed=7, keep_records=True)
        assert first.parity_violations == 0
        assert first.correlation_violations == 0
        second = run_batch(1500, UniformRandom(), seed=7, keep_records=True)
        assert first.to_json_dict() == second.to_json_dict()
        assert json.dumps(first.to_json_dict()) == json.dumps(second.to_json_dict())

    def test_batch_rounds_match_isolated_rounds(self):
        report = run_batch(20, RowsForAliceColsForBob(), seed=13, keep_records=True)
        for index, record in enumerate(report.records):
            assert record == run_round(RowsForAliceColsForBob(), seed=13, round_index=index)

    def test_single_round_batch_reproducible(self):
        a = run_batch(1, Fixed(Setting.R1, Setting.C2), seed=1, keep_records=True)
        b = run_batch(1, Fixed(Setting.R1, Setting.C2), seed=1, keep_records=True)
        assert a.records == b.records

    def test_tallies_consistent_with_uses(self):
        report = run_batch(600, UniformRandom(), seed=99)
        for party in ("alice", "bob"):
            assert sum(report.uses[party].values()) == 600
            for s in SETTINGS:
                assert sum(report.counts[party][s.value].values()) == report.uses[party][s.value]

    def test_rejects_empty_batch(self):
        with pytest.raises(ValueError):
            run_batch(0, UniformRandom(), seed=0)

    def test_valid_triples_have_the_settings_sign(self):
        for variant in Variant:
            for s in SETTINGS:
                triples = valid_outcome_triples(s, variant)
                assert len(triples) == 4
                for t in triples:
                    assert t[0] * t[1] * t[2] == required_sign(s, variant)
        assert triple_key((1, -1, -1)) == "GRR"


class TestAnalyticChecks:
    @pytest.mark.parametrize("setting", SETTINGS)
    def test_outcome_distribution_uniform_over_valid_triples(self, setting):
        dist = setting_distribution(setting, Party.ALICE)
        valid = set(valid_outcome_triples(setting, Variant.STANDARD))
        for outcomes, p in dist.items():
            expected = 0.25 if outcomes in valid else 0.0
            assert p == pytest.approx(expected, abs=ATOL)

    @pytest.mark.parametrize("setting", SETTINGS)
    @pytest.mark.parametrize("party", Party)
    def test_measurement_order_independent(self, setting, party):
        assert measurement_order_deviation(setting, party) < ATOL

    @pytest.mark.parametrize("alice", SETTINGS)
    @pytest.mark.parametrize("bob", SETTINGS)
    def test_party_order_independent(self, alice, bob):
        assert party_order_deviation(alice, bob) < ATOL

    @pytest.mark.parametrize("bob", SETTINGS)
    @pytest.mark.parametrize("variant", Variant)
    def test_no_signaling(self, bob, variant):
        assert no_signaling_check(bob, variant) < ATOL

    def test_joint_distribution_agrees_on_shared_panel(self):
        # analytic cross-check of the correlation rule for one geometry
        joint = joint_distribution(Setting.R1, Setting.C2)
        for (a_out, b_out), p in joint.items():
            if p > ATOL:
                assert a_out[1] == b_out[0]  # Alice's (1,2) panel vs Bob's (1,2) panel
