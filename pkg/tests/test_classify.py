"""Tests for end classification, rays, rank towers, and the oracle battery."""

import pytest

from corpus import CORPUS, ONE_FIXED_END
from treeends.classify import (
    EndClass,
    RaySpec,
    check_ray,
    classify_ends,
    cross_checks,
    default_ray,
    full_report,
    power_ray,
    pro_h1_fixed_end,
    pro_pi1_ray,
    render_text,
    to_json_dict,
)
from treeends.errors import DomainError
from treeends.proseq import block_compress
from treeends.reduce import germ_power

# name -> (end class, fixed ends, positive part finite, null end cardinality)
END_TABLE = {
    "trivial": ("TwoEnded", 2, True, "Empty"),
    "bs2": ("OneEnded", 1, False, "Empty"),
    "bs3": ("OneEnded", 1, False, "Empty"),
    "ray1": ("OneEnded", 1, False, "Empty"),
    "two_loops": ("OneEnded", 1, False, "Empty"),
    "null_ray": ("InfiniteCountable", 2, True, "CountablyInfinite"),
    "null_binary": ("InfiniteUncountable", 2, True, "Uncountable"),
    "mixed": ("InfiniteCountable", 1, False, "CountablyInfinite"),
    "mixed2": ("InfiniteCountable", 1, False, "CountablyInfinite"),
    "spin": ("OneEnded", 1, False, "Empty"),
    "deep_null_entry": ("InfiniteCountable", 1, False, "CountablyInfinite"),
    "uncountable_cycles": ("InfiniteUncountable", 1, False, "Uncountable"),
}

RULES_BY_CLASS = {
    "TwoEnded": {"trivial-germ"},
    "OneEnded": {"no-null-rays", "infinite-telescope"},
}


class TestEndClassification:
    @pytest.mark.parametrize("name", sorted(END_TABLE))
    def test_frozen_table(self, name):
        report = classify_ends(CORPUS[name])
        got = (
            report.end_class.value,
            report.fixed_end_count,
            report.gamma_plus_finite,
            str(report.null_ends),
        )
        assert got == END_TABLE[name]

    @pytest.mark.parametrize("name", sorted(END_TABLE))
    def test_rationale_rules_are_named(self, name):
        report = classify_ends(CORPUS[name])
        rules = [rule for _, rule in report.rationale]
        assert len(rules) == len(set(rules))
        if report.end_class in (EndClass.TWO_ENDED, EndClass.ONE_ENDED):
            assert set(rules) == RULES_BY_CLASS[report.end_class.value]
        else:
            assert rules[0] == "null-rays-exist"
            assert rules[-1] in ("compact-core", "infinite-telescope")
            assert (rules[-1] == "compact-core") == (report.fixed_end_count == 2)

    def test_fixed_ends_track_the_positive_part(self):
        for name, (_, fixed, finite_plus, _) in END_TABLE.items():
            report = classify_ends(CORPUS[name])
            if report.end_class is EndClass.TWO_ENDED:
                assert fixed == 2
            elif report.end_class is EndClass.ONE_ENDED:
                assert fixed == 1
            else:
                assert fixed == (2 if finite_plus else 1)


class TestRays:
    @pytest.mark.parametrize(
        "name,prefix,cycle",
        [
            ("bs2", (), (0,)),
            ("two_loops", (), (0,)),
            ("spin", (), (2,)),
            ("null_ray", (0,), (1,)),
        ],
    )
    def test_default_ray_pins(self, name, prefix, cycle):
        ray = default_ray(CORPUS[name])
        assert (ray.prefix, ray.cycle) == (prefix, cycle)

    def test_trivial_germ_has_no_ray(self):
        assert default_ray(CORPUS["trivial"]) is None

    @pytest.mark.parametrize("name", sorted(set(CORPUS) - {"trivial"}))
    def test_default_rays_are_walkable(self, name):
        g = CORPUS[name]
        ray = default_ray(g)
        assert ray is not None
        check_ray(g, ray)

    def test_edge_index_out_of_range(self):
        with pytest.raises(DomainError, match="references edge"):
            check_ray(CORPUS["bs2"], RaySpec((), (1,)))

    def test_cycle_must_return_to_its_start(self):
        with pytest.raises(DomainError, match="close up"):
            check_ray(CORPUS["spin"], RaySpec((), (0,)))
        with pytest.raises(DomainError, match="close up"):
            check_ray(CORPUS["mixed"], RaySpec((), (1,)))

    @pytest.mark.parametrize(
        "name,seq",
        [
            ("bs2", "cycle:2"),
            ("bs3", "cycle:3"),
            ("spin", "cycle:1"),
            ("null_ray", "prefix:0;cycle:0"),
        ],
    )
    def test_ray_label_sequences(self, name, seq):
        g = CORPUS[name]
        assert str(pro_pi1_ray(g, default_ray(g))) == seq


class TestRankTower:
    @pytest.mark.parametrize(
        "name,ranks",
        [
            ("bs2", (0, 1, 3, 7, 15)),
            ("bs3", (0, 2, 8, 26, 80)),
            ("two_loops", (0, 4, 24, 124, 624)),
            ("spin", (0, 2, 8, 26, 80)),
            ("deep_null_entry", (0, 2, 4, 8, 16)),
        ],
    )
    def test_frozen_ranks(self, name, ranks):
        tower = pro_h1_fixed_end(CORPUS[name], 4)
        assert tuple(tower.ranks) == ranks

    def test_text_form_is_comma_joined(self):
        assert str(pro_h1_fixed_end(CORPUS["bs2"], 4)) == "0,1,3,7,15"

    @pytest.mark.parametrize("name", ["trivial", "null_ray", "null_binary"])
    def test_two_fixed_ends_refused(self, name):
        with pytest.raises(DomainError, match="one fixed end"):
            pro_h1_fixed_end(CORPUS[name], 3)


class TestPowerRay:
    @pytest.mark.parametrize(
        "name,m,prefix,cycle",
        [
            ("bs2", 2, (), (0,)),
            ("spin", 2, (), (2,)),
            ("mixed", 3, (), (0,)),
        ],
    )
    def test_power_ray_pins(self, name, m, prefix, cycle):
        g = CORPUS[name]
        p = power_ray(g, default_ray(g), m)
        assert (p.prefix, p.cycle) == (prefix, cycle)

    @pytest.mark.parametrize("name", ["bs2", "spin", "two_loops", "mixed2"])
    @pytest.mark.parametrize("m", [2, 3])
    def test_powered_labels_are_block_products(self, name, m):
        g = CORPUS[name]
        ray = default_ray(g)
        powered = germ_power(g, m)
        pray = power_ray(g, ray, m)
        check_ray(powered, pray)
        assert pro_pi1_ray(powered, pray) == block_compress(pro_pi1_ray(g, ray), m)


BATTERY_ORDER = [
    "frontier-rank",
    "branch-components",
    "ray-multiplier",
    "cover-connected",
    "two-ended-split",
    "null-growth",
    "power-invariance-2",
    "power-invariance-3",
    "collapse-surjective",
    "ray-stable-label1",
]

EXPECTED_SKIPS = {
    "trivial": {"frontier-rank", "ray-multiplier", "collapse-surjective", "ray-stable-label1"},
    "bs2": {"two-ended-split", "ray-stable-label1"},
    "bs3": {"two-ended-split", "ray-stable-label1"},
    "ray1": {"two-ended-split"},
    "two_loops": {"two-ended-split", "ray-stable-label1"},
    "null_ray": {
        "frontier-rank",
        "ray-multiplier",
        "two-ended-split",
        "collapse-surjective",
        "ray-stable-label1",
    },
    "null_binary": {
        "frontier-rank",
        "ray-multiplier",
        "two-ended-split",
        "collapse-surjective",
        "ray-stable-label1",
    },
    "mixed": {"two-ended-split"},
    "mixed2": {"two-ended-split", "ray-stable-label1"},
    "spin": {"two-ended-split"},
    "deep_null_entry": {"two-ended-split"},
    "uncountable_cycles": {"two-ended-split"},
}


class TestCrossChecks:
    @pytest.mark.parametrize("name", sorted(CORPUS))
    def test_battery_runs_clean(self, name):
        checks = cross_checks(CORPUS[name])
        assert [c.name for c in checks] == BATTERY_ORDER
        assert all(c.status in ("pass", "skip") for c in checks)
        skipped = {c.name for c in checks if c.status == "skip"}
        assert skipped == EXPECTED_SKIPS[name]

    def test_label_one_cycles_certify_against_the_identity_tower(self):
        for name in ("ray1", "mixed"):
            checks = {c.name: c for c in cross_checks(CORPUS[name])}
            assert checks["ray-stable-label1"].status == "pass"


class TestReports:
    def test_json_schema_fields(self):
        d = to_json_dict(full_report(CORPUS["bs2"]))
        assert sorted(d) == [
            "end_class",
            "fixed_ends",
            "flags",
            "gamma_plus_finite",
            "null_ends",
            "oracle_checks",
            "ranks",
            "ray_sequence",
            "schema",
        ]
        assert d["schema"] == 1
        assert d["end_class"] == "OneEnded"
        assert d["ranks"] == [0, 1, 3, 7, 15]
        assert d["ray_sequence"] == "cycle:2"
        assert d["flags"] == {
            "pro_trivial": False,
            "semistable": False,
            "pro_mono": True,
            "stable": False,
            "inverse_limit": "Zero",
        }
        assert all(
            sorted(c) == ["detail", "name", "status"] for c in d["oracle_checks"]
        )

    def test_trivial_report_nulls_out_ray_fields(self):
        d = to_json_dict(full_report(CORPUS["trivial"]))
        assert d["end_class"] == "TwoEnded"
        assert d["ranks"] is None
        assert d["ray_sequence"] is None
        assert d["flags"] is None

    def test_text_rendering(self):
        text = render_text(full_report(CORPUS["bs2"]))
        lines = text.splitlines()
        assert lines[:9] == [
            "end_class: OneEnded",
            "fixed_ends: 1",
            "gamma_plus_finite: false",
            "null_ends: Empty",
            "because [no-null-rays] no zero-labeled edge is reachable, so no null rays exist",
            "because [infinite-telescope] the positive part is infinite and the telescope pins one end",
            "ranks: 0,1,3,7,15",
            "ray_sequence: cycle:2",
            "flags: pro_trivial=false semistable=false pro_mono=true stable=false inverse_limit=Zero",
        ]
        assert all(line.startswith("check ") for line in lines[9:])
        assert "check two-ended-split: skip" in text

    @pytest.mark.parametrize("name", ["bs2", "mixed"])
    def test_reports_are_deterministic(self, name):
        first = to_json_dict(full_report(CORPUS[name]))
        second = to_json_dict(full_report(CORPUS[name]))
        assert first == second

    def test_checks_can_be_turned_off(self):
        report = full_report(CORPUS["bs2"], run_checks=False)
        assert report.checks == ()
