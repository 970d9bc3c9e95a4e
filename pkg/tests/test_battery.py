import numpy as np
import pytest

from dinicvx import (
    eval_many,
    golden_battery,
    load_manifest,
    make_grid,
    parse,
    parse_interval,
    random_battery,
    write_manifest,
)

LABELS = ("pseudoconvex", "strictly_pseudoconvex", "quasiconvex",
          "semistrictly_quasiconvex")


class TestGoldenBattery:
    def test_size_and_unique_ids(self):
        g = golden_battery()
        assert len(g) == 26
        ids = [e.id for e in g]
        assert len(set(ids)) == len(ids)

    def test_expected_labels_complete(self):
        for e in golden_battery():
            if e.expected is None:
                continue
            assert set(e.expected) == set(LABELS), e.id

    def test_labels_internally_consistent(self):
        # strict implies non-strict; pseudo implies both quasi flavors
        for e in golden_battery():
            if e.expected is None:
                continue
            x = e.expected
            if x["strictly_pseudoconvex"]:
                assert x["pseudoconvex"], e.id
            if x["pseudoconvex"]:
                assert x["quasiconvex"] and x["semistrictly_quasiconvex"], e.id

    def test_every_expression_parses_and_evaluates(self):
        for e in golden_battery():
            fn = parse(e.expression, e.arity)
            if e.arity == 1:
                dom = make_grid(parse_interval(e.domain), 64)
                vals = eval_many(fn, dom.points)
            else:
                box = [parse_interval(s) for s in e.box]
                pts = np.stack(
                    [np.linspace(iv.lo + 0.01, iv.hi - 0.01, 9) for iv in box],
                    axis=1,
                )
                vals = eval_many(fn, pts)
            assert vals.shape[0] > 0
            if e.id != "log-partial":
                assert np.isfinite(vals).all(), e.id

    def test_multivariate_entries_have_boxes(self):
        for e in golden_battery():
            if e.arity > 1:
                assert e.box is not None and len(e.box) == e.arity

    def test_explicit_pair_present_for_cube_slice(self):
        by_id = {e.id: e for e in golden_battery()}
        e = by_id["cube-x1"]
        assert e.pairs is not None
        x, y = e.pairs[0]
        assert tuple(x) == (0.0, 0.0)


class TestRandomBattery:
    def test_deterministic_for_seed(self):
        a = random_battery(20, seed=99)
        b = random_battery(20, seed=99)
        assert a == b
        c = random_battery(20, seed=100)
        assert a != c

    def test_count_and_ids(self):
        got = random_battery(15, seed=5)
        assert len(got) == 15
        assert all(e.id.startswith("rand-5-") for e in got)

    def test_expressions_evaluate_finite_on_domain(self):
        for e in random_battery(60, seed=12):
            fn = parse(e.expression, 1)
            dom = make_grid(parse_interval(e.domain), 257)
            vals = eval_many(fn, dom.points)
            assert np.isfinite(vals).all(), e.id

    def test_labeled_entries_have_all_four_labels(self):
        labeled = [e for e in random_battery(60, seed=12) if e.expected]
        assert labeled, "expected some labeled random entries"
        for e in labeled:
            assert set(e.expected) == set(LABELS)

    def test_mix_contains_shapes(self):
        entries = random_battery(80, seed=3)
        kinds = {tag for e in entries for tag in e.tags}
        assert {"valley", "monotone", "arbitrary"} <= kinds

    def test_not_radially_continuous_by_default(self):
        # the generator may emit jumps, so entries never claim continuity
        assert all(not e.radially_continuous for e in random_battery(10, seed=1))


class TestManifestIO:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "m.json"
        entries = golden_battery()[:5] + random_battery(3, seed=2)
        write_manifest(entries, path)
        again = load_manifest(path)
        assert again == entries

    def test_version_check(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"version": 2, "entries": []}')
        with pytest.raises(ValueError):
            load_manifest(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(OSError):
            load_manifest(tmp_path / "absent.json")

    def test_checked_in_manifest_matches_golden(self):
        import pathlib
        repo = pathlib.Path(__file__).resolve().parent.parent
        manifest = repo / "battery" / "golden.json"
        assert manifest.exists()
        assert load_manifest(manifest) == golden_battery()
