import dataclasses
import io
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from topopurity import ConfigurationError, LatticeConfig, Region, build_lattice, make_bridge
from topopurity.experiments import cli
from topopurity.experiments.config import ExperimentConfig, StringSpec, parse_config
from topopurity.experiments.files import (format_region, format_string, parse_region,
                                          parse_string, write_region, write_string)
from topopurity.experiments.suites import (THEOREM_COLUMNS, SuiteResult, run_oracle_suite,
                                           run_theorem_suite)
from topopurity.topo import parse_ratio

BASE = """
[lattice]
L = 12
d = 2
[strings]
count = 6
depth = 3
shape = mixed
focus = boundary
seed = 5
"""


class TestConfig:
    def test_defaults(self):
        cfg = parse_config(BASE)
        assert cfg.lattice == LatticeConfig(12, 2)
        assert cfg.strings.count == 6 and cfg.oracle == "group"

    @pytest.mark.parametrize("extra, key", [
        ("foo = 1\n", "lattice.foo"),
        ("[mc]\nsamples = many\n", "mc.samples"),
        ("[strings]\nshape = hexagon\n", "strings.shape"),
        ("[oracle]\nkind = magic\n", "oracle.kind"),
        ("[plots]\nx = 1\n", "plots"),
    ])
    def test_errors_name_the_key(self, extra, key):
        with pytest.raises(ConfigurationError, match=key.replace(".", r"\.")):
            parse_config("[lattice]\nL = 12\nd = 2\n" + extra)

    def test_missing_lattice(self):
        with pytest.raises(ConfigurationError, match="lattice.L"):
            parse_config("[mc]\nsamples = 100\n")

    def test_hash_ignores_output_path(self):
        a = parse_config(BASE)
        assert a.config_hash() == dataclasses.replace(a, csv="x.csv").config_hash()
        assert a.config_hash() != dataclasses.replace(a, mc_seed=9).config_hash()


class TestFiles:
    lat = build_lattice(LatticeConfig(8, 3))

    @given(st.sets(st.integers(0, 127)))
    def test_region_round_trip(self, edges):
        r = Region.from_edges(self.lat, edges)
        assert parse_region(self.lat, format_region(r)) == r

    def test_region_shapes(self):
        r = parse_region(self.lat, "# comment\nrect 1 1 2 2\nplaquette 5 5\n0 0 h  # edge\n")
        assert len(r) == 12 + 4 + 1

    def test_string_round_trip(self, tmp_path, part12):
        s = make_bridge(part12, "A", "C")
        path = tmp_path / "b.str"
        write_string(s, path)
        back = parse_string(part12.lattice, path.read_text())
        assert back == s and back.labels == s.labels
        raw = parse_string(self.lat, "edges 0 0 h; 0 0 v\n")
        assert parse_string(self.lat, format_string(raw)) == raw

    def test_bad_lines(self, tmp_path):
        with pytest.raises(ConfigurationError, match="line 2"):
            parse_region(self.lat, "0 0 h\n0 0 x\n")
        with pytest.raises(ConfigurationError):
            parse_string(self.lat, "0 0 h\n")
        write_region(Region.full(self.lat), tmp_path / "f.reg")
        assert len(parse_region(self.lat, (tmp_path / "f.reg").read_text())) == 128


class TestSuites:
    def test_theorem_rows(self):
        res = run_theorem_suite(parse_config(BASE))
        assert len(res.rows) == 6 and not res.violations
        for row in res.rows:
            assert row["safe"] == 1 and row["theorem_ok"] == 1
            assert parse_ratio(row["ratio_ground"]) == parse_ratio("2^-2")
            assert parse_ratio(row["ratio_trivial"]) == 1

    def test_csv_header_and_columns(self):
        cfg = parse_config(BASE)
        text = run_theorem_suite(cfg).csv_text
        first, second = text.splitlines()[:2]
        assert first == f"# L=12 d=2 gamma=1 config_hash={cfg.config_hash()}"
        assert second == ",".join(THEOREM_COLUMNS)

    def test_deterministic_across_workers(self, monkeypatch, tmp_path):
        cfg = dataclasses.replace(parse_config(BASE, base_dir=str(tmp_path)), csv="out.csv")
        monkeypatch.setenv("TOPOPURITY_WORKERS", "1")
        one = run_theorem_suite(cfg).csv_text
        monkeypatch.setenv("TOPOPURITY_WORKERS", "4")
        four = run_theorem_suite(cfg).csv_text
        assert one == four == (tmp_path / "out.csv").read_text()

    def test_empty_string_set(self):
        cfg = dataclasses.replace(parse_config(BASE), strings=StringSpec(count=0))
        res = run_theorem_suite(cfg)
        assert res.rows == [] and len(res.csv_text.splitlines()) == 2

    def test_unsafe_rows_are_recorded(self, tmp_path, part12):
        write_string(make_bridge(part12, "B_left", "B_right"), tmp_path / "bb.str")
        cfg = parse_config(BASE.replace("count = 6", "count = 0")
                           + "files = bb.str\n", base_dir=str(tmp_path))
        res = run_theorem_suite(cfg)
        (row,) = res.rows
        assert row["safe"] == 0 and row["condition"] == "II.b(B_left,B_right)"
        assert row["theorem_ok"] == "" and not res.violations

    def test_budget_is_per_row(self, tmp_path, part12):
        write_string(make_bridge(part12, "A", "C"), tmp_path / "ac.str")
        cfg = parse_config(BASE.replace("count = 6", "count = 2") + "files = ac.str\n"
                           "[budget]\nterm_cap = 3\n", base_dir=str(tmp_path))
        res = run_theorem_suite(cfg)
        assert res.rows[0]["error"].startswith("budget")
        assert len(res.rows) == 3

    def test_oracle_suite_small(self):
        cfg = ExperimentConfig(LatticeConfig(2, 3), oracle_regions=20, oracle_strings=2,
                               samples=2000, mc_seed=1)
        res = run_oracle_suite(cfg)
        assert not res.violations and len(res.rows) == 22


DATA = Path(__file__).resolve().parents[1] / "demos" / "data"


def _run(argv):
    out = io.StringIO()
    code = cli.main(argv, out=out)
    return code, out.getvalue()


class TestCli:
    def test_toppurity(self):
        code, out = _run(["toppurity", "--config", str(DATA / "annulus_d2.cfg")])
        assert code == 0 and out.strip() == "2^-2 (0.25)"

    def test_purity_on_trivial_state(self):
        code, out = _run(["purity", "--region", str(DATA / "rect_4x3.reg"),
                          "--config", str(DATA / "trivial.cfg")])
        assert code == 0 and out.strip() == "1"

    def test_check_string(self):
        code, out = _run(["check-string", "--string", str(DATA / "bridge_ac.str"),
                          "--config", str(DATA / "annulus_d2.cfg")])
        assert code == 0 and out.startswith("UNSAFE condition II.b(A,C) witness S-bar[")

    def test_config_error(self, tmp_path):
        bad = tmp_path / "bad.cfg"
        bad.write_text("[lattice]\nL = 12\nd = 2\ncolour = red\n")
        assert _run(["toppurity", "--config", str(bad)])[0] == cli.EXIT_CONFIG
        assert _run(["toppurity"])[0] == cli.EXIT_CONFIG

    def test_budget_error(self):
        code, _ = _run(["evolve", "--string", str(DATA / "bridge_ac.str"),
                        "--config", str(DATA / "annulus_d2.cfg"), "--budget", "2"])
        assert code == cli.EXIT_BUDGET

    def test_assertion_error(self, monkeypatch):
        monkeypatch.setattr(cli, "run_theorem_suite",
                            lambda cfg: SuiteResult([], "", ["gen0000"]))
        assert _run(["suite", "--L", "12", "--d", "2"])[0] == cli.EXIT_ASSERT

    def test_suite_writes_csv(self, tmp_path):
        target = tmp_path / "rows.csv"
        code, out = _run(["suite", "--config", str(DATA / "annulus_d2.cfg"), "--seed", "3",
                          "--csv", str(target)])
        assert code == 0 and "0 violations" in out
        assert target.read_text().startswith("# L=12 d=2")

    def test_evolve(self):
        code, out = _run(["evolve", "--string", str(DATA / "bridge_ac.str"),
                          "--config", str(DATA / "annulus_d2.cfg")])
        assert code == 0 and "classification = other" in out
