import io
import math
import shlex
import xml.etree.ElementTree as ET

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from awgnhelp.cli import (
    EXIT_CONFIG,
    EXIT_DEVIATION,
    EXIT_OK,
    bound_status,
    cmd_bounds,
    cmd_compare,
    cmd_plot,
    cmd_simulate,
    main,
)
from awgnhelp.core import ConfigError
from awgnhelp.simulator import SimConfig
from awgnhelp.sweeps import (
    CurveTable,
    Grid,
    GridError,
    SweepSpec,
    UnknownSeries,
    csv_text,
    format_value,
    read_csv,
    run_sweep,
)

SVG = "{http://www.w3.org/2000/svg}"


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestGrid:
    def test_parse(self):
        g = Grid.parse("0.01:100:5:log")
        assert g == Grid(0.01, 100.0, 5, "log")
        assert np.allclose(g.values(), [0.01, 0.1, 1, 10, 100])
        assert Grid.parse("0:1:3").values().tolist() == [0.0, 0.5, 1.0]

    def test_str_roundtrip(self):
        for g in (Grid(0.05, 4.0, 160), Grid(1e-2, 1e2, 200, "log"), Grid(0.1, 0.30000000000000004, 2)):
            assert Grid.parse(str(g)) == g

    @pytest.mark.parametrize("text", ["1:0:5", "0:1:1", "0:1:5:log", "-1:1:5:log", "0:1", "a:b:c",
                                      "0:1:5:cubic", "1:1:3"])
    def test_errors(self, text):
        with pytest.raises(GridError):
            Grid.parse(text)

    def test_grid_error_is_config_error(self):
        assert issubclass(GridError, ConfigError) and issubclass(UnknownSeries, ConfigError)


class TestBounds:
    def test_unknown_series(self):
        with pytest.raises(UnknownSeries):
            cmd_bounds(SweepSpec("fig-power-vs-S", series=("dpt", "bogus")))

    def test_unknown_family(self):
        with pytest.raises(ConfigError):
            cmd_bounds(SweepSpec("fig-nothing"))

    def test_custom_needs_fields(self):
        with pytest.raises(ConfigError):
            cmd_bounds(SweepSpec("custom", axis="S"))

    def test_missing_parameter(self):
        spec = SweepSpec("custom", "S", Grid(0.1, 1, 2), {}, ("sphere-packing",))
        with pytest.raises(ConfigError):
            cmd_bounds(spec)

    def test_power_vs_s_ordering(self):
        t = cmd_bounds(SweepSpec("fig-power-vs-S", fixed={"Rh": 1.0, "alpha": 2.0}))
        assert len(t.rows) == 200
        for _, dpt, tx, rx, ach in t.rows:
            assert dpt >= tx - 1e-8 and tx >= rx - 1e-8 and rx >= ach - 1e-8

    def test_power_vs_alpha_small_snr(self):
        t = cmd_bounds(SweepSpec("fig-power-vs-alpha", fixed={"S": 0.1, "Rh": 1.0}))
        for row in t.rows:
            vals = row[1:]
            assert (max(vals) - min(vals)) / max(vals) <= 0.05

    def test_degenerate_grid(self):
        lo = 1.0
        spec = SweepSpec("custom", "S", Grid(lo, float(np.nextafter(lo, 2.0)), 2), {"Rh": 1.0, "alpha": 2.0},
                         ("dpt", "achievable"))
        text = csv_text(cmd_bounds(spec))
        rows = [l for l in text.splitlines() if not l.startswith("#")][1:]
        assert len(rows) == 2 and rows[0] == rows[1]

    def test_inf_sentinel(self):
        spec = SweepSpec("custom", "Rc", Grid(0.0, 2.0, 5), {"C0c": 1.0, "Rhc": 1.0}, ("ct-ee-oblivious",))
        t = cmd_bounds(spec)
        text = csv_text(t)
        assert "\n0,inf\n" in text
        assert "1e+308" not in text

    def test_metadata(self):
        t = cmd_bounds(SweepSpec("fig-ct-ee"))
        for key in ("family", "axis", "grid", "fixed", "series", "version", "command"):
            assert key in t.metadata
        assert t.metadata["command"].startswith("awgnhelp bounds")


class TestCSV:
    @given(st.lists(st.floats(-1e300, 1e300, allow_nan=False) | st.just(math.inf), min_size=1, max_size=20))
    def test_roundtrip_12_digits(self, vals):
        t = CurveTable(["x"], [[v] for v in vals], {"k": "v"})
        back = read_csv(io.StringIO(csv_text(t)))
        assert back.header == ["x"] and back.metadata == {"k": "v"}
        for (v,), (b,) in zip(t.rows, back.rows):
            if v == math.inf:
                assert b == math.inf
            else:
                # re-serializing the parsed value reproduces the same 12-digit token
                assert format_value(b) == format_value(v)
                assert b == pytest.approx(v, rel=1e-11, abs=0)

    def test_rectangular(self):
        with pytest.raises(ConfigError):
            CurveTable(["a", "b"], [[1.0, 2.0], [3.0]])

    def test_regenerate_identical(self, capsys):
        spec = SweepSpec("custom", "S", Grid(0.05, 20.0, 7, "log"), {"Rh": 0.5, "alpha": 0.7},
                         ("dpt", "zz-rx", "achievable"))
        first = csv_text(cmd_bounds(spec))
        command = read_csv(io.StringIO(first)).metadata["command"]
        argv = shlex.split(command)
        assert argv[:2] == ["awgnhelp", "bounds"]
        code, out, _ = run_cli(capsys, *argv[1:])
        assert code == EXIT_OK
        assert out == first

    def test_family_regenerate(self, capsys):
        code, first, _ = run_cli(capsys, "bounds", "--family", "fig-ct-dist-vs-alpha")
        assert code == EXIT_OK
        argv = shlex.split(read_csv(io.StringIO(first)).metadata["command"])
        code, second, _ = run_cli(capsys, *argv[1:])
        assert second == first


class TestSimulate:
    def test_deterministic_bytes(self, tmp_path):
        cfg = SimConfig("ppm-basic", 2, 2.0, trials=20_000, seed=1)
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        cmd_simulate(cfg, str(a))
        cmd_simulate(cfg, str(b))
        assert a.read_bytes() == b.read_bytes()
        t = read_csv(io.StringIO(a.read_text()))
        assert t.header == ["u", "mpae", "stderr"] and len(t.rows) == 5
        assert t.metadata["seed"] == "1"

    def test_cli_roundtrip(self, capsys, tmp_path):
        out = tmp_path / "s.csv"
        code, _, err = run_cli(capsys, "simulate", "--scheme", "two-sided", "--m", "2", "--mh", "3",
                               "--gamma", "2", "--trials", "5000", "--seed", "4", "--out", str(out))
        assert code == EXIT_OK and "pe_hat" in err
        text = out.read_text()
        argv = shlex.split(read_csv(io.StringIO(text)).metadata["command"])
        code, again, _ = run_cli(capsys, *argv[1:])
        assert again == text

    def test_config_error_exit(self, capsys):
        code, _, err = run_cli(capsys, "simulate", "--scheme", "ppm-basic", "--m", "2", "--mh", "2")
        assert code == EXIT_CONFIG and "error" in err
        code, _, _ = run_cli(capsys, "simulate", "--scheme", "hybrid", "--m", "6", "--mm", "4", "--mh", "4")
        assert code == EXIT_CONFIG


class TestCompare:
    def test_exit_ok(self, capsys):
        code, out, _ = run_cli(capsys, "compare", "--scheme", "cribbed-tx", "--m", "4", "--mh", "2",
                               "--gamma", "9", "--trials", "20000")
        assert code == EXIT_OK
        assert "metric,simulated,stderr,oracle,bound,status" in out
        assert "DEVIATION" not in out

    def test_gamma0_closed_form(self):
        rows = cmd_compare(SimConfig("ppm-basic", 4, 0.0, trials=20_000, u_grid=(0.0,)))
        assert rows[0].oracle == pytest.approx(0.75, abs=1e-12)
        assert all(not r.failed for r in rows)

    def test_order_simulated_oracle_bound(self):
        rows = cmd_compare(SimConfig("two-sided", 4, 16.0, Mh=2, trials=20_000, u_grid=(0.125,)))
        pe = rows[0]
        assert abs(pe.simulated - pe.oracle) <= 4 * pe.stderr and pe.oracle <= pe.bound

    def test_mh1_cribbed_equals_ppm(self):
        a = cmd_compare(SimConfig("ppm-basic", 4, 4.0, trials=20_000, u_grid=(0.0,)))[0]
        b = cmd_compare(SimConfig("cribbed-tx", 4, 4.0, Mh=1, trials=20_000, u_grid=(0.0,)))[0]
        assert abs(a.simulated - b.simulated) <= 4 * math.hypot(a.stderr, b.stderr)
        assert a.oracle == pytest.approx(b.oracle, rel=1e-12)

    def test_deviation_exit(self, capsys, monkeypatch):
        import awgnhelp.cli as cli
        monkeypatch.setattr(cli, "oracle_pe", lambda cfg: 0.01)
        code, out, _ = run_cli(capsys, "compare", "--m", "2", "--gamma", "0", "--trials", "2000", "--u", "0")
        assert code == EXIT_DEVIATION and "DEVIATION" in out

    def test_bound_status_rules(self):
        cfg = SimConfig("cribbed-tx", 4, 16.0, Mh=4)
        assert bound_status(cfg, 0.1, 0.2, 0.0) == "ok"
        assert bound_status(cfg, 0.5, 0.1, 0.0).startswith("reported")
        big = SimConfig("cribbed-tx", 4, 16.0, Mh=16)
        assert bound_status(big, 0.2, 0.1, 0.0).startswith("reported")
        assert bound_status(big, 0.5, 0.1, 0.0).startswith("DEVIATION")
        assert bound_status(SimConfig("ppm-basic", 4, 1.0), 0.5, 0.1, 0.0).startswith("DEVIATION")


class TestPlot:
    def table(self, values=None):
        xs = np.linspace(1, 10, 10)
        b = values if values is not None else (xs ** 2).tolist()
        return CurveTable(["x", "a", "b"], [[x, x, y] for x, y in zip(xs, b)], {"grid": "1:10:10"})

    def test_two_polylines(self, tmp_path):
        out = tmp_path / "p.svg"
        cmd_plot(self.table(), str(out))
        root = ET.parse(out).getroot()
        lines = root.findall(f".//{SVG}polyline")
        assert len(lines) == 2
        assert {l.get("data-series") for l in lines} == {"a", "b"}

    def test_clipped_markers(self):
        vals = [1.0, 2.0, math.inf, 4.0, math.inf, 6.0, 7.0, 8.0, 9.0, 10.0]
        root = ET.fromstring(cmd_plot(self.table(vals), None, log_y=True))
        clipped = [p for p in root.iter(f"{SVG}path") if p.get("class") == "clipped"]
        assert len(clipped) == 2

    def test_empty_series_usage_error(self, tmp_path, capsys):
        with pytest.raises(ConfigError):
            cmd_plot(CurveTable(["x"], [[1.0], [2.0]]), None)
        f = tmp_path / "t.csv"
        f.write_text("# k: v\nx\n1\n2\n")
        code, _, err = run_cli(capsys, "plot", str(f))
        assert code == EXIT_CONFIG and "error" in err

    def test_bounds_svg(self, capsys):
        code, out, _ = run_cli(capsys, "bounds", "--family", "fig-power-vs-S", "--format", "svg",
                               "--grid", "0.01:100:20:log")
        assert code == EXIT_OK
        assert len(ET.fromstring(out).findall(f".//{SVG}polyline")) == 4

    def test_plot_from_csv(self, tmp_path, capsys):
        f = tmp_path / "t.csv"
        f.write_text(csv_text(run_sweep(SweepSpec("fig-ct-ee", grid=Grid(0, 4, 9)))))
        code, out, _ = run_cli(capsys, "plot", str(f))
        assert code == EXIT_OK
        assert len(ET.fromstring(out).findall(f".//{SVG}polyline")) == 3
        assert "clipped" in out
