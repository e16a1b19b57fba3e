import json

import pytest

from nvlab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestClassify:
    def test_triple_degenerate_record(self, capsys):
        code, out, _ = run(capsys, "classify", "--u=-18,0")
        assert code == 0
        rec = json.loads(out)
        assert rec["case"] == "TripleDegenerate"
        assert rec["u"] == [-18.0, 0.0]
        assert len(rec["xi_roots"]) == 3
        assert "config" in rec and rec["config"]["profile.name"] == "P1"

    def test_bad_u_exits_2(self, capsys):
        code, _, err = run(capsys, "classify", "--u", "nope")
        assert code == 2
        assert json.loads(err)["error"] == "ConfigurationError"


class TestLinsolve:
    def test_zero_data_gives_zero_rows(self, capsys):
        code, out, _ = run(capsys, "linsolve", "--t", "2", "--u=-2,0",
                           "--theta", "0")
        assert code == 0
        rows = [l for l in out.splitlines() if not l.startswith("#")]
        assert rows[0] == "t,re_u,im_u,re_I,im_I,abs_I"
        assert rows[1].split(",")[3:] == ["0", "0", "0"]

    def test_deterministic(self, capsys):
        a = run(capsys, "linsolve", "--t", "2", "--u=-18,0")
        b = run(capsys, "linsolve", "--t", "2", "--u=-18,0")
        assert a == b
        assert a[0] == 0


class TestConfigResolution:
    def test_file_then_flag_override(self, capsys, tmp_path):
        cfgfile = tmp_path / "run.ini"
        cfgfile.write_text("[profile]\nname = P2\ntheta = 0.3\n")
        code, out, _ = run(capsys, "linsolve", "--t", "2", "--u=-2,0",
                           "--config", str(cfgfile), "--theta", "0.0")
        assert code == 0
        header = [l for l in out.splitlines() if l.startswith("#")]
        assert "# profile.name = P2" in header
        assert "# profile.theta = 0.0" in header       # flag wins

    def test_missing_config_exits_2(self, capsys, tmp_path):
        code, _, err = run(capsys, "classify", "--u", "0",
                           "--config", str(tmp_path / "absent.ini"))
        assert code == 2
        assert "absent.ini" in json.loads(err)["message"]

    def test_negative_theta_rejected(self, capsys):
        code, _, _ = run(capsys, "classify", "--u", "0", "--theta", "-1")
        assert code == 2


class TestOutputFile:
    def test_writes_file(self, capsys, tmp_path):
        path = tmp_path / "out.json"
        code, out, _ = run(capsys, "classify", "--u", "0",
                           "--output", str(path))
        assert code == 0 and out == ""
        assert json.loads(path.read_text())["case"] == "InteriorNondegenerate"


class TestDecayfitRoundTrip:
    def test_fit_from_generated_csv(self, capsys, tmp_path):
        path = tmp_path / "series.csv"
        lines = ["t,value"]
        for t in (8.0, 16.0, 32.0, 64.0, 128.0):
            lines.append(f"{t},{2.0 * (1.0 + t) ** -0.75}")
        path.write_text("\n".join(lines) + "\n")
        code, out, _ = run(capsys, "decayfit", "--input", str(path))
        assert code == 0
        rec = json.loads(out)
        assert abs(rec["plain"]["exponent"] + 0.75) < 1e-12
        assert rec["n_points"] == 5

    def test_too_few_rows(self, capsys, tmp_path):
        path = tmp_path / "short.csv"
        path.write_text("t,value\n8,1.0\n16,0.5\n")
        code, _, _ = run(capsys, "decayfit", "--input", str(path))
        assert code == 2


class TestReconstructCommand:
    def test_record_shape(self, capsys):
        code, out, _ = run(capsys, "reconstruct", "--z=-6,0", "--t", "1.0",
                           "--depth", "1", "--theta", "0.05")
        assert code == 0
        rec = json.loads(out)
        assert rec["depth"] == 1
        assert len(rec["order_terms"]) == 2
        v = complex(*rec["v"])
        assert v == -2.0 * (complex(*rec["beta1"]) + complex(*rec["alpha1"])
                            + complex(*rec["remainder_q"]))


class TestThreadCap:
    def test_bad_value_exits_2(self, capsys, monkeypatch):
        monkeypatch.setenv("NV_THREADS", "many")
        code, _, _ = run(capsys, "classify", "--u", "0")
        assert code == 2

    def test_cap_accepted(self, capsys, monkeypatch):
        monkeypatch.setenv("NV_THREADS", "1")
        code, _, _ = run(capsys, "classify", "--u", "0")
        assert code == 0
