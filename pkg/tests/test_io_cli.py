import csv
import json
import math

import numpy as np
import pytest

from pgtlab import io as pio
from pgtlab.cli import main
from pgtlab.core import ManifoldParams, Theorem4Config, ValidationError
from pgtlab.explicit import ChannelSpec, weyl_sample
from pgtlab.spectrum import enumerate_spectrum


def _same_catalog(a, b):
    assert a.params == b.params and a.weyl_constant == b.weyl_constant
    assert len(a.channels) == len(b.channels)
    for x, y in zip(a.channels, b.channels):
        assert (x.p, x.tau_id, x.lam, x.sign) == (y.p, y.tau_id, y.lam, y.sign)
        for f in ("real_alpha", "real_order", "critical_alpha", "critical_order"):
            assert np.array_equal(getattr(x, f), getattr(y, f))


def test_catalog_round_trip(tmp_path):
    params = ManifoldParams(3, 1)
    cat = weyl_sample(params, 0.37, 9.0, [ChannelSpec(p=2), ChannelSpec(p=1, lam=0.3,
                                          real_singularities=[(1.7, 2), (-0.4, -1)])])
    path = tmp_path / "c.json"
    pio.write_catalog(cat, path)
    _same_catalog(cat, pio.read_catalog(path))
    data = json.loads(path.read_text())
    assert data["rho"] == "1/1" and "im" in data["channels"][0]["critical_singularities"][0]


def test_catalog_orders_default_to_one():
    cat = pio.catalog_from_dict({"n": 2, "rho": "1/2", "weyl_constant": 1.0, "channels": [
        {"p": 1, "tau": "t", "lambda": 1.0, "real_singularities": [{"alpha": 1.0}],
         "critical_singularities": [{"im": 2.0}, {"im": -2.0}]}]})
    ch = cat.channels[0]
    assert list(ch.real_order) == [1] and list(ch.critical_order) == [1, 1]
    assert ch.critical_alpha[0] == complex(0.5, -2.0)


def test_malformed_catalog():
    with pytest.raises(ValidationError):
        pio.catalog_from_dict({"n": 2, "rho": "1/2", "channels": []})


def test_spectrum_round_trip(tmp_path):
    s = enumerate_spectrum(1e4)
    path = tmp_path / "s.csv"
    pio.write_spectrum(s, path)
    back = pio.read_spectrum(path)
    assert back == s
    assert path.read_text().splitlines()[1] == "norm,length,weight,primitive,multiplicity"


def test_config_round_trip():
    cfg = Theorem4Config((1.5, 0.0), (0.25, -2.0), 123.0, 0.2, 0.05)
    assert pio.config_from_dict(json.loads(json.dumps(pio.config_to_dict(cfg)))) == cfg


def test_manifest_hashes(tmp_path):
    f = tmp_path / "a.txt"
    f.write_text("abc")
    man = pio.manifest({"a": str(f), "b": None}, {"j": 2}, grid="1:2:3", seed=7)
    assert man["inputs"]["a"]["sha256"] == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
    assert "b" not in man["inputs"] and man["grid"] == "1:2:3" and man["seed"] == 7


# -- command line -----------------------------------------------------------------------

def _rows(path):
    lines = [ln for ln in path.read_text().splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(lines))


def test_cli_plan(tmp_path, capsys):
    assert main(["plan", "--n", "2", "--rho", "1/2", "--j", "1"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["psi0_x_exponent"]["exact"] == "7/10"
    assert out["psi0_log_exponent"]["exact"] == "1/5"
    assert out["label"] == "conditional"


def test_cli_enumerate_psi_and_exit_codes(tmp_path):
    spec = tmp_path / "s.csv"
    assert main(["enumerate", "--norm-bound", "200", "--out", str(spec)]) == 0
    bf = tmp_path / "bf.csv"
    assert main(["enumerate", "--norm-bound", "200", "--entry-bound", "300", "--out", str(bf)]) == 0
    assert pio.read_spectrum(bf).multiset() == pio.read_spectrum(spec).multiset()
    out = tmp_path / "psi.csv"
    assert main(["psi", "--spectrum", str(spec), "--grid", "10:2:4", "--j", "2", "--out", str(out)]) == 0
    rows = _rows(out)
    assert [float(r["x"]) for r in rows] == [10, 20, 40, 80]
    assert out.read_text().startswith("# manifest:")
    assert main(["psi", "--spectrum", str(spec), "--x", "500"]) == 3
    assert main(["plan", "--n", "4", "--rho", "3/2", "--j", "2"]) == 2


def test_cli_synth_explicit_conditional(tmp_path):
    cat = tmp_path / "c.json"
    assert main(["synth", "--height", "20", "--out", str(cat)]) == 0
    out = tmp_path / "e.csv"
    assert main(["explicit", "--catalog", str(cat), "--x", "10", "--j", "2", "--out", str(out)]) == 0
    assert float(_rows(out)[0]["value"]) > 0
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps(pio.config_to_dict(Theorem4Config.zeros(2, 10.0))))
    assert main(["explicit", "--catalog", str(cat), "--grid", "10:10:3", "--theorem4",
                 "--config", str(cfg), "--out", str(out)]) == 0
    assert all(float(r["reported_bound"]) > 0 for r in _rows(out))
    bad = tmp_path / "bad.json"
    d = json.loads(cat.read_text())
    d["channels"][0]["critical_singularities"].pop()
    bad.write_text(json.dumps(d))
    assert main(["explicit", "--catalog", str(bad), "--x", "10", "--j", "2"]) == 2


def test_cli_gallagher_run(tmp_path):
    cat = tmp_path / "c.json"
    main(["synth", "--height", "30", "--out", str(cat)])
    out = tmp_path / "r.json"
    assert main(["gallagher-run", "--source", "catalog", "--catalog", str(cat), "--j", "2",
                 "--i-min", "3", "--i-max", "7", "--grid", "16", "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert len(rep["intervals"]) == 5
    assert rep["provenance"]["inputs"]["catalog"]["sha256"]
    assert rep["converge_check"]["finite_trend"] is True
    assert main(["gallagher-run", "--source", "spectrum", "--norm-bound", "1e3", "--j", "1",
                 "--i-min", "3", "--i-max", "9", "--grid", "8"]) == 3


def test_cli_compare_and_fit(tmp_path, capsys):
    out = tmp_path / "cmp.csv"
    assert main(["pgt-compare", "--norm-bound", "1e5", "--grid", "100:1.4:20", "--out", str(out)]) == 0
    rows = _rows(out)
    assert len(rows) == 20
    assert float(rows[0]["li_sum"]) == pytest.approx(30.126, abs=1e-3)
    capsys.readouterr()
    assert main(["fit", "--series", str(out)]) == 0
    fit = json.loads(capsys.readouterr().out)
    assert math.isfinite(fit["slope"])


def test_cli_reproducible(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        main(["pgt-compare", "--norm-bound", "1e4", "--grid", "100:2:6", "--threads", "1", "--out", str(p)])
    assert a.read_bytes() == b.read_bytes()
