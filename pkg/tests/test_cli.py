import json
import math
from pathlib import Path

import pytest

from smoothsum.cli import run


def body_of(path: Path) -> str:
    return "\n".join(
        line for line in path.read_text().splitlines() if not line.startswith("#")
    )


def config_of(path: Path) -> dict:
    out = {}
    for line in path.read_text().splitlines():
        if line.startswith("# config: "):
            key, _, val = line[len("# config: ") :].partition("=")
            out[key] = val
    return out


def test_brute_alpha_zero_json(tmp_path):
    rc = run(["brute", "--alpha", "0,0", "--k", "2", "--N", "30",
              "--f", "gaussian:0,1", "--out", str(tmp_path)])
    assert rc == 0
    data = json.loads((tmp_path / "brute.json").read_text())
    assert abs(data["result"]["re_value"] - 1.0) <= 1e-12
    assert data["result"]["im_value"] == 0.0
    assert data["result"]["terms_used"] == 1
    assert data["meta"]["config"]["alpha"] == "0,0"


def test_theorem2_columns(tmp_path):
    rc = run(["theorem2", "--alpha", "1,0", "--k", "2", "--N", "100",
              "--f", "gaussian:1,0.4", "--out", str(tmp_path)])
    assert rc == 0
    lines = body_of(tmp_path / "theorem2.csv").splitlines()
    assert lines[0] == "N,re_S,im_S,re_C_f,im_C_f,abs_E_measured,predicted_envelope"
    assert len(lines) == 2
    first = lines[1].split(",")
    assert first[0] == "100"
    assert float(first[5]) < 0.05


def test_byte_identical_bodies(tmp_path):
    argv = ["exact", "--alpha", "0.5,0.5", "--k", "3", "--N", "100",
            "--f", "gaussian:1,0.4", "--tol", "1e-7"]
    assert run(argv + ["--out", str(tmp_path / "a")]) == 0
    assert run(argv + ["--out", str(tmp_path / "b")]) == 0
    a = json.loads((tmp_path / "a/exact.json").read_text())
    b = json.loads((tmp_path / "b/exact.json").read_text())
    assert a["result"] == b["result"]


def test_brute_thread_counts_identical(tmp_path):
    base = ["brute", "--alpha", "0.5,0.5", "--k", "3", "--N", "30", "--f", "gaussian:1,0.4"]
    assert run(base + ["--threads", "1", "--out", str(tmp_path / "t1")]) == 0
    assert run(base + ["--threads", "8", "--out", str(tmp_path / "t8")]) == 0
    r1 = json.loads((tmp_path / "t1/brute.json").read_text())["result"]
    r8 = json.loads((tmp_path / "t8/brute.json").read_text())["result"]
    assert r1 == r8


def test_config_file_round_trip(tmp_path):
    argv = ["tenenbaum", "--N", "1000,10000", "--tau=-3,3,13",
            "--out", str(tmp_path / "flags")]
    assert run(argv) == 0
    # replay from the emitted config: identical body
    cfg_items = config_of(tmp_path / "flags/tenenbaum.csv")
    cfg_items.pop("command")
    cfg = "\n".join(f"{k}={v}" for k, v in cfg_items.items())
    (tmp_path / "replay.cfg").write_text(cfg + "\n")
    assert run(["tenenbaum", "--config", str(tmp_path / "replay.cfg"),
                "--out", str(tmp_path / "replay")]) == 0
    assert body_of(tmp_path / "flags/tenenbaum.csv") == body_of(
        tmp_path / "replay/tenenbaum.csv"
    )
    # and the re-emitted config matches the one it was parsed from
    assert config_of(tmp_path / "replay/tenenbaum.csv") == config_of(
        tmp_path / "flags/tenenbaum.csv"
    )


def test_flags_override_config(tmp_path):
    (tmp_path / "c.cfg").write_text("alpha=1,0\nk=2\nN=30\nf=gaussian:0,1\n")
    rc = run(["brute", "--config", str(tmp_path / "c.cfg"), "--alpha", "0,0",
              "--out", str(tmp_path)])
    assert rc == 0
    data = json.loads((tmp_path / "brute.json").read_text())
    assert data["meta"]["config"]["alpha"] == "0,0"  # flag wins


def test_exit_code_config_error(tmp_path):
    assert run(["exact", "--alpha", "1,0", "--k", "1", "--N", "30",
                "--f", "gaussian:1,0.4", "--out", str(tmp_path)]) == 2
    assert run(["exact", "--alpha", "1,0", "--k", "2", "--N", "30",
                "--f", "gaussian:1,0.4", "--tol", "0.5", "--out", str(tmp_path)]) == 2
    assert run(["exact", "--alpha", "1,0", "--k", "2", "--N", "30",
                "--f", "lorentz:1", "--out", str(tmp_path)]) == 2
    assert run(["brute", "--alpha", "not-a-number", "--k", "2", "--N", "30",
                "--f", "gaussian:1,0.4", "--out", str(tmp_path)]) == 2


def test_exit_code_computational_error(tmp_path):
    # alpha * 2^{-1} = 1: singular Euler factor in h
    rc = run(["products-table", "--alpha", "2,0", "--k", "2", "--N", "100",
              "--tau=0,1,2", "--out", str(tmp_path)])
    assert rc == 3


def test_format_switch(tmp_path):
    base = ["brute", "--alpha", "1,0", "--k", "2", "--N", "10", "--f", "gaussian:1,0.4",
            "--u-cutoff", "inf", "--out", str(tmp_path)]
    assert run(base + ["--format", "csv"]) == 0
    assert run(base + ["--format", "json"]) == 0
    lines = body_of(tmp_path / "brute.csv").splitlines()
    assert lines[0] == "re_value,im_value,terms_used,u_cutoff,tail_certificate"
    jres = json.loads((tmp_path / "brute.json").read_text())["result"]
    assert float(lines[1].split(",")[0]) == jres["re_value"]  # formats agree
    assert run(["tenenbaum", "--N", "1000", "--tau=0,1,3", "--format", "json",
                "--out", str(tmp_path)]) == 0
    data = json.loads((tmp_path / "tenenbaum.json").read_text())
    assert data["result"]["columns"][0] == "N"


def test_cfactor_alpha_zero(tmp_path):
    rc = run(["cfactor", "--alpha", "0,0", "--k", "2", "--N", "100",
              "--f", "gaussian:1,0.4", "--out", str(tmp_path)])
    assert rc == 0
    data = json.loads((tmp_path / "cfactor.json").read_text())
    f0 = math.exp(-(0 - 1) ** 2 / (2 * 0.4**2))
    assert abs(data["result"]["re_C_f"] - f0) <= 1e-6


def test_dickman_table_output(tmp_path):
    rc = run(["dickman-table", "--u-max", "5", "--du", "0.5", "--x-max", "2",
              "--dx", "1", "--out", str(tmp_path)])
    assert rc == 0
    rho_lines = body_of(tmp_path / "dickman_rho.csv").splitlines()
    assert rho_lines[0] == "u,rho"
    vals = {float(r.split(",")[0]): float(r.split(",")[1]) for r in rho_lines[1:]}
    assert vals[0.5] == 1.0
    assert vals[2.0] == pytest.approx(1 - math.log(2), abs=1e-10)
    hat_lines = body_of(tmp_path / "dickman_rhohat.csv").splitlines()
    assert hat_lines[0] == "x,re_rhohat,im_rhohat"


def test_zeta_and_products_and_lemma1_tables(tmp_path):
    assert run(["zeta-table", "--tau=-2,2,5", "--out", str(tmp_path)]) == 0
    lines = body_of(tmp_path / "zeta_line.csv").splitlines()
    assert lines[0] == "tau,re_zeta,im_zeta,re_regular,im_regular,method"
    assert run(["products-table", "--alpha", "1,0", "--k", "2", "--N", "100",
                "--tau=-1,1,3", "--out", str(tmp_path)]) == 0
    plines = body_of(tmp_path / "products.csv").splitlines()
    assert plines[0] == "tau,re_g,im_g,re_zetaN_pow,im_zetaN_pow,re_h,im_h"
    assert run(["lemma1", "--alpha", "1,0", "--k", "2", "--N", "1000,2000",
                "--tau=-1,1,5", "--out", str(tmp_path)]) == 0
    llines = body_of(tmp_path / "lemma1.csv").splitlines()
    assert llines[0] == "N,max_rel_err,decay_ratio_to_next,expected_ratio"
