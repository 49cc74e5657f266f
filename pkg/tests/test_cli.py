import json
import math
import subprocess
import sys

import pytest

from elliptikit.cli import EXIT_MODULE, EXIT_USAGE, main
from elliptikit.config import CONFIG_ENV, ConfigError, RunConfig, load_config, parse_complex
from elliptikit.verify import SUITES


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def as_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def test_eval_g_zero(capsys):
    code, out, _ = run(capsys, "eval-g", "--n", "0", "--z", "0.3,0.1")
    assert code == 0 and out.strip() == '{"value":[1.0,0.0]}'


def test_eval_E_and_series(capsys):
    assert abs(as_json(capsys, "eval-E", "--r", "2")["value"][0] - math.pi) < 1e-12
    v = as_json(capsys, "eval-E", "--r", "1", "--z", "0.5,0")["value"]
    assert abs(v[1]) < 1e-10


def test_eval_gamma(capsys):
    assert as_json(capsys, "eval-gamma", "--word", "G[]", "--z", "0.3,0.2")["value"] == [1.0, 0.0]
    doc = as_json(capsys, "eval-gamma", "--word", "G[0,0;0,0]", "--path", "[0,0; 0.2,0; 0.3,0.2]")
    assert abs(complex(*doc["value"]) - (0.3 + 0.2j) ** 2 / 2) < 1e-13
    doc = as_json(capsys, "eval-gamma", "--word", "G[1,0;2,0]", "--z", "0.3,0.2", "--method", "both")
    assert doc["residual"]["route_difference"] < 1e-6


def test_eval_gamma_with_labelled_puncture(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"punctures": {"s": [0.4, 0.45]}}))
    doc = as_json(capsys, "eval-gamma", "--config", str(cfg), "--word", "G[2,s]", "--z", "0.3,0.2")
    assert len(doc["value"]) == 2


def test_eval_hl(capsys):
    doc = as_json(capsys, "eval-hl", "--word", "*", "--z0", "0.2,0", "--z", "0.5,0")
    assert abs(doc["value"][0] - 0.3) < 1e-15 and doc["value"][1] == 0


def test_reduce(capsys):
    doc = as_json(capsys, "reduce", "--expr", "P")
    assert abs(doc["c"][0] + math.pi) < 1e-12  # e_2(i) = pi
    assert doc["lambdas"] == {} and doc["primitive"] == "-X" and doc["c_symbolic"] == "-e2"


def test_uniformize(capsys):
    doc = as_json(capsys, "uniformize", "--a1", "1", "--a2", "0", "--a3", "-1")
    assert abs(complex(*doc["j"]) - 1728) < 1e-6
    assert set(doc) >= {"tau", "a", "b", "residuals"}


def test_shuffle_ops(capsys):
    assert as_json(capsys, "shuffle", "--op", "product", "--u", "[1,0]", "--v", "[2,0]")["result"] == (
        "1*G[1,0; 2,0] + 1*G[2,0; 1,0]"
    )
    assert as_json(capsys, "shuffle", "--op", "antipode", "--u", "[1,0;2,0]")["result"] == "1*G[2,0; 1,0]"
    doc = as_json(capsys, "shuffle", "--op", "decompose", "--u", "[1,0;2,0]")
    assert doc["result"] == {"0": "-1*G[2,0; 1,0]", "1": "1*G[2,0]"}
    assert "(x)" in as_json(capsys, "shuffle", "--op", "coproduct", "--u", "[1,0]")["result"]


@pytest.mark.parametrize(
    "argv",
    [
        ["eval-g", "--z", "0.3,0.1"],
        ["eval-g", "--n", "1", "--z", "abc"],
        ["eval-gamma", "--word", "G[1,0", "--z", "0.3,0.2"],
        ["reduce", "--expr", "P +"],
        ["shuffle", "--op", "product", "--u", "[1,0]"],
        ["verify", "--suite", "nonsense"],
    ],
)
def test_usage_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == EXIT_USAGE and out == ""
    assert json.loads(err)["error"]["code"] in ("usage", "parse_error")


def test_module_errors(capsys):
    code, _, err = run(capsys, "eval-E", "--r", "2", "--z", "1,1")
    assert code == EXIT_MODULE and json.loads(err)["error"]["code"] == "singularity"
    code, _, err = run(capsys, "uniformize", "--a1", "1", "--a2", "1", "--a3", "0")
    assert code == EXIT_MODULE


def test_verify_report_is_deterministic(capsys):
    code, first, _ = run(capsys, "verify", "--suite", "shuffle")
    _, second, _ = run(capsys, "verify", "--suite", "shuffle")
    assert code == 0 and first == second
    doc = json.loads(first)
    assert doc["schema"] == "elliptikit/1" and doc["pass"]
    for check in doc["suites"][0]["checks"]:
        assert set(check) == {"id", "anchor", "residual", "tolerance", "pass"} and check["anchor"]


def test_verify_sect56_and_failure_exit_code(tmp_path, capsys):
    assert as_json(capsys, "verify", "--suite", "sect56")["pass"]
    cfg = tmp_path / "strict.json"
    cfg.write_text(json.dumps({"tolerances": {"sect56/ii[tau=0+1i]": 1e-30}, "suite_taus": [[0, 1]]}))
    code, out, _ = run(capsys, "verify", "--suite", "sect56", "--config", str(cfg))
    assert code == 1 + SUITES.index("sect56")
    assert not json.loads(out)["pass"]


def test_timing_flag(capsys):
    doc = as_json(capsys, "verify", "--suite", "shuffle", "--timing")
    assert "wall_time" in doc["suites"][0]


def test_text_output(capsys):
    code, out, _ = run(capsys, "eval-g", "--n", "0", "--z", "0.3,0.1", "--output", "text")
    assert code == 0 and out.strip() == "value: [1.0,0.0]"


def test_config_loading(tmp_path, monkeypatch):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"tau": "0.5+1.5i", "punctures": [[0.3, 0.4]], "seed": 7, "z0": [0.1, 0.1]}))
    monkeypatch.setenv(CONFIG_ENV, str(path))
    cfg = load_config()
    assert cfg.tau == 0.5 + 1.5j and cfg.seed == 7 and cfg.punctures == (("s1", 0.3 + 0.4j),)
    assert cfg.puncture_set().reps == (0j, 0.3 + 0.4j)
    assert RunConfig.from_dict(cfg.to_dict()) == cfg


@pytest.mark.parametrize(
    "data",
    [{"tau": [0, -1]}, {"punctures": {"s": [1, 1]}}, {"bogus": 1}, {"output": "xml"}, {"tau": [1]}],
)
def test_config_errors(data):
    with pytest.raises(ConfigError):
        RunConfig.from_dict(data)


def test_config_file_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigError):
        load_config(str(bad))
    with pytest.raises(ConfigError):
        load_config(str(tmp_path / "missing.json"))


def test_parse_complex_forms():
    assert parse_complex("0.3,-0.1") == 0.3 - 0.1j
    assert parse_complex("0.5+1.5i") == 0.5 + 1.5j
    assert parse_complex([1, 2]) == 1 + 2j


def test_console_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "elliptikit.cli", "eval-g", "--n", "0", "--z", "0.3,0.1"],
        capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == '{"value":[1.0,0.0]}'
