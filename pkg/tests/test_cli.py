import json
import subprocess
import sys

import pytest
from hypothesis import given
from hypothesis import strategies as st

from betafreq.cli import RunConfig, main, run


def run_cli(*argv):
    return main(list(argv))


def test_expand_tuned(tmp_path, capsys):
    out = tmp_path / "digits.txt"
    code = run_cli("expand", "--beta", "pg:2", "--algo", "tuned", "--p", "0.5", "--x", "0.37",
                   "--n", "100000", "--seed", "7", "--out", str(out))
    assert code == 0
    digits = out.read_text().strip()
    assert len(digits) == 100_000 and set(digits) <= {"0", "1"}
    summary = json.loads(capsys.readouterr().out)
    for key in ("freq", "n", "p_target", "abs_error"):
        assert key in summary
    assert summary["n"] == 100_000
    assert summary["p_target"] == "1/2"
    assert summary["abs_error"] == pytest.approx(abs(summary["freq"][0] - 0.5))
    assert summary["seed"] == 7


def test_density_csv(tmp_path, capsys):
    out = tmp_path / "hist.csv"
    code = run_cli("density", "--m", "2", "--p", "0.5", "--steps", "1000000", "--bins", "256",
                   "--seed", "7", "--out", str(out))
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "bin_lo,bin_hi,empirical_mass,analytic_mass"
    assert len(lines) == 257
    summary = json.loads(capsys.readouterr().out)
    assert summary["l1"] <= 0.05


@pytest.mark.parametrize("argv, code", [
    (["expand", "--beta", "0.9", "--n", "10"], 2),
    (["expand", "--beta", "pg:2", "--algo", "balanced", "--n", "10"], 2),
    (["expand", "--beta", "pg:2", "--algo", "tuned", "--p", "0.9", "--n", "10"], 2),
    (["expand", "--beta", "2.5", "--x", "5", "--n", "10"], 2),
    (["expand", "--beta", "2.5", "--n", "10", "--base-bits", "1"], 2),
    (["enumerate", "--beta", "pg:2", "--x", "0", "--depth", "3"], 0),
    (["variants", "--beta", "pg:2", "--x", "1", "--count", "3", "--n", "20"], 0),
    (["variants", "--beta", "pg:2", "--x", "1", "--count", "4", "--n", "20", "--horizon", "5"], 4),
    (["identities", "--m", "3", "--p", "0.5"], 0),
    (["bogus"], 2),
])
def test_exit_codes(argv, code, capsys):
    assert run_cli(*argv) == code
    if code:
        assert capsys.readouterr().err.strip()


def test_budget_maps_to_horizon_code(monkeypatch):
    import betafreq.multiplicity as mult
    monkeypatch.setattr(mult.enumerate_prefixes, "__defaults__", (10,))
    assert run_cli("enumerate", "--beta", "pg:2", "--x", "1", "--depth", "12") == 4


def test_precision_maps_to_code_3(monkeypatch):
    from betafreq import cli, errors

    def boom(cfg, out):
        raise errors.AmbiguousAtPrecision("forced")
    monkeypatch.setitem(cli.HANDLERS, "expand", boom)
    assert run(RunConfig("expand")) == 3


def test_identities_report(capsys):
    assert run_cli("identities", "--m", "2", "--p", "0.5") == 0
    payload = json.loads(capsys.readouterr().out)
    assert all(payload["checks"].values())
    assert payload["p"] == "1/2"


def test_enumerate_output(capsys):
    assert run_cli("enumerate", "--beta", "pg:2", "--x", "1", "--depth", "2") == 0
    assert capsys.readouterr().out == "01\n10\n11\n"


def test_reruns_byte_identical(tmp_path, capsys):
    outs = []
    for i in range(2):
        out = tmp_path / f"run{i}.txt"
        summary = tmp_path / f"run{i}.json"
        assert run_cli("expand", "--beta", "3.3", "--algo", "balanced", "--n", "20000",
                       "--seed", "11", "--out", str(out), "--summary", str(summary)) == 0
        outs.append((out.read_bytes(), summary.read_bytes()))
    assert outs[0] == outs[1]


def test_dump_and_replay_config(tmp_path, capsys):
    assert run_cli("expand", "--beta", "2.5", "--algo", "balanced", "--n", "50", "--seed", "3",
                   "--dump-config") == 0
    text = capsys.readouterr().out
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(text)
    assert RunConfig.from_json(text).to_json() == text.strip()
    assert run_cli("expand", "--config", str(cfg_path)) == 0
    replay = capsys.readouterr().out
    assert run_cli("expand", "--beta", "2.5", "--algo", "balanced", "--n", "50",
                   "--seed", "3") == 0
    assert capsys.readouterr().out == replay


def test_config_rejects_unknown_keys(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"command": "expand", "colour": "red"}))
    assert run_cli("expand", "--config", str(path)) == 2


configs = st.builds(
    RunConfig,
    command=st.sampled_from(["expand", "density", "enumerate", "variants", "identities", "verify"]),
    beta_spec=st.sampled_from(["pg:2", "pg:3", "2.5", "poly:1,-2,-1:2,3"]),
    n=st.integers(1, 10**6), seed=st.integers(0, 2**31),
    x=st.one_of(st.none(), st.sampled_from(["1/3", "0.25"])),
    p=st.one_of(st.none(), st.sampled_from(["0.5", "7/20"])),
    tolerance=st.floats(0, 1), only=st.lists(st.integers(1, 7), max_size=3),
)


@given(configs)
def test_config_round_trip(cfg):
    again = RunConfig.from_json(cfg.to_json())
    assert again == cfg
    assert again.to_json() == cfg.to_json()


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "betafreq", "enumerate", "--x", "1", "--depth", "2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.split() == ["01", "10", "11"]
