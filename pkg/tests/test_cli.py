import json

import pytest

from jacobi_bounds import cli
from jacobi_bounds.bounds import clear_caches
from jacobi_bounds.eigen import EigenvalueRecord, Spectrum


@pytest.fixture(autouse=True)
def _fresh_caches():
    yield
    clear_caches()


@pytest.fixture
def spec_file(tmp_path):
    def write(payload, name="spec.json"):
        path = tmp_path / name
        path.write_text(json.dumps(payload))
        return str(path)

    return write


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_constants_prints_reference_values(capsys):
    code, out, _ = run_cli(
        capsys, "constants", "--p-grid", "1", "--theta-grid", "0", "--nu", "1"
    )
    assert code == 0
    assert "0.735105193896" in out
    assert "0.212206590789" in out
    assert "2.82842712475" in out


def test_verify_free_spec_exits_zero(capsys, spec_file):
    path = spec_file({"type": "jacobi1d", "a": [], "b": []})
    code, out, _ = run_cli(capsys, "verify", path, "--theorems", "T1_pow", "--p", "1")
    assert code == 0
    payload = json.loads(out)
    assert payload[0]["lhs"] == 0.0
    assert payload[0]["holds"] is True


def test_verify_writes_csv(capsys, spec_file, tmp_path):
    path = spec_file({"type": "jacobi1d", "a": [], "b": [[3.0, 0.0]], "n": 50})
    csv_path = tmp_path / "out.csv"
    code, _, _ = run_cli(
        capsys, "verify", path, "--theorems", "T1_pow", "T1_halfpow",
        "--p", "1", "--csv", str(csv_path),
    )
    assert code == 0
    lines = csv_path.read_text().strip().split("\n")
    assert lines[0].startswith("theorem,p,alpha")
    assert len(lines) == 3


def test_malformed_spec_exits_two(capsys, spec_file):
    path = spec_file({"type": "jacobi1d", "a": [3.0], "b": []})
    code, _, err = run_cli(capsys, "verify", path)
    assert code == 2
    assert "'a'" in err


def test_unknown_file_exits_two(capsys):
    code, _, err = run_cli(capsys, "verify", "/nonexistent/spec.json")
    assert code == 2


def test_spectrum_outputs_sorted_records(capsys, spec_file):
    path = spec_file({"type": "jacobi1d", "a": [], "b": [[3.0, 0.0]], "n": 40})
    code, out, _ = run_cli(capsys, "spectrum", path)
    assert code == 0
    records = json.loads(out)
    assert len(records) == 40
    assert {"re", "im", "mult", "residual"} == set(records[0])
    top = max(r["re"] for r in records)
    assert abs(top - 10.0 / 3.0) < 1e-8


def test_uncertified_spectrum_exits_three(capsys, spec_file, monkeypatch):
    from jacobi_bounds import bounds

    def fake_spectrum(spec):
        return Spectrum(
            eigenvalues=(EigenvalueRecord(0.0 + 0j, 1, 1.0),),
            source_order=1,
            certification_tol=1e-8,
        )

    monkeypatch.setattr(bounds, "spectrum_for", fake_spectrum)
    path = spec_file({"type": "jacobi1d", "a": [], "b": [], "n": 1})
    code, _, err = run_cli(capsys, "spectrum", path)
    assert code == 3
    assert "uncertified" in err


def test_lemmas_command(capsys, spec_file):
    path = spec_file({"type": "jacobi1d", "a": [], "b": [[3.0, 4.0]], "n": 50})
    code, out, _ = run_cli(
        capsys, "lemmas", path, "--alpha-grid", "0", "1", "--p", "1", "--n-max", "3"
    )
    assert code == 0
    payload = json.loads(out)
    # per alpha: two lemma-1 branches plus three lemma-2 parts
    assert len(payload) == 10
    assert all(entry["holds"] for entry in payload)


def test_search_command(capsys):
    code, out, _ = run_cli(
        capsys, "search", "--theorem", "T1_pow", "--budget", "40",
        "--seed", "7", "--cap", "10", "--real-only",
    )
    assert code == 0
    payload = json.loads(out)
    assert 0 < payload["best_objective"] <= 1.0
    assert payload["iterations"] == 40


def test_ensemble_command(capsys, tmp_path):
    config = {
        "family": "1d",
        "count": 3,
        "seed": 5,
        "support_max": 4,
        "p_grid": [1.0],
        "alpha_grid": [0.0],
        "theta_grid": [0.0],
    }
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(config))
    out_path = tmp_path / "campaign.json"
    code, _, err = run_cli(
        capsys, "ensemble", "--config", str(cfg_path),
        "--json", str(out_path), "--workers", "1",
    )
    assert code == 0
    assert "0 violations" in err
    payload = json.loads(out_path.read_text())
    assert len(payload) == 3
    assert all(r["holds"] for entry in payload for r in entry["reports"])


def test_ensemble_bad_config_exits_two(capsys, tmp_path):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({"distribution": "lorentz"}))
    code, _, err = run_cli(capsys, "ensemble", "--config", str(cfg_path))
    assert code == 2
    assert "distribution" in err
