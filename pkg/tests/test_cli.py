import json
import subprocess
import sys

import pytest

from axialforge.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main


def test_enumerate_json(capsys):
    assert main(["enumerate", "--group", "S3", "--format", "json"]) == EXIT_OK
    rows = json.loads(capsys.readouterr().out)
    assert {(r["axet"], r["shapes"]) for r in rows} == {("1+3", 4), ("1+3+3", 3), ("3+3+3", 1)}


def test_enumerate_detail(capsys):
    main(["enumerate", "--group", "D12", "--format", "json", "--detail"])
    rows = json.loads(capsys.readouterr().out)
    data = [d for r in rows for d in r["shapes_data"]]
    assert all(d["group"] == "D12" and d["pair_orbits"] for d in data)


@pytest.mark.parametrize("argv", [
    ["enumerate", "--group", "nosuch"],
    ["construct", "--case", "S3/1+3/9Z"],
    ["construct"],
    ["construct", "--tier", "fast", "--case", "S3/1+3/3C 2B"],
    ["frobnicate"],
])
def test_usage_errors_exit_2(argv, capsys):
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    assert code == EXIT_USAGE


def test_construct_report_verify(tmp_path, capsys):
    store = str(tmp_path / "s")
    assert main(["construct", "--case", "S3/1+3/3C 2B", "--case", "S3/1+3/3C 2A", "--store", store]) == EXIT_OK
    out = capsys.readouterr().out
    assert "Completed  S3/1+3/3C 2B  dim=4 m=1 form=pos primitive=True" in out
    assert "Collapsed=1 Completed=1" in out
    out_file = tmp_path / "r.csv"
    assert main(["report", "--store", store, "--format", "csv", "--output", str(out_file)]) == EXIT_OK
    first = out_file.read_bytes()
    main(["report", "--store", store, "--format", "csv", "--output", str(out_file)])
    assert out_file.read_bytes() == first
    assert main(["verify", "--store", store]) == EXIT_OK
    assert "1 checked, 0 failed" in capsys.readouterr().out


def test_verify_fails_on_corruption(tmp_path, capsys):
    store = tmp_path / "s"
    main(["construct", "--case", "S3/1+3/3C 2B", "--store", str(store), "--quiet"])
    (path,) = store.glob("cases/*/algebra.json")
    data = json.loads(path.read_text())
    data["algebra"]["products"][0][0] = "2"
    path.write_text(json.dumps(data))
    assert main(["verify", "--store", str(store)]) == EXIT_FAIL


def test_store_from_environment(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("AXIALFORGE_STORE", str(tmp_path / "env"))
    main(["construct", "--case", "1/1+1+1/(2B)^3", "--quiet"])
    assert (tmp_path / "env" / "index.json").exists()


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "axialforge.cli", "enumerate", "--group", "1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "1+1+1" in proc.stdout
