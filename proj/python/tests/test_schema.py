import json
import os
import subprocess

import jsonschema
import pytest

CLI = os.environ.get("QWALK_CLI")
SCHEMA = os.environ.get(
    "QWALK_SCHEMA",
    os.path.join(os.path.dirname(__file__), "..", "..", "schema", "qwalk-output.schema.json"),
)

pytestmark = pytest.mark.skipif(not CLI, reason="QWALK_CLI not set")


@pytest.fixture(scope="module")
def validator():
    with open(SCHEMA) as f:
        schema = json.load(f)
    jsonschema.Draft202012Validator.check_schema(schema)
    return jsonschema.Draft202012Validator(schema)


def qwalk(*args):
    return subprocess.run([CLI, *args], capture_output=True, text=True)


def load(path):
    with open(path) as f:
        return json.load(f)


def test_simulate_json(tmp_path, validator):
    out = tmp_path / "sim"
    r = qwalk("simulate", "--T", "12", "--R", "20", "--p", "0.2", "--j", "3", "--format", "json", "--out", str(out))
    assert r.returncode == 0, r.stderr
    validator.validate(load(f"{out}.json"))


def test_simulate_csv_metadata(tmp_path, validator):
    out = tmp_path / "sim"
    assert qwalk("simulate", "--T", "5", "--out", str(out)).returncode == 0
    validator.validate(load(f"{out}.meta.json"))


def test_sweep_json_with_error_row(tmp_path, validator):
    grid = tmp_path / "grid.json"
    grid.write_text(json.dumps({"p": [0.1, 0.3], "j": [3, 20]}))
    out = tmp_path / "sw"
    r = qwalk("sweep", "--grid", str(grid), "--N", "40", "--T", "10", "--R", "5", "--format", "json", "--out", str(out))
    assert r.returncode == 0, r.stderr
    doc = load(f"{out}.json")
    validator.validate(doc)
    assert [row["ok"] for row in doc["rows"]] == [True, True, False, False]
    r = qwalk("sweep", "--grid", str(grid), "--N", "40", "--T", "10", "--R", "5", "--out", str(out))
    validator.validate(load(f"{out}.meta.json"))


def test_stats_json(tmp_path, validator):
    out = tmp_path / "sim"
    assert qwalk("simulate", "--T", "6", "--record-every", "3", "--out", str(out)).returncode == 0
    r = qwalk("stats", "--input", f"{out}.matrix.csv", "--format", "json", "--out", str(out))
    assert r.returncode == 0, r.stderr
    validator.validate(load(f"{out}.stats.json"))


def test_schema_rejects_garbage(validator):
    with pytest.raises(jsonschema.ValidationError):
        validator.validate({"metadata": {}, "rows": "none"})


def test_validation_exit_code():
    r = qwalk("simulate", "--N", "6", "--j", "3", "--T", "1", "--out", "x")
    assert r.returncode == 2
    assert "N/gcd(N,j) must exceed 2" in r.stderr
