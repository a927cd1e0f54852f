import json
import os
import subprocess

import pytest

CLI = os.environ.get("HOPFBIF_CLI")
pytestmark = pytest.mark.skipif(not CLI, reason="CLI not built")


def run(*args):
    return subprocess.run([CLI, *map(str, args)], capture_output=True, text=True)


def test_coeffs_json(fixtures):
    r = run("coeffs", fixtures / "params.json")
    assert r.returncode == 0
    doc = json.loads(r.stdout)
    assert doc["octupole"]["Atil"] == 0.0


def test_exit_codes(fixtures):
    assert run("coeffs", fixtures / "malformed.json").returncode == 2
    assert run("coeffs", fixtures / "params_degenerate.json").returncode == 3
    assert run("tangencies", fixtures / "octupole.json", "--sigma0", 0.02).returncode == 5
