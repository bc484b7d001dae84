# Copyright 2026 The hflsim Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Smoke tests for the Python bindings."""

from __future__ import annotations

import json
import math
import os
import pathlib

import jsonschema
import pytest

import hflsim

ROOT = pathlib.Path(__file__).resolve().parents[2]
SCHEMA_PATH = pathlib.Path(os.environ.get("HFLSIM_SCHEMA", ROOT / "schemas" / "summary.schema.json"))
TINY = {"net": {"n_uavs": 2, "n_devices": 12}, "orchestrator": {"max_rounds": 2},
        "learner": {"test_samples": 200}}


@pytest.fixture(scope="module")
def schema():
    return json.loads(SCHEMA_PATH.read_text())


def test_defaults_and_hash():
    cfg = hflsim.canonical_config()
    assert cfg["net"]["n_uavs"] == 5
    assert cfg["net"]["n_devices"] == 150
    h = hflsim.config_hash()
    assert len(h) == 16 and h == hflsim.config_hash("")
    assert hflsim.config_hash({"seed": 2}) != h


def test_config_error_is_value_error():
    with pytest.raises(hflsim.ConfigError) as info:
        hflsim.canonical_config({"p2": {"lambda1": 0.9}})
    assert "p2.lambda1" in str(info.value)
    with pytest.raises(ValueError):
        hflsim.canonical_config({"net": {"unknown": 1}})


def test_link_rate_matches_closed_form():
    n0 = hflsim.dbm_per_hz_to_watt(-174.0)
    rate = hflsim.link_rate(1e6, 0.5, 1000.0, 3.0, n0)
    expected = 1e6 * math.log2(1.0 + 0.5 * 1000.0 ** -3.0 / (n0 * 1e6))
    assert rate == pytest.approx(expected, rel=1e-12)
    assert hflsim.link_rate(0.0, 0.5, 1000.0, 3.0, n0) == 0.0


def test_run_summary_validates(schema, tmp_path):
    summary = hflsim.run(TINY, str(tmp_path))
    jsonschema.validate(summary, schema)
    assert summary["rounds"] == len(summary["per_round"]) >= 1
    on_disk = json.loads((tmp_path / "summary.json").read_text())
    assert on_disk == summary
    header = (tmp_path / "rounds.csv").read_text().splitlines()[0]
    assert header == "g,K_g,phi,aggregator,accuracy,loss,T_g_s,E_g_J,n_selected,dropouts"


def test_run_is_deterministic():
    assert hflsim.run(TINY) == hflsim.run(TINY)


def test_zero_rounds_not_run(schema):
    cfg = dict(TINY, orchestrator={"max_rounds": 0})
    summary = hflsim.run(cfg)
    jsonschema.validate(summary, schema)
    assert summary["status"] == "not-run"
    assert summary["per_round"] == []


def test_scenario_arms(schema):
    assert "dropout" in hflsim.scenario_names()
    cfg = {"net": {"n_uavs": 3, "n_devices": 12}, "orchestrator": {"max_rounds": 1},
           "learner": {"test_samples": 200}}
    arms = hflsim.run_scenario("dropout", cfg)
    assert set(arms) == {"greedy", "direct-drop"}
    for summary in arms.values():
        jsonschema.validate(summary, schema)
        assert summary["dropout_timeline"] == [{"g": 1, "uav": 1}]
    with pytest.raises(hflsim.ConfigError):
        hflsim.run_scenario("no-such-scenario", cfg)
