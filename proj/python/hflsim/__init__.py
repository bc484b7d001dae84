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
"""Python front end for the hflsim simulator core."""

from __future__ import annotations

import json
from typing import Any, Mapping, Union

from ._hflsim import (
    ConfigError,
    RunOutput,
    canonical_config as _canonical_config,
    config_hash as _config_hash,
    dbm_per_hz_to_watt,
    link_rate,
    run as _run,
    run_scenario as _run_scenario,
    scenario_names,
)

__all__ = [
    "ConfigError",
    "RunOutput",
    "canonical_config",
    "config_hash",
    "dbm_per_hz_to_watt",
    "link_rate",
    "run",
    "run_scenario",
    "scenario_names",
]

ConfigLike = Union[None, str, Mapping[str, Any]]


def _text(config: ConfigLike) -> str:
    if config is None:
        return ""
    if isinstance(config, str):
        return config
    return json.dumps(config)


def canonical_config(config: ConfigLike = None) -> dict:
    """Full configuration with defaults filled in."""
    return json.loads(_canonical_config(_text(config)))


def config_hash(config: ConfigLike = None) -> str:
    return _config_hash(_text(config))


def run(config: ConfigLike = None, out_dir: str = "") -> dict:
    """Runs one simulation and returns the parsed summary."""
    return json.loads(_run(_text(config), out_dir).summary_json)


def run_scenario(name: str, config: ConfigLike = None, out_dir: str = "",
                 dropouts: int = 1) -> dict:
    """Runs every arm of a scenario; returns {arm label: summary}."""
    arms = _run_scenario(name, _text(config), out_dir, dropouts)
    return {label: json.loads(out.summary_json) for label, out in arms}
