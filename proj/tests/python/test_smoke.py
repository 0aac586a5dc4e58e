import math
import os
import subprocess
from pathlib import Path

import numpy as np
import pytest

import phm

DATA = Path(__file__).resolve().parents[2] / "data"
OTA_LAMBDA = 5.437822244e-4


def test_example_rates():
    model = phm.Model.example()
    assert len(model.component_paths()) == 47
    assert model.hazard() == pytest.approx(OTA_LAMBDA, rel=1e-12)
    assert model.mttf() == pytest.approx(1 / OTA_LAMBDA, rel=1e-12)
    assert model.potc(distance="3.6km", speed="3.6kmh") == pytest.approx(math.exp(-OTA_LAMBDA), rel=1e-14)
    assert model.rul(threshold=0.5) == pytest.approx(math.log(2) / OTA_LAMBDA, rel=1e-6)


def test_json_round_trip():
    text = phm.Model.example().to_json()
    assert phm.Model.from_json(text).to_json() == text
    assert phm.Model.load(str(DATA / "ota.model.json")).to_json() == text


def test_vectorized_reliability():
    model = phm.Model.example()
    t = np.array([0.0, 100.0, 1000.0])
    np.testing.assert_allclose(model.reliability(t), np.exp(-OTA_LAMBDA * t), rtol=1e-12)


def test_life_model():
    w = phm.LifeModel.weibull(100.0, 2.0)
    assert w.mttf() == pytest.approx(88.622692545275801, rel=1e-12)
    m = w.eval(50.0)
    assert m["reliability"] + m["unreliability"] == pytest.approx(1.0, abs=1e-15)
    assert m["hazard"] * m["reliability"] == pytest.approx(m["density"], rel=1e-12)


def test_errors():
    assert phm.validate(phm.Model.example().to_json()) == []
    problems = phm.validate('{"schema": "phm-model/1", "name": "x"}')
    assert problems and problems[0][1].startswith("missing required field")
    with pytest.raises(phm.SchemaError):
        phm.Model.from_json("{")
    with pytest.raises(ValueError):
        phm.LifeModel.exponential(1e-3).eval(-1.0)
    with pytest.raises(phm.SystemFailedError):
        phm.Model.example().potc(1e6, time="1h")


def test_replay_matches_cli():
    model = phm.Model.load(str(DATA / "ota.model.json"))
    bindings = (DATA / "ota.bindings.json").read_text()
    log = (DATA / "ota.readings.jsonl").read_text()
    csv = phm.replay(model, bindings, log, time_scale=3600, window=3)
    assert csv.startswith("t_hours,nominal_lambda,nominal_R,sensor_lambda,sensor_R")
    assert csv == phm.replay(model, bindings, log, time_scale=3600, window=3)
    binary = os.environ.get("PHM_BINARY")
    if not binary:
        pytest.skip("PHM_BINARY not set")
    cli = subprocess.run(
        [binary, "replay", str(DATA / "ota.model.json"), "--bindings", str(DATA / "ota.bindings.json"),
         "--log", str(DATA / "ota.readings.jsonl"), "--time-scale", "3600", "--window", "3"],
        check=True, capture_output=True, text=True).stdout
    assert cli == csv
