"""End-to-end smoke checks of the python bindings."""

import math
import os
from pathlib import Path

import numpy as np
import pytest

import ircard

FIXTURES = Path(os.environ.get("IRCARD_FIXTURES", Path(__file__).parents[2] / "fixtures"))


def test_view_factor_reciprocity():
    a = ircard.Patch(0.0, 0.0, 0.010, 0.010, 0.010, 0.95)
    b = ircard.Patch(0.004, -0.002, 0.025, 0.015, 0.010, 0.95)
    f_ab = ircard.view_factor(a, b)
    f_ba = ircard.view_factor(b, a)
    assert 0.0 < f_ab < 1.0
    assert a.area() * f_ab == pytest.approx(b.area() * f_ba, rel=1e-9)
    # Warmer patch loses power to the cooler one.
    assert ircard.exchange_power(a, 330.0, b, 300.0) > 0.0


def test_codec_round_trip_and_crc():
    assert ircard.crc8(b"123456789") == 0xF4
    frame = ircard.encode_response(2, 1, 377_500)
    assert len(frame) == 7
    reply = ircard.decode_response(frame)
    assert (reply.row, reply.col, reply.frequency_hz) == (2, 1, 377_500)
    corrupted = bytes([frame[0], frame[1] ^ 0x10, *frame[2:]])
    with pytest.raises(ircard.IrcardError):
        ircard.decode_response(corrupted)


def test_run_config_and_simulation(tmp_path):
    cfg = ircard.load_run_config(str(FIXTURES / "simulate_default.json"))
    cfg.t_end = 30.0
    cfg.validate()
    sim = ircard.run_simulation(cfg)
    assert sim.final_map_c.shape == (4, 4)
    assert len(sim.labels) == 16
    assert sim.plate_c.values.shape == (31, 16)
    # The plate warms every pixel above ambient.
    assert sim.final_rises.rise.min() > 0.0
    paths = ircard.write_simulation_outputs(sim, str(tmp_path / "out"))
    assert len(paths) == 8
    assert all(Path(p).exists() for p in paths)

    with pytest.raises(ircard.ConfigError):
        ircard.parse_run_config('{"bogus": 1}', "bad.json")


def test_localization_round_trip():
    card = ircard.CardSpec()
    source = ircard.prescribed_source(
        ircard.Patch(0.004, -0.006, 0.010, 0.010, 0.010, 0.95), 55.0
    )
    rise_map = ircard.forward_rise_map(source, card, 0.010)
    peak = ircard.locate_argmax(rise_map)
    assert rise_map.rise[peak.row, peak.col] == rise_map.rise.max()

    estimate = ircard.locate_refined(rise_map, card, 0.010, 0.010)
    assert estimate.converged
    assert math.hypot(estimate.x - 0.004, estimate.y + 0.006) < 1e-3

    cold = ircard.RiseMap(np.zeros((4, 4)), 0.010)
    with pytest.raises(ircard.NoDetectionError):
        ircard.locate_argmax(cold)


def test_replay_b_passes(tmp_path):
    report = ircard.replay_b(str(tmp_path))
    assert report.passed()
    assert "overall: PASS" in report.to_text()
    assert (tmp_path / "replay_b_curve.csv").exists()
