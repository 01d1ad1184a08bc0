import random

import pytest

from storystream.core import Timestamp, WindowConfig, pane_index
from storystream.io import load_settings, settings_from_dict, RunSettings, settings_to_toml

DAY = 86400.0


def test_pane_index_unit_slide():
    assert pane_index(14 * DAY, DAY) == 14


def test_pane_index_same_slide_collapse():
    late = 14 * DAY + 23 * 3600 + 59 * 60
    assert pane_index(late, DAY) == 14
    assert Timestamp.from_raw(late, DAY).pane == Timestamp.from_raw(14 * DAY, DAY).pane


def test_pane_index_floor_division():
    assert pane_index(14 * DAY, 2 * DAY) == 7


def test_pane_index_rejects_bad_slide():
    with pytest.raises(ValueError):
        pane_index(0.0, 0.0)


def test_pane_index_monotone():
    rng = random.Random(5)
    times = sorted(rng.uniform(-1e9, 1e9) for _ in range(500))
    panes = [pane_index(t, 3600.0) for t in times]
    assert panes == sorted(panes)


def test_every_time_maps_to_exactly_one_pane():
    rng = random.Random(7)
    for _ in range(200):
        t = rng.uniform(0, 1e8)
        p = pane_index(t, DAY)
        assert p * DAY <= t < (p + 1) * DAY


def test_window_config_validation():
    with pytest.raises(ValueError):
        WindowConfig(window_slides=0)
    with pytest.raises(ValueError):
        WindowConfig(temperature=0.0)
    with pytest.raises(ValueError):
        WindowConfig(min_story_size=0)
    with pytest.raises(ValueError):
        WindowConfig(keywords_n=0)


def test_window_config_round_trips_through_config_file(tmp_path):
    settings = RunSettings()
    settings.window = WindowConfig(window_slides=5, slide_seconds=3600.0,
                                   min_story_size=4, keywords_n=7,
                                   temperature=1.5, encoder_dim=128, rng_seed=99)
    settings.encoder.dim = 128
    text = settings_to_toml(settings)
    path = tmp_path / "run.toml"
    path.write_text(text, encoding="utf-8")
    loaded = load_settings(str(path))
    assert loaded.window == settings.window
    assert loaded.encoder == settings.encoder
    assert loaded.to_dict() == settings.to_dict()


def test_settings_reject_dim_mismatch():
    with pytest.raises(ValueError):
        settings_from_dict({"window": {"encoder_dim": 64},
                            "encoder": {"dim": 32}})
