import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dualprec.datasets import Dataset
from dualprec.errors import ValidationError
from dualprec.palette import Palette, colorize, hue_ramp


def ds_from_coords(coords, scalars=None):
    coords = np.asarray(coords, dtype=np.float64)
    colors = np.zeros((len(coords), 3))
    return Dataset(coords.shape[1], coords, colors, scalars=scalars)


class TestColorize:
    def test_single_point_gets_ramp_start(self):
        ds = colorize(ds_from_coords([[0.3, 0.7]]), Palette())
        start = hue_ramp(np.zeros(1), Palette())[0]
        assert (ds.colors[0] == start).all()

    def test_idempotent_for_fixed_palette(self):
        base = ds_from_coords(np.random.default_rng(0).uniform(-1, 1, (50, 3)))
        once = colorize(base, Palette())
        twice = colorize(once, Palette())
        assert (once.colors == twice.colors).all()

    def test_scalars_preferred_over_position(self):
        coords = [[0.0, 0.0, 0.0], [0.0, 0.0, 0.0]]
        ds = ds_from_coords(coords, scalars=np.array([0.0, 5.0]))
        out = colorize(ds, Palette())
        assert not (out.colors[0] == out.colors[1]).all()

    def test_flat_axis_degenerates_to_start(self):
        ds = colorize(ds_from_coords([[1.0, 2.0], [3.0, 2.0]]), Palette())
        start = hue_ramp(np.zeros(1), Palette())[0]
        assert (ds.colors == start).all()

    def test_empty_rejected(self):
        with pytest.raises(ValidationError):
            colorize(ds_from_coords(np.empty((0, 2))))

    @given(st.integers(1, 300), st.integers(0, 2**32 - 1))
    @settings(max_examples=30, deadline=None)
    def test_channels_always_in_unit_interval(self, n, seed):
        coords = np.random.default_rng(seed).normal(scale=100, size=(n, 3))
        out = colorize(ds_from_coords(coords), Palette())
        assert (out.colors >= 0.0).all() and (out.colors <= 1.0).all()
