# envsamp is Copyright(c) 2026 the envsamp authors.
# The envsamp source code is licensed under the Apache License, Version 2.0.
# SPDX: Apache-2.0

import math

import numpy as np
import pytest

import envsamp


def test_projection_round_trip():
    u, v = envsamp.square_from_direction((0.0, 0.0, 1.0))
    assert (u, v) == (0.5, 0.5)

    rng = np.random.default_rng(1)
    for _ in range(1000):
        d = rng.normal(size=3)
        d /= np.linalg.norm(d)
        u, v = envsamp.square_from_direction(tuple(d))
        assert 0.0 <= u <= 1.0 and 0.0 <= v <= 1.0
        back = np.asarray(envsamp.direction_from_square(u, v))
        assert np.dot(d, back) > 1.0 - 1e-9

    theta, phi = envsamp.square_to_sphere(1.0, 0.5)
    assert theta == pytest.approx(-math.pi / 2)


def test_constant_table_is_uniform():
    sky = envsamp.constant_sky((1.0, 1.0, 1.0))
    table = envsamp.build_table(sky, 16)
    assert table.n == 16
    np.testing.assert_allclose(table.bin_importance, 1.0 / 256.0, rtol=1e-12)
    assert table.pdf((0.0, 0.0, 1.0)) == pytest.approx(1.0 / (4.0 * math.pi), abs=1e-12)
    assert envsamp.check_table_invariants(table) == []


def test_equirect_map_from_numpy():
    image = np.ones((8, 16, 3))
    image[:, :, 1] = 2.0
    env = envsamp.EquirectMap(image)
    assert env.lookup((0.3, -0.5, 0.8)) == pytest.approx([1.0, 2.0, 1.0])
    np.testing.assert_array_equal(env.to_array(), image)


def test_sun_sky_sampling_concentrates():
    radius = math.radians(2.0)
    sky = envsamp.sun_sky((0.0, 0.0, 1.0), radius, (1000.0,) * 3, (1.0,) * 3)
    table = envsamp.build_table(sky, 32, supersample=2)

    rng = envsamp.RandomSource(7)
    in_disk = 0
    n = 20000
    for _ in range(n):
        rec = table.sample(rng)
        d = np.asarray(rec.direction)
        assert rec.pdf > 0.0
        if math.acos(min(1.0, d[2])) < radius:
            in_disk += 1
    # The disk covers ~0.03% of the sphere; even diluted over the coarse
    # 32x32 bins it draws a couple percent of all samples.
    assert in_disk / n > 0.02


def test_zero_background_never_samples_dark_bins():
    sky = envsamp.sun_sky((0.0, 0.0, 1.0), math.radians(2.0), (1000.0,) * 3, (0.0,) * 3)
    table = envsamp.build_table(sky, 32, supersample=2)
    assert table.positive_bins < table.n * table.n
    rng = envsamp.RandomSource(11)
    importance = table.bin_importance
    for _ in range(5000):
        rec = table.sample(rng)
        assert importance[table.bin_of(rec.direction)] > 0.0


def test_estimators_match_closed_forms():
    c = 1.5
    sky = envsamp.constant_sky((c,) * 3)
    table = envsamp.build_table(sky, 8)
    rep = envsamp.estimate_sphere_integral(
        sky, envsamp.Strategy.ENV_IMPORTANCE, n_samples=1024, trials=8, seed=3, table=table
    )
    assert rep.mean == pytest.approx([4.0 * math.pi * c] * 3, abs=1e-9)
    assert rep.std_error == pytest.approx([0.0] * 3, abs=0.0)
    assert rep.trial_estimates.shape == (8, 3)

    irr = envsamp.estimate_irradiance(
        sky, (0.0, 0.0, 1.0), envsamp.Strategy.COSINE, n_samples=512, trials=4, seed=5
    )
    assert irr.mean == pytest.approx([math.pi * c] * 3, abs=1e-9)

    cmp = envsamp.compare_variance(sky, table, 256, 8, 1)
    assert cmp.std_error_ratio == pytest.approx([1.0] * 3)


def test_pfm_round_trip(tmp_path):
    rng = np.random.default_rng(2)
    image = rng.random((6, 9, 3)).astype(np.float32).astype(np.float64)
    path = tmp_path / "img.pfm"
    envsamp.write_pfm(image, path)
    back = envsamp.load_pfm(path)
    np.testing.assert_array_equal(back, image)


def test_table_round_trip(tmp_path):
    sky = envsamp.sun_sky((0.0, 0.0, 1.0), 0.3, (10.0,) * 3, (1.0,) * 3)
    table = envsamp.build_table(sky, 12)
    path = tmp_path / "table.eimt"
    table.save(path)
    back = envsamp.load_table(path)
    assert back.n == table.n
    np.testing.assert_array_equal(back.bin_importance, table.bin_importance)
    np.testing.assert_array_equal(back.order, table.order)
    np.testing.assert_array_equal(back.cumulative, table.cumulative)


def test_analytic_map_from_callable():
    env = envsamp.AnalyticMap(lambda d: (abs(d[2]), 0.0, 1.0))
    assert env.lookup((0.0, 0.0, -1.0)) == pytest.approx([1.0, 0.0, 1.0])
    table = envsamp.build_table(env, 4)
    assert envsamp.check_table_invariants(table) == []


def test_error_classes(tmp_path):
    with pytest.raises(envsamp.BuildError):
        envsamp.build_table(envsamp.constant_sky((0.0,) * 3), 8)

    bad = tmp_path / "bad.pfm"
    bad.write_text("not a pfm")
    with pytest.raises(envsamp.FormatError):
        envsamp.load_pfm(bad)
    with pytest.raises(envsamp.Error):
        envsamp.load_table(tmp_path / "missing.eimt")
    with pytest.raises(envsamp.ConfigError):
        envsamp.estimate_sphere_integral(
            envsamp.constant_sky((1.0,) * 3), envsamp.Strategy.ENV_IMPORTANCE, 16, 1, 0
        )
