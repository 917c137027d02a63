# envsamp is Copyright(c) 2026 the envsamp authors.
# The envsamp source code is licensed under the Apache License, Version 2.0.
# SPDX: Apache-2.0

"""Parameterization-independent importance sampling of HDR environment maps.

The heavy lifting lives in the compiled extension; this package re-exports
its public surface.
"""

from ._envsamp import (  # noqa: F401
    AnalyticMap,
    BuildError,
    ConfigError,
    CorruptionError,
    CubeMap,
    DataError,
    EnvMap,
    EquirectMap,
    Error,
    EstimateReport,
    FormatError,
    ImportanceTable,
    IoError,
    RandomSource,
    SampleRecord,
    Strategy,
    VarianceComparison,
    build_table,
    check_table_invariants,
    compare_variance,
    constant_sky,
    direction_from_square,
    estimate_irradiance,
    estimate_sphere_integral,
    gradient_sky,
    load_pfm,
    load_table,
    rasterize_cube,
    rasterize_equirect,
    sphere_to_square,
    square_from_direction,
    square_to_sphere,
    sun_sky,
    write_pfm,
)

__version__ = "0.1.0"
