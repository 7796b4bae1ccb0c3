"""Shared fixtures for the krein test suite"""

import logging

import numpy as np
import pytest

from src.geometry import HyperbolicPoint, circle
from src.models import Family, ModelSpec
from src.utils.logging_setup import ROOT_LOGGERS


@pytest.fixture(autouse=True)
def reset_logging():
    """Undo the runner's handler setup so caplog sees library records again"""
    yield
    for name in ROOT_LOGGERS:
        logger = logging.getLogger(name)
        for handler in logger.handlers[:]:
            logger.removeHandler(handler)
            handler.close()
        logger.propagate = True
        logger.setLevel(logging.NOTSET)


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


@pytest.fixture
def point1d_pair():
    """Identical λ = 1 centers at ±a, a = 10"""
    return ModelSpec.from_positions(Family.POINT_1D, [-10.0, 10.0], couplings=(1.0, 1.0), degenerate=True)


@pytest.fixture
def point3d_three():
    return ModelSpec.from_positions(Family.POINT_3D, [(0.0, 0.0, 0.0), (12.0, 0.0, 0.0), (0.0, 14.0, 0.0)],
                                    binding_energies=(-1.0, -0.64, -0.81))


@pytest.fixture
def settings_file(tmp_path):
    """Runtime settings that keep the log file inside the test directory"""
    path = tmp_path / "settings.yaml"
    path.write_text(
        "logging:\n"
        f"  file: {tmp_path / 'krein.log'}\n"
        "  console_level: WARNING\n"
        "parallel:\n"
        "  threads: 2\n",
        encoding="utf-8",
    )
    return path


def _separated(rng, base, jitter=0.5):
    base = np.asarray(base, dtype=float)
    return base + rng.uniform(-jitter, jitter, size=base.shape)


def _distinct(rng, lo, hi, n=3):
    """n values in (lo, hi) at least (hi − lo)/(4n) apart"""
    edges = np.linspace(lo, hi, n + 1)
    width = edges[1] - edges[0]
    values = edges[:-1] + width * rng.uniform(0.125, 0.875, size=n)
    return tuple(rng.permutation(values))


def _hyperbolic(rng, dim, kappa):
    if dim == 2:
        angles = np.deg2rad([0.0, 120.0, 240.0]) + rng.uniform(-0.2, 0.2, 3)
        directions = np.column_stack([np.cos(angles), np.sin(angles)])
    else:
        directions = np.array([[1.0, 0.0, 0.0], [-0.5, 0.8, 0.1], [-0.5, -0.7, 0.4]])
    return tuple(HyperbolicPoint.from_geodesic_polar(r, u, kappa)
                 for r, u in zip(rng.uniform(2.0, 3.0, 3), directions))


TRIANGLE_2D = [(0.0, 0.0), (6.0, 0.0), (1.0, 7.0)]
TRIANGLE_3D = [(0.0, 0.0, 0.0), (6.0, 0.0, 1.0), (1.0, 7.0, -1.0)]


def build_random_model(family: Family, rng) -> ModelSpec:
    """A random admissible three-center model of ``family``"""
    family = Family(family)
    line = np.cumsum(rng.uniform(4.0, 7.0, 3))
    if family is Family.POINT_1D:
        return ModelSpec.from_positions(family, line, couplings=_distinct(rng, 0.8, 2.0))
    if family is Family.POINT_2D:
        return ModelSpec.from_positions(family, _separated(rng, TRIANGLE_2D),
                                        binding_energies=_distinct(rng, -1.5, -0.5))
    if family is Family.POINT_3D:
        return ModelSpec.from_positions(family, _separated(rng, TRIANGLE_3D),
                                        binding_energies=_distinct(rng, -1.5, -0.5))
    if family is Family.POINT_H2:
        return ModelSpec(family, _hyperbolic(rng, 2, 1.0), binding_energies=_distinct(rng, -1.0, 0.2), kappa=1.0)
    if family is Family.POINT_H3:
        return ModelSpec(family, _hyperbolic(rng, 3, 1.0), binding_energies=_distinct(rng, -1.0, 0.8), kappa=1.0)
    if family is Family.SALPETER_1D:
        return ModelSpec.from_positions(family, line, binding_energies=_distinct(rng, -0.8, 0.8), mass=1.0)
    if family is Family.RELATIVISTIC_2D:
        return ModelSpec.from_positions(family, _separated(rng, TRIANGLE_2D),
                                        binding_energies=_distinct(rng, -0.8, 0.8), mass=1.0)
    if family is Family.CURVE_2D:
        curves = tuple(circle(c, r, n_samples=256)
                       for c, r in zip(_separated(rng, TRIANGLE_2D), rng.uniform(0.4, 0.8, 3)))
        return ModelSpec(family, curves, couplings=_distinct(rng, 1.5, 3.0), quad_order=16)
    curves = tuple(circle(c, r, n_samples=256)
                   for c, r in zip(_separated(rng, TRIANGLE_3D), rng.uniform(0.4, 0.8, 3)))
    return ModelSpec(family, curves, binding_energies=_distinct(rng, -1.5, -0.5), quad_order=16)


def random_energies(model: ModelSpec, rng, count: int = 5) -> np.ndarray:
    """Admissible spectral parameters strictly inside the family's window"""
    pm = model.principal
    if model.family.is_relativistic:
        return rng.uniform(-0.95, 0.95, count) * model.mass
    return pm.threshold - rng.uniform(0.05, 3.0, count)


@pytest.fixture
def random_model(rng):
    return lambda family: build_random_model(family, rng)
