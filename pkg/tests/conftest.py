"""Shared fixtures: the catalog snapshot and the fixed integrand suite."""

import math

import numpy as np
import pytest

from wrenyi.densities import (
    make_exponential,
    make_generalized_gaussian,
    make_laplace,
    make_tent,
)
from wrenyi.weights import make_constant, make_exp_linear, make_power


@pytest.fixture(scope="session")
def catalog():
    return {
        "exp1": make_exponential(1.0),
        "exp2": make_exponential(2.0),
        "laplace": make_laplace(1.0),
        "tent": make_tent(),
        "g22": make_generalized_gaussian(2.0, 2.0),
        "g21": make_generalized_gaussian(2.0, 1.0),
        "g12": make_generalized_gaussian(1.0, 2.0),
        "g2_08": make_generalized_gaussian(2.0, 0.8),
        "g0_2": make_generalized_gaussian(0.0, 2.0),
        "uniform": make_generalized_gaussian(math.inf, 2.0),
    }


@pytest.fixture(scope="session")
def weights_catalog():
    return {
        "one": make_constant(1.0),
        "e01": make_exp_linear(0.1),
        "em05": make_exp_linear(-0.5),
        "absx": make_power(1.0),
        "x2": make_power(2.0),
    }


# Fixed 20-integrand suite shared by the quadrature tests and the
# oracle-equivalence acceptance criterion.  Entries: (name, fn, domain,
# singularity hints, exact value or None).
INTEGRAND_SUITE = [
    ("const", lambda x: np.ones_like(x), (0.0, 1.0), (), 1.0),
    ("linear", lambda x: x, (0.0, 1.0), (), 0.5),
    ("poly5", lambda x: 6 * x**5 - x**2, (0.0, 2.0), (), 64.0 - 8.0 / 3.0),
    ("cosine", lambda x: np.cos(x), (0.0, math.pi / 2), (), 1.0),
    ("runge", lambda x: 1.0 / (1.0 + 25 * x * x), (-1.0, 1.0), (), 2 * math.atan(5.0) / 5.0),
    ("abskink", lambda x: np.abs(x), (-1.0, 2.0), (0.0,), 2.5),
    ("tentpdf", lambda x: np.maximum(1 - np.abs(x), 0.0), (-1.0, 1.0), (0.0,), 1.0),
    ("quadpdf", lambda x: 0.75 * np.maximum(1 - x * x, 0.0), (-1.0, 1.0), (), 1.0),
    ("sqrt", lambda x: np.sqrt(x), (0.0, 1.0), (), 2.0 / 3.0),
    ("logmild", lambda x: np.log(np.maximum(x, 1e-300)), (0.0, 1.0), (0.0,), -1.0),
    ("gauss", lambda x: np.exp(-x * x) / math.sqrt(math.pi), (-math.inf, math.inf), (), 1.0),
    ("gauss_x2", lambda x: x * x * np.exp(-x * x), (-math.inf, math.inf), (), math.sqrt(math.pi) / 2),
    ("expdecay", lambda x: np.exp(-x), (0.0, math.inf), (), 1.0),
    ("gamma3", lambda x: 0.5 * x * x * np.exp(-x), (0.0, math.inf), (), 1.0),
    ("laplacepdf", lambda x: 0.5 * np.exp(-np.abs(x)), (-math.inf, math.inf), (0.0,), 1.0),
    ("heavytail", lambda x: (1 + 0.2 * np.abs(x) ** 2) ** (1 / (0.8 - 1.0)), (-math.inf, math.inf), (), None),
    ("expcos", lambda x: np.exp(-x) * np.cos(x), (0.0, math.inf), (), 0.5),
    ("sigmoid", lambda x: 1.0 / (1.0 + np.exp(-np.clip(x, -600, 600))) * np.exp(-np.abs(x)), (-math.inf, math.inf), (0.0,), 1.0),
    ("bump", lambda x: np.where(np.abs(x) < 1, np.exp(-1.0 / np.maximum(1 - x * x, 1e-300)), 0.0), (-1.0, 1.0), (), None),
    ("gg_15", lambda x: np.maximum(1 - 0.5 * np.abs(x) ** 1.5, 0.0) ** 2.0, (-2.0 ** (2.0 / 3.0), 2.0 ** (2.0 / 3.0)), (0.0,), None),
]


@pytest.fixture(scope="session")
def integrand_suite():
    return INTEGRAND_SUITE
