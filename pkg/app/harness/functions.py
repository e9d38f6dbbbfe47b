"""Test functions with exact first and second derivatives."""

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import special

from app.numerics.errors import UnknownFunctionError

RealFunction = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class TestFunction:
    """f with f', f'' and its default interval.

    ``jumps`` lists points where f is discontinuous; errors within one
    mesh width of them are not reported.
    """

    __test__ = False  # not a pytest class

    name: str
    f: RealFunction
    d1: RealFunction
    d2: RealFunction
    a: float = -1.0
    b: float = 1.0
    jumps: tuple[float, ...] = field(default_factory=tuple)


def _runge(x):
    return 1.0 / (1.0 + 25.0 * x**2)


def _runge_d1(x):
    return -50.0 * x / (1.0 + 25.0 * x**2) ** 2


def _runge_d2(x):
    return (3750.0 * x**2 - 50.0) / (1.0 + 25.0 * x**2) ** 3


def _recip_gamma(x):
    return special.rgamma(x)


def _recip_gamma_d1(x):
    return -special.digamma(x) * special.rgamma(x)


def _recip_gamma_d2(x):
    psi = special.digamma(x)
    return special.rgamma(x) * (psi**2 - special.polygamma(1, x))


def _zero(x):
    return np.zeros_like(np.asarray(x, dtype=float))


def _one(x):
    return np.ones_like(np.asarray(x, dtype=float))


FUNCTIONS: dict[str, TestFunction] = {
    "runge": TestFunction("runge", _runge, _runge_d1, _runge_d2),
    "recip_gamma": TestFunction("recip_gamma", _recip_gamma, _recip_gamma_d1, _recip_gamma_d2, a=1.0, b=3.0),
    "signum": TestFunction("signum", np.sign, _zero, _zero, jumps=(0.0,)),
    "constant": TestFunction("constant", _one, _zero, _zero),
    "exp": TestFunction("exp", np.exp, np.exp, np.exp, a=0.0, b=1.0),
}


def get_function(name: str) -> TestFunction:
    """Registered test function by name."""
    try:
        return FUNCTIONS[name]
    except KeyError:
        raise UnknownFunctionError(f"unknown function {name!r}; choose from {', '.join(sorted(FUNCTIONS))}") from None
