"""Preference-based global optimization with RBF surrogates."""

import json

import numpy as np

from ._prefopt import (
    ConfigError,
    DimensionError,
    Error,
    InfeasibleError,
    InvalidValueError,
    StateError,
    latent_bounds,
    latent_names,
    latent_value,
)
from ._prefopt import Session as _Session
from ._prefopt import run_benchmark_json as _run_benchmark_json

__all__ = [
    "ConfigError",
    "DimensionError",
    "Error",
    "InfeasibleError",
    "InvalidValueError",
    "Session",
    "StateError",
    "latent_bounds",
    "latent_names",
    "latent_value",
    "run_benchmark",
]


class Session:
    """Ask/tell session. Outcomes: -1 left (incumbent) better, 0 tie, 1 right better."""

    def __init__(self, core):
        self._core = core

    @classmethod
    def create(cls, lower, upper, config=None, A=None, b=None):
        lower = np.asarray(lower, dtype=float)
        upper = np.asarray(upper, dtype=float)
        if A is not None:
            A = np.atleast_2d(np.asarray(A, dtype=float))
            b = np.atleast_1d(np.asarray(b, dtype=float))
        return cls(_Session.create(lower, upper, json.dumps(config or {}), A, b))

    @classmethod
    def named(cls, name, config=None):
        return cls(_Session.create_named(name, json.dumps(config or {})))

    @classmethod
    def loads(cls, document):
        return cls(_Session.from_json(document))

    def dumps(self):
        return self._core.to_json()

    def ask(self):
        q = json.loads(self._core.ask_json())
        for key in ("incumbent", "challenger"):
            q[key] = np.asarray(q[key])
        return q

    def tell(self, outcome):
        self._core.tell(int(outcome))

    def run(self, oracle):
        """Runs to completion; oracle(a, b) returns -1, 0 or 1."""
        return self._core.run_auto(lambda a, b: int(oracle(a, b)))

    def best(self):
        return self._core.best()

    def __getattr__(self, name):
        return getattr(self._core, name)


def run_benchmark(name, config=None, seeds=range(20), noise=0.0, threads=1):
    return json.loads(_run_benchmark_json(name, json.dumps(config or {}), list(seeds), noise, threads))
