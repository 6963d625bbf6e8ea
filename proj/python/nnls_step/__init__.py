"""Defocusing nonlocal NLS with step-like data: spectral data, asymptotics, simulation.

Every function takes configuration overrides as keyword arguments using the CLI key
names, with dots replaced by double underscores (``sim__dx=0.1`` sets ``sim.dx``).
"""

from . import _core
from ._core import NnlsError

__all__ = ["NnlsError", "default_config", "scatter", "zeros", "predict", "simulate"]


def _settings(kw):
    out = {}
    for key, value in kw.items():
        if isinstance(value, bool):
            value = "true" if value else "false"
        elif isinstance(value, (list, tuple)):
            value = ",".join(repr(float(v)) for v in value)
        out[key.replace("__", ".")] = str(value)
    return out


def default_config():
    """Known keys and their defaults as ``{key: text}``."""
    pairs = (line.split("=", 1) for line in _core.default_config().splitlines())
    return {k.strip(): v.strip() for k, v in pairs}


def scatter(k, **kw):
    """a1, a2 and b at the real points ``k``."""
    return _core.scatter(list(map(float, k)), _settings(kw))


def zeros(**kw):
    """Zeros p_j of a1 in the second quadrant, norming constants, thresholds and the assumption report."""
    return _core.zeros(_settings(kw))


def predict(xi, t, **kw):
    """Sector and asymptotic value of q along each direction ``xi`` at time ``t``."""
    return _core.predict(list(map(float, xi)), float(t), _settings(kw))


def simulate(times, **kw):
    """Direct simulation snapshots ``{t, x, q}`` at increasing ``times``."""
    return _core.simulate(list(map(float, times)), _settings(kw))
