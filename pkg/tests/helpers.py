"""Shared quadrature oracles for the test suite."""

import numpy as np
from scipy.integrate import quad

from maxdens.tailmodels import smd_pdf, smd_quantile

# quantile breakpoints splitting the support into pieces quad can handle even
# for very heavy tails
_QS = (1e-9, 1e-6, 1e-3, 0.01, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99, 0.999,
       1.0 - 1e-6, 1.0 - 1e-9)


def integrate_smd(model, m):
    """Independent x-space quadrature of the smd over (nearly) all mass.

    Splits the axis at smd quantiles so each finite piece is smooth, and
    integrates wide pieces on a log scale; the mass outside the outermost
    breakpoints is 2e-9 by construction.
    """
    breaks = [float(smd_quantile(model, m, q)) for q in _QS]
    total = 0.0
    for lo, hi in zip(breaks[:-1], breaks[1:]):
        if hi <= lo:
            continue
        if lo > 0.0 and hi / lo > 100.0:
            piece, _ = quad(lambda t: float(smd_pdf(model, m, np.exp(t))) * np.exp(t),
                            np.log(lo), np.log(hi), limit=200)
        elif hi < 0.0 and lo / hi > 100.0:
            piece, _ = quad(lambda t: float(smd_pdf(model, m, -np.exp(t))) * np.exp(t),
                            np.log(-hi), np.log(-lo), limit=200)
        else:
            piece, _ = quad(lambda x: float(smd_pdf(model, m, x)), lo, hi, limit=200)
        total += piece
    return total


def sample_gev(gamma, a, b, n, seed):
    """Exact GEV draws by inverse transform."""
    rng = np.random.Generator(np.random.PCG64(seed))
    u = np.maximum(rng.random(n), 2.0**-53)
    w = -np.log(u)
    if abs(gamma) < 1e-12:
        z = -np.log(w)
    else:
        z = (w**-gamma - 1.0) / gamma
    return b + a * z
