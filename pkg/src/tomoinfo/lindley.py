"""Lindley information of discrete experiments.

An experiment is a prior ``p(theta)`` over m parameter values and a
conditional matrix ``p(x | theta)`` with one row per outcome and one column
per parameter value. Terms with zero probability contribute nothing.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .bases import MeasurementDesign, OrthonormalBasis
from .hermitian import check_density_matrix

ATOL = 1e-12


@dataclass(frozen=True)
class DiscreteExperiment:
    prior: np.ndarray
    conditional: np.ndarray

    def __post_init__(self):
        prior = np.array(self.prior, dtype=float)
        cond = np.array(self.conditional, dtype=float)
        if prior.ndim != 1 or cond.ndim != 2 or cond.shape[1] != prior.size:
            raise ValueError(f"shape mismatch: prior {prior.shape}, conditional {cond.shape}")
        if not np.all(np.isfinite(prior)) or not np.all(np.isfinite(cond)):
            raise ValueError("probabilities must be finite")
        if prior.min() < 0 or abs(prior.sum() - 1) > ATOL:
            raise ValueError("prior must be a probability vector")
        if cond.min() < 0 or np.abs(cond.sum(axis=0) - 1).max() > ATOL:
            raise ValueError("each column of the conditional must be a probability vector")
        prior.setflags(write=False)
        cond.setflags(write=False)
        object.__setattr__(self, "prior", prior)
        object.__setattr__(self, "conditional", cond)


def _log_base(base):
    if base == "e" or base == math.e:
        return 1.0
    base = float(base)
    if base <= 0 or base == 1:
        raise ValueError(f"invalid log base {base}")
    return math.log(base)


def _plogp(p):
    p = p[p > 0]
    return float(np.sum(p * np.log(p)))


def marginal(e):
    """``p(x) = sum_theta p(theta) p(x | theta)``."""
    return e.conditional @ e.prior


def posterior(e, x):
    px = marginal(e)[x]
    if px <= 0:
        raise ValueError(f"outcome {x} has zero probability")
    return e.conditional[x] * e.prior / px


def pointwise_info(e, x, base=2):
    """Entropy reduction of the parameter after observing outcome ``x``; may be negative."""
    post = posterior(e, x)
    return (_plogp(post) - _plogp(e.prior)) / _log_base(base)


def average_info(e, base=2):
    """Expected information gain, i.e. the mutual information between parameter and outcome."""
    nats = kernels.mutual_information(np.ascontiguousarray(e.prior), np.ascontiguousarray(e.conditional))
    return nats / _log_base(base)


def design_experiment(design, states, prior=None):
    """Experiment whose outcomes are pairs (basis k, outcome i), k drawn uniformly.

    ``design`` may be a full :class:`MeasurementDesign` or any sequence of
    bases; outcome (k, i) is row ``k * n + i`` and has probability
    ``<a_i^k| rho |a_i^k> / K`` for K bases.
    """
    if isinstance(design, MeasurementDesign):
        bases = design.bases
    elif isinstance(design, OrthonormalBasis):
        bases = (design,)
    else:
        bases = tuple(b if isinstance(b, OrthonormalBasis) else OrthonormalBasis(b) for b in design)
    vecs = np.stack([b.vectors for b in bases])
    K, n, _ = vecs.shape
    rhos = [check_density_matrix(r) for r in states]
    if any(r.shape != (n, n) for r in rhos):
        raise ValueError("state dimension does not match the bases")
    prior = np.full(len(rhos), 1.0 / len(rhos)) if prior is None else np.asarray(prior, dtype=float)
    cond = np.empty((K * n, len(rhos)))
    for t, rho in enumerate(rhos):
        p = np.einsum("kia,ab,kib->ki", vecs.conj(), rho, vecs).real
        cond[:, t] = np.clip(p, 0.0, 1.0).ravel() / K
    cond /= cond.sum(axis=0, keepdims=True)
    return DiscreteExperiment(prior, cond)
