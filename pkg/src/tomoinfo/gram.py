"""Gram-determinant information measure of a complete set of measurement bases.

For a design of n+1 bases, each basis contributes the n-1 traceless operators
``T_i^k = P_i^k - I/n`` (one index per basis is dropped, the last by default).
Their Gram matrix ``gamma`` has entries ``s^{kl}_{ij} - 1/n``; its determinant
is the squared volume of the parallelepiped they span, and ``0.5 * ln det``
is the information measure (nats).
"""

import math
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .bases import MeasurementDesign, TransitionTable, perturb_basis, transition_table, two_value_table
from .hermitian import determinant, sym_eigen, traceless_hermitian_basis

#: reduced-determinant threshold below which a design is treated as incomplete
SINGULAR_VD = 1e-10
#: 1 + lambda_min below this makes the volume lower bound unavailable
BOUND_FLOOR = 1e-14
#: determinants smaller than this are reported as exactly zero
DET_UNDERFLOW = 1e-300


class SingularDesignError(ValueError):
    """The projector differences do not span the traceless operators."""


def _drop(n, drop):
    drop = range(n)[drop]
    keep = np.array([i for i in range(n) if i != drop], dtype=np.int64)
    return drop, keep


@dataclass(frozen=True)
class GramMatrix:
    n: int
    gamma: np.ndarray
    drop: int

    @property
    def size(self):
        return self.gamma.shape[0]

    def block(self, k, l):
        m = self.n - 1
        return self.gamma[k * m : (k + 1) * m, l * m : (l + 1) * m]

    def diagonal_blocks(self):
        K = self.size // (self.n - 1)
        out = np.zeros_like(self.gamma)
        m = self.n - 1
        for k in range(K):
            out[k * m : (k + 1) * m, k * m : (k + 1) * m] = self.block(k, k)
        return out


@dataclass(frozen=True)
class ReducedMatrix:
    """``tilde = Gamma0^{-1} Gamma`` and its symmetric form ``Gamma0^{-1/2} Gamma Gamma0^{-1/2}``.

    Off-diagonal blocks of ``tilde`` are the first-index differences
    ``s^{kl}_{ij} - s^{kl}_{dj}`` with d the dropped index.
    """

    n: int
    tilde: np.ndarray
    symmetric: np.ndarray


def gram_matrix(table, drop=-1):
    """Gram matrix of the traceless projector differences from a transition table."""
    n = table.n
    drop, keep = _drop(n, drop)
    g = kernels.assemble_gram(table.s, keep, n)
    return GramMatrix(n, g, drop)


def gram_from_coords(design, drop=-1):
    """Same Gram matrix, via coordinates in an orthonormal traceless operator basis.

    Each ``T_i^k`` is expanded in generalised Gell-Mann matrices; the real
    coefficient matrix C then gives ``gamma = C C^T``.
    """
    if isinstance(design, TransitionTable):
        design = design.require_design()
    n = design.n
    drop, keep = _drop(n, drop)
    ops = traceless_hermitian_basis(n)
    vecs = design.as_array()[:, keep, :].reshape(-1, n)
    proj = np.einsum("ra,rb->rab", vecs, vecs.conj()) - np.eye(n) / n
    coeffs = np.einsum("gab,rab->rg", ops.conj(), proj).real
    return GramMatrix(n, coeffs @ coeffs.T, drop)


def det_gamma0(n):
    """Determinant of the block-diagonal part: each block ``I - J/n`` has det 1/n."""
    if n < 2:
        raise ValueError("n must be >= 2")
    return float(Fraction(1, n ** (n + 1)))


def gamma0_matrix(n):
    m = n - 1
    return np.kron(np.eye(n + 1), np.eye(m) - np.ones((m, m)) / n)


def _block_inv_sqrt(n):
    w, v = np.linalg.eigh(np.eye(n - 1) - np.ones((n - 1, n - 1)) / n)
    return (v / np.sqrt(w)) @ v.T


def reduced_matrix(table, drop=-1):
    n = table.n
    drop, keep = _drop(n, drop)
    tilde = kernels.reduced_blocks(table.s, keep, drop)
    g = kernels.assemble_gram(table.s, keep, n)
    d = np.kron(np.eye(table.n_bases), _block_inv_sqrt(n))
    sym = d @ g @ d
    sym = 0.5 * (sym + sym.T)
    m = n - 1
    for k in range(table.n_bases):
        sym[k * m : (k + 1) * m, k * m : (k + 1) * m] = np.eye(m)
    return ReducedMatrix(n, tilde, sym)


def fischer_bound(gram):
    """Product of the determinants of the diagonal blocks (upper bound on det gamma)."""
    K = gram.size // (gram.n - 1)
    return math.prod(determinant(gram.block(k, k), symmetric=True) for k in range(K))


@dataclass
class InfoReport:
    n: int
    detGamma: float
    detGamma0: float
    vd: float
    infoNats: float
    infoLossNats: float
    epsilon: float
    lambdaMin: float
    specRadius: float
    lowerBound: float | None
    boundHolds: bool
    singular: bool

    def to_dict(self):
        return asdict(self)


def volume_lower_bound(n, epsilon, lambda_min):
    """``exp(-(n^2-n)^2 (n^2-1) eps^2 / (1 + lambda_min))``, or None if the denominator vanishes."""
    denom = 1.0 + lambda_min
    if denom <= BOUND_FLOOR:
        return None
    return math.exp(-((n * n - n) ** 2) * (n * n - 1) * epsilon**2 / denom)


def info_report(table, drop=-1, bound_rtol=1e-12):
    """Information measure, loss relative to MUBs, and the volume lower bound.

    ``lambdaMin`` and ``specRadius`` refer to ``symmetric - I`` of the reduced
    matrix, whose diagonal blocks vanish. ``boundHolds`` compares ``vd`` to
    ``lowerBound`` with relative slack ``bound_rtol``.
    """
    n = table.n
    gram = gram_matrix(table, drop)
    det = determinant(gram.gamma, symmetric=True)
    if abs(det) < DET_UNDERFLOW:
        det = 0.0
    det0 = det_gamma0(n)
    vd = det / det0
    singular = vd <= SINGULAR_VD
    if singular:
        info, loss = -math.inf, math.inf
    else:
        info = 0.5 * math.log(det)
        loss = -0.5 * math.log(vd)
    red = reduced_matrix(table, drop)
    ev = sym_eigen(red.symmetric - np.eye(red.symmetric.shape[0]))
    lam = float(ev[0])
    rho = float(np.abs(ev).max())
    eps = float(kernels.max_spread(table.s))
    lb = volume_lower_bound(n, eps, lam)
    holds = lb is not None and vd >= lb * (1 - bound_rtol)
    return InfoReport(n, det, det0, vd, info, loss, eps, lam, rho, lb, bool(holds), bool(singular))


def information(design, drop=-1):
    """``0.5 * ln det gamma`` of a design (nats); -inf if gamma is not positive definite."""
    g = gram_matrix(transition_table(design), drop).gamma
    sign, logdet = np.linalg.slogdet(g)
    return 0.5 * logdet if sign > 0 else -math.inf


@dataclass(frozen=True)
class TwoValueSpectrum:
    eigenvalues: tuple
    multiplicities: tuple
    determinant: float


def two_value_spectrum(n, c):
    """Closed-form spectrum of the reduced matrix of ``two_value_table(n, c)``.

    Off-diagonal blocks are ``-n c I``, so the matrix is
    ``I + (J - I) (x) (-n c I)``: eigenvalue ``1 + n c`` with multiplicity
    ``n^2 - n`` and ``1 - n^2 c`` with multiplicity ``n - 1``. ``c`` may be a
    Fraction, in which case the determinant is evaluated exactly.
    """
    hi = 1 + n * c
    lo = 1 - n * n * c
    det = hi ** (n * n - n) * lo ** (n - 1)
    return TwoValueSpectrum((float(hi), float(lo)), (n * n - n, n - 1), float(det))


def two_value_reduced(n, c):
    """Numerically assembled reduced matrix of the two-value table."""
    return reduced_matrix(two_value_table(n, c)).tilde


def forward_probabilities(rho, design):
    """Outcome probabilities ``p[k, i] = <a_i^k| rho |a_i^k>`` for every basis."""
    vecs = design.as_array()
    p = np.einsum("kia,ab,kib->ki", vecs.conj(), rho, vecs).real
    return np.clip(p, 0.0, 1.0)


def reconstruct_state(probabilities, design, drop=-1, atol=1e-9):
    """Linear-inversion estimate of the state from per-basis outcome probabilities.

    Solves ``gamma y = p - 1/n`` over the kept outcomes and returns
    ``I/n + sum y_i^k T_i^k``.
    """
    if isinstance(design, TransitionTable):
        design = design.require_design()
    n = design.n
    p = np.asarray(probabilities, dtype=float)
    if p.shape != (n + 1, n):
        raise ValueError(f"expected probabilities of shape {(n + 1, n)}, got {p.shape}")
    if np.any(p < -atol) or np.abs(p.sum(axis=1) - 1).max() > atol:
        raise ValueError("each basis' probabilities must be nonnegative and sum to 1")
    drop, keep = _drop(n, drop)
    gram = gram_matrix(transition_table(design), drop)
    det = determinant(gram.gamma, symmetric=True)
    if det / det_gamma0(n) <= SINGULAR_VD:
        raise SingularDesignError("design is incomplete: gamma is singular")
    rhs = (p[:, keep] - 1.0 / n).ravel()
    y = np.linalg.solve(gram.gamma, rhs)
    vecs = design.as_array()[:, keep, :].reshape(-1, n)
    t = np.einsum("ra,rb->rab", vecs, vecs.conj()) - np.eye(n) / n
    rho = np.eye(n) / n + np.einsum("r,rab->ab", y, t)
    return 0.5 * (rho + rho.conj().T)


@dataclass
class OptimizeResult:
    design: MeasurementDesign
    trace: list
    accepted: int
    step_size: float


def optimize_design(start, steps=2000, step_size=0.1, seed=None, patience=50, min_step=1e-12, tol=1e-14):
    """Seeded hill climbing of ``0.5 ln det gamma`` over per-basis unitary rotations.

    Each step rotates one randomly chosen basis by ``exp(i h H)`` with a random
    unit-radius Hermitian H and keeps the move only if the information rises by
    more than ``tol``. After ``patience`` consecutive rejections the step size
    halves. ``trace`` holds the information after every step.
    """
    rng = np.random.default_rng(seed)
    n = start.n
    ceiling = 0.5 * math.log(det_gamma0(n)) + 1e-9
    current = start
    best = information(current)
    if not math.isfinite(best):
        raise SingularDesignError("starting design is incomplete")
    trace = [best]
    accepted = 0
    rejected = 0
    h = step_size
    for _ in range(steps):
        if h < min_step:
            break
        k = int(rng.integers(len(current.bases)))
        bases = list(current.bases)
        bases[k] = perturb_basis(bases[k], h, rng)
        cand = MeasurementDesign(tuple(bases))
        val = information(cand)
        if val > best + tol:
            if val > ceiling:  # pragma: no cover - would contradict Fischer-Hadamard
                raise AssertionError(f"information {val} exceeds the MUB maximum {ceiling}")
            current, best = cand, val
            accepted += 1
            rejected = 0
        else:
            rejected += 1
            if rejected >= patience:
                h *= 0.5
                rejected = 0
        trace.append(best)
    return OptimizeResult(current, trace, accepted, h)
