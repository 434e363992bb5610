"""Measurement-basis constructions and transition-probability tables."""

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.linalg import expm

from . import kernels
from .hermitian import ATOL, random_hermitian


class CompositeDimensionError(ValueError):
    """Raised when an exact MUB construction is requested for a non-prime dimension."""


class SyntheticTableError(TypeError):
    """Raised when an operation needs basis vectors but only a synthetic table exists."""


def _check_orthonormal(vectors, atol=ATOL):
    gram = vectors.conj() @ vectors.T
    err = np.abs(gram - np.eye(len(vectors))).max()
    if err > atol:
        raise ValueError(f"vectors are not orthonormal (max error {err:.3e})")


@dataclass(frozen=True)
class OrthonormalBasis:
    """n orthonormal vectors in C^n, stored as the rows of ``vectors``."""

    vectors: np.ndarray
    label: str = ""

    def __post_init__(self):
        v = np.array(self.vectors, dtype=complex)
        if v.ndim != 2 or v.shape[0] != v.shape[1] or v.shape[0] < 2:
            raise ValueError(f"basis must be n x n with n >= 2, got {v.shape}")
        _check_orthonormal(v)
        v.setflags(write=False)
        object.__setattr__(self, "vectors", v)

    @property
    def n(self):
        return self.vectors.shape[0]

    def projectors(self):
        return np.einsum("ia,ib->iab", self.vectors, self.vectors.conj())


@dataclass(frozen=True)
class MeasurementDesign:
    """An ordered list of n+1 orthonormal bases of C^n."""

    bases: tuple

    def __post_init__(self):
        bases = tuple(b if isinstance(b, OrthonormalBasis) else OrthonormalBasis(b) for b in self.bases)
        if not bases:
            raise ValueError("empty design")
        n = bases[0].n
        if any(b.n != n for b in bases):
            raise ValueError("bases have different dimensions")
        if len(bases) != n + 1:
            raise ValueError(f"a design in dimension {n} needs {n + 1} bases, got {len(bases)}")
        object.__setattr__(self, "bases", bases)

    @property
    def n(self):
        return self.bases[0].n

    def as_array(self):
        """Stacked vectors, shape (n+1, n, n)."""
        return np.stack([b.vectors for b in self.bases])

    @classmethod
    def from_array(cls, arr, labels=None):
        arr = np.asarray(arr, dtype=complex)
        labels = labels or [""] * len(arr)
        return cls(tuple(OrthonormalBasis(v, lab) for v, lab in zip(arr, labels)))


@dataclass(frozen=True)
class TransitionTable:
    """Transition probabilities ``s[k, l, i, j]`` between the vectors of K bases.

    ``synthetic`` marks tables that were written down directly rather than
    computed from vectors; ``design`` holds the source design otherwise.
    """

    s: np.ndarray
    synthetic: bool = False
    design: MeasurementDesign = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        s = np.array(self.s, dtype=float)
        if s.ndim != 4 or s.shape[0] != s.shape[1] or s.shape[2] != s.shape[3]:
            raise ValueError(f"table must have shape (K, K, n, n), got {s.shape}")
        K, _, n, _ = s.shape
        if n < 2:
            raise ValueError("dimension must be >= 2")
        if not np.all(np.isfinite(s)) or s.min() < -ATOL or s.max() > 1 + ATOL:
            raise ValueError("entries must lie in [0, 1]")
        idx = np.arange(K)
        if np.abs(s[idx, idx] - np.eye(n)).max() > ATOL:
            raise ValueError("diagonal blocks must be identity matrices")
        if np.abs(s.sum(axis=2) - 1).max() > 1e-10 or np.abs(s.sum(axis=3) - 1).max() > 1e-10:
            raise ValueError("blocks are not doubly stochastic")
        if np.abs(s - s.transpose(1, 0, 3, 2)).max() > ATOL:
            raise ValueError("table is not symmetric under (k,i) <-> (l,j)")
        s.setflags(write=False)
        object.__setattr__(self, "s", s)

    @property
    def n(self):
        return self.s.shape[2]

    @property
    def n_bases(self):
        return self.s.shape[0]

    def require_design(self):
        if self.design is None:
            raise SyntheticTableError("operation needs basis vectors; this table is synthetic")
        return self.design


def is_prime(n):
    if n < 2:
        return False
    return all(n % p for p in range(2, int(n**0.5) + 1))


def standard_basis(n):
    if n < 2:
        raise ValueError("n must be >= 2")
    return OrthonormalBasis(np.eye(n, dtype=complex), "computational")


def mub_prime(n):
    """Complete set of n+1 mutually unbiased bases for prime n.

    n = 2 uses the Pauli eigenbases; odd primes use the quadratic-phase
    vectors ``exp(2 pi i (a m^2 + j m) / n) / sqrt(n)`` for a = 0..n-1 plus the
    computational basis.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if not is_prime(n):
        raise CompositeDimensionError(f"exact MUBs are only built for prime n; {n} is composite")
    if n == 2:
        r = 1 / np.sqrt(2)
        x = np.array([[r, r], [r, -r]], dtype=complex)
        y = np.array([[r, 1j * r], [r, -1j * r]], dtype=complex)
        return MeasurementDesign((standard_basis(2), OrthonormalBasis(x, "x"), OrthonormalBasis(y, "y")))
    m = np.arange(n)
    bases = [standard_basis(n)]
    for a in range(n):
        # integer phase reduced mod n before exponentiating keeps rounding at 1e-16
        phase = (a * m[None, :] ** 2 + m[:, None] * m[None, :]) % n
        bases.append(OrthonormalBasis(np.exp(2j * np.pi * phase / n) / np.sqrt(n), f"a={a}"))
    return MeasurementDesign(tuple(bases))


def haar_random_basis(n, seed=None):
    """Rows of a Haar-distributed unitary (QR of a Ginibre matrix, phase-fixed)."""
    if n < 2:
        raise ValueError("n must be >= 2")
    rng = np.random.default_rng(seed)
    z = (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    q = q * (d / np.abs(d))[None, :]
    return OrthonormalBasis(q.T, "haar")


def _children(seed, k):
    # int, None, SeedSequence or Generator -> k independent child streams
    return np.random.default_rng(seed).spawn(k)


def random_design(n, seed=None):
    """n+1 independent Haar-random bases."""
    seeds = _children(seed, n + 1)
    return MeasurementDesign(tuple(haar_random_basis(n, s) for s in seeds))


def perturb_basis(basis, eps, seed=None):
    """Rotate every vector of ``basis`` by ``exp(i eps H)``, H random with unit spectral radius."""
    if eps < 0:
        raise ValueError("eps must be >= 0")
    if eps == 0:
        return basis
    h = random_hermitian(basis.n, seed)
    u = expm(1j * eps * h)
    return OrthonormalBasis(basis.vectors @ u.T, basis.label)


def perturb_design(design, eps, seed=None):
    """Perturb each basis of ``design`` independently (child seeds of ``seed``)."""
    seeds = _children(seed, len(design.bases))
    return MeasurementDesign(tuple(perturb_basis(b, eps, s) for b, s in zip(design.bases, seeds)))


def transition_table(design):
    """Transition probabilities ``|<a_i^k|a_j^l>|^2`` of a design."""
    if isinstance(design, TransitionTable):
        design = design.require_design()
    s = kernels.transition_table(design.as_array())
    return TransitionTable(s, synthetic=False, design=design)


def _two_value_range(n):
    # entries 1/n - (n-1)c and c + 1/n must both lie in [0, 1]
    return Fraction(-1, n), Fraction(1, n * (n - 1))


def two_value_table(n, c):
    """Synthetic table with two off-block values: c + 1/n off the diagonal, 1/n - (n-1)c on it."""
    if n < 2:
        raise ValueError("n must be >= 2")
    cq = Fraction(c)
    lo, hi = _two_value_range(n)
    slack = Fraction(ATOL)
    if not lo - slack <= cq <= hi + slack:
        raise ValueError(f"c={c} outside the admissible range [{lo}, {hi}] for n={n}")
    off = cq + Fraction(1, n)
    on = Fraction(1, n) - (n - 1) * cq
    if on + (n - 1) * off != 1:  # pragma: no cover - algebraic identity
        raise AssertionError("two-value block is not stochastic")
    c = float(c)
    block = np.full((n, n), min(1.0, c + 1 / n))
    np.fill_diagonal(block, max(0.0, 1 / n - (n - 1) * c))
    s = np.broadcast_to(block, (n + 1, n + 1, n, n)).copy()
    idx = np.arange(n + 1)
    s[idx, idx] = np.eye(n)
    return TransitionTable(s, synthetic=True)


def krsw_table(n):
    """The two-value table at c = 1/n^2: entries (n+1)/n^2 and 1/n^2."""
    return two_value_table(n, Fraction(1, n * n))
