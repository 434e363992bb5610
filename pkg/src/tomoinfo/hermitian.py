"""Dense complex-vector and Hermitian-operator helpers."""

import numpy as np

#: absolute tolerance for Hermiticity, orthonormality and normalisation checks
ATOL = 1e-12
#: negative-eigenvalue tolerance for density matrices
PSD_ATOL = 1e-10


class DimensionError(ValueError):
    pass


class NotHermitianError(ValueError):
    pass


class NotDensityMatrixError(ValueError):
    pass


def _square(a, name="matrix"):
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {a.shape}")
    return a


def is_hermitian(a, atol=ATOL):
    a = np.asarray(a)
    return a.ndim == 2 and a.shape[0] == a.shape[1] and np.allclose(a, a.conj().T, rtol=0, atol=atol)


def hs_inner(a, b):
    """Hilbert-Schmidt inner product ``tr(a^dagger b)`` of two Hermitian operators.

    Returns a real float; raises if the imaginary residue exceeds ``ATOL`` times
    the operand scale (which only happens for non-Hermitian input).
    """
    a = _square(a, "a")
    b = _square(b, "b")
    if a.shape != b.shape:
        raise DimensionError(f"dimension mismatch: {a.shape} vs {b.shape}")
    val = np.vdot(a, b)
    scale = max(1.0, np.linalg.norm(a) * np.linalg.norm(b))
    if abs(val.imag) > ATOL * scale:
        raise NotHermitianError(f"inner product has imaginary part {val.imag:.3e}")
    return float(val.real)


def projector(v):
    """Rank-one projector ``|v><v|`` for a unit vector ``v``."""
    v = np.asarray(v, dtype=complex)
    if v.ndim != 1 or v.size < 2:
        raise DimensionError("expected a vector of length >= 2")
    norm = np.linalg.norm(v)
    if abs(norm - 1.0) > ATOL:
        raise ValueError(f"vector not normalised (norm={norm!r})")
    return np.outer(v, v.conj())


def check_density_matrix(rho, atol=PSD_ATOL):
    """Validate ``rho`` as a density matrix and return it as a complex array."""
    rho = _square(np.asarray(rho, dtype=complex), "rho")
    if not is_hermitian(rho, atol=ATOL * max(1.0, np.abs(rho).max())):
        raise NotDensityMatrixError("rho is not Hermitian")
    tr = np.trace(rho).real
    if abs(tr - 1.0) > atol:
        raise NotDensityMatrixError(f"trace {tr!r} != 1")
    lo = np.linalg.eigvalsh(rho)[0]
    if lo < -atol:
        raise NotDensityMatrixError(f"negative eigenvalue {lo!r}")
    return rho


def outcome_probability(rho, proj):
    """Born-rule probability ``tr(P rho)``, clamped to [0, 1]."""
    rho = check_density_matrix(rho)
    proj = _square(proj, "projector")
    if proj.shape != rho.shape:
        raise DimensionError(f"dimension mismatch: {rho.shape} vs {proj.shape}")
    p = np.vdot(proj, rho).real
    return float(min(1.0, max(0.0, p)))


def sym_eigen(s, vectors=False):
    """Ascending eigenvalues (and optionally eigenvectors) of a real symmetric matrix."""
    s = _square(np.asarray(s, dtype=float))
    if not np.allclose(s, s.T, rtol=0, atol=ATOL):
        raise NotHermitianError("matrix is not symmetric")
    if vectors:
        return np.linalg.eigh(s)
    return np.linalg.eigvalsh(s)


def determinant(s, symmetric=None):
    """Determinant of a square real matrix.

    Symmetric input goes through the eigenvalue product, anything else through
    LU with partial pivoting. ``symmetric=None`` detects which applies.
    """
    s = _square(np.asarray(s, dtype=float))
    if s.shape[0] == 0:
        return 1.0
    if symmetric is None:
        symmetric = np.allclose(s, s.T, rtol=0, atol=ATOL)
    if symmetric:
        return float(np.prod(sym_eigen(s)))
    return float(np.linalg.det(s))


def random_density_matrix(n, rng=None, rank=None):
    """Density matrix from the Ginibre ensemble (``rank=n`` gives Hilbert-Schmidt measure)."""
    rng = np.random.default_rng(rng)
    rank = n if rank is None else rank
    g = rng.normal(size=(n, rank)) + 1j * rng.normal(size=(n, rank))
    rho = g @ g.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return rho / np.trace(rho).real


def random_hermitian(n, rng=None):
    """Random Hermitian matrix scaled to unit spectral radius."""
    rng = np.random.default_rng(rng)
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    h = 0.5 * (a + a.conj().T)
    return h / np.abs(np.linalg.eigvalsh(h)).max()


def traceless_hermitian_basis(n):
    """Orthonormal basis (Hilbert-Schmidt) of the traceless Hermitian n x n operators.

    Generalised Gell-Mann matrices scaled to unit norm; returns an array of
    shape (n*n - 1, n, n).
    """
    ops = []
    for j in range(n):
        for k in range(j + 1, n):
            sym = np.zeros((n, n), dtype=complex)
            sym[j, k] = sym[k, j] = 1 / np.sqrt(2)
            anti = np.zeros((n, n), dtype=complex)
            anti[j, k] = -1j / np.sqrt(2)
            anti[k, j] = 1j / np.sqrt(2)
            ops.extend([sym, anti])
    for l in range(1, n):
        d = np.zeros(n)
        d[:l] = 1.0
        d[l] = -l
        ops.append(np.diag(d / np.sqrt(l * (l + 1))).astype(complex))
    return np.array(ops)
