"""Small dense complex linear algebra used by the rest of the package.

Matrices are plain ``numpy`` complex arrays. Everything here is a thin,
validated layer over LAPACK: the sizes we care about are tiny, so the
point is correct conventions (tolerances, partial isometries), not speed.

The polar factor returned by :func:`polar` is a partial isometry: it maps
the range of ``|M|`` isometrically and annihilates ``ker |M|``. The Aluthge
transform does not depend on this choice because ``|M|^{1/2}`` kills the
same kernel.
"""
from dataclasses import dataclass

import numpy as np

from .errors import DimMismatch, NotHermitian, NotPSD

REL_TOL = 1e-10


def as_cmat(M, name="matrix"):
    """Return ``M`` as a finite square complex128 array."""
    A = np.array(M, dtype=complex)
    if A.ndim == 0:
        A = A.reshape(1, 1)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
        raise DimMismatch(f"{name} must be a non-empty square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError(f"{name} has non-finite entries")
    return A


def as_cvec(v, dim=None):
    x = np.array(v, dtype=complex).reshape(-1)
    if dim is not None and x.shape[0] != dim:
        raise DimMismatch(f"vector of length {x.shape[0]} does not match dim {dim}")
    if not np.all(np.isfinite(x)):
        raise ValueError("vector has non-finite entries")
    return x


def adjoint(M):
    return np.conj(np.asarray(M)).T


def spectral_norm(M):
    M = np.asarray(M, dtype=complex)
    if M.size == 0:
        return 0.0
    return float(np.linalg.svd(M, compute_uv=False)[0])


def sigma_min(M):
    """Smallest singular value, i.e. the infimum of ``||Mx||`` over unit x."""
    return float(np.linalg.svd(np.asarray(M, dtype=complex), compute_uv=False)[-1])


def _tol(M, tol):
    return REL_TOL * spectral_norm(M) if tol is None else tol


def hermitian_part(M):
    M = np.asarray(M)
    return (M + adjoint(M)) / 2


def herm_eig(H, tol=None):
    """Eigenvalues (ascending) and orthonormal eigenvectors (columns) of ``H``.

    Raises NotHermitian when ``||H - H*||`` exceeds ``tol`` (default
    ``1e-10 * ||H||``).
    """
    H = as_cmat(H)
    if spectral_norm(H - adjoint(H)) > _tol(H, tol):
        raise NotHermitian("matrix is not Hermitian within tolerance")
    vals, vecs = np.linalg.eigh(hermitian_part(H))
    return vals, vecs


def psd_sqrt(P, tol=None):
    """PSD square root; eigenvalues down to ``-tol`` are clamped to zero."""
    P = as_cmat(P)
    t = _tol(P, tol)
    vals, vecs = herm_eig(P, t)
    if vals[0] < -t:
        raise NotPSD(f"minimum eigenvalue {vals[0]:.3e} is below -{t:.3e}")
    root = np.sqrt(np.clip(vals, 0.0, None))
    return (vecs * root) @ adjoint(vecs)


@dataclass(frozen=True)
class PolarParts:
    isometry: np.ndarray
    modulus: np.ndarray


def polar(M, kernel="zero", rank_tol=None):
    """Polar decomposition ``M = U |M|`` from the SVD ``M = W S V*``.

    ``kernel="zero"`` gives the partial isometry ``U = W_r V_r*`` on the
    ``r`` nonzero singular directions. ``kernel="unitary"`` returns the full
    unitary ``W V*`` instead; both reconstruct ``M``.
    """
    M = as_cmat(M)
    W, S, Vh = np.linalg.svd(M)
    modulus = (adjoint(Vh) * S) @ Vh
    modulus = hermitian_part(modulus)
    if kernel == "unitary":
        U = W @ Vh
    elif kernel == "zero":
        cut = (REL_TOL * S[0] if rank_tol is None else rank_tol) if S[0] > 0 else 0.0
        r = int(np.sum(S > cut))
        U = W[:, :r] @ Vh[:r, :]
    else:
        raise ValueError(f"unknown kernel convention {kernel!r}")
    return PolarParts(isometry=U, modulus=modulus)
