"""Dense complex-matrix kernels used by every other module.

Conventions fixed here and used consistently across the package:

* Qubit 0 is the leftmost tensor factor, i.e. the most significant bit of a
  computational-basis index.
* Density matrices are vectorized by column stacking, so the map
  ``rho -> A rho B^†`` has superoperator matrix ``kron(conj(B), A)``.

All functions are pure and safe to call concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import ConvergenceFailure, DimensionMismatch, NonHermitianInput

_HERM_RTOL = 1e-10


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product of two matrices."""
    return np.kron(np.asarray(a), np.asarray(b))


def kron_all(mats) -> np.ndarray:
    """Kronecker product of a sequence of matrices, left to right."""
    out = np.eye(1, dtype=complex)
    for m in mats:
        out = np.kron(out, m)
    return out


def vec(mat: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization."""
    return np.asarray(mat).T.reshape(-1)


def unvec(v: np.ndarray) -> np.ndarray:
    """Inverse of :func:`vec` for square matrices."""
    v = np.asarray(v)
    dim = int(round(np.sqrt(v.size)))
    if dim * dim != v.size:
        raise DimensionMismatch(f"cannot unvec a vector of length {v.size}")
    return v.reshape(dim, dim).T.copy()


def _check_hermitian(h: np.ndarray) -> np.ndarray:
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {h.shape}")
    norm = np.linalg.norm(h)
    dev = np.linalg.norm(h - h.conj().T)
    if dev > _HERM_RTOL * norm:
        raise NonHermitianInput(
            f"matrix is not Hermitian: ||h - h^dag|| = {dev:.3e} "
            f"exceeds {_HERM_RTOL:g} * ||h|| = {_HERM_RTOL * norm:.3e}"
        )
    return h


@dataclass(frozen=True)
class HermitianEigen:
    """Eigendecomposition of a Hermitian matrix.

    ``eigenvalues`` are real and ascending; column i of ``eigenvectors``
    pairs with eigenvalue i, and the eigenvector matrix is unitary.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def hermitian_eig(h: np.ndarray) -> HermitianEigen:
    """Full eigendecomposition of a Hermitian matrix.

    Raises NonHermitianInput when ``||h - h^dag||_F`` exceeds 1e-10 ``||h||_F``.
    """
    h = _check_hermitian(h)
    w, v = np.linalg.eigh(h)
    return HermitianEigen(eigenvalues=w, eigenvectors=v)


def expm_hermitian(h: np.ndarray, c: complex) -> np.ndarray:
    """``exp(c * h)`` for Hermitian ``h`` via eigendecomposition.

    For purely imaginary ``c`` the result is unitary to working precision;
    this covers every exponentiated operator in the protocol, so no general
    scaling-and-squaring code path is needed.
    """
    eig = hermitian_eig(h)
    w, v = eig.eigenvalues, eig.eigenvectors
    return (v * np.exp(c * w)) @ v.conj().T


def partial_trace(rho: np.ndarray, qubit_count: int, keep) -> np.ndarray:
    """Trace out all qubits not in ``keep``.

    ``keep`` is a set of qubit indices under the qubit-0-is-MSB convention;
    the output is ordered by ascending kept index.
    """
    rho = np.asarray(rho, dtype=complex)
    n = int(qubit_count)
    dim = 2**n
    if rho.shape != (dim, dim):
        raise DimensionMismatch(
            f"state has shape {rho.shape}, expected ({dim}, {dim}) for {n} qubits"
        )
    keep = sorted(set(int(q) for q in keep))
    if any(q < 0 or q >= n for q in keep):
        raise DimensionMismatch(f"keep indices {keep} outside 0..{n - 1}")
    traced = [q for q in range(n) if q not in keep]
    t = rho.reshape((2,) * (2 * n))
    remaining = n
    for q in sorted(traced, reverse=True):
        t = np.trace(t, axis1=q, axis2=q + remaining)
        remaining -= 1
    d_keep = 2 ** len(keep)
    return t.reshape(d_keep, d_keep)


def apply_gate(gate: np.ndarray, qubits, arr: np.ndarray, qubit_count: int,
               axis: int = 0) -> np.ndarray:
    """Apply a local gate to one tensor index of an array.

    The dimension ``axis`` of ``arr`` (of size ``2**qubit_count``) is treated
    as a register of ``qubit_count`` qubits; ``gate`` (a ``2**k`` by ``2**k``
    matrix) acts on the listed ``qubits`` of that register. Used both for
    left-multiplying operators (axis=0) and for evolving batches of state
    vectors (axis=-1) without ever forming the full Kronecker product.
    """
    arr = np.asarray(arr)
    qubits = list(qubits)
    k = len(qubits)
    n = int(qubit_count)
    axis = axis % arr.ndim
    if arr.shape[axis] != 2**n:
        raise DimensionMismatch(
            f"axis {axis} has size {arr.shape[axis]}, expected {2**n}"
        )
    if len(set(qubits)) != k or any(q < 0 or q >= n for q in qubits):
        raise DimensionMismatch(f"invalid qubit list {qubits} for {n} qubits")
    shape = arr.shape
    t = arr.reshape(shape[:axis] + (2,) * n + shape[axis + 1:])
    g = np.asarray(gate).reshape((2,) * (2 * k))
    qaxes = [axis + q for q in qubits]
    t = np.tensordot(g, t, axes=(list(range(k, 2 * k)), qaxes))
    t = np.moveaxis(t, list(range(k)), qaxes)
    return np.ascontiguousarray(t).reshape(shape)


def dominant_eigs(m: np.ndarray, k: int, dense_threshold: int = 4096,
                  tol: float = 1e-10, max_iter: int = 100_000):
    """The ``k`` eigenpairs of largest modulus, sorted by descending ``|lam|``.

    Dense non-Hermitian diagonalization up to ``dense_threshold``; above that,
    power iteration with Wielandt deflation (the deflation uses converged left
    eigenvectors so remaining right eigenvectors are preserved). The iterative
    branch raises ConvergenceFailure for equal-modulus eigenvalue clusters,
    e.g. complex-conjugate dominant pairs, rather than returning bad pairs.

    Every returned pair satisfies ``||M v - lam v|| <= 1e-8 ||M||_F``.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got {m.shape}")
    dim = m.shape[0]
    if not 1 <= k <= dim:
        raise DimensionMismatch(f"k={k} outside 1..{dim}")

    if dim <= dense_threshold:
        w, v = scipy.linalg.eig(m)
        order = np.argsort(-np.abs(w))
        pairs = [(complex(w[i]), v[:, i].copy()) for i in order[:k]]
    else:
        pairs = _power_deflation(m, k, tol, max_iter)

    norm = np.linalg.norm(m)
    for lam, vv in pairs:
        res = np.linalg.norm(m @ vv - lam * vv)
        if res > 1e-8 * max(norm, 1e-300):
            raise ConvergenceFailure(
                f"eigenpair residual {res:.3e} exceeds 1e-8 * ||M|| = "
                f"{1e-8 * norm:.3e}", iterations=max_iter,
            )
    return pairs


def _power_iterate(a: np.ndarray, tol: float, max_iter: int):
    """Power iteration for the largest-|lam| eigenpair of a dense matrix."""
    rng = np.random.default_rng(0x5EED)
    v = rng.standard_normal(a.shape[0]) + 1j * rng.standard_normal(a.shape[0])
    v /= np.linalg.norm(v)
    norm_a = max(np.linalg.norm(a), 1e-300)
    lam = 0.0 + 0.0j
    for it in range(1, max_iter + 1):
        w = a @ v
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0 + 0.0j, v, it
        w /= nw
        lam = np.vdot(w, a @ w)
        if np.linalg.norm(a @ w - lam * w) <= tol * norm_a:
            return complex(lam), w, it
        v = w
    raise ConvergenceFailure(
        f"power iteration did not reach tolerance {tol:g} within "
        f"{max_iter} iterations (last |lam| = {abs(lam):.6g})",
        iterations=max_iter,
    )


def _power_deflation(m: np.ndarray, k: int, tol: float, max_iter: int):
    a = m.copy()
    pairs = []
    for _ in range(k):
        lam, v, _ = _power_iterate(a, tol, max_iter)
        _, u, _ = _power_iterate(a.conj().T, tol, max_iter)
        overlap = np.vdot(u, v)
        if abs(overlap) < 1e-12:
            raise ConvergenceFailure(
                "left/right eigenvector overlap vanished during deflation",
                iterations=max_iter,
            )
        pairs.append((lam, v))
        a = a - lam * np.outer(v, u.conj()) / overlap
    return pairs
