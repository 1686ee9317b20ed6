"""Independent oracles for the test suite.

Everything here recomputes expected values through a different numerical
path than the library: characteristic-polynomial eigenvalues via the
Faddeev-LeVerrier trace recursion, matrix exponentials via scaled Taylor
series, partial traces via einsum, the protocol via explicit composite-space
density-matrix evolution, and the sampler's generator via pure-Python
integer arithmetic.
"""

import numpy as np

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)

_MASK = (1 << 64) - 1


def charpoly_eigenvalues(mat):
    """Roots of det(lam I - M) with coefficients from the Faddeev-LeVerrier
    recursion (no Hermitian eigensolver involved)."""
    mat = np.asarray(mat, dtype=complex)
    n = mat.shape[0]
    coeffs = np.zeros(n + 1, dtype=complex)
    coeffs[0] = 1.0
    aux = np.zeros_like(mat)
    for k in range(1, n + 1):
        aux = mat @ aux + coeffs[k - 1] * np.eye(n)
        coeffs[k] = -np.trace(mat @ aux) / k
    return np.roots(coeffs)


def series_expm(a, terms=30):
    """exp(A) by scaling-and-squaring with a plain Taylor series."""
    a = np.asarray(a, dtype=complex)
    norm = np.linalg.norm(a)
    squarings = max(0, int(np.ceil(np.log2(norm))) + 1) if norm > 0 else 0
    x = a / (2**squarings)
    out = np.eye(a.shape[0], dtype=complex)
    term = np.eye(a.shape[0], dtype=complex)
    for k in range(1, terms + 1):
        term = term @ x / k
        out = out + term
    for _ in range(squarings):
        out = out @ out
    return out


def ptrace_last(rho, d_keep, d_rest):
    """Trace out the trailing tensor factor."""
    r = np.asarray(rho).reshape(d_keep, d_rest, d_keep, d_rest)
    return np.einsum("ikjk->ij", r)


def kron_chain(mats):
    out = np.eye(1, dtype=complex)
    for m in mats:
        out = np.kron(out, m)
    return out


def embed(op, pos, n):
    """op on qubit pos of an n-qubit register (qubit 0 leftmost)."""
    return kron_chain([I2] * pos + [op] + [I2] * (n - pos - 1))


def random_density(rng, dim):
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


def random_unitary(rng, dim):
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(a)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def composite_period_unitary(h_s, ancilla_map, g, omega, n_trotter):
    """W of one period by explicit factor-by-factor multiplication on the
    full space, each factor a Taylor-series exponential."""
    n_s = int(np.log2(h_s.shape[0]))
    m = len(ancilla_map)
    n = n_s + m
    dt = np.pi / (g * n_trotter)
    c = series_expm(1j * (omega / 2.0) * dt * sum(embed(Z, n_s + i, n) for i in range(m))) \
        if m else np.eye(2**n)
    b = series_expm(-1j * dt * np.kron(h_s, np.eye(2**m)))
    a = np.eye(2**n, dtype=complex)
    for anc, principal in enumerate(ancilla_map):
        coupling = embed(X, principal, n) @ embed(X, n_s + anc, n)
        a = a @ series_expm(-1j * g * dt * coupling)
    step = a @ b @ c
    w = np.eye(2**n, dtype=complex)
    for _ in range(n_trotter):
        w = step @ w
    return w


def composite_cycle_oracle(h_s, ancilla_map, g, beta, omega_m, n_trotter, n_cycle):
    """One full comb cycle as an explicit composite-space density-matrix map:
    reset Kraus sum, per-ancilla flip mixture, then the period unitary.

    Returns a function rho_s -> rho_s'.
    """
    n_s = int(np.log2(h_s.shape[0]))
    m = len(ancilla_map)
    n = n_s + m
    d_s, d_a = 2**n_s, 2**m
    reset_ops = [np.kron(np.eye(d_s), np.outer(np.eye(d_a)[:, 0], np.eye(d_a)[i]))
                 for i in range(d_a)]
    flips = [embed(X, n_s + i, n) for i in range(m)]
    ws, p0s = [], []
    for k in range(n_cycle):
        omega = omega_m * np.sin(np.pi * k / n_cycle) ** 2
        ws.append(composite_period_unitary(h_s, ancilla_map, g, omega, n_trotter))
        p0s.append(1.0 / (1.0 + np.exp(-beta * omega)))

    def run(rho_s):
        anc0 = np.zeros((d_a, d_a), dtype=complex)
        anc0[0, 0] = 1.0
        rho = np.kron(rho_s, anc0)
        for w, p0 in zip(ws, p0s):
            rho = sum(r @ rho @ r.conj().T for r in reset_ops)
            for xm in flips:
                rho = p0 * rho + (1.0 - p0) * (xm @ rho @ xm)
            rho = w @ rho @ w.conj().T
        return ptrace_last(rho, d_s, d_a)

    return run


def splitmix64_py(x):
    x = (x + 0x9E3779B97F4A7C15) & _MASK
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def xorshift64star_py(state):
    """One step; returns (uniform double, new state)."""
    s = state
    s ^= s >> 12
    s = (s ^ (s << 25)) & _MASK
    s ^= s >> 27
    out = (s * 0x2545F4914F6CDD1D) & _MASK
    return (out >> 11) * 2.0**-53, s
