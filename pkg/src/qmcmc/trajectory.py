"""Shot-based stochastic unraveling of the thermalization protocol.

Every trajectory is a pure state on the N_s + M composite register. One
period applies, in order:

1. reset: each ancilla (ascending index) is measured in the computational
   basis (one uniform draw per ancilla, outcome 1 when ``u < P(1)``); the
   state is collapsed and renormalized, and outcome-1 ancillas are flipped
   back to ``|0>``;
2. excitation: each ancilla (ascending index) receives an X gate with
   probability ``1 - p0(t_k)``, one uniform draw per ancilla;
3. the ``n_trotter`` Trotter steps of the period unitary, applied gate by
   gate to the state vector (ancilla phases, system step, interactions).

Averaged over trajectories, steps 1-2 reproduce the reset-plus-excitation
preparation of the channel module.

Randomness comes exclusively from the fixed generator in :mod:`qmcmc.rng`;
shot ``s`` under master seed ``seed`` owns the stream seeded by
``splitmix64(seed + s)`` and consumes, in order: one draw for its initial
basis state, ``2 M`` draws per period, and one draw for the terminal
measurement. Shots are therefore independent of how they are batched, and
identical ``(spec, cfg, seed)`` reproduce identical samples bit for bit.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NormalizationLoss
from .hamiltonians import PAULIS, HamiltonianSpec, to_matrix
from .linalg import apply_gate, expm_hermitian
from .rng import derive_streams, next_uniform
from .schedule import ProtocolConfig, comb_value, ground_probability

# shots per batch are capped so a batch stays around 2^22 amplitudes
_CHUNK_ELEMS = 1 << 22


@dataclass(frozen=True)
class TrajectoryState:
    """One pure-state trajectory: composite amplitudes plus its own
    generator state and progress counters."""

    amplitudes: np.ndarray
    rng_state: int
    cycle_index: int = 0
    period_index: int = 0


@dataclass(frozen=True)
class SampleSet:
    """Measured computational-basis outcomes (bitstring keys, qubit 0 first)."""

    counts: dict[str, int]
    shots: int
    seed: int

    def probabilities(self) -> np.ndarray:
        n = len(next(iter(self.counts)))
        p = np.zeros(2**n)
        for key, c in self.counts.items():
            p[int(key, 2)] = c / self.shots
        return p


@dataclass(frozen=True)
class _GateSet:
    n_system: int
    m_count: int
    n_total: int
    dim: int
    n_trotter: int
    dt: float
    u_s: np.ndarray
    interaction: np.ndarray
    pairs: tuple[tuple[int, int], ...]
    phase_weights: np.ndarray


def _build_gates(spec: HamiltonianSpec, cfg: ProtocolConfig) -> _GateSet:
    from .channel import _phase_weights  # shared with the dense-channel path

    n_s = spec.qubit_count
    m = cfg.m_count
    if any(q >= n_s for q in cfg.ancilla_map):
        raise DimensionMismatch(
            f"ancilla_map {cfg.ancilla_map} references qubits outside 0..{n_s - 1}"
        )
    n = n_s + m
    dt = cfg.t_g / cfg.n_trotter
    u_s = expm_hermitian(to_matrix(spec), -1j * dt)
    theta = np.pi / cfg.n_trotter
    xx = np.kron(PAULIS["X"], PAULIS["X"])
    interaction = np.cos(theta) * np.eye(4, dtype=complex) - 1j * np.sin(theta) * xx
    pairs = tuple((principal, n_s + anc) for anc, principal in enumerate(cfg.ancilla_map))
    return _GateSet(
        n_system=n_s,
        m_count=m,
        n_total=n,
        dim=2**n,
        n_trotter=cfg.n_trotter,
        dt=dt,
        u_s=u_s,
        interaction=interaction,
        pairs=pairs,
        phase_weights=_phase_weights(n_s, m),
    )


def _renormalize(amps: np.ndarray) -> None:
    norms = np.linalg.norm(amps, axis=1)
    if norms.min() <= 1e-150:
        raise NormalizationLoss("trajectory collapsed onto a zero-probability branch")
    amps /= norms[:, np.newaxis]


def _period(amps: np.ndarray, states: np.ndarray, gates: _GateSet,
            omega: float, p0: float) -> tuple[np.ndarray, np.ndarray]:
    """Advance a batch of trajectories by one interaction period in place
    (the amplitude buffer is reused; a fresh buffer is returned)."""
    amps = np.ascontiguousarray(amps)  # reset/flip phases write through views
    batch = amps.shape[0]
    for m in range(gates.m_count):
        q = gates.n_system + m
        view = amps.reshape(batch, 2**q, 2, -1)
        p_one = np.abs(view[:, :, 1, :]) ** 2
        p_one = p_one.sum(axis=(1, 2))
        u, states = next_uniform(states)
        got_one = u < p_one
        view[got_one, :, 0, :] = 0.0
        view[~got_one, :, 1, :] = 0.0
        _renormalize(amps)
        if got_one.any():
            view[got_one, :, 0, :], view[got_one, :, 1, :] = (
                view[got_one, :, 1, :], view[got_one, :, 0, :])
    for m in range(gates.m_count):
        q = gates.n_system + m
        u, states = next_uniform(states)
        flip = u < (1.0 - p0)
        if flip.any():
            view = amps.reshape(batch, 2**q, 2, -1)
            view[flip, :, 0, :], view[flip, :, 1, :] = (
                view[flip, :, 1, :], view[flip, :, 0, :])
    phase = np.exp(1j * (omega * gates.dt / 2.0) * gates.phase_weights)
    system_qubits = list(range(gates.n_system))
    for _ in range(gates.n_trotter):
        amps *= phase[np.newaxis, :]
        amps = apply_gate(gates.u_s, system_qubits, amps, gates.n_total, axis=1)
        for principal, anc_q in gates.pairs:
            amps = apply_gate(gates.interaction, [principal, anc_q], amps,
                              gates.n_total, axis=1)
    norms = np.linalg.norm(amps, axis=1)
    drift = np.abs(norms - 1.0).max()
    if drift > 1e-6:
        raise NormalizationLoss(f"norm drifted by {drift:.3e} over one period")
    amps /= norms[:, np.newaxis]
    return amps, states


def _run_cycles(amps, states, cfg: ProtocolConfig, gates: _GateSet, n_cycles: int):
    for _ in range(n_cycles):
        for k in range(cfg.n_cycle):
            omega = comb_value(cfg, k)
            p0 = ground_probability(omega, cfg.beta)
            amps, states = _period(amps, states, gates, omega, p0)
    return amps, states


def make_initial_state(spec: HamiltonianSpec, cfg: ProtocolConfig, seed: int,
                       system_index: int | None = None) -> TrajectoryState:
    """Fresh trajectory with ancillas in ``|0>``.

    With ``system_index=None`` the system starts in a uniformly random basis
    state, consuming the stream's first draw (exactly as batch shot 0 would);
    passing an index pins the start without consuming a draw.
    """
    gates = _build_gates(spec, cfg)
    states = derive_streams(seed, 1)
    if system_index is None:
        u, states = next_uniform(states)
        system_index = min(int(u[0] * 2**gates.n_system), 2**gates.n_system - 1)
    if not 0 <= system_index < 2**gates.n_system:
        raise ValueError(f"system_index {system_index} outside register")
    amps = np.zeros(gates.dim, dtype=complex)
    amps[system_index * 2**gates.m_count] = 1.0
    return TrajectoryState(amplitudes=amps, rng_state=int(states[0]))


def run_cycle(state: TrajectoryState, spec: HamiltonianSpec,
              cfg: ProtocolConfig) -> TrajectoryState:
    """Advance one trajectory through a full comb cycle (n_cycle periods)."""
    gates = _build_gates(spec, cfg)
    amps = np.array(state.amplitudes, dtype=complex, copy=True)
    if amps.shape != (gates.dim,):
        raise NormalizationLoss(
            f"state has {amps.shape[0]} amplitudes, expected {gates.dim}")
    if abs(np.linalg.norm(amps) - 1.0) > 1e-6:
        raise NormalizationLoss("input trajectory state is not normalized")
    batch = amps[np.newaxis, :]
    states = np.array([state.rng_state], dtype=np.uint64)
    batch, states = _run_cycles(batch, states, cfg, gates, 1)
    return TrajectoryState(
        amplitudes=batch[0],
        rng_state=int(states[0]),
        cycle_index=state.cycle_index + 1,
        period_index=0,
    )


def _chunk_ranges(shots: int, dim: int):
    chunk = max(1, _CHUNK_ELEMS // dim)
    return [(lo, min(lo + chunk, shots)) for lo in range(0, shots, chunk)]


def _start_chunk(seed: int, lo: int, hi: int, gates: _GateSet,
                 system_index: int | None):
    states = derive_streams(seed, hi - lo, start=lo)
    batch = hi - lo
    ds = 2**gates.n_system
    if system_index is None:
        u, states = next_uniform(states)
        idx = np.minimum((u * ds).astype(int), ds - 1)
    else:
        idx = np.full(batch, system_index, dtype=int)
    amps = np.zeros((batch, gates.dim), dtype=complex)
    amps[np.arange(batch), idx * 2**gates.m_count] = 1.0
    return amps, states


def run_trajectories(spec: HamiltonianSpec, cfg: ProtocolConfig, cycles: int,
                     shots: int, seed: int, system_index: int | None = None,
                     workers: int | None = None) -> np.ndarray:
    """Final composite amplitudes of ``shots`` independent trajectories,
    as a (shots, 2^(N_s+M)) array. Memory scales with both factors."""
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    gates = _build_gates(spec, cfg)
    out = np.empty((shots, gates.dim), dtype=complex)

    def run_range(bounds):
        lo, hi = bounds
        amps, states = _start_chunk(seed, lo, hi, gates, system_index)
        amps, _ = _run_cycles(amps, states, cfg, gates, cycles)
        out[lo:hi] = amps

    ranges = _chunk_ranges(shots, gates.dim)
    if workers is not None and workers > 1 and len(ranges) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run_range, ranges))
    else:
        for bounds in ranges:
            run_range(bounds)
    return out


def ensemble_reduced_state(amplitudes: np.ndarray, n_s: int, m_count: int) -> np.ndarray:
    """Ensemble-averaged system density matrix of a batch of trajectories."""
    batch = amplitudes.shape[0]
    psi = amplitudes.reshape(batch, 2**n_s, 2**m_count)
    return np.einsum("bia,bja->ij", psi, psi.conj()) / batch


def _measure_system(amps: np.ndarray, states: np.ndarray, gates: _GateSet):
    batch = amps.shape[0]
    probs = np.abs(amps.reshape(batch, 2**gates.n_system, -1)) ** 2
    probs = probs.sum(axis=2)
    cum = np.cumsum(probs, axis=1)
    u, states = next_uniform(states)
    idx = (cum < u[:, np.newaxis] * cum[:, -1:]).sum(axis=1)
    return np.minimum(idx, 2**gates.n_system - 1), states


def sample_gibbs(spec: HamiltonianSpec, cfg: ProtocolConfig, burn_in_cycles: int,
                 shots: int, seed: int, workers: int | None = None) -> SampleSet:
    """Run the sampler: per shot, start from a random basis state, burn in,
    and measure the system register once."""
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    if burn_in_cycles < 0:
        raise ValueError(f"burn_in_cycles must be >= 0, got {burn_in_cycles}")
    gates = _build_gates(spec, cfg)
    ds = 2**gates.n_system

    def run_range(bounds):
        lo, hi = bounds
        amps, states = _start_chunk(seed, lo, hi, gates, None)
        amps, states = _run_cycles(amps, states, cfg, gates, burn_in_cycles)
        idx, _ = _measure_system(amps, states, gates)
        return np.bincount(idx, minlength=ds)

    ranges = _chunk_ranges(shots, gates.dim)
    if workers is not None and workers > 1 and len(ranges) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            partials = list(pool.map(run_range, ranges))
    else:
        partials = [run_range(bounds) for bounds in ranges]
    totals = np.sum(partials, axis=0)
    counts = {
        format(i, f"0{gates.n_system}b"): int(c)
        for i, c in enumerate(totals) if c
    }
    return SampleSet(counts=counts, shots=shots, seed=seed)
