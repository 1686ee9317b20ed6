"""Protocol parameters and the spectral-combing time dependence.

The ancilla splitting is swept as ``Omega(t) = omega_m * f(t)`` with
``f(t) = sin^2(pi t / T_cycle)``, held constant over each interaction period
of length ``T_g = pi / g`` and sampled at the period start ``t_k = k T_g``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from scipy.special import expit

from .errors import IndexOutOfRange, InvalidTolerance


class CombKind(enum.Enum):
    SIN_SQUARED = "sin_squared"


@dataclass(frozen=True)
class ProtocolConfig:
    """All protocol parameters for one run.

    ``ancilla_map[m]`` is the principal-qubit index coupled to ancilla ``m``;
    its length sets the ancilla count M. Energies are in the caller's units
    (the Hamiltonian's coupling sets the scale), times in their inverse.
    """

    g: float
    beta: float
    omega_m: float
    n_trotter: int
    n_cycle: int
    ancilla_map: tuple[int, ...]
    comb_kind: CombKind = CombKind.SIN_SQUARED

    def __post_init__(self):
        object.__setattr__(self, "ancilla_map", tuple(int(q) for q in self.ancilla_map))
        if self.g <= 0:
            raise ValueError(f"coupling g must be > 0, got {self.g}")
        if self.beta < 0:
            raise ValueError(f"beta must be >= 0, got {self.beta}")
        if self.omega_m < 0:
            raise ValueError(f"omega_m must be >= 0, got {self.omega_m}")
        if self.n_trotter < 1:
            raise ValueError(f"n_trotter must be >= 1, got {self.n_trotter}")
        if self.n_cycle < 1:
            raise ValueError(f"n_cycle must be >= 1, got {self.n_cycle}")
        if len(self.ancilla_map) < 1:
            raise ValueError("ancilla_map must list at least one ancilla")
        if any(q < 0 for q in self.ancilla_map):
            raise ValueError(f"ancilla_map entries must be >= 0: {self.ancilla_map}")

    @property
    def m_count(self) -> int:
        return len(self.ancilla_map)

    @property
    def t_g(self) -> float:
        """Interaction period pi/g."""
        return math.pi / self.g

    @property
    def t_cycle(self) -> float:
        """Full comb sweep time T_g * n_cycle."""
        return self.t_g * self.n_cycle


def comb_value(cfg: ProtocolConfig, k: int) -> float:
    """Ancilla splitting ``Omega(t_k)`` for period ``k``.

    Evaluated as ``omega_m sin^2(pi k' / n_cycle)`` with
    ``k' = min(k, n_cycle - k)`` so the mid-cycle symmetry
    ``Omega(t_k) == Omega(t_{n_cycle-k})`` holds exactly in floating point.
    """
    if not 0 <= k < cfg.n_cycle:
        raise IndexOutOfRange(f"period index {k} outside 0..{cfg.n_cycle - 1}")
    folded = min(k, cfg.n_cycle - k)
    return cfg.omega_m * math.sin(math.pi * folded / cfg.n_cycle) ** 2


def ground_probability(omega: float, beta: float) -> float:
    """Thermal ground-state occupation of a two-level ancilla with splitting
    ``omega``, computed in the stable logistic form ``1 / (1 + exp(-beta*omega))``."""
    if beta < 0:
        raise ValueError(f"beta must be >= 0, got {beta}")
    return float(expit(beta * omega))


@dataclass(frozen=True)
class HierarchyReport:
    """Outcome of the rate-hierarchy check ``max|dOmega/dt| << g << ||H_s||``.

    Each inequality a << b is accepted when b >= threshold * a; the stored
    ratios are a/b, so smaller is better and 0 passes trivially. Warnings
    only: exploratory runs outside the weak-coupling regime are permitted.
    """

    max_comb_slope: float
    slope_to_coupling: float
    coupling_to_system: float
    slope_ok: bool
    coupling_ok: bool
    threshold: float

    @property
    def ok(self) -> bool:
        return self.slope_ok and self.coupling_ok

    def summary(self) -> str:
        def verdict(flag):
            return "ok" if flag else "WARNING: not << (ratio above 1/threshold)"

        return "\n".join([
            f"rate hierarchy (threshold {self.threshold:g}x per inequality):",
            f"  max |dOmega/dt| = {self.max_comb_slope:.6g}",
            f"  slope / g       = {self.slope_to_coupling:.6g}  [{verdict(self.slope_ok)}]",
            f"  g / ||H_s||     = {self.coupling_to_system:.6g}  [{verdict(self.coupling_ok)}]",
        ])


def validate_hierarchy(cfg: ProtocolConfig, h_s_norm: float,
                       threshold: float = 10.0) -> HierarchyReport:
    """Check the separation of timescales for the sin^2 comb.

    ``max|dOmega/dt| = pi * omega_m / T_cycle``. Never raises; callers decide
    what to do with the warning flags.
    """
    slope = math.pi * cfg.omega_m / cfg.t_cycle
    r1 = slope / cfg.g
    r2 = cfg.g / h_s_norm if h_s_norm > 0 else math.inf
    return HierarchyReport(
        max_comb_slope=slope,
        slope_to_coupling=r1,
        coupling_to_system=r2,
        slope_ok=r1 * threshold <= 1.0,
        coupling_ok=r2 * threshold <= 1.0,
        threshold=threshold,
    )


def suggest_trotter_steps(t_g: float, lambda_max: float, epsilon: float) -> int:
    """Step count ``ceil((3 t_g lambda_max)^2 / epsilon)`` for a target
    first-order discretization error."""
    if epsilon <= 0:
        raise InvalidTolerance(f"epsilon must be > 0, got {epsilon}")
    return int(math.ceil((3.0 * t_g * lambda_max) ** 2 / epsilon))
