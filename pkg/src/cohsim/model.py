"""Physical scenario description and operator construction.

A scenario is a target system (qubit or truncated harmonic oscillator)
repeatedly hit by clusters of N identical thermal bath units (qubits or
oscillators).  The system-bath coupling is "composite": a component parallel
to the target Hamiltonian with strength f1 plus an orthogonal (exchange-like)
component with strength f2, either excitation-conserving (RWA) or including
counter-rotating terms (CR).

Basis conventions, fixed once for the whole package:
  * qubits are ordered {excited, ground}, so sigma_z = diag(1, -1) and a
    thermal qubit has <sigma_z> = -tanh(beta * omega / 2);
  * oscillators use the Fock basis {0, 1, ...} with a[n, n+1] = sqrt(n+1).

Coupling constants f1, f2 are stored master-equation-normalized (units of
frequency); the collision layer applies the 1/sqrt(tau) rescaling itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from functools import lru_cache

import numpy as np

from .linalg import Operator, expectation, identity, kron, kron_all, thermal_state

MAX_TENSOR_DIM = 4096
THERMAL_TAIL_TOL = 1e-10


class SystemKind(str, Enum):
    TLS = "tls"
    LHO = "lho"


class CouplingForm(str, Enum):
    RWA = "rwa"
    CR = "cr"


class ClusterMode(str, Enum):
    EXACT = "exact"
    ANALYTIC = "analytic"


# ---------------------------------------------------------------------------
# Elementary operators
# ---------------------------------------------------------------------------

def sigma_z() -> Operator:
    return Operator(np.diag([1.0, -1.0]).astype(complex))


def sigma_x() -> Operator:
    return Operator(np.array([[0, 1], [1, 0]], dtype=complex))


def sigma_y() -> Operator:
    return Operator(np.array([[0, -1j], [1j, 0]], dtype=complex))


def sigma_plus() -> Operator:
    # |e><g| in the {excited, ground} ordering
    return Operator(np.array([[0, 1], [0, 0]], dtype=complex))


def sigma_minus() -> Operator:
    return Operator(np.array([[0, 0], [1, 0]], dtype=complex))


def destroy(dim: int) -> Operator:
    if dim < 2:
        raise ValueError(f"Fock cutoff must be >= 2, got {dim}")
    a = np.zeros((dim, dim), dtype=complex)
    ns = np.arange(1, dim)
    a[ns - 1, ns] = np.sqrt(ns)
    return Operator(a)


def number_op(dim: int) -> Operator:
    return Operator(np.diag(np.arange(dim)).astype(complex))


# ---------------------------------------------------------------------------
# Scenario specification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TargetSpec:
    kind: SystemKind
    frequency: float = 1.0
    truncation: int | None = None  # Fock cutoff, oscillator targets only

    def __post_init__(self):
        if self.frequency <= 0:
            raise ValueError(f"target.frequency must be > 0, got {self.frequency}")
        if self.kind == SystemKind.LHO:
            if self.truncation is None:
                raise ValueError("target.truncation is required for an oscillator target")
            if self.truncation < 2:
                raise ValueError(f"target.truncation must be >= 2, got {self.truncation}")

    @property
    def dim(self) -> int:
        return 2 if self.kind == SystemKind.TLS else int(self.truncation)


@dataclass(frozen=True)
class BathUnitSpec:
    kind: SystemKind
    frequency: float = 1.0
    temperature: float = 0.0  # k_B = 1; T = 0 means beta = inf
    truncation: int | None = None  # explicit Fock cutoff override (oscillator units)

    def __post_init__(self):
        if self.frequency <= 0:
            raise ValueError(f"bath_unit.frequency must be > 0, got {self.frequency}")
        if self.temperature < 0:
            raise ValueError(f"bath_unit.temperature must be >= 0, got {self.temperature}")
        if self.truncation is not None and self.truncation < 2:
            raise ValueError(f"bath_unit.truncation must be >= 2, got {self.truncation}")

    @property
    def beta(self) -> float:
        return math.inf if self.temperature == 0 else 1.0 / self.temperature

    @property
    def n_thermal(self) -> float:
        """Bose-Einstein occupation of one oscillator unit; 0 at T = 0."""
        if self.temperature == 0:
            return 0.0
        return 1.0 / math.expm1(self.beta * self.frequency)

    @property
    def n_fermi(self) -> float:
        """Excited-state population of one thermal qubit unit."""
        if self.temperature == 0:
            return 0.0
        return 1.0 / (math.exp(self.beta * self.frequency) + 1.0)

    def fock_cutoff(self) -> int:
        """Fock cutoff for oscillator units.

        Default rule: max(8, ceil(12 * (n_T + 1))), enlarged if needed so the
        geometric thermal tail beyond the cutoff stays below 1e-10.
        """
        if self.kind != SystemKind.LHO:
            raise ValueError("fock_cutoff applies to oscillator bath units only")
        if self.truncation is not None:
            return self.truncation
        cutoff = max(8, math.ceil(12.0 * (self.n_thermal + 1.0)))
        q = math.exp(-self.beta * self.frequency) if self.temperature > 0 else 0.0
        if q > 0:
            # tail population P(n >= c) = q^c for a geometric distribution
            cutoff = max(cutoff, math.ceil(math.log(THERMAL_TAIL_TOL) / math.log(q)))
        return cutoff

    @property
    def dim(self) -> int:
        return 2 if self.kind == SystemKind.TLS else self.fock_cutoff()


@dataclass(frozen=True)
class ClusterSpec:
    n_units: int = 1
    mode: ClusterMode = ClusterMode.EXACT

    def __post_init__(self):
        if self.n_units < 1:
            raise ValueError(f"cluster.n_units must be >= 1, got {self.n_units}")


@dataclass(frozen=True)
class InteractionSpec:
    f1: float
    f2: float
    form: CouplingForm = CouplingForm.RWA


@dataclass(frozen=True)
class CollisionSpec:
    tau: float = 0.05
    n_max: int = 5000

    def __post_init__(self):
        if self.tau <= 0:
            raise ValueError(f"collision.tau must be > 0, got {self.tau}")
        if self.n_max < 1:
            raise ValueError(f"collision.n_max must be >= 1, got {self.n_max}")


@dataclass(frozen=True)
class ScenarioConfig:
    target: TargetSpec
    bath_unit: BathUnitSpec
    cluster: ClusterSpec = ClusterSpec()
    interaction: InteractionSpec = InteractionSpec(f1=0.0, f2=0.0)
    collision: CollisionSpec = CollisionSpec()

    def cluster_dim(self) -> int:
        return self.bath_unit.dim ** self.cluster.n_units

    def joint_dim(self) -> int:
        return self.target.dim * self.cluster_dim()

    def check_tensor_feasible(self) -> None:
        if self.cluster.mode != ClusterMode.EXACT:
            raise ValueError(
                "explicit cluster construction requires cluster.mode == 'exact'"
            )
        if self.joint_dim() > MAX_TENSOR_DIM:
            raise ValueError(
                f"joint dimension {self.joint_dim()} exceeds the "
                f"{MAX_TENSOR_DIM} exact-tensor limit"
            )

    def with_(self, **kwargs) -> "ScenarioConfig":
        """Functional update helper used by sweeps."""
        return replace(self, **kwargs)


# ---------------------------------------------------------------------------
# Bath moments of the collective lowering operator
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BathMoments:
    """Second moments of the collective bath operator A over the thermal cluster.

    A is the collective spin lowering operator for qubit units and the
    collective annihilation operator for oscillator units.
    """

    m_lower: float  # <A A+>
    m_raise: float  # <A+ A>

    @property
    def anticomm(self) -> float:
        return self.m_lower + self.m_raise

    @property
    def comm(self) -> float:
        return self.m_lower - self.m_raise


def bath_moments(cfg: ScenarioConfig) -> BathMoments:
    """Closed-form moments for N thermal units.

    Qubit units:      {A, A+} -> N,                [A, A+] -> N tanh(beta w_B / 2)
    Oscillator units: {A, A+} -> N coth(beta w_B / 2), [A, A+] -> N
    """
    n = cfg.cluster.n_units
    unit = cfg.bath_unit
    if unit.kind == SystemKind.TLS:
        p_e = unit.n_fermi
        return BathMoments(m_lower=n * (1.0 - p_e), m_raise=n * p_e)
    n_t = unit.n_thermal
    return BathMoments(m_lower=n * (n_t + 1.0), m_raise=n * n_t)


def bath_moments_bruteforce(cfg: ScenarioConfig) -> BathMoments:
    """Moments from the explicit tensor-product cluster; oracle for bath_moments."""
    dim = cfg.bath_unit.dim
    if dim ** cfg.cluster.n_units > MAX_TENSOR_DIM:
        raise ValueError("cluster dimension exceeds the exact-tensor limit")
    lower = collective_lowering(cfg)
    rho = cluster_thermal_state(cfg)
    raiser = lower.dagger()
    m_lower = expectation(lower @ raiser, rho).real
    m_raise = expectation(raiser @ lower, rho).real
    return BathMoments(m_lower=m_lower, m_raise=m_raise)


# ---------------------------------------------------------------------------
# Hamiltonians, interactions and cluster states
# ---------------------------------------------------------------------------

def _unit_hamiltonian(kind: SystemKind, frequency: float, dim: int) -> Operator:
    if kind == SystemKind.TLS:
        return 0.5 * frequency * sigma_z()
    return frequency * number_op(dim)


def _unit_lowering(kind: SystemKind, dim: int) -> Operator:
    return sigma_minus() if kind == SystemKind.TLS else destroy(dim)


def _embed_in_cluster(op: Operator, site: int, n_units: int, dim: int) -> Operator:
    factors = [identity(dim)] * n_units
    factors[site] = op
    return kron_all(factors)


@lru_cache(maxsize=32)
def _cluster_pieces(cfg: ScenarioConfig):
    """(H_B, A, rho_B) on the full cluster space, cached per scenario."""
    cfg.check_tensor_feasible()
    unit = cfg.bath_unit
    n = cfg.cluster.n_units
    dim = unit.dim
    h_unit = _unit_hamiltonian(unit.kind, unit.frequency, dim)
    a_unit = _unit_lowering(unit.kind, dim)
    h_b = _embed_in_cluster(h_unit, 0, n, dim)
    a_coll = _embed_in_cluster(a_unit, 0, n, dim)
    for site in range(1, n):
        h_b = h_b + _embed_in_cluster(h_unit, site, n, dim)
        a_coll = a_coll + _embed_in_cluster(a_unit, site, n, dim)
    rho_unit = thermal_state(h_unit, unit.beta)
    rho_b = kron_all([rho_unit] * n)
    return h_b, a_coll, rho_b


def collective_lowering(cfg: ScenarioConfig) -> Operator:
    """Sum of single-unit lowering operators on the cluster space."""
    return _cluster_pieces(cfg)[1]


def cluster_thermal_state(cfg: ScenarioConfig) -> Operator:
    """Product of single-unit Gibbs states on the cluster space."""
    return _cluster_pieces(cfg)[2]


def build_free_hamiltonians(cfg: ScenarioConfig) -> tuple[Operator, Operator]:
    """(H_S on the target space, H_B on the full cluster space)."""
    target = cfg.target
    h_s = _unit_hamiltonian(target.kind, target.frequency, target.dim)
    h_b = _cluster_pieces(cfg)[0]
    return h_s, h_b


def target_coupling_ops(cfg: ScenarioConfig) -> tuple[Operator, Operator]:
    """Target-side operators (parallel, orthogonal-lowering) entering the coupling.

    For a qubit these are (sigma_z, sigma_minus); for an oscillator target
    (a+ a, a).  The full coupling operator s = f1 * parallel + f2 * lowering
    (RWA) or s = f1 * parallel + f2 * (lowering + raising) (CR).
    """
    if cfg.target.kind == SystemKind.TLS:
        return sigma_z(), sigma_minus()
    dim = cfg.target.dim
    return number_op(dim), destroy(dim)


def coupling_operator(cfg: ScenarioConfig) -> Operator:
    """The target-space operator s whose bilinear coupling to A defines V_I."""
    parallel, lowering = target_coupling_ops(cfg)
    f1, f2 = cfg.interaction.f1, cfg.interaction.f2
    if cfg.interaction.form == CouplingForm.RWA:
        if cfg.target.kind == SystemKind.LHO and cfg.bath_unit.kind == SystemKind.TLS:
            raise ValueError(
                "RWA coupling between an oscillator target and qubit bath units "
                "is not supported"
            )
        return f1 * parallel + f2 * lowering
    return f1 * parallel + f2 * (lowering + lowering.dagger())


def build_interaction(cfg: ScenarioConfig) -> Operator:
    """Composite interaction V_I = s+ (x) A + s (x) A+ on target (x) cluster.

    RWA keeps only excitation-conserving exchange; the CR form couples
    through the (Hermitian) bath quadrature A + A+ instead, which makes
    V_I = s (x) (A + A+) with Hermitian s.
    """
    s = coupling_operator(cfg)
    a = collective_lowering(cfg)
    v = kron(s.dagger(), a) + kron(s, a.dagger())
    return v


def total_collision_hamiltonian(cfg: ScenarioConfig) -> Operator:
    """H_S + H_B + V_I / sqrt(tau) on the joint space, for one collision."""
    h_s, h_b = build_free_hamiltonians(cfg)
    v = build_interaction(cfg)
    i_target = identity(cfg.target.dim)
    i_cluster = identity(h_b.dims)
    return (
        kron(h_s, i_cluster)
        + kron(i_target, h_b)
        + (1.0 / math.sqrt(cfg.collision.tau)) * v
    )


# ---------------------------------------------------------------------------
# State observables
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BlochState:
    x: float
    y: float
    z: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    @property
    def norm(self) -> float:
        return float(math.sqrt(self.x**2 + self.y**2 + self.z**2))

    @property
    def coherence(self) -> float:
        return float(math.hypot(self.x, self.y))


def l1_coherence(rho: Operator) -> float:
    """Sum of |off-diagonal| elements in the (energy) basis the matrix is stored in.

    For a qubit this equals |<sigma_x> + i <sigma_y>|.
    """
    data = rho.data
    return float(np.sum(np.abs(data)) - np.sum(np.abs(np.diag(data))))


def purity(rho: Operator) -> float:
    """tr(rho^2), basis independent, in [1/D, 1]."""
    return float(np.einsum("ij,ji->", rho.data, rho.data).real)


def bloch_vector(rho: Operator) -> BlochState:
    if rho.dim != 2:
        raise ValueError(f"Bloch vector requires a qubit state, got dim {rho.dim}")
    data = rho.data
    x = 2.0 * data[1, 0].real
    y = 2.0 * data[1, 0].imag
    z = (data[0, 0] - data[1, 1]).real
    return BlochState(x=x, y=y, z=z)


def bloch_to_density(state: BlochState) -> Operator:
    mat = 0.5 * (
        np.eye(2, dtype=complex)
        + state.x * sigma_x().data
        + state.y * sigma_y().data
        + state.z * sigma_z().data
    )
    return Operator(mat)


def thermal_inversion(frequency: float, temperature: float) -> float:
    """Thermal-population inversion z0 = -tanh(omega / (2 T)); -1 at T = 0."""
    if temperature < 0:
        raise ValueError("temperature must be >= 0")
    if temperature == 0:
        return -1.0
    return -math.tanh(frequency / (2.0 * temperature))
