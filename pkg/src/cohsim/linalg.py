"""Dense complex-operator kernel for small multipartite Hilbert spaces.

Everything here works on explicit (D, D) complex matrices tagged with the
tensor factorization of their Hilbert space, with D up to a few thousand.
Units follow the hbar = k_B = 1 convention used throughout the package:
energies and rates are measured in multiples of a reference frequency.

All functions are pure; operators are immutable once built, so they can be
shared freely between parallel sweep workers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

HERMITICITY_TOL = 1e-10
DM_HERMITICITY_TOL = 1e-12
DM_TRACE_TOL = 1e-10
DM_EIGENVALUE_FLOOR = -1e-10


@dataclass(frozen=True, eq=False)
class Operator:
    """Square complex matrix together with its subsystem factorization.

    ``dims`` lists the dimensions of the tensor factors in order; their
    product must equal the matrix size.  A plain single-system operator has
    ``dims == (D,)``.
    """

    data: np.ndarray
    dims: tuple[int, ...] = field(default=())

    def __post_init__(self):
        data = np.asarray(self.data, dtype=complex)
        object.__setattr__(self, "data", data)
        if data.ndim != 2 or data.shape[0] != data.shape[1]:
            raise ValueError(f"operator matrix must be square, got shape {data.shape}")
        dims = tuple(int(d) for d in self.dims) or (data.shape[0],)
        object.__setattr__(self, "dims", dims)
        if any(d <= 0 for d in dims):
            raise ValueError(f"subsystem dimensions must be positive, got {dims}")
        if int(np.prod(dims)) != data.shape[0]:
            raise ValueError(
                f"dims {dims} are inconsistent with matrix size {data.shape[0]}"
            )

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    def dagger(self) -> "Operator":
        return Operator(self.data.conj().T, self.dims)

    def trace(self) -> complex:
        return complex(np.trace(self.data))

    def is_hermitian(self, tol: float = HERMITICITY_TOL) -> bool:
        return bool(np.max(np.abs(self.data - self.data.conj().T)) <= tol)

    # Small arithmetic surface so model-building code stays readable.
    def __add__(self, other: "Operator") -> "Operator":
        self._check_compatible(other)
        return Operator(self.data + other.data, self.dims)

    def __sub__(self, other: "Operator") -> "Operator":
        self._check_compatible(other)
        return Operator(self.data - other.data, self.dims)

    def __mul__(self, scalar) -> "Operator":
        return Operator(self.data * scalar, self.dims)

    __rmul__ = __mul__

    def __neg__(self) -> "Operator":
        return Operator(-self.data, self.dims)

    def __matmul__(self, other: "Operator") -> "Operator":
        self._check_compatible(other)
        return Operator(self.data @ other.data, self.dims)

    def _check_compatible(self, other: "Operator") -> None:
        if not isinstance(other, Operator):
            raise TypeError(f"expected Operator, got {type(other).__name__}")
        if other.dims != self.dims:
            raise ValueError(f"dimension mismatch: {self.dims} vs {other.dims}")


def identity(dims) -> Operator:
    dims = (dims,) if isinstance(dims, int) else tuple(dims)
    d = int(np.prod(dims))
    return Operator(np.eye(d, dtype=complex), dims)


def kron(a: Operator, b: Operator) -> Operator:
    """Kronecker product; the result's factors are a's followed by b's."""
    return Operator(np.kron(a.data, b.data), a.dims + b.dims)


def kron_all(ops) -> Operator:
    ops = list(ops)
    if not ops:
        raise ValueError("need at least one operator")
    out = ops[0]
    for op in ops[1:]:
        out = kron(out, op)
    return out


def partial_trace(rho: Operator, keep) -> Operator:
    """Trace out all tensor factors except the ones listed in ``keep``.

    ``keep`` holds factor indices into ``rho.dims``; the reduced operator
    retains those factors in their original order.  The total trace is
    preserved.
    """
    keep = sorted(set(int(k) for k in keep))
    n = len(rho.dims)
    if not keep:
        raise ValueError("keep must name at least one subsystem")
    if keep[0] < 0 or keep[-1] >= n:
        raise ValueError(f"keep indices {keep} out of range for {n} subsystems")

    data = rho.data.reshape(rho.dims + rho.dims)
    # Trace factors from the highest index down so earlier axes stay put.
    remaining = n
    for idx in range(n - 1, -1, -1):
        if idx in keep:
            continue
        data = np.trace(data, axis1=idx, axis2=idx + remaining)
        remaining -= 1
    kept_dims = tuple(rho.dims[k] for k in keep)
    d = int(np.prod(kept_dims))
    return Operator(data.reshape(d, d), kept_dims)


def herm_expm(h: Operator, t: float) -> Operator:
    """Unitary exp(-i * h * t) of a Hermitian generator.

    Uses the spectral decomposition of ``h``, which keeps the result unitary
    to roundoff without any series/Pade step-size tuning.
    """
    if not h.is_hermitian():
        raise ValueError("herm_expm requires a Hermitian generator")
    evals, vecs = np.linalg.eigh(h.data)
    phases = np.exp(-1j * evals * t)
    u = (vecs * phases) @ vecs.conj().T
    return Operator(u, h.dims)


def thermal_state(h_unit: Operator, beta: float) -> Operator:
    """Gibbs state exp(-beta * h) / Z of a Hermitian Hamiltonian.

    ``beta = inf`` returns the normalized projector onto the ground space
    (a uniform mixture if the ground energy is degenerate).  Weights are
    computed relative to the ground energy so large beta cannot overflow.
    """
    if not h_unit.is_hermitian():
        raise ValueError("thermal_state requires a Hermitian Hamiltonian")
    if beta < 0:
        raise ValueError(f"beta must be >= 0 or inf, got {beta}")
    evals, vecs = np.linalg.eigh(h_unit.data)
    if np.isinf(beta):
        ground = np.abs(evals - evals[0]) <= 1e-12 * max(1.0, abs(evals[0]))
        weights = ground.astype(float)
    else:
        weights = np.exp(-beta * (evals - evals[0]))
    weights /= weights.sum()
    rho = (vecs * weights) @ vecs.conj().T
    return Operator(rho, h_unit.dims)


def expectation(op: Operator, rho: Operator) -> complex:
    """tr(op @ rho); real to roundoff when both arguments are Hermitian."""
    if op.dims != rho.dims:
        raise ValueError(f"dimension mismatch: {op.dims} vs {rho.dims}")
    return complex(np.einsum("ij,ji->", op.data, rho.data))


def validate_density_matrix(
    rho: Operator,
    herm_tol: float = DM_HERMITICITY_TOL,
    trace_tol: float = DM_TRACE_TOL,
    eig_floor: float = DM_EIGENVALUE_FLOOR,
) -> None:
    """Raise unless ``rho`` is Hermitian, unit trace and positive within tolerance."""
    herm_defect = np.max(np.abs(rho.data - rho.data.conj().T))
    if herm_defect > herm_tol:
        raise ValueError(f"density matrix not Hermitian: defect {herm_defect:.3e}")
    tr = rho.trace()
    if abs(tr - 1.0) > trace_tol:
        raise ValueError(f"density matrix trace {tr} differs from 1")
    evals = np.linalg.eigvalsh(rho.data)
    if evals[0] < eig_floor:
        raise ValueError(f"density matrix has negative eigenvalue {evals[0]:.3e}")


def trace_norm(op: Operator) -> float:
    """Sum of singular values; for Hermitian input, the sum of |eigenvalues|."""
    if op.is_hermitian(tol=1e-8):
        return float(np.sum(np.abs(np.linalg.eigvalsh(op.data))))
    return float(np.sum(np.linalg.svd(op.data, compute_uv=False)))
