"""Time series of target states and derived observables.

Shared by the discrete collision dynamics and the continuous master-equation
integrator, so the two layers can be compared on a common footing.
Observables are recorded at every step; full density matrices can be
decimated (keep every k-th, plus always the final state) to bound memory on
long runs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import Operator
from .model import BlochState, bloch_vector, l1_coherence, purity


@dataclass
class Trajectory:
    times: np.ndarray                      # shape (n,), uniform spacing
    states: list[Operator]                 # decimated snapshots, final always kept
    state_indices: np.ndarray              # step index of each stored state
    coherence: np.ndarray                  # l1 coherence per step
    purities: np.ndarray                   # tr(rho^2) per step
    bloch: np.ndarray | None = None        # (n, 3) for qubit targets
    amplitude: np.ndarray | None = None    # <a> per step for oscillator targets

    @property
    def final_state(self) -> Operator:
        return self.states[-1]

    @property
    def dt(self) -> float:
        if len(self.times) < 2:
            return 0.0
        return float(self.times[1] - self.times[0])

    def bloch_states(self) -> list[BlochState]:
        if self.bloch is None:
            raise ValueError("trajectory has no Bloch record (non-qubit target)")
        return [BlochState(*row) for row in self.bloch]


class TrajectoryRecorder:
    """Accumulates per-step observables and decimated state snapshots."""

    def __init__(self, dt: float, n_steps: int, dim: int, decimate: int = 1):
        if decimate < 1:
            raise ValueError(f"decimate must be >= 1, got {decimate}")
        self.dt = dt
        self.decimate = decimate
        self.is_qubit = dim == 2
        self._lower_diag = np.arange(1, dim)  # for <a> on oscillator targets
        self.times = np.empty(n_steps + 1)
        self.coherence = np.empty(n_steps + 1)
        self.purities = np.empty(n_steps + 1)
        self.bloch = np.empty((n_steps + 1, 3)) if self.is_qubit else None
        self.amplitude = None if self.is_qubit else np.empty(n_steps + 1, dtype=complex)
        self.states: list[Operator] = []
        self.state_indices: list[int] = []
        self._k = 0

    def record(self, rho: Operator) -> None:
        k = self._k
        data = rho.data
        self.times[k] = k * self.dt
        self.coherence[k] = l1_coherence(rho)
        self.purities[k] = purity(rho)
        if self.is_qubit:
            b = bloch_vector(rho)
            self.bloch[k] = (b.x, b.y, b.z)
        else:
            ns = self._lower_diag
            self.amplitude[k] = np.sum(np.sqrt(ns) * data[ns - 1, ns].conj()).conjugate()
        if k % self.decimate == 0:
            self.states.append(rho)
            self.state_indices.append(k)
        self._k += 1

    def finish(self, rho_final: Operator) -> Trajectory:
        n = self._k
        if not self.state_indices or self.state_indices[-1] != n - 1:
            self.states.append(rho_final)
            self.state_indices.append(n - 1)
        return Trajectory(
            times=self.times[:n].copy(),
            states=self.states,
            state_indices=np.asarray(self.state_indices),
            coherence=self.coherence[:n].copy(),
            purities=self.purities[:n].copy(),
            bloch=None if self.bloch is None else self.bloch[:n].copy(),
            amplitude=None if self.amplitude is None else self.amplitude[:n].copy(),
        )
