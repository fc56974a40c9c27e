"""Microscopic dilation of the extremal thermal operation.

The ETO population map is recovered from an energy-preserving unitary on
qubit (x) single bosonic mode: prepare the mode in its thermal state, apply
the excitation-swap unitary

    |g,0> -> |g,0>,   |g,n> <-> |e,n-1>   (n = 1 .. n_max),

trace out the mode, and read the induced map on qubit populations.  The
swap is generated exactly by the intensity-dependent Jaynes-Cummings
coupling ``J (sigma+ E- + sigma- E+)`` with number-normalized ladder
operators (every two-dimensional excitation sector completes half a Rabi
period simultaneously at ``J t = pi/2``), and approximately by the standard
Jaynes-Cummings coupling ``J (sigma+ a + sigma- a+)`` whose sector Rabi
frequencies ``J sqrt(n)`` desynchronize on multi-photon states.

Basis ordering is ``|s, n>`` with the qubit index outer (g block then e
block) and the boson number inner.  The mode is resonant with the qubit
gap, so the free Hamiltonian is constant on every coupled sector and the
evolution is computed in the interaction picture; at the truncation
boundary ``|e, n_max>`` has no partner state and is left invariant, which
keeps the operators exactly unitary at the cost of a map error bounded by
the thermal tail weight.  All couplings conserve excitation number, so the
dynamics splits into 2x2 blocks and the exact exponential is assembled
blockwise (a dense-exponential cross-check lives in the test suite).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConsistencyError, InvalidParameterError, TruncationError
from .maps import eto

INTENSITY_DEPENDENT = "intensity_dependent"
STANDARD = "standard"
JC_KINDS = (INTENSITY_DEPENDENT, STANDARD)

_STATE_TOL = 1e-10


@dataclass(frozen=True)
class FockTruncation:
    """Truncated single-mode description: keep boson numbers 0 .. n_max."""

    n_max: int
    omega: float  # mode quantum, resonant with the qubit gap
    beta: float
    tail_bound: float = 1e-10

    def __post_init__(self):
        if not isinstance(self.n_max, (int, np.integer)) or self.n_max < 0:
            raise InvalidParameterError(f"n_max must be a nonnegative integer, got {self.n_max}")
        if self.omega <= 0.0 or self.beta <= 0.0:
            raise InvalidParameterError("omega and beta must be > 0")
        if self.tail_weight > self.tail_bound:
            raise TruncationError(
                f"thermal tail weight {self.tail_weight:.3e} beyond n_max={self.n_max} "
                f"exceeds the configured bound {self.tail_bound:.3e}"
            )

    @property
    def tail_weight(self) -> float:
        """Probability mass of the untruncated thermal state above n_max."""
        return math.exp(-self.beta * self.omega * (self.n_max + 1))

    @property
    def n_levels(self) -> int:
        return self.n_max + 1

    @property
    def dim(self) -> int:
        return 2 * self.n_levels

    def index(self, qubit: int, n: int) -> int:
        return qubit * self.n_levels + n


def boson_thermal_state(tr: FockTruncation) -> np.ndarray:
    """Diagonal weights of the truncated thermal mode state (renormalized)."""
    n = np.arange(tr.n_levels)
    weights = np.exp(-tr.beta * tr.omega * n)
    return weights / weights.sum()


@dataclass(frozen=True, eq=False)
class JointState:
    """Density matrix on the qubit (x) truncated-mode product space."""

    rho: np.ndarray
    n_max: int

    def validate(self):
        if self.rho.shape != (2 * (self.n_max + 1),) * 2:
            raise ConsistencyError(f"joint state has wrong shape {self.rho.shape}")
        if np.abs(self.rho - self.rho.conj().T).max() > _STATE_TOL:
            raise ConsistencyError("joint state is not Hermitian")
        trace = np.trace(self.rho).real
        if abs(trace - 1.0) > _STATE_TOL:
            raise ConsistencyError(f"joint state trace {trace} differs from 1")
        smallest = np.linalg.eigvalsh(self.rho).min()
        if smallest < -_STATE_TOL:
            raise ConsistencyError(f"joint state has negative eigenvalue {smallest:.3e}")


@dataclass(frozen=True, eq=False)
class InducedMap:
    """Qubit population map extracted from a joint unitary evolution.

    ``column_defect`` records how far the columns fall short of summing to
    one; for the operators built here it is bounded by the truncation tail.
    """

    m: np.ndarray
    column_defect: float


def swap_unitary(tr: FockTruncation) -> np.ndarray:
    """Excitation-swap permutation on the truncated product space.

    An involution commuting with the free Hamiltonian: it permutes states
    within degenerate total-excitation sectors; the unpartnered boundary
    vector ``|e, n_max>`` is held fixed.
    """
    u = np.zeros((tr.dim, tr.dim))
    u[tr.index(0, 0), tr.index(0, 0)] = 1.0
    u[tr.index(1, tr.n_max), tr.index(1, tr.n_max)] = 1.0
    for n in range(1, tr.n_levels):
        u[tr.index(1, n - 1), tr.index(0, n)] = 1.0
        u[tr.index(0, n), tr.index(1, n - 1)] = 1.0
    return u


def induced_population_map(u: np.ndarray, tr: FockTruncation) -> InducedMap:
    """Induced qubit population map of ``rho -> Tr_mode[U rho (x) thermal U+]``.

    Columns are obtained by feeding the qubit basis states through the
    dilation and reading the diagonal of the reduced qubit state.
    """
    u = np.asarray(u)
    if u.shape != (tr.dim, tr.dim):
        raise InvalidParameterError(f"unitary has wrong shape {u.shape}")
    weights = boson_thermal_state(tr)
    m = np.empty((2, 2))
    for src in (0, 1):
        joint = np.zeros((tr.dim, tr.dim), dtype=complex)
        block = slice(src * tr.n_levels, (src + 1) * tr.n_levels)
        joint[block, block] = np.diag(weights)
        evolved = u @ joint @ u.conj().T
        JointState(evolved, tr.n_max).validate()
        diag = np.diag(evolved).real
        m[0, src] = diag[: tr.n_levels].sum()
        m[1, src] = diag[tr.n_levels :].sum()
    defect = float(np.abs(m.sum(axis=0) - 1.0).max())
    return InducedMap(m, defect)


def _sector_coupling(n: int, J: float, kind: str) -> float:
    # sector n couples |g,n> with |e,n-1>
    if kind == INTENSITY_DEPENDENT:
        return J
    return J * math.sqrt(n)


def jc_unitary(J: float, t: float, tr: FockTruncation, kind: str) -> np.ndarray:
    """Exact interaction-picture propagator of the resonant JC coupling.

    Assembled from the 2x2 excitation sectors: each pair
    (|g,n>, |e,n-1>) rotates with Rabi angle ``g_n t`` where ``g_n = J``
    for the intensity-dependent coupling and ``J sqrt(n)`` for the standard
    one; ``|g,0>`` and the boundary vector ``|e,n_max>`` are uncoupled.
    """
    if kind not in JC_KINDS:
        raise InvalidParameterError(f"kind must be one of {JC_KINDS}, got {kind!r}")
    if t < 0.0:
        raise InvalidParameterError(f"time must be >= 0, got {t}")
    u = np.eye(tr.dim, dtype=complex)
    for n in range(1, tr.n_levels):
        theta = _sector_coupling(n, J, kind) * t
        i, j = tr.index(0, n), tr.index(1, n - 1)
        c, s = math.cos(theta), math.sin(theta)
        u[i, i] = c
        u[j, j] = c
        u[i, j] = -1j * s
        u[j, i] = -1j * s
    return u


def jc_evolution_map(J: float, t: float, tr: FockTruncation, kind: str) -> InducedMap:
    """Qubit population map induced by the JC evolution for time ``t``."""
    return induced_population_map(jc_unitary(J, t, tr, kind), tr)


def eto_deviation(induced: InducedMap, tr: FockTruncation) -> float:
    """Max-entry deviation of an induced map from the exact ETO at the
    truncation's (omega, beta)."""
    return float(np.abs(induced.m - eto(tr.omega, tr.beta).m).max())


def eto_approximation_report(
    J: float, tr: FockTruncation, t_grid: Sequence[float], kinds: Sequence[str] = JC_KINDS
) -> dict[str, np.ndarray]:
    """Deviation from the ETO along a time grid, per coupling kind.

    Returns, for each kind, rows ``(J*t, max-entry deviation)`` sorted by
    ``J*t``.
    """
    times = np.asarray(list(t_grid), dtype=float)
    if times.size == 0:
        raise InvalidParameterError("time grid must be nonempty")
    times = np.sort(times)
    report = {}
    for kind in kinds:
        rows = np.empty((times.size, 2))
        for i, t in enumerate(times):
            rows[i] = (J * t, eto_deviation(jc_evolution_map(J, t, tr, kind), tr))
        report[kind] = rows
    return report
