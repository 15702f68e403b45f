"""Error propagation for the Deutsch circuit with noisy Hadamard gates.

The three Hadamards (H1 on the first line, H2 on the second, H3 the final
one on the first line) may err; the oracle is error-free throughout.

Two gate semantics are modelled:

* ``unitary``: the gate emits the coherent superposition of its correct
  and erroneous results.  Errors travel as amplitudes and interfere, which
  is what produces the counter-intuitive closed forms below (e.g. two
  maximally unreliable gates in a row give a perfectly correct circuit).
* ``projection``: the gate resolves its error internally -- an
  irreversible read of its input -- and emits one definite result per run
  with the gate's own weights.  Errors travel as classical branch
  probabilities, so there is no interference between them.

Three error models:

* ``coherent_flip``: the gate misreads its input.  Unitary semantics
  applies the operator ``amp*H + err*H@X`` coherently; projection
  semantics branches into the intended output ``H|in>`` (weight amp^2) and
  the output for the misread input -- the orthogonal state ``H|in_perp>``
  (weight err^2).
* ``incoherent_flip``: a classical mixture of the same two actions with
  weights (amp^2, err^2).  The two semantics provably coincide here; this
  model is the precise reading under which "unitary and projection gates
  give the same final result" for flips holds, and it is an
  interpretation layered on top of the coherent amplitudes.
* ``phase``: the erroneous action multiplies the |1> component of the
  gate's output by exp(i*phi) instead of flipping.  Under projection
  semantics a line that has just been read out occupies a single output
  mode, so a relative-phase kick degenerates to a global phase and cancels
  -- the distribution is independent of phi.  Under unitary semantics the
  phase rides the coherent components into the next gate and shifts the
  interference.

All distributions are exact (branch enumeration, no sampling) except in
:func:`mc_run`, which samples the same branch structure from a seeded
counter-based stream.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np

from .gates import HADAMARD, PAULI_X, OracleFunction
from .linalg import ComplexVector, identity, kron
from .pev import NULL_BRANCH_EPS, NullBranchError
from .rng import make_stream

_PAIR_TOL = 1e-12


class GateSemantics(str, enum.Enum):
    UNITARY = "unitary"
    PROJECTION = "projection"


ModelKind = Literal["coherent_flip", "incoherent_flip", "phase"]


@dataclass(frozen=True)
class ErrorModel:
    """Which erroneous action the noisy gates perform."""

    kind: ModelKind
    phase_angle: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in ("coherent_flip", "incoherent_flip", "phase"):
            raise ValueError(f"unknown error model {self.kind!r}")
        if not 0.0 <= self.phase_angle < 2.0 * math.pi:
            raise ValueError("phase angle must lie in [0, 2*pi)")

    @classmethod
    def coherent(cls) -> "ErrorModel":
        return cls(kind="coherent_flip")

    @classmethod
    def incoherent(cls) -> "ErrorModel":
        return cls(kind="incoherent_flip")

    @classmethod
    def phase(cls, phi: float) -> "ErrorModel":
        return cls(kind="phase", phase_angle=phi)


@dataclass(frozen=True)
class NoiseParams:
    """Correct/erroneous amplitudes per gate: (alpha, beta) for H1,
    (mu, kappa) for H3, (gamma, delta) for H2.

    H2 defaults to noiseless because the closed forms below track only the
    first line; the simulator honours gamma and delta fully.
    """

    alpha: float
    beta: float
    mu: float
    kappa: float
    gamma: float = 1.0
    delta: float = 0.0

    def __post_init__(self) -> None:
        for name, amp, err in (
            ("H1", self.alpha, self.beta),
            ("H2", self.gamma, self.delta),
            ("H3", self.mu, self.kappa),
        ):
            if not (0.0 <= amp <= 1.0 and 0.0 <= err <= 1.0):
                raise ValueError(f"{name} amplitudes must lie in [0, 1]")
            if abs(amp * amp + err * err - 1.0) > _PAIR_TOL:
                raise ValueError(f"{name} amplitudes must satisfy amp^2 + err^2 = 1")

    @classmethod
    def identical_gates(cls, alpha2: float) -> "NoiseParams":
        """Both first-line gates with success probability alpha2; H2 perfect."""
        if not 0.0 <= alpha2 <= 1.0:
            raise ValueError(f"alpha2 must lie in [0, 1], got {alpha2}")
        amp = math.sqrt(alpha2)
        err = math.sqrt(1.0 - alpha2)
        return cls(alpha=amp, beta=err, mu=amp, kappa=err)

    @classmethod
    def noiseless(cls) -> "NoiseParams":
        return cls.identical_gates(1.0)


@dataclass(frozen=True)
class SweepRow:
    """One grid point of the error curves: probabilities, the single-gate
    error 1 - alpha^2, and their ratio (absent where the error vanishes)."""

    alpha2: float
    prob0: float
    prob1: float
    single_gate_err: float
    ratio: Optional[float]


@dataclass(frozen=True)
class McResult:
    empirical: dict[int, float]
    exact: dict[int, float]
    std_error: float
    trials: int
    seed: int

    def within(self, k_sigma: float = 4.0) -> bool:
        return abs(self.empirical[1] - self.exact[1]) <= k_sigma * self.std_error


def _phase_matrix(phi: float) -> np.ndarray:
    return np.diag([1.0, np.exp(1j * phi)]).astype(np.complex128)


def _noisy_gate(amp: float, err: float, model: ErrorModel) -> np.ndarray:
    """Coherent noisy-Hadamard operator for the unitary semantics."""
    if model.kind == "phase":
        return amp * HADAMARD + err * (_phase_matrix(model.phase_angle) @ HADAMARD)
    return amp * HADAMARD + err * (HADAMARD @ PAULI_X)


def state_tau2(params: NoiseParams) -> ComplexVector:
    """Register state after both noisy input Hadamards (oracle not yet applied)."""
    g1 = _noisy_gate(params.alpha, params.beta, ErrorModel.coherent())
    g2 = _noisy_gate(params.gamma, params.delta, ErrorModel.coherent())
    e0 = np.array([1.0, 0.0], dtype=np.complex128)
    e1 = np.array([0.0, 1.0], dtype=np.complex128)
    return np.kron(g1 @ e0, g2 @ e1)


def final_amplitudes_unitary(params: NoiseParams) -> tuple[float, float]:
    """Closed-form first-line amplitudes (c0, c1) before the final measurement.

    c0 = N alpha (mu + kappa) and c1 = N beta (mu - kappa), where
    N = [1 + 2 mu kappa (alpha^2 - beta^2)]^(-1/2).  The normaliser is
    evaluated as the algebraically identical sum of squares
    alpha^2 (mu+kappa)^2 + beta^2 (mu-kappa)^2, which avoids cancellation
    near the boundary where the whole branch dies (alpha = 0, mu = kappa).
    """
    c0 = params.alpha * (params.mu + params.kappa)
    c1 = params.beta * (params.mu - params.kappa)
    norm2 = c0 * c0 + c1 * c1
    if norm2 <= NULL_BRANCH_EPS:
        raise NullBranchError("first-line state has zero norm for these amplitudes")
    n = 1.0 / math.sqrt(norm2)
    return n * c0, n * c1


def prob_correct(alpha2: float) -> float:
    """Probability of the correct final result with two identical noisy gates.

    Equals alpha^2 (alpha + sqrt(1-alpha^2))^2 / D with
    D = 1 + 2 alpha sqrt(1-alpha^2) (2 alpha^2 - 1); evaluated through the
    cancellation-free normaliser of :func:`final_amplitudes_unitary`.
    """
    c0, _ = _identical_gate_amplitudes(alpha2)
    return c0 * c0


def prob_incorrect(alpha2: float) -> float:
    """Complement of :func:`prob_correct`: (alpha^2-1)(2 alpha sqrt(1-alpha^2)-1)/D."""
    _, c1 = _identical_gate_amplitudes(alpha2)
    return c1 * c1


def _identical_gate_amplitudes(alpha2: float) -> tuple[float, float]:
    if not 0.0 <= alpha2 <= 1.0:
        raise ValueError(f"alpha2 must lie in [0, 1], got {alpha2}")
    return final_amplitudes_unitary(NoiseParams.identical_gates(alpha2))


def _lift(op: np.ndarray, line: int) -> np.ndarray:
    return kron(op, identity(2)) if line == 0 else kron(identity(2), op)


def _oracle_matrix(f: OracleFunction) -> np.ndarray:
    u = np.zeros((4, 4), dtype=np.complex128)
    for x in (0, 1):
        proj = np.zeros((2, 2), dtype=np.complex128)
        proj[x, x] = 1.0
        action = PAULI_X if f.value(x) == 1 else identity(2)
        u += np.kron(proj, action)
    return u


def _perp(state: np.ndarray) -> np.ndarray:
    """The state orthogonal to a qubit state (unique up to phase)."""
    return np.array([-np.conj(state[1]), np.conj(state[0])], dtype=np.complex128)


def _x_eigenvalue(state: np.ndarray) -> int:
    flipped = PAULI_X @ state
    if float(np.max(np.abs(flipped - state))) <= 1e-9:
        return 1
    if float(np.max(np.abs(flipped + state))) <= 1e-9:
        return -1
    raise AssertionError("second line left the flip eigenbasis; branch bookkeeping broken")


def _branch_outcomes(
    f: OracleFunction,
    params: NoiseParams,
    semantics: GateSemantics,
    model: ErrorModel,
) -> list[tuple[float, float]]:
    """Enumerate (weight, P(outcome 1)) over the circuit's classical branches.

    Unitary semantics has a single branch (everything before the final
    measurement is deterministic); projection semantics branches at every
    noisy gate.
    """
    if semantics == GateSemantics.UNITARY:
        return [(1.0, _unitary_p1(f, params, model))]
    if model.kind == "coherent_flip":
        return _projection_branches_coherent(f, params)
    return _projection_branches_linear(f, params, model)


def _unitary_p1(f: OracleFunction, params: NoiseParams, model: ErrorModel) -> float:
    psi0 = np.zeros(4, dtype=np.complex128)
    psi0[1] = 1.0  # |0>|1>
    if model.kind == "incoherent_flip":
        rho = np.outer(psi0, psi0.conj())
        for line, amp, err in (
            (0, params.alpha, params.beta),
            (1, params.gamma, params.delta),
        ):
            rho = _flip_mixture(rho, line, amp, err)
        u = _oracle_matrix(f)
        rho = u @ rho @ u.conj().T
        rho = _flip_mixture(rho, 0, params.mu, params.kappa)
        return float(np.real(rho[2, 2] + rho[3, 3]))

    g1 = _noisy_gate(params.alpha, params.beta, model)
    g2 = _noisy_gate(params.gamma, params.delta, model)
    g3 = _noisy_gate(params.mu, params.kappa, model)
    psi = kron(g1, g2) @ psi0
    psi = _renormalise(psi)
    psi = _oracle_matrix(f) @ psi
    psi = _renormalise(_lift(g3, 0) @ psi)
    return float(np.abs(psi[2]) ** 2 + np.abs(psi[3]) ** 2)


def _flip_mixture(rho: np.ndarray, line: int, amp: float, err: float) -> np.ndarray:
    """Classical mixture of the correct and input-flipped gate actions."""
    correct = _lift(HADAMARD, line)
    flipped = _lift(HADAMARD @ PAULI_X, line)
    return (
        amp * amp * (correct @ rho @ correct.conj().T)
        + err * err * (flipped @ rho @ flipped.conj().T)
    )


def _renormalise(psi: np.ndarray) -> np.ndarray:
    norm2 = float(np.real(np.vdot(psi, psi)))
    if norm2 <= NULL_BRANCH_EPS:
        raise NullBranchError("coherent chain reached a zero-norm state")
    return psi / math.sqrt(norm2)


def _projection_branches_coherent(
    f: OracleFunction, params: NoiseParams
) -> list[tuple[float, float]]:
    """Per-line branch walk for projection gates under the misread model.

    Every gate receives a definite input here, so its two possible outputs
    are H|in> and the orthogonal H|in_perp>; the gate's own weights
    (amp^2, err^2) pick between them.  The second line stays in the flip
    eigenbasis, so the oracle acts as a per-component sign on the first.
    """
    e0 = np.array([1.0, 0.0], dtype=np.complex128)
    e1 = np.array([0.0, 1.0], dtype=np.complex128)
    branches: list[tuple[float, np.ndarray, np.ndarray]] = [(1.0, e0, e1)]

    def apply_gate(
        items: list[tuple[float, np.ndarray, np.ndarray]], line: int, amp: float, err: float
    ) -> list[tuple[float, np.ndarray, np.ndarray]]:
        out = []
        for w, s1, s2 in items:
            target = s1 if line == 0 else s2
            for weight, emitted in ((amp * amp, HADAMARD @ target), (err * err, HADAMARD @ _perp(target))):
                if weight == 0.0:
                    continue
                if line == 0:
                    out.append((w * weight, emitted, s2))
                else:
                    out.append((w * weight, s1, emitted))
        return out

    branches = apply_gate(branches, 0, params.alpha, params.beta)
    branches = apply_gate(branches, 1, params.gamma, params.delta)

    kicked = []
    for w, s1, s2 in branches:
        sign = _x_eigenvalue(s2)
        phases = np.array([sign ** f.value(0), sign ** f.value(1)], dtype=np.complex128)
        kicked.append((w, phases * s1, s2))
    branches = apply_gate(kicked, 0, params.mu, params.kappa)

    return [(w, float(np.abs(s1[1]) ** 2)) for w, s1, _ in branches]


def _projection_branches_linear(
    f: OracleFunction, params: NoiseParams, model: ErrorModel
) -> list[tuple[float, float]]:
    """Branch walk for the linear erroneous actions (incoherent flip, phase).

    Each branch carries the full two-qubit state so oracle-induced
    entanglement is handled; the erroneous action is a fixed operator, so
    no per-line bookkeeping is needed.
    """
    if model.kind == "incoherent_flip":
        err_op = HADAMARD @ PAULI_X
    else:
        err_op = _phase_matrix(model.phase_angle) @ HADAMARD

    psi0 = np.zeros(4, dtype=np.complex128)
    psi0[1] = 1.0
    branches: list[tuple[float, np.ndarray]] = [(1.0, psi0)]

    def apply_gate(
        items: list[tuple[float, np.ndarray]], line: int, amp: float, err: float
    ) -> list[tuple[float, np.ndarray]]:
        out = []
        for w, psi in items:
            for weight, op in ((amp * amp, HADAMARD), (err * err, err_op)):
                if weight == 0.0:
                    continue
                out.append((w * weight, _lift(op, line) @ psi))
        return out

    branches = apply_gate(branches, 0, params.alpha, params.beta)
    branches = apply_gate(branches, 1, params.gamma, params.delta)
    u = _oracle_matrix(f)
    branches = [(w, u @ psi) for w, psi in branches]
    branches = apply_gate(branches, 0, params.mu, params.kappa)

    return [(w, float(np.abs(psi[2]) ** 2 + np.abs(psi[3]) ** 2)) for w, psi in branches]


def simulate_noisy(
    f: OracleFunction,
    params: NoiseParams,
    semantics: GateSemantics,
    model: ErrorModel,
) -> dict[int, float]:
    """Exact outcome distribution of the noisy circuit (no sampling)."""
    branches = _branch_outcomes(f, params, semantics, model)
    total = sum(w for w, _ in branches)
    if total <= NULL_BRANCH_EPS:
        raise NullBranchError("all branches of the noisy circuit are null")
    p1 = sum(w * p for w, p in branches) / total
    return {0: 1.0 - p1, 1: p1}


def mc_run(
    f: OracleFunction,
    params: NoiseParams,
    semantics: GateSemantics,
    model: ErrorModel,
    trials: int,
    seed: int,
) -> McResult:
    """Sample the branch structure per trial and report empirical frequencies.

    Each trial draws the projection branches (if any) and then the final
    measurement from one seeded stream, so identical seeds reproduce
    identical frequencies.  The reported standard error is
    sqrt(p (1-p) / trials) at the exact p.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    branches = _branch_outcomes(f, params, semantics, model)
    weights = np.array([w for w, _ in branches])
    weights = weights / weights.sum()
    p1_by_branch = np.array([p for _, p in branches])

    gen = make_stream(seed)
    if len(branches) == 1:
        chosen_p1 = np.full(trials, p1_by_branch[0])
    else:
        cuts = np.cumsum(weights)
        idx = np.searchsorted(cuts, gen.random(trials), side="right")
        idx = np.minimum(idx, len(branches) - 1)
        chosen_p1 = p1_by_branch[idx]
    ones = gen.random(trials) < chosen_p1

    freq1 = float(np.count_nonzero(ones)) / trials
    exact = simulate_noisy(f, params, semantics, model)
    sigma = math.sqrt(max(exact[1] * (1.0 - exact[1]), 0.0) / trials)
    return McResult(
        empirical={0: 1.0 - freq1, 1: freq1},
        exact=exact,
        std_error=sigma,
        trials=trials,
        seed=seed,
    )


def sweep(alpha2_from: float, alpha2_to: float, steps: int) -> list[SweepRow]:
    """Evaluate the identical-gates closed forms on an even grid.

    The ratio prob1 / (1 - alpha^2) is omitted where the single-gate error
    is below 1e-12 (0/0 at the noiseless end).
    """
    if not (0.0 <= alpha2_from < alpha2_to <= 1.0):
        raise ValueError(f"need 0 <= from < to <= 1, got [{alpha2_from}, {alpha2_to}]")
    if steps < 2:
        raise ValueError(f"need at least 2 grid points, got {steps}")
    rows = []
    for a2 in np.linspace(alpha2_from, alpha2_to, steps):
        a2 = float(a2)
        p0 = prob_correct(a2)
        p1 = prob_incorrect(a2)
        err = 1.0 - a2
        ratio = p1 / err if err >= 1e-12 else None
        rows.append(SweepRow(alpha2=a2, prob0=p0, prob1=p1, single_gate_err=err, ratio=ratio))
    return rows


def phase_error_experiment(phi: float, semantics: GateSemantics) -> dict[int, float]:
    """Single-line experiment: H1, a deterministic phase error, H3, measure.

    Unitary semantics transports the error coherently: the |1> component
    of the line picks up exp(i*phi) and the final interference shifts.
    Projection semantics reads the line out right after H1, leaving it in
    a single output mode; the same phase kick is then an overall phase and
    has no observable effect, so the distribution is constant in phi.
    """
    if not 0.0 <= phi < 2.0 * math.pi:
        raise ValueError("phi must lie in [0, 2*pi)")
    e0 = np.array([1.0, 0.0], dtype=np.complex128)
    psi = HADAMARD @ e0
    if semantics == GateSemantics.UNITARY:
        psi = _phase_matrix(phi) @ psi
    else:
        # The line is a definite post-measurement mode; the phase error
        # multiplies that single mode and drops out of the density matrix.
        psi = np.exp(1j * phi) * psi
    psi = HADAMARD @ psi
    psi = _renormalise(psi)
    return {0: float(np.abs(psi[0]) ** 2), 1: float(np.abs(psi[1]) ** 2)}
