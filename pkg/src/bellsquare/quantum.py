"""Exact dense simulation of the four-qubit source and its observables.

The source emits two Bell pairs: qubits 1 and 2 form one pair, qubits 3 and 4
the other.  Qubits 1 and 3 travel to Alice, qubits 2 and 4 to Bob.  Each
detector observable is a signed tensor product of two single-qubit Paulis
acting on that party's pair of qubits, embedded into the full 16-dimensional
space.

Index convention (fixed here, used everywhere):

    flat index = b1*8 + b2*4 + b3*2 + b4

i.e. qubit 1 is the most significant bit of a state-vector index.  |0> and |1>
are the sigma_z eigenstates with eigenvalues +1 and -1.

Measurement outcomes are exact integers +1/-1; amplitudes and probabilities
are floating point.  All algebraic tolerances are ATOL = 1e-12.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

# Single numeric tolerance for every algebraic identity in the package.
ATOL = 1e-12

DIM = 16  # 2**4


class DegenerateCollapseError(RuntimeError):
    """Measurement tried to collapse onto a branch of (numerically) zero weight.

    Cannot happen when the outcome is drawn from the branch probabilities; it
    signals a logic error, not bad luck.
    """


class Pauli(enum.Enum):
    """The 2x2 identity and Pauli matrices (Hermitian, unitary, square to I)."""

    I = "1"
    X = "x"
    Y = "y"
    Z = "z"

    @property
    def matrix(self) -> np.ndarray:
        return _PAULI_MATRICES[self]

    def __str__(self) -> str:
        return "1" if self is Pauli.I else f"s{self.value}"


_PAULI_MATRICES = {
    Pauli.I: np.eye(2, dtype=complex),
    Pauli.X: np.array([[0, 1], [1, 0]], dtype=complex),
    Pauli.Y: np.array([[0, -1j], [1j, 0]], dtype=complex),
    Pauli.Z: np.array([[1, 0], [0, -1]], dtype=complex),
}


class Party(enum.Enum):
    """Observer identity with its fixed qubit assignment (1-based qubit labels)."""

    ALICE = "alice"
    BOB = "bob"

    @property
    def qubits(self) -> tuple[int, int]:
        return (1, 3) if self is Party.ALICE else (2, 4)


@dataclass(frozen=True)
class Observable:
    """A signed two-qubit Pauli product assigned to one party.

    ``first`` acts on the party's first qubit (1 for Alice, 2 for Bob),
    ``second`` on the party's second qubit (3 for Alice, 4 for Bob).
    """

    first: Pauli
    second: Pauli
    party: Party
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")

    def label(self) -> str:
        prefix = "-" if self.sign < 0 else ""
        return f"{prefix}{self.first}(x){self.second}"


class StateVector:
    """Immutable normalized state of the four qubits (16 complex amplitudes)."""

    __slots__ = ("amplitudes",)

    def __init__(self, amplitudes):
        arr = np.array(amplitudes, dtype=complex).reshape(DIM)
        if not np.all(np.isfinite(arr.view(np.float64))):
            raise ValueError("amplitudes must be finite")
        norm = np.linalg.norm(arr)
        if abs(norm - 1.0) > ATOL:
            raise ValueError(f"state vector norm {norm!r} deviates from 1 by > {ATOL}")
        arr.flags.writeable = False
        object.__setattr__(self, "amplitudes", arr)

    def amplitude(self, b1: int, b2: int, b3: int, b4: int) -> complex:
        return complex(self.amplitudes[basis_index(b1, b2, b3, b4)])

    def __repr__(self) -> str:
        nonzero = np.flatnonzero(np.abs(self.amplitudes) > 1e-9)
        terms = ", ".join(f"[{i:04b}]={self.amplitudes[i]:.3g}" for i in nonzero)
        return f"StateVector({terms})"


def basis_index(b1: int, b2: int, b3: int, b4: int) -> int:
    """Flat index of the basis state |b1 b2 b3 b4>, qubit 1 most significant."""
    return b1 * 8 + b2 * 4 + b3 * 2 + b4


def source_state() -> StateVector:
    """The emitted state: a Bell pair on qubits (1,2) times a Bell pair on (3,4).

    Exactly four nonzero amplitudes, each 1/2, at the indices where b1 = b2
    and b3 = b4.
    """
    amp = np.zeros(DIM, dtype=complex)
    for u in (0, 1):
        for v in (0, 1):
            amp[basis_index(u, u, v, v)] = 0.5
    return StateVector(amp)


@lru_cache(maxsize=None)
def embed_observable(obs: Observable) -> np.ndarray:
    """16x16 Hermitian matrix of ``obs`` acting on its party's qubits.

    sign * (first on the party's first qubit) x (second on the party's second
    qubit) x identity on the other two qubits, under the fixed index
    convention.  The result is cached and read-only.
    """
    q_first, q_second = obs.party.qubits
    factors = [np.eye(2, dtype=complex)] * 4
    factors[q_first - 1] = obs.first.matrix
    factors[q_second - 1] = obs.second.matrix
    matrix = np.array([[obs.sign]], dtype=complex)
    for f in factors:
        matrix = np.kron(matrix, f)
    matrix.flags.writeable = False
    return matrix


def expectation(state: StateVector, obs: Observable) -> float:
    """Born-rule expectation <state|M|state> for the embedded matrix M."""
    psi = state.amplitudes
    value = np.vdot(psi, embed_observable(obs) @ psi)
    if abs(value.imag) > ATOL:
        raise ArithmeticError(f"expectation of a Hermitian observable came out complex: {value!r}")
    return float(value.real)


def outcome_probability(state: StateVector, obs: Observable, outcome: int) -> float:
    """Probability of ``outcome`` (+1 or -1) when measuring ``obs`` on ``state``."""
    p_plus = _plus_probability(state.amplitudes, embed_observable(obs))
    return p_plus if outcome == 1 else 1.0 - p_plus


def measure(state: StateVector, obs: Observable, rand: float) -> tuple[int, StateVector]:
    """Projective measurement of ``obs``, decided by a uniform draw in [0,1).

    Returns the eigenvalue (+1 or -1) and the collapsed, renormalized state.
    The +1 branch is selected iff ``rand`` < p(+1).  Probabilities within ATOL
    of 0 or 1 are snapped so that algebraically forced outcomes are forced
    exactly, independent of the draw.
    """
    outcome, amplitudes = measure_amplitudes(state.amplitudes, embed_observable(obs), rand)
    return outcome, StateVector(amplitudes)


def measure_amplitudes(psi: np.ndarray, matrix: np.ndarray, rand: float) -> tuple[int, np.ndarray]:
    """measure() on a bare amplitude array; hot path for batch simulation."""
    v = matrix @ psi
    p_plus = _plus_probability_from_product(psi, v)
    outcome = 1 if rand < p_plus else -1
    projected = 0.5 * (psi + outcome * v)  # (I + outcome*M)/2 |psi>
    norm = np.linalg.norm(projected)
    if norm < 1e-14:
        raise DegenerateCollapseError(
            f"collapse onto the {outcome:+d} branch has norm {norm!r}"
        )
    return outcome, projected / norm


def _plus_probability(psi: np.ndarray, matrix: np.ndarray) -> float:
    return _plus_probability_from_product(psi, matrix @ psi)


def _plus_probability_from_product(psi: np.ndarray, m_psi: np.ndarray) -> float:
    p_plus = 0.5 * (1.0 + np.vdot(psi, m_psi).real)
    if p_plus < -ATOL or p_plus > 1.0 + ATOL:
        raise ArithmeticError(f"branch probability {p_plus!r} outside [0,1] beyond tolerance")
    # Snap rounding dust so deterministic outcomes stay deterministic.
    if p_plus < ATOL:
        return 0.0
    if p_plus > 1.0 - ATOL:
        return 1.0
    return p_plus


def commutes(a: Observable, b: Observable) -> bool:
    """True iff the embedded matrices of ``a`` and ``b`` commute.

    Two Pauli products either commute or anticommute; they commute exactly
    when an even number of their single-qubit factor pairs anticommute.  The
    count is cross-checked against the explicit matrix commutator.
    """
    anti = 0
    for qubit in range(1, 5):
        pa, pb = _factor_on(a, qubit), _factor_on(b, qubit)
        if pa is not Pauli.I and pb is not Pauli.I and pa is not pb:
            anti += 1
    by_count = anti % 2 == 0
    ma, mb = embed_observable(a), embed_observable(b)
    by_matrix = bool(np.max(np.abs(ma @ mb - mb @ ma)) < ATOL)
    if by_count != by_matrix:
        raise AssertionError(f"factor-count and matrix commutator disagree for {a} vs {b}")
    return by_count


def _factor_on(obs: Observable, qubit: int) -> Pauli:
    q_first, q_second = obs.party.qubits
    if qubit == q_first:
        return obs.first
    if qubit == q_second:
        return obs.second
    return Pauli.I
