"""Simulation of two-way machines with measurement after every step.

A configuration pairs a state with a head position on the marked tape
``#w$``; positions are reduced modulo n+2, so the tape is circular.  One
step applies the per-symbol unitary at every head position and then moves
every target state by its head direction.  After each step the accepting
and rejecting components are measured off and accumulated without
renormalising the remainder.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AlphabetError
from .machine import LEFT_MARKER, RIGHT_MARKER, TwoWayQfaSpec

#: residual mass below which a run counts as halted
DEFAULT_HALT_THRESHOLD = 1e-12

#: multiplier in the default step budget 64 * n_paths * (n + 2)
MAX_STEPS_FACTOR = 64


@dataclass(frozen=True, order=True)
class Configuration:
    """A basis state of the simulation: machine state plus head position."""

    state: str
    position: int


@dataclass(frozen=True)
class RunResult:
    """Accumulated outcome of a run.

    p_residual is the probability mass still unhalted when the run stopped;
    halted is False only when the step budget ran out first.  trace, when
    requested, holds one (p_accept, p_reject, p_residual) triple per step.
    """

    p_accept: float
    p_reject: float
    p_residual: float
    steps: int
    halted: bool
    trace: tuple[tuple[float, float, float], ...] | None = None


class AmplitudeVector:
    """Complex amplitudes over the configurations of a fixed-length tape."""

    def __init__(self, spec: TwoWayQfaSpec, tape_length: int, data: np.ndarray | None = None):
        self.spec = spec
        self.tape_length = tape_length
        if data is None:
            data = np.zeros((len(spec.states), tape_length), dtype=np.complex128)
        if data.shape != (len(spec.states), tape_length):
            raise ValueError("amplitude array shape does not match the machine")
        self.data = data

    def amplitude(self, config: Configuration) -> complex:
        row = self.spec.state_index(config.state)
        return complex(self.data[row, config.position % self.tape_length])

    def entries(self) -> dict[Configuration, complex]:
        """Nonzero amplitudes keyed by configuration, in state order."""
        out: dict[Configuration, complex] = {}
        rows, cols = np.nonzero(self.data)
        for row, col in zip(rows.tolist(), cols.tolist()):
            out[Configuration(self.spec.states[row], col)] = complex(self.data[row, col])
        return out

    def norm_squared(self) -> float:
        return float((self.data.real**2 + self.data.imag**2).sum())

    def copy(self) -> "AmplitudeVector":
        return AmplitudeVector(self.spec, self.tape_length, self.data.copy())


def tape_for(word: str) -> str:
    return LEFT_MARKER + word + RIGHT_MARKER


def initial_vector(spec: TwoWayQfaSpec, word: str) -> AmplitudeVector:
    """Unit mass on (initial state, position 0) for the tape of `word`."""
    alphabet = set(spec.input_alphabet)
    for position, symbol in enumerate(word):
        if symbol not in alphabet:
            raise AlphabetError(symbol, position)
    vec = AmplitudeVector(spec, len(word) + 2)
    vec.data[spec.state_index(spec.initial_state), 0] = 1.0
    return vec


class _Evolution:
    """One-step evolution operator for a fixed machine and word."""

    def __init__(self, spec: TwoWayQfaSpec, word: str):
        tape = tape_for(word)
        length = len(tape)
        self.blocks = []
        for symbol in spec.tape_alphabet:
            mask = np.fromiter((1.0 if t == symbol else 0.0 for t in tape), dtype=float)
            if mask.any():
                self.blocks.append((spec.symbol_unitaries[symbol], mask[np.newaxis, :]))
        moves = np.array([spec.head_fn[s] for s in spec.states])
        self.stay = (moves == 0)[:, np.newaxis]
        self.fwd = (moves == 1)[:, np.newaxis]
        self.back = (moves == -1)[:, np.newaxis]

    def apply(self, data: np.ndarray) -> np.ndarray:
        mixed = np.zeros_like(data)
        for matrix, mask in self.blocks:
            mixed += (matrix @ data) * mask
        out = np.where(self.stay, mixed, 0)
        # a roll by +1 sends column j to column j+1 mod tape length
        out += np.roll(np.where(self.fwd, mixed, 0), 1, axis=1)
        out += np.roll(np.where(self.back, mixed, 0), -1, axis=1)
        return out


def step(spec: TwoWayQfaSpec, word: str, vector: AmplitudeVector) -> AmplitudeVector:
    """Apply one evolution step of `spec` on the tape of `word`."""
    if vector.tape_length != len(word) + 2:
        raise ValueError("vector tape length does not match the word")
    evolution = _Evolution(spec, word)
    return AmplitudeVector(spec, vector.tape_length, evolution.apply(vector.data))


def _mass(data: np.ndarray, rows: np.ndarray) -> float:
    if rows.size == 0:
        return 0.0
    block = data[rows]
    return float((block.real**2 + block.imag**2).sum())


def measure(
    spec: TwoWayQfaSpec, vector: AmplitudeVector
) -> tuple[float, float, AmplitudeVector]:
    """Project out the halting components.

    Returns the accept gain, the reject gain and the residual vector with
    halting amplitudes zeroed.  The residual is not renormalised.
    """
    gain_accept = _mass(vector.data, spec._accept_rows)
    gain_reject = _mass(vector.data, spec._reject_rows)
    residual = vector.copy()
    if spec._halting_rows.size:
        residual.data[spec._halting_rows] = 0
    return gain_accept, gain_reject, residual


def run(
    spec: TwoWayQfaSpec,
    word: str,
    *,
    max_steps: int | None = None,
    halt_threshold: float = DEFAULT_HALT_THRESHOLD,
    trace: bool = False,
) -> RunResult:
    """Alternate step and measurement until the residual mass is spent.

    Stops once the residual drops below halt_threshold or, failing that,
    after max_steps (default 64 * n_paths * (n + 2)); exhausting the budget
    is reported via halted=False, not raised.
    """
    if max_steps is None:
        max_steps = MAX_STEPS_FACTOR * spec.n_paths * (len(word) + 2)
    if max_steps < 1:
        raise ValueError("max_steps must be at least 1")
    if not 0 < halt_threshold < 1:
        raise ValueError("halt_threshold must lie strictly between 0 and 1")
    vector = initial_vector(spec, word)
    evolution = _Evolution(spec, word)
    data = vector.data
    accept_rows = spec._accept_rows
    reject_rows = spec._reject_rows
    halting_rows = spec._halting_rows

    p_accept = 0.0
    p_reject = 0.0
    residual_mass = 1.0
    steps = 0
    halted = False
    records: list[tuple[float, float, float]] = []

    for _ in range(max_steps):
        data = evolution.apply(data)
        steps += 1
        p_accept += _mass(data, accept_rows)
        p_reject += _mass(data, reject_rows)
        if halting_rows.size:
            data[halting_rows] = 0
        residual_mass = float((data.real**2 + data.imag**2).sum())
        if trace:
            records.append((p_accept, p_reject, residual_mass))
        if residual_mass < halt_threshold:
            halted = True
            break

    return RunResult(
        p_accept=p_accept,
        p_reject=p_reject,
        p_residual=residual_mass,
        steps=steps,
        halted=halted,
        trace=tuple(records) if trace else None,
    )
