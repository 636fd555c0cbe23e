"""Machine definitions: transition tables, completion, well-formedness.

A two-way machine is described by one unitary matrix per tape symbol plus a
head function assigning each state a move in {-1, 0, +1}.  The transition
amplitude from (q, sigma) to (q', d) is the matrix entry <q'|V_sigma|q> when
the head function sends q' in direction d, and zero otherwise.

Tables taken from the literature are usually partial: they pin down the
columns that carry the interesting dynamics and leave the rest open.
``complete_partial_table`` fills the open columns deterministically so that
every per-symbol matrix becomes unitary, and ``validate`` checks the three
well-formedness conditions numerically.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import TableCompletionError

LEFT_MARKER = "#"
RIGHT_MARKER = "$"

#: numerical tolerance used by the well-formedness validator
DEFAULT_TOLERANCE = 1e-9

_DIRECTIONS = (-1, 0, 1)


@dataclass(eq=False)
class TwoWayQfaSpec:
    """A complete two-way machine over a finite input alphabet.

    states are ordered; the order fixes matrix indexing, file layout and
    every deterministic tie-break in the package.  symbol_unitaries is keyed
    by tape symbol (input alphabet plus the two end markers).
    """

    states: tuple[str, ...]
    input_alphabet: tuple[str, ...]
    initial_state: str
    accept_states: frozenset[str]
    reject_states: frozenset[str]
    symbol_unitaries: dict[str, np.ndarray]
    head_fn: dict[str, int]
    name: str = ""
    n_paths: int = 1
    padded_entries: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        if not self.states:
            raise ValueError("state list is empty")
        if len(set(self.states)) != len(self.states):
            raise ValueError("duplicate state names")
        if len(set(self.input_alphabet)) != len(self.input_alphabet):
            raise ValueError("duplicate input symbols")
        for marker in (LEFT_MARKER, RIGHT_MARKER):
            if marker in self.input_alphabet:
                raise ValueError(f"input alphabet may not contain the marker {marker!r}")
        if self.initial_state not in self.states:
            raise ValueError(f"initial state {self.initial_state!r} not a state")
        state_set = set(self.states)
        if not self.accept_states <= state_set or not self.reject_states <= state_set:
            raise ValueError("accept/reject states must be states")
        if self.accept_states & self.reject_states:
            raise ValueError("accept and reject states overlap")
        if set(self.head_fn) != state_set:
            raise ValueError("head function must be total over the states")
        for state, move in self.head_fn.items():
            if move not in _DIRECTIONS:
                raise ValueError(f"head move for {state!r} must be -1, 0 or +1")
        if set(self.symbol_unitaries) != set(self.tape_alphabet):
            raise ValueError("one matrix per tape symbol is required")
        n = len(self.states)
        for symbol, matrix in self.symbol_unitaries.items():
            if matrix.shape != (n, n):
                raise ValueError(f"matrix for {symbol!r} is not {n}x{n}")
            if matrix.dtype != np.complex128:
                self.symbol_unitaries[symbol] = matrix.astype(np.complex128)
        if self.n_paths < 1:
            raise ValueError("n_paths must be at least 1")
        self._state_index = {state: i for i, state in enumerate(self.states)}
        moves = np.array([self.head_fn[s] for s in self.states])
        self._rows_for_move = {d: np.flatnonzero(moves == d) for d in _DIRECTIONS}
        self._accept_rows = np.array(
            [i for i, s in enumerate(self.states) if s in self.accept_states], dtype=int
        )
        self._reject_rows = np.array(
            [i for i, s in enumerate(self.states) if s in self.reject_states], dtype=int
        )
        self._halting_rows = np.concatenate([self._accept_rows, self._reject_rows])

    @property
    def tape_alphabet(self) -> tuple[str, ...]:
        return (LEFT_MARKER,) + tuple(self.input_alphabet) + (RIGHT_MARKER,)

    def state_index(self, state: str) -> int:
        return self._state_index[state]

    def __eq__(self, other) -> bool:
        if not isinstance(other, TwoWayQfaSpec):
            return NotImplemented
        return (
            self.states == other.states
            and self.input_alphabet == other.input_alphabet
            and self.initial_state == other.initial_state
            and self.accept_states == other.accept_states
            and self.reject_states == other.reject_states
            and self.head_fn == other.head_fn
            and self.name == other.name
            and self.n_paths == other.n_paths
            and self.padded_entries == other.padded_entries
            and all(
                np.array_equal(self.symbol_unitaries[s], other.symbol_unitaries[s])
                for s in self.tape_alphabet
            )
        )


def amplitude_of(
    spec: TwoWayQfaSpec, source: str, symbol: str, target: str, direction: int
) -> complex:
    """Transition amplitude from (source, symbol) to (target, direction)."""
    if spec.head_fn[target] != direction:
        return 0j
    matrix = spec.symbol_unitaries[symbol]
    return complex(matrix[spec.state_index(target), spec.state_index(source)])


@dataclass(frozen=True)
class WellFormednessReport:
    """Outcome of the numerical well-formedness checks.

    Each *_max_deviation is the largest absolute violation observed; the
    matching flag compares it against the tolerance the validator ran with.
    """

    unitarity_ok: bool
    unitarity_max_deviation: float
    local_probability_ok: bool
    local_probability_max_deviation: float
    separability1_ok: bool
    separability1_max_deviation: float
    separability2_ok: bool
    separability2_max_deviation: float
    tolerance: float
    padded_entries: tuple[tuple[str, str], ...]

    @property
    def all_ok(self) -> bool:
        return (
            self.unitarity_ok
            and self.local_probability_ok
            and self.separability1_ok
            and self.separability2_ok
        )


def _masked(spec: TwoWayQfaSpec, symbol: str, direction: int) -> np.ndarray:
    """Matrix of amplitudes into states the head function moves by `direction`."""
    matrix = spec.symbol_unitaries[symbol]
    out = np.zeros_like(matrix)
    rows = spec._rows_for_move[direction]
    out[rows, :] = matrix[rows, :]
    return out


def validate(spec: TwoWayQfaSpec, tolerance: float = DEFAULT_TOLERANCE) -> WellFormednessReport:
    """Check per-symbol unitarity and the three local well-formedness conditions.

    Never raises on a badly formed machine; all violations are reported as
    numbers.  The separability conditions are evaluated from the same masked
    matrices that amplitude_of reads, not assumed to vanish.
    """
    n = len(spec.states)
    identity = np.eye(n)

    unitarity_dev = 0.0
    for symbol in spec.tape_alphabet:
        matrix = spec.symbol_unitaries[symbol]
        dev = np.abs(matrix.conj().T @ matrix - identity).max()
        unitarity_dev = max(unitarity_dev, float(dev))

    # condition (i): summing conj(delta(q1,s,q',d)) * delta(q2,s,q',d) over
    # all (q', d) must give the identity on (q1, q2) for every symbol
    local_dev = 0.0
    for symbol in spec.tape_alphabet:
        gram = np.zeros((n, n), dtype=np.complex128)
        for d in _DIRECTIONS:
            masked = _masked(spec, symbol, d)
            gram += masked.conj().T @ masked
        local_dev = max(local_dev, float(np.abs(gram - identity).max()))

    # conditions (ii) and (iii) quantify over ordered pairs of (state, symbol)
    sep1_dev = 0.0
    sep2_dev = 0.0
    fwd = {s: _masked(spec, s, 1) for s in spec.tape_alphabet}
    stay = {s: _masked(spec, s, 0) for s in spec.tape_alphabet}
    back = {s: _masked(spec, s, -1) for s in spec.tape_alphabet}
    for s1 in spec.tape_alphabet:
        for s2 in spec.tape_alphabet:
            cross1 = fwd[s1].conj().T @ stay[s2] + stay[s1].conj().T @ back[s2]
            cross2 = fwd[s1].conj().T @ back[s2]
            sep1_dev = max(sep1_dev, float(np.abs(cross1).max()))
            sep2_dev = max(sep2_dev, float(np.abs(cross2).max()))

    return WellFormednessReport(
        unitarity_ok=unitarity_dev < tolerance,
        unitarity_max_deviation=unitarity_dev,
        local_probability_ok=local_dev < tolerance,
        local_probability_max_deviation=local_dev,
        separability1_ok=sep1_dev < tolerance,
        separability1_max_deviation=sep1_dev,
        separability2_ok=sep2_dev < tolerance,
        separability2_max_deviation=sep2_dev,
        tolerance=tolerance,
        padded_entries=spec.padded_entries,
    )


@dataclass
class PartialTable:
    """A possibly incomplete transition table.

    rows holds (source state, tape symbol, target state, amplitude)
    quadruples; several rows may share (source, symbol) to describe a
    superposition column.  States not mentioned under some symbol are left
    for completion.
    """

    states: tuple[str, ...]
    input_alphabet: tuple[str, ...]
    initial_state: str
    accept_states: frozenset[str]
    reject_states: frozenset[str]
    head_fn: dict[str, int]
    rows: list[tuple[str, str, str, complex]] = field(default_factory=list)
    name: str = ""
    n_paths: int = 1

    @property
    def tape_alphabet(self) -> tuple[str, ...]:
        return (LEFT_MARKER,) + tuple(self.input_alphabet) + (RIGHT_MARKER,)


def _specified_columns(table: PartialTable, symbol: str) -> dict[str, np.ndarray]:
    """Collect the column vector each source state is given under `symbol`."""
    index = {state: i for i, state in enumerate(table.states)}
    n = len(table.states)
    columns: dict[str, np.ndarray] = {}
    seen: set[tuple[str, str]] = set()
    for source, sym, target, amplitude in table.rows:
        if sym != symbol:
            continue
        if source not in index or target not in index:
            raise TableCompletionError(f"row references unknown state: {source!r} -> {target!r}")
        key = (source, target)
        if key in seen:
            raise TableCompletionError(
                f"conflicting rows for source {source!r}, target {target!r} under {symbol!r}"
            )
        seen.add(key)
        column = columns.setdefault(source, np.zeros(n, dtype=np.complex128))
        column[index[target]] = complex(amplitude)
    return columns


def _is_basis_column(column: np.ndarray) -> bool:
    nonzero = np.flatnonzero(column)
    return nonzero.size == 1 and column[nonzero[0]] == 1.0


def complete_partial_table(table: PartialTable) -> TwoWayQfaSpec:
    """Extend a partial table to a full machine with unitary matrices.

    The specified columns of each symbol must already be pairwise
    orthonormal; otherwise no unitary extension exists and a
    TableCompletionError names the symbol and an offending column pair.

    When every specified column is a unit basis vector the completion is a
    permutation: unspecified non-halting sources are first routed to unused
    rejecting targets, then everything left pairs up in state order.  For
    symbols holding genuine superposition columns the open columns receive
    an orthonormal basis of the complement of the specified span.
    """
    index = {state: i for i, state in enumerate(table.states)}
    n = len(table.states)
    halting = table.accept_states | table.reject_states
    matrices: dict[str, np.ndarray] = {}
    padded: list[tuple[str, str]] = []

    for symbol in table.tape_alphabet:
        columns = _specified_columns(table, symbol)
        specified_sources = [s for s in table.states if s in columns]
        if specified_sources:
            block = np.stack([columns[s] for s in specified_sources], axis=1)
            gram = block.conj().T @ block
            deviation = np.abs(gram - np.eye(len(specified_sources)))
            worst = np.unravel_index(np.argmax(deviation), deviation.shape)
            if deviation[worst] >= DEFAULT_TOLERANCE:
                a, b = specified_sources[worst[0]], specified_sources[worst[1]]
                raise TableCompletionError(
                    f"columns for source states {a!r} and {b!r} under symbol "
                    f"{symbol!r} are not orthonormal"
                )

        matrix = np.zeros((n, n), dtype=np.complex128)
        for source in specified_sources:
            matrix[:, index[source]] = columns[source]
        unspecified = [s for s in table.states if s not in columns]

        if all(_is_basis_column(columns[s]) for s in specified_sources):
            used = {int(np.flatnonzero(columns[s])[0]) for s in specified_sources}
            unused = [s for s in table.states if index[s] not in used]
            free_reject = [s for s in unused if s in table.reject_states]
            assignment: dict[str, str] = {}
            for source in unspecified:
                if source not in halting and free_reject:
                    assignment[source] = free_reject.pop(0)
            remaining = [s for s in unused if s not in assignment.values()]
            leftovers = [s for s in unspecified if s not in assignment]
            for source, target in zip(leftovers, remaining):
                assignment[source] = target
            for source, target in assignment.items():
                matrix[index[target], index[source]] = 1.0
        elif unspecified:
            block = np.stack([columns[s] for s in specified_sources], axis=1)
            u, _, _ = np.linalg.svd(block, full_matrices=True)
            complement = u[:, len(specified_sources):]
            for k, source in enumerate(unspecified):
                matrix[:, index[source]] = complement[:, k]

        padded.extend((symbol, s) for s in unspecified)
        deviation = float(np.abs(matrix.conj().T @ matrix - np.eye(n)).max())
        if deviation >= 1e-12:
            raise TableCompletionError(
                f"completion for symbol {symbol!r} failed unitarity ({deviation:.3e})"
            )
        matrices[symbol] = matrix

    return TwoWayQfaSpec(
        states=table.states,
        input_alphabet=tuple(table.input_alphabet),
        initial_state=table.initial_state,
        accept_states=frozenset(table.accept_states),
        reject_states=frozenset(table.reject_states),
        symbol_unitaries=matrices,
        head_fn=dict(table.head_fn),
        name=table.name,
        n_paths=table.n_paths,
        padded_entries=tuple(padded),
    )
