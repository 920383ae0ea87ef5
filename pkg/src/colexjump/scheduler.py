"""Constant-depth stack scheduling by two rounds of parallel swaps.

Positions are 1-indexed with position 1 the top of the stack. Each position
carries an integer label: the step at which its qubit must next be on top.
After the top qubit is used, its label becomes its next use (or a fresh
value beyond the last step if it is never needed again), and two rounds of
parallel compare-swaps run:

  round 1: positions (1,2), (3,4), ...   swap when left label > right label
  round 2: positions (2,3), (4,5), ...   swap when left label > right label

Labels at even positions stay below everything deeper after the two rounds,
which keeps the next needed qubit no deeper than two positions per step, so
it reaches the top exactly on time. The verifier replays a schedule from
scratch and checks that invariant chain at every step.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class StackState:
    step: int  # the step about to be performed (1-based)
    labels: np.ndarray  # labels[i]: step at which position i+1's qubit is next needed
    qubit_ids: np.ndarray

    @classmethod
    def initial(cls, order, labels) -> "StackState":
        return cls(1, np.array(labels, dtype=np.int64), np.array(order, dtype=np.int64))

    def copy(self) -> "StackState":
        return StackState(self.step, self.labels.copy(), self.qubit_ids.copy())


@dataclass
class SwapSchedule:
    stack_size: int
    access_sequence: list[int]
    initial_order: list[int]
    initial_labels: list[int]
    steps: list[tuple[tuple[tuple[int, int], ...], tuple[tuple[int, int], ...]]] = field(
        default_factory=list
    )

    @property
    def total_steps(self) -> int:
        return len(self.steps)


class ScheduleError(ValueError):
    pass


def _placeholders(stack_qubits, total_steps) -> dict[int, int]:
    """One distinct beyond-the-end label per stack qubit, fixed by sort order."""
    return {q: total_steps + 1 + i for i, q in enumerate(sorted(stack_qubits))}


def _next_use_of_top(access_sequence, stack_qubits):
    """next_use[s-1]: when the qubit used at step s is needed again (the
    step index, or its placeholder once it is never used again)."""
    total = len(access_sequence)
    placeholder = _placeholders(stack_qubits, total)
    out = [0] * total
    upcoming = dict(placeholder)
    for s in range(total, 0, -1):
        q = access_sequence[s - 1]
        out[s - 1] = upcoming[q]
        upcoming[q] = s
    return out


def init_labels(access_sequence, stack_qubits=None) -> StackState:
    """Order qubits by first use; unused qubits go to the bottom.

    Labels start strictly increasing with the top label equal to 1.
    """
    if not access_sequence:
        raise ScheduleError("access sequence must be non-empty")
    seq_qubits = []
    seen = set()
    for q in access_sequence:
        if q not in seen:
            seen.add(q)
            seq_qubits.append(q)
    if stack_qubits is None:
        stack_qubits = sorted(seen)
    missing = seen - set(stack_qubits)
    if missing:
        raise ScheduleError(f"sequence uses qubits not on the stack: {sorted(missing)}")
    total = len(access_sequence)
    first_use = {}
    for s, q in enumerate(access_sequence, start=1):
        first_use.setdefault(q, s)
    never_used = [q for q in stack_qubits if q not in first_use]
    placeholder = _placeholders(stack_qubits, total)
    order = sorted(first_use, key=first_use.get)
    labels = [first_use[q] for q in order]
    for q in sorted(never_used):
        order.append(q)
        labels.append(placeholder[q])
    return StackState.initial(order, labels)


_PAIR_INDEX_CACHE: dict = {}


def _pair_indices(n: int, start: int) -> np.ndarray:
    key = (n, start)
    if key not in _PAIR_INDEX_CACHE:
        _PAIR_INDEX_CACHE[key] = np.arange(start, n - 1, 2)
    return _PAIR_INDEX_CACHE[key]


def _one_round(labels: np.ndarray, qubits: np.ndarray, start: int):
    """One in-place parallel compare-swap round; returns the swap list.

    start 0: pairs (1,2),(3,4),...; start 1: pairs (2,3),(4,5),...
    """
    left = _pair_indices(labels.size, start)
    hits = left[labels[left] > labels[left + 1]]
    if hits.size:
        tmp = labels[hits].copy()
        labels[hits] = labels[hits + 1]
        labels[hits + 1] = tmp
        tmp = qubits[hits].copy()
        qubits[hits] = qubits[hits + 1]
        qubits[hits + 1] = tmp
    return tuple((int(i) + 1, int(i) + 2) for i in hits)


def _two_rounds(labels: np.ndarray, qubits: np.ndarray):
    """Both in-place rounds; returns (round1 swaps, round2 swaps)."""
    return (_one_round(labels, qubits, 0), _one_round(labels, qubits, 1))


def advance(state: StackState, next_use_of_top: int):
    """Relabel the top, run the two swap rounds, move to the next step.

    Returns (new state, (round1 swaps, round2 swaps)) with swaps as 1-based
    position pairs.
    """
    labels = state.labels.copy()
    qubits = state.qubit_ids.copy()
    if next_use_of_top <= state.step:
        raise ScheduleError("next use of the top qubit must lie in the future")
    if next_use_of_top in labels[1:]:
        raise ScheduleError(f"label collision on {next_use_of_top}")
    labels[0] = next_use_of_top
    rounds = _two_rounds(labels, qubits)
    return StackState(state.step + 1, labels, qubits), rounds


def schedule(access_sequence, stack_qubits=None, internal_slots: int = 2) -> SwapSchedule:
    """Full swap schedule: per step, the pair of parallel swap rounds.

    The processing unit is opaque; it only needs at least two internal
    slots so two-qubit gates are possible.
    """
    if internal_slots < 2:
        raise ScheduleError("at least two internal slots are required")
    state = init_labels(access_sequence, stack_qubits)
    total = len(access_sequence)
    nxt = _next_use_of_top(access_sequence, state.qubit_ids.tolist())
    sched = SwapSchedule(
        stack_size=len(state.qubit_ids),
        access_sequence=list(access_sequence),
        initial_order=state.qubit_ids.tolist(),
        initial_labels=state.labels.tolist(),
    )
    labels = state.labels.copy()
    qubits = state.qubit_ids.copy()
    for s in range(1, total + 1):
        if qubits[0] != access_sequence[s - 1]:
            raise ScheduleError(
                f"step {s}: qubit {access_sequence[s-1]} is not on top "
                f"(found {qubits[0]})"
            )
        labels[0] = nxt[s - 1]
        sched.steps.append(_two_rounds(labels, qubits))
    return sched


@dataclass
class VerifyResult:
    ok: bool
    violation: str | None = None
    step: int | None = None

    def __bool__(self) -> bool:
        return self.ok


def _sorted_tail_invariant(labels, even: bool) -> bool:
    """even: labels[2n] < labels[2n+k] for all n>=1, k>0 (1-based);
    odd: labels[2n+1] < labels[2n+1+k] for n>=0."""
    # positions are 1-based; arrays 0-based
    suffix_min = np.minimum.accumulate(labels[::-1])[::-1]
    start = 1 if even else 0  # index of first even (odd) position
    lhs = labels[start:-1:2]
    rhs = suffix_min[start + 1 :: 2]
    return bool((lhs < rhs).all())


def verify(sched: SwapSchedule, access_sequence=None) -> VerifyResult:
    """Replay a schedule from scratch, checking every invariant.

    Checks per step: the required qubit sits on top with its label equal to
    the step number and minimal over the stack; recorded swaps are disjoint
    within each round; the even-position ordering holds after round 2 and
    the odd-position ordering after round 1; labels stay distinct.
    """
    if access_sequence is None:
        access_sequence = sched.access_sequence
    if list(access_sequence) != list(sched.access_sequence):
        return VerifyResult(False, "access sequence mismatch", None)
    labels = np.array(sched.initial_labels, dtype=np.int64)
    qubits = np.array(sched.initial_order, dtype=np.int64)
    total = len(access_sequence)
    nxt = _next_use_of_top(access_sequence, qubits.tolist())
    if len(sched.steps) != total:
        return VerifyResult(False, "schedule length mismatch", None)
    if np.unique(labels).size != labels.size:
        return VerifyResult(False, "duplicate labels", 1)
    for s in range(1, total + 1):
        if qubits[0] != access_sequence[s - 1]:
            return VerifyResult(
                False, f"qubit {access_sequence[s-1]} not at position 1", s
            )
        if labels[0] != s:
            return VerifyResult(False, f"top label {labels[0]} != step {s}", s)
        if labels.min() != labels[0]:
            return VerifyResult(False, "top label is not minimal", s)
        new_label = nxt[s - 1]
        if (labels[1:] == new_label).any():
            return VerifyResult(False, "duplicate labels", s)
        labels[0] = new_label
        # replay the canonical rounds; the recorded swaps must match exactly,
        # which subsumes the shape, disjointness, and missed-swap conditions
        # (each canonical round swaps exactly the label-decreasing disjoint
        # pairs of its parity)
        recorded = sched.steps[s - 1]
        if _one_round(labels, qubits, 0) != tuple(recorded[0]):
            return VerifyResult(False, "round 1 swaps diverge from the rule", s)
        if not _sorted_tail_invariant(labels, even=False):
            return VerifyResult(False, "odd-position ordering broken", s)
        if _one_round(labels, qubits, 1) != tuple(recorded[1]):
            return VerifyResult(False, "round 2 swaps diverge from the rule", s)
        if not _sorted_tail_invariant(labels, even=True):
            return VerifyResult(False, "even-position ordering broken", s)
    return VerifyResult(True)
