"""The generic peeling decoder: balls thrown into boxes over several
independent throws, with per-box value accumulators.  A box holding exactly
one remaining ball reveals that ball's value; removing it may privatize
further boxes, and the process iterates to a fixpoint.

Two front ends share the machinery:

* :func:`play_known_support` -- the ball-to-box assignment is known up
  front (one accumulator channel per throw).
* :func:`play_discovery` -- boxes are anonymous; an ``identify`` callback
  inspects a (primary, secondary) accumulator pair and either names the
  ball it holds or declines.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple


@dataclass
class ThrowAssignment:
    """box_counts[i] boxes for throw i; boxes[i][j] is ball j's box in throw i."""

    box_counts: List[int]
    boxes: List[List[int]]

    def __post_init__(self):
        if len(self.box_counts) != len(self.boxes):
            raise ValueError("one box list per throw required")
        for r_i, bx in zip(self.box_counts, self.boxes):
            for b in bx:
                if not 0 <= b < r_i:
                    raise ValueError(f"box index {b} out of range [0, {r_i})")

    @property
    def num_throws(self) -> int:
        return len(self.box_counts)

    @property
    def num_balls(self) -> int:
        return len(self.boxes[0]) if self.boxes else 0


@dataclass
class GameStats:
    """Bookkeeping counters; inspections stays O(balls + boxes)."""

    rounds: int = 0
    inspections: int = 0
    removed_per_round: List[int] = field(default_factory=list)


_ROUND_MARK = (-1, -1)


def play_known_support(
    assignment: ThrowAssignment,
    channels: Sequence[Sequence[int]],
    stats: Optional[GameStats] = None,
    trace: Optional[list] = None,
) -> Tuple[List[Optional[int]], set]:
    """Peel balls with a known assignment; returns (values, leftover).

    ``channels[i][b]`` is the accumulator of box b in throw i: the sum of
    the values of the balls currently inside.  values[j] is ball j's
    recovered value, or None if it was never privatized; leftover is the
    set of unrecovered ball indices.
    """
    nt = assignment.num_throws
    t = assignment.num_balls
    acc = [list(ch) for ch in channels]
    for i in range(nt):
        if len(acc[i]) != assignment.box_counts[i]:
            raise ValueError("channel length must match the throw's box count")

    occ = [[0] * r_i for r_i in assignment.box_counts]
    members: List[List[List[int]]] = [
        [[] for _ in range(r_i)] for r_i in assignment.box_counts
    ]
    for i in range(nt):
        bx = assignment.boxes[i]
        for j in range(t):
            b = bx[j]
            occ[i][b] += 1
            members[i][b].append(j)

    alive = [True] * t
    values: List[Optional[int]] = [None] * t
    queue: List[Tuple[int, int]] = [_ROUND_MARK]
    for i in range(nt):
        for b, k in enumerate(occ[i]):
            if k == 1:
                queue.append((i, b))
    queue.append(_ROUND_MARK)

    head = 0
    rounds = 0
    removed_this_round = 0
    remaining = t
    inspections = 0
    while head < len(queue):
        i, b = queue[head]
        head += 1
        if (i, b) == _ROUND_MARK:
            if head == 1:
                rounds = 1
                continue
            if trace is not None and rounds >= 1:
                trace.append((rounds, removed_this_round, remaining))
            if removed_this_round == 0 or remaining == 0:
                break
            rounds += 1
            removed_this_round = 0
            queue.append(_ROUND_MARK)
            continue
        inspections += 1
        if occ[i][b] != 1:
            continue  # occupancy changed since enqueue
        # locate the single alive resident (lazy deletion)
        lst = members[i][b]
        while lst and not alive[lst[-1]]:
            lst.pop()
            inspections += 1
        if not lst:
            continue
        j = lst[-1]
        v = acc[i][b]
        values[j] = v
        alive[j] = False
        remaining -= 1
        removed_this_round += 1
        for i2 in range(nt):
            b2 = assignment.boxes[i2][j]
            acc[i2][b2] -= v
            occ[i2][b2] -= 1
            if occ[i2][b2] == 1:
                queue.append((i2, b2))
    if stats is not None:
        stats.rounds = rounds
        stats.inspections = inspections
    leftover = {j for j in range(t) if alive[j]}
    return values, leftover


IdentifyFn = Callable[[int, int, int, int], Optional[Tuple[object, int, int]]]
SlotsFn = Callable[[object], List[int]]


def play_discovery(
    channels: Sequence[Tuple[Sequence[int], Sequence[int]]],
    identify: IdentifyFn,
    slots_for: SlotsFn,
    reduce: Optional[Callable[[int], int]] = None,
) -> Tuple[List[Tuple[object, int]], set]:
    """Peel anonymous boxes; returns (recovered (key, value) terms, unresolved).

    ``channels[i]`` is the (primary, secondary) accumulator pair of throw i.
    ``identify(i, slot, c, c2)`` either returns (key, c, c2) naming the
    single ball whose contribution to throw i's slot is c (primary) and c2
    (secondary), or None.  ``slots_for(key)`` maps a key to its slot in
    every throw; an identification whose recomputed slot disagrees with the
    inspected slot is treated as a non-identification.
    """
    if reduce is None:
        reduce = lambda x: x
    prim = [list(p) for p, _ in channels]
    sec = [list(s) for _, s in channels]
    nt = len(channels)

    queue: List[Tuple[int, int]] = []
    queued = set()
    for i in range(nt):
        for e, c in enumerate(prim[i]):
            if c != 0:
                queue.append((i, e))
                queued.add((i, e))

    recovered: List[Tuple[object, int]] = []
    head = 0
    while head < len(queue):
        i, e = queue[head]
        head += 1
        queued.discard((i, e))
        c = prim[i][e]
        if c == 0:
            continue
        res = identify(i, e, c, sec[i][e])
        if res is None:
            continue
        key, v, v2 = res
        slots = slots_for(key)
        if slots[i] != e:
            continue
        recovered.append((key, v))
        for i2 in range(nt):
            s2 = slots[i2]
            prim[i2][s2] = reduce(prim[i2][s2] - v)
            sec[i2][s2] = reduce(sec[i2][s2] - v2)
            if prim[i2][s2] != 0 and (i2, s2) not in queued:
                queue.append((i2, s2))
                queued.add((i2, s2))
    unresolved = {
        (i, e) for i in range(nt) for e, c in enumerate(prim[i]) if c != 0
    }
    return recovered, unresolved


def trace_to_csv(trace: Sequence[Tuple[int, int, int]]) -> str:
    lines = ["round,removed,remaining"]
    for row in trace:
        lines.append(f"{row[0]},{row[1]},{row[2]}")
    return "\n".join(lines) + "\n"
