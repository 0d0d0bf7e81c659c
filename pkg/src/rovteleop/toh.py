"""Tower-of-Hanoi rules, state enumeration, and shortest-solution search.

A puzzle state is a tuple of three pole stacks; each stack lists disc
sizes bottom to top (size 1 is the smallest disc). Every reachable state
keeps each stack strictly decreasing bottom to top, which is why n discs
give exactly 3**n states.
"""

from __future__ import annotations

from collections import deque

TohState = tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]

POLES = (0, 1, 2)


def initial_state(n_discs: int, pole: int = 0) -> TohState:
    """All discs stacked on one pole, largest at the bottom."""
    if n_discs < 1:
        raise ValueError("n_discs must be >= 1")
    if pole not in POLES:
        raise ValueError(f"pole index {pole} out of range")
    stacks = [(), (), ()]
    stacks[pole] = tuple(range(n_discs, 0, -1))
    return tuple(stacks)  # type: ignore[return-value]


def legal_move(state: TohState, from_pole: int, to_pole: int) -> bool:
    """True iff the top disc of ``from_pole`` may be placed on ``to_pole``.

    Moving requires a nonempty source, and the destination must be empty
    or topped by a larger disc.
    """
    if from_pole not in POLES or to_pole not in POLES:
        raise IndexError(f"pole index out of range: {from_pole} -> {to_pole}")
    src = state[from_pole]
    if not src:
        return False
    dst = state[to_pole]
    return not dst or dst[-1] > src[-1]


def apply_move(state: TohState, from_pole: int, to_pole: int) -> TohState:
    """Execute a legal move; raises ValueError for an illegal one."""
    if not legal_move(state, from_pole, to_pole):
        raise ValueError(f"illegal move {from_pole} -> {to_pole} in {state}")
    stacks = [list(s) for s in state]
    stacks[to_pole].append(stacks[from_pole].pop())
    return tuple(tuple(s) for s in stacks)  # type: ignore[return-value]


def is_stack_legal(stack: tuple[int, ...]) -> bool:
    return all(stack[i] > stack[i + 1] for i in range(len(stack) - 1))


def enumerate_states(n_discs: int) -> list[TohState]:
    """All 3**n reachable states: each disc independently picks a pole."""
    states = [((), (), ())]
    # Place discs largest-first so every stack comes out strictly decreasing.
    for size in range(n_discs, 0, -1):
        nxt = []
        for st in states:
            for pole in POLES:
                stacks = [list(s) for s in st]
                stacks[pole].append(size)
                nxt.append(tuple(tuple(s) for s in stacks))
        states = nxt
    return states  # type: ignore[return-value]


def min_moves(n_discs: int) -> int:
    """Minimum number of moves to relocate an n-disc tower: 2**n - 1."""
    if n_discs < 1:
        raise ValueError("n_discs must be >= 1")
    return 2**n_discs - 1


def bfs_solution(start: TohState, goal: TohState) -> list[tuple[int, int]]:
    """Shortest move sequence from ``start`` to ``goal`` by breadth-first search."""
    if start == goal:
        return []
    seen = {start: None}
    queue = deque([start])
    while queue:
        state = queue.popleft()
        for frm in POLES:
            for to in POLES:
                if frm == to or not legal_move(state, frm, to):
                    continue
                nxt = apply_move(state, frm, to)
                if nxt in seen:
                    continue
                seen[nxt] = (state, (frm, to))
                if nxt == goal:
                    moves = []
                    cur = nxt
                    while seen[cur] is not None:
                        prev, mv = seen[cur]
                        moves.append(mv)
                        cur = prev
                    moves.reverse()
                    return moves
                queue.append(nxt)
    raise ValueError("goal unreachable")  # cannot happen on a connected puzzle graph
