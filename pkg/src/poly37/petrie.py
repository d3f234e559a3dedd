"""Petrie polygons on combinatorial triangle surfaces.

A Petrie walk crosses one edge per step, alternating the pivot side so
that every two consecutive crossed edges share a face but no three do.
On the closed 56-triangle quotient every walk closes after eight steps;
that closure is what the quotient identification is selected by.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .surface import TriangleSurface

__all__ = [
    "Turn",
    "PetrieState",
    "BoundaryExitError",
    "petrie_step",
    "exit_edge",
    "reversed_state",
    "petrie_period",
    "petrie_polyline",
    "petrie_chord_lengths",
    "all_states",
    "orbit_partition",
]


class Turn(enum.Enum):
    LEFT = "left"
    RIGHT = "right"

    def flipped(self) -> "Turn":
        return Turn.RIGHT if self is Turn.LEFT else Turn.LEFT


class BoundaryExitError(RuntimeError):
    """The walk tried to cross a boundary edge of a truncated surface."""


@dataclass(frozen=True)
class PetrieState:
    """Position of a Petrie walk: the face just entered, the directed
    edge (as wound in that face) it was entered through, and the side
    of the next pivot."""

    face: int
    entry: tuple[int, int]
    turn: Turn


def _as_surface(s) -> TriangleSurface:
    # QuotientSurface and FundamentalPiece both expose .surface.
    return s if isinstance(s, TriangleSurface) else s.surface


def _third_vertex(tri, u: int, v: int) -> int:
    for x in tri:
        if x != u and x != v:
            return int(x)
    raise ValueError("degenerate triangle")


def petrie_step(s, state: PetrieState) -> PetrieState:
    """Advance the walk by one edge crossing.

    Inside the current face the exit edge is the one sharing the
    pivot-side vertex of the entry edge; the walk then moves to the
    neighbor across it, with the turn flipped.  Raises
    BoundaryExitError if the exit edge has no neighbor.
    """
    surf = _as_surface(s)
    u, v = state.entry
    tri = surf.triangles[state.face]
    if u not in tri or v not in tri:
        raise ValueError(f"entry edge {state.entry} is not in face {state.face}")
    out = exit_edge(s, state)
    neighbor = surf.edge_map().get((out[1], out[0]))
    if neighbor is None:
        raise BoundaryExitError(
            f"Petrie path leaves the truncated surface across edge {out}")
    return PetrieState(neighbor, (out[1], out[0]), state.turn.flipped())


def exit_edge(s, state: PetrieState) -> tuple[int, int]:
    """The directed edge (within the current face) the walk will cross
    next."""
    surf = _as_surface(s)
    u, v = state.entry
    w = _third_vertex(surf.triangles[state.face], u, v)
    return (v, w) if state.turn is Turn.RIGHT else (w, u)


def reversed_state(s, state: PetrieState) -> PetrieState:
    """The same walk traversed in the opposite direction: entry becomes
    the edge about to be crossed, and the pivot side flips."""
    return PetrieState(state.face, exit_edge(s, state), state.turn.flipped())


def petrie_period(s, start: PetrieState, max_steps: int) -> int | None:
    """Smallest n <= max_steps with petrie_step^n(start) == start, else
    None ("exceeded").  Boundary exits propagate."""
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    state = start
    for n in range(1, max_steps + 1):
        state = petrie_step(s, state)
        if state == start:
            return n
    return None


def _midpoint_provider(s):
    if hasattr(s, "edge_midpoint"):
        return s.edge_midpoint
    surf = _as_surface(s)

    def midpoint(face: int, u: int, v: int) -> np.ndarray:
        return 0.5 * (surf.vertices[u] + surf.vertices[v])

    return midpoint


def petrie_polyline(s, start: PetrieState, max_steps: int = 64) -> np.ndarray:
    """Midpoints of the successively crossed edges, shape (n, 3).

    For a closed walk of period n this is the closed polyline of its n
    edge midpoints (the first midpoint is not repeated at the end).
    Each midpoint is evaluated in the geometry of the face just entered;
    on the closed quotient, whose identified vertices carry two ambient
    positions, the polyline therefore jumps sheets where the walk
    crosses an identified square.
    """
    midpoint = _midpoint_provider(s)
    state = start
    midpoints = []
    for _ in range(max_steps):
        midpoints.append(midpoint(state.face, *state.entry))
        state = petrie_step(s, state)
        if state == start:
            return np.array(midpoints)
    return np.array(midpoints)


def petrie_chord_lengths(s, start: PetrieState, max_steps: int = 64) -> np.ndarray:
    """Length of the walk's chord inside each visited triangle: entry
    midpoint to exit midpoint, both in that face's own geometry.  Each
    chord joins midpoints of two sides of an equilateral triangle, so
    on this construction every value is sqrt(2)/2."""
    midpoint = _midpoint_provider(s)
    state = start
    lengths = []
    for _ in range(max_steps):
        a = midpoint(state.face, *state.entry)
        b = midpoint(state.face, *exit_edge(s, state))
        lengths.append(float(np.linalg.norm(b - a)))
        state = petrie_step(s, state)
        if state == start:
            break
    return np.array(lengths)


def all_states(s) -> list[PetrieState]:
    """Every Petrie start state: each face, entered through each of its
    three directed edges, with either turn (6 F states in total)."""
    surf = _as_surface(s)
    states = []
    for f in range(surf.n_triangles):
        for edge in surf.directed_edges(f):
            for turn in (Turn.LEFT, Turn.RIGHT):
                states.append(PetrieState(f, edge, turn))
    return states


def orbit_partition(s, max_steps: int = 64) -> list[list[PetrieState]]:
    """Partition all start states into Petrie orbits (closed walks)."""
    remaining = dict.fromkeys(all_states(s))
    orbits = []
    while remaining:
        start = next(iter(remaining))
        orbit = [start]
        del remaining[start]
        state = petrie_step(s, start)
        steps = 1
        while state != start:
            if steps > max_steps:
                raise RuntimeError(f"orbit of {start} exceeds {max_steps} steps")
            orbit.append(state)
            del remaining[state]
            state = petrie_step(s, state)
            steps += 1
        orbits.append(orbit)
    return orbits
