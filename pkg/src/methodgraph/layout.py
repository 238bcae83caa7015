"""Deterministic force-directed layout for method graphs.

The model is the classic spring-electrical one: every pair of nodes
repels with magnitude C/d^2, every edge pulls its endpoints toward a
rest length like a linear spring, and a weak centering force keeps the
whole drawing from drifting. Integration is damped explicit Euler with
multiplicative cooling. Everything is seeded and order-stable, so one
(graph, params) pair always produces bit-identical positions on a given
build — a property the HTTP layer and the CLI both lean on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import bhtree
from .graphcore import MethodGraph
from .schema import Acronym

__all__ = [
    "LayoutError",
    "LayoutParams",
    "LayoutState",
    "LayoutStats",
    "init_layout",
    "net_forces",
    "run",
    "run_from",
    "step",
]

_MASK64 = (1 << 64) - 1
_COINCIDENCE_CELL = 1e-9
_JITTER_MAGNITUDE = 1e-3


class LayoutError(RuntimeError):
    """A layout cannot start or continue (empty graph, non-finite state)."""


@dataclass(frozen=True)
class LayoutParams:
    """Simulation constants. The defaults converge well for graphs in the
    hundreds-of-nodes range; theta=0 switches repulsion to the exact
    O(n^2) evaluation. force_cap bounds each node's per-step net force,
    which keeps the explicit integrator stable on high-degree nodes
    without moving any equilibrium."""

    dimensions: int = 3
    repulsion: float = 900.0
    stiffness: float = 1.0
    rest_length: float = 30.0
    centering: float = 0.01
    time_step: float = 1.0
    damping: float = 0.6
    cooling: float = 0.995
    max_iterations: int = 5000
    tolerance: float = 1e-3
    seed: int = 0
    theta: float = 0.7
    force_cap: float = 1000.0

    def __post_init__(self) -> None:
        if self.dimensions not in (2, 3):
            raise ValueError("dimensions must be 2 or 3")
        if not 0.0 <= self.theta <= 1.0:
            raise ValueError("theta must be within [0, 1]")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")
        for name in (
            "repulsion",
            "stiffness",
            "rest_length",
            "time_step",
            "tolerance",
            "force_cap",
        ):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.centering < 0:
            raise ValueError("centering must be nonnegative")
        if not 0.0 < self.damping <= 1.0:
            raise ValueError("damping must be within (0, 1]")
        if not 0.0 < self.cooling <= 1.0:
            raise ValueError("cooling must be within (0, 1]")


@dataclass
class LayoutState:
    """Positions and velocities for every node, in ``order``.

    ``order`` is the sorted acronym tuple of the graph being laid out;
    row i of each array belongs to ``order[i]``.
    """

    order: tuple[Acronym, ...]
    positions: np.ndarray
    velocities: np.ndarray
    iteration: int = 0
    temperature: float = 1.0

    def positions_by_node(self) -> dict[Acronym, tuple[float, ...]]:
        return {
            acronym: tuple(float(x) for x in row)
            for acronym, row in zip(self.order, self.positions)
        }


@dataclass(frozen=True)
class LayoutStats:
    iterations: int
    max_force: float
    converged: bool


def init_layout(graph: MethodGraph, params: LayoutParams) -> LayoutState:
    """Seeded random start: uniform in a cube whose side grows with
    sqrt(node count), velocities zero."""
    order = tuple(sorted(graph.nodes))
    if not order:
        raise LayoutError("cannot lay out an empty graph")
    rng = np.random.default_rng(params.seed & _MASK64)
    side = 10.0 * math.sqrt(len(order))
    positions = rng.uniform(-side / 2.0, side / 2.0, size=(len(order), params.dimensions))
    return LayoutState(
        order=order,
        positions=positions,
        velocities=np.zeros_like(positions),
        iteration=0,
        temperature=1.0,
    )


def _edge_arrays(graph: MethodGraph, order: tuple[Acronym, ...]) -> tuple[np.ndarray, np.ndarray]:
    index = {acronym: i for i, acronym in enumerate(order)}
    src = []
    dst = []
    for edge in graph.edges:
        if edge.source == edge.target:
            continue  # a self-edge has no length to relax
        src.append(index[edge.source])
        dst.append(index[edge.target])
    return np.asarray(src, dtype=np.intp), np.asarray(dst, dtype=np.intp)


def _repulsion_exact(pos: np.ndarray, constant: float) -> np.ndarray:
    # d^2 through the quadratic identity so the heavy lifting is two
    # matrix products instead of an n*n*dim broadcast. The floor guards
    # the identity's cancellation error for near-coincident points; the
    # jitter pass keeps true distances well above it.
    sq = np.einsum("ij,ij->i", pos, pos)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (pos @ pos.T)
    np.fill_diagonal(d2, np.inf)
    np.maximum(d2, 1e-12, out=d2)
    w = constant / (d2 * np.sqrt(d2))
    return pos * w.sum(axis=1)[:, None] - w @ pos


def _spring_forces(
    pos: np.ndarray, src: np.ndarray, dst: np.ndarray, stiffness: float, rest_length: float
) -> np.ndarray:
    forces = np.zeros_like(pos)
    if src.size == 0:
        return forces
    delta = pos[dst] - pos[src]
    dist = np.sqrt(np.einsum("ij,ij->i", delta, delta))
    with np.errstate(invalid="ignore", divide="ignore"):
        unit = np.where(dist[:, None] > 0.0, delta / dist[:, None], 0.0)
    pull = (stiffness * (dist - rest_length))[:, None] * unit
    n = pos.shape[0]
    for axis in range(pos.shape[1]):
        forces[:, axis] += np.bincount(src, weights=pull[:, axis], minlength=n)
        forces[:, axis] -= np.bincount(dst, weights=pull[:, axis], minlength=n)
    return forces


# Below this many nodes the exact pairwise evaluation (two BLAS matrix
# products) beats the tree walk outright, so theta > 0 only routes
# through the tree on inputs large enough for it to pay off.
_TREE_CUTOFF = 2048


def net_forces(
    pos: np.ndarray,
    src: np.ndarray,
    dst: np.ndarray,
    params: LayoutParams,
    method: str = "auto",
) -> np.ndarray:
    """Repulsion + springs + centering for one fixed configuration.

    Evaluations are summed in a fixed order, so the result is identical
    from run to run. ``method`` picks the repulsion evaluator: "exact"
    is the O(n^2) pairwise sum, "tree" the Barnes-Hut approximation
    (requires theta > 0), and "auto" chooses whichever is faster for
    the input size, which is the exact path for anything that fits the
    acceptance-scale graphs this package targets.
    """
    if method not in ("auto", "exact", "tree"):
        raise ValueError('method must be "auto", "exact", or "tree"')
    if method == "tree" and params.theta <= 0.0:
        raise ValueError("tree evaluation needs theta > 0")
    n = pos.shape[0]
    if n > 1:
        use_tree = params.theta > 0.0 and (
            method == "tree" or (method == "auto" and n > _TREE_CUTOFF)
        )
        if use_tree:
            forces = bhtree.repulsion_forces(pos, params.repulsion, params.theta)
        else:
            forces = _repulsion_exact(pos, params.repulsion)
    else:
        forces = np.zeros_like(pos)
    forces += _spring_forces(pos, src, dst, params.stiffness, params.rest_length)
    if params.centering:
        forces -= params.centering * pos
    return forces


def _separate_coincident(pos: np.ndarray, seed: int, iteration: int) -> np.ndarray:
    """Nudge apart nodes sharing a coincidence cell before forces blow up.

    Displacements have fixed magnitude and come from a generator keyed
    on (seed, iteration), never from global randomness, so runs stay
    reproducible. Within each coincident group the first node stays put.
    """
    quantized = np.floor(np.clip(pos / _COINCIDENCE_CELL, -9e18, 9e18)).astype(np.int64)
    ranked = quantized[np.lexsort(quantized.T)]
    if not (ranked[1:] == ranked[:-1]).all(axis=1).any():
        return pos  # cheap pre-check: almost every step has no duplicates
    _, inverse, counts = np.unique(
        quantized, axis=0, return_inverse=True, return_counts=True
    )
    seen: set[int] = set()
    victims: list[int] = []
    for i, group in enumerate(inverse):
        group = int(group)
        if counts[group] < 2:
            continue
        if group in seen:
            victims.append(i)
        else:
            seen.add(group)
    rng = np.random.default_rng([seed & _MASK64, iteration, 0x9E3779B9])
    directions = rng.standard_normal((len(victims), pos.shape[1]))
    norms = np.maximum(np.sqrt((directions**2).sum(axis=1)), 1e-300)
    out = pos.copy()
    out[victims] += _JITTER_MAGNITUDE * directions / norms[:, None]
    return out


def _advance(
    state: LayoutState, src: np.ndarray, dst: np.ndarray, params: LayoutParams
) -> tuple[LayoutState, float]:
    pos = _separate_coincident(state.positions, params.seed, state.iteration)
    forces = net_forces(pos, src, dst, params)

    finite = np.isfinite(forces).all(axis=1)
    if not finite.all():
        culprit = state.order[int(np.argmin(finite))]
        raise LayoutError(
            f"non-finite force on node {culprit} at iteration {state.iteration}"
        )

    norms = np.sqrt(np.einsum("ij,ij->i", forces, forces))
    max_force = float(norms.max())
    # Damped Euler with unit time step overshoots geometrically on nodes
    # with many springs while the temperature is still high. Bounding the
    # per-node net force keeps every step finite; the cap sits around six
    # orders of magnitude above the tolerance, so equilibria and the
    # convergence measurement (taken before capping) are unaffected.
    over = norms > params.force_cap
    if over.any():
        scale = np.where(over, params.force_cap / np.maximum(norms, 1e-300), 1.0)
        forces = forces * scale[:, None]

    velocities = params.damping * (state.velocities + forces * params.time_step)
    velocities *= state.temperature
    new_pos = pos + velocities * params.time_step
    finite = np.isfinite(new_pos).all(axis=1)
    if not finite.all():
        culprit = state.order[int(np.argmin(finite))]
        raise LayoutError(
            f"non-finite position on node {culprit} at iteration {state.iteration}"
        )
    next_state = LayoutState(
        order=state.order,
        positions=new_pos,
        velocities=velocities,
        iteration=state.iteration + 1,
        temperature=state.temperature * params.cooling,
    )
    return next_state, max_force


def _check_state(state: LayoutState, graph: MethodGraph, params: LayoutParams) -> None:
    if set(state.order) != set(graph.nodes):
        raise LayoutError("state keys do not match the graph's nodes")
    if state.positions.shape != (len(state.order), params.dimensions):
        raise LayoutError("state arrays do not match params.dimensions")


def step(state: LayoutState, graph: MethodGraph, params: LayoutParams) -> LayoutState:
    """One simulation tick: forces, damped velocity update, cooling."""
    _check_state(state, graph, params)
    src, dst = _edge_arrays(graph, state.order)
    return _advance(state, src, dst, params)[0]


def run_from(
    state: LayoutState, graph: MethodGraph, params: LayoutParams
) -> tuple[LayoutState, LayoutStats]:
    """Iterate from an existing state until the strongest per-node net
    force drops under the tolerance or the iteration budget runs out."""
    _check_state(state, graph, params)
    src, dst = _edge_arrays(graph, state.order)
    max_force = math.inf
    converged = False
    while state.iteration < params.max_iterations:
        state, max_force = _advance(state, src, dst, params)
        if max_force < params.tolerance:
            converged = True
            break
    return state, LayoutStats(
        iterations=state.iteration, max_force=max_force, converged=converged
    )


def run(
    graph: MethodGraph, params: LayoutParams
) -> tuple[dict[Acronym, tuple[float, ...]], LayoutStats]:
    """Full layout from a seeded start; returns final positions per node."""
    state = init_layout(graph, params)
    final, stats = run_from(state, graph, params)
    return final.positions_by_node(), stats
