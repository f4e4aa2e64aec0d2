"""Exact solver for the balanced transportation problem.

Implements the transportation-specialized network simplex (northwest-corner
start, tree potentials, cycle pivots). Used as the ground-truth optimal
transport kernel for document distances; approximation is out of scope, so
the solver either returns an optimal basic solution or raises.
"""

from __future__ import annotations

from collections import deque

import numpy as np

from .errors import NumericError, SolverError

# Reduced-cost optimality threshold, scaled by the cost magnitude.
_REDUCED_COST_TOL = 1e-11
# Consecutive degenerate pivots tolerated before switching to Bland's rule.
_BLAND_TRIGGER = 64
_MAX_PIVOTS = 500_000


def solve_transport(
    supply: np.ndarray, demand: np.ndarray, cost: np.ndarray
) -> tuple[float, np.ndarray]:
    """Minimize sum(T * cost) over T >= 0 with row sums `supply`, column sums `demand`.

    Both marginals must be strictly positive and sum to the same total
    (up to floating-point drift). Returns (objective, flow matrix) where
    the flow matrix is an optimal basic solution.
    """
    supply = np.asarray(supply, dtype=np.float64)
    demand = np.asarray(demand, dtype=np.float64)
    cost = np.asarray(cost, dtype=np.float64)
    if cost.ndim != 2:
        raise ValueError("cost must be a 2-d matrix")
    m, n = cost.shape
    if supply.shape != (m,) or demand.shape != (n,):
        raise ValueError("marginal shapes do not match the cost matrix")
    if not np.all(np.isfinite(cost)):
        raise NumericError("non-finite entries in transport cost matrix")
    if not (np.all(np.isfinite(supply)) and np.all(np.isfinite(demand))):
        raise NumericError("non-finite transport marginals")
    if np.any(supply <= 0.0) or np.any(demand <= 0.0):
        raise ValueError("transport marginals must be strictly positive")
    total = float(supply.sum())
    if abs(total - float(demand.sum())) > 1e-6 * max(total, float(demand.sum())):
        raise ValueError("unbalanced transport problem")

    flows = _northwest_corner(supply, demand)
    tol = _REDUCED_COST_TOL * max(1.0, float(np.max(np.abs(cost))))
    degeneracy_eps = 1e-15 * max(1.0, total)

    use_bland = False
    degenerate_run = 0
    for _ in range(_MAX_PIVOTS):
        u, v = _potentials(flows, cost, m, n)
        reduced = cost - u[:, None] - v[None, :]
        entering = _entering_cell(reduced, tol, use_bland)
        if entering is None:
            break
        theta = _pivot(flows, entering, m, n)
        if theta <= degeneracy_eps:
            degenerate_run += 1
            if degenerate_run >= _BLAND_TRIGGER:
                use_bland = True
        else:
            degenerate_run = 0
    else:
        raise SolverError("network simplex exceeded the pivot limit")

    plan = np.zeros((m, n))
    for (i, j), flow in flows.items():
        plan[i, j] = max(flow, 0.0)
    objective = float(np.einsum("ij,ij->", plan, cost))
    return objective, plan


def _northwest_corner(supply: np.ndarray, demand: np.ndarray) -> dict:
    """Initial basic feasible solution: exactly m+n-1 cells forming a tree."""
    m, n = supply.size, demand.size
    a = supply.copy()
    b = demand.copy()
    flows: dict[tuple[int, int], float] = {}
    i = j = 0
    while True:
        q = min(a[i], b[j])
        flows[(i, j)] = float(q)
        a[i] -= q
        b[j] -= q
        if i == m - 1 and j == n - 1:
            return flows
        if i == m - 1:
            j += 1
        elif j == n - 1:
            i += 1
        elif a[i] <= b[j]:
            i += 1
        else:
            j += 1


def _adjacency(flows: dict, m: int, n: int) -> list:
    """Node adjacency of the basis tree; rows are 0..m-1, columns m..m+n-1."""
    adj: list[list[int]] = [[] for _ in range(m + n)]
    for i, j in flows:
        adj[i].append(m + j)
        adj[m + j].append(i)
    return adj


def _potentials(flows: dict, cost: np.ndarray, m: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Dual potentials u, v with u[i] + v[j] = cost[i, j] on every basic cell."""
    adj = _adjacency(flows, m, n)
    u = np.zeros(m)
    v = np.zeros(n)
    seen = [False] * (m + n)
    seen[0] = True
    stack = [0]
    visited = 1
    while stack:
        node = stack.pop()
        for neighbor in adj[node]:
            if seen[neighbor]:
                continue
            seen[neighbor] = True
            visited += 1
            if node < m:
                v[neighbor - m] = cost[node, neighbor - m] - u[node]
            else:
                u[neighbor] = cost[neighbor, node - m] - v[node - m]
            stack.append(neighbor)
    if visited != m + n:
        raise SolverError("transport basis lost connectivity")
    return u, v


def _entering_cell(reduced: np.ndarray, tol: float, use_bland: bool) -> tuple[int, int] | None:
    n = reduced.shape[1]
    if use_bland:
        negative = np.flatnonzero(reduced.ravel() < -tol)
        if negative.size == 0:
            return None
        flat = int(negative[0])
    else:
        flat = int(np.argmin(reduced))
        if reduced.ravel()[flat] >= -tol:
            return None
    return divmod(flat, n)


def _pivot(flows: dict, entering: tuple[int, int], m: int, n: int) -> float:
    """Push flow around the unique basis cycle closed by `entering`.

    Returns the amount of flow moved (0.0 for a degenerate pivot).
    """
    i0, j0 = entering
    adj = _adjacency(flows, m, n)
    target = m + j0
    parent: dict[int, int | None] = {i0: None}
    queue = deque([i0])
    while queue:
        node = queue.popleft()
        if node == target:
            break
        for neighbor in adj[node]:
            if neighbor not in parent:
                parent[neighbor] = node
                queue.append(neighbor)
    if target not in parent:
        raise SolverError("transport basis lost connectivity")

    path = [target]
    while parent[path[-1]] is not None:
        path.append(parent[path[-1]])
    path.reverse()

    # Signs alternate along the path starting with a donor edge at the
    # entering row, so flow stays balanced at every node.
    minus: list[tuple[int, int]] = []
    plus: list[tuple[int, int]] = []
    for t in range(len(path) - 1):
        a, b = path[t], path[t + 1]
        cell = (a, b - m) if a < m else (b, a - m)
        (minus if t % 2 == 0 else plus).append(cell)

    theta = min(flows[cell] for cell in minus)
    leaving = min(
        (cell for cell in minus if flows[cell] == theta),
        key=lambda cell: cell[0] * n + cell[1],
    )
    for cell in minus:
        flows[cell] = max(flows[cell] - theta, 0.0)
    for cell in plus:
        flows[cell] += theta
    flows[entering] = theta
    del flows[leaving]
    return theta
