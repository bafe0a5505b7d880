"""Reference solvers used to certify planner output.

These never touch a lazy store: they read a plain true-weight array, so the
evaluation counters of the planner under test stay untouched. Reported costs
are recomputed with math.fsum over the returned path so a planner that found
an equal-cost path produces the bit-identical float.
"""

import heapq
import math

from .errors import InvariantViolation, UsageError

INF = float("inf")


class OracleResult:
    __slots__ = ("cost", "path")

    def __init__(self, cost, path):
        self.cost = cost
        self.path = path

    def __repr__(self):
        return f"OracleResult(cost={self.cost!r}, path={self.path!r})"


def _path_cost(truth, graph, path):
    if len(path) < 2:
        return 0.0
    return math.fsum(truth[graph.edge_id(a, b)] for a, b in zip(path, path[1:]))


def dijkstra_opt(graph, truth, start, goal):
    """Exact shortest path start -> goal over true weights.

    Ties are resolved deterministically (first settled wins, heap breaks key
    ties by vertex id). Unreachable goal gives cost +inf and an empty path.
    """
    n = graph.num_vertices
    if not (0 <= start < n and 0 <= goal < n):
        raise UsageError("start and goal must be existing vertices")
    dist = [INF] * n
    parent = [None] * n
    dist[start] = 0.0
    done = bytearray(n)
    heap = [(0.0, start)]
    while heap:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = 1
        if u == goal:
            break
        for v, eid in graph.succ_items(u):
            w = truth[eid]
            if w == INF or done[v]:
                continue
            nd = d + w
            if nd < dist[v]:
                dist[v] = nd
                parent[v] = u
                heapq.heappush(heap, (nd, v))
    if dist[goal] == INF:
        return OracleResult(INF, [])
    path = [goal]
    while path[-1] != start:
        path.append(parent[path[-1]])
    path.reverse()
    return OracleResult(_path_cost(truth, graph, path), path)


def dijkstra_to_target(graph, truth, target):
    """Distance-to-target for every vertex, relaxing edges backward.

    Returns (dist, next_hop) where next_hop[v] is the successor of v on a
    shortest v -> target path (None at the target and for unreachable v).
    """
    n = graph.num_vertices
    if not (0 <= target < n):
        raise UsageError("target must be an existing vertex")
    dist = [INF] * n
    nxt = [None] * n
    dist[target] = 0.0
    done = bytearray(n)
    heap = [(0.0, target)]
    while heap:
        d, v = heapq.heappop(heap)
        if done[v]:
            continue
        done[v] = 1
        for u, eid in graph.pred_items(v):
            w = truth[eid]
            if w == INF or done[u]:
                continue
            nd = d + w
            if nd < dist[u]:
                dist[u] = nd
                nxt[u] = v
                heapq.heappush(heap, (nd, u))
    return dist, nxt


def path_to_target(graph, truth, nxt, v, target):
    """Materialize the next-hop chain from v; (cost, path) with fsum cost."""
    if v == target:
        return 0.0, [v]
    path = [v]
    while path[-1] != target:
        step = nxt[path[-1]]
        if step is None:
            return INF, []
        path.append(step)
    return _path_cost(truth, graph, path), path


def brute_force_opt(graph, truth, start, goal, max_vertices=12):
    """Exhaustive simple-path minimum; only for tiny graphs."""
    n = graph.num_vertices
    if n > max_vertices:
        raise UsageError(f"brute force capped at {max_vertices} vertices, got {n}")
    if not (0 <= start < n and 0 <= goal < n):
        raise UsageError("start and goal must be existing vertices")
    best_cost = INF
    best_path = []
    on_path = bytearray(n)
    path = [start]
    on_path[start] = 1

    def walk(u):
        nonlocal best_cost, best_path
        if u == goal:
            c = _path_cost(truth, graph, path)
            if c < best_cost:
                best_cost = c
                best_path = list(path)
            return
        for v, eid in graph.succ_items(u):
            if on_path[v] or truth[eid] == INF:
                continue
            on_path[v] = 1
            path.append(v)
            walk(v)
            path.pop()
            on_path[v] = 0

    if start == goal:
        return OracleResult(0.0, [start])
    walk(start)
    if best_cost == INF:
        return OracleResult(INF, [])
    return OracleResult(best_cost, best_path)


def check_bound(achieved, optimal, eps1=1.0, eps2=1.0):
    """True iff achieved <= eps1 * eps2 * optimal (both +inf also passes).

    A planner result meaningfully below the oracle optimum is a bug in one of
    the two, so that raises instead of passing silently; a 1e-12 relative
    guard absorbs last-ulp rounding between equal-cost paths.
    """
    if eps1 < 1.0 or eps2 < 1.0:
        raise UsageError("suboptimality factors must be >= 1")
    if optimal == INF:
        return achieved == INF
    if achieved < optimal * (1.0 - 1e-12):
        raise InvariantViolation(
            f"achieved cost {achieved!r} below oracle optimum {optimal!r}")
    return achieved <= eps1 * eps2 * optimal
