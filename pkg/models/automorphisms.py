"""Exhaustive automorphism search on the bipartite graph of a model.

Vertices are V (0..|V|-1) followed by V-hat. The search assigns images in
breadth-first order and prunes on side, degree, neighbour-degree signature
and adjacency to every vertex already mapped.
"""
import itertools
import logging
from collections import deque

from config import get_config
from core.errors import SearchCapExceeded
from .bipartite import PRESERVING, REVERSING, Automorphism

logger = logging.getLogger(__name__)


class _Graph:

    def __init__(self, m):
        self.n_v = m.n_v
        self.n = m.n_v + m.n_vhat
        self.adj = [set() for _ in range(self.n)]
        for i, j in m.edges:
            self.adj[j].add(self.n_v + i)
            self.adj[self.n_v + i].add(j)
        self.degree = [len(a) for a in self.adj]
        self.signature = [tuple(sorted(self.degree[u] for u in self.adj[x])) for x in range(self.n)]

    def side(self, x):
        return 0 if x < self.n_v else 1

    def bfs_order(self):
        seen = [False] * self.n
        order = []
        for start in range(self.n):
            if seen[start]:
                continue
            seen[start] = True
            queue = deque([start])
            while queue:
                x = queue.popleft()
                order.append(x)
                for u in sorted(self.adj[x]):
                    if not seen[u]:
                        seen[u] = True
                        queue.append(u)
        return order


def _search(graph, kind, limit):
    order = graph.bfs_order()
    flip = kind == REVERSING
    image = [None] * graph.n
    used = [False] * graph.n
    found = []

    def candidates(x):
        want_side = graph.side(x) ^ int(flip)
        for y in range(graph.n):
            if used[y] or graph.side(y) != want_side:
                continue
            if graph.degree[y] != graph.degree[x] or graph.signature[y] != graph.signature[x]:
                continue
            yield y

    def consistent(x, y):
        for u in graph.adj[x]:
            if image[u] is not None and image[u] not in graph.adj[y]:
                return False
        # mapped non-neighbours of x must stay non-neighbours of y
        mapped_neighbours = sum(1 for u in graph.adj[x] if image[u] is not None)
        return mapped_neighbours == sum(1 for w in graph.adj[y] if used[w])

    def extend(depth):
        if limit is not None and len(found) >= limit:
            return
        if depth == len(order):
            found.append(tuple(image))
            return
        x = order[depth]
        for y in candidates(x):
            if not consistent(x, y):
                continue
            image[x] = y
            used[y] = True
            extend(depth + 1)
            image[x] = None
            used[y] = False

    extend(0)
    return found


def find_automorphisms(m, kind=REVERSING, limit=None, cap=None):
    """All (or the first `limit`) automorphisms of the given kind, in lexicographic image order"""
    if kind not in (PRESERVING, REVERSING):
        raise ValueError(f"unknown automorphism kind {kind!r}")
    cap = get_config().search_cap if cap is None else cap
    n = m.n_v + m.n_vhat
    if n > cap:
        raise SearchCapExceeded(f"{n} vertices exceeds the automorphism search cap {cap}")
    if kind == REVERSING and m.n_v != m.n_vhat:
        return []
    graph = _Graph(m)
    maps = _search(graph, kind, limit)
    out = [Automorphism.from_vertex_map(vmap, m.n_v) for vmap in sorted(maps)]
    out = [Automorphism(a.perm_v, a.perm_vhat, kind, f"{kind}_{k}") for k, a in enumerate(out)]
    n_inv = sum(1 for a in out if a.is_involution())
    logger.info(f"📊 {m.name}: {len(out)} {kind} automorphisms, {n_inv} involutions")
    return out


def brute_force_automorphisms(m, kind=REVERSING):
    """Oracle: every bijection of V, with V-hat images forced by neighbourhoods (twins permuted freely)"""
    if kind == REVERSING and m.n_v != m.n_vhat:
        return []
    neighbourhoods = [frozenset(m.sigma.row(i).support()) for i in range(m.n_vhat)]
    if kind == PRESERVING:
        targets = neighbourhoods
        n_targets = m.n_vhat
    else:
        # image of vhat is a V vertex, whose neighbourhood is a set of V-hat vertices
        targets = [frozenset(i for i, j in m.edges if j == v) for v in range(m.n_v)]
        n_targets = m.n_v
    by_neighbourhood = {}
    for t, nb in enumerate(targets):
        by_neighbourhood.setdefault(nb, []).append(t)
    groups = {}
    for i, nb in enumerate(neighbourhoods):
        groups.setdefault(nb, []).append(i)

    results = []
    for f in itertools.permutations(range(m.n_v if kind == PRESERVING else m.n_vhat)):
        # f is the V image: V -> V (preserving) or V -> V-hat (reversing)
        matched = []
        ok = True
        for nb, members in groups.items():
            image_nb = frozenset(f[j] for j in nb)
            pool = by_neighbourhood.get(image_nb, [])
            if len(pool) != len(members):
                ok = False
                break
            matched.append((members, pool))
        if not ok or sum(len(p) for _, p in matched) != n_targets:
            continue
        for choice in itertools.product(*[itertools.permutations(pool) for _, pool in matched]):
            perm_vhat = [None] * m.n_vhat
            for (members, _), picked in zip(matched, choice):
                for i, t in zip(members, picked):
                    perm_vhat[i] = t
            a = Automorphism(f, perm_vhat, kind)
            if a.satisfied_by(m.sigma):
                results.append(a)
    return results
