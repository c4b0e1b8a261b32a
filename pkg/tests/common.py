"""Shared brute-force oracles and generators for the test suite.

Everything here is deliberately independent of the code paths it
checks: ranks by list-of-list elimination, reduction by merging the
full move tree, optima by subset enumeration.
"""

from __future__ import annotations

import itertools
import random

from rwmso import (Assignment, ParseTree, Relabeling, build_structure,
                   evaluate, ordered_induced)
from rwmso.parsetree import Leaf, Node


def all_structures(n, t=1):
    """Every t-labeled graph on n vertices (all edge sets x all labelings)."""
    pairs = list(itertools.combinations(range(n), 2))
    for edge_mask in range(1 << len(pairs)):
        edges = [pairs[i] for i in range(len(pairs)) if (edge_mask >> i) & 1]
        for labels in itertools.product(range(1 << t), repeat=n):
            yield build_structure(n, edges, t, list(labels))


def random_structure(rng: random.Random, n, t=1, edge_prob=0.5):
    edges = [(u, v) for u in range(n) for v in range(u + 1, n)
             if rng.random() < edge_prob]
    labels = [rng.randrange(1 << t) for _ in range(n)]
    return build_structure(n, edges, t, labels)


def random_relabeling(rng: random.Random, t):
    return Relabeling(tuple(rng.randrange(1 << t) for _ in range(t)))


def random_parse_tree(rng: random.Random, leaves, t):
    def build(k):
        if k == 1:
            return Leaf()
        split = rng.randint(1, k - 1)
        return Node(random_relabeling(rng, t), random_relabeling(rng, t),
                    random_relabeling(rng, t), build(k - split), build(split))
    return ParseTree(t, build(leaves))


def are_isomorphic(g, h) -> bool:
    """Exhaustive permutation check, labels included."""
    if g.n != h.n or g.t != h.t:
        return False
    for perm in itertools.permutations(range(g.n)):
        if any(g.labels[u] != h.labels[perm[u]] for u in range(g.n)):
            continue
        if all(g.has_edge(u, v) == h.has_edge(perm[u], perm[v])
               for u in range(g.n) for v in range(u + 1, g.n)):
            return True
    return g.n == 0


def permuted(g, perm):
    """The same graph presented with vertex u renamed to perm[u]."""
    edges = [(perm[u], perm[v]) for u, v in g.edges()]
    labels = [0] * g.n
    for u in range(g.n):
        labels[perm[u]] = g.labels[u]
    return build_structure(g.n, edges, g.t, labels)


def merge_full_tree(a, node):
    """Reduce a full characteristic tree by definition, independently.

    Replaces every node label by its ordered induced structure and
    collapses equal sibling subtrees, returning a canonical
    (label, frozenset-of-subtrees) nesting.
    """
    kids = frozenset(merge_full_tree(a, ch)
                     for ch in node.point_children + node.set_children)
    return ordered_induced(a, node.c, node.traces), kids


def unfold_rc(forest, nid, memo=None):
    """Canonical deep unfolding of an interned reduced tree."""
    if memo is None:
        memo = {}
    if nid in memo:
        return memo[nid]
    n = forest.node(nid)
    kids = frozenset(unfold_rc(forest, ch, memo)
                     for ch in n.point_children + n.set_children)
    memo[nid] = (n.ord, kids)
    return memo[nid]


def naive_rank(rows):
    """GF(2) rank by elimination on lists of 0/1 entries."""
    rows = [list(r) for r in rows]
    rank = 0
    cols = len(rows[0]) if rows else 0
    for col in range(cols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                rows[i] = [(x + y) % 2 for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def brute_force_linemso(g, phi, set_vars, weights, direction):
    """Optimal (value, witness) over all tuples of vertex subsets, or None."""
    best = None
    subsets = [frozenset(s) for k in range(g.n + 1)
               for s in itertools.combinations(range(g.n), k)]
    for choice in itertools.product(subsets, repeat=len(set_vars)):
        alpha = Assignment(sets=dict(zip(set_vars, choice)))
        if not evaluate(g, phi, alpha):
            continue
        value = sum(w * len(u) for w, u in zip(weights, choice))
        if best is None or (value > best[0] if direction == "max" else value < best[0]):
            best = (value, choice)
    return best
