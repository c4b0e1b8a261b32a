"""t-labeled graphs as relational structures, and their labeling algebra.

A structure has universe {0..n-1}, a symmetric edge relation and t unary
label relations.  Labels are stored as one t-bit row per element, so all
labeling operations are GF(2) bitset arithmetic (see gf2).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from . import gf2
from .errors import RwmsoError, WidthMismatchError


@dataclass(frozen=True)
class Structure:
    """Graph over vocabulary {E, L1..Lt}; universe is 0..n-1.

    adj[u] has bit v set iff {u,v} is an edge; labels[u] has bit i-1 set
    iff u carries label i.
    """

    n: int
    t: int
    adj: tuple[int, ...]
    labels: tuple[int, ...]

    def __post_init__(self):
        if self.n < 0 or self.t < 0:
            raise RwmsoError("negative size")
        if len(self.adj) != self.n or len(self.labels) != self.n:
            raise RwmsoError("row count does not match universe size")
        full = (1 << self.n) - 1
        for u, row in enumerate(self.adj):
            if row & ~full:
                raise RwmsoError(f"adjacency row {u} references missing vertices")
            if (row >> u) & 1:
                raise RwmsoError(f"loop at vertex {u}")
        for u in range(self.n):
            for v in range(u):
                if ((self.adj[u] >> v) & 1) != ((self.adj[v] >> u) & 1):
                    raise RwmsoError("adjacency not symmetric")
        if any(lab >> self.t for lab in self.labels):
            raise RwmsoError("label row wider than t")

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.adj[u] >> v) & 1)

    def label_set(self, u: int) -> frozenset[int]:
        """Labels of u as a set of indices in 1..t."""
        return frozenset(i + 1 for i in range(self.t) if (self.labels[u] >> i) & 1)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in range(u + 1, self.n)
                if (self.adj[u] >> v) & 1]

    def num_edges(self) -> int:
        return sum(row.bit_count() for row in self.adj) // 2


def build_structure(n: int, edges: Iterable[tuple[int, int]] = (), t: int = 1,
                    labels: Sequence[int] | None = None) -> Structure:
    """Convenience constructor from an edge list and optional label rows."""
    adj = [0] * n
    for u, v in edges:
        if u == v:
            raise RwmsoError(f"loop at vertex {u}")
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    if labels is None:
        labels = [0] * n
    return Structure(n, t, tuple(adj), tuple(labels))


@dataclass(frozen=True)
class Relabeling:
    """Linear map on GF(2)^t; rows[i] is the image of label i+1."""

    rows: tuple[int, ...]

    def __post_init__(self):
        t = len(self.rows)
        if any(r >> t for r in self.rows):
            raise RwmsoError("relabeling row wider than t")

    @property
    def t(self) -> int:
        return len(self.rows)

    def apply(self, label_row: int) -> int:
        return gf2.vec_times_matrix(label_row, self.rows)

    def then(self, other: "Relabeling") -> "Relabeling":
        """The map `self` followed by `other` (labels x T_self x T_other)."""
        if other.t != self.t:
            raise WidthMismatchError("relabeling widths differ")
        return Relabeling(gf2.mat_mul(self.rows, other.rows))

    @staticmethod
    def identity(t: int) -> "Relabeling":
        return Relabeling(gf2.identity(t))

    @staticmethod
    def zero(t: int) -> "Relabeling":
        return Relabeling((0,) * t)


def _check_width(*widths: int) -> int:
    if len(set(widths)) > 1:
        raise WidthMismatchError(f"label widths differ: {widths}")
    return widths[0]


def relabel(g: Structure, f: Relabeling) -> Structure:
    """Apply the relabeling to every label row; edges are untouched."""
    _check_width(g.t, f.t)
    return Structure(g.n, g.t, g.adj, tuple(f.apply(lab) for lab in g.labels))


def _cross_rows(g1: Structure, g2_labels: Sequence[int]) -> list[int]:
    """For each u in g1, the bitmask of g2 vertices joined to u."""
    out = []
    for lab1 in g1.labels:
        row = 0
        for v, lab2 in enumerate(g2_labels):
            if (lab1 & lab2).bit_count() & 1:
                row |= 1 << v
        out.append(row)
    return out


def _union_adj(g1: Structure, g2: Structure, cross: Sequence[int]) -> tuple[int, ...]:
    n1 = g1.n
    adj = [g1.adj[u] | (cross[u] << n1) for u in range(n1)]
    col = [0] * g2.n
    for u in range(n1):
        row = cross[u]
        while row:
            v = (row & -row).bit_length() - 1
            col[v] |= 1 << u
            row &= row - 1
    adj.extend((g2.adj[v] << n1) | col[v] for v in range(g2.n))
    return tuple(adj)


def join(g1: Structure, g2: Structure) -> Structure:
    """Disjoint union plus all edges {u,v} with lab1(u).lab2(v) = 1.

    The result is unlabeled (all-zero label rows).
    """
    t = _check_width(g1.t, g2.t)
    cross = _cross_rows(g1, g2.labels)
    return Structure(g1.n + g2.n, t, _union_adj(g1, g2, cross), (0,) * (g1.n + g2.n))


def compose(g1: Structure, g2: Structure, g: Relabeling, f1: Relabeling,
            f2: Relabeling) -> Structure:
    """Join g1 with g(g2), then relabel the two parts by f1 and f2.

    Cross edges: {u,v} iff lab1(u) . (lab2(v) x T_g) = 1.  Not commutative.
    """
    t = _check_width(g1.t, g2.t, g.t, f1.t, f2.t)
    cross = _cross_rows(g1, [g.apply(lab) for lab in g2.labels])
    labels = tuple(f1.apply(lab) for lab in g1.labels) + \
        tuple(f2.apply(lab) for lab in g2.labels)
    return Structure(g1.n + g2.n, t, _union_adj(g1, g2, cross), labels)


def induced(a: Structure, c: Sequence[int]) -> Structure:
    """Substructure on the distinct entries of c (first-occurrence order)."""
    elems: list[int] = []
    for e in c:
        if not 0 <= e < a.n:
            raise RwmsoError(f"element {e} outside universe")
        if e not in elems:
            elems.append(e)
    k = len(elems)
    adj = []
    for e in elems:
        row = 0
        for j, e2 in enumerate(elems):
            if (a.adj[e] >> e2) & 1:
                row |= 1 << j
        adj.append(row)
    return Structure(k, a.t, tuple(adj), tuple(a.labels[e] for e in elems))


@dataclass(frozen=True)
class OrderedStructure:
    """Induced structure on the entries of a vector, remembering order.

    Positions that name the same element fall into one class; classes are
    renamed 0..k-1 in order of first occurrence, which makes equality of
    ordered structures plain structural equality.  set_traces[j] is the
    bitmask (over class ids) of the j-th chosen set intersected with the
    vector's entries.
    """

    structure: Structure
    positions: tuple[int, ...]
    set_traces: tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.positions)

    @property
    def p(self) -> int:
        return len(self.set_traces)

    def class_names(self) -> tuple[int, ...]:
        """1-based minimum position index of each class, in class order."""
        first = {}
        for j, cls in enumerate(self.positions):
            first.setdefault(cls, j + 1)
        return tuple(first[i] for i in range(self.structure.n))

    def encode(self) -> str:
        s = self.structure
        adj = ",".join(format(s.adj[u], f"0{max(s.n, 1)}b")[::-1] for u in range(s.n))
        lab = ",".join(format(s.labels[u], f"0{max(s.t, 1)}b")[::-1] for u in range(s.n))
        pos = ",".join(str(i) for i in self.positions)
        tr = ",".join(str(mask) for mask in self.set_traces)
        return f"k={s.n};adj={adj};lab={lab};pos={pos};tr={tr}"


def _as_masks(a_n: int, sets: Sequence[Iterable[int] | int]) -> list[int]:
    masks = []
    for s in sets:
        if isinstance(s, int):
            mask = s
        else:
            mask = 0
            for e in s:
                mask |= 1 << e
        if mask >> a_n:
            raise RwmsoError("set entry outside universe")
        masks.append(mask)
    return masks


def ordered_induced(a: Structure, c: Sequence[int],
                    sets: Sequence[Iterable[int] | int] = ()) -> OrderedStructure:
    """Ordered structure induced by the vector c with traces of the sets.

    Sets may be given as iterables of element ids or as bitmasks.
    """
    masks = _as_masks(a.n, sets)
    seen: dict[int, int] = {}
    elems: list[int] = []
    positions = []
    for e in c:
        if not 0 <= e < a.n:
            raise RwmsoError(f"element {e} outside universe")
        cls = seen.get(e)
        if cls is None:
            cls = len(elems)
            seen[e] = cls
            elems.append(e)
        positions.append(cls)
    k = len(elems)
    adj = []
    for e in elems:
        row = 0
        for j, e2 in enumerate(elems):
            if (a.adj[e] >> e2) & 1:
                row |= 1 << j
        adj.append(row)
    labels = tuple(a.labels[e] for e in elems)
    traces = []
    for mask in masks:
        tr = 0
        for j, e in enumerate(elems):
            if (mask >> e) & 1:
                tr |= 1 << j
        traces.append(tr)
    struct = Structure(k, a.t, tuple(adj), labels)
    return OrderedStructure(struct, tuple(positions), tuple(traces))


def is_partial_isomorphism(a: Structure, b: Structure,
                           a_sets: Sequence[Iterable[int] | int],
                           b_sets: Sequence[Iterable[int] | int],
                           pi: Mapping[int, int]) -> bool:
    """Check that pi preserves E, the labels, and set membership both ways."""
    if len(a_sets) != len(b_sets):
        raise RwmsoError("set tuples differ in length")
    a_masks = _as_masks(a.n, a_sets)
    b_masks = _as_masks(b.n, b_sets)
    items = list(pi.items())
    if len({v for _, v in items}) != len(items):
        return False
    for u, v in items:
        if not (0 <= u < a.n and 0 <= v < b.n):
            return False
        if a.labels[u] != b.labels[v]:
            return False
        for am, bm in zip(a_masks, b_masks):
            if ((am >> u) & 1) != ((bm >> v) & 1):
                return False
        for u2, v2 in items:
            if a.has_edge(u, u2) != b.has_edge(v, v2):
                return False
    return True


def generated_subspace(g: Structure, x: Iterable[int]) -> tuple[int, ...]:
    """Canonical basis of the subspace spanned by the labels of X."""
    return gf2.row_echelon(g.labels[u] for u in x)


def subspaces_orthogonal(b1: Iterable[int], b2: Iterable[int]) -> bool:
    """True iff every vector of b1 is orthogonal to every vector of b2."""
    b2 = tuple(b2)
    return all(gf2.dot(v1, v2) == 0 for v1 in b1 for v2 in b2)


# --- graph text format -------------------------------------------------
#
# header "p graph <n> <m> <t>", then "v <id> <t-bit label string>" lines
# (optional; labels default to all-zero) and "e <u> <v>" lines.  Lines
# starting with "c" are comments.

def parse_graph(text: str) -> Structure:
    n = m = t = None
    labels: list[int] = []
    edges: list[tuple[int, int]] = []
    seen_edges = 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise RwmsoError(f"line {lineno}: duplicate header")
            if len(parts) != 5 or parts[1] != "graph":
                raise RwmsoError(f"line {lineno}: expected 'p graph <n> <m> <t>'")
            n, m, t = int(parts[2]), int(parts[3]), int(parts[4])
            labels = [0] * n
        elif parts[0] == "v":
            if n is None:
                raise RwmsoError(f"line {lineno}: vertex line before header")
            if len(parts) != 3:
                raise RwmsoError(f"line {lineno}: expected 'v <id> <bits>'")
            u = int(parts[1])
            bits = parts[2]
            if not 0 <= u < n:
                raise RwmsoError(f"line {lineno}: vertex {u} out of range")
            if len(bits) != t or set(bits) - {"0", "1"}:
                raise RwmsoError(f"line {lineno}: label must be {t} bits")
            labels[u] = sum(1 << i for i, ch in enumerate(bits) if ch == "1")
        elif parts[0] == "e":
            if n is None:
                raise RwmsoError(f"line {lineno}: edge line before header")
            u, v = int(parts[1]), int(parts[2])
            if not (0 <= u < n and 0 <= v < n):
                raise RwmsoError(f"line {lineno}: edge endpoint out of range")
            edges.append((u, v))
            seen_edges += 1
        else:
            raise RwmsoError(f"line {lineno}: unknown line type {parts[0]!r}")
    if n is None:
        raise RwmsoError("missing 'p graph' header")
    if seen_edges != m:
        raise RwmsoError(f"header declares {m} edges, found {seen_edges}")
    return build_structure(n, edges, t, labels)


def format_graph(g: Structure) -> str:
    lines = [f"p graph {g.n} {g.num_edges()} {g.t}"]
    for u in range(g.n):
        if g.labels[u]:
            bits = "".join("1" if (g.labels[u] >> i) & 1 else "0" for i in range(g.t))
            lines.append(f"v {u} {bits}")
    for u, v in g.edges():
        lines.append(f"e {u} {v}")
    return "\n".join(lines) + "\n"
