"""Labeled directed multigraphs and the graph-level decision procedures.

A LabeledGraph presents a sofic shift: bi-infinite edge paths read off
their labels. Vertices, edges and symbols are plain strings; everything
is stored in tuples so graphs are immutable and hashable, and all
searches run on integer indexes derived once per graph.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np

from .automata import (
    Budget,
    SubsetOps,
    bfs_closure,
    nontrivial_components,
    tarjan_scc,
)
from .errors import (
    AlphabetMismatch,
    NotRightResolving,
    ParseError,
    UnknownVertex,
)


class Edge(NamedTuple):
    id: str
    src: str
    dst: str
    label: str


class Component(NamedTuple):
    vertices: tuple
    trivial: bool  # trivial = single vertex without a self loop


@dataclass(frozen=True)
class LabeledGraph:
    alphabet: tuple
    vertices: tuple
    edges: tuple

    @classmethod
    def make(cls, alphabet, vertices, edges):
        """Build from any iterables; edges may be Edge or (id, src, dst, label)."""
        return cls(
            tuple(alphabet),
            tuple(vertices),
            tuple(e if isinstance(e, Edge) else Edge(*e) for e in edges),
        )

    def __post_init__(self):
        seen = set()
        for a in self.alphabet:
            if not isinstance(a, str) or not a:
                raise ParseError(f"bad symbol {a!r}", field="alphabet")
            if a in seen:
                raise ParseError(f"duplicate symbol {a!r}", field="alphabet")
            seen.add(a)
        seen = set()
        for v in self.vertices:
            if not isinstance(v, str) or not v:
                raise ParseError(f"bad vertex name {v!r}", field="vertices")
            if v in seen:
                raise ParseError(f"duplicate vertex {v!r}", field="vertices")
            seen.add(v)
        vset = seen
        aset = set(self.alphabet)
        seen = set()
        for e in self.edges:
            if not isinstance(e.id, str) or not e.id:
                raise ParseError(f"bad edge id {e.id!r}", field="edges")
            if e.id in seen:
                raise ParseError(f"duplicate edge id {e.id!r}", field="edges")
            seen.add(e.id)
            if e.src not in vset:
                raise UnknownVertex(e.src)
            if e.dst not in vset:
                raise UnknownVertex(e.dst)
            if e.label not in aset:
                raise AlphabetMismatch(
                    f"edge {e.id!r} labeled {e.label!r}, not in alphabet"
                )

    # -- derived indexes, computed once ------------------------------------

    @cached_property
    def n(self):
        return len(self.vertices)

    @cached_property
    def vindex(self):
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def by_id(self):
        return {e.id: e for e in self.edges}

    @cached_property
    def out(self):
        table = {v: [] for v in self.vertices}
        for e in self.edges:
            table[e.src].append(e)
        return {v: tuple(es) for v, es in table.items()}

    @cached_property
    def inn(self):
        table = {v: [] for v in self.vertices}
        for e in self.edges:
            table[e.dst].append(e)
        return {v: tuple(es) for v, es in table.items()}

    @cached_property
    def adj(self):
        table = [[] for _ in range(self.n)]
        vx = self.vindex
        for e in self.edges:
            table[vx[e.src]].append(vx[e.dst])
        return table

    @cached_property
    def symbols(self):
        return tuple(sorted(self.alphabet))

    @cached_property
    def sym_index(self):
        return {s: i for i, s in enumerate(self.symbols)}

    @cached_property
    def ops(self):
        vx, sx = self.vindex, self.sym_index
        triples = [(vx[e.src], sx[e.label], vx[e.dst]) for e in self.edges]
        return SubsetOps(self.n, len(self.symbols), triples)

    @cached_property
    def full_mask(self):
        return (1 << self.n) - 1

    def mask_of(self, names):
        vx = self.vindex
        m = 0
        for v in names:
            if v not in vx:
                raise UnknownVertex(v)
            m |= 1 << vx[v]
        return m

    def names_of(self, mask):
        return tuple(v for i, v in enumerate(self.vertices) if mask >> i & 1)


def subgraph(g, keep):
    """Induced subgraph on the given vertex names (order preserved)."""
    keep = set(keep)
    return LabeledGraph.make(
        g.alphabet,
        (v for v in g.vertices if v in keep),
        (e for e in g.edges if e.src in keep and e.dst in keep),
    )


def scc_components(g):
    """All strongly connected components, each tagged trivial or not."""
    comp, count = tarjan_scc(g.n, g.adj)
    alive = nontrivial_components(g.n, g.adj, comp, count)
    members = [[] for _ in range(count)]
    for i, v in enumerate(g.vertices):
        members[comp[i]].append(v)
    out = [Component(tuple(ms), c not in alive) for c, ms in enumerate(members)]
    # order components by first vertex appearance, not tarjan's numbering
    pos = {v: i for i, v in enumerate(g.vertices)}
    out.sort(key=lambda c: pos[c.vertices[0]])
    return tuple(out)


def is_irreducible(g):
    """Strongly connected with at least one edge."""
    if g.n == 0 or not g.edges:
        return False
    comp, count = tarjan_scc(g.n, g.adj)
    return count == 1


def trim(g):
    """Restrict to vertices lying on bi-infinite paths.

    A vertex survives iff it is reachable from some cycle and can reach
    some cycle; the induced subgraph presents the same shift.
    """
    comp, count = tarjan_scc(g.n, g.adj)
    alive = nontrivial_components(g.n, g.adj, comp, count)
    if not alive:
        return LabeledGraph.make(g.alphabet, (), ())
    seeds = [i for i in range(g.n) if comp[i] in alive]
    fwd = set(bfs_closure(seeds, lambda v: g.adj[v]))
    radj = [[] for _ in range(g.n)]
    for v in range(g.n):
        for w in g.adj[v]:
            radj[w].append(v)
    bwd = set(bfs_closure(seeds, lambda v: radj[v]))
    keep = fwd & bwd
    return subgraph(g, (g.vertices[i] for i in sorted(keep)))


def is_right_resolving(g):
    for v in g.vertices:
        labels = set()
        for e in g.out[v]:
            if e.label in labels:
                return False
            labels.add(e.label)
    return True


def check_right_resolving(g):
    for v in g.vertices:
        labels = set()
        for e in g.out[v]:
            if e.label in labels:
                raise NotRightResolving(v, e.label)
            labels.add(e.label)


def reverse(g):
    """Same graph with every edge flipped; presents the transposed shift."""
    return LabeledGraph.make(
        g.alphabet,
        g.vertices,
        (Edge(e.id, e.dst, e.src, e.label) for e in g.edges),
    )


def disjoint_union(graphs):
    """Disjoint union; vertex and edge names get an index prefix."""
    alphabet = sorted({a for g in graphs for a in g.alphabet})
    vertices = []
    edges = []
    for i, g in enumerate(graphs):
        vertices.extend(f"{i}.{v}" for v in g.vertices)
        edges.extend(
            Edge(f"{i}.{e.id}", f"{i}.{e.src}", f"{i}.{e.dst}", e.label)
            for e in g.edges
        )
    return LabeledGraph.make(alphabet, vertices, edges)


def label_product(g1, g2):
    """Fiber product over labels: paths are pairs of equally labeled paths.

    Result is trimmed, so it presents the intersection of the two shifts.
    """
    common = sorted(set(g1.alphabet) & set(g2.alphabet))
    vertices = [f"{u}|{v}" for u in g1.vertices for v in g2.vertices]
    edges = []
    by_label = {}
    for e in g2.edges:
        by_label.setdefault(e.label, []).append(e)
    for e1 in g1.edges:
        for e2 in by_label.get(e1.label, ()):
            edges.append(
                Edge(f"{e1.id}|{e2.id}", f"{e1.src}|{e2.src}",
                     f"{e1.dst}|{e2.dst}", e1.label)
            )
    return trim(LabeledGraph.make(common, vertices, edges))


# -- subset construction -------------------------------------------------


def _mask_name(g, mask):
    names = g.names_of(mask)
    return names[0] if len(names) == 1 else "+".join(names)


def determinize(g, budget=None):
    """Right-resolving presentation of the same shift (subset construction).

    Starts from the full vertex set of the trimmed graph, so the subset
    automaton accepts exactly the language; the result is trimmed again
    because subset states can fail to be bi-extendable.
    """
    t = trim(g)
    if t.n == 0:
        return t
    if budget is None:
        budget = Budget(where="determinize")
    ops = t.ops

    def expand(mask):
        for i, _ in enumerate(t.symbols):
            m2 = ops.step(mask, i)
            if m2:
                yield m2

    seen = bfs_closure([t.full_mask], expand, budget)
    vertices = [_mask_name(t, m) for m in seen]
    edges = []
    for mask in seen:
        src = _mask_name(t, mask)
        for i, s in enumerate(t.symbols):
            m2 = ops.step(mask, i)
            if m2:
                edges.append(Edge(f"{src}>{s}", src, _mask_name(t, m2), s))
    return trim(LabeledGraph.make(t.symbols, vertices, edges))


def find_magic_word(g):
    """Shortest (then lexicographically least) word focusing the trimmed
    graph's full vertex set to a single vertex, or None if there is none.

    The graph must be right-resolving. The empty word counts when the
    trimmed graph has a single vertex.
    """
    t = trim(g)
    check_right_resolving(t)
    if t.n == 0:
        return None
    full = t.full_mask
    if full & (full - 1) == 0:
        return ()
    ops = t.ops
    parent = {full: None}
    queue = [full]
    head = 0
    while head < len(queue):
        mask = queue[head]
        head += 1
        for i, s in enumerate(t.symbols):
            m2 = ops.step(mask, i)
            if not m2 or m2 in parent:
                continue
            parent[m2] = (mask, s)
            if m2 & (m2 - 1) == 0:
                word = []
                cur = m2
                while parent[cur] is not None:
                    cur, sym = parent[cur]
                    word.append(sym)
                return tuple(reversed(word))
            queue.append(m2)
    return None


# -- language queries -----------------------------------------------------


def accepts_word(g, word):
    """Is the word the label of some bi-extendable path?"""
    t = trim(g)
    if t.n == 0:
        return False
    sx = t.sym_index
    mask = t.full_mask
    for s in word:
        if s not in sx:
            return False
        mask = t.ops.step(mask, sx[s])
        if not mask:
            return False
    return True


def words_of_length(g, n):
    """All admissible words of the given length, in lexicographic order."""
    t = trim(g)
    if t.n == 0:
        return []
    out = []
    stack = [((), t.full_mask)]
    while stack:
        word, mask = stack.pop()
        if len(word) == n:
            out.append(word)
            continue
        # push in reverse so the smallest symbol is explored first
        for i in range(len(t.symbols) - 1, -1, -1):
            m2 = t.ops.step(mask, i)
            if m2:
                stack.append((word + (t.symbols[i],), m2))
    return out


def sublanguage_counterexample(g1, g2, budget=None):
    """Shortest-ish word admissible in g1 but not in g2, or None.

    Walks the product of g1's trimmed graph with the subset automaton of
    g2's trimmed graph, hunting for the empty subset.
    """
    t1, t2 = trim(g1), trim(g2)
    if t1.n == 0:
        return None
    if t2.n == 0:
        return ()
    if budget is None:
        budget = Budget(where="sublanguage")
    sx2 = t2.sym_index
    full2 = t2.full_mask
    parent = {}
    queue = []
    for i, v in enumerate(t1.vertices):
        state = (i, full2)
        if state not in parent:
            parent[state] = None
            queue.append(state)
    head = 0
    while head < len(queue):
        state = queue[head]
        head += 1
        vi, mask = state
        v = t1.vertices[vi]
        for e in sorted(t1.out[v], key=lambda e: (e.label, e.id)):
            if e.label not in sx2:
                m2 = 0
            else:
                m2 = t2.ops.step(mask, sx2[e.label])
            if m2 == 0:
                word = [e.label]
                cur = state
                while parent[cur] is not None:
                    cur, sym = parent[cur]
                    word.append(sym)
                return tuple(reversed(word))
            nxt = (t1.vindex[e.dst], m2)
            if nxt not in parent:
                budget.spend()
                parent[nxt] = (state, e.label)
                queue.append(nxt)
    return None


def is_sublanguage(g1, g2, budget=None):
    return sublanguage_counterexample(g1, g2, budget) is None


def shift_equal(g1, g2):
    """Do the two graphs present the same shift space?"""
    return is_sublanguage(g1, g2) and is_sublanguage(g2, g1)


def are_isomorphic(g1, g2):
    """Labeled-graph isomorphism over matching alphabets (small graphs).

    Parallel edges count with multiplicity; edge ids are ignored.
    """
    if sorted(g1.alphabet) != sorted(g2.alphabet):
        return False
    if g1.n != g2.n or len(g1.edges) != len(g2.edges):
        return False

    def sig(g, v):
        outs = sorted((e.label, e.dst == v) for e in g.out[v])
        ins = sorted((e.label, e.src == v) for e in g.inn[v])
        return (tuple(outs), tuple(ins))

    s1 = {v: sig(g1, v) for v in g1.vertices}
    s2 = {v: sig(g2, v) for v in g2.vertices}
    if sorted(s1.values()) != sorted(s2.values()):
        return False

    def counts(g):
        c = {}
        for e in g.edges:
            k = (e.src, e.dst, e.label)
            c[k] = c.get(k, 0) + 1
        return c

    c1, c2 = counts(g1), counts(g2)
    order = sorted(g1.vertices, key=lambda v: (s1[v], v))
    cands = {
        v: [w for w in g2.vertices if s2[w] == s1[v]] for v in g1.vertices
    }

    def extend(i, mapping, used):
        if i == len(order):
            return True
        v = order[i]
        for w in cands[v]:
            if w in used:
                continue
            ok = True
            for (a, b, lab), k in c1.items():
                if a == v and b in mapping:
                    if c2.get((w, mapping[b], lab), 0) != k:
                        ok = False
                        break
                if b == v and a in mapping and a != v:
                    if c2.get((mapping[a], w, lab), 0) != k:
                        ok = False
                        break
                if a == v and b == v:
                    if c2.get((w, w, lab), 0) != k:
                        ok = False
                        break
            if not ok:
                continue
            mapping[v] = w
            used.add(w)
            if extend(i + 1, mapping, used):
                return True
            del mapping[v]
            used.discard(w)
        return False

    return extend(0, {}, set())


# -- spectral radius ------------------------------------------------------


def _perron_value(mat):
    """Perron root of an irreducible nonnegative integer matrix.

    Power iteration on mat + I (primitive once irreducible) with
    Collatz-Wielandt bounds; the running bracket is correct at every
    step, so the tolerance is a guaranteed enclosure, not a heuristic.
    """
    m = mat.shape[0]
    big = mat.astype(float) + np.eye(m)
    x = np.ones(m)
    lo, hi = 0.0, math.inf
    for _ in range(1_000_000):
        y = big @ x
        ratios = y / x
        lo = max(lo, float(ratios.min()))
        hi = min(hi, float(ratios.max()))
        if hi - lo <= 1e-12 * hi:
            break
        x = y / y.max()
    return (lo + hi) / 2.0 - 1.0


def spectral_radius(g):
    """Largest Perron root over the nontrivial strongly connected
    components of the edge-count matrix; 0.0 when there are none."""
    best = 0.0
    for c in scc_components(g):
        if c.trivial:
            continue
        idx = {v: i for i, v in enumerate(c.vertices)}
        mat = np.zeros((len(c.vertices), len(c.vertices)))
        for e in g.edges:
            if e.src in idx and e.dst in idx:
                mat[idx[e.src], idx[e.dst]] += 1
        best = max(best, _perron_value(mat))
    return best
