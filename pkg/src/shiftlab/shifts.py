"""Sofic shift spaces: presentations, language queries, entropy, minimal
right-resolving covers, SFT detection and gap lengths.

A SoficShift is a trimmed labeled graph under the convention that points
of the shift are the label sequences of bi-infinite edge paths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

from . import graph as gr
from .automata import Budget, bfs_closure, nontrivial_components, tarjan_scc
from .decision import inconclusive, proved, refuted
from .errors import (
    BudgetExceeded,
    InvariantViolation,
    PeriodicPointNotInShift,
    ReducibleShift,
    WordNotInLanguage,
)
from .graph import Edge, LabeledGraph


@dataclass(frozen=True)
class SoficShift:
    presentation: LabeledGraph

    @classmethod
    def from_graph(cls, g):
        return cls(gr.trim(g))

    @property
    def alphabet(self):
        return self.presentation.symbols

    @cached_property
    def is_empty(self):
        return self.presentation.n == 0

    def accepts(self, word):
        return gr.accepts_word(self.presentation, word)

    def language(self, n):
        return gr.words_of_length(self.presentation, n)


def full_shift(symbols):
    g = LabeledGraph.make(
        sorted(symbols), ["*"], [(f"loop:{s}", "*", "*", s) for s in sorted(symbols)]
    )
    return SoficShift.from_graph(g)


def edge_shift(g):
    """The shift of bi-infinite edge sequences: each edge labeled by its id."""
    t = gr.trim(g)
    relabeled = LabeledGraph.make(
        sorted(e.id for e in t.edges),
        t.vertices,
        (Edge(e.id, e.src, e.dst, e.id) for e in t.edges),
    )
    return SoficShift(relabeled)


def shift_equal(x, y):
    return gr.shift_equal(x.presentation, y.presentation)


def entropy(x):
    """Topological entropy, natural log.

    Computed on a right-resolving presentation where the number of words
    and the number of paths agree up to a factor of the vertex count, so
    both have the same growth rate. Empty shift reports -inf.
    """
    d = gr.determinize(x.presentation)
    radius = gr.spectral_radius(d)
    if radius == 0.0:
        return float("-inf")
    return math.log(radius)


# -- minimal right-resolving cover ----------------------------------------


def _follower_merge(g):
    """Quotient a right-resolving graph by follower-set equality.

    Moore partition refinement; two vertices merge iff they admit the
    same label sets and their successors merge symbol by symbol.
    """
    sig0 = {}
    for v in g.vertices:
        sig0[v] = tuple(sorted({e.label for e in g.out[v]}))
    blocks = {}
    for v in g.vertices:
        blocks.setdefault(sig0[v], []).append(v)
    block_of = {}
    for i, key in enumerate(sorted(blocks)):
        for v in blocks[key]:
            block_of[v] = i
    step = {}
    for v in g.vertices:
        step[v] = {e.label: e.dst for e in g.out[v]}
    while True:
        sig = {
            v: tuple(
                sorted((s, block_of[w]) for s, w in step[v].items())
            )
            for v in g.vertices
        }
        regroup = {}
        for v in g.vertices:
            regroup.setdefault((block_of[v], sig[v]), []).append(v)
        if len(regroup) == len(set(block_of.values())):
            break
        block_of = {}
        for i, key in enumerate(sorted(regroup)):
            for v in regroup[key]:
                block_of[v] = i
    # representative = first member in vertex order
    reps = {}
    for v in g.vertices:
        reps.setdefault(block_of[v], v)
    name = {b: reps[b] for b in reps}
    vertices = [name[b] for b in sorted(reps)]
    edges = []
    for b in sorted(reps):
        r = reps[b]
        for e in sorted(g.out[r], key=lambda e: e.label):
            edges.append(
                Edge(f"{name[b]}>{e.label}", name[b], name[block_of[e.dst]], e.label)
            )
    return LabeledGraph.make(g.symbols, vertices, edges)


def fischer_cover(x):
    """Minimal right-resolving presentation of an irreducible sofic shift.

    Determinize, pick the smallest irreducible piece that still presents
    the whole shift, then merge follower-equivalent vertices. Raises
    ReducibleShift when no irreducible piece carries the full language.
    The result is checked against the defining properties before return.
    """
    if x.is_empty:
        raise ReducibleShift("empty shift has no irreducible cover")
    d = gr.determinize(x.presentation)
    candidates = []
    for c in gr.scc_components(d):
        if c.trivial:
            continue
        sub = gr.subgraph(d, c.vertices)
        if gr.is_sublanguage(d, sub):
            candidates.append(sub)
    if not candidates:
        raise ReducibleShift("no strongly connected piece presents the shift")
    best = min(candidates, key=lambda h: (h.n, h.vertices))
    cover = _follower_merge(best)
    if not gr.is_irreducible(cover):
        raise InvariantViolation("fischer cover irreducible")
    gr.check_right_resolving(cover)
    if not gr.shift_equal(cover, d):
        raise InvariantViolation("fischer cover presents the same shift")
    if gr.find_magic_word(cover) is None:
        raise InvariantViolation("fischer cover admits a focusing word")
    return cover


def is_irreducible_shift(x):
    try:
        fischer_cover(x)
        return True
    except ReducibleShift:
        return False


def find_magic_word(x):
    """Shortest focusing word of the minimal cover (empty tuple allowed)."""
    return gr.find_magic_word(fischer_cover(x))


def is_synchronizing_word(x, word):
    """Does every occurrence of the word pin down the same follower set?

    Checked on the minimal cover: the word must focus the full vertex
    set to a singleton. Raises WordNotInLanguage on inadmissible input.
    """
    if not x.accepts(word):
        raise WordNotInLanguage(word)
    f = fischer_cover(x)
    mask = f.full_mask
    for s in word:
        mask = f.ops.step(mask, f.sym_index[s])
    return mask & (mask - 1) == 0


# -- periodic points -------------------------------------------------------


def periodic_phase_graph(g, block):
    """Paths of this graph presenting the periodic point (block)^infinity,
    with phase tracked mod the block length. Trimmed."""
    p = len(block)
    if p == 0:
        raise PeriodicPointNotInShift(block)
    vertices = [f"{v}@{i}" for i in range(p) for v in g.vertices]
    edges = []
    for i in range(p):
        for e in g.edges:
            if e.label == block[i]:
                edges.append(
                    Edge(f"{e.id}@{i}", f"{e.src}@{i}", f"{e.dst}@{(i + 1) % p}",
                         e.label)
                )
    return gr.trim(LabeledGraph.make(g.alphabet, vertices, edges))


def has_periodic_point(x, block):
    return periodic_phase_graph(x.presentation, block).n > 0


# -- SFT detection ---------------------------------------------------------


def is_sft(x, m_max=32):
    """Decide whether the shift is of finite type, and find the memory.

    Works on a right-resolving presentation. For each symbol s the pair
    (follow set of s u, follow set of u) is tracked while u grows. The
    word s u violates memory |u| when s u is admissible but its follower
    language differs from that of u; the shift fails to be SFT exactly
    when such violations occur at unbounded depth, which over the finite
    pair graph means: some violating pair is reachable from a cycle.
    Otherwise the minimal memory is one more than the deepest violation.
    """
    d = gr.determinize(x.presentation)
    if d.n == 0:
        # empty shift: vacuously a 1-step SFT with no allowed symbols
        return proved({"memory": 1, "note": "empty shift"})
    ops = d.ops
    full = d.full_mask
    budget = Budget(where="is_sft")

    seeds = []
    for i, s in enumerate(d.symbols):
        a = ops.step(full, i)
        if a:
            seeds.append(((a, full), s))
    try:
        nodes = {}
        order = []
        for node, _ in seeds:
            if node not in nodes:
                nodes[node] = len(nodes)
                order.append(node)
        succ = []
        head = 0
        while head < len(order):
            a, b = order[head]
            head += 1
            row = []
            for i, s in enumerate(d.symbols):
                b2 = ops.step(b, i)
                if not b2:
                    continue
                a2 = ops.step(a, i)
                node = (a2, b2)
                if node not in nodes:
                    budget.spend()
                    nodes[node] = len(nodes)
                    order.append(node)
                row.append((nodes[node], s))
            succ.append(row)
    except BudgetExceeded as exc:
        return inconclusive({"reason": str(exc)})

    # the followers of (a, b) differ iff some continuation kills the small
    # side while the big side survives; close backwards over those deaths
    lethal = {}
    for idx, (a, b) in enumerate(order):
        for i, s in enumerate(d.symbols):
            if ops.step(b, i) and not ops.step(a, i):
                lethal[idx] = s
                break
    pred = [[] for _ in order]
    for idx, row in enumerate(succ):
        for j, _ in row:
            pred[j].append(idx)
    differ = set(lethal)
    queue = list(differ)
    while queue:
        j = queue.pop()
        for i in pred[j]:
            if i not in differ:
                differ.add(i)
                queue.append(i)
    # a violation additionally needs the small side alive: dead small side
    # only says the longer word is inadmissible, which is no constraint
    bad = {i for i in differ if order[i][0] != 0}

    adj = [[j for j, _ in row] for row in succ]
    comp, count = tarjan_scc(len(order), adj)
    alive = nontrivial_components(len(order), adj, comp, count)
    cyclic = {i for i in range(len(order)) if comp[i] in alive}
    after_cycle = set(bfs_closure(sorted(cyclic), lambda i: adj[i]))

    pumped = sorted(bad & after_cycle)
    if pumped:
        target = pumped[0]
        into_target = set(bfs_closure([target], lambda i: pred[i]))
        payload = _sft_refutation(order, succ, seeds, nodes, lethal,
                                  cyclic & into_target, target)
        return refuted(payload)

    if not bad:
        return proved({"memory": 1, "pairs": len(order)})
    # longest seed-to-violation path; every such path avoids cycles here
    seed_ids = {nodes[node] for node, _ in seeds}
    depth = {i: 0 for i in seed_ids}
    # tarjan numbers components in reverse topological order
    topo = sorted(range(len(order)), key=lambda i: -comp[i])
    for i in topo:
        if i not in depth or i in after_cycle:
            continue
        for j in adj[i]:
            if j in after_cycle:
                continue
            if depth.get(j, -1) < depth[i] + 1:
                depth[j] = depth[i] + 1
    deepest = max(depth[i] for i in bad)
    memory = max(deepest + 1, 1)
    if memory > m_max:
        return inconclusive({"memory": memory, "m_max": m_max,
                             "note": "memory exceeds requested bound"})
    return proved({"memory": memory, "pairs": len(order)})


def _sft_path(succ, sources, goals):
    """BFS in the pair graph; returns (source hit, goal hit, symbol word)."""
    parent = {}
    queue = []
    for s in sources:
        if s not in parent:
            parent[s] = None
            queue.append(s)
    head = 0
    while head < len(queue):
        i = queue[head]
        head += 1
        if i in goals:
            word = []
            cur = i
            while parent[cur] is not None:
                cur, sym = parent[cur]
                word.append(sym)
            return cur, i, tuple(reversed(word))
        for j, sym in succ[i]:
            if j not in parent:
                parent[j] = (i, sym)
                queue.append(j)
    raise InvariantViolation("sft witness path", "goal unreachable")


def _sft_cycle(succ, entry):
    """Shortest nonempty symbol word around a cycle through entry."""
    parent = {}
    queue = []
    for j, sym in succ[entry]:
        if j == entry:
            return (sym,)
        if j not in parent:
            parent[j] = (None, sym)
            queue.append(j)
    head = 0
    while head < len(queue):
        i = queue[head]
        head += 1
        for j, sym in succ[i]:
            if j == entry:
                word = [sym]
                cur = i
                while True:
                    prev, s2 = parent[cur]
                    word.append(s2)
                    if prev is None:
                        break
                    cur = prev
                return tuple(reversed(word))
            if j not in parent:
                parent[j] = (i, sym)
                queue.append(j)
    raise InvariantViolation("sft witness cycle", "no cycle at entry")


def _sft_refutation(order, succ, seeds, nodes, lethal, cyclic, target):
    """Assemble a pumpable witness.

    With u(t) = stem cycle^t tail: u(t) extension and symbol u(t) are
    admissible for every t, while symbol u(t) extension never is. Any
    finite memory is exceeded once the pump makes u(t) long enough.
    """
    seed_ids = []
    seed_sym = {}
    for node, s in seeds:
        i = nodes[node]
        if i not in seed_sym:
            seed_sym[i] = s
            seed_ids.append(i)

    seed0, entry, stem = _sft_path(succ, seed_ids, cyclic)
    cycle = _sft_cycle(succ, entry)
    _, _, tail = _sft_path(succ, [entry], {target})
    _, end, ext = _sft_path(succ, [target], set(lethal))
    ext = ext + (lethal[end],)
    return {
        "symbol": seed_sym[seed0],
        "stem": list(stem),
        "cycle": list(cycle),
        "tail": list(tail),
        "extension": list(ext),
        "note": "with u(t) = stem cycle^t tail: u(t)+extension and "
                "symbol+u(t) are admissible for every t, but "
                "symbol+u(t)+extension never is",
    }


# -- gap length ------------------------------------------------------------


def uniform_gap_bound(x):
    """Smallest N so that for any admissible u, w some word v with
    |v| <= N makes u v w admissible.

    Exact value over the minimal cover: the worst case over reachable
    end-sets E and co-reachable start-sets S of the best connecting path
    length between them.
    """
    f = fischer_cover(x)
    ops = f.ops
    full = f.full_mask

    def closure(step):
        def expand(mask):
            for i in range(len(f.symbols)):
                m2 = step(mask, i)
                if m2:
                    yield m2
        return list(bfs_closure([full], expand))

    ends = closure(ops.step)
    starts = closure(ops.costep)

    dist = [[math.inf] * f.n for _ in range(f.n)]
    for v in range(f.n):
        dist[v][v] = 0
        queue = [v]
        head = 0
        while head < len(queue):
            u = queue[head]
            head += 1
            for w in f.adj[u]:
                if dist[v][w] == math.inf:
                    dist[v][w] = dist[v][u] + 1
                    queue.append(w)

    worst = 0
    for e_mask in ends:
        for s_mask in starts:
            best = math.inf
            for p in range(f.n):
                if not e_mask >> p & 1:
                    continue
                for q in range(f.n):
                    if s_mask >> q & 1 and dist[p][q] < best:
                        best = dist[p][q]
            if best == math.inf:
                raise InvariantViolation("gap connectivity",
                                         "irreducible cover disconnected")
            worst = max(worst, int(best))
    return worst
