"""Sliding-block codes between sofic shifts.

The central construction is the arrow graph of a code over a chosen
presentation of its domain: vertices are (window-1)-paths, edges are
window-paths carrying both the produced symbol and the consumed domain
symbol. Images, fibers, closing properties and products all reduce to
label-product searches on arrow graphs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import graph as gr
from . import shifts as sh
from .automata import Budget, bfs_closure, nontrivial_components, tarjan_scc
from .decision import inconclusive, proved, refuted
from .errors import (
    AlphabetMismatch,
    BudgetExceeded,
    ConsistencyFault,
    DomainMismatch,
    InvariantViolation,
    NotFiniteToOne,
    PeriodicPointNotInShift,
    WordNotAdmissible,
    WordTooShort,
)
from .graph import Edge, LabeledGraph
from .shifts import SoficShift


@dataclass(frozen=True, eq=False)
class SlidingBlockCode:
    """A block map with the given memory and anticipation.

    The table assigns one output symbol to every admissible domain word
    of length memory + anticipation + 1; totality and exactness of the
    key set are enforced so evaluation can never fall off the table.
    """

    domain: SoficShift
    memory: int
    anticipation: int
    table: dict
    codomain_alphabet: tuple

    @classmethod
    def make(cls, domain, memory, anticipation, table, codomain_alphabet=None):
        table = {tuple(k): v for k, v in table.items()}
        if codomain_alphabet is None:
            codomain_alphabet = sorted(set(table.values()))
        return cls(domain, int(memory), int(anticipation), table,
                   tuple(codomain_alphabet))

    def __post_init__(self):
        if self.memory < 0 or self.anticipation < 0:
            raise DomainMismatch("memory and anticipation must be >= 0")
        w = self.window
        required = set(self.domain.language(w))
        given = set(self.table)
        missing = required - given
        extra = given - required
        if missing:
            raise DomainMismatch(
                f"table missing {len(missing)} admissible windows, "
                f"e.g. {''.join(sorted(missing)[0])!r}"
            )
        if extra:
            raise DomainMismatch(
                f"table has {len(extra)} inadmissible windows, "
                f"e.g. {''.join(sorted(extra)[0])!r}"
            )
        bad = sorted(set(self.table.values()) - set(self.codomain_alphabet))
        if bad:
            raise AlphabetMismatch(f"table produces {bad[0]!r} outside codomain")

    @property
    def window(self):
        return self.memory + self.anticipation + 1

    def apply_block(self, word):
        """Slide the table over a word; output is shorter by window-1."""
        w = self.window
        word = tuple(word)
        if len(word) < w:
            raise WordTooShort(f"need at least {w} symbols, got {len(word)}")
        out = []
        for i in range(len(word) - w + 1):
            key = word[i:i + w]
            if key not in self.table:
                raise WordNotAdmissible(key)
            out.append(self.table[key])
        return tuple(out)

    def apply_periodic(self, block):
        """Image of the periodic point block^infinity, as one period."""
        block = tuple(block)
        if not sh.has_periodic_point(self.domain, block):
            raise PeriodicPointNotInShift(block)
        p = len(block)
        out = []
        for i in range(p):
            key = tuple(block[(i - self.memory + j) % p]
                        for j in range(self.window))
            out.append(self.table[key])
        return tuple(out)


def identity_code(x):
    table = {(s,): s for s in x.alphabet}
    return SlidingBlockCode.make(x, 0, 0, table, x.alphabet)


def relabel_code(x, mapping):
    """One-block code applying a symbol substitution."""
    table = {(s,): mapping[s] for s in x.alphabet}
    return SlidingBlockCode.make(x, 0, 0, table)


# -- arrow graphs ----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Recoded:
    """A code re-expressed as a one-block labeling of window paths.

    graph carries the produced symbols as labels; x_sym maps each arrow
    edge back to the domain symbol read at the window's center, and
    base_path to the underlying path of base edges.
    """

    code: SlidingBlockCode
    base: LabeledGraph
    graph: LabeledGraph
    x_sym: dict
    base_path: dict


def arrow_graph(code, base=None):
    """Recode over a presentation of the domain (default: its own).

    An edge is a window-length path of base edges; it produces the table
    value of its label word and consumes the label of the edge sitting
    at offset memory inside the window. Bi-infinite arrow paths are in
    natural bijection with bi-infinite base paths.
    """
    if base is None:
        base = code.domain.presentation
    base = gr.trim(base)
    w = code.window
    if w == 1:
        edges = []
        x_sym = {}
        base_path = {}
        for e in base.edges:
            edges.append(Edge(e.id, e.src, e.dst, code.table[(e.label,)]))
            x_sym[e.id] = e.label
            base_path[e.id] = (e.id,)
        g = LabeledGraph.make(code.codomain_alphabet, base.vertices, edges)
        return Recoded(code, base, gr.trim(g), x_sym, base_path)

    # enumerate paths of length w-1 (vertices) and w (edges)
    paths = [(e,) for e in base.edges]
    for _ in range(w - 2):
        paths = [p + (f,) for p in paths for f in base.out[p[-1].dst]]
    vertex_names = ["~".join(e.id for e in p) for p in paths]
    edges = []
    x_sym = {}
    base_path = {}
    for p in paths:
        for f in base.out[p[-1].dst]:
            q = p + (f,)
            name = "~".join(e.id for e in q)
            label = code.table[tuple(e.label for e in q)]
            edges.append(Edge(name, "~".join(e.id for e in p),
                              "~".join(e.id for e in q[1:]), label))
            x_sym[name] = q[code.memory].label
            base_path[name] = tuple(e.id for e in q)
    g = LabeledGraph.make(code.codomain_alphabet, vertex_names, edges)
    g = gr.trim(g)
    live = {e.id for e in g.edges}
    return Recoded(code, base, g,
                   {k: v for k, v in x_sym.items() if k in live},
                   {k: v for k, v in base_path.items() if k in live})


def image_presentation(code):
    """Presentation of the image shift: the arrow graph's produced labels."""
    return SoficShift.from_graph(arrow_graph(code).graph)


def is_surjective_onto(code, y):
    return sh.shift_equal(image_presentation(code), y)


def compose(outer, inner):
    """The code outer after inner; memory and anticipation add."""
    if set(inner.codomain_alphabet) - set(outer.domain.alphabet):
        raise DomainMismatch("inner codomain alphabet exceeds outer domain")
    if not gr.is_sublanguage(image_presentation(inner).presentation,
                             outer.domain.presentation):
        raise DomainMismatch("image of inner code leaves outer domain")
    m = outer.memory + inner.memory
    n = outer.anticipation + inner.anticipation
    w = m + n + 1
    table = {}
    for word in inner.domain.language(w):
        table[word] = outer.apply_block(inner.apply_block(word))[0]
    return SlidingBlockCode.make(inner.domain, m, n, table,
                                 outer.codomain_alphabet)


def code_equal(c1, c2):
    """Same domain shift and same induced map on it."""
    if not sh.shift_equal(c1.domain, c2.domain):
        return False
    m = max(c1.memory, c2.memory)
    n = max(c1.anticipation, c2.anticipation)
    for word in c1.domain.language(m + n + 1):
        i1 = m - c1.memory
        i2 = m - c2.memory
        k1 = word[i1:i1 + c1.window]
        k2 = word[i2:i2 + c2.window]
        if c1.table[k1] != c2.table[k2]:
            return False
    return True


# -- cover maps ------------------------------------------------------------


def is_cover_map(code):
    """Is this the label map of a presentation, seen from its edge shift?

    True when the domain presentation labels every edge by its own id
    and the code is a one-block map.
    """
    if code.memory or code.anticipation:
        return False
    g = code.domain.presentation
    return all(e.label == e.id for e in g.edges)


def cover_graph(code):
    """For a cover map, the labeled graph whose label map it is."""
    if not is_cover_map(code):
        raise DomainMismatch("not a cover map (edge shift domain, one-block)")
    g = code.domain.presentation
    return LabeledGraph.make(
        code.codomain_alphabet, g.vertices,
        (Edge(e.id, e.src, e.dst, code.table[(e.label,)]) for e in g.edges),
    )


def cover_code(g, codomain_alphabet=None):
    """The label map of a graph as a code on its edge shift."""
    t = gr.trim(g)
    dom = sh.edge_shift(t)
    table = {(e.id,): e.label for e in t.edges}
    return SlidingBlockCode.make(
        dom, 0, 0, table, codomain_alphabet or t.symbols
    )


# -- preimage counting on periodic points -----------------------------------


def count_preimages_of_periodic(g, block):
    """Number of bi-infinite paths of g labeled by the periodic point.

    On the trimmed phase graph the count is finite iff every vertex has
    in- and out-degree exactly one (a disjoint union of cycles): any
    branching vertex admits arbitrarily delayed entries or exits along a
    feeding cycle, all presenting the same periodic point. In the finite
    case each path is pinned by its phase-zero vertex.
    """
    block = tuple(block)
    pg = sh.periodic_phase_graph(g, block)
    if pg.n == 0:
        raise PeriodicPointNotInShift(block)
    for v in pg.vertices:
        if len(pg.out[v]) != 1 or len(pg.inn[v]) != 1:
            return math.inf
    return sum(1 for v in pg.vertices if v.endswith("@0"))


def preimage_count_of_code(code, block):
    """Fiber size of the code over the periodic point block^infinity.

    Counted on the arrow graph over a right-resolving domain
    presentation, quotiented by runs: distinct domain points, not paths.
    """
    block = tuple(block)
    d = gr.determinize(code.domain.presentation)
    a = arrow_graph(code, d)
    pg = sh.periodic_phase_graph(a.graph, block)
    if pg.n == 0:
        raise PeriodicPointNotInShift(block)
    for v in pg.vertices:
        if len(pg.out[v]) != 1 or len(pg.inn[v]) != 1:
            return math.inf
    # walk each cycle once; its anchorings at phase-zero vertices present
    # the rotations of the consumed word by multiples of the period, and
    # distinct points are exactly distinct rotations
    p = len(block)
    points = set()
    seen = set()
    for v in pg.vertices:
        if v in seen or not v.endswith("@0"):
            continue
        cur = v
        word = []
        while True:
            seen.add(cur)
            e = pg.out[cur][0]
            word.append(a.x_sym[e.id.rsplit("@", 1)[0]])
            cur = e.dst
            if cur == v:
                break
        word = tuple(word)
        for r in range(0, len(word), p):
            points.add(word[r:] + word[:r])
    return len(points)


# -- finite-to-one via ambiguity patterns -----------------------------------


def _equal_label_pairs(g):
    """Ordered pair product over equal labels; nodes and edge pairs by index."""
    vx = g.vindex
    nodes = {}
    for i in range(g.n):
        for j in range(g.n):
            nodes[(i, j)] = len(nodes)
    edges = []
    by_label = {}
    for e in g.edges:
        by_label.setdefault(e.label, []).append(e)
    for label, es in by_label.items():
        for e in es:
            for f in es:
                edges.append((nodes[(vx[e.src], vx[f.src])],
                              nodes[(vx[e.dst], vx[f.dst])],
                              e, f))
    return nodes, edges


def _has_eda(g):
    """Two distinct equally-labeled cycles at one vertex (pumpable doubling)."""
    nodes, edges = _equal_label_pairs(g)
    adj = [[] for _ in nodes]
    for a, b, e, f in edges:
        adj[a].append(b)
    comp, count = tarjan_scc(len(nodes), adj)
    alive = nontrivial_components(len(nodes), adj, comp, count)
    diagonal_comps = set()
    for v in range(g.n):
        c = comp[v * g.n + v]
        if c in alive:
            diagonal_comps.add(c)
    for a, b, e, f in edges:
        if e.id != f.id and comp[a] == comp[b] and comp[a] in diagonal_comps:
            return (e.id, f.id)
    return None


def _has_ida(g, budget=None):
    """A word cycling at p, cycling at q, and leading p to q (p != q)."""
    n = g.n
    vx = g.vindex
    # cheap word-free prefilter on the ordered pair graph
    nodes, edges = _equal_label_pairs(g)
    padj = [[] for _ in nodes]
    for a, b, _, _ in edges:
        padj[a].append(b)
    preach = [set(bfs_closure([i], lambda k: padj[k])) for i in range(len(nodes))]

    by_start = {}
    for e in g.edges:
        by_start.setdefault((e.label, e.src), []).append(e)
    labels = sorted({e.label for e in g.edges})

    def succs(t):
        a, b, c = t
        out = set()
        for label in labels:
            for ea in by_start.get((label, g.vertices[a]), ()):
                for eb in by_start.get((label, g.vertices[b]), ()):
                    for ec in by_start.get((label, g.vertices[c]), ()):
                        out.add((vx[ea.dst], vx[eb.dst], vx[ec.dst]))
        return out

    if budget is None:
        budget = Budget(where="ambiguity pattern")
    for p in range(n):
        for q in range(n):
            if p == q:
                continue
            # a joint word must at least exist componentwise
            if p * n + q not in preach[p * n + p]:
                continue
            if q * n + q not in preach[p * n + q]:
                continue
            seen = bfs_closure([(p, p, q)], succs, budget)
            if (p, q, q) in seen:
                return (g.vertices[p], g.vertices[q])
    return None


def is_finite_to_one(code):
    """Decide whether every fiber of the induced map is finite.

    Checked as bounded path ambiguity of the produced-label arrow graph
    over a right-resolving domain presentation: no vertex carries two
    distinct equally-labeled cycles, and no word simultaneously cycles
    at two vertices while leading one to the other. Either pattern pumps
    to infinitely many presentations of one periodic image point; their
    absence bounds every fiber by a constant.
    """
    d = gr.determinize(code.domain.presentation)
    a = arrow_graph(code, d)
    g = a.graph
    try:
        eda = _has_eda(g)
        if eda is not None:
            return refuted({"pattern": "doubled cycle",
                            "edges": [eda[0], eda[1]],
                            "note": "two distinct equally-producing cycles "
                                    "through one state"})
        ida = _has_ida(g)
        if ida is not None:
            return refuted({"pattern": "cycle to cycle",
                            "states": [ida[0], ida[1]],
                            "note": "one produced word cycles at both states "
                                    "and also leads the first to the second"})
    except BudgetExceeded as exc:
        return inconclusive({"reason": str(exc)})
    dec = proved({"states": g.n, "edges": len(g.edges)})
    # finite-to-one factor maps preserve entropy; disagreement means a bug
    h_dom = sh.entropy(code.domain)
    h_img = sh.entropy(image_presentation(code))
    if not (h_dom == h_img or abs(h_dom - h_img) <= 1e-9):
        raise ConsistencyFault(
            "finite-to-one entropy audit",
            f"domain {h_dom!r} vs image {h_img!r}",
        )
    return dec


# -- degree ------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DegreeResult:
    degree: int
    word: tuple
    index: int
    fiber_edges: tuple


def degree(code):
    """Minimal fiber size of a finite-to-one code on an irreducible domain.

    Works on the arrow graph over the minimal cover of the domain, where
    bi-infinite paths and domain points agree on a residual set. For
    each produced word and marked position, the relation of (start
    vertex, marked edge, end vertex) triples over presenting paths is
    closed under one-symbol extensions on both sides; the degree is the
    least middle-edge count over all reachable nonempty relations.
    """
    f2o = is_finite_to_one(code)
    if not f2o.is_proved:
        raise NotFiniteToOne("degree needs a finite-to-one code")
    cover = sh.fischer_cover(code.domain)  # raises ReducibleShift
    a = arrow_graph(code, cover)
    g = a.graph
    vx = g.vindex
    eix = {e.id: k for k, e in enumerate(g.edges)}
    n = g.n

    def encode(si, ek, ti):
        return (si * len(g.edges) + ek) * n + ti

    by_label_out = {}
    by_label_in = {}
    for e in g.edges:
        by_label_out.setdefault((e.label, e.src), []).append(e)
        by_label_in.setdefault((e.label, e.dst), []).append(e)

    def middles(rel):
        return {t // n % len(g.edges) for t in rel}

    seeds = []
    for s in sorted(g.symbols):
        rel = frozenset(
            encode(vx[e.src], eix[e.id], vx[e.dst])
            for e in g.edges if e.label == s
        )
        if rel:
            seeds.append((rel, ((s,), 0)))

    budget = Budget(where="degree")
    parent = {}
    queue = []
    for rel, meta in seeds:
        if rel not in parent:
            parent[rel] = (None, meta)
            queue.append(rel)
    best = None
    head = 0
    while head < len(queue):
        rel = queue[head]
        head += 1
        word, idx = parent[rel][1]
        size = len(middles(rel))
        if best is None or size < best[0]:
            best = (size, word, idx, rel)
            if size == 1:
                break
        for s in sorted(g.symbols):
            right = set()
            left = set()
            for t in rel:
                ti = t % n
                ek = t // n % len(g.edges)
                si = t // n // len(g.edges)
                for e in by_label_out.get((s, g.vertices[ti]), ()):
                    right.add(encode(si, ek, vx[e.dst]))
                for e in by_label_in.get((s, g.vertices[si]), ()):
                    left.add(encode(vx[e.src], ek, ti))
            for rel2, meta in ((frozenset(right), (word + (s,), idx)),
                               (frozenset(left), ((s,) + word, idx + 1))):
                if rel2 and rel2 not in parent:
                    budget.spend()
                    parent[rel2] = (rel, meta)
                    queue.append(rel2)

    size, word, idx, rel = best
    fiber = tuple(sorted(g.edges[k].id for k in middles(rel)))
    return DegreeResult(size, word, idx, fiber)


# -- closing properties ------------------------------------------------------


def _pair_bfs(adj, sources, is_goal):
    """BFS over adjacency rows of (succ, e, f); returns (start, goal, steps)
    with steps the (e, f) pairs in forward order, or None."""
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
        if is_goal(i):
            steps = []
            cur = i
            while parent[cur] is not None:
                cur, step = parent[cur]
                steps.append(step)
            return cur, i, steps[::-1]
        for j, e, f in adj[i]:
            if j not in parent:
                parent[j] = (i, (e, f))
                queue.append(j)
    return None


def _pair_cycle(adj, anchor):
    """Shortest nonempty cycle of (e, f) steps through anchor, or None."""
    best = None
    for j0, e0, f0 in adj[anchor]:
        if j0 == anchor:
            return [(e0, f0)]
    for j0, e0, f0 in adj[anchor]:
        r = _pair_bfs(adj, [j0], lambda i: i == anchor)
        if r is not None:
            cand = [(e0, f0)] + r[2]
            if best is None or len(cand) < len(best):
                best = cand
    return best


def _closing_refutation(code, side):
    """Core search for a closing failure on one side.

    Two image-equal domain points that agree on an infinite past (resp.
    future) but differ afterwards correspond, on the ordered pair
    product of the arrow graph over equal produced symbols, to a node
    reachable inside the consumed-symbol diagonal from one of its
    cycles, carrying an off-diagonal outgoing pair that still extends
    forward forever.
    """
    if side == "left":
        g0 = gr.reverse(code.domain.presentation)
        table = {tuple(reversed(k)): v for k, v in code.table.items()}
        code = SlidingBlockCode.make(
            SoficShift.from_graph(g0), code.anticipation, code.memory,
            table, code.codomain_alphabet)
    d = gr.determinize(code.domain.presentation)
    a = arrow_graph(code, d)
    g = a.graph
    x_of = a.x_sym

    by_label = {}
    for e in g.edges:
        by_label.setdefault(e.label, []).append(e)
    vx = g.vindex
    nn = g.n * g.n
    diag_adj = [[] for _ in range(nn)]
    off_adj = [[] for _ in range(nn)]
    full_adj = [[] for _ in range(nn)]
    for label, es in by_label.items():
        for e in es:
            for f in es:
                aa = vx[e.src] * g.n + vx[f.src]
                bb = vx[e.dst] * g.n + vx[f.dst]
                full_adj[aa].append((bb, e, f))
                if x_of[e.id] == x_of[f.id]:
                    diag_adj[aa].append((bb, e, f))
                else:
                    off_adj[aa].append((bb, e, f))

    bare = [[b for b, _, _ in row] for row in diag_adj]
    comp, count = tarjan_scc(nn, bare)
    alive = nontrivial_components(nn, bare, comp, count)
    cyc = {i for i in range(nn) if comp[i] in alive}
    if not cyc:
        return None
    reach = bfs_closure(sorted(cyc), lambda i: bare[i])

    # forward-viable pair nodes: can reach a cycle of the full pair graph
    fbare = [[b for b, _, _ in row] for row in full_adj]
    fcomp, fcount = tarjan_scc(nn, fbare)
    falive = nontrivial_components(nn, fbare, fcomp, fcount)
    frev = [[] for _ in range(nn)]
    for i, row in enumerate(fbare):
        for j in row:
            frev[j].append(i)
    fwd_ok = set(bfs_closure(
        sorted(i for i in range(nn) if fcomp[i] in falive),
        lambda i: frev[i]))

    for node in reach:
        for b, e, f in off_adj[node]:
            if b in fwd_ok:
                return _closing_witness(
                    x_of, node, (b, e, f), cyc, diag_adj, full_adj,
                    fwd_ok, side)
    return None


def _closing_witness(x_of, node, split, cyc, diag_adj, full_adj, fwd_ok, side):
    """Eventually periodic pair of domain symbol sequences, as words.

    Shape: (past cycle)^inf bridge split tail (future cycle)^inf, with
    both sides equal through the bridge and differing at the split.
    """
    rev = [[] for _ in diag_adj]
    for i, row in enumerate(diag_adj):
        for j, e, f in row:
            rev[j].append((i, e, f))
    back = _pair_bfs(rev, [node], lambda i: i in cyc)
    anchor = back[1]
    bridge = back[2][::-1]
    past = _pair_cycle(diag_adj, anchor)

    viable = [[(j, e, f) for j, e, f in row if j in fwd_ok]
              for row in full_adj]
    vbare = [[j for j, _, _ in row] for row in viable]
    vcomp, vcount = tarjan_scc(len(viable), vbare)
    valive = nontrivial_components(len(viable), vbare, vcomp, vcount)
    fw = _pair_bfs(viable, [split[0]], lambda i: vcomp[i] in valive)
    tail_anchor = fw[1]
    tail = fw[2]
    future = _pair_cycle(viable, tail_anchor)

    def xs(steps, k):
        return [x_of[step[k].id] for step in steps]

    return {
        "side": side,
        "past_cycle": xs(past, 0),
        "bridge": xs(bridge, 0),
        "split": [x_of[split[1].id], x_of[split[2].id]],
        "tail": [xs(tail, 0), xs(tail, 1)],
        "future_cycle": [xs(future, 0), xs(future, 1)],
        "note": "two image-equal points agreeing on the periodic past "
                "through the bridge and diverging at the split symbol",
    }


def is_right_closing(code):
    found = _closing_refutation(code, "right")
    if found is None:
        return proved({"side": "right"})
    return refuted(found)


def is_left_closing(code):
    found = _closing_refutation(code, "left")
    if found is None:
        return proved({"side": "left"})
    return refuted(found)


def is_bi_closing(code):
    r = is_right_closing(code)
    if r.is_refuted:
        return r
    l = is_left_closing(code)
    if l.is_refuted:
        return l
    return proved({"side": "both"})


# -- fiber products ----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FiberProduct:
    sigma: SoficShift
    psi1: SlidingBlockCode
    psi2: SlidingBlockCode
    phi1: SlidingBlockCode
    phi2: SlidingBlockCode


def fiber_product(phi1, phi2):
    """The shift of pairs (x1, x2) with equal images, with its projections.

    Built as the equal-produced-symbol product of the two arrow graphs,
    labeled by joined domain-symbol pairs. When one image contains the
    other, the projection onto the larger side must be onto; that is
    verified and violations raise, since it is a theorem.
    """
    for s in tuple(phi1.domain.alphabet) + tuple(phi2.domain.alphabet):
        if "|" in s:
            raise AlphabetMismatch(
                "domain symbols may not contain '|' (used to join pairs)")
    a1 = arrow_graph(phi1)
    a2 = arrow_graph(phi2)
    g1, g2 = a1.graph, a2.graph
    by_label = {}
    for f in g2.edges:
        by_label.setdefault(f.label, []).append(f)
    vertices = [f"{u}|{v}" for u in g1.vertices for v in g2.vertices]
    edges = []
    for e in g1.edges:
        for f in by_label.get(e.label, ()):
            pair = f"{a1.x_sym[e.id]}|{a2.x_sym[f.id]}"
            edges.append(Edge(f"{e.id}|{f.id}", f"{e.src}|{f.src}",
                              f"{e.dst}|{f.dst}", pair))
    alphabet = sorted({e.label for e in edges})
    prod = gr.trim(LabeledGraph.make(alphabet, vertices, edges))
    # trim keeps the declared alphabet; drop pair symbols with no live edge
    prod = LabeledGraph.make(sorted({e.label for e in prod.edges}),
                             prod.vertices, prod.edges)
    sigma = SoficShift(prod)
    if sigma.is_empty:
        raise DomainMismatch(
            "fiber product is empty: no pair of image-equal points")
    split = {s: tuple(s.split("|")) for s in sigma.alphabet}
    psi1 = SlidingBlockCode.make(
        sigma, 0, 0, {(s,): split[s][0] for s in sigma.alphabet},
        phi1.domain.alphabet)
    psi2 = SlidingBlockCode.make(
        sigma, 0, 0, {(s,): split[s][1] for s in sigma.alphabet},
        phi2.domain.alphabet)

    img1 = image_presentation(phi1)
    img2 = image_presentation(phi2)
    if gr.is_sublanguage(img1.presentation, img2.presentation):
        if not is_surjective_onto(psi1, phi1.domain):
            raise InvariantViolation(
                "fiber projection onto",
                "image(phi1) inside image(phi2) but psi1 not onto domain 1")
    if gr.is_sublanguage(img2.presentation, img1.presentation):
        if not is_surjective_onto(psi2, phi2.domain):
            raise InvariantViolation(
                "fiber projection onto",
                "image(phi2) inside image(phi1) but psi2 not onto domain 2")
    return FiberProduct(sigma, psi1, psi2, phi1, phi2)


# -- lifting through covers ---------------------------------------------------


def lift_code(f, x1, x2, w_max=6, budget=None):
    """Find a code F between the edge shifts of the minimal covers of x1
    and x2 with label2(F(xi)) = f(label1(xi)), by bounded window search.

    Variables are window paths of the first cover; each must pick a
    target edge producing the right symbol, and choices on overlapping
    windows must chain into paths. Returns the first code found in the
    deterministic sweep, or None when every window up to w_max fails
    (which proves nothing about larger windows).
    """
    if budget is None:
        budget = Budget(where="lift search")
    g1 = sh.fischer_cover(x1)
    g2 = sh.fischer_cover(x2)
    mf, nf = f.memory, f.anticipation
    for w in range(max(1, mf + nf + 1), w_max + 1):
        for mem in range(mf, w - nf):
            ant = w - 1 - mem
            sol = _lift_search(f, g1, g2, mem, ant, budget)
            if sol is not None:
                dom = sh.edge_shift(g1)
                code = SlidingBlockCode.make(dom, mem, ant, sol,
                                             sorted(e.id for e in g2.edges))
                _verify_lift(f, code, g1, g2)
                return code
    return None


def _lift_search(f, g1, g2, mem, ant, budget):
    w = mem + ant + 1
    paths = [(e,) for e in g1.edges]
    for _ in range(w - 1):
        paths = [p + (q,) for p in paths for q in g1.out[p[-1].dst]]
        budget.spend(len(paths))
    if not paths:
        return None
    mf = f.memory
    variables = ["~".join(e.id for e in p) for p in paths]
    path_of = dict(zip(variables, paths))
    domains = {}
    for var in variables:
        p = path_of[var]
        word = tuple(e.label for e in p)
        target = f.table[word[mem - mf: mem - mf + f.window]]
        options = sorted((e.id for e in g2.edges if e.label == target))
        if not options:
            return None
        domains[var] = options
    # consecutiveness: overlapping windows must map to consecutive edges
    succ_pairs = []
    by_prefix = {}
    for var in variables:
        by_prefix.setdefault(path_of[var][:-1], []).append(var)
    for var in variables:
        for var2 in by_prefix.get(path_of[var][1:], ()):
            succ_pairs.append((var, var2))
    e2 = g2.by_id

    assignment = {}
    order = sorted(variables)
    after = {}
    before = {}
    for a, b in succ_pairs:
        after.setdefault(a, []).append(b)
        before.setdefault(b, []).append(a)

    def consistent(var, val):
        for b in after.get(var, ()):
            if b in assignment and e2[val].dst != e2[assignment[b]].src:
                return False
        for a in before.get(var, ()):
            if a in assignment and e2[assignment[a]].dst != e2[val].src:
                return False
        return True

    def solve(i):
        if i == len(order):
            return True
        var = order[i]
        for val in domains[var]:
            budget.spend()
            if consistent(var, val):
                assignment[var] = val
                if solve(i + 1):
                    return True
                del assignment[var]
        return False

    if not solve(0):
        return None
    return {tuple(e.id for e in path_of[var]): assignment[var]
            for var in variables}


def _verify_lift(f, code, g1, g2):
    """Exact check: producing labels after lifting equals f after labels."""
    c1 = cover_code(g1)
    c2 = cover_code(g2)
    left = compose(c2, code)
    right = compose(f, c1)
    if not code_equal(left, right):
        raise InvariantViolation("lift commutes", "label map mismatch")
