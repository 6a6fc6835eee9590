"""Canonical corpus of small presentations and codes.

Everything the tests, demos and the CLI exercise ships from here so the
acceptance run needs no external data. write_all freezes the corpus to
JSON files that round-trip byte-identically through the io module.
"""

from __future__ import annotations

import os

from . import io
from .codes import SlidingBlockCode, cover_code
from .graph import LabeledGraph
from .shifts import SoficShift, full_shift


def fig1_graph():
    """Two-component presentation: a golden-mean piece plus an isolated
    one-letter loop on the extra symbol 2."""
    return LabeledGraph.make(
        ["0", "1", "2"],
        ["v1", "v2", "w"],
        [("e1", "v1", "v1", "0"), ("e2", "v1", "v2", "1"),
         ("e3", "v2", "v1", "0"), ("e4", "w", "w", "2")],
    )


def fig1_shift():
    return SoficShift.from_graph(fig1_graph())


def fig1_code():
    """Collapse the isolated loop into the golden-mean piece (2 goes to 0).

    The image of the cylinder [2] is the single point 0^infinity, so this
    code is the stock example of a map that is not semi-open.
    """
    x = fig1_shift()
    return SlidingBlockCode.make(
        x, 0, 0, {("0",): "0", ("1",): "1", ("2",): "0"}, ["0", "1"]
    )


def golden_graph():
    """Golden-mean SFT: no two consecutive ones."""
    return LabeledGraph.make(
        ["0", "1"],
        ["v1", "v2"],
        [("e1", "v1", "v1", "0"), ("e2", "v1", "v2", "1"),
         ("e3", "v2", "v1", "0")],
    )


def golden_shift():
    return SoficShift.from_graph(golden_graph())


def golden_cover():
    return cover_code(golden_graph())


def even_graph():
    """Fischer cover of the even shift: ones separated by even runs of
    zeros."""
    return LabeledGraph.make(
        ["0", "1"],
        ["A", "B"],
        [("f1", "A", "A", "1"), ("f2", "A", "B", "0"), ("f3", "B", "A", "0")],
    )


def even_shift():
    return SoficShift.from_graph(even_graph())


def even_cover():
    return cover_code(even_graph())


def full_graph(k):
    return full_shift([str(i) for i in range(k)]).presentation


def phase_doubling_graph():
    """Bipartite two-vertex graph whose label map forgets the phase, a
    genuinely two-to-one cover of the full 2-shift."""
    return LabeledGraph.make(
        ["0", "1"],
        ["P", "Q"],
        [("x0", "P", "Q", "0"), ("x1", "P", "Q", "1"),
         ("y0", "Q", "P", "0"), ("y1", "Q", "P", "1")],
    )


def phase_doubling_code():
    return cover_code(phase_doubling_graph())


def right_closing_counterexample_graph():
    """Two equally labeled zero-loops reachable from one vertex: the label
    map merges a pair of left-asymptotic points, so it is not
    right-closing and not finite-to-one."""
    return LabeledGraph.make(
        ["0", "1"],
        ["c", "d1", "d2"],
        [("f1", "c", "d1", "0"), ("f2", "c", "d2", "0"),
         ("g1", "d1", "d1", "0"), ("g2", "d2", "d2", "0"),
         ("h1", "d1", "c", "1"), ("h2", "d2", "c", "1")],
    )


def right_closing_counterexample_code():
    return cover_code(right_closing_counterexample_graph())


# name -> (kind, builder); "shift" entries wrap the graph of the same name
GRAPHS = {
    "fig1": fig1_graph,
    "golden": golden_graph,
    "even": even_graph,
    "full2": lambda: full_graph(2),
    "full3": lambda: full_graph(3),
    "phase_doubling": phase_doubling_graph,
    "right_closing": right_closing_counterexample_graph,
}

COVERS = {
    "golden_cover": golden_cover,
    "even_cover": even_cover,
    "phase_doubling_cover": phase_doubling_code,
    "right_closing_cover": right_closing_counterexample_code,
}


def write_all(dirpath):
    """Freeze the corpus under dirpath; returns the file names written."""
    os.makedirs(dirpath, exist_ok=True)
    written = []

    def put(name, obj):
        io.save_json(os.path.join(dirpath, name), obj)
        written.append(name)

    for name, build in GRAPHS.items():
        g = build()
        put(f"{name}.json", io.graph_to_json(g))
        put(f"{name}_shift.json", io.shift_to_json(SoficShift.from_graph(g)))
    put("fig1_code.json", io.code_to_json(fig1_code()))
    for name, build in COVERS.items():
        code = build()
        put(f"{name}_shift.json", io.shift_to_json(code.domain))
        put(f"{name}_code.json", io.code_to_json(code))
    return written
