"""
Degree of a cover and periodic fibers
=====================================

The label map of a right-resolving presentation is a finite-to-one
factor code from the edge shift onto the sofic shift it presents. Its
degree is the common number of preimages over doubly transitive points,
computed here from a magic word. Periodic points can still carry larger
fibers, which is exactly how constant-to-one fails.
"""

from shiftlab import (
    LabeledGraph,
    count_preimages_of_periodic,
    cover_code,
    degree,
    find_magic_word,
    is_right_closing,
)

# the even shift: blocks of zeros between ones have even length
g = LabeledGraph.make(
    ["0", "1"],
    ["A", "B"],
    [("f1", "A", "A", "1"), ("f2", "A", "B", "0"), ("f3", "B", "A", "0")],
)
code = cover_code(g)

# a magic word focuses all presenting paths onto one terminal vertex
print("magic word:", find_magic_word(g))

result = degree(code)
print("degree:", result.degree, "certified at word", result.word)

# the fixed point of zeros lifts to both phases of the 0-cycle, while
# the fixed point of ones lifts only to the loop at A
zero_fiber = count_preimages_of_periodic(g, ("0",))
one_fiber = count_preimages_of_periodic(g, ("1",))
print("preimages of 0^inf:", zero_fiber)
print("preimages of 1^inf:", one_fiber)
print("constant-to-one:", zero_fiber == one_fiber)

# degree one does not mean injective, but this cover is right-closing:
# left-asymptotic lifts of one point coincide
print("right-closing:", is_right_closing(code).verdict)
