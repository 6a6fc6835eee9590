"""
A factor code that is not semi-open
===================================

A sliding block code is semi-open when the image of every open set has
nonempty interior; since central cylinders generate the topology, it is
enough that every cylinder's image contains a cylinder. The classic way
to break this is an isolated loop that gets collapsed onto a point.
"""

from shiftlab import (
    LabeledGraph,
    SlidingBlockCode,
    SoficShift,
    check_semi_open,
    contains_cylinder,
    cylinder_image,
    image_presentation,
    window_language,
)

# the domain: a golden-mean piece (no "11") plus an isolated loop on "2"
g = LabeledGraph.make(
    ["0", "1", "2"],
    ["v1", "v2", "w"],
    [
        ("e1", "v1", "v1", "0"),
        ("e2", "v1", "v2", "1"),
        ("e3", "v2", "v1", "0"),
        ("e4", "w", "w", "2"),
    ],
)
x = SoficShift.from_graph(g)

# the code sends 2 to 0, folding the whole loop onto the fixed point
phi = SlidingBlockCode.make(
    x, 0, 0, {("0",): "0", ("1",): "1", ("2",): "0"}, ["0", "1"]
)

verdict, table = check_semi_open(phi)
print("semi-open verdict:", verdict.verdict)
print("refuting cylinder:", verdict.payload["zone"])

# why it fails: the image of the cylinder [2] is a single point, and a
# one-point set in an infinite shift has empty interior
a = cylinder_image(phi, ("2",))
for k in (1, 2, 3):
    print(f"windows of radius {k} in the image:", window_language(a, k))

# no cylinder of the image shift fits inside a single point
y = image_presentation(phi)
print("contains the 0-cylinder at the origin:",
      contains_cylinder(a, y, ("0",)))
