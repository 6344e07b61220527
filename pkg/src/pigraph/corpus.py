"""Small reference graphs used by the tests, the docs and ``pigraph demo``."""

from pigraph.graph_model import Edge, FiniteGraph, PeriodicGraph

# one vertex, two loops
G1 = FiniteGraph(["u"], [Edge("e", "u", "u"), Edge("f", "u", "u")])

# one vertex, one loop
G2 = FiniteGraph(["u"], [Edge("e", "u", "u")])

# an infinite ladder of c's, each with a rung up to a vertex carrying two loops
G3 = PeriodicGraph(
    stem=FiniteGraph(),
    pattern=FiniteGraph(
        ["c", "l"],
        [Edge("f", "c", "l"), Edge("g", "l", "l"), Edge("h", "l", "l")],
    ),
    period_links=[Edge("e", "c", "c")],
)

# v feeds both the two-loop vertex w and an infinite chain c -> d -> c' -> ...
G4 = PeriodicGraph(
    stem=FiniteGraph(
        ["v", "w"],
        [Edge("beta1", "v", "w"), Edge("e", "w", "w"), Edge("f", "w", "w")],
    ),
    pattern=FiniteGraph(
        ["c", "d"],
        [Edge("a", "c", "d"), Edge("g", "d", "d"), Edge("h", "d", "d")],
    ),
    stem_links=[Edge("alpha1", "v", "c"), Edge("beta2", "w", "c")],
    period_links=[Edge("p", "c", "c"), Edge("q", "d", "c")],
)

# v -> w with a single loop at w
G5 = FiniteGraph(["v", "w"], [Edge("a", "v", "w"), Edge("e", "w", "w")])

CORPUS = {"G1": G1, "G2": G2, "G3": G3, "G4": G4, "G5": G5}
