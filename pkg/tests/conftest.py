"""Shared fixtures and frozen golden values.

The golden constants below are the published exact values this package
must reproduce: the first-row Green lists for both boundary conditions and
the determinant tables for k = 1..5.  They are entered as literal
rationals, never computed by the code under test.
"""

from fractions import Fraction as F

import pytest

from usfmelon import PiPoly


def pp(*coeffs) -> PiPoly:
    """PiPoly from rationals given as int, Fraction or 'p/q' strings."""
    return PiPoly(tuple(F(c) for c in coeffs))


# G_open(n; 1, 1) for n = 0..5: rational part, 1/pi part.
GREEN_OPEN_ROW1 = [
    pp(1, -2),
    pp("-1/2", 2),
    pp(-1, "10/3"),
    pp(-4, "38/3"),
    pp(-17, "802/15"),
    pp(-76, "1194/5"),
]

# finite part of G_closed(n; 1, 1) for n = 0..5.
GREEN_CLOSED_FIN_ROW1 = [
    pp("-1/4"),
    pp("-1/4", -1),
    pp("-3/4"),
    pp("-9/4", "13/3"),
    pp("-31/4", "64/3"),
    pp("-121/4", "459/5"),
]

# det of the k x k open-boundary denominator matrix, k = 1..5.
TABLE_OPEN = {
    1: pp(1, -2),
    2: pp("3/4", -2),
    3: pp(-1, "40/3", "-448/9", "512/9"),
    4: pp("-435/16", "1843/6", "-11584/9", "64000/27", "-131072/81"),
    5: pp(
        "-8075/16",
        "155293/24",
        "-7333616/225",
        "401408/5",
        "-194510848/2025",
        "268435456/6075",
    ),
}

# det B_{k-1} for the closed boundary, k = 1..5.
TABLE_CLOSED = {
    1: pp(1),
    2: pp(0, 2),
    3: pp("-1/4", 2),
    4: pp("1/2", "-26/3", "128/3", "-512/9"),
    5: pp("-7/16", "145/6", "-896/3", "33280/27", "-131072/81"),
}


@pytest.fixture(scope="session")
def kernel():
    """The shared exact kernel table (grows once per session)."""
    from usfmelon import DEFAULT_KERNEL

    return DEFAULT_KERNEL


def domain_to_tinygraph(domain, eye=(), jay=()):
    """Materialize a RectDomain (with its wired frame) as an explicit graph.

    Every Dirichlet site actually adjacent to the interior becomes its own
    boundary vertex, so forests on the graph correspond one-to-one to
    forests sampled on the domain.
    """
    from usfmelon import TinyGraph

    interior = list(domain.interior_sites())
    interior_set = set(interior)
    boundary = set()
    edges = set()
    for site in interior:
        for nb in domain.neighbors(site):
            if nb not in interior_set:
                boundary.add(nb)
            edges.add(tuple(sorted((site, nb))))
    vertices = tuple(interior) + tuple(sorted(boundary))
    return TinyGraph(
        vertices=vertices,
        edges=tuple(sorted(edges)),
        boundary=tuple(sorted(boundary)),
        eye=tuple(eye),
        jay=tuple(jay),
    )
