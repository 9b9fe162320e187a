"""Built-in ice-quiver generators and the worked-example catalog.

The triangle is the one-diagonal example with potential equal to its 3-cycle;
polygons give fan-style triangulation quivers (one unfrozen vertex per
diagonal, one frozen vertex per boundary edge); grids give the rectangle
model with checkerboard-signed square cycles.
"""

from fractions import Fraction

from .errors import DomainError, GuardError
from .potential import CyclicWord, Potential
from .quiver import Arrow, IceQuiver

GRID_GUARD = 30


class CatalogEntry:
    """A named quiver with potential and its golden values for tests."""

    def __init__(self, name, quiver, potential, expected=None, labels=None,
                 degenerate=False):
        self.name = name
        self.quiver = quiver
        self.potential = potential
        self.expected = dict(expected or {})
        self.labels = dict(labels or {})
        self.degenerate = degenerate

    def __repr__(self):
        return "CatalogEntry(%r, n=%d)" % (self.name, self.quiver.n)


def triangle_example():
    """The one-unfrozen-vertex triangle with potential its 3-cycle.

    Golden values: the non-initial cluster variable (p1+p2)/x1, the hatted
    variable p1/p2 at the mutable vertex, and Jacobian dimension 7.
    """
    q = IceQuiver(
        [1, 2, 3], [2, 3],
        [Arrow("a", 2, 1), Arrow("b", 3, 2, frozen=True), Arrow("c", 1, 3)])
    w = Potential(q, {CyclicWord(("a", "b", "c"), q): 1})
    expected = {
        "new_cluster_variable": {"num": [(0, 1, 0), (0, 0, 1)], "den": (1, 0, 0)},
        "hatted_y_terms": {(0, 1, -1): 1},
        "jacobian_dimension": 7,
        "cluster_variable_count": 2,
        "seed_count": 2,
    }
    return CatalogEntry("triangle", q, w, expected)


def fan_triangulation(n):
    """Diagonals of the fan at polygon vertex 1."""
    return [(1, k) for k in range(3, n)]


def _diagonals_cross(d1, d2):
    (a, b), (c, d) = sorted(d1), sorted(d2)
    if len({a, b, c, d}) < 4:
        return False
    return (a < c < b < d) or (c < a < d < b)


def polygon_ice_quiver(n, triangulation=None):
    """Triangulated-polygon ice quiver with its triangle-cycle potential.

    One unfrozen vertex per diagonal, one frozen vertex per boundary edge;
    each triangle of the triangulation contributes a 3-cycle of arrows
    oriented clockwise around the triangle (polygon vertices numbered
    counterclockwise).  The potential sums the triangle cycles that contain
    at least one unfrozen arrow.
    """
    if n < 4:
        raise DomainError("polygons need n >= 4 (no diagonals below that)")
    if triangulation is None:
        triangulation = fan_triangulation(n)
    diagonals = [tuple(sorted(d)) for d in triangulation]
    if len(set(diagonals)) != len(diagonals):
        raise DomainError("repeated diagonal")
    for d in diagonals:
        a, b = d
        if not (1 <= a < b <= n) or b - a < 2 or (a == 1 and b == n):
            raise DomainError("not a diagonal of the %d-gon: %s" % (n, (a, b)))
    if len(diagonals) != n - 3:
        raise DomainError("a triangulation of an %d-gon has %d diagonals, got %d"
                          % (n, n - 3, len(diagonals)))
    for i, d1 in enumerate(diagonals):
        for d2 in diagonals[i + 1:]:
            if _diagonals_cross(d1, d2):
                raise DomainError("diagonals %s and %s cross" % (d1, d2))

    boundary = [tuple(sorted((i, i % n + 1))) for i in range(1, n + 1)]
    sides = set(boundary) | set(diagonals)
    triangles = []
    for u in range(1, n + 1):
        for v in range(u + 1, n + 1):
            for t in range(v + 1, n + 1):
                if {tuple(sorted((u, v))), tuple(sorted((v, t))),
                        tuple(sorted((u, t)))} <= sides:
                    triangles.append((u, v, t))
    if len(triangles) != n - 2:
        raise DomainError("triangulation does not close up into %d triangles"
                          % (n - 2))

    vertex_ids = {}
    labels = {}
    next_id = 1
    for d in sorted(diagonals):
        vertex_ids[d] = next_id
        labels[next_id] = "d%d-%d" % d
        next_id += 1
    frozen = []
    for e in boundary:
        vertex_ids[e] = next_id
        labels[next_id] = "e%d-%d" % e
        frozen.append(next_id)
        next_id += 1

    arrows = []
    cycles = []
    for (u, v, t) in triangles:
        # walking the boundary clockwise visits sides (u,t), (v,t), (u,v)
        side_cycle = [tuple(sorted((u, t))), tuple(sorted((v, t))),
                      tuple(sorted((u, v)))]
        ids = []
        for s1, s2 in zip(side_cycle, side_cycle[1:] + side_cycle[:1]):
            src = vertex_ids[s1]
            tgt = vertex_ids[s2]
            aid = "%s>%s" % (labels[src], labels[tgt])
            frozen_arrow = src in frozen and tgt in frozen
            arrows.append(Arrow(aid, src, tgt, frozen=frozen_arrow))
            ids.append(aid)
        cycles.append(ids)

    q = IceQuiver(vertex_ids.values(), frozen, arrows, original_labels=labels)
    terms = {}
    for ids in cycles:
        if all(q.arrow(a).frozen for a in ids):
            continue
        word = CyclicWord((ids[2], ids[1], ids[0]), q)
        terms[word] = terms.get(word, 0) + Fraction(1)
    w = Potential(q, terms)
    return CatalogEntry("polygon-%d" % n, q, w, labels=labels)


def grid_ice_quiver(k, n):
    """Rectangle-grid ice quiver: k x (n-k) vertices, staircase boundary frozen.

    Vertex (i, j) is frozen when i = k or j = n-k.  Edge directions follow the
    local parity rule making every unit cell a directed 4-cycle; cells
    alternate orientation in a checkerboard.  The potential takes each cell
    cycle with sign + on even cells and - on odd cells, keeping only cycles
    with at least one unfrozen arrow.
    """
    if not (1 <= k < n):
        raise DomainError("need 1 <= k < n")
    cols = n - k
    if k * cols > GRID_GUARD:
        raise GuardError("grid size %d exceeds %d" % (k * cols, GRID_GUARD))

    coords = [(i, j) for i in range(1, k + 1) for j in range(1, cols + 1)]
    is_frozen = {c: (c[0] == k or c[1] == cols) for c in coords}
    unfrozen_coords = [c for c in coords if not is_frozen[c]]
    frozen_coords = [c for c in coords if is_frozen[c]]
    vertex_ids = {}
    labels = {}
    next_id = 1
    for c in unfrozen_coords + frozen_coords:
        vertex_ids[c] = next_id
        labels[next_id] = "v%d,%d" % c
        next_id += 1
    frozen_ids = [vertex_ids[c] for c in frozen_coords]

    def arrow_between(c1, c2):
        src, tgt = vertex_ids[c1], vertex_ids[c2]
        aid = "%s>%s" % (labels[src], labels[tgt])
        return Arrow(aid, src, tgt,
                     frozen=is_frozen[c1] and is_frozen[c2]), aid

    arrows = []
    arrow_ids = {}
    for (i, j) in coords:
        if j < cols:  # horizontal edge (i,j)-(i,j+1); right when i+j even
            pair = ((i, j), (i, j + 1)) if (i + j) % 2 == 0 \
                else ((i, j + 1), (i, j))
            a, aid = arrow_between(*pair)
            arrows.append(a)
            arrow_ids[frozenset(((i, j), (i, j + 1)))] = aid
        if i < k:  # vertical edge (i,j)-(i+1,j); up when i+j even
            pair = ((i + 1, j), (i, j)) if (i + j) % 2 == 0 \
                else ((i, j), (i + 1, j))
            a, aid = arrow_between(*pair)
            arrows.append(a)
            arrow_ids[frozenset(((i, j), (i + 1, j)))] = aid

    q = IceQuiver(vertex_ids.values(), frozen_ids, arrows,
                  original_labels=labels)
    terms = {}
    for i in range(1, k):
        for j in range(1, cols):
            corners_cw = [(i, j), (i, j + 1), (i + 1, j + 1), (i + 1, j)]
            if (i + j) % 2 == 1:
                corners_cw = list(reversed(corners_cw))
            ids = []
            for c1, c2 in zip(corners_cw, corners_cw[1:] + corners_cw[:1]):
                ids.append(arrow_ids[frozenset((c1, c2))])
            if all(q.arrow(a).frozen for a in ids):
                continue
            word = CyclicWord(tuple(reversed(ids)), q)
            sign = 1 if (i + j) % 2 == 0 else -1
            terms[word] = terms.get(word, 0) + Fraction(sign)
    w = Potential(q, terms)
    degenerate = not unfrozen_coords
    return CatalogEntry("grid-%d-%d" % (k, n), q, w, labels=labels,
                        degenerate=degenerate)


def catalog():
    """The worked examples exercised by the cross-module test suites."""
    return [
        triangle_example(),
        polygon_ice_quiver(4),
        polygon_ice_quiver(5),
        grid_ice_quiver(2, 4),
        grid_ice_quiver(2, 5),
    ]
