"""Ice quivers: validation, extended exchange matrices, isomorphism testing.

Vertex ids are integers following the convention that unfrozen vertices come
first (1..r) and frozen vertices last (r+1..n).  Loaders renumber on ingest
and keep the original labels.  Arrow ids are strings.  Frozen-frozen arrows
are stored but excluded from the exchange matrix.
"""

import json

from .errors import DomainError, GuardError

ISO_SIZE_GUARD = 10


class Arrow:
    __slots__ = ("id", "src", "tgt", "frozen")

    def __init__(self, arrow_id, src, tgt, frozen=False):
        self.id = str(arrow_id)
        self.src = int(src)
        self.tgt = int(tgt)
        self.frozen = bool(frozen)

    def __repr__(self):
        star = " (frozen)" if self.frozen else ""
        return "%s: %d->%d%s" % (self.id, self.src, self.tgt, star)

    def __eq__(self, other):
        return (self.id, self.src, self.tgt, self.frozen) == \
               (other.id, other.src, other.tgt, other.frozen)

    def __hash__(self):
        return hash((self.id, self.src, self.tgt, self.frozen))


class IceQuiver:
    """A finite quiver with a distinguished frozen subquiver.

    Immutable after construction; mutation operations return new quivers.
    """

    def __init__(self, vertices, frozen_vertices, arrows, original_labels=None):
        self.vertices = tuple(sorted(int(v) for v in vertices))
        self.frozen_vertices = frozenset(int(v) for v in frozen_vertices)
        self.arrows = tuple(arrows)
        self.original_labels = dict(original_labels) if original_labels else None
        self._by_id = {a.id: a for a in self.arrows}

    # -- basic queries -------------------------------------------------------

    @property
    def n(self):
        return len(self.vertices)

    @property
    def unfrozen_vertices(self):
        return tuple(v for v in self.vertices if v not in self.frozen_vertices)

    @property
    def r(self):
        return self.n - len(self.frozen_vertices)

    def is_frozen_vertex(self, v):
        return v in self.frozen_vertices

    def arrow(self, arrow_id):
        try:
            return self._by_id[arrow_id]
        except KeyError:
            raise DomainError("unknown arrow id %r" % arrow_id)

    def has_arrow(self, arrow_id):
        return arrow_id in self._by_id

    def arrows_from(self, v):
        return [a for a in self.arrows if a.src == v]

    def arrows_to(self, v):
        return [a for a in self.arrows if a.tgt == v]

    def arrows_incident(self, v):
        return [a for a in self.arrows if a.src == v or a.tgt == v]

    def frozen_arrows(self):
        return [a for a in self.arrows if a.frozen]

    # -- validation ----------------------------------------------------------

    def validate(self):
        """Return one diagnostic per invariant violation (empty list if valid)."""
        diagnostics = []
        if len(set(self.vertices)) != len(self.vertices):
            diagnostics.append("duplicate vertex ids")
        missing = self.frozen_vertices - set(self.vertices)
        if missing:
            diagnostics.append("frozen vertices %s not in vertex set"
                               % sorted(missing))
        seen_ids = set()
        for a in self.arrows:
            if a.id in seen_ids:
                diagnostics.append("duplicate arrow id %r" % a.id)
            seen_ids.add(a.id)
            if a.src not in set(self.vertices) or a.tgt not in set(self.vertices):
                diagnostics.append("arrow %r has endpoint outside vertex set" % a.id)
                continue
            if a.frozen and (a.src not in self.frozen_vertices
                             or a.tgt not in self.frozen_vertices):
                diagnostics.append(
                    "frozen arrow %r has an unfrozen endpoint (%d -> %d)"
                    % (a.id, a.src, a.tgt))
        return diagnostics

    def require_valid(self):
        diags = self.validate()
        if diags:
            raise DomainError("invalid quiver: " + "; ".join(diags),
                              witness=diags)

    def mutable_at(self, v):
        """Diagnostics blocking mutation at unfrozen v: loops, unfrozen 2-cycles."""
        problems = []
        for a in self.arrows_incident(v):
            if a.src == a.tgt:
                problems.append("loop %r at vertex %d" % (a.id, v))
        outs = {a.tgt for a in self.arrows_from(v) if not a.frozen}
        for a in self.arrows_to(v):
            if not a.frozen and a.src in outs and a.src != v:
                problems.append(
                    "2-cycle through %d via vertex %d (arrow %r)" % (v, a.src, a.id))
        return problems

    # -- exchange matrix -----------------------------------------------------

    def exchange_matrix(self):
        self.require_valid()
        return ExchangeMatrix.from_quiver(self)

    # -- serialization -------------------------------------------------------

    def to_json(self):
        return {
            "vertices": [{"id": v, "frozen": v in self.frozen_vertices}
                         for v in self.vertices],
            "arrows": [{"id": a.id, "src": a.src, "tgt": a.tgt,
                        "frozen": a.frozen}
                       for a in sorted(self.arrows, key=lambda a: a.id)],
        }

    def to_json_string(self):
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data, renumber=True):
        vertices = [int(v["id"]) for v in data["vertices"]]
        frozen = [int(v["id"]) for v in data["vertices"] if v.get("frozen")]
        arrows = [Arrow(a["id"], a["src"], a["tgt"], a.get("frozen", False))
                  for a in data["arrows"]]
        q = cls(vertices, frozen, arrows)
        if renumber and not q._follows_numbering():
            q = q.renumbered()
        return q

    def _follows_numbering(self):
        expected = set(range(1, self.n + 1))
        if set(self.vertices) != expected:
            return False
        return all(v > self.r for v in self.frozen_vertices)

    def renumbered(self):
        """Relabel so unfrozen vertices are 1..r and frozen r+1..n.

        Relative order within each class is preserved; the original ids are
        recorded in original_labels.
        """
        unfrozen = [v for v in self.vertices if v not in self.frozen_vertices]
        frozen = [v for v in self.vertices if v in self.frozen_vertices]
        mapping = {}
        for i, v in enumerate(unfrozen + frozen, start=1):
            mapping[v] = i
        arrows = [Arrow(a.id, mapping[a.src], mapping[a.tgt], a.frozen)
                  for a in self.arrows]
        labels = {mapping[v]: v for v in self.vertices}
        return IceQuiver(mapping.values(),
                         [mapping[v] for v in frozen],
                         arrows, original_labels=labels)

    def __repr__(self):
        return "IceQuiver(n=%d, frozen=%s, arrows=%s)" % (
            self.n, sorted(self.frozen_vertices), list(self.arrows))


class ExchangeMatrix:
    """n x r integer matrix, rows over all vertices, columns over unfrozen ones."""

    def __init__(self, rows, vertex_order, unfrozen_order):
        self.rows = tuple(tuple(int(x) for x in row) for row in rows)
        self.vertex_order = tuple(vertex_order)
        self.unfrozen_order = tuple(unfrozen_order)

    @classmethod
    def from_quiver(cls, q):
        vertex_order = q.vertices
        unfrozen_order = q.unfrozen_vertices
        index = {v: i for i, v in enumerate(vertex_order)}
        col = {v: j for j, v in enumerate(unfrozen_order)}
        rows = [[0] * len(unfrozen_order) for _ in vertex_order]
        for a in q.arrows:
            if a.src in q.frozen_vertices and a.tgt in q.frozen_vertices:
                continue
            if a.tgt in col:
                rows[index[a.src]][col[a.tgt]] += 1
            if a.src in col:
                rows[index[a.tgt]][col[a.src]] -= 1
        return cls(rows, vertex_order, unfrozen_order)

    def entry(self, i, j):
        """b_{ij} by vertex ids (j must be unfrozen)."""
        return self.rows[self.vertex_order.index(i)][self.unfrozen_order.index(j)]

    def column(self, j):
        jj = self.unfrozen_order.index(j)
        return tuple(row[jj] for row in self.rows)

    def principal_part(self):
        """The top r x r block (rows restricted to unfrozen vertices)."""
        keep = [self.vertex_order.index(v) for v in self.unfrozen_order]
        return tuple(self.rows[i] for i in keep)

    def is_antisymmetric_top_block(self):
        top = self.principal_part()
        r = len(top)
        return all(top[i][j] == -top[j][i] for i in range(r) for j in range(r))

    def __eq__(self, other):
        return (self.rows == other.rows
                and self.vertex_order == other.vertex_order
                and self.unfrozen_order == other.unfrozen_order)

    def __repr__(self):
        return "ExchangeMatrix(%s)" % (self.rows,)


def _degree_signature(q, v):
    return (
        v in q.frozen_vertices,
        sum(1 for a in q.arrows_from(v) if not a.frozen),
        sum(1 for a in q.arrows_from(v) if a.frozen),
        sum(1 for a in q.arrows_to(v) if not a.frozen),
        sum(1 for a in q.arrows_to(v) if a.frozen),
    )


def _arrow_multiset(q, relabel=None):
    out = {}
    for a in q.arrows:
        src = relabel[a.src] if relabel else a.src
        tgt = relabel[a.tgt] if relabel else a.tgt
        key = (src, tgt, a.frozen)
        out[key] = out.get(key, 0) + 1
    return out


def quiver_equal_up_to_labels(q1, q2):
    """Search for a frozen-state-preserving vertex bijection matching arrows.

    Returns the bijection as a dict, or None.  Exhaustive with degree-sequence
    pruning; refuses quivers with more than ISO_SIZE_GUARD vertices.
    """
    q1.require_valid()
    q2.require_valid()
    if q1.n != q2.n or len(q1.arrows) != len(q2.arrows):
        return None
    if q1.n > ISO_SIZE_GUARD:
        raise GuardError(
            "isomorphism search limited to %d vertices; use an explicit bijection"
            % ISO_SIZE_GUARD)
    sig1 = {v: _degree_signature(q1, v) for v in q1.vertices}
    sig2 = {v: _degree_signature(q2, v) for v in q2.vertices}
    if sorted(sig1.values()) != sorted(sig2.values()):
        return None
    target = _arrow_multiset(q2)
    candidates = {v: [w for w in q2.vertices if sig2[w] == sig1[v]]
                  for v in q1.vertices}
    order = sorted(q1.vertices, key=lambda v: len(candidates[v]))

    def backtrack(i, assigned, used):
        if i == len(order):
            return dict(assigned)
        v = order[i]
        for w in candidates[v]:
            if w in used:
                continue
            assigned[v] = w
            used.add(w)
            if _partial_consistent(q1, assigned, target):
                result = backtrack(i + 1, assigned, used)
                if result is not None:
                    return result
            del assigned[v]
            used.discard(w)
        return None

    found = backtrack(0, {}, set())
    if found is None:
        return None
    if _arrow_multiset(q1, found) != target:
        return None
    return found


def _partial_consistent(q1, assigned, target):
    counts = {}
    for a in q1.arrows:
        if a.src in assigned and a.tgt in assigned:
            key = (assigned[a.src], assigned[a.tgt], a.frozen)
            counts[key] = counts.get(key, 0) + 1
            if counts[key] > target.get(key, 0):
                return False
    return True


def matched_arrow_map(q1, q2, vertex_map):
    """Arrow bijection induced by a vertex bijection, when unambiguous.

    Raises DomainError if some (src, tgt, state) class has multiplicity > 1,
    in which case the pairing of parallel arrows is not canonical.
    """
    lookup = {}
    for a in q2.arrows:
        lookup.setdefault((a.src, a.tgt, a.frozen), []).append(a.id)
    out = {}
    for a in q1.arrows:
        key = (vertex_map[a.src], vertex_map[a.tgt], a.frozen)
        bucket = lookup.get(key, [])
        if len(bucket) != 1:
            raise DomainError("parallel arrows make the arrow matching ambiguous",
                              witness=key)
        out[a.id] = bucket[0]
    return out
