"""Seeds, exchange mutation, hatted variables, and seed-pattern exploration.

A seed is an ice quiver plus one Laurent polynomial per vertex; frozen entries
are the frozen variables and never mutate.  Quiver mutation at seed level is
combinatorial (composites, reversal, cancellation of unfrozen 2-cycles); the
potential-aware version lives in the mutation module.
"""

import os
import threading
from concurrent.futures import ThreadPoolExecutor

from .errors import DomainError, GuardError
from .laurent import LaurentPoly, specialize_frozen
from .mutation import FROZEN_SINK, FROZEN_SOURCE, detect_frozen_role
from .quiver import Arrow, IceQuiver

DEPTH_GUARD_DEFAULT = 8
DEPTH_GUARD_ENV = "ICECLUSTER_DEPTH_GUARD"


def depth_guard():
    raw = os.environ.get(DEPTH_GUARD_ENV)
    if raw is None:
        return DEPTH_GUARD_DEFAULT
    try:
        return max(1, min(int(raw), DEPTH_GUARD_DEFAULT))
    except ValueError:
        return DEPTH_GUARD_DEFAULT


def default_names(q):
    """x1..xr for unfrozen vertices, p1..p_{n-r} for frozen ones."""
    names = []
    unfrozen = 0
    frozen = 0
    for v in q.vertices:
        if v in q.frozen_vertices:
            frozen += 1
            names.append("p%d" % frozen)
        else:
            unfrozen += 1
            names.append("x%d" % unfrozen)
    return tuple(names)


def mutate_ice_quiver(q, v):
    """Combinatorial ice-quiver mutation (no potential).

    Adds composite arrows, reverses arrows incident with v (states preserved
    at frozen vertices), then cancels maximal sets of unfrozen 2-cycles.
    Frozen arrows are never cancelled.
    """
    q.require_valid()
    if v in q.frozen_vertices:
        if detect_frozen_role(q, v) is None:
            raise DomainError(
                "frozen vertex %s is neither a source nor a sink of the frozen "
                "subquiver" % v)
    else:
        problems = q.mutable_at(v)
        if problems:
            raise DomainError("vertex %s is not mutable: %s"
                              % (v, "; ".join(problems)))
    incoming = [a for a in q.arrows if a.tgt == v]
    outgoing = [a for a in q.arrows if a.src == v]
    taken = {a.id for a in q.arrows}
    arrows = [a for a in q.arrows if a.src != v and a.tgt != v]
    for alpha in incoming:
        for beta in outgoing:
            cid = "[%s%s]" % (beta.id, alpha.id)
            while cid in taken:
                cid += "'"
            taken.add(cid)
            arrows.append(Arrow(cid, alpha.src, beta.tgt, frozen=False))
    for a in incoming + outgoing:
        rid = a.id + "*"
        while rid in taken:
            rid += "'"
        taken.add(rid)
        arrows.append(Arrow(rid, a.tgt, a.src, frozen=a.frozen))
    arrows = _cancel_two_cycles(arrows)
    return IceQuiver(q.vertices, q.frozen_vertices, arrows,
                     original_labels=q.original_labels)


def _cancel_two_cycles(arrows):
    arrows = sorted(arrows, key=lambda a: a.id)
    changed = True
    while changed:
        changed = False
        for i, a in enumerate(arrows):
            if a.frozen:
                continue
            for j, b in enumerate(arrows):
                if j == i or b.frozen:
                    continue
                if a.src == b.tgt and a.tgt == b.src and a.src != a.tgt:
                    arrows = [c for k, c in enumerate(arrows) if k not in (i, j)]
                    changed = True
                    break
            if changed:
                break
    return arrows


class Seed:
    """Quiver, one Laurent polynomial per vertex, and the path from the root."""

    def __init__(self, quiver, cluster, names=None, tree_address=()):
        quiver.require_valid()
        self.quiver = quiver
        self.names = tuple(names) if names else default_names(quiver)
        cluster = tuple(cluster)
        if len(cluster) != quiver.n:
            raise DomainError("cluster needs %d entries, got %d"
                              % (quiver.n, len(cluster)))
        for entry in cluster:
            if entry.names != self.names:
                raise DomainError("cluster entry over wrong variables")
        self.cluster = cluster
        self.tree_address = tuple(tree_address)

    @classmethod
    def initial(cls, quiver, names=None):
        names = tuple(names) if names else default_names(quiver)
        cluster = [LaurentPoly.variable(names, i) for i in range(quiver.n)]
        return cls(quiver, cluster, names)

    @property
    def r(self):
        return self.quiver.r

    def entry(self, v):
        return self.cluster[self.quiver.vertices.index(v)]

    def canonical_key(self):
        """Dedupe key: frozen entries by position, unfrozen as a sorted multiset."""
        frozen_part = tuple(
            self.cluster[i].canonical_key()
            for i, v in enumerate(self.quiver.vertices)
            if v in self.quiver.frozen_vertices)
        unfrozen_part = tuple(sorted(
            self.cluster[i].canonical_key()
            for i, v in enumerate(self.quiver.vertices)
            if v not in self.quiver.frozen_vertices))
        return (frozen_part, unfrozen_part)

    def unfrozen_entries(self):
        return [self.cluster[i] for i, v in enumerate(self.quiver.vertices)
                if v not in self.quiver.frozen_vertices]

    def same_seed(self, other):
        """Exact equality: same arrow multiset, same cluster entries in order."""
        if self.names != other.names:
            return False
        if self.quiver.vertices != other.quiver.vertices:
            return False
        if self.quiver.frozen_vertices != other.quiver.frozen_vertices:
            return False
        mine = {}
        for a in self.quiver.arrows:
            key = (a.src, a.tgt, a.frozen)
            mine[key] = mine.get(key, 0) + 1
        theirs = {}
        for a in other.quiver.arrows:
            key = (a.src, a.tgt, a.frozen)
            theirs[key] = theirs.get(key, 0) + 1
        if mine != theirs:
            return False
        return all(x == y for x, y in zip(self.cluster, other.cluster))

    def to_json(self):
        return {
            "quiver": self.quiver.to_json(),
            "names": list(self.names),
            "cluster": [entry.term_list_json() for entry in self.cluster],
            "treeAddress": list(self.tree_address),
        }

    @classmethod
    def from_json(cls, data):
        quiver = IceQuiver.from_json(data["quiver"], renumber=False)
        names = tuple(data["names"])
        cluster = [LaurentPoly.from_term_list(names, tl) for tl in data["cluster"]]
        return cls(quiver, cluster, names, tuple(data.get("treeAddress", ())))

    def __repr__(self):
        return "Seed(address=%s, cluster=%s)" % (
            list(self.tree_address), [c.pretty() for c in self.cluster])


def mutate_seed(seed, k):
    """Exchange mutation at an unfrozen vertex.

    The new variable is (product over arrows out of k + product over arrows
    into k) / x_k, with exactness enforced; the quiver mutates combinatorially.
    """
    q = seed.quiver
    if k in q.frozen_vertices:
        raise DomainError("cannot mutate a seed at frozen vertex %s" % k)
    if k not in q.vertices:
        raise DomainError("unknown vertex %s" % k)
    problems = q.mutable_at(k)
    if problems:
        raise DomainError("vertex %s is not mutable: %s" % (k, "; ".join(problems)))
    names = seed.names
    out_prod = LaurentPoly.one(names)
    for a in q.arrows_from(k):
        out_prod = out_prod * seed.entry(a.tgt)
    in_prod = LaurentPoly.one(names)
    for a in q.arrows_to(k):
        in_prod = in_prod * seed.entry(a.src)
    new_entry = (out_prod + in_prod).exact_div(seed.entry(k))
    cluster = list(seed.cluster)
    cluster[q.vertices.index(k)] = new_entry
    return Seed(mutate_ice_quiver(q, k), cluster, names,
                seed.tree_address + (k,))


def mutate_seed_frozen(seed, v):
    """Frozen source/sink mutation at seed level.

    The quiver mutates with states preserved; the entry at v becomes the
    psi image (product of frozen neighbours along the frozen subquiver,
    divided by the old entry), every other entry is fixed.
    """
    q = seed.quiver
    role = detect_frozen_role(q, v)
    if role is None:
        raise DomainError(
            "frozen vertex %s is neither a source nor a sink of the frozen "
            "subquiver" % v)
    names = seed.names
    product = LaurentPoly.one(names)
    if role == FROZEN_SOURCE:
        neighbours = [a.tgt for a in q.arrows_from(v) if a.frozen]
    else:
        neighbours = [a.src for a in q.arrows_to(v) if a.frozen]
    for u in neighbours:
        product = product * seed.entry(u)
    new_entry = product.exact_div(seed.entry(v))
    cluster = list(seed.cluster)
    cluster[q.vertices.index(v)] = new_entry
    return Seed(mutate_ice_quiver(q, v), cluster, names,
                seed.tree_address + (v,)), role


def walk(seed, vertices):
    """Apply a mutation sequence; frozen vertices take the frozen route."""
    current = seed
    for v in vertices:
        if v in current.quiver.frozen_vertices:
            current, _ = mutate_seed_frozen(current, v)
        else:
            current = mutate_seed(current, v)
    return current


def hatted_y(seed, j):
    """The hatted variable at an unfrozen vertex: the monomial with exponents
    given by the j-th exchange-matrix column, in the seed's own variables."""
    q = seed.quiver
    if j in q.frozen_vertices:
        raise DomainError("hatted variables exist only at unfrozen vertices")
    if j not in q.vertices:
        raise DomainError("unknown vertex %s" % j)
    b = q.exchange_matrix()
    exps = b.column(j)
    return LaurentPoly.monomial(seed.names, exps)


def hatted_y_fraction(seed, j):
    """The hatted variable evaluated on the actual cluster entries.

    Returned as an exact (numerator, denominator) pair since cluster entries
    at interior seeds need not be invertible.
    """
    q = seed.quiver
    b = q.exchange_matrix()
    exps = b.column(j)
    num = LaurentPoly.one(seed.names)
    den = LaurentPoly.one(seed.names)
    for i, e in enumerate(exps):
        if e > 0:
            num = num * seed.cluster[i] ** e
        elif e < 0:
            den = den * seed.cluster[i] ** (-e)
    return num, den


def specialize_seed(seed):
    """Kill the coefficients: full unfrozen subquiver, frozen variables to 1."""
    q = seed.quiver
    r = q.r
    unfrozen = [v for v in q.vertices if v not in q.frozen_vertices]
    keep = set(unfrozen)
    arrows = [a for a in q.arrows if a.src in keep and a.tgt in keep]
    sub = IceQuiver(unfrozen, [], arrows)
    cluster = [specialize_frozen(seed.cluster[q.vertices.index(v)], r)
               for v in unfrozen]
    return Seed(sub, cluster, seed.names[:r], seed.tree_address)


class Registry:
    """Thread-safe store of seeds found during pattern exploration."""

    def __init__(self, dedupe=True):
        self.dedupe = dedupe
        self.seeds = []
        self._index = {}
        self._variables = {}
        self._lock = threading.Lock()
        self.stabilized = False

    def _key(self, seed):
        if self.dedupe:
            return seed.canonical_key()
        return seed.tree_address

    def insert_if_absent(self, seed):
        """Atomically insert; returns True when the seed was new."""
        key = self._key(seed)
        with self._lock:
            if key in self._index:
                return False
            self._index[key] = len(self.seeds)
            self.seeds.append(seed)
            for entry in seed.unfrozen_entries():
                self._variables.setdefault(entry.canonical_key(), entry)
            return True

    def find(self, seed):
        key = self._key(seed)
        idx = self._index.get(key)
        return self.seeds[idx] if idx is not None else None

    def find_by_cluster_key(self, key):
        if not self.dedupe:
            raise DomainError("registry built without dedupe has no cluster index")
        idx = self._index.get(key)
        return self.seeds[idx] if idx is not None else None

    @property
    def cluster_variables(self):
        return list(self._variables.values())

    def to_json_lines(self):
        import json
        return "\n".join(json.dumps(s.to_json(), sort_keys=True)
                         for s in self.seeds)


def enumerate_pattern(root, depth, dedupe=True, max_workers=1):
    """Breadth-first walk of the mutation tree up to the given depth.

    With dedupe set, seeds are keyed by their cluster (sorted unfrozen
    multiset plus frozen tuple); the registry's stabilized flag is set when a
    frontier layer produced nothing new, which certifies finite type.
    """
    guard = depth_guard()
    if depth > guard:
        raise GuardError("depth %d exceeds guard %d" % (depth, guard))
    registry = Registry(dedupe=dedupe)
    registry.insert_if_absent(root)
    frontier = [root]
    unfrozen = [v for v in root.quiver.vertices
                if v not in root.quiver.frozen_vertices]
    for _ in range(depth):
        if not frontier:
            break
        jobs = [(seed, k) for seed in frontier for k in unfrozen]
        if max_workers > 1:
            with ThreadPoolExecutor(max_workers=max_workers) as pool:
                children = list(pool.map(lambda sk: mutate_seed(*sk), jobs))
        else:
            children = [mutate_seed(seed, k) for seed, k in jobs]
        frontier = [child for child in children if registry.insert_if_absent(child)]
    if not frontier and dedupe:
        registry.stabilized = True
    return registry
