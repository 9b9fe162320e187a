"""Mutation of ice quivers with potential.

Unfrozen vertices mutate when no loop or 2-cycle is incident; frozen vertices
mutate only as sources or sinks of the frozen subquiver.  Reversed arrows get
a "*" suffix, composite arrows the id "[ba]"; mutation is premutation followed
by reduction of the potential.
"""

from fractions import Fraction

from .errors import DomainError
from .potential import CyclicWord, Potential, path_src, reduce_iqp
from .quiver import Arrow, IceQuiver

UNFROZEN = "unfrozen"
FROZEN_SOURCE = "frozenSource"
FROZEN_SINK = "frozenSink"


class MutationRecord:
    """What a single premutation did: composites added, arrows reversed."""

    def __init__(self, vertex, kind):
        self.vertex = vertex
        self.kind = kind
        self.composite_arrows = []  # (id, src, tgt), always unfrozen
        self.reversed_arrows = []   # (old id, new id, frozen state)

    def to_json(self):
        return {
            "vertex": self.vertex,
            "kind": self.kind,
            "compositeArrows": [
                {"id": i, "src": s, "tgt": t} for i, s, t in self.composite_arrows],
            "reversedArrows": [
                {"old": o, "new": n, "frozen": f} for o, n, f in self.reversed_arrows],
        }

    def __repr__(self):
        return "MutationRecord(v=%s, kind=%s, composites=%s, reversed=%s)" % (
            self.vertex, self.kind, self.composite_arrows, self.reversed_arrows)


def detect_frozen_role(q, v):
    """Classify a frozen vertex as a source or sink of the frozen subquiver.

    A frozen source has no frozen arrow in and no unfrozen arrow out; dually
    for sinks.  Returns None when neither applies.
    """
    if v not in q.frozen_vertices:
        raise DomainError("vertex %s is not frozen" % v)
    frozen_in = any(a.frozen for a in q.arrows_to(v))
    frozen_out = any(a.frozen for a in q.arrows_from(v))
    unfrozen_out = any(not a.frozen for a in q.arrows_from(v))
    unfrozen_in = any(not a.frozen for a in q.arrows_to(v))
    if not frozen_in and not unfrozen_out:
        return FROZEN_SOURCE
    if not frozen_out and not unfrozen_in:
        return FROZEN_SINK
    return None


def _fresh_id(base, taken):
    candidate = base
    while candidate in taken:
        candidate += "'"
    taken.add(candidate)
    return candidate


def premutate(q, w, v):
    """Steps (1)-(3) of mutation at v, without the final reduction."""
    q.require_valid()
    if v not in q.vertices:
        raise DomainError("unknown vertex %s" % v)
    if v in q.frozen_vertices:
        kind = detect_frozen_role(q, v)
        if kind is None:
            raise DomainError(
                "frozen vertex %s is neither a source nor a sink of the frozen "
                "subquiver" % v,
                witness={"vertex": v})
    else:
        problems = q.mutable_at(v)
        if problems:
            raise DomainError("vertex %s is not mutable: %s"
                              % (v, "; ".join(problems)), witness=problems)
        kind = UNFROZEN
    record = MutationRecord(v, kind)

    incoming = [a for a in q.arrows if a.tgt == v]
    outgoing = [a for a in q.arrows if a.src == v]
    taken = {a.id for a in q.arrows}

    composites = {}
    new_arrows = [a for a in q.arrows if a.src != v and a.tgt != v]
    for alpha in incoming:
        for beta in outgoing:
            cid = _fresh_id("[%s%s]" % (beta.id, alpha.id), taken)
            comp = Arrow(cid, alpha.src, beta.tgt, frozen=False)
            new_arrows.append(comp)
            composites[(beta.id, alpha.id)] = cid
            record.composite_arrows.append((cid, alpha.src, beta.tgt))
    reversed_names = {}
    for a in incoming + outgoing:
        rid = _fresh_id(a.id + "*", taken)
        state = a.frozen if kind != UNFROZEN else False
        new_arrows.append(Arrow(rid, a.tgt, a.src, frozen=state))
        reversed_names[a.id] = rid
        record.reversed_arrows.append((a.id, rid, state))

    frozen_vertices = q.frozen_vertices
    new_q = IceQuiver(q.vertices, frozen_vertices, new_arrows,
                      original_labels=q.original_labels)

    new_terms = {}
    for word, c in w.terms.items():
        arrows = word.rotation_avoiding_start(q, v)
        rewritten = []
        i = 0
        while i < len(arrows):
            if i + 1 < len(arrows):
                beta, alpha = arrows[i], arrows[i + 1]
                if q.arrow(alpha).tgt == v:
                    rewritten.append(composites[(beta, alpha)])
                    i += 2
                    continue
            rewritten.append(arrows[i])
            i += 1
        cw = CyclicWord(rewritten, new_q)
        new_terms[cw] = new_terms.get(cw, 0) + c
    for alpha in incoming:
        for beta in outgoing:
            cid = composites[(beta.id, alpha.id)]
            cw = CyclicWord(
                (cid, reversed_names[alpha.id], reversed_names[beta.id]), new_q)
            new_terms[cw] = new_terms.get(cw, 0) + Fraction(1)
    new_w = Potential(new_q, new_terms, w.degree_cap)
    return new_q, new_w, record


def mutate(q, w, v):
    """Mutation = reduction of the premutation.

    Returns (quiver, potential, report) where the report bundles the
    premutation record and the reduction report.
    """
    new_q, new_w, record = premutate(q, w, v)
    red_q, red_w, reduction = reduce_iqp(new_q, new_w)
    return red_q, red_w, {"premutation": record, "reduction": reduction}
