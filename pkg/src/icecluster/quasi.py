"""Quasi-cluster homomorphisms: construction (the frozen-mutation maps psi+/-,
the twist from supplied conflation data), ring-morphism application, and
depth-bounded verification of the defining conditions.

A morphism maps the variables of a source seed pattern into the Laurent ring
of a target seed pattern.  Verification checks, to a given depth:
  (a) images of cluster variables are frozen monomials times target cluster
      variables, and frozen variables map into the coefficient group;
  (b) the coefficient-free specialization matches a seed of the target
      pattern with equal exchange matrices;
  (c) hatted variables at the root map to the hatted variables at the
      matched seed.
"""

from concurrent.futures import ThreadPoolExecutor

from .character import cc_shift
from .errors import DomainError, GuardError
from .laurent import LaurentPoly
from .mutation import FROZEN_SINK, FROZEN_SOURCE, detect_frozen_role
from .seeds import (Seed, enumerate_pattern, hatted_y, hatted_y_fraction,
                    mutate_ice_quiver, specialize_seed)

VERIFY_DEPTH_GUARD = 6


class QuasiMorphism:
    """Variable images of a ring map between two seed patterns."""

    def __init__(self, source_seed, target_seed, images):
        self.source = source_seed
        self.target = target_seed
        self.images = dict(images)
        missing = set(source_seed.names) - set(self.images)
        if missing:
            raise DomainError("images missing for variables %s" % sorted(missing))
        for name, img in self.images.items():
            if img.names != target_seed.names:
                raise DomainError(
                    "image of %s lives over %r, expected %r"
                    % (name, img.names, target_seed.names))
        self.diagnostics = self._frozen_image_diagnostics()

    def _frozen_image_diagnostics(self):
        out = []
        q = self.source.quiver
        frozen_target = set(range(self.target.quiver.r,
                                  self.target.quiver.n))
        for i, v in enumerate(q.vertices):
            if v not in q.frozen_vertices:
                continue
            img = self.images[self.source.names[i]]
            if not img.is_monomial():
                out.append("image of frozen %s is not a monomial"
                           % self.source.names[i])
                continue
            (exps, coeff), = img.terms.items()
            if coeff != 1:
                out.append("image of frozen %s has coefficient %s"
                           % (self.source.names[i], coeff))
            if any(exps[k] and k not in frozen_target for k in range(len(exps))):
                out.append("image of frozen %s involves unfrozen variables"
                           % self.source.names[i])
        return out

    @classmethod
    def identity(cls, seed):
        images = {name: LaurentPoly.variable(seed.names, i)
                  for i, name in enumerate(seed.names)}
        return cls(seed, seed, images)

    def to_json(self):
        return {
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "images": {name: img.term_list_json()
                       for name, img in sorted(self.images.items())},
        }

    @classmethod
    def from_json(cls, data):
        source = Seed.from_json(data["source"])
        target = Seed.from_json(data["target"])
        images = {name: LaurentPoly.from_term_list(target.names, tl)
                  for name, tl in data["images"].items()}
        return cls(source, target, images)

    def __repr__(self):
        return "QuasiMorphism(%s)" % {
            name: img.pretty() for name, img in sorted(self.images.items())}


def apply(morphism, p):
    """Evaluate the ring map on a Laurent polynomial, exactly.

    Negative powers of variables with non-monomial images are assembled as a
    common-denominator fraction and resolved by exact division; a failure of
    that division means the image is not Laurent.
    """
    source_names = morphism.source.names
    if p.names != source_names:
        raise DomainError("polynomial over %r, expected %r"
                          % (p.names, source_names))
    target_names = morphism.target.names
    images = [morphism.images[name] for name in source_names]
    shifts = [max(0, -p.min_exponent(i)) for i in range(len(source_names))]
    denominator = LaurentPoly.one(target_names)
    for img, s in zip(images, shifts):
        if s:
            denominator = denominator * img ** s
    numerator = LaurentPoly.zero(target_names)
    for exps, coeff in p.terms.items():
        term = LaurentPoly.constant(target_names, coeff)
        for img, e, s in zip(images, exps, shifts):
            if e + s:
                term = term * img ** (e + s)
        numerator = numerator + term
    if denominator.is_one():
        return numerator
    return numerator.exact_div(denominator)


def compose(outer, inner):
    """outer o inner, defined when inner's target is outer's source."""
    images = {name: apply(outer, img) for name, img in inner.images.items()}
    return QuasiMorphism(inner.source, outer.target, images)


def build_psi(v, direction, q, potential=None):
    """The quasi-cluster isomorphism decategorifying frozen mutation.

    For a frozen source (direction "plus") the image of the mutated variable
    is (product of frozen targets of v)/x_v; dually for sinks ("minus").
    The source pattern lives on the mutated quiver.
    """
    role = detect_frozen_role(q, v)
    expected = FROZEN_SOURCE if direction == "plus" else FROZEN_SINK
    if direction not in ("plus", "minus"):
        raise DomainError("direction must be 'plus' or 'minus'")
    if role != expected:
        raise DomainError(
            "vertex %s has role %s, not %s" % (v, role, expected),
            witness={"vertex": v, "role": role})
    target = Seed.initial(q)
    mutated = mutate_ice_quiver(q, v)
    source = Seed.initial(mutated)
    names = target.names
    images = {}
    for i, vertex in enumerate(q.vertices):
        if vertex != v:
            images[source.names[i]] = LaurentPoly.variable(names, i)
            continue
        if direction == "plus":
            neighbours = [a.tgt for a in q.arrows_from(v) if a.frozen]
        else:
            neighbours = [a.src for a in q.arrows_to(v) if a.frozen]
        numerator = LaurentPoly.one(names)
        for u in neighbours:
            numerator = numerator * LaurentPoly.variable(
                names, q.vertices.index(u))
        images[source.names[i]] = numerator * LaurentPoly.variable(
            names, i).monomial_inverse()
    return QuasiMorphism(source, target, images)


def twist_from_conflations(seed, rule, data):
    """The twist (Donaldson-Thomas) quasi-automorphism from conflation data.

    data maps each vertex (by position) to a pair (suspension CharacterInput,
    injective class vector); the image of x_i is the shifted character
    cc(suspension_i) x^{-injective class_i}.
    """
    if len(data) != seed.quiver.n:
        raise DomainError("need one conflation entry per initial variable")
    images = {}
    for i, name in enumerate(seed.names):
        suspension, injective_class = data[i]
        images[name] = cc_shift(None, suspension, injective_class, rule)
    return QuasiMorphism(seed, seed, images)


class ConditionReport:
    def __init__(self, status, witness=None):
        self.status = status  # "pass" | "fail" | "inconclusive"
        self.witness = witness

    @property
    def passed(self):
        return self.status == "pass"

    def __repr__(self):
        if self.witness is None:
            return "ConditionReport(%s)" % self.status
        return "ConditionReport(%s, witness=%s)" % (self.status, self.witness)


class VerificationReport:
    def __init__(self, condition_a, condition_b, condition_c, depth):
        self.condition_a = condition_a
        self.condition_b = condition_b
        self.condition_c = condition_c
        self.depth_checked = depth

    @property
    def passed(self):
        return (self.condition_a.passed and self.condition_b.passed
                and self.condition_c.passed)

    def to_json(self):
        def enc(c):
            return {"status": c.status,
                    "witness": _encode_witness(c.witness)}
        return {
            "conditionA": enc(self.condition_a),
            "conditionB": enc(self.condition_b),
            "conditionC": enc(self.condition_c),
            "depthChecked": self.depth_checked,
            "passed": self.passed,
        }

    def __repr__(self):
        return ("VerificationReport(a=%s, b=%s, c=%s, depth=%d)"
                % (self.condition_a, self.condition_b, self.condition_c,
                   self.depth_checked))


def _encode_witness(w):
    if w is None:
        return None
    if isinstance(w, LaurentPoly):
        return w.pretty()
    if isinstance(w, dict):
        return {k: _encode_witness(v) for k, v in w.items()}
    if isinstance(w, (list, tuple)):
        return [_encode_witness(v) for v in w]
    return w


def verify(morphism, depth):
    """Depth-bounded check of the three quasi-cluster morphism conditions.

    The conditions run concurrently over shared immutable registries.  A
    registry exhausted before a match is reported inconclusive, not failed.
    """
    if depth > VERIFY_DEPTH_GUARD:
        raise GuardError("verification depth %d exceeds %d"
                         % (depth, VERIFY_DEPTH_GUARD))
    source_registry = enumerate_pattern(morphism.source, depth, dedupe=True)
    target_registry = enumerate_pattern(morphism.target, depth, dedupe=True)
    reduced_target_root = specialize_seed(morphism.target)
    reduced_registry = enumerate_pattern(reduced_target_root, depth, dedupe=True)

    with ThreadPoolExecutor(max_workers=3) as pool:
        fut_a = pool.submit(_condition_a, morphism, source_registry,
                            target_registry)
        fut_b = pool.submit(_condition_b, morphism, reduced_registry)
        fut_c = pool.submit(_condition_c, morphism, reduced_registry)
        a = fut_a.result()
        b = fut_b.result()
        c = fut_c.result()
    return VerificationReport(a, b, c, depth)


def _condition_a(morphism, source_registry, target_registry):
    if morphism.diagnostics:
        return ConditionReport("fail", morphism.diagnostics)
    target_vars = target_registry.cluster_variables
    for z in source_registry.cluster_variables:
        image = apply(morphism, z)
        if not _is_frozen_monomial_multiple(morphism, image, target_vars):
            return ConditionReport(
                "fail", {"variable": z, "image": image})
    return ConditionReport("pass")


def _is_frozen_monomial_multiple(morphism, image, target_vars):
    frozen_indices = set(range(morphism.target.quiver.r,
                               morphism.target.quiver.n))
    for x in target_vars:
        try:
            quotient = image.exact_div(x)
        except DomainError:
            continue
        if not quotient.is_monomial():
            continue
        (exps, coeff), = quotient.terms.items()
        if coeff == 1 and all(exps[k] == 0 or k in frozen_indices
                              for k in range(len(exps))):
            return True
    return False


def _match_specialized_root(morphism, reduced_registry):
    """Locate the reduced-target seed matching the specialized image of the
    source's initial cluster; returns (seed, position bijection) or None."""
    source = morphism.source
    r = source.quiver.r
    from .laurent import specialize_frozen
    images = []
    for i, v in enumerate(source.quiver.vertices):
        if v in source.quiver.frozen_vertices:
            continue
        img = apply(morphism, source.cluster[i])
        images.append((v, specialize_frozen(img, morphism.target.quiver.r)))
    key = tuple(sorted(img.canonical_key() for _, img in images))
    for seed in reduced_registry.seeds:
        seed_key = tuple(sorted(entry.canonical_key()
                                for entry in seed.cluster))
        if seed_key != key:
            continue
        by_key = {}
        for pos, entry in zip(seed.quiver.vertices, seed.cluster):
            by_key.setdefault(entry.canonical_key(), []).append(pos)
        if any(len(ps) != 1 for ps in by_key.values()):
            continue  # values not distinct, cannot align positions
        bijection = {v: by_key[img.canonical_key()][0] for v, img in images}
        return seed, bijection
    return None


def _condition_b(morphism, reduced_registry):
    matched = _match_specialized_root(morphism, reduced_registry)
    if matched is None:
        return ConditionReport(
            "inconclusive",
            "no reduced-target seed matches the specialized initial images "
            "at this depth")
    seed, bijection = matched
    source_reduced = specialize_seed(morphism.source)
    b_source = source_reduced.quiver.exchange_matrix()
    b_target = seed.quiver.exchange_matrix()
    for i in source_reduced.quiver.vertices:
        for j in source_reduced.quiver.vertices:
            lhs = b_source.entry(i, j)
            rhs = b_target.entry(bijection[i], bijection[j])
            if lhs != rhs:
                return ConditionReport(
                    "fail",
                    {"entry": (i, j), "source": lhs, "target": rhs})
    return ConditionReport("pass")


def _condition_c(morphism, reduced_registry):
    matched = _match_specialized_root(morphism, reduced_registry)
    if matched is None:
        return ConditionReport(
            "inconclusive",
            "no reduced-target seed matches the specialized initial images "
            "at this depth")
    reduced_seed, bijection = matched
    from .seeds import walk
    target_seed = walk(morphism.target, reduced_seed.tree_address)
    for i, v in enumerate(morphism.source.quiver.vertices):
        if v in morphism.source.quiver.frozen_vertices:
            continue
        lhs = apply(morphism, hatted_y(morphism.source, v))
        num, den = hatted_y_fraction(target_seed, bijection[v])
        if lhs * den != num:
            return ConditionReport(
                "fail",
                {"vertex": v, "image": lhs,
                 "expected_num": num, "expected_den": den})
    return ConditionReport("pass")
