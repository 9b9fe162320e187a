"""Potentials on the path algebra: cyclic derivatives, substitution, reduction,
and truncated relative Jacobian algebra presentations.

Path words are stored in composition order, right to left: the word (a, b, c)
means "first c, then b, then a".  Cyclic words are normalized to the rotation
that is lexicographically minimal in the arrow-id sequence.  Coefficients are
exact rationals.
"""

from fractions import Fraction

from .errors import DomainError, GuardError
from .laurent import coeff_from_string, coeff_to_string

DEFAULT_DEGREE_CAP = 10
REDUCTION_ROUND_GUARD = 64
DIM_CAP_GUARD = 12
PATH_COUNT_GUARD = 200_000


def path_src(q, word):
    """Start vertex of a composable word (source of the first-applied arrow)."""
    return q.arrow(word[-1]).src


def path_tgt(q, word):
    return q.arrow(word[0]).tgt


def is_composable(q, word, cyclic=False):
    for left, right in zip(word, word[1:]):
        if q.arrow(left).src != q.arrow(right).tgt:
            return False
    if cyclic and word:
        return q.arrow(word[-1]).src == q.arrow(word[0]).tgt
    return True


class CyclicWord:
    """A rotation-normalized cyclic arrow word of length >= 2."""

    __slots__ = ("arrows",)

    def __init__(self, arrows, quiver=None):
        arrows = tuple(arrows)
        if len(arrows) < 2:
            raise DomainError("cyclic words have length >= 2, got %r" % (arrows,))
        if quiver is not None:
            if not is_composable(quiver, arrows, cyclic=True):
                raise DomainError("arrows do not compose cyclically: %r" % (arrows,))
            if len(arrows) == 2 and any(
                    quiver.arrow(a).src == quiver.arrow(a).tgt for a in arrows):
                raise DomainError(
                    "terms involving a loop must have degree at least 3")
        self.arrows = min(
            (arrows[i:] + arrows[:i] for i in range(len(arrows))),
        )

    def __len__(self):
        return len(self.arrows)

    def __eq__(self, other):
        return self.arrows == other.arrows

    def __lt__(self, other):
        return (len(self.arrows), self.arrows) < (len(other.arrows), other.arrows)

    def __hash__(self):
        return hash(self.arrows)

    def __repr__(self):
        return "".join(self.arrows)

    def rotations(self):
        w = self.arrows
        return [w[i:] + w[:i] for i in range(len(w))]

    def rotation_avoiding_start(self, q, v):
        """A rotation whose start vertex differs from v.

        Needed before mutation so that no potential term begins at the
        mutated vertex; always possible when there is no loop at v.
        """
        for w in self.rotations():
            if path_src(q, w) != v:
                return w
        raise DomainError("every rotation of %r starts at vertex %d" % (self, v))

    def uses(self, arrow_id):
        return arrow_id in self.arrows


class PathPoly:
    """Finite linear combination of composable paths (possibly inhomogeneous).

    Paths of length zero are lazy idempotents, encoded as ("e", vertex).
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for word, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[tuple(word)] = clean.get(tuple(word), 0) + c
        self.terms = {w: c for w, c in clean.items() if c != 0}

    @classmethod
    def zero(cls):
        return cls({})

    @classmethod
    def path(cls, word, c=1):
        return cls({tuple(word): c})

    def __add__(self, other):
        terms = dict(self.terms)
        for w, c in other.terms.items():
            s = terms.get(w, 0) + c
            if s == 0:
                terms.pop(w, None)
            else:
                terms[w] = s
        return PathPoly(terms)

    def __neg__(self):
        return PathPoly({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = Fraction(c)
        return PathPoly({w: c * v for w, v in self.terms.items()})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return self.terms == other.terms

    def max_length(self):
        return max((len(w) for w in self.terms), default=0)

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for w, c in sorted(self.terms.items()):
            word = "".join(w) if w else "e"
            bits.append(word if c == 1 else "%s*%s" % (c, word))
        return " + ".join(bits)


class Potential:
    """Finite rational combination of normalized cyclic words, with a degree cap."""

    def __init__(self, quiver, terms=None, degree_cap=DEFAULT_DEGREE_CAP):
        if degree_cap < 2:
            raise DomainError("degree cap must be at least 2")
        self.quiver = quiver
        self.degree_cap = degree_cap
        clean = {}
        for word, c in (terms or {}).items():
            if not isinstance(word, CyclicWord):
                word = CyclicWord(word, quiver)
            else:
                CyclicWord(word.arrows, quiver)  # revalidate against this quiver
            c = Fraction(c)
            if c == 0:
                continue
            if len(word) > degree_cap:
                raise GuardError(
                    "potential term %r exceeds degree cap %d" % (word, degree_cap),
                    witness=str(word))
            clean[word] = clean.get(word, 0) + c
        self.terms = {w: c for w, c in clean.items() if c != 0}

    @classmethod
    def zero(cls, quiver, degree_cap=DEFAULT_DEGREE_CAP):
        return cls(quiver, {}, degree_cap)

    def is_zero(self):
        return not self.terms

    def arrows_used(self):
        used = set()
        for w in self.terms:
            used.update(w.arrows)
        return used

    def is_irredundant(self):
        """Every term contains at least one unfrozen arrow."""
        for w in self.terms:
            if all(self.quiver.arrow(a).frozen for a in w.arrows):
                return False
        return True

    def quadratic_terms(self):
        return [(w, c) for w, c in self.terms.items() if len(w) == 2]

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda item: item[0])

    def with_quiver(self, quiver):
        return Potential(quiver, dict(self.terms), self.degree_cap)

    def __eq__(self, other):
        return self.terms == other.terms

    def __repr__(self):
        if not self.terms:
            return "Potential(0)"
        bits = []
        for w, c in self.sorted_terms():
            bits.append(repr(w) if c == 1 else "%s*%s" % (c, w))
        return "Potential(%s)" % " + ".join(bits)

    # -- serialization -----------------------------------------------------

    def to_json(self):
        return {
            "degreeCap": self.degree_cap,
            "terms": [{"coeff": coeff_to_string(c), "cycle": list(w.arrows)}
                      for w, c in self.sorted_terms()],
        }

    @classmethod
    def from_json(cls, quiver, data):
        terms = {}
        for t in data["terms"]:
            word = CyclicWord(t["cycle"], quiver)
            terms[word] = terms.get(word, 0) + Fraction(coeff_from_string(t["coeff"]))
        return cls(quiver, terms, data.get("degreeCap", DEFAULT_DEGREE_CAP))


def cyclic_derivative(w, arrow_id):
    """The cyclic derivative of a potential with respect to one arrow.

    For each occurrence of the arrow in a cycle, cut the cycle there and read
    off the remaining path; extend linearly.
    """
    q = w.quiver
    q.arrow(arrow_id)
    out = PathPoly.zero()
    for word, c in w.terms.items():
        arrows = word.arrows
        k = len(arrows)
        for j, a in enumerate(arrows):
            if a != arrow_id:
                continue
            path = arrows[j + 1:] + arrows[:j]
            out = out + PathPoly.path(path, c)
    return out


class JacobianPresentation:
    """Relations one per unfrozen arrow; relation paths run opposite to it."""

    def __init__(self, quiver, relations, degree_cap=DEFAULT_DEGREE_CAP):
        self.quiver = quiver
        self.relations = dict(relations)
        self.degree_cap = degree_cap

    def __repr__(self):
        return "JacobianPresentation(%s)" % (
            {a: repr(r) for a, r in sorted(self.relations.items())},)


def jacobian_presentation(q, w):
    """Relations {d_a W : a unfrozen} of the relative Jacobian algebra."""
    for a in w.arrows_used():
        if not q.has_arrow(a):
            raise DomainError("potential references arrow %r absent from quiver" % a)
    unfrozen = [a for a in q.arrows if not a.frozen]
    if not unfrozen and not w.is_zero():
        if not w.is_irredundant():
            raise DomainError(
                "no unfrozen arrows exist, potential cannot be irredundant")
    relations = {a.id: cyclic_derivative(w, a.id) for a in unfrozen}
    return JacobianPresentation(q, relations, w.degree_cap)


# -- truncated path-algebra quotient ----------------------------------------


def enumerate_paths(q, cap):
    """All composable words of length <= cap, plus lazy paths ("e", v).

    Words are in composition order; extension happens on the left.
    """
    paths = [("e", v) for v in q.vertices]
    frontier = [(a.id,) for a in q.arrows]
    length = 1
    while frontier and length <= cap:
        paths.extend(frontier)
        if len(paths) > PATH_COUNT_GUARD:
            raise GuardError("path enumeration exceeded %d paths" % PATH_COUNT_GUARD)
        nxt = []
        for word in frontier:
            head = q.arrow(word[0]).tgt
            for a in q.arrows_from(head):
                nxt.append((a.id,) + word)
        frontier = nxt
        length += 1
    return paths


def _word_len(word):
    return 0 if word[0] == "e" else len(word)


def _word_src(q, word):
    return word[1] if word[0] == "e" else q.arrow(word[-1]).src


def _word_tgt(q, word):
    return word[1] if word[0] == "e" else q.arrow(word[0]).tgt


def _concat(u, rel_word, v):
    """u . r . v in composition order; lazy paths contribute nothing."""
    out = ()
    for w in (u, rel_word, v):
        if _word_len(w):
            out = out + w
    return out


class PathQuotient:
    """Linear-algebra quotient of the path space by relation translates.

    Works length-filtered up to a cap; exposes graded dimensions, a monomial
    basis, and a normal-form map usable when the dimensions have stabilized.
    """

    def __init__(self, presentation, cap):
        if cap > DIM_CAP_GUARD:
            raise GuardError("dimension cap %d exceeds %d" % (cap, DIM_CAP_GUARD))
        q = presentation.quiver
        self.quiver = q
        self.cap = cap
        paths = enumerate_paths(q, cap)
        # pivots prefer long paths, so the surviving basis skews short
        paths.sort(key=lambda w: (_word_len(w), w), reverse=True)
        self.paths = paths
        self.index = {w: i for i, w in enumerate(paths)}
        rows = self._relation_rows(presentation)
        rows.sort(key=lambda item: item[0])
        self._eliminate(rows)
        self._grade()

    def _relation_rows(self, presentation):
        q = self.quiver
        rows = []
        for rel in presentation.relations.values():
            if not rel:
                continue
            terms = list(rel.terms.items())
            r_src = _word_src(q, terms[0][0]) if _word_len(terms[0][0]) else None
            r_tgt = _word_tgt(q, terms[0][0]) if _word_len(terms[0][0]) else None
            # relations may be inhomogeneous but share endpoints by construction
            for u in self.paths:
                if r_tgt is not None and _word_src(q, u) != r_tgt:
                    continue
                for v in self.paths:
                    if r_src is not None and _word_tgt(q, v) != r_src:
                        continue
                    total_max = _word_len(u) + rel.max_length() + _word_len(v)
                    if total_max > self.cap:
                        continue
                    vec = {}
                    for word, c in rel.terms.items():
                        full = _concat(u, word, v)
                        if not full:
                            continue
                        idx = self.index[full]
                        vec[idx] = vec.get(idx, 0) + c
                    vec = {i: c for i, c in vec.items() if c != 0}
                    if vec:
                        rows.append((total_max, vec))
        return rows

    def _eliminate(self, rows):
        """Incremental sparse Gaussian elimination, tracking rank per length."""
        pivot_rows = {}  # pivot index -> {index: coeff} with pivot coeff 1
        rank_by_len = {}
        for total_len, vec in rows:
            vec = dict(vec)
            while vec:
                lead = min(vec)  # paths sorted long-first, so min index = longest
                if lead in pivot_rows:
                    factor = vec[lead]
                    for i, c in pivot_rows[lead].items():
                        s = vec.get(i, 0) - factor * c
                        if s == 0:
                            vec.pop(i, None)
                        else:
                            vec[i] = s
                else:
                    inv = Fraction(1) / Fraction(vec[lead])
                    pivot_rows[lead] = {i: c * inv for i, c in vec.items()}
                    rank_by_len[total_len] = rank_by_len.get(total_len, 0) + 1
                    break
        # back-substitute so pivot rows are fully reduced against each other
        for lead in sorted(pivot_rows, reverse=True):
            row = pivot_rows[lead]
            changed = True
            while changed:
                changed = False
                for i in list(row):
                    if i != lead and i in pivot_rows:
                        factor = row[i]
                        for jj, c in pivot_rows[i].items():
                            if jj == i:
                                s = row.pop(i, 0) - factor * c
                                if s:
                                    row[jj] = s
                            else:
                                s = row.get(jj, 0) - factor * c
                                if s == 0:
                                    row.pop(jj, None)
                                else:
                                    row[jj] = s
                        changed = True
                        break
        self.pivot_rows = pivot_rows
        self._rank_by_len = rank_by_len

    def _grade(self):
        paths_by_len = {}
        for w in self.paths:
            paths_by_len[_word_len(w)] = paths_by_len.get(_word_len(w), 0) + 1
        dims = []
        total_paths = 0
        total_rank = 0
        for length in range(self.cap + 1):
            total_paths += paths_by_len.get(length, 0)
            total_rank += self._rank_by_len.get(length, 0)
            dims.append(total_paths - total_rank)
        self.cumulative_dims = dims
        self.dims_by_length = [dims[0]] + [dims[i] - dims[i - 1]
                                           for i in range(1, len(dims))]
        self.total_dim = dims[-1]
        self.stabilized = len(dims) >= 2 and self.dims_by_length[-1] == 0
        self.basis = [w for i, w in enumerate(self.paths) if i not in self.pivot_rows]
        self.basis.sort(key=lambda w: (_word_len(w), w))

    def normal_form(self, word):
        """Express a word (composition order) in the surviving basis.

        Returns {basis word: coefficient}.  Words longer than the cap are
        reduced recursively; this terminates when the quotient stabilized.
        """
        if _word_len(word) > self.cap:
            if not self.stabilized:
                raise GuardError(
                    "cannot reduce length-%d word: quotient not stabilized"
                    % _word_len(word))
            head, rest = word[0], word[1:]
            out = {}
            for base, c in self.normal_form(rest).items():
                if _word_len(base) == 0:
                    extended = (head,)
                else:
                    extended = (head,) + base
                for b2, c2 in self.normal_form(extended).items():
                    s = out.get(b2, 0) + c * c2
                    if s == 0:
                        out.pop(b2, None)
                    else:
                        out[b2] = s
            return out
        idx = self.index.get(word)
        if idx is None:
            raise DomainError("word %r is not a path of the quiver" % (word,))
        if idx not in self.pivot_rows:
            return {word: Fraction(1)}
        out = {}
        for i, c in self.pivot_rows[idx].items():
            if i == idx:
                continue
            out[self.paths[i]] = -c
        return out


def jacobian_dim_upto(presentation, cap):
    """Graded dimensions of the truncated relative Jacobian algebra.

    Returns (dims per path length, stabilized flag).  The quotient is taken
    by all translates u.r.v of the relations whose terms fit within the cap.
    """
    quotient = PathQuotient(presentation, cap)
    return quotient.dims_by_length, quotient.stabilized


# -- substitution and reduction ----------------------------------------------


def substitute(w, arrow_id, replacement):
    """Replace every occurrence of an arrow by a parallel path polynomial."""
    q = w.quiver
    target = q.arrow(arrow_id)
    for word in replacement.terms:
        if _word_len(word) == 0:
            if not (target.src == target.tgt == word[1]):
                raise DomainError("replacement idempotent not parallel to %r"
                                  % arrow_id)
            continue
        if (_word_src(q, word), _word_tgt(q, word)) != (target.src, target.tgt):
            raise DomainError(
                "replacement path %r not parallel to arrow %r" % (word, arrow_id))
    return _substitute_many(w, {arrow_id: replacement})


def _substitute_many(w, table):
    q = w.quiver
    out = {}
    for word, coeff in w.terms.items():
        expansions = [(coeff, ())]
        for a in word.arrows:
            if a in table:
                rep = table[a]
                expansions = [
                    (c * c2, acc + (piece if piece[0] != "e" else ()))
                    for c, acc in expansions
                    for piece, c2 in rep.terms.items()
                ]
            else:
                expansions = [(c, acc + (a,)) for c, acc in expansions]
        for c, arrows in expansions:
            if c == 0:
                continue
            if len(arrows) < 2:
                raise DomainError(
                    "substitution produced a cycle of length %d" % len(arrows))
            if len(arrows) > w.degree_cap:
                raise GuardError(
                    "substitution overflowed degree cap %d on term %s"
                    % (w.degree_cap, "".join(arrows)),
                    witness="".join(arrows))
            cw = CyclicWord(arrows, q)
            s = out.get(cw, 0) + c
            if s == 0:
                out.pop(cw, None)
            else:
                out[cw] = s
    return Potential(q, out, w.degree_cap)


class ReductionReport:
    def __init__(self):
        self.eliminated_pairs = []
        self.surviving_quadratics = []
        self.reduced = False
        self.admissible_up_to_cap = False
        self.rounds = 0

    def __repr__(self):
        return ("ReductionReport(eliminated=%s, surviving=%s, reduced=%s)"
                % (self.eliminated_pairs, self.surviving_quadratics, self.reduced))


def reduce_iqp(q, w):
    """Split off the trivial quadratic part of an ice quiver with potential.

    Quadratic terms whose two arrows are both unfrozen are eliminated by the
    splitting substitution; arrows of the pair are deleted.  Quadratic terms
    touching a frozen arrow are kept (the frozen subquiver must stay intact)
    and flagged in the report.
    """
    if not w.is_irredundant():
        raise DomainError("potential is not irredundant")
    report = ReductionReport()
    current_q, current_w = q, w
    for _ in range(REDUCTION_ROUND_GUARD):
        pair = _find_splittable(current_q, current_w)
        if pair is None:
            break
        word, coeff = pair
        u, v = word.arrows
        rest = Potential(current_q,
                         {t: c for t, c in current_w.terms.items() if t != word},
                         current_w.degree_cap)
        # equations of motion for the pair, substituted into the whole potential
        u_image = cyclic_derivative(rest, v).scale(Fraction(-1) / coeff)
        v_image = cyclic_derivative(rest, u).scale(Fraction(-1) / coeff)
        for image in (u_image, v_image):
            if any(u in t or v in t for t in image.terms):
                raise GuardError(
                    "splitting pair (%s, %s) reappears in its own substitution; "
                    "iterated splitting is not supported" % (u, v))
        current_w = _substitute_many(current_w, {u: u_image, v: v_image})
        keep = [a for a in current_q.arrows if a.id not in (u, v)]
        current_q = type(current_q)(current_q.vertices,
                                    current_q.frozen_vertices, keep,
                                    original_labels=current_q.original_labels)
        current_w = current_w.with_quiver(current_q)
        report.eliminated_pairs.append((u, v))
        report.rounds += 1
    else:
        raise GuardError(
            "reduction did not terminate in %d rounds; "
            "potential likely a genuine power series" % REDUCTION_ROUND_GUARD)
    report.surviving_quadratics = ["".join(t.arrows)
                                   for t, _ in current_w.quadratic_terms()]
    pres = jacobian_presentation(current_q, current_w)
    report.admissible_up_to_cap = all(
        min((_word_len(word) for word in rel.terms), default=2) >= 2
        for rel in pres.relations.values())
    report.reduced = current_w.is_irredundant() and report.admissible_up_to_cap
    return current_q, current_w, report


def _find_splittable(q, w):
    candidates = []
    for word, c in w.quadratic_terms():
        u, v = word.arrows
        if u == v:
            continue
        if q.arrow(u).frozen or q.arrow(v).frozen:
            continue
        candidates.append((word, c))
    if not candidates:
        return None
    return min(candidates, key=lambda item: item[0])
