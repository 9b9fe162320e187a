"""Quiver representations over Q or a prime field, quiver Grassmannian point
counts, Euler characteristics by interpolation, and projective presentations
over the truncated relative Jacobian algebra.
"""

import itertools
from fractions import Fraction

from .errors import DomainError, GuardError
from .laurent import coeff_from_string, coeff_to_string
from .linalg import (FieldFp, FieldQ, in_rowspace, mat_mul, rank, rref,
                     nullspace, transpose, zeros)
from .potential import PathQuotient, jacobian_presentation

SUBREP_GUARD = 10 ** 7
PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)
PRESENTATION_CAPS = (4, 6, 8, 10, 12)


def _field_of(tag):
    if tag == "Q":
        return FieldQ()
    return FieldFp(int(tag))


class QuiverRep:
    """Finite-dimensional representation: a space per vertex, a matrix per arrow.

    The matrix of an arrow a has shape (dim at tgt) x (dim at src) and maps
    the source space into the target space.
    """

    def __init__(self, quiver, dims, maps=None, field="Q"):
        self.quiver = quiver
        self.field_tag = field
        self.field = _field_of(field)
        if isinstance(dims, dict):
            self.dims = {int(v): int(d) for v, d in dims.items()}
        else:
            self.dims = {v: int(d) for v, d in zip(quiver.vertices, dims)}
        if set(self.dims) != set(quiver.vertices):
            raise DomainError("dimension vector does not match the vertex set")
        if any(d < 0 for d in self.dims.values()):
            raise DomainError("dimensions must be nonnegative")
        self.maps = {}
        maps = maps or {}
        for a in quiver.arrows:
            m = self.dims[a.tgt]
            n = self.dims[a.src]
            matrix = maps.get(a.id)
            if matrix is None:
                matrix = zeros(m, n, self.field)
            else:
                matrix = [[self.field.convert(x) for x in row] for row in matrix]
                if len(matrix) != m or any(len(row) != n for row in matrix):
                    raise DomainError(
                        "matrix for arrow %r has shape %dx%d, expected %dx%d"
                        % (a.id, len(matrix),
                           len(matrix[0]) if matrix else 0, m, n))
            self.maps[a.id] = matrix

    def dim_vector(self):
        return tuple(self.dims[v] for v in self.quiver.vertices)

    def total_dim(self):
        return sum(self.dims.values())

    def path_matrix(self, word):
        """Evaluate a path word (composition order, rightmost first).

        Zero-dimensional intermediate spaces short-circuit to the zero matrix
        of the correct shape.
        """
        q = self.quiver
        if word[0] == "e":
            v = word[1]
            d = self.dims[v]
            out = zeros(d, d, self.field)
            for i in range(d):
                out[i][i] = self.field.one
            return out
        stations = [q.arrow(word[-1]).src]
        for arrow_id in reversed(word):
            stations.append(q.arrow(arrow_id).tgt)
        if any(self.dims[v] == 0 for v in stations):
            return zeros(self.dims[stations[-1]], self.dims[stations[0]],
                         self.field)
        result = None
        for arrow_id in reversed(word):
            m = self.maps[arrow_id]
            result = m if result is None else mat_mul(m, result, self.field)
        return result

    def is_nilpotent(self):
        """Some power of the sum of all arrow maps annihilates the module."""
        total = self.total_dim()
        if total == 0:
            return True
        offset = {}
        acc = 0
        for v in self.quiver.vertices:
            offset[v] = acc
            acc += self.dims[v]
        big = zeros(total, total, self.field)
        for a in self.quiver.arrows:
            m = self.maps[a.id]
            for i in range(self.dims[a.tgt]):
                for j in range(self.dims[a.src]):
                    big[offset[a.tgt] + i][offset[a.src] + j] = \
                        self.field.add(
                            big[offset[a.tgt] + i][offset[a.src] + j], m[i][j])
        power = big
        for _ in range(total):
            if all(x == self.field.zero for row in power for x in row):
                return True
            power = mat_mul(power, big, self.field)
        return all(x == self.field.zero for row in power for x in row)

    def has_integer_matrices(self):
        if self.field_tag != "Q":
            return False
        return all(Fraction(x).denominator == 1
                   for m in self.maps.values() for row in m for x in row)

    def reduce_mod(self, p):
        if self.field_tag != "Q":
            raise DomainError("can only reduce a rational representation")
        if not self.has_integer_matrices():
            raise DomainError("matrices must be integral to reduce mod a prime")
        return QuiverRep(self.quiver, self.dims,
                         {a: [[int(x) % p for x in row] for row in m]
                          for a, m in self.maps.items()},
                         field=p)

    def to_json(self):
        return {
            "dims": [self.dims[v] for v in self.quiver.vertices],
            "maps": {a.id: [[coeff_to_string(x) for x in row]
                            for row in self.maps[a.id]]
                     for a in self.quiver.arrows if self.dims[a.src]
                     and self.dims[a.tgt]},
            "field": self.field_tag if self.field_tag == "Q"
                     else int(self.field_tag),
        }

    @classmethod
    def from_json(cls, quiver, data):
        maps = {}
        for aid, matrix in data.get("maps", {}).items():
            maps[aid] = [[coeff_from_string(str(x)) for x in row]
                         for row in matrix]
        return cls(quiver, data["dims"], maps, data.get("field", "Q"))


class RelationCheck:
    def __init__(self, ok, failing_arrow=None, value=None):
        self.ok = ok
        self.failing_arrow = failing_arrow
        self.value = value

    def __bool__(self):
        return self.ok

    def __repr__(self):
        if self.ok:
            return "RelationCheck(pass)"
        return "RelationCheck(fail at %r)" % self.failing_arrow


def check_relations(q, w, rep):
    """Evaluate each relation d_a W on the matrices; zero means the rep is a
    module over the relative Jacobian algebra."""
    if set(rep.dims) != set(q.vertices):
        raise DomainError("representation dimensions do not match the quiver")
    pres = jacobian_presentation(q, w)
    for arrow_id, rel in sorted(pres.relations.items()):
        if not rel:
            continue
        terms = list(rel.terms.items())
        a = q.arrow(arrow_id)
        m, n = rep.dims[a.src], rep.dims[a.tgt]
        total = zeros(m, n, rep.field)
        for word, c in terms:
            mat = rep.path_matrix(word)
            c = rep.field.convert(c)
            for i in range(m):
                for j in range(n):
                    total[i][j] = rep.field.add(
                        total[i][j], rep.field.mul(c, mat[i][j]))
        if any(x != rep.field.zero for row in total for x in row):
            return RelationCheck(False, arrow_id, total)
    return RelationCheck(True)


# -- quiver Grassmannians ----------------------------------------------------


def gaussian_binomial(d, e, p):
    """Number of e-dimensional subspaces of F_p^d."""
    if e < 0 or e > d:
        return 0
    num = 1
    den = 1
    for i in range(e):
        num *= p ** (d - i) - 1
        den *= p ** (i + 1) - 1
    return num // den


def echelon_subspaces(d, e, p):
    """All e-dimensional subspaces of F_p^d as reduced echelon row bases.

    One matrix per Schubert cell choice of pivot columns, free entries filled
    in a deterministic order.
    """
    field = FieldFp(p)
    if e == 0:
        yield ((), ())
        return
    for pivots in itertools.combinations(range(d), e):
        pivot_set = set(pivots)
        free_positions = [(i, j) for i in range(e)
                          for j in range(pivots[i] + 1, d)
                          if j not in pivot_set]
        for values in itertools.product(range(p), repeat=len(free_positions)):
            rows = [[field.zero] * d for _ in range(e)]
            for i, c in enumerate(pivots):
                rows[i][c] = field.one
            for (i, j), val in zip(free_positions, values):
                rows[i][j] = val
            yield (pivots, tuple(tuple(r) for r in rows))


def count_subreps(rep, e):
    """Points of the quiver Grassmannian Gr_e(rep) over the rep's prime field.

    Enumerates echelon subspace tuples per vertex and keeps those closed
    under every arrow map.  Vertices not touched by any nonzero arrow map are
    unconstrained, so their Grassmannians contribute a plain Gaussian
    binomial factor without enumeration.
    """
    if rep.field_tag == "Q":
        raise DomainError("point counting needs a representation over F_p")
    p = int(rep.field_tag)
    q = rep.quiver
    field = rep.field
    e = {v: int(x) for v, x in (e.items() if isinstance(e, dict)
                                else zip(q.vertices, e))}
    for v in q.vertices:
        if e[v] < 0 or e[v] > rep.dims[v]:
            return 0
    active = set()
    active_arrows = []
    for a in q.arrows:
        if any(x != field.zero for row in rep.maps[a.id] for x in row):
            active.add(a.src)
            active.add(a.tgt)
            active_arrows.append(a)
    free_factor = 1
    for v in q.vertices:
        if v not in active:
            free_factor *= gaussian_binomial(rep.dims[v], e[v], p)
    if free_factor == 0:
        return 0
    constrained = [v for v in q.vertices if v in active]
    total = 1
    for v in constrained:
        total *= gaussian_binomial(rep.dims[v], e[v], p)
        if total > SUBREP_GUARD:
            raise GuardError("subspace enumeration would exceed %d tuples"
                             % SUBREP_GUARD)
    if total == 0:
        return 0
    per_vertex = {v: list(echelon_subspaces(rep.dims[v], e[v], p))
                  for v in constrained}
    count = 0
    for combo in itertools.product(*(per_vertex[v] for v in constrained)):
        chosen = dict(zip(constrained, combo))
        if _stable_under_arrows(rep, chosen, field, active_arrows):
            count += 1
    return count * free_factor


def _stable_under_arrows(rep, chosen, field, arrows=None):
    for a in (rep.quiver.arrows if arrows is None else arrows):
        pivots_t, rows_t = chosen[a.tgt]
        _, rows_s = chosen[a.src]
        matrix = rep.maps[a.id]
        for basis_vec in rows_s:
            image = [field.zero] * rep.dims[a.tgt]
            for j, coeff in enumerate(basis_vec):
                if coeff == field.zero:
                    continue
                for i in range(rep.dims[a.tgt]):
                    image[i] = field.add(image[i],
                                         field.mul(coeff, matrix[i][j]))
            if not rows_t:
                if any(x != field.zero for x in image):
                    return False
            elif not in_rowspace(rows_t, pivots_t, image, field):
                return False
    return True


class GrCount:
    """Point counts of one quiver Grassmannian over several primes, the
    interpolated counting polynomial, and its value at q = 1."""

    def __init__(self, e, counts_by_prime, poly, chi):
        self.e = tuple(e)
        self.counts_by_prime = dict(counts_by_prime)
        self.poly = tuple(poly)  # coefficients, constant term first
        self.chi = chi

    def poly_value(self, x):
        acc = Fraction(0)
        power = Fraction(1)
        for c in self.poly:
            acc += c * power
            power *= x
        return acc

    def __repr__(self):
        return "GrCount(e=%s, chi=%s)" % (list(self.e), self.chi)


def _lagrange(points):
    """Interpolating polynomial coefficients through exact points."""
    n = len(points)
    coeffs = [Fraction(0)] * n
    for i, (xi, yi) in enumerate(points):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, (xj, _) in enumerate(points):
            if i == j:
                continue
            new = [Fraction(0)] * (len(basis) + 1)
            for k, c in enumerate(basis):
                new[k] += c * (-xj)
                new[k + 1] += c
            basis = new
            denom *= (xi - xj)
        scale = Fraction(yi) / denom
        for k, c in enumerate(basis):
            coeffs[k] += scale * c
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def euler_characteristic(rep, e):
    """Euler characteristic of Gr_e(rep) by point counting and interpolation.

    Counts points over enough primes to pin the counting polynomial (degree
    at most sum e_i (d_i - e_i)), checks one extra prime for consistency, and
    evaluates at q = 1.  Counts that are not polynomial raise with residuals.
    """
    if rep.field_tag != "Q" or not rep.has_integer_matrices():
        raise DomainError("Euler characteristics need integral matrices over Q")
    q = rep.quiver
    e = {v: int(x) for v, x in (e.items() if isinstance(e, dict)
                                else zip(q.vertices, e))}
    for v in q.vertices:
        if e[v] < 0 or e[v] > rep.dims[v]:
            return GrCount([e[v] for v in q.vertices], {}, [Fraction(0)], 0)
    bound = sum(e[v] * (rep.dims[v] - e[v]) for v in q.vertices)
    needed = bound + 2  # interpolation points plus one consistency sample
    if needed > len(PRIMES):
        raise GuardError("degree bound %d needs more primes than provided" % bound)
    counts = {}
    for p in PRIMES[:needed]:
        counts[p] = count_subreps(rep.reduce_mod(p), e)
    samples = sorted(counts.items())
    poly = _lagrange(samples[:-1])
    check_p, check_count = samples[-1]
    predicted = _poly_eval(poly, check_p)
    if predicted != check_count:
        raise DomainError(
            "point counts are not polynomial in q",
            witness={"counts": counts, "residual_at": check_p,
                     "predicted": str(predicted), "observed": check_count})
    chi = _poly_eval(poly, 1)
    if chi.denominator != 1:
        raise DomainError("interpolated value at q=1 is not an integer",
                          witness=str(chi))
    return GrCount([e[v] for v in q.vertices], counts, poly, int(chi))


def _poly_eval(coeffs, x):
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def euler_all(rep):
    """chi of Gr_e(rep) for every sub-dimension vector e, sharing prime sweeps."""
    q = rep.quiver
    boxes = [range(rep.dims[v] + 1) for v in q.vertices]
    out = {}
    for combo in itertools.product(*boxes):
        e = dict(zip(q.vertices, combo))
        out[tuple(combo)] = euler_characteristic(rep, e).chi
    return out


# -- minimal presentations ---------------------------------------------------


class Presentation:
    """Projective presentation data: multiplicities of P1 and P0 by vertex,
    and the class difference [P0] - [P1]."""

    def __init__(self, quiver, p1, p0):
        self.quiver = quiver
        self.p1 = dict(p1)
        self.p0 = dict(p0)
        self.g = tuple(self.p0.get(v, 0) - self.p1.get(v, 0)
                       for v in quiver.vertices)

    def __repr__(self):
        return "Presentation(P1=%s, P0=%s, g=%s)" % (
            self.p1, self.p0, list(self.g))


def _right_action_matrices(rep):
    """The representation viewed as a right module: transposed arrow actions.

    Arrow a: u -> t acts on the right, mapping the component at t to the
    component at u.
    """
    out = {}
    for a in rep.quiver.arrows:
        out[a.id] = transpose(rep.maps[a.id], rep.dims[a.tgt], rep.dims[a.src])
    return out


class RightProjectives:
    """Bases of the right projective modules e_i J inside the path quotient."""

    def __init__(self, quotient):
        self.quotient = quotient
        q = quotient.quiver
        self.component = {}
        for i in q.vertices:
            for j in q.vertices:
                self.component[(i, j)] = [
                    w for w in quotient.basis
                    if _tgt(q, w) == i and _src(q, w) == j]

def _src(q, word):
    return word[1] if word[0] == "e" else q.arrow(word[-1]).src


def _tgt(q, word):
    return word[1] if word[0] == "e" else q.arrow(word[0]).tgt


def minimal_presentation(q, w, rep):
    """Minimal projective presentation of the representation as a right module
    over the truncated relative Jacobian algebra.

    P0 covers the top, P1 covers the top of the kernel; the returned class is
    g = [P0] - [P1].  Requires the Jacobian dimensions to stabilize within the
    cap and the representation to satisfy the relations.
    """
    if rep.field_tag != "Q":
        raise DomainError("presentations are computed over Q")
    check = check_relations(q, w, rep)
    if not check:
        raise DomainError("representation violates relation at arrow %r"
                          % check.failing_arrow)
    pres = jacobian_presentation(q, w)
    quotient = None
    for cap in PRESENTATION_CAPS:
        if cap > max(2, w.degree_cap + 2):
            break
        candidate = PathQuotient(pres, cap)
        if candidate.stabilized:
            quotient = candidate
            break
    if quotient is None:
        raise DomainError(
            "Jacobian dimensions do not stabilize up to the cap; "
            "supply the presentation manually")
    field = FieldQ()
    right = _right_action_matrices(rep)
    projectives = RightProjectives(quotient)

    top_vectors = _module_top(q, rep.dims, right, field)
    p0_mult = {v: len(vecs) for v, vecs in top_vectors.items()}
    generators = [(v, vec) for v in q.vertices for vec in top_vectors[v]]

    # columns of phi at each vertex: images of projective basis paths
    phi = {}
    p0_basis = {}
    for v in q.vertices:
        columns = []
        tags = []
        for gi, (gv, gvec) in enumerate(generators):
            for word in projectives.component[(gv, v)]:
                columns.append(_right_act_vector(q, right, gvec, word, field))
                tags.append((gi, word))
        phi[v] = columns
        p0_basis[v] = tags

    kernel = {}
    for v in q.vertices:
        cols = phi[v]
        if not cols:
            kernel[v] = []
        elif rep.dims[v] == 0:
            kernel[v] = [list(row) for row in identity_vectors(len(cols), field)]
        else:
            # rows of the map P0_v -> M_v, unknowns are P0 coordinates
            matrix_rows = transpose(cols, len(cols), rep.dims[v])
            kernel[v] = nullspace(matrix_rows, len(cols), field)

    p1_mult = _kernel_top_multiplicities(q, projectives, generators, p0_basis,
                                         kernel, field)
    return Presentation(q, p1_mult, p0_mult)


def identity_vectors(n, field):
    for i in range(n):
        vec = [field.zero] * n
        vec[i] = field.one
        yield vec


def _module_top(q, dims, right, field):
    """Lifted basis of M / rad M for the right-module structure.

    The radical at v is the sum of the images of the right actions of the
    arrows with source v; lifts are taken at the non-pivot coordinates.
    """
    out = {}
    for v in q.vertices:
        d = dims[v]
        radical_rows = []
        for a in q.arrows_from(v):
            m = right[a.id]  # maps component at a.tgt -> component at a.src = v
            for j in range(dims[a.tgt]):
                radical_rows.append([m[i][j] for i in range(d)])
        pivots, _ = rref(radical_rows, d, field)
        pivot_set = set(pivots)
        lifts = []
        for j in range(d):
            if j not in pivot_set:
                vec = [field.zero] * d
                vec[j] = field.one
                lifts.append(vec)
        out[v] = lifts
    return out


def _right_act_vector(q, right, vec, word, field):
    """Apply the right action of a path word to a vector, last arrow first."""
    if word[0] == "e":
        return list(vec)
    current = list(vec)
    for arrow_id in word:
        m = right[arrow_id]
        nxt = [field.zero] * len(m)
        for i in range(len(m)):
            row = m[i]
            acc = field.zero
            for jj, x in enumerate(current):
                if x != field.zero and row[jj] != field.zero:
                    acc = field.add(acc, field.mul(x, row[jj]))
            nxt[i] = acc
        current = nxt
    return current


def _kernel_top_multiplicities(q, projectives, generators, p0_basis, kernel,
                               field):
    """Top of the kernel submodule, computed inside P0's coordinates."""
    quotient = projectives.quotient
    p1 = {v: 0 for v in q.vertices}
    for v in q.vertices:
        kv = kernel[v]
        if not kv:
            continue
        radical_rows = []
        for a in q.arrows_from(v):
            for source_vec in kernel[a.tgt]:
                radical_rows.append(
                    _p0_right_act(q, quotient, projectives, generators,
                                  p0_basis, source_vec, a, field))
        dims_rad = rank(radical_rows, len(p0_basis[v]), field) if radical_rows \
            else 0
        dim_k = rank(kv, len(p0_basis[v]), field)
        p1[v] = dim_k - dims_rad
    return p1


def _p0_right_act(q, quotient, projectives, generators, p0_basis, vec, arrow,
                  field):
    """Right action of an arrow on a vector in P0's component at arrow.tgt,
    landing in the component at arrow.src."""
    source_tags = p0_basis[arrow.tgt]
    target_tags = p0_basis[arrow.src]
    target_index = {tag: k for k, tag in enumerate(target_tags)}
    out = [field.zero] * len(target_tags)
    for coeff, (gi, word) in zip(vec, source_tags):
        if coeff == field.zero:
            continue
        new_word = (word + (arrow.id,)) if word[0] != "e" else (arrow.id,)
        nf = quotient.normal_form(new_word)
        for basis_word, c in nf.items():
            k = target_index.get((gi, basis_word))
            if k is None:
                raise DomainError("normal form left the projective component")
            out[k] = field.add(out[k], field.mul(coeff, field.convert(c)))
    return out
