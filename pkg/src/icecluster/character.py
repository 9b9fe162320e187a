"""Cluster characters: the character on Higgs-category objects given by index
plus quiver-Grassmannian Euler characteristics, its localized extension, the
suspension formula, and the multiplication-formula checker.

Categorical inputs (indices, suspensions, injective classes, one-dimensionality
of extension spaces) are supplied by the caller; this module only
decategorifies.
"""

from .errors import DomainError
from .laurent import LaurentPoly, specialize_frozen
from .reps import euler_all


class CoefficientRule:
    """The exponent rule x^{-l(e)} = prod_j yhat_j^{e_j}.

    Backed by the extended exchange matrix of the seed quiver: l(e) = -B e
    with e read over the unfrozen vertices.
    """

    def __init__(self, quiver, names=None):
        from .seeds import default_names
        quiver.require_valid()
        self.quiver = quiver
        self.names = tuple(names) if names else default_names(quiver)
        self.matrix = quiver.exchange_matrix()

    @property
    def n(self):
        return self.quiver.n

    def hatted_exponent(self, e_by_vertex):
        """Exponent vector of prod_j yhat_j^{e_j} for a sub-dimension vector."""
        delta = [0] * self.n
        for j, ej in e_by_vertex.items():
            if ej == 0:
                continue
            if j in self.quiver.frozen_vertices:
                raise DomainError(
                    "dimension vectors must be supported on unfrozen vertices")
            column = self.matrix.column(j)
            for i in range(self.n):
                delta[i] += column[i] * ej
        return tuple(delta)


class CharacterInput:
    """Index vector plus the module whose submodule Grassmannians weight the sum.

    The module lives over a quiver whose vertex ids embed into the seed
    quiver's unfrozen vertices (typically the full unfrozen subquiver); a
    None module means the zero module.
    """

    def __init__(self, g, module=None):
        self.g = tuple(int(x) for x in g)
        self.module = module

    def __repr__(self):
        return "CharacterInput(g=%s, module=%s)" % (
            list(self.g), "0" if self.module is None else self.module.dim_vector())


def cc(inp, rule):
    """x^g  sum_e chi(Gr_e(module)) x^{-l(e)} over the full sub-dimension box."""
    if len(inp.g) != rule.n:
        raise DomainError("index vector has length %d, expected %d"
                          % (len(inp.g), rule.n))
    result = LaurentPoly.zero(rule.names)
    base = LaurentPoly.monomial(rule.names, inp.g)
    if inp.module is None or inp.module.total_dim() == 0:
        return base
    module = inp.module
    unknown = set(module.quiver.vertices) - set(rule.quiver.vertices)
    if unknown:
        raise DomainError("module vertices %s not in the seed quiver"
                          % sorted(unknown))
    chis = euler_all(module)
    vertex_list = list(module.quiver.vertices)
    for combo, chi in sorted(chis.items()):
        if chi == 0:
            continue
        e_by_vertex = dict(zip(vertex_list, combo))
        delta = rule.hatted_exponent(e_by_vertex)
        term = LaurentPoly.monomial(rule.names, delta, chi)
        result = result + base * term
    return result


def multiplication_check(l_input, m_input, e_input, e_prime_input, rule):
    """Verify cc(L) cc(M) = cc(E) + cc(E') exactly.

    The caller asserts that the relevant extension space is one-dimensional;
    returns None on success and the nonzero difference on failure.
    """
    lhs = cc(l_input, rule) * cc(m_input, rule)
    rhs = cc(e_input, rule) + cc(e_prime_input, rule)
    diff = lhs - rhs
    if diff:
        return diff
    return None


class LocalizedObject:
    """Frozen class plus a character input over the unfrozen Jacobian algebra."""

    def __init__(self, frozen_class, reduced_part=None):
        self.frozen_class = tuple(int(x) for x in frozen_class)
        self.reduced_part = reduced_part

    def __repr__(self):
        return "LocalizedObject(frozen=%s, reduced=%s)" % (
            list(self.frozen_class), self.reduced_part)


def cc_loc(obj, rule):
    """The localized character: x^{frozen class} times the character of the
    reduced part.  Restricting to frozen class zero recovers cc."""
    if len(obj.frozen_class) != rule.n:
        raise DomainError("frozen class has length %d, expected %d"
                          % (len(obj.frozen_class), rule.n))
    for i, v in enumerate(rule.quiver.vertices):
        if obj.frozen_class[i] and v not in rule.quiver.frozen_vertices:
            raise DomainError(
                "frozen class supported at unfrozen vertex %s" % v)
    monomial = LaurentPoly.monomial(rule.names, obj.frozen_class)
    if obj.reduced_part is None:
        return monomial
    return monomial * cc(obj.reduced_part, rule)


def cc_shift(obj, suspension, injective_class, rule):
    """Character of a suspended object: cc(suspension) x^{-injective class}.

    The suspension data and the class of the injective envelope are
    categorical inputs supplied by the caller; obj identifies what is being
    suspended and is not used in the computation.
    """
    injective_class = tuple(int(x) for x in injective_class)
    if len(injective_class) != rule.n:
        raise DomainError("injective class has length %d, expected %d"
                          % (len(injective_class), rule.n))
    inverse = LaurentPoly.monomial(rule.names,
                                   tuple(-x for x in injective_class))
    return cc(suspension, rule) * inverse


def specialize_character(p, rule):
    """Kill the coefficients of a character value (x_i -> 1 for frozen i)."""
    return specialize_frozen(p, rule.quiver.r)
