"""Exact multivariate Laurent polynomials with unbounded integer coefficients.

Terms are stored as a map from dense exponent tuples (one slot per variable,
entries in Z) to nonzero coefficients.  Coefficients are Python ints wherever
possible and fall back to Fraction transparently; all arithmetic is exact.
"""

from fractions import Fraction

from .errors import DomainError, GuardError, InexactDivision

MAX_VARIABLES = 64


def _norm_coeff(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c)
    return c


def coeff_from_string(s):
    """Parse an exact rational string "p" or "p/q"."""
    s = s.strip()
    if "/" in s:
        num, den = s.split("/")
        return _norm_coeff(Fraction(int(num), int(den)))
    return int(s)


def coeff_to_string(c):
    if isinstance(c, Fraction):
        return "%d/%d" % (c.numerator, c.denominator)
    return str(c)


def term_order_key(exps):
    """Graded-lex key on exponent vectors (total degree first)."""
    return (sum(exps), exps)


class LaurentPoly:
    """A Laurent polynomial over named variables.

    The variable name tuple acts as the ring tag: operations mix only
    polynomials over the same names.
    """

    __slots__ = ("names", "terms")

    def __init__(self, names, terms=None):
        names = tuple(names)
        if len(names) > MAX_VARIABLES:
            raise GuardError("at most %d variables supported" % MAX_VARIABLES)
        self.names = names
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != len(names):
                raise DomainError("exponent tuple length %d != %d variables"
                                  % (len(exps), len(names)))
            c = _norm_coeff(c if isinstance(c, Fraction) else Fraction(c))
            if c != 0:
                clean[exps] = clean.get(exps, 0) + c
        self.terms = {e: _norm_coeff(c) for e, c in clean.items() if c != 0}

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, names):
        return cls(names, {})

    @classmethod
    def constant(cls, names, c):
        return cls(names, {(0,) * len(names): c})

    @classmethod
    def one(cls, names):
        return cls.constant(names, 1)

    @classmethod
    def variable(cls, names, i):
        exps = [0] * len(names)
        exps[i] = 1
        return cls(names, {tuple(exps): 1})

    @classmethod
    def monomial(cls, names, exps, c=1):
        return cls(names, {tuple(exps): c})

    # -- ring structure ----------------------------------------------------

    def _check_ring(self, other):
        if self.names != other.names:
            raise DomainError("mixed variable sets: %r vs %r"
                              % (self.names, other.names))

    def __add__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.constant(self.names, other)
        self._check_ring(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e, 0) + c
            if s == 0:
                terms.pop(e, None)
            else:
                terms[e] = s
        out = LaurentPoly.__new__(LaurentPoly)
        out.names = self.names
        out.terms = {e: _norm_coeff(c) for e, c in terms.items()}
        return out

    __radd__ = __add__

    def __neg__(self):
        out = LaurentPoly.__new__(LaurentPoly)
        out.names = self.names
        out.terms = {e: -c for e, c in self.terms.items()}
        return out

    def __sub__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.constant(self.names, other)
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.constant(self.names, other)
        self._check_ring(other)
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = terms.get(e, 0) + c1 * c2
                if s == 0:
                    terms.pop(e, None)
                else:
                    terms[e] = s
        out = LaurentPoly.__new__(LaurentPoly)
        out.names = self.names
        out.terms = {e: _norm_coeff(c) for e, c in terms.items()}
        return out

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int):
            raise DomainError("exponent must be an integer")
        if k < 0:
            inv = self.monomial_inverse()
            return inv ** (-k)
        result = LaurentPoly.one(self.names)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.names == other.names and self.terms == other.terms
        return self.terms == LaurentPoly.constant(self.names, other).terms

    def __hash__(self):
        return hash((self.names, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # -- queries -----------------------------------------------------------

    def is_monomial(self):
        return len(self.terms) == 1

    def is_one(self):
        return self.terms == {(0,) * len(self.names): 1}

    def support(self):
        """Indices of variables appearing with nonzero exponent."""
        seen = set()
        for e in self.terms:
            for i, v in enumerate(e):
                if v:
                    seen.add(i)
        return seen

    def min_exponent(self, i):
        if not self.terms:
            return 0
        return min(e[i] for e in self.terms)

    def monomial_inverse(self):
        if len(self.terms) != 1:
            raise DomainError("only monomials are invertible")
        (exps, c), = self.terms.items()
        if c not in (1, -1):
            inv = Fraction(1, 1) / c
        else:
            inv = c
        return LaurentPoly(self.names, {tuple(-e for e in exps): inv})

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda item: term_order_key(item[0]))

    def canonical_key(self):
        """Hashable canonical form used for seed deduplication."""
        return tuple((e, c) for e, c in self.sorted_terms())

    # -- division ----------------------------------------------------------

    def exact_div(self, other):
        """Exact division in the Laurent ring; raises InexactDivision otherwise.

        Both operands are shifted into the polynomial subring, then reduced
        term by term against the divisor's graded-lex leading term.  For a
        genuinely divisible pair this terminates with remainder zero.
        """
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.constant(self.names, other)
        self._check_ring(other)
        if not other.terms:
            raise DomainError("division by zero")
        if not self.terms:
            return LaurentPoly.zero(self.names)
        n = len(self.names)
        shift = tuple(self.min_exponent(i) for i in range(n))
        f = {tuple(a - s for a, s in zip(e, shift)): c for e, c in self.terms.items()}
        oshift = tuple(other.min_exponent(i) for i in range(n))
        g = {tuple(a - s for a, s in zip(e, oshift)): c for e, c in other.terms.items()}
        lead_g = max(g, key=term_order_key)
        cg = g[lead_g]
        quotient = {}
        while f:
            lead_f = max(f, key=term_order_key)
            qe = tuple(a - b for a, b in zip(lead_f, lead_g))
            if any(v < 0 for v in qe):
                raise InexactDivision("inexact Laurent division", witness=dict(f))
            qc = Fraction(f[lead_f]) / Fraction(cg)
            quotient[qe] = quotient.get(qe, 0) + qc
            for e, c in g.items():
                te = tuple(a + b for a, b in zip(qe, e))
                s = f.get(te, 0) - qc * c
                if s == 0:
                    f.pop(te, None)
                else:
                    f[te] = s
        back = tuple(a - b for a, b in zip(shift, oshift))
        return LaurentPoly(self.names,
                           {tuple(a + b for a, b in zip(e, back)): c
                            for e, c in quotient.items()})

    def divides(self, other):
        try:
            other.exact_div(self)
            return True
        except InexactDivision:
            return False

    # -- serialization and display ------------------------------------------

    def to_json(self):
        return {
            "variables": list(self.names),
            "terms": [{"coeff": coeff_to_string(c), "exponents": list(e)}
                      for e, c in self.sorted_terms()],
        }

    @classmethod
    def from_json(cls, data):
        names = tuple(data["variables"])
        terms = {}
        for t in data["terms"]:
            terms[tuple(t["exponents"])] = coeff_from_string(t["coeff"])
        return cls(names, terms)

    def term_list_json(self):
        return self.to_json()["terms"]

    @classmethod
    def from_term_list(cls, names, term_list):
        return cls.from_json({"variables": list(names), "terms": term_list})

    def _monomial_str(self, exps):
        parts = []
        for name, e in zip(self.names, exps):
            if e == 0:
                continue
            parts.append(name if e == 1 else "%s^%d" % (name, e))
        return "*".join(parts)

    def pretty(self):
        """Fraction display: numerator over the common monomial denominator."""
        if not self.terms:
            return "0"
        n = len(self.names)
        den_exps = tuple(max(0, -self.min_exponent(i)) for i in range(n))
        num = self * LaurentPoly.monomial(self.names, den_exps)
        num_str = " + ".join(
            _term_str(self.names, e, c) for e, c in num.sorted_terms()
        ).replace("+ -", "- ")
        if all(v == 0 for v in den_exps):
            return num_str
        den_str = self._monomial_str(den_exps)
        if "*" in den_str or "^" in den_str:
            den_str = "(%s)" % den_str
        if len(num.terms) > 1:
            return "(%s)/%s" % (num_str, den_str)
        return "%s/%s" % (num_str, den_str)

    def __repr__(self):
        return "LaurentPoly(%s)" % self.pretty()


def _term_str(names, exps, c):
    mono = []
    for name, e in zip(names, exps):
        if e == 0:
            continue
        mono.append(name if e == 1 else "%s^%d" % (name, e))
    mono_str = "*".join(mono)
    if not mono_str:
        return coeff_to_string(c)
    if c == 1:
        return mono_str
    if c == -1:
        return "-%s" % mono_str
    return "%s*%s" % (coeff_to_string(c), mono_str)


def specialize_frozen(p, r):
    """Collapse every frozen variable (index >= r) to 1.

    Returns a Laurent polynomial over the first r names only.
    """
    names = p.names[:r]
    terms = {}
    for e, c in p.terms.items():
        key = e[:r]
        terms[key] = terms.get(key, 0) + c
    return LaurentPoly(names, terms)
