"""Vertex Lie algebras presented by generators and bracket tables.

A vertex Lie algebra here is a free module over its ring spanned by formal
derivatives T^e a of finitely many generators (plus an optional central
element fixed by T), with n-th bracket operations a_(n)b for n >= 0 stored
only between plain generators; brackets involving derivatives are derived
on demand from the translation rules

    (T a)_(n) b = -n a_(n-1) b,
    a_(n) (T b) = T(a_(n) b) + n a_(n-1) (T^0 b-part),

which is what makes the finite table a complete presentation.

Generators carry a conformal weight (nonnegative rational), a parity, and
two auxiliary integer gradings (charge, ghost) used downstream to slice
enveloping algebras into finite blocks.
"""

from __future__ import annotations

from fractions import Fraction

from .scalars import Scalar, ZERO, ONE, sc, format_scalar, parse_scalar


class Gen:
    __slots__ = ("name", "weight", "parity", "charge", "ghost")

    def __init__(self, name, weight, parity=0, charge=0, ghost=0):
        self.name = name
        self.weight = Fraction(weight)
        if self.weight < 0:
            raise ValueError("generator %r has negative weight" % name)
        if parity not in (0, 1):
            raise ValueError("parity must be 0 or 1")
        self.parity = parity
        self.charge = charge
        self.ghost = ghost

    def __repr__(self):
        return "Gen(%s, wt=%s, p=%d)" % (self.name, self.weight, self.parity)


class BrValue:
    """Value of a bracket: sum of c * T^e g plus a central part."""

    __slots__ = ("terms", "central")

    def __init__(self, terms=None, central=ZERO):
        self.terms = {}
        if terms:
            for k, v in terms.items():
                v = sc(v)
                if not v.is_zero():
                    self.terms[k] = v
        self.central = sc(central)

    def is_zero(self):
        return not self.terms and self.central.is_zero()

    def add(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            w = out.get(k, ZERO) + v
            if w.is_zero():
                out.pop(k, None)
            else:
                out[k] = w
        return BrValue(out, self.central + other.central)

    def scale(self, s):
        s = sc(s)
        if s.is_zero():
            return BrValue()
        return BrValue({k: v * s for k, v in self.terms.items()},
                       self.central * s)

    def translate(self):
        """Apply T: raise every derivative power; T kills the center."""
        return BrValue({(g, e + 1): v for (g, e), v in self.terms.items()})

    def __eq__(self, other):
        return (isinstance(other, BrValue) and self.terms == other.terms
                and self.central == other.central)

    def __repr__(self):
        return "BrValue(%r, central=%s)" % (self.terms,
                                            format_scalar(self.central))


ZERO_BR = BrValue()


class VertexLieData:
    def __init__(self, gens, brackets, ring=None, central=False):
        self.gens = list(gens)
        self.ring = ring
        self.central = central
        self.index = {}
        for i, g in enumerate(self.gens):
            if g.name in self.index:
                raise ValueError("duplicate generator name %r" % g.name)
            self.index[g.name] = i
        self.brackets = {}
        for (ia, ib, n), val in brackets.items():
            if n < 0:
                raise ValueError("bracket mode must be nonnegative")
            if not isinstance(val, BrValue):
                val = BrValue(val)
            if val.is_zero():
                continue
            if not central and not val.central.is_zero():
                raise ValueError("central coefficient in a non-central table")
            self.brackets[(ia, ib, n)] = val

    def gen(self, name) -> int:
        return self.index[name]

    def names(self):
        return [g.name for g in self.gens]

    def pole_bound(self, ia, ib) -> int:
        """Largest n that can carry a nonzero bracket by weight reasons."""
        s = self.gens[ia].weight + self.gens[ib].weight
        return int(s) - 1

    def stored(self, ia, ib, n) -> BrValue:
        return self.brackets.get((ia, ib, n), ZERO_BR)

    def bracket(self, ia, ea, n, ib, eb) -> BrValue:
        """(T^ea a)_(n) (T^eb b), derived from the generator table."""
        if n < 0:
            return ZERO_BR
        if ea > 0:
            if n == 0:
                return ZERO_BR
            return self.bracket(ia, ea - 1, n - 1, ib, eb).scale(-n)
        if eb > 0:
            out = self.bracket(ia, 0, n, ib, eb - 1).translate()
            if n > 0:
                out = out.add(self.bracket(ia, 0, n - 1, ib, eb - 1).scale(n))
            return out
        return self.stored(ia, ib, n)

    def bracket_value(self, val: BrValue, n: int, ib, eb) -> BrValue:
        """(sum of T^e g)_(n) applied to T^eb b; the center acts by zero."""
        out = ZERO_BR
        for (g, e), s in val.terms.items():
            out = out.add(self.bracket(g, e, n, ib, eb).scale(s))
        return out

    # -- serialization ---------------------------------------------------

    def to_dict(self):
        gens = [{"name": g.name, "weight": _frac_str(g.weight),
                 "parity": g.parity, "charge": g.charge, "ghost": g.ghost}
                for g in self.gens]
        brs = []
        for (ia, ib, n) in sorted(self.brackets):
            val = self.brackets[(ia, ib, n)]
            entry = {"a": self.gens[ia].name, "b": self.gens[ib].name, "n": n,
                     "value": [{"gen": self.gens[g].name, "dpow": e,
                                "coeff": format_scalar(c)}
                               for (g, e), c in sorted(val.terms.items())]}
            if not val.central.is_zero():
                entry["central_coeff"] = format_scalar(val.central)
            brs.append(entry)
        return {"ring": self.ring, "central": self.central,
                "generators": gens, "brackets": brs}

    @staticmethod
    def from_dict(data) -> "VertexLieData":
        gens = [Gen(g["name"], _parse_frac(g["weight"]),
                    g.get("parity", 0), g.get("charge", 0), g.get("ghost", 0))
                for g in data["generators"]]
        index = {g.name: i for i, g in enumerate(gens)}
        brackets = {}
        for b in data.get("brackets", []):
            terms = {}
            for t in b.get("value", []):
                terms[(index[t["gen"]], t.get("dpow", 0))] = \
                    parse_scalar(str(t["coeff"]))
            central = parse_scalar(str(b.get("central_coeff", "0")))
            key = (index[b["a"]], index[b["b"]], b["n"])
            brackets[key] = BrValue(terms, central)
        return VertexLieData(gens, brackets, ring=data.get("ring"),
                             central=data.get("central", False))


def _frac_str(w: Fraction):
    return int(w) if w.denominator == 1 else "%d/%d" % (w.numerator,
                                                        w.denominator)


def _parse_frac(w):
    if isinstance(w, str):
        return Fraction(w)
    return Fraction(w)


# -- checkers ----------------------------------------------------------


class CheckReport:
    __slots__ = ("ok", "violations")

    def __init__(self, violations):
        self.violations = violations
        self.ok = not violations

    def __bool__(self):
        return self.ok

    def __repr__(self):
        if self.ok:
            return "<check ok>"
        return "<check FAILED: %s>" % "; ".join(
            v["message"] for v in self.violations[:3])


def check_sesquilinearity(L: VertexLieData) -> CheckReport:
    """Structural sanity of the stored table.

    Brackets involving derivatives are themselves derived from the table,
    so the checkable content is: every stored value is weight homogeneous
    (wt = wt a + wt b - n - 1), parity homogeneous, the central part sits
    in weight zero only, and no bracket exceeds the weight pole bound.
    """
    bad = []
    for (ia, ib, n), val in sorted(L.brackets.items()):
        a, b = L.gens[ia], L.gens[ib]
        want = a.weight + b.weight - n - 1
        pair = (a.name, b.name, n)
        if n > L.pole_bound(ia, ib):
            bad.append({"pair": pair, "message":
                        "%s_(%d)%s exceeds the weight pole bound"
                        % (a.name, n, b.name)})
            continue
        for (g, e), c in sorted(val.terms.items()):
            got = L.gens[g].weight + e
            if got != want:
                bad.append({"pair": pair, "message":
                            "%s_(%d)%s has a term T^%d %s of weight %s, "
                            "expected %s" % (a.name, n, b.name, e,
                                             L.gens[g].name, got, want)})
            if (L.gens[g].parity - a.parity - b.parity) % 2 != 0:
                bad.append({"pair": pair, "message":
                            "%s_(%d)%s has a term of wrong parity"
                            % (a.name, n, b.name)})
        if not val.central.is_zero():
            if want != 0:
                bad.append({"pair": pair, "message":
                            "central part of %s_(%d)%s sits in weight %s"
                            % (a.name, n, b.name, want)})
            if (a.parity + b.parity) % 2 != 0:
                bad.append({"pair": pair, "message":
                            "central part of %s_(%d)%s has odd parity"
                            % (a.name, n, b.name)})
    return CheckReport(bad)


def check_skew_symmetry(L: VertexLieData) -> CheckReport:
    """a_(n)b = (-1)^{|a||b|} sum_j (-1)^{n+j+1} T^j (b_(n+j) a) / j!"""
    bad = []
    ng = len(L.gens)
    for ia in range(ng):
        for ib in range(ng):
            bound = L.pole_bound(ia, ib)
            sign_ab = (-1) ** (L.gens[ia].parity * L.gens[ib].parity)
            for n in range(bound + 1):
                lhs = L.bracket(ia, 0, n, ib, 0)
                rhs = ZERO_BR
                j = 0
                while n + j <= bound:
                    term = L.bracket(ib, 0, n + j, ia, 0)
                    for _ in range(j):
                        term = term.translate()
                    coeff = Fraction((-1) ** (n + j + 1) * sign_ab)
                    for f in range(1, j + 1):
                        coeff /= f
                    rhs = rhs.add(term.scale(coeff))
                    j += 1
                if lhs.add(rhs.scale(-1)).is_zero():
                    continue
                bad.append({"pair": (L.gens[ia].name, L.gens[ib].name, n),
                            "message": "skew-symmetry fails for "
                            "%s_(%d)%s" % (L.gens[ia].name, n,
                                           L.gens[ib].name)})
    return CheckReport(bad)


def check_jacobi(L: VertexLieData, cutoff=None) -> CheckReport:
    """a_(m)(b_(k)c) - (-1)^{|a||b|} b_(k)(a_(m)c)
       = sum_n C(m, n) (a_(n)b)_(m+k-n) c, for all generators and all
       modes up to the weight pole bounds (or the given cutoff)."""
    from .scalars import binom
    bad = []
    ng = len(L.gens)
    for ia in range(ng):
        for ib in range(ng):
            sign_ab = (-1) ** (L.gens[ia].parity * L.gens[ib].parity)
            for ic in range(ng):
                m_max = L.pole_bound(ia, ib) + L.pole_bound(ib, ic) + 2
                if cutoff is not None:
                    m_max = min(m_max, cutoff)
                k_max = m_max
                for m in range(m_max + 1):
                    for k in range(k_max + 1):
                        lhs = _act(L, ia, m, L.bracket(ib, 0, k, ic, 0))
                        rhs1 = _act(L, ib, k, L.bracket(ia, 0, m, ic, 0))
                        rhs2 = ZERO_BR
                        for n in range(m + 1):
                            ab = L.bracket(ia, 0, n, ib, 0)
                            rhs2 = rhs2.add(
                                L.bracket_value(ab, m + k - n, ic, 0)
                                .scale(binom(m, n)))
                        diff = lhs.add(rhs1.scale(-sign_ab)) \
                                  .add(rhs2.scale(-1))
                        if not diff.is_zero():
                            bad.append({
                                "witness": (L.gens[ia].name,
                                            L.gens[ib].name,
                                            L.gens[ic].name, m, k),
                                "message":
                                "Jacobi fails for (%s_(%d), %s_(%d)) on %s"
                                % (L.gens[ia].name, m, L.gens[ib].name, k,
                                   L.gens[ic].name)})
    return CheckReport(bad)


def _act(L, ia, m, val: BrValue) -> BrValue:
    """a_(m) applied to a bracket value; the center is annihilated."""
    out = ZERO_BR
    for (g, e), s in val.terms.items():
        out = out.add(L.bracket(ia, 0, m, g, e).scale(s))
    return out


# -- builders ----------------------------------------------------------


def current_algebra(names, struct, kappa, level, ring=None,
                    charges=None) -> VertexLieData:
    """Currents of weight 1 with [x_i, x_j] structure constants and a
    central extension by level * kappa(i, j) at the first pole.

    ``struct`` maps (i, j) to a list of (k, coeff); ``kappa`` maps (i, j)
    to a Scalar-coercible pairing value.
    """
    level = sc(level)
    if ring is None:
        ring = level.var
    gens = [Gen(n, 1, 0, 0 if charges is None else charges[i], 0)
            for i, n in enumerate(names)]
    brackets = {}
    for (i, j), terms in struct.items():
        val = {(k, 0): sc(c) for k, c in terms}
        brackets[(i, j, 0)] = BrValue(val)
    for (i, j), v in kappa.items():
        v = sc(v) * level
        if not v.is_zero():
            brackets[(i, j, 1)] = brackets.get((i, j, 1), ZERO_BR).add(
                BrValue({}, v))
    return VertexLieData(gens, brackets, ring=ring, central=True)


def heisenberg(level, rank=1, names=None) -> VertexLieData:
    names = names or (["b"] if rank == 1 else
                      ["b%d" % i for i in range(1, rank + 1)])
    kappa = {(i, i): ONE for i in range(rank)}
    return current_algebra(names, {}, kappa, level)


SL2_STRUCT = {
    (0, 1): [(0, -2)], (1, 0): [(0, 2)],        # [e,h] = -2e, [h,e] = 2e
    (1, 2): [(2, -2)], (2, 1): [(2, 2)],        # [h,f] = -2f
    (0, 2): [(1, 1)], (2, 0): [(1, -1)],        # [e,f] = h
}

# normalized invariant pairing with kappa(h,h) = 2, kappa(e,f) = 1
SL2_KAPPA = {(0, 2): ONE, (2, 0): ONE, (1, 1): sc(2)}


def kac_moody_sl2(level, names=("e", "h", "f"), charges=None):
    return current_algebra(list(names), SL2_STRUCT, SL2_KAPPA, level,
                           charges=charges)


def virasoro(central_charge) -> VertexLieData:
    c = sc(central_charge)
    gens = [Gen("l", 2)]
    brackets = {
        (0, 0, 0): BrValue({(0, 1): ONE}),
        (0, 0, 1): BrValue({(0, 0): sc(2)}),
        (0, 0, 3): BrValue({}, c.scale(Fraction(1, 2))),
    }
    return VertexLieData(gens, brackets, ring=c.var, central=True)


def weyl_pair(odd=False, names=("phi", "phi_star"), charges=(1, -1),
              ghosts=(0, 0), ring=None) -> VertexLieData:
    """One symplectic (even) or orthogonal (odd) pair of free fields with
    weights (1, 0); the even case is a beta-gamma system, the odd case a
    bc/Clifford pair.  Zero-pole signs are forced by skew-symmetry."""
    p = 1 if odd else 0
    gens = [Gen(names[0], 1, p, charges[0], ghosts[0]),
            Gen(names[1], 0, p, charges[1], ghosts[1])]
    minus = ONE if odd else sc(-1)
    brackets = {
        (0, 1, 0): BrValue({}, ONE),
        (1, 0, 0): BrValue({}, minus),
    }
    return VertexLieData(gens, brackets, ring=ring, central=True)


def direct_sum(*parts) -> VertexLieData:
    ring = None
    for L in parts:
        if L.ring is not None:
            if ring is not None and ring != L.ring:
                raise ValueError("summands live over different rings")
            ring = L.ring
    gens = []
    brackets = {}
    offset = 0
    central = any(L.central for L in parts)
    for L in parts:
        gens.extend(L.gens)
        for (ia, ib, n), val in L.brackets.items():
            shifted = BrValue({(g + offset, e): c
                               for (g, e), c in val.terms.items()},
                              val.central)
            brackets[(ia + offset, ib + offset, n)] = shifted
        offset += len(L.gens)
    return VertexLieData(gens, brackets, ring=ring, central=central)


def poisson_limit(L: VertexLieData, hbar=None) -> VertexLieData:
    """Divide every bracket by the ring variable and set it to zero.

    Demands that all brackets vanish at the central fibre; otherwise the
    limit is not commutative and the offending bracket is reported.
    """
    var = hbar or L.ring
    if var is None:
        raise ValueError("poisson_limit needs a ring variable")
    h = Scalar.variable(var)
    brackets = {}
    for (ia, ib, n), val in sorted(L.brackets.items()):
        names = (L.gens[ia].name, L.gens[ib].name)

        def reduce(s):
            if s.is_zero():
                return ZERO
            if s.is_const() or s.coeffs[0] != 0:
                raise ValueError(
                    "central fibre not commutative: %s_(%d)%s survives at "
                    "%s = 0" % (names[0], n, names[1], var))
            return s.div_exact(h).subs(0)

        terms = {k: reduce(v) for k, v in val.terms.items()}
        brackets[(ia, ib, n)] = BrValue(terms, reduce(val.central))
    gens = [Gen(g.name, g.weight, g.parity, g.charge, g.ghost)
            for g in L.gens]
    return VertexLieData(gens, brackets, ring=None, central=L.central)
