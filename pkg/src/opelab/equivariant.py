"""Mixed complexes, their polynomial-ring duals, Cartan models, and
localization verdicts.

A mixed complex is a finite graded Q-module with a square-zero d of
degree +1 and pairwise anticommuting square-zero operators h_1..h_n of
degree -1, one per torus factor, each anticommuting with d.  The duality
functor t tensors with Q[u_1..u_n] (each u_i of degree 2) and perturbs
the differential to d + sum u_i h_i; strictness of the input is exactly
what makes the output square to zero, so t re-validates its result.

The inverse-direction functor h reads the u-linear part of a polynomial
differential back off as the operators h_i.  For differentials produced
by t this is literally an inverse, which is the reason the round-trip
cohomology comparison in the contract holds on the nose here.

Cartan models for diagonal torus actions on affine space are spanned by
invariant monomial forms x^alpha dx^beta.  Both the de Rham part and the
contraction preserve the total letter count |alpha| + |beta|, so cutting
at |alpha| + |beta| <= D truncates by whole subcomplexes and the result
below the horizon is exact, not approximate.
"""

from __future__ import annotations

from fractions import Fraction
import itertools

from .scalars import Scalar, ZERO, ONE, sc, sc_gcd, format_scalar
from .linalg import (Matrix, BasisToken, FiniteComplex, CohomologyClass,
                     smith, smith_solve)


def _compose(f, g):
    """Column-dict composition f o g (apply g, then f)."""
    out = {}
    for j, col in g.items():
        acc = {}
        for i, v in col.items():
            for i2, w in f.get(i, {}).items():
                acc[i2] = acc.get(i2, ZERO) + v * w
        acc = {i2: v for i2, v in acc.items() if not v.is_zero()}
        if acc:
            out[j] = acc
    return out


def _add_maps(f, g):
    out = {}
    for src in (f, g):
        for j, col in src.items():
            tgt = out.setdefault(j, {})
            for i, v in col.items():
                tgt[i] = tgt.get(i, ZERO) + v
    return {j: {i: v for i, v in col.items() if not v.is_zero()}
            for j, col in out.items() if any(not v.is_zero()
                                            for v in col.values())}


def _coerce_map(raw):
    return {j: {i: sc(v) for i, v in col.items()}
            for j, col in raw.items()}


class MixedComplex:
    """tokens: ordered BasisTokens; d and each h are column dicts over
    token indices with rational entries."""

    def __init__(self, tokens, d, hs):
        self.tokens = list(tokens)
        self.d = _coerce_map(d)
        self.hs = [_coerce_map(h) for h in hs]
        self.validate()

    @property
    def nfactors(self):
        return len(self.hs)

    def _check_degree(self, op, shift, name):
        for j, col in op.items():
            for i, v in col.items():
                if not v.is_const():
                    raise ValueError("%s has a polynomial entry" % name)
                if self.tokens[i].degree != self.tokens[j].degree + shift:
                    raise ValueError(
                        "%s is not of degree %+d: %r -> %r"
                        % (name, shift, self.tokens[j], self.tokens[i]))

    def validate(self):
        self._check_degree(self.d, 1, "d")
        for a, h in enumerate(self.hs):
            self._check_degree(h, -1, "h_%d" % (a + 1))
        sq = _compose(self.d, self.d)
        if sq:
            j, col = sorted(sq.items())[0]
            i = sorted(col)[0]
            raise ValueError("d o d != 0: component %r -> %r"
                             % (self.tokens[j], self.tokens[i]))
        for a, h in enumerate(self.hs):
            anti = _add_maps(_compose(self.d, h), _compose(h, self.d))
            if anti:
                j = sorted(anti)[0]
                i = sorted(anti[j])[0]
                raise ValueError(
                    "d h_%d + h_%d d != 0: component %r -> %r"
                    % (a + 1, a + 1, self.tokens[j], self.tokens[i]))
            for b in range(a, len(self.hs)):
                g = self.hs[b]
                anti = _add_maps(_compose(h, g), _compose(g, h))
                if anti:
                    j = sorted(anti)[0]
                    i = sorted(anti[j])[0]
                    raise ValueError(
                        "h_%d h_%d + h_%d h_%d != 0: component %r -> %r"
                        % (a + 1, b + 1, b + 1, a + 1,
                           self.tokens[j], self.tokens[i]))

    def q_complex(self) -> FiniteComplex:
        return FiniteComplex(self.tokens, self.d, var=None)

    def to_dict(self):
        def ser(op):
            return {self.tokens[j].name:
                    {self.tokens[i].name: format_scalar(v)
                     for i, v in col.items()}
                    for j, col in op.items()}
        return {"format": "mixed.v1",
                "tokens": [{"name": t.name, "degree": t.degree}
                           for t in self.tokens],
                "d": ser(self.d),
                "h": [ser(h) for h in self.hs]}

    @staticmethod
    def from_dict(data) -> "MixedComplex":
        from .scalars import parse_scalar
        tokens = [BasisToken(t["name"], t["degree"])
                  for t in data["tokens"]]
        pos = {t.name: i for i, t in enumerate(tokens)}

        def rd(op):
            return {pos[j]: {pos[i]: parse_scalar(str(v))
                             for i, v in col.items()}
                    for j, col in op.items()}
        return MixedComplex(tokens, rd(data.get("d", {})),
                            [rd(h) for h in data.get("h", [])])


class UComplex:
    """Free graded Q[u_1..u_n]-module with differential d0 + sum u_i h_i,
    stored by its constant and u-linear parts.  With one factor this is
    an honest single-variable complex; with several, Smith computations
    follow the one-variable-at-a-time policy in ``cohomology``."""

    def __init__(self, tokens, d0, u_parts, labels=None, truncation=None):
        self.tokens = list(tokens)
        self.d0 = _coerce_map(d0)
        self.u_parts = [_coerce_map(h) for h in u_parts]
        n = len(self.u_parts)
        if labels is None:
            labels = ("u",) if n == 1 else tuple(
                "u%d" % (i + 1) for i in range(n))
        self.labels = tuple(labels)
        self.truncation = truncation
        # same strictness data as a mixed complex, so reuse its checks
        MixedComplex(self.tokens, self.d0, self.u_parts)

    @property
    def nfactors(self):
        return len(self.u_parts)

    def complex(self) -> FiniteComplex:
        if self.nfactors != 1:
            raise ValueError("single-variable view needs exactly one u")
        u = Scalar.variable(self.labels[0])
        diff = {}
        for j in range(len(self.tokens)):
            col = {}
            for i, v in self.d0.get(j, {}).items():
                col[i] = col.get(i, ZERO) + v
            for i, v in self.u_parts[0].get(j, {}).items():
                col[i] = col.get(i, ZERO) + u * v
            col = {i: v for i, v in col.items() if not v.is_zero()}
            if col:
                diff[j] = col
        return FiniteComplex(self.tokens, diff, var=self.labels[0],
                             var_degree=2)

    def at_zero(self) -> FiniteComplex:
        """Specialize every u_i to 0: the underlying Q complex."""
        return FiniteComplex(self.tokens, self.d0, var=None)

    def _specialized_matrix(self, keep, others):
        u = Scalar.variable(self.labels[keep])
        total = dict()
        parts = [self.d0]
        for i, h in enumerate(self.u_parts):
            if i == keep:
                parts.append({j: {r: u * v for r, v in col.items()}
                              for j, col in h.items()})
            elif others:
                parts.append({j: {r: v.scale(others) for r, v in col.items()}
                              for j, col in h.items()})
        for p in parts:
            total = _add_maps(total, p)
        n = len(self.tokens)
        entries = {}
        for j, col in total.items():
            for i, v in col.items():
                entries[(i, j)] = v
        return Matrix(n, n, entries)

    def cohomology(self):
        """One factor: graded classes over Q[u].  Several: for each u_i,
        the module rank and torsion factors after sending the other
        variables to 0 and to 1 (grading is lost in the latter case, so
        only module invariants are reported)."""
        if self.nfactors == 1:
            return self.complex().cohomology()
        out = {}
        for i in range(self.nfactors):
            for val in (0, 1):
                M = self._specialized_matrix(i, Fraction(val))
                sq = M.mul(M)
                if not sq.is_zero():
                    raise ValueError("specialized differential does not "
                                     "square to zero")
                free, tors = _module_invariants(M)
                out[(self.labels[i], val)] = {
                    "free_rank": free,
                    "torsion": [format_scalar(f) for f in tors]}
        return out

    def rank_and_torsion(self):
        """(free rank, torsion invariant factors) of H as a Q[u]-module,
        all degrees taken together."""
        if self.nfactors != 1:
            raise ValueError("module invariants need exactly one u")
        return _module_invariants(self.complex().D)


def _module_invariants(D: Matrix):
    """H = ker D / im D of a square-zero matrix over Q[u], as free rank
    plus torsion invariant factors."""
    S = smith(D)
    kern = S.kernel_basis()
    img = []
    for j in range(S.rank):
        col = {i: S.V[i][j] for i in range(S.ncols)
               if not S.V[i][j].is_zero()}
        img.append(D.apply(col))
    return quotient_invariants(D.nrows, kern, img)


def quotient_invariants(ambient, gens, rels):
    """Invariant factors of span(gens)/span(rels) inside Q[u]^ambient,
    with rels contained in span(gens).  Returns (free_rank, torsion)."""
    g = len(gens)
    if g == 0:
        return 0, []
    cols = list(gens) + list(rels)
    B = Matrix.from_columns(ambient, cols)
    pres = []
    for kcol in smith(B).kernel_basis():
        c = {i: v for i, v in kcol.items() if i < g}
        if c:
            pres.append(c)
    P = Matrix.from_columns(g, pres)
    SP = smith(P)
    torsion = [f for f in SP.factors if f.degree() > 0]
    return g - SP.rank, torsion


# -- duality functors ------------------------------------------------------

def koszul_t(N: MixedComplex, labels=None) -> UComplex:
    """S tensor N with differential d + sum u_i h_i."""
    return UComplex(N.tokens, N.d, N.hs, labels=labels)


def koszul_h(M: UComplex) -> MixedComplex:
    """Read the operators back off the u-linear parts of the
    differential."""
    return MixedComplex(M.tokens, M.d0, M.u_parts)


def ucomplex_from_finite(C: FiniteComplex) -> UComplex:
    """Split a one-variable polynomial differential into its constant
    and u-linear parts.  Entries of u-degree two or more carry no
    operator on the mixed side, so they are refused rather than
    silently dropped."""
    if C.var is None:
        raise ValueError("expected a complex over a polynomial ring")
    d0, d1 = {}, {}
    for (i, j), v in C.D.data.items():
        coeffs = list(v.coeffs)
        if any(c != 0 for c in coeffs[2:]):
            raise ValueError(
                "entry %r -> %r has %s-degree >= 2; not in the image of "
                "the duality" % (C.tokens[j], C.tokens[i], C.var))
        if coeffs and coeffs[0] != 0:
            d0.setdefault(j, {})[i] = sc(coeffs[0])
        if len(coeffs) > 1 and coeffs[1] != 0:
            d1.setdefault(j, {})[i] = sc(coeffs[1])
    return UComplex(C.tokens, d0, [d1], labels=(C.var,))


# -- Cartan models ---------------------------------------------------------

def _form_name(alpha, beta):
    bits = []
    for j, a in enumerate(alpha):
        if a == 1:
            bits.append("x%d" % (j + 1))
        elif a > 1:
            bits.append("x%d^%d" % (j + 1, a))
    for j in beta:
        bits.append("dx%d" % (j + 1))
    return " ".join(bits) if bits else "1"


def cartan_model(weights, D) -> UComplex:
    """Invariant polynomial forms on affine space for a diagonal torus
    action, truncated at total letter degree |alpha| + |beta| <= D.

    ``weights`` is one integer per coordinate for a single factor, or a
    tuple of integers per coordinate for several.
    """
    if D < 1:
        raise ValueError("degree cutoff must be at least 1")
    ws = [tuple(w) if isinstance(w, (list, tuple)) else (w,)
          for w in weights]
    m = len(ws)
    n = len(ws[0]) if m else 1
    if any(len(w) != n for w in ws):
        raise ValueError("all coordinates need one weight per factor")

    def invariant(alpha, beta):
        for f in range(n):
            if sum((alpha[j] + (1 if j in beta else 0)) * ws[j][f]
                   for j in range(m)) != 0:
                return False
        return True

    forms = []
    for beta in itertools.chain.from_iterable(
            itertools.combinations(range(m), r) for r in range(m + 1)):
        room = D - len(beta)
        if room < 0:
            continue
        for alpha in itertools.product(range(room + 1), repeat=m):
            if sum(alpha) <= room and invariant(alpha, beta):
                forms.append((tuple(alpha), tuple(beta)))
    forms.sort(key=lambda ab: (sum(ab[0]) + len(ab[1]), len(ab[1]), ab))
    tokens = [BasisToken(_form_name(a, b), len(b), aux=(a, b))
              for a, b in forms]
    pos = {ab: i for i, ab in enumerate(forms)}

    d0 = {}
    u_parts = [dict() for _ in range(n)]
    for j, (alpha, beta) in enumerate(forms):
        col = {}
        for k in range(m):
            if alpha[k] == 0 or k in beta:
                continue
            na = list(alpha)
            na[k] -= 1
            nb = tuple(sorted(beta + (k,)))
            sign = (-1) ** sum(1 for b in beta if b < k)
            key = (tuple(na), nb)
            if key in pos:
                col[pos[key]] = col.get(pos[key], ZERO) + sc(
                    sign * alpha[k])
        col = {i: v for i, v in col.items() if not v.is_zero()}
        if col:
            d0[j] = col
        for f in range(n):
            colf = {}
            for r, k in enumerate(beta):
                w = ws[k][f]
                if w == 0:
                    continue
                na = list(alpha)
                na[k] += 1
                nb = tuple(b for b in beta if b != k)
                key = (tuple(na), nb)
                if key in pos:
                    colf[pos[key]] = colf.get(pos[key], ZERO) + sc(
                        ((-1) ** r) * w)
            colf = {i: v for i, v in colf.items() if not v.is_zero()}
            if colf:
                u_parts[f][j] = colf
    return UComplex(tokens, d0, u_parts, truncation=D)


# -- localization ----------------------------------------------------------

def check_mixed_map(NZ: MixedComplex, NX: MixedComplex, iota):
    """iota maps source token index to a column over target indices; it
    must have degree 0 and commute with d and with every h_i."""
    if NZ.nfactors != NX.nfactors:
        raise ValueError("mixed complexes have different torus ranks")
    iota = _coerce_map(iota)
    for j, col in iota.items():
        for i, v in col.items():
            if NX.tokens[i].degree != NZ.tokens[j].degree:
                raise ValueError(
                    "map is not of degree 0: %r -> %r"
                    % (NZ.tokens[j], NX.tokens[i]))
    pairs = [("d", NZ.d, NX.d)]
    pairs += [("h_%d" % (a + 1), NZ.hs[a], NX.hs[a])
              for a in range(NZ.nfactors)]
    for name, opz, opx in pairs:
        diff = _add_maps(_compose(iota, opz),
                         {j: {i: v.scale(-1) for i, v in col.items()}
                          for j, col in _compose(opx, iota).items()})
        if diff:
            j = sorted(diff)[0]
            i = sorted(diff[j])[0]
            raise ValueError(
                "map fails to commute with %s: component %r -> %r"
                % (name, NZ.tokens[j], NX.tokens[i]))
    return iota


def _presentation(C: FiniteComplex):
    """Kernel basis of D and the coordinates of im D inside it, so that
    H = Q[u]^r / im(X)."""
    S = smith(C.D)
    kern = S.kernel_basis()
    r = len(kern)
    K = Matrix.from_columns(len(C.tokens), kern)
    SK = smith(K)
    X_cols = []
    for j in range(S.rank):
        col = {i: S.V[i][j] for i in range(S.ncols)
               if not S.V[i][j].is_zero()}
        b = C.D.apply(col)
        x = smith_solve(SK, K, b)
        if x is None:
            raise AssertionError("image vector escapes the kernel")
        X_cols.append(x)
    return K, SK, X_cols, r


def divides_power(factor: Scalar, f: Scalar) -> bool:
    """Does the invariant factor divide some power of f?"""
    if factor.is_zero():
        return False
    g = factor
    while g.degree() > 0:
        c = sc_gcd(g, f)
        if c.degree() == 0:
            return False
        g = g.div_exact(c)
    return True


def localize_check(NZ: MixedComplex, NX: MixedComplex, iota,
                   inverted_generators):
    """Verdict on whether t(iota) becomes an isomorphism on cohomology
    after inverting the given polynomials in Q[u]."""
    iota = check_mixed_map(NZ, NX, iota)
    CZ = koszul_t(NZ).complex()
    CX = koszul_t(NX).complex()
    KZ, SKZ, XZ, rZ = _presentation(CZ)
    KX, SKX, XX, rX = _presentation(CX)

    # the induced map in kernel coordinates
    F_cols = []
    for j in range(rZ):
        kz = {i: KZ.get(i, j) for i in range(len(NZ.tokens))
              if not KZ.get(i, j).is_zero()}
        v = {}
        for i, c in kz.items():
            for i2, w in iota.get(i, {}).items():
                v[i2] = v.get(i2, ZERO) + c * w
        v = {i2: c for i2, c in v.items() if not c.is_zero()}
        x = smith_solve(SKX, KX, v)
        if x is None:
            raise AssertionError("chain map image escapes the kernel")
        F_cols.append(x)

    # cokernel: Q^rX / (im F + im XX)
    identity = [{i: ONE} for i in range(rX)]
    cfree, ctors = quotient_invariants(rX, identity, F_cols + XX)
    # kernel: {x : F x in im XX} / im XZ
    if rZ:
        gens = []
        B = Matrix.from_columns(rX, F_cols + XX)
        for kcol in smith(B).kernel_basis():
            c = {i: v for i, v in kcol.items() if i < rZ}
            if c:
                gens.append(c)
        kfree, ktors = quotient_invariants(rZ, gens, XZ)
    else:
        kfree, ktors = 0, []

    from .scalars import parse_scalar
    f_total = ONE
    for f in inverted_generators:
        f_total = f_total * (parse_scalar(f) if isinstance(f, str)
                             else sc(f))
    factors = ctors + ktors
    ok = (cfree == 0 and kfree == 0
          and all(divides_power(f, f_total) for f in factors))
    if cfree:
        ann = None
    else:
        ann = ONE
        for f in ctors:
            ann = ann * f
    return {
        "iso_after_localization": ok,
        "cokernel_annihilator": (format_scalar(ann) if ann is not None
                                 else "none (free part)"),
        "cokernel_factors": [format_scalar(f) for f in ctors] + ["0"] * cfree,
        "kernel_factors": [format_scalar(f) for f in ktors] + ["0"] * kfree,
    }


# -- stock complexes -------------------------------------------------------

def regular_lambda() -> MixedComplex:
    """The rank-2 regular module: h sends the degree-1 generator to the
    degree-0 one; t of this is the Koszul complex with H = Q[u]/u."""
    tokens = [BasisToken("1", 1), BasisToken("eps", 0)]
    return MixedComplex(tokens, {}, [{0: {1: 1}}])


def sphere_pair() -> MixedComplex:
    """Two classes in degrees 0 and 2 with no structure; t gives a free
    rank-2 module."""
    return MixedComplex([BasisToken("a", 0), BasisToken("b", 2)],
                        {}, [{}])


def zero_mixed(nfactors=1) -> MixedComplex:
    return MixedComplex([], {}, [{} for _ in range(nfactors)])


def p1_rotation() -> MixedComplex:
    """Cell model of the projective line under rotation: two fixed
    0-cells x, y, the interval e between them, and the sweep f of e
    around the circle; d(e) = y - x, h(e) = f."""
    tokens = [BasisToken("x", 0), BasisToken("y", 0),
              BasisToken("e", -1), BasisToken("f", -2)]
    d = {2: {1: 1, 0: -1}}
    h = {2: {3: 1}}
    return MixedComplex(tokens, d, [h])


def p1_fixed_points() -> MixedComplex:
    return MixedComplex([BasisToken("p", 0), BasisToken("q", 0)],
                        {}, [{}])


def p1_inclusion():
    """p and q land on the two fixed cells."""
    return {0: {0: 1}, 1: {1: 1}}
