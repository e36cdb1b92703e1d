"""Plane-quartic reconstruction from a period matrix and the hyperflex form.

The symmetric 4x4 bitangent matrix (entries: gradient covectors scaled by
ratios of Jacobian determinants) gives the quartic as its determinant.  After
clearing denominators and stripping the even-theta prefactor supported on the
hyperelliptic locus, the curve is

    (a f)^2 + (b e - c d)^2 - 2 (a f)(b e + c d) = 0

in the six Aronhold linear forms a..f, each a product of three even theta
constants with one odd theta gradient.  The hyperflex form for the bitangent
labeled 77 is assembled from four Jacobian determinants; the line a = 0 is a
hyperflex line exactly on its zero locus.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .chars import Char, char, complete_fundamental_system, is_odd, transport_to
from .errors import (
    DegenerateLineError,
    DomainError,
    HyperellipticProximityError,
    InternalConsistencyError,
    LineOnCurveError,
    RootNotBracketedError,
)
from .theta import (
    DEFAULT_TOL,
    CertifiedComplex,
    PeriodMatrix,
    ThetaBatch,
    hyperelliptic_guard,
    jacobian_determinant,
    jacobi_product,
)

#: degree-4 exponent triples in graded-lex order (x > y > z); the canonical
#: coefficient order for TernaryQuartic serialization
MONOMIALS4 = (
    (4, 0, 0), (3, 1, 0), (3, 0, 1), (2, 2, 0), (2, 1, 1), (2, 0, 2),
    (1, 3, 0), (1, 2, 1), (1, 1, 2), (1, 0, 3), (0, 4, 0), (0, 3, 1),
    (0, 2, 2), (0, 1, 3), (0, 0, 4),
)

#: Aronhold data: odd characteristic and the three even theta constants
#: scaling its gradient covector, for each of the six linear forms a..f
ARONHOLD_SPEC = {
    "a": ("77", ("66", "41", "50")),
    "b": ("64", ("70", "52", "43")),
    "c": ("51", ("40", "76", "67")),
    "d": ("13", ("02", "25", "34")),
    "e": ("26", ("37", "01", "10")),
    "f": ("35", ("24", "12", "03")),
}

#: displayed theta-constant cofactors of the two bracket terms of the
#: hyperflex form, and the four Jacobian-determinant triples
BRACKET1_THETAS = ("01", "10", "37", "43", "52", "75")
BRACKET2_THETAS = ("02", "25", "34", "40", "67", "76")
D_TRIPLES = (("77", "64", "13"), ("77", "51", "26"), ("77", "64", "51"), ("77", "13", "26"))

#: prefactor stripped from the 4x4 determinant (supported on the
#: hyperelliptic locus): (th75 th52 th43)^4 (th04^2 th73 th60)^2
STRIPPED_PREFACTOR = (("75", 4), ("52", 4), ("43", 4), ("04", 4), ("73", 2), ("60", 2))

#: theta cofactor of the identity tangency_form(a,..,e) = pref * hyperflex form
PSI_PREFACTOR_THETAS = ("66", "73", "41", "50", "04")


@dataclass(frozen=True)
class LinearForm:
    """Linear form l1 x + l2 y + l3 z with per-coefficient error bounds."""

    coeffs: tuple
    errs: tuple = (0.0, 0.0, 0.0)

    @staticmethod
    def of(values, errs=None) -> "LinearForm":
        v = tuple(complex(x) for x in values)
        e = tuple(float(x) for x in (errs if errs is not None else (0.0,) * len(v)))
        return LinearForm(v, e)

    def array(self) -> np.ndarray:
        return np.array(self.coeffs)

    def scale(self) -> float:
        return float(np.abs(self.array()).max())

    def is_degenerate(self, threshold: float = 1e-12) -> bool:
        return self.scale() < threshold

    def __call__(self, point) -> complex:
        return complex(np.dot(self.coeffs, point))


@dataclass
class TernaryQuartic:
    """Complex ternary quartic: 15 coefficients in graded-lex monomial order."""

    coeffs: dict
    errs: dict = field(default_factory=dict)

    def __post_init__(self):
        if set(self.coeffs) != set(MONOMIALS4):
            raise DomainError("a ternary quartic needs exactly the 15 degree-4 monomials")
        if not self.errs:
            self.errs = {m: 0.0 for m in MONOMIALS4}

    @staticmethod
    def from_vector(values, errs=None) -> "TernaryQuartic":
        c = {m: complex(v) for m, v in zip(MONOMIALS4, values)}
        e = {m: float(x) for m, x in zip(MONOMIALS4, errs)} if errs is not None else {}
        return TernaryQuartic(c, e)

    def vector(self) -> np.ndarray:
        return np.array([self.coeffs[m] for m in MONOMIALS4])

    def scale(self) -> float:
        return float(np.abs(self.vector()).max())

    def __call__(self, point) -> complex:
        x, y, z = point
        return sum(c * x ** a * y ** b * z ** g for (a, b, g), c in self.coeffs.items())

    def gradient_at(self, point) -> np.ndarray:
        x, y, z = point
        gx = sum(c * a * x ** max(a - 1, 0) * y ** b * z ** g
                 for (a, b, g), c in self.coeffs.items() if a)
        gy = sum(c * b * x ** a * y ** max(b - 1, 0) * z ** g
                 for (a, b, g), c in self.coeffs.items() if b)
        gz = sum(c * g * x ** a * y ** b * z ** max(g - 1, 0)
                 for (a, b, g), c in self.coeffs.items() if g)
        return np.array([gx, gy, gz])

    def to_json(self) -> dict:
        return {
            "monomial_order": ["".join(map(str, m)) for m in MONOMIALS4],
            "re": [self.coeffs[m].real for m in MONOMIALS4],
            "im": [self.coeffs[m].imag for m in MONOMIALS4],
            "err": [self.errs[m] for m in MONOMIALS4],
        }


def _quadratic_product(u: dict, v: dict) -> dict:
    out = {}
    for mu, cu in u.items():
        for mv, cv in v.items():
            key = tuple(a + b for a, b in zip(mu, mv))
            out[key] = out.get(key, 0) + cu * cv
    return out


def _form_pair_quadric(p: LinearForm, q: LinearForm) -> dict:
    """Quadratic form p*q as a dict over degree-2 exponents."""
    basis = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    u = {basis[i]: p.coeffs[i] for i in range(3)}
    v = {basis[i]: q.coeffs[i] for i in range(3)}
    return _quadratic_product(u, v)


# ---------------------------------------------------------------------------
# Aronhold forms and the bitangent matrix
# ---------------------------------------------------------------------------


def aronhold_forms(tau: PeriodMatrix, tol: float = DEFAULT_TOL, batch: ThetaBatch = None,
                   guard_threshold: float = 1e-6) -> dict:
    """The six linear forms a..f: three even theta constants times a gradient.

    Returns a dict keyed "a".."f".  Coefficient error bounds propagate from
    the three constants and the gradient components.
    """
    b = hyperelliptic_guard(tau, tol, guard_threshold, batch=batch)
    out = {}
    for name, (odd_label, even_labels) in ARONHOLD_SPEC.items():
        scalar = CertifiedComplex(1.0 + 0j, 0.0)
        for lab in even_labels:
            scalar = scalar * b.constant(lab)
        grad = b.gradient(odd_label)
        comps = [scalar * g for g in grad.components]
        out[name] = LinearForm(
            tuple(c.value for c in comps), tuple(c.err for c in comps)
        )
    return out


@dataclass
class BitangentMatrix:
    """Symmetric 4x4 matrix of linear forms; its determinant is the quartic.

    Entries are gradient covectors scaled by certified ratios of Jacobian
    determinants; the diagonal is zero.
    """

    entries: list  # 4x4 of LinearForm
    ratios: dict   # (i, j) -> CertifiedComplex scale actually used

    def determinant_quartic(self) -> TernaryQuartic:
        """Expand det over permutations of S4 into a ternary quartic."""
        import itertools

        coeffs = {m: 0j for m in MONOMIALS4}
        perms = list(itertools.permutations(range(4)))

        def sign(p):
            s = 1
            for i in range(4):
                for j in range(i + 1, 4):
                    if p[i] > p[j]:
                        s = -s
            return s

        basis = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
        for p in perms:
            s = sign(p)
            term = {(0, 0, 0): complex(s)}
            zero = False
            for i in range(4):
                L = self.entries[i][p[i]]
                if L is None:
                    zero = True
                    break
                lin = {basis[k]: L.coeffs[k] for k in range(3)}
                term = _quadratic_product(term, lin)
            if zero:
                continue
            for m, c in term.items():
                coeffs[m] += c
        return TernaryQuartic(coeffs)


def bitangent_matrix(tau: PeriodMatrix, tol: float = DEFAULT_TOL,
                     guard_threshold: float = 1e-6,
                     denominator_threshold: float = 1e-8) -> BitangentMatrix:
    """The symmetric bitangent matrix with entries as printed:

        Q12 = D(31,13,26)/D(77,31,26) b77   Q13 = D(22,13,35)/D(77,31,26) b64
        Q14 = D(77,64,46)/D(77,31,26) b51   Q23 = D(22,13,35)/D(77,46,51) b13
        Q24 = D(77,13,31)/D(77,31,26) b26   Q34 = D(64,13,22)/D(77,31,26) b35

    Raises HyperellipticProximityError when a denominator determinant falls
    below the threshold (scaled by pi^3).
    """
    b = hyperelliptic_guard(tau, tol, guard_threshold)
    spec = {
        (0, 1): (("31", "13", "26"), ("77", "31", "26"), "77"),
        (0, 2): (("22", "13", "35"), ("77", "31", "26"), "64"),
        (0, 3): (("77", "64", "46"), ("77", "31", "26"), "51"),
        (1, 2): (("22", "13", "35"), ("77", "46", "51"), "13"),
        (1, 3): (("77", "13", "31"), ("77", "31", "26"), "26"),
        (2, 3): (("64", "13", "22"), ("77", "31", "26"), "35"),
    }
    entries = [[None] * 4 for _ in range(4)]
    ratios = {}
    for (i, j), (num, den, grad_label) in spec.items():
        D_num = jacobian_determinant(*num, tau, tol, batch=b)
        D_den = jacobian_determinant(*den, tau, tol, batch=b)
        if abs(D_den.value) < denominator_threshold * math.pi**3:
            raise HyperellipticProximityError(
                f"denominator D{den} too small: {abs(D_den.value):.2e}"
            )
        ratio = D_num / D_den
        ratios[(i, j)] = ratio
        grad = b.gradient(grad_label)
        comps = [ratio * g for g in grad.components]
        L = LinearForm(tuple(c.value for c in comps), tuple(c.err for c in comps))
        entries[i][j] = L
        entries[j][i] = L
    return BitangentMatrix(entries, ratios)


def reconstruct_quartic(tau: PeriodMatrix, tol: float = DEFAULT_TOL,
                        batch: ThetaBatch = None) -> TernaryQuartic:
    """The stripped quartic (af)^2 + (be - cd)^2 - 2(af)(be + cd).

    This is the curve equation with the hyperelliptic-supported prefactor
    removed; coefficients carry propagated error bounds.
    """
    forms = aronhold_forms(tau, tol, batch=batch)
    return quartic_from_forms(forms)


def quartic_from_forms(forms: dict) -> TernaryQuartic:
    af = _form_pair_quadric(forms["a"], forms["f"])
    be = _form_pair_quadric(forms["b"], forms["e"])
    cd = _form_pair_quadric(forms["c"], forms["d"])
    coeffs = {m: 0j for m in MONOMIALS4}
    for u, cu_name in ((af, "af"), (be, "be"), (cd, "cd")):
        for m, c in _quadratic_product(u, u).items():
            coeffs[m] += c
    for u, v, w in ((af, be, -2), (be, cd, -2), (af, cd, -2)):
        for m, c in _quadratic_product(u, v).items():
            coeffs[m] += w * c
    errs = _quartic_errs(forms)
    return TernaryQuartic(coeffs, errs)


def _quartic_errs(forms: dict) -> dict:
    # coefficient-level bound: redo the expansion in (|value|, err) interval style
    def iv(form):
        return [CertifiedComplex(form.coeffs[i], form.errs[i]) for i in range(3)]

    basis = ((1, 0, 0), (0, 1, 0), (0, 0, 1))

    def prod(u, v):
        out = {}
        for mu, cu in u.items():
            for mv, cv in v.items():
                key = tuple(x + y for x, y in zip(mu, mv))
                cur = out.get(key)
                out[key] = cu * cv if cur is None else cur + cu * cv
        return out

    lin = {
        name: {basis[i]: c for i, c in enumerate(iv(forms[name]))}
        for name in ("a", "b", "c", "d", "e", "f")
    }
    af = prod(lin["a"], lin["f"])
    be = prod(lin["b"], lin["e"])
    cd = prod(lin["c"], lin["d"])
    total = {m: CertifiedComplex(0j, 0.0) for m in MONOMIALS4}
    for u in (af, be, cd):
        for m, c in prod(u, u).items():
            total[m] = total[m] + c
    for u, v in ((af, be), (be, cd), (af, cd)):
        for m, c in prod(u, v).items():
            total[m] = total[m] + c * (-2)
    return {m: total[m].err for m in MONOMIALS4}


# ---------------------------------------------------------------------------
# Tangency form
# ---------------------------------------------------------------------------


def _det3(u, v, w) -> complex:
    M = np.array([u, v, w])
    return complex(
        M[0, 0] * (M[1, 1] * M[2, 2] - M[1, 2] * M[2, 1])
        - M[0, 1] * (M[1, 0] * M[2, 2] - M[1, 2] * M[2, 0])
        + M[0, 2] * (M[1, 0] * M[2, 1] - M[1, 1] * M[2, 0])
    )


def tangency_form(l, m, n, k, s, degeneracy_threshold: float = 1e-12) -> complex:
    """(det(l,m,k) + det(l,n,s))^2 - 4 det(l,m,n) det(l,k,s).

    Vanishing detects coincident contact of the line l with the conic pencil
    spanned by the products of the four companion lines; arguments are
    LinearForms or coefficient triples.
    """
    rows = [f.coeffs if isinstance(f, LinearForm) else tuple(complex(x) for x in f)
            for f in (l, m, n, k, s)]
    L = rows[0]
    if max(abs(x) for x in L) < degeneracy_threshold:
        raise DegenerateLineError("line l is numerically degenerate")
    lm_k = _det3(L, rows[1], rows[3])
    ln_s = _det3(L, rows[2], rows[4])
    lmn = _det3(L, rows[1], rows[2])
    lks = _det3(L, rows[3], rows[4])
    return (lm_k + ln_s) ** 2 - 4.0 * lmn * lks


# ---------------------------------------------------------------------------
# The hyperflex form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HyperflexFormValue:
    """Evaluation of the weight-11 hyperflex form at one period matrix.

    value: from the four Jacobian determinants (no sign resolution involved).
    via_quintuples: same expression with each determinant replaced by its
    signed quintuple product (Jacobi's derivative formula).
    theta_display: the pure theta-constant monomial display; equals
    value / pi^6 up to the certified error.
    """

    value: CertifiedComplex
    via_quintuples: CertifiedComplex
    theta_display: CertifiedComplex


def _bracket_scalars(batch: ThetaBatch) -> tuple:
    t1 = CertifiedComplex(1 + 0j, 0.0)
    for lab in BRACKET1_THETAS:
        t1 = t1 * batch.constant(lab)
    t2 = CertifiedComplex(1 + 0j, 0.0)
    for lab in BRACKET2_THETAS:
        t2 = t2 * batch.constant(lab)
    return t1, t2


def _assemble_hyperflex(t1, t2, D1, D2, D3, D4) -> CertifiedComplex:
    return (t1 * D1 + t2 * D2) ** 2 - 4 * (t1 * t2 * D3 * D4)


def hyperflex_form(tau: PeriodMatrix, tol: float = DEFAULT_TOL, batch: ThetaBatch = None,
                   guard_threshold: float = 1e-6) -> HyperflexFormValue:
    """The modular form vanishing iff the bitangent labeled 77 is a hyperflex.

    Both evaluation routes are returned: through the gradient Jacobian
    determinants, and through the signed quintuple products; they agree
    within the certified errors, and the theta-monomial display recovers the
    value divided by pi^6.
    """
    b = hyperelliptic_guard(tau, tol, guard_threshold, batch=batch)
    t1, t2 = _bracket_scalars(b)
    Ds = [jacobian_determinant(*t, tau, tol, batch=b) for t in D_TRIPLES]
    value = _assemble_hyperflex(t1, t2, *Ds)
    Js = [jacobi_product(*t, tau, tol, batch=b) for t in D_TRIPLES]
    via_quint = _assemble_hyperflex(t1, t2, *Js)
    pi3 = math.pi**3
    display = _assemble_hyperflex(
        t1, t2, *[CertifiedComplex(J.value / pi3, J.err / pi3) for J in Js]
    )
    return HyperflexFormValue(value, via_quint, display)


def hyperflex_form_value(tau: PeriodMatrix, tol: float = DEFAULT_TOL,
                         batch: ThetaBatch = None) -> CertifiedComplex:
    """Just the certified value of the hyperflex form (gradient route)."""
    return hyperflex_form(tau, tol, batch=batch).value


def transported_hyperflex_form(tau: PeriodMatrix, target, tol: float = DEFAULT_TOL,
                               batch: ThetaBatch = None,
                               guard_threshold: float = 1e-6) -> CertifiedComplex:
    """The hyperflex form for an arbitrary odd characteristic.

    Every characteristic label in the base expression is replaced by its
    image under a symplectic element sending 77 to the target; existence is
    guaranteed by transitivity on odd characteristics.
    """
    target = char(target)
    if not is_odd(target):
        raise DomainError("target characteristic must be odd")
    act = transport_to(char("77"), target)
    b = hyperelliptic_guard(tau, tol, guard_threshold, batch=batch)
    t1 = CertifiedComplex(1 + 0j, 0.0)
    for lab in BRACKET1_THETAS:
        t1 = t1 * b.constant(act.on_char(char(lab)))
    t2 = CertifiedComplex(1 + 0j, 0.0)
    for lab in BRACKET2_THETAS:
        t2 = t2 * b.constant(act.on_char(char(lab)))
    Ds = [
        jacobian_determinant(*[act.on_char(char(x)) for x in t], tau, tol, batch=b)
        for t in D_TRIPLES
    ]
    return _assemble_hyperflex(t1, t2, *Ds)


def psi_identity_prefactor(batch: ThetaBatch) -> CertifiedComplex:
    out = CertifiedComplex(1 + 0j, 0.0)
    for lab in PSI_PREFACTOR_THETAS:
        out = out * batch.constant(lab)
    return out


# ---------------------------------------------------------------------------
# Geometric oracle: restriction to a line and root clustering
# ---------------------------------------------------------------------------


def _line_basis(L: LinearForm) -> tuple:
    """Two projective points spanning the line, dehomogenized at the largest
    coefficient for stability."""
    c = L.array()
    i = int(np.abs(c).argmax())
    if abs(c[i]) < 1e-14:
        raise DegenerateLineError("cannot parametrize a numerically zero line")
    j, k = [t for t in range(3) if t != i]
    p = np.zeros(3, dtype=complex)
    q = np.zeros(3, dtype=complex)
    p[j], p[i] = 1.0, -c[j] / c[i]
    q[k], q[i] = 1.0, -c[k] / c[i]
    return p, q


def restrict_to_line(Q: TernaryQuartic, L: LinearForm) -> np.ndarray:
    """Binary quartic coefficients [t^4 .. 1] of Q on the line via p + t q."""
    p, q = _line_basis(L)
    out = np.zeros(5, dtype=complex)
    for (a, bb, g), cval in Q.coeffs.items():
        poly = np.array([1.0 + 0j])
        for idx, e in ((0, a), (1, bb), (2, g)):
            base = np.array([q[idx], p[idx]])  # q*t + p
            for _ in range(e):
                poly = np.convolve(poly, base)
        out[5 - len(poly):] += cval * poly
    return out


@dataclass(frozen=True)
class TangencyReport:
    """Multiplicity structure of Q restored to the line L.

    verdict: "hyperflex" (one 4-fold contact), "bitangent-only" (two double
    contacts), or "transversal".  tangency_gap is the projective distance
    between the two contact points; pairing_residual measures how far the
    restriction is from a perfect square.
    """

    verdict: str
    tangency_gap: float
    pairing_residual: float
    roots: tuple
    thresholds: dict


def _chordal(a: complex, b: complex) -> float:
    return abs(a - b) / math.sqrt((1 + abs(a) ** 2) * (1 + abs(b) ** 2))


def hyperflex_test(Q: TernaryQuartic, L: LinearForm, tol: float = 1e-4) -> TangencyReport:
    """Classify the contact of the line with the quartic by root clustering.

    The restriction of the reconstructed quartic to one of its bitangents is
    a perfect square of a quadratic, so its four roots fall in two nearby
    pairs; the verdict depends on the projective distance between the pair
    centers, reported as a residual (never just a boolean).
    """
    coeffs = restrict_to_line(Q, L)
    scale = float(np.abs(coeffs).max())
    if scale == 0.0 or scale < 1e-13 * max(Q.scale(), 1.0) * max(L.scale(), 1e-30) ** 4:
        raise LineOnCurveError("restriction of the quartic to the line is numerically zero")
    monic = coeffs / scale
    if abs(monic[0]) < 1e-9:
        # root(s) at infinity: invert the chart, zeros of the reversed
        # polynomial are the reciprocals of the original roots
        roots = np.roots(monic[::-1])
        roots = np.array([1 / r if r != 0 else np.inf for r in roots])
    else:
        roots = np.roots(monic)
    roots = np.sort_complex(np.atleast_1d(roots))
    if len(roots) < 4:
        roots = np.concatenate([roots, [np.inf] * (4 - len(roots))])

    def d(a, b):
        if np.isinf(a) and np.isinf(b):
            return 0.0
        if np.isinf(a) or np.isinf(b):
            finite = b if np.isinf(a) else a
            return 1.0 / math.sqrt(1 + abs(finite) ** 2)
        return _chordal(a, b)

    pairings = [((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))]
    best = None
    for (i, j), (k, l) in pairings:
        res = max(d(roots[i], roots[j]), d(roots[k], roots[l]))
        if best is None or res < best[0]:
            centers = []
            for u, v in ((i, j), (k, l)):
                if np.isinf(roots[u]) or np.isinf(roots[v]):
                    centers.append(np.inf)
                else:
                    centers.append((roots[u] + roots[v]) / 2)
            best = (res, centers)
    pairing_residual, centers = best
    gap = d(centers[0], centers[1])
    pair_thresh = 10 * max(1e-12, float(np.abs(coeffs).sum() / scale) * 1e-8)
    if pairing_residual > max(100 * pair_thresh, math.sqrt(tol)):
        verdict = "transversal"
    elif gap <= tol:
        verdict = "hyperflex"
    else:
        verdict = "bitangent-only"
    return TangencyReport(
        verdict=verdict,
        tangency_gap=float(gap),
        pairing_residual=float(pairing_residual),
        roots=tuple(roots),
        thresholds={"tangency_gap": tol, "pairing": pair_thresh},
    )


# ---------------------------------------------------------------------------
# Root hunting along period-matrix paths
# ---------------------------------------------------------------------------


def imaginary_direction_family(S, base=None):
    """Path t -> i(I + t S) + base_offset with S real symmetric.

    Along such purely imaginary paths every theta constant is real and every
    gradient is real, so the hyperflex form is real-valued and sign changes
    bracket genuine zeros.
    """
    S = np.asarray(S, dtype=float)
    S = (S + S.T) / 2
    base = np.zeros((3, 3)) if base is None else np.asarray(base, dtype=float)

    def family(t: float) -> PeriodMatrix:
        return PeriodMatrix(1j * (np.eye(3) + base + t * S))

    return family


def random_hyperflex_family(seed: int):
    """Seeded random purely imaginary direction through a perturbed base."""
    rng = np.random.default_rng(seed)
    S = rng.standard_normal((3, 3))
    S = (S + S.T) / 2
    S /= max(1.0, np.abs(np.linalg.eigvalsh(S)).max())
    B = rng.standard_normal((3, 3)) * 0.12
    B = (B + B.T) / 2
    B -= np.eye(3) * min(0.0, np.linalg.eigvalsh(B).min() + 0.5)
    return imaginary_direction_family(0.8 * S, base=B), {"seed": seed}


@dataclass(frozen=True)
class RootLocation:
    t: float
    tau: PeriodMatrix
    residual: float
    bracket: tuple
    evaluations: int


def find_hyperflex_tau(family, bracket=(0.0, 0.5), tol: float = 1e-8,
                       samples: int = 33, eval_tol: float = DEFAULT_TOL) -> RootLocation:
    """Locate a zero of the hyperflex form along a one-parameter path.

    Scans the bracket for a sign change of the (real) form value and then
    bisects.  Raises RootNotBracketedError when no sign structure is found;
    points failing the hyperelliptic guard are skipped during the scan.
    """
    lo, hi = bracket
    ts = np.linspace(lo, hi, samples)
    vals = {}
    evaluations = 0

    def value(t: float) -> float:
        nonlocal evaluations
        if t not in vals:
            v = hyperflex_form_value(family(float(t)), eval_tol)
            evaluations += 1
            if abs(v.value.imag) > 1e-6 * max(abs(v.value), 1e-30):
                raise DomainError(
                    "path is not sign-definite: hyperflex form is not real along it"
                )
            vals[t] = v.value.real
        return vals[t]

    usable = []
    for t in ts:
        try:
            usable.append((float(t), value(float(t))))
        except HyperellipticProximityError:
            continue
    pair = None
    for (t0, v0), (t1, v1) in zip(usable, usable[1:]):
        if v0 == 0.0:
            pair = (t0, t0)
            break
        if v0 * v1 < 0:
            pair = (t0, t1)
            break
    if pair is None:
        raise RootNotBracketedError("no sign change of the hyperflex form in the bracket")
    a, bopt = pair
    fa = value(a)
    while bopt - a > tol:
        mid = 0.5 * (a + bopt)
        try:
            fm = value(mid)
        except HyperellipticProximityError:
            mid = mid + 0.03 * (bopt - a)
            fm = value(mid)
        if fa * fm <= 0:
            bopt = mid
        else:
            a, fa = mid, fm
    t_star = 0.5 * (a + bopt)
    tau_star = family(t_star)
    residual = abs(hyperflex_form_value(tau_star, eval_tol).value)
    return RootLocation(t_star, tau_star, residual, pair, evaluations)
