"""Certified numerical evaluation of genus-3 theta constants and gradients.

The Riemann theta function with characteristic (eps, delta) is the lattice sum

    theta[eps; delta](tau, z) = sum_{k in Z^g} exp(pi*i*((k + eps/2)^T tau
                                (k + eps/2) + 2 (k + eps/2)^T (z + delta/2))).

Sums are truncated over ||k + eps/2|| <= R with R chosen so that a rigorous
Gaussian tail bound (driven by the smallest eigenvalue of Im(tau)) falls below
the requested tolerance; every value is returned together with that bound.
Double precision is the default; evaluation escalates to mpmath when Im(tau)
is close to degenerate.

Also provided: Jacobian determinants of gradient triples, and the quintuple
product from Jacobi's derivative formula with numerically resolved sign.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np

from .chars import Char, char, complete_fundamental_system, is_azygetic, is_even, is_odd, EVEN_CHARS, ODD_CHARS
from .errors import (
    DomainError,
    HyperellipticProximityError,
    InternalConsistencyError,
    PrecisionExhaustedError,
)

DEFAULT_TOL = 1e-10
MAX_RADIUS = 40.0
ESCALATE_LAMBDA = 0.3  # switch to mpmath below this smallest eigenvalue
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class CertifiedComplex:
    """Complex value with a guaranteed absolute error bound."""

    value: complex
    err: float

    def __add__(self, other):
        if isinstance(other, CertifiedComplex):
            return CertifiedComplex(self.value + other.value, self.err + other.err)
        return CertifiedComplex(self.value + other, self.err)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, CertifiedComplex):
            return CertifiedComplex(self.value - other.value, self.err + other.err)
        return CertifiedComplex(self.value - other, self.err)

    def __neg__(self):
        return CertifiedComplex(-self.value, self.err)

    def __mul__(self, other):
        if isinstance(other, CertifiedComplex):
            err = (
                abs(self.value) * other.err
                + abs(other.value) * self.err
                + self.err * other.err
            )
            return CertifiedComplex(self.value * other.value, err)
        return CertifiedComplex(self.value * other, self.err * abs(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, CertifiedComplex):
            other = CertifiedComplex(complex(other), 0.0)
        d = abs(other.value)
        if d <= other.err:
            raise ZeroDivisionError("denominator not certified away from zero")
        err = (abs(self.value) * other.err + d * self.err) / (d * (d - other.err))
        return CertifiedComplex(self.value / other.value, err)

    def __pow__(self, n: int):
        out = CertifiedComplex(1.0 + 0j, 0.0)
        for _ in range(n):
            out = out * self
        return out

    def abs_lower(self) -> float:
        return max(0.0, abs(self.value) - self.err)

    def abs_upper(self) -> float:
        return abs(self.value) + self.err

    def contains_zero(self) -> bool:
        return abs(self.value) <= self.err


class PeriodMatrix:
    """Point of the Siegel upper half-space: symmetric, Im positive definite.

    The matrix is symmetrized exactly on construction; positive definiteness
    of the imaginary part is checked numerically with a margin.
    """

    def __init__(self, entries):
        m = np.asarray(entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DomainError("period matrix must be square")
        m = (m + m.T) / 2
        self.matrix = m
        eig = np.linalg.eigvalsh(m.imag)
        self.im_min_eig = float(eig[0])
        if not np.isfinite(m).all():
            raise DomainError("period matrix has non-finite entries")
        if self.im_min_eig <= 1e-12:
            raise DomainError(
                f"Im(tau) not positive definite (min eigenvalue {self.im_min_eig:.3e})"
            )

    @property
    def g(self) -> int:
        return self.matrix.shape[0]

    def to_json(self) -> dict:
        return {
            "re": self.matrix.real.tolist(),
            "im": self.matrix.imag.tolist(),
        }

    @staticmethod
    def from_json(data: dict) -> "PeriodMatrix":
        re = np.asarray(data["re"], dtype=float)
        im = np.asarray(data["im"], dtype=float)
        return PeriodMatrix(re + 1j * im)

    def __repr__(self):
        return f"PeriodMatrix(g={self.g}, im_min_eig={self.im_min_eig:.4f})"


@dataclass(frozen=True)
class GradientVector:
    """grad_z theta[m](tau, z)|_{z=0} as three certified components."""

    components: tuple

    def values(self) -> np.ndarray:
        return np.array([c.value for c in self.components])

    def errs(self) -> np.ndarray:
        return np.array([c.err for c in self.components])


# ---------------------------------------------------------------------------
# Truncation radius and tail bounds
# ---------------------------------------------------------------------------


def _tail_bound(lam_min: float, R: float, weight: int = 0, im_z: float = 0.0) -> float:
    """Upper bound for sum over ||v|| > R of ||v||^weight exp(-pi lam ||v||^2
    + 2 pi im_z ||v||), using crude shell counts (2r+4)^3 per unit shell."""
    total = 0.0
    r = R
    for _ in range(200):
        shell = (2 * r + 4) ** 3 * (r + 1) ** weight
        term = shell * math.exp(-math.pi * lam_min * r * r + 2 * math.pi * im_z * (r + 1))
        total += term
        if term < 1e-3 * total or term == 0.0:
            break
        r += 1.0
    return total


def _choose_radius(lam_min: float, tol: float, weight: int = 0, im_z: float = 0.0) -> float:
    R = 3.0
    while R <= MAX_RADIUS:
        if _tail_bound(lam_min, R, weight, im_z) <= 0.5 * tol:
            return R
        R += 1.0
    raise PrecisionExhaustedError(
        f"tolerance {tol:.1e} unreachable within truncation radius {MAX_RADIUS}"
    )


@lru_cache(maxsize=64)
def _integer_box(g: int, half: int) -> np.ndarray:
    rng = np.arange(-half, half + 1)
    grids = np.meshgrid(*([rng] * g), indexing="ij")
    return np.stack([gg.ravel() for gg in grids], axis=1).astype(float)


def _lattice(eps, R: float, g: int = 3) -> np.ndarray:
    """Shifted lattice points v = k + eps/2 with ||v|| <= R."""
    half = int(math.ceil(R + 1.0))
    pts = _integer_box(g, half) + np.asarray(eps, dtype=float) / 2.0
    keep = (pts * pts).sum(axis=1) <= R * R
    return pts[keep]


# ---------------------------------------------------------------------------
# Core sums
# ---------------------------------------------------------------------------


def _phase_sum(tau: np.ndarray, v: np.ndarray, zdelta: np.ndarray):
    """exp(pi i (v tau v^T + 2 v . zdelta)) summed over rows of v.

    Returns (sum, sum of |terms|) for the roundoff bound.
    """
    quad = np.einsum("ij,ij->i", v @ tau, v)
    expo = 1j * math.pi * (quad + 2.0 * v @ zdelta)
    terms = np.exp(expo)
    return terms.sum(), np.abs(terms).sum()


def _theta_raw(m: Char, tau: PeriodMatrix, z, tol: float):
    zdelta = (np.asarray(z, dtype=complex) if z is not None else np.zeros(tau.g)) + np.asarray(
        m.delta, dtype=float
    ) / 2.0
    im_z = float(np.linalg.norm(np.asarray(zdelta).imag))
    R = _choose_radius(tau.im_min_eig, tol, weight=0, im_z=im_z)
    v = _lattice(m.eps, R, tau.g)
    s, mag = _phase_sum(tau.matrix, v, zdelta)
    tail = _tail_bound(tau.im_min_eig, R, weight=0, im_z=im_z)
    round_err = 8.0 * _EPS * mag * math.log2(len(v) + 2)
    return s, tail + round_err


def _theta_raw_mp(m: Char, tau: PeriodMatrix, z, tol: float, dps: int = 40):
    with mpmath.workdps(dps):
        zv = [mpmath.mpc(x) for x in (z if z is not None else [0] * tau.g)]
        zdelta = [zv[i] + mpmath.mpf(m.delta[i]) / 2 for i in range(tau.g)]
        im_z = math.sqrt(sum(float(x.imag) ** 2 for x in zdelta))
        R = _choose_radius(tau.im_min_eig, tol, weight=0, im_z=im_z)
        T = [[mpmath.mpc(tau.matrix[i, j]) for j in range(tau.g)] for i in range(tau.g)]
        total = mpmath.mpc(0)
        for row in _lattice(m.eps, R, tau.g):
            vr = [mpmath.mpf(x) for x in row]
            quad = sum(vr[i] * T[i][j] * vr[j] for i in range(tau.g) for j in range(tau.g))
            lin = 2 * sum(vr[i] * zdelta[i] for i in range(tau.g))
            total += mpmath.e ** (1j * mpmath.pi * (quad + lin))
        tail = _tail_bound(tau.im_min_eig, R, weight=0, im_z=im_z)
        return complex(total), tail + float(abs(total)) * 10.0 ** (5 - dps)


def theta_value(m, tau: PeriodMatrix, z=None, tol: float = DEFAULT_TOL) -> CertifiedComplex:
    """Theta constant (z=None) or theta value with characteristic m at z.

    The returned err bounds the truncation tail plus floating-point roundoff.
    """
    if tol <= 0:
        raise DomainError("tol must be positive")
    m = char(m)
    if tau.im_min_eig < ESCALATE_LAMBDA or tol < 1e-12:
        value, err = _theta_raw_mp(m, tau, z, tol)
    else:
        value, err = _theta_raw(m, tau, z, tol)
    return CertifiedComplex(value, err)


def theta_gradient(m, tau: PeriodMatrix, tol: float = DEFAULT_TOL) -> GradientVector:
    """Certified components of grad_z theta[m](tau, z) at z = 0."""
    if tol <= 0:
        raise DomainError("tol must be positive")
    m = char(m)
    R = _choose_radius(tau.im_min_eig, tol / (2 * math.pi), weight=1)
    v = _lattice(m.eps, R, tau.g)
    quad = np.einsum("ij,ij->i", v @ tau.matrix, v)
    terms = np.exp(1j * math.pi * (quad + v @ np.asarray(m.delta, dtype=float)))
    comps = 2j * math.pi * (v * terms[:, None]).sum(axis=0)
    tail = 2 * math.pi * _tail_bound(tau.im_min_eig, R, weight=1)
    mag = 2 * math.pi * (np.abs(terms) * np.abs(v).max(axis=1)).sum()
    err = tail + 8.0 * _EPS * mag * math.log2(len(v) + 2)
    return GradientVector(tuple(CertifiedComplex(complex(c), err) for c in comps))


# ---------------------------------------------------------------------------
# Batched evaluation (shared lattice per eps offset)
# ---------------------------------------------------------------------------


class ThetaBatch:
    """All theta constants and gradients at one tau, computed on shared grids.

    Constants are grouped by the eps offset: the quadratic weights are
    computed once per offset and reused for the eight delta values.
    """

    def __init__(self, tau: PeriodMatrix, tol: float = DEFAULT_TOL):
        self.tau = tau
        self.tol = tol
        self._constants = None
        self._gradients = None

    def _compute_constants(self):
        out = {}
        if self.tau.im_min_eig < ESCALATE_LAMBDA:
            for m in EVEN_CHARS:
                out[m] = theta_value(m, self.tau, tol=self.tol)
            self._constants = out
            return
        R = _choose_radius(self.tau.im_min_eig, self.tol)
        tail = _tail_bound(self.tau.im_min_eig, R)
        for eps in {m.eps for m in EVEN_CHARS}:
            v = _lattice(eps, R, self.tau.g)
            quad = np.einsum("ij,ij->i", v @ self.tau.matrix, v)
            w = np.exp(1j * math.pi * quad)
            mag = np.abs(w).sum()
            err = tail + 8.0 * _EPS * mag * math.log2(len(v) + 2)
            for m in EVEN_CHARS:
                if m.eps != eps:
                    continue
                phases = np.exp(1j * math.pi * (v @ np.asarray(m.delta, dtype=float)))
                out[m] = CertifiedComplex(complex((w * phases).sum()), err)
        self._constants = out

    def _compute_gradients(self):
        out = {}
        if self.tau.im_min_eig < ESCALATE_LAMBDA:
            for m in ODD_CHARS:
                out[m] = theta_gradient(m, self.tau, tol=self.tol)
            self._gradients = out
            return
        R = _choose_radius(self.tau.im_min_eig, self.tol / (2 * math.pi), weight=1)
        tail = 2 * math.pi * _tail_bound(self.tau.im_min_eig, R, weight=1)
        for eps in {m.eps for m in ODD_CHARS}:
            v = _lattice(eps, R, self.tau.g)
            quad = np.einsum("ij,ij->i", v @ self.tau.matrix, v)
            w = np.exp(1j * math.pi * quad)
            for m in ODD_CHARS:
                if m.eps != eps:
                    continue
                phases = np.exp(1j * math.pi * (v @ np.asarray(m.delta, dtype=float)))
                terms = w * phases
                comps = 2j * math.pi * (v * terms[:, None]).sum(axis=0)
                mag = 2 * math.pi * (np.abs(terms) * np.abs(v).max(axis=1)).sum()
                err = tail + 8.0 * _EPS * mag * math.log2(len(v) + 2)
                out[m] = GradientVector(
                    tuple(CertifiedComplex(complex(c), err) for c in comps)
                )
        self._gradients = out

    def constant(self, m) -> CertifiedComplex:
        m = char(m)
        if is_odd(m):
            return CertifiedComplex(0.0 + 0j, 0.0)
        if self._constants is None:
            self._compute_constants()
        return self._constants[m]

    def gradient(self, m) -> GradientVector:
        m = char(m)
        if self._gradients is None:
            self._compute_gradients()
        return self._gradients[m]

    def even_constants(self) -> dict:
        if self._constants is None:
            self._compute_constants()
        return dict(self._constants)


# ---------------------------------------------------------------------------
# Jacobian determinants and Jacobi's derivative formula
# ---------------------------------------------------------------------------


def _certified_det3(rows) -> CertifiedComplex:
    """3x3 determinant of certified rows with a rigorous error bound."""
    V = np.array([[c.value for c in row] for row in rows])
    E = np.array([[c.err for c in row] for row in rows])
    det = complex(np.linalg.det(V))
    A = np.abs(V)
    err = 0.0
    # permutation expansion bound: replace each factor in turn by its error
    import itertools as _it

    for perm in _it.permutations(range(3)):
        a = [A[i, perm[i]] for i in range(3)]
        e = [E[i, perm[i]] for i in range(3)]
        err += (
            e[0] * (a[1] + e[1]) * (a[2] + e[2])
            + a[0] * e[1] * (a[2] + e[2])
            + a[0] * a[1] * e[2]
        )
    err += 60.0 * _EPS * (A + E).prod(axis=1).sum() * 6
    return CertifiedComplex(det, err)


def jacobian_determinant(n1, n2, n3, tau: PeriodMatrix, tol: float = DEFAULT_TOL,
                         batch: ThetaBatch = None) -> CertifiedComplex:
    """Determinant of the three theta gradients (wedge of the covectors)."""
    chars3 = [char(n) for n in (n1, n2, n3)]
    if any(is_even(m) for m in chars3):
        raise DomainError("jacobian determinant requires odd characteristics")
    b = batch if batch is not None else ThetaBatch(tau, tol)
    rows = [b.gradient(m).components for m in chars3]
    return _certified_det3(rows)


_BASE_RNG_SEED = 0xA53C5
_sign_cache_lock = threading.Lock()
_SIGN_CACHE: dict = {}


def _sign_base_point() -> PeriodMatrix:
    rng = np.random.default_rng(_BASE_RNG_SEED)
    E = rng.standard_normal((3, 3))
    E = (E + E.T) / 2
    F = rng.standard_normal((3, 3))
    F = (F + F.T) / 2
    return PeriodMatrix(1j * np.eye(3) + 0.1 * (E + 0.1j * (F @ F.T)))


def quintuple_product(n1, n2, n3, tau: PeriodMatrix, tol: float = DEFAULT_TOL,
                      batch: ThetaBatch = None) -> CertifiedComplex:
    """pi^3 times the product of the five completing even theta constants
    (sign not yet resolved)."""
    quint = complete_fundamental_system([char(n1), char(n2), char(n3)])
    b = batch if batch is not None else ThetaBatch(tau, tol)
    out = CertifiedComplex(complex(math.pi**3), 0.0)
    for m in sorted(quint, key=lambda c: c.label):
        out = out * b.constant(m)
    return out


def jacobi_sign(n1, n2, n3, tol: float = DEFAULT_TOL) -> int:
    """Resolved sign in D(n1,n2,n3) = sign * pi^3 * product of the quintuple.

    The sign is a global constant per ordered triple; it is resolved once at
    a fixed, recorded base point and cached.  Raises PrecisionExhaustedError
    if both signs are within the certified error of the ratio.
    """
    key = tuple(char(n).label for n in (n1, n2, n3))
    cached = _SIGN_CACHE.get(key)
    if cached is not None:
        return cached["sign"]
    tau0 = _sign_base_point()
    b = ThetaBatch(tau0, tol)
    det = jacobian_determinant(n1, n2, n3, tau0, tol, batch=b)
    prod = quintuple_product(n1, n2, n3, tau0, tol, batch=b)
    ratio = det / prod
    if abs(ratio.value - 1) <= ratio.err or abs(ratio.value + 1) <= ratio.err:
        if not (abs(ratio.value - 1) <= ratio.err) ^ (abs(ratio.value + 1) <= ratio.err):
            raise PrecisionExhaustedError("sign of the quintuple product is ambiguous")
    sign = 1 if abs(ratio.value - 1) < abs(ratio.value + 1) else -1
    if abs(ratio.value - sign) > 1e-4:
        raise InternalConsistencyError(
            f"quintuple ratio {ratio.value} for {key} is not close to +-1"
        )
    with _sign_cache_lock:
        _SIGN_CACHE.setdefault(
            key, {"sign": sign, "base_tau": tau0.to_json(), "ratio": ratio.value}
        )
    return _SIGN_CACHE[key]["sign"]


def jacobi_product(n1, n2, n3, tau: PeriodMatrix, tol: float = DEFAULT_TOL,
                   batch: ThetaBatch = None) -> CertifiedComplex:
    """Jacobi's derivative formula: the signed quintuple product equal to the
    Jacobian determinant of the azygetic odd triple."""
    chars3 = [char(n) for n in (n1, n2, n3)]
    if any(is_even(m) for m in chars3) or not is_azygetic(*chars3):
        raise DomainError("jacobi_product requires an azygetic odd triple")
    s = jacobi_sign(n1, n2, n3, tol)
    return quintuple_product(n1, n2, n3, tau, tol, batch=batch) * s


def hyperelliptic_guard(tau: PeriodMatrix, tol: float = DEFAULT_TOL,
                        threshold: float = 1e-6, batch: ThetaBatch = None) -> ThetaBatch:
    """Reject tau when any even theta constant is below the threshold.

    Returns the ThetaBatch so callers can reuse the evaluation.
    """
    b = batch if batch is not None else ThetaBatch(tau, tol)
    for m, val in b.even_constants().items():
        if abs(val.value) < threshold:
            raise HyperellipticProximityError(
                f"|theta_{m.label}| = {abs(val.value):.2e} < {threshold:.1e}"
            )
    return b
