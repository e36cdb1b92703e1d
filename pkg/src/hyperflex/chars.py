"""Finite algebra of theta characteristics over (Z/2Z)^{2g}.

A characteristic is a pair of length-g bit vectors (eps, delta).  For g=3 it
is also written as a two-digit octal label (i, j) with i = 4*eps1 + 2*eps2 +
eps3 and j likewise for delta, so "77" is the all-ones characteristic.

The module provides parity, azygetic/syzygetic triple signs, fundamental
systems, essential independence, the affine action of Sp(2g, Z) on
characteristics, orbit signatures and BFS orbit enumeration, and the counting
lemmas used by the divisor-class computations.  Everything here is exact
integer arithmetic; no floating point.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import (
    InternalConsistencyError,
    InvalidBoundaryLabelError,
    InvalidElementError,
    InvalidSubspaceError,
    UnsupportedDimensionError,
)


@dataclass(frozen=True)
class Char:
    """Theta characteristic: a pair of bit vectors of common length g."""

    eps: tuple
    delta: tuple

    def __post_init__(self):
        if len(self.eps) != len(self.delta):
            raise ValueError("eps and delta must have equal length")
        if any(b not in (0, 1) for b in self.eps + self.delta):
            raise ValueError("characteristic entries must be bits")

    @property
    def g(self) -> int:
        return len(self.eps)

    def __add__(self, other: "Char") -> "Char":
        if other.g != self.g:
            raise ValueError("genus mismatch")
        return Char(
            tuple((a + b) % 2 for a, b in zip(self.eps, other.eps)),
            tuple((a + b) % 2 for a, b in zip(self.delta, other.delta)),
        )

    def vector(self) -> tuple:
        """The characteristic as a length-2g vector (eps followed by delta)."""
        return self.eps + self.delta

    def is_zero(self) -> bool:
        return not any(self.vector())

    @property
    def label(self) -> str:
        i, j = encode_label(self)
        return f"{i}{j}"

    def __repr__(self):
        if self.g == 3:
            return f"Char({self.label})"
        return f"Char({self.eps},{self.delta})"


class OctalLabel(NamedTuple):
    """Presentation-layer label (i, j), each an octal digit, for g=3."""

    i: int
    j: int


def _bits_to_octal(bits: Sequence[int]) -> int:
    return 4 * bits[0] + 2 * bits[1] + bits[2]


def _octal_to_bits(d: int) -> tuple:
    return ((d >> 2) & 1, (d >> 1) & 1, d & 1)


def encode_label(m: Char) -> OctalLabel:
    """Octal label of a genus-3 characteristic; inverse of decode_label."""
    if m.g != 3:
        raise UnsupportedDimensionError("octal labels are defined for g=3 only")
    return OctalLabel(_bits_to_octal(m.eps), _bits_to_octal(m.delta))


def decode_label(label) -> Char:
    """Characteristic from an OctalLabel, an (i, j) pair, or a string "ij"."""
    if isinstance(label, str):
        if len(label) != 2 or not label.isdigit():
            raise ValueError(f"bad octal label {label!r}")
        i, j = int(label[0]), int(label[1])
    else:
        i, j = label
    if not (0 <= i <= 7 and 0 <= j <= 7):
        raise ValueError(f"octal digits out of range: ({i}, {j})")
    return Char(_octal_to_bits(i), _octal_to_bits(j))


def char(label) -> Char:
    """Shorthand: char("77"), char((7, 7)) or char(Char(...))."""
    if isinstance(label, Char):
        return label
    return decode_label(label)


def from_vector(v: Sequence[int]) -> Char:
    """Characteristic from a length-2g vector over F2."""
    if len(v) % 2:
        raise ValueError("vector length must be even")
    g = len(v) // 2
    return Char(tuple(int(b) % 2 for b in v[:g]), tuple(int(b) % 2 for b in v[g:]))


ZERO = decode_label("00")

ALL_CHARS = tuple(
    Char(e, d)
    for e in itertools.product((0, 1), repeat=3)
    for d in itertools.product((0, 1), repeat=3)
)


def parity(m: Char) -> int:
    """Parity (-1)^{eps.delta}: +1 for even, -1 for odd characteristics."""
    return -1 if sum(a * b for a, b in zip(m.eps, m.delta)) % 2 else 1


def is_even(m: Char) -> bool:
    return parity(m) == 1


def is_odd(m: Char) -> bool:
    return parity(m) == -1


EVEN_CHARS = tuple(m for m in ALL_CHARS if is_even(m))
ODD_CHARS = tuple(m for m in ALL_CHARS if is_odd(m))


def triple_sign(m1: Char, m2: Char, m3: Char) -> int:
    """e(m1)e(m2)e(m3)e(m1+m2+m3); -1 means azygetic, +1 syzygetic."""
    return parity(m1) * parity(m2) * parity(m3) * parity(m1 + m2 + m3)


def is_azygetic(m1: Char, m2: Char, m3: Char) -> bool:
    return triple_sign(m1, m2, m3) == -1


def is_fundamental_system(seq: Sequence[Char]) -> bool:
    """True iff every 3-element subset of the sequence is azygetic.

    A full fundamental system in genus 3 has 8 members; shorter sequences are
    accepted and tested for the same pairwise-triple condition.
    """
    return all(is_azygetic(a, b, c) for a, b, c in itertools.combinations(seq, 3))


def is_essentially_independent(seq: Sequence[Char]) -> bool:
    """True iff no even-size subsequence sums to zero mod 2."""
    for k in range(2, len(seq) + 1, 2):
        for subset in itertools.combinations(seq, k):
            total = subset[0]
            for m in subset[1:]:
                total = total + m
            if total.is_zero():
                return False
    return True


def symplectic_pairing(a: Char, b: Char) -> int:
    """Standard symplectic form on F2^{2g}: eps_a.delta_b + eps_b.delta_a mod 2."""
    s = sum(x * y for x, y in zip(a.eps, b.delta))
    s += sum(x * y for x, y in zip(b.eps, a.delta))
    return s % 2


# ---------------------------------------------------------------------------
# The symplectic group, its generators, and the affine action
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SymplecticMatrix:
    """Element of Sp(2g, Z) in block form ((A, B), (C, D)).

    Blocks are stored as tuples of tuples of ints.  Validation checks
    gamma^T J gamma = J exactly over the integers, or over F2 when mod2=True.
    """

    A: tuple
    B: tuple
    C: tuple
    D: tuple

    @staticmethod
    def from_blocks(A, B, C, D, mod2: bool = False) -> "SymplecticMatrix":
        as_t = lambda M: tuple(tuple(int(x) for x in row) for row in M)
        gamma = SymplecticMatrix(as_t(A), as_t(B), as_t(C), as_t(D))
        gamma.validate(mod2=mod2)
        return gamma

    @property
    def g(self) -> int:
        return len(self.A)

    def full(self) -> np.ndarray:
        top = np.hstack([np.array(self.A, dtype=np.int64), np.array(self.B, dtype=np.int64)])
        bot = np.hstack([np.array(self.C, dtype=np.int64), np.array(self.D, dtype=np.int64)])
        return np.vstack([top, bot])

    def validate(self, mod2: bool = False) -> None:
        g = self.g
        M = self.full()
        J = np.zeros((2 * g, 2 * g), dtype=np.int64)
        J[:g, g:] = np.eye(g, dtype=np.int64)
        J[g:, :g] = -np.eye(g, dtype=np.int64)
        R = M.T @ J @ M
        if mod2:
            if ((R - J) % 2 != 0).any():
                raise InvalidElementError("matrix is not symplectic over F2")
        elif (R != J).any():
            raise InvalidElementError("matrix is not symplectic over Z")

    def __matmul__(self, other: "SymplecticMatrix") -> "SymplecticMatrix":
        g = self.g
        P = self.full() @ other.full()
        return SymplecticMatrix(
            tuple(map(tuple, P[:g, :g])),
            tuple(map(tuple, P[:g, g:])),
            tuple(map(tuple, P[g:, :g])),
            tuple(map(tuple, P[g:, g:])),
        )


def _diag(M: np.ndarray) -> np.ndarray:
    return np.diagonal(M).copy()


@dataclass(frozen=True)
class AffineAction:
    """Action of one symplectic element on characteristics, reduced mod 2.

    The characteristic (eps, delta) maps to P.(eps, delta) + c where P is the
    linear part ((D, -C), (-B, A)) and c = (diag(C^T D), diag(A^T B)), all
    mod 2.  Boundary labels n transform by P alone.
    """

    matrix: tuple  # 2g x 2g over F2, row tuples
    offset: tuple  # length 2g over F2

    @staticmethod
    def of(gamma: SymplecticMatrix) -> "AffineAction":
        g = gamma.g
        A = np.array(gamma.A) % 2
        B = np.array(gamma.B) % 2
        C = np.array(gamma.C) % 2
        D = np.array(gamma.D) % 2
        P = np.zeros((2 * g, 2 * g), dtype=np.int64)
        P[:g, :g] = D
        P[:g, g:] = C  # signs vanish mod 2
        P[g:, :g] = B
        P[g:, g:] = A
        c = np.concatenate([_diag((C.T @ D) % 2), _diag((A.T @ B) % 2)]) % 2
        return AffineAction(tuple(map(tuple, P % 2)), tuple(int(x) for x in c))

    def on_char(self, m: Char) -> Char:
        v = np.array(m.vector(), dtype=np.int64)
        P = np.array(self.matrix, dtype=np.int64)
        w = (P @ v + np.array(self.offset)) % 2
        return from_vector(w)

    def on_vector(self, n: Char) -> Char:
        """Linear part only; used for boundary labels n in F2^{2g} - 0."""
        v = np.array(n.vector(), dtype=np.int64)
        P = np.array(self.matrix, dtype=np.int64)
        return from_vector((P @ v) % 2)

    def compose(self, inner: "AffineAction") -> "AffineAction":
        """Action of gamma_self . gamma_inner (apply inner first)."""
        P1 = np.array(inner.matrix, dtype=np.int64)
        P2 = np.array(self.matrix, dtype=np.int64)
        c1 = np.array(inner.offset, dtype=np.int64)
        c2 = np.array(self.offset, dtype=np.int64)
        return AffineAction(
            tuple(map(tuple, (P2 @ P1) % 2)),
            tuple(int(x) for x in (P2 @ c1 + c2) % 2),
        )


def apply_symplectic(gamma: SymplecticMatrix, m: Char, mod2: bool = True) -> Char:
    """Affine action of gamma on the characteristic m (preserves parity)."""
    gamma.validate(mod2=mod2)
    return AffineAction.of(gamma).on_char(m)


def symplectic_generators(g: int = 3) -> tuple:
    """Standard generators of Sp(2g, Z): the flip J and the translations T_B.

    T_B = ((I, B), (0, I)) over all symmetric elementary B, together with
    J = ((0, -I), (I, 0)).  Their images mod 2 generate Sp(2g, F2); the order
    of the generated group is checked by sp_f2_group_order.
    """
    gens = []
    eye = np.eye(g, dtype=np.int64)
    zero = np.zeros((g, g), dtype=np.int64)
    gens.append(SymplecticMatrix.from_blocks(zero, -eye, eye, zero))
    basis = [np.outer(eye[i], eye[i]) for i in range(g)]
    basis += [
        np.outer(eye[i], eye[j]) + np.outer(eye[j], eye[i])
        for i in range(g)
        for j in range(i + 1, g)
    ]
    for Bm in basis:
        gens.append(SymplecticMatrix.from_blocks(eye, Bm, zero, eye))
    return tuple(gens)


def _pack_f2(M: np.ndarray, powers: np.ndarray) -> np.ndarray:
    return (M.reshape(M.shape[0], -1).astype(np.uint64) * powers).sum(axis=1)


def sp_f2_group_order(g: int = 3, generators: Iterable[SymplecticMatrix] = None) -> int:
    """Order of the group generated mod 2 by the given (or standard) generators.

    BFS over packed 4g^2-bit encodings, vectorized with numpy.  For g=3 the
    expected value is |Sp(6, F2)| = 1451520.
    """
    gens = [gamma.full() % 2 for gamma in (generators or symplectic_generators(g))]
    n = 2 * g
    powers = (np.uint64(1) << np.arange(n * n, dtype=np.uint64))
    eye = np.eye(n, dtype=np.uint8)
    seen = {int(_pack_f2(eye[None], powers)[0])}
    frontier = eye[None].astype(np.uint8)
    while len(frontier):
        prods = np.concatenate([(frontier @ G) % 2 for G in gens]).astype(np.uint8)
        keys = _pack_f2(prods, powers)
        fresh_rows = []
        for row, key in zip(prods, keys):
            k = int(key)
            if k not in seen:
                seen.add(k)
                fresh_rows.append(row)
        frontier = np.array(fresh_rows, dtype=np.uint8) if fresh_rows else np.empty((0, n, n), np.uint8)
    return len(seen)


# ---------------------------------------------------------------------------
# Orbits and signatures
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OrbitSignature:
    """Complete conjugacy invariant of an ordered sequence of characteristics.

    Two sequences are conjugate under the symplectic group iff their
    signatures (parities, triple signs, and the essential-independence
    pattern over all index subsets) agree.
    """

    parities: tuple
    triple_signs: tuple
    essential_independence: tuple


def orbit_signature(seq: Sequence[Char]) -> OrbitSignature:
    seq = tuple(seq)
    r = len(seq)
    parities = tuple(parity(m) for m in seq)
    triples = tuple(
        ((i, j, k), triple_sign(seq[i], seq[j], seq[k]))
        for i, j, k in itertools.combinations(range(r), 3)
    )
    ess = tuple(
        (subset, is_essentially_independent([seq[i] for i in subset]))
        for size in range(1, r + 1)
        for subset in itertools.combinations(range(r), size)
    )
    return OrbitSignature(parities, triples, ess)


def char_orbit(m: Char, generators=None) -> frozenset:
    """BFS orbit of a characteristic under the affine action."""
    actions = [AffineAction.of(gamma) for gamma in (generators or symplectic_generators(m.g))]
    seen = {m}
    frontier = [m]
    while frontier:
        nxt = []
        for x in frontier:
            for act in actions:
                y = act.on_char(x)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(seen)


def pair_orbit(m: Char, n: Char, generators=None) -> frozenset:
    """BFS orbit of (m, n): m transforms affinely, the label n linearly."""
    actions = [AffineAction.of(gamma) for gamma in (generators or symplectic_generators(m.g))]
    start = (m, n)
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for x, y in frontier:
            for act in actions:
                p = (act.on_char(x), act.on_vector(y))
                if p not in seen:
                    seen.add(p)
                    nxt.append(p)
        frontier = nxt
    return frozenset(seen)


def transport_to(m_from: Char, m_to: Char, generators=None):
    """An AffineAction gamma with gamma(m_from) = m_to, found by BFS.

    Raises InternalConsistencyError if the two characteristics are not in the
    same orbit (cannot happen for two odd, or two even, characteristics).
    """
    gens = generators or symplectic_generators(m_from.g)
    actions = [AffineAction.of(gamma) for gamma in gens]
    identity = AffineAction(
        tuple(map(tuple, np.eye(2 * m_from.g, dtype=np.int64))),
        tuple([0] * (2 * m_from.g)),
    )
    known = {m_from: identity}
    frontier = [m_from]
    while frontier:
        nxt = []
        for x in frontier:
            for act in actions:
                y = act.on_char(x)
                if y not in known:
                    known[y] = act.compose(known[x])
                    if y == m_to:
                        return known[y]
                    nxt.append(y)
        frontier = nxt
    if m_to in known:
        return known[m_to]
    raise InternalConsistencyError(f"{m_from} and {m_to} are not conjugate")


def transport_pair(pair_from, pair_to, generators=None, linear_second=True):
    """AffineAction mapping one (m, n) pair to another, or None.

    The first entry transforms affinely, the second by the linear part when
    linear_second is True (boundary labels), affinely otherwise.
    """
    m0, n0 = pair_from
    gens = generators or symplectic_generators(m0.g)
    actions = [AffineAction.of(gamma) for gamma in gens]
    identity = AffineAction(
        tuple(map(tuple, np.eye(2 * m0.g, dtype=np.int64))),
        tuple([0] * (2 * m0.g)),
    )
    second = (lambda act, v: act.on_vector(v)) if linear_second else (lambda act, v: act.on_char(v))
    known = {(m0, n0): identity}
    frontier = [(m0, n0)]
    while frontier:
        nxt = []
        for x in frontier:
            for act in actions:
                y = (act.on_char(x[0]), second(act, x[1]))
                if y not in known:
                    known[y] = act.compose(known[x])
                    if y == pair_to:
                        return known[y]
                    nxt.append(y)
        frontier = nxt
    return known.get(pair_to)


# ---------------------------------------------------------------------------
# Boundary-pair and subspace classification
# ---------------------------------------------------------------------------


def classify_boundary_pair(m: Char, n: Char) -> str:
    """Orbit tag of (m, n): "even-sum", "odd-sum", or "degenerate" (m+n=0)."""
    if n.is_zero():
        raise InvalidBoundaryLabelError("boundary label n must be nonzero")
    s = m + n
    if s.is_zero():
        return "degenerate"
    return "even-sum" if is_even(s) else "odd-sum"


@dataclass(frozen=True)
class SymplecticSubspace:
    """2-dimensional symplectic subspace of F2^{2g}, given by two generators."""

    n1: Char
    n2: Char

    def __post_init__(self):
        if self.n1.is_zero() or self.n2.is_zero() or self.n1 + self.n2 == ZERO:
            raise InvalidSubspaceError("generators must be independent over F2")
        if symplectic_pairing(self.n1, self.n2) != 1:
            raise InvalidSubspaceError("generators must pair to 1 under the symplectic form")

    def nonzero_elements(self) -> frozenset:
        return frozenset({self.n1, self.n2, self.n1 + self.n2})


V0 = SymplecticSubspace(Char((1, 0, 0), (0, 0, 0)), Char((0, 0, 0), (1, 0, 0)))
V1 = SymplecticSubspace(Char((1, 0, 1), (0, 0, 0)), Char((0, 0, 0), (1, 0, 0)))


def classify_subspace_pair(m: Char, V: SymplecticSubspace) -> int:
    """Number of even elements in {m+n1, m+n2, m+n1+n2}; 1 or 3 for odd m."""
    count = sum(1 for n in (V.n1, V.n2, V.n1 + V.n2) if is_even(m + n))
    if is_odd(m) and count not in (1, 3):
        raise InternalConsistencyError("odd m must see 1 or 3 even elements")
    return count


def subspace_orbit(m: Char, V: SymplecticSubspace, generators=None) -> frozenset:
    """BFS orbit of (m, V); V transforms by the linear part on its span."""
    actions = [AffineAction.of(gamma) for gamma in (generators or symplectic_generators(m.g))]
    start = (m, V.nonzero_elements())
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for x, span in frontier:
            for act in actions:
                p = (act.on_char(x), frozenset(act.on_vector(v) for v in span))
                if p not in seen:
                    seen.add(p)
                    nxt.append(p)
        frontier = nxt
    return frozenset(seen)


def transport_subspace_pair(m: Char, V: SymplecticSubspace, m_to: Char,
                            V_to: SymplecticSubspace, generators=None):
    """AffineAction sending (m, span V) to (m_to, span V_to), or None."""
    gens = generators or symplectic_generators(m.g)
    actions = [AffineAction.of(gamma) for gamma in gens]
    identity = AffineAction(
        tuple(map(tuple, np.eye(2 * m.g, dtype=np.int64))),
        tuple([0] * (2 * m.g)),
    )
    target = (m_to, V_to.nonzero_elements())
    start = (m, V.nonzero_elements())
    known = {start: identity}
    frontier = [start]
    while frontier:
        nxt = []
        for x in frontier:
            for act in actions:
                y = (act.on_char(x[0]), frozenset(act.on_vector(v) for v in x[1]))
                if y not in known:
                    known[y] = act.compose(known[x])
                    if y == target:
                        return known[y]
                    nxt.append(y)
        frontier = nxt
    return known.get(target)


# ---------------------------------------------------------------------------
# Counting and fundamental-system completion
# ---------------------------------------------------------------------------


def enumerate_counts(n: Char = None, V: SymplecticSubspace = None) -> dict:
    """Counting report reproduced by brute force over all 64 characteristics.

    Always reports the 36/28 even/odd split.  With a boundary label n, adds
    the (16, 12) split of odd m by the parity of m+n; with a subspace V, adds
    the (18, 10) split of odd m by the even-count of the subspace triple.
    """
    report = {
        "total": len(ALL_CHARS),
        "even": len(EVEN_CHARS),
        "odd": len(ODD_CHARS),
    }
    if n is not None:
        if n.is_zero():
            raise InvalidBoundaryLabelError("boundary label n must be nonzero")
        report["boundary"] = {
            "n": n.label,
            "odd_m_even_sum": sum(
                1 for m in ODD_CHARS if is_even(m + n) and not (m + n).is_zero()
            ),
            "odd_m_odd_sum": sum(1 for m in ODD_CHARS if is_odd(m + n)),
            "odd_m_degenerate": sum(1 for m in ODD_CHARS if (m + n).is_zero()),
        }
    if V is not None:
        counts = {1: 0, 3: 0}
        for m in ODD_CHARS:
            counts[classify_subspace_pair(m, V)] += 1
        report["subspace"] = {
            "generators": [V.n1.label, V.n2.label],
            "odd_m_one_even": counts[1],
            "odd_m_three_even": counts[3],
        }
    return report


def complete_fundamental_system(triple: Sequence[Char]) -> frozenset:
    """The unique 5-set of even characteristics completing an azygetic odd triple.

    Exhaustive search over the 36 even characteristics, with backtracking on
    the azygetic condition.  Raises InternalConsistencyError if zero or more
    than one completion exists (that would signal a bug, not bad input).
    """
    triple = tuple(triple)
    if len(triple) != 3 or any(is_even(m) for m in triple):
        raise ValueError("input must be a triple of odd characteristics")
    if not is_azygetic(*triple):
        raise ValueError("input triple must be azygetic")

    completions = []

    def extend(chosen, start):
        base = triple + tuple(chosen)
        if len(chosen) == 5:
            completions.append(frozenset(chosen))
            return
        for idx in range(start, len(EVEN_CHARS)):
            cand = EVEN_CHARS[idx]
            if all(is_azygetic(a, b, cand) for a, b in itertools.combinations(base, 2)):
                extend(chosen + [cand], idx + 1)

    extend([], 0)
    if len(completions) != 1:
        raise InternalConsistencyError(
            f"expected exactly one quintuple, found {len(completions)}"
        )
    return completions[0]
