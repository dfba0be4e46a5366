"""Factories for Lie algebra and Clifford representations.

A :class:`GeneratorSet` bundles k Hermitian d x d generator matrices with
two normalization constants:

* ``N`` — the trace-form constant, tr(X_a X_b) = N d delta_ab;
* ``Z`` — the Casimir constant, sum_i X_i^2 = Z * identity.

Four families are provided: the defining representation of su(n) with
generalized Gell-Mann generators, spin-s representations of su(2), the
fundamental 7-dimensional representation of g2 built from octonion
derivations, and the d=4 Weyl representation of the Euclidean Clifford
algebra.  All factories validate the constructed set before returning it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Sequence

import numpy as np

from .matcore import (
    as_complex_matrix,
    is_hermitian,
    matrix_from_json,
    matrix_to_json,
    max_abs,
)

SU_N_DEFINING = "su_n_defining"
SU2_SPIN = "su2_spin"
G2_FUNDAMENTAL = "g2_fundamental"
CLIFFORD_WEYL = "clifford_weyl"
CUSTOM = "custom"

ALGEBRA_TAGS = (SU_N_DEFINING, SU2_SPIN, G2_FUNDAMENTAL, CLIFFORD_WEYL, CUSTOM)

GENERATOR_HERM_TOL = 1e-10
GENERATOR_TRACELESS_TOL = 1e-10
CASIMIR_TOL = 1e-9
TRACE_FORM_TOL = 1e-9


class NotScalarError(ValueError):
    """sum_i X_i^2 is not proportional to the identity.

    Raised for reducible generator sets whose irreducible blocks carry
    unequal Casimir constants; no normalization constant can make the
    corresponding Kraus family trace preserving.
    """


def casimir_z(generators: Sequence) -> float:
    """Z with sum_i X_i^2 = Z * identity, or NotScalarError if no such Z."""
    mats = [as_complex_matrix(g) for g in generators]
    d = mats[0].shape[0]
    total = np.zeros((d, d), dtype=np.complex128)
    for m in mats:
        total += m @ m
    z = np.trace(total).real / d
    dev = max_abs(total - z * np.eye(d))
    if dev > CASIMIR_TOL:
        raise NotScalarError(
            f"sum of squared generators deviates from a scalar by {dev:.3e}"
        )
    return float(z)


def trace_form_constant(generators: Sequence) -> float:
    """N with tr(X_a X_b) = N d delta_ab, or ValueError if not of that form."""
    mats = [as_complex_matrix(g) for g in generators]
    d = mats[0].shape[0]
    stack = np.stack(mats)
    gram = np.einsum("aij,bji->ab", stack, stack)
    n = gram[0, 0].real / d
    dev = max_abs(gram - n * d * np.eye(len(mats)))
    if dev > TRACE_FORM_TOL:
        raise ValueError(f"trace form is not N*d*delta: deviation {dev:.3e}")
    return float(n)


def _readonly_tuple(mats) -> tuple:
    out = []
    for m in mats:
        a = np.array(m, dtype=np.complex128, copy=True)
        a.flags.writeable = False
        out.append(a)
    return tuple(out)


@dataclass(frozen=True, eq=False)
class GeneratorSet:
    """A representation: k Hermitian d x d matrices plus N and Z."""

    algebra: str
    d: int
    k: int
    generators: tuple = field(repr=False)
    N: float
    Z: float

    def __post_init__(self):
        if self.algebra not in ALGEBRA_TAGS:
            raise ValueError(f"unknown algebra tag {self.algebra!r}")
        gens = _readonly_tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        if len(gens) != self.k:
            raise ValueError(f"expected {self.k} generators, got {len(gens)}")
        d = self.d
        eye = np.eye(d)
        sq = np.zeros((d, d), dtype=np.complex128)
        for g in gens:
            if g.shape != (d, d):
                raise ValueError("generator dimension mismatch")
            if not is_hermitian(g, GENERATOR_HERM_TOL):
                raise ValueError("generator is not Hermitian within 1e-10")
            # Clifford gamma matrices are not Lie algebra generators, so the
            # tracelessness guarantee does not apply to them.
            if self.algebra != CLIFFORD_WEYL and abs(np.trace(g)) > GENERATOR_TRACELESS_TOL:
                raise ValueError("generator is not traceless within 1e-10")
            sq += g @ g
        if max_abs(sq - self.Z * eye) > CASIMIR_TOL:
            raise NotScalarError("sum of squared generators does not equal Z * identity")
        stack = np.stack(gens)
        gram = np.einsum("aij,bji->ab", stack, stack)
        if max_abs(gram - self.N * d * np.eye(self.k)) > TRACE_FORM_TOL:
            raise ValueError("trace form deviates from N*d*delta beyond 1e-9")

    @classmethod
    def from_generators(cls, generators: Sequence, algebra: str = CUSTOM) -> "GeneratorSet":
        mats = [as_complex_matrix(g) for g in generators]
        d = mats[0].shape[0]
        z = casimir_z(mats)
        n = trace_form_constant(mats)
        return cls(algebra=algebra, d=d, k=len(mats), generators=tuple(mats), N=n, Z=z)

    def to_json(self) -> dict:
        return {
            "algebra": self.algebra,
            "d": self.d,
            "k": self.k,
            "N": self.N,
            "Z": self.Z,
            "generators": [matrix_to_json(g) for g in self.generators],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "GeneratorSet":
        return cls(
            algebra=obj["algebra"],
            d=int(obj["d"]),
            k=int(obj["k"]),
            generators=tuple(matrix_from_json(g) for g in obj["generators"]),
            N=float(obj["N"]),
            Z=float(obj["Z"]),
        )


def rotate_basis(g: GeneratorSet, ortho: np.ndarray) -> GeneratorSet:
    """New GeneratorSet with generators Y_a = sum_b O_ab X_b, O orthogonal.

    An orthogonal mixing preserves the trace form, the Casimir sum and
    Hermiticity, so the rotated set defines the same channel.
    """
    o = np.asarray(ortho, dtype=float)
    if o.shape != (g.k, g.k) or max_abs(o @ o.T - np.eye(g.k)) > 1e-10:
        raise ValueError("expected an orthogonal k x k mixing matrix")
    stack = np.stack(g.generators)
    mixed = np.einsum("ab,bij->aij", o, stack)
    return GeneratorSet(
        algebra=CUSTOM, d=g.d, k=g.k, generators=tuple(mixed), N=g.N, Z=g.Z
    )


# ---------------------------------------------------------------------------
# su(n): generalized Gell-Mann matrices, tr(X_a X_b) = 2 delta_ab.

def gell_mann(n: int) -> GeneratorSet:
    """Canonical su(n) generators: Pauli matrices for n=2, Gell-Mann for n=3.

    Ordering: for each column k = 2..n, the symmetric and antisymmetric
    off-diagonal pairs E_jk +/- E_kj for j < k, then the diagonal matrix
    sqrt(2/((k-1)k)) diag(1, ..., 1, -(k-1), 0, ...).
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    gens = []
    for k in range(2, n + 1):
        for j in range(1, k):
            m = np.zeros((n, n), dtype=np.complex128)
            m[j - 1, k - 1] = 1
            m[k - 1, j - 1] = 1
            gens.append(m)
            m = np.zeros((n, n), dtype=np.complex128)
            m[j - 1, k - 1] = -1j
            m[k - 1, j - 1] = 1j
            gens.append(m)
        m = np.zeros((n, n), dtype=np.complex128)
        for i in range(k - 1):
            m[i, i] = 1
        m[k - 1, k - 1] = -(k - 1)
        gens.append(math.sqrt(2.0 / ((k - 1) * k)) * m)
    return GeneratorSet(
        algebra=SU_N_DEFINING,
        d=n,
        k=n * n - 1,
        generators=tuple(gens),
        N=2.0 / n,
        Z=2.0 * (n * n - 1) / n,
    )


@dataclass(frozen=True, eq=False)
class StructureTensors:
    """Product tensors of the su(n) defining representation.

    X_i X_j = beta delta_ij I + sum_k Q_ijk X_k with Q = d_sym + i f;
    f is totally antisymmetric, d_sym totally symmetric and traceless.
    """

    n: int
    beta: float
    f: np.ndarray = field(repr=False)
    d_sym: np.ndarray = field(repr=False)
    Q: np.ndarray = field(repr=False)

    def __post_init__(self):
        k = self.n * self.n - 1
        for name in ("f", "d_sym", "Q"):
            arr = getattr(self, name)
            if arr.shape != (k, k, k):
                raise ValueError(f"{name} tensor has wrong shape {arr.shape}")


def structure_tensors(n: int) -> StructureTensors:
    """f, d and Q tensors of su(n): f_ijk = -(i/4) tr([X_i,X_j] X_k),
    d_ijk = (1/4) tr({X_i,X_j} X_k), Q = d + i f, beta = 2/n."""
    g = gell_mann(n)
    x = np.stack(g.generators)
    prod = np.einsum("iab,jbc->ijac", x, x)
    comm = prod - prod.transpose(1, 0, 2, 3)
    anti = prod + prod.transpose(1, 0, 2, 3)
    f = np.einsum("ijab,kba->ijk", comm, x) * (-0.25j)
    d_sym = np.einsum("ijab,kba->ijk", anti, x) * 0.25
    if max_abs(f.imag) > 1e-12 or max_abs(d_sym.imag) > 1e-12:
        raise ArithmeticError("structure tensors acquired an imaginary part")
    f = f.real
    d_sym = d_sym.real
    q = d_sym + 1j * f
    tensors = StructureTensors(n=n, beta=2.0 / n, f=f, d_sym=d_sym, Q=q)
    _validate_structure(g, tensors)
    return tensors


def _validate_structure(g: GeneratorSet, t: StructureTensors) -> None:
    n, k = t.n, g.k
    x = np.stack(g.generators)
    recon = (
        t.beta * np.einsum("ij,ab->ijab", np.eye(k), np.eye(n))
        + np.einsum("ijk,kab->ijab", t.Q, x)
    )
    prod = np.einsum("iab,jbc->ijac", x, x)
    if max_abs(prod - recon) > 1e-9:
        raise ArithmeticError("product identity X_i X_j = beta delta I + Q.X failed")
    if max_abs(np.einsum("iik->k", t.d_sym)) > 1e-9:
        raise ArithmeticError("d tensor trace sum_i d_iik != 0")
    ff = np.einsum("ijm,ljm->il", t.f, t.f)
    if max_abs(ff - n * np.eye(k)) > 1e-8:
        raise ArithmeticError("f contraction f_ijm f_ljm != n delta")
    qq = np.einsum("ijm,ljm->il", t.Q, t.Q)
    if max_abs(qq + (4.0 / n) * np.eye(k)) > 1e-8:
        raise ArithmeticError("Q contraction Q_ijm Q_ljm != -(4/n) delta")


# ---------------------------------------------------------------------------
# su(2) spin-s representations, standard angular momentum conventions.

def spin_rep(two_s: int) -> GeneratorSet:
    """Spin-s generators (s = two_s / 2) in dimension d = 2s + 1.

    J3 = diag(s, s-1, ..., -s); ladder elements sqrt(s(s+1) - m(m+1));
    Z = s(s+1) and tr(J_a J_b) = (d Z / 3) delta_ab.
    """
    if two_s < 1:
        raise ValueError("two_s must be >= 1")
    d = two_s + 1
    s = two_s / 2.0
    lam = s * (s + 1.0)
    mvals = [s - i for i in range(d)]
    jp = np.zeros((d, d), dtype=np.complex128)
    for i in range(1, d):
        m = mvals[i]
        jp[i - 1, i] = math.sqrt(lam - m * (m + 1.0))
    jm = jp.conj().T
    j1 = (jp + jm) / 2.0
    j2 = (jp - jm) / 2.0j
    j3 = np.diag(np.array(mvals, dtype=np.complex128))
    return GeneratorSet(
        algebra=SU2_SPIN,
        d=d,
        k=3,
        generators=(j1, j2, j3),
        N=lam / 3.0,
        Z=lam,
    )


# ---------------------------------------------------------------------------
# Octonions and the derivation algebra g2.

# Oriented Fano lines: e_a e_b = e_c cyclically for each triple below,
# e_i^2 = -1, e_0 the unit.  This is the classic Cayley-Graves orientation;
# the derived 14-generator basis below is trace-orthogonal exactly in this
# convention (checked on construction).
OCTONION_TRIPLES = (
    (1, 2, 3),
    (1, 4, 5),
    (1, 7, 6),
    (2, 4, 6),
    (2, 5, 7),
    (3, 4, 7),
    (3, 6, 5),
)


def octonion_table() -> np.ndarray:
    """Multiplication tensor T with e_i e_j = sum_k T[i, j, k] e_k."""
    t = np.zeros((8, 8, 8))
    t[0, 0, 0] = 1.0
    for j in range(1, 8):
        t[0, j, j] = 1.0
        t[j, 0, j] = 1.0
        t[j, j, 0] = -1.0
    for a, b, c in OCTONION_TRIPLES:
        for i, j, k in ((a, b, c), (b, c, a), (c, a, b)):
            t[i, j, k] = 1.0
            t[j, i, k] = -1.0
    return t


def octonion_multiply(x, y, table: np.ndarray | None = None) -> np.ndarray:
    t = octonion_table() if table is None else table
    return np.einsum("i,j,ijk->k", np.asarray(x, dtype=float), np.asarray(y, dtype=float), t)


def octonion_derivation(x, y, table: np.ndarray | None = None) -> np.ndarray:
    """The derivation D(x, y): a -> [[x,y],a] - 3[x,y,a] as an 8x8 matrix.

    [a,b,c] = (ab)c - a(bc) is the associator; alternativity of the
    octonions makes D(x, y) a derivation of the algebra.
    """
    t = octonion_table() if table is None else table

    def mul(u, v):
        return np.einsum("i,j,ijk->k", u, v, t)

    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    com = mul(x, y) - mul(y, x)
    xy = mul(x, y)
    out = np.zeros((8, 8))
    eye = np.eye(8)
    for j in range(8):
        a = eye[j]
        term1 = mul(com, a) - mul(a, com)
        assoc = mul(xy, a) - mul(x, mul(y, a))
        out[:, j] = term1 - 3.0 * assoc
    return out


def _check_leibniz(dmat: np.ndarray, table: np.ndarray) -> None:
    eye = np.eye(8)
    for a in range(8):
        for b in range(8):
            prod = np.einsum("i,j,ijk->k", eye[a], eye[b], table)
            lhs = dmat @ prod
            rhs = (
                np.einsum("i,j,ijk->k", dmat @ eye[a], eye[b], table)
                + np.einsum("i,j,ijk->k", eye[a], dmat @ eye[b], table)
            )
            if max_abs(lhs - rhs) > 1e-10:
                raise ArithmeticError("derivation property D(ab) = D(a)b + a D(b) failed")


def g2_rep() -> GeneratorSet:
    """The 14 Hermitian 7x7 generators of g2 acting on imaginary octonions.

    Built from the scaled derivations d_ij = D(e_i, e_j)/2 via the
    six-plus-eight split adapted to the su(3) subalgebra fixing e_1:

        m_i = d_{1,i+1}                         (i = 1..6)
        h_1 = d_12 + 2 d_47   h_2 = d_13 - 2 d_46   h_3 = d_14 - 2 d_27
        h_4 = d_15 + 2 d_26   h_5 = d_16 - 2 d_25   h_6 = d_17 + 2 d_24
        h_7 = sqrt(3) d_23    h_8 = d_23 + 2 d_45

    beta = (i/sqrt(24)) ({m_1..m_6} + (1/sqrt(3)) {h_1..h_8}) gives
    tr(beta_a beta_b) = delta_ab / 2 and sum_i beta_i^2 = I_7.  The raw
    derivations are real antisymmetric; the factor i makes them Hermitian.
    """
    table = octonion_table()

    def dpair(i, j):
        m = octonion_derivation(np.eye(8)[i], np.eye(8)[j], table)
        _check_leibniz(m, table)
        if max_abs(m[0, :]) > 1e-12 or max_abs(m[:, 0]) > 1e-12:
            raise ArithmeticError("derivation does not preserve the imaginary subspace")
        return 0.5 * m[1:, 1:]

    d = {}
    for i, j in [(1, 2), (1, 3), (1, 4), (1, 5), (1, 6), (1, 7),
                 (2, 3), (2, 4), (2, 5), (2, 6), (2, 7), (4, 5), (4, 6), (4, 7)]:
        d[(i, j)] = dpair(i, j)

    m_basis = [d[(1, i)] for i in range(2, 8)]
    h_basis = [
        d[(1, 2)] + 2 * d[(4, 7)],
        d[(1, 3)] - 2 * d[(4, 6)],
        d[(1, 4)] - 2 * d[(2, 7)],
        d[(1, 5)] + 2 * d[(2, 6)],
        d[(1, 6)] - 2 * d[(2, 5)],
        d[(1, 7)] + 2 * d[(2, 4)],
        math.sqrt(3.0) * d[(2, 3)],
        d[(2, 3)] + 2 * d[(4, 5)],
    ]
    scale_m = 1j / math.sqrt(24.0)
    scale_h = 1j / math.sqrt(72.0)
    betas = [scale_m * b for b in m_basis] + [scale_h * b for b in h_basis]
    for b in betas:
        if not is_hermitian(b, 1e-12):
            raise ArithmeticError("scaled derivation failed to be Hermitian")
    return GeneratorSet(
        algebra=G2_FUNDAMENTAL,
        d=7,
        k=14,
        generators=tuple(betas),
        N=1.0 / 14.0,
        Z=1.0,
    )


# ---------------------------------------------------------------------------
# Clifford algebra, Euclidean form <x, y> = 2 sum_i x_i y_i, Weyl rep in d=4.

def clifford_bilinear(x, y) -> float:
    """The bilinear form fixed for the gamma matrices: <x,y> = 2 x.y."""
    return 2.0 * float(np.dot(np.asarray(x, dtype=float), np.asarray(y, dtype=float)))


def clifford_weyl() -> tuple[GeneratorSet, tuple]:
    """Four Hermitian 4x4 gamma matrices with {g(x), g(y)} = <x,y> I,
    plus the 16-element antisymmetrized product basis of gl(4).

    The block (Weyl) form is used: gamma_j = offdiag(-i sigma_j, i sigma_j)
    for j = 1..3 and gamma_4 = offdiag(I, I), so gamma_mu^2 = I and distinct
    gammas anticommute.
    """
    s = [
        np.array([[0, 1], [1, 0]], dtype=np.complex128),
        np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
        np.array([[1, 0], [0, -1]], dtype=np.complex128),
    ]
    z2 = np.zeros((2, 2), dtype=np.complex128)
    eye2 = np.eye(2, dtype=np.complex128)
    gammas = [np.block([[z2, -1j * sj], [1j * sj, z2]]) for sj in s]
    gammas.append(np.block([[z2, eye2], [eye2, z2]]))

    genset = GeneratorSet(
        algebra=CLIFFORD_WEYL,
        d=4,
        k=4,
        generators=tuple(gammas),
        N=1.0,
        Z=4.0,
    )
    basis = [np.eye(4, dtype=np.complex128)] + list(gammas)
    for r in (2, 3, 4):
        for idx in combinations(range(4), r):
            basis.append(_antisymmetrized([gammas[i] for i in idx]))
    gram = np.array([[np.trace(a.conj().T @ b) for b in basis] for a in basis])
    if np.linalg.matrix_rank(gram, tol=1e-8) != 16:
        raise ArithmeticError("antisymmetrized gamma basis is not linearly independent")
    return genset, tuple(basis)


def clifford_gamma(x, genset: GeneratorSet) -> np.ndarray:
    """gamma(x) = sum_i x_i gamma_i for a coefficient vector x."""
    x = np.asarray(x, dtype=float)
    if x.shape != (genset.k,):
        raise ValueError(f"expected a length-{genset.k} vector")
    return np.einsum("i,iab->ab", x, np.stack(genset.generators))


def _antisymmetrized(mats) -> np.ndarray:
    d = mats[0].shape[0]
    total = np.zeros((d, d), dtype=np.complex128)
    for perm in permutations(range(len(mats))):
        sign = _perm_sign(perm)
        acc = mats[perm[0]]
        for i in perm[1:]:
            acc = acc @ mats[i]
        total += sign * acc
    return total / math.factorial(len(mats))


def _perm_sign(perm) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


# Convenience dispatcher used by the CLI.
def build_algebra(algebra: str, n: int | None = None, two_s: int | None = None) -> GeneratorSet:
    if algebra == "su":
        if n is None:
            raise ValueError("--n is required for the su algebra")
        return gell_mann(n)
    if algebra == "spin":
        if two_s is None:
            raise ValueError("--two-s is required for the spin algebra")
        return spin_rep(two_s)
    if algebra == "g2":
        return g2_rep()
    if algebra == "clifford":
        return clifford_weyl()[0]
    raise ValueError(f"unknown algebra {algebra!r}")
