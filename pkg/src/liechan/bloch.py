"""Generalized Bloch parameterizations and manifold membership.

A coefficient vector v parameterizes rho(v) = (I + sum_i v_i X_i)/d; the
Bloch manifold is the set of v for which rho(v) is positive semidefinite.
Membership is decided two independent ways (eigenvalues, and signs of the
characteristic-polynomial coefficients), with closed forms for su(3) and
radius bounds for every generator set.  The module also covers the
second-order (v, w) parameterization used by the spin channels, its
inversion, density-matrix decomposition into symmetrized generator
monomials, and the pure-state characterizations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement, permutations

import numpy as np

from .matcore import (
    as_complex_matrix,
    char_poly_coeffs,
    derived_rng,
    max_abs,
    sym_product,
)
from .repgen import (
    SU_N_DEFINING,
    GeneratorSet,
    StructureTensors,
    g2_rep,
    spin_rep,
    structure_tensors,
)

MEMBERSHIP_TOL = 1e-10
SPAN_TOL = 1e-8


class SpanDeficientError(ValueError):
    """The requested monomial basis does not span the target matrix;
    raise max_rank."""


def bloch_rho(g: GeneratorSet, v) -> np.ndarray:
    """rho(v) = (I + sum_i v_i X_i)/d.  Hermitian with unit trace for any
    real v; positive semidefiniteness is exactly membership of v in the
    Bloch manifold and is not checked here."""
    v = np.asarray(v, dtype=float)
    if v.shape != (g.k,):
        raise ValueError(f"expected a length-{g.k} coefficient vector")
    acc = np.eye(g.d, dtype=np.complex128)
    for vi, x in zip(v, g.generators):
        acc = acc + vi * x
    return acc / g.d


def bloch_vector(g: GeneratorSet, rho) -> np.ndarray:
    """Invert rho = (I + v.X)/d on the generator span: v_a = tr(rho X_a)/N."""
    m = as_complex_matrix(rho)
    return np.array([np.trace(m @ x).real / g.N for x in g.generators])


def membership_eig(g: GeneratorSet, v) -> bool:
    """v is a valid Bloch vector iff min eig of rho(v) >= -1e-10."""
    ev = np.linalg.eigvalsh(bloch_rho(g, v))
    return bool(ev[0] >= -MEMBERSHIP_TOL)


def membership_charpoly(g: GeneratorSet, v) -> bool:
    """Same membership decided by Descartes' rule of signs: all
    characteristic-polynomial coefficients of rho(v) nonnegative."""
    coeffs = char_poly_coeffs(bloch_rho(g, v))
    return bool(coeffs.min() >= -MEMBERSHIP_TOL)


def norm_bound(g: GeneratorSet) -> float:
    """(d-1)/N: the squared-radius bound implied by tr(rho^2) <= 1."""
    return (g.d - 1) / g.N


def su3_membership_closed(v, tensors: StructureTensors | None = None) -> bool:
    """Exact su(3) Bloch manifold: v^2 <= min(3, 1 + det(v.lambda)), with
    det(v.lambda) = (2/3) d_ijk v_i v_j v_k."""
    v = np.asarray(v, dtype=float)
    if v.shape != (8,):
        raise ValueError("expected a length-8 vector")
    t = tensors if tensors is not None else _su3_tensors()
    det = (2.0 / 3.0) * float(np.einsum("ijk,i,j,k->", t.d_sym, v, v, v))
    vv = float(v @ v)
    return vv <= min(3.0, 1.0 + det) + MEMBERSHIP_TOL


_SU3_TENSORS: StructureTensors | None = None


def _su3_tensors() -> StructureTensors:
    global _SU3_TENSORS
    if _SU3_TENSORS is None:
        _SU3_TENSORS = structure_tensors(3)
    return _SU3_TENSORS


# ---------------------------------------------------------------------------
# Cartan polytope: the weight half-spaces v . h^j >= -1.

def cartan_indices(g: GeneratorSet) -> list[int]:
    """Indices of the diagonal (simultaneously diagonalized) generators."""
    out = []
    for a, x in enumerate(g.generators):
        if max_abs(x - np.diag(np.diag(x))) <= 1e-12:
            out.append(a)
    return out


def weight_vectors(g: GeneratorSet, indices) -> np.ndarray:
    """Rows h^j: the j-th diagonal entries of the chosen Cartan generators."""
    for a in indices:
        x = g.generators[a]
        if max_abs(x - np.diag(np.diag(x))) > 1e-12:
            raise ValueError(f"generator {a} is not diagonal; Cartan slots must be")
    return np.array([[g.generators[a][j, j].real for a in indices] for j in range(g.d)])


def cartan_polytope_membership(g: GeneratorSet, v_cartan, indices=None) -> bool:
    """Membership of a vector supported on the Cartan slots, via the
    half-space conditions 1 + v . h^j >= 0 over the weights h^j.  This
    polytope is always contained in the full Bloch manifold."""
    v = np.asarray(v_cartan, dtype=float)
    if indices is None:
        indices = cartan_indices(g)[: v.shape[0]]
    if len(indices) != v.shape[0]:
        raise ValueError(
            f"need {v.shape[0]} diagonal Cartan generators, found {len(indices)}"
        )
    h = weight_vectors(g, indices)
    return bool((1.0 + h @ v).min() >= -MEMBERSHIP_TOL)


def embed_cartan(g: GeneratorSet, v_cartan, indices=None) -> np.ndarray:
    """The full k-vector with v_cartan placed on the Cartan slots."""
    v = np.asarray(v_cartan, dtype=float)
    if indices is None:
        indices = cartan_indices(g)[: v.shape[0]]
    if len(indices) != v.shape[0]:
        raise ValueError("not enough Cartan slots")
    full = np.zeros(g.k)
    for value, a in zip(v, indices):
        full[a] = value
    return full


# ---------------------------------------------------------------------------
# Second-order (v, w) parameterization for spin representations.

def sym_pair(a, b) -> np.ndarray:
    """J_(a J_b) = (J_a J_b + J_b J_a)/2."""
    return sym_product([a, b])


def rho_vw(two_s: int, v, w) -> np.ndarray:
    """rho = v.J + sum_ab w_ab J_(a J_b) for the spin-s generators.

    The trace comes entirely from the w term; unit trace requires
    tr(w) = 3/(d lam) with lam = s(s+1), which is enforced here.
    Positivity is not guaranteed.
    """
    g = spin_rep(two_s)
    d = g.d
    lam = g.Z
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    if v.shape != (3,) or w.shape != (3, 3):
        raise ValueError("expected a 3-vector v and 3x3 tensor w")
    if max_abs(w - w.T) > 1e-10:
        raise ValueError("w must be symmetric")
    if abs(np.trace(w) - 3.0 / (d * lam)) > 1e-10:
        raise ValueError(f"tr(w) must equal 3/(d lam) = {3.0 / (d * lam)}")
    return _rho_from_vw(g.generators, v, w)


def _rho_from_vw(gens, v, w) -> np.ndarray:
    d = gens[0].shape[0]
    acc = np.zeros((d, d), dtype=np.complex128)
    for a in range(3):
        acc += v[a] * gens[a]
    stack = np.stack(gens)
    prods = np.einsum("aij,bjk->abik", stack, stack)
    acc += np.einsum("ab,abik->ik", (np.asarray(w) + np.asarray(w).T) / 2.0, prods)
    return acc


def extract_vw(rho, two_s: int, check: bool = True) -> tuple[np.ndarray, np.ndarray]:
    """Invert rho = v.J + sum w_ab J_(a J_b) for a unit-trace rho:

        v_a  = (3/(d lam)) tr(rho J_a)
        w_jk = (30/(lam d (d^2-4))) tr(rho J_(j J_k))
               - ((2 lam + 1)/(d^2-4)) tr(w) delta_jk

    with tr(w) = 3/(d lam).  Only meaningful for d >= 3 (for d = 2 the
    symmetrized pair products collapse onto the identity).  With
    ``check=True`` a reconstruction residual above 1e-8 raises
    SpanDeficientError, signaling a rho outside the (v, w) span.
    """
    if two_s < 2:
        raise ValueError("extract_vw requires two_s >= 2 (dimension >= 3)")
    g = spin_rep(two_s)
    m = as_complex_matrix(rho)
    if m.shape != (g.d, g.d):
        raise ValueError("dimension mismatch")
    d = g.d
    lam = g.Z
    v = np.array([(3.0 / (d * lam)) * np.trace(m @ j).real for j in g.generators])
    trw = 3.0 / (d * lam) * np.trace(m).real
    w = np.empty((3, 3))
    for j in range(3):
        for k in range(j, 3):
            pair = sym_pair(g.generators[j], g.generators[k])
            val = (30.0 / (lam * d * (d * d - 4.0))) * np.trace(m @ pair).real
            if j == k:
                val -= (2.0 * lam + 1.0) / (d * d - 4.0) * trw
            w[j, k] = w[k, j] = val
    if check:
        resid = max_abs(m - _rho_from_vw(g.generators, v, w))
        if resid > SPAN_TOL:
            raise SpanDeficientError(
                f"rho lies outside the span of {{J_a, J_(a J_b)}} (residual {resid:.3e})"
            )
    return v, w


# ---------------------------------------------------------------------------
# Decomposition of a density matrix into symmetrized generator monomials.

@dataclass(frozen=True, eq=False)
class BlochState:
    """Coefficient tensors of rho = I/d + v.X + w.XX + u.XXX (+ residual).

    The tensors are fully symmetric; w and u are None when the requested
    rank was lower.  ``residual`` is the max-norm error of the fit;
    ``trace_parts`` records tr(T_r)/d for the rank-r term, separating each
    term into its traceless piece plus a multiple of the identity.
    """

    algebra: str
    d: int
    k: int
    v: np.ndarray = field(repr=False)
    w: np.ndarray | None = field(repr=False)
    u: np.ndarray | None = field(repr=False)
    residual: float
    trace_parts: dict

    def to_json(self) -> dict:
        def pack(t):
            if t is None:
                return None
            return {"shape": list(t.shape), "data": [float(x) for x in t.ravel()]}

        return {
            "algebra": self.algebra,
            "d": self.d,
            "k": self.k,
            "v": pack(self.v),
            "w": pack(self.w),
            "u": pack(self.u),
            "residual": self.residual,
            "trace_parts": {str(r): val for r, val in self.trace_parts.items()},
        }


def _monomials(g: GeneratorSet, rank: int):
    for ms in combinations_with_replacement(range(g.k), rank):
        if rank == 1:
            yield ms, g.generators[ms[0]]
        else:
            yield ms, sym_product([g.generators[i] for i in ms])


def decompose_density(rho, g: GeneratorSet, max_rank: int = 2) -> BlochState:
    """Least-squares coefficients of rho - I/d in the symmetrized monomial
    basis of ranks 1..max_rank (minimum-norm solution when the monomials
    are dependent).  Raises SpanDeficientError if the fit residual exceeds
    1e-8."""
    if not 1 <= max_rank <= 3:
        raise ValueError("max_rank must be 1, 2 or 3")
    m = as_complex_matrix(rho)
    if m.shape != (g.d, g.d):
        raise ValueError("dimension mismatch")
    target = m - (np.trace(m) / g.d) * np.eye(g.d)
    cols, keys = [], []
    for r in range(1, max_rank + 1):
        for ms, mono in _monomials(g, r):
            cols.append(mono.ravel())
            keys.append(ms)
    a = np.stack(cols, axis=1)
    design = np.vstack([a.real, a.imag])
    rhs = np.concatenate([target.ravel().real, target.ravel().imag])
    coeffs, *_ = np.linalg.lstsq(design, rhs, rcond=None)
    recon = (a @ coeffs).reshape(g.d, g.d)
    residual = max_abs(target - recon)
    if residual > SPAN_TOL:
        raise SpanDeficientError(
            f"rank <= {max_rank} monomials do not span the target "
            f"(residual {residual:.3e}); raise max_rank"
        )
    tensors: dict[int, np.ndarray] = {}
    for r in range(1, max_rank + 1):
        tensors[r] = np.zeros((g.k,) * r)
    trace_parts: dict[int, float] = {r: 0.0 for r in range(1, max_rank + 1)}
    for (ms, c) in zip(keys, coeffs):
        r = len(ms)
        perms = set(permutations(ms))
        for perm in perms:
            tensors[r][perm] = c / len(perms)
    for r in range(1, max_rank + 1):
        term = np.zeros((g.d, g.d), dtype=np.complex128)
        for ms, mono in _monomials(g, r):
            perms = set(permutations(ms))
            term += tensors[r][ms] * len(perms) * mono
        trace_parts[r] = float(np.trace(term).real / g.d)
    return BlochState(
        algebra=g.algebra,
        d=g.d,
        k=g.k,
        v=tensors[1],
        w=tensors.get(2),
        u=tensors.get(3),
        residual=float(residual),
        trace_parts=trace_parts,
    )


def reconstruct(state: BlochState, g: GeneratorSet) -> np.ndarray:
    """I/d plus the tensor contractions of the BlochState coefficients."""
    out = np.eye(g.d, dtype=np.complex128) / g.d
    stack = np.stack(g.generators)
    out += np.einsum("a,aij->ij", state.v, stack)
    if state.w is not None:
        prods = np.einsum("aij,bjk->abik", stack, stack)
        out += np.einsum("ab,abik->ik", state.w, prods)
    if state.u is not None:
        prods3 = np.einsum("aij,bjk,ckl->abcil", stack, stack, stack)
        out += np.einsum("abc,abcil->il", state.u, prods3)
    return out


# ---------------------------------------------------------------------------
# Pure states.

def pure_bloch_test(g: GeneratorSet, v, tensors: StructureTensors | None = None) -> bool:
    """Purity test for a Bloch state of the su(n) defining representation:

        rho(v)^2 = rho(v)   iff   1 + beta v^2 = d  and
                                  sum_ab v_a v_b Q_abc = (d - 2) v_c.

    Both conditions come from squaring rho(v) = (I + v.X)/d with the product
    structure X_a X_b = beta delta I + Q.X, which only the defining su(n)
    representation has here; at d = 2 the second condition is vacuous and
    the first reduces to v^2 = 1, the Bloch sphere boundary.
    """
    if g.algebra != SU_N_DEFINING:
        raise ValueError("pure_bloch_test needs the su(n) defining representation")
    v = np.asarray(v, dtype=float)
    if v.shape != (g.k,):
        raise ValueError(f"expected a length-{g.k} vector")
    t = tensors if tensors is not None else structure_tensors(g.d)
    cond1 = abs(1.0 + t.beta * float(v @ v) - g.d) <= 1e-9 * g.d
    contraction = np.einsum("a,b,abc->c", v, v, t.Q)
    if max_abs(contraction.imag) > 1e-9:
        return False
    cond2 = max_abs(contraction.real - (g.d - 2.0) * v) <= 1e-9 * max(1.0, max_abs(v))
    return bool(cond1 and cond2)


def spin1_s_basis() -> tuple:
    """The antisymmetric spin-1 generators (S_a)_bc = -i eps_abc."""
    s = [np.zeros((3, 3), dtype=np.complex128) for _ in range(3)]
    for (a, b, c) in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        s[a][b, c] = -1j
        s[a][c, b] = 1j
    return tuple(s)


def s_to_j_unitary() -> np.ndarray:
    """U with S_a = U J_a U^dag relating the antisymmetric basis to the
    standard ladder-basis spin-1 generators."""
    r = 1.0 / math.sqrt(2.0)
    return np.array(
        [[-r, 0, r], [-1j * r, 0, -1j * r], [0, 1, 0]], dtype=np.complex128
    )


def spin1_pure_family(w22: float, w33: float, signs=(1, 1, 1)) -> np.ndarray:
    """Pure second-order spin-1 states in the antisymmetric basis.

    For (w22, w33) inside the triangle w22 < 1/2, w33 < 1/2,
    w22 + w33 > 0, the projector P_ij = s_i s_j a_i a_j with

        a = (sqrt(w22 + w33), sqrt(1/2 - w22), sqrt(1/2 - w33))

    satisfies P^2 = P and tr P = 1.  ``signs`` flips components of a,
    which flips two off-diagonal pairs of P (or none).
    """
    if not (w22 < 0.5 and w33 < 0.5 and w22 + w33 > 0.0):
        raise ValueError("(w22, w33) must satisfy w22 < 1/2, w33 < 1/2, w22 + w33 > 0")
    signs = np.asarray(signs, dtype=float)
    if signs.shape != (3,) or not np.all(np.abs(signs) == 1.0):
        raise ValueError("signs must be three values of +-1")
    a = signs * np.array(
        [math.sqrt(w22 + w33), math.sqrt(0.5 - w22), math.sqrt(0.5 - w33)]
    )
    return np.outer(a, a).astype(np.complex128)


def spin1_pure_omega(omega: float) -> np.ndarray:
    """The one-parameter family of pure second-order spin-1 states

        P(w) = [[1/2 + w, 0, sqrt(1 - 4w^2)/2],
                [0, 0, 0],
                [sqrt(1 - 4w^2)/2, 0, 1/2 - w]]

    for omega in (-1/2, 1/2)."""
    if not -0.5 < omega < 0.5:
        raise ValueError("omega must lie in (-1/2, 1/2)")
    off = 0.5 * math.sqrt(1.0 - 4.0 * omega * omega)
    return np.array(
        [[0.5 + omega, 0, off], [0, 0, 0], [off, 0, 0.5 - omega]],
        dtype=np.complex128,
    )


def pure_from_psi(psi) -> tuple[np.ndarray, np.ndarray]:
    """(v, w) of the pure state |psi><psi| in the antisymmetric basis:

        w_ab = delta_ab / 2 - Re(psi_a conj(psi_b)),   v = psi_R x psi_I.

    ||v|| <= 1/2 always; reconstructing v.S + w.SS returns |psi><psi|.
    """
    psi = np.asarray(psi, dtype=np.complex128).ravel()
    if psi.shape != (3,):
        raise ValueError("expected a 3-component state vector")
    if abs(np.linalg.norm(psi) - 1.0) > 1e-10:
        raise ValueError("psi must be normalized")
    w = 0.5 * np.eye(3) - np.real(np.outer(psi, psi.conj()))
    v = np.cross(psi.real, psi.imag)
    return v, w


def rho_vw_s_basis(v, w) -> np.ndarray:
    """rho = v.S + sum w_ab S_(a S_b) in the antisymmetric spin-1 basis."""
    return _rho_from_vw(spin1_s_basis(), np.asarray(v, float), np.asarray(w, float))


# ---------------------------------------------------------------------------
# g2 Bloch-radius refinement via characteristic-polynomial coefficients.

@dataclass(frozen=True)
class RadiusBound:
    coefficient_index: int
    v_squared_bound: float
    v_bound: float


def g2_bound_refine(g: GeneratorSet | None = None) -> list[RadiusBound]:
    """Successive bounds on the g2 Bloch radius from a_2, a_3, a_4 >= 0.

    The power traces of v.beta are measured from the generators (odd powers
    vanish; tr (v.beta)^2 and tr (v.beta)^4 are proportional to v^2 and v^4
    with simple rational ratios), then the Newton recursion is run exactly
    on polynomials in x = v^2.  The chain is x <= 84, x <= 28, and finally
    x <= 80 - 8 sqrt(65), i.e. |v| <= 3.94.
    """
    gset = g if g is not None else g2_rep()
    if gset.d != 7 or gset.k != 14:
        raise ValueError("expected the 7-dimensional g2 generator set")
    kappa2, kappa4 = _measured_trace_ratios(gset)
    d = 7
    # c_q(x) = 7^{-q} sum_j binom(q, j) t_j(x), t_0 = 7, t_2 = kappa2 x,
    # t_4 = kappa4 x^2, odd traces zero.
    tpolys = {
        0: [Fraction(7)],
        1: [Fraction(0)],
        2: [Fraction(0), kappa2],
        3: [Fraction(0)],
        4: [Fraction(0), Fraction(0), kappa4],
    }
    cpolys = {}
    for q in range(1, 5):
        poly = [Fraction(0)] * 3
        for j in range(0, q + 1):
            tj = tpolys.get(j, [Fraction(0)])
            coef = Fraction(math.comb(q, j), d**q)
            for power, val in enumerate(tj):
                poly[power] += coef * val
        cpolys[q] = poly
    apolys = {0: [Fraction(1)]}
    for k in range(1, 5):
        acc = [Fraction(0)] * 3
        for q in range(1, k + 1):
            term = _poly_mul(cpolys[q], apolys[k - q])
            sign = 1 if (q - 1) % 2 == 0 else -1
            for power in range(3):
                acc[power] += sign * term[power]
        apolys[k] = [x / k for x in acc]
    bounds = []
    for k in (2, 3, 4):
        x_max = _largest_nonneg_root(apolys[k])
        bounds.append(
            RadiusBound(
                coefficient_index=k,
                v_squared_bound=x_max,
                v_bound=math.sqrt(x_max),
            )
        )
    return bounds


def _measured_trace_ratios(gset: GeneratorSet) -> tuple[Fraction, Fraction]:
    stack = np.stack(gset.generators)
    r2s, r4s = [], []
    for i in range(6):
        rng = derived_rng(97, i)
        v = rng.normal(size=14)
        x = float(v @ v)
        vb = np.einsum("a,aij->ij", v, stack)
        powers = [np.trace(np.linalg.matrix_power(vb, q)).real for q in range(1, 6)]
        if max(abs(powers[0]), abs(powers[2]), abs(powers[4])) > 1e-9 * max(1.0, x**2):
            raise ArithmeticError("odd trace powers of v.beta do not vanish")
        r2s.append(powers[1] / x)
        r4s.append(powers[3] / (x * x))
    k2 = Fraction(float(np.mean(r2s))).limit_denominator(64)
    k4 = Fraction(float(np.mean(r4s))).limit_denominator(64)
    if abs(float(k2) - np.mean(r2s)) > 1e-9 or abs(float(k4) - np.mean(r4s)) > 1e-9:
        raise ArithmeticError("trace ratios are not simple rationals")
    return k2, k4


def _poly_mul(a, b):
    # polynomials in x = v^2 up to degree 2; higher terms never arise for
    # the coefficient chain a_2..a_4 and would signal a bookkeeping bug
    out = [Fraction(0)] * 3
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            if ai * bj == 0:
                continue
            if i + j >= 3:
                raise ArithmeticError("unexpected degree in radius-bound recursion")
            out[i + j] += ai * bj
    return out


def _largest_nonneg_root(poly) -> float:
    """Largest x with poly >= 0 on [0, x], for polys positive at x = 0."""
    c0, c1, c2 = (poly + [Fraction(0)] * 3)[:3]
    if c2 == 0:
        if c1 >= 0:
            raise ArithmeticError("coefficient condition never binds")
        return float(-c0 / c1)
    disc = c1 * c1 - 4 * c0 * c2
    if disc < 0:
        raise ArithmeticError("coefficient condition never binds")
    root_disc = math.sqrt(float(disc))
    r1 = (-float(c1) - root_disc) / (2.0 * float(c2))
    r2 = (-float(c1) + root_disc) / (2.0 * float(c2))
    candidates = sorted(r for r in (r1, r2) if r > 0)
    if not candidates:
        raise ArithmeticError("coefficient condition never binds")
    return candidates[0]


# ---------------------------------------------------------------------------
# Sampling and empirical searches.

def sample_bloch_vectors(g: GeneratorSet, n: int, seed: int = 0) -> np.ndarray:
    """n vectors uniform in the bounding ball of radius sqrt((d-1)/N),
    which is guaranteed to contain the whole Bloch manifold."""
    radius = math.sqrt(norm_bound(g))
    out = np.empty((n, g.k))
    for i in range(n):
        rng = derived_rng(seed, i)
        direction = rng.normal(size=g.k)
        direction /= np.linalg.norm(direction)
        out[i] = radius * rng.uniform() ** (1.0 / g.k) * direction
    return out


def spin_vw_purity_search(two_s: int, n_starts: int = 40, seed: int = 0) -> float:
    """Empirical minimum of ||rho^2 - rho||_max over unit-trace (v, w)
    states of the spin-s representation (random restarts plus a crude
    local descent).  Reported as an observation only; a large value
    suggests, but does not prove, that no pure state lies in the span.
    """
    g = spin_rep(two_s)
    d, lam = g.d, g.Z
    base_tr = 3.0 / (d * lam)

    def purity_residual(params: np.ndarray) -> float:
        v = params[:3]
        sym = np.zeros((3, 3))
        sym[np.triu_indices(3)] = params[3:]
        w = (sym + sym.T) / 2.0
        w += (base_tr - np.trace(w)) / 3.0 * np.eye(3)
        rho = _rho_from_vw(g.generators, v, w)
        return max_abs(rho @ rho - rho)

    best = math.inf
    for start in range(n_starts):
        rng = derived_rng(seed, start)
        params = rng.normal(size=9) * 0.3
        value = purity_residual(params)
        step = 0.25
        while step > 1e-4:
            improved = False
            for _ in range(40):
                trial = params + rng.normal(size=9) * step
                tv = purity_residual(trial)
                if tv < value:
                    params, value = trial, tv
                    improved = True
            if not improved:
                step *= 0.5
        best = min(best, value)
    return best
