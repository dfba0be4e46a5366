"""Kraus channels built from generator sets, and their diagnostics.

The central map is

    rho -> (1 - p) rho + (p / Z) sum_i X_i rho X_i,

realized by Kraus operators M_0 = sqrt(1-p) I and M_i = sqrt(p/Z) X_i for a
generator set with Casimir constant Z.  On top of construction and
application this module provides: channel extension and the double channel,
depolarizing detection, the closed-form spin-s action on (v, w)
coefficients, discovery of r -> r-2 product identities and the critical
error probabilities they induce, minimal output entropy of the su(n)
channel, maximal l_q norms, and the Werner-Holevo map.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations_with_replacement, permutations
from typing import Sequence

import numpy as np
from numpy.polynomial import polynomial as npoly

from .matcore import (
    DensityMatrix,
    as_complex_matrix,
    as_density,
    derived_rng,
    matrix_from_json,
    matrix_to_json,
    max_abs,
    random_density,
    random_pure_statevector,
    sym_product,
)
from .repgen import GeneratorSet, clifford_gamma

NORMALIZATION_TOL = 1e-9
DEPOLARIZING_FIT_TOL = 1e-8
SPECIAL_SPREAD_TOL = 1e-8
CRITICAL_MAP_TOL = 1e-8


class POutOfRangeError(ValueError):
    """Error probability outside [0, 1]; the Kraus family cannot be
    normalized and the map is not trace preserving."""


def _readonly_ops(ops) -> tuple:
    out = []
    for m in ops:
        a = np.array(m, dtype=np.complex128, copy=True)
        a.flags.writeable = False
        out.append(a)
    return tuple(out)


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """A trace-preserving channel given by its Kraus operators.

    ``p`` is the error probability for channels of the (1-p, p/Z) form and
    None for channels without one (extensions, double channels, Clifford
    vector channels).  Normalization sum_mu M_mu^dag M_mu = I is enforced
    within 1e-9 on construction.
    """

    ops: tuple = field(repr=False)
    p: float | None
    source: str

    def __post_init__(self):
        ops = _readonly_ops(as_complex_matrix(m) for m in self.ops)
        object.__setattr__(self, "ops", ops)
        if not ops:
            raise ValueError("a channel needs at least one Kraus operator")
        d = ops[0].shape[0]
        if any(m.shape != (d, d) for m in ops):
            raise ValueError("Kraus operators must share one dimension")
        total = np.zeros((d, d), dtype=np.complex128)
        for m in ops:
            total += m.conj().T @ m
        dev = max_abs(total - np.eye(d))
        if dev > NORMALIZATION_TOL:
            raise ValueError(f"normalization sum M^dag M = I violated by {dev:.3e}")
        if self.p is not None and not 0.0 <= self.p <= 1.0:
            raise POutOfRangeError(f"p = {self.p} lies outside [0, 1]")

    @property
    def dim(self) -> int:
        return self.ops[0].shape[0]

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "source": self.source,
            "ops": [matrix_to_json(m) for m in self.ops],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "KrausChannel":
        return cls(
            ops=tuple(matrix_from_json(m) for m in obj["ops"]),
            p=None if obj["p"] is None else float(obj["p"]),
            source=obj["source"],
        )


def build_channel(g: GeneratorSet, p: float) -> KrausChannel:
    """Kraus operators sqrt(1-p) I and sqrt(p/Z) X_i for the generator set."""
    if not 0.0 <= p <= 1.0:
        raise POutOfRangeError(
            f"p = {p} lies outside [0, 1]; no normalization constant makes "
            "the map trace preserving for such p"
        )
    ops = []
    if p < 1.0:
        ops.append(math.sqrt(1.0 - p) * np.eye(g.d, dtype=np.complex128))
    if p > 0.0:
        scale = math.sqrt(p / g.Z)
        ops.extend(scale * x for x in g.generators)
    return KrausChannel(ops=tuple(ops), p=float(p), source=g.algebra)


def apply_matrix(ch: KrausChannel, m) -> np.ndarray:
    """The channel as a linear map on matrices (no density-matrix checks)."""
    m = as_complex_matrix(m)
    if m.shape != (ch.dim, ch.dim):
        raise ValueError(f"dimension mismatch: channel {ch.dim}, input {m.shape}")
    out = np.zeros_like(m)
    for k in ch.ops:
        out += k @ m @ k.conj().T
    return out


def apply(ch: KrausChannel, rho) -> DensityMatrix:
    """Apply to a density matrix; the output is re-validated."""
    rho = as_density(rho)
    return DensityMatrix(apply_matrix(ch, rho.matrix))


def su_n_factor(p: float, n: int) -> float:
    """Depolarizing factor of the su(n) channel: ((1-p) n^2 - 1)/(n^2 - 1)."""
    if n < 2:
        raise ValueError("n must be >= 2")
    return ((1.0 - p) * n * n - 1.0) / (n * n - 1.0)


def su_n_critical(n: int) -> float:
    """The error probability 1 - 1/n^2 at which the su(n) channel sends
    every input to the maximally mixed state."""
    if n < 2:
        raise ValueError("n must be >= 2")
    return 1.0 - 1.0 / (n * n)


def detect_depolarizing(
    ch: KrausChannel, n_samples: int = 32, seed: int = 0
) -> float | None:
    """Fit lambda with ch(rho) = lambda rho + (1-lambda)/d I, or None.

    A depolarizing channel is affine, so one generic sample determines
    lambda; the fit is validated on the remaining samples within 1e-8.
    """
    d = ch.dim
    eye = np.eye(d)
    lam = None
    for i in range(n_samples):
        rng = derived_rng(seed, i)
        rho = random_density(d, rng).matrix
        out = apply_matrix(ch, rho)
        if lam is None:
            dev_in = rho - eye / d
            denom = float(np.vdot(dev_in, dev_in).real)
            if denom < 1e-14:
                continue
            lam = float(np.vdot(dev_in, out - eye / d).real) / denom
        if max_abs(out - lam * rho - (1.0 - lam) / d * eye) > DEPOLARIZING_FIT_TOL:
            return None
    return lam


# ---------------------------------------------------------------------------
# Closed-form spin-s action on (v, w) coefficients.

def spin_channel_vw(two_s: int, p: float, v, w) -> tuple[np.ndarray, np.ndarray]:
    """Action of the spin-s channel on rho = v.J + sum w_ab J_(a J_b):

        v  -> (1 - p/lam) v
        w  -> (1 - 3p/lam) w + (p tr(w)/lam) delta

    with lam = s(s+1).  Requires tr(w) = 3/(d lam), the unit-trace
    normalization; for s = 1 this specializes to v' = (1 - p/2) v and
    w' = (1 - 3p/2) w + (p/4) delta.
    """
    if two_s < 1:
        raise ValueError("two_s must be >= 1")
    if not 0.0 <= p <= 1.0:
        raise POutOfRangeError(f"p = {p} lies outside [0, 1]")
    d = two_s + 1
    s = two_s / 2.0
    lam = s * (s + 1.0)
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    if v.shape != (3,) or w.shape != (3, 3):
        raise ValueError("expected a 3-vector v and a 3x3 tensor w")
    if max_abs(w - w.T) > 1e-10:
        raise ValueError("w must be symmetric")
    trw = float(np.trace(w))
    if abs(trw - 3.0 / (d * lam)) > 1e-10:
        raise ValueError(
            f"tr(w) = {trw} violates the unit-trace condition 3/(d lam) = {3.0 / (d * lam)}"
        )
    v2 = (1.0 - p / lam) * v
    w2 = (1.0 - 3.0 * p / lam) * w + (p * trw / lam) * np.eye(3)
    return v2, w2


@dataclass(frozen=True)
class WIteration:
    """n-fold spin-1 channel action on a second-order ("W") state.

    The map is w -> F(p) (delta - 6 w) + w where F is the degree-n
    polynomial built from F_next(p) = (1 - 3p/2) F(p) + p/4 starting at
    F = 0 for zero applications (so one application gives F = p/4, which
    reproduces w -> (1 - 3p/2) w + (p/4) delta).  In closed form
    F(p) = (1 - (1 - 3p/2)^n) / 6.
    """

    n: int
    p: float
    coefficients: tuple  # ascending powers of p
    value: float

    def apply_to(self, w) -> np.ndarray:
        w = np.asarray(w, dtype=float)
        if w.shape != (3, 3):
            raise ValueError("expected a 3x3 tensor")
        return self.value * (np.eye(3) - 6.0 * w) + w


def iterate_w_polynomial(p: float, n: int) -> WIteration:
    if n < 1:
        raise ValueError("n must be >= 1")
    coeffs = np.zeros(1)
    step = np.array([1.0, -1.5])       # 1 - 3p/2
    inhom = np.array([0.0, 0.25])      # p/4
    for _ in range(n):
        coeffs = npoly.polyadd(npoly.polymul(step, coeffs), inhom)
    value = float(npoly.polyval(p, coeffs))
    return WIteration(n=n, p=float(p), coefficients=tuple(float(c) for c in coeffs), value=value)


# ---------------------------------------------------------------------------
# Extensions.

def extend(base_ops: Sequence, ext_ops: Sequence, at_index: int) -> KrausChannel:
    """Extend the channel given by ``base_ops`` (the B set) using the
    normalized family ``ext_ops`` (the A set) on its element at ``at_index``:
    the result is {A_0, ..., A_{r-1} without A_r} + {B_j A_r}.

    Both inputs must satisfy the normalization condition; the output then
    does as well, since sum (B_j A)^dag (B_j A) = A^dag A.
    """
    a_ops = [as_complex_matrix(m) for m in ext_ops]
    b_ops = [as_complex_matrix(m) for m in base_ops]
    for name, ops in (("base", b_ops), ("extension", a_ops)):
        d = ops[0].shape[0]
        total = sum(m.conj().T @ m for m in ops)
        if max_abs(total - np.eye(d)) > NORMALIZATION_TOL:
            raise ValueError(f"{name} operator set is not normalized")
    if not 0 <= at_index < len(a_ops):
        raise ValueError("at_index out of range")
    pivot = a_ops[at_index]
    new_ops = a_ops[:at_index] + [b @ pivot for b in b_ops] + a_ops[at_index + 1:]
    return KrausChannel(ops=tuple(new_ops), p=None, source="extended")


def double_channel(g: GeneratorSet) -> KrausChannel:
    """Kraus operators {X_i X_j / Z}: the base channel extended by itself
    on every element."""
    z = g.Z
    ops = [(x @ y) / z for x in g.generators for y in g.generators]
    return KrausChannel(ops=tuple(ops), p=None, source=f"{g.algebra}:double")


def clifford_vector_channel(g: GeneratorSet, xs: Sequence) -> KrausChannel:
    """The channel rho -> c^(-1) sum_i gamma(x_i) rho gamma(x_i) for nonzero
    vectors x_i, with c the scalar defined by sum_i gamma(x_i)^2 = c I.

    With the form <x,y> = 2 x.y fixed here, {gamma(x), gamma(y)} = <x,y> I
    gives gamma(x)^2 = (<x,x>/2) I, so c = sum_i <x_i,x_i>/2; dividing by c
    is exactly what makes the map trace preserving.  c is measured from the
    matrices rather than assumed.
    """
    vecs = [np.asarray(x, dtype=float) for x in xs]
    if not vecs:
        raise ValueError("at least one vector is required")
    gammas = [clifford_gamma(x, g) for x in vecs]
    square_sum = sum(gm @ gm for gm in gammas)
    total = np.trace(square_sum).real / g.d
    if total <= 0 or max_abs(square_sum - total * np.eye(g.d)) > 1e-10:
        raise ValueError("sum of squared gamma(x_i) is not a positive scalar")
    scale = 1.0 / math.sqrt(total)
    ops = [scale * gm for gm in gammas]
    return KrausChannel(ops=tuple(ops), p=None, source="clifford_weyl:vectors")


# ---------------------------------------------------------------------------
# Product identity discovery: sum_i X_i M X_i = f_M I + g_M M for the
# symmetrized rank-r monomials M.

@dataclass(frozen=True, eq=False)
class IdentityReport:
    """Fit of sum_i X_i M X_i = f_M I + g_M M over all symmetrized rank-r
    monomials M.

    ``special`` is True when a single scalar g works for every monomial
    (within 1e-8 across the monomials whose g is numerically identifiable);
    ``g`` is that scalar, or None if no monomial pins it down.  ``residual``
    is the worst per-monomial max-norm fit error.  ``f_tensor``/``g_tensor``
    hold the per-monomial coefficients at every index permutation.
    """

    rank: int
    k: int
    special: bool
    g: float | None
    residual: float
    f_tensor: np.ndarray = field(repr=False)
    g_tensor: np.ndarray = field(repr=False)
    multisets: tuple = field(repr=False)
    informative: tuple = field(repr=False)
    _monomials: tuple = field(repr=False)
    _transforms: tuple = field(repr=False)

    def residual_with(self, g0: float) -> float:
        """Worst fit error when g is pinned to g0 and only f re-fitted."""
        worst = 0.0
        for m, t in zip(self._monomials, self._transforms):
            d = m.shape[0]
            f0 = (np.trace(t).real - g0 * np.trace(m).real) / d
            worst = max(worst, max_abs(t - f0 * np.eye(d) - g0 * m))
        return worst

    def to_json(self) -> dict:
        def pack(t):
            # entries for monomials that cannot pin a coefficient are NaN
            # in the arrays; serialize those as null
            data = [None if np.isnan(x) else float(x) for x in t.ravel()]
            return {"shape": list(t.shape), "data": data}

        return {
            "rank": self.rank,
            "k": self.k,
            "special": self.special,
            "g": self.g,
            "residual": self.residual,
            "f_tensor": pack(self.f_tensor),
            "g_tensor": pack(self.g_tensor),
        }


def find_identity(g: GeneratorSet, r: int) -> IdentityReport:
    if r not in (1, 2, 3):
        raise ValueError("rank r must be 1, 2 or 3")
    gens = g.generators
    stack = np.stack(gens)
    d, k = g.d, g.k
    eye = np.eye(d)
    f_tensor = np.zeros((k,) * r)
    g_tensor = np.full((k,) * r, np.nan)
    multisets, monomials, transforms, informative, g_values = [], [], [], [], []
    residual = 0.0
    for ms in combinations_with_replacement(range(k), r):
        m = gens[ms[0]] if r == 1 else sym_product([gens[i] for i in ms])
        t = np.einsum("iab,bc,icd->ad", stack, m, stack)
        tr_m = np.trace(m).real
        m0 = m - (tr_m / d) * eye
        norm0 = float(np.vdot(m0, m0).real)
        is_informative = norm0 > 1e-16 * max(1.0, float(np.vdot(m, m).real))
        if is_informative:
            gm = float(np.vdot(m0, t - (np.trace(t).real / d) * eye).real) / norm0
        else:
            gm = 0.0  # any g fits; pick 0 so f absorbs the trace part
        fm = (np.trace(t).real - gm * tr_m) / d
        residual = max(residual, max_abs(t - fm * eye - gm * m))
        for perm in set(permutations(ms)):
            f_tensor[perm] = fm
            g_tensor[perm] = gm if is_informative else np.nan
        multisets.append(ms)
        monomials.append(m)
        transforms.append(t)
        informative.append(is_informative)
        if is_informative:
            g_values.append(gm)
    if g_values:
        spread = max(g_values) - min(g_values)
        special = spread <= SPECIAL_SPREAD_TOL
        g_scalar = float(np.mean(g_values)) if special else None
    else:
        # Every monomial is a multiple of the identity: the identity holds
        # with any scalar g, so it is special but g is not identifiable.
        special = True
        g_scalar = None
    return IdentityReport(
        rank=r,
        k=k,
        special=special,
        g=g_scalar,
        residual=float(residual),
        f_tensor=f_tensor,
        g_tensor=g_tensor,
        multisets=tuple(multisets),
        informative=tuple(informative),
        _monomials=tuple(monomials),
        _transforms=tuple(transforms),
    )


# ---------------------------------------------------------------------------
# Critical error probabilities p_r = Z / (Z - g_r).

@dataclass(frozen=True)
class CriticalEntry:
    rank: int
    special: bool
    g_value: float | None
    p_value: float | None
    in_range: bool
    verified: bool | None   # sampled map-to-maximally-mixed check, if run
    residual: float

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "special": self.special,
            "g": self.g_value,
            "p": self.p_value,
            "in_range": self.in_range,
            "verified": self.verified,
            "residual": self.residual,
        }


@dataclass(frozen=True)
class CriticalDecomposition:
    source: str
    Z: float
    entries: tuple

    def entry(self, rank: int) -> CriticalEntry:
        for e in self.entries:
            if e.rank == rank:
                return e
        raise KeyError(f"no entry for rank {rank}")

    def to_json(self) -> dict:
        return {
            "source": self.source,
            "Z": self.Z,
            "entries": [e.to_json() for e in self.entries],
        }


def _sample_rank_state(g: GeneratorSet, r: int, rng: np.random.Generator) -> np.ndarray:
    """A random density matrix of the form I/d + (traceless rank-r part)."""
    gens = g.generators
    d = g.d
    total = np.zeros((d, d), dtype=np.complex128)
    for ms in combinations_with_replacement(range(g.k), r):
        m = gens[ms[0]] if r == 1 else sym_product([gens[i] for i in ms])
        total += rng.normal() * m
    t0 = total - (np.trace(total).real / d) * np.eye(d)
    spread = max_abs(np.linalg.eigvalsh(t0))
    eps = 0.5 / (d * spread) if spread > 1e-14 else 0.0
    return np.eye(d) / d + eps * t0


def critical_values(
    g: GeneratorSet,
    max_rank: int = 2,
    seed: int = 0,
    samples: int = 5,
    verify: bool = True,
) -> CriticalDecomposition:
    """For each rank where a special identity exists, the error probability
    at which the channel sends every I/d + (rank-r) state to I/d.

    p_r = Z / (Z - g_r) lies in [0, 1] exactly when g_r <= 0; the
    ``in_range`` flag records the strict condition g_r < 0, so the boundary
    case g_r = 0 (p_r = 1) reports False.  Ranks without a special identity
    (or with unidentifiable g) appear with p_value None.
    """
    entries = []
    for r in range(1, max_rank + 1):
        report = find_identity(g, r)
        if not report.special or report.g is None:
            entries.append(
                CriticalEntry(
                    rank=r, special=report.special, g_value=None, p_value=None,
                    in_range=False, verified=None, residual=report.residual,
                )
            )
            continue
        gr = report.g
        p_r = g.Z / (g.Z - gr) if abs(g.Z - gr) > 1e-12 else None
        # strict sign condition, with a fuzz band so a numerically-zero g
        # (boundary case, p = 1) is not misclassified
        in_range = gr < -1e-12
        verified = None
        if verify and p_r is not None and 0.0 <= p_r <= 1.0:
            ch = build_channel(g, p_r)
            verified = True
            for i in range(samples):
                rho = _sample_rank_state(g, r, derived_rng(seed, 1000 * r + i))
                out = apply_matrix(ch, rho)
                if max_abs(out - np.eye(g.d) / g.d) > CRITICAL_MAP_TOL:
                    verified = False
                    break
        entries.append(
            CriticalEntry(
                rank=r, special=True, g_value=float(gr), p_value=p_r,
                in_range=in_range, verified=verified, residual=report.residual,
            )
        )
    return CriticalDecomposition(source=g.algebra, Z=g.Z, entries=tuple(entries))


# ---------------------------------------------------------------------------
# Output entropy and l_q norms.

def von_neumann_entropy(rho) -> float:
    """-(sum lambda ln lambda) over the spectrum, with 0 ln 0 = 0."""
    m = rho.matrix if isinstance(rho, DensityMatrix) else as_complex_matrix(rho)
    ev = np.clip(np.linalg.eigvalsh(m).real, 0.0, None)
    nz = ev[ev > 0.0]
    return float(-(nz * np.log(nz)).sum())


def min_entropy_su_n(p: float, n: int) -> float:
    """Minimal von Neumann output entropy of the su(n) channel.

    Every pure input yields the output spectrum {1 - np/(1+n),
    np/(n^2-1) x (n-1)}, and entropy is concave, so the minimum over all
    densities is this closed form:

        -(np/(1+n)) ln(np/(n^2-1)) - (1 - np/(1+n)) ln(1 - np/(1+n)).
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if not 0.0 <= p <= 1.0:
        raise POutOfRangeError(f"p = {p} lies outside [0, 1]")
    if p == 0.0:
        return 0.0
    a = n * p / (1.0 + n)
    small = n * p / (n * n - 1.0)
    big = 1.0 - a
    out = -a * math.log(small)
    if big > 0.0:
        out -= big * math.log(big)
    return out


def _pure_outputs(ch: KrausChannel, n_samples: int, seed: int) -> np.ndarray:
    d = ch.dim
    psis = np.empty((n_samples, d), dtype=np.complex128)
    for i in range(n_samples):
        psis[i] = random_pure_statevector(d, derived_rng(seed, i))
    rhos = np.einsum("ia,ib->iab", psis, psis.conj())
    ops = np.stack(ch.ops)
    return np.einsum("mab,ibc,mdc->iad", ops, rhos, ops.conj())


def sampled_min_output_entropy(ch: KrausChannel, n_samples: int = 10000, seed: int = 0) -> float:
    """Minimum output entropy over random pure inputs (an upper bound on
    the true minimum, used as an independent cross-check)."""
    outs = _pure_outputs(ch, n_samples, seed)
    ev = np.clip(np.linalg.eigvalsh(outs).real, 0.0, None)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(ev > 0.0, ev * np.log(np.where(ev > 0.0, ev, 1.0)), 0.0)
    return float(-(terms.sum(axis=1)).min())


def lq_norm(m, q: float) -> float:
    """(tr |m|^q)^(1/q) via the eigenvalues of a Hermitian matrix."""
    if q < 1.0:
        raise ValueError("q must be >= 1")
    ev = np.abs(np.linalg.eigvalsh(as_complex_matrix(m)))
    return float((ev**q).sum() ** (1.0 / q))


def max_lq_norm(ch: KrausChannel, q: float, n_samples: int = 200, seed: int = 0) -> float:
    """Largest output l_q norm over sampled pure inputs.

    Pure states are the extreme points of the density matrices and the norm
    is convex, so the supremum is attained on them; a finite sample still
    only certifies a lower bound on that supremum.
    """
    if q < 1.0:
        raise ValueError("q must be >= 1")
    outs = _pure_outputs(ch, n_samples, seed)
    ev = np.abs(np.linalg.eigvalsh(outs))
    return float(((ev**q).sum(axis=1) ** (1.0 / q)).max())


def werner_holevo(rho) -> DensityMatrix:
    """rho -> (tr(rho) I - rho^T) / (d - 1)."""
    rho = as_density(rho)
    d = rho.dim
    if d < 2:
        raise ValueError("dimension must be >= 2")
    m = (np.trace(rho.matrix) * np.eye(d) - rho.matrix.T) / (d - 1)
    return DensityMatrix(m)
