import numpy as np
import pytest

from liechan import matcore as mc
from liechan import repgen as rg
from tests.conftest import clifford, g2, spin, su, su_tensors

PAULI = [
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]]),
    np.array([[1, 0], [0, -1]], dtype=complex),
]


# ---------------------------------------------------------------------------
# su(n)

def test_gell_mann_n2_is_pauli():
    g = su(2)
    for built, pauli in zip(g.generators, PAULI):
        np.testing.assert_allclose(built, pauli, atol=1e-15)
    assert g.Z == pytest.approx(3.0)


def test_gell_mann_n3_casimir():
    g = su(3)
    assert g.k == 8
    total = sum(x @ x for x in g.generators)
    np.testing.assert_allclose(total, (16.0 / 3.0) * np.eye(3), atol=1e-12)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_gell_mann_normalizations(n):
    g = su(n)
    assert g.k == n * n - 1
    total = sum(x @ x for x in g.generators)
    assert mc.max_abs(total - (2.0 * (n * n - 1) / n) * np.eye(n)) < 1e-9
    for a, xa in enumerate(g.generators):
        assert abs(np.trace(xa)) < 1e-12
        for b, xb in enumerate(g.generators):
            expect = 2.0 if a == b else 0.0
            assert abs(np.trace(xa @ xb) - expect) < 1e-12


def test_gell_mann_rejects_small_n():
    with pytest.raises(ValueError):
        rg.gell_mann(1)


def test_structure_tensors_n2():
    t = su_tensors(2)
    assert mc.max_abs(t.d_sym) < 1e-12
    eps = np.zeros((3, 3, 3))
    for (i, j, k) in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        eps[i, j, k] = 1.0
        eps[j, i, k] = -1.0
    np.testing.assert_allclose(t.f, eps, atol=1e-12)


def test_structure_tensors_d118():
    t = su_tensors(3)
    assert t.d_sym[0, 0, 7] == pytest.approx(1.0 / np.sqrt(3.0), abs=1e-12)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_structure_contractions(n):
    t = su_tensors(n)
    k = n * n - 1
    ff = np.einsum("ijm,ljm->il", t.f, t.f)
    assert mc.max_abs(ff - n * np.eye(k)) < 1e-8
    qq = np.einsum("ijm,ljm->il", t.Q, t.Q)
    assert mc.max_abs(qq + (4.0 / n) * np.eye(k)) < 1e-8
    assert mc.max_abs(np.einsum("iik->k", t.d_sym)) < 1e-9


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_product_identity_reconstruction(n):
    g = su(n)
    t = su_tensors(n)
    worst = 0.0
    for i, xi in enumerate(g.generators):
        for j, xj in enumerate(g.generators):
            recon = t.beta * (i == j) * np.eye(n) + sum(
                t.Q[i, j, k] * xk for k, xk in enumerate(g.generators)
            )
            worst = max(worst, mc.max_abs(xi @ xj - recon))
    assert worst < 1e-9


def test_d_tensor_fully_symmetric():
    t = su_tensors(3)
    assert mc.max_abs(t.d_sym - t.d_sym.transpose(1, 0, 2)) < 1e-12
    assert mc.max_abs(t.d_sym - t.d_sym.transpose(2, 1, 0)) < 1e-12
    assert mc.max_abs(t.f + t.f.transpose(1, 0, 2)) < 1e-12


# ---------------------------------------------------------------------------
# Spin representations

def test_spin_half_is_half_pauli():
    g = spin(1)
    for built, pauli in zip(g.generators, PAULI):
        np.testing.assert_allclose(built, pauli / 2.0, atol=1e-15)
    assert g.Z == pytest.approx(0.75)


def test_spin_one_matrices_explicit():
    g = spin(2)
    r = 1.0 / np.sqrt(2.0)
    j1 = np.array([[0, r, 0], [r, 0, r], [0, r, 0]])
    j2 = np.array([[0, -1j * r, 0], [1j * r, 0, -1j * r], [0, 1j * r, 0]])
    j3 = np.diag([1.0, 0.0, -1.0])
    np.testing.assert_allclose(g.generators[0], j1, atol=1e-15)
    np.testing.assert_allclose(g.generators[1], j2, atol=1e-15)
    np.testing.assert_allclose(g.generators[2], j3, atol=1e-15)
    assert g.Z == pytest.approx(2.0)


def test_spin_three_half_trace_form():
    g = spin(3)
    for a in range(3):
        for b in range(3):
            expect = 5.0 if a == b else 0.0
            assert abs(np.trace(g.generators[a] @ g.generators[b]) - expect) < 1e-12


@pytest.mark.parametrize("two_s", range(1, 9))
def test_spin_commutation(two_s):
    g = spin(two_s)
    eps = np.zeros((3, 3, 3))
    for (i, j, k) in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        eps[i, j, k] = 1.0
        eps[j, i, k] = -1.0
    for a in range(3):
        for b in range(3):
            expect = 1j * sum(eps[a, b, c] * g.generators[c] for c in range(3))
            assert mc.max_abs(mc.commutator(g.generators[a], g.generators[b]) - expect) < 1e-10


def test_spin_rejects_zero():
    with pytest.raises(ValueError):
        rg.spin_rep(0)


# ---------------------------------------------------------------------------
# Octonions and g2

def test_octonion_unit():
    t = rg.octonion_table()
    e = np.eye(8)
    for j in range(8):
        np.testing.assert_array_equal(rg.octonion_multiply(e[0], e[j], t), e[j])
        np.testing.assert_array_equal(rg.octonion_multiply(e[j], e[0], t), e[j])


def test_octonion_imaginary_squares():
    t = rg.octonion_table()
    e = np.eye(8)
    for i in range(1, 8):
        np.testing.assert_array_equal(rg.octonion_multiply(e[i], e[i], t), -e[0])


def test_octonion_alternativity_and_nonassociativity():
    t = rg.octonion_table()
    e = np.eye(8)

    def mul(x, y):
        return rg.octonion_multiply(x, y, t)

    rng = np.random.default_rng(11)
    for _ in range(25):
        x = rng.normal(size=8)
        y = rng.normal(size=8)
        assert mc.max_abs(mul(mul(x, x), y) - mul(x, mul(x, y))) < 1e-12
        assert mc.max_abs(mul(mul(x, y), y) - mul(x, mul(y, y))) < 1e-12
    assoc = mul(mul(e[1], e[2]), e[4]) - mul(e[1], mul(e[2], e[4]))
    assert mc.max_abs(assoc) > 1.0


def test_octonion_norm_multiplicative():
    t = rg.octonion_table()
    rng = np.random.default_rng(12)
    for _ in range(10):
        x = rng.normal(size=8)
        y = rng.normal(size=8)
        prod = rg.octonion_multiply(x, y, t)
        assert abs(np.linalg.norm(prod) - np.linalg.norm(x) * np.linalg.norm(y)) < 1e-9


def test_octonion_derivation_leibniz_exhaustive():
    t = rg.octonion_table()
    e = np.eye(8)
    dmat = rg.octonion_derivation(e[2], e[5], t)
    for a in range(8):
        for b in range(8):
            prod = rg.octonion_multiply(e[a], e[b], t)
            lhs = dmat @ prod
            rhs = rg.octonion_multiply(dmat @ e[a], e[b], t) + rg.octonion_multiply(
                e[a], dmat @ e[b], t
            )
            assert mc.max_abs(lhs - rhs) < 1e-12


def test_g2_casimir_and_trace_form():
    g = g2()
    assert (g.d, g.k) == (7, 14)
    total = sum(b @ b for b in g.generators)
    assert mc.max_abs(total - np.eye(7)) < 1e-9
    for a in range(14):
        for b in range(14):
            expect = 0.5 if a == b else 0.0
            assert abs(np.trace(g.generators[a] @ g.generators[b]) - expect) < 1e-9


def test_g2_generators_hermitian_traceless():
    g = g2()
    for b in g.generators:
        assert mc.is_hermitian(b, 1e-12)
        assert abs(np.trace(b)) < 1e-12


def test_g2_commutators_close_in_span():
    # [beta_a, beta_b] must be expressible in the beta span: a Lie algebra.
    g = g2()
    stack = np.stack(g.generators)
    basis = stack.reshape(14, -1).T  # 49 x 14
    worst = 0.0
    for a in range(14):
        for b in range(a + 1, 14):
            target = (1j * mc.commutator(g.generators[a], g.generators[b])).ravel()
            design = np.vstack([basis.real, basis.imag])
            rhs = np.concatenate([target.real, target.imag])
            _, res, *_ = np.linalg.lstsq(design, rhs, rcond=None)
            resid = np.sqrt(res[0]) if len(res) else 0.0
            worst = max(worst, resid)
    assert worst < 1e-8


# ---------------------------------------------------------------------------
# Clifford algebra

def test_gamma_pairwise_anticommute():
    g, _ = clifford()
    g1, g2_, g3, g4 = g.generators
    assert mc.max_abs(mc.anticommutator(g1, g2_)) < 1e-14
    np.testing.assert_allclose(g1 @ g1, np.eye(4), atol=1e-14)
    np.testing.assert_allclose(g4 @ g4, np.eye(4), atol=1e-14)


def test_gamma_bilinear_relation_random():
    g, _ = clifford()
    for i in range(50):
        rng = mc.derived_rng(13, i)
        x = rng.normal(size=4)
        y = rng.normal(size=4)
        gx = rg.clifford_gamma(x, g)
        gy = rg.clifford_gamma(y, g)
        lhs = mc.anticommutator(gx, gy)
        assert mc.max_abs(lhs - rg.clifford_bilinear(x, y) * np.eye(4)) < 1e-10


def test_antisymmetrized_basis_independent():
    _, basis = clifford()
    assert len(basis) == 16
    gram = np.array([[np.trace(a.conj().T @ b) for b in basis] for a in basis])
    assert np.linalg.matrix_rank(gram, tol=1e-8) == 16


# ---------------------------------------------------------------------------
# Casimir constant

def test_casimir_su2():
    assert rg.casimir_z(PAULI) == pytest.approx(3.0)


@pytest.mark.parametrize("two_s", [1, 2, 3, 4, 6])
def test_casimir_spin(two_s):
    s = two_s / 2.0
    assert rg.casimir_z(spin(two_s).generators) == pytest.approx(s * (s + 1.0))


def test_casimir_unequal_blocks_rejected():
    a = spin(2).generators  # spin-1, Z = 2
    b = spin(1).generators  # spin-1/2, Z = 3/4
    combined = []
    for x, y in zip(a, b):
        m = np.zeros((5, 5), dtype=complex)
        m[:3, :3] = x
        m[3:, 3:] = y
        combined.append(m)
    with pytest.raises(rg.NotScalarError):
        rg.casimir_z(combined)


def test_from_generators_pauli():
    g = rg.GeneratorSet.from_generators(PAULI)
    assert g.algebra == rg.CUSTOM
    assert g.N == pytest.approx(1.0)
    assert g.Z == pytest.approx(3.0)


def test_rotate_basis_preserves_invariants():
    g = su(3)
    rng = np.random.default_rng(14)
    q, _ = np.linalg.qr(rng.normal(size=(8, 8)))
    rotated = rg.rotate_basis(g, q)
    assert rotated.N == pytest.approx(g.N)
    assert rotated.Z == pytest.approx(g.Z)


def test_generator_set_json_round_trip():
    g = su(3)
    again = rg.GeneratorSet.from_json(g.to_json())
    assert again.algebra == g.algebra and again.Z == g.Z
    for a, b in zip(again.generators, g.generators):
        np.testing.assert_array_equal(a, b)


def test_non_hermitian_generators_rejected():
    bad = [np.array([[0, 1], [0, 0]], dtype=complex)]
    with pytest.raises(ValueError):
        rg.GeneratorSet.from_generators(bad)
