import numpy as np
import pytest
import scipy.linalg
from hypothesis import given
from hypothesis import strategies as st

from jgeo.algebra import AlgebraShape, Element
from jgeo.errors import InputError, ShapeMismatchError
from jgeo.gns import (
    SUBMERSION_CALIBRATION,
    SphereVector,
    ambient_metric,
    ambient_symplectic,
    beta_act,
    build_gns,
    calibrate_submersion,
    cyclic_point,
    free_action_check,
    horizontal_lift,
    ideal_orthogonality_check,
    in_commutant,
    in_orbit_sector,
    is_star_homomorphism,
    project_pi,
    psi_field,
    pushforward,
    sphere_point,
    xi_field,
)
from jgeo.metric import metric_G1_fields
from jgeo.orbits import StateFunctional, act_state, gradient_vec, hamiltonian_vec
from jgeo.sampling import random_self_adjoint, random_state, random_unitary

seeds = st.integers(0, 2**32 - 1)
KET0 = StateFunctional(Element.from_blocks([[1, 0], [0, 0]]))
HALF = StateFunctional(Element.identity(AlgebraShape.of(2)) / 2)


def _right_mult(gns, x: np.ndarray) -> np.ndarray:
    """Right multiplication by ``x`` carried into Hilbert coordinates (row-major vec)."""
    return gns.to_hilbert @ np.kron(np.eye(x.shape[0]), x.T) @ gns.from_hilbert


def _random_g(rng, shape):
    return Element(shape, [rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)) for n in shape.blocks])


class TestConstruction:
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_faithful_dimensions(self, n):
        rho = StateFunctional(Element.identity(AlgebraShape.of(n)) / n)
        gns = build_gns(rho)
        assert (gns.hilbert_dim, gns.commutant_dim, gns.ideal_dim) == (n * n, n * n, 0)

    def test_pure_qubit_dimensions(self):
        gns = build_gns(KET0)
        assert (gns.hilbert_dim, gns.commutant_dim, gns.ideal_dim) == (2, 1, 2)

    def test_abelian_rep_is_diagonal(self):
        gns = build_gns(StateFunctional(Element.diagonal([0.5, 0.5])))
        assert gns.hilbert_dim == 2
        r = gns.rep(Element.diagonal([3.0, -1.0]))
        assert np.allclose(r, np.diag(np.diag(r)), atol=1e-14)
        assert sorted(np.diag(r).real) == pytest.approx([-1.0, 3.0])

    def test_block_dimensions(self):
        rng = np.random.default_rng(0)
        rho = random_state(rng, AlgebraShape.of(2, 1), (1, 1))
        gns = build_gns(rho)
        # rank r in an n-block contributes n r to the Hilbert space
        assert gns.hilbert_dim == 2 + 1
        assert gns.commutant_dim == 1 + 1

    @given(seeds)
    def test_star_homomorphism(self, seed):
        rng = np.random.default_rng(seed)
        rho = random_state(rng, AlgebraShape.of(3), (2,))
        assert is_star_homomorphism(build_gns(rho)) <= 1e-10

    def test_rep_shape_mismatch(self):
        gns = build_gns(HALF)
        with pytest.raises(ShapeMismatchError):
            gns.rep(Element.identity(AlgebraShape.of(3)))

    def test_commutant_commutes(self):
        rng = np.random.default_rng(1)
        gns = build_gns(random_state(rng, AlgebraShape.of(2, 2), (2, 1)))
        for m in gns.commutant_basis:
            assert in_commutant(gns, m)
        for b in gns.commutant_skew_basis:
            assert np.allclose(b, -b.conj().T, atol=1e-12)


class TestIdeal:
    def test_faithful_is_vacuous(self, paulis):
        gns = build_gns(HALF)
        assert gns.ideal_basis == ()
        assert ideal_orthogonality_check(gns, [], paulis[0]) == 0

    def test_pure_state_column_killer(self, paulis):
        x, _, _ = paulis
        gns = build_gns(KET0)
        killer = Element.from_blocks([[0, 1], [0, 0]])  # |0><1| annihilates the support vector |0>
        assert ideal_orthogonality_check(gns, killer, x) == 0
        assert ideal_orthogonality_check(gns, list(gns.ideal_basis), list(paulis)) <= 1e-15

    def test_zero_element(self, paulis):
        gns = build_gns(KET0)
        assert ideal_orthogonality_check(gns, Element.zeros(paulis[0].shape), paulis[1]) == 0


class TestProjection:
    def test_cyclic_projects_to_reference(self):
        rng = np.random.default_rng(2)
        rho = random_state(rng, AlgebraShape.of(3))
        assert project_pi(cyclic_point(build_gns(rho))).density.allclose(rho.density, atol=1e-13)

    @given(seeds)
    def test_projection_is_state_action(self, seed):
        rng = np.random.default_rng(seed)
        shape = AlgebraShape.of(2, 1)
        rho = random_state(rng, shape)
        gns = build_gns(rho)
        a, b = random_self_adjoint(rng, shape), random_self_adjoint(rng, shape)
        from jgeo.algebra import group_exp

        psi = sphere_point(gns, group_exp(a, b))
        assert project_pi(psi).density.allclose(act_state(a, b, rho).density, atol=1e-11)

    def test_phase_invariance(self):
        rng = np.random.default_rng(3)
        gns = build_gns(random_state(rng, AlgebraShape.of(2)))
        psi = sphere_point(gns, _random_g(rng, gns.shape))
        rotated = SphereVector(gns, np.exp(0.7j) * psi.coords)
        assert project_pi(rotated).density.allclose(project_pi(psi).density, atol=1e-14)

    def test_sphere_vector_checks(self):
        gns = build_gns(HALF)
        with pytest.raises(InputError):
            SphereVector(gns, np.ones(4))
        with pytest.raises(ShapeMismatchError):
            SphereVector(gns, np.array([1.0, 0.0]))

    def test_orbit_sector(self):
        gns = build_gns(KET0)
        assert in_orbit_sector(cyclic_point(gns))
        faithful = build_gns(HALF)
        assert not in_orbit_sector(sphere_point(faithful, Element.from_blocks([[1, 0], [0, 0]])))


class TestAction:
    def test_identity(self):
        rng = np.random.default_rng(4)
        gns = build_gns(random_state(rng, AlgebraShape.of(2)))
        psi = sphere_point(gns, _random_g(rng, gns.shape))
        z = Element.zeros(gns.shape)
        assert np.allclose(beta_act(z, z, psi).coords, psi.coords, atol=1e-15)

    def test_unitary_is_isometric(self):
        rng = np.random.default_rng(5)
        gns = build_gns(HALF)
        psi = cyclic_point(gns)
        u = random_unitary(rng, gns.shape)
        h = Element(gns.shape, [_log_unitary(b) for b in u.blocks])
        moved = beta_act(Element.zeros(gns.shape), h, psi)
        assert np.allclose(moved.coords, gns.rep(u) @ psi.coords, atol=1e-12)

    @given(seeds)
    def test_equivariance(self, seed):
        rng = np.random.default_rng(seed)
        shape = AlgebraShape.of(2)
        rho = random_state(rng, shape)
        gns = build_gns(rho)
        psi = cyclic_point(gns)
        a, b = random_self_adjoint(rng, shape), random_self_adjoint(rng, shape)
        lhs = project_pi(beta_act(a, b, psi)).density
        assert lhs.allclose(act_state(a, b, rho).density, atol=1e-11)

    def test_field_examples(self):
        gns = build_gns(HALF)
        psi = cyclic_point(gns)
        z = Element.zeros(gns.shape)
        assert np.max(np.abs(psi_field(psi, z, z))) == 0
        assert np.max(np.abs(psi_field(psi, Element.identity(gns.shape), z))) <= 1e-16

    @given(seeds)
    def test_field_tangent_and_derivative(self, seed):
        rng = np.random.default_rng(seed)
        shape = AlgebraShape.of(2)
        gns = build_gns(random_state(rng, shape))
        psi = sphere_point(gns, _random_g(rng, shape))
        a, b = random_self_adjoint(rng, shape), random_self_adjoint(rng, shape)
        u = psi_field(psi, a, b)
        assert abs(np.vdot(psi.coords, u).real) <= 1e-13
        h = 1e-5
        fd = (beta_act(h * a, h * b, psi).coords - beta_act(-h * a, -h * b, psi).coords) / (2 * h)
        assert np.allclose(fd, u, atol=1e-8)
        # the field pushes forward to the orbit field of the projected state
        base = project_pi(psi)
        expected = gradient_vec(base, a).value + hamiltonian_vec(base, b).value
        assert pushforward(psi, u).allclose(expected, atol=1e-12)


def _log_unitary(u):
    w, v = np.linalg.eig(u)
    m = v @ np.diag(2 * np.angle(w)) @ np.linalg.inv(v)
    return (m + m.conj().T) / 2


class TestAmbientForms:
    @given(seeds)
    def test_examples(self, seed):
        rng = np.random.default_rng(seed)
        u = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        assert ambient_metric(u, u) == pytest.approx(4 * np.vdot(u, u).real)
        assert ambient_symplectic(u, u) == 0
        assert ambient_symplectic(u, 1j * u) == pytest.approx(4 * np.vdot(u, u).real)
        assert ambient_metric(u, v) == pytest.approx(ambient_metric(v, u))
        assert ambient_symplectic(u, v) == pytest.approx(-ambient_symplectic(v, u))

    def test_calibration(self):
        assert calibrate_submersion() == pytest.approx(SUBMERSION_CALIBRATION, abs=1e-14)


class TestVerticalAndHorizontal:
    def test_zero_generator(self):
        gns = build_gns(HALF)
        psi = cyclic_point(gns)
        assert np.max(np.abs(xi_field(psi, np.zeros((4, 4))))) == 0

    def test_right_multiplication_is_vertical(self, paulis):
        _, _, z = paulis
        gns = build_gns(HALF)
        psi = cyclic_point(gns)
        b = _right_mult(gns, 1j * z.blocks[0])
        u = xi_field(psi, b)
        assert np.linalg.norm(u) > 0.1
        assert pushforward(psi, u).max_abs() <= 1e-15
        h = 1e-4
        plus = SphereVector.normalized(gns, scipy.linalg.expm(h * b) @ psi.coords)
        minus = SphereVector.normalized(gns, scipy.linalg.expm(-h * b) @ psi.coords)
        assert ((project_pi(plus).density - project_pi(minus).density) / (2 * h)).max_abs() <= 1e-10

    def test_rejects_non_commutant(self, paulis):
        x, _, _ = paulis
        gns = build_gns(HALF)
        psi = cyclic_point(gns)
        with pytest.raises(InputError):
            xi_field(psi, 1j * gns.rep(x))
        with pytest.raises(InputError):
            xi_field(psi, _right_mult(gns, x.blocks[0]))  # self-adjoint, not skew

    def test_lift_examples(self, paulis):
        _, _, z = paulis
        gns = build_gns(HALF)
        psi = cyclic_point(gns)
        assert np.max(np.abs(horizontal_lift(psi, Element.zeros(z.shape)))) == 0
        lift = horizontal_lift(psi, z / 2)
        assert np.allclose(lift, psi_field(psi, z, Element.zeros(z.shape)), atol=1e-15)

    @given(seeds)
    def test_lift_projects_and_is_horizontal(self, seed):
        rng = np.random.default_rng(seed)
        shape = AlgebraShape.of(3)
        rho = random_state(rng, shape, (2,))
        gns = build_gns(rho)
        psi = sphere_point(gns, _random_g(rng, shape))
        base = project_pi(psi)
        v = gradient_vec(base, random_self_adjoint(rng, shape))
        u = horizontal_lift(psi, v)
        assert pushforward(psi, u).allclose(v.value, atol=1e-10)
        for b in gns.commutant_skew_basis:
            assert abs(ambient_metric(u, b @ psi.coords)) <= 1e-10
        assert ambient_metric(u, u) == pytest.approx(metric_G1_fields(base, _solve(base, v), _solve(base, v)), rel=1e-9)


def _solve(rho, v):
    from jgeo.metric import lyapunov_solve

    return lyapunov_solve(rho, v).solution


class TestFreeAction:
    def test_cyclic_vector_of_faithful_reference(self):
        gns = build_gns(HALF)
        assert free_action_check(gns, cyclic_point(gns))

    def test_rank_one_lift_is_not_free(self):
        rng = np.random.default_rng(6)
        gns = build_gns(random_state(rng, AlgebraShape.of(2)))
        psi = sphere_point(gns, Element.from_blocks([[1, 1], [0, 0]]))
        assert not in_orbit_sector(psi)
        assert not free_action_check(gns, psi)

    @given(seeds)
    def test_pure_reference_always_free(self, seed):
        rng = np.random.default_rng(seed)
        gns = build_gns(random_state(rng, AlgebraShape.of(3), (1,)))
        assert free_action_check(gns, sphere_point(gns, _random_g(rng, gns.shape)))
