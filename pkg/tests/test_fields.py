"""Analytic field oracles, contraction grading of point samples, the
sphere embedding and the generator vector fields."""

import math

import numpy as np
import pytest
from scipy.linalg import expm

from ewcontract.fields import (
    ConfigError,
    Couplings,
    EpsConfig,
    FermionConfig,
    GaugeConfig,
    PlaneWave,
    Polynomial,
    PsiConfig,
    constant,
    generator_vector_field,
    generator_vector_jacobian,
    infinitesimal_gauge_transform,
    phi_from_psi,
    phi_jacobian,
    psi_generator_action,
    sample_fermions,
    sample_gauge,
    sample_psi,
)
from ewcontract.group import generator, hermitian_form_jets, hypercharge_matrix
from ewcontract.jets import DEFAULT_ORDER, Jet

ORDER = DEFAULT_ORDER


def _fd_grad(f, x, h=1e-6):
    out = np.zeros(4, dtype=complex)
    for mu in range(4):
        e = np.zeros(4)
        e[mu] = h
        out[mu] = (f.value(x + e) - f.value(x - e)) / (2 * h)
    return out


def _fd_hess(f, x, h=1e-4):
    out = np.zeros((4, 4), dtype=complex)
    for mu in range(4):
        e = np.zeros(4)
        e[mu] = h
        out[mu] = (f.grad(x + e) - f.grad(x - e)) / (2 * h)
    return out


@pytest.mark.parametrize(
    "field",
    [
        PlaneWave(0.8 - 0.3j, (0.4, -0.7, 0.2, 1.1), 0.5),
        Polynomial(
            1.2 + 0.1j,
            (0.3, -0.2, 0.5, 0.0),
            ((0.2, 0.1, 0.0, 0.0), (0.0, -0.3, 0.0, 0.2),
             (0.1, 0.0, 0.4, 0.0), (0.0, 0.0, 0.0, -0.1)),
        ),
    ],
)
def test_analytic_gradients_match_finite_differences(field):
    x = np.array([0.3, -0.1, 0.7, 0.2])
    assert np.allclose(field.grad(x), _fd_grad(field, x), atol=1e-8)
    assert np.allclose(field.hess(x), _fd_hess(field, x), atol=1e-6)
    assert np.allclose(field.hess(x), field.hess(x).T)


def test_scaled_field_scales_everything():
    f = PlaneWave(0.5, (1.0, 0.0, 0.0, 0.0), 0.2)
    x = np.array([0.4, 0.0, 0.0, 0.0])
    g = f.scaled(3.0)
    assert g.value(x) == pytest.approx(3.0 * f.value(x))
    assert np.allclose(g.grad(x), 3.0 * f.grad(x))


def test_couplings_validation():
    with pytest.raises(ConfigError):
        Couplings(g=0.0, gp=0.3, R=1.0)
    with pytest.raises(ConfigError):
        Couplings(g=0.5, gp=-0.1, R=1.0)
    with pytest.raises(ConfigError):
        Couplings(g=0.5, gp=0.3, R=1.0, h_e=-1.0)
    c = Couplings(g=0.6, gp=0.8, R=1.0)
    assert c.gz == pytest.approx(1.0)


def test_gauge_sample_grading():
    cfg = GaugeConfig(
        tuple(tuple(constant(k + 1.0) for _ in range(4)) for k in range(3)),
        tuple(constant(9.0) for _ in range(4)),
    )
    gs = sample_gauge(cfg, np.zeros(4), ORDER)
    # fiber components sit at grade 1, base components at grade 0
    assert gs.a[0][0].grade(0) == 0.0
    assert gs.a[0][0].grade(1) == pytest.approx(1.0)
    assert gs.a[1][0].grade(1) == pytest.approx(2.0)
    assert gs.a[2][0].grade(0) == pytest.approx(3.0)
    assert gs.a[2][0].grade(1) == 0.0
    assert gs.b[0].grade(0) == pytest.approx(9.0)


def test_psi_and_fermion_sample_grading():
    ps = sample_psi(
        PsiConfig((constant(1.0), constant(2.0), constant(3.0))),
        np.zeros(4),
        ORDER,
    )
    assert ps.psi[0].grade(1) == pytest.approx(1.0)
    assert ps.psi[1].grade(1) == pytest.approx(2.0)
    assert ps.psi[2].grade(0) == pytest.approx(3.0)

    unit = (constant(1.0), constant(0.0))
    fs = sample_fermions(FermionConfig(unit, unit, unit), np.zeros(4), ORDER)
    assert fs.el[0].grade(0) == pytest.approx(1.0)
    assert fs.nu[0].grade(0) == 0.0
    assert fs.nu[0].grade(1) == pytest.approx(1.0)
    assert fs.er[0].grade(0) == pytest.approx(1.0)


def test_numeric_sampling_collapses_grades():
    ps = sample_psi(
        PsiConfig((constant(1.0), constant(0.0), constant(0.0))),
        np.zeros(4),
        ORDER,
        jval=0.25,
    )
    assert ps.psi[0].grade(0) == pytest.approx(0.25)
    assert ps.psi[0].grade(1) == 0.0


def test_sphere_embedding_constraint():
    rng = np.random.default_rng(0)
    R = 1.7
    for _ in range(30):
        cfg = PsiConfig(
            tuple(
                PlaneWave(rng.normal() * 0.8, tuple(rng.normal(size=4)), 0.1)
                for _ in range(3)
            )
        )
        ps = sample_psi(cfg, rng.uniform(-1, 1, size=4), ORDER)
        phi, _ = phi_from_psi(ps, R)
        form = hermitian_form_jets(phi, phi)
        assert form.max_abs_diff(R**2) <= 1e-10


def test_phi_gradient_matches_chain_rule_via_jacobian():
    rng = np.random.default_rng(1)
    cfg = PsiConfig(
        tuple(
            PlaneWave(rng.normal() * 0.5, tuple(rng.normal(size=4)), 0.3)
            for _ in range(3)
        )
    )
    x = np.array([0.2, -0.3, 0.5, 0.1])
    ps = sample_psi(cfg, x, ORDER)
    phi, dphi = phi_from_psi(ps, 1.0)
    jac = phi_jacobian(ps.psi, 1.0)
    for comp in range(2):
        for mu in range(4):
            chain = Jet.zero(ORDER)
            for l in range(3):
                chain = chain + jac[comp][l] * ps.dpsi[l][mu]
            assert dphi[comp][mu].max_abs_diff(chain) <= 1e-12


def _phi_of(psi, R):
    r = R / math.sqrt(1.0 + float(psi @ psi))
    return np.array([r * (1 + 1j * psi[2]), r * (psi[1] + 1j * psi[0])])


def _psi_of(phi):
    r = phi[0].real
    return np.array([phi[1].imag / r, phi[1].real / r, phi[0].imag / r])


def test_generator_vector_fields_are_flow_pushforwards():
    """X_a must be the time derivative of the coordinate flow induced by
    exp(t T_a) on the embedded sphere (the convention-fixing oracle)."""
    rng = np.random.default_rng(2)
    mats = {
        name: np.array(
            [
                [generator(k, ORDER, jval=1.0).matrix[r, c].grade(0)
                 for c in range(2)]
                for r in range(2)
            ]
        )
        for k, name in ((1, "T1"), (2, "T2"), (3, "T3"))
    }
    mats["Y"] = np.array(
        [[hypercharge_matrix(ORDER)[r, c].grade(0) for c in range(2)]
         for r in range(2)]
    )
    h = 1e-6
    for _ in range(5):
        psi = rng.normal(size=3) * 0.6
        phi = _phi_of(psi, 1.4)
        jets = [Jet.const(complex(p), ORDER) for p in psi]
        for name, m in mats.items():
            flowed = (
                _psi_of(expm(h * m) @ phi) - _psi_of(expm(-h * m) @ phi)
            ) / (2 * h)
            analytic = [x.grade(0).real for x in
                        generator_vector_field(name, jets)]
            assert np.allclose(flowed, analytic, atol=1e-8)


def test_generator_jacobians_match_finite_differences():
    rng = np.random.default_rng(3)
    psi = rng.normal(size=3) * 0.7
    h = 1e-6
    for name in ("T1", "T2", "T3", "Y"):
        jets = [Jet.const(complex(p), ORDER) for p in psi]
        jac = generator_vector_jacobian(name, jets)
        for l in range(3):
            up = psi.copy()
            up[l] += h
            dn = psi.copy()
            dn[l] -= h
            fd = (
                np.array([x.grade(0) for x in generator_vector_field(
                    name, [Jet.const(complex(p), ORDER) for p in up])])
                - np.array([x.grade(0) for x in generator_vector_field(
                    name, [Jet.const(complex(p), ORDER) for p in dn])])
            ) / (2 * h)
            for k in range(3):
                assert abs(jac[k][l].grade(0) - fd[k]) <= 1e-8


def _bracket(a, b, v):
    xa = generator_vector_field(a, v)
    xb = generator_vector_field(b, v)
    ja = generator_vector_jacobian(a, v)
    jb = generator_vector_jacobian(b, v)
    out = []
    for k in range(3):
        t = Jet.zero(v[0].order)
        for l in range(3):
            t = t + xa[l] * jb[k][l] - xb[l] * ja[k][l]
        out.append(t)
    return out


def test_vector_field_bracket_table():
    """Pushforwards of a left action realize the opposite algebra:
    [X1,X2] = +X3 cyclic (the matrix bracket gives -T3), and the
    hypercharge field commutes with all three."""
    rng = np.random.default_rng(4)
    v = [Jet.const(complex(rng.normal()), ORDER) for _ in range(3)]
    cyclic = {("T1", "T2"): "T3", ("T2", "T3"): "T1", ("T3", "T1"): "T2"}
    for (a, b), cname in cyclic.items():
        br = _bracket(a, b, v)
        expected = generator_vector_field(cname, v)
        for k in range(3):
            assert br[k].max_abs_diff(expected[k]) <= 1e-12
    for a in ("T1", "T2", "T3"):
        br = _bracket(a, "Y", v)
        for k in range(3):
            assert br[k].max_abs_diff(Jet.zero(ORDER)) <= 1e-12


def test_psi_generator_action_grading():
    v = [Jet.const(0.3, ORDER), Jet.const(-0.2, ORDER), Jet.const(0.5, ORDER)]
    for name, grade in (("T1", 1), ("T2", 1), ("T3", 0), ("Y", 0)):
        action = psi_generator_action(name, v)
        plain = generator_vector_field(name, v)
        for k in range(3):
            assert action[k].grade(grade) == pytest.approx(
                plain[k].grade(0), abs=1e-14
            )


def test_zero_parameter_gauge_transform_is_identity():
    rng = np.random.default_rng(5)
    c = Couplings(g=0.65, gp=0.35, R=1.0)
    gauge = GaugeConfig(
        tuple(
            tuple(PlaneWave(0.2, tuple(rng.normal(size=4)), 0.0) for _ in range(4))
            for _ in range(3)
        ),
        tuple(PlaneWave(0.2, tuple(rng.normal(size=4)), 0.0) for _ in range(4)),
    )
    psicfg = PsiConfig(
        tuple(PlaneWave(0.2, tuple(rng.normal(size=4)), 0.0) for _ in range(3))
    )
    x = np.array([0.1, 0.2, -0.3, 0.4])
    gs = sample_gauge(gauge, x, ORDER)
    ps = sample_psi(psicfg, x, ORDER)
    eps = EpsConfig(tuple(Polynomial() for _ in range(4)))
    gs2, ps2 = infinitesimal_gauge_transform(gs, ps, eps, x, c)
    for k in range(3):
        for mu in range(4):
            assert gs2.a[k][mu].max_abs_diff(gs.a[k][mu]) == 0.0
    for k in range(3):
        assert ps2.psi[k].max_abs_diff(ps.psi[k]) == 0.0
