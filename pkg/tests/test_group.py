"""Structure of the contracted group: commutator table, exponentials,
invariant form and charge assignments."""

import cmath
import math

import numpy as np
import pytest
from scipy.linalg import expm

from ewcontract.group import (
    MatterDoublet,
    apply_group,
    commutator_table,
    exp_closed_nilpotent,
    exp_closed_su2,
    exp_general,
    exp_series,
    generator,
    hermitian_form,
    hermitian_form_jets,
    hypercharge_matrix,
    one_param,
    random_group_element,
    u1_element,
    u1em_element,
)
from ewcontract.jets import DEFAULT_ORDER, ContractionMode, Jet, JetMatrix2

ORDER = DEFAULT_ORDER
TOL = 1e-12


def test_commutator_table_closed_form():
    table = commutator_table(ORDER)
    gens = {k: generator(k, ORDER).matrix for k in (1, 2, 3)}
    j = Jet.variable(ORDER)
    expected = {
        (1, 2): gens[3].scale(-(j * j)),
        (2, 3): gens[1].scale(-1.0),
        (3, 1): gens[2].scale(-1.0),
    }
    for (k, l), rhs in expected.items():
        assert table[(k, l)].max_abs_diff(rhs) <= TOL
        assert table[(l, k)].max_abs_diff(rhs.scale(-1.0)) <= TOL
    for k in (1, 2, 3):
        assert table[(k, k)].max_abs_diff(JetMatrix2.zero(ORDER)) <= TOL


def test_fiber_commutator_vanishes_at_nilpotent():
    comm = commutator_table(ORDER)[(1, 2)]
    for r in range(2):
        for c in range(2):
            assert abs(comm[r, c].grade(0)) <= TOL
            assert abs(comm[r, c].grade(1)) <= TOL


def test_structure_constants_scale_as_j_squared_numerically():
    for t in (0.5, 0.1):
        comm = generator(1, ORDER, jval=t).matrix.commutator(
            generator(2, ORDER, jval=t).matrix
        )
        rhs = generator(3, ORDER, jval=t).matrix.scale(-(t * t))
        assert comm.max_abs_diff(rhs) <= TOL


def test_exponential_series_against_scipy():
    rng = np.random.default_rng(0)
    for _ in range(10):
        a = rng.uniform(-1.5, 1.5, size=3)
        got = exp_series(*a, order=ORDER, jval=1.0)
        m = np.array(
            [
                [0.5j * a[2], 0.5j * (a[0] - 1j * a[1])],
                [0.5j * (a[0] + 1j * a[1]), -0.5j * a[2]],
            ]
        )
        expected = expm(m)
        diff = max(
            abs(got[r, c].grade(0) - expected[r][c])
            for r in range(2)
            for c in range(2)
        )
        assert diff <= 1e-12


def test_closed_su2_exponential_matches_series():
    rng = np.random.default_rng(1)
    for _ in range(20):
        a = rng.uniform(-2.0, 2.0, size=3)
        series = exp_series(*a, order=ORDER, jval=1.0)
        closed = exp_closed_su2(*a)
        diff = max(
            abs(series[r, c].grade(0) - closed[r][c])
            for r in range(2)
            for c in range(2)
        )
        assert diff <= 1e-12


def test_closed_nilpotent_exponential_matches_series_low_grades():
    rng = np.random.default_rng(2)
    for _ in range(20):
        a = rng.uniform(-2.0, 2.0, size=3)
        if abs(a[2]) < 0.05:
            a[2] = 0.3
        series = exp_series(*a, order=ORDER)
        closed = exp_closed_nilpotent(*a, order=ORDER)
        for r in range(2):
            for c in range(2):
                for n in (0, 1):
                    assert abs(series[r, c].grade(n) - closed[r, c].grade(n)) <= TOL


def test_closed_nilpotent_rejects_singular_input():
    with pytest.raises(ValueError):
        exp_closed_nilpotent(0.4, -0.2, 0.0)


def test_exp_general_rejects_non_finite():
    with pytest.raises(ValueError):
        exp_general(math.nan, 0.0, 0.0)


def test_random_products_are_unitary_and_unimodular():
    rng = np.random.default_rng(3)
    identity = JetMatrix2.identity(ORDER)
    one = Jet.const(1.0, ORDER)
    for _ in range(200):
        u = random_group_element(rng, ORDER).matrix
        assert (u * u.dagger()).max_abs_diff(identity) <= TOL
        assert u.det().max_abs_diff(one) <= TOL


def test_one_param_subgroup_law():
    for k in (1, 2, 3):
        combined = one_param(k, 0.7) * one_param(k, 0.4)
        direct = one_param(k, 1.1)
        assert combined.matrix.max_abs_diff(direct.matrix) <= 1e-12


def test_hermitian_form_invariance_unit_and_nilpotent():
    rng = np.random.default_rng(4)
    for _ in range(50):
        d = MatterDoublet(
            complex(rng.normal(), rng.normal()),
            complex(rng.normal(), rng.normal()),
            ORDER,
        )
        reference = hermitian_form(d, d)
        for jval in (None, 1.0):
            u = random_group_element(rng, ORDER, jval=jval)
            moved = apply_group(u, d)
            assert hermitian_form_jets(moved, moved).max_abs_diff(reference) <= 1e-11


def test_hermitian_form_weights_fiber_by_j_squared():
    d = MatterDoublet(2.0, 3.0, ORDER)
    form = hermitian_form(d, d)
    assert form.grade(0) == pytest.approx(4.0)
    assert form.grade(1) == pytest.approx(0.0)
    assert form.grade(2) == pytest.approx(9.0)


def test_u1_elements_commute_with_everything():
    rng = np.random.default_rng(5)
    y = u1_element(0.9, ORDER)
    for _ in range(10):
        u = random_group_element(rng, ORDER)
        lhs = (y * u).matrix
        rhs = (u * y).matrix
        assert lhs.max_abs_diff(rhs) <= TOL


def test_charge_is_hypercharge_plus_third_generator():
    """exp(gamma Q) must equal exp(gamma Y) exp(gamma T3)."""
    gamma = 0.37
    q = u1em_element(gamma, ORDER).matrix
    combined = (u1_element(gamma, ORDER) * one_param(3, gamma, ORDER)).matrix
    assert q.max_abs_diff(combined) <= TOL


def test_hypercharge_matrix_value():
    y = hypercharge_matrix(ORDER)
    assert y[0, 0].grade(0) == 0.5j
    assert y[1, 1].grade(0) == 0.5j
    assert abs(y[0, 1].grade(0)) == 0.0


def test_electromagnetic_charge_leaves_lower_component_fixed():
    d = MatterDoublet(1.0 + 0.5j, -0.3 + 0.2j, ORDER)
    moved = apply_group(u1em_element(0.61, ORDER), d)
    phi1, phi2 = d.graded
    assert moved[0].max_abs_diff(phi1 * cmath.exp(0.61j)) <= TOL
    assert moved[1].max_abs_diff(phi2) <= TOL
