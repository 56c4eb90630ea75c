"""Named verification suites over the algebra, group, Lagrangian and
spectrum layers.

Each suite is a pure function from a RunConfig to a SuiteResult; the
registry maps stable suite names to these functions so the CLI and the
test harness agree on what "the algebra suite" means. Every suite states
its own default tolerance; RunConfig can override any of them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np

from .fields import (
    ConfigError,
    Couplings,
    EpsConfig,
    FermionConfig,
    PsiConfig,
    phi_from_psi,
    sample_fermions,
    sample_gauge,
    sample_psi,
    infinitesimal_gauge_transform,
)
from .group import (
    MatterDoublet,
    apply_group,
    exp_closed_nilpotent,
    exp_closed_su2,
    exp_series,
    generator,
    hermitian_form_jets,
    random_group_element,
)
from .jets import DEFAULT_ORDER, ContractionMode, Jet, JetMatrix2
from .lagrangian import (
    fermion_mass_identity,
    lagrangian_bosonic,
    lagrangian_phi,
    lagrangian_psi,
)
from .spectrum import (
    LIMIT_T_VALUES,
    cubic_check,
    limit_consistency,
    mass_spectrum,
    quadratic_check,
    random_bosonic_config,
    random_plane_wave,
)

SCHEMA_VERSION = "1.0"


@dataclass(frozen=True)
class RunConfig:
    """Everything a suite run depends on; the seed is echoed into every
    report so runs stay reproducible."""

    couplings: Couplings
    mode: ContractionMode = field(default_factory=ContractionMode.unit)
    order: int = DEFAULT_ORDER
    seed: int = 0
    suites: Tuple[str, ...] = ()
    sample_counts: Dict[str, int] = field(default_factory=dict)
    tolerances: Dict[str, float] = field(default_factory=dict)

    def samples(self, key: str, default: int) -> int:
        return int(self.sample_counts.get(key, default))

    def tol(self, key: str, default: float) -> float:
        return float(self.tolerances.get(key, default))


@dataclass
class SuiteResult:
    name: str
    passed: bool
    residual: float
    tolerance: float
    details: dict

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "details": self.details,
        }


def _low_grade_diff(x: Jet, y: Jet) -> float:
    """Largest coefficient difference on grades 0 and 1 (the grades that
    survive nilpotent arithmetic)."""
    return max(abs(x.grade(0) - y.grade(0)), abs(x.grade(1) - y.grade(1)))


def _matrix_low_grade_diff(x: JetMatrix2, y: JetMatrix2) -> float:
    return max(
        _low_grade_diff(x[r, c], y[r, c]) for r in range(2) for c in range(2)
    )


# ---------------------------------------------------------------------------
# algebra
# ---------------------------------------------------------------------------


def suite_algebra(cfg: RunConfig) -> SuiteResult:
    """Closed-form commutator table, grade by grade, plus the nilpotent
    collapse of [T1, T2]."""
    order = cfg.order
    tol = cfg.tol("algebra", 1.0e-12)
    gens = {k: generator(k, order).matrix for k in (1, 2, 3)}
    j = Jet.variable(order)
    zero = JetMatrix2.zero(order)
    expected = {
        (1, 2): gens[3].scale(-(j * j)),
        (2, 3): gens[1].scale(-1.0),
        (3, 1): gens[2].scale(-1.0),
    }
    residual = 0.0
    for k in (1, 2, 3):
        residual = max(residual, gens[k].commutator(gens[k]).max_abs_diff(zero))
    for (k, l), rhs in expected.items():
        comm = gens[k].commutator(gens[l])
        residual = max(residual, comm.max_abs_diff(rhs))
        flipped = gens[l].commutator(gens[k])
        residual = max(residual, flipped.max_abs_diff(rhs.scale(-1.0)))
    nilpotent_resid = _matrix_low_grade_diff(
        gens[1].commutator(gens[2]), zero
    )
    residual = max(residual, nilpotent_resid)
    return SuiteResult(
        "algebra",
        residual <= tol,
        residual,
        tol,
        {"nilpotent_t1_t2": nilpotent_resid},
    )


# ---------------------------------------------------------------------------
# group
# ---------------------------------------------------------------------------


def suite_group(cfg: RunConfig) -> SuiteResult:
    """Unitarity and unimodularity of random products, and the closed
    exponential forms against the series exponential."""
    order = cfg.order
    tol = cfg.tol("group", 1.0e-12)
    count = cfg.samples("group", 1000)
    rng = np.random.default_rng(cfg.seed)
    identity = JetMatrix2.identity(order)
    one = Jet.const(1.0, order)
    unitarity = 0.0
    det_resid = 0.0
    for _ in range(count):
        u = random_group_element(rng, order).matrix
        unitarity = max(unitarity, (u * u.dagger()).max_abs_diff(identity))
        det_resid = max(det_resid, u.det().max_abs_diff(one))

    closed_resid = 0.0
    for _ in range(20):
        a = rng.uniform(-2.0, 2.0, size=3)
        if abs(a[2]) < 0.1:
            a[2] = 0.5
        series = exp_series(*a, order=order)
        closed_resid = max(
            closed_resid,
            _matrix_low_grade_diff(exp_closed_nilpotent(*a, order=order), series),
        )
        su2 = exp_closed_su2(*a)
        series_at_one = exp_series(*a, order=order, jval=1.0)
        su2_resid = max(
            abs(series_at_one[r, c].grade(0) - su2[r][c])
            for r in range(2)
            for c in range(2)
        )
        closed_resid = max(closed_resid, su2_resid)

    residual = max(unitarity, det_resid, closed_resid)
    return SuiteResult(
        "group",
        residual <= tol,
        residual,
        tol,
        {
            "unitarity": unitarity,
            "determinant": det_resid,
            "closed_exponentials": closed_resid,
            "product_samples": count,
        },
    )


# ---------------------------------------------------------------------------
# invariance (hermitian form and Lagrangian gauge variation)
# ---------------------------------------------------------------------------


def _gauge_variation(
    c: Couplings,
    rng: np.random.Generator,
    order: int,
    scale: float,
    jval: Optional[float],
) -> Jet:
    gauge, psicfg = random_bosonic_config(rng, amplitude=0.1)
    eps = EpsConfig(tuple(random_plane_wave(rng, 0.1) for _ in range(4)))
    x = rng.uniform(-0.5, 0.5, size=4)
    gs = sample_gauge(gauge, x, order, jval)
    ps = sample_psi(psicfg, x, order, jval)
    before = lagrangian_bosonic(gs, ps, c).value
    gs2, ps2 = infinitesimal_gauge_transform(
        gs, ps, eps.scaled(scale), x, c, jval
    )
    after = lagrangian_bosonic(gs2, ps2, c).value
    return after - before


def suite_invariance(cfg: RunConfig) -> SuiteResult:
    """Hermitian-form preservation under random group elements, and the
    quadratic smallness of the Lagrangian's gauge variation (halving the
    variation parameter must quarter the change)."""
    order = cfg.order
    tol_form = cfg.tol("invariance_form", 1.0e-12)
    tol_ratio = cfg.tol("invariance_ratio", 0.05)
    rng = np.random.default_rng(cfg.seed + 1)

    form_resid = 0.0
    for _ in range(cfg.samples("invariance_form", 100)):
        d = MatterDoublet(
            complex(rng.normal(), rng.normal()),
            complex(rng.normal(), rng.normal()),
            order,
        )
        reference = hermitian_form_jets(d.graded, d.graded)
        u = random_group_element(rng, order)
        moved = apply_group(u, d)
        transformed = hermitian_form_jets(moved, moved)
        form_resid = max(form_resid, transformed.max_abs_diff(reference))
        u1 = random_group_element(rng, order, jval=1.0)
        moved1 = apply_group(u1, d)
        form_resid = max(
            form_resid,
            hermitian_form_jets(moved1, moved1).max_abs_diff(reference),
        )

    c = cfg.couplings
    base_scale = 1.0e-3
    worst_ratio_err = 0.0
    configs = cfg.samples("invariance_gauge", 20)
    for _ in range(configs):
        state = rng.bit_generator.state
        for jval in (1.0, None, 0.1):
            rng.bit_generator.state = state
            delta_full = _gauge_variation(c, rng, order, base_scale, jval)
            rng.bit_generator.state = state
            delta_half = _gauge_variation(c, rng, order, base_scale / 2.0, jval)
            if jval is None:
                dev_full = max(abs(delta_full.grade(0)), abs(delta_full.grade(1)))
                dev_half = max(abs(delta_half.grade(0)), abs(delta_half.grade(1)))
            else:
                dev_full = abs(delta_full.grade(0))
                dev_half = abs(delta_half.grade(0))
            if dev_half == 0.0:
                continue
            ratio = dev_full / dev_half
            worst_ratio_err = max(worst_ratio_err, abs(ratio - 4.0) / 4.0)

    passed = form_resid <= tol_form and worst_ratio_err <= tol_ratio
    return SuiteResult(
        "invariance",
        passed,
        max(form_resid, worst_ratio_err),
        max(tol_form, tol_ratio),
        {
            "hermitian_form_residual": form_resid,
            "hermitian_form_tolerance": tol_form,
            "gauge_ratio_error": worst_ratio_err,
            "gauge_ratio_tolerance": tol_ratio,
            "gauge_configs": configs,
        },
    )


# ---------------------------------------------------------------------------
# coordinate (sphere constraint + doublet/intrinsic equivalence)
# ---------------------------------------------------------------------------


def suite_coordinate(cfg: RunConfig) -> SuiteResult:
    """The embedded doublet sits on the radius-R sphere, and the doublet
    and intrinsic-coordinate matter densities agree grade-wise."""
    order = cfg.order
    tol_sphere = cfg.tol("coordinate_sphere", 1.0e-10)
    tol_equiv = cfg.tol("coordinate_equivalence", 1.0e-10)
    rng = np.random.default_rng(cfg.seed + 2)
    c = cfg.couplings

    sphere_resid = 0.0
    for _ in range(cfg.samples("coordinate_sphere", 100)):
        psicfg = PsiConfig(tuple(random_plane_wave(rng, 0.6) for _ in range(3)))
        x = rng.uniform(-0.5, 0.5, size=4)
        ps = sample_psi(psicfg, x, order)
        phi, _ = phi_from_psi(ps, c.R)
        form = hermitian_form_jets(phi, phi)
        sphere_resid = max(sphere_resid, form.max_abs_diff(c.R**2))

    equiv_resid = 0.0
    displayed_resid = 0.0
    for _ in range(cfg.samples("coordinate_equivalence", 50)):
        gauge, psicfg = random_bosonic_config(rng, amplitude=0.3)
        x = rng.uniform(-0.5, 0.5, size=4)
        gs = sample_gauge(gauge, x, order)
        ps = sample_psi(psicfg, x, order)
        phi, dphi = phi_from_psi(ps, c.R)
        doublet = lagrangian_phi(phi, dphi, gs, c).value
        intrinsic = lagrangian_psi(ps, gs, c)
        scale = max(
            max(abs(g) for g in doublet.coeffs),
            max(abs(g) for g in intrinsic.value.coeffs),
            1.0e-30,
        )
        equiv_resid = max(
            equiv_resid, doublet.max_abs_diff(intrinsic.value) / scale
        )
        displayed_resid = max(
            displayed_resid,
            intrinsic.breakdown["metric_form"].max_abs_diff(
                intrinsic.breakdown["closed_form"]
            )
            / scale,
        )

    residual = max(sphere_resid, equiv_resid, displayed_resid)
    tol = max(tol_sphere, tol_equiv)
    passed = (
        sphere_resid <= tol_sphere
        and equiv_resid <= tol_equiv
        and displayed_resid <= tol_equiv
    )
    return SuiteResult(
        "coordinate",
        passed,
        residual,
        tol,
        {
            "sphere_constraint": sphere_resid,
            "density_equivalence": equiv_resid,
            "displayed_forms": displayed_resid,
        },
    )


# ---------------------------------------------------------------------------
# quadratic (mass spectrum + base/fiber split)
# ---------------------------------------------------------------------------


def suite_quadratic(cfg: RunConfig) -> SuiteResult:
    """Quadratic coefficient vs the diagonalized form, extracted masses vs
    the closed formulas, and base-sector independence from the fiber
    gauge fields."""
    order = cfg.order
    tol_quad = cfg.tol("quadratic_form", 1.0e-8)
    tol_mass = cfg.tol("mass_rel", 1.0e-8)
    tol_zero = cfg.tol("mass_zero", 1.0e-10)
    rng = np.random.default_rng(cfg.seed + 3)
    c = cfg.couplings

    gauge, psicfg = random_bosonic_config(rng)
    quad = quadratic_check(gauge, psicfg, c, seed=cfg.seed, order=order)

    mass_resid = 0.0
    zero_resid = 0.0
    for _ in range(cfg.samples("mass_sets", 10)):
        ci = Couplings(
            g=float(rng.uniform(0.3, 1.2)),
            gp=float(rng.uniform(0.2, 0.8)),
            R=float(rng.uniform(0.4, 2.0)),
            h_e=float(rng.uniform(0.5, 2.5)),
        )
        rep = mass_spectrum(ci, order)
        mass_resid = max(
            mass_resid,
            abs(rep.m_w - rep.closed["m_w"]) / rep.closed["m_w"],
            abs(rep.m_z - rep.closed["m_z"]) / rep.closed["m_z"],
        )
        zero_resid = max(
            zero_resid,
            rep.m_a,
            abs(rep.weinberg_cos - rep.closed["weinberg_cos"]),
        )

    # the fiber fields A^1, A^2 must not feed the grade-0 (base) density
    base_resid = 0.0
    points = rng.uniform(-0.5, 0.5, size=(4, 4))
    rescaled = gauge.scaled(3.0, fiber_only=True)
    for x in points:
        ps = sample_psi(psicfg, x, order)
        g0 = lagrangian_bosonic(sample_gauge(gauge, x, order), ps, c).value
        g1 = lagrangian_bosonic(sample_gauge(rescaled, x, order), ps, c).value
        base_resid = max(base_resid, abs(g0.grade(0) - g1.grade(0)))

    passed = (
        quad["max_rel_diff"] <= tol_quad
        and quad["tadpole_magnitude"] <= tol_zero
        and mass_resid <= tol_mass
        and zero_resid <= tol_zero
        and base_resid == 0.0
    )
    residual = max(
        quad["max_rel_diff"], mass_resid, zero_resid, base_resid,
        quad["tadpole_magnitude"],
    )
    return SuiteResult(
        "quadratic",
        passed,
        residual,
        max(tol_quad, tol_mass),
        {
            "quadratic_rel_diff": quad["max_rel_diff"],
            "tadpole": quad["tadpole_magnitude"],
            "mass_rel_error": mass_resid,
            "massless_residual": zero_resid,
            "base_fiber_leak": base_resid,
        },
    )


# ---------------------------------------------------------------------------
# cubic
# ---------------------------------------------------------------------------


def suite_cubic(cfg: RunConfig) -> SuiteResult:
    """Cubic coefficient: its base part must vanish, its own closed form
    must match, and the literal transcription diffs are reported as data
    (their discrepancy is documented, not patched)."""
    order = cfg.order
    tol_zero = cfg.tol("cubic_grade0", 1.0e-10)
    tol_match = cfg.tol("cubic_match", 1.0e-8)
    rng = np.random.default_rng(cfg.seed + 4)
    gauge, psicfg = random_bosonic_config(rng, amplitude=0.04)
    report = cubic_check(gauge, psicfg, cfg.couplings, seed=cfg.seed, order=order)
    grade0 = abs(report["exact_grade0"])
    normative = report["normative"]["rel_diff"]
    passed = grade0 <= tol_zero and normative <= tol_match
    return SuiteResult(
        "cubic",
        passed,
        max(grade0, normative),
        max(tol_zero, tol_match),
        {
            "exact_grade0": grade0,
            "normative_rel_diff": normative,
            "literal_rel_diff": report["literal"]["rel_diff"],
            "literal_terms": {
                name: abs(rec["grade2"])
                for name, rec in report["literal"]["terms"].items()
            },
            "fit_residual": report["fit_residual"],
        },
    )


# ---------------------------------------------------------------------------
# fermion
# ---------------------------------------------------------------------------


def _grade0_yukawa_oracle(psi3: complex, el: Sequence[complex],
                          er: Sequence[complex], h_e: float,
                          R: float) -> complex:
    """Base part of the Yukawa terms in plain complex arithmetic (only the
    third sphere coordinate and the charged leptons survive at grade 0)."""
    er_el = sum(e.conjugate() * l for e, l in zip(er, el))
    el_er = sum(l.conjugate() * e for l, e in zip(el, er))
    pref = h_e * R / math.sqrt(1.0 + psi3.real**2)
    return pref * (er_el + el_er + 1j * psi3 * (el_er - er_el))


def suite_fermion(cfg: RunConfig) -> SuiteResult:
    """Matrix vs expanded Yukawa forms, the base-part closed formula, the
    extracted electron mass and the massless neutrino."""
    order = cfg.order
    tol_id = cfg.tol("fermion_identity", 1.0e-12)
    tol_mass = cfg.tol("fermion_mass", 1.0e-10)
    rng = np.random.default_rng(cfg.seed + 5)
    c = Couplings(
        g=cfg.couplings.g,
        gp=cfg.couplings.gp,
        R=cfg.couplings.R,
        h_e=cfg.couplings.h_e if cfg.couplings.h_e > 0 else 1.3,
    )

    identity_resid = 0.0
    grade0_resid = 0.0
    for _ in range(cfg.samples("fermion_identity", 50)):
        psicfg = PsiConfig(tuple(random_plane_wave(rng, 0.5) for _ in range(3)))
        fcfg = FermionConfig(
            tuple(random_plane_wave(rng, 1.0) for _ in range(2)),
            tuple(random_plane_wave(rng, 1.0) for _ in range(2)),
            tuple(random_plane_wave(rng, 1.0) for _ in range(2)),
        )
        x = rng.uniform(-0.5, 0.5, size=4)
        ps = sample_psi(psicfg, x, order)
        fs = sample_fermions(fcfg, x, order)
        lhs, rhs = fermion_mass_identity(ps, fs, c)
        identity_resid = max(identity_resid, lhs.max_abs_diff(rhs))
        oracle = _grade0_yukawa_oracle(
            ps.psi[2].grade(0),
            [fs.el[s].grade(0) for s in range(2)],
            [fs.er[s].grade(0) for s in range(2)],
            c.h_e,
            c.R,
        )
        grade0_resid = max(grade0_resid, abs(lhs.grade(0) - oracle))

    rep = mass_spectrum(c, order)
    m_e_err = abs(rep.m_e - c.h_e * c.R) / (c.h_e * c.R)
    nu_coeff = rep.nu_mass_coefficient

    passed = (
        identity_resid <= tol_id
        and grade0_resid <= tol_id
        and m_e_err <= tol_mass
        and nu_coeff == 0.0
    )
    return SuiteResult(
        "fermion",
        passed,
        max(identity_resid, grade0_resid, m_e_err, nu_coeff),
        max(tol_id, tol_mass),
        {
            "yukawa_identity": identity_resid,
            "grade0_oracle": grade0_resid,
            "electron_mass_rel_error": m_e_err,
            "neutrino_mass_coefficient": nu_coeff,
        },
    )


# ---------------------------------------------------------------------------
# limit
# ---------------------------------------------------------------------------


def suite_limit(cfg: RunConfig) -> SuiteResult:
    """Nilpotent arithmetic vs extrapolated small-parameter numeric runs."""
    tol = cfg.tol("limit", 1.0e-6)
    report = limit_consistency(cfg.couplings, seed=cfg.seed, order=cfg.order)
    residual = max(report["max_grade_diff"], report["scaling_exponent_error"])
    return SuiteResult(
        "limit",
        residual <= tol,
        residual,
        tol,
        {
            "max_grade_diff": report["max_grade_diff"],
            "scaling_exponent_error": report["scaling_exponent_error"],
            "t_values": list(LIMIT_T_VALUES),
        },
    )


REGISTRY: Dict[str, Callable[[RunConfig], SuiteResult]] = {
    "algebra": suite_algebra,
    "group": suite_group,
    "invariance": suite_invariance,
    "coordinate": suite_coordinate,
    "quadratic": suite_quadratic,
    "cubic": suite_cubic,
    "fermion": suite_fermion,
    "limit": suite_limit,
}


def run_suites(cfg: RunConfig) -> Dict[str, SuiteResult]:
    """Run the selected suites (all of them for an empty explicit list is
    a configuration error; selection happens upstream)."""
    names = cfg.suites or tuple(REGISTRY)
    unknown = [n for n in names if n not in REGISTRY]
    if unknown:
        raise ConfigError(f"unknown suite name(s): {', '.join(unknown)}")
    return {name: REGISTRY[name](cfg) for name in names}
