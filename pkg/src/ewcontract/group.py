"""The contracted gauge group SU(2;j), its Lie algebra, U(1) and U(1)_em.

Generators carry the contraction parameter explicitly: T1 and T2 are
multiplied by j, T3 is not. Group elements are 2x2 jet matrices; the
exponential map is computed as a truncated matrix-exponential series, with
closed forms (diagonal subgroup, nilpotent off-diagonal formula, standard
SU(2) formula at j=1) available as cross-checks.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np

from .jets import DEFAULT_ORDER, ContractionMode, Jet, JetMatrix2, jet_cos, jet_sin

PAULI = (
    np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
)

#: grade carried by each generator under contraction (T1, T2 pick up j)
GENERATOR_GRADE = {1: 1, 2: 1, 3: 0}

EXP_SERIES_TERMS = 20


@dataclass(frozen=True)
class AlgebraElement:
    """Element a1*T1(j) + a2*T2(j) + a3*T3(j) of su(2;j)."""

    a1: float
    a2: float
    a3: float
    matrix: JetMatrix2 = field(compare=False)

    @property
    def coefficients(self) -> Tuple[float, float, float]:
        return (self.a1, self.a2, self.a3)


@dataclass(frozen=True)
class GroupElement:
    """Element of SU(2;j) (or of U(1)/U(1)_em acting on the same space)."""

    matrix: JetMatrix2
    provenance: str = "product"

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(self.matrix * other.matrix, "product")


def jparam(order: int = DEFAULT_ORDER, jval: float | None = None) -> Jet:
    """The contraction parameter as a jet: the formal variable j by default,
    or a plain number (an untruncated numeric-j run) when jval is given."""
    if jval is None:
        return Jet.variable(order)
    return Jet.const(jval, order)


def generator(k: int, order: int = DEFAULT_ORDER,
              jval: float | None = None) -> AlgebraElement:
    """T_k(j): T1(j)=j(i/2)tau1, T2(j)=j(i/2)tau2, T3(j)=(i/2)tau3."""
    if k not in (1, 2, 3):
        raise ValueError("generator index must be 1, 2 or 3")
    coeffs = [0.0, 0.0, 0.0]
    coeffs[k - 1] = 1.0
    return algebra_element(*coeffs, order=order, jval=jval)


def algebra_element(
    a1: float, a2: float, a3: float, order: int = DEFAULT_ORDER,
    jval: float | None = None
) -> AlgebraElement:
    """General element sum_k a_k T_k(j), realized as an anti-hermitian matrix
    with grade-1 off-diagonal and grade-0 diagonal entries."""
    j = jparam(order, jval)
    half_i = 0.5j
    m = JetMatrix2(
        [
            [
                Jet.const(half_i * a3, order),
                j * (half_i * (a1 - 1j * a2)),
            ],
            [
                j * (half_i * (a1 + 1j * a2)),
                Jet.const(-half_i * a3, order),
            ],
        ]
    )
    return AlgebraElement(a1, a2, a3, m)


def commutator_table(order: int = DEFAULT_ORDER) -> Dict[Tuple[int, int], JetMatrix2]:
    """All nine commutators [T_k(j), T_l(j)] as jet matrices.

    The closed-form table is [T1,T2] = -j^2 T3, [T3,T1] = -T2,
    [T2,T3] = -T1 (antisymmetric completion); at nilpotent j the first
    commutator vanishes through grade 1.
    """
    gens = {k: generator(k, order).matrix for k in (1, 2, 3)}
    return {
        (k, l): gens[k].commutator(gens[l]) for k in (1, 2, 3) for l in (1, 2, 3)
    }


def one_param(k: int, angle: float, order: int = DEFAULT_ORDER,
              jval: float | None = None) -> GroupElement:
    """One-parameter subgroup element exp(angle * T_k(j)).

    For k=1,2 the entries are the series of cos(j*angle/2), sin(j*angle/2);
    k=3 is the diagonal phase subgroup, untouched by contraction. A numeric
    jval replaces the series by exact cos/sin values at j=jval.
    """
    if k not in (1, 2, 3):
        raise ValueError("subgroup index must be 1, 2 or 3")
    half = angle / 2.0
    if k == 3:
        m = JetMatrix2.from_array(
            [[cmath.exp(0.5j * angle), 0.0], [0.0, cmath.exp(-0.5j * angle)]], order
        )
    else:
        if jval is None:
            c = jet_cos(half, order)
            s = jet_sin(half, order)
        else:
            c = Jet.const(math.cos(jval * half), order)
            s = Jet.const(math.sin(jval * half), order)
        if k == 1:
            m = JetMatrix2([[c, 1j * s], [1j * s, c]])
        else:
            m = JetMatrix2([[c, s], [-s, c]])
    return GroupElement(m, f"one_param({k})")


def exp_series(a1: float, a2: float, a3: float, order: int = DEFAULT_ORDER,
               terms: int = EXP_SERIES_TERMS, jval: float | None = None) -> JetMatrix2:
    """Truncated matrix-exponential series of the general algebra element.

    This is the normative exponential: closed forms are cross-checked
    against it, never the other way around.
    """
    t = algebra_element(a1, a2, a3, order, jval=jval).matrix
    result = JetMatrix2.identity(order)
    power = JetMatrix2.identity(order)
    fact = 1.0
    for n in range(1, terms + 1):
        fact *= n
        power = power * t
        result = result + power.scale(1.0 / fact)
    return result


def exp_general(a1: float, a2: float, a3: float, order: int = DEFAULT_ORDER,
                jval: float | None = None) -> GroupElement:
    """Exponential map su(2;j) -> SU(2;j) via the truncated series."""
    for a in (a1, a2, a3):
        if not math.isfinite(a):
            raise ValueError("algebra coordinates must be finite")
    return GroupElement(exp_series(a1, a2, a3, order, jval=jval), "exponential")


def exp_closed_nilpotent(a1: float, a2: float, a3: float,
                         order: int = DEFAULT_ORDER) -> JetMatrix2:
    """Closed form of exp(T(iota)): diagonal phases e^{+-i a3/2} with
    grade-1 off-diagonal entries i*(conj(a)/a3)*sin(a3/2) and
    i*(a/a3)*sin(a3/2), a = a1 + i a2.

    Only grades 0 and 1 are meaningful; a3=0 is a removable singularity of
    this form (use the series exponential there).
    """
    if a3 == 0.0:
        raise ValueError("closed nilpotent form is singular at a3=0; use exp_general")
    j = Jet.variable(order)
    a = a1 + 1j * a2
    s = math.sin(a3 / 2.0)
    return JetMatrix2(
        [
            [
                Jet.const(cmath.exp(0.5j * a3), order),
                j * (1j * (a.conjugate() / a3) * s),
            ],
            [
                j * (1j * (a / a3) * s),
                Jet.const(cmath.exp(-0.5j * a3), order),
            ],
        ]
    )


def exp_closed_su2(a1: float, a2: float, a3: float) -> np.ndarray:
    """Standard SU(2) closed exponential at j=1 (numeric cross-check):
    exp(i/2 * a.tau) = cos(|a|/2) 1 + i sin(|a|/2) (a.tau)/|a|."""
    a = np.array([a1, a2, a3])
    norm = float(np.linalg.norm(a))
    if norm == 0.0:
        return np.eye(2, dtype=complex)
    atau = sum(a[i] * PAULI[i] for i in range(3))
    return math.cos(norm / 2) * np.eye(2) + 1j * math.sin(norm / 2) * atau / norm


def u1_element(beta: float, order: int = DEFAULT_ORDER) -> GroupElement:
    """U(1) hypercharge element exp(beta*Y) = diag(e^{i beta/2}, e^{i beta/2})."""
    phase = cmath.exp(0.5j * beta)
    return GroupElement(
        JetMatrix2.from_array([[phase, 0.0], [0.0, phase]], order), "u1"
    )


def u1em_element(gamma: float, order: int = DEFAULT_ORDER) -> GroupElement:
    """Electromagnetic subgroup element exp(gamma*Q) = diag(e^{i gamma}, 1),
    with charge Q = Y + T3."""
    return GroupElement(
        JetMatrix2.from_array([[cmath.exp(1j * gamma), 0.0], [0.0, 1.0]], order),
        "u1em",
    )


def hypercharge_matrix(order: int = DEFAULT_ORDER) -> JetMatrix2:
    """Y = (i/2) 1."""
    return JetMatrix2.from_array([[0.5j, 0.0], [0.0, 0.5j]], order)


@dataclass(frozen=True)
class MatterDoublet:
    """Point in the fibered matter space: ungraded components (phi1, phi2)
    and their graded image (phi1, j*phi2)."""

    phi1: complex
    phi2: complex
    order: int = DEFAULT_ORDER

    @property
    def graded(self) -> Tuple[Jet, Jet]:
        j = Jet.variable(self.order)
        return (Jet.const(self.phi1, self.order), j * self.phi2)


def hermitian_form_jets(x: Tuple[Jet, Jet], y: Tuple[Jet, Jet]) -> Jet:
    """Invariant form on graded doublets; for graded inputs this equals
    conj(x1)y1 + j^2 conj(x2)y2 automatically."""
    return x[0].conjugate() * y[0] + x[1].conjugate() * y[1]


def hermitian_form(x: MatterDoublet, y: MatterDoublet) -> Jet:
    return hermitian_form_jets(x.graded, y.graded)


def apply_group(u: GroupElement, d: MatterDoublet) -> Tuple[Jet, Jet]:
    """Action of a group element on the graded image of a doublet."""
    return u.matrix.apply(d.graded)


def random_group_element(rng: np.random.Generator, order: int = DEFAULT_ORDER,
                         factors: int = 3, jval: float | None = None) -> GroupElement:
    """Product of one-parameter elements with angles uniform in [-pi, pi]."""
    u = GroupElement(JetMatrix2.identity(order), "product")
    for _ in range(factors):
        k = int(rng.integers(1, 4))
        angle = float(rng.uniform(-math.pi, math.pi))
        u = u * one_param(k, angle, order, jval=jval)
    return u
