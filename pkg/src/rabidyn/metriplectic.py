"""Metric extensions of the Poisson realizations.

Two constructions are implemented, both producing a symmetric-bracket leg
g(x) that is added to a Hamiltonian flow P grad(h):

* first kind:  g built from a single function h,
      g_ii = -sum_{k != i} (dh/dx_k)^2,   g_ij = (dh/dx_i)(dh/dx_j),
  which satisfies g grad(h) = 0 identically, so the combined flow
  P grad(h) + g grad(h) coincides with the conservative one;

* second kind: g built from a function pair (h, c),
      g_ii = -sum_{k != i} (dh/dx_k)(dc/dx_k),   g_ij = (dh/dx_i)(dc/dx_j),
  for which grad(c) . g grad(c) = 0 and
      grad(h) . g grad(c) = |grad h|^2 |grad c|^2 - (grad h . grad c)^2 >= 0,
  so the combined flow P grad(h) + g grad(c) preserves c and cannot
  decrease h.

The module also carries literal tabulated forms (metric tables, two revised
systems, their linearization matrices and characteristic coefficients) that
circulate with this construction.  They are retained verbatim as fixtures;
where a table disagrees with the defining formulas the verification suite
documents the discrepancy instead of silently repairing either side.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import DomainError, VectorField
from .poisson import C1, H1, P1, PoissonTensor, Quadratic

__all__ = [
    "metric_from_gradient",
    "metric_first_kind",
    "metric_second_kind",
    "literal_metric_first_kind",
    "literal_metric_second_kind",
    "MetriplecticSystem",
    "first_kind_system",
    "second_kind_system",
    "literal_first_kind_field",
    "literal_second_kind_field",
    "LITERAL_FIRST_KIND",
    "LITERAL_SECOND_KIND",
    "literal_linearization",
    "literal_char_coeffs",
]


def metric_from_gradient(grad: np.ndarray) -> np.ndarray:
    """First-kind metric from a gradient vector: off-diagonal outer products,
    diagonal chosen so the matrix annihilates the gradient."""
    g = np.outer(grad, grad)
    np.fill_diagonal(g, 0.0)
    for i in range(3):
        g[i, i] = -sum(grad[k] * grad[k] for k in range(3) if k != i)
    return g


def metric_first_kind(h: Quadratic, x, xt=None) -> np.ndarray:
    return metric_from_gradient(h.grad_x(x, xt))


def metric_second_kind(h: Quadratic, c: Quadratic, x, xt=None, symmetrize: bool = False) -> np.ndarray:
    """Second-kind metric from the pair (h, c); non-symmetric as defined.

    ``symmetrize=True`` returns (g + g^T)/2 instead.
    """
    gh = h.grad_x(x, xt)
    gc = c.grad_x(x, xt)
    g = np.outer(gh, gc)
    np.fill_diagonal(g, 0.0)
    for i in range(3):
        g[i, i] = -sum(gh[k] * gc[k] for k in range(3) if k != i)
    if symmetrize:
        g = 0.5 * (g + g.T)
    return g


def literal_metric_first_kind(x) -> np.ndarray:
    """First-kind metric table as circulated (note the zero (3,3) entry; the
    defining formula gives -(x1^2 + x2^2) there)."""
    x1, x2, _ = np.asarray(x, dtype=float)
    return np.array(
        [
            [-x2 * x2, x1 * x2, 0.0],
            [x1 * x2, -x1 * x1, 0.0],
            [0.0, 0.0, 0.0],
        ]
    )


def literal_metric_second_kind(x) -> np.ndarray:
    """Second-kind metric table as circulated (zero (3,3) entry; the defining
    formula gives -x2^2 there)."""
    x1, x2, x3 = np.asarray(x, dtype=float)
    return np.array(
        [
            [-x2 * x2, x1 * x2, x1 * x3],
            [0.0, 0.0, x2 * x3],
            [0.0, 0.0, 0.0],
        ]
    )


@dataclass(frozen=True)
class MetriplecticSystem:
    """Flow x' = P grad(h) + g grad(leg), with g from one of the builders.

    ``kind`` selects the metric: "first" (g from h, leg = h), "second"
    (g from (h, c), leg = c), "literal-first" or "literal-second" (tabulated
    g; leg = h resp. c).
    """

    P: PoissonTensor
    h: Quadratic
    kind: str = "first"
    c: Optional[Quadratic] = None
    symmetrize: bool = False

    def __post_init__(self):
        if self.kind not in ("first", "second", "literal-first", "literal-second"):
            raise DomainError(f"unknown metric kind {self.kind!r}")
        if self.kind in ("second", "literal-second") and self.c is None:
            raise DomainError(f"metric kind {self.kind!r} needs the function pair (h, c)")

    def metric(self, x) -> np.ndarray:
        if self.kind == "first":
            return metric_first_kind(self.h, x)
        if self.kind == "second":
            return metric_second_kind(self.h, self.c, x, symmetrize=self.symmetrize)
        if self.kind == "literal-first":
            return literal_metric_first_kind(x)
        return literal_metric_second_kind(x)

    def _leg(self) -> Quadratic:
        return self.h if self.kind in ("first", "literal-first") else self.c

    def field(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return self.P.eval(x) @ self.h.grad_x(x) + self.metric(x) @ self._leg().grad_x(x)

    def jacobian(self, x) -> np.ndarray:
        """Exact Jacobian of the combined flow (formula metrics only)."""
        if self.kind not in ("first", "second"):
            raise DomainError("exact jacobian implemented for formula metrics only")
        x = np.asarray(x, dtype=float)
        leg = self._leg()
        Ah = self.h.Q[:3, :3]
        Ac = leg.Q[:3, :3]
        gh = self.h.grad_x(x)
        gc = leg.grad_x(x)
        Pm = self.P.eval(x)
        g = self.metric(x)
        J = np.empty((3, 3))
        for k in range(3):
            dP = self.P.coeffs[:, :, k]
            dg = np.outer(Ah[:, k], gc) + np.outer(gh, Ac[:, k])
            for i in range(3):
                dg[i, i] = -sum(
                    Ah[m, k] * gc[m] + gh[m] * Ac[m, k] for m in range(3) if m != i
                )
            if self.symmetrize:
                dg = 0.5 * (dg + dg.T)
            J[:, k] = dP @ gh + Pm @ Ah[:, k] + dg @ gc + g @ Ac[:, k]
        return J

    def as_vector_field(self, name: str, scalar=None) -> VectorField:
        jac = self.jacobian if self.kind in ("first", "second") else None
        return VectorField(name=name, f=self.field, jac=jac, scalar=scalar)


def first_kind_system() -> VectorField:
    """Canonical first-kind flow for (P1, h1); equals the classical field
    because the metric leg vanishes identically."""
    sys = MetriplecticSystem(P=P1, h=H1, kind="first")

    def scalar(x1, x2, x3):
        # P grad(h) + g grad(h) with the g-leg written out; the leg cancels
        # exactly in real arithmetic but is evaluated, not dropped.
        g11 = -(x2 * x2)
        g22 = -(x1 * x1)
        g33 = -(x1 * x1 + x2 * x2)
        g12 = x1 * x2
        r1 = x2 * x3 + g11 * x1 + g12 * x2
        r2 = -x1 * x3 + g12 * x1 + g22 * x2
        r3 = x1 * x2 + g33 * 0.0
        return (r1, r2, r3)

    return sys.as_vector_field("metriplectic-first", scalar=scalar)


def second_kind_system() -> VectorField:
    """Canonical second-kind flow for (P1, h1, c1):

        x1' = x2 x3 + x1 (x2^2 + x3^2)
        x2' = -x1 x3 + x2 x3^2
        x3' = x1 x2 - x2^2 x3
    """
    sys = MetriplecticSystem(P=P1, h=H1, kind="second", c=C1)

    def scalar(x1, x2, x3):
        r1 = x2 * x3 + (x1 * x2) * x2 + (x1 * x3) * x3
        r2 = -x1 * x3 + (x2 * x3) * x3
        r3 = x1 * x2 - (x2 * x2) * x3
        return (r1, r2, r3)

    return sys.as_vector_field("metriplectic-second", scalar=scalar)


def literal_first_kind_field(x) -> np.ndarray:
    """Revised first-kind system as circulated:

        x1' = x2 x3 + x1 x2 (x1 - x2)
        x2' = -x1 x3 + x1^2
        x3' = x1 x2

    Not reproduced by the first-kind construction (whose metric leg
    vanishes), and not stationary on the e1 family; both facts are
    documented by the verification suite.
    """
    x1, x2, x3 = np.asarray(x, dtype=float)
    return np.array([x2 * x3 + x1 * x2 * (x1 - x2), -x1 * x3 + x1 * x1, x1 * x2])


def _literal_first_jac(x) -> np.ndarray:
    x1, x2, x3 = np.asarray(x, dtype=float)
    return np.array(
        [
            [2.0 * x1 * x2 - x2 * x2, x3 + x1 * x1 - 2.0 * x1 * x2, x2],
            [-x3 + 2.0 * x1, 0.0, -x1],
            [x2, x1, 0.0],
        ]
    )


def literal_second_kind_field(x) -> np.ndarray:
    """Revised second-kind system as circulated:

        x1' = x2 x3 + x1 (x2^2 + x3^2)
        x2' = -x1 x3 + x2 x3
        x3' = x1 x2

    The x2 dissipative term is x2 x3 where the construction gives x2 x3^2,
    and x3' omits the -x2^2 x3 leg; the verification suite documents the
    mismatch against :func:`second_kind_system`.
    """
    x1, x2, x3 = np.asarray(x, dtype=float)
    return np.array(
        [x2 * x3 + x1 * (x2 * x2 + x3 * x3), -x1 * x3 + x2 * x3, x1 * x2]
    )


def _literal_second_jac(x) -> np.ndarray:
    x1, x2, x3 = np.asarray(x, dtype=float)
    return np.array(
        [
            [x2 * x2 + x3 * x3, x3 + 2.0 * x1 * x2, x2 + 2.0 * x1 * x3],
            [-x3, x3, -x1 + x2],
            [x2, x1, 0.0],
        ]
    )


LITERAL_FIRST_KIND = VectorField(
    name="literal38",
    f=literal_first_kind_field,
    jac=_literal_first_jac,
    scalar=lambda x1, x2, x3: (
        x2 * x3 + x1 * x2 * (x1 - x2),
        -x1 * x3 + x1 * x1,
        x1 * x2,
    ),
)

LITERAL_SECOND_KIND = VectorField(
    name="literal10",
    f=literal_second_kind_field,
    jac=_literal_second_jac,
    scalar=lambda x1, x2, x3: (
        x2 * x3 + x1 * (x2 * x2 + x3 * x3),
        -x1 * x3 + x2 * x3,
        x1 * x2,
    ),
)


def literal_linearization(system: str, family_id: str, m: float) -> np.ndarray:
    """Tabulated linearization matrices for the two revised systems.

    ``system`` is "literal38" or "literal10".  The "literal38" E1 table
    disagrees with direct differentiation of that system's right-hand side
    (rows (2,1) and (2,3)); the rest coincide.
    """
    tables = {
        ("literal38", "E1"): [[0.0, m * m, 0.0], [0.0, 0.0, m * m + m], [0.0, m, 0.0]],
        ("literal38", "E2"): [[-m * m, 0.0, m], [0.0, 0.0, 0.0], [m, 0.0, 0.0]],
        ("literal38", "E3"): [[0.0, m, 0.0], [-m, 0.0, 0.0], [0.0, 0.0, 0.0]],
        ("literal10", "E1"): [[0.0, 0.0, 0.0], [0.0, 0.0, -m], [0.0, m, 0.0]],
        ("literal10", "E2"): [[m * m, 0.0, m], [0.0, 0.0, m], [m, 0.0, 0.0]],
        ("literal10", "E3"): [[m * m, m, 0.0], [-m, m, 0.0], [0.0, 0.0, 0.0]],
    }
    key = (system, family_id)
    if key not in tables:
        raise DomainError(f"no tabulated linearization for {key}")
    return np.array(tables[key])


def literal_char_coeffs(system: str, family_id: str, m: float) -> np.ndarray:
    """Tabulated characteristic coefficients [1, c2, c1, c0] of the revised
    systems at the axis equilibria.  The "literal10" E3 constant term is m^2
    where differentiation of that system gives m^3 + m^2."""
    tables = {
        ("literal38", "E1"): [1.0, 0.0, -m * m * (m + 1.0), 0.0],
        ("literal38", "E2"): [1.0, m * m, -m * m, 0.0],
        ("literal38", "E3"): [1.0, 0.0, m * m, 0.0],
        ("literal10", "E1"): [1.0, 0.0, m * m, 0.0],
        ("literal10", "E2"): [1.0, -m * m, -m * m, 0.0],
        ("literal10", "E3"): [1.0, -(m + m * m), m * m, 0.0],
    }
    key = (system, family_id)
    if key not in tables:
        raise DomainError(f"no tabulated characteristic coefficients for {key}")
    return np.array(tables[key])
