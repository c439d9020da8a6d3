"""Caputo-order variants and their predictor-corrector integrator.

The solver is the Adams-Bashforth-Moulton scheme for D^alpha x = f(x) with
alpha in (0, 1]: the order-alpha integral equation

    x(t) = x(0) + (1/Gamma(alpha)) integral_0^t (t-s)^(alpha-1) f(x(s)) ds

is discretized with product-rectangle weights b for the predictor and
product-trapezoid weights a for the single corrector pass.  At alpha = 1
the weights specialize exactly to the classical rectangle and trapezoid
rules.  The full f-history enters every step, so one run costs O(n^2);
the weight rows are slices of two precomputed power tables, which keeps
the constant small.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import DomainError, IntegrationError, Trajectory, _eval_monitors
from .delay import BlendWeights, revised_delay_field

__all__ = [
    "validate_order",
    "rl_integral",
    "abm_weights",
    "integrate_abm",
    "fractional_delay_field",
    "literal_fractional_char",
    "computed_fractional_char_coeffs",
]


def validate_order(alpha: float) -> float:
    alpha = float(alpha)
    if not 0.0 < alpha <= 1.0 or not math.isfinite(alpha):
        raise DomainError(f"fractional order must lie in (0, 1], got {alpha}")
    return alpha


def rl_integral(f, beta: float, t: float, n: int = 512) -> float:
    """Order-beta integral of a scalar function over [0, t].

    Product-rectangle quadrature against the kernel (t-s)^(beta-1), using
    the same segment weights as the predictor stage of the solver;
    first-order accurate in t/n, exact for constant f.
    """
    beta = float(beta)
    if beta <= 0:
        raise DomainError("beta must be positive")
    if t < 0:
        raise DomainError("t must be nonnegative")
    if t == 0:
        return 0.0
    if n < 1:
        raise DomainError("n must be at least 1")
    h = t / n
    k = np.arange(n + 1, dtype=float)
    seg = h**beta * (k[1:] ** beta - k[:-1] ** beta) / beta  # weight of node i is seg[n-1-i]
    fv = np.array([float(f(h * i)) for i in range(n)])
    return float(seg[::-1] @ fv / math.gamma(beta))


def abm_weights(alpha: float, dt: float, j: int):
    """Corrector and predictor weight rows for the step to t_(j+1).

    Returns (a_row, b_row): ``b_row[i]`` multiplies f(t_i) in the predictor
    (i = 0..j), ``a_row[i]`` in the corrector (i = 0..j+1, with the final
    entry weighting the predicted point).  Written straight from the
    defining formulas; the integrator's table-sliced rows are checked
    against these.
    """
    alpha = validate_order(alpha)
    if dt <= 0:
        raise DomainError("dt must be positive")
    if j < 0:
        raise DomainError("j must be nonnegative")
    ha = dt**alpha
    i = np.arange(j + 1, dtype=float)
    b_row = ha * ((j - i + 1.0) ** alpha - (j - i) ** alpha) / alpha
    a_row = np.empty(j + 2)
    a_row[0] = ha * (j**(alpha + 1.0) - (j - alpha) * (j + 1.0) ** alpha) / (alpha * (alpha + 1.0))
    ii = np.arange(1, j + 1, dtype=float)
    a_row[1 : j + 1] = (
        ha
        * ((j - ii + 2.0) ** (alpha + 1.0) + (j - ii) ** (alpha + 1.0) - 2.0 * (j - ii + 1.0) ** (alpha + 1.0))
        / (alpha * (alpha + 1.0))
    )
    a_row[j + 1] = ha / (alpha * (alpha + 1.0))
    return a_row, b_row


def _lagrange_delayed(states, dt, t0, tq, j_max, phi_fn):
    """Past-state lookup for the delayed scheme: prescribed data before t0,
    grid value on a node, else polynomial interpolation on up to 4 nodes."""
    pos = (tq - t0) / dt
    k = int(round(pos))
    if abs(pos - k) < 1e-9 and 0 <= k <= j_max:
        return states[k]
    if tq < t0:
        return np.asarray(phi_fn(tq), dtype=float)
    lo = max(0, min(int(math.floor(pos)) - 1, j_max - 3))
    hi = min(j_max, lo + 3)
    ts = t0 + dt * np.arange(lo, hi + 1)
    out = np.zeros(3)
    for a in range(hi - lo + 1):
        w = 1.0
        for b in range(hi - lo + 1):
            if b != a:
                w *= (tq - ts[b]) / (ts[a] - ts[b])
        out += w * states[lo + a]
    return out


def integrate_abm(
    field,
    x0,
    alpha: float,
    dt: float,
    n_steps: int,
    monitors=None,
    tau: float | None = None,
    phi=None,
) -> Trajectory:
    """Solve D^alpha x = field(x) (or field(x, xt) with a point-mass lag
    ``tau`` and past data ``phi``) from x(0) = x0.

    One corrector pass per step.  The delayed variant requires
    dt <= tau/2 so every needed past value is already on the grid.
    """
    alpha = validate_order(alpha)
    if dt <= 0:
        raise DomainError("dt must be positive")
    if n_steps < 1:
        raise DomainError("n_steps must be at least 1")
    x0 = np.asarray(x0, dtype=float)
    if x0.shape != (3,):
        raise DomainError("x0 must have 3 components")
    delayed = tau is not None
    if delayed:
        if tau <= 0:
            raise DomainError("tau must be positive")
        if dt > tau / 2.0 + 1e-15:
            raise DomainError(f"delayed scheme needs dt <= tau/2 = {tau / 2.0} (got dt = {dt})")
        phi_fn = phi if callable(phi) else (lambda _t, _c=np.asarray(phi if phi is not None else x0, dtype=float): _c)

    n = n_steps
    # Power tables shared by every weight row: row j is a reversed slice.
    k = np.arange(n + 2, dtype=float)
    pa = k**alpha
    pa1 = k ** (alpha + 1.0)
    bdiff = pa[1:] - pa[:-1]                     # bdiff[d] ~ b(i, j+1) at d = j-i
    aw = np.empty(n + 1)
    aw[0] = 0.0
    aw[1:] = pa1[2 : n + 2] + pa1[0:n] - 2.0 * pa1[1 : n + 1]  # aw[d] at d = j-i+1
    ha = dt**alpha
    cb = ha / (math.gamma(alpha) * alpha)
    ca = ha / (math.gamma(alpha) * alpha * (alpha + 1.0))

    states = np.empty((n + 1, 3))
    fvals = np.empty((n + 1, 3))
    states[0] = x0

    def eval_f(x, t_idx_next):
        if delayed:
            tq = t_idx_next * dt - tau
            xt = _lagrange_delayed(states, dt, 0.0, tq, t_idx_next - 1, phi_fn)
            return np.asarray(field(x, xt), dtype=float)
        return np.asarray(field(x), dtype=float)

    fvals[0] = eval_f(x0, 0)
    for j in range(n):
        hist = fvals[: j + 1]
        xp = x0 + cb * (bdiff[: j + 1][::-1] @ hist)
        fp = eval_f(xp, j + 1)
        a0 = pa1[j] - (j - alpha) * pa[j + 1]
        acc = a0 * hist[0] + fp
        if j >= 1:
            acc = acc + aw[1 : j + 1][::-1] @ hist[1:]
        xn = x0 + ca * acc
        if not np.all(np.isfinite(xn)):
            raise IntegrationError(f"non-finite state at step {j + 1}", step=j + 1)
        states[j + 1] = xn
        fvals[j + 1] = eval_f(xn, j + 1)
    return Trajectory(t0=0.0, dt=dt, states=states, monitors=_eval_monitors(monitors, states))


def fractional_delay_field(x, xt, w: BlendWeights, mode: str = "constructed") -> np.ndarray:
    """Right-hand side of the delayed Caputo-order system; same family as
    the revised delayed field (the circulated form is shared verbatim,
    including its typos, via ``mode="literal"``)."""
    return revised_delay_field(x, xt, w, mode=mode)


def literal_fractional_char(family_id: str, lam: complex, alpha: float, m: float) -> complex:
    """Circulated characteristic expressions for the delay-free fractional
    system at the axis equilibria, evaluated verbatim.

    E1 carries a factor m^2 (m + 1) and E2 a mixed m^2 lam^2 term; only the
    E3 expression agrees with det(lam^alpha I - A) of the actual
    linearization.  The verification suite documents the mismatches.
    """
    la = complex(lam) ** alpha
    if family_id == "E1":
        return la * (-(la * la) + m * m * (m + 1.0))
    if family_id == "E2":
        return la * (la * la + m * m * lam * lam - m * m)
    if family_id == "E3":
        return la * (la * la + m * m)
    raise DomainError(f"unknown family {family_id!r}")


def computed_fractional_char_coeffs(family_id: str, m: float) -> np.ndarray:
    """Coefficients [1, c2, c1, c0] in mu = lam^alpha of
    det(mu I - A) at the axis equilibria of the delay-free system."""
    from .core import EquilibriumFamily, rabinovich_jacobian

    A = rabinovich_jacobian(EquilibriumFamily(family_id, m).point())
    return np.poly(A)
