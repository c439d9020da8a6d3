"""Randomized cross-verification suites.

Each suite re-derives a family of claims about its module (algebraic
identities at random points, conserved-quantity drift, reductions between
variants) and reports one line per check.  Checks have three outcomes:

* ``pass`` / ``fail``: the property is expected to hold;
* ``discrepancy-documented``: the check exists to measure a known
  disagreement between a literal tabulated form and the construction it
  claims to come from.  These never fail a run; the measured gap is the
  point of the check.

Given the same seed, a run is byte-for-byte reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import core, delay, fractional, metriplectic, poisson, stability

__all__ = ["CheckResult", "SuiteReport", "SUITES", "run_suite", "run_all", "render_text"]

PASS = "pass"
FAIL = "fail"
DOC = "discrepancy-documented"


@dataclass(frozen=True)
class CheckResult:
    check_id: str
    status: str
    measured: float
    tolerance: float
    note: str


@dataclass(frozen=True)
class SuiteReport:
    suite: str
    checks: tuple

    @property
    def n_pass(self):
        return sum(1 for c in self.checks if c.status == PASS)

    @property
    def n_fail(self):
        return sum(1 for c in self.checks if c.status == FAIL)

    @property
    def n_documented(self):
        return sum(1 for c in self.checks if c.status == DOC)


def _check(check_id, measured, tol, note) -> CheckResult:
    status = PASS if measured <= tol else FAIL
    return CheckResult(check_id, status, float(measured), float(tol), note)


def _doc(check_id, measured, note) -> CheckResult:
    return CheckResult(check_id, DOC, float(measured), math.nan, note)


def _pts(rng, n, lo=-5.0, hi=5.0):
    return rng.uniform(lo, hi, size=(n, 3))


# ---------------------------------------------------------------- core

def _suite_core(seed: int) -> SuiteReport:
    rng = np.random.default_rng(seed)
    checks = []

    gap = max(poisson.tri_hamiltonian_gap(x) for x in _pts(rng, 200))
    checks.append(_check("field-matches-generators", gap, 1e-12,
                         "three generated fields and the direct right-hand side coincide"))

    systems = [
        (core.RABINOVICH, ("E1", "E2", "E3")),
        (metriplectic.LITERAL_FIRST_KIND, ("E2", "E3")),
        (metriplectic.LITERAL_SECOND_KIND, ("E1", "E2", "E3")),
        (metriplectic.second_kind_system(), ("E1", "E2", "E3")),
    ]
    worst = 0.0
    for field, fams in systems:
        for m in (-2.0, -0.5, 1.0, 2.0):
            for fid in fams:
                p = core.EquilibriumFamily(fid, m).point()
                worst = max(worst, float(np.max(np.abs(field.f(p)))))
    checks.append(_check("equilibria-stationary", worst, 0.0,
                         "axis families are exactly stationary where admitted"))

    worst = 0.0
    for field in (core.RABINOVICH, metriplectic.LITERAL_FIRST_KIND,
                  metriplectic.LITERAL_SECOND_KIND, metriplectic.first_kind_system(),
                  metriplectic.second_kind_system()):
        for x in _pts(rng, 20, -3, 3):
            Ja = core.jacobian(field, x, mode="analytic")
            Jf = core.jacobian(field, x, mode="fd")
            worst = max(worst, float(np.max(np.abs(Ja - Jf))))
    checks.append(_check("jacobian-agreement", worst, 1e-6,
                         "analytic jacobians agree with central differences"))

    x0 = (1.0, 2.0, 3.0)
    ref = core.integrate_rk4(core.RABINOVICH, x0, 1e-3, 2000).states[-1]
    coarse = core.integrate_rk4(core.RABINOVICH, x0, 4e-3, 500).states[-1]
    fine = core.integrate_rk4(core.RABINOVICH, x0, 2e-3, 1000).states[-1]
    e_coarse = float(np.max(np.abs(coarse - ref)))
    e_fine = float(np.max(np.abs(fine - ref)))
    # halving dt cuts the dt^4 global error ~16x; ref at dt/2 biases the
    # ratio toward 17ish, so accept a generous window
    ratio = e_coarse / e_fine
    ok = 0.0 if 10.0 <= ratio <= 26.0 else 1.0
    checks.append(_check("rk4-order", ok, 0.0,
                         f"step-halving error ratio {ratio:.2f} (order-4 window 10..26)"))

    mons = {"h1": poisson.H1, "c1": poisson.C1, "h3": poisson.H3}
    traj = core.integrate_rk4(core.RABINOVICH, x0, 1e-3, 20000, monitors=mons)
    drift = 0.0
    for name, series in traj.monitors.items():
        drift = max(drift, float(np.max(np.abs(series - series[0])) / abs(series[0])))
    checks.append(_check("invariant-drift", drift, 1e-7,
                         "relative drift of the three conserved quadratics, t <= 20"))

    worst = 0.0
    ts = np.linspace(-6.0, 6.0, 241)
    for m in (0.5, 1.0, 2.0):
        for signs in core.HETEROCLINIC_SIGN_TRIPLES:
            orb = core.heteroclinic_orbit(m, signs, ts)
            dorb = np.gradient(orb, ts, axis=0)  # only for a sanity scale
            f = np.array([core.rabinovich_field(p) for p in orb])
            s1, s2, s3 = signs
            sech = 1.0 / np.cosh(m * ts)
            tanh = np.tanh(m * ts)
            exact = np.stack(
                [-s1 * m * m * sech * tanh, s2 * m * m * sech * sech, -s3 * m * m * sech * tanh],
                axis=-1,
            )
            worst = max(worst, float(np.max(np.abs(exact - f))))
    checks.append(_check("heteroclinic-residual", worst, 1e-12,
                         "closed-form connecting orbits satisfy the system"))

    signs = core.HETEROCLINIC_SIGN_TRIPLES[0]
    start = core.heteroclinic_orbit(1.0, signs, -4.0)
    traj = core.integrate_rk4(core.RABINOVICH, start, 2e-4, 40000, t0=-4.0)
    exact = core.heteroclinic_orbit(1.0, signs, traj.times)
    gap = float(np.max(np.abs(traj.states - exact)))
    checks.append(_check("heteroclinic-shadowing", gap, 1e-3,
                         "numerical flow shadows the closed form through the saddle passage"))

    worst = 0.0
    for m in (0.5, 1.0, 2.0):
        period = core.measure_period((m, 0.0, 0.01 * m), 1e-3, 60.0 / m)
        worst = max(worst, abs(period - 2.0 * math.pi / m) / (2.0 * math.pi / m))
    checks.append(_check("period-linearized", worst, 1e-2,
                         "small oscillations near the first family have period 2*pi/|m|"))

    period = core.measure_period((1.0, 0.0, 0.01), 1e-3, 50.0)
    claimed = math.pi
    checks.append(_doc("period-claim", abs(period / claimed - 2.0),
                       f"tabulated period pi/|m| vs measured {period:.6f} at m=1: "
                       "the measured value is 2*pi/|m|; factor-2 disagreement recorded"))

    x0b = np.array([0.001, 0.001, 6.0])
    traj = core.integrate_rk4(core.RABINOVICH, x0b, 1e-3, 20000)
    bound = float(np.max(np.abs(traj.states))) / (10.0 * float(np.linalg.norm(x0b)))
    checks.append(_check("bounded-near-axis", bound, 1.0,
                         "orbit started near the third family stays bounded"))

    return SuiteReport("core", tuple(checks))


# ---------------------------------------------------------------- poisson

def _rand_quadratic(rng) -> poisson.Quadratic:
    M = rng.uniform(-1.0, 1.0, size=(3, 3))
    Q = np.zeros((6, 6))
    Q[:3, :3] = M + M.T
    b = np.zeros(6)
    b[:3] = rng.uniform(-1.0, 1.0, size=3)
    return poisson.Quadratic(Q, b)


def _rand_pencils(rng, n):
    out = []
    for _ in range(n):
        a = rng.uniform(0.5, 1.5) * rng.choice([-1.0, 1.0])
        b = rng.uniform(-1.0, 1.0)
        c = rng.uniform(-1.0, 1.0)
        out.append((a, b, c))
    return out


def _suite_poisson(seed: int) -> SuiteReport:
    rng = np.random.default_rng(seed)
    checks = []
    coords = [poisson.coord(i) for i in (1, 2, 3)]

    worst = 0.0
    pts = _pts(rng, 100)
    quads = [_rand_quadratic(rng) for _ in range(3)]
    for P in (poisson.P1, poisson.P2, poisson.P3):
        for x in pts:
            worst = max(worst, abs(poisson.jacobi_residual(P, *coords, x)))
            worst = max(worst, abs(poisson.jacobi_residual(P, *quads, x)))
    checks.append(_check("jacobi-fixed", worst, 1e-10,
                         "cyclic bracket identity for the three realizations"))

    worst = 0.0
    for (a, b, c) in _rand_pencils(rng, 20):
        P = poisson.pencil(a, b, c)
        for x in pts[:50]:
            worst = max(worst, abs(poisson.jacobi_residual(P, *coords, x)))
            worst = max(worst, abs(poisson.jacobi_residual(P, *quads, x)))
    checks.append(_check("jacobi-pencils", worst, 1e-10,
                         "cyclic bracket identity across the compatible pencil"))

    worst = 0.0
    for P, C in ((poisson.P1, poisson.C1), (poisson.P2, poisson.C2), (poisson.P3, poisson.C3)):
        for x in pts:
            worst = max(worst, float(np.max(np.abs(poisson.casimir_residual(P, C, x)))))
    checks.append(_check("casimir-fixed", worst, 1e-13,
                         "distinguished functions are annihilated by their tensors"))

    worst = 0.0
    for (a, b, c) in _rand_pencils(rng, 20):
        P = poisson.pencil(a, b, c)
        C = poisson.pencil_casimir(a, b, c)
        H = poisson.pencil_hamiltonian(a, b, c)
        for x in pts:
            worst = max(worst, float(np.max(np.abs(poisson.casimir_residual(P, C, x)))))
        for x in pts[:20]:
            gap = np.abs(poisson.hamiltonian_field(P, H, x) - core.rabinovich_field(x))
            worst = max(worst, float(np.max(gap)))
    checks.append(_check("casimir-pencils", worst, 1e-13,
                         "pencil Casimir annihilation and pencil-generated field"))

    worst = 0.0
    f, g, h = quads
    for P in (poisson.P1, poisson.P2, poisson.P3):
        for x in pts[:50]:
            a_, b_ = rng.uniform(-2.0, 2.0, size=2)
            lhs = poisson.bracket(P, a_ * f + b_ * g, h, x)
            rhs = a_ * poisson.bracket(P, f, h, x) + b_ * poisson.bracket(P, g, h, x)
            worst = max(worst, abs(lhs - rhs))
    checks.append(_check("bracket-bilinearity", worst, 1e-10,
                         "bracket is linear in each slot"))

    worst = 0.0
    prods = {(i, j): _prod_coords(i, j) for i in (1, 2, 3) for j in (1, 2, 3)}
    for P in (poisson.P1, poisson.P2, poisson.P3):
        for x in pts[:50]:
            for (i, j), pij in prods.items():
                lhs = poisson.bracket(P, pij, f, x)
                rhs = x[i - 1] * poisson.bracket(P, coords[j - 1], f, x) + \
                    x[j - 1] * poisson.bracket(P, coords[i - 1], f, x)
                worst = max(worst, abs(lhs - rhs))
    checks.append(_check("bracket-leibniz", worst, 1e-10,
                         "product rule on coordinate products"))

    halt = 0.0
    calt = 0.0
    for x in pts[:100]:
        halt = max(halt, float(np.max(np.abs(poisson.hamiltonian_field(poisson.P2, poisson.H2_ALT, x)))))
        calt = max(calt, float(np.max(np.abs(poisson.casimir_residual(poisson.P2, poisson.C2_ALT, x)))))
    checks.append(_doc("alt-function-set", max(halt, calt),
                       "alternate (h2, c2) table under the second tensor: generated field is "
                       f"identically zero (max |field| = {halt:.3e}), claimed Casimir is not "
                       f"annihilated (max residual = {calt:.3e}); table kept verbatim"))

    return SuiteReport("poisson", tuple(checks))


def _prod_coords(i, j):
    Q = np.zeros((6, 6))
    Q[i - 1, j - 1] += 1.0
    Q[j - 1, i - 1] += 1.0
    return poisson.Quadratic(Q)


# ---------------------------------------------------------------- metriplectic

def _suite_metriplectic(seed: int) -> SuiteReport:
    rng = np.random.default_rng(seed)
    checks = []
    pts = _pts(rng, 1000)

    worst = 0.0
    for h in (poisson.H1, poisson.C1, poisson.H2):
        for x in pts:
            g = metriplectic.metric_first_kind(h, x)
            worst = max(worst, float(np.max(np.abs(g @ h.grad_x(x)))))
    checks.append(_check("first-kind-annihilation", worst, 1e-12,
                         "metric built from a function annihilates that function's gradient"))

    worst = 0.0
    worst_gap = 0.0
    neg = 0.0
    for x in pts[:500]:
        g = metriplectic.metric_second_kind(poisson.H1, poisson.C1, x)
        gh = poisson.H1.grad_x(x)
        gc = poisson.C1.grad_x(x)
        worst = max(worst, abs(float(gc @ g @ gc)))
        rate = float(gh @ g @ gc)
        cs = float((gh @ gh) * (gc @ gc) - (gh @ gc) ** 2)
        worst_gap = max(worst_gap, abs(rate - cs))
        neg = max(neg, -rate)
    checks.append(_check("second-kind-casimir-orthogonality", worst, 1e-12,
                         "pair metric is null on the conserved direction"))
    checks.append(_check("second-kind-dissipation-rate", max(worst_gap, neg), 1e-9,
                         "production rate equals the Cauchy-Schwarz gap and is nonnegative"))

    mons = {"h1": poisson.H1, "c1": poisson.C1}
    traj = core.integrate_rk4(metriplectic.second_kind_system(), (0.1, 0.2, 0.3), 1e-3, 20000,
                              monitors=mons)
    c_series = traj.monitors["c1"]
    h_series = traj.monitors["h1"]
    c_drift = float(np.max(np.abs(c_series - c_series[0])) / abs(c_series[0]))
    h_dec = float(max(0.0, np.max(-np.diff(h_series))))
    checks.append(_check("second-kind-flow-conserves-c1", c_drift, 1e-7,
                         "combined flow preserves the Casimir, t <= 20"))
    checks.append(_check("second-kind-flow-h1-monotone", h_dec, 1e-10,
                         "combined flow never decreases h1 (per-step slack)"))

    first = metriplectic.first_kind_system()
    worst = 0.0
    for x in pts[:200]:
        worst = max(worst, float(np.max(np.abs(first.f(x) - core.rabinovich_field(x)))))
    checks.append(_check("first-kind-flow-equals-classical", worst, 1e-12,
                         "the first-kind metric leg vanishes, leaving the conservative flow"))

    worst = 0.0
    for x in pts[:200]:
        gap = metriplectic.literal_first_kind_field(x) - first.f(x)
        worst = max(worst, float(np.max(np.abs(gap))))
    checks.append(_doc("literal-first-vs-constructed", worst,
                       "revised first-kind system differs from the construction it is "
                       "attributed to (the metric leg vanishes and cannot produce the "
                       "extra terms); literal form kept verbatim"))

    res = float(np.max(np.abs(metriplectic.literal_first_kind_field((1.0, 0.0, 0.0)))))
    checks.append(_doc("literal-first-stationarity", res,
                       "revised first-kind system is not stationary on the first axis "
                       "family (residual m^2 at (m,0,0)); tabulated as stationary"))

    second = metriplectic.second_kind_system()
    worst = 0.0
    for x in pts[:200]:
        gap = metriplectic.literal_second_kind_field(x) - second.f(x)
        worst = max(worst, float(np.max(np.abs(gap))))
    checks.append(_doc("literal-second-vs-constructed", worst,
                       "revised second-kind system drops one power of x3 in the second "
                       "component and the whole metric leg in the third; literal form kept"))

    worst = 0.0
    for x in pts[:200]:
        gap = metriplectic.literal_metric_first_kind(x) - metriplectic.metric_first_kind(poisson.H1, x)
        worst = max(worst, float(np.max(np.abs(gap))))
    checks.append(_doc("metric-table-first-corner", worst,
                       "tabulated first-kind metric has a zero (3,3) entry where the "
                       "formula gives -(x1^2 + x2^2)"))

    worst = 0.0
    for x in pts[:200]:
        gap = np.triu(metriplectic.literal_metric_second_kind(x)) - \
            np.triu(metriplectic.metric_second_kind(poisson.H1, poisson.C1, x))
        worst = max(worst, float(np.max(np.abs(gap))))
    checks.append(_doc("metric-table-second-corner", worst,
                       "tabulated second-kind metric has a zero (3,3) entry where the "
                       "formula gives -x2^2 (upper triangle compared; the table leaves "
                       "the lower triangle empty)"))

    m = 1.5
    table = metriplectic.literal_linearization("literal38", "E1", m)
    direct = core.jacobian(metriplectic.LITERAL_FIRST_KIND,
                           core.EquilibriumFamily("E1", m).point())
    checks.append(_doc("linearization-table-first-e1", float(np.max(np.abs(table - direct))),
                       "tabulated E1 linearization of the revised first-kind system "
                       "disagrees with direct differentiation in rows (2,1) and (2,3)"))

    worst = 0.0
    rest = [("literal38", "E2"), ("literal38", "E3"),
            ("literal10", "E1"), ("literal10", "E2"), ("literal10", "E3")]
    fields = {"literal38": metriplectic.LITERAL_FIRST_KIND, "literal10": metriplectic.LITERAL_SECOND_KIND}
    for sysname, fid in rest:
        table = metriplectic.literal_linearization(sysname, fid, m)
        direct = core.jacobian(fields[sysname], core.EquilibriumFamily(fid, m).point())
        worst = max(worst, float(np.max(np.abs(table - direct))))
    checks.append(_check("linearization-tables-rest", worst, 1e-12,
                         "remaining tabulated linearizations match direct differentiation"))

    tab = metriplectic.literal_char_coeffs("literal10", "E3", m)
    own = np.poly(metriplectic.literal_linearization("literal10", "E3", m))
    checks.append(_doc("char-table-second-e3", float(np.max(np.abs(tab - own))),
                       "tabulated characteristic constant for the revised second-kind "
                       "system at E3 is m^2; its own tabulated matrix gives m^3 + m^2"))

    worst = 0.0
    rest = [("literal38", "E1"), ("literal38", "E2"), ("literal38", "E3"),
            ("literal10", "E1"), ("literal10", "E2")]
    for sysname, fid in rest:
        tab = metriplectic.literal_char_coeffs(sysname, fid, m)
        own = np.poly(metriplectic.literal_linearization(sysname, fid, m))
        worst = max(worst, float(np.max(np.abs(tab - own))))
    checks.append(_check("char-tables-rest", worst, 1e-10,
                         "remaining tabulated characteristic coefficients match their matrices"))

    return SuiteReport("metriplectic", tuple(checks))


# ---------------------------------------------------------------- delay

def _rand_weights(rng) -> delay.BlendWeights:
    e = rng.uniform(0.05, 1.0, size=4)
    d = rng.uniform(0.05, 1.0, size=4)
    return delay.BlendWeights(eps=tuple(e / e.sum()), delta=tuple(d / d.sum()))


def _suite_delay(seed: int) -> SuiteReport:
    rng = np.random.default_rng(seed)
    checks = []

    kernels = [
        delay.UniformKernel(a=1.0, tau=2.0),
        delay.UniformKernel(a=0.0, tau=0.5),
        delay.ExponentialKernel(alpha=1.7),
        delay.ErlangKernel(alpha=2.4),
    ]
    worst = 0.0
    for k in kernels:
        if isinstance(k, delay.UniformKernel):
            lo, hi = k.a, k.a + k.tau
        else:
            lo, hi = 0.0, k.support_cut()
        s = np.linspace(lo, hi, 200001)
        mass = float(np.trapezoid([k.density(v) for v in s], s))
        worst = max(worst, abs(mass - 1.0))
    checks.append(_check("kernel-normalization", worst, 1e-8,
                         "densities integrate to unit mass (tail below 1e-10 truncated)"))

    worst = 0.0
    for k in kernels:
        if isinstance(k, delay.UniformKernel):
            lo, hi = k.a, k.a + k.tau
        else:
            lo, hi = 0.0, k.support_cut()
        s = np.linspace(lo, hi, 200001)
        dens = np.array([k.density(v) for v in s])
        for lam in rng.uniform(0.0, 5.0, size=20):
            quad = float(np.trapezoid(dens * np.exp(-lam * s), s))
            worst = max(worst, abs(quad - complex(k.laplace(lam)).real))
    checks.append(_check("kernel-laplace-quadrature", worst, 1e-6,
                         "closed-form transforms match direct quadrature on real arguments"))

    sp = [
        abs(delay.UniformKernel(a=1.0, tau=2.0).laplace(0.0) - 1.0),
        abs(delay.ExponentialKernel(alpha=2.0).laplace(2.0) - 0.5),
        abs(delay.DiracKernel(tau=0.7).laplace(1.3) - math.exp(-0.91)),
        abs(delay.UniformKernel(a=1.0, tau=2.0).density(1.5) - 0.5),
        abs(delay.UniformKernel(a=1.0, tau=2.0).density(0.5)),
        abs(delay.UniformKernel(a=1.0, tau=2.0).density(4.0)),
    ]
    checks.append(_check("kernel-special-values", max(sp), 1e-12,
                         "spot values of densities and transforms"))

    worst = 0.0
    for _ in range(5):
        w = _rand_weights(rng)
        P = delay.blend_tensor(w)
        el = delay.blend_casimir(w)
        for _ in range(100):
            x = rng.uniform(-5.0, 5.0, size=3)
            xt = rng.uniform(-5.0, 5.0, size=3)
            row = el.grad_x(x, xt) @ P.eval(x, xt)
            worst = max(worst, float(np.max(np.abs(row))))
    checks.append(_check("delayed-casimir-identity", worst, 1e-12,
                         "blended second function left-annihilates the blended tensor"))

    worst = 0.0
    for _ in range(5):
        w = _rand_weights(rng)
        for _ in range(50):
            x = rng.uniform(-5.0, 5.0, size=3)
            xt = rng.uniform(-5.0, 5.0, size=3)
            f = delay.delay_hamiltonian_field(x, xt, w)
            A = w.a1 * x[2] + w.a5 * xt[2]
            B = w.a2 * x[1] + w.a4 * xt[1]
            h1v = w.b2 * x[0] + w.b3 * xt[0]
            h2v = w.b1 * x[1] + w.b4 * xt[1]
            exp = np.array([A * h2v, -A * h1v, B * h1v])
            worst = max(worst, float(np.max(np.abs(f - exp))))
    checks.append(_check("blend-expansion", worst, 1e-12,
                         "generated delayed field matches its pair-sum expansion"))

    w0 = delay.BlendWeights(eps=(1.0, 0.0, 0.0, 0.0), delta=(1.0, 0.0, 0.0, 0.0))
    worst = 0.0
    for _ in range(100):
        x = rng.uniform(-5.0, 5.0, size=3)
        xt = rng.uniform(-5.0, 5.0, size=3)
        worst = max(worst, float(np.max(np.abs(
            delay.delay_hamiltonian_field(x, xt, w0) - core.rabinovich_field(x)))))
        worst = max(worst, float(np.max(np.abs(
            delay.revised_delay_field(x, xt, w0, mode="constructed") - core.rabinovich_field(x)))))
    checks.append(_check("no-delay-reduction-exact", worst, 0.0,
                         "unit weight on the undelayed slot reproduces the classical field exactly"))

    worst = 0.0
    for _ in range(100):
        x = rng.uniform(-2.0, 2.0, size=3)
        xt = rng.uniform(-2.0, 2.0, size=3)
        worst = max(worst, float(np.max(np.abs(
            delay.revised_delay_field(x, xt, w0, mode="literal") - core.rabinovich_field(x)))))
    checks.append(_doc("literal-revised-no-delay", worst,
                       "circulated revised expansion retains an extra product at unit "
                       "undelayed weight and does not reduce to the classical field"))

    worst = 0.0
    for _ in range(5):
        w = _rand_weights(rng)
        for _ in range(50):
            x = rng.uniform(-2.0, 2.0, size=3)
            xt = rng.uniform(-2.0, 2.0, size=3)
            gap = delay.revised_delay_field(x, xt, w, mode="literal") - \
                delay.revised_delay_field(x, xt, w, mode="constructed")
            worst = max(worst, float(np.max(np.abs(gap))))
    checks.append(_doc("literal-revised-coefficients", worst,
                       "circulated revised expansion swaps one pair-sum index and carries "
                       "stray products; construction kept canonical, literal kept verbatim"))

    def ignore_delay(x, xt):
        return core.rabinovich_field(x)

    x0 = np.array([0.4, 0.8, 1.2])
    dd = delay.integrate_dde(ignore_delay, delay.DiracKernel(tau=0.5), x0, 0.01, 500)
    rr = core.integrate_rk4(core.RABINOVICH, x0, 0.01, 500)
    checks.append(_check("point-mass-ignored-delay-matches", float(np.max(np.abs(dd.states - rr.states))),
                         1e-10, "field that ignores its delayed argument reproduces the plain run"))

    w = delay.BlendWeights(eps=(0.4, 0.3, 0.2, 0.1), delta=(0.4, 0.3, 0.2, 0.1))
    e2 = np.array([0.0, 1.3, 0.0])
    traj = delay.integrate_dde(lambda x, xt: delay.delay_hamiltonian_field(x, xt, w),
                               delay.DiracKernel(tau=0.5), e2, 0.01, 300)
    checks.append(_check("point-mass-constant-equilibrium", float(np.max(np.abs(traj.states - e2))),
                         0.0, "axis equilibrium with matching constant history stays put"))

    worst = 0.0
    for kern in (delay.ExponentialKernel(alpha=3.0), delay.ErlangKernel(alpha=3.0)):
        traj, aux = delay.integrate_dde(
            lambda x, xt: delay.delay_hamiltonian_field(x, xt, w),
            kern, np.array([0.2, 0.3, 0.4]), 1e-3, 4000, return_aux=True)
        for idx in range(400, 4001, 400):
            t = traj.times[idx]
            quad = delay.delayed_state(aux["history"], kern, t, step=1e-3)
            worst = max(worst, float(np.max(np.abs(quad - aux["xt"][idx]))))
    checks.append(_check("chain-vs-quadrature", worst, 1e-6,
                         "chain variables agree with direct kernel quadrature of the history"))

    hist = delay.History(lambda t: np.array([2.0 * t, -t, 0.5 * t]), t0=0.0)
    kern = delay.UniformKernel(a=0.5, tau=1.0)
    got = delay.delayed_state(hist, kern, 0.0, step=1e-3)
    want = np.array([2.0, -1.0, 0.5]) * (0.0 - (0.5 + 0.5))
    checks.append(_check("window-average-linear-history", float(np.max(np.abs(got - want))), 1e-10,
                         "flat window average of a linear history hits the midpoint value"))

    base = core.integrate_rk4(core.RABINOVICH, np.array([0.2, 0.3, 0.4]), 1e-3, 10000)
    gaps = []
    for a in (10.0, 20.0, 40.0, 80.0):
        traj = delay.integrate_dde(lambda x, xt: delay.delay_hamiltonian_field(x, xt, w),
                                   delay.ExponentialKernel(alpha=a),
                                   np.array([0.2, 0.3, 0.4]), 1e-3, 10000)
        gaps.append(float(np.max(np.abs(traj.states - base.states))))
    dec = all(g2 < g1 for g1, g2 in zip(gaps, gaps[1:]))
    order = math.log(gaps[0] / gaps[-1]) / math.log(8.0)
    checks.append(_check("concentration-exponential", 0.0 if dec else 1.0, 0.0,
                         "sharpening the kernel converges to the undelayed flow "
                         f"(gaps {', '.join(format(g, '.2e') for g in gaps)}; order ~{order:.2f})"))

    gaps = []
    for tau in (0.2, 0.1, 0.05):
        traj = delay.integrate_dde(lambda x, xt: delay.delay_hamiltonian_field(x, xt, w),
                                   delay.DiracKernel(tau=tau),
                                   np.array([0.2, 0.3, 0.4]), tau / 8.0, int(10.0 / (tau / 8.0)))
        idx = np.round(traj.times / 1e-3).astype(int)
        gaps.append(float(np.max(np.abs(traj.states - base.states[idx]))))
    dec = all(g2 < g1 for g1, g2 in zip(gaps, gaps[1:]))
    checks.append(_check("concentration-point-mass", 0.0 if dec else 1.0, 0.0,
                         "shrinking the lag converges to the undelayed flow "
                         f"(gaps {', '.join(format(g, '.2e') for g in gaps)})"))

    return SuiteReport("delay", tuple(checks))


# ---------------------------------------------------------------- fractional

def _suite_fractional(seed: int) -> SuiteReport:
    rng = np.random.default_rng(seed)
    checks = []

    worst_const = 0.0
    mono = True
    errs_detail = []
    for beta in (0.3, 0.5, 0.8):
        t = 2.0
        exact1 = t**beta / math.gamma(beta + 1.0)
        exact_s = t ** (1.0 + beta) * math.gamma(2.0) / math.gamma(2.0 + beta)
        prev = None
        for n in (64, 128, 256, 512):
            e1 = abs(fractional.rl_integral(lambda s: 1.0, beta, t, n) - exact1)
            es = abs(fractional.rl_integral(lambda s: s, beta, t, n) - exact_s)
            worst_const = max(worst_const, e1)
            if prev is not None and not (es < prev * 0.9 + 1e-14):
                mono = False
            prev = es
        errs_detail.append(es)
    checks.append(_check("rl-integral-constant-exact", worst_const, 1e-12,
                         "order-beta integral of 1 is exact for the product rule"))
    checks.append(_check("rl-integral-refinement", 0.0 if mono else 1.0, 0.0,
                         "error against t^(1+beta)*Gamma(2)/Gamma(2+beta) decreases under refinement"))

    worst = 0.0
    for j in (0, 1, 5, 100):
        a_row, b_row = fractional.abm_weights(1.0, 0.25, j)
        worst = max(worst, float(np.max(np.abs(b_row - 0.25))))
        trap = np.full(j + 2, 0.25)
        trap[0] = trap[-1] = 0.125
        worst = max(worst, float(np.max(np.abs(a_row - trap))))
    checks.append(_check("weights-specialize-at-one", worst, 0.0,
                         "predictor/corrector weights reduce to rectangle and trapezoid rules"))

    worst = 0.0
    for alpha in (0.3, 0.5, 0.8, 1.0):
        for j in (0, 3, 17):
            a_row, b_row = fractional.abm_weights(alpha, 0.1, j)
            worst = max(worst, float(-min(np.min(a_row), np.min(b_row))))
    checks.append(_check("weights-positive", worst, 0.0,
                         "all quadrature weights are positive"))

    alpha = 0.8
    dt = 0.01
    x0 = np.array([0.001, 0.001, 6.0])
    n = 200
    traj = fractional.integrate_abm(core.RABINOVICH.f, x0, alpha, dt, n)
    worst = 0.0
    for j in (1, 7, 33):
        a_row, b_row = fractional.abm_weights(alpha, dt, j)
        fv = np.array([core.RABINOVICH.f(traj.states[i]) for i in range(j + 1)])
        slow = np.zeros(3)
        for i in range(j + 1):
            slow += b_row[i] * fv[i]
        k = np.arange(n + 2, dtype=float)
        pa = k**alpha
        bdiff = pa[1:] - pa[:-1]
        fast = dt**alpha * (bdiff[: j + 1][::-1] @ fv) / alpha
        worst = max(worst, float(np.max(np.abs(slow - fast)) / max(1.0, float(np.max(np.abs(slow))))))
    checks.append(_check("memory-sum-consistency", worst, 1e-13,
                         "sliced-table weight rows equal the directly computed rows"))

    n = 5000
    abm = fractional.integrate_abm(core.RABINOVICH.f, x0, 1.0, 1e-3, n)
    rk = core.integrate_rk4(core.RABINOVICH, x0, 1e-3, n)
    checks.append(_check("order-one-matches-rk4", float(np.max(np.abs(abm.states - rk.states))),
                         1e-3, "alpha = 1 predictor-corrector tracks the one-step reference"))

    e2 = np.array([0.0, 1.0, 0.0])
    traj = fractional.integrate_abm(core.RABINOVICH.f, e2, 0.7, 0.01, 200)
    checks.append(_check("equilibrium-fixed", float(np.max(np.abs(traj.states - e2))), 0.0,
                         "axis equilibrium is a fixed point of the scheme"))

    drifts = []
    for a in (0.7, 0.8, 0.9, 1.0):
        traj = fractional.integrate_abm(core.RABINOVICH.f, x0, a, 2e-3, 5000,
                                        monitors={"h1": poisson.H1})
        h = traj.monitors["h1"]
        drifts.append(float(np.max(np.abs(h - h[0]))))
    dec = all(d2 < d1 for d1, d2 in zip(drifts, drifts[1:]))
    checks.append(_check("memory-drift-trend", 0.0 if dec else 1.0, 0.0,
                         "h1 drift shrinks as the order approaches one "
                         f"(drifts {', '.join(format(d, '.2e') for d in drifts)})"))

    traj = fractional.integrate_abm(core.RABINOVICH.f, x0, 0.8, 1e-3, 50000)
    bound = float(np.max(np.abs(traj.states))) / (10.0 * float(np.linalg.norm(x0)))
    checks.append(_check("figure-scenario-bounded", bound, 1.0,
                         "order-0.8 run from (0.001, 0.001, 6) stays bounded, t <= 50"))

    t2 = fractional.integrate_abm(core.RABINOVICH.f, x0, 0.8, 1e-3, 2000)
    t3 = fractional.integrate_abm(core.RABINOVICH.f, x0, 0.8, 1e-3, 2000)
    checks.append(_check("reproducible", 0.0 if np.array_equal(t2.states, t3.states) else 1.0, 0.0,
                         "identical inputs give bitwise identical trajectories"))

    m = 1.3
    lams = [complex(0.4, 0.9), complex(1.1, -0.3), complex(0.2, 2.0)]
    worst_e1 = 0.0
    worst_e2 = 0.0
    worst_e3 = 0.0
    for fid, acc in (("E1", "e1"), ("E2", "e2"), ("E3", "e3")):
        A = core.rabinovich_jacobian(core.EquilibriumFamily(fid, m).point())
        for lam in lams:
            mu = lam**0.8
            det = complex(np.linalg.det(mu * np.eye(3) - A))
            lit = fractional.literal_fractional_char(fid, lam, 0.8, m)
            gap = abs(det - lit)
            if fid == "E1":
                worst_e1 = max(worst_e1, gap)
            elif fid == "E2":
                worst_e2 = max(worst_e2, gap)
            else:
                worst_e3 = max(worst_e3, gap)
    checks.append(_doc("literal-char-first-family", worst_e1,
                       "circulated delay-free characteristic expression at E1 carries a "
                       "factor m^2(m+1); the linearization determinant gives "
                       "lam^alpha (lam^2alpha + m^2)"))
    checks.append(_doc("literal-char-second-family", worst_e2,
                       "circulated expression at E2 mixes a plain lam^2 term into the "
                       "lam^alpha polynomial; determinant gives lam^alpha (lam^2alpha - m^2)"))
    checks.append(_check("literal-char-third-family", worst_e3, 1e-10,
                         "circulated expression at E3 matches the determinant"))

    w = delay.BlendWeights(eps=(0.4, 0.3, 0.2, 0.1), delta=(0.4, 0.3, 0.2, 0.1))
    traj = fractional.integrate_abm(
        lambda x, xt: fractional.fractional_delay_field(x, xt, w),
        np.array([0.2, 0.3, 0.4]), 0.8, 0.01, 500, tau=0.5)
    checks.append(_check("delayed-scheme-bounded", float(np.max(np.abs(traj.states))) / 10.0, 1.0,
                         "delayed order-0.8 run stays finite and bounded"))

    return SuiteReport("fractional", tuple(checks))


# ---------------------------------------------------------------- stability

def _suite_stability(seed: int) -> SuiteReport:
    rng = np.random.default_rng(seed)
    checks = []

    expected = {"E1": stability.SPECTRALLY_STABLE_MARGINAL,
                "E2": stability.UNSTABLE,
                "E3": stability.SPECTRALLY_STABLE_MARGINAL}
    bad = 0
    for m in (-2.0, -1.0, -0.5, 0.5, 1.0, 2.0):
        for fid, want in expected.items():
            J = core.rabinovich_jacobian(core.EquilibriumFamily(fid, m).point())
            v = stability.classify_spectral(J)
            if v.classification != want or not v.zero_eigenvalue:
                bad += 1
    checks.append(_check("axis-family-verdicts", float(bad), 0.0,
                         "first/third families marginal with zero mode, second unstable"))

    bad = 0
    for _ in range(100):
        A = rng.normal(size=(3, 3))
        spec = stability.classify_spectral(A)
        mat = stability.matignon_check(A, 1.0)
        if spec.classification != mat.classification:
            bad += 1
    checks.append(_check("sector-agrees-at-one", float(bad), 0.0,
                         "order-one sector rule reproduces the sign-of-real-part rule"))

    v1 = stability.matignon_check(np.diag([1.0, -2.0, -3.0]), 0.5)
    v2 = stability.matignon_check(np.array([[0.0, 1.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 0.0]]), 0.8)
    v3 = stability.matignon_check(np.array([[-1.0, 0.2, 0.0], [-0.2, -1.0, 0.0], [0.0, 0.0, -0.5]]), 0.9)
    ok = (v1.classification == stability.UNSTABLE
          and v2.classification == stability.SPECTRALLY_STABLE_MARGINAL and v2.zero_eigenvalue
          and v3.classification == stability.ASYMPTOTICALLY_STABLE)
    checks.append(_check("sector-examples", 0.0 if ok else 1.0, 0.0,
                         "positive eigenvalue unstable; rotation plus zero mode marginal "
                         "and flagged; damped spiral asymptotically stable"))

    A = rng.normal(size=(3, 3))
    pair = stability.LinearizationPair(A=A, B=np.zeros((3, 3)))
    coeffs = np.poly(A)
    worst = 0.0
    for _ in range(20):
        lam = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        direct = np.polyval(coeffs, lam)
        worst = max(worst, abs(stability.char_fn(pair, None, 1.0, lam) - direct))
    checks.append(_check("char-fn-reduces-to-polynomial", worst, 1e-10,
                         "with no delayed part the characteristic function is the "
                         "characteristic polynomial"))

    b = 0.8
    tau = 1.0
    pair = stability.LinearizationPair(A=[[0.0]], B=[[b]])
    kern = delay.DiracKernel(tau=tau)
    lo, hi = 0.0, b
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid - b * math.exp(-mid * tau) < 0.0:
            lo = mid
        else:
            hi = mid
    scan = stability.scan_roots(pair, kern, 1.0, (-1.0, 1.5, -1.0, 1.0), grid=(40, 40))
    gap = min(abs(r - 0.5 * (lo + hi)) for r in scan.roots) if scan.roots else math.inf
    checks.append(_check("scalar-lag-root-vs-bisection", gap, 1e-8,
                         "scan agrees with a bisection bracket on the real root"))

    A3 = np.array([[-0.3, 0.8, 0.0], [-0.8, -0.3, 0.0], [0.0, 0.0, 0.2]])
    pair3 = stability.LinearizationPair(A=A3, B=np.zeros((3, 3)))
    coarse = stability.scan_roots(pair3, None, 1.0, (-2.0, 2.0, -2.0, 2.0), grid=(40, 40))
    fine = stability.scan_roots(pair3, None, 1.0, (-2.0, 2.0, -2.0, 2.0), grid=(80, 80))
    missing = 0
    for r in coarse.roots:
        if not any(abs(r - q) < 1e-6 for q in fine.roots):
            missing += 1
    found = {complex(-0.3, 0.8), complex(-0.3, -0.8), complex(0.2, 0.0)}
    hit = all(any(abs(r - w) < 1e-7 for r in fine.roots) for w in found)
    checks.append(_check("scan-grid-refinement", float(missing + (0 if hit else 1)), 0.0,
                         "finer scan keeps every coarse root and hits the spectrum"))

    pair_im = stability.LinearizationPair(A=[[0.0]], B=[[-math.pi / 2.0]])
    scan = stability.scan_roots(pair_im, delay.DiracKernel(tau=1.0), 1.0,
                                (-1.0, 1.0, 0.5, 2.5), grid=(50, 50))
    want = complex(0.0, math.pi / 2.0)
    gap = min(abs(r - want) for r in scan.roots) if scan.roots else math.inf
    flagged = any(abs(r - want) < 1e-6 for r in scan.imaginary_axis_roots)
    checks.append(_check("imaginary-axis-certificate", gap + (0.0 if flagged else 1.0), 1e-8,
                         "critical-lag root i*pi/2 is found and reported on the axis"))

    bad = 0
    for m in (0.5, 1.0, 2.0):
        for fid, want in (("E1", stability.SPECTRALLY_STABLE_MARGINAL),
                          ("E2", stability.UNSTABLE),
                          ("E3", stability.SPECTRALLY_STABLE_MARGINAL)):
            A = core.rabinovich_jacobian(core.EquilibriumFamily(fid, m).point())
            v = stability.matignon_check(A, 0.8)
            if v.classification != want:
                bad += 1
    checks.append(_check("fractional-axis-verdicts", float(bad), 0.0,
                         "order-0.8 sector test matches the classical picture on the axis "
                         "families (zero mode keeps every verdict marginal at best)"))

    return SuiteReport("stability", tuple(checks))


SUITES = {
    "core": _suite_core,
    "poisson": _suite_poisson,
    "metriplectic": _suite_metriplectic,
    "delay": _suite_delay,
    "fractional": _suite_fractional,
    "stability": _suite_stability,
}


def run_suite(name: str, seed: int = 0) -> SuiteReport:
    if name not in SUITES:
        raise core.DomainError(f"unknown suite {name!r}; expected one of {', '.join(SUITES)}")
    return SUITES[name](seed)


def run_all(seed: int = 0):
    return [run_suite(name, seed) for name in SUITES]


def render_text(reports) -> str:
    lines = []
    for rep in reports:
        lines.append(f"suite {rep.suite}")
        for c in rep.checks:
            tag = {PASS: "PASS", FAIL: "FAIL", DOC: "DOC "}[c.status]
            tol = "-" if math.isnan(c.tolerance) else format(c.tolerance, ".1e")
            lines.append(
                f"  [{tag}] {rep.suite}/{c.check_id} measured={c.measured:.6e} tol={tol} | {c.note}"
            )
    n_pass = sum(r.n_pass for r in reports)
    n_fail = sum(r.n_fail for r in reports)
    n_doc = sum(r.n_documented for r in reports)
    lines.append(f"checks: {n_pass + n_fail + n_doc}  pass: {n_pass}  fail: {n_fail}  documented: {n_doc}")
    return "\n".join(lines) + "\n"
