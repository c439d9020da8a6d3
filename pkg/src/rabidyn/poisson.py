"""Poisson realizations of the cyclic system and their invariants.

All functions handled here are degree <= 2 polynomials in the six
coordinates z = (x1, x2, x3, xt1, xt2, xt3), where the xt block holds
delayed copies of the state (zero / ignored for the classical structures).
Tensor entries are linear forms in z.  Keeping everything in this small
polynomial class makes brackets, Casimir products and Jacobi residuals
exactly computable: the gradient of a bracket of two quadratics under a
linear tensor is evaluated in closed form, not by nested differencing.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .core import DomainError

__all__ = [
    "Quadratic",
    "coord",
    "PoissonTensor",
    "P1",
    "P2",
    "P3",
    "pencil",
    "H1",
    "H2",
    "H3",
    "C1",
    "C2",
    "C3",
    "H2_ALT",
    "C2_ALT",
    "pencil_hamiltonian",
    "pencil_casimir",
    "hamiltonian_field",
    "bracket",
    "bracket_gradient",
    "jacobi_residual",
    "casimir_residual",
    "tri_hamiltonian_gap",
]


def _z(x, xt) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (3,):
        raise DomainError(f"x must have 3 components, got shape {x.shape}")
    z = np.zeros(6)
    z[:3] = x
    if xt is not None:
        xt = np.asarray(xt, dtype=float)
        if xt.shape != (3,):
            raise DomainError(f"xt must have 3 components, got shape {xt.shape}")
        z[3:] = xt
    return z


@dataclass(frozen=True)
class Quadratic:
    """value(x, xt) = 0.5 * z^T Q z + b^T z with z = (x, xt), Q symmetric."""

    Q: np.ndarray
    b: np.ndarray = dc_field(default_factory=lambda: np.zeros(6))
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "Q", np.asarray(self.Q, dtype=float))
        object.__setattr__(self, "b", np.asarray(self.b, dtype=float))
        if self.Q.shape != (6, 6):
            raise DomainError("Q must be 6x6")
        if self.b.shape != (6,):
            raise DomainError("b must have 6 components")
        if not np.array_equal(self.Q, self.Q.T):
            raise DomainError(f"Q must be symmetric for {self.name or 'quadratic'}")

    @property
    def uses_delay(self) -> bool:
        return bool(np.any(self.Q[3:, :]) or np.any(self.b[3:]))

    def value(self, x, xt=None) -> float:
        z = _z(x, xt)
        return float(0.5 * z @ self.Q @ z + self.b @ z)

    def value_array(self, states: np.ndarray) -> np.ndarray:
        """Vectorized value over an (n, 3) block of undelayed states."""
        S = np.asarray(states, dtype=float)
        Qxx = self.Q[:3, :3]
        return 0.5 * np.einsum("ni,ij,nj->n", S, Qxx, S) + S @ self.b[:3]

    def grad(self, x, xt=None) -> np.ndarray:
        return self.Q @ _z(x, xt) + self.b

    def grad_x(self, x, xt=None) -> np.ndarray:
        return self.grad(x, xt)[:3]

    def grad_xt(self, x, xt=None) -> np.ndarray:
        return self.grad(x, xt)[3:]

    def __call__(self, x, xt=None) -> float:
        return self.value(x, xt)

    def __add__(self, other: "Quadratic") -> "Quadratic":
        return Quadratic(self.Q + other.Q, self.b + other.b)

    def __rmul__(self, a: float) -> "Quadratic":
        return Quadratic(a * self.Q, a * self.b)


def _quad(diag=(), cross=(), lin=(), name="") -> Quadratic:
    """Build a Quadratic from 1-based term lists.

    diag: (i, c) meaning c * x_i^2;  cross: (i, j, c) meaning c * x_i * x_j;
    lin: (i, c) meaning c * x_i.  Indices 4..6 address the delayed block.
    """
    Q = np.zeros((6, 6))
    b = np.zeros(6)
    for i, c in diag:
        Q[i - 1, i - 1] = 2.0 * c
    for i, j, c in cross:
        Q[i - 1, j - 1] += c
        Q[j - 1, i - 1] += c
    for i, c in lin:
        b[i - 1] = c
    return Quadratic(Q, b, name=name)


def coord(i: int) -> Quadratic:
    """The coordinate function x_i (1-based; 4..6 give delayed coordinates)."""
    if not 1 <= i <= 6:
        raise DomainError("coordinate index must be in 1..6")
    return _quad(lin=[(i, 1.0)], name=f"x{i}")


# Conserved quadratics of the three realizations.  H_k generates the flow
# under the matching tensor P_k; C_k is the corresponding Casimir.
H1 = _quad(diag=[(1, 0.5), (2, 0.5)], name="h1")      # (x1^2 + x2^2)/2
H2 = _quad(diag=[(2, 1.0), (3, 1.0)], name="h2")      # x2^2 + x3^2
H3 = _quad(diag=[(1, 1.0), (3, -1.0)], name="h3")     # x1^2 - x3^2
C1 = _quad(diag=[(2, 0.5), (3, 0.5)], name="c1")      # (x2^2 + x3^2)/2
C2 = _quad(diag=[(1, 1.0), (2, 1.0)], name="c2")      # x1^2 + x2^2
C3 = _quad(diag=[(1, 1.0), (2, 1.0)], name="c3")      # x1^2 + x2^2

# Alternate table for the second/third realizations that circulates with the
# metric extensions.  Kept verbatim for cross-checking: under P2 this pair
# fails both defining properties (the verification suite documents that).
H2_ALT = _quad(diag=[(1, 0.5), (2, 0.5)], name="h2-alt")
C2_ALT = _quad(diag=[(2, 0.5), (3, 0.5)], name="c2-alt")


@dataclass(frozen=True)
class PoissonTensor:
    """Skew 3x3 tensor whose entries are linear forms in z = (x, xt).

    ``coeffs[i, j]`` holds the 6 coefficients of entry (i, j).
    """

    coeffs: np.ndarray
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "coeffs", np.asarray(self.coeffs, dtype=float))
        if self.coeffs.shape != (3, 3, 6):
            raise DomainError("coeffs must have shape (3, 3, 6)")
        if not np.array_equal(self.coeffs, -np.transpose(self.coeffs, (1, 0, 2))):
            raise DomainError(f"tensor {self.name or ''} entries must be skew")

    @property
    def uses_delay(self) -> bool:
        return bool(np.any(self.coeffs[:, :, 3:]))

    def eval(self, x, xt=None) -> np.ndarray:
        if self.uses_delay and xt is None:
            raise DomainError(f"tensor {self.name or ''} has delayed entries; xt is required")
        return self.coeffs @ _z(x, xt)

    def __add__(self, other: "PoissonTensor") -> "PoissonTensor":
        return PoissonTensor(self.coeffs + other.coeffs)

    def __rmul__(self, a: float) -> "PoissonTensor":
        return PoissonTensor(a * self.coeffs)


def _tensor(entries, name="") -> PoissonTensor:
    """Build a tensor from upper-triangle entries (i, j, var, c): P_ij += c * z_var."""
    coeffs = np.zeros((3, 3, 6))
    for i, j, var, c in entries:
        coeffs[i - 1, j - 1, var - 1] += c
        coeffs[j - 1, i - 1, var - 1] -= c
    return PoissonTensor(coeffs, name=name)


P1 = _tensor([(1, 2, 3, 1.0), (1, 3, 2, -1.0)], name="P1")
P2 = _tensor([(1, 3, 2, 0.5), (2, 3, 1, -0.5)], name="P2")
P3 = _tensor([(1, 3, 2, -0.5), (2, 3, 1, 0.5)], name="P3")


def pencil(a: float, b: float, c: float) -> PoissonTensor:
    """The compatible combination a*P1 + b*P2 + c*P3 (any real a, b, c)."""
    return PoissonTensor(
        a * P1.coeffs + b * P2.coeffs + c * P3.coeffs, name=f"pencil({a},{b},{c})"
    )


def pencil_hamiltonian(a: float, b: float, c: float) -> Quadratic:
    """(x1^2 + x2^2) / (2a); generates the flow under pencil(a, b, c).  a != 0."""
    if a == 0:
        raise DomainError("pencil hamiltonian requires a != 0")
    s = 1.0 / (2.0 * a)
    return _quad(diag=[(1, s), (2, s)], name="h-pencil")


def pencil_casimir(a: float, b: float, c: float) -> Quadratic:
    """Casimir of pencil(a, b, c): -(v/a) x1^2 + (u/a) x2^2 + x3^2 with
    u = a - b/2 + c/2, v = b/2 - c/2.  a != 0."""
    if a == 0:
        raise DomainError("pencil casimir requires a != 0")
    u = a - b / 2.0 + c / 2.0
    v = b / 2.0 - c / 2.0
    return _quad(diag=[(1, -v / a), (2, u / a), (3, 1.0)], name="c-pencil")


def hamiltonian_field(P: PoissonTensor, h: Quadratic, x, xt=None) -> np.ndarray:
    """The generated field P(z) grad_x h at (x, xt)."""
    return P.eval(x, xt) @ h.grad_x(x, xt)


def bracket(P: PoissonTensor, f: Quadratic, g: Quadratic, x, xt=None) -> float:
    """{f, g}(x) = grad_x f . P . grad_x g."""
    return float(f.grad_x(x, xt) @ P.eval(x, xt) @ g.grad_x(x, xt))


def bracket_gradient(P: PoissonTensor, f: Quadratic, g: Quadratic, x, xt=None) -> np.ndarray:
    """Exact x-gradient of y -> {f, g}(y) at x, with xt held fixed.

    With affine gradients gf(y) = A_f y + r_f and linear-in-y tensor entries,
    d/dy_k {f,g} = (A_f e_k)^T P gg + gf^T (dP/dy_k) gg + gf^T P (A_g e_k),
    where dP/dy_k is the constant coefficient slice of the tensor.
    """
    gf = f.grad_x(x, xt)
    gg = g.grad_x(x, xt)
    Pm = P.eval(x, xt)
    Af = f.Q[:3, :3]
    Ag = g.Q[:3, :3]
    out = np.empty(3)
    Pgg = Pm @ gg
    gfP = gf @ Pm
    for k in range(3):
        out[k] = Af[:, k] @ Pgg + gf @ P.coeffs[:, :, k] @ gg + gfP @ Ag[:, k]
    return out


def jacobi_residual(P: PoissonTensor, f: Quadratic, g: Quadratic, h: Quadratic, x, xt=None) -> float:
    """{f,{g,h}} + {g,{h,f}} + {h,{f,g}} at x, via exact inner gradients."""
    Pm = P.eval(x, xt)
    total = 0.0
    for a, b, c in ((f, g, h), (g, h, f), (h, f, g)):
        inner = bracket_gradient(P, b, c, x, xt)
        total += a.grad_x(x, xt) @ Pm @ inner
    return float(total)


def casimir_residual(P: PoissonTensor, c: Quadratic, x, xt=None) -> np.ndarray:
    """P(z) grad_x c; the zero vector when c is a Casimir of P."""
    return P.eval(x, xt) @ c.grad_x(x, xt)


def tri_hamiltonian_gap(x) -> float:
    """Max pairwise sup-norm gap among the three generated fields and the
    classical right-hand side at ``x``; zero up to roundoff everywhere."""
    from .core import rabinovich_field

    fields = [
        hamiltonian_field(P1, H1, x),
        hamiltonian_field(P2, H2, x),
        hamiltonian_field(P3, H3, x),
        rabinovich_field(x),
    ]
    gap = 0.0
    for i in range(len(fields)):
        for j in range(i + 1, len(fields)):
            gap = max(gap, float(np.max(np.abs(fields[i] - fields[j]))))
    return gap
