"""Fidelity upper bounds for network states.

The triangle-network criteria act on the Z-measurement moments of a state
with assumed GHZ fraction F: the comparison matrix of the covariance
matrix must stay positive semidefinite, optionally under the dichotomic
compatibility constraints on the residual moments, or the classical
triangle-network inequality must hold.  The bound is the supremum F for
which residual moments keeping the criterion satisfiable exist, found by
bisection over a grid-plus-refinement feasibility search.  The cluster
bound maximizes the fidelity under the anticommutation constraints; the
three inner variables form a linear objective over a capped ball and are
solved exactly, leaving a two-variable outer search.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .pauli import PauliString
from .states import DenseState, StateError, expectation

FEAS_TOL = 1e-9


@dataclass(frozen=True)
class CorrelationVariables:
    """Single- and two-party Z moments of the residual state."""

    a: float
    b: float
    c: float
    d: float
    e: float
    f: float

    def __post_init__(self):
        for name in "abcdef":
            v = getattr(self, name)
            if not -1.0 <= v <= 1.0 + 1e-12:
                raise ValueError(f"moment {name}={v} outside [-1, 1]")


@dataclass(frozen=True)
class ClusterVariables:
    """Common expectation values of the five cluster-stabilizer columns."""

    theta: float
    lam: float
    xi: float
    sigma: float
    omega: float


# -- covariance / comparison matrices ---------------------------------------------

def covariance_matrix_z(s: DenseState) -> np.ndarray:
    """3x3 covariance matrix of single-qubit Z measurements."""
    if s.num_parties != 3 or not s.is_qubits:
        raise StateError("covariance matrix is defined for 3 qubits")
    singles = [
        expectation(s, PauliString.from_letters(3, {i: "Z"})) for i in range(3)
    ]
    gamma = np.empty((3, 3))
    for i in range(3):
        gamma[i, i] = 1.0 - singles[i] ** 2
        for j in range(i + 1, 3):
            pair = expectation(s, PauliString.from_letters(3, {i: "Z", j: "Z"}))
            gamma[i, j] = gamma[j, i] = pair - singles[i] * singles[j]
    return gamma


def comparison_matrix(gamma: np.ndarray) -> np.ndarray:
    """Keep the diagonal, replace off-diagonal entries by -|entry|."""
    gamma = np.asarray(gamma, dtype=float)
    if gamma.shape[0] != gamma.shape[1] or not np.allclose(gamma, gamma.T):
        raise ValueError("comparison matrix needs a symmetric input")
    m = -np.abs(gamma)
    np.fill_diagonal(m, np.diag(gamma))
    return m


def itn_cm_check(gamma: np.ndarray) -> bool:
    """PSD test of the comparison matrix; failure excludes the independent
    triangle network."""
    return bool(np.linalg.eigvalsh(comparison_matrix(gamma))[0] >= -FEAS_TOL)


# -- Gisin inequality and extra constraints ------------------------------------------

def gisin_check(
    e_a: float, e_b: float, e_c: float, e_ab: float, e_ac: float, e_bc: float
) -> tuple[float, float, bool]:
    """The classical triangle-network inequality on Z moments."""
    for v in (e_a, e_b, e_c, e_ab, e_ac, e_bc):
        if not -1.0 - 1e-12 <= v <= 1.0 + 1e-12:
            raise ValueError(f"moment {v} outside [-1, 1]")
    lhs = (
        (1 + abs(e_a) + abs(e_b) + e_ab) ** 2
        + (1 + abs(e_a) + abs(e_c) + e_ac) ** 2
        + (1 + abs(e_b) + abs(e_c) + e_bc) ** 2
    )
    rhs = 6 * (1 + abs(e_a)) * (1 + abs(e_b)) * (1 + abs(e_c))
    return lhs, rhs, lhs <= rhs + FEAS_TOL


def extra_constraints_check(vars: CorrelationVariables) -> bool:
    """Compatibility of pair moments with the single-party moments."""
    return (
        vars.d >= abs(vars.a + vars.b) - 1 - FEAS_TOL
        and vars.e >= abs(vars.a + vars.c) - 1 - FEAS_TOL
        and vars.f >= abs(vars.b + vars.c) - 1 - FEAS_TOL
    )


# -- GHZ fidelity bound -----------------------------------------------------------

_METHODS = ("cm_only", "cm_extra", "gisin_extra")


def _cm_margin(F: float, a, b, c, d, e, f) -> float:
    """Minimum eigenvalue of the comparison matrix at these moments."""
    one = 1.0 - F
    ea, eb, ec = a * one, b * one, c * one
    eab, eac, ebc = F + d * one, F + e * one, F + f * one
    gamma = np.array(
        [
            [1 - ea * ea, eab - ea * eb, eac - ea * ec],
            [eab - ea * eb, 1 - eb * eb, ebc - eb * ec],
            [eac - ea * ec, ebc - eb * ec, 1 - ec * ec],
        ]
    )
    return float(np.linalg.eigvalsh(comparison_matrix(gamma))[0])


def _gisin_margin(F: float, a, b, c):
    """rhs - lhs of the triangle inequality with pair moments pushed to
    their smallest compatible values (which minimizes the lhs)."""
    one = 1.0 - F
    d = np.maximum(-1.0, np.abs(a + b) - 1.0)
    e = np.maximum(-1.0, np.abs(a + c) - 1.0)
    f = np.maximum(-1.0, np.abs(b + c) - 1.0)
    ea, eb, ec = a * one, b * one, c * one
    eab, eac, ebc = F + d * one, F + e * one, F + f * one
    lhs = (
        (1 + np.abs(ea) + np.abs(eb) + eab) ** 2
        + (1 + np.abs(ea) + np.abs(ec) + eac) ** 2
        + (1 + np.abs(eb) + np.abs(ec) + ebc) ** 2
    )
    rhs = 6 * (1 + np.abs(ea)) * (1 + np.abs(eb)) * (1 + np.abs(ec))
    return rhs - lhs


def _pair_options(F: float, a, b, lo):
    """Residual pair-moment candidates: interval ends and the value
    nulling the covariance entry (all arrays over the grid)."""
    one = 1.0 - F
    opts = [lo, np.ones_like(lo)]
    if F < 1.0:
        star = (a * b * one * one - F) / one
        opts.append(np.minimum(1.0, np.maximum(lo, star)))
    else:
        opts.append(lo)
    return np.stack(opts, axis=-1)


def _cm_grid_best(F: float, singles_zero: bool, extra: bool, step: float):
    """Best comparison-matrix margin proxy over the moment grid.

    PSD is tested through the seven principal minors; the best grid point
    seeds the exact refinement.
    """
    axis = np.array([0.0]) if singles_zero else np.arange(-1.0, 1.0 + step / 2, step)
    A, B, C = (x.ravel() for x in np.meshgrid(axis, axis, axis, indexing="ij"))
    one = 1.0 - F

    def lo(u, v):
        return np.maximum(-1.0, np.abs(u + v) - 1.0) if extra else np.full_like(u, -1.0)

    d_opt = _pair_options(F, A, B, lo(A, B))
    e_opt = _pair_options(F, A, C, lo(A, C))
    f_opt = _pair_options(F, B, C, lo(B, C))
    ea, eb, ec = A * one, B * one, C * one
    alpha, beta, gamma_d = 1 - ea * ea, 1 - eb * eb, 1 - ec * ec

    best = -np.inf
    best_idx, best_combo = 0, (0, 0, 0)
    for k1, k2, k3 in itertools.product(range(d_opt.shape[-1]), repeat=3):
        p = np.abs(F + d_opt[:, k1] * one - ea * eb)
        q = np.abs(F + e_opt[:, k2] * one - ea * ec)
        r = np.abs(F + f_opt[:, k3] * one - eb * ec)
        det = (
            alpha * beta * gamma_d
            - 2 * p * q * r
            - alpha * r * r
            - beta * q * q
            - gamma_d * p * p
        )
        margin = np.minimum.reduce(
            [
                alpha, beta, gamma_d,
                alpha * beta - p * p,
                alpha * gamma_d - q * q,
                beta * gamma_d - r * r,
                det,
            ]
        )
        i = int(np.argmax(margin))
        if margin[i] > best:
            best = float(margin[i])
            best_idx, best_combo = i, (k1, k2, k3)
    k1, k2, k3 = best_combo
    x0 = (
        float(A[best_idx]), float(B[best_idx]), float(C[best_idx]),
        float(d_opt[best_idx, k1]), float(e_opt[best_idx, k2]), float(f_opt[best_idx, k3]),
    )
    return best, x0


def _refine_cm(F: float, x0, singles_zero: bool, extra: bool) -> float:
    """Coordinate descent on the exact minimum eigenvalue."""
    x = list(x0)

    def lo_pair(j, y):
        if not extra:
            return -1.0
        pairs = {3: (0, 1), 4: (0, 2), 5: (1, 2)}
        u, v = pairs[j]
        return max(-1.0, abs(y[u] + y[v]) - 1.0)

    coords = list(range(3 if singles_zero else 0, 6))
    cur = _cm_margin(F, *x)
    step = 0.05
    while step > 1e-4:
        improved = False
        for k in coords:
            for sgn in (+1, -1):
                trial = list(x)
                low = lo_pair(k, trial) if k >= 3 else -1.0
                trial[k] = min(1.0, max(low, trial[k] + sgn * step))
                for j in (3, 4, 5):
                    trial[j] = max(trial[j], lo_pair(j, trial))
                m = _cm_margin(F, *trial)
                if m > cur + 1e-15:
                    x, cur, improved = trial, m, True
        if not improved:
            step /= 2
    return cur


def _feasible(F: float, method: str, singles_zero: bool, step: float) -> bool:
    if method in ("cm_only", "cm_extra"):
        extra = method == "cm_extra"
        proxy, x0 = _cm_grid_best(F, singles_zero, extra, step)
        if proxy < -0.5:
            return False
        return _refine_cm(F, x0, singles_zero, extra) >= -FEAS_TOL
    axis = np.array([0.0]) if singles_zero else np.arange(-1.0, 1.0 + step / 2, step)
    A, B, C = (x.ravel() for x in np.meshgrid(axis, axis, axis, indexing="ij"))
    margins = _gisin_margin(F, A, B, C)
    i = int(np.argmax(margins))
    best = float(margins[i])
    x = [float(A[i]), float(B[i]), float(C[i])]
    if not singles_zero:
        stepr, cur = 0.05, best
        while stepr > 1e-4:
            improved = False
            for k in range(3):
                for sgn in (+1, -1):
                    trial = list(x)
                    trial[k] = min(1.0, max(-1.0, trial[k] + sgn * stepr))
                    m = float(_gisin_margin(F, *trial))
                    if m > cur + 1e-15:
                        x, cur, improved = trial, m, True
            if not improved:
                stepr /= 2
        best = cur
    return best >= -FEAS_TOL


@dataclass(frozen=True)
class GhzBoundResult:
    method: str
    bound: float
    bisection_steps: int
    singles_zero: bool

    def to_json_dict(self) -> dict:
        return {
            "method": self.method,
            "bound": self.bound,
            "bisection_steps": self.bisection_steps,
            "singles_zero": self.singles_zero,
        }


def ghz_fidelity_bound(
    method: str,
    singles_zero: bool = False,
    tol: float = 1e-7,
    grid_step: float = 0.1,
) -> GhzBoundResult:
    """Supremum GHZ fidelity compatible with the chosen criterion.

    methods: cm_only (comparison matrix PSD), cm_extra (plus dichotomic
    compatibility of the residual moments), gisin_extra (classical
    triangle inequality plus the same compatibility constraints).
    ``singles_zero`` pins the residual single-party moments to zero.
    """
    if method not in _METHODS:
        raise ValueError(f"method must be one of {_METHODS}")
    if _feasible(1.0, method, singles_zero, grid_step):
        return GhzBoundResult(method, 1.0, 0, singles_zero)
    lo, hi = 0.0, 1.0
    steps = 0
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if _feasible(mid, method, singles_zero, grid_step):
            lo = mid
        else:
            hi = mid
        steps += 1
    return GhzBoundResult(method, (lo + hi) / 2, steps, singles_zero)


# -- cluster fidelity bound ----------------------------------------------------------

_CLUSTER_CONSTRAINTS = (
    "xi-lambda",       # Xi^2 + Lambda^2 <= 1
    "xi-theta-sigma",  # Xi^2 + Theta^2 + Sigma^2 <= 1
    "theta-lambda",    # 2 Theta - 1 <= sqrt(1 - Lambda^2)
    "sigma-lambda",    # 2 Sigma - 1 <= sqrt(1 - Lambda^2)
    "theta-omega",     # 2 Theta - 1 <= sqrt(1 - Omega^2)
    "sigma-omega",     # 2 Sigma - 1 <= sqrt(1 - Omega^2)
)


def cluster_fidelity(v: ClusterVariables) -> float:
    return (1 + 4 * v.theta + 4 * v.lam + 2 * v.xi - 4 * v.sigma + v.omega) / 16


def cluster_constraints_ok(v: ClusterVariables, constraints=_CLUSTER_CONSTRAINTS) -> bool:
    th, la, xi, si, om = v.theta, v.lam, v.xi, v.sigma, v.omega
    checks = {
        "xi-lambda": xi * xi + la * la <= 1 + 1e-9,
        "xi-theta-sigma": xi * xi + th * th + si * si <= 1 + 1e-9,
        "theta-lambda": 2 * th - 1 <= math.sqrt(max(0.0, 1 - la * la)) + 1e-9,
        "sigma-lambda": 2 * si - 1 <= math.sqrt(max(0.0, 1 - la * la)) + 1e-9,
        "theta-omega": 2 * th - 1 <= math.sqrt(max(0.0, 1 - om * om)) + 1e-9,
        "sigma-omega": 2 * si - 1 <= math.sqrt(max(0.0, 1 - om * om)) + 1e-9,
    }
    return all(checks[c] for c in constraints)


def _sqrt0(v: float) -> float:
    return math.sqrt(max(0.0, v))


def _inner_cluster_max(theta_cap: float, xi_cap: float, ball: bool):
    """Maximize 4*Theta + 2*Xi - 4*Sigma under component caps and, if
    active, the unit ball on (Theta, Xi, Sigma).

    With y = (Theta, Xi, -Sigma) this is a positive linear functional over
    a capped ball, solved by iterative clamping of saturated caps.
    """
    c = np.array([4.0, 2.0, 4.0])
    caps = np.array([min(1.0, theta_cap), min(1.0, xi_cap), 1.0])
    if not ball:
        y = caps.copy()
        return float(c @ y), y
    y = np.zeros(3)
    capped = np.zeros(3, dtype=bool)
    for _ in range(4):
        r2 = 1.0 - float(np.sum(y[capped] ** 2))
        free = ~capped
        if not free.any() or r2 <= 0:
            break
        lam = math.sqrt(max(0.0, r2) / float(np.sum(c[free] ** 2)))
        y[free] = lam * c[free]
        viol = free & (y > caps + 1e-15)
        if not viol.any():
            break
        y[viol] = caps[viol]
        capped |= viol
    return float(c @ y), y


def _cluster_value(la: float, om: float, constraints) -> tuple[float, ClusterVariables]:
    theta_cap = 1.0
    if "theta-lambda" in constraints:
        theta_cap = min(theta_cap, (1 + _sqrt0(1 - la * la)) / 2)
    if "theta-omega" in constraints:
        theta_cap = min(theta_cap, (1 + _sqrt0(1 - om * om)) / 2)
    xi_cap = _sqrt0(1 - la * la) if "xi-lambda" in constraints else 1.0
    ball = "xi-theta-sigma" in constraints
    val, y = _inner_cluster_max(theta_cap, xi_cap, ball)
    v = ClusterVariables(theta=y[0], lam=la, xi=y[1], sigma=-y[2], omega=om)
    return (1 + val + 4 * la + om) / 16, v


@dataclass(frozen=True)
class ClusterBoundResult:
    bound: float
    variables: ClusterVariables
    grid_points: int

    def to_json_dict(self) -> dict:
        v = self.variables
        return {
            "bound": self.bound,
            "variables": {
                "theta": v.theta, "lambda": v.lam, "xi": v.xi,
                "sigma": v.sigma, "omega": v.omega,
            },
            "grid_points": self.grid_points,
        }


def cluster_fidelity_bound(
    constraints: tuple[str, ...] = _CLUSTER_CONSTRAINTS,
    grid_points: int = 81,
) -> ClusterBoundResult:
    """Maximize the cluster fidelity under the anticommutation-derived
    constraints.

    (Theta, Xi, Sigma) are optimized exactly at fixed (Lambda, Omega); the
    outer pair is scanned on a grid and polished by a compass search with
    diagonal moves (the optimum sits on a corner coupling both).  The
    Sigma upper caps never bind since the objective pushes Sigma down.
    """
    unknown = set(constraints) - set(_CLUSTER_CONSTRAINTS)
    if unknown:
        raise ValueError(f"unknown constraints {sorted(unknown)}")
    axis = np.linspace(-1.0, 1.0, grid_points)
    best, bx = -np.inf, (0.0, 0.0)
    for la in axis:
        for om in axis:
            val, _ = _cluster_value(float(la), float(om), constraints)
            if val > best:
                best, bx = val, (float(la), float(om))
    step = 2.0 / (grid_points - 1)
    x = list(bx)
    dirs = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)]
    while step > 1e-10:
        improved = False
        for dx, dy in dirs:
            la = min(1.0, max(-1.0, x[0] + step * dx))
            om = min(1.0, max(-1.0, x[1] + step * dy))
            val, _ = _cluster_value(la, om, constraints)
            if val > best + 1e-16:
                best, x, improved = val, [la, om], True
        if not improved:
            step *= 0.6
    _, variables = _cluster_value(x[0], x[1], constraints)
    assert cluster_constraints_ok(variables, constraints)
    return ClusterBoundResult(best, variables, grid_points)
