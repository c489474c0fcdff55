"""Hamiltonian dynamics at desk scale.

Sign conventions: the Hamiltonian vector field is X_H = J grad H where J
is the system's chosen complex structure -- the standard J0 by default,
or its negative ("canonical") which matches the convention in which the
constant-orbit index satisfies CZcan = n - Morse index.

Autonomous systems only.  Phase spaces: the plane R^2, the cylinder
S^1 x R with a period-1 angle, and R^{2n}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import (
    NoOrbitFoundError,
    ParameterError,
    StepFailureError,
)
from .index import IndexValue, cz_rs
from .splin import SymplecticPath, standard_j

PHASE_SPACES = ("plane", "cylinder", "r2n")
FD_GRAD_STEP = 1e-6
FD_HESS_STEP = 1e-5


@dataclass
class HamiltonianSystem:
    hamiltonian: Callable[[np.ndarray], float]
    n: int = 1
    phase_space: str = "plane"
    gradient: Optional[Callable[[np.ndarray], np.ndarray]] = None
    hessian: Optional[Callable[[np.ndarray], np.ndarray]] = None
    j_structure: str = "standard"  # "standard" (J0) or "canonical" (-J0)

    def __post_init__(self):
        if self.phase_space not in PHASE_SPACES:
            raise ParameterError("unknown phase space %r" % self.phase_space)
        if self.j_structure not in ("standard", "canonical"):
            raise ParameterError("unknown j_structure %r" % self.j_structure)
        if self.phase_space in ("plane", "cylinder") and self.n != 1:
            raise ParameterError("plane/cylinder phase spaces have n = 1")

    @property
    def J(self) -> np.ndarray:
        J = standard_j(self.n)
        return J if self.j_structure == "standard" else -J

    def grad(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        if self.gradient is not None:
            return np.asarray(self.gradient(z), dtype=float)
        h = FD_GRAD_STEP * max(1.0, float(np.max(np.abs(z))))
        g = np.empty_like(z)
        for i in range(len(z)):
            e = np.zeros_like(z)
            e[i] = h
            g[i] = (self.hamiltonian(z + e) - self.hamiltonian(z - e)) / (2 * h)
        return g

    def hess(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        if self.hessian is not None:
            H = np.asarray(self.hessian(z), dtype=float)
        else:
            h = FD_HESS_STEP * max(1.0, float(np.max(np.abs(z))))
            d = len(z)
            H = np.empty((d, d))
            for i in range(d):
                e = np.zeros(d)
                e[i] = h
                H[:, i] = (self.grad(z + e) - self.grad(z - e)) / (2 * h)
        return 0.5 * (H + H.T)

    def check_gradient(self, rng: np.random.Generator, probes: int = 10,
                       rel_tol: float = 1e-5) -> bool:
        """Analytic gradient vs central differences on random probe points."""
        if self.gradient is None:
            return True
        for _ in range(probes):
            z = rng.normal(size=2 * self.n)
            ana = np.asarray(self.gradient(z), dtype=float)
            num = HamiltonianSystem(
                self.hamiltonian, self.n, "r2n" if self.n > 1 else "plane"
            ).grad(z)
            if np.max(np.abs(ana - num)) > rel_tol * max(1.0, np.max(np.abs(ana))):
                return False
        return True

    def wrap(self, z: np.ndarray) -> np.ndarray:
        if self.phase_space == "cylinder":
            z = z.copy()
            z[0] = z[0] % 1.0
        return z

    def distance(self, a: np.ndarray, b: np.ndarray) -> float:
        d = np.asarray(a, dtype=float) - np.asarray(b, dtype=float)
        if self.phase_space == "cylinder":
            d[0] = (d[0] + 0.5) % 1.0 - 0.5
        return float(np.linalg.norm(d))


def harmonic_system(j_structure: str = "standard") -> HamiltonianSystem:
    """H(z) = |z|^2 / 2 on the plane."""
    return HamiltonianSystem(
        hamiltonian=lambda z: 0.5 * float(z @ z),
        gradient=lambda z: np.asarray(z, dtype=float),
        hessian=lambda z: np.eye(2),
        n=1, phase_space="plane", j_structure=j_structure,
    )


def pendulum_system(j_structure: str = "standard",
                    scale: float = 1.0) -> HamiltonianSystem:
    """H(q, v) = v^2 / 2 + cos(2 pi q) on the cylinder, optionally scaled.

    Equilibria: saddle of H at (0, 0) (Morse index 1) and minimum at
    (1/2, 0) (Morse index 0).
    """
    c = scale

    def H(z):
        return c * (0.5 * z[1] ** 2 + np.cos(2 * np.pi * z[0]))

    def G(z):
        return c * np.array([-2 * np.pi * np.sin(2 * np.pi * z[0]), z[1]])

    def Hs(z):
        return c * np.diag([-4 * np.pi**2 * np.cos(2 * np.pi * z[0]), 1.0])

    return HamiltonianSystem(H, 1, "cylinder", G, Hs, j_structure)


def ham_vector_field(sys: HamiltonianSystem, z: np.ndarray) -> np.ndarray:
    """X_H(z) = J grad H(z)."""
    return sys.J @ sys.grad(np.asarray(z, dtype=float))


@dataclass
class Trajectory:
    ts: np.ndarray
    zs: np.ndarray  # shape (N, 2n)

    def energy_drift(self, sys: HamiltonianSystem) -> float:
        e = np.array([sys.hamiltonian(z) for z in self.zs])
        return float(np.max(np.abs(e - e[0])))


def _midpoint_step(sys: HamiltonianSystem, z0: np.ndarray, dt: float,
                   t: float, newton_tol: float = 1e-13,
                   max_iter: int = 25) -> np.ndarray:
    """One implicit-midpoint step z1 = z0 + dt X((z0+z1)/2) by Newton."""
    J = sys.J
    z1 = z0 + dt * (J @ sys.grad(z0))  # explicit Euler predictor
    eye = np.eye(len(z0))
    for _ in range(max_iter):
        mid = 0.5 * (z0 + z1)
        g = z1 - z0 - dt * (J @ sys.grad(mid))
        if np.max(np.abs(g)) < newton_tol * max(1.0, np.max(np.abs(z1))):
            return z1
        Jac = eye - 0.5 * dt * (J @ sys.hess(mid))
        try:
            z1 = z1 - np.linalg.solve(Jac, g)
        except np.linalg.LinAlgError:
            raise StepFailureError("singular Newton system at t=%g" % t, t)
    raise StepFailureError("midpoint Newton stalled at t=%g" % t, t)


def integrate(sys: HamiltonianSystem, z0, T: float, dt: float) -> Trajectory:
    """Implicit-midpoint trajectory from z0 over [0, T]."""
    if dt <= 0 or not np.isfinite(T):
        raise ParameterError("need dt > 0 and finite T")
    steps = max(1, int(np.ceil(abs(T) / dt)))
    h = T / steps
    zs = np.empty((steps + 1, 2 * sys.n))
    zs[0] = np.asarray(z0, dtype=float)
    for k in range(steps):
        zs[k + 1] = _midpoint_step(sys, zs[k], h, k * h)
    return Trajectory(np.linspace(0.0, T, steps + 1), zs)


def _flow_with_variational(sys: HamiltonianSystem, z0, T: float, steps: int):
    """Flow endpoint plus monodromy samples (linearized flow matrices)."""
    h = T / steps
    dim = 2 * sys.n
    J = sys.J
    eye = np.eye(dim)
    zs = np.empty((steps + 1, dim))
    Ms = np.empty((steps + 1, dim, dim))
    zs[0] = np.asarray(z0, dtype=float)
    Ms[0] = eye
    for k in range(steps):
        zs[k + 1] = _midpoint_step(sys, zs[k], h, k * h)
        A = J @ sys.hess(0.5 * (zs[k] + zs[k + 1]))
        Ms[k + 1] = np.linalg.solve(eye - 0.5 * h * A, (eye + 0.5 * h * A) @ Ms[k])
    return zs, Ms


@dataclass
class PeriodicOrbit:
    z0: np.ndarray
    period: float
    trajectory: Trajectory
    monodromy: SymplecticPath
    residual: float


def _monodromy_path(Ms: np.ndarray, tol: float = 1e-6) -> SymplecticPath:
    ts = np.linspace(0.0, 1.0, len(Ms))
    return SymplecticPath(ts, Ms.copy(), True, False, tol)


def _first_return(sys: HamiltonianSystem, z0: np.ndarray, normal: np.ndarray,
                  anchor: np.ndarray, T_guess: float, dt: float):
    """Poincare return of z0 to the section through ``anchor``.

    Integrates to 1.6 T_guess, collects same-direction section crossings,
    and refines the one closest to T_guess by a secant solve inside the
    bracketing step.  Returns (return point, return time).
    """
    horizon = 1.6 * T_guess
    steps = max(64, int(np.ceil(horizon / dt)))
    h = horizon / steps
    z = z0.copy()
    prev = float(normal @ (z - anchor))
    crossings = []
    for k in range(steps):
        z_next = _midpoint_step(sys, z, h, k * h)
        cur = float(normal @ (z_next - anchor))
        if prev < 0.0 <= cur and k * h > 10 * dt:
            # same-direction crossing inside (k h, (k+1) h): secant on tau
            a, fa = 0.0, prev
            b, fb = h, cur
            za = z
            for _ in range(60):
                tau = a - fa * (b - a) / (fb - fa)
                zm = _midpoint_step(sys, za, tau - a, k * h) if tau > a else za
                fm = float(normal @ (zm - anchor))
                if abs(fm) < 1e-13 or b - a < 1e-14:
                    break
                if fa * fm <= 0.0:
                    b, fb = tau, fm
                else:
                    za, a, fa = zm, tau, fm
            crossings.append((k * h + tau, zm))
        z = z_next
        prev = cur
    if not crossings:
        raise NoOrbitFoundError("no section return before t = %.3g" % horizon)
    T, zT = min(crossings, key=lambda c: abs(c[0] - T_guess))
    return zT, T


def find_periodic_orbit(sys: HamiltonianSystem, z_guess, T_guess: float,
                        dt: float = 1e-3, shoot_tol: float = 1e-8,
                        max_iter: int = 50) -> PeriodicOrbit:
    """Poincare-section Newton shooting for a periodic orbit.

    The initial point is confined to the hyperplane through z_guess
    orthogonal to the flow there (removing the time-shift degeneracy) and
    Newton runs on the section coordinates of the first-return map; the
    return time is the period of the branch selected by T_guess.
    Equilibria short-circuit to constant orbits.
    """
    z = np.asarray(z_guess, dtype=float)
    dim = 2 * sys.n
    X0 = ham_vector_field(sys, z)
    if np.linalg.norm(X0) < 1e-10:
        steps = max(64, int(np.ceil(T_guess / dt)))
        zs, Ms = _flow_with_variational(sys, z, T_guess, steps)
        traj = Trajectory(np.linspace(0.0, T_guess, steps + 1), zs)
        return PeriodicOrbit(z, float(T_guess), traj, _monodromy_path(Ms), 0.0)

    normal = X0 / np.linalg.norm(X0)
    anchor = z.copy()
    # orthonormal basis of the section (complement of the normal)
    Q, _ = np.linalg.qr(np.column_stack([normal, np.eye(dim)])[:, :dim])
    E = Q[:, 1:]

    def gap_of(point):
        zT, T = _first_return(sys, point, normal, anchor, T_guess, dt)
        g = zT - point
        if sys.phase_space == "cylinder":
            g[0] = (g[0] + 0.5) % 1.0 - 0.5
        return g, T

    y = np.zeros(dim - 1)
    for _ in range(max_iter):
        point = anchor + E @ y
        g, T = gap_of(point)
        if np.linalg.norm(g) < shoot_tol:
            steps = max(64, int(np.ceil(T / dt)))
            zs, Ms = _flow_with_variational(sys, point, T, steps)
            traj = Trajectory(np.linspace(0.0, T, steps + 1), zs)
            return PeriodicOrbit(point, float(T), traj, _monodromy_path(Ms),
                                 float(np.linalg.norm(zs[-1] - point)))
        F = E.T @ g
        hfd = 1e-6 * max(1.0, float(np.max(np.abs(y))))
        Jc = np.empty((dim - 1, dim - 1))
        for j in range(dim - 1):
            dy = np.zeros(dim - 1)
            dy[j] = hfd
            gp, _ = gap_of(anchor + E @ (y + dy))
            Jc[:, j] = (E.T @ gp - F) / hfd
        try:
            y = y - np.linalg.solve(Jc, F)
        except np.linalg.LinAlgError:
            raise NoOrbitFoundError("singular section-return Jacobian")
        if not np.all(np.isfinite(y)):
            raise NoOrbitFoundError("shooting iteration diverged")
    raise NoOrbitFoundError("Newton shooting did not converge in %d iterations"
                            % max_iter)


def monodromy_and_cz(sys: HamiltonianSystem, orbit: PeriodicOrbit,
                     tol: float = 1e-6):
    """(monodromy path, nondegenerate?, indices or None).

    Nondegenerate iff 1 is not an eigenvalue of the time-1 monodromy; in
    that case both normalizations of the Conley-Zehnder index of the
    monodromy path are returned as {"standard": .., "canonical": ..}.
    """
    path = orbit.monodromy
    path.validate(check_samples=False)
    M = path.endpoint()
    nondeg = abs(np.linalg.det(M - np.eye(len(M)))) > tol
    if not nondeg:
        return path, False, None
    std = cz_rs(path)
    return path, True, {"standard": std, "canonical": std.in_normalization("canonical")}


@dataclass
class PeriodReport:
    kind: str  # "constant" | "periodic" | "none"
    period: Optional[float] = None


def prime_period(traj: Trajectory, tol: float = 1e-6) -> PeriodReport:
    """Classify a uniformly sampled trajectory by its period group.

    Returns constant (period group R), periodic with the prime period tau
    (first full-state return, refined parabolically), or no period found
    on the window.
    """
    zs = traj.zs
    ts = traj.ts
    spread = float(np.max(np.abs(zs - zs[0])))
    if spread < tol:
        return PeriodReport("constant")
    d = np.linalg.norm(zs - zs[0], axis=1)
    scale = float(np.max(d))
    # first local minimum of the return distance that is a genuine return
    for k in range(2, len(d) - 1):
        if d[k] <= d[k - 1] and d[k] <= d[k + 1] and d[k] < max(tol, 0.05 * scale):
            denom = d[k - 1] - 2 * d[k] + d[k + 1]
            shift = 0.0 if denom <= 0 else 0.5 * (d[k - 1] - d[k + 1]) / denom
            tau = ts[k] + shift * (ts[1] - ts[0])
            return PeriodReport("periodic", float(tau))
    return PeriodReport("none")


# ---------------------------------------------------------------------------
# annulus twist maps


@dataclass
class TwistReport:
    fixed_points: list
    is_curve: bool
    rotation_lower: float
    rotation_upper: float


def _theta_gap(a: float, b: float) -> float:
    return (a - b + 0.5) % 1.0 - 0.5


def twist_fixed_points(map_fn, r_range: tuple[float, float],
                       grid: int = 48, tol: float = 1e-10) -> TwistReport:
    """Fixed points of an annulus map (theta mod 1, r in [a, b]).

    Grid-seeded Newton on (wrapped theta shift, r shift); deduplicated.
    Also reports the mean angular shift on each boundary circle so the
    caller can check the twist condition, and flags an apparent curve of
    fixed points when they are dense along the angle.
    """
    a, b = r_range

    def F(p):
        q = np.asarray(map_fn(p), dtype=float)
        return np.array([_theta_gap(q[0], p[0]), q[1] - p[1]])

    found = []
    thetas = np.arange(grid) / grid
    rs = np.linspace(a, b, grid)
    for th in thetas:
        for r in rs:
            p = np.array([th, r])
            if np.linalg.norm(F(p)) > 0.2:
                continue
            ok = True
            for _ in range(40):
                f = F(p)
                if np.linalg.norm(f) < tol:
                    break
                h = 1e-7
                Jc = np.column_stack([
                    (F(p + [h, 0]) - F(p - [h, 0])) / (2 * h),
                    (F(p + [0, h]) - F(p - [0, h])) / (2 * h),
                ])
                # least squares so rank-deficient Jacobians (curves of
                # fixed points) still converge onto the fixed set
                step, *_ = np.linalg.lstsq(Jc, f, rcond=None)
                if not np.all(np.isfinite(step)):
                    ok = False
                    break
                p = p - step
                p[0] = p[0] % 1.0
            else:
                ok = False
            if not ok or not (a - 1e-9 <= p[1] <= b + 1e-9):
                continue
            if np.linalg.norm(F(p)) > 1e-8:
                continue
            if all(
                abs(_theta_gap(p[0], q[0])) + abs(p[1] - q[1]) > 1e-5
                for q in found
            ):
                found.append(p.copy())

    rot_lo = float(np.mean([_theta_gap(np.asarray(map_fn([t, a]))[0], t)
                            for t in thetas]))
    rot_hi = float(np.mean([_theta_gap(np.asarray(map_fn([t, b]))[0], t)
                            for t in thetas]))
    # a curve of fixed points shows up as fixed points densely filling the
    # angle direction; isolated fixed points occupy only a few angles
    distinct_thetas = {round(p[0], 3) for p in found}
    is_curve = len(distinct_thetas) >= max(8, grid // 2)
    return TwistReport([p for p in found], is_curve, rot_lo, rot_hi)
