"""Symplectic linear algebra over R^{2n}.

Conventions fixed once for the whole library:

* coordinates are ordered (x, y) = (x_1..x_n, y_1..y_n);
* the standard complex structure is the block matrix
  J0 = [[0, -I], [I, 0]], so e^{theta J0} rotates counter-clockwise
  in each (x_j, y_j) plane;
* the bilinear form used for the eigenvalue-kind label is
  omega0(u, v) = u . (J0 v), normalized so that the first-kind
  eigenvalue of a counter-clockwise rotation by theta in (0, pi)
  is e^{i theta} (upper half plane).

Default tolerances: 1e-9 for algebraic identities, 1e-6 for ODE
round-trips.  Every operation accepts an explicit ``tol``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import (
    AmbiguousClassificationError,
    DimensionError,
    InvalidPathError,
    NotSymplecticError,
    ParameterError,
)

ALGEBRA_TOL = 1e-9
ODE_TOL = 1e-6

# guard band around classification boundaries: eigenvalues between tol
# and GUARD*tol of a boundary are rejected instead of silently resolved
GUARD = 100.0


def standard_j(n: int) -> np.ndarray:
    """The matrix J0 = [[0, -I], [I, 0]] of half-dimension n."""
    J = np.zeros((2 * n, 2 * n))
    J[:n, n:] = -np.eye(n)
    J[n:, :n] = np.eye(n)
    return J


def omega0(u: np.ndarray, v: np.ndarray, J: np.ndarray | None = None):
    """Symplectic product u . (J0 v); complex-bilinear for complex input."""
    u = np.asarray(u)
    v = np.asarray(v)
    if J is None:
        J = standard_j(u.shape[-1] // 2)
    return u @ (J @ v)


def symplecticity_residual(M: np.ndarray) -> float:
    """max-norm of M^T J0 M - J0."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionError("expected a square matrix, got shape %s" % (M.shape,))
    if M.shape[0] % 2:
        raise DimensionError("symplectic matrices have even side, got %d" % M.shape[0])
    J = standard_j(M.shape[0] // 2)
    return float(np.max(np.abs(M.T @ J @ M - J)))


def is_symplectic(M: np.ndarray, tol: float = ALGEBRA_TOL) -> bool:
    """True iff ||M^T J0 M - J0||_max <= tol."""
    return symplecticity_residual(M) <= tol


@dataclass(frozen=True)
class SymplecticMatrix:
    """A validated element of Sp(2n)."""

    mat: np.ndarray
    tol: float = ALGEBRA_TOL

    def __post_init__(self):
        mat = np.asarray(self.mat, dtype=float)
        object.__setattr__(self, "mat", mat)
        res = symplecticity_residual(mat)
        if res > self.tol:
            raise NotSymplecticError(
                "symplecticity residual %.3e exceeds tol %.3e" % (res, self.tol)
            )
        det = float(np.linalg.det(mat))
        if abs(det - 1.0) > max(self.tol, 1e3 * self.tol * mat.shape[0]):
            raise NotSymplecticError("det = %.12f is not 1 within tol" % det)

    @property
    def n(self) -> int:
        return self.mat.shape[0] // 2


def _as_matrix(M) -> np.ndarray:
    if isinstance(M, SymplecticMatrix):
        return M.mat
    return np.asarray(M, dtype=float)


def unitary_retract(M) -> np.ndarray:
    """Project M in Sp(2n) onto Sp(2n) cap O(2n) via (M M^T)^{-1/2} M.

    The square root is taken through the symmetric eigendecomposition of
    the positive definite M M^T, which is unconditionally stable here.
    """
    M = _as_matrix(M)
    P = M @ M.T
    w, V = np.linalg.eigh(P)
    if np.min(w) <= 0:
        raise NotSymplecticError("M M^T is not positive definite")
    return (V * (1.0 / np.sqrt(w))) @ V.T @ M


def unitary_blocks(U: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Split a matrix of the form [[X, -Y], [Y, X]] into (X, Y)."""
    U = np.asarray(U)
    n = U.shape[0] // 2
    return U[:n, :n], U[n:, :n]


def rho(M, tol: float = ALGEBRA_TOL) -> complex:
    """The circle-valued map: retract to U(n), then det(X + iY)."""
    U = unitary_retract(M)
    X, Y = unitary_blocks(U)
    val = complex(np.linalg.det(X + 1j * Y))
    mag = abs(val)
    if abs(mag - 1.0) > max(1e-5, tol * 1e2):
        raise NotSymplecticError("rho landed off the unit circle: |rho| = %.6f" % mag)
    return val / mag


# ---------------------------------------------------------------------------
# eigenvalue classification


@dataclass(frozen=True)
class SpectrumGroup:
    kind: str  # positive-hyperbolic-pair | negative-hyperbolic-pair |
    #            elliptic-pair | quadruple | unit-root
    members: tuple[complex, ...]
    first_kind: Optional[complex] = None  # for elliptic pairs


@dataclass(frozen=True)
class SpectrumReport:
    eigenvalues: tuple[complex, ...]
    groups: tuple[SpectrumGroup, ...]


def _guard(value: float, tol: float, what: str, offenders):
    if tol < value <= GUARD * tol:
        raise AmbiguousClassificationError(
            "eigenvalue within the guard band of the %s boundary "
            "(distance %.3e, tol %.3e)" % (what, value, tol),
            offenders,
        )


def classify_eigenvalues(M, tol: float = ALGEBRA_TOL) -> SpectrumReport:
    """Group the spectrum of a symplectic matrix.

    Groups: positive/negative hyperbolic pairs {lam, 1/lam}, elliptic
    pairs on the unit circle, generic quadruples, and unit roots +-1
    (which occur with even multiplicity).  For each elliptic pair the
    member with Im omega0(conj xi, xi) > 0 is labeled first kind.
    """
    M = _as_matrix(M)
    if M.shape[0] % 2:
        raise DimensionError("odd dimension")
    J = standard_j(M.shape[0] // 2)
    vals, vecs = np.linalg.eig(M)
    for lam in vals:
        _guard(abs(abs(lam) - 1.0), tol, "unit-circle", [lam])
        for root in (1.0, -1.0):
            _guard(abs(lam - root), tol, "root %+g" % root, [lam])

    order = np.lexsort((vals.imag, vals.real))
    vals = vals[order]
    vecs = vecs[:, order]
    used = np.zeros(len(vals), dtype=bool)
    groups: list[SpectrumGroup] = []

    def _claim(target: complex) -> int:
        free = np.where(~used)[0]
        if not len(free):
            raise AmbiguousClassificationError(
                "spectrum not closed under inversion/conjugation", [target]
            )
        dist = np.abs(vals[free] - target)
        j = free[int(np.argmin(dist))]
        if dist.min() > max(GUARD * tol, 1e-6 * max(1.0, abs(target))):
            raise AmbiguousClassificationError(
                "no partner for eigenvalue near %s" % target, [target]
            )
        used[j] = True
        return j

    for i in range(len(vals)):
        if used[i]:
            continue
        lam = vals[i]
        used[i] = True
        on_circle = abs(abs(lam) - 1.0) <= tol
        real = abs(lam.imag) <= tol
        if real and on_circle:
            root = 1.0 if lam.real > 0 else -1.0
            j = _claim(root)
            groups.append(SpectrumGroup("unit-root", (complex(lam), complex(vals[j]))))
        elif real:
            j = _claim(1.0 / lam.real)
            kind = "positive-hyperbolic-pair" if lam.real > 0 else "negative-hyperbolic-pair"
            groups.append(SpectrumGroup(kind, (complex(lam), complex(vals[j]))))
        elif on_circle:
            j = _claim(np.conj(lam))
            xi = vecs[:, i]
            kr = complex(np.conj(xi) @ (J @ xi)).imag
            if abs(kr) <= tol:
                raise AmbiguousClassificationError(
                    "degenerate kind form on elliptic pair", [lam]
                )
            first = complex(lam) if kr > 0 else complex(vals[j])
            groups.append(
                SpectrumGroup("elliptic-pair", (complex(lam), complex(vals[j])), first)
            )
        else:
            j1 = _claim(np.conj(lam))
            j2 = _claim(1.0 / lam)
            j3 = _claim(1.0 / np.conj(lam))
            groups.append(
                SpectrumGroup(
                    "quadruple",
                    (complex(lam), complex(vals[j1]), complex(vals[j2]), complex(vals[j3])),
                )
            )
    return SpectrumReport(tuple(complex(v) for v in vals), tuple(groups))


# ---------------------------------------------------------------------------
# paths and symmetric families


@dataclass
class SymplecticPath:
    """Discretized path [0,1] -> Sp(2n).

    ``mats[k]`` is the sample at parameter ``ts[k]``.  An optional exact
    evaluator ``matrix_at`` enables grid refinement (degree computations,
    crossing bisection); without it, evaluation between samples falls
    back to linear interpolation of entries.
    """

    ts: np.ndarray
    mats: np.ndarray
    starts_at_identity: bool = False
    closed: bool = False
    tol: float = ALGEBRA_TOL
    matrix_at: Optional[Callable[[float], np.ndarray]] = None

    def __post_init__(self):
        self.ts = np.asarray(self.ts, dtype=float)
        self.mats = np.asarray(self.mats, dtype=float)
        if self.mats.ndim != 3 or self.mats.shape[1] != self.mats.shape[2]:
            raise InvalidPathError("samples must be a stack of square matrices")
        if self.mats.shape[1] % 2:
            raise DimensionError("odd matrix dimension")
        if len(self.ts) != len(self.mats):
            raise InvalidPathError("grid and sample counts differ")

    @property
    def n(self) -> int:
        return self.mats.shape[1] // 2

    @property
    def dim(self) -> int:
        return self.mats.shape[1]

    def validate(self, tol: float | None = None, check_samples: bool = True):
        tol = self.tol if tol is None else tol
        if len(self.ts) < 2 or self.ts[0] != 0.0 or self.ts[-1] != 1.0:
            raise InvalidPathError("parameter grid must run from 0 to 1")
        if np.any(np.diff(self.ts) <= 0):
            raise InvalidPathError("parameter grid must be strictly increasing")
        if check_samples:
            worst = max(symplecticity_residual(m) for m in self.mats)
            if worst > tol:
                raise NotSymplecticError(
                    "worst sample symplecticity residual %.3e > tol %.3e" % (worst, tol)
                )
        if self.starts_at_identity:
            if np.max(np.abs(self.mats[0] - np.eye(self.dim))) > max(tol, 1e-7):
                raise InvalidPathError("path flagged as identity-start but is not")
        if self.closed:
            if np.max(np.abs(self.mats[-1] - self.mats[0])) > max(tol, 1e-7):
                raise InvalidPathError("path flagged as closed but endpoints differ")
        return self

    def at(self, t: float) -> np.ndarray:
        """Evaluate at parameter t, exactly if possible."""
        if self.matrix_at is not None:
            return np.asarray(self.matrix_at(float(t)), dtype=float)
        t = float(np.clip(t, self.ts[0], self.ts[-1]))
        k = int(np.searchsorted(self.ts, t, side="right")) - 1
        k = min(max(k, 0), len(self.ts) - 2)
        t0, t1 = self.ts[k], self.ts[k + 1]
        w = 0.0 if t1 == t0 else (t - t0) / (t1 - t0)
        return (1.0 - w) * self.mats[k] + w * self.mats[k + 1]

    def endpoint(self) -> np.ndarray:
        return self.mats[-1]

    def resample(self, m: int) -> "SymplecticPath":
        ts = np.linspace(0.0, 1.0, m)
        mats = np.stack([self.at(t) for t in ts])
        return SymplecticPath(
            ts, mats, self.starts_at_identity, self.closed, self.tol, self.matrix_at
        )

    # ---- path algebra (pointwise) ----

    def _binary_grid(self, other: "SymplecticPath") -> np.ndarray:
        ts = np.union1d(self.ts, other.ts)
        return ts

    def product(self, other: "SymplecticPath") -> "SymplecticPath":
        """Pointwise matrix product t -> self(t) other(t)."""
        ts = self._binary_grid(other)
        mats = np.stack([self.at(t) @ other.at(t) for t in ts])
        fa, fb = self.matrix_at, other.matrix_at
        call = None
        if fa is not None and fb is not None:
            call = lambda t: np.asarray(fa(t)) @ np.asarray(fb(t))
        return SymplecticPath(
            ts,
            mats,
            self.starts_at_identity and other.starts_at_identity,
            self.closed and other.closed,
            max(self.tol, other.tol),
            call,
        )

    def inverse(self) -> "SymplecticPath":
        mats = np.stack([np.linalg.inv(m) for m in self.mats])
        f = self.matrix_at
        call = None if f is None else (lambda t: np.linalg.inv(np.asarray(f(t))))
        return SymplecticPath(
            self.ts.copy(), mats, self.starts_at_identity, self.closed, self.tol, call
        )

    def reverse(self) -> "SymplecticPath":
        f = self.matrix_at
        call = None if f is None else (lambda t: np.asarray(f(1.0 - t)))
        return SymplecticPath(
            1.0 - self.ts[::-1], self.mats[::-1].copy(), False, self.closed, self.tol, call
        )

    def conjugate_by(self, theta: "SymplecticPath") -> "SymplecticPath":
        """t -> Theta(t) self(t) Theta(t)^{-1}."""
        ts = self._binary_grid(theta)
        mats = np.stack(
            [theta.at(t) @ self.at(t) @ np.linalg.inv(theta.at(t)) for t in ts]
        )
        fa, fth = self.matrix_at, theta.matrix_at
        call = None
        if fa is not None and fth is not None:
            call = lambda t: np.asarray(fth(t)) @ np.asarray(fa(t)) @ np.linalg.inv(
                np.asarray(fth(t))
            )
        return SymplecticPath(
            ts, mats, self.starts_at_identity, self.closed,
            max(self.tol, theta.tol), call,
        )

    def direct_sum(self, other: "SymplecticPath") -> "SymplecticPath":
        ts = self._binary_grid(other)
        d1, d2 = self.dim, other.dim

        def block(a, b):
            m = np.zeros((d1 + d2, d1 + d2))
            # interleave so the (x, y) split of the sum is preserved
            n1, n2 = d1 // 2, d2 // 2
            ix1 = list(range(n1)) + list(range(n1 + n2, 2 * n1 + n2))
            ix2 = list(range(n1, n1 + n2)) + list(range(2 * n1 + n2, d1 + d2))
            m[np.ix_(ix1, ix1)] = a
            m[np.ix_(ix2, ix2)] = b
            return m

        mats = np.stack([block(self.at(t), other.at(t)) for t in ts])
        fa, fb = self.matrix_at, other.matrix_at
        call = None
        if fa is not None and fb is not None:
            call = lambda t: block(np.asarray(fa(t)), np.asarray(fb(t)))
        return SymplecticPath(
            ts,
            mats,
            self.starts_at_identity and other.starts_at_identity,
            self.closed and other.closed,
            max(self.tol, other.tol),
            call,
        )

    def concatenate(self, other: "SymplecticPath") -> "SymplecticPath":
        """Traverse self on [0, 1/2] and other on [1/2, 1]."""
        ts = np.concatenate([0.5 * self.ts, 0.5 + 0.5 * other.ts[1:]])
        mats = np.concatenate([self.mats, other.mats[1:]])
        fa, fb = self.matrix_at, other.matrix_at
        call = None
        if fa is not None and fb is not None:
            call = lambda t: (
                np.asarray(fa(2.0 * t)) if t <= 0.5 else np.asarray(fb(2.0 * t - 1.0))
            )
        return SymplecticPath(
            ts, mats, self.starts_at_identity, False, max(self.tol, other.tol), call
        )

    def reparametrize(self, phi: Callable[[float], float], samples: int = 0) -> "SymplecticPath":
        """Precompose with a map phi: [0,1] -> [0,1]."""
        ts = self.ts if not samples else np.linspace(0.0, 1.0, samples)
        mats = np.stack([self.at(phi(t)) for t in ts])
        f = self.matrix_at
        call = None if f is None else (lambda t: np.asarray(f(phi(t))))
        return SymplecticPath(
            np.asarray(ts, dtype=float), mats, self.starts_at_identity, self.closed,
            self.tol, call,
        )


def rotation_path(n: int, theta: float, samples: int = 257) -> SymplecticPath:
    """t -> e^{t theta J0} in Sp(2n), sampled on a uniform grid."""
    J = standard_j(n)

    def call(t):
        c, s = np.cos(theta * t), np.sin(theta * t)
        return c * np.eye(2 * n) + s * J

    ts = np.linspace(0.0, 1.0, samples)
    mats = np.stack([call(t) for t in ts])
    closed = abs(theta % (2 * np.pi)) < 1e-12 or abs(theta % (2 * np.pi) - 2 * np.pi) < 1e-12
    return SymplecticPath(ts, mats, True, closed, ALGEBRA_TOL, call)


def exp_path(S: np.ndarray, samples: int = 257) -> SymplecticPath:
    """t -> e^{t J0 S} for a constant symmetric S."""
    from scipy.linalg import expm

    S = np.asarray(S, dtype=float)
    n = S.shape[0] // 2
    A = standard_j(n) @ S
    call = lambda t: expm(t * A)
    ts = np.linspace(0.0, 1.0, samples)
    mats = np.stack([call(t) for t in ts])
    return SymplecticPath(ts, mats, True, False, ALGEBRA_TOL, call)


def constant_path(M: np.ndarray, samples: int = 2) -> SymplecticPath:
    M = _as_matrix(M)
    ts = np.linspace(0.0, 1.0, samples)
    mats = np.stack([M] * samples)
    return SymplecticPath(ts, mats, bool(np.allclose(M, np.eye(len(M)))), True,
                          ALGEBRA_TOL, lambda t: M)


@dataclass
class SymmetricFamily:
    """Sampled family S(t) of symmetric matrices on a monotone grid.

    For two-parameter families S(s, t) see ``SymmetricFamily2``.
    """

    ts: np.ndarray
    mats: np.ndarray
    tol: float = ALGEBRA_TOL
    matrix_at: Optional[Callable[[float], np.ndarray]] = None
    asymmetry: float = 0.0

    def __post_init__(self):
        self.ts = np.asarray(self.ts, dtype=float)
        self.mats = np.asarray(self.mats, dtype=float)
        if np.any(np.diff(self.ts) <= 0):
            raise ParameterError("grid must be strictly increasing")

    @property
    def dim(self) -> int:
        return self.mats.shape[1]

    def validate(self, tol: float | None = None):
        tol = self.tol if tol is None else tol
        worst = float(np.max(np.abs(self.mats - np.transpose(self.mats, (0, 2, 1)))))
        if worst > max(tol, 1e-7):
            raise ParameterError("family matrices not symmetric: residual %.3e" % worst)
        return self

    def at(self, t: float) -> np.ndarray:
        if self.matrix_at is not None:
            return np.asarray(self.matrix_at(float(t)), dtype=float)
        t = float(np.clip(t, self.ts[0], self.ts[-1]))
        k = int(np.searchsorted(self.ts, t, side="right")) - 1
        k = min(max(k, 0), len(self.ts) - 2)
        t0, t1 = self.ts[k], self.ts[k + 1]
        w = 0.0 if t1 == t0 else (t - t0) / (t1 - t0)
        return (1.0 - w) * self.mats[k] + w * self.mats[k + 1]


@dataclass
class SymmetricFamily2:
    """Two-parameter family S(s, t): one SymmetricFamily in t per s value."""

    ss: np.ndarray
    slices: Sequence[SymmetricFamily]

    def __post_init__(self):
        self.ss = np.asarray(self.ss, dtype=float)
        if len(self.ss) != len(self.slices):
            raise ParameterError("s grid and slice counts differ")
        if np.any(np.diff(self.ss) <= 0):
            raise ParameterError("s grid must be strictly increasing")

    @property
    def dim(self) -> int:
        return self.slices[0].dim

    def slice_at(self, s: float) -> SymmetricFamily:
        """Linear interpolation between neighbouring s slices on a merged grid."""
        s = float(np.clip(s, self.ss[0], self.ss[-1]))
        k = int(np.searchsorted(self.ss, s, side="right")) - 1
        k = min(max(k, 0), len(self.ss) - 2)
        s0, s1 = self.ss[k], self.ss[k + 1]
        w = 0.0 if s1 == s0 else (s - s0) / (s1 - s0)
        a, b = self.slices[k], self.slices[k + 1]
        ts = np.union1d(a.ts, b.ts)
        mats = np.stack([(1.0 - w) * a.at(t) + w * b.at(t) for t in ts])
        return SymmetricFamily(ts, mats, max(a.tol, b.tol))


def path_from_symmetric(S: SymmetricFamily, steps: int = 256) -> SymplecticPath:
    """Integrate Psi' = J0 S(t) Psi, Psi(0) = I, by the implicit midpoint rule.

    The midpoint rule preserves quadratic invariants, so the samples stay
    close to Sp(2n); the symplecticity residual decreases like steps^-2.
    """
    if steps < 2:
        raise ParameterError("need at least 2 integration steps")
    dim = S.dim
    n = dim // 2
    J = standard_j(n)
    Id = np.eye(dim)

    def step(Psi, t0, t1):
        h = t1 - t0
        A = J @ S.at(0.5 * (t0 + t1))
        return np.linalg.solve(Id - 0.5 * h * A, (Id + 0.5 * h * A) @ Psi)

    ts = np.linspace(0.0, 1.0, steps + 1)
    mats = np.empty((steps + 1, dim, dim))
    mats[0] = Id
    for k in range(steps):
        mats[k + 1] = step(mats[k], ts[k], ts[k + 1])

    h = 1.0 / steps

    def call(t):
        t = float(np.clip(t, 0.0, 1.0))
        k = min(int(t / h), steps)
        Psi = mats[k]
        t0 = ts[k]
        if t > t0 + 1e-15:
            # one local midpoint substep from the stored sample keeps the
            # evaluator at the integrator's accuracy
            Psi = step(Psi, t0, t)
        return Psi

    return SymplecticPath(ts, mats, True, False, max(ODE_TOL, 10.0 / steps**2), call)


def recover_symmetric(P: SymplecticPath) -> SymmetricFamily:
    """Recover S(t) = -J0 Psi'(t) Psi(t)^{-1} by central finite differences.

    The result is symmetrized; the pre-symmetrization residual is kept in
    ``asymmetry`` so callers can judge the discretization error.
    """
    if len(P.ts) < 3:
        raise InvalidPathError("need at least 3 samples to differentiate")
    J = standard_j(P.n)
    ts, mats = P.ts, P.mats
    out = np.empty_like(mats)
    for k in range(len(ts)):
        lo = max(k - 1, 0)
        hi = min(k + 1, len(ts) - 1)
        dPsi = (mats[hi] - mats[lo]) / (ts[hi] - ts[lo])
        try:
            inv = np.linalg.inv(mats[k])
        except np.linalg.LinAlgError:
            raise InvalidPathError("non-invertible sample at t = %g" % ts[k])
        out[k] = -J @ dPsi @ inv
    asym = float(np.max(np.abs(out - np.transpose(out, (0, 2, 1)))))
    sym = 0.5 * (out + np.transpose(out, (0, 2, 1)))
    fam = SymmetricFamily(ts.copy(), sym, tol=max(ALGEBRA_TOL, asym))
    fam.asymmetry = asym
    return fam


def symmetric_family_at_path(P: SymplecticPath, t: float, h: float = 1e-6) -> np.ndarray:
    """S(t) at a single parameter via the path evaluator (central difference)."""
    J = standard_j(P.n)
    t0 = max(0.0, t - h)
    t1 = min(1.0, t + h)
    dPsi = (P.at(t1) - P.at(t0)) / (t1 - t0)
    M = -J @ dPsi @ np.linalg.inv(P.at(t))
    return 0.5 * (M + M.T)


def random_symplectic(n: int, rng: np.random.Generator, spread: float = 1.0) -> np.ndarray:
    """Seeded product of Sp(2n) generators e^{J0 S} with random symmetric S."""
    M = np.eye(2 * n)
    from scipy.linalg import expm

    J = standard_j(n)
    for _ in range(3):
        A = rng.normal(scale=spread, size=(2 * n, 2 * n))
        S = 0.5 * (A + A.T)
        M = M @ expm(J @ S)
    return M


def random_symmetric_family(
    n: int,
    rng: np.random.Generator,
    modes: int = 3,
    scale: float = 2.0,
    samples: int = 129,
) -> SymmetricFamily:
    """Random smooth trigonometric-polynomial family S(t) on [0, 1]."""
    dim = 2 * n
    coeffs = []
    for _ in range(2 * modes + 1):
        A = rng.normal(scale=scale / (2 * modes + 1), size=(dim, dim))
        coeffs.append(0.5 * (A + A.T))

    def call(t):
        out = coeffs[0].copy()
        for m in range(1, modes + 1):
            out += np.cos(2 * np.pi * m * t) * coeffs[2 * m - 1]
            out += np.sin(2 * np.pi * m * t) * coeffs[2 * m]
        return out

    ts = np.linspace(0.0, 1.0, samples)
    mats = np.stack([call(t) for t in ts])
    return SymmetricFamily(ts, mats, ALGEBRA_TOL, call)
