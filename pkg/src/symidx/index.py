"""Path and loop indices of symplectic paths.

Implemented here:

* ``maslov_loop``     -- winding number of rho along a closed loop;
* ``cz_rs``           -- Conley-Zehnder index of an identity-based path
                         with nondegenerate end, via crossing forms;
* ``rs_index``        -- half-integer index for arbitrary endpoints,
                         crossings at the boundary weighted 1/2;
* ``cz_winding``      -- winding-interval algorithm, Sp(2) only;
* ``cz_degree_sp2``   -- extension-to-normal-form degree algorithm, Sp(2);
* ``spectral_flow_matrix``      -- finite-dimensional spectral flow;
* ``loop_operator_spectral_flow`` -- Fourier-truncated first-order loop
                         operator -J0 d/dt - S(s,.).

Indices are returned as ``IndexValue`` storing twice the value as an
integer, so half-integers are exact.  The ``standard`` normalization
gives a counter-clockwise 2 pi rotation index +2; ``canonical`` is its
negative.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import (
    ConvergenceError,
    DimensionError,
    EndpointDegenerateError,
    ExtensionError,
    InvalidPathError,
    IrregularCrossingError,
    ParameterError,
    ResolutionError,
)
from .splin import (
    SymmetricFamily,
    SymmetricFamily2,
    SymplecticPath,
    rho,
    standard_j,
    symmetric_family_at_path,
    unitary_retract,
)

# sign relating the truncated loop-operator spectral flow (negative
# eigenvalue count at s=0 minus at s=1) to CZ(Psi^0) - CZ(Psi^1); fixed
# once by the constant-rotation calibration family (see tests)
LOOP_SF_CALIBRATION = 1

KERNEL_SVD_FACTOR = 1e-7  # singular values below this times the matrix
#                           scale span the crossing kernel
BISECT_TOL = 1e-10
FORM_REG_TOL = 1e-6  # crossing-form eigenvalues below this (relative)
#                      make the crossing irregular
PERTURB_DELTAS = tuple(1e-4 * 0.5**k for k in range(8))


@dataclass(frozen=True)
class IndexValue:
    """An index value stored as twice its value (exact half-integers)."""

    doubled: int
    normalization: str = "standard"

    def __post_init__(self):
        if self.normalization not in ("standard", "canonical"):
            raise ParameterError("unknown normalization %r" % self.normalization)

    @property
    def value(self) -> Fraction:
        return Fraction(self.doubled, 2)

    def as_int(self) -> int:
        if self.doubled % 2:
            raise ParameterError("index %s is not an integer" % self.value)
        return self.doubled // 2

    def in_normalization(self, normalization: str) -> "IndexValue":
        if normalization == self.normalization:
            return self
        return IndexValue(-self.doubled, normalization)

    def __repr__(self):
        return "IndexValue(%s, %s)" % (self.value, self.normalization)


@dataclass(frozen=True)
class Crossing:
    t: float
    kernel_dim: int
    signature: int
    is_endpoint: bool


@dataclass(frozen=True)
class CrossingReport:
    crossings: tuple[Crossing, ...]
    total_doubled: int  # twice the weighted signature sum


@dataclass(frozen=True)
class WindingInterval:
    lower: float
    upper: float
    index: int


# ---------------------------------------------------------------------------
# phase unwrapping and degrees


def _unwrapped_phases(path: SymplecticPath, base_samples: int = 257,
                      max_doublings: int = 8):
    """Continuous phase of rho along the path; refines until jumps < pi/2."""
    m = max(base_samples, len(path.ts))
    for _ in range(max_doublings + 1):
        if path.matrix_at is None:
            # no exact evaluator: the stored samples are all the data there is
            ts, mats = path.ts, path.mats
        else:
            ts = np.linspace(0.0, 1.0, m)
            mats = [path.at(t) for t in ts]
        phases = np.array([np.angle(rho(M)) for M in mats])
        jumps = np.angle(np.exp(1j * np.diff(phases)))
        if len(jumps) == 0 or np.max(np.abs(jumps)) < 0.5 * np.pi:
            return ts, phases[0] + np.concatenate([[0.0], np.cumsum(jumps)])
        if path.matrix_at is None:
            j = int(np.argmax(np.abs(jumps)))
            raise ResolutionError(
                "phase jump %.3f >= pi/2 between t=%.6f and t=%.6f; "
                "supply a finer sampling or an exact evaluator"
                % (abs(jumps[j]), ts[j], ts[j + 1]),
                (ts[j], ts[j + 1]),
            )
        m = 2 * m - 1
    raise ResolutionError("phase unwrapping did not stabilize under refinement")


def maslov_loop(L: SymplecticPath) -> IndexValue:
    """Winding number of t -> rho(L(t)) around the circle for a closed loop."""
    if not L.closed:
        raise InvalidPathError("maslov index needs a closed loop")
    L.validate()
    _, phases = _unwrapped_phases(L)
    total = (phases[-1] - phases[0]) / (2.0 * np.pi)
    w = int(np.round(total))
    if abs(total - w) > 1e-6:
        raise ResolutionError("winding %.8f is not an integer" % total)
    return IndexValue(2 * w)


# ---------------------------------------------------------------------------
# crossings of the Maslov cycle


def _matrix_scale(M: np.ndarray) -> float:
    return max(1.0, float(np.linalg.norm(M, 2)))


def _kernel_of_crossing(M: np.ndarray) -> Optional[np.ndarray]:
    """Orthonormal basis of ker(M - I), or None if 1 is not an eigenvalue."""
    A = M - np.eye(len(M))
    _, sv, Vt = np.linalg.svd(A)
    thresh = KERNEL_SVD_FACTOR * _matrix_scale(M)
    mask = sv < thresh
    if not np.any(mask):
        return None
    return Vt[mask].T


def _det_minus_id(path: SymplecticPath, t: float) -> float:
    M = path.at(t)
    return float(np.linalg.det(M - np.eye(len(M))))


def _locate_crossings(path: SymplecticPath, grid_size: int = 257) -> list[float]:
    """Parameters in (0,1) where 1 is an eigenvalue of path(t).

    Sign changes of det(Psi(t)-I) are bisected; zeros of even order (no
    sign change) are caught as small local minima of |det| and confirmed
    by a singular-value test after a bounded scalar minimization.
    """
    if len(path.ts) >= 129:
        # dense sample grid: batch the determinant scan over stored samples
        ts = path.ts
        d = np.linalg.det(path.mats - np.eye(path.dim))
    else:
        ts = np.linspace(0.0, 1.0, grid_size)
        d = np.array([_det_minus_id(path, t) for t in ts])
    scale = max(1e-12, float(np.max(np.abs(d))))
    found: list[float] = []

    def bisect(a, fa, b):
        while b - a > BISECT_TOL:
            m = 0.5 * (a + b)
            fm = _det_minus_id(path, m)
            if fa * fm <= 0.0:
                b = m
            else:
                a, fa = m, fm
        found.append(0.5 * (a + b))

    # odd-order zeros: sign changes
    zero_thresh = 1e-13 * scale
    for k in range(len(ts) - 1):
        if d[k] == 0.0 and 0.0 < ts[k] < 1.0:
            found.append(ts[k])
        if d[k] * d[k + 1] < 0.0:
            bisect(ts[k], d[k], ts[k + 1])
        elif abs(d[k]) <= zero_thresh or abs(d[k + 1]) <= zero_thresh:
            # a cell bordered by an exact zero (typically the identity
            # start) can hide a sign change behind the 0 * x = 0 product;
            # sub-scan its interior
            sub = np.linspace(ts[k], ts[k + 1], 10)[1:-1]
            fs = [_det_minus_id(path, t) for t in sub]
            for j in range(len(sub) - 1):
                if fs[j] * fs[j + 1] < 0.0:
                    bisect(sub[j], fs[j], sub[j + 1])

    # even-order zeros: small |det| local minima without a sign change
    absd = np.abs(d)
    for k in range(1, len(ts) - 1):
        if absd[k] <= absd[k - 1] and absd[k] <= absd[k + 1] and absd[k] < 1e-3 * scale:
            if d[k - 1] * d[k + 1] < 0.0:
                continue  # already handled as a sign change
            # a low dip can hide a close pair of transversal zeros; look
            # for sign changes on a fine sub-grid before concluding the
            # zero is tangential
            sub = np.linspace(ts[k - 1], ts[k + 1], 65)
            fs = [_det_minus_id(path, t) for t in sub]
            pair = False
            for j in range(len(sub) - 1):
                if fs[j] * fs[j + 1] < 0.0:
                    bisect(sub[j], fs[j], sub[j + 1])
                    pair = True
            if pair:
                continue
            res = minimize_scalar(
                lambda t: abs(_det_minus_id(path, t)),
                bounds=(ts[k - 1], ts[k + 1]),
                method="bounded",
                options={"xatol": BISECT_TOL},
            )
            t0 = float(res.x)
            if 0.0 < t0 < 1.0 and _kernel_of_crossing(path.at(t0)) is not None:
                found.append(t0)

    found.sort()
    merged: list[float] = []
    for t in found:
        if not merged or t - merged[-1] > 1e-8:
            merged.append(t)
    return [t for t in merged if 1e-9 < t < 1.0 - 1e-9]


def _crossing_at(path: SymplecticPath, t: float, is_endpoint: bool) -> Crossing:
    """Crossing form data at a parameter where 1 is an eigenvalue."""
    M = path.at(t)
    V = _kernel_of_crossing(M)
    if V is None:
        raise IrregularCrossingError("no kernel at reported crossing t=%g" % t)
    S = symmetric_family_at_path(path, t)
    Q = V.T @ S @ V
    w = np.linalg.eigvalsh(0.5 * (Q + Q.T))
    reg = FORM_REG_TOL * max(1.0, float(np.max(np.abs(w))) if len(w) else 1.0)
    if np.any(np.abs(w) <= reg):
        raise IrregularCrossingError(
            "degenerate crossing form at t=%g (eigenvalues %s)" % (t, w)
        )
    sig = int(np.sum(w > 0) - np.sum(w < 0))
    return Crossing(float(t), V.shape[1], sig, is_endpoint)


def _crossing_sum(path: SymplecticPath) -> CrossingReport:
    """All crossings of the path, endpoints weighted 1/2."""
    crossings: list[Crossing] = []
    eye = np.eye(path.dim)
    for t, flag in ((0.0, True), (1.0, True)):
        M = path.at(t)
        if _kernel_of_crossing(M) is not None:
            crossings.append(_crossing_at(path, t, flag))
    crossings.extend(_crossing_at(path, t, False) for t in _locate_crossings(path))
    crossings.sort(key=lambda c: c.t)
    total2 = 0
    for c in crossings:
        total2 += c.signature if c.is_endpoint else 2 * c.signature
    return CrossingReport(tuple(crossings), total2)


def _perturbed(path: SymplecticPath, delta: float) -> SymplecticPath:
    """Right-multiply the path by e^{-delta t J0} (regularizes crossings)."""
    n = path.n
    J = standard_j(n)
    eye = np.eye(2 * n)

    def rot(t):
        a = -delta * t
        return np.cos(a) * eye + np.sin(a) * J

    mats = np.stack([m @ rot(t) for t, m in zip(path.ts, path.mats)])
    f = path.matrix_at
    call = None if f is None else (lambda t: np.asarray(f(t)) @ rot(t))
    return SymplecticPath(path.ts.copy(), mats, path.starts_at_identity, False,
                          path.tol, call)


def _crossing_sum_robust(path: SymplecticPath) -> CrossingReport:
    try:
        return _crossing_sum(path)
    except IrregularCrossingError:
        pass
    prev = None
    for delta in PERTURB_DELTAS:
        try:
            rep = _crossing_sum(_perturbed(path, delta))
        except IrregularCrossingError:
            prev = None
            continue
        if prev is not None and prev.total_doubled == rep.total_doubled:
            return rep
        prev = rep
    raise IrregularCrossingError(
        "crossing forms stayed irregular (or unstable) under the "
        "perturbation sequence"
    )


def _check_endpoint_nondegenerate(path: SymplecticPath, tol: float):
    M = path.at(1.0)
    A = M - np.eye(len(M))
    smin = float(np.linalg.svd(A, compute_uv=False)[-1])
    if smin <= max(tol, KERNEL_SVD_FACTOR) * _matrix_scale(M):
        raise EndpointDegenerateError(
            "1 is an eigenvalue of the endpoint within tolerance "
            "(smallest singular value %.3e)" % smin
        )


def cz_rs(P: SymplecticPath, tol: float = 1e-9) -> IndexValue:
    """Conley-Zehnder index by crossing forms (reference algorithm, any n).

    Sum of crossing-form signatures over interior crossings plus half the
    start signature; the path must start at the identity and end off the
    Maslov cycle.
    """
    P.validate()
    if not P.starts_at_identity:
        raise InvalidPathError("Conley-Zehnder index needs an identity-based path")
    _check_endpoint_nondegenerate(P, tol)
    rep = _crossing_sum_robust(P)
    if rep.total_doubled % 2:
        raise ConvergenceError(
            "crossing sum %s is not an integer; crossings were missed"
            % Fraction(rep.total_doubled, 2)
        )
    return IndexValue(rep.total_doubled)


def rs_index(P: SymplecticPath) -> IndexValue:
    """Half-integer index for arbitrary endpoints (endpoint weight 1/2)."""
    P.validate()
    rep = _crossing_sum_robust(P)
    return IndexValue(rep.total_doubled)


def crossing_report(P: SymplecticPath) -> CrossingReport:
    return _crossing_sum_robust(P)


# ---------------------------------------------------------------------------
# winding-interval algorithm (n = 1)


def _windings_all_s(P: SymplecticPath, s_samples: int,
                    t_samples: int = 513) -> np.ndarray:
    """Winding (in turns) of t -> Psi(t) v_s for a whole fan of unit vectors.

    Antipodal vectors wind equally, so s runs over half the circle.
    Refines the time grid until every angular jump is below pi/2.
    """
    ss = np.linspace(0.0, 0.5, s_samples, endpoint=False)
    v0 = np.column_stack([np.cos(2 * np.pi * ss), np.sin(2 * np.pi * ss)])
    m = max(t_samples, len(P.ts))
    for _ in range(8):
        ts = np.linspace(0.0, 1.0, m)
        mats = np.stack([P.at(t) for t in ts])  # (m, 2, 2)
        vecs = np.einsum("tij,sj->tsi", mats, v0)
        ang = np.arctan2(vecs[..., 1], vecs[..., 0])
        jumps = np.angle(np.exp(1j * np.diff(ang, axis=0)))
        if np.max(np.abs(jumps)) < 0.5 * np.pi:
            return np.sum(jumps, axis=0) / (2.0 * np.pi)
        if P.matrix_at is None:
            raise ResolutionError("path too coarse for vector winding")
        m = 2 * m - 1
    raise ResolutionError("vector winding did not stabilize")


def winding_interval(P: SymplecticPath, s_samples: int = 1024) -> tuple[float, float]:
    vals = _windings_all_s(P, s_samples)
    return float(np.min(vals)), float(np.max(vals))


def cz_winding(P: SymplecticPath, tol: float = 1e-6) -> tuple[IndexValue, WindingInterval]:
    """Winding-interval Conley-Zehnder index; Sp(2) only."""
    P.validate()
    if P.n != 1:
        raise DimensionError("winding-interval algorithm is Sp(2) only")
    if not P.starts_at_identity:
        raise InvalidPathError("needs an identity-based path")
    _check_endpoint_nondegenerate(P, 1e-9)
    lo, hi = winding_interval(P)
    if hi - lo >= 0.5:
        raise ConvergenceError(
            "winding interval [%.6f, %.6f] has length >= 1/2" % (lo, hi)
        )
    for v in (lo, hi):
        if abs(v - round(v)) < tol:
            raise EndpointDegenerateError(
                "winding interval boundary %.8f touches an integer" % v
            )
    c = int(np.ceil(lo))
    if c < hi:  # an integer lies in the interior (at most one: length < 1/2)
        mu = 2 * c
    else:  # interval contained in (floor(lo), floor(lo) + 1)
        mu = 2 * int(np.floor(lo)) + 1
    return IndexValue(2 * mu), WindingInterval(lo, hi, mu)


# ---------------------------------------------------------------------------
# extension-degree algorithm (n = 1)


def _rotation_sp2(phi: float) -> np.ndarray:
    c, s = np.cos(phi), np.sin(phi)
    return np.array([[c, -s], [s, c]])


def _extension_path_sp2(V: np.ndarray, samples: int) -> SymplecticPath:
    """Path in Sp(2)* from V to the normal form W+ or W- of its component."""
    d = float(np.linalg.det(V - np.eye(2)))
    if d > 0.0:
        # elliptic or negative hyperbolic: polar-shrink to a rotation,
        # then rotate the angle to pi inside (0, 2 pi)
        P = V @ V.T
        w, Q = np.linalg.eigh(P)
        logP = (Q * np.log(w)) @ Q.T
        from scipy.linalg import expm

        def shrink(u):
            return expm(-0.5 * u * logP) @ V

        U = shrink(1.0)
        phi0 = float(np.angle(rho(U))) % (2.0 * np.pi)
        if phi0 < 1e-8 or phi0 > 2.0 * np.pi - 1e-8:
            raise ExtensionError("retracted endpoint lies on the Maslov cycle")

        def call(u):
            u = float(u)
            if u <= 0.5:
                return shrink(2.0 * u)
            return _rotation_sp2((2.0 - 2.0 * u) * phi0 + (2.0 * u - 1.0) * np.pi)

    else:
        # positive hyperbolic: conjugated eigenvalue interpolation to W-
        w, X = np.linalg.eig(V)
        lam = float(np.max(w.real))
        if lam <= 1.0:
            raise ExtensionError("endpoint not positive hyperbolic")
        u_vec = np.real(X[:, int(np.argmax(w.real))])
        v_vec = np.real(X[:, int(np.argmin(w.real))])
        det = u_vec[0] * v_vec[1] - u_vec[1] * v_vec[0]
        if abs(det) < 1e-12:
            raise ExtensionError("eigenbasis degenerate")
        v_vec = v_vec / det  # now det [u | v] = 1, so the basis is in Sp(2)
        T = np.column_stack([u_vec, v_vec])
        # polar data of T for the basis shrink T(u) -> I inside SL(2)
        P = T @ T.T
        wP, Q = np.linalg.eigh(P)
        logP = (Q * np.log(wP)) @ Q.T
        R = np.linalg.solve(
            (Q * np.sqrt(wP)) @ Q.T, T
        )  # rotation part, det +1
        alpha = float(np.arctan2(R[1, 0], R[0, 0]))
        from scipy.linalg import expm

        def call(u):
            u = float(u)
            lam_u = np.exp((1.0 - u) * np.log(lam) + u * np.log(2.0))
            D = np.diag([lam_u, 1.0 / lam_u])
            Tu = _rotation_sp2((1.0 - u) * alpha) @ expm(0.5 * (1.0 - u) * logP)
            return Tu @ D @ np.linalg.inv(Tu)

    ts = np.linspace(0.0, 1.0, samples)
    mats = np.stack([call(t) for t in ts])
    return SymplecticPath(ts, mats, False, False, 1e-7, call)


def cz_degree_sp2(P: SymplecticPath, tol: float = 1e-9,
                  ext_samples: int = 257) -> IndexValue:
    """Conley-Zehnder index via extension to a normal form; Sp(2) only.

    Extends the path inside the endpoint's nondegenerate component to
    W+ = -I or W- = diag(2, 1/2) and returns the degree of rho^2 along
    the extended path.  The extension is verified post hoc to keep
    det(Psi(t) - I) away from zero.
    """
    P.validate()
    if P.n != 1:
        raise DimensionError("extension-degree algorithm is Sp(2) only")
    if not P.starts_at_identity:
        raise InvalidPathError("needs an identity-based path")
    _check_endpoint_nondegenerate(P, tol)
    V = P.at(1.0)
    sign0 = np.sign(np.linalg.det(V - np.eye(2)))
    for samples in (ext_samples, 4 * ext_samples):
        ext = _extension_path_sp2(V, samples)
        dets = np.array([np.linalg.det(m - np.eye(2)) for m in ext.mats])
        if np.all(np.sign(dets) == sign0):
            break
    else:
        raise ExtensionError(
            "extension path crossed the Maslov cycle at every refinement"
        )
    full = P.concatenate(ext)
    _, phases = _unwrapped_phases(full)
    deg = (phases[-1] - phases[0]) / np.pi  # degree of rho^2
    k = int(np.round(deg))
    if abs(deg - k) > 1e-5:
        raise ResolutionError("rho^2 degree %.8f is not an integer" % deg)
    return IndexValue(2 * k)


# ---------------------------------------------------------------------------
# spectral flow


def _neg_count(M: np.ndarray, cut: float = 0.0) -> int:
    return int(np.sum(np.linalg.eigvalsh(M) < cut))


def _family_derivative(A: SymmetricFamily, s: float, h: float = 1e-6) -> np.ndarray:
    s0 = max(A.ts[0], s - h)
    s1 = min(A.ts[-1], s + h)
    return (A.at(s1) - A.at(s0)) / (s1 - s0)


def spectral_flow_matrix(A: SymmetricFamily, tol: float = 1e-9,
                         grid_size: int = 257) -> int:
    """Spectral flow of a family of symmetric matrices over s in [0, 1].

    Computed as the sum of crossing-form signatures (form = derivative
    restricted to the kernel) and verified against the difference of
    negative-eigenvalue counts at the endpoints.
    """
    A.validate()
    for s in (A.ts[0], A.ts[-1]):
        w = np.linalg.eigvalsh(A.at(s))
        if np.min(np.abs(w)) <= max(tol, 1e-9) * max(1.0, np.max(np.abs(w))):
            raise EndpointDegenerateError("family endpoint at s=%g is singular" % s)
    endpoint_flow = _neg_count(A.at(A.ts[0])) - _neg_count(A.at(A.ts[-1]))

    for m in (grid_size, 4 * grid_size):
        ss = np.linspace(A.ts[0], A.ts[-1], m)
        counts = np.array([_neg_count(A.at(s)) for s in ss])
        total = 0
        ok = True
        for k in np.where(np.diff(counts) != 0)[0]:
            a, b = ss[k], ss[k + 1]
            ca = counts[k]
            while b - a > BISECT_TOL:
                mid = 0.5 * (a + b)
                if _neg_count(A.at(mid)) != ca:
                    b = mid
                else:
                    a = mid
            s_star = 0.5 * (a + b)
            M = A.at(s_star)
            w, V = np.linalg.eigh(M)
            scale = max(1.0, float(np.max(np.abs(w))))
            ker = V[:, np.abs(w) < 1e-5 * scale]
            if ker.shape[1] == 0:
                ok = False
                break
            Q = ker.T @ _family_derivative(A, s_star) @ ker
            wq = np.linalg.eigvalsh(0.5 * (Q + Q.T))
            if np.any(np.abs(wq) <= FORM_REG_TOL * max(1.0, np.max(np.abs(wq)))):
                raise IrregularCrossingError(
                    "degenerate spectral-flow crossing at s=%g" % s_star
                )
            total += int(np.sum(wq > 0) - np.sum(wq < 0))
        if ok and total == endpoint_flow:
            return total
    raise ConvergenceError(
        "crossing-form sum %s disagrees with endpoint count difference %s"
        % (total, endpoint_flow)
    )


# ---------------------------------------------------------------------------
# loop-operator spectral flow


def _fourier_basis(cutoff: int, grid: int) -> np.ndarray:
    """Orthonormal real trig basis values on the uniform grid, (grid, 2K+1)."""
    t = np.arange(grid) / grid
    cols = [np.ones(grid)]
    for k in range(1, cutoff + 1):
        cols.append(np.sqrt(2.0) * np.cos(2 * np.pi * k * t))
        cols.append(np.sqrt(2.0) * np.sin(2 * np.pi * k * t))
    return np.column_stack(cols)


def _derivative_pairing(cutoff: int) -> np.ndarray:
    """G[a, b] = integral of phi_a phi_b' over the period (antisymmetric)."""
    nb = 2 * cutoff + 1
    G = np.zeros((nb, nb))
    for k in range(1, cutoff + 1):
        c, s = 2 * k - 1, 2 * k
        G[c, s] = 2 * np.pi * k   # <cos_k, d/dt sin_k>
        G[s, c] = -2 * np.pi * k
    return G


def truncated_loop_operator(S_slice: SymmetricFamily, cutoff: int,
                            grid: int | None = None) -> np.ndarray:
    """Matrix of -J0 d/dt - S(t) in the truncated real Fourier basis."""
    dim = S_slice.dim
    J = standard_j(dim // 2)
    if grid is None:
        grid = max(256, 8 * cutoff)
    B = _fourier_basis(cutoff, grid)
    Svals = np.stack([S_slice.at(t) for t in np.arange(grid) / grid])
    G = _derivative_pairing(cutoff)
    term1 = -np.kron(G, J)
    term2 = -np.einsum("ma,mb,mij->aibj", B, B, Svals).reshape(
        B.shape[1] * dim, B.shape[1] * dim
    ) / grid
    M = term1 + term2
    return 0.5 * (M + M.T)


def loop_operator_spectral_flow(S: SymmetricFamily2, fourier_cutoff: int,
                                tol: float = 1e-8) -> int:
    """Spectral flow of s -> -J0 d/dt - S(s, .), Fourier-truncated.

    Equal (after the fixed sign calibration) to CZ(Psi^0) - CZ(Psi^1)
    where Psi^s solves the linear system generated by S(s, .).  The value
    must agree between the requested cutoff and its double.
    """
    if fourier_cutoff < 1:
        raise ParameterError("cutoff must be positive")
    vals = []
    for K in (fourier_cutoff, 2 * fourier_cutoff):
        flows = []
        for s in (S.ss[0], S.ss[-1]):
            A = truncated_loop_operator(S.slice_at(s), K)
            w = np.linalg.eigvalsh(A)
            if np.min(np.abs(w)) <= tol * max(1.0, np.max(np.abs(w))):
                raise EndpointDegenerateError(
                    "truncated loop operator singular at s=%g" % s
                )
            flows.append(int(np.sum(w < 0)))
        vals.append(flows[0] - flows[1])
    if vals[0] != vals[1]:
        raise ConvergenceError(
            "spectral flow changed across cutoffs %d -> %d: %s"
            % (fourier_cutoff, 2 * fourier_cutoff, vals)
        )
    return LOOP_SF_CALIBRATION * vals[0]
