"""Frenet frames of non-null curves under a diagonal pseudo-Euclidean metric."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, replace

import numpy as np

from . import stencils
from .curves import ANALYTIC, CurveSpec, SampleGrid, unit_speed_jet
from .errors import DegenerateFrameError, DimensionError, FrameContinuityError, HelixLabError, NotProperOrderError
from .pseudometric import SignatureMetric, inner
from .tolerances import Tolerances


@dataclass(frozen=True)
class FrenetApparatus:
    """Frame V_1..V_n (rows of ``frame``), curvatures k_1..k_{n-1} and
    causal characters eps_0..eps_{n-1} at one parameter value."""

    param: float
    frame: np.ndarray
    curvatures: np.ndarray
    epsilons: tuple[int, ...]
    arclength: float = float("nan")

    @property
    def dim(self) -> int:
        return self.frame.shape[0]

    def V(self, i: int) -> np.ndarray:
        """Frame vector V_i, 1-based as in the Frenet equations."""
        return self.frame[i - 1]

    def k(self, i: int) -> float:
        return float(self.curvatures[i - 1])

    def eps(self, j: int) -> int:
        """eps_j = g(V_{j+1}, V_{j+1}), 0-based."""
        return self.epsilons[j]


def _project_out(m: SignatureMetric, x: np.ndarray, frame: list, eps: list) -> np.ndarray:
    e = x.copy()
    # two passes: classical Gram-Schmidt with one reorthogonalisation
    for _ in range(2):
        for v, sgn in zip(frame, eps):
            e = e - sgn * inner(m, e, v) * v
    return e


def _normalise(m: SignatureMetric, e: np.ndarray, gs_tol: float, what: str):
    q = inner(m, e, e)
    e2 = float(np.dot(e, e))
    if abs(q) < gs_tol * e2 or e2 == 0.0:
        raise DegenerateFrameError(f"{what} is null (g = {q:.3e}, |E|^2 = {e2:.3e})")
    nrm = np.sqrt(abs(q))
    return e / nrm, (1 if q > 0 else -1), nrm


def frenet_at(
    m: SignatureMetric,
    c: CurveSpec,
    t: float,
    mode: str = ANALYTIC,
    tol: Tolerances | None = None,
) -> FrenetApparatus:
    """Frenet apparatus at parameter t.

    V_1..V_{n-1} come from Gram-Schmidt (under g) on the arclength
    derivatives, V_n completes the frame with det[V_1..V_n] > 0.
    Curvatures are k_i = eps_i g(dV_i/ds, V_{i+1}), where differentiating
    the Gram-Schmidt chain reduces g(dV_i/ds, V_{i+1}) to
    g(a^(i+1), V_{i+1}) / ||E_i||.
    """
    tol = tol or Tolerances.for_mode(mode)
    n = m.dim
    if c.dim != n:
        raise DimensionError(f"metric dim {n} != curve dim {c.dim}")
    jet = unit_speed_jet(m, c, t, n, mode, tol.null_tol)
    D = jet.derivs

    frame: list[np.ndarray] = []
    eps: list[int] = []
    gs_norms: list[float] = []
    for j in range(n - 1):
        e = _project_out(m, D[j], frame, eps)
        if j > 0 and np.linalg.norm(e) <= tol.atol * (1.0 + np.linalg.norm(D[j])):
            raise NotProperOrderError(f"k_{j} vanishes at t={t}: derivative {j + 1} is dependent")
        v, sgn, nrm = _normalise(m, e, tol.gs_tol, f"Gram-Schmidt vector E_{j + 1} at t={t}")
        frame.append(v)
        eps.append(sgn)
        gs_norms.append(nrm)

    # completion: g-orthogonal complement of V_1..V_{n-1}
    rows = m.diag * np.array(frame)
    w = np.linalg.svd(rows)[2][-1]
    w = _project_out(m, w, frame, eps)
    w, sgn, _ = _normalise(m, w, tol.gs_tol, f"completion vector V_{n} at t={t}")
    if np.linalg.det(np.array(frame + [w])) < 0:
        w = -w
    frame.append(w)
    eps.append(sgn)

    k = np.array([eps[a + 1] * inner(m, D[a + 1], frame[a + 1]) / gs_norms[a] for a in range(n - 1)])
    for a, ka in enumerate(k):
        if ka <= tol.atol:
            raise NotProperOrderError(f"k_{a + 1} = {ka:.3e} is not positive at t={t}")
    return FrenetApparatus(float(t), np.array(frame), k, tuple(eps))


@dataclass(frozen=True)
class FrameField:
    grid: SampleGrid
    apparatus: tuple[FrenetApparatus, ...]
    points: np.ndarray
    flips: int = 0

    def __len__(self):
        return len(self.apparatus)

    @property
    def dim(self) -> int:
        return self.apparatus[0].dim

    @property
    def frames(self) -> np.ndarray:
        """(m, n, n): sample, frame index (0-based), component."""
        return np.array([a.frame for a in self.apparatus])

    @property
    def curvatures(self) -> np.ndarray:
        return np.array([a.curvatures for a in self.apparatus])

    @property
    def epsilons(self) -> tuple[int, ...]:
        return self.apparatus[0].epsilons

    @property
    def s(self) -> np.ndarray:
        return self.grid.arclengths


def align_signs(m: SignatureMetric, apparatus: list[FrenetApparatus]) -> tuple[list[FrenetApparatus], int]:
    """Remove sign jumps of frame vectors between neighbouring samples.

    Flipping V_i negates k_{i-1} and k_i; a flip that leaves a curvature
    non-positive means the frame cannot be made continuous and consistent.
    """
    out = [apparatus[0]]
    flips = 0
    for cur in apparatus[1:]:
        prev = out[-1]
        frame = cur.frame.copy()
        k = cur.curvatures.copy()
        for a in range(cur.dim):
            if inner(m, frame[a], prev.frame[a]) * cur.eps(a) < 0:
                frame[a] = -frame[a]
                flips += 1
                if a >= 1:
                    k[a - 1] = -k[a - 1]
                if a < cur.dim - 1:
                    k[a] = -k[a]
        if np.any(k <= 0):
            raise FrameContinuityError(f"sign alignment leaves a non-positive curvature at t={cur.param}")
        out.append(replace(cur, frame=frame, curvatures=k))
    return out, flips


def frame_field(
    m: SignatureMetric,
    c: CurveSpec,
    grid: SampleGrid,
    mode: str = ANALYTIC,
    tol: Tolerances | None = None,
) -> FrameField:
    tol = tol or Tolerances.for_mode(mode)
    items = []
    for t, s in zip(grid.params, grid.arclengths):
        try:
            app = frenet_at(m, c, float(t), mode, tol)
        except HelixLabError as exc:
            raise type(exc)(f"{exc} [grid point t={t}]") from exc
        items.append(replace(app, arclength=float(s)))
    eps0 = items[0].epsilons
    for app in items:
        if app.epsilons != eps0:
            raise DegenerateFrameError(
                f"causal characters change along the curve at t={app.param}: {eps0} -> {app.epsilons}"
            )
    items, flips = align_signs(m, items)
    points = np.array([c.point(float(t)) for t in grid.params])
    return FrameField(grid, tuple(items), points, flips)


def frenet_rhs(ff: FrameField) -> np.ndarray:
    """Right-hand sides of the Frenet equations, shape (m, n, n)."""
    V = ff.frames
    k = ff.curvatures
    eps = ff.epsilons
    n = ff.dim
    rhs = np.zeros_like(V)
    for a in range(n):
        if a >= 1:
            rhs[:, a] -= (eps[a - 1] * eps[a]) * k[:, a - 1, None] * V[:, a - 1]
        if a < n - 1:
            rhs[:, a] += k[:, a, None] * V[:, a + 1]
    return rhs


def frenet_residual(m: SignatureMetric, ff: FrameField) -> float:
    """Max deviation of dV_i/ds (grid differences) from the Frenet equations
    over all frame vectors and interior samples."""
    if len(ff) < 9:
        raise ValueError("frenet_residual needs at least 9 samples")
    dV = stencils.derivative(ff.s, ff.frames)
    inside = stencils.interior(len(ff))
    return float(np.max(np.abs(dV[inside] - frenet_rhs(ff)[inside])))


def orthonormality_error(m: SignatureMetric, ff: FrameField) -> float:
    """max |g(V_i, V_j) - delta_ij eps_{i-1}| over all samples."""
    V = ff.frames
    G = np.einsum("sik,k,sjk->sij", V, m.diag, V)
    target = np.diag(np.array(ff.epsilons, dtype=float))
    return float(np.max(np.abs(G - target)))


def frenet_csv(ff: FrameField) -> str:
    n = ff.dim
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "s"] + [f"k{i}" for i in range(1, n)] + [f"eps{j}" for j in range(n)])
    for app in ff.apparatus:
        w.writerow(
            [f"{app.param:.12g}", f"{app.arclength:.12g}"]
            + [f"{x:.12g}" for x in app.curvatures]
            + [str(e) for e in app.epsilons]
        )
    return buf.getvalue()
