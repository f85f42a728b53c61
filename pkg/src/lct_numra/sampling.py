"""Uniform grids, sampled complex signals, and chirp-modulated operators.

Signals model compactly supported functions: the value outside the grid
window is 0.  Quadrature is trapezoidal; translations must land exactly on
grid points (no interpolation), which keeps indicator-function inner
products exact when breakpoints sit on the grid.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .canonical import CanonicalMatrix

_trapezoid = getattr(np, "trapezoid", None) or np.trapz

#: Relative slack when deciding whether an offset is an exact grid multiple.
_ALIGN_TOL = 1e-9

#: Largest |j| accepted by dilate_chirp unless the caller raises the budget.
DEFAULT_LEVEL_BUDGET = 16


class GridMismatchError(ValueError):
    """Raised when two signals live on incompatible grids."""


class OffGridError(ValueError):
    """Raised when a translation does not land on grid points."""


@dataclass(frozen=True)
class Grid:
    """Uniform time grid: points t_min + i*step for i in range(count)."""

    t_min: float
    step: float
    count: int

    def __post_init__(self):
        object.__setattr__(self, "t_min", float(self.t_min))
        object.__setattr__(self, "step", float(self.step))
        object.__setattr__(self, "count", int(self.count))
        if self.step <= 0.0:
            raise ValueError("step must be positive")
        if self.count <= 0:
            raise ValueError("count must be positive")

    def points(self) -> np.ndarray:
        return self.t_min + self.step * np.arange(self.count)

    @property
    def t_max(self) -> float:
        """One step past the last grid point (half-open window end)."""
        return self.t_min + self.step * self.count

    def index_of(self, t: float) -> int:
        """Exact index of a grid point; raises OffGridError otherwise."""
        ratio = (t - self.t_min) / self.step
        idx = round(ratio)
        if abs(ratio - idx) > _ALIGN_TOL:
            raise OffGridError(f"t = {t} is not on the grid (offset {ratio})")
        return int(idx)

    def to_dict(self) -> dict:
        return {"t_min": self.t_min, "step": self.step, "count": self.count}

    @classmethod
    def from_dict(cls, obj: dict) -> "Grid":
        return cls(float(obj["t_min"]), float(obj["step"]), int(obj["count"]))


def numra_grid(ts, window: tuple[float, float], *, refinement: int = 1,
               max_level: int = 0) -> Grid:
    """Grid compatible with a translation set: step = 1/(2N*K*(2N)^J).

    Every element of the translation set and every dilation by (2N)^j,
    |j| <= max_level, then maps grid points to grid points.
    """
    two_n = 2 * ts.N
    step = 1.0 / (two_n * refinement * two_n**max_level)
    t_lo, t_hi = window
    i_lo = round(t_lo / step)
    if abs(i_lo * step - t_lo) > _ALIGN_TOL * step:
        raise OffGridError("window start must be a multiple of the grid step")
    count = int(round((t_hi - t_lo) / step))
    return Grid(t_min=i_lo * step, step=step, count=count)


@dataclass(frozen=True)
class SampledSignal:
    """Complex samples of a function on a uniform grid (zero outside)."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.complex128)
        if values.shape != (self.grid.count,):
            raise ValueError("values length must match grid count")
        if not np.all(np.isfinite(values.view(np.float64))):
            raise ValueError("signal values must be finite")
        object.__setattr__(self, "values", values)

    def value_at(self, x) -> np.ndarray:
        """Piecewise-constant lookup (right-limit convention), 0 off-window.

        Exact for signals sampled from functions that are constant between
        grid points with jumps on the grid, which covers every indicator
        basis used here.
        """
        x = np.asarray(x, dtype=float)
        idx = np.floor((x - self.grid.t_min) / self.grid.step + _ALIGN_TOL).astype(int)
        inside = (idx >= 0) & (idx < self.grid.count)
        out = np.zeros(x.shape, dtype=np.complex128)
        out[inside] = self.values[idx[inside]]
        return out


def signal_from_function(fn, grid: Grid) -> SampledSignal:
    """Sample a vectorized callable on the grid."""
    return SampledSignal(grid, np.asarray(fn(grid.points()), dtype=np.complex128))


def indicator(intervals, grid: Grid) -> SampledSignal:
    """Indicator of a union of [lo, hi) intervals, right-limit at jumps."""
    t = grid.points()
    vals = np.zeros(grid.count, dtype=np.complex128)
    for lo, hi in intervals:
        vals += ((t >= lo - _ALIGN_TOL * grid.step) & (t < hi - _ALIGN_TOL * grid.step))
    return SampledSignal(grid, vals)


def gaussian(grid: Grid) -> SampledSignal:
    """Unit-mass Gaussian exp(-pi t^2)."""
    return signal_from_function(lambda t: np.exp(-np.pi * t**2), grid)


def _common_samples(f: SampledSignal, g: SampledSignal):
    """Align two signals on the coarser of two nested grids.

    Accepts identical grids, or one grid refining the other with shared
    points (integer step ratio, aligned offsets).  Anything else is
    rejected; no interpolation is ever performed.
    """
    gf, gg = f.grid, g.grid
    if gf == gg:
        return f.values, g.values, gf.step
    if gf.step > gg.step:
        coarse_vals, coarse, fine_sig = f.values, gf, g
    else:
        coarse_vals, coarse, fine_sig = g.values, gg, f
    fine = fine_sig.grid
    ratio = coarse.step / fine.step
    k = round(ratio)
    if k < 1 or abs(ratio - k) > _ALIGN_TOL:
        raise GridMismatchError("grid steps are not nested")
    off = (coarse.t_min - fine.t_min) / fine.step
    o = round(off)
    if abs(off - o) > _ALIGN_TOL:
        raise GridMismatchError("grid offsets do not align")
    idx = o + k * np.arange(coarse.count)
    inside = (idx >= 0) & (idx < fine.count)
    fine_vals = np.zeros(coarse.count, dtype=np.complex128)
    fine_vals[inside] = fine_sig.values[idx[inside]]
    if fine_sig is f:
        return fine_vals, coarse_vals, coarse.step
    return coarse_vals, fine_vals, coarse.step


def inner_product(f: SampledSignal, g: SampledSignal) -> complex:
    """Trapezoidal quadrature of f * conj(g)."""
    fv, gv, step = _common_samples(f, g)
    integrand = fv * np.conj(gv)
    return complex(_trapezoid(integrand, dx=step))


def norm(f: SampledSignal) -> float:
    """L2 norm by trapezoidal quadrature."""
    return float(np.sqrt(max(inner_product(f, f).real, 0.0)))


def rel_l2_error(got: SampledSignal, ref: SampledSignal) -> float:
    """||got - ref||_2 / ||ref||_2 on the common grid."""
    gv, rv, step = _common_samples(got, ref)
    num = np.sqrt(_trapezoid(np.abs(gv - rv) ** 2, dx=step))
    den = np.sqrt(_trapezoid(np.abs(rv) ** 2, dx=step))
    return float(num / den)


def chirp_phase(m: CanonicalMatrix, t, shift: float) -> np.ndarray:
    """Modulation exp(-i pi (a/b) (t^2 - shift^2)) carried by translated bases."""
    t = np.asarray(t, dtype=float)
    return np.exp(-1j * np.pi * (m.a / m.b) * (t**2 - shift**2))


def translate_chirp(phi: SampledSignal, lam: float, m: CanonicalMatrix) -> SampledSignal:
    """Chirped translate t -> phi(t - lam) * exp(-i pi (a/b)(t^2 - lam^2)).

    ``lam`` must be an exact multiple of the grid step; this is rejected
    otherwise rather than silently interpolated.
    """
    grid = phi.grid
    ratio = lam / grid.step
    offset = round(ratio)
    if abs(ratio - offset) > _ALIGN_TOL:
        raise OffGridError(f"translation {lam} is not a multiple of step {grid.step}")
    shifted = np.zeros(grid.count, dtype=np.complex128)
    if offset >= 0:
        if offset < grid.count:
            shifted[offset:] = phi.values[: grid.count - offset]
    else:
        if -offset < grid.count:
            shifted[:offset] = phi.values[-offset:]
    return SampledSignal(grid, shifted * chirp_phase(m, grid.points(), lam))


def dilate_chirp(phi: SampledSignal, j: int, N: int, lam: float, m: CanonicalMatrix,
                 *, max_level: int = DEFAULT_LEVEL_BUDGET) -> SampledSignal:
    """Element (2N)^{j/2} phi((2N)^j t - lam) exp(-i pi (a/b)(t^2 - lam^2)).

    For j >= 0 the dilated argument lands on grid points exactly (the grid
    is constructed that way); for j < 0 values come from the right-limit
    piecewise-constant extension of ``phi``.
    """
    if abs(j) > max_level:
        raise ValueError(f"level {j} exceeds budget {max_level}")
    grid = phi.grid
    ratio = lam / grid.step
    if abs(ratio - round(ratio)) > _ALIGN_TOL:
        raise OffGridError(f"translation {lam} is not a multiple of step {grid.step}")
    t = grid.points()
    scale = float(2 * N) ** j
    vals = phi.value_at(scale * t - lam)
    vals = (2 * N) ** (j / 2.0) * vals * chirp_phase(m, t, lam)
    return SampledSignal(grid, vals)


def gram_matrix(system: list[SampledSignal]) -> np.ndarray:
    """Pairwise trapezoidal inner products of signals on one common grid."""
    if not system:
        return np.zeros((0, 0), dtype=np.complex128)
    grid = system[0].grid
    for s in system[1:]:
        if s.grid != grid:
            raise GridMismatchError("gram requires a common grid")
    a = np.stack([s.values for s in system])
    w = np.full(grid.count, grid.step)
    w[0] *= 0.5
    w[-1] *= 0.5
    return (a * w) @ a.conj().T
