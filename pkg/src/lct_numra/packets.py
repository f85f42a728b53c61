"""Wavelet packets: base-2N indexing, frequency-domain generation, transforms.

Packet n is addressed by the base-2N expansion of n; its hat is the
product of the digit filters at successively finer dilations, continued
with the low-pass cascade tail:

    hat(W_n)(u) = L_{d_0}(u/2N) ... L_{d_{q-1}}(u/(2N)^q) hat(phi)(u/(2N)^q)

for digits d_0..d_{q-1}.  Analysis and synthesis are quadrature against
chirped dilated translates; bases must be Gram-certified before use.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .canonical import CanonicalMatrix
from .filters import PeriodicFilterPair, TranslationSet, filter_eval, omega_enumerate
from .sampling import Grid, SampledSignal, translate_chirp
from .wavelets import CascadeResult, HatFunction, cascade, gram, hat_to_signal


class UncertifiedBasisError(RuntimeError):
    """Raised when a packet basis is used before passing certification."""


@dataclass(frozen=True)
class PacketIndex:
    """Nonnegative integer with its base-2N digit expansion (least significant first)."""

    n: int
    digits: tuple[int, ...]

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("packet index must be nonnegative")
        if self.n >= 1 and (not self.digits or self.digits[-1] == 0):
            raise ValueError("last digit must be nonzero for n >= 1")
        if self.n == 0 and self.digits:
            raise ValueError("index 0 has the empty expansion")


def digits(n: int, N: int) -> PacketIndex:
    """Base-2N expansion of n; empty for n = 0, reconstruction is exact."""
    if n < 0:
        raise ValueError("packet index must be nonnegative")
    base = 2 * N
    out = []
    rest = int(n)
    while rest > 0:
        rest, d = divmod(rest, base)
        out.append(d)
    return PacketIndex(n=int(n), digits=tuple(out))


def reconstruct(idx: PacketIndex, N: int) -> int:
    """Inverse of ``digits``: sum of digits[i] * (2N)^i."""
    base = 2 * N
    total = 0
    for d in reversed(idx.digits):
        total = total * base + d
    return total


@dataclass(frozen=True)
class PacketNode:
    """One packet: its index, frequency-domain hat, and time samples.

    ``signal`` is None when the node was generated hat-only.
    """

    index: PacketIndex
    hat: HatFunction
    signal: SampledSignal | None


def packet_hat(
    idx: PacketIndex,
    bank: list[PeriodicFilterPair],
    *,
    scaling: CascadeResult | None = None,
    grid: Grid | None = None,
    J: int = 20,
    tol: float = 1e-5,
    span: float = 16.0,
    oversample: int = 16,
    synthesize: bool = True,
) -> PacketNode:
    """Packet hat from the digit filters continued with the low-pass tail.

    ``bank`` holds the 2N filters with index 0 the low-pass.  The tail
    uses the cascade of the low-pass filter (supplied via ``scaling`` or
    computed here with J factors under the usual tail check), so the
    index recursion

        hat(W_{2Nn + k})(u) = L_k(u/2N) hat(W_n)(u/2N)

    holds exactly along the code path.
    """
    ts = bank[0].ts
    if len(bank) != 2 * ts.N:
        raise ValueError("bank must hold 2N filters")
    if any(d < 0 or d >= 2 * ts.N for d in idx.digits):
        raise ValueError("digit out of range for this bank")
    if scaling is None:
        scaling = cascade(bank[0], J=J, tol=tol, grid=grid, span=span, oversample=oversample)
    if grid is None:
        grid = scaling.signal.grid
    two_n = ts.dilation
    digit_seq = idx.digits
    phi_hat = scaling.hat

    def hat_fn(u: np.ndarray) -> np.ndarray:
        out = np.ones(u.shape, dtype=np.complex128)
        x = u / two_n
        for d in digit_seq:
            out = out * filter_eval(bank[d], x)
            x = x / two_n
        return out * phi_hat(x * two_n)

    hat = HatFunction(hat_fn)
    signal = hat_to_signal(hat, grid, span=span, oversample=oversample) if synthesize else None
    return PacketNode(index=idx, hat=hat, signal=signal)


def generate_packets(
    n_max: int,
    bank: list[PeriodicFilterPair],
    *,
    grid: Grid | None = None,
    J: int = 20,
    tol: float = 1e-5,
    span: float = 16.0,
    oversample: int = 16,
) -> list[PacketNode]:
    """Packets 0..n_max sharing one cascade tail and one time grid."""
    ts = bank[0].ts
    scaling = cascade(bank[0], J=J, tol=tol, grid=grid, span=span, oversample=oversample)
    return [
        packet_hat(
            digits(n, ts.N), bank, scaling=scaling, grid=scaling.signal.grid,
            span=span, oversample=oversample,
        )
        for n in range(n_max + 1)
    ]


def packet_gram(
    nodes: list[PacketNode],
    ts: TranslationSet,
    m: CanonicalMatrix,
    lambda_window: tuple[float, float],
) -> tuple[np.ndarray, float]:
    """Gram of all chirped translates of the given packets; max |G - I|."""
    lambdas = omega_enumerate(ts, lambda_window)
    system = [
        translate_chirp(node.signal, lam, m) for node in nodes for lam in lambdas
    ]
    return gram(system)


@dataclass
class BasisElement:
    """One transform atom: packet node, dilation level, translation."""

    node: PacketNode
    level: int
    lam: float


@dataclass
class PacketBasis:
    """A finite packet system with a certification gate.

    ``certify`` computes the full Gram of the dilated chirped translates
    and stores the max deviation from identity; analysis and synthesis
    refuse to run unless that deviation is at or below their tolerance.

    Atoms are realized from the packet hats on one shared frequency
    lattice: the atom at (n, level j, lam) inverse-transforms
    (2N)^{-j/2} hat(W_n)(u/(2N)^j) shifted by lam/(2N)^j, then carries
    the time-domain chirp.  Sharing the lattice keeps all atoms limited
    to one common band, so spans at different levels nest exactly and
    Nyquist-rate quadrature of their products is alias-free.
    """

    ts: TranslationSet
    m: CanonicalMatrix
    elements: list[BasisElement]
    span: float = 16.0
    oversample: int = 1
    residual: float | None = field(default=None)
    _signals: list[SampledSignal] | None = field(default=None, repr=False, compare=False)

    def signals(self) -> list[SampledSignal]:
        if self._signals is not None:
            return self._signals
        from .sampling import chirp_phase
        from .wavelets import frequency_samples

        grid = self.elements[0].node.signal.grid
        for e in self.elements:
            if e.node.signal.grid != grid:
                raise ValueError("all basis nodes must share one grid")
        u = frequency_samples(grid, span=self.span, oversample=self.oversample)
        n = u.size
        du = 1.0 / self.span
        dt_fine = grid.step / self.oversample
        idx0 = round(grid.t_min / dt_fine)
        idx = (idx0 + self.oversample * np.arange(grid.count)) % n
        t = grid.points()
        two_n = self.ts.dilation
        mothers: dict[tuple[int, int], np.ndarray] = {}
        out = []
        for e in self.elements:
            key = (e.node.index.n, e.level)
            if key not in mothers:
                hat_vals = float(two_n) ** (-e.level / 2.0) * e.node.hat(
                    u / float(two_n) ** e.level
                )
                mothers[key] = np.fft.ifft(np.fft.ifftshift(hat_vals)) * (n * du)
            tau = e.lam / float(two_n) ** e.level
            shift = tau / dt_fine
            if abs(shift - round(shift)) > 1e-9:
                raise ValueError(
                    f"translation {e.lam} at level {e.level} is off the atom lattice"
                )
            rolled = np.roll(mothers[key], round(shift))
            vals = rolled[idx] * chirp_phase(self.m, t, e.lam)
            out.append(SampledSignal(grid, vals))
        self._signals = out
        return out

    def certify(self) -> float:
        _, off = gram(self.signals())
        self.residual = off
        return off

    def require_certified(self, tol: float) -> None:
        if self.residual is None:
            raise UncertifiedBasisError("basis has not been certified; call certify()")
        if self.residual > tol:
            raise UncertifiedBasisError(
                f"basis residual {self.residual:.3e} exceeds tolerance {tol:.3e}"
            )


@dataclass(frozen=True)
class CoefficientTable:
    """Rows (n, level, lambda) with the corresponding coefficients."""

    rows: tuple[tuple[int, int, float], ...]
    values: np.ndarray


def packet_analyze(
    f: SampledSignal,
    basis: PacketBasis,
    *,
    tol: float = 1e-3,
) -> CoefficientTable:
    """Coefficients <f, atom> for every basis atom (quadrature)."""
    basis.require_certified(tol)
    grid = f.grid
    w = np.full(grid.count, grid.step)
    w[0] *= 0.5
    w[-1] *= 0.5
    weighted = np.conj(f.values) * w
    rows = []
    vals = []
    for e, sig in zip(basis.elements, basis.signals()):
        if sig.grid != grid:
            raise ValueError("basis atoms must live on the signal grid")
        rows.append((e.node.index.n, e.level, e.lam))
        vals.append(np.conj(np.sum(weighted * sig.values)))
    return CoefficientTable(rows=tuple(rows), values=np.asarray(vals, dtype=np.complex128))


def packet_synthesize(
    coeffs: CoefficientTable,
    basis: PacketBasis,
    *,
    tol: float = 1e-3,
) -> SampledSignal:
    """Sum of coefficient-weighted atoms; inverse of analyze on the span."""
    basis.require_certified(tol)
    if len(coeffs.values) != len(basis.elements):
        raise ValueError("coefficient table does not match the basis")
    signals = basis.signals()
    grid = signals[0].grid
    acc = np.zeros(grid.count, dtype=np.complex128)
    for c, sig in zip(coeffs.values, signals):
        acc += c * sig.values
    return SampledSignal(grid, acc)


def fold_residuals(
    node: PacketNode,
    ts: TranslationSet,
    *,
    span: float = 16.0,
    oversample: int = 16,
) -> tuple[float, float]:
    """Residuals of the two folded power sums of a packet hat.

    h(u) = sum_j |hat(W)(u + N j)|^2 folded over the whole stored lattice;
    the plain sum of h over the 2N half-integer shifts must be 2 and the
    twisted sum must vanish, mirroring the filter-bank conditions one
    level up.
    """
    from .wavelets import frequency_samples

    grid = node.signal.grid
    u = frequency_samples(grid, span=span, oversample=oversample)
    du = u[1] - u[0]
    vals = np.abs(node.hat(u)) ** 2
    period = round(ts.N / du)
    n_fold = vals.size // period
    trimmed = vals[: n_fold * period]
    h = trimmed.reshape(n_fold, period).sum(axis=0)
    half_shift = round(0.5 / du)
    phases = np.exp(-1j * np.pi * ts.r * np.arange(2 * ts.N) / ts.N)
    plain = np.zeros(period)
    twisted = np.zeros(period, dtype=np.complex128)
    for p in range(2 * ts.N):
        shifted = np.roll(h, -p * half_shift)
        plain += shifted
        twisted += phases[p] * shifted
    res_plain = float(np.max(np.abs(plain - 2.0)))
    res_twist = float(np.max(np.abs(twisted)))
    return res_plain, res_twist
