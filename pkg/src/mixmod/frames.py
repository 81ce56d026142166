"""Lattice Gabor systems on C^N.

A system is a window ``g`` together with a separable lattice ``(a, b)``;
its elements are ``M_{bl} T_{ak} g`` for ``k < N/a`` and ``l < N/b``,
always indexed with the time index first.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .exceptions import DimensionError, NotAFrameError, NumericalError
from .tfcore import FREQUENCY, TIME, Axis, CoeffArray, _phase, _shifted_windows, as_signal

# canonical windows need lambda_min(S) above this fraction of lambda_max(S)
FRAME_FLOOR = 1e-10


@dataclass(frozen=True)
class GaborLattice:
    N: int
    a: int
    b: int

    def __post_init__(self):
        if self.N < 1 or self.a < 1 or self.b < 1:
            raise ValueError("lattice parameters must be positive")
        if self.N % self.a or self.N % self.b:
            raise ValueError(f"lattice steps must divide N: N={self.N}, a={self.a}, b={self.b}")

    @property
    def time_slots(self) -> int:
        return self.N // self.a

    @property
    def freq_slots(self) -> int:
        return self.N // self.b

    @property
    def size(self) -> int:
        return self.time_slots * self.freq_slots

    @property
    def redundancy(self) -> float:
        return self.N / (self.a * self.b)


@dataclass(frozen=True, eq=False)
class GaborSystem:
    """Window plus lattice.

    ``kind`` records how the window was obtained (``raw``, ``dual`` or
    ``tight``); it is informational and survives JSON round trips.
    The frame operator and its eigendecomposition are computed lazily and
    cached on first use.
    """

    lattice: GaborLattice
    window: np.ndarray
    kind: str = "raw"

    def __post_init__(self):
        object.__setattr__(self, "window", as_signal(self.window, self.lattice.N))
        if self.kind not in ("raw", "dual", "tight"):
            raise ValueError(f"unknown window kind {self.kind!r}")

    @classmethod
    def create(cls, window, a: int, b: int, kind: str = "raw") -> "GaborSystem":
        window = as_signal(window)
        return cls(GaborLattice(window.size, a, b), window, kind)

    @property
    def N(self) -> int:
        return self.lattice.N

    @cached_property
    def elements(self) -> np.ndarray:
        """Matrix whose row ``k * (N/b) + l`` is ``M_{bl} T_{ak} g``."""
        lat = self.lattice
        n = lat.N
        shifted = _shifted_windows(self.window, lat.a * np.arange(lat.time_slots))
        phases = _phase(np.outer(lat.b * np.arange(lat.freq_slots), np.arange(n)), n)
        return (shifted[:, None, :] * phases[None, :, :]).reshape(lat.size, n)

    def element(self, k: int, l: int) -> np.ndarray:
        return self.elements[k * self.lattice.freq_slots + l]

    @cached_property
    def _eigh(self) -> tuple[np.ndarray, np.ndarray]:
        try:
            w, U = np.linalg.eigh(frame_operator(self))
        except np.linalg.LinAlgError as exc:
            raise NumericalError(f"frame operator eigensolve failed: {exc}") from exc
        return w, U

    def with_window(self, window, kind: str) -> "GaborSystem":
        return GaborSystem(self.lattice, window, kind)


def _coeff_axes(lat: GaborLattice) -> tuple[Axis, Axis]:
    return Axis(TIME, 1, lat.time_slots), Axis(FREQUENCY, 1, lat.freq_slots)


def gabor_analysis(sys: GaborSystem, f) -> CoeffArray:
    """Frame coefficients ``<f, M_{bl} T_{ak} g>`` on the lattice."""
    lat = sys.lattice
    f = as_signal(f)
    if f.size != lat.N:
        raise DimensionError(f"signal length {f.size} != system dimension {lat.N}")
    rows = f[None, :] * np.conj(_shifted_windows(sys.window, lat.a * np.arange(lat.time_slots)))
    full = np.fft.fft(rows, axis=1)
    return CoeffArray(_coeff_axes(lat), full[:, :: lat.b])


def gabor_synthesis(sys: GaborSystem, C: CoeffArray) -> np.ndarray:
    """``sum_{k,l} C(k,l) M_{bl} T_{ak} g``; the adjoint of :func:`gabor_analysis`."""
    lat = sys.lattice
    if C.shape != (lat.time_slots, lat.freq_slots):
        raise DimensionError(
            f"coefficient extents {C.shape} do not match lattice {(lat.time_slots, lat.freq_slots)}"
        )
    spread = np.zeros((lat.time_slots, lat.N), dtype=complex)
    spread[:, :: lat.b] = C.values
    # N * ifft gives the unnormalized sum_l C(k,l) e^{2 pi i b l t / N}
    rows = lat.N * np.fft.ifft(spread, axis=1)
    return np.sum(rows * _shifted_windows(sys.window, lat.a * np.arange(lat.time_slots)), axis=0)


def frame_operator(sys: GaborSystem) -> np.ndarray:
    """``S = sum_x phi_x phi_x^*`` as an N x N Hermitian matrix."""
    E = sys.elements
    S = E.T @ E.conj()
    return 0.5 * (S + S.conj().T)


def frame_bounds(sys: GaborSystem) -> tuple[float, float]:
    """Optimal frame bounds ``(lambda_min(S), lambda_max(S))``."""
    w, _ = sys._eigh
    return float(max(w[0], 0.0)), float(w[-1])


def canonical_window(sys: GaborSystem, kind: str = "dual") -> np.ndarray:
    """Canonical dual (``S^-1 g``) or canonical tight (``S^-1/2 g``) window.

    Raises
    ------
    NotAFrameError
        If ``lambda_min(S) <= 1e-10 * lambda_max(S)``.
    """
    w, U = sys._eigh
    if w[-1] <= 0 or w[0] <= FRAME_FLOOR * w[-1]:
        raise NotAFrameError(
            f"system is not a frame: lambda_min={w[0]:.3e}, lambda_max={w[-1]:.3e}"
        )
    if kind == "dual":
        scale = 1.0 / w
    elif kind == "tight":
        scale = 1.0 / np.sqrt(w)
    else:
        raise ValueError(f"kind must be 'dual' or 'tight', got {kind!r}")
    return U @ (scale * (U.conj().T @ sys.window))


def canonical_system(sys: GaborSystem, kind: str = "tight") -> GaborSystem:
    """Same lattice, canonical window of the requested kind."""
    return sys.with_window(canonical_window(sys, kind), kind)


def tensor_frame_coeffs(sys: GaborSystem, kernel) -> CoeffArray:
    """Coefficients ``<k, phi_m (x) conj(phi_n)>`` of an N x N kernel.

    The result has axes ``(time,1), (time,2), (frequency,1), (frequency,2)``
    where variable 1 is the ``m`` index and variable 2 the ``n`` index.
    Each entry equals ``<A phi_n, phi_m>`` for the operator with kernel ``k``.
    """
    lat = sys.lattice
    k = np.asarray(kernel, dtype=complex)
    if k.shape != (lat.N, lat.N):
        raise DimensionError(f"kernel shape {k.shape} does not match system dimension {lat.N}")
    E = sys.elements
    G = E.conj() @ k @ E.T
    Ka, Kb = lat.time_slots, lat.freq_slots
    values = G.reshape(Ka, Kb, Ka, Kb).transpose(0, 2, 1, 3)
    axes = (Axis(TIME, 1, Ka), Axis(TIME, 2, Ka), Axis(FREQUENCY, 1, Kb), Axis(FREQUENCY, 2, Kb))
    return CoeffArray(axes, values)
