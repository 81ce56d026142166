"""Finite time-frequency core on the cyclic group Z_N.

Signals are plain complex numpy vectors of length ``N``. The inner product
is ``<f, h> = sum_t f(t) * conj(h(t))`` (counting measure), the DFT is
unitary, and the short-time Fourier transform uses the raw exponential sum
so that ``V(k, l) = <f, M_l T_k g>`` holds exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
import numpy as np

from .exceptions import DimensionError, ZeroWindowError

TIME = "time"
FREQUENCY = "frequency"


def as_signal(f, n: int | None = None) -> np.ndarray:
    """Validate ``f`` as a finite, nonempty complex vector and return it."""
    arr = np.asarray(f, dtype=complex)
    if arr.ndim != 1 or arr.size == 0:
        raise DimensionError(f"signal must be a nonempty 1-D array, got shape {arr.shape}")
    if n is not None and arr.size != n:
        raise DimensionError(f"signal has length {arr.size}, expected {n}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("signal contains NaN or Inf")
    return arr


def _phase(m: np.ndarray, n: int) -> np.ndarray:
    # integer exponent reduced mod n before scaling keeps phases exact for large m
    return np.exp(2j * np.pi * (np.mod(m, n) / n))


@dataclass(frozen=True)
class Axis:
    role: str
    var: int
    extent: int

    def __post_init__(self):
        if self.role not in (TIME, FREQUENCY):
            raise ValueError(f"axis role must be 'time' or 'frequency', got {self.role!r}")
        if self.extent < 1:
            raise ValueError("axis extent must be positive")


@dataclass(frozen=True, eq=False)
class CoeffArray:
    """Complex multi-array with labelled axes.

    ``mask`` flags admissible entries for ragged index sets (Wilson
    coefficients); entries outside the mask are structural zeros.
    """

    axes: tuple[Axis, ...]
    values: np.ndarray
    mask: np.ndarray | None = None

    def __post_init__(self):
        axes = tuple(self.axes)
        values = np.asarray(self.values, dtype=complex)
        object.__setattr__(self, "axes", axes)
        object.__setattr__(self, "values", values)
        shape = tuple(ax.extent for ax in axes)
        if values.shape != shape:
            raise DimensionError(f"values shape {values.shape} does not match axes {shape}")
        labels = [(ax.role, ax.var) for ax in axes]
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate (role, var) axis labels: {labels}")
        if self.mask is not None:
            mask = np.asarray(self.mask, dtype=bool)
            if mask.shape != shape:
                raise DimensionError("mask shape does not match axes")
            object.__setattr__(self, "mask", mask)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.values.shape

    @property
    def ndim(self) -> int:
        return len(self.axes)

    def masked_values(self) -> np.ndarray:
        if self.mask is None:
            return self.values
        return np.where(self.mask, self.values, 0)

    def energy(self) -> float:
        return float(np.sum(np.abs(self.masked_values()) ** 2))


def translate(f, x: int) -> np.ndarray:
    """Cyclic translation ``(T_x f)(t) = f(t - x mod N)``."""
    f = as_signal(f)
    return np.roll(f, int(x) % f.size)


def modulate(f, xi: int) -> np.ndarray:
    """Modulation ``(M_xi f)(t) = exp(2 pi i t xi / N) f(t)``."""
    f = as_signal(f)
    n = f.size
    return _phase(np.arange(n) * (int(xi) % n), n) * f


def tf_shift(f, x: int, xi: int) -> np.ndarray:
    """Time-frequency shift ``M_xi T_x f`` (translation first)."""
    return modulate(translate(f, x), xi)


def dft(f, direction: str = "forward") -> np.ndarray:
    """Unitary DFT; ``direction='inverse'`` applies the adjoint."""
    f = as_signal(f)
    if direction == "forward":
        return np.fft.fft(f, norm="ortho")
    if direction == "inverse":
        return np.fft.ifft(f, norm="ortho")
    raise ValueError(f"direction must be 'forward' or 'inverse', got {direction!r}")


def _shifted_windows(g: np.ndarray, shifts: np.ndarray) -> np.ndarray:
    # row j holds g(t - shifts[j] mod N)
    n = g.size
    t = np.arange(n)
    return g[(t[None, :] - shifts[:, None]) % n]


def stft_full(f, g) -> CoeffArray:
    """Full-grid STFT ``V(k, l) = <f, M_l T_k g>`` for all ``k, l in Z_N``.

    Rows are computed as length-N DFTs of ``f * conj(T_k g)``.
    """
    f = as_signal(f)
    g = as_signal(g)
    if f.size != g.size:
        raise DimensionError(f"signal length {f.size} != window length {g.size}")
    n = f.size
    rows = f[None, :] * np.conj(_shifted_windows(g, np.arange(n)))
    values = np.fft.fft(rows, axis=1)
    return CoeffArray((Axis(TIME, 1, n), Axis(FREQUENCY, 1, n)), values)


def istft_full(V: CoeffArray, g, psi) -> np.ndarray:
    """Synthesis ``(1/N) sum_{k,l} V(k,l) M_l T_k psi``.

    When ``V = stft_full(f, g)`` the result is ``<psi, g> f``.
    """
    g = as_signal(g)
    psi = as_signal(psi, g.size)
    n = g.size
    if V.ndim != 2 or V.shape != (n, n):
        raise DimensionError(f"expected a full {n}x{n} coefficient array, got {V.shape}")
    if not np.any(g):
        raise ZeroWindowError("analysis window is identically zero")
    # sum_l V(k,l) e^{2 pi i l t/N} / N  is the (unnormalized-forward) ifft of row k
    rows = np.fft.ifft(V.values, axis=1)
    return np.sum(rows * _shifted_windows(psi, np.arange(n)), axis=0)


def stft_kernel(k, window) -> CoeffArray:
    """Full-grid STFT of an N x N kernel on Z_N x Z_N.

    ``V(x1, x2, xi1, xi2) = <k, M_(xi1, xi2) T_(x1, x2) Phi>`` with axes
    ``(time,1), (time,2), (frequency,1), (frequency,2)``. A 1-D window ``g``
    is promoted to ``Phi = g (x) conj(g)``. Memory is ``O(N^4)``.
    """
    k = np.asarray(k, dtype=complex)
    if k.ndim != 2 or k.shape[0] != k.shape[1]:
        raise DimensionError(f"kernel must be square, got shape {k.shape}")
    n = k.shape[0]
    w = np.asarray(window, dtype=complex)
    if w.ndim == 1:
        w = np.outer(as_signal(w, n), np.conj(w))
    if w.shape != (n, n):
        raise DimensionError(f"window shape {w.shape} does not match kernel shape {k.shape}")
    t = np.arange(n)
    rows = (t[None, :] - t[:, None]) % n  # rows[x, t] = t - x
    shifted = w[rows[:, None, :, None], rows[None, :, None, :]]
    values = np.fft.fft2(k[None, None] * np.conj(shifted), axes=(2, 3))
    axes = (Axis(TIME, 1, n), Axis(TIME, 2, n), Axis(FREQUENCY, 1, n), Axis(FREQUENCY, 2, n))
    return CoeffArray(axes, values)


def gaussian_window(n: int) -> np.ndarray:
    """Periodized sampled Gaussian ``sum_{|j|<=3} exp(-pi (t - jN)^2 / N)``, unit norm.

    The result is strictly positive and exactly even, ``g(t) = g(-t mod N)``.
    """
    if n < 2:
        raise ValueError(f"gaussian window needs N >= 2, got {n}")
    t = np.arange(n, dtype=float)
    g = sum(np.exp(-np.pi * (t - j * n) ** 2 / n) for j in range(-3, 4))
    # the truncated periodization is even up to terms below exp(-9 pi N)
    g = 0.5 * (g + np.roll(g[::-1], 1))
    return g / np.linalg.norm(g)


def inner(f, h) -> complex:
    """``<f, h> = sum f * conj(h)``."""
    return complex(np.vdot(h, f))
