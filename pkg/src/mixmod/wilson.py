"""Discrete Wilson orthonormal bases of C^N.

One continuous unit of time is ``2M`` samples, so half-unit translates
``T_{k/2}`` move by ``kM`` samples and integer modulations ``M_n`` become
``n / (2M)`` cycles per sample. The generating window is the canonical
tight window of the redundancy-two lattice ``a = M``, ``b = N / (2M)``,
rescaled so that the Gabor system has frame bound 2 (unit-norm window).

Admissible indices ``(k, n)`` with ``k < 2K`` (``K = N / (2M)``):

* ``n = 0``: ``k`` even,
* ``0 < n < M``: every ``k``,
* ``n = M``: ``k + M`` even.

Coefficients are stored densely as a ``(2K, M + 1)`` array with
structural zeros at inadmissible slots.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .exceptions import DimensionError, WilsonGateError
from .frames import GaborSystem, canonical_window
from .tfcore import FREQUENCY, TIME, Axis, CoeffArray, as_signal, gaussian_window

GATE_TOL = 1e-10


def admissible_mask(N: int, M: int) -> np.ndarray:
    K = N // (2 * M)
    k = np.arange(2 * K)[:, None]
    n = np.arange(M + 1)[None, :]
    edge = (n == 0) & (k % 2 == 0) | (n == M) & ((k + M) % 2 == 0)
    return edge | (n > 0) & (n < M)


def wilson_window(N: int, M: int) -> np.ndarray:
    """Real, even, unit-norm generator for the Wilson basis of size ``N``."""
    _check_params(N, M)
    seed = GaborSystem.create(gaussian_window(N), M, N // (2 * M))
    g = canonical_window(seed, "tight").real
    g = 0.5 * (g + np.roll(g[::-1], 1))
    return g / np.linalg.norm(g)


def _check_params(N: int, M: int) -> None:
    if M < 2:
        raise ValueError(f"Wilson bases need M >= 2 channels, got {M}")
    if N % (2 * M):
        raise ValueError(f"2M must divide N (N={N}, M={M})")


def wilson_elements(window: np.ndarray, M: int) -> tuple[np.ndarray, list[tuple[int, int]]]:
    """Element matrix (one element per row) and its ``(k, n)`` index list."""
    g = np.asarray(window, dtype=float)
    N = g.size
    mask = admissible_mask(N, M)
    t = np.arange(N)
    rows, index = [], []
    for k, n in zip(*np.nonzero(mask)):
        k, n = int(k), int(n)
        u = t - k * M
        base = np.roll(g, k * M)
        if n == 0:
            psi = base.astype(complex)
        elif n == M:
            psi = np.where(u % 2 == 0, 1.0, -1.0) * base + 0j
        else:
            sign = -1.0 if (k + n) % 2 else 1.0
            phase = np.exp(1j * np.pi * n * u / M)
            psi = (phase + sign * np.conj(phase)) / np.sqrt(2) * base
        rows.append(psi)
        index.append((k, n))
    return np.array(rows), index


@dataclass(frozen=True, eq=False)
class WilsonBasis:
    """Orthonormal Wilson basis; construct via :func:`build_wilson_basis`."""

    N: int
    M: int
    window: np.ndarray

    @property
    def K(self) -> int:
        return self.N // (2 * self.M)

    @cached_property
    def _built(self):
        return wilson_elements(self.window, self.M)

    @property
    def elements(self) -> np.ndarray:
        return self._built[0]

    @property
    def indices(self) -> list[tuple[int, int]]:
        return self._built[1]

    @cached_property
    def mask(self) -> np.ndarray:
        return admissible_mask(self.N, self.M)

    def element(self, k: int, n: int) -> np.ndarray:
        return self.elements[self.indices.index((k, n))]

    def gram_deviation(self) -> float:
        E = self.elements
        return float(np.max(np.abs(E.conj() @ E.T - np.eye(self.N))))

    def scatter(self, flat: np.ndarray) -> np.ndarray:
        """Place per-element values into the dense ``(2K, M+1)`` layout."""
        dense = np.zeros((2 * self.K, self.M + 1), dtype=complex)
        dense[self.mask] = flat
        return dense


def build_wilson_basis(N: int, M: int, window=None) -> WilsonBasis:
    """Build and gate-check the Wilson basis of C^N with ``M`` channels.

    Raises
    ------
    WilsonGateError
        If the Gram matrix deviates from the identity by more than 1e-10.
    """
    _check_params(N, M)
    if window is None:
        window = wilson_window(N, M)
    else:
        window = np.real_if_close(as_signal(window, N))
        if np.iscomplexobj(window):
            raise ValueError("Wilson windows must be real-valued")
    basis = WilsonBasis(N, M, np.asarray(window, dtype=float))
    dev = basis.gram_deviation()
    if not dev <= GATE_TOL:
        raise WilsonGateError(f"Gram matrix deviates from identity by {dev:.3e}")
    return basis


def _wilson_axes(B: WilsonBasis, variables: tuple[int, ...]) -> tuple[Axis, ...]:
    times = tuple(Axis(TIME, v, 2 * B.K) for v in variables)
    freqs = tuple(Axis(FREQUENCY, v, B.M + 1) for v in variables)
    return times + freqs


def wilson_coefficients(B: WilsonBasis, f) -> CoeffArray:
    """``<f, psi_{k,n}>`` in the dense ``(2K, M+1)`` layout."""
    f = as_signal(f)
    if f.size != B.N:
        raise DimensionError(f"signal length {f.size} != basis dimension {B.N}")
    return CoeffArray(_wilson_axes(B, (1,)), B.scatter(B.elements.conj() @ f), B.mask)


def wilson_synthesis(B: WilsonBasis, C: CoeffArray) -> np.ndarray:
    if C.shape != B.mask.shape:
        raise DimensionError(f"coefficient shape {C.shape} != {B.mask.shape}")
    return B.elements.T @ C.values[B.mask]


def tensor_wilson_coefficients(B: WilsonBasis, kernel) -> CoeffArray:
    """``<k, psi_{j1,l1} (x) psi_{j2,l2}>`` for an N x N kernel.

    The tensor carries no conjugate on its second factor. Axes are
    ``(time,1), (time,2), (frequency,1), (frequency,2)``.
    """
    k = np.asarray(kernel, dtype=complex)
    if k.shape != (B.N, B.N):
        raise DimensionError(f"kernel shape {k.shape} does not match basis dimension {B.N}")
    E = B.elements.conj()
    flat = E @ k @ E.T
    T, F = 2 * B.K, B.M + 1
    dense = np.zeros((T, F, T, F), dtype=complex)
    ki, ni = np.nonzero(B.mask)
    dense[ki[:, None], ni[:, None], ki[None, :], ni[None, :]] = flat
    mask = B.mask[:, :, None, None] & B.mask[None, None, :, :]
    return CoeffArray(
        _wilson_axes(B, (1, 2)),
        dense.transpose(0, 2, 1, 3),
        mask.transpose(0, 2, 1, 3),
    )
