"""Integral operators on C^N, Schatten norms and Kohn-Nirenberg symbols.

A kernel is an N x N complex matrix ``k`` acting by ``(Af)(t) = sum_y k(t, y) f(y)``
(counting measure, no 1/N), so the Schatten 2-norm is the Frobenius norm.

The Kohn-Nirenberg symbol ``tau`` and the kernel are related through the
cyclic shear ``(x, y) -> (x, x - y)`` and an inverse DFT in the second slot::

    k(t, y) = (1/N) sum_xi tau(t, xi) exp(2 pi i (t - y) xi / N)

so ``tau == 1`` is the identity and ``||tau||_F = sqrt(N) ||k||_F``.
"""

from __future__ import annotations

import itertools
import math
from typing import NamedTuple, Sequence

import numpy as np

from .exceptions import DimensionError, NumericalError
from .frames import GaborSystem, frame_bounds, tensor_frame_coeffs
from .mixednorms import MixedNormSpec, Permutation, mixed_norm
from .tfcore import as_signal, stft_kernel
from .wilson import WilsonBasis, build_wilson_basis, tensor_wilson_coefficients

PARSEVAL_TOL = 1e-8

# slice permutation grouping (time,1), (frequency,1) innermost
SLICE_PERMUTATION = Permutation((1, 3, 2, 4))

# (x, y, z, t) -> STFT slot (time1, time2, freq1, freq2) on the symbol side;
# calibrated by calibrate_kn_remap and frozen
KN_REMAP = np.array(
    [
        [1, 0, 0, 0],
        [0, 0, 0, -1],
        [0, 0, 1, 1],
        [-1, 1, 0, 0],
    ]
)


def as_kernel(k, n: int | None = None) -> np.ndarray:
    k = np.asarray(k, dtype=complex)
    if k.ndim != 2 or k.shape[0] != k.shape[1]:
        raise DimensionError(f"kernel must be a square matrix, got shape {k.shape}")
    if n is not None and k.shape[0] != n:
        raise DimensionError(f"kernel has dimension {k.shape[0]}, expected {n}")
    if not np.all(np.isfinite(k)):
        raise ValueError("kernel contains NaN or Inf")
    return k


def apply_operator(k, f) -> np.ndarray:
    k = as_kernel(k)
    return k @ as_signal(f, k.shape[0])


def singular_values(k) -> np.ndarray:
    """Singular values in nonincreasing order."""
    try:
        return np.linalg.svd(as_kernel(k), compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"SVD did not converge: {exc}") from exc


def schatten_norm(k, p: float) -> float:
    if not p >= 1:
        raise ValueError(f"Schatten exponent must be >= 1, got {p}")
    sv = singular_values(k)
    if p == math.inf:
        return float(sv[0]) if sv.size else 0.0
    return float(np.sum(sv**p) ** (1.0 / p))


def schatten_bound_rhs(k, sys: GaborSystem, p: float) -> float:
    """Upper bound ``(sum_n (sum_m |<k, Phi_mn>|^2)^(p/2))^(1/p)`` on ``||A||_{S_p}``.

    ``sys`` must be a Parseval system and ``p`` in ``[1, 2]``. The tensor
    coefficients are grouped by :data:`SLICE_PERMUTATION`: inner ``l^2`` over
    the ``m`` axes, outer ``l^p`` over the ``n`` axes.
    """
    if not 1 <= p <= 2:
        raise ValueError(f"the frame bound holds for p in [1, 2], got {p}")
    A, B = frame_bounds(sys)
    if abs(A - 1) > PARSEVAL_TOL or abs(B - 1) > PARSEVAL_TOL:
        raise ValueError(f"system is not Parseval: frame bounds ({A:.3e}, {B:.3e})")
    coeffs = tensor_frame_coeffs(sys, as_kernel(k, sys.N))
    return mixed_norm(coeffs, MixedNormSpec((2, 2, p, p), SLICE_PERMUTATION))


def family_operator(F: np.ndarray, G: np.ndarray, frame: np.ndarray, Gmat: np.ndarray) -> np.ndarray:
    """``T(G)_j = sum_n <f_j, phi_n> <G(., n), g_j>``.

    ``F`` and ``G`` hold the orthonormal families as columns, ``frame`` the
    frame elements as rows and ``Gmat`` the columns ``G(., n)``.
    """
    analysis = F.T @ frame.conj().T  # [j, n] = <f_j, phi_n>
    pairing = G.conj().T @ Gmat  # [j, n] = <G(., n), g_j>
    return np.sum(analysis * pairing, axis=1)


# --------------------------------------------------------------------------
# Kohn-Nirenberg symbols

def kn_to_kernel(tau) -> np.ndarray:
    """Kernel of the operator with symbol ``tau`` (partial inverse DFT, then shear)."""
    tau = as_kernel(tau)
    n = tau.shape[0]
    F = np.fft.ifft(tau, axis=1)  # F(t, u) = (1/N) sum_xi tau(t, xi) e^{2 pi i u xi / N}
    t = np.arange(n)[:, None]
    y = np.arange(n)[None, :]
    return F[t, (t - y) % n]


def kernel_to_kn(k) -> np.ndarray:
    """Symbol of the operator with kernel ``k``; exact inverse of :func:`kn_to_kernel`."""
    k = as_kernel(k)
    n = k.shape[0]
    t = np.arange(n)[:, None]
    u = np.arange(n)[None, :]
    return np.fft.fft(k[t, (t - u) % n], axis=1)


def unitary_kn(k) -> np.ndarray:
    """Unit-normalized symbol map ``k -> kernel_to_kn(k) / sqrt(N)`` (an isometry)."""
    k = as_kernel(k)
    return kernel_to_kn(k) / math.sqrt(k.shape[0])


def tf_shift_2d(P, x: int, y: int, z: int, w: int) -> np.ndarray:
    """``M_(z, w) T_(x, y) P`` on Z_N x Z_N."""
    P = as_kernel(P)
    n = P.shape[0]
    a = np.arange(n)[:, None]
    b = np.arange(n)[None, :]
    phase = np.exp(2j * np.pi * (((a * z + b * w) % n) / n))
    return phase * P[(a - x) % n, (b - y) % n]


class MagnitudeReport(NamedTuple):
    max_deviation: float
    tuples_checked: int


def _remap(idx: np.ndarray, remap: np.ndarray, n: int) -> tuple:
    out = (idx @ remap.T) % n
    return tuple(out[:, i] for i in range(4))


def kn_tf_magnitude_check(
    k, window, samples: int | None = None, seed: int = 0, remap: np.ndarray = KN_REMAP
) -> MagnitudeReport:
    """Compare ``|<k, M_(z,t) T_(x,y) Phi>|`` with its symbol-side counterpart.

    The right-hand side is ``|<tau, pi(remap(x,y,z,t)) Phi'>|`` where ``tau``
    and ``Phi'`` are the unit-normalized symbols of ``k`` and ``Phi``. With
    ``samples=None`` every tuple in ``Z_N^4`` is checked.
    """
    k = as_kernel(k)
    n = k.shape[0]
    Phi = as_kernel(window, n)
    if not np.any(Phi):
        raise ValueError("window kernel is identically zero")
    lhs = np.abs(stft_kernel(k, Phi).values)
    rhs = np.abs(stft_kernel(unitary_kn(k), unitary_kn(Phi)).values)
    if samples is None:
        idx = np.array(list(itertools.product(range(n), repeat=4)))
    else:
        rng = np.random.Generator(np.random.Philox(seed))
        idx = rng.integers(0, n, size=(samples, 4))
    left = lhs[tuple(idx[:, i] for i in range(4))]
    right = rhs[_remap(idx, np.asarray(remap), n)]
    return MagnitudeReport(float(np.max(np.abs(left - right))), len(idx))


def remap_candidates() -> list[tuple[tuple[int, int, int, int], np.ndarray]]:
    """Sign variants of ``(x, s1 t, z + s2 t, s3 y + e x)``.

    The eight pure sign variants (``e = 0``) are widened by a shear term
    ``e in {-1, 1}`` in the last slot, 24 candidates in total.
    """
    out = []
    for s1, s2, s3, e in itertools.product((1, -1), (1, -1), (1, -1), (0, 1, -1)):
        R = np.array([[1, 0, 0, 0], [0, 0, 0, s1], [0, 0, 1, s2], [e, s3, 0, 0]])
        out.append(((s1, s2, s3, e), R))
    return out


def calibrate_kn_remap(n: int = 4, seed: int = 0, tol: float = 1e-9) -> list[np.ndarray]:
    """Exhaustive search over :func:`remap_candidates` with random ``k`` and ``Phi``."""
    rng = np.random.Generator(np.random.Philox(seed))
    k = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    Phi = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return [
        R for _, R in remap_candidates()
        if kn_tf_magnitude_check(k, Phi, remap=R).max_deviation <= tol
    ]


def kn_norm_ratio(k, window, p: float, c: Permutation = SLICE_PERMUTATION) -> float:
    """``||k||_{M(c)} / ||tau||_{M(c)}`` with exponents ``(2, 2, p, p)``.

    The kernel side uses ``Phi = g (x) conj(g)``; the symbol side uses the
    unit-normalized symbols of ``k`` and ``Phi``.
    """
    k = as_kernel(k)
    g = as_signal(window, k.shape[0])
    Phi = np.outer(g, np.conj(g))
    spec = MixedNormSpec((2, 2, p, p), c)
    top = mixed_norm(stft_kernel(k, Phi), spec)
    bottom = mixed_norm(stft_kernel(unitary_kn(k), unitary_kn(Phi)), spec)
    return top / bottom


# --------------------------------------------------------------------------
# counterexamples from Wilson bases

def _lambda_flat(B: WilsonBasis, lam) -> np.ndarray:
    lam = np.asarray(getattr(lam, "values", lam), dtype=complex)
    if lam.shape != B.mask.shape:
        raise DimensionError(f"lambda must have the dense Wilson shape {B.mask.shape}")
    if np.any(lam[~B.mask] != 0):
        raise ValueError("lambda is nonzero at an inadmissible Wilson index")
    return lam[B.mask]


def build_counterexample(B: WilsonBasis, lam) -> np.ndarray:
    """Kernel ``sum_{j,l} lam[j, l] psi_{j,l}(t) psi_{j,l}(y)``.

    ``lam`` uses the dense ``(2K, M+1)`` Wilson layout (time index first).
    The singular values of the result are the sorted ``|lam|``.
    """
    flat = _lambda_flat(B, lam)
    E = B.elements
    return E.T @ (flat[:, None] * E)


class SharpnessRow(NamedTuple):
    K: int
    N: int
    trace_norm: float
    strict_norm: float
    relaxed_norm: float
    spectrum_error: float


def harmonic_lambda(B: WilsonBasis) -> np.ndarray:
    """``lam[j, l] = 1 / (1 + j)`` on admissible slots, independent of the channel."""
    j = np.arange(2 * B.K, dtype=float)[:, None]
    return np.where(B.mask, 1.0 / (1.0 + j), 0.0)


# (l1, j1, l2, j2) innermost-first: channel, then time, per factor
COUNTEREXAMPLE_PERMUTATION = Permutation((2, 4, 1, 3))


def sharpness_table(
    M: int = 4, Ks: Sequence[int] = (2, 4, 8, 16), relaxed: tuple[float, float] = (1.0, math.inf)
) -> list[SharpnessRow]:
    """Trace norm versus relaxed mixed norm of harmonic counterexamples.

    For each ``K`` the kernel built from :func:`harmonic_lambda` on the
    Wilson basis of size ``N = 2MK`` is measured in ``S_1``, in the Wilson
    coefficient norm with exponents ``(2, 2, 1, 1)`` (which equals ``S_1``),
    and with the relaxed outer exponents ``(2, 2) + relaxed``.
    """
    rows = []
    for K in Ks:
        N = 2 * M * K
        B = build_wilson_basis(N, M)
        lam = harmonic_lambda(B)
        k = build_counterexample(B, lam)
        W = tensor_wilson_coefficients(B, k)
        strict = mixed_norm(W, MixedNormSpec((2, 2, 1, 1), COUNTEREXAMPLE_PERMUTATION))
        loose = mixed_norm(W, MixedNormSpec((2, 2) + tuple(relaxed), COUNTEREXAMPLE_PERMUTATION))
        sv = singular_values(k)
        expected = np.sort(np.abs(lam[B.mask]))[::-1]
        rows.append(
            SharpnessRow(K, N, schatten_norm(k, 1), strict, loose, float(np.max(np.abs(sv - expected))))
        )
    return rows
