"""Weights, coordinate permutations and iterated mixed norms on labelled arrays.

Conventions
-----------
* Permutations are 1-based: ``Permutation((2, 4, 1, 3))`` has ``c(1) = 2``.
  Precomposition ``V o c`` reads ``B[x_1..x_m] = A[x_c(1), .., x_c(m)]``.
* The mixed norm iterates from the first axis (innermost, exponent ``p_1``)
  to the last (outermost, ``p_m``) of the permuted array.
* Weights see centered indices: position ``i`` on an axis of extent ``E``
  maps to ``i - E // 2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .exceptions import DimensionError, ParameterRegionError
from .tfcore import TIME, Axis, CoeffArray, stft_full, stft_kernel

INF = math.inf


# --------------------------------------------------------------------------
# weights

@dataclass(frozen=True)
class Weight:
    """Positive weight on Z^m.

    ``kind`` is ``"one"``, ``"poly"`` (``(1 + |z|)^s``, Euclidean ``|z|``) or
    ``"custom"`` (``func`` maps an ``(..., m)`` integer array to values).
    ``axes`` restricts the weight to a subset of coordinates (0-based); the
    remaining coordinates are ignored.
    """

    kind: str = "one"
    s: float = 0.0
    func: Callable | None = None
    arity: int | None = None
    axes: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.kind not in ("one", "poly", "custom"):
            raise ValueError(f"unknown weight kind {self.kind!r}")
        if self.kind == "custom" and self.func is None:
            raise ValueError("custom weights need a func")
        if self.axes is not None:
            object.__setattr__(self, "axes", tuple(int(a) for a in self.axes))

    @classmethod
    def one(cls) -> "Weight":
        return cls("one")

    @classmethod
    def poly(cls, s: float, axes: Sequence[int] | None = None) -> "Weight":
        return cls("poly", float(s), axes=None if axes is None else tuple(axes))

    @classmethod
    def custom(cls, func: Callable, arity: int | None = None) -> "Weight":
        return cls("custom", func=func, arity=arity)

    def reciprocal(self) -> "Weight":
        """``1 / w``."""
        if self.kind == "one":
            return self
        if self.kind == "poly":
            return Weight("poly", -self.s, axes=self.axes)
        f = self.func
        return Weight("custom", func=lambda z: 1.0 / f(z), arity=self.arity, axes=self.axes)

    def _check_arity(self, m: int) -> None:
        if self.arity is not None and self.arity != m:
            raise DimensionError(f"weight has arity {self.arity}, got index vectors of length {m}")
        if self.axes is not None and any(a < 0 or a >= m for a in self.axes):
            raise DimensionError(f"weight axes {self.axes} out of range for arity {m}")

    def evaluate(self, z: np.ndarray) -> np.ndarray:
        """Evaluate on an ``(..., m)`` array of centered integer indices."""
        z = np.asarray(z)
        self._check_arity(z.shape[-1])
        if self.axes is not None:
            z = z[..., list(self.axes)]
        if self.kind == "one":
            return np.ones(z.shape[:-1])
        if self.kind == "poly":
            r = np.sqrt(np.sum(np.asarray(z, dtype=float) ** 2, axis=-1))
            return (1.0 + r) ** self.s
        return np.asarray(self.func(z), dtype=float)

    def grid(self, shape: Sequence[int]) -> np.ndarray:
        """Weight values at every position of an array of the given shape."""
        if self.kind == "one":
            self._check_arity(len(shape))
            return np.ones(shape)
        idx = np.stack(
            np.meshgrid(*[np.arange(e) - e // 2 for e in shape], indexing="ij"), axis=-1
        )
        return self.evaluate(idx)


def weight_eval(w: Weight, z: Sequence[int]) -> float:
    """Weight at one centered index vector."""
    return float(w.evaluate(np.asarray(z)[None, :])[0])


def centered_position(index: Sequence[int], shape: Sequence[int]) -> tuple[int, ...]:
    """Array position of a centered index vector (inverse of the centering map)."""
    return tuple(int(i) + e // 2 for i, e in zip(index, shape))


class WeightLawReport(NamedTuple):
    submultiplicative_ratio: float
    moderate_constant: float
    moderate_by_radius: tuple[float, ...]
    appears_bounded: bool


def check_weight_laws(
    w: Weight, v: Weight, samples: int = 2000, seed: int = 0, *, arity: int = 2, radius: int = 8
) -> WeightLawReport:
    """Randomized check of ``v`` submultiplicative and ``w`` ``v``-moderate.

    For each box radius ``r = 1..radius`` pairs ``z1, z2`` are drawn from
    ``[-r, r]^m``; the axis probes ``z1 = z2 = (r, 0, ..)`` and ``z1 = 0`` are
    always included. Reports the worst ``v(z1+z2) / (v(z1) v(z2))``, the
    smallest feasible moderateness constant, and its growth with ``r``.
    """
    rng = np.random.Generator(np.random.Philox(seed))
    per = max(1, samples // radius)
    sub_worst = 0.0
    by_radius = []
    for r in range(1, radius + 1):
        z1 = rng.integers(-r, r + 1, size=(per, arity))
        z2 = rng.integers(-r, r + 1, size=(per, arity))
        probe = np.zeros((2, arity), dtype=int)
        probe[0, 0] = r
        z1 = np.vstack([z1, probe[:1], np.zeros((1, arity), dtype=int)])
        z2 = np.vstack([z2, probe[:1], probe[:1]])
        vs = v.evaluate(z1 + z2) / (v.evaluate(z1) * v.evaluate(z2))
        ws = w.evaluate(z1 + z2) / (v.evaluate(z1) * w.evaluate(z2))
        sub_worst = max(sub_worst, float(np.max(vs)))
        by_radius.append(max(float(np.max(ws)), by_radius[-1] if by_radius else 0.0))
    half = by_radius[len(by_radius) // 2 - 1] if len(by_radius) > 1 else by_radius[0]
    return WeightLawReport(sub_worst, by_radius[-1], tuple(by_radius), by_radius[-1] <= 1.01 * half)


# --------------------------------------------------------------------------
# permutations

@dataclass(frozen=True)
class Permutation:
    """Bijection of ``{1..m}`` given by its image ``(c(1), .., c(m))``."""

    image: tuple[int, ...]

    def __post_init__(self):
        image = tuple(int(i) for i in self.image)
        if sorted(image) != list(range(1, len(image) + 1)):
            raise ValueError(f"{image} is not a permutation of 1..{len(image)}")
        object.__setattr__(self, "image", image)

    @classmethod
    def identity(cls, m: int) -> "Permutation":
        return cls(tuple(range(1, m + 1)))

    @property
    def arity(self) -> int:
        return len(self.image)

    def __call__(self, i: int) -> int:
        return self.image[i - 1]

    def inverse(self) -> "Permutation":
        inv = [0] * self.arity
        for i, ci in enumerate(self.image, start=1):
            inv[ci - 1] = i
        return Permutation(tuple(inv))

    def apply(self, x: Sequence) -> tuple:
        """``c(x)_i = x_{c(i)}``."""
        if len(x) != self.arity:
            raise DimensionError(f"vector of length {len(x)} for arity-{self.arity} permutation")
        return tuple(x[ci - 1] for ci in self.image)


def permute_axes(A: CoeffArray, c: Permutation) -> CoeffArray:
    """Reorder axes so that storage order enumerates ``A o c``.

    Axis ``j`` of the result is axis ``c^{-1}(j)`` of ``A``.
    """
    if c.arity != A.ndim:
        raise DimensionError(f"permutation arity {c.arity} != array rank {A.ndim}")
    order = [i - 1 for i in c.inverse().image]
    mask = None if A.mask is None else A.mask.transpose(order)
    return CoeffArray(tuple(A.axes[i] for i in order), A.values.transpose(order), mask)


def is_slice_permutation(c: Permutation, d: int) -> bool:
    """True iff ``c`` sends the first variable's slots into ``{1..2d}``.

    Precisely: ``c({1..d} u {2d+1..3d}) = {1..2d}`` and
    ``c({d+1..2d} u {3d+1..4d}) = {2d+1..4d}``.
    """
    if c.arity != 4 * d:
        raise DimensionError(f"slice permutations need arity 4d = {4 * d}, got {c.arity}")
    first = list(range(1, d + 1)) + list(range(2 * d + 1, 3 * d + 1))
    return sorted(c(i) for i in first) == list(range(1, 2 * d + 1))


# --------------------------------------------------------------------------
# mixed norms

@dataclass(frozen=True)
class MixedNormSpec:
    exponents: tuple[float, ...]
    permutation: Permutation | None = None
    weight: Weight = Weight()

    def __post_init__(self):
        exps = tuple(float(p) for p in self.exponents)
        if any(not p >= 1 for p in exps):
            raise ValueError(f"exponents must lie in [1, inf], got {exps}")
        object.__setattr__(self, "exponents", exps)
        perm = self.permutation or Permutation.identity(len(exps))
        if perm.arity != len(exps):
            raise DimensionError("permutation arity differs from the number of exponents")
        object.__setattr__(self, "permutation", perm)

    @property
    def arity(self) -> int:
        return len(self.exponents)


def lp_reduce(x: np.ndarray, p: float, axis: int = 0) -> np.ndarray:
    """``l^p`` norm of ``|x|`` along one axis (exact supremum for ``p = inf``)."""
    a = np.abs(x)
    if p == INF:
        return np.max(a, axis=axis)
    if p == 1:
        return np.sum(a, axis=axis)
    if p == 2:
        return np.sqrt(np.sum(a * a, axis=axis))
    scale = np.max(a, axis=axis, keepdims=True)
    safe = np.where(scale > 0, scale, 1.0)
    return np.squeeze(safe, axis) * np.sum((a / safe) ** p, axis=axis) ** (1.0 / p)


def iterated_norm(values: np.ndarray, exponents: Sequence[float]) -> float:
    """Iterated norm with axis 0 innermost; no permutation or weight."""
    x = np.abs(np.asarray(values))
    if x.ndim != len(exponents):
        raise DimensionError(f"{x.ndim}-axis array for {len(exponents)} exponents")
    for p in exponents:
        x = lp_reduce(x, p, axis=0)
    return float(x)


def mixed_norm(A, spec: MixedNormSpec) -> float:
    """Weighted iterated norm of ``A o c``.

    ``A`` may be a :class:`CoeffArray` or a plain array (treated as
    unlabelled, unmasked). Structural zeros of masked arrays are excluded.
    """
    if not isinstance(A, CoeffArray):
        A = _unlabelled(np.asarray(A))
    if A.ndim != spec.arity:
        raise DimensionError(f"spec arity {spec.arity} != array rank {A.ndim}")
    B = permute_axes(A, spec.permutation)
    x = np.abs(B.masked_values())
    if spec.weight.kind != "one":
        x = x * spec.weight.grid(x.shape)
    return iterated_norm(x, spec.exponents)


def _unlabelled(values: np.ndarray) -> CoeffArray:
    return CoeffArray(tuple(Axis(TIME, i + 1, e) for i, e in enumerate(values.shape)), values)


def conjugate_exponent(p: float) -> float:
    if p == 1:
        return INF
    if p == INF:
        return 1.0
    return p / (p - 1.0)


def holder_pairing(A, B, spec: MixedNormSpec) -> tuple[float, float]:
    """``(|sum A conj(B)|, ||A||_{p,c,w} * ||B||_{p',c,1/w})``."""
    a = A.masked_values() if isinstance(A, CoeffArray) else np.asarray(A)
    b = B.masked_values() if isinstance(B, CoeffArray) else np.asarray(B)
    dual = MixedNormSpec(
        tuple(conjugate_exponent(p) for p in spec.exponents),
        spec.permutation,
        spec.weight.reciprocal(),
    )
    return abs(complex(np.vdot(b, a))), mixed_norm(A, spec) * mixed_norm(B, dual)


# --------------------------------------------------------------------------
# modulation norms

def modulation_norm_full(f, g, spec: MixedNormSpec) -> float:
    """Mixed modulation norm from the full-grid STFT.

    A 1-D ``f`` (signal) needs a 2-exponent spec; a 2-D ``f`` (kernel) needs
    4 exponents, with STFT axes ordered ``(time,1), (time,2), (frequency,1),
    (frequency,2)`` before the permutation acts. For kernels a 1-D window
    ``g`` is promoted to ``g (x) conj(g)``.
    """
    f = np.asarray(f)
    if f.ndim == 1:
        if spec.arity != 2:
            raise DimensionError("signals need a spec of arity 2")
        return mixed_norm(stft_full(f, g), spec)
    if f.ndim == 2:
        if spec.arity != 4:
            raise DimensionError("kernels need a spec of arity 4")
        return mixed_norm(stft_kernel(f, g), spec)
    raise DimensionError(f"expected a signal or a kernel, got shape {f.shape}")


def modulation_norm_lattice(f, sys, spec: MixedNormSpec) -> float:
    """Mixed norm of the lattice Gabor coefficients of ``f``."""
    from .frames import gabor_analysis

    if spec.arity != 2:
        raise DimensionError("lattice modulation norms need a spec of arity 2")
    return mixed_norm(gabor_analysis(sys, f), spec)


# --------------------------------------------------------------------------
# the l^{2,2}_{v_s} -> l^{2,p} embedding

class EmbeddingConstant(NamedTuple):
    value: float
    """Hoelder constant for arrays whose outer support lies in the truncation box."""
    upper: float
    """Certified bound on the constant over the whole lattice Z^{2d}."""
    q: float
    tail_bound: float
    truncation: int


def _lattice_decay_sum(D: int, sigma: float, radius: int) -> float:
    """``sum_{|n|_inf <= radius} (1 + |n|)^-sigma`` over Z^D."""
    axis = np.arange(-radius, radius + 1, dtype=float)
    r2 = np.zeros(())
    for _ in range(D):
        r2 = np.add.outer(r2, axis * axis)
    return float(np.sum((1.0 + np.sqrt(r2)) ** -sigma))


def embedding_constant(d: int, s: float, p: float, truncation: int = 32) -> EmbeddingConstant:
    """Constant ``C`` with ``||x||_{l^{2,p}} <= C ||x||_{l^{2,2}_{v_s}}``.

    ``C = ||(1 + |n|)^-s||_{l^q}`` with ``q = 2p / (2 - p)``, summed over the
    centered box ``|n|_inf <= truncation`` of Z^{2d}. The tail outside the
    box is bounded by shells: a shell ``|n|_inf = r`` holds at most
    ``2D (2r+1)^(D-1)`` points with ``|n| >= r``, giving
    ``tail <= D 2^D (R+1)^(D - qs) / (qs - D)`` for ``D = 2d``.

    Raises
    ------
    ParameterRegionError
        Unless ``1 <= p <= 2``, ``s >= 0`` and ``p > 2d / (d + s)``.
    """
    if d < 1 or truncation < 0:
        raise ValueError("need d >= 1 and a nonnegative truncation")
    if not (1 <= p <= 2) or s < 0:
        raise ParameterRegionError(f"need 1 <= p <= 2 and s >= 0, got p={p}, s={s}")
    if not p * (d + s) > 2 * d:
        raise ParameterRegionError(
            f"p={p} <= 2d/(d+s)={2 * d / (d + s)}: the weighted sum diverges, no finite constant"
        )
    if p == 2:
        return EmbeddingConstant(1.0, 1.0, INF, 0.0, truncation)
    q = 2 * p / (2 - p)
    D = 2 * d
    sigma = q * s
    partial = _lattice_decay_sum(D, sigma, truncation)
    tail = D * 2.0**D * (truncation + 1.0) ** (D - sigma) / (sigma - D)
    return EmbeddingConstant(partial ** (1 / q), (partial + tail) ** (1 / q), q, tail, truncation)


class WitnessRow(NamedTuple):
    radius: int
    weighted_norm: float
    lp_norm: float


def witness_decay(d: int, s: float, p: float) -> float:
    """Decay exponent halfway inside ``(2d/p, d + s)``.

    ``y_n = (1 + |n|)^-alpha`` is in ``l^p(Z^{2d})`` iff ``alpha p > 2d`` and
    in ``l^2_{v_s}`` iff ``alpha > d + s``; the midpoint keeps both gaps open.
    """
    if not p * (d + s) > 2 * d:
        raise ParameterRegionError("no witness outside the embedding region")
    return 0.5 * (2 * d / p + d + s)


def witness_table(d: int, s: float, p: float, radii: Sequence[int], alpha: float | None = None):
    """Truncated norms of the witness ``x(m, n) = delta_{m,0} (1 + |n|)^-alpha``.

    Returns rows ``(R, ||x||_{l^{2,2}_{v_s}}, ||x||_{l^{2,p}})`` over the box
    ``|n|_inf <= R``. The first grows without bound, the second converges.
    """
    if alpha is None:
        alpha = witness_decay(d, s, p)
    rows = []
    for R in radii:
        weighted = _lattice_decay_sum(2 * d, 2 * (alpha - s), R) ** 0.5
        plain = _lattice_decay_sum(2 * d, alpha * p, R) ** (1 / p)
        rows.append(WitnessRow(int(R), weighted, plain))
    return rows
