import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mixmod import (
    CoeffArray,
    DimensionError,
    ZeroWindowError,
    dft,
    gaussian_window,
    istft_full,
    modulate,
    stft_full,
    tf_shift,
    translate,
)
from mixmod.tfcore import Axis, inner, stft_kernel

from conftest import cgauss


def brute_stft(f, g):
    n = f.size
    V = np.zeros((n, n), dtype=complex)
    for k in range(n):
        for l in range(n):
            elem = np.array([np.exp(2j * np.pi * l * t / n) * g[(t - k) % n] for t in range(n)])
            V[k, l] = np.sum(f * np.conj(elem))
    return V


def delta(n, i=0):
    e = np.zeros(n, dtype=complex)
    e[i] = 1
    return e


# translate / modulate / tf_shift

def test_translate_impulse():
    np.testing.assert_array_equal(translate(delta(4), 2), delta(4, 2))


def test_translate_identity_and_cycle(rng):
    f = cgauss(rng, 6)
    np.testing.assert_array_equal(translate(f, 0), f)
    np.testing.assert_array_equal(translate(f, 6), f)


def test_modulate_ones():
    np.testing.assert_allclose(modulate(np.ones(4), 1), [1, 1j, -1, -1j], atol=1e-15)


def test_modulate_trivial_cases(rng):
    f = cgauss(rng, 5)
    np.testing.assert_array_equal(modulate(f, 0), f)
    np.testing.assert_allclose(modulate(delta(5), 3), delta(5))


def test_tf_shift_impulse():
    np.testing.assert_allclose(tf_shift(delta(4), 1, 1), [0, 1j, 0, 0], atol=1e-15)


def test_tf_shift_order(rng):
    f = cgauss(rng, 8)
    np.testing.assert_allclose(tf_shift(f, 0, 0), f)
    np.testing.assert_allclose(tf_shift(tf_shift(f, 3, 0), 0, 5), tf_shift(f, 3, 5), atol=1e-13)


@settings(max_examples=40, deadline=None)
@given(n=st.integers(2, 32), x=st.integers(-70, 70), xi=st.integers(-70, 70), seed=st.integers(0, 2**32 - 1))
def test_unitarity_and_commutation(n, x, xi, seed):
    f = cgauss(np.random.default_rng(seed), n)
    nf = np.linalg.norm(f)
    for h in (translate(f, x), modulate(f, xi), tf_shift(f, x, xi), dft(f)):
        assert abs(np.linalg.norm(h) - nf) <= 1e-12 * max(nf, 1)
    lhs = modulate(translate(f, x), xi)
    rhs = np.exp(2j * np.pi * x * xi / n) * translate(modulate(f, xi), x)
    np.testing.assert_allclose(lhs, rhs, atol=1e-12 * max(nf, 1))


# dft

def test_dft_examples(rng):
    np.testing.assert_allclose(dft(delta(4)), 0.5 * np.ones(4), atol=1e-15)
    np.testing.assert_allclose(dft(np.ones(4)), 2 * delta(4), atol=1e-15)
    f = cgauss(rng, 9)
    np.testing.assert_allclose(dft(dft(f), "inverse"), f, atol=1e-12)
    with pytest.raises(ValueError):
        dft(f, "sideways")


def test_dft_matches_definition(rng):
    n = 7
    f = cgauss(rng, n)
    t = np.arange(n)
    F = np.exp(-2j * np.pi * np.outer(t, t) / n) @ f / np.sqrt(n)
    np.testing.assert_allclose(dft(f), F, atol=1e-12)


# stft

def test_stft_matches_brute_force(rng):
    f, g = cgauss(rng, 4), cgauss(rng, 4)
    V = stft_full(f, g)
    np.testing.assert_allclose(V.values, brute_stft(f, g), atol=1e-12)
    assert [(a.role, a.var, a.extent) for a in V.axes] == [("time", 1, 4), ("frequency", 1, 4)]


def test_stft_delta_window(rng):
    f = cgauss(rng, 6)
    V = stft_full(f, delta(6)).values
    np.testing.assert_allclose(np.abs(V), np.repeat(np.abs(f)[:, None], 6, axis=1), atol=1e-12)


def test_stft_orthogonality_brute(rng):
    f, g = cgauss(rng, 4), cgauss(rng, 4)
    V = brute_stft(f, g)
    total = sum(abs(V[k, l]) ** 2 for k in range(4) for l in range(4))
    lhs = stft_full(f, g).energy()
    assert abs(lhs - total) <= 1e-10 * total
    assert abs(lhs - 4 * np.linalg.norm(f) ** 2 * np.linalg.norm(g) ** 2) <= 1e-10 * lhs


def test_stft_impulse_gaussian():
    g = gaussian_window(8)
    V = np.abs(stft_full(delta(8), g).values)
    for k in range(8):
        np.testing.assert_allclose(V[k], abs(g[(-k) % 8]), atol=1e-14)


@pytest.mark.parametrize("n", [8, 16, 32])
def test_orthogonality_relation_and_reconstruction(n, rng):
    g = gaussian_window(n)
    for _ in range(100):
        f = cgauss(rng, n)
        psi = cgauss(rng, n)
        V = stft_full(f, g)
        ref = n * np.linalg.norm(f) ** 2
        assert abs(V.energy() - ref) <= 1e-10 * ref
        rec = istft_full(V, g, psi)
        target = inner(psi, g) * f
        assert np.linalg.norm(rec - target) <= 1e-10 * np.linalg.norm(target)


def test_istft_examples(rng):
    n = 4
    f, g = cgauss(rng, n), gaussian_window(n)
    np.testing.assert_allclose(istft_full(stft_full(f, g), g, g), f, atol=1e-12)
    # psi orthogonal to g
    psi = cgauss(rng, n)
    psi -= inner(psi, g) * g
    np.testing.assert_allclose(istft_full(stft_full(f, g), g, psi), 0, atol=1e-12)
    zero = CoeffArray((Axis("time", 1, n), Axis("frequency", 1, n)), np.zeros((n, n)))
    np.testing.assert_array_equal(istft_full(zero, g, g), 0)


def test_istft_errors(rng):
    f = cgauss(rng, 4)
    V = stft_full(f, gaussian_window(4))
    with pytest.raises(ZeroWindowError):
        istft_full(V, np.zeros(4), gaussian_window(4))
    with pytest.raises(DimensionError):
        istft_full(V, gaussian_window(8), gaussian_window(8))
    with pytest.raises(DimensionError):
        stft_full(f, gaussian_window(5))


def test_stft_covariance(rng):
    n, a, b = 12, 5, 7
    f, g = cgauss(rng, n), gaussian_window(n)
    V = np.abs(stft_full(f, g).values)
    W = np.abs(stft_full(tf_shift(f, a, b), g).values)
    np.testing.assert_allclose(W, np.roll(V, (a, b), axis=(0, 1)), atol=1e-12)


def test_stft_kernel_brute(rng):
    n = 3
    k, Phi = cgauss(rng, (n, n)), cgauss(rng, (n, n))
    V = stft_kernel(k, Phi).values
    t = np.arange(n)
    for x1, x2, z1, z2 in np.ndindex(n, n, n, n):
        elem = np.exp(2j * np.pi * (z1 * t[:, None] + z2 * t[None, :]) / n) * Phi[
            (t[:, None] - x1) % n, (t[None, :] - x2) % n
        ]
        assert abs(V[x1, x2, z1, z2] - np.sum(k * np.conj(elem))) <= 1e-12


# gaussian window

def test_gaussian_window():
    g = gaussian_window(16)
    assert g[1] == g[15]
    assert np.all(g[1:] == g[:0:-1])
    assert abs(np.linalg.norm(g) - 1) <= 1e-12
    assert np.argmax(g) == 0 and np.all(g > 0)
    # defining sum evaluated independently
    t = np.arange(16)
    ref = sum(np.exp(-np.pi * (t - j * 16) ** 2 / 16) for j in range(-3, 4))
    np.testing.assert_allclose(g, ref / np.linalg.norm(ref), rtol=1e-14)
    with pytest.raises(ValueError):
        gaussian_window(1)


def test_signal_validation():
    with pytest.raises(ValueError):
        translate(np.array([1.0, np.nan]), 1)
    with pytest.raises(ValueError):
        CoeffArray((Axis("time", 1, 2), Axis("time", 1, 2)), np.zeros((2, 2)))
    with pytest.raises(ValueError):
        CoeffArray((Axis("time", 1, 2),), np.zeros(3))
