"""Discrete Fourier transforms: radix-2 decimation in time and a direct sum.

Both use the unnormalized forward convention
``X[k] = sum_n x[n] exp(-2j pi k n / N)``; the inverse carries ``1/N``.
Transforms act along the last axis.
"""

import numpy as np


def is_power_of_two(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


def bit_reverse_indices(n: int) -> np.ndarray:
    bits = n.bit_length() - 1
    idx = np.arange(n)
    rev = np.zeros(n, dtype=int)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    return rev


def dft(x) -> np.ndarray:
    """O(N^2) reference transform, any length."""
    x = np.asarray(x, dtype=complex)
    n = x.shape[-1]
    k = np.arange(n)
    W = np.exp(-2j * np.pi * np.outer(k, k) / n)
    return x @ W.T


def fft_radix2(x) -> np.ndarray:
    """Iterative Cooley-Tukey transform; length must be a power of two."""
    x = np.asarray(x, dtype=complex)
    n = x.shape[-1]
    if not is_power_of_two(n):
        raise ValueError(f"radix-2 transform needs a power-of-two length, got {n}")
    a = x[..., bit_reverse_indices(n)].copy()
    size = 2
    while size <= n:
        half = size // 2
        tw = np.exp(-2j * np.pi * np.arange(half) / size)
        blocks = a.reshape(a.shape[:-1] + (n // size, size))
        even = blocks[..., :half].copy()
        odd = blocks[..., half:] * tw
        blocks[..., :half] = even + odd
        blocks[..., half:] = even - odd
        a = blocks.reshape(a.shape)
        size *= 2
    return a


def fft(x) -> np.ndarray:
    """Radix-2 when the length allows it, direct sum otherwise."""
    x = np.asarray(x, dtype=complex)
    if is_power_of_two(x.shape[-1]):
        return fft_radix2(x)
    return dft(x)


def ifft(X) -> np.ndarray:
    X = np.asarray(X, dtype=complex)
    return np.conj(fft(np.conj(X))) / X.shape[-1]
