"""Discrete-Fourier helpers for uniformly sampled real signals."""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError


def _spacing(times) -> float:
    times = np.asarray(times, dtype=float)
    if times.size < 4:
        raise DomainError("need at least 4 samples")
    dt = np.diff(times)
    step = dt.mean()
    if np.max(np.abs(dt - step)) > 1e-6 * step:
        raise DomainError("samples must be uniformly spaced")
    return float(step)


def _parabolic(mag, k):
    # vertex offset of the parabola through bins k-1, k, k+1
    if k <= 0 or k >= mag.size - 1:
        return 0.0
    a, b, c = mag[k - 1], mag[k], mag[k + 1]
    denom = a - 2 * b + c
    return 0.0 if denom == 0 else 0.5 * (a - c) / denom


def dominant_frequency(times, signal, pad: int = 8) -> float:
    """Angular frequency of the strongest non-DC line.

    The mean is removed, the series zero-padded by ``pad`` and the peak bin
    refined by parabolic interpolation. Returns ``nan`` for a constant
    signal.
    """
    dt = _spacing(times)
    x = np.asarray(signal, dtype=float)
    x = x - x.mean()
    if not np.any(np.abs(x) > 1e-14):
        return math.nan
    n = pad * x.size
    mag = np.abs(np.fft.rfft(x, n=n))
    k = int(np.argmax(mag[1:])) + 1
    return 2 * math.pi * (k + _parabolic(mag, k)) / (n * dt)


def power_spectrum(times, signal, pad: int = 8):
    """Hann-windowed, zero-padded power spectrum.

    Returns ``(omega, power, bin_width)`` where ``bin_width`` is the natural
    resolution ``2 pi / (N dt)`` of the unpadded record.
    """
    dt = _spacing(times)
    x = np.asarray(signal, dtype=float)
    x = (x - x.mean()) * np.hanning(x.size)
    n = pad * x.size
    power = np.abs(np.fft.rfft(x, n=n)) ** 2
    omega = 2 * math.pi * np.fft.rfftfreq(n, d=dt)
    return omega, power, 2 * math.pi / (x.size * dt)


def refine_peak(omega, power, k: int) -> float:
    """Parabolic sub-bin position of the peak at index ``k``."""
    return float(omega[k] + _parabolic(power, k) * (omega[1] - omega[0]))


def period_average(signal, samples_per_period: int) -> np.ndarray:
    """Centred running mean over one period (trapezoidal weights).

    ``samples_per_period`` must be even; the result drops
    ``samples_per_period // 2`` samples at each end.
    """
    n = int(samples_per_period)
    if n < 2 or n % 2:
        raise DomainError("samples_per_period must be an even integer >= 2")
    x = np.asarray(signal, dtype=float)
    if x.size <= n:
        raise DomainError("signal shorter than one period")
    w = np.ones(n + 1)
    w[0] = w[-1] = 0.5
    return np.convolve(x, w / n, mode="valid")
