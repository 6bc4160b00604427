"""Compiled inner loops for the deterministic and stochastic integrators.

Parameters are passed as a flat float64 vector laid out as
``(delta_omega1, delta_omega2, omega_b, gamma1, gamma2, gamma_b, g, omega_drive_amp)``
and states as a complex128 vector ``(a1, a2, b)``.
"""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def _deriv(p, a1, a2, b):
    d1, d2, wb, g1, g2, gb, g, om = p[0], p[1], p[2], p[3], p[4], p[5], p[6], p[7]
    da1 = -(1j * d1 + g1) * a1 - 1j * g * a2 * b - 1j * om
    da2 = -(1j * d2 + g2) * a2 - 1j * g * a1 * np.conj(b)
    db = -(1j * wb + gb) * b - 1j * g * a1 * np.conj(a2)
    return da1, da2, db


@njit(cache=True, nogil=True)
def rk4_run(p, y0, dt, n_steps, stride):
    """Classical RK4 from ``y0``; returns ``(samples, bad_step)``.

    ``samples[k]`` is the state after ``k * stride`` steps. ``bad_step`` is
    the first step index producing a non-finite state, or -1.
    """
    n_save = n_steps // stride + 1
    out = np.empty((n_save, 3), dtype=np.complex128)
    a1, a2, b = y0[0], y0[1], y0[2]
    out[0, 0], out[0, 1], out[0, 2] = a1, a2, b
    h2 = 0.5 * dt
    h6 = dt / 6.0
    k = 1
    for i in range(1, n_steps + 1):
        k1a, k1b, k1c = _deriv(p, a1, a2, b)
        k2a, k2b, k2c = _deriv(p, a1 + h2 * k1a, a2 + h2 * k1b, b + h2 * k1c)
        k3a, k3b, k3c = _deriv(p, a1 + h2 * k2a, a2 + h2 * k2b, b + h2 * k2c)
        k4a, k4b, k4c = _deriv(p, a1 + dt * k3a, a2 + dt * k3b, b + dt * k3c)
        a1 = a1 + h6 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a)
        a2 = a2 + h6 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b)
        b = b + h6 * (k1c + 2.0 * k2c + 2.0 * k3c + k4c)
        if not (np.isfinite(a1.real) and np.isfinite(a1.imag) and np.isfinite(a2.real)
                and np.isfinite(a2.imag) and np.isfinite(b.real) and np.isfinite(b.imag)):
            return out[:k], i
        if i % stride == 0:
            out[k, 0], out[k, 1], out[k, 2] = a1, a2, b
            k += 1
    return out[:k], -1


@njit(cache=True, nogil=True)
def em_chunk(p, y0, dt, sigma, xi, stride, offset):
    """Euler-Maruyama over ``len(xi)`` steps with pre-drawn normals.

    ``sigma`` holds the per-mode increment scale ``sqrt(2 gamma n dt / 2)``;
    ``xi`` has shape ``(n, 6)`` (re/im per mode). ``offset`` is the global
    index of the first step in this chunk, so samples land on multiples of
    ``stride`` across chunk boundaries. Returns ``(end_state, samples, bad_step)``.
    """
    n = xi.shape[0]
    first = (stride - offset % stride) % stride
    if first == 0:
        first = stride
    n_save = 0
    if n >= first:
        n_save = (n - first) // stride + 1
    out = np.empty((n_save, 3), dtype=np.complex128)
    a1, a2, b = y0[0], y0[1], y0[2]
    k = 0
    for i in range(n):
        da1, da2, db = _deriv(p, a1, a2, b)
        a1 = a1 + dt * da1 + sigma[0] * (xi[i, 0] + 1j * xi[i, 1])
        a2 = a2 + dt * da2 + sigma[1] * (xi[i, 2] + 1j * xi[i, 3])
        b = b + dt * db + sigma[2] * (xi[i, 4] + 1j * xi[i, 5])
        if not (np.isfinite(a1.real) and np.isfinite(a1.imag) and np.isfinite(a2.real)
                and np.isfinite(a2.imag) and np.isfinite(b.real) and np.isfinite(b.imag)):
            end = np.empty(3, dtype=np.complex128)
            end[0], end[1], end[2] = a1, a2, b
            return end, out[:k], offset + i + 1
        if (offset + i + 1) % stride == 0:
            out[k, 0], out[k, 1], out[k, 2] = a1, a2, b
            k += 1
    end = np.empty(3, dtype=np.complex128)
    end[0], end[1], end[2] = a1, a2, b
    return end, out[:k], -1
