"""Pure-Python RK4 kernel; same contract as the compiled ``_rk4`` module."""
import numpy as np


def rk4_fourier(freqs, rows, cols, vals, fidx, psi0, t0, dt, nsteps, stride):
    if stride < 1 or nsteps < 0:
        raise ValueError("stride must be >= 1 and nsteps >= 0")
    freqs = np.asarray(freqs, dtype=float)
    d = len(psi0)
    mats = np.zeros((len(freqs), d, d), dtype=complex)
    np.add.at(mats, (fidx, rows, cols), vals)
    mats *= -1j

    nsamp = nsteps // stride + 1 + (1 if nsteps % stride else 0)
    out = np.empty((nsamp, d), dtype=complex)
    psi = np.array(psi0, dtype=complex)
    out[0] = psi
    h2, h6 = 0.5 * dt, dt / 6.0
    s = 1
    G0 = np.tensordot(np.exp(1j * freqs * t0), mats, axes=1)
    for i in range(nsteps):
        t = t0 + i * dt
        G1 = np.tensordot(np.exp(1j * freqs * (t + h2)), mats, axes=1)
        G2 = np.tensordot(np.exp(1j * freqs * (t + dt)), mats, axes=1)
        k1 = G0 @ psi
        k2 = G1 @ (psi + h2 * k1)
        k3 = G1 @ (psi + h2 * k2)
        k4 = G2 @ (psi + dt * k3)
        psi = psi + h6 * (k1 + 2 * k2 + 2 * k3 + k4)
        G0 = G2
        if (i + 1) % stride == 0 or i + 1 == nsteps:
            out[s] = psi
            s += 1
    return out
