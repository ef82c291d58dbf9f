"""Compiled optical Bloch equation kernels.

Conventions (hbar = 1 inside the kernels):

* Rotating-frame Hamiltonian H = -Delta |e><e| + (Omega/2)|e><g| + h.c.,
  with Delta the carrier detuning and Omega(z, t) the complex Rabi coupling.
* Bloch vector u = 2 Re rho_eg, v = 2 Im rho_eg, w = rho_ee - rho_gg.
* Relaxation by spontaneous decay at rate gamma (coherences at gamma/2).
* Force F = -<dH/dz> = -(1/2) Re[(dOmega/dz) (u - i v)].

With these choices a resonant traveling wave of Rabi frequency Omega has
the steady state w = -1/(1 + s), s = 2 Omega^2 / gamma^2, and pushes with
F = (k gamma / 2) s / (1 + s).
"""

import math

import numpy as np
from numba import njit

MODE_BICHROMATIC = 0
MODE_SINGLE = 1

STATUS_OK = 0
STATUS_STEP_UNDERFLOW = 1
STATUS_MAX_STEPS = 2
STATUS_NONFINITE = 3


@njit(cache=True)
def coupling(z, t, k, delta, omega_r, phase, mode):
    """Return (Re Omega, Im Omega, Re dOmega/dz, Im dOmega/dz).

    Bichromatic mode: two beams, each carrying omega +- delta at Rabi
    amplitude omega_r per frequency component,

        Omega = 2 omega_r [exp(ikz) cos(delta t) + exp(-ikz) cos(delta t - phase/2)],

    so ``phase`` is the relative beat phase measured on the beat period
    pi/delta (phase = pi/2 delays the -k pulses by a quarter beat period).
    Single mode: one traveling wave omega_r exp(ikz).
    """
    ckz = math.cos(k * z)
    skz = math.sin(k * z)
    if mode == MODE_SINGLE:
        return omega_r * ckz, omega_r * skz, -omega_r * k * skz, omega_r * k * ckz
    ca = 2.0 * omega_r * math.cos(delta * t)
    cb = 2.0 * omega_r * math.cos(delta * t - 0.5 * phase)
    return (ckz * (ca + cb), skz * (ca - cb),
            -k * skz * (ca + cb), k * ckz * (ca - cb))


@njit(cache=True)
def bloch_rhs(t, u, v, w, z, k, gamma, delta, omega_r, phase, detuning, mode):
    """(du, dv, dw, F) at time t for an atom at position z."""
    ore, oim, gre, gim = coupling(z, t, k, delta, omega_r, phase, mode)
    du = -detuning * v - oim * w - 0.5 * gamma * u
    dv = detuning * u + ore * w - 0.5 * gamma * v
    dw = oim * u - ore * v - gamma * (w + 1.0)
    force = -0.5 * (gre * u + gim * v)
    return du, dv, dw, force


@njit(cache=True)
def _eval(t, y, z0, vel, k, gamma, delta, omega_r, phase, detuning, mode, out):
    du, dv, dw, f = bloch_rhs(t, y[0], y[1], y[2], z0 + vel * t,
                              k, gamma, delta, omega_r, phase, detuning, mode)
    out[0] = du
    out[1] = dv
    out[2] = dw
    out[3] = f


# Dormand-Prince 5(4) tableau
_C2, _C3, _C4, _C5 = 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0
_A21 = 1.0 / 5.0
_A31, _A32 = 3.0 / 40.0, 9.0 / 40.0
_A41, _A42, _A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
_A51, _A52, _A53, _A54 = 19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0
_A61, _A62, _A63, _A64, _A65 = (9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0,
                                49.0 / 176.0, -5103.0 / 18656.0)
_B1, _B3, _B4, _B5, _B6 = 35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0
_E1, _E3, _E4, _E5, _E6, _E7 = (71.0 / 57600.0, -71.0 / 16695.0, 71.0 / 1920.0,
                                -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0)


@njit(cache=True)
def integrate_force(bounds, y0, z0, vel, k, gamma, delta, omega_r, phase, detuning, mode,
                    rtol, atol, h0, max_steps):
    """Integrate the Bloch equations plus the running force integral.

    Steps are clipped so that every entry of ``bounds`` is hit exactly; the
    force integral is recorded there. Returns (force_integral, y_final,
    max_bloch_radius_sq, status, t_fail, h_fail, accepted, rejected).
    """
    nb = bounds.shape[0]
    record = np.zeros(nb)
    y = y0.copy()
    y[3] = 0.0
    ys = np.empty(4)
    yn = np.empty(4)
    k1 = np.empty(4)
    k2 = np.empty(4)
    k3 = np.empty(4)
    k4 = np.empty(4)
    k5 = np.empty(4)
    k6 = np.empty(4)
    k7 = np.empty(4)
    t = bounds[0]
    h = h0
    hmin = 1e-13 * max(abs(bounds[nb - 1] - bounds[0]), 1.0)
    accepted = 0
    rejected = 0
    rmax = y[0] * y[0] + y[1] * y[1] + y[2] * y[2]
    _eval(t, y, z0, vel, k, gamma, delta, omega_r, phase, detuning, mode, k1)
    for i in range(1, nb):
        tend = bounds[i]
        while t < tend:
            if accepted + rejected >= max_steps:
                return record, y, rmax, STATUS_MAX_STEPS, t, h, accepted, rejected
            last = t + h >= tend
            hh = tend - t if last else h
            for j in range(4):
                ys[j] = y[j] + hh * _A21 * k1[j]
            _eval(t + _C2 * hh, ys, z0, vel, k, gamma, delta, omega_r, phase, detuning, mode, k2)
            for j in range(4):
                ys[j] = y[j] + hh * (_A31 * k1[j] + _A32 * k2[j])
            _eval(t + _C3 * hh, ys, z0, vel, k, gamma, delta, omega_r, phase, detuning, mode, k3)
            for j in range(4):
                ys[j] = y[j] + hh * (_A41 * k1[j] + _A42 * k2[j] + _A43 * k3[j])
            _eval(t + _C4 * hh, ys, z0, vel, k, gamma, delta, omega_r, phase, detuning, mode, k4)
            for j in range(4):
                ys[j] = y[j] + hh * (_A51 * k1[j] + _A52 * k2[j] + _A53 * k3[j] + _A54 * k4[j])
            _eval(t + _C5 * hh, ys, z0, vel, k, gamma, delta, omega_r, phase, detuning, mode, k5)
            for j in range(4):
                ys[j] = y[j] + hh * (_A61 * k1[j] + _A62 * k2[j] + _A63 * k3[j]
                                     + _A64 * k4[j] + _A65 * k5[j])
            _eval(t + hh, ys, z0, vel, k, gamma, delta, omega_r, phase, detuning, mode, k6)
            for j in range(4):
                yn[j] = y[j] + hh * (_B1 * k1[j] + _B3 * k3[j] + _B4 * k4[j]
                                     + _B5 * k5[j] + _B6 * k6[j])
            _eval(t + hh, yn, z0, vel, k, gamma, delta, omega_r, phase, detuning, mode, k7)
            err = 0.0
            for j in range(4):
                ej = hh * (_E1 * k1[j] + _E3 * k3[j] + _E4 * k4[j] + _E5 * k5[j]
                           + _E6 * k6[j] + _E7 * k7[j])
                sc = atol + rtol * max(abs(y[j]), abs(yn[j]))
                err += (ej / sc) ** 2
            err = math.sqrt(err / 4.0)
            if not math.isfinite(err):
                return record, y, rmax, STATUS_NONFINITE, t, hh, accepted, rejected
            if err <= 1.0:
                t = tend if last else t + hh
                for j in range(4):
                    y[j] = yn[j]
                    k1[j] = k7[j]
                accepted += 1
                r = y[0] * y[0] + y[1] * y[1] + y[2] * y[2]
                if r > rmax:
                    rmax = r
                if err == 0.0:
                    fac = 5.0
                else:
                    fac = min(5.0, max(0.2, 0.9 * err ** -0.2))
                if not last:
                    h = hh * fac
                elif fac < 1.0:
                    h = min(h, hh * fac)
            else:
                rejected += 1
                h = hh * max(0.2, 0.9 * err ** -0.2)
                if h < hmin:
                    return record, y, rmax, STATUS_STEP_UNDERFLOW, t, h, accepted, rejected
        record[i] = y[3]
    return record, y, rmax, STATUS_OK, t, h, accepted, rejected
