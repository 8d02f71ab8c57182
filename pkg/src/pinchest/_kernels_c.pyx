# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for dictionary construction and correlation scans.

Signature-compatible with _kernels_np; atom matrices are atom-major
(one row per grid value).
"""

import numpy as np

from libc.math cimport cos, sin, sqrt

cdef double TWO_PI = 6.283185307179586476925287


def first_order_atoms(double wavelength, double[::1] positions, double[::1] angles):
    cdef Py_ssize_t n_pos = positions.shape[0]
    cdef Py_ssize_t n_ang = angles.shape[0]
    out = np.empty((n_ang, n_pos), dtype=np.complex128)
    cdef double complex[:, ::1] o = out
    cdef double k = TWO_PI / wavelength
    cdef Py_ssize_t i, j
    cdef double s, ph
    for j in range(n_ang):
        s = k * sin(angles[j])
        for i in range(n_pos):
            ph = s * positions[i]
            o[j, i] = cos(ph) + 1j * sin(ph)
    return out


def second_order_atoms(double wavelength, double[::1] positions, double[::1] angles,
                       double focus_distance):
    cdef Py_ssize_t n_pos = positions.shape[0]
    cdef Py_ssize_t n_ang = angles.shape[0]
    out = np.empty((n_ang, n_pos), dtype=np.complex128)
    cdef double complex[:, ::1] o = out
    cdef double k = TWO_PI / wavelength
    cdef Py_ssize_t i, j
    cdef double s, c, curv, ph, x
    for j in range(n_ang):
        s = sin(angles[j])
        c = cos(angles[j])
        curv = c * c / (2.0 * focus_distance)
        for i in range(n_pos):
            x = positions[i]
            ph = k * (s * x - curv * x * x)
            o[j, i] = cos(ph) + 1j * sin(ph)
    return out


def near_field_atoms(double wavelength, double[::1] positions, double angle,
                     double[::1] distances):
    cdef Py_ssize_t n_pos = positions.shape[0]
    cdef Py_ssize_t n_dist = distances.shape[0]
    out = np.empty((n_dist, n_pos), dtype=np.complex128)
    cdef double complex[:, ::1] o = out
    cdef double k = TWO_PI / wavelength
    cdef double s = sin(angle)
    cdef Py_ssize_t i, j
    cdef double r, x, rm, amp, ph
    for j in range(n_dist):
        r = distances[j]
        for i in range(n_pos):
            x = positions[i]
            if x == 0.0:
                o[j, i] = 1.0
                continue
            rm = sqrt(r * r - 2.0 * r * s * x + x * x)
            amp = r / rm
            ph = -k * (rm - r)
            o[j, i] = amp * cos(ph) + 1j * (amp * sin(ph))
    return out


def correlation_scores(double complex[:, ::1] atom_rows, double complex[::1] weights,
                       double complex[::1] residual):
    cdef Py_ssize_t n_atoms = atom_rows.shape[0]
    cdef Py_ssize_t n_pos = atom_rows.shape[1]
    out = np.empty(n_atoms, dtype=np.float64)
    cdef double[::1] o = out
    cdef Py_ssize_t i, j
    cdef double wr, wi, ar, ai, er, ei, rr, ri
    cdef double accr, acci, nrm
    for j in range(n_atoms):
        accr = 0.0
        acci = 0.0
        nrm = 0.0
        for i in range(n_pos):
            wr = weights[i].real
            wi = weights[i].imag
            ar = atom_rows[j, i].real
            ai = atom_rows[j, i].imag
            er = wr * ar - wi * ai
            ei = wr * ai + wi * ar
            rr = residual[i].real
            ri = residual[i].imag
            accr += er * rr + ei * ri
            acci += er * ri - ei * rr
            nrm += er * er + ei * ei
        if nrm > 0.0:
            o[j] = sqrt(accr * accr + acci * acci) / sqrt(nrm)
        else:
            o[j] = 0.0
    return out
