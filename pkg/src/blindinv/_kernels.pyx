# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled Gibbs chain kernels.

Mirror of ``_kernels_py`` (same operation order, same libm calls) so both
backends produce bit-identical chains from the same pre-drawn random arrays.
"""

from libc.math cimport exp, sqrt, pow

import numpy as np

BACKEND = "compiled"


def heat_chain(
    double[::1] y,
    double[::1] decay,
    double t_obs,
    double eps,
    double delta,
    double[::1] tau_sq,
    double sigma_sq,
    double theta_init,
    int burn_in,
    int n_keep,
    int thin,
    double v0,
    bint adapt,
    double[:, ::1] normals_f,
    double[::1] normals_th,
    double[::1] unifs,
):
    cdef int n = y.shape[0]
    cdef int niter = burn_in + n_keep * thin
    cdef double e2 = eps * eps
    cdef double d2 = delta * delta
    cdef double s2 = sigma_sq
    cdef double theta = theta_init
    cdef double v = v0
    cdef double rho, rhop, denom, m, s, th_prop, dl, alpha
    cdef int it, k, kept = 0

    f_arr = np.zeros(n)
    draws_f = np.empty((n_keep, n))
    theta_hist = np.empty(niter)
    acc_flags = np.zeros(niter, dtype=np.uint8)
    rb_mean = np.zeros(n)
    rb_var = np.zeros(n)
    cdef double[::1] f = f_arr
    cdef double[:, ::1] draws_f_v = draws_f
    cdef double[::1] theta_hist_v = theta_hist
    cdef unsigned char[::1] acc_v = acc_flags
    cdef double[::1] rb_mean_v = rb_mean
    cdef double[::1] rb_var_v = rb_var

    for it in range(niter):
        for k in range(n):
            rho = exp(-theta * decay[k])
            denom = rho * rho * tau_sq[k] + e2
            m = rho * tau_sq[k] * y[k] / denom
            s = sqrt(e2 * tau_sq[k] / denom)
            f[k] = m + s * normals_f[it, k]

        th_prop = theta + v * normals_th[it]
        dl = 0.0
        for k in range(n):
            rho = exp(-theta * decay[k])
            rhop = exp(-th_prop * decay[k])
            dl += ((rhop - rho) * f[k] * y[k] - 0.5 * (rhop * rhop - rho * rho) * f[k] * f[k]) / e2
        dl += ((th_prop - theta) * t_obs - 0.5 * (th_prop * th_prop - theta * theta)) / d2
        dl -= 0.5 * (th_prop * th_prop - theta * theta) / s2
        alpha = 1.0 if dl >= 0.0 else exp(dl)
        if unifs[it] < alpha:
            theta = th_prop
            acc_v[it] = 1
        if adapt and it < burn_in:
            v = v * exp((alpha - 0.3) / pow(it + 1.0, 0.6))

        theta_hist_v[it] = theta
        if it >= burn_in and (it - burn_in + 1) % thin == 0:
            for k in range(n):
                draws_f_v[kept, k] = f[k]
                rho = exp(-theta * decay[k])
                denom = rho * rho * tau_sq[k] + e2
                rb_mean_v[k] += rho * tau_sq[k] * y[k] / denom
                rb_var_v[k] += e2 * tau_sq[k] / denom
            kept += 1

    return draws_f, theta_hist, acc_flags, rb_mean / n_keep, rb_var / n_keep, v


def svd_chain(
    double[::1] y,
    int[::1] lvl,
    double[::1] t_lv,
    double eps,
    double delta,
    double[::1] tau_sq,
    double sigma_sq,
    double[::1] theta_init,
    int burn_in,
    int n_keep,
    int thin,
    double[:, ::1] normals_f,
    double[:, ::1] normals_th,
):
    cdef int n = y.shape[0]
    cdef int nl = t_lv.shape[0]
    cdef int niter = burn_in + n_keep * thin
    cdef double e2 = eps * eps
    cdef double d2 = delta * delta
    cdef double s2 = sigma_sq
    cdef double rho, denom, m, s, prec, mu
    cdef int it, k, l, kept = 0

    th_arr = np.array(theta_init, dtype=float)
    f_arr = np.zeros(n)
    a_arr = np.zeros(nl)
    b_arr = np.zeros(nl)
    draws_f = np.empty((n_keep, n))
    theta_hist = np.empty((niter, nl))
    rb_mean = np.zeros(n)
    rb_var = np.zeros(n)
    cdef double[::1] th = th_arr
    cdef double[::1] f = f_arr
    cdef double[::1] a = a_arr
    cdef double[::1] b = b_arr
    cdef double[:, ::1] draws_f_v = draws_f
    cdef double[:, ::1] theta_hist_v = theta_hist
    cdef double[::1] rb_mean_v = rb_mean
    cdef double[::1] rb_var_v = rb_var

    for it in range(niter):
        for k in range(n):
            rho = th[lvl[k]]
            denom = rho * rho * tau_sq[k] + e2
            m = rho * tau_sq[k] * y[k] / denom
            s = sqrt(e2 * tau_sq[k] / denom)
            f[k] = m + s * normals_f[it, k]

        for l in range(nl):
            a[l] = 0.0
            b[l] = 0.0
        for k in range(n):
            a[lvl[k]] += f[k] * f[k]
            b[lvl[k]] += f[k] * y[k]
        for l in range(nl):
            prec = a[l] / e2 + 1.0 / d2 + 1.0 / s2
            mu = (b[l] / e2 + t_lv[l] / d2) / prec
            th[l] = mu + normals_th[it, l] / sqrt(prec)
            theta_hist_v[it, l] = th[l]

        if it >= burn_in and (it - burn_in + 1) % thin == 0:
            for k in range(n):
                draws_f_v[kept, k] = f[k]
                rho = th[lvl[k]]
                denom = rho * rho * tau_sq[k] + e2
                rb_mean_v[k] += rho * tau_sq[k] * y[k] / denom
                rb_var_v[k] += e2 * tau_sq[k] / denom
            kept += 1

    return draws_f, theta_hist, rb_mean / n_keep, rb_var / n_keep
