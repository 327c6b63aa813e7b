"""Pure-Python Gibbs chain kernels.

Reference implementation of the compiled extension in ``_kernels.pyx``; the
two are kept in arithmetic lockstep (same operation order, libm exp/sqrt/pow)
so that a chain driven by the same pre-drawn random numbers is bit-identical
under either backend. All randomness comes in through the ``normals_*`` /
``unifs`` arrays; the kernels themselves are deterministic.
"""

import math

import numpy as np

BACKEND = "python"


def heat_chain(
    y,
    decay,
    t_obs,
    eps,
    delta,
    tau_sq,
    sigma_sq,
    theta_init,
    burn_in,
    n_keep,
    thin,
    v0,
    adapt,
    normals_f,
    normals_th,
    unifs,
):
    """Gibbs sweep with exact coefficient draws and a random-walk step on a
    scalar parameter entering through rho_k(theta) = exp(-theta * decay_k).

    Returns (draws_f, theta_hist, acc_flags, rb_mean, rb_var, v_final).
    """
    n = len(y)
    niter = burn_in + n_keep * thin
    y = [float(v) for v in y]
    decay = [float(v) for v in decay]
    tau = [float(v) for v in tau_sq]
    e2 = float(eps) * float(eps)
    d2 = float(delta) * float(delta)
    s2 = float(sigma_sq)
    t_obs = float(t_obs)
    theta = float(theta_init)
    v = float(v0)

    f = [0.0] * n
    draws_f = np.empty((n_keep, n))
    theta_hist = np.empty(niter)
    acc_flags = np.zeros(niter, dtype=np.uint8)
    rb_mean = [0.0] * n
    rb_var = [0.0] * n
    kept = 0

    for it in range(niter):
        for k in range(n):
            rho = math.exp(-theta * decay[k])
            denom = rho * rho * tau[k] + e2
            m = rho * tau[k] * y[k] / denom
            s = math.sqrt(e2 * tau[k] / denom)
            f[k] = m + s * float(normals_f[it, k])

        th_prop = theta + v * float(normals_th[it])
        dl = 0.0
        for k in range(n):
            rho = math.exp(-theta * decay[k])
            rhop = math.exp(-th_prop * decay[k])
            dl += ((rhop - rho) * f[k] * y[k] - 0.5 * (rhop * rhop - rho * rho) * f[k] * f[k]) / e2
        dl += ((th_prop - theta) * t_obs - 0.5 * (th_prop * th_prop - theta * theta)) / d2
        dl -= 0.5 * (th_prop * th_prop - theta * theta) / s2
        alpha = 1.0 if dl >= 0.0 else math.exp(dl)
        if float(unifs[it]) < alpha:
            theta = th_prop
            acc_flags[it] = 1
        if adapt and it < burn_in:
            v = v * math.exp((alpha - 0.3) / (it + 1.0) ** 0.6)

        theta_hist[it] = theta
        if it >= burn_in and (it - burn_in + 1) % thin == 0:
            for k in range(n):
                draws_f[kept, k] = f[k]
                rho = math.exp(-theta * decay[k])
                denom = rho * rho * tau[k] + e2
                rb_mean[k] += rho * tau[k] * y[k] / denom
                rb_var[k] += e2 * tau[k] / denom
            kept += 1

    rb_mean = np.array(rb_mean) / n_keep
    rb_var = np.array(rb_var) / n_keep
    return draws_f, theta_hist, acc_flags, rb_mean, rb_var, v


def svd_chain(
    y,
    lvl,
    t_lv,
    eps,
    delta,
    tau_sq,
    sigma_sq,
    theta_init,
    burn_in,
    n_keep,
    thin,
    normals_f,
    normals_th,
):
    """Fully conjugate Gibbs sweep for the diagonal-SVD model: exact Gaussian
    draws for the coefficients and for every level of the singular-value
    sequence (the exponent is linear in theta for fixed f).

    Returns (draws_f, theta_hist, rb_mean, rb_var).
    """
    n = len(y)
    nl = len(t_lv)
    niter = burn_in + n_keep * thin
    y = [float(v) for v in y]
    lvl = [int(v) for v in lvl]
    t_lv = [float(v) for v in t_lv]
    tau = [float(v) for v in tau_sq]
    e2 = float(eps) * float(eps)
    d2 = float(delta) * float(delta)
    s2 = float(sigma_sq)

    th = [float(v) for v in theta_init]
    f = [0.0] * n
    a = [0.0] * nl
    b = [0.0] * nl
    draws_f = np.empty((n_keep, n))
    theta_hist = np.empty((niter, nl))
    rb_mean = [0.0] * n
    rb_var = [0.0] * n
    kept = 0

    for it in range(niter):
        for k in range(n):
            rho = th[lvl[k]]
            denom = rho * rho * tau[k] + e2
            m = rho * tau[k] * y[k] / denom
            s = math.sqrt(e2 * tau[k] / denom)
            f[k] = m + s * float(normals_f[it, k])

        for l in range(nl):
            a[l] = 0.0
            b[l] = 0.0
        for k in range(n):
            a[lvl[k]] += f[k] * f[k]
            b[lvl[k]] += f[k] * y[k]
        for l in range(nl):
            prec = a[l] / e2 + 1.0 / d2 + 1.0 / s2
            mu = (b[l] / e2 + t_lv[l] / d2) / prec
            th[l] = mu + float(normals_th[it, l]) / math.sqrt(prec)
            theta_hist[it, l] = th[l]

        if it >= burn_in and (it - burn_in + 1) % thin == 0:
            for k in range(n):
                draws_f[kept, k] = f[k]
                rho = th[lvl[k]]
                denom = rho * rho * tau[k] + e2
                rb_mean[k] += rho * tau[k] * y[k] / denom
                rb_var[k] += e2 * tau[k] / denom
            kept += 1

    rb_mean = np.array(rb_mean) / n_keep
    rb_var = np.array(rb_var) / n_keep
    return draws_f, theta_hist, rb_mean, rb_var
