"""Compiled hot loops: oscillatory ring sums, density fill, dense Cauchy transform.

All 2D integrals here are over tensor polar grids: Gauss-Legendre nodes in rho,
uniform angles per ring.  The oscillatory factor is exp(i*Phi) with

    Phi(rho, theta) = a(rho)*sin(theta - alpha) + b(rho)*sin(3*theta),

the universal phase shape of this problem (a carries the |z| part, b = 2t(rho^3
- rho^-3) the cubic part), and the smooth factor is a short angular-mode sum
sum_k c_k(rho) * exp(i*m_k*theta), optionally times an arbitrary per-node field.

sin/cos are evaluated by a range-reduced polynomial (~7e-11 absolute error,
roughly 10x libm on this target); angular rotations use complex rotors
renormalized every 128 steps.  Kernels return per-ring partial sums so the
final reduction order is fixed and results are independent of threading.
"""

import numpy as np
from numba import njit

TWO_PI = 2.0 * np.pi
_INV_TWO_PI = 1.0 / TWO_PI
_HALF_PI = 0.5 * np.pi


@njit(cache=True, fastmath=True, inline="always")
def _sincos(x):
    """Return (sin x, cos x); |error| < 1e-10 for |x| < 1e6."""
    x = x - TWO_PI * np.rint(x * _INV_TWO_PI)
    cs = 1.0
    if x > _HALF_PI:
        x = np.pi - x
        cs = -1.0
    elif x < -_HALF_PI:
        x = -np.pi - x
        cs = -1.0
    x2 = x * x
    s = x * (1.0 + x2 * (-1.6666666666666666e-01 + x2 * (8.3333333333333332e-03
        + x2 * (-1.9841269841269841e-04 + x2 * (2.7557319223985893e-06
        + x2 * (-2.5052108385441720e-08 + x2 * (1.6059043836821613e-10
        + x2 * -7.6471637318198164e-13)))))))
    c = 1.0 + x2 * (-0.5 + x2 * (4.1666666666666664e-02 + x2 * (-1.3888888888888889e-03
        + x2 * (2.4801587301587302e-05 + x2 * (-2.7557319223985888e-07
        + x2 * (2.0876756987868099e-09 + x2 * -1.1470745597729725e-11))))))
    return s, cs * c


@njit(cache=True)
def sincos_array(x):
    """Vectorized wrapper used by the unit tests."""
    s = np.empty_like(x)
    c = np.empty_like(x)
    for i in range(x.shape[0]):
        s[i], c[i] = _sincos(x[i])
    return s, c


@njit(cache=True, fastmath=True)
def ring_osc_partials(ntheta, offsets, a, b, alpha, modes, cmode, extra, use_extra):
    """Per-ring raw angular sums  sum_j h(theta_j) * exp(i*Phi(theta_j)).

    ntheta : int64[nr]      angles per ring (uniform, theta_j = 2 pi j / N)
    a, b   : float64[nr]    phase coefficients per ring
    modes  : int64[K]       angular mode numbers of the smooth factor
    cmode  : complex128[nr, K]  mode coefficients per ring
    extra  : complex128[:]  optional per-node factor, aligned with offsets
    Radial weights are applied by the caller; the 2 pi / N angular weight too.
    """
    nr = ntheta.shape[0]
    K = modes.shape[0]
    out = np.zeros(nr, dtype=np.complex128)
    rot_r = np.empty(K, dtype=np.float64)
    rot_i = np.empty(K, dtype=np.float64)
    cur_r = np.empty(K, dtype=np.float64)
    cur_i = np.empty(K, dtype=np.float64)
    for ir in range(nr):
        n = ntheta[ir]
        dth = TWO_PI / n
        ai = a[ir]
        bi = b[ir]
        # rotors for sin(theta - alpha) and sin(3 theta)
        s1, c1 = _sincos(-alpha)
        sd, cd = _sincos(dth)
        s3, c3 = 0.0, 1.0
        sd3, cd3 = _sincos(3.0 * dth)
        for k in range(K):
            sk, ck = _sincos(modes[k] * dth)
            rot_r[k] = ck
            rot_i[k] = sk
            cur_r[k] = 1.0
            cur_i[k] = 0.0
        acc_r = 0.0
        acc_i = 0.0
        base = offsets[ir]
        for j in range(n):
            ph = ai * s1 + bi * s3
            sp, cp = _sincos(ph)
            hr = 0.0
            hi = 0.0
            for k in range(K):
                hr += cmode[ir, k].real * cur_r[k] - cmode[ir, k].imag * cur_i[k]
                hi += cmode[ir, k].real * cur_i[k] + cmode[ir, k].imag * cur_r[k]
            if use_extra:
                er = extra[base + j].real
                ei = extra[base + j].imag
                tr = hr * er - hi * ei
                hi = hr * ei + hi * er
                hr = tr
            acc_r += hr * cp - hi * sp
            acc_i += hr * sp + hi * cp
            # advance rotors
            t1 = c1 * cd - s1 * sd
            s1 = c1 * sd + s1 * cd
            c1 = t1
            t3 = c3 * cd3 - s3 * sd3
            s3 = c3 * sd3 + s3 * cd3
            c3 = t3
            for k in range(K):
                tk = cur_r[k] * rot_r[k] - cur_i[k] * rot_i[k]
                cur_i[k] = cur_r[k] * rot_i[k] + cur_i[k] * rot_r[k]
                cur_r[k] = tk
            if j & 127 == 127:
                g = 1.5 - 0.5 * (c1 * c1 + s1 * s1)
                c1 *= g
                s1 *= g
                g = 1.5 - 0.5 * (c3 * c3 + s3 * s3)
                c3 *= g
                s3 *= g
                for k in range(K):
                    g = 1.5 - 0.5 * (cur_r[k] * cur_r[k] + cur_i[k] * cur_i[k])
                    cur_r[k] *= g
                    cur_i[k] *= g
        out[ir] = complex(acc_r, acc_i)
    return out


@njit(cache=True, fastmath=True)
def ring_osc_partials_paired(ntheta, offsets, a, b, alpha, modes, cmode):
    """As ring_osc_partials without the extra factor, using the exact node
    pairing θ ↦ θ+π of even rings:  Φ(θ+π) = −Φ(θ) and e^{im(θ+π)} =
    (−1)^m e^{imθ}, so each pair contributes 2·h·cosΦ (even m) or
    2i·h·sinΦ (odd m).  Half the work, and exactly real output for real
    even-mode data."""
    nr = ntheta.shape[0]
    K = modes.shape[0]
    out = np.zeros(nr, dtype=np.complex128)
    rot_r = np.empty(K, dtype=np.float64)
    rot_i = np.empty(K, dtype=np.float64)
    cur_r = np.empty(K, dtype=np.float64)
    cur_i = np.empty(K, dtype=np.float64)
    odd = np.empty(K, dtype=np.int64)
    for ir in range(nr):
        n = ntheta[ir]
        half = n >> 1
        dth = TWO_PI / n
        ai = a[ir]
        bi = b[ir]
        s1, c1 = _sincos(-alpha)
        sd, cd = _sincos(dth)
        s3, c3 = 0.0, 1.0
        sd3, cd3 = _sincos(3.0 * dth)
        for k in range(K):
            sk, ck = _sincos(modes[k] * dth)
            rot_r[k] = ck
            rot_i[k] = sk
            cur_r[k] = 1.0
            cur_i[k] = 0.0
            odd[k] = modes[k] & 1
        acc_r = 0.0
        acc_i = 0.0
        for j in range(half):
            ph = ai * s1 + bi * s3
            sp, cp = _sincos(ph)
            he_r = 0.0
            he_i = 0.0
            ho_r = 0.0
            ho_i = 0.0
            for k in range(K):
                wr = cmode[ir, k].real * cur_r[k] - cmode[ir, k].imag * cur_i[k]
                wi = cmode[ir, k].real * cur_i[k] + cmode[ir, k].imag * cur_r[k]
                if odd[k]:
                    ho_r += wr
                    ho_i += wi
                else:
                    he_r += wr
                    he_i += wi
            # pair sum: 2·(he·cosΦ + i·ho·sinΦ)
            acc_r += 2.0 * (he_r * cp - ho_i * sp)
            acc_i += 2.0 * (he_i * cp + ho_r * sp)
            t1 = c1 * cd - s1 * sd
            s1 = c1 * sd + s1 * cd
            c1 = t1
            t3 = c3 * cd3 - s3 * sd3
            s3 = c3 * sd3 + s3 * cd3
            c3 = t3
            for k in range(K):
                tk = cur_r[k] * rot_r[k] - cur_i[k] * rot_i[k]
                cur_i[k] = cur_r[k] * rot_i[k] + cur_i[k] * rot_r[k]
                cur_r[k] = tk
            if j & 127 == 127:
                g = 1.5 - 0.5 * (c1 * c1 + s1 * s1)
                c1 *= g
                s1 *= g
                g = 1.5 - 0.5 * (c3 * c3 + s3 * s3)
                c3 *= g
                s3 *= g
                for k in range(K):
                    g = 1.5 - 0.5 * (cur_r[k] * cur_r[k] + cur_i[k] * cur_i[k])
                    cur_r[k] *= g
                    cur_i[k] *= g
        out[ir] = complex(acc_r, acc_i)
    return out


@njit(cache=True, fastmath=True)
def ring_density_fill(ntheta, offsets, a, b, alpha, modes, cmode, extra, use_extra, dens):
    """Fill dens (flat, ring-major) with h(theta_j) * exp(i*Phi); no weights."""
    nr = ntheta.shape[0]
    K = modes.shape[0]
    rot_r = np.empty(K, dtype=np.float64)
    rot_i = np.empty(K, dtype=np.float64)
    cur_r = np.empty(K, dtype=np.float64)
    cur_i = np.empty(K, dtype=np.float64)
    for ir in range(nr):
        n = ntheta[ir]
        dth = TWO_PI / n
        ai = a[ir]
        bi = b[ir]
        s1, c1 = _sincos(-alpha)
        sd, cd = _sincos(dth)
        s3, c3 = 0.0, 1.0
        sd3, cd3 = _sincos(3.0 * dth)
        for k in range(K):
            sk, ck = _sincos(modes[k] * dth)
            rot_r[k] = ck
            rot_i[k] = sk
            cur_r[k] = 1.0
            cur_i[k] = 0.0
        base = offsets[ir]
        for j in range(n):
            ph = ai * s1 + bi * s3
            sp, cp = _sincos(ph)
            hr = 0.0
            hi = 0.0
            for k in range(K):
                hr += cmode[ir, k].real * cur_r[k] - cmode[ir, k].imag * cur_i[k]
                hi += cmode[ir, k].real * cur_i[k] + cmode[ir, k].imag * cur_r[k]
            if use_extra:
                er = extra[base + j].real
                ei = extra[base + j].imag
                tr = hr * er - hi * ei
                hi = hr * ei + hi * er
                hr = tr
            dens[base + j] = complex(hr * cp - hi * sp, hr * sp + hi * cp)
            t1 = c1 * cd - s1 * sd
            s1 = c1 * sd + s1 * cd
            c1 = t1
            t3 = c3 * cd3 - s3 * sd3
            s3 = c3 * sd3 + s3 * cd3
            c3 = t3
            for k in range(K):
                tk = cur_r[k] * rot_r[k] - cur_i[k] * rot_i[k]
                cur_i[k] = cur_r[k] * rot_i[k] + cur_i[k] * rot_r[k]
                cur_r[k] = tk
            if j & 127 == 127:
                g = 1.5 - 0.5 * (c1 * c1 + s1 * s1)
                c1 *= g
                s1 *= g
                g = 1.5 - 0.5 * (c3 * c3 + s3 * s3)
                c3 *= g
                s3 *= g
                for k in range(K):
                    g = 1.5 - 0.5 * (cur_r[k] * cur_r[k] + cur_i[k] * cur_i[k])
                    cur_r[k] *= g
                    cur_i[k] *= g


@njit(cache=True, fastmath=True)
def dense_cauchy(points, weights, dens, targets, skip_index):
    """vals[q] = -(1/pi) sum_i w_i dens_i / (zeta_i - lam_q), skipping skip_index[q] range.

    skip_index[q] = (lo, hi): node slice excluded (the singular cell; the
    caller adds back its analytic contribution).  lo = hi = 0 means skip none.
    """
    nq = targets.shape[0]
    vals = np.zeros(nq, dtype=np.complex128)
    n = points.shape[0]
    for q in range(nq):
        lam = targets[q]
        lo = skip_index[q, 0]
        hi = skip_index[q, 1]
        acc = 0.0j
        for i in range(n):
            if lo <= i < hi:
                continue
            acc += weights[i] * dens[i] / (points[i] - lam)
        vals[q] = -acc / np.pi
    return vals


@njit(cache=True)
def mode_cauchy_scan(rho, w_rad, chat, M):
    """Ring-to-ring Cauchy transform, one angular mode at a time.

    The source density on ring i is sum_m chat_m(i) exp(i*m*theta) (column
    M + k of `chat` holds the mode m = k + 1 needed by target mode k), with
    radial quadrature weight w_rad[i] (NOT including the rho factor).  The
    transform -(1/pi) int dens(zeta)/(zeta - lam) dA couples mode m of a
    source ring to mode k = m - 1 of every target radius:

        k >= 0  (target inside the source):  -2 w c_{k+1} (rho_t/rho_s)^k
        k <= -1 (target outside the source): +2 w c_{k+1} (rho_s/rho_t)^{-k}

    and a target on its own ring takes the mean of the two one-sided limits
    (half of its own-ring term on each side).  Both directions are evaluated
    by a scaled recursive scan over rings sorted by radius, so no large
    powers of rho ever appear and the cost is O(n_rings * n_modes).
    """
    nr = rho.shape[0]
    out = np.zeros((nr, 2 * M + 1), dtype=np.complex128)

    # k >= 0: suffix scan over sources strictly outside the target ring.
    U = np.zeros(M + 1, dtype=np.complex128)
    for i in range(nr - 1, -1, -1):
        if i < nr - 1:
            r = rho[i] / rho[i + 1]
            p = 1.0
            for k in range(M + 1):
                U[k] = p * (w_rad[i + 1] * chat[i + 1, M + k] + U[k])
                p *= r
        for k in range(M + 1):
            out[i, M + k] = -2.0 * (0.5 * w_rad[i] * chat[i, M + k] + U[k])

    # k <= -1: prefix scan over sources strictly inside the target ring.
    V = np.zeros(M, dtype=np.complex128)
    for i in range(nr):
        if i > 0:
            q = rho[i - 1] / rho[i]
            p = q
            for j in range(M):
                V[j] = p * (w_rad[i - 1] * chat[i - 1, M - (j + 1)] + V[j])
                p *= q
        for j in range(M):
            out[i, M - (j + 1)] = 2.0 * (0.5 * w_rad[i] * chat[i, M - (j + 1)] + V[j])
    return out
