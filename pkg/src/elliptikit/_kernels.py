"""Hot loops for lattice sums, in two interchangeable implementations.

Every kernel exists as a plain numpy/Python function (``*_py``) and, when
numba is importable and ``ELLIPTIKIT_DISABLE_NUMBA`` is unset, as an
``@njit`` compiled twin.  The public names at the bottom of the module point
at whichever backend is active; tests and the benchmark import both
variants explicitly.
"""

from __future__ import annotations

import math
import os

import numpy as np

_TWO_PI_I = 2j * math.pi


def _numba_wanted() -> bool:
    flag = os.environ.get("ELLIPTIKIT_DISABLE_NUMBA", "").strip().lower()
    return flag in ("", "0", "false", "no")


try:  # pragma: no cover - exercised implicitly
    from numba import njit as _njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False
    _njit = None

USE_NUMBA = HAVE_NUMBA and _numba_wanted()
BACKEND = "numba" if USE_NUMBA else "numpy"


def cot_derivative_table(kmax: int) -> np.ndarray:
    """Coefficients of d^k/dx^k cot(x) as polynomials in u = cot(x).

    Row k holds the coefficients (lowest degree first) of D_k with
    D_0 = u and D_{k+1} = -(1 + u^2) D_k'(u).
    """
    table = np.zeros((kmax + 1, kmax + 2))
    table[0, 1] = 1.0
    for k in range(kmax):
        prev = table[k]
        deriv = np.zeros(kmax + 2)
        deriv[:-1] = prev[1:] * np.arange(1, kmax + 2)
        nxt = -deriv.copy()
        nxt[2:] -= deriv[:-2]
        table[k + 1] = nxt
    return table


# --------------------------------------------------------------------------
# Eisenstein functions with the nearest pole split off
#
# For z = w + m + n*tau with w in the centred parallelogram the kernels return
# the regular parts  R_r(w) = E_r(w) - w^(-r),  r = 1..rmax, plus w and n.
# Row n = 0 of the lattice sum is handled by a zeta Taylor series when |w| is
# small, otherwise by the cotangent (or its Fourier series) minus w^(-r); the
# rows n != 0 are folded into one q-series.
# --------------------------------------------------------------------------

TAYLOR_RADIUS = 0.5


def _amplitudes(rmax):
    amp = np.zeros(rmax + 1, dtype=np.complex128)
    acc = 1.0 + 0.0j
    for r in range(1, rmax + 1):
        acc = acc * (-_TWO_PI_I)
        if r > 1:
            acc = acc / (r - 1)
        amp[r] = acc
    return amp


def _regular_point(z, tau, q, rmax, nterms, dtab, zetas, out):
    pi = math.pi
    nshift = math.floor(z.imag / tau.imag + 0.5)
    w = z - nshift * tau
    w = w - math.floor(w.real + 0.5)
    amp = _amplitudes(rmax)

    if abs(w) < TAYLOR_RADIUS:
        # sum_{m != 0} (w+m)^(-r) = sum_j C(r+j-1, j) (-w)^j (1 + (-1)^(r+j)) zeta(r+j)
        jmax = zetas.shape[0] - rmax - 1
        for r in range(1, rmax + 1):
            acc = 0.0 + 0.0j
            binom = 1.0
            wp = 1.0 + 0.0j
            for j in range(0, jmax):
                if j > 0:
                    binom = binom * (r + j - 1) / j
                    wp = wp * (-w)
                if (r + j) % 2 == 0:
                    term = 2.0 * binom * zetas[r + j] * wp
                    acc += term
                    if j > 8 and abs(term) < 1e-19 * (abs(acc) + 1e-300):
                        break
            out[r] = acc
    elif abs(w.imag) >= 0.25:
        flip = w.imag < 0.0
        v = -w if flip else w
        x = np.exp(_TWO_PI_I * v)
        sums = np.zeros(rmax + 1, dtype=np.complex128)
        xk = 1.0 + 0.0j
        k = 0
        while True:
            k += 1
            xk = xk * x
            kp = 1.0
            for r in range(1, rmax + 1):
                sums[r] += kp * xk
                kp *= k
            if k > rmax and abs(xk) * kp < 1e-18:
                break
        for r in range(1, rmax + 1):
            val = amp[r] * sums[r]
            if r == 1:
                val = val - 1j * pi
            if flip and (r % 2 == 1):
                val = -val
            out[r] = val - w ** (-r)
    else:
        u = np.cos(pi * w) / np.sin(pi * w)
        fact = 1.0
        pipow = 1.0
        for r in range(1, rmax + 1):
            pipow *= pi
            if r > 1:
                fact *= r - 1
            row = dtab[r - 1]
            poly = 0.0 + 0.0j
            for j in range(r, -1, -1):
                poly = poly * u + row[j]
            sign = 1.0 if (r % 2 == 1) else -1.0
            out[r] = sign * pipow / fact * poly - w ** (-r)

    xp = q * np.exp(_TWO_PI_I * w)
    xm = q * np.exp(-_TWO_PI_I * w)
    qk = 1.0 + 0.0j
    pk = 1.0 + 0.0j
    mk = 1.0 + 0.0j
    for k in range(1, nterms + 1):
        qk = qk * q
        pk = pk * xp
        mk = mk * xm
        fac = 1.0 / (1.0 - qk)
        kp = 1.0
        for r in range(1, rmax + 1):
            if r % 2 == 0:
                out[r] += amp[r] * kp * fac * (pk + mk)
            else:
                out[r] += amp[r] * kp * fac * (pk - mk)
            kp *= k
    return w, nshift


def regular_block_py(zs, tau, rmax, nterms, dtab, zetas):
    """Regular parts R_r(w), r = 1..rmax (column 0 unused), reduced points w
    and tau-shift counts n.  Vectorised numpy twin of the compiled kernel."""
    zs = np.asarray(zs, dtype=np.complex128)
    pi = math.pi
    q = np.exp(_TWO_PI_I * tau)
    nshift = np.floor(zs.imag / tau.imag + 0.5)
    w = zs - nshift * tau
    w = w - np.floor(w.real + 0.5)
    amp = _amplitudes(rmax)
    res = np.zeros((zs.shape[0], rmax + 1), dtype=np.complex128)
    sign = np.array([1.0 if r % 2 else -1.0 for r in range(rmax + 1)])

    small = np.abs(w) < TAYLOR_RADIUS
    lip = (~small) & (np.abs(w.imag) >= 0.25)
    near = (~small) & (~lip)
    if small.any():
        ws = w[small]
        jmax = zetas.shape[0] - rmax - 1
        js = np.arange(jmax)
        powers = (-ws)[:, None] ** js
        for r in range(1, rmax + 1):
            binom = np.ones(jmax)
            for j in range(1, jmax):
                binom[j] = binom[j - 1] * (r + j - 1) / j
            coef = np.where((r + js) % 2 == 0, 2.0 * binom * zetas[r + js], 0.0)
            res[small, r] = powers @ coef
    if lip.any():
        wl = w[lip]
        flip = wl.imag < 0
        x = np.exp(_TWO_PI_I * np.where(flip, -wl, wl))
        xmax = float(np.abs(x).max())
        kmax = rmax + 1
        while xmax**kmax * float(kmax) ** (rmax - 1) >= 1e-18:
            kmax += 1
        ks = np.arange(1, kmax + 1, dtype=np.float64)
        xk = x[:, None] ** ks
        for r in range(1, rmax + 1):
            val = amp[r] * (xk * ks ** (r - 1)).sum(axis=1)
            if r == 1:
                val = val - 1j * pi
            if r % 2 == 1:
                val = np.where(flip, -val, val)
            res[lip, r] = val - wl ** (-r)
    if near.any():
        wn = w[near]
        u = 1.0 / np.tan(pi * wn)
        fact = 1.0
        for r in range(1, rmax + 1):
            if r > 1:
                fact *= r - 1
            poly = np.zeros_like(u)
            for j in range(r, -1, -1):
                poly = poly * u + dtab[r - 1, j]
            res[near, r] = sign[r] * pi**r / fact * poly - wn ** (-r)

    ks = np.arange(1, nterms + 1, dtype=np.float64)
    fac = 1.0 / (1.0 - q**ks)
    pk = (q * np.exp(_TWO_PI_I * w))[:, None] ** ks * fac
    mk = (q * np.exp(-_TWO_PI_I * w))[:, None] ** ks * fac
    for r in range(1, rmax + 1):
        comb = pk + mk if r % 2 == 0 else pk - mk
        res[:, r] += amp[r] * (comb * ks ** (r - 1)).sum(axis=1)
    return res, w, nshift


# --------------------------------------------------------------------------
# Oracle: truncated double sum, inner index first, Euler-Maclaurin inner tail
# --------------------------------------------------------------------------


def _inner_tail(w, r, M):
    """sum_{m > M} [(w+m)^-r + (w-m)^-r] by midpoint Euler-Maclaurin."""
    X = M + 0.5
    a = w + X
    b = w - X
    if r == 1:
        integral = np.log(X - w) - np.log(X + w)
    else:
        integral = (a ** (1 - r) - b ** (1 - r)) / (r - 1)
    d1 = -r * a ** (-r - 1) + r * b ** (-r - 1)
    c3 = r * (r + 1) * (r + 2)
    d3 = -c3 * a ** (-r - 3) + c3 * b ** (-r - 3)
    return integral + d1 / 24.0 - 7.0 * d3 / 5760.0


def lattice_sum_py(z, tau, r, N, M, skip_origin):
    """Vectorised numpy oracle: rows in n, each row a vector over m."""
    ms = np.arange(-M, M + 1, dtype=np.float64)
    total = 0.0 + 0.0j
    for n in range(-N, N + 1):
        w = z + n * tau
        terms = (w + ms) ** (-r)
        if skip_origin and n == 0:
            terms[M] = 0.0
        total += terms.sum() + _inner_tail(w, r, M)
    return total


if USE_NUMBA:
    # rebinding lets the compiled _regular_point resolve a compiled helper
    _amplitudes = _njit(cache=True)(_amplitudes)
    _regular_point_nb = _njit(cache=True)(_regular_point)

    @_njit(cache=True)
    def regular_block_nb(zs, tau, rmax, nterms, dtab, zetas):
        q = np.exp(_TWO_PI_I * tau)
        res = np.zeros((zs.shape[0], rmax + 1), dtype=np.complex128)
        ws = np.empty(zs.shape[0], dtype=np.complex128)
        ns = np.empty(zs.shape[0], dtype=np.float64)
        for i in range(zs.shape[0]):
            w, n = _regular_point_nb(zs[i], tau, q, rmax, nterms, dtab, zetas, res[i])
            ws[i] = w
            ns[i] = n
        return res, ws, ns

    _inner_tail_nb = _njit(cache=True)(_inner_tail)

    @_njit(cache=True)
    def lattice_sum_nb(z, tau, r, N, M, skip_origin):
        total = 0.0 + 0.0j
        for n in range(-N, N + 1):
            w = z + n * tau
            row = 0.0 + 0.0j
            for m in range(-M, M + 1):
                if skip_origin and n == 0 and m == 0:
                    continue
                inv = 1.0 / (w + m)
                p = inv
                for _ in range(r - 1):
                    p = p * inv
                row += p
            total += row + _inner_tail_nb(w, r, M)
        return total

    regular_block = regular_block_nb
    lattice_sum = lattice_sum_nb
else:
    regular_block_nb = None
    lattice_sum_nb = None
    regular_block = regular_block_py
    lattice_sum = lattice_sum_py
