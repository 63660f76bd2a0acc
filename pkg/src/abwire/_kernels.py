"""Hot summation loops, compiled with numba or evaluated with numpy.

Two interchangeable implementations are kept for every kernel.  The public
names at the bottom of the module dispatch on :data:`abwire._jit.USE_NUMBA`.
"""
import cmath
import math

import numpy as np

from ._jit import USE_NUMBA, njit

# exact e^{i n phi} is recomputed every RESYNC steps of the power recurrence
RESYNC = 256
# checks of the truncation bound happen every CHECK_EVERY terms
CHECK_EVERY = 64


@njit(cache=True)
def _correction_term(q, c):
    # e^{i pi chi} - 1 with chi = c / (q + sqrt(q^2 - c)) = q - nu, for real q >= sqrt(c)
    if c == 0.0:
        return 0j
    nu = math.sqrt(max(q * q - c, 0.0))
    den = q + nu
    # q - nu directly for threshold channels, where q + nu can vanish
    chi = c / den if den * den >= c else q - nu
    return 2j * cmath.exp(0.5j * math.pi * chi) * math.sin(0.5 * math.pi * chi)


@njit(cache=True)
def _fourier_sum_jit(coef, n0, phis, r):
    out = np.zeros(phis.shape[0], dtype=np.complex128)
    n_terms = coef.shape[0]
    for j in range(phis.shape[0]):
        phi = phis[j]
        w = r * cmath.exp(1j * phi)
        acc = 0j
        k = 0
        while k < n_terms:
            n = n0 + k
            p = (r ** n) * cmath.exp(1j * (n * phi))
            stop = min(k + RESYNC, n_terms)
            while k < stop:
                acc += coef[k] * p
                p *= w
                k += 1
        out[j] = acc
    return out


def _fourier_sum_np(coef, n0, phis, r):
    out = np.zeros(phis.shape[0], dtype=np.complex128)
    chunk = 2048
    logw = math.log(r) + 1j * phis
    for k0 in range(0, coef.shape[0], chunk):
        n = np.arange(n0 + k0, n0 + min(k0 + chunk, coef.shape[0]), dtype=float)
        out += np.exp(np.outer(logw, n)) @ coef[k0:k0 + n.size]
    return out


@njit(cache=True)
def _remainder_sum_jit(b, c, start, phis, lead, lead_shift, tol, min_terms, m_cap):
    """Sum of ``(h(n-b) - lead/(n-lead_shift)) e^{i n phi}`` for ``n >= start``.

    Returns the estimate, the number of explicit terms, and the bound on
    what the two-step summation-by-parts tail estimate leaves out.
    """
    k = phis.shape[0]
    vals = np.zeros(k, dtype=np.complex128)
    used = np.zeros(k, dtype=np.int64)
    bounds = np.zeros(k, dtype=np.float64)
    for j in range(k):
        phi = phis[j]
        z = cmath.exp(1j * phi)
        one_minus = 1.0 - z
        den2 = abs(one_minus) ** 2
        acc = 0j
        n = start
        while True:
            rn = _correction_term(n - b, c)
            if lead != 0j:
                rn -= lead / (n - lead_shift)
            count = n - start
            if count >= min_terms and count % CHECK_EVERY == 0:
                rn1 = _correction_term(n + 1 - b, c)
                if lead != 0j:
                    rn1 -= lead / (n + 1 - lead_shift)
                dr = rn1 - rn
                bound = 2.0 * abs(dr) / den2
                if bound < tol or count >= m_cap:
                    zn = cmath.exp(1j * (n * phi))
                    acc += rn * zn / one_minus + dr * zn * z / (one_minus * one_minus)
                    vals[j] = acc
                    used[j] = count
                    bounds[j] = bound
                    break
            acc += rn * cmath.exp(1j * (n * phi))
            n += 1
    return vals, used, bounds


def _correction_terms_np(q, c):
    q = np.asarray(q, dtype=float)
    if c == 0.0:
        return np.zeros(q.shape, dtype=complex)
    nu = np.sqrt(np.maximum(q * q - c, 0.0))
    den = q + nu
    big = den * den >= c
    chi = np.where(big, c / np.where(big, den, 1.0), q - nu)
    return 2j * np.exp(0.5j * np.pi * chi) * np.sin(0.5 * np.pi * chi)


def _remainder_sum_np(b, c, start, phis, lead, lead_shift, tol, min_terms, m_cap):
    k = phis.shape[0]
    vals = np.zeros(k, dtype=np.complex128)
    used = np.zeros(k, dtype=np.int64)
    bounds = np.zeros(k, dtype=np.float64)
    chunk = 4096
    for j in range(k):
        phi = phis[j]
        z = np.exp(1j * phi)
        one_minus = 1.0 - z
        den2 = abs(one_minus) ** 2
        acc = 0j
        n0 = start
        while True:
            n = np.arange(n0, n0 + chunk + 1, dtype=np.int64)
            r = _correction_terms_np(n - b, c)
            if lead != 0j:
                r = r - lead / (n - lead_shift)
            count = n[:-1] - start
            dr = r[1:] - r[:-1]
            bound = 2.0 * np.abs(dr) / den2
            ok = (count >= min_terms) & (count % CHECK_EVERY == 0) & ((bound < tol) | (count >= m_cap))
            zn = np.exp(1j * (n[:-1] * phi))
            if ok.any():
                i = int(np.argmax(ok))
                acc += np.sum(r[:i] * zn[:i])
                acc += r[i] * zn[i] / one_minus + dr[i] * zn[i] * z / one_minus ** 2
                vals[j] = acc
                used[j] = count[i]
                bounds[j] = bound[i]
                break
            acc += np.sum(r[:-1] * zn)
            n0 += chunk
    return vals, used, bounds


def fourier_sum(coef, n0, phis, r=1.0):
    """``sum_k coef[k] (r e^{i phi})^(n0 + k)`` for every angle in ``phis``."""
    coef = np.ascontiguousarray(coef, dtype=np.complex128)
    phis = np.ascontiguousarray(np.atleast_1d(phis), dtype=np.float64)
    if USE_NUMBA:
        return _fourier_sum_jit(coef, int(n0), phis, float(r))
    return _fourier_sum_np(coef, int(n0), phis, float(r))


def remainder_sum(b, c, start, phis, lead=0j, lead_shift=0.0, tol=1e-10,
                  min_terms=256, m_cap=10 ** 7):
    phis = np.ascontiguousarray(np.atleast_1d(phis), dtype=np.float64)
    args = (float(b), float(c), int(start), phis, complex(lead), float(lead_shift),
            float(tol), int(min_terms), int(m_cap))
    if USE_NUMBA:
        return _remainder_sum_jit(*args)
    return _remainder_sum_np(*args)


correction_terms = _correction_terms_np
