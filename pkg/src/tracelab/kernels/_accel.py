"""Numba-jitted implementation of the hot kernels.

Function-for-function mirror of ``_reference``; any semantic difference
between the two backends is a bug (see tests/test_backends.py).
"""

import numpy as np
from numba import njit

from .codes import HEADER, STATUS_OK, STATUS_FLOOR

IS_ACCELERATED = True

# codes inlined as literals for the jitted dispatch:
# 0 LOG, 1 POWER, 2 NEGPOWER, 3 INVPOWER, 4 AFFINE, 5 LOEWNER, 6 LOGAFFINE, 7 CPOW


@njit(cache=True)
def eval_many(enc, xs):
    code = int(enc[0])
    sign, p0, p1 = enc[1], enc[2], enc[3]
    n = xs.shape[0]
    y = np.empty(n)
    for i in range(n):
        x = xs[i]
        if code == 0:
            v = np.log(x)
        elif code == 1:
            v = x ** p0
        elif code == 2:
            v = -(x ** -p0)
        elif code == 3:
            v = x ** -p0
        elif code == 4:
            v = p0 + p1 * x
        elif code == 5:
            natoms = int(enc[4])
            v = p0 + p1 * x
            for j in range(natoms):
                lam = enc[HEADER + j]
                w = enc[HEADER + natoms + j]
                v += w * (x * lam - 1.0) / (x + lam)
        elif code == 6:
            v = p0 + p1 * np.log(x)
        else:
            v = p0 * x ** p1
        y[i] = sign * v
    return y


@njit(cache=True)
def _resym(M):
    return (M + np.conj(M.T)) / 2.0


@njit(cache=True)
def kraus_apply(K, X):
    k = K.shape[2]
    out = np.zeros((k, k), dtype=np.complex128)
    for i in range(K.shape[0]):
        Ki = np.ascontiguousarray(K[i])
        out += np.conj(Ki.T) @ X @ Ki
    return _resym(out)


@njit(cache=True)
def herm_fn_apply(H, enc, floor):
    w, U = np.linalg.eigh(np.ascontiguousarray(H))
    n = w.shape[0]
    if w[0] <= floor:
        return np.zeros((n, n), dtype=np.complex128), STATUS_FLOOR, w[0]
    y = eval_many(enc, w).astype(np.complex128)
    out = (U * y) @ np.conj(U.T)
    return _resym(out), STATUS_OK, 0.0


@njit(cache=True)
def psd_power(H, s, floor):
    w, U = np.linalg.eigh(np.ascontiguousarray(H))
    n = w.shape[0]
    if w[0] <= floor:
        return np.zeros((n, n), dtype=np.complex128), STATUS_FLOOR, w[0]
    y = (w ** s).astype(np.complex128)
    out = (U * y) @ np.conj(U.T)
    return _resym(out), STATUS_OK, 0.0


@njit(cache=True)
def _trace_fn_of(M, enc, floor, normalized):
    w = np.linalg.eigvalsh(np.ascontiguousarray(M))
    if w[0] <= floor:
        return 0.0, STATUS_FLOOR, w[0]
    v = np.sum(eval_many(enc, w))
    if normalized:
        v /= M.shape[0]
    return v, STATUS_OK, 0.0


@njit(cache=True)
def _functional_value(A, B, Kphi, Kpsi, enc_f, enc_g, enc_h, enc_ht,
                      route, normalized, floor):
    fA, st, bad = herm_fn_apply(A, enc_f, floor)
    if st != STATUS_OK:
        return 0.0, st, bad
    gB, st, bad = herm_fn_apply(B, enc_g, floor)
    if st != STATUS_OK:
        return 0.0, st, bad
    Ap = kraus_apply(Kphi, fA)
    Bp = kraus_apply(Kpsi, gB)
    if route == 0:
        S, st, bad = psd_power(Ap, 0.5, floor)
        if st != STATUS_OK:
            return 0.0, st, bad
        M = _resym(S @ Bp @ S)
        return _trace_fn_of(M, enc_h, floor, normalized)
    Si, st, bad = psd_power(Ap, -0.5, floor)
    if st != STATUS_OK:
        return 0.0, st, bad
    Bi, st, bad = psd_power(Bp, -1.0, floor)
    if st != STATUS_OK:
        return 0.0, st, bad
    M = _resym(Si @ Bi @ Si)
    v, st, bad = _trace_fn_of(M, enc_ht, floor, normalized)
    return -v, st, bad


@njit(cache=True)
def joint_gaps(A1, B1, A2, B2, Kphi, Kpsi, enc_f, enc_g, enc_h, enc_ht,
               route, concave, normalized, floor):
    T = A1.shape[0]
    gaps = np.empty(T)
    scales = np.empty(T)
    status = np.zeros(T, dtype=np.int64)
    for t in range(T):
        v1, s1, _ = _functional_value(A1[t], B1[t], Kphi, Kpsi, enc_f, enc_g,
                                      enc_h, enc_ht, route, normalized, floor)
        v2, s2, _ = _functional_value(A2[t], B2[t], Kphi, Kpsi, enc_f, enc_g,
                                      enc_h, enc_ht, route, normalized, floor)
        vm, sm, _ = _functional_value((A1[t] + A2[t]) / 2.0, (B1[t] + B2[t]) / 2.0,
                                      Kphi, Kpsi, enc_f, enc_g,
                                      enc_h, enc_ht, route, normalized, floor)
        if s1 != STATUS_OK or s2 != STATUS_OK or sm != STATUS_OK:
            status[t] = STATUS_FLOOR
            gaps[t] = np.nan
            scales[t] = np.nan
            continue
        mean = (v1 + v2) / 2.0
        gaps[t] = (vm - mean) if concave else (mean - vm)
        scales[t] = abs(mean)
    return gaps, scales, status


@njit(cache=True)
def operator_midpoint_gaps(A1, A2, K, enc_f, enc_g, floor):
    T = A1.shape[0]
    k = K.shape[2]
    gaps = np.empty(T)
    status = np.zeros(T, dtype=np.int64)
    for t in range(T):
        X = np.empty((3, k, k), dtype=np.complex128)
        bad = False
        for p in range(3):
            if p == 0:
                A = np.ascontiguousarray(A1[t])
            elif p == 1:
                A = np.ascontiguousarray(A2[t])
            else:
                A = (A1[t] + A2[t]) / 2.0
            fA, st, _ = herm_fn_apply(A, enc_f, floor)
            if st != STATUS_OK:
                bad = True
                break
            Xp, st, _ = herm_fn_apply(kraus_apply(K, fA), enc_g, floor)
            if st != STATUS_OK:
                bad = True
                break
            X[p] = Xp
        if bad:
            status[t] = STATUS_FLOOR
            gaps[t] = np.nan
            continue
        D = (X[0] + X[1]) / 2.0 - X[2]
        gaps[t] = np.linalg.eigvalsh(_resym(D))[0]
    return gaps, status


@njit(cache=True)
def jensen_gaps(A, K, enc_fn, floor):
    T, q = A.shape[0], A.shape[1]
    k = K.shape[2]
    gaps = np.empty(T)
    status = np.zeros(T, dtype=np.int64)
    for t in range(T):
        S = np.zeros((k, k), dtype=np.complex128)
        rhs = 0.0
        bad = False
        for i in range(q):
            Ki = np.ascontiguousarray(K[i])
            Ati = np.ascontiguousarray(A[t, i])
            S += np.conj(Ki.T) @ Ati @ Ki
            fAi, st, _ = herm_fn_apply(Ati, enc_fn, floor)
            if st != STATUS_OK:
                bad = True
                break
            rhs += np.trace(np.conj(Ki.T) @ fAi @ Ki).real
        if bad:
            status[t] = STATUS_FLOOR
            gaps[t] = np.nan
            continue
        lhs, st, _ = _trace_fn_of(_resym(S), enc_fn, floor, False)
        if st != STATUS_OK:
            status[t] = STATUS_FLOOR
            gaps[t] = np.nan
            continue
        gaps[t] = rhs - lhs
    return gaps, status


@njit(cache=True)
def monotonicity_gaps(A, G, enc_fn, floor):
    T = A.shape[0]
    eig_gaps = np.empty(T)
    tr_gaps = np.empty(T)
    status = np.zeros(T, dtype=np.int64)
    for t in range(T):
        Gt = np.ascontiguousarray(G[t])
        B = _resym(A[t] + np.conj(Gt.T) @ Gt)
        wA = np.linalg.eigvalsh(np.ascontiguousarray(A[t]))
        wB = np.linalg.eigvalsh(B)
        if wA[0] <= floor or wB[0] <= floor:
            status[t] = STATUS_FLOOR
            eig_gaps[t] = np.nan
            tr_gaps[t] = np.nan
            continue
        eig_gaps[t] = np.min(wB - wA)
        tr_gaps[t] = np.sum(eval_many(enc_fn, wB)) - np.sum(eval_many(enc_fn, wA))
    return eig_gaps, tr_gaps, status


@njit(cache=True)
def remark_gaps(A1, A2, Z0, K, enc_f, enc_hb, floor):
    T = A1.shape[0]
    k = K.shape[2]
    gaps = np.empty(T)
    status = np.zeros(T, dtype=np.int64)
    for t in range(T):
        R, st, _ = psd_power(np.ascontiguousarray(Z0[t]), 0.5, floor)
        if st != STATUS_OK:
            status[t] = STATUS_FLOOR
            gaps[t] = np.nan
            continue
        X = np.empty((3, k, k), dtype=np.complex128)
        bad = False
        for p in range(3):
            if p == 0:
                A = np.ascontiguousarray(A1[t])
            elif p == 1:
                A = np.ascontiguousarray(A2[t])
            else:
                A = (A1[t] + A2[t]) / 2.0
            fA, st, _ = herm_fn_apply(A, enc_f, floor)
            if st != STATUS_OK:
                bad = True
                break
            M = _resym(R @ kraus_apply(K, fA) @ R)
            hbM, st, _ = herm_fn_apply(M, enc_hb, floor)
            if st != STATUS_OK:
                bad = True
                break
            X[p] = -hbM
        if bad:
            status[t] = STATUS_FLOOR
            gaps[t] = np.nan
            continue
        D = X[2] - (X[0] + X[1]) / 2.0
        gaps[t] = np.linalg.eigvalsh(_resym(D))[0]
    return gaps, status
