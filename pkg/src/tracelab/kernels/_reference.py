"""Pure-numpy reference implementation of the hot kernels.

Semantically identical to the accelerated backend; every function here is the
ground truth the jitted versions are tested against.  Trial loops are plain
Python loops over numpy calls.
"""

import numpy as np

from .codes import (
    LOG, POWER, NEGPOWER, INVPOWER, AFFINE, LOEWNER, LOGAFFINE, CPOW,
    HEADER, STATUS_OK, STATUS_FLOOR,
)

IS_ACCELERATED = False


def eval_many(enc, xs):
    """Evaluate an encoded catalog function on an array of positive points."""
    xs = np.asarray(xs, dtype=np.float64)
    code = int(enc[0])
    sign, p0, p1 = enc[1], enc[2], enc[3]
    if code == LOG:
        y = np.log(xs)
    elif code == POWER:
        y = xs ** p0
    elif code == NEGPOWER:
        y = -(xs ** -p0)
    elif code == INVPOWER:
        y = xs ** -p0
    elif code == AFFINE:
        y = p0 + p1 * xs
    elif code == LOEWNER:
        natoms = int(enc[4])
        lams = enc[HEADER:HEADER + natoms]
        ws = enc[HEADER + natoms:HEADER + 2 * natoms]
        y = p0 + p1 * xs
        for lam, w in zip(lams, ws):
            y = y + w * (xs * lam - 1.0) / (xs + lam)
    elif code == LOGAFFINE:
        y = p0 + p1 * np.log(xs)
    elif code == CPOW:
        y = p0 * xs ** p1
    else:
        raise ValueError(f"unknown function code {code}")
    return sign * y


def _resym(M):
    return (M + M.conj().T) / 2.0


def kraus_apply(K, X):
    """Sum_i C_i^* X C_i for a Kraus stack K of shape (q, m, k)."""
    out = np.zeros((K.shape[2], K.shape[2]), dtype=np.complex128)
    for i in range(K.shape[0]):
        out += K[i].conj().T @ X @ K[i]
    return _resym(out)


def herm_fn_apply(H, enc, floor):
    """Functional calculus on a Hermitian matrix.

    Returns (out, status, bad_eig); on a floor violation out is zeros and
    bad_eig is the offending eigenvalue.
    """
    w, U = np.linalg.eigh(H)
    if w[0] <= floor:
        return np.zeros_like(H), STATUS_FLOOR, w[0]
    y = eval_many(enc, w).astype(np.complex128)
    return _resym((U * y) @ U.conj().T), STATUS_OK, 0.0


def psd_power(H, s, floor):
    """H**s through the spectral decomposition, for PD Hermitian H."""
    w, U = np.linalg.eigh(H)
    if w[0] <= floor:
        return np.zeros_like(H), STATUS_FLOOR, w[0]
    y = (w ** s).astype(np.complex128)
    return _resym((U * y) @ U.conj().T), STATUS_OK, 0.0


def _trace_fn_of(M, enc, floor, normalized):
    """Tr fn(M) via eigenvalues; returns (value, status, bad)."""
    w = np.linalg.eigvalsh(M)
    if w[0] <= floor:
        return 0.0, STATUS_FLOOR, w[0]
    v = float(np.sum(eval_many(enc, w)))
    if normalized:
        v /= M.shape[0]
    return v, STATUS_OK, 0.0


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


def joint_gaps(A1, B1, A2, B2, Kphi, Kpsi, enc_f, enc_g, enc_h, enc_ht,
               route, concave, normalized, floor):
    """Midpoint gaps of the two-variable trace functional over stacked trials.

    route 0 evaluates Tr h(Phi(f(A))^{1/2} Psi(g(B)) Phi(f(A))^{1/2}); route 1
    evaluates the equivalent -Tr h~(...inverse form...).  Gap sign follows the
    tested direction: mean-minus-midpoint when convexity is claimed,
    midpoint-minus-mean when concavity is.
    """
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
        if s1 or s2 or sm:
            status[t] = STATUS_FLOOR
            gaps[t] = np.nan
            scales[t] = np.nan
            continue
        mean = (v1 + v2) / 2.0
        gaps[t] = (vm - mean) if concave else (mean - vm)
        scales[t] = abs(mean)
    return gaps, scales, status


def operator_midpoint_gaps(A1, A2, K, enc_f, enc_g, floor):
    """Per-trial min eigenvalue of g(Phi(f(A1)))▽g(Phi(f(A2))) - g(Phi(f(A1▽A2)))."""
    T = A1.shape[0]
    gaps = np.empty(T)
    status = np.zeros(T, dtype=np.int64)
    for t in range(T):
        Xs = []
        bad = False
        for A in (A1[t], A2[t], (A1[t] + A2[t]) / 2.0):
            fA, st, _ = herm_fn_apply(A, enc_f, floor)
            if st != STATUS_OK:
                bad = True
                break
            X, st, _ = herm_fn_apply(kraus_apply(K, fA), enc_g, floor)
            if st != STATUS_OK:
                bad = True
                break
            Xs.append(X)
        if bad:
            status[t] = STATUS_FLOOR
            gaps[t] = np.nan
            continue
        D = (Xs[0] + Xs[1]) / 2.0 - Xs[2]
        gaps[t] = np.linalg.eigvalsh(_resym(D))[0]
    return gaps, status


def jensen_gaps(A, K, enc_fn, floor):
    """Trace Jensen gaps Tr sum C_i^* f(A_i) C_i - Tr f(sum C_i^* A_i C_i)."""
    T, q = A.shape[0], A.shape[1]
    gaps = np.empty(T)
    status = np.zeros(T, dtype=np.int64)
    for t in range(T):
        S = np.zeros((K.shape[2], K.shape[2]), dtype=np.complex128)
        rhs = 0.0
        bad = False
        for i in range(q):
            S += K[i].conj().T @ A[t, i] @ K[i]
            fAi, st, _ = herm_fn_apply(A[t, i], enc_fn, floor)
            if st != STATUS_OK:
                bad = True
                break
            rhs += float(np.trace(K[i].conj().T @ fAi @ K[i]).real)
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


def monotonicity_gaps(A, G, enc_fn, floor):
    """Eigenvalue-ordering and trace gaps for pairs (A, B = A + G^* G)."""
    T = A.shape[0]
    eig_gaps = np.empty(T)
    tr_gaps = np.empty(T)
    status = np.zeros(T, dtype=np.int64)
    for t in range(T):
        B = _resym(A[t] + G[t].conj().T @ G[t])
        wA = np.linalg.eigvalsh(A[t])
        wB = np.linalg.eigvalsh(B)
        if wA[0] <= floor or wB[0] <= floor:
            status[t] = STATUS_FLOOR
            eig_gaps[t] = np.nan
            tr_gaps[t] = np.nan
            continue
        eig_gaps[t] = float(np.min(wB - wA))
        tr_gaps[t] = float(np.sum(eval_many(enc_fn, wB)) - np.sum(eval_many(enc_fn, wA)))
    return eig_gaps, tr_gaps, status


def remark_gaps(A1, A2, Z0, K, enc_f, enc_hb, floor):
    """Min-eig midpoint concavity gaps of A -> -hb(Z0^{1/2} Phi(f(A)) Z0^{1/2})."""
    T = A1.shape[0]
    gaps = np.empty(T)
    status = np.zeros(T, dtype=np.int64)
    for t in range(T):
        R, st, _ = psd_power(Z0[t], 0.5, floor)
        if st != STATUS_OK:
            status[t] = STATUS_FLOOR
            gaps[t] = np.nan
            continue
        Xs = []
        bad = False
        for A in (A1[t], A2[t], (A1[t] + A2[t]) / 2.0):
            fA, st, _ = herm_fn_apply(A, enc_f, floor)
            if st != STATUS_OK:
                bad = True
                break
            M = _resym(R @ kraus_apply(K, fA) @ R)
            hbM, st, _ = herm_fn_apply(M, enc_hb, floor)
            if st != STATUS_OK:
                bad = True
                break
            Xs.append(-hbM)
        if bad:
            status[t] = STATUS_FLOOR
            gaps[t] = np.nan
            continue
        D = Xs[2] - (Xs[0] + Xs[1]) / 2.0
        gaps[t] = np.linalg.eigvalsh(_resym(D))[0]
    return gaps, status
