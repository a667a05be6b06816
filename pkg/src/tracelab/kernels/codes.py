"""Numeric encoding of catalog scalar functions, shared by both kernel backends.

An encoded function is a flat float64 array

    [code, sign, p0, p1, natoms, lam_1..lam_natoms, w_1..w_natoms]

so that kernels never touch Python callables.  ``sign`` is +-1 and multiplies
the base value (negation wrappers fold into it).  The per-code meaning of
(p0, p1) is:

    LOG       --                         log x
    POWER     p0 = r                     x**r
    NEGPOWER  p0 = r                     -x**(-r)
    INVPOWER  p0 = p                     x**(-p)
    AFFINE    p0 = c0, p1 = c1           c0 + c1*x
    LOEWNER   p0 = c0, p1 = c1           c0 + c1*x + sum_j w_j*(x*lam_j - 1)/(x + lam_j)
    LOGAFFINE p0 = c0, p1 = c1           c0 + c1*log x
    CPOW      p0 = c,  p1 = s            c * x**s
"""

import numpy as np

LOG = 0
POWER = 1
NEGPOWER = 2
INVPOWER = 3
AFFINE = 4
LOEWNER = 5
LOGAFFINE = 6
CPOW = 7

HEADER = 5  # entries before the atom data

STATUS_OK = 0
STATUS_FLOOR = 1  # an eigenvalue fell below the functional-calculus floor


def pack(code: int, sign: float, p0: float = 0.0, p1: float = 0.0,
         lams=(), ws=()) -> np.ndarray:
    lams = np.asarray(lams, dtype=np.float64)
    ws = np.asarray(ws, dtype=np.float64)
    if lams.shape != ws.shape:
        raise ValueError("atom positions and weights must pair up")
    enc = np.empty(HEADER + 2 * lams.size, dtype=np.float64)
    enc[0] = float(code)
    enc[1] = float(sign)
    enc[2] = float(p0)
    enc[3] = float(p1)
    enc[4] = float(lams.size)
    enc[HEADER:HEADER + lams.size] = lams
    enc[HEADER + lams.size:] = ws
    return enc
