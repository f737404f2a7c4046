"""Numpy implementation of the kernels in ``_kernels.pyx``.

Used when the compiled extension is unavailable or ``PEEREVAL_PURE_PYTHON``
is set. Results agree with the compiled core to rounding.
"""

import numpy as np


def ratio_sums(a, w):
    a = np.ascontiguousarray(a, dtype=float)
    w = np.ascontiguousarray(w, dtype=float)
    n = a.shape[0]
    # pair totals indexed [i, j, k]
    tot = a[:, None, :] + a[None, :, :]
    judge = (w > 0)[None, None, :] & (tot > 0)
    idx = np.arange(n)
    judge &= idx[None, None, :] != idx[:, None, None]
    judge &= idx[None, None, :] != idx[None, :, None]
    safe = np.where(judge, tot, 1.0)
    share = np.where(judge, a[:, None, :] / safe, 0.0)
    num = (share * w).sum(axis=2)
    np.fill_diagonal(num, 0.0)
    # den[i, j] is the share of j against i, i.e. num[j, i]
    return num, num.T.copy()
