"""Pure-numpy version of the cube kernel (same contract as ``_kernel.cube_sums``)."""
from __future__ import annotations

import numpy as np


def _eval_vw(tab: np.ndarray, su: float, sv: np.ndarray, corner_u: int,
             side_v: np.ndarray, k: int):
    """(A, B) of every factor for fixed u, over all v, for the w-side k."""
    corners = corner_u | (side_v.astype(np.intp) << 1) | (k << 2)
    c = tab[:, corners, :]  # (nf, nv, 8)
    a = c[..., 0] + c[..., 1] * su + (c[..., 2] + c[..., 3] * su) * sv
    b = c[..., 4] + c[..., 5] * su + (c[..., 6] + c[..., 7] * su) * sv
    return a, b


def cube_sums(num, den, off, side, wt, lev, nlev):
    num = np.asarray(num, dtype=np.float64)
    den = np.asarray(den, dtype=np.float64)
    off = np.asarray(off, dtype=np.float64)
    side = np.asarray(side)
    wt = np.asarray(wt, dtype=np.float64)
    lev = np.asarray(lev)
    n = len(off)
    sums = np.zeros(nlev)
    mism = 0
    w_side = side.astype(np.intp)
    lev_vw = np.maximum(lev[:, None], lev[None, :])
    for i in range(n):
        su = off[i]
        parts = []
        for tab in (num, den):
            ab = [_eval_vw(tab, su, off, int(side[i]), side, k) for k in (0, 1)]
            a = np.stack([ab[0][0], ab[1][0]])  # (2, nf, nv)
            b = np.stack([ab[0][1], ab[1][1]])
            # pick the w-side per w-node: (nf, nv, nw)
            a_w = a[w_side].transpose(1, 2, 0)
            b_w = b[w_side].transpose(1, 2, 0)
            parts.append(a_w + b_w * off[None, None, :])
        pn = np.prod(parts[0], axis=0) if len(num) else np.ones((n, n))
        vals = parts[1]
        bad = vals <= 0.0
        mism += int(bad.sum())
        pd = np.prod(np.abs(vals), axis=0) if len(den) else np.ones((n, n))
        with np.errstate(divide="ignore", invalid="ignore"):
            f = np.where(pd > 0.0, pn / np.sqrt(pd), 0.0)
        contrib = wt[i] * wt[:, None] * wt[None, :] * f
        levels = np.maximum(lev_vw, lev[i])
        sums += np.bincount(levels.ravel(), weights=contrib.ravel(), minlength=nlev)[:nlev]
    return sums, mism, n ** 3
