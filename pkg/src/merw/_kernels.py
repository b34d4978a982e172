"""Numba kernels for the sequential part of path simulation.

The direction chain X_{k+1} = A_{k+1} X_{beta(k)} cannot be vectorised (each
step depends on a randomly chosen earlier step), so it runs as a compiled
loop over pre-drawn uniforms.  The action decoding must stay in lockstep with
merw.core.action_from_uniform; tests compare the two on a dense grid.
"""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def direction_walk(d, p, q, r, first_u, beta_idx, act_u, axis, sign):
    """Fill axis (0 = rest step) and sign arrays for one path.

    beta_idx[k-1] is the 0-based index of the remembered step for step k+1,
    act_u[k-1] the uniform driving the action choice.
    """
    n = axis.shape[0]
    two_d = 2 * d
    j = int(first_u * two_d)
    if j >= two_d:
        j = two_d - 1
    axis[0] = (j >> 1) + 1
    sign[0] = 1 if (j & 1) == 0 else -1
    move_hi = p + q * (two_d - 1)
    for k in range(1, n):
        u = act_u[k - 1]
        if u < p:
            s = 1
            m = 0
        elif r > 0.0 and u >= move_hi:
            axis[k] = 0
            sign[k] = 0
            continue
        else:
            if q > 0.0:
                jj = int((u - p) / q)
                if jj > two_d - 2:
                    jj = two_d - 2
            else:
                jj = 0
            if jj == 0:
                s = -1
                m = 0
            else:
                m = (jj + 1) >> 1
                s = 1 if (jj & 1) == 1 else -1
        b = beta_idx[k - 1]
        ba = axis[b]
        if ba == 0:
            axis[k] = 0
            sign[k] = 0
        else:
            na = ba - 1 - m  # m < d, so one wrap suffices
            if na < 0:
                na += d
            axis[k] = na + 1
            sign[k] = s * sign[b]


@njit(cache=True, nogil=True)
def checkpoint_stats(axis, sign, y, move_ind, cps, moves, w, s, sig):
    """One pass over a path, snapshotting aggregates at 1-based checkpoints.

    moves: running count of move_ind; w: signed axis counts (position of the
    unit-step walk); s: size-weighted position; sig: per-axis visit counts
    (diagonal of the step-direction occupation matrix).
    """
    n = axis.shape[0]
    ncp = cps.shape[0]
    d = w.shape[1]
    w_acc = np.zeros(d, np.int64)
    s_acc = np.zeros(d, np.float64)
    g_acc = np.zeros(d, np.int64)
    mv = 0
    ci = 0
    for k in range(n):
        a = axis[k]
        if a != 0:
            i = a - 1
            w_acc[i] += sign[k]
            s_acc[i] += sign[k] * y[k]
            g_acc[i] += 1
        mv += move_ind[k]
        if ci < ncp and cps[ci] == k + 1:
            moves[ci] = mv
            for i in range(d):
                w[ci, i] = w_acc[i]
                s[ci, i] = s_acc[i]
                sig[ci, i] = g_acc[i]
            ci += 1


def warmup():
    """Trigger JIT compilation once (cached on disk afterwards)."""
    axis = np.zeros(2, np.int16)
    sign = np.zeros(2, np.int8)
    direction_walk(1, 1.0, 0.0, 0.0, 0.1, np.zeros(1, np.int64), np.full(1, 0.5), axis, sign)
    checkpoint_stats(
        axis,
        sign,
        np.ones(2),
        (axis != 0).astype(np.uint8),
        np.array([2], np.int64),
        np.zeros(1, np.int64),
        np.zeros((1, 1), np.int64),
        np.zeros((1, 1), np.float64),
        np.zeros((1, 1), np.int64),
    )
