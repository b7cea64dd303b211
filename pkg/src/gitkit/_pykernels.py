"""Reference implementation of the diagonal-group flow kernels.

The state is ``s = (z, xi)`` where ``z_j`` are log-weights of the supported
coordinates, ``p = softmax(z)`` and ``xi`` is the algebra coordinate of the
lifted path.  With ``lam`` the supported weight rows and
``mu = hbar * p @ lam``::

    dz_j/dt  = -2 (<lam_j, mu> - |mu|^2 / hbar)
    dxi/dt   = -mu
"""

from __future__ import annotations

import numpy as np


def softmax(z: np.ndarray) -> np.ndarray:
    e = np.exp(z - np.max(z))
    return e / e.sum()


def diag_rhs(s: np.ndarray, lam: np.ndarray, hbar: float) -> np.ndarray:
    k = lam.shape[0]
    p = softmax(s[:k])
    mu = hbar * (p @ lam)
    c = float(mu @ mu) / hbar
    out = np.empty_like(s)
    out[:k] = -2.0 * (lam @ mu - c)
    out[k:] = -mu
    return out


def diag_jac(s: np.ndarray, lam: np.ndarray, hbar: float) -> np.ndarray:
    k, d = lam.shape
    p = softmax(s[:k])
    lbar = p @ lam
    mu = hbar * lbar
    dev = lam - lbar
    dmu = hbar * (p[:, None] * dev)  # row k: d mu / d z_k
    jac = np.zeros((k + d, k + d))
    jac[:k, :k] = -2.0 * (lam @ dmu.T) + 4.0 / hbar * (dmu @ mu)[None, :]
    jac[k:, :k] = -dmu.T
    return jac


def diag_observe(s: np.ndarray, lam: np.ndarray, hbar: float) -> tuple[np.ndarray, np.ndarray, float]:
    """Return ``(p, mu, grad_norm)``; the gradient norm is
    ``sqrt(2 hbar Var_p <mu, lam_j>)``."""
    k = lam.shape[0]
    p = softmax(s[:k])
    mu = hbar * (p @ lam)
    proj = lam @ mu
    mean = float(p @ proj)
    var = float(p @ (proj - mean) ** 2)
    return p, mu, float(np.sqrt(2.0 * hbar * max(var, 0.0)))
