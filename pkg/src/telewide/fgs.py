"""Fast global smoother: separable edge-guided weighted least squares.

Each 1-D pass minimizes, per scanline,

    sum_p (u_p - f_p)^2 + lam * sum_p w_p (u_p - u_{p+1})^2

exactly via a tridiagonal solve.  A full iteration is a horizontal pass
followed by a vertical pass, and the smoothness weight shrinks
geometrically across iterations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class FgsParams:
    lam: float = 900.0
    sigma: float = 0.07
    iterations: int = 3

    def __post_init__(self):
        if self.lam < 0 or not self.sigma > 0 or self.iterations < 1:
            raise ValueError(f"invalid FGS parameters {self}")


def solve_tridiagonal(lower, diag, upper, rhs) -> np.ndarray:
    """Thomas algorithm, batched over leading axes.

    All arguments have shape (..., n); ``lower[..., 0]`` and
    ``upper[..., -1]`` are ignored.
    """
    a = np.asarray(lower, dtype=np.float64)
    b = np.asarray(diag, dtype=np.float64)
    c = np.asarray(upper, dtype=np.float64)
    f = np.asarray(rhs, dtype=np.float64)
    a, b, c, f = np.broadcast_arrays(a, b, c, f)
    n = b.shape[-1]
    cp = np.empty(b.shape)
    fp = np.empty(b.shape)
    denom = b[..., 0]
    assert np.all(denom != 0), "zero pivot"
    cp[..., 0] = c[..., 0] / denom
    fp[..., 0] = f[..., 0] / denom
    for i in range(1, n):
        denom = b[..., i] - a[..., i] * cp[..., i - 1]
        assert np.all(denom != 0), "zero pivot"
        cp[..., i] = c[..., i] / denom
        fp[..., i] = (f[..., i] - a[..., i] * fp[..., i - 1]) / denom
    x = np.empty(b.shape)
    x[..., -1] = fp[..., -1]
    for i in range(n - 2, -1, -1):
        x[..., i] = fp[..., i] - cp[..., i] * x[..., i + 1]
    return x


def edge_weights(guidance: np.ndarray, sigma: float, axis: int) -> np.ndarray:
    """exp(-|g_p - g_q| / sigma) between neighbours along ``axis``.

    The difference is the mean absolute difference over channels.
    """
    g = np.asarray(guidance, dtype=np.float64)
    if g.ndim == 2:
        g = g[..., None]
    diff = np.abs(np.diff(g, axis=axis)).mean(axis=2)
    return np.exp(-diff / sigma)


def wls_system(f: np.ndarray, w: np.ndarray, lam: float):
    """Tridiagonal normal equations along the last axis.

    ``w[..., k]`` couples samples k and k+1.
    """
    lw = lam * w
    lower = np.zeros(f.shape)
    upper = np.zeros(f.shape)
    lower[..., 1:] = -lw
    upper[..., :-1] = -lw
    diag = np.ones(f.shape)
    diag[..., :-1] += lw
    diag[..., 1:] += lw
    return lower, diag, upper


def wls_pass(f: np.ndarray, w: np.ndarray, lam: float) -> np.ndarray:
    """Exact minimizer of the 1-D WLS energy along the last axis.

    Solved for the correction u - f, whose right-hand side is the weighted
    Laplacian of f, so a constant line comes back bit-identical.
    """
    f = np.array(f, dtype=np.float64)
    if f.shape[-1] < 2 or lam == 0:
        return f
    lower, diag, upper = wls_system(f, w, lam)
    flux = lam * w * np.diff(f, axis=-1)  # lam w_k (f_{k+1} - f_k)
    rhs = np.zeros(f.shape)
    rhs[..., :-1] += flux
    rhs[..., 1:] -= flux
    return f + solve_tridiagonal(lower, diag, upper, rhs)


def lambda_schedule(lam: float, iterations: int) -> list[float]:
    T = iterations
    return [1.5 * lam * 4.0 ** (T - t) / (4.0 ** T - 1) for t in range(1, T + 1)]


def fgs_smooth(signal: np.ndarray, guidance: np.ndarray, params: FgsParams = FgsParams(),
               mask: np.ndarray | None = None) -> np.ndarray:
    """Smooth ``signal`` guided by ``guidance``.

    With ``mask``, only edges joining two masked pixels carry weight, so
    unmasked pixels keep their values and never feed into masked ones.
    """
    u = np.array(signal, dtype=np.float64)
    if guidance.shape[:2] != u.shape:
        raise ValueError(f"guidance {guidance.shape[:2]} vs signal {u.shape}")
    if params.lam == 0:
        return u
    wx = edge_weights(guidance, params.sigma, axis=1)  # (H, W-1)
    wy = edge_weights(guidance, params.sigma, axis=0)  # (H-1, W)
    if mask is not None:
        m = np.asarray(mask, dtype=bool)
        wx = wx * (m[:, 1:] & m[:, :-1])
        wy = wy * (m[1:, :] & m[:-1, :])
    for lam_t in lambda_schedule(params.lam, params.iterations):
        u = wls_pass(u, wx, lam_t)
        u = wls_pass(u.T, wy.T, lam_t).T
    return u
