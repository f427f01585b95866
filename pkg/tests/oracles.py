"""Slow, independent reference implementations used only by the tests."""

import itertools
import math

import numpy as np


def dense_wls_line(f, w, lam):
    """Minimize sum (u-f)^2 + lam * sum w_k (u_k - u_{k+1})^2 with a dense
    matrix and np.linalg.solve."""
    n = len(f)
    A = np.eye(n)
    for k in range(n - 1):
        c = lam * w[k]
        A[k, k] += c
        A[k + 1, k + 1] += c
        A[k, k + 1] -= c
        A[k + 1, k] -= c
    return np.linalg.solve(A, np.asarray(f, dtype=float))


def dense_fgs(signal, guidance, lam, sigma, iterations, mask=None):
    g = np.asarray(guidance, dtype=float)
    if g.ndim == 2:
        g = g[..., None]
    u = np.array(signal, dtype=float)
    H, W = u.shape
    m = np.ones((H, W), bool) if mask is None else np.asarray(mask, bool)
    T = iterations

    def weight(p, q):
        if not (m[p] and m[q]):
            return 0.0
        return math.exp(-np.abs(g[p] - g[q]).mean() / sigma)

    for t in range(1, T + 1):
        lam_t = 1.5 * lam * 4 ** (T - t) / (4 ** T - 1)
        for y in range(H):
            w = [weight((y, x), (y, x + 1)) for x in range(W - 1)]
            u[y] = dense_wls_line(u[y], w, lam_t)
        for x in range(W):
            w = [weight((y, x), (y + 1, x)) for y in range(H - 1)]
            u[:, x] = dense_wls_line(u[:, x], w, lam_t)
    return u


def sgm_line_oracle(costs, p1, p2):
    """Exhaustive left-to-right path cost for a single scanline.

    costs: (n, D).  E(i, d) is the cheapest energy of any disparity sequence
    ending at (i, d); the SGM recurrence with its running-min subtraction
    equals E(i, d) - min_k E(i-1, k).
    """
    n, D = costs.shape

    def pen(a, b):
        if a == b:
            return 0.0
        return p1 if abs(a - b) == 1 else p2

    E = np.empty((n, D))
    for i in range(n):
        for d in range(D):
            best = math.inf
            for seq in itertools.product(range(D), repeat=i):
                path = seq + (d,)
                e = sum(costs[j, path[j]] for j in range(i + 1))
                e += sum(pen(path[j], path[j + 1]) for j in range(i))
                best = min(best, e)
            E[i, d] = best
    L = E.copy()
    for i in range(1, n):
        L[i] = E[i] - E[i - 1].min()
    return L


def brute_edt(background):
    bg = np.asarray(background, dtype=bool)
    H, W = bg.shape
    pts = np.argwhere(bg)
    out = np.zeros((H, W))
    for y in range(H):
        for x in range(W):
            if bg[y, x]:
                continue
            out[y, x] = math.sqrt(min((y - a) ** 2 + (x - b) ** 2 for a, b in pts))
    return out


def direct_disc_blur(img, radius):
    """Disc average with edge replication, by explicit double loop."""
    img = np.asarray(img, dtype=float)
    H, W = img.shape[:2]
    r = int(math.ceil(radius))
    offs = [(dy, dx) for dy in range(-r, r + 1) for dx in range(-r, r + 1)
            if dy * dy + dx * dx <= radius * radius]
    out = np.zeros_like(img)
    for y in range(H):
        for x in range(W):
            acc = 0.0
            for dy, dx in offs:
                acc = acc + img[min(max(y + dy, 0), H - 1), min(max(x + dx, 0), W - 1)]
            out[y, x] = acc / len(offs)
    return out


def brute_softmax_expectation(costs, temperature=1.0):
    m = min(costs)
    e = [math.exp(-(c - m) / temperature) for c in costs]
    s = sum(e)
    return sum(j * ej / s for j, ej in enumerate(e))
