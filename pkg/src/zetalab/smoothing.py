"""Smooth cutoff v and its power-moment transform w.

The cutoff is 1 on (0, 1], 0 on [nhat, oo), and in between the standard
C-infinity logistic bump in the normalized coordinate u = (nhat-x)/(nhat-1):

    v(x) = 1 / (1 + exp(1/u - 1/(1-u)))

By symmetry v(x) + v(nhat + 1 - x) = 1 on the transition interval. All
derivatives vanish at both edges, so the transform

    w(z) = integral over (1, nhat) of -v'(x) x^z dx

can be rewritten by n-fold integration by parts as

    w(z) = (-1)^(n+1) / ((z+1)(z+2)...(z+n)) * integral v^(n+1)(x) x^(z+n) dx.

For large |Im z| the direct integral is |z|^(-n) below the size of its own
integrand (pure cancellation), while the by-parts integrand is of the same
order as the result, so the by-parts route is used above a threshold. The
quadrature is panel Gauss-Legendre with panels graded toward the transition
edges and split so the phase Im(z) * log(x) advances a bounded amount per
panel; convergence is certified by comparing against a doubled panel set.

Derivatives of the bump are evaluated by truncated Taylor-jet arithmetic on
the defining relation g' = -h' g (1 - g), h = 1/u - 1/(1-u): every
intermediate stays the size of the answer, so there is neither exp overflow
nor symbolic expression blowup.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, PrecisionError

_GL_ORDER = 16
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(_GL_ORDER)

# the bump and all derivatives up to _MAX_DERIV are below 1e-280 outside
# [U_CLIP, 1 - U_CLIP] and are taken as exactly 0 there
_U_CLIP = 1e-4
_MAX_DERIV = 6

_FACTORIALS = [math.factorial(k) for k in range(_MAX_DERIV + 2)]


def _bump_jet(u: np.ndarray, order: int) -> np.ndarray:
    """Taylor coefficients q[m] = g^(m)(u) / m! of the logistic bump, for
    m = 0..order, at each point of u (shape (order+1, len(u))).

    g solves g' = -h' g (1-g) with h = 1/u - 1/(1-u), so higher coefficients
    follow from the convolution recurrence

        (k+1) q_{k+1} = - sum_{i=0..k} (i+1) h_{i+1} r_{k-i},  r = q - q*q,

    where h_k = (-1)^k u^{-(k+1)} - (1-u)^{-(k+1)}.
    """
    u = np.asarray(u, dtype=float)
    n = order
    h = np.empty((n + 2, u.size))
    inv_a = 1.0 / u
    inv_b = 1.0 / (1.0 - u)
    pa, pb = inv_a.copy(), inv_b.copy()
    for k in range(n + 2):
        h[k] = (pa if k % 2 == 0 else -pa) - pb
        pa *= inv_a
        pb *= inv_b
    q = np.zeros((n + 1, u.size))
    e = np.exp(-np.abs(h[0]))
    q[0] = np.where(h[0] > 0, e / (1.0 + e), 1.0 / (1.0 + e))
    r = np.zeros((n + 1, u.size))
    r[0] = q[0] * (1.0 - q[0])
    for k in range(n):
        acc = np.zeros(u.size)
        for i in range(k + 1):
            acc += (i + 1) * h[i + 1] * r[k - i]
        q[k + 1] = -acc / (k + 1)
        conv = np.zeros(u.size)
        for i in range(k + 2):
            conv += q[i] * q[k + 1 - i]
        r[k + 1] = q[k + 1] - conv
    return q


def _bump(order: int, u):
    """order-th derivative of the logistic bump g(u), exactly 0 outside the
    representable window."""
    u = np.asarray(u, dtype=float)
    out = np.zeros(u.shape)
    inner = (u > _U_CLIP) & (u < 1.0 - _U_CLIP)
    if np.any(inner):
        jet = _bump_jet(u[inner], order)
        out[inner] = jet[order] * _FACTORIALS[order]
    if order == 0:
        out[u >= 1.0 - _U_CLIP] = 1.0
    return out


@dataclass(frozen=True)
class SmoothCutoff:
    """C-infinity cutoff: 1 on (0,1], 0 on [nhat, oo), monotone between."""

    nhat: float

    def __post_init__(self):
        if not self.nhat > 1.0:
            raise DomainError(f"nhat must exceed 1, got {self.nhat}")

    def _u(self, x):
        return (self.nhat - x) / (self.nhat - 1.0)

    def value(self, x):
        """v(x); exact 1.0 below 1 and exact 0.0 above nhat."""
        scalar = np.isscalar(x)
        xa = np.asarray(x, dtype=float)
        if np.any(xa <= 0):
            raise DomainError("v is defined for x > 0")
        out = np.zeros(xa.shape)
        out[xa <= 1.0] = 1.0
        mid = (xa > 1.0) & (xa < self.nhat)
        if np.any(mid):
            out[mid] = _bump(0, self._u(xa[mid]))
        return float(out) if scalar else out

    def derivative(self, x, order: int = 1):
        """order-th derivative of v; identically 0 outside (1, nhat)."""
        if not 1 <= order <= _MAX_DERIV:
            raise DomainError(f"derivative order must be in 1..{_MAX_DERIV}")
        scalar = np.isscalar(x)
        xa = np.asarray(x, dtype=float)
        out = np.zeros(xa.shape)
        mid = (xa > 1.0) & (xa < self.nhat)
        if np.any(mid):
            scale = (-1.0 / (self.nhat - 1.0)) ** order
            out[mid] = _bump(order, self._u(xa[mid])) * scale
        return float(out) if scalar else out


def v_eval(cutoff: SmoothCutoff, x):
    """Pointwise cutoff value in [0, 1]."""
    return cutoff.value(x)


# --------------------------------------------------------------- transform

def _base_edges_u() -> np.ndarray:
    """Panel edges in u, geometrically graded toward both bump edges."""
    left = [_U_CLIP]
    while left[-1] < 0.12:
        left.append(left[-1] * 1.8)
    left[-1] = 0.12
    mid = np.linspace(0.12, 0.88, 14)[1:-1].tolist()
    right = [1.0 - e for e in reversed(left)]
    return np.array(left + mid + right)


@dataclass
class WTransform:
    """Evaluator for w(z) with certified quadrature.

    rel_tol is the relative quadrature tolerance (with respect to the
    integrand mass when the target value sits below the cancellation floor
    of double precision, which only happens on the direct route and is why
    |Im z| > byparts_threshold switches to the by-parts representation).
    """

    cutoff: SmoothCutoff
    rel_tol: float = 1e-10
    byparts_threshold: float = 50.0
    byparts_depth: int = 2
    phase_per_panel: float = 8.0
    max_refinements: int = 6
    _rules: dict = field(default_factory=dict, repr=False)
    _tail_constants: dict = field(default_factory=dict, repr=False)

    # kernel_order m: integrand weight is v^(m)(x) for m >= 1, v(x) for m = 0
    def _kernel(self, order: int, x: np.ndarray) -> np.ndarray:
        if order == 0:
            return self.cutoff.value(x)
        return self.cutoff.derivative(x, order)

    def _rule(self, kernel_order: int, t_bucket: int, level: int):
        """Nodes, log-nodes and kernel-weighted weights for one resolution."""
        key = (kernel_order, t_bucket, level)
        rule = self._rules.get(key)
        if rule is not None:
            return rule
        nhat = self.cutoff.nhat
        edges_x = np.sort(nhat - _base_edges_u() * (nhat - 1.0))
        phase = self.phase_per_panel / (2 ** level)
        xs, ws = [], []
        for xa, xb in zip(edges_x[:-1], edges_x[1:]):
            dlog = math.log(xb / xa)
            pieces = max(1, math.ceil(t_bucket * dlog / phase))
            # split uniformly in log x so each piece carries bounded phase
            sub = xa * np.exp(np.linspace(0.0, dlog, pieces + 1))
            for sa, sb in zip(sub[:-1], sub[1:]):
                half = 0.5 * (sb - sa)
                xs.append(0.5 * (sa + sb) + half * _GL_NODES)
                ws.append(half * _GL_WEIGHTS)
        x = np.concatenate(xs)
        amp = np.concatenate(ws) * self._kernel(kernel_order, x)
        rule = (np.log(x), amp)
        self._rules[key] = rule
        return rule

    def _moment_batch(self, zs: np.ndarray, kernel_order: int) -> np.ndarray:
        """integral of v^(kernel_order)(x) x^z dx for a batch of exponents z,
        refined until two panel resolutions agree.

        Agreement is per element: within rel_tol of the value, or within the
        double-precision cancellation floor of the integrand mass, whichever
        is coarser. The floor only matters when heavy oscillation pushes the
        value orders of magnitude below the integrand scale; the by-parts
        caller divides it back down, so the floor never leaks into w."""
        t_max = float(np.max(np.abs(zs.imag))) if zs.size else 0.0
        t_bucket = 1 << max(0, math.ceil(math.log2(max(t_max, 1.0))))
        re_max = float(np.max(zs.real)) if zs.size else 0.0
        prev = None
        for level in range(self.max_refinements + 1):
            logx, amp = self._rule(kernel_order, t_bucket, level)
            mass = float(np.sum(np.abs(amp))) * self.cutoff.nhat ** max(re_max, 0.0)
            floor = 1e-11 * mass
            vals = np.empty(zs.shape, dtype=complex)
            for lo in range(0, zs.size, 128):
                chunk = zs[lo:lo + 128, None]
                vals[lo:lo + 128] = np.exp(chunk * logx[None, :]) @ amp
            if prev is not None:
                delta = np.abs(vals - prev)
                if bool(np.all(delta <= np.maximum(self.rel_tol * np.abs(vals), floor))):
                    return vals
            prev = vals
        raise PrecisionError(
            f"moment quadrature did not converge: kernel_order={kernel_order}, "
            f"max|Im z|={t_max:g}, refinements={self.max_refinements}, "
            f"last nodes={logx.size}")

    def w_many(self, zs) -> np.ndarray:
        """w(z) for an array of points, batched by oscillation height."""
        zs = np.asarray(zs, dtype=complex).ravel()
        out = np.empty(zs.shape, dtype=complex)
        # w(conj z) = conj(w(z)): fold to the upper half plane and dedupe
        folded = np.where(zs.imag < 0, np.conj(zs), zs)
        uniq, inverse = np.unique(folded, return_inverse=True)
        res = np.empty(uniq.shape, dtype=complex)
        direct = np.abs(uniq.imag) <= self.byparts_threshold
        if np.any(direct):
            res[direct] = -self._moment_batch(uniq[direct], 1)
        osc = ~direct
        if np.any(osc):
            n = self.byparts_depth
            z = uniq[osc]
            integral = self._moment_batch(z + n, n + 1)
            denom = np.ones(z.shape, dtype=complex)
            for j in range(1, n + 1):
                denom *= z + j
            res[osc] = ((-1.0) ** (n + 1)) * integral / denom
        out = res[inverse]
        neg = zs.imag < 0
        out[neg] = np.conj(out[neg])
        return out

    def w(self, z: complex) -> complex:
        return complex(self.w_many(np.array([z]))[0])

    def w_plateau_form(self, z: complex) -> complex:
        """Alternative representation z * integral of v(x) x^(z-1) over
        (0, nhat), valid for Re z > 0; used as a consistency oracle."""
        if not z.real > 0:
            raise DomainError("plateau form needs Re z > 0")
        tail = self._moment_batch(np.array([z - 1.0]), 0)[0]
        return 1.0 + z * tail

    def tail_constant(self, n: int, re_z_max: float, re_z_min: float = -1.0,
                      safety: float = 1.25) -> float:
        """Measured constant C_n with |w(z)| <= C_n |z|^(-n) e^(max(Re z,0))
        on a verification grid covering Re z in [re_z_min, re_z_max]."""
        if n < 1 or n != int(n):
            raise DomainError(f"tail order n must be an integer >= 1, got {n}")
        key = (int(n), round(re_z_min, 6), round(re_z_max, 6))
        cached = self._tail_constants.get(key)
        if cached is not None:
            return cached
        res = np.linspace(re_z_min, re_z_max, 7)
        ims = np.concatenate((np.linspace(1.0, 9.0, 5), np.geomspace(10.0, 2e3, 24)))
        zs = (res[:, None] + 1j * ims[None, :]).ravel()
        wv = self.w_many(zs)
        ratio = np.abs(wv) * np.abs(zs) ** n / np.exp(np.maximum(zs.real, 0.0))
        c = float(np.max(ratio)) * safety
        self._tail_constants[key] = c
        return c


def w_eval(transform: WTransform, z: complex) -> complex:
    """The transform w at a single point."""
    return transform.w(z)


def w_tail_bound(transform: WTransform, n: int, re_z_max: float) -> float:
    """Certified-on-grid decay constant C_n for |w|."""
    return transform.tail_constant(n, re_z_max)
