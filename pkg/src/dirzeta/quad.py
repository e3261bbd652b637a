"""Adaptive tensor-product quadrature on [0,1]^k with corner singularities.

Integrands may blow up like prod_q x_q^{e_q} with e_q > -1 at the coordinate
hyperplanes.  Each axis with a negative exponent gets the power substitution
x = t^{1/(1+e)}, after which the integrand is bounded; the transformed cube
is then integrated by tensor Gauss-Legendre with dyadic adaptive subdivision
driven by a two-order error estimate.

The implementation is float64/numpy.  Requested tolerances below ~5e-13 are
clamped there; the returned error estimate is honest about what was achieved.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .numeric import DomainError, Precision

__all__ = ["QuadResult", "quad_cube", "quad_cube_full", "quad_cube_multi"]

_F64_FLOOR = 5e-13
_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _gl_rule(order: int) -> tuple[np.ndarray, np.ndarray]:
    rule = _GL_CACHE.get(order)
    if rule is None:
        rule = np.polynomial.legendre.leggauss(order)
        _GL_CACHE[order] = rule
    return rule


def _orders_for_dim(k: int) -> tuple[int, int]:
    if k <= 1:
        return 16, 24
    if k == 2:
        return 12, 20
    return 10, 16


@dataclass(frozen=True)
class QuadResult:
    value: float
    error: float
    boxes: int

    def values(self) -> np.ndarray:
        return np.asarray([self.value])


@dataclass(frozen=True)
class _MultiResult:
    value: np.ndarray
    error: float
    boxes: int


def _tensor_points(lo: np.ndarray, hi: np.ndarray, order: int,
                   alphas: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Sample points of one box: returns (x, weights*jacobian, t)."""
    nodes, weights = _gl_rule(order)
    k = lo.size
    axes_t = []
    axes_w = []
    for i in range(k):
        mid = (lo[i] + hi[i]) / 2.0
        half = (hi[i] - lo[i]) / 2.0
        axes_t.append(mid + half * nodes)
        axes_w.append(half * weights)
    grids = np.meshgrid(*axes_t, indexing="ij")
    t = np.stack([g.ravel() for g in grids], axis=-1)
    w = axes_w[0]
    for i in range(1, k):
        w = np.multiply.outer(w, axes_w[i])
    w = w.ravel()
    x = np.empty_like(t)
    jac = np.ones_like(w)
    for i in range(k):
        a = alphas[i]
        if a == 1.0:
            x[:, i] = t[:, i]
        else:
            x[:, i] = t[:, i] ** a
            jac *= a * t[:, i] ** (a - 1.0)
    return x, w * jac, t


def _box_integral(f: Callable[[np.ndarray], np.ndarray], lo: np.ndarray,
                  hi: np.ndarray, alphas: np.ndarray, order: int,
                  m: int) -> np.ndarray:
    x, w, _ = _tensor_points(lo, hi, order, alphas)
    vals = np.asarray(f(x), dtype=float)
    if vals.ndim == 1:
        vals = vals[:, None]
    contrib = vals * w[:, None]
    # Where the jacobian underflowed to 0 the true product is bounded by the
    # corner envelope times 0; non-finite leftovers are safe to drop.
    bad = ~np.isfinite(contrib)
    if bad.any():
        contrib[bad] = 0.0
    out = contrib.sum(axis=0)
    return out if m > 1 else out[:1]


def quad_cube_multi(f: Callable[[np.ndarray], np.ndarray],
                    singular_exponents: Sequence[float],
                    prec: Precision = Precision(),
                    *, m: int = 1, max_boxes: int = 4000,
                    orders: tuple[int, int] | None = None) -> _MultiResult:
    """Adaptive integral of a vectorized integrand with m output components.

    ``f`` maps an (npts, k) array of points in (0,1]^k to (npts,) or
    (npts, m) values.  All components share the subdivision; the error
    estimate adapts on the worst component.
    """
    exps = [float(e) for e in singular_exponents]
    if any(e <= -1.0 for e in exps):
        raise DomainError("quad_cube: axis exponent <= -1 gives a divergent integral")
    k = len(exps)
    if k == 0:
        val = np.asarray(f(np.zeros((1, 0))), dtype=float).reshape(-1)
        if val.size == 1 and m > 1:
            val = np.repeat(val, m)
        return _MultiResult(val[:m] if m > 1 else val[:1], 0.0, 0)
    if k > 4:
        raise DomainError("quad_cube supports at most 4 axes")
    alphas = np.array([1.0 if e >= 0 else 1.0 / (1.0 + e) for e in exps])
    lo_order, hi_order = orders if orders is not None else _orders_for_dim(k)
    rel_tol = max(prec.eps, _F64_FLOOR)

    lo0 = np.zeros(k)
    hi0 = np.ones(k)

    def make_entry(lo: np.ndarray, hi: np.ndarray, counter: int):
        coarse = _box_integral(f, lo, hi, alphas, lo_order, m)
        fine = _box_integral(f, lo, hi, alphas, hi_order, m)
        err = float(np.max(np.abs(fine - coarse)))
        return (-err, counter, lo, hi, fine, err)

    counter = itertools.count()
    heap = [make_entry(lo0, hi0, next(counter))]
    total = heap[0][4].copy()
    total_err = heap[0][5]
    nboxes = 1
    while heap:
        scale = max(float(np.max(np.abs(total))), 1e-6)
        if total_err <= rel_tol * scale or nboxes >= max_boxes:
            break
        neg_err, _, lo, hi, fine, err = heapq.heappop(heap)
        total -= fine
        total_err -= err
        axis = int(np.argmax(hi - lo))
        mid = (lo[axis] + hi[axis]) / 2.0
        left_hi = hi.copy()
        left_hi[axis] = mid
        right_lo = lo.copy()
        right_lo[axis] = mid
        for child_lo, child_hi in ((lo, left_hi), (right_lo, hi)):
            entry = make_entry(child_lo, child_hi, next(counter))
            heapq.heappush(heap, entry)
            total += entry[4]
            total_err += entry[5]
            nboxes += 1
    return _MultiResult(total, total_err, nboxes)


def quad_cube_full(f: Callable[[np.ndarray], np.ndarray],
                   singular_exponents: Sequence[float],
                   prec: Precision = Precision(),
                   *, vectorized: bool = False,
                   max_boxes: int = 4000) -> QuadResult:
    """Integrate f over [0,1]^k, returning value plus error estimate."""
    if not vectorized:
        scalar_f = f

        def f_vec(x: np.ndarray) -> np.ndarray:
            return np.array([scalar_f(tuple(row)) for row in x], dtype=float)
    else:
        f_vec = f
    res = quad_cube_multi(f_vec, singular_exponents, prec, m=1,
                          max_boxes=max_boxes)
    return QuadResult(float(res.value[0]), res.error, res.boxes)


def quad_cube(f: Callable[[np.ndarray], np.ndarray],
              singular_exponents: Sequence[float],
              prec: Precision = Precision(),
              *, vectorized: bool = False,
              max_boxes: int = 4000) -> float:
    """Adaptive integral of f over the unit cube; see quad_cube_full."""
    return quad_cube_full(f, singular_exponents, prec,
                          vectorized=vectorized, max_boxes=max_boxes).value
