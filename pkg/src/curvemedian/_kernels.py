"""Numba kernels: free-space reachability, distance DPs and subset scans.

Everything here works on plain C-contiguous float64 arrays so the kernels
stay allocation-light and releasable (``nogil``).  Floating-point behavior
is deterministic: no fastmath, fixed evaluation order.
"""

import math

import numpy as np
from numba import njit

#: Absolute guard (in normalized edge coordinates) for near-tangent
#: circle/segment intersections in the free-space diagram.
TANGENT_GUARD = 1e-12


@njit(cache=True, nogil=True, inline="always")
def _sqdist(A, i, B, j, d):
    s = 0.0
    for k in range(d):
        t = A[i, k] - B[j, k]
        s += t * t
    return s


@njit(cache=True, nogil=True)
def _free_interval(A, ia, ib, B, ic, eps, d):
    """Sub-interval of [0,1] where ``||A[ia] + t*(A[ib]-A[ia]) - B[ic]|| <= eps``.

    Returns ``(lo, hi)`` clamped to [0,1]; ``lo > hi`` encodes empty.
    """
    a = 0.0
    b = 0.0
    c = 0.0
    for k in range(d):
        e = A[ib, k] - A[ia, k]
        f = A[ia, k] - B[ic, k]
        a += e * e
        b += e * f
        c += f * f
    c -= eps * eps
    if a <= 0.0:
        if c <= 0.0:
            return 0.0, 1.0
        return 1.0, -1.0
    bn = b / a
    cn = c / a
    disc = bn * bn - cn
    if disc < 0.0:
        if disc >= -TANGENT_GUARD:
            disc = 0.0
        else:
            return 1.0, -1.0
    sq = math.sqrt(disc)
    lo = -bn - sq
    hi = -bn + sq
    if lo < 0.0:
        lo = 0.0
    if hi > 1.0:
        hi = 1.0
    return lo, hi


@njit(cache=True, nogil=True)
def decide(P, Q, eps):
    """True iff the Frechet distance of the two vertex arrays is <= eps.

    Monotone reachability over the free-space diagram, O(|P|*|Q|) time and
    O(|Q|) memory.  Degenerate one-vertex curves reduce to point checks.
    """
    p = P.shape[0]
    q = Q.shape[0]
    d = P.shape[1]
    e2 = eps * eps
    if _sqdist(P, 0, Q, 0, d) > e2 or _sqdist(P, p - 1, Q, q - 1, d) > e2:
        return False
    if p == 1 or q == 1:
        if p == 1:
            for j in range(q):
                if _sqdist(P, 0, Q, j, d) > e2:
                    return False
        else:
            for i in range(p):
                if _sqdist(Q, 0, P, i, d) > e2:
                    return False
        return True

    nrow = p - 1
    ncol = q - 1
    bot_lo = np.empty(ncol, dtype=np.float64)
    bot_hi = np.empty(ncol, dtype=np.float64)

    # Bottom border: walkable from the start corner while fully free.
    border_ok = True
    for j in range(ncol):
        if border_ok:
            lo, hi = _free_interval(Q, j, j + 1, P, 0, eps, d)
            if lo == 0.0 and hi >= lo:
                bot_lo[j] = 0.0
                bot_hi[j] = hi
                border_ok = hi == 1.0
            else:
                bot_lo[j] = 1.0
                bot_hi[j] = -1.0
                border_ok = False
        else:
            bot_lo[j] = 1.0
            bot_hi[j] = -1.0

    left_border_ok = True
    for i in range(nrow):
        # Left border segment of this row.
        llo, lhi = _free_interval(P, i, i + 1, Q, 0, eps, d)
        if left_border_ok and llo == 0.0 and lhi >= llo:
            left_lo = 0.0
            left_hi = lhi
            left_border_ok = lhi == 1.0
        else:
            left_lo = 1.0
            left_hi = -1.0
            left_border_ok = False

        for j in range(ncol):
            blo = bot_lo[j]
            bhi = bot_hi[j]
            bot_ok = blo <= bhi
            left_ok = left_lo <= left_hi
            if i == nrow - 1 and j == ncol - 1:
                return bot_ok or left_ok

            # Right boundary of cell (i, j): sigma edge i vs tau vertex j+1.
            rlo, rhi = _free_interval(P, i, i + 1, Q, j + 1, eps, d)
            if bot_ok:
                new_left_lo = rlo
                new_left_hi = rhi
            elif left_ok:
                new_left_lo = rlo if rlo > left_lo else left_lo
                new_left_hi = rhi
            else:
                new_left_lo = 1.0
                new_left_hi = -1.0

            # Top boundary of cell (i, j): tau edge j vs sigma vertex i+1.
            tlo, thi = _free_interval(Q, j, j + 1, P, i + 1, eps, d)
            if left_ok:
                bot_lo[j] = tlo
                bot_hi[j] = thi
            elif bot_ok:
                bot_lo[j] = tlo if tlo > blo else blo
                bot_hi[j] = thi
            else:
                bot_lo[j] = 1.0
                bot_hi[j] = -1.0

            left_lo = new_left_lo
            left_hi = new_left_hi

    return False  # unreachable; loop returns at the last cell


@njit(cache=True, nogil=True)
def discrete_frechet(P, Q):
    """Discrete Frechet distance over the vertex sequences (upper bound on
    the continuous distance)."""
    p = P.shape[0]
    q = Q.shape[0]
    d = P.shape[1]
    ca = np.empty((p, q), dtype=np.float64)
    ca[0, 0] = math.sqrt(_sqdist(P, 0, Q, 0, d))
    for i in range(1, p):
        v = math.sqrt(_sqdist(P, i, Q, 0, d))
        ca[i, 0] = v if v > ca[i - 1, 0] else ca[i - 1, 0]
    for j in range(1, q):
        v = math.sqrt(_sqdist(P, 0, Q, j, d))
        ca[0, j] = v if v > ca[0, j - 1] else ca[0, j - 1]
    for i in range(1, p):
        for j in range(1, q):
            m = ca[i - 1, j]
            if ca[i - 1, j - 1] < m:
                m = ca[i - 1, j - 1]
            if ca[i, j - 1] < m:
                m = ca[i, j - 1]
            v = math.sqrt(_sqdist(P, i, Q, j, d))
            ca[i, j] = v if v > m else m
    return ca[p - 1, q - 1]


@njit(cache=True, nogil=True)
def bisect_distance(P, Q, rel_tol, abs_tol):
    """Frechet distance via bisection between the endpoint lower bound and
    the discrete upper bound, returning the feasible (upper) bracket end."""
    p = P.shape[0]
    q = Q.shape[0]
    d = P.shape[1]
    a = math.sqrt(_sqdist(P, 0, Q, 0, d))
    b = math.sqrt(_sqdist(P, p - 1, Q, q - 1, d))
    lo = a if a > b else b
    hi = discrete_frechet(P, Q)
    if hi < lo:
        hi = lo
    if hi == lo or decide(P, Q, lo):
        return lo
    for _ in range(120):
        tol = rel_tol * hi
        if abs_tol > tol:
            tol = abs_tol
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if decide(P, Q, mid):
            hi = mid
        else:
            lo = mid
    return hi


@njit(cache=True, nogil=True)
def segment_distance(a, b, U):
    """Exact Frechet distance between the segment ``a -> b`` and the curve
    with vertex array ``U``.

    For a single-edge curve the free-space diagram is one row of convex
    cells, so reachability reduces to monotone stabbing of the vertex
    intervals; the critical radii of every stabbing constraint have closed
    forms, and the distance is their maximum:

    * endpoint matches ``|a - U[0]|`` and ``|b - U[-1]|``,
    * each interior vertex within the radius of the segment,
    * for each ordered interior pair, the radius where their intervals
      start to overlap monotonically (or one of them can slide to a
      segment endpoint).

    A degenerate segment (``a == b``) is the constant curve; its distance
    is the maximum vertex distance.
    """
    m = U.shape[0]
    d = U.shape[1]
    e0 = 0.0
    e1 = 0.0
    for k in range(d):
        t0 = a[k] - U[0, k]
        t1 = b[k] - U[m - 1, k]
        e0 += t0 * t0
        e1 += t1 * t1
    best2 = e0 if e0 > e1 else e1
    if m <= 2:
        return math.sqrt(best2)

    ww = 0.0
    for k in range(d):
        w = b[k] - a[k]
        ww += w * w
    if ww == 0.0:
        for j in range(m):
            s = 0.0
            for k in range(d):
                t = a[k] - U[j, k]
                s += t * t
            if s > best2:
                best2 = s
        return math.sqrt(best2)

    nint = m - 2
    dot = np.empty(nint, dtype=np.float64)
    cc = np.empty(nint, dtype=np.float64)
    perp2 = np.empty(nint, dtype=np.float64)
    for j in range(nint):
        dj = 0.0
        cj = 0.0
        for k in range(d):
            w = b[k] - a[k]
            f = U[j + 1, k] - a[k]
            dj += w * f
            cj += f * f
        dot[j] = dj
        cc[j] = cj
        p2 = cj - dj * dj / ww
        if p2 < 0.0:
            p2 = 0.0
        perp2[j] = p2
        # distance from the vertex to the segment
        t = dj / ww
        if t < 0.0:
            t = 0.0
        elif t > 1.0:
            t = 1.0
        seg2 = cj - 2.0 * t * dj + t * t * ww
        if seg2 > best2:
            best2 = seg2

    for j in range(nint):
        for j2 in range(j + 1, nint):
            g = dot[j] - dot[j2]
            if g <= 0.0:
                continue  # intervals already ordered; no extra constraint
            G2 = g * g / ww
            A2 = perp2[j]
            B2 = perp2[j2]
            # Radius where interval j may reach past interval j2.
            if G2 >= abs(A2 - B2):
                h = (G2 + A2 - B2) / (2.0 * math.sqrt(G2))
                pair2 = B2 + h * h
            else:
                pair2 = A2 if A2 > B2 else B2
            # Alternatives: vertex j slides to the segment start, or vertex
            # j2 slides to the segment end.
            rl2 = cc[j] if dot[j] > 0.0 else A2
            if rl2 < pair2:
                pair2 = rl2
            if dot[j2] < ww:
                rr2 = 0.0
                for k in range(d):
                    t = U[j2 + 1, k] - b[k]
                    rr2 += t * t
            else:
                rr2 = B2
            if rr2 < pair2:
                pair2 = rr2
            if pair2 > best2:
                best2 = pair2
    return math.sqrt(best2)


@njit(cache=True, nogil=True)
def segment_distance_batch(A, B, U, out):
    """``out[i] = segment_distance(A[i], B[i], U)`` for endpoint arrays."""
    for i in range(A.shape[0]):
        out[i] = segment_distance(A[i], B[i], U)


@njit(cache=True, nogil=True)
def shortcut_errors(V):
    """Upper-triangular matrix of shortcut errors for simplification.

    ``E[i, j] = d_F(segment(V[i] -> V[j]), V[i..j])`` for ``i < j``; the
    lower triangle (including the diagonal) is +inf.  Adjacent vertices
    have error exactly 0.
    """
    m = V.shape[0]
    E = np.full((m, m), np.inf, dtype=np.float64)
    for i in range(m):
        for j in range(i + 1, m):
            if j == i + 1:
                E[i, j] = 0.0
            else:
                E[i, j] = segment_distance(V[i], V[j], V[i : j + 1])
    return E


@njit(cache=True, nogil=True)
def exhaustive_median_1(D):
    """Best single row of the candidate-by-point distance matrix."""
    n = D.shape[0]
    npts = D.shape[1]
    best = np.inf
    bi = -1
    for i in range(n):
        s = 0.0
        for t in range(npts):
            s += D[i, t]
            if s >= best:
                break
        if s < best:
            best = s
            bi = i
    return best, bi


@njit(cache=True, nogil=True)
def exhaustive_median_2(D):
    n = D.shape[0]
    npts = D.shape[1]
    best = np.inf
    bi = -1
    bj = -1
    for i in range(n):
        for j in range(i + 1, n):
            s = 0.0
            ok = True
            for t in range(npts):
                a = D[i, t]
                b = D[j, t]
                s += a if a < b else b
                if s >= best:
                    ok = False
                    break
            if ok and s < best:
                best = s
                bi = i
                bj = j
    return best, bi, bj


@njit(cache=True, nogil=True)
def exhaustive_median_3(D):
    n = D.shape[0]
    npts = D.shape[1]
    best = np.inf
    bi = -1
    bj = -1
    bk = -1
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                s = 0.0
                ok = True
                for t in range(npts):
                    v = D[i, t]
                    b = D[j, t]
                    c = D[k, t]
                    if b < v:
                        v = b
                    if c < v:
                        v = c
                    s += v
                    if s >= best:
                        ok = False
                        break
                if ok and s < best:
                    best = s
                    bi = i
                    bj = j
                    bk = k
    return best, bi, bj, bk
