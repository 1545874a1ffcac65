# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled versions of the arithmetic kernels in ``_kernels_py``.

Inputs small enough to be safe in 64-bit arithmetic take a C fast path;
anything larger falls through to Python-object arithmetic, so results are
always exact.
"""

from libc.stdlib cimport malloc, free

cdef long long _SMALL = 1 << 30
cdef long long _TINY = 1 << 17
_LIMIT = 1 << 62


cdef bint _all_small(list values, long long bound):
    cdef object v
    for v in values:
        if not (-bound < v < bound):
            return False
    return True


def convolve(list a_exp, list a_num, list b_exp, list b_num, cutoff=None):
    cdef Py_ssize_t na = len(a_exp), nb = len(b_exp), i, j
    cdef bint has_cut = cutoff is not None
    cdef long long cut = 0, e, lo, hi, span, ea
    cdef long long *acc
    cdef char *used
    cdef dict out = {}
    if na == 0 or nb == 0:
        return out
    if has_cut and -_SMALL < cutoff < _SMALL:
        cut = cutoff
    elif has_cut:
        return _convolve_objects(a_exp, a_num, b_exp, b_num, cutoff)
    if not (_all_small(a_exp, _SMALL) and _all_small(b_exp, _SMALL)):
        return _convolve_objects(a_exp, a_num, b_exp, b_num, cutoff)
    if max(map(abs, a_num)) * max(map(abs, b_num)) * min(na, nb) < _LIMIT:
        lo = <long long>a_exp[0] + <long long>b_exp[0]
        hi = <long long>a_exp[na - 1] + <long long>b_exp[nb - 1]
        span = hi - lo + 1
        if span <= 4 * na * nb + 64:
            acc = <long long *>malloc(span * sizeof(long long))
            used = <char *>malloc(span)
            if acc == NULL or used == NULL:
                free(acc)
                free(used)
                raise MemoryError()
            try:
                for i in range(span):
                    acc[i] = 0
                    used[i] = 0
                for i in range(na):
                    ea = a_exp[i]
                    for j in range(nb):
                        e = ea + <long long>b_exp[j]
                        if has_cut and e >= cut:
                            break
                        acc[e - lo] += (<long long>a_num[i]) * (<long long>b_num[j])
                        used[e - lo] = 1
                for i in range(span):
                    if used[i]:
                        out[lo + i] = acc[i]
            finally:
                free(acc)
                free(used)
            return out
    return _convolve_objects(a_exp, a_num, b_exp, b_num, cutoff)


cdef dict _convolve_objects(list a_exp, list a_num, list b_exp, list b_num, cutoff):
    cdef Py_ssize_t na = len(a_exp), nb = len(b_exp), i, j
    cdef dict out = {}
    cdef object pe, pa, key
    for i in range(na):
        pe = a_exp[i]
        pa = a_num[i]
        for j in range(nb):
            key = pe + b_exp[j]
            if cutoff is not None and key >= cutoff:
                break
            out[key] = out.get(key, 0) + pa * b_num[j]
    return out


def lower_faces(list xs, list ys, list hs):
    cdef Py_ssize_t n = len(xs), i, j, k, m
    cdef set seen = set()
    cdef list faces = []
    cdef list on
    cdef tuple key
    cdef bint fast = (_all_small(xs, _TINY) and _all_small(ys, _TINY)
                      and _all_small(hs, _TINY))
    cdef long long *cx
    cdef long long *cy
    cdef long long *ch
    cdef long long xi, yi, hi, ux, uy, uh, wx, wy, wh, nx, ny, nz, d
    cdef bint ok
    if not fast:
        from tropell._kernels_py import lower_faces as slow
        return slow(xs, ys, hs)
    cx = <long long *>malloc(n * sizeof(long long))
    cy = <long long *>malloc(n * sizeof(long long))
    ch = <long long *>malloc(n * sizeof(long long))
    if cx == NULL or cy == NULL or ch == NULL:
        free(cx)
        free(cy)
        free(ch)
        raise MemoryError()
    try:
        for i in range(n):
            cx[i] = xs[i]
            cy[i] = ys[i]
            ch[i] = hs[i]
        for i in range(n):
            xi = cx[i]
            yi = cy[i]
            hi = ch[i]
            for j in range(i + 1, n):
                ux = cx[j] - xi
                uy = cy[j] - yi
                uh = ch[j] - hi
                for k in range(j + 1, n):
                    wx = cx[k] - xi
                    wy = cy[k] - yi
                    nz = ux * wy - uy * wx
                    if nz == 0:
                        continue
                    wh = ch[k] - hi
                    nx = uy * wh - uh * wy
                    ny = uh * wx - ux * wh
                    if nz < 0:
                        nx = -nx
                        ny = -ny
                        nz = -nz
                    ok = True
                    for m in range(n):
                        d = nx * (cx[m] - xi) + ny * (cy[m] - yi) + nz * (ch[m] - hi)
                        if d < 0:
                            ok = False
                            break
                    if not ok:
                        continue
                    on = []
                    for m in range(n):
                        d = nx * (cx[m] - xi) + ny * (cy[m] - yi) + nz * (ch[m] - hi)
                        if d == 0:
                            on.append(m)
                    key = tuple(on)
                    if key not in seen:
                        seen.add(key)
                        faces.append((key, (i, j, k)))
    finally:
        free(cx)
        free(cy)
        free(ch)
    return faces


def inverse_series(list ks, list nums, den, Py_ssize_t n_max):
    cdef Py_ssize_t n, i, k, m = len(ks)
    cdef list weights = [num * den ** (kk - 1) for kk, num in zip(ks, nums)]
    cdef list W = [0] * n_max
    cdef object acc, prev
    cdef Py_ssize_t *ck = <Py_ssize_t *>malloc((m + 1) * sizeof(Py_ssize_t))
    if ck == NULL:
        raise MemoryError()
    try:
        for i in range(m):
            ck[i] = ks[i]
        if n_max:
            W[0] = 1
        for n in range(1, n_max):
            acc = 0
            for i in range(m):
                k = ck[i]
                if k > n:
                    break
                prev = W[n - k]
                if prev:
                    acc -= weights[i] * prev
            W[n] = acc
    finally:
        free(ck)
    return W
