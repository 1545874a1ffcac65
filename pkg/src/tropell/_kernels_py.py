"""Pure-Python versions of the arithmetic kernels.

Both this module and the compiled ``_kernels`` extension expose the same
functions; ``tropell.kernels`` picks one at import time.
"""


def convolve(a_exp, a_num, b_exp, b_num, cutoff=None):
    """Sparse integer convolution of two exponent-sorted term lists.

    Returns a dict mapping exponent to the summed integer coefficient.
    Products whose exponent is ``>= cutoff`` are skipped.
    """
    out = {}
    get = out.get
    for ea, na in zip(a_exp, a_num):
        if cutoff is None:
            for eb, nb in zip(b_exp, b_num):
                e = ea + eb
                out[e] = get(e, 0) + na * nb
        else:
            for eb, nb in zip(b_exp, b_num):
                e = ea + eb
                if e >= cutoff:
                    break
                out[e] = get(e, 0) + na * nb
    return out


def lower_faces(xs, ys, hs):
    """Lower faces of the lifted point set ``(xs[i], ys[i], hs[i])``.

    All inputs are integers (heights pre-scaled to a common denominator).
    Returns a list of ``(on_plane_indices, (i, j, k))`` pairs, one per distinct
    lower face, where ``i, j, k`` span the face's supporting plane.
    """
    n = len(xs)
    seen = set()
    faces = []
    for i in range(n):
        xi = xs[i]
        yi = ys[i]
        hi = hs[i]
        for j in range(i + 1, n):
            ux = xs[j] - xi
            uy = ys[j] - yi
            uh = hs[j] - hi
            for k in range(j + 1, n):
                wx = xs[k] - xi
                wy = ys[k] - yi
                nz = ux * wy - uy * wx
                if nz == 0:
                    continue
                wh = hs[k] - hi
                nx = uy * wh - uh * wy
                ny = uh * wx - ux * wh
                if nz < 0:
                    nx, ny, nz = -nx, -ny, -nz
                on = []
                for m in range(n):
                    # nz * (height of m above the plane)
                    d = nx * (xs[m] - xi) + ny * (ys[m] - yi) + nz * (hs[m] - hi)
                    if d < 0:
                        break
                    if d == 0:
                        on.append(m)
                else:
                    key = tuple(on)
                    if key not in seen:
                        seen.add(key)
                        faces.append((key, (i, j, k)))
    return faces


def inverse_series(ks, nums, den, n_max):
    """Integer form of the inverse of ``1 + sum (nums[i]/den) z^ks[i]``.

    ``ks`` are positive and increasing.  Returns ``W`` with ``W[n] / den**n``
    the coefficient of ``z^n``, for ``n < n_max``.
    """
    weights = [num * den ** (k - 1) for k, num in zip(ks, nums)]
    W = [0] * n_max
    if n_max:
        W[0] = 1
    for n in range(1, n_max):
        acc = 0
        for k, wk in zip(ks, weights):
            if k > n:
                break
            prev = W[n - k]
            if prev:
                acc -= wk * prev
        W[n] = acc
    return W
