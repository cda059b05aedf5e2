# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled bitmask kernels for masks fitting one 64-bit word.

Same contracts as the pure module; the dispatch layer guarantees every
mask passed here fits in 64 bits, so all arithmetic runs on C integers.
"""

from libc.stdint cimport uint64_t


def reindex_mask(alpha, fmap, nw):
    cdef uint64_t a = alpha
    cdef uint64_t full = (<uint64_t>1 << nw) - 1 if nw < 64 else <uint64_t>0 - 1
    cdef uint64_t out = 0
    cdef int d, c, n = len(fmap)
    for d in range(n):
        c = fmap[d]
        out |= ((a >> (c * nw)) & full) << (d * nw)
    return out


def exists_image(alpha, fibs, nw):
    cdef uint64_t a = alpha
    cdef uint64_t full = (<uint64_t>1 << nw) - 1 if nw < 64 else <uint64_t>0 - 1
    cdef uint64_t out = 0, col
    cdef int c, d, nc = len(fibs)
    for c in range(nc):
        col = 0
        for d in fibs[c]:
            col |= (a >> (d * nw)) & full
        out |= col << (c * nw)
    return out


def forall_preimage(alpha, fibs, nw):
    cdef uint64_t a = alpha
    cdef uint64_t full = (<uint64_t>1 << nw) - 1 if nw < 64 else <uint64_t>0 - 1
    cdef uint64_t out = 0, col
    cdef int c, d, nc = len(fibs)
    for c in range(nc):
        col = full
        for d in fibs[c]:
            col &= (a >> (d * nw)) & full
        out |= col << (c * nw)
    return out


def imp_mask(a, b, ne, nw, upmasks):
    cdef uint64_t am = a, bm = b
    cdef uint64_t full = (<uint64_t>1 << nw) - 1 if nw < 64 else <uint64_t>0 - 1
    cdef uint64_t out = 0, acol, bcol, col, up
    cdef uint64_t ups[64]
    cdef int e, w
    for w in range(nw):
        ups[w] = upmasks[w]
    for e in range(ne):
        acol = (am >> (e * nw)) & full
        bcol = (bm >> (e * nw)) & full
        col = 0
        for w in range(nw):
            if ups[w] & acol & ~bcol == 0:
                col |= <uint64_t>1 << w
        out |= col << (e * nw)
    return out


def exists_gap_g(alpha, beta, na, nb, nw):
    cdef uint64_t am = alpha, bm = beta
    cdef uint64_t full = (<uint64_t>1 << nw) - 1 if nw < 64 else <uint64_t>0 - 1
    cdef uint64_t acol, bcol
    cdef int a, b, hit
    g = []
    for a in range(na):
        acol = (am >> (a * nw)) & full
        hit = -1
        for b in range(nb):
            bcol = (bm >> ((a * nb + b) * nw)) & full
            if acol & ~bcol == 0:
                hit = b
                break
        if hit < 0:
            return None
        g.append(hit)
    return tuple(g)


def forall_gap_g(alpha, beta, na, nb, nw):
    cdef uint64_t am = alpha, bm = beta
    cdef uint64_t full = (<uint64_t>1 << nw) - 1 if nw < 64 else <uint64_t>0 - 1
    cdef uint64_t acol, bcol
    cdef int a, b, hit
    g = []
    for a in range(na):
        acol = (am >> (a * nw)) & full
        hit = -1
        for b in range(nb):
            bcol = (bm >> ((a * nb + b) * nw)) & full
            if bcol & ~acol == 0:
                hit = b
                break
        if hit < 0:
            return None
        g.append(hit)
    return tuple(g)


def witness_pair(alpha, beta, ni, nu, nx, nv, ny, nw):
    cdef uint64_t am = alpha, bm = beta
    cdef uint64_t full = (<uint64_t>1 << nw) - 1 if nw < 64 else <uint64_t>0 - 1
    cdef uint64_t acols[64]
    cdef uint64_t bcol
    cdef int row[64]
    cdef int i, u, iu, v, y, x, pick, found, ok
    f0 = []
    f1 = []
    for i in range(ni):
        for u in range(nu):
            iu = i * nu + u
            for x in range(nx):
                acols[x] = (am >> ((iu * nx + x) * nw)) & full
            found = -1
            for v in range(nv):
                ok = 1
                for y in range(ny):
                    bcol = (bm >> (((i * nv + v) * ny + y) * nw)) & full
                    pick = -1
                    for x in range(nx):
                        if acols[x] & ~bcol == 0:
                            pick = x
                            break
                    if pick < 0:
                        ok = 0
                        break
                    row[y] = pick
                if ok:
                    found = v
                    break
            if found < 0:
                return None
            f0.append(found)
            for y in range(ny):
                f1.append(row[y])
    return tuple(f0), tuple(f1)


def witness_pair_naive(alpha, beta, ni, nu, nx, nv, ny, nw):
    cdef uint64_t am = alpha, bm = beta
    cdef uint64_t full = (<uint64_t>1 << nw) - 1 if nw < 64 else <uint64_t>0 - 1
    cdef uint64_t acol, bcol
    cdef int f0[64]
    cdef int f1[64]
    cdef int niu = ni * nu, nf1 = ni * nu * ny
    cdef int i, u, iu, y, x, k, ok, carry
    if niu > 64 or nf1 > 64:
        raise ValueError("witness table too wide for the compiled lane")
    for k in range(niu):
        f0[k] = 0
    while True:
        for k in range(nf1):
            f1[k] = 0
        while True:
            ok = 1
            for i in range(ni):
                if not ok:
                    break
                for u in range(nu):
                    if not ok:
                        break
                    iu = i * nu + u
                    for y in range(ny):
                        x = f1[iu * ny + y]
                        acol = (am >> ((iu * nx + x) * nw)) & full
                        bcol = (bm >> (((i * nv + f0[iu]) * ny + y) * nw)) & full
                        if acol & ~bcol:
                            ok = 0
                            break
            if ok:
                return (tuple([f0[k] for k in range(niu)]),
                        tuple([f1[k] for k in range(nf1)]))
            carry = 1
            for k in range(nf1 - 1, -1, -1):
                f1[k] += carry
                if f1[k] == nx:
                    f1[k] = 0
                    carry = 1
                else:
                    carry = 0
                    break
            if carry:
                break
        carry = 1
        for k in range(niu - 1, -1, -1):
            f0[k] += carry
            if f0[k] == nv:
                f0[k] = 0
                carry = 1
            else:
                carry = 0
                break
        if carry:
            return None
