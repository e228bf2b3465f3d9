# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled implementations of the hot kernels.

Mirrors ``_pyref`` exactly (same arithmetic, same branch structure) so both
backends produce bit-identical filtration values and reductions.
"""
import numpy as np

cimport numpy as cnp
from libc.math cimport cos, exp, sin, sqrt
from libc.stdlib cimport free, malloc, qsort, realloc
from libc.string cimport memset

cnp.import_array()

BACKEND_NAME = "compiled"


cdef inline double _tri_radius(double a, double b, double c) nogil:
    cdef double a2 = a * a
    cdef double b2 = b * b
    cdef double c2 = c * c
    cdef double dmax = a
    if b > dmax:
        dmax = b
    if c > dmax:
        dmax = c
    if 2.0 * dmax * dmax >= a2 + b2 + c2:
        return 0.5 * dmax
    cdef double area16 = 2.0 * (a2 * b2 + b2 * c2 + c2 * a2) - (a2 * a2 + b2 * b2 + c2 * c2)
    if area16 < 1e-300:
        area16 = 1e-300
    cdef double circ = (a * b * c) / sqrt(area16)
    if circ < 0.5 * dmax:
        circ = 0.5 * dmax
    return circ


def cech_triangle_values(double[::1] dcond, Py_ssize_t n, double r_max):
    """All triangles (i<j<k) with miniball radius <= r_max; see _pyref."""
    cdef Py_ssize_t i, j, k
    cdef long long base_i, base_j
    cdef double a, b, c, v, dmax
    cdef long long count = 0

    # Jung's bound: every triangle radius is <= diam * sqrt(1/3), so a large
    # r_max keeps everything and the counting pass can be skipped.
    dmax = 0.0
    for i in range(dcond.shape[0]):
        if dcond[i] > dmax:
            dmax = dcond[i]
    cdef bint keep_all = r_max >= dmax * 0.58
    if keep_all:
        count = (<long long> n) * (n - 1) * (n - 2) // 6
    else:
        for i in range(n - 2):
            base_i = <long long> i * n - (<long long> i * (i + 1)) // 2 - i - 1
            for j in range(i + 1, n - 1):
                a = dcond[base_i + j]
                base_j = <long long> j * n - (<long long> j * (j + 1)) // 2 - j - 1
                for k in range(j + 1, n):
                    b = dcond[base_i + k]
                    c = dcond[base_j + k]
                    v = _tri_radius(a, b, c)
                    if v <= r_max:
                        count += 1

    idx = np.empty((count, 3), dtype=np.int32)
    val = np.empty(count, dtype=np.float64)
    cdef int[:, ::1] idx_mv = idx
    cdef double[::1] val_mv = val
    cdef long long t = 0

    for i in range(n - 2):
        base_i = <long long> i * n - (<long long> i * (i + 1)) // 2 - i - 1
        for j in range(i + 1, n - 1):
            a = dcond[base_i + j]
            base_j = <long long> j * n - (<long long> j * (j + 1)) // 2 - j - 1
            for k in range(j + 1, n):
                b = dcond[base_i + k]
                c = dcond[base_j + k]
                v = _tri_radius(a, b, c)
                if keep_all or v <= r_max:
                    idx_mv[t, 0] = <int> i
                    idx_mv[t, 1] = <int> j
                    idx_mv[t, 2] = <int> k
                    val_mv[t] = v
                    t += 1
    return idx, val


def prune_redundant_triangles(double[:, ::1] D, int[:, ::1] tri_idx, double[::1] tri_val,
                              long long[:, ::1] nn, int kind):
    """Same contract as _pyref.prune_redundant_triangles."""
    cdef Py_ssize_t n = D.shape[0]
    cdef Py_ssize_t T = tri_val.shape[0]
    keep_arr = np.ones(T, dtype=np.uint8)
    cdef unsigned char[::1] keep = keep_arr
    cdef Py_ssize_t t, cand, f
    cdef long long i, j, k, v, x, y, a, b, c_
    cdef long long key_T, fkey
    cdef double vT, fv, dmax
    cdef bint ok

    for t in range(T):
        i = tri_idx[t, 0]; j = tri_idx[t, 1]; k = tri_idx[t, 2]
        vT = tri_val[t]
        key_T = (i * n + j) * n + k
        for cand in range(6):
            v = nn[tri_idx[t, cand % 3], cand // 3]
            if v == i or v == j or v == k:
                continue
            ok = True
            for f in range(3):
                if f == 0:
                    x = i; y = j
                elif f == 1:
                    x = i; y = k
                else:
                    x = j; y = k
                if kind == 0:
                    fv = _tri_radius(D[v, x], D[v, y], D[x, y])
                else:
                    dmax = D[v, x]
                    if D[v, y] > dmax:
                        dmax = D[v, y]
                    if D[x, y] > dmax:
                        dmax = D[x, y]
                    fv = 0.5 * dmax
                if fv > vT:
                    ok = False
                    break
                if fv == vT:
                    a = v if v < x else x
                    if y < a:
                        a = y
                    c_ = v if v > x else x
                    if y > c_:
                        c_ = y
                    b = v + x + y - a - c_
                    fkey = (a * n + b) * n + c_
                    if fkey >= key_T:
                        ok = False
                        break
            if ok:
                keep[t] = 0
                break
    return keep_arr


cdef extern from *:
    int __builtin_clzll(unsigned long long x)
    int __builtin_ctzll(unsigned long long x)


cdef int _cmp_int(const void* a, const void* b) noexcept nogil:
    if (<const int*> a)[0] < (<const int*> b)[0]:
        return -1
    if (<const int*> a)[0] > (<const int*> b)[0]:
        return 1
    return 0


def reduce_z2(long long[::1] col_ptr, int[::1] col_rows, Py_ssize_t n_rows, skip=None):
    """Z/2 column reduction; same contract as _pyref.reduce_z2.

    The working column is a dense bitset (adding a stored sparse column costs
    its length; the pivot scan moves monotonically downward), while claimed
    columns are stored sparse for later additions.
    """
    cdef Py_ssize_t n_cols = col_ptr.shape[0] - 1
    pivot_arr = np.full(n_cols, -1, dtype=np.int64)
    cdef long long[::1] pivot = pivot_arr
    row_off_arr = np.full(n_rows if n_rows > 0 else 1, -1, dtype=np.int64)
    row_len_arr = np.zeros(n_rows if n_rows > 0 else 1, dtype=np.int64)
    cdef long long[::1] row_off = row_off_arr
    cdef long long[::1] row_len = row_len_arr

    cdef unsigned char[::1] skip_mv
    cdef bint have_skip = skip is not None
    if have_skip:
        skip_mv = skip

    cdef Py_ssize_t words = (n_rows + 63) // 64 + 1
    cdef unsigned long long* dense = <unsigned long long*> malloc(words * sizeof(unsigned long long))
    cdef long long arena_cap = col_rows.shape[0] + 16
    cdef long long arena_len = 0
    cdef int* arena = <int*> malloc(arena_cap * sizeof(int))
    cdef long long touch_cap = 1024
    cdef long long n_touch = 0
    cdef int* touched = <int*> malloc(touch_cap * sizeof(int))
    if dense == NULL or arena == NULL or touched == NULL:
        free(dense); free(arena); free(touched)
        raise MemoryError()
    memset(dense, 0, words * sizeof(unsigned long long))

    cdef Py_ssize_t j, w, wtop
    cdef long long e, piv, out_len, own_o, own_l, r, need, a, b
    cdef unsigned long long word
    cdef int tmp
    try:
        for j in range(n_cols):
            if have_skip and skip_mv[j]:
                pivot[j] = -2
                continue
            if col_ptr[j + 1] == col_ptr[j]:
                continue
            # load the raw column, recording every toggled position
            piv = -1
            n_touch = 0
            need = col_ptr[j + 1] - col_ptr[j]
            if need > touch_cap:
                while touch_cap < need:
                    touch_cap *= 2
                touched = <int*> realloc(touched, touch_cap * sizeof(int))
                if touched == NULL:
                    raise MemoryError()
            for e in range(col_ptr[j], col_ptr[j + 1]):
                r = col_rows[e]
                dense[r >> 6] ^= (<unsigned long long> 1) << (r & 63)
                touched[n_touch] = <int> r
                n_touch += 1
                if r > piv:
                    piv = r
            while True:
                # locate the current pivot (highest set bit at or below piv)
                wtop = <Py_ssize_t> (piv >> 6)
                while wtop >= 0 and dense[wtop] == 0:
                    wtop -= 1
                if wtop < 0:
                    piv = -1
                    break  # column reduced to zero
                word = dense[wtop]
                piv = (wtop << 6) + (63 - __builtin_clzll(word))
                if row_off[piv] < 0:
                    break  # unclaimed pivot: this column owns it
                # add the stored owner column
                own_o = row_off[piv]
                own_l = row_len[piv]
                need = n_touch + own_l
                if need > touch_cap:
                    while touch_cap < need:
                        touch_cap *= 2
                    touched = <int*> realloc(touched, touch_cap * sizeof(int))
                    if touched == NULL:
                        raise MemoryError()
                for e in range(own_o, own_o + own_l):
                    r = arena[e]
                    dense[r >> 6] ^= (<unsigned long long> 1) << (r & 63)
                    touched[n_touch] = <int> r
                    n_touch += 1
            if piv >= 0:
                # claim: collect set bits among touched positions (clearing as
                # we go dedupes), insertion-sort them, store in the arena
                out_len = 0
                for e in range(n_touch):
                    r = touched[e]
                    if dense[r >> 6] & ((<unsigned long long> 1) << (r & 63)):
                        dense[r >> 6] &= ~((<unsigned long long> 1) << (r & 63))
                        touched[out_len] = <int> r
                        out_len += 1
                need = arena_len + out_len
                if need > arena_cap:
                    while arena_cap < need:
                        arena_cap *= 2
                    arena = <int*> realloc(arena, arena_cap * sizeof(int))
                    if arena == NULL:
                        raise MemoryError()
                if out_len > 48:
                    qsort(touched, out_len, sizeof(int), _cmp_int)
                else:
                    for a in range(1, out_len):
                        tmp = touched[a]
                        b = a - 1
                        while b >= 0 and touched[b] > tmp:
                            touched[b + 1] = touched[b]
                            b -= 1
                        touched[b + 1] = tmp
                row_off[piv] = arena_len
                row_len[piv] = out_len
                for e in range(out_len):
                    arena[arena_len] = touched[e]
                    arena_len += 1
                pivot[j] = piv
            # a zero column leaves the bitset clear; set bits were all toggled
            # an even number of times
    finally:
        free(dense)
        free(arena)
        free(touched)
    return pivot_arr


def anti_transpose(long long[::1] col_ptr, int[::1] col_rows, Py_ssize_t n_rows):
    """Anti-transpose of a CSC boundary block (counting sort, linear time)."""
    cdef Py_ssize_t n_cols = col_ptr.shape[0] - 1
    cdef long long nnz = col_rows.shape[0]
    new_ptr_arr = np.zeros(n_rows + 1, dtype=np.int64)
    cdef long long[::1] new_ptr = new_ptr_arr
    cdef long long e, c
    cdef Py_ssize_t r

    for e in range(nnz):
        new_ptr[n_rows - 1 - col_rows[e] + 1] += 1
    for r in range(n_rows):
        new_ptr[r + 1] += new_ptr[r]

    new_rows_arr = np.empty(nnz, dtype=np.int32)
    cdef int[::1] new_rows = new_rows_arr
    cursor_arr = np.asarray(new_ptr_arr[:-1]).copy()
    cdef long long[::1] cursor = cursor_arr

    # old columns visited in descending order -> new rows ascend in place
    for c in range(n_cols - 1, -1, -1):
        for e in range(col_ptr[c], col_ptr[c + 1]):
            r = n_rows - 1 - col_rows[e]
            new_rows[cursor[r]] = <int> (n_cols - 1 - c)
            cursor[r] += 1
    return new_ptr_arr, new_rows_arr


def merge_edges(int[:, ::1] edges, Py_ssize_t n_vertices):
    """Union-find over edges in filtration order; see _pyref.merge_edges."""
    parent_arr = np.arange(n_vertices, dtype=np.int64)
    cdef long long[::1] parent = parent_arr
    out_arr = np.zeros(edges.shape[0], dtype=np.uint8)
    cdef unsigned char[::1] out = out_arr
    cdef Py_ssize_t t
    cdef long long a, b
    for t in range(edges.shape[0]):
        a = edges[t, 0]
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        b = edges[t, 1]
        while parent[b] != b:
            parent[b] = parent[parent[b]]
            b = parent[b]
        if a != b:
            if a < b:
                parent[b] = a
            else:
                parent[a] = b
            out[t] = 1
    return out_arr


def weighted_gaussian_cross(double[:, ::1] A, double[:, ::1] B,
                            double[::1] wa, double[::1] wb, double inv_two_sigma2):
    cdef Py_ssize_t i, j
    cdef double total = 0.0, row, dx, dy
    for i in range(A.shape[0]):
        row = 0.0
        for j in range(B.shape[0]):
            dx = A[i, 0] - B[j, 0]
            dy = A[i, 1] - B[j, 1]
            row += wb[j] * exp(-inv_two_sigma2 * (dx * dx + dy * dy))
        total += wa[i] * row
    return total


def weighted_gaussian_gram(double[:, ::1] P, double[::1] w, long long[::1] off,
                           double inv_two_sigma2):
    cdef Py_ssize_t n = off.shape[0] - 1
    G = np.empty((n, n), dtype=np.float64)
    cdef double[:, ::1] G_mv = G
    cdef Py_ssize_t i, j, a, b
    cdef double total, row, dx, dy
    for i in range(n):
        for j in range(i, n):
            total = 0.0
            for a in range(off[i], off[i + 1]):
                row = 0.0
                for b in range(off[j], off[j + 1]):
                    dx = P[a, 0] - P[b, 0]
                    dy = P[a, 1] - P[b, 1]
                    row += w[b] * exp(-inv_two_sigma2 * (dx * dx + dy * dy))
                total += w[a] * row
            G_mv[i, j] = total
            G_mv[j, i] = total
    return G


def weighted_gaussian_cross_gram(double[:, ::1] PA, double[::1] wa, long long[::1] offa,
                                 double[:, ::1] PB, double[::1] wb, long long[::1] offb,
                                 double inv_two_sigma2):
    cdef Py_ssize_t na = offa.shape[0] - 1
    cdef Py_ssize_t nb = offb.shape[0] - 1
    G = np.empty((na, nb), dtype=np.float64)
    cdef double[:, ::1] G_mv = G
    cdef Py_ssize_t i, j, a, b
    cdef double total, row, dx, dy
    for i in range(na):
        for j in range(nb):
            total = 0.0
            for a in range(offa[i], offa[i + 1]):
                row = 0.0
                for b in range(offb[j], offb[j + 1]):
                    dx = PA[a, 0] - PB[b, 0]
                    dy = PA[a, 1] - PB[b, 1]
                    row += wb[b] * exp(-inv_two_sigma2 * (dx * dx + dy * dy))
                total += wa[a] * row
            G_mv[i, j] = total
    return G


def rff_features(double[:, ::1] P, double[::1] w, long long[::1] off, double[:, ::1] Z):
    cdef Py_ssize_t n = off.shape[0] - 1
    cdef Py_ssize_t M = Z.shape[0]
    out = np.zeros((n, M), dtype=np.complex128)
    cdef double complex[:, ::1] out_mv = out
    cdef Py_ssize_t ell, a, p
    cdef double phase, wx
    for ell in range(n):
        for p in range(off[ell], off[ell + 1]):
            wx = w[p]
            for a in range(M):
                phase = Z[a, 0] * P[p, 0] + Z[a, 1] * P[p, 1]
                out_mv[ell, a] = out_mv[ell, a] + wx * (cos(phase) + 1j * sin(phase))
    return out
