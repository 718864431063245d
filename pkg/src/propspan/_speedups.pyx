# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the kernels in ``_pure.py``; results are bit-identical."""

from libc.stdint cimport uint32_t, int64_t

import array


def trigram_buckets(str token, Py_ssize_t n_buckets):
    cdef str padded = "<" + token + ">"
    cdef Py_ssize_t n = len(padded)
    cdef Py_ssize_t k, m
    cdef uint32_t h
    out = []
    for k in range(n - 2):
        h = 2166136261u
        for m in range(k, k + 3):
            h ^= <uint32_t>ord(padded[m])
            h *= 16777619u
        out.append(<Py_ssize_t>(h % <uint32_t>n_buckets))
    return out


cdef int64_t[:] _as_i64(seq):
    if isinstance(seq, array.array) and seq.typecode == "q":
        return seq
    try:
        mv = memoryview(seq)
    except TypeError:
        return array.array("q", list(seq))
    if mv.itemsize == 8 and mv.format.lstrip("<=@") in ("q", "l") and mv.c_contiguous:
        return mv.cast("B").cast("q")
    return array.array("q", [int(v) for v in seq])


def credit_sums(p_doc, p_start, p_end, p_tech, g_doc, g_start, g_end, g_tech, Py_ssize_t n_classes):
    cdef int64_t[:] pd = _as_i64(p_doc)
    cdef int64_t[:] ps = _as_i64(p_start)
    cdef int64_t[:] pe = _as_i64(p_end)
    cdef int64_t[:] pt = _as_i64(p_tech)
    cdef int64_t[:] gd = _as_i64(g_doc)
    cdef int64_t[:] gs = _as_i64(g_start)
    cdef int64_t[:] ge = _as_i64(g_end)
    cdef int64_t[:] gt = _as_i64(g_tech)
    prec_arr = array.array("d", [0.0]) * n_classes
    rec_arr = array.array("d", [0.0]) * n_classes
    cdef double[:] prec = prec_arr
    cdef double[:] rec = rec_arr
    cdef Py_ssize_t n_p = pd.shape[0], n_g = gd.shape[0]
    cdef Py_ssize_t i = 0, j = 0, i_end, j_end, a, b
    cdef int64_t doc, s0, s1, t0, t1, c, ov, lo, hi
    while i < n_p:
        doc = pd[i]
        i_end = i
        while i_end < n_p and pd[i_end] == doc:
            i_end += 1
        while j < n_g and gd[j] < doc:
            j += 1
        j_end = j
        while j_end < n_g and gd[j_end] == doc:
            j_end += 1
        for a in range(i, i_end):
            s0 = ps[a]
            s1 = pe[a]
            c = pt[a]
            for b in range(j, j_end):
                if gt[b] != c:
                    continue
                t0 = gs[b]
                t1 = ge[b]
                hi = s1 if s1 < t1 else t1
                lo = s0 if s0 > t0 else t0
                ov = hi - lo
                if ov > 0:
                    prec[c] += <double>ov / <double>(s1 - s0)
                    rec[c] += <double>ov / <double>(t1 - t0)
        i = i_end
    return list(prec_arr), list(rec_arr)
