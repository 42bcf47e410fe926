# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled bulk kernels. Bit-identical twin of ``_python.py``."""

from libc.stdint cimport int64_t, uint8_t, uint32_t, uint64_t

import numpy as np

IMPL = "native"

cdef uint64_t SEQ_M1 = 0xBF58476D1CE4E5B9ULL
cdef uint64_t SEQ_M2 = 0x94D049BB133111EBULL
cdef uint64_t GATE_M1 = 0xFF51AFD7ED558CCDULL
cdef uint64_t GATE_M2 = 0xC4CEB9FE1A85EC53ULL
cdef uint64_t DIGEST_SEED = 0x9E3779B97F4A7C15ULL
cdef uint64_t JUMP_LCG = 2862933555777941757ULL


cdef inline uint64_t mix64(uint64_t z) nogil:
    z ^= z >> 30
    z *= SEQ_M1
    z ^= z >> 27
    z *= SEQ_M2
    return z ^ (z >> 31)


cdef inline uint64_t gate64(uint64_t z) nogil:
    z ^= z >> 33
    z *= GATE_M1
    z ^= z >> 33
    z *= GATE_M2
    return z ^ (z >> 33)


def mix64_vec(object z_in):
    z = np.ascontiguousarray(z_in, dtype=np.uint64)
    out = np.empty(z.shape[0], dtype=np.uint64)
    cdef const uint64_t[::1] src = z
    cdef uint64_t[::1] dst = out
    cdef Py_ssize_t i, n = src.shape[0]
    with nogil:
        for i in range(n):
            dst[i] = mix64(src[i])
    return out


def gate64_vec(object z_in):
    z = np.ascontiguousarray(z_in, dtype=np.uint64)
    out = np.empty(z.shape[0], dtype=np.uint64)
    cdef const uint64_t[::1] src = z
    cdef uint64_t[::1] dst = out
    cdef Py_ssize_t i, n = src.shape[0]
    with nogil:
        for i in range(n):
            dst[i] = gate64(src[i])
    return out


def digest8_vec(object vals_in):
    vals = np.ascontiguousarray(vals_in, dtype=np.uint64)
    out = np.empty(vals.shape[0], dtype=np.uint64)
    cdef const uint64_t[::1] src = vals
    cdef uint64_t[::1] dst = out
    cdef uint64_t len_state = mix64(DIGEST_SEED ^ 8)
    cdef Py_ssize_t i, n = src.shape[0]
    with nogil:
        for i in range(n):
            dst[i] = mix64(len_state ^ src[i])
    return out


def digest16_vec(object vals_in, suffix):
    vals = np.ascontiguousarray(vals_in, dtype=np.uint64)
    out = np.empty(vals.shape[0], dtype=np.uint64)
    cdef const uint64_t[::1] src = vals
    cdef uint64_t[::1] dst = out
    cdef uint64_t sfx = <uint64_t> suffix
    cdef uint64_t len_state = mix64(DIGEST_SEED ^ 16)
    cdef Py_ssize_t i, n = src.shape[0]
    with nogil:
        for i in range(n):
            dst[i] = mix64(mix64(len_state ^ src[i]) ^ sfx)
    return out


def lookup_bulk(object seeds_in, object states_in, ring, cap):
    """See _python.lookup_bulk for the contract."""
    seeds = np.ascontiguousarray(seeds_in, dtype=np.uint64)
    states = np.ascontiguousarray(states_in, dtype=np.uint8)
    cdef Py_ssize_t n = seeds.shape[0]
    nodes = np.full(n, -1, dtype=np.int64)
    taus = np.zeros(n, dtype=np.int64)
    fallback = np.zeros(n, dtype=np.uint8)
    cdef const uint64_t[::1] sv = seeds
    cdef const uint8_t[::1] st = states
    cdef int64_t[::1] nv = nodes
    cdef int64_t[::1] tv = taus
    cdef uint8_t[::1] fv = fallback
    cdef uint64_t ring_c = <uint64_t> ring
    cdef uint64_t cap_c = <uint64_t> cap
    cdef uint64_t a = <uint64_t> st.shape[0]
    cdef uint64_t s, b, it, off, c
    cdef Py_ssize_t i
    cdef bint found
    with nogil:
        for i in range(n):
            s = sv[i]
            found = False
            for it in range(1, cap_c + 1):
                s = mix64(s)
                b = s % ring_c
                if b < a and st[b]:
                    nv[i] = <int64_t> b
                    tv[i] = <int64_t> it
                    found = True
                    break
            if not found:
                b = s % ring_c
                for off in range(ring_c):
                    c = b + off
                    if c >= ring_c:
                        c -= ring_c
                    if c < a and st[c]:
                        nv[i] = <int64_t> c
                        break
                tv[i] = <int64_t> cap_c
                fv[i] = 1
    return nodes, taus, fallback


def lookup_weighted_bulk(object seeds_in, object codes_in, cap):
    """See _python.lookup_weighted_bulk for the contract."""
    seeds = np.ascontiguousarray(seeds_in, dtype=np.uint64)
    codes = np.ascontiguousarray(codes_in, dtype=np.uint32)
    cdef Py_ssize_t n = seeds.shape[0]
    nodes = np.full(n, -1, dtype=np.int64)
    taus = np.zeros(n, dtype=np.int64)
    fallback = np.zeros(n, dtype=np.uint8)
    cdef const uint64_t[::1] sv = seeds
    cdef const uint32_t[::1] cv = codes
    cdef int64_t[::1] nv = nodes
    cdef int64_t[::1] tv = taus
    cdef uint8_t[::1] fv = fallback
    cdef uint64_t a = <uint64_t> cv.shape[0]
    cdef uint64_t cap_c = <uint64_t> cap
    cdef uint64_t s, b, it, off, c, threshold
    cdef Py_ssize_t i
    cdef bint found
    with nogil:
        for i in range(n):
            s = sv[i]
            found = False
            for it in range(1, cap_c + 1):
                s = mix64(s)
                b = s % a
                threshold = <uint64_t> cv[b]
                if cv[b] == 0xFFFFFFFFU:
                    threshold += 1
                if (gate64(s) >> 32) < threshold:
                    nv[i] = <int64_t> b
                    tv[i] = <int64_t> it
                    found = True
                    break
            if not found:
                b = s % a
                for off in range(a):
                    c = b + off
                    if c >= a:
                        c -= a
                    if cv[c]:
                        nv[i] = <int64_t> c
                        break
                tv[i] = <int64_t> cap_c
                fv[i] = 1
    return nodes, taus, fallback


def maglev_fill(object offsets_in, object skips_in, m):
    offsets = np.ascontiguousarray(offsets_in, dtype=np.int64)
    skips = np.ascontiguousarray(skips_in, dtype=np.int64)
    cdef Py_ssize_t n = offsets.shape[0]
    cdef int64_t m_c = <int64_t> m
    table = np.full(m_c, -1, dtype=np.int64)
    next_j = np.zeros(n, dtype=np.int64)
    cdef const int64_t[::1] ov = offsets
    cdef const int64_t[::1] kv = skips
    cdef int64_t[::1] tbl = table
    cdef int64_t[::1] nj = next_j
    cdef int64_t filled = 0
    cdef int64_t j, c
    cdef Py_ssize_t node
    with nogil:
        while True:
            for node in range(n):
                j = nj[node]
                c = (ov[node] + j * kv[node]) % m_c
                while tbl[c] >= 0:
                    j += 1
                    c = (ov[node] + j * kv[node]) % m_c
                tbl[c] = node
                nj[node] = j + 1
                filled += 1
                if filled == m_c:
                    break
            if filled == m_c:
                break
    return table


def jump_bulk(object keys_in, n):
    keys = np.ascontiguousarray(keys_in, dtype=np.uint64)
    cdef Py_ssize_t size = keys.shape[0]
    out = np.empty(size, dtype=np.int64)
    cdef const uint64_t[::1] kv = keys
    cdef int64_t[::1] bv = out
    cdef int64_t n_c = <int64_t> n
    cdef uint64_t k
    cdef int64_t b, j
    cdef Py_ssize_t i
    with nogil:
        for i in range(size):
            k = kv[i]
            b = -1
            j = 0
            while j < n_c:
                b = j
                k = k * JUMP_LCG + 1
                j = <int64_t> (((<uint64_t> (b + 1)) << 31) / ((k >> 33) + 1))
            bv[i] = b
    return out
