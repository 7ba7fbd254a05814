# cython: language_level=3, boundscheck=False, wraparound=False
"""Warshall closure on packed uint64 rows. Assumes a little-endian host."""

from libc.stdint cimport uint64_t
from libc.stdlib cimport calloc, free
from libc.string cimport memcpy


def transitive_closure(Py_ssize_t n, edges):
    """Same contract as ``extt._reach_py.transitive_closure``."""
    cdef Py_ssize_t words = (n + 63) // 64
    cdef Py_ssize_t i, j, k, kw
    cdef uint64_t kbit
    cdef uint64_t *rows
    cdef uint64_t *row_i
    cdef uint64_t *row_k
    if n == 0:
        return []
    rows = <uint64_t *> calloc(n * words, sizeof(uint64_t))
    if rows == NULL:
        raise MemoryError()
    try:
        for i in range(n):
            rows[i * words + i // 64] |= (<uint64_t> 1) << (i % 64)
        for a, b in edges:
            i = a
            j = b
            if i < 0 or i >= n or j < 0 or j >= n:
                raise IndexError(f"edge ({a}, {b}) out of range for {n} atoms")
            rows[i * words + j // 64] |= (<uint64_t> 1) << (j % 64)
        with nogil:
            for k in range(n):
                kw = k // 64
                kbit = (<uint64_t> 1) << (k % 64)
                row_k = rows + k * words
                for i in range(n):
                    row_i = rows + i * words
                    if row_i[kw] & kbit:
                        for j in range(words):
                            row_i[j] |= row_k[j]
        out = []
        buf = bytearray(words * 8)
        for i in range(n):
            memcpy(<char *> buf, rows + i * words, words * 8)
            out.append(int.from_bytes(buf, "little"))
        return out
    finally:
        free(rows)
