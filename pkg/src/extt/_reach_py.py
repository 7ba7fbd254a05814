"""Pure-Python transitive closure over Python-int bitsets."""


def transitive_closure(n, edges):
    """Return ``rows`` where bit ``j`` of ``rows[i]`` is set iff ``j`` is reachable from ``i``.

    Reachability includes the empty path, so every row contains its own bit.
    """
    rows = [1 << i for i in range(n)]
    for a, b in edges:
        rows[a] |= 1 << b
    for k in range(n):
        bit, row_k = 1 << k, rows[k]
        for i in range(n):
            if rows[i] & bit:
                rows[i] |= row_k
    return rows
