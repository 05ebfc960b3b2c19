"""Pure-Python fraction-free elimination (fallback for the compiled core)."""


def rref_fraction_free(rows, ncols):
    """Fraction-free Gauss-Jordan elimination of an integer matrix.

    ``rows`` is a list of lists of Python ints and is modified in place.
    Returns ``(pivots, d)``: row ``i < len(pivots)`` has ``d`` at column
    ``pivots[i]`` and zero in every other pivot column; rows past the rank are
    zero.  Every division is exact (entries stay minors of the input).
    """
    nrows = len(rows)
    pivots = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = r
        while p < nrows and rows[p][c] == 0:
            p += 1
        if p == nrows:
            continue
        if p != r:
            rows[p], rows[r] = rows[r], rows[p]
        prow = rows[r]
        piv = prow[c]
        for i in range(nrows):
            if i == r:
                continue
            row = rows[i]
            f = row[c]
            if f == 0:
                if piv != prev:
                    for j in range(ncols):
                        if row[j]:
                            row[j] = piv * row[j] // prev
                continue
            for j in range(ncols):
                row[j] = (piv * row[j] - f * prow[j]) // prev
        prev = piv
        pivots.append(c)
        r += 1
    return pivots, prev
