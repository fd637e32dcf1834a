"""Pure-Python forward elimination over Z/p^M (fallback for the compiled kernel)."""

from __future__ import annotations


def eliminate_mod(rows: list[list[int]], ncols: int, p: int, M: int):
    """Forward elimination modulo p**M with full minimal-valuation pivoting.

    ``rows`` holds residues in [0, p**M) and is modified in place; only the first
    ``ncols`` columns are pivot candidates (trailing columns are right-hand sides).
    On return row k carries the k-th pivot, and every row below it is zero in
    that pivot's column.  Returns (pivot_cols, pivot_vals).
    """
    mod = p**M
    n = len(rows)
    used = [False] * ncols
    pivot_cols: list[int] = []
    pivot_vals: list[int] = []
    for k in range(min(n, ncols)):
        best_v, best_i, best_j = M, -1, -1
        for i in range(k, n):
            row = rows[i]
            for j in range(ncols):
                a = row[j]
                if a == 0 or used[j]:
                    continue
                v = 0
                while a % p == 0:
                    a //= p
                    v += 1
                if v < best_v:
                    best_v, best_i, best_j = v, i, j
                    if v == 0:
                        break
            if best_v == 0:
                break
        if best_i < 0:
            break
        rows[k], rows[best_i] = rows[best_i], rows[k]
        prow = rows[k]
        ppow = p**best_v
        uinv = pow(prow[best_j] // ppow, -1, mod)
        nz = [c for c, x in enumerate(prow) if x]
        for i in range(k + 1, n):
            row = rows[i]
            a = row[best_j]
            if a == 0:
                continue
            f = (a // ppow) * uinv % mod
            for c in nz:
                row[c] = (row[c] - f * prow[c]) % mod
        used[best_j] = True
        pivot_cols.append(best_j)
        pivot_vals.append(best_v)
    return pivot_cols, pivot_vals
