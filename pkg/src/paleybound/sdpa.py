"""Sparse SDPA-style text interchange for the assembled dual-form instances.

Layout:
    line 1  number of variables d
    line 2  number of blocks
    line 3  block sizes
    line 4  objective vector (maximize c.y)
    rest    one entry per line: ``varno blkno i j value``

Entries use 1-based upper-triangle indices; varno 0 is the constant matrix,
varno v >= 1 the coefficient of variable v-1 of the internal map.  The file
encodes the constraint F0 + sum_i y_i F_i >= 0 directly (the constant matrix
is written as-is, not negated); integral values are printed without a decimal
point so writing is bit-exact under round-trip.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
import scipy.sparse as sp

from .model import AffineBlock, AffineMatrix

__all__ = ["to_sdpa_text", "export_interchange", "parse_sdpa_text", "read_sdpa"]


def _fmt(value: float) -> str:
    f = float(value)
    if f == int(f):
        return str(int(f))
    return repr(f)


def _entries(mat: sp.spmatrix) -> list[tuple[int, int, float]]:
    coo = mat.tocoo()
    out = []
    for r, c, v in zip(coo.row, coo.col, coo.data):
        if r <= c and v != 0:
            out.append((int(r) + 1, int(c) + 1, float(v)))
    out.sort()
    return out


def to_sdpa_text(objective: np.ndarray, blocks) -> str:
    d = len(objective)
    lines = [str(d), str(len(blocks))]
    lines.append(" ".join(str(b.size) for b in blocks))
    lines.append(" ".join(_fmt(c) for c in objective))
    for varno in range(d + 1):
        for blkno, block in enumerate(blocks, start=1):
            mat = block.F0 if varno == 0 else block.coeffs[varno - 1]
            for i, j, v in _entries(mat):
                lines.append(f"{varno} {blkno} {i} {j} {_fmt(v)}")
    return "\n".join(lines) + "\n"


def export_interchange(inst, path) -> None:
    """Write an assembled instance (or any object with .objective/.blocks)."""
    Path(path).write_text(to_sdpa_text(inst.objective, inst.blocks))


def parse_sdpa_text(text: str) -> tuple[np.ndarray, list[AffineBlock]]:
    """Inverse of to_sdpa_text; tolerates comment lines ('*' or '\"') and the
    conventional {},() separators in the header lines."""
    lines = [
        ln for ln in (raw.strip() for raw in text.splitlines())
        if ln and not ln.startswith(("*", '"'))
    ]
    if len(lines) < 4:
        raise ValueError("truncated SDPA input: need 4 header lines")

    def fields(line: str) -> list[str]:
        for ch in "{}(),":
            line = line.replace(ch, " ")
        return line.split()

    d = int(fields(lines[0])[0])
    nblocks = int(fields(lines[1])[0])
    sizes = [int(x) for x in fields(lines[2])]
    if len(sizes) != nblocks:
        raise ValueError(f"expected {nblocks} block sizes, got {len(sizes)}")
    objective = np.array([float(x) for x in fields(lines[3])])
    if len(objective) != d:
        raise ValueError(f"expected {d} objective entries, got {len(objective)}")

    triples: dict[tuple[int, int], list[tuple[int, int, float]]] = {}
    for ln in lines[4:]:
        parts = fields(ln)
        if len(parts) != 5:
            raise ValueError(f"bad entry line: {ln!r}")
        varno, blkno = int(parts[0]), int(parts[1])
        i, j, v = int(parts[2]), int(parts[3]), float(parts[4])
        if not (0 <= varno <= d and 1 <= blkno <= nblocks):
            raise ValueError(f"entry indices out of range: {ln!r}")
        if not (1 <= i <= j <= sizes[blkno - 1]):
            raise ValueError(f"matrix position out of range: {ln!r}")
        triples.setdefault((blkno, varno), []).append((i - 1, j - 1, v))

    blocks = []
    for blkno, size in enumerate(sizes, start=1):
        mats = []
        for varno in range(d + 1):
            rows, cols, vals = [], [], []
            for i, j, v in triples.get((blkno, varno), []):
                rows.append(i)
                cols.append(j)
                vals.append(v)
                if i != j:
                    rows.append(j)
                    cols.append(i)
                    vals.append(v)
            mats.append(
                sp.coo_matrix((vals, (rows, cols)), shape=(size, size)).tocsr()
            )
        blocks.append(
            AffineBlock(
                name=f"block{blkno}",
                size=size,
                matrix=AffineMatrix(size, mats[0], mats[1:]),
            )
        )
    return objective, blocks


def read_sdpa(path) -> tuple[np.ndarray, list[AffineBlock]]:
    return parse_sdpa_text(Path(path).read_text())
