"""Grid file formats: a small text carrier and PGM images.

Text format::

    ypgrid <rank> <float64|int64>
    <lower coords>
    <upper coords>
    <values, whitespace separated, first dimension fastest>

PGM (P2 ascii or P5 binary, maxval <= 65535) carries rank-2 float64 grids
with pixel values mapped to [0, maxval] as-is.  On write, values are
clamped to [0, maxval] and rounded half-to-even; the input's magic (P2/P5)
is preserved.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GridError, SizeMismatchError


@dataclass
class GridData:
    """Raw grid contents plus enough metadata to write them back."""

    lower: tuple[int, ...]
    upper: tuple[int, ...]
    values: np.ndarray  # 1-D, first dimension fastest
    elem_type: str
    pgm_maxval: int | None = None
    pgm_magic: str | None = None

    @property
    def rank(self) -> int:
        return len(self.lower)

    def extent_shape(self) -> tuple[int, ...]:
        return tuple(u - l for l, u in zip(self.lower, self.upper))


def read_grid_text(path) -> GridData:
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().split("\n")
    if not lines or not lines[0].startswith("ypgrid"):
        raise GridError(f"{path}: not a ypgrid file")
    header = lines[0].split()
    if len(header) != 3 or header[2] not in ("float64", "int64"):
        raise GridError(f"{path}: malformed header {lines[0]!r}")
    rank = int(header[1])
    if len(lines) < 3:
        raise GridError(f"{path}: truncated header")
    lower = tuple(int(t) for t in lines[1].split())
    upper = tuple(int(t) for t in lines[2].split())
    if len(lower) != rank or len(upper) != rank:
        raise GridError(f"{path}: extent lines disagree with rank {rank}")
    body = " ".join(lines[3:]).split()
    dtype = np.float64 if header[2] == "float64" else np.int64
    values = np.array([dtype(t) for t in body], dtype=dtype)
    count = int(np.prod([u - l for l, u in zip(lower, upper)]))
    if values.size != count:
        raise SizeMismatchError(f"{path}: expected {count} values, found {values.size}")
    return GridData(lower=lower, upper=upper, values=values, elem_type=header[2])


def write_grid_text(path, gd: GridData):
    parts = [
        f"ypgrid {gd.rank} {gd.elem_type}",
        " ".join(str(c) for c in gd.lower),
        " ".join(str(c) for c in gd.upper),
    ]
    if gd.elem_type == "float64":
        parts.append(" ".join(repr(float(v)) for v in gd.values))
    else:
        parts.append(" ".join(str(int(v)) for v in gd.values))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(parts) + "\n")


def _pgm_header_tokens(data: bytes):
    # yields header tokens, skipping '#' comments; returns the body offset
    tokens = []
    i = 0
    while len(tokens) < 4 and i < len(data):
        ch = data[i : i + 1]
        if ch in b" \t\r\n":
            i += 1
            continue
        if ch == b"#":
            while i < len(data) and data[i : i + 1] != b"\n":
                i += 1
            continue
        j = i
        while j < len(data) and data[j : j + 1] not in b" \t\r\n":
            j += 1
        tokens.append(data[i:j].decode("ascii"))
        i = j
        if len(tokens) == 4:
            i += 1  # single whitespace byte separates header and raster
    return tokens, i


def read_pgm(path) -> GridData:
    with open(path, "rb") as fh:
        data = fh.read()
    tokens, body_at = _pgm_header_tokens(data)
    if len(tokens) != 4 or tokens[0] not in ("P2", "P5"):
        raise GridError(f"{path}: not a P2/P5 PGM file")
    magic = tokens[0]
    width, height, maxval = int(tokens[1]), int(tokens[2]), int(tokens[3])
    if not 0 < maxval <= 65535:
        raise GridError(f"{path}: unsupported maxval {maxval}")
    count = width * height
    if magic == "P2":
        pixels = np.array(data[body_at:].split(), dtype=np.int64)
    else:
        raster = data[body_at:]
        if maxval < 256:
            pixels = np.frombuffer(raster[:count], dtype=np.uint8).astype(np.int64)
        else:
            pixels = np.frombuffer(raster[: 2 * count], dtype=">u2").astype(np.int64)
    if pixels.size < count:
        raise SizeMismatchError(f"{path}: raster holds {pixels.size} of {count} pixels")
    pixels = pixels[:count]
    return GridData(
        lower=(0, 0),
        upper=(width, height),
        values=pixels.astype(np.float64),
        elem_type="float64",
        pgm_maxval=maxval,
        pgm_magic=magic,
    )


def write_pgm(path, gd: GridData):
    if gd.rank != 2:
        raise GridError("PGM output needs a rank-2 grid")
    maxval = gd.pgm_maxval or 255
    magic = gd.pgm_magic or "P5"
    width, height = gd.extent_shape()
    clamped = np.clip(np.asarray(gd.values, dtype=np.float64), 0.0, float(maxval))
    pixels = np.rint(clamped).astype(np.uint16 if maxval > 255 else np.uint8)
    header = f"{magic}\n{width} {height}\n{maxval}\n".encode("ascii")
    with open(path, "wb") as fh:
        fh.write(header)
        if magic == "P2":
            lines = []
            for y in range(height):
                row = pixels[y * width : (y + 1) * width]
                lines.append(" ".join(str(int(v)) for v in row))
            fh.write(("\n".join(lines) + "\n").encode("ascii"))
        else:
            if maxval > 255:
                fh.write(pixels.astype(">u2").tobytes())
            else:
                fh.write(pixels.tobytes())


def sniff_format(path) -> str:
    return "pgm" if str(path).lower().endswith(".pgm") else "text"


def load_grid_file(path, fmt: str | None = None) -> GridData:
    fmt = fmt or sniff_format(path)
    if fmt == "pgm":
        return read_pgm(path)
    return read_grid_text(path)


def save_grid_file(path, gd: GridData, fmt: str | None = None):
    fmt = fmt or ("pgm" if gd.pgm_maxval is not None else "text")
    if fmt == "pgm":
        write_pgm(path, gd)
    else:
        write_grid_text(path, gd)
