"""Readers and writers: PFM, 16-bit PNG disparity, images, sparse samples."""

from __future__ import annotations

import re
from pathlib import Path

import numpy as np
from PIL import Image

from .fusion import SparseDisparity
from .types import DisparityMap


class FormatError(ValueError):
    pass


# -- PFM ---------------------------------------------------------------------

def write_pfm(path, grid: np.ndarray) -> None:
    """Single-channel little-endian PFM, rows stored bottom-up."""
    grid = np.asarray(grid, dtype=np.float32)
    if grid.ndim != 2:
        raise FormatError("PFM writer expects a 2-D grid")
    H, W = grid.shape
    header = f"Pf\n{W} {H}\n-1.0000\n".encode("ascii")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(np.flipud(grid).astype("<f4").tobytes())


def _read_token(fh) -> bytes:
    tok = b""
    while True:
        ch = fh.read(1)
        if not ch:
            break
        if ch.isspace():
            if tok:
                break
            continue
        tok += ch
    return tok


def read_pfm(path) -> np.ndarray:
    with open(path, "rb") as fh:
        magic = _read_token(fh)
        if magic == b"PF":
            raise FormatError("colour PFM not supported; expected 'Pf'")
        if magic != b"Pf":
            raise FormatError(f"bad PFM magic {magic!r}")
        try:
            W = int(_read_token(fh))
            H = int(_read_token(fh))
            scale = float(_read_token(fh))
        except ValueError as exc:
            raise FormatError(f"malformed PFM header in {path}") from exc
        if W <= 0 or H <= 0 or scale == 0:
            raise FormatError(f"malformed PFM header in {path}")
        dtype = "<f4" if scale < 0 else ">f4"
        data = np.frombuffer(fh.read(), dtype=dtype)
    if data.size != W * H:
        raise FormatError(f"PFM payload has {data.size} values, expected {W * H}")
    return np.flipud(data.reshape(H, W)).astype(np.float64)


# -- 16-bit PNG disparity ----------------------------------------------------

def write_disp_png(path, dmap: DisparityMap) -> None:
    v = np.where(dmap.valid, np.rint(dmap.values * 256.0), 0)
    v = np.clip(v, 0, 65535).astype(np.uint16)
    Image.fromarray(v).save(path, format="PNG")


def read_disp_png(path) -> DisparityMap:
    with Image.open(path) as im:
        if im.mode not in ("I;16", "I;16B", "I;16L", "I"):
            raise FormatError(f"{path}: expected a 16-bit single-channel PNG, got mode {im.mode}")
        raw = np.array(im).astype(np.int64)
    if raw.max(initial=0) > 65535 or raw.min(initial=0) < 0:
        raise FormatError(f"{path}: values exceed 16 bits")
    return DisparityMap(raw / 256.0, raw > 0)


# -- dispatch by extension ---------------------------------------------------

def load_disparity(path) -> DisparityMap:
    path = Path(path)
    ext = path.suffix.lower()
    if ext == ".pfm":
        g = read_pfm(path)
        return DisparityMap(np.where(np.isfinite(g), g, 0.0), np.isfinite(g))
    if ext == ".png":
        return read_disp_png(path)
    raise FormatError(f"unsupported disparity format {ext!r}")


def save_disparity(path, dmap: DisparityMap) -> None:
    """Invalid pixels become NaN in PFM and 0 in PNG."""
    path = Path(path)
    ext = path.suffix.lower()
    if ext == ".pfm":
        write_pfm(path, np.where(dmap.valid, dmap.values, np.nan))
    elif ext == ".png":
        write_disp_png(path, dmap)
    else:
        raise FormatError(f"unsupported disparity format {ext!r}")


# -- images ------------------------------------------------------------------

def read_image(path) -> np.ndarray:
    """8/16-bit PNG or PGM/PPM as float64 in [0, 1]; gray -> (H, W)."""
    with Image.open(path) as im:
        if im.mode in ("I;16", "I;16B", "I;16L", "I"):
            arr = np.array(im).astype(np.float64) / 65535.0
        elif im.mode in ("L", "RGB"):
            arr = np.array(im).astype(np.float64) / 255.0
        elif im.mode in ("RGBA", "P", "LA", "1"):
            arr = np.array(im.convert("RGB")).astype(np.float64) / 255.0
        else:
            raise FormatError(f"{path}: unsupported image mode {im.mode}")
    return arr


def write_image(path, img: np.ndarray) -> None:
    """Write an 8-bit PNG/PGM/PPM (format from the extension)."""
    a = np.clip(np.rint(np.asarray(img, dtype=np.float64) * 255.0), 0, 255).astype(np.uint8)
    Image.fromarray(a).save(path)


# -- sparse samples ----------------------------------------------------------

def write_sparse(path, sp: SparseDisparity) -> None:
    H, W = sp.shape
    lines = [f"TWSPARSE {H} {W} {len(sp)} {sp.seed}"]
    lines += [f"{r} {c} {v!r}" for r, c, v in zip(sp.rows.tolist(), sp.cols.tolist(), sp.values.tolist())]
    Path(path).write_text("\n".join(lines) + "\n")


def read_sparse(path) -> SparseDisparity:
    lines = Path(path).read_text().splitlines()
    if not lines:
        raise FormatError("empty sparse file")
    m = re.fullmatch(r"TWSPARSE (\d+) (\d+) (\d+) (-?\d+)", lines[0].strip())
    if not m:
        raise FormatError(f"bad TWSPARSE header {lines[0]!r}")
    H, W, n, seed = (int(g) for g in m.groups())
    body = [ln.split() for ln in lines[1:] if ln.strip()]
    if len(body) != n:
        raise FormatError(f"header says {n} samples, found {len(body)}")
    rows = np.array([int(b[0]) for b in body], dtype=np.int64)
    cols = np.array([int(b[1]) for b in body], dtype=np.int64)
    vals = np.array([float(b[2]) for b in body], dtype=np.float64)
    if n and (rows.min() < 0 or rows.max() >= H or cols.min() < 0 or cols.max() >= W):
        raise FormatError("sample outside the frame")
    return SparseDisparity((H, W), rows, cols, vals, seed)
