"""Clip container files, label sidecars, frame-image import and manifests.

Clip container (all integers little-endian)::

    offset  size  field
    0       4     magic   b"CLIP"
    4       1     version 1
    5       1     dtype   0 (uint8)
    6       16    t, h, w, c as u32
    22      N     payload, N = t*h*w*c bytes in (t, h, w, c) order

The header is fully validated, including that ``N`` fits in 32 bits and
matches the file length, before the payload is read.

Label sidecar: ``{"num_classes": int, "weights": {"<class>": weight}}``.

Manifest: one ``clip-path<TAB>label[<TAB>partner]`` entry per line. ``label``
is either a class index or the path of a label sidecar; the optional
``partner`` is the 0-based number of another entry to mix with. Blank lines
and lines starting with ``#`` are skipped. Relative paths are resolved against
the manifest's directory.
"""

from __future__ import annotations

import json
import os
import re
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import Clip, LabelDist
from .errors import (
    ClipFormatError,
    EmptyFramesError,
    FrameImportError,
    InconsistentFramesError,
    LabelFormatError,
    ManifestFormatError,
)

MAGIC = b"CLIP"
VERSION = 1
DTYPE_UINT8 = 0
HEADER = struct.Struct("<4sBB4I")
MAX_PAYLOAD = 0xFFFFFFFF
SIDECAR_TOLERANCE = 1e-6
FRAME_SUFFIXES = {".png", ".ppm", ".pgm", ".pnm"}


def encode_header(t: int, h: int, w: int, c: int, *, magic: bytes = MAGIC, version: int = VERSION, dtype: int = DTYPE_UINT8) -> bytes:
    return HEADER.pack(magic, version, dtype, t, h, w, c)


def parse_header(header: bytes) -> tuple[int, int, int, int]:
    if len(header) < HEADER.size:
        raise ClipFormatError("header", f"truncated header: {len(header)} of {HEADER.size} bytes")
    magic, version, dtype, t, h, w, c = HEADER.unpack(header[: HEADER.size])
    if magic != MAGIC:
        raise ClipFormatError("magic", f"bad magic {magic!r}, expected {MAGIC!r}")
    if version != VERSION:
        raise ClipFormatError("version", f"unsupported version {version}")
    if dtype != DTYPE_UINT8:
        raise ClipFormatError("dtype", f"unsupported dtype {dtype}")
    for name, value in zip("thwc", (t, h, w, c)):
        if value == 0:
            raise ClipFormatError(name, "dimension is 0")
    if c not in (1, 3):
        raise ClipFormatError("c", f"channel count must be 1 or 3, got {c}")
    if t * h * w * c > MAX_PAYLOAD:
        raise ClipFormatError("size", f"size overflow: {t}*{h}*{w}*{c} bytes exceeds 32 bits")
    return t, h, w, c


def read_clip(path) -> Clip:
    with open(path, "rb") as f:
        t, h, w, c = parse_header(f.read(HEADER.size))
        expected = t * h * w * c
        available = os.fstat(f.fileno()).st_size - HEADER.size
        if available < expected:
            raise ClipFormatError("payload", f"truncated payload: {available} of {expected} bytes")
        if available > expected:
            raise ClipFormatError("payload", f"{available - expected} trailing bytes after payload")
        payload = f.read(expected)
    return Clip.from_bytes(payload, t, h, w, c)


def write_clip(clip: Clip, path) -> None:
    header = encode_header(*clip.shape)
    with open(path, "wb") as f:
        f.write(header)
        f.write(clip.tobytes())


def label_to_json(label: LabelDist) -> dict:
    # json writes floats with repr(), the shortest string that round-trips exactly
    return {"num_classes": label.num_classes, "weights": {str(k): v for k, v in label.weights.items()}}


def label_from_json(d) -> LabelDist:
    if not isinstance(d, dict) or set(d) != {"num_classes", "weights"}:
        raise LabelFormatError("sidecar", "expected an object with exactly 'num_classes' and 'weights'")
    n = d["num_classes"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise LabelFormatError("num_classes", f"must be a positive integer, got {n!r}")
    weights = {}
    if not isinstance(d["weights"], dict):
        raise LabelFormatError("weights", "must be an object")
    for key, value in d["weights"].items():
        try:
            k = int(key)
        except ValueError:
            raise LabelFormatError("weights", f"class key {key!r} is not an integer") from None
        if not 0 <= k < n:
            raise LabelFormatError("weights", f"class {k} outside [0, {n})")
        if not isinstance(value, (int, float)) or isinstance(value, bool) or not 0 <= value <= 1:
            raise LabelFormatError("weights", f"weight {value!r} for class {k} outside [0, 1]")
        weights[k] = float(value)
    total = sum(weights.values())
    if abs(total - 1.0) > SIDECAR_TOLERANCE:
        raise LabelFormatError("weights", f"weights sum to {total!r}, expected 1")
    return LabelDist(n, {k: v / total for k, v in weights.items()})


def write_label(label: LabelDist, path) -> None:
    Path(path).write_text(json.dumps(label_to_json(label), indent=2) + "\n")


def read_label(path) -> LabelDist:
    try:
        d = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise LabelFormatError("sidecar", f"invalid JSON: {exc}") from exc
    return label_from_json(d)


def natural_key(name: str):
    return [int(part) if part.isdigit() else part.lower() for part in re.split(r"(\d+)", name)]


def import_frames(directory, pattern: str = "*") -> Clip:
    """Stack the PNG/PPM/PGM images in ``directory`` into a clip.

    Files are ordered by natural sort (``frame_2`` before ``frame_10``).
    Grayscale images give one channel, everything else is converted to RGB.
    """
    from PIL import Image

    paths = sorted(
        (p for p in Path(directory).glob(pattern) if p.is_file() and p.suffix.lower() in FRAME_SUFFIXES),
        key=lambda p: natural_key(p.name),
    )
    if not paths:
        raise EmptyFramesError(f"no PNG/PPM frames matching {pattern!r} in {directory}")
    frames = []
    for path in paths:
        try:
            with Image.open(path) as img:
                img = img.convert("L") if img.mode in ("L", "1", "I", "I;16", "F") else img.convert("RGB")
                arr = np.asarray(img, dtype=np.uint8)
        except OSError as exc:
            raise FrameImportError(f"{path}: cannot decode: {exc}") from exc
        if arr.ndim == 2:
            arr = arr[..., None]
        if frames and arr.shape != frames[0].shape:
            raise InconsistentFramesError(
                path, f"frame is {arr.shape[1]}x{arr.shape[0]}x{arr.shape[2]}, "
                f"expected {frames[0].shape[1]}x{frames[0].shape[0]}x{frames[0].shape[2]} (from {paths[0].name})"
            )
        frames.append(arr)
    return Clip._adopt(np.stack(frames))


def export_frames(clip: Clip, directory, prefix: str = "frame_") -> list[Path]:
    """Write one PNG per frame, numbered from 1."""
    from PIL import Image

    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for i, frame in enumerate(clip.data, start=1):
        path = directory / f"{prefix}{i}.png"
        Image.fromarray(frame[..., 0] if clip.c == 1 else frame).save(path)
        written.append(path)
    return written


@dataclass(frozen=True)
class ManifestEntry:
    clip_path: Path
    label: int | Path
    partner: int | None = None

    def load_label(self, num_classes: int) -> LabelDist:
        if isinstance(self.label, int):
            return LabelDist.one_hot(self.label, num_classes)
        return read_label(self.label)


def read_manifest(path) -> list[ManifestEntry]:
    path = Path(path)
    root = path.parent
    entries = []
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.rstrip("\r\n").split("\t")
        where = f"manifest line {lineno}"
        if len(fields) not in (2, 3):
            raise ManifestFormatError(where, f"expected 2 or 3 tab-separated fields, got {len(fields)}")
        try:
            partner = int(fields[2]) if len(fields) == 3 else None
        except ValueError:
            raise ManifestFormatError(where, f"partner {fields[2]!r} is not an integer") from None
        try:
            label = int(fields[1])
        except ValueError:
            label = root / fields[1]
        entries.append(ManifestEntry(root / fields[0], label, partner))
    for i, entry in enumerate(entries):
        if entry.partner is not None and not 0 <= entry.partner < len(entries):
            raise ManifestFormatError(f"manifest entry {i}", f"partner {entry.partner} out of range")
    return entries
