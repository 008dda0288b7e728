"""Command-line interface.

Exit codes: 0 success, 1 usage error (bad flags, unknown names, invalid
parameters), 2 malformed input file.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from pathlib import Path

from . import clipio
from .core import Clip, LabelDist, linspace
from .erase import DEFAULT_BOX, DEFAULT_FRAMES, cube_cutout, cutout, frame_cutout
from .errors import AugmentError, FormatError, FrameImportError
from .frame_ops import ALL_OPS, apply_op_frames
from .mix import ALIASES, MIX_METHODS, mix
from .pipeline import PipelineConfig, augment_sample
from .randaug import Mode, randaugment, randaugment_t, sample_magnitude_range
from .rng import rng_derive

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FORMAT = 2

CLIP_OPS = ["randaugment-t", "randaugment", "cutout", "framecutout", "cubecutout"]
APPLY_OPS = CLIP_OPS + [str(kind) for kind in ALL_OPS]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _load_label(value: str, num_classes: int) -> LabelDist:
    try:
        return LabelDist.one_hot(int(value), num_classes)
    except ValueError:
        pass
    path = Path(value)
    if not path.exists():
        raise UsageError(f"label {value!r} is neither a class index nor a sidecar file")
    return clipio.read_label(path)


def cmd_apply(args) -> int:
    clip = clipio.read_clip(args.inp)
    rng = rng_derive(args.seed, args.clip_id, 0)
    m1 = args.m if args.m1 is None else args.m1
    m2 = args.m if args.m2 is None else args.m2
    op = args.op
    if op == "randaugment-t":
        if args.m1 is None and args.m2 is None:
            m1, m2 = sample_magnitude_range(args.mode, args.m, rng)
        out = randaugment_t(clip, args.n, m1, m2, rng)
    elif op == "randaugment":
        out = randaugment(clip, args.n, args.m, rng)
    elif op == "cutout":
        out = cutout(clip, args.box_h, args.box_w, rng)
    elif op == "framecutout":
        out = frame_cutout(clip, args.frames, rng, contiguous=args.contiguous)
    elif op == "cubecutout":
        out = cube_cutout(clip, args.box_h, args.box_w, args.frames, rng)
    else:
        out = Clip._adopt(apply_op_frames(clip.data, op, linspace(m1, m2, clip.t), args.sign))
    clipio.write_clip(out, args.out)
    return EXIT_OK


def cmd_mix(args) -> int:
    a = clipio.read_clip(args.a)
    b = clipio.read_clip(args.b)
    label_a = _load_label(args.label_a, args.num_classes)
    label_b = _load_label(args.label_b, args.num_classes)
    rng = rng_derive(args.seed, args.clip_id, 0)
    result = mix(args.method, a, b, label_a, label_b, args.alpha, rng)
    clipio.write_clip(result.clip, args.out)
    clipio.write_label(result.label, args.out_label)
    print(json.dumps(result.metadata(), sort_keys=True))
    return EXIT_OK


def _load_entry(entry: clipio.ManifestEntry, num_classes: int) -> tuple[Clip, LabelDist]:
    return clipio.read_clip(entry.clip_path), entry.load_label(num_classes)


def _pipeline_entry(index: int, entries, cfg: PipelineConfig, seed: int, num_classes: int, out_dir: str) -> str:
    entry = entries[index]
    load_partner = None
    if cfg.mix_method is not None:
        other = entries[entry.partner if entry.partner is not None else (index + 1) % len(entries)]
        load_partner = partial(_load_entry, other, num_classes)
    result = augment_sample(_load_entry(entry, num_classes), load_partner, cfg, seed, index)
    stem = Path(out_dir) / f"{index:05d}"
    clipio.write_clip(result.clip, stem.with_suffix(".clip"))
    clipio.write_label(result.label, stem.with_suffix(".json"))
    return stem.name


def run_pipeline(cfg: PipelineConfig, manifest, out_dir, seed: int = 0, workers: int = 1, num_classes: int = 101) -> list[str]:
    entries = clipio.read_manifest(manifest)
    Path(out_dir).mkdir(parents=True, exist_ok=True)
    job = partial(_pipeline_entry, entries=entries, cfg=cfg, seed=seed, num_classes=num_classes, out_dir=str(out_dir))
    if workers <= 1:
        return [job(i) for i in range(len(entries))]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(job, range(len(entries))))


def cmd_pipeline(args) -> int:
    cfg = PipelineConfig.load(args.config)
    run_pipeline(cfg, args.in_list, args.out_dir, args.seed, args.workers, args.num_classes)
    return EXIT_OK


def cmd_inspect(args) -> int:
    with open(args.clip, "rb") as f:
        t, h, w, c = clipio.parse_header(f.read(clipio.HEADER.size))
    report = {"path": str(args.clip), "version": clipio.VERSION, "dtype": "uint8", "t": t, "h": h, "w": w, "c": c}
    label_path = Path(args.label) if args.label else Path(args.clip).with_suffix(".json")
    if args.label or label_path.exists():
        report["label"] = clipio.label_to_json(clipio.read_label(label_path))
    print(json.dumps(report, indent=2))
    return EXIT_OK


def cmd_import(args) -> int:
    clipio.write_clip(clipio.import_frames(args.frames_dir, args.pattern), args.out)
    return EXIT_OK


def cmd_export(args) -> int:
    clipio.export_frames(clipio.read_clip(args.inp), args.out_dir)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tempaug", description="Temporal video data augmentation.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("apply", help="augment one clip with RandAugment(-T), a single op, or an erase op")
    p.add_argument("--op", required=True, choices=APPLY_OPS)
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--n", type=int, default=2, help="number of RandAugment ops")
    p.add_argument("--m", type=float, default=5.0, help="base magnitude, 0-10")
    p.add_argument("--m1", type=float, help="first-frame magnitude")
    p.add_argument("--m2", type=float, help="last-frame magnitude")
    p.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.TEMPORAL_PLUS.value)
    p.add_argument("--sign", type=int, choices=[1, -1], default=1, help="direction for a single op")
    p.add_argument("--box-h", type=int, default=DEFAULT_BOX)
    p.add_argument("--box-w", type=int, default=DEFAULT_BOX)
    p.add_argument("--frames", type=int, default=DEFAULT_FRAMES)
    p.add_argument("--contiguous", action="store_true", help="framecutout deletes a contiguous run")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--clip-id", type=int, default=0)
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("mix", help="mix two clips and write the mixed label sidecar")
    p.add_argument("--method", required=True, choices=sorted(MIX_METHODS) + sorted(ALIASES))
    p.add_argument("--alpha", type=float, default=2.0)
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--label-a", required=True, help="class index or sidecar path")
    p.add_argument("--label-b", required=True, help="class index or sidecar path")
    p.add_argument("--num-classes", type=int, default=101)
    p.add_argument("--out", required=True)
    p.add_argument("--out-label", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--clip-id", type=int, default=0)
    p.set_defaults(func=cmd_mix)

    p = sub.add_parser("pipeline", help="augment every clip of a manifest")
    p.add_argument("--config", required=True)
    p.add_argument("--in-list", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--num-classes", type=int, default=101)
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("inspect", help="print a clip header (and its label sidecar) as JSON")
    p.add_argument("clip")
    p.add_argument("--label")
    p.set_defaults(func=cmd_inspect)

    p = sub.add_parser("import", help="build a clip from a directory of PNG/PPM frames")
    p.add_argument("--frames-dir", required=True)
    p.add_argument("--pattern", default="*")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_import)

    p = sub.add_parser("export", help="write the frames of a clip as PNG files")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_export)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (FormatError, FrameImportError) as exc:
        print(f"tempaug: format error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except (AugmentError, UsageError, OSError) as exc:
        print(f"tempaug: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
