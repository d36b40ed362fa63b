"""Command-line front end: ``iwtwm {embed,extract,verify,bench}``."""
from __future__ import annotations

import argparse
import math
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from iwtwm import metrics
from iwtwm.pipeline import embed_image, extract_image
from iwtwm.pixel_io import load_pbm, load_pgm, write_pbm, write_pgm
from iwtwm.sideinfo import decode_key, encode_key
from iwtwm.wm_core import CapacityError

MAX_BPP = 1.5


class CliError(Exception):
    pass


def _umask() -> int:
    mask = os.umask(0)
    os.umask(mask)
    return mask


def _atomic_write(path, data: bytes) -> None:
    """Write via a sibling temp file and rename, so errors never leave partial output."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.chmod(tmp, 0o666 & ~_umask())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _fmt(v: float) -> str:
    return "inf" if math.isinf(v) else f"{v:.2f}"


def cmd_embed(args) -> int:
    cover = load_pgm(args.cover)
    logo = load_pbm(args.logo)
    marked, side = embed_image(cover, logo)
    blobs = [(args.out, write_pgm(marked)), (args.key, encode_key(side))]
    for path, data in blobs:
        _atomic_write(path, data)
    bpp = float(metrics.capacity_bpp(side.payload_len, cover.width, cover.height))
    print(f"bpp={bpp:.4f} psnr={_fmt(metrics.psnr(cover, marked))} ledger={len(side.ledger)}")
    return 0


def cmd_extract(args) -> int:
    marked = load_pgm(args.image)
    side = decode_key(Path(args.key).read_bytes())
    cover, logo = extract_image(marked, side)
    cover_bytes, logo_bytes = write_pgm(cover), write_pbm(logo)
    _atomic_write(args.out_cover, cover_bytes)
    _atomic_write(args.out_logo, logo_bytes)
    print(f"payload_bits={side.payload_len} ledger={len(side.ledger)}")
    return 0


def _first_diff(a: np.ndarray, b: np.ndarray):
    if a.shape != b.shape:
        return f"shape {a.shape} vs {b.shape}"
    r, c = np.argwhere(a != b)[0]
    return f"row {r} col {c}: {a[r, c]} != {b[r, c]}"


def cmd_verify(args) -> int:
    cover = load_pgm(args.cover)
    logo = load_pbm(args.logo)
    marked, side = embed_image(cover, logo)
    side = decode_key(encode_key(side))
    got_cover, got_logo = extract_image(marked, side)
    ok = True
    if got_cover != cover:
        print(f"cover mismatch at {_first_diff(cover.pixels, got_cover.pixels)}", file=sys.stderr)
        ok = False
    if got_logo != logo:
        print(f"logo mismatch at {_first_diff(logo.bits, got_logo.bits)}", file=sys.stderr)
        ok = False
    if not ok:
        return 1
    print(
        f"ok bpp={float(metrics.capacity_bpp(side.payload_len, cover.width, cover.height)):.4f} "
        f"psnr={_fmt(metrics.psnr(cover, marked))} ledger={len(side.ledger)}"
    )
    return 0


def _parse_bpp_list(text: str) -> list[float]:
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise CliError(f"invalid --bpp list {text!r}") from exc
    for v in values:
        if v < 0:
            raise CliError(f"bpp must be non-negative, got {v}")
        if v > MAX_BPP:
            raise CliError(f"capacity error: {v} bpp exceeds the maximum of {MAX_BPP} bpp")
    return values


def cmd_bench(args) -> int:
    bpps = _parse_bpp_list(args.bpp)
    if args.cover:
        paths = [Path(args.cover)]
    else:
        paths = sorted(Path(args.dir).glob("*.pgm"))
        if not paths:
            raise CliError(f"no .pgm files in {args.dir}")
    covers = [(p, load_pgm(p)) for p in paths]

    per_image = []
    for p, cover in covers:
        rows = metrics.sweep(cover, bpps, args.seed)
        per_image.append(rows)
        for r in rows:
            print(f"image={p.name} bpp={r.bpp:.4f} psnr={_fmt(r.psnr_db)} ledger={r.ledger_count} key_bytes={r.key_bytes}")

    if args.cover:
        data = metrics.emit_csv(per_image[0])
    else:
        rows, labels = [], []
        for (p, _), image_rows in zip(covers, per_image):
            rows += image_rows
            labels += [p.name] * len(image_rows)
        avg = metrics.average_rows(per_image)
        data = metrics.emit_csv(rows + avg, labels + ["avg"] * len(avg))
    _atomic_write(args.out, data)
    print(f"seed={args.seed} rows={len(bpps) * len(covers)} out={args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="iwtwm", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("embed", help="embed a PBM logo into a PGM cover")
    p.add_argument("--cover", required=True)
    p.add_argument("--logo", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--key", required=True)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("extract", help="recover cover and logo")
    p.add_argument("--image", required=True)
    p.add_argument("--key", required=True)
    p.add_argument("--out-cover", required=True)
    p.add_argument("--out-logo", required=True)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("verify", help="in-memory embed/extract self-test")
    p.add_argument("--cover", required=True)
    p.add_argument("--logo", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="capacity-distortion sweep to CSV")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--cover")
    src.add_argument("--dir")
    p.add_argument("--bpp", required=True, help="comma-separated list, e.g. 0.1,0.5,1.5")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CapacityError as exc:
        print(f"error: capacity error: {exc} (maximum {exc.maximum} bits)", file=sys.stderr)
    except (OSError, ValueError, CliError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return 1


if __name__ == "__main__":
    sys.exit(main())
