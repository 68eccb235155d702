"""Command-line front end: ``rage encode|decode|query|stats|bench|corpus``.

Exit codes: 0 success, 2 usage error (including out-of-bounds queries),
3 I/O error, 4 corrupt or unsupported data.
"""

import argparse
from concurrent.futures import ThreadPoolExecutor
import csv
import io
import json
import math
import os
import random
import sys
import time

from . import metrics
from .container import decode, deserialize, encode, serialize
from .corpus import load_corpus, write_corpus
from .errors import RageError
from .image_model import crop, load_image, store_image
from .random_access import QueryRect, measure_access, query, sweep_repeats

EXIT_USAGE = 2
EXIT_IO = 3
EXIT_DATA = 4

DEFAULT_SWEEP = (50.0, 45.0, 40.0, 35.0, 30.0, 25.0, 20.0)

LOSSLESS_COLUMNS = ["image", "width", "height", "bpp", "raw_bytes", "compressed_bytes",
                    "cr", "mse", "decode_mpps"]
LOSSY_COLUMNS = ["image", "psnr_thr", "n_b", "compressed_bytes", "cr", "mse",
                 "p5", "p25", "p75", "p95"]
ACCESS_COLUMNS = ["image", "n", "avg_seek_ns", "avg_dtpp_ns"]


class UsageError(Exception):
    pass


def psnr_threshold(text):
    value = float(text)
    if math.isnan(value) or value <= 0:
        raise argparse.ArgumentTypeError("PSNR threshold must be > 0 dB or inf")
    return value


def _read_container(path):
    with open(path, "rb") as f:
        return deserialize(f.read())


def _image_path_for(path, bpp):
    """Swap the extension to match the depth: .ppm for 24 bpp, .pam for 32 bpp."""
    root, ext = os.path.splitext(path)
    want = ".pam" if bpp == 32 else ".ppm"
    return path if ext.lower() == want else root + want


def cmd_encode(args, out):
    img = load_image(args.input)
    comp = encode(img, args.psnr_thr)
    data = serialize(comp)
    with open(args.output, "wb") as f:
        f.write(data)
    sizes = comp.sizes
    cr = metrics.compression_ratio(len(data), img.raw_bytes)
    print(f"{args.input}: {img.width}x{img.height} {img.bpp}bpp -> {len(data)} bytes "
          f"CR={cr:.4f} lossy={int(comp.lossy)} n_b={comp.n_b} l_b={comp.l_b} "
          f"dict_bits={sizes.dict_bits} rle_bits={sizes.rle_bits} "
          f"pair_bits={sizes.pair_bits} offset_bits={sizes.offset_bits} "
          f"total_bits={sizes.total_bits}", file=out)


def cmd_decode(args, out):
    img = decode(_read_container(args.input))
    path = _image_path_for(args.output, img.bpp)
    store_image(img, path)
    print(f"wrote {path}", file=out)


def cmd_query(args, out):
    comp = _read_container(args.input)
    rect = QueryRect(*args.rect)
    try:
        block = query(comp, rect)
    except IndexError as exc:
        raise UsageError(str(exc)) from None
    path = _image_path_for(args.output, block.bpp)
    store_image(block, path)
    print(f"wrote {rect.w}x{rect.h} block to {path}", file=out)


def stats_record(comp, file_bytes):
    raw = comp.width * comp.height * comp.bpp // 8
    record = {"width": comp.width, "height": comp.height, "bpp": comp.bpp,
              "lossy": comp.lossy, "n_b": comp.n_b, "l_b": comp.l_b, "l_d": comp.l_d,
              "l_id": comp.l_id, "selection": list(comp.selection.positions)}
    record.update(comp.sizes.as_dict())
    record.update({"file_bytes": file_bytes, "raw_bytes": raw,
                   "cr": metrics.compression_ratio(file_bytes, raw)})
    return record


def cmd_stats(args, out):
    with open(args.input, "rb") as f:
        data = f.read()
    record = stats_record(deserialize(data), len(data))
    if args.format == "json":
        json.dump(record, out, indent=2)
        out.write("\n")
    else:
        for key, value in record.items():
            print(f"{key}: {value}", file=out)


# --- bench -----------------------------------------------------------------

def _threads():
    try:
        return max(1, int(os.environ.get("RAGE_THREADS", "")))
    except ValueError:
        return os.cpu_count() or 1


def _lossless_row(name, img):
    data = serialize(encode(img))
    comp = deserialize(data)
    t0 = time.perf_counter()
    decoded = decode(comp)
    elapsed = time.perf_counter() - t0
    return [{
        "image": name, "width": img.width, "height": img.height, "bpp": img.bpp,
        "raw_bytes": img.raw_bytes, "compressed_bytes": len(data),
        "cr": metrics.compression_ratio(len(data), img.raw_bytes),
        "mse": metrics.mse(img, decoded),
        "decode_mpps": img.n / elapsed / 1e6 if elapsed > 0 else math.inf,
    }]


def lossy_sweep_rows(name, img, grid=DEFAULT_SWEEP):
    rows = []
    for thr in (math.inf,) + tuple(grid):
        comp = encode(img, thr)
        data = serialize(comp)
        report = metrics.distortion_report(img, decode(comp))
        rows.append({
            "image": name, "psnr_thr": thr, "n_b": comp.n_b,
            "compressed_bytes": len(data),
            "cr": metrics.compression_ratio(len(data), img.raw_bytes),
            "mse": report.global_mse, "p5": report.p5, "p25": report.p25,
            "p75": report.p75, "p95": report.p95,
        })
    return rows


def access_row(name, img, seed=0, verify_rects=0):
    comp = deserialize(serialize(encode(img)))
    if verify_rects:
        full = decode(comp)
        rng = random.Random(seed)
        for _ in range(verify_rects):
            x, y = rng.randrange(img.width), rng.randrange(img.height)
            rect = (x, y, rng.randint(1, img.width - x), rng.randint(1, img.height - y))
            if query(comp, rect) != crop(full, *rect):
                raise RageError(f"{name}: query {rect} disagrees with full decode")
    stats = measure_access(comp, repeats=sweep_repeats(comp))
    return [{"image": name, "n": img.n, "avg_seek_ns": stats.avg_seek_ns,
             "avg_dtpp_ns": stats.avg_dtpp_ns}]


def run_bench(corpus, mode, seed=0, verify_rects=0, grid=DEFAULT_SWEEP):
    """Bench rows for ``corpus`` (a list of ``(name, ImageBuffer)``), sorted by image."""
    if not corpus:
        raise UsageError("corpus is empty")
    if mode == "access":
        # timing runs serially so images do not compete for the CPU
        results = [access_row(name, img, seed, verify_rects) for name, img in corpus]
    else:
        job = _lossless_row if mode == "lossless" else (
            lambda name, img: lossy_sweep_rows(name, img, grid))
        with ThreadPoolExecutor(max_workers=_threads()) as pool:
            results = list(pool.map(lambda item: job(*item), corpus))
    return [row for rows in results for row in rows]


def write_report(rows, columns, fmt, out):
    if fmt == "json":
        json.dump([{k: row[k] for k in columns} for row in rows], out, indent=2,
                  default=str)
        out.write("\n")
        return
    writer = csv.DictWriter(out, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: (f"{row[k]:.6g}" if isinstance(row[k], float) else row[k])
                         for k in columns})


def cmd_bench(args, out):
    if not os.path.isdir(args.corpus):
        raise FileNotFoundError(f"corpus directory {args.corpus} not found")
    corpus = load_corpus(args.corpus)
    grid = tuple(args.grid) if args.grid else DEFAULT_SWEEP
    rows = run_bench(corpus, args.mode, args.seed, args.verify_rects, grid)
    columns = {"lossless": LOSSLESS_COLUMNS, "lossy-sweep": LOSSY_COLUMNS,
               "access": ACCESS_COLUMNS}[args.mode]
    if args.output:
        buf = io.StringIO()
        write_report(rows, columns, args.format, buf)
        with open(args.output, "w", newline="") as f:
            f.write(buf.getvalue())
    else:
        write_report(rows, columns, args.format, out)


def cmd_corpus(args, out):
    for path in write_corpus(args.directory, args.seed):
        print(path, file=out)


def build_parser():
    parser = argparse.ArgumentParser(prog="rage", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", help="compress a PPM/PAM image")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--psnr-thr", type=psnr_threshold, default=None,
                   help="pruning threshold in dB (default: lossless)")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="decompress to PPM (24 bpp) or PAM (32 bpp)")
    p.add_argument("input")
    p.add_argument("output")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("query", help="decode one rectangle without full decompression")
    p.add_argument("input")
    p.add_argument("--rect", type=int, nargs=4, required=True, metavar=("X", "Y", "W", "H"))
    p.add_argument("output")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("stats", help="print the size breakdown of a container")
    p.add_argument("input")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("bench", help="benchmark a directory of PPM/PAM images")
    p.add_argument("corpus")
    p.add_argument("--mode", choices=("lossless", "lossy-sweep", "access"),
                   default="lossless")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", "-o")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--verify-rects", type=int, default=0,
                   help="access mode: check this many seeded random queries first")
    p.add_argument("--grid", type=psnr_threshold, nargs="+",
                   help="lossy-sweep thresholds in dB")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("corpus", help="write the bundled synthetic corpus")
    p.add_argument("directory")
    p.add_argument("--seed", type=int, default=2024)
    p.set_defaults(func=cmd_corpus)
    return parser


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args, out)
    except UsageError as exc:
        print(f"rage: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RageError as exc:
        print(f"rage: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"rage: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return 0


if __name__ == "__main__":
    sys.exit(main())
