"""
Command-line front end for circsep
Reads polygon files, dispatches queries, prints one JSON record per run
"""
import argparse
import struct
import sys
import time
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np
from loguru import logger

from circsep import __version__
from circsep.config import settings
from circsep.errors import GeometryError, PersistenceError, PolygonFileError
from circsep.geom_core import ConvexPolygon, Line2, Point2, Polygon
from circsep.inscribed import (InscribedResult, PreprocessedPolygon, QueryCase, preprocess, query_halfplane,
                               query_point, query_point_line, query_point_set, query_wedge)
from circsep.models import record_from_inscribed, record_from_separation
from circsep.oracles import gen_convex_polygon, gen_simple_polygon
from circsep.separability import smallest_separating_circle
from circsep.svg import render_svg

MAGIC = b"CSEP"
FORMAT_VERSION = 1

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NOT_SEPARABLE = 2


def setup_logging(verbose: bool = False) -> None:
    logger.remove()
    logger.add(sys.stderr, level="DEBUG" if verbose else settings.LOG_LEVEL)
    if settings.LOG_FILE:
        logger.add(settings.LOG_FILE, rotation="500 MB", retention="10 days", level="INFO")


# ========== Polygon files ==========

def parse_polygon_text(text: str) -> List[Point2]:
    """
    Parse a polygon file: a vertex count, then one "x y" pair per line

    Raises:
        PolygonFileError: with the 1-based line number of the offending line
    """
    lines = [(i + 1, ln.strip()) for i, ln in enumerate(text.splitlines())]
    lines = [(i, ln) for i, ln in lines if ln]
    if not lines:
        raise PolygonFileError("file is empty", 1)
    first_no, first = lines[0]
    try:
        count = int(first)
    except ValueError:
        raise PolygonFileError(f"expected a vertex count, got {first!r}", first_no)
    if count < 3:
        raise PolygonFileError(f"vertex count {count} is below 3", first_no)
    body = lines[1:]
    if len(body) != count:
        at = body[count][0] if len(body) > count else (body[-1][0] + 1 if body else first_no + 1)
        raise PolygonFileError(f"expected {count} vertices, found {len(body)}", at)
    pts = []
    for no, ln in body:
        parts = ln.split()
        if len(parts) != 2:
            raise PolygonFileError(f"expected 'x y', got {ln!r}", no)
        try:
            pts.append(Point2(float(parts[0]), float(parts[1])))
        except (ValueError, GeometryError):
            raise PolygonFileError(f"bad coordinate in {ln!r}", no)
    return pts


def read_polygon(path: str, convex: bool = False) -> Polygon:
    text = Path(path).read_text()
    pts = parse_polygon_text(text)
    coords = [p.as_tuple() for p in pts]
    return ConvexPolygon.from_coords(coords) if convex else Polygon.from_coords(coords)


def format_polygon(poly: Polygon) -> str:
    rows = [str(len(poly))] + [f"{p.x:.17g} {p.y:.17g}" for p in poly]
    return "\n".join(rows) + "\n"


def write_polygon(poly: Polygon, path: str) -> None:
    Path(path).write_text(format_polygon(poly))


# ========== Persistence ==========

def save_preprocessed(pp: PreprocessedPolygon, path: str) -> None:
    """Little-endian: magic + version byte, vertex count, (x, y) doubles"""
    coords = pp.polygon.coords
    with open(path, "wb") as fh:
        fh.write(MAGIC + str(FORMAT_VERSION).encode())
        fh.write(struct.pack("<I", len(coords)))
        fh.write(coords.astype("<f8").tobytes())
    logger.info(f"Saved preprocessed {len(coords)}-gon to {path}")


def load_preprocessed(path: str) -> PreprocessedPolygon:
    """
    Read a preprocessed polygon and rebuild its derived structures

    Raises:
        PersistenceError: bad magic, other version or truncated data
    """
    data = Path(path).read_bytes()
    if len(data) < 9 or data[:4] != MAGIC:
        raise PersistenceError(f"{path} is not a preprocessed polygon file")
    if data[4:5] != str(FORMAT_VERSION).encode():
        raise PersistenceError(f"{path} has format version {data[4:5]!r}, expected {FORMAT_VERSION}")
    (n,) = struct.unpack_from("<I", data, 5)
    if len(data) != 9 + 16 * n:
        raise PersistenceError(f"{path} is truncated: {n} vertices announced")
    coords = np.frombuffer(data, dtype="<f8", offset=9).reshape(n, 2)
    try:
        return preprocess(ConvexPolygon.from_coords(coords.tolist()))
    except GeometryError as e:
        raise PersistenceError(f"{path} holds an invalid polygon: {e}")


# ========== Commands ==========

def _parse_pair(text: str) -> Point2:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected x,y, got {text!r}")
    return Point2(float(parts[0]), float(parts[1]))


def _parse_line(text: str) -> Line2:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected a,b,c, got {text!r}")
    return Line2(float(parts[0]), float(parts[1]), float(parts[2]))


def cmd_separate(args: argparse.Namespace) -> int:
    P = read_polygon(args.p)
    Q = read_polygon(args.q)
    start = time.perf_counter()
    result = smallest_separating_circle(P, Q)
    elapsed = (time.perf_counter() - start) * 1e6
    print(record_from_separation(result, elapsed).to_json())
    if args.svg:
        gc = result.circle
        render_svg(args.svg, [P, Q],
                   circle=gc.circle if gc is not None and gc.is_finite else None,
                   line=gc.line if gc is not None and not gc.is_finite else None,
                   witness=result.witness)
    return EXIT_OK if result.separable else EXIT_NOT_SEPARABLE


def answer_inscribed(pp: PreprocessedPolygon, points: Sequence[Point2], lines: Sequence[Line2]) -> InscribedResult:
    """Dispatch a constraint combination to its query"""
    if len(lines) > 2:
        raise ValueError("at most two lines are supported")
    if lines and len(points) > 1:
        raise ValueError("lines cannot be combined with more than one point")
    if len(lines) == 2 and points:
        raise ValueError("two lines cannot be combined with a point")
    if not points and not lines:
        return InscribedResult.found(pp.incircle, QueryCase.INCIRCLE)
    if not lines:
        return query_point(pp, points[0]) if len(points) == 1 else query_point_set(pp, points)
    if len(lines) == 2:
        return query_wedge(pp, lines[0], lines[1])
    if points:
        return query_point_line(pp, lines[0], points[0])
    return query_halfplane(pp, lines[0])


def cmd_inscribe(args: argparse.Namespace) -> int:
    if args.preprocess_in:
        pp = load_preprocessed(args.preprocess_in)
    elif args.polygon:
        pp = preprocess(read_polygon(args.polygon, convex=True))
    else:
        raise ValueError("a polygon file or --preprocess-in is required")
    if args.preprocess_out:
        save_preprocessed(pp, args.preprocess_out)
    start = time.perf_counter()
    result = answer_inscribed(pp, args.point or [], args.line or [])
    elapsed = (time.perf_counter() - start) * 1e6
    print(record_from_inscribed(result, elapsed).to_json())
    if args.svg:
        render_svg(args.svg, [pp.polygon], circle=result.circle)
    return EXIT_OK


def _mean_time(fn, reps: int) -> float:
    times = []
    for _ in range(reps):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return float(np.mean(times))


BENCH_QUERIES = ("query_point", "query_halfplane", "query_wedge")


def _lines_through(rng: np.random.Generator, anchors: Sequence[Point2], turn: float = 0.0) -> List[Line2]:
    theta = rng.uniform(0.0, 2.0 * np.pi, len(anchors)) + turn
    return [Line2(float(np.cos(t)), float(np.sin(t)), -float(np.cos(t) * p.x + np.sin(t) * p.y))
            for t, p in zip(theta, anchors)]


def run_bench(sizes: Sequence[int], reps: int, seed: int = 0) -> List[dict]:
    """Seeded timings of separation and of each query kind per size"""
    rows = []
    for n in sizes:
        P = gen_simple_polygon(seed + n, n)
        Q = gen_simple_polygon(seed + 2 * n + 1, n, center=(3.0, 0.0))
        sep = _mean_time(lambda: smallest_separating_circle(P, Q), reps)
        pp = preprocess(gen_convex_polygon(seed + n, n))
        rng = np.random.default_rng(seed + n)
        lo, hi = pp.polygon.coords.min(axis=0), pp.polygon.coords.max(axis=0)
        queries = [Point2(float(x), float(y)) for x, y in rng.uniform(lo, hi, (100, 2))]
        first = _lines_through(np.random.default_rng(seed + n + 1), queries)
        second = _lines_through(np.random.default_rng(seed + n + 1), queries, turn=0.5 * np.pi)
        k = len(queries)
        row = {"n": n, "separate_s": sep}
        row["query_point_s"] = _mean_time(lambda: [query_point(pp, x) for x in queries], reps) / k
        row["query_halfplane_s"] = _mean_time(lambda: [query_halfplane(pp, line) for line in first], reps) / k
        row["query_wedge_s"] = _mean_time(lambda: [query_wedge(pp, a, b) for a, b in zip(first, second)], reps) / k
        rows.append(row)
        logger.debug(f"Bench n={n}: separate {sep:.4g}s, "
                     + ", ".join(f"{q} {row[q + '_s']:.4g}s" for q in BENCH_QUERIES))
    return rows


def cmd_bench(args: argparse.Namespace) -> int:
    sizes = [int(s) for s in args.sizes.split(",") if s.strip()] if args.sizes else []
    rows = run_bench(sizes, args.reps)
    header = f"{'n':>8} {'separate_ms':>12} {'ratio':>7}"
    for q in BENCH_QUERIES:
        name = q.replace("query_", "") + "_us"
        header += f" {name:>13} {'ratio':>7}"
    print(header)
    prev = None
    for row in rows:
        r_sep = row["separate_s"] / prev["separate_s"] if prev else float("nan")
        line = f"{row['n']:>8} {row['separate_s'] * 1e3:>12.3f} {r_sep:>7.2f}"
        for q in BENCH_QUERIES:
            key = q + "_s"
            ratio = row[key] / prev[key] if prev else float("nan")
            line += f" {row[key] * 1e6:>13.2f} {ratio:>7.2f}"
        print(line)
        prev = row
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="circsep",
        description="Circular separability of polygons and largest inscribed circles",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Smallest circle separating two polygons
  circsep separate p.txt q.txt --svg out.svg

  # Largest circle in a convex polygon holding a point, right of x = 0
  circsep inscribe square.txt --point 0.1,0.9 --line 1,0,0

  # Timing table
  circsep bench --sizes 1024,2048,4096

Environment:
  CIRCSEP_EPS    construction tolerance (default 1e-9)
  LOG_LEVEL      stderr log level (default WARNING)
  LOG_FILE       optional rotating log file
        """
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    sep = sub.add_parser("separate", help="Smallest circle separating two polygons")
    sep.add_argument("p", help="Polygon file of P")
    sep.add_argument("q", help="Polygon file of Q")
    sep.add_argument("--svg", help="Write an SVG diagram")
    sep.set_defaults(func=cmd_separate)

    ins = sub.add_parser("inscribe", help="Largest circle inside a convex polygon")
    ins.add_argument("polygon", nargs="?", help="Convex polygon file")
    ins.add_argument("--point", type=_parse_pair, action="append", help="Point x,y to enclose (repeatable)")
    ins.add_argument("--line", type=_parse_line, action="append",
                     help="Line a,b,c; the circle stays where a*x+b*y+c >= 0 (at most two)")
    ins.add_argument("--preprocess-out", help="Save the preprocessed polygon")
    ins.add_argument("--preprocess-in", help="Load a preprocessed polygon instead of a polygon file")
    ins.add_argument("--svg", help="Write an SVG diagram")
    ins.set_defaults(func=cmd_inscribe)

    bench = sub.add_parser("bench", help="Timing table over doubling sizes")
    bench.add_argument("--sizes", default="", help="Comma-separated polygon sizes")
    bench.add_argument("--reps", type=int, default=3, help="Repetitions per size (default: 3)")
    bench.set_defaults(func=cmd_bench)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_ERROR
    setup_logging(args.verbose)
    try:
        return args.func(args)
    except (GeometryError, ValueError, OSError) as e:
        print(f"ERROR: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
