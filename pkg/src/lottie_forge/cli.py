"""``lottie-forge`` command line."""
from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys
from dataclasses import asdict
from functools import partial
from pathlib import Path
from typing import Iterable, Sequence

from . import corpus
from .easing import EasingCurve, eval_easing, sample_detail, solve_u_stats
from .errors import LottieError
from .metrics import DEFAULT_THRESHOLDS, StructReport, bucket_of, score_texts, stratify
from .model import AnimatedProperty, BezierPath, parse, resolve, serialize
from .numeric import format_number
from .optimizer import DEFAULT_PRUNE, NAME_FIELDS, OptimizeConfig, optimize, size_report
from .svg_bridge import consistency_check, convert
from .tokenizer import detokenize, parse_text, render_text, token_count, tokenize

log = logging.getLogger("lottie_forge")

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2
PIPELINE_STEPS = ("optimize", "tokenize", "roundtrip", "score", "stratify", "stats")
SCORE_COLUMNS = ("file", "valid", "key_f1", "value_match", "numeric_mae", "json_struct_sim")


# ---------------------------------------------------------------- output helpers


def _open_out(path: str | None):
    if path in (None, "-"):
        return _Stdout()
    return open(path, "w", newline="", encoding="utf-8")


class _Stdout:
    def __enter__(self):
        return sys.stdout

    def __exit__(self, *exc):
        sys.stdout.flush()


def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format_number(v)
    return "" if v is None else str(v)


def write_csv(path: str | None, columns: Sequence[str], rows: Iterable[dict]):
    with _open_out(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([_cell(row.get(c)) for c in columns])


def write_json(path: str | None, payload):
    if path:
        Path(path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def _write_text(path: str | None, text: str):
    with _open_out(path) as fh:
        fh.write(text if text.endswith("\n") else text + "\n")


def _optimize_config(args) -> OptimizeConfig:
    keep = NAME_FIELDS if getattr(args, "keep_names", False) else ()
    return OptimizeConfig(prune_fields=tuple(f for f in DEFAULT_PRUNE if f not in keep),
                          significant_digits=args.digits)


def _jobs(args) -> int:
    return corpus.resolve_jobs(args.jobs)


# ---------------------------------------------------------------- workers (module level so they pickle)


def _optimize_file(item, cfg: OptimizeConfig, out_dir: str | None, strict: bool) -> dict:
    raw = Path(item).read_bytes()
    text = serialize(optimize(parse(raw, strict), cfg))
    if out_dir:
        (Path(out_dir) / Path(item).name).write_text(text, encoding="utf-8")
    rep = size_report(raw, text)
    return {"file": Path(item).name, "bytes_before": rep.bytes_before,
            "bytes_after": rep.bytes_after, "ratio": rep.ratio}


def _roundtrip_file(item, quantize: bool, presets: bool, strict: bool) -> dict:
    raw = Path(item).read_bytes()
    doc = parse(raw, strict)
    plain, quant = corpus.token_counts(doc, presets)
    return {"file": Path(item).name, "tokens_plain": plain, "tokens_quant": quant,
            "bytes_json": len(raw), "roundtrip_ok": corpus.roundtrip_ok(doc, quantize, presets)}


def _score_pair(item) -> dict:
    gt_path, pred_path = item
    gt = Path(gt_path).read_bytes()
    if pred_path is None or not Path(pred_path).is_file():
        rep = StructReport(0, 0, 0, 0.0, 0.0, 0.0, 0.0, False)
    else:
        rep = score_texts(gt, Path(pred_path).read_bytes())
    return {"file": Path(gt_path).name, **asdict(rep)}


def _convert_file(item, out_dir: str | None, strict: bool) -> dict:
    svg = Path(item).read_bytes()
    doc = convert(svg)
    if strict and not consistency_check(svg, doc):
        raise LottieError("bounding boxes disagree with the source drawing")
    if out_dir:
        (Path(out_dir) / (Path(item).stem + ".json")).write_text(serialize(doc), encoding="utf-8")
    return {"file": Path(item).name, "layers": len(doc.layers)}


def _stratify_file(item, strict: bool) -> dict:
    doc = parse(Path(item).read_bytes(), strict)
    return {"file": Path(item).name, "tokens": token_count(doc, numerics="none")}


def _pipeline_file(item, steps: tuple[str, ...], cfg: OptimizeConfig, quantize: bool,
                   presets: bool, thresholds: tuple[int, int], strict: bool) -> dict:
    raw = Path(item).read_bytes()
    row: dict = {"file": Path(item).name}
    doc = original = parse(raw, strict)
    for step in steps:
        if step == "optimize":
            doc = optimize(doc, cfg)
            rep = size_report(raw, serialize(doc))
            row.update(bytes_before=rep.bytes_before, bytes_after=rep.bytes_after, ratio=rep.ratio)
        elif step == "tokenize":
            row["tokens_plain"], row["tokens_quant"] = corpus.token_counts(doc, presets)
        elif step == "roundtrip":
            row["roundtrip_ok"] = corpus.roundtrip_ok(doc, quantize, presets)
        elif step == "score":
            rep = score_texts(serialize(original), serialize(doc))
            row.update(valid=rep.valid, json_struct_sim=rep.json_struct_sim)
        elif step == "stratify":
            row["bucket"] = bucket_of(token_count(doc, numerics="none"), thresholds)
        elif step == "stats":
            row.update(frames=doc.meta.frames, duration=doc.meta.duration,
                       duration_bucket=corpus.duration_bucket(doc.meta.duration))
    return row


_PIPELINE_COLUMNS = {
    "optimize": ("bytes_before", "bytes_after", "ratio"),
    "tokenize": ("tokens_plain", "tokens_quant"),
    "roundtrip": ("roundtrip_ok",),
    "score": ("valid", "json_struct_sim"),
    "stratify": ("bucket",),
    "stats": ("frames", "duration", "duration_bucket"),
}


# ---------------------------------------------------------------- commands


def cmd_optimize(args) -> int:
    cfg = _optimize_config(args)
    src = Path(args.input)
    if src.is_dir():
        if args.output:
            Path(args.output).mkdir(parents=True, exist_ok=True)
        fn = partial(_optimize_file, cfg=cfg, out_dir=args.output, strict=args.strict)
        outcomes = corpus.run_batch(fn, corpus.list_files(src), _jobs(args))
        rows = [o.row for o in outcomes if o.ok]
        write_csv(args.report, ("file", "bytes_before", "bytes_after", "ratio"), rows)
        write_json(args.json_out, {"rows": rows, "errors": _errors(outcomes)})
        return EXIT_OK
    raw = src.read_bytes()
    text = serialize(optimize(parse(raw, args.strict), cfg))
    _write_text(args.output, text)
    rep = size_report(raw, text)
    log.info("%d -> %d bytes (%.1f%% smaller)", rep.bytes_before, rep.bytes_after, 100 * rep.reduction)
    return EXIT_OK


def cmd_tokenize(args) -> int:
    doc = parse(Path(args.input).read_bytes(), args.strict)
    _write_text(args.output, render_text(tokenize(doc, args.quantize, args.presets)))
    return EXIT_OK


def cmd_detokenize(args) -> int:
    doc = detokenize(parse_text(Path(args.input).read_text(encoding="utf-8")))
    _write_text(args.output, serialize(doc))
    return EXIT_OK


def cmd_roundtrip(args) -> int:
    fn = partial(_roundtrip_file, quantize=args.quantize, presets=args.presets, strict=args.strict)
    outcomes = corpus.run_batch(fn, corpus.list_files(args.dir), _jobs(args))
    rows = [o.row if o.ok else {"file": o.name, "roundtrip_ok": False} for o in outcomes]
    write_csv(args.report, ("file", "tokens_plain", "tokens_quant", "bytes_json", "roundtrip_ok"), rows)
    write_json(args.json_out, {"rows": rows, "errors": _errors(outcomes)})
    failed = [r["file"] for r in rows if not r["roundtrip_ok"]]
    log.info("%d/%d files roundtrip", len(rows) - len(failed), len(rows))
    return EXIT_FAIL if failed else EXIT_OK


def parse_frames(text: str) -> list[float]:
    """``a:b:step`` (inclusive of b) or a comma list of frames."""
    if ":" in text:
        parts = [float(p) for p in text.split(":")]
        if len(parts) == 2:
            parts.append(1.0)
        if len(parts) != 3 or parts[2] <= 0:
            raise ValueError(f"bad frame range {text!r}")
        a, b, step = parts
        n = math.floor((b - a) / step + 1e-9)
        return [a + k * step for k in range(n + 1)]
    return [float(p) for p in text.split(",") if p.strip()]


def _value_text(v) -> str:
    if isinstance(v, BezierPath):
        return f"<path {len(v)} vertices>"
    if isinstance(v, (tuple, list)):
        return " ".join(format_number(float(c)) for c in v)
    return format_number(float(v))


def cmd_sample(args) -> int:
    doc = parse(Path(args.input).read_bytes(), args.strict)
    prop = resolve(doc, args.path)
    if not isinstance(prop, AnimatedProperty):
        raise LottieError(f"{args.path} is not a property")
    rows = []
    for frame in parse_frames(args.frames):
        r = sample_detail(prop, frame)
        rows.append({"frame": frame, "t_norm": r.t_norm, "u": r.u, "t_eased": r.t_eased,
                     "value": _value_text(r.value)})
    columns = ("frame", "t_norm", "u", "t_eased", "value")
    if args.csv:
        write_csv(None, columns, rows)
    else:
        print(f"{'frame':>10} {'t_norm':>9} {'u':>9} {'t_eased':>9}  value")
        for r in rows:
            print(f"{r['frame']:10.4g} {r['t_norm']:9.4f} {r['u']:9.4f} {r['t_eased']:9.4f}  {r['value']}")
    return EXIT_OK


def _point(text: str) -> tuple[float, float]:
    parts = [float(p) for p in text.split(",")]
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected x,y got {text!r}")
    return parts[0], parts[1]


def cmd_ease(args) -> int:
    curve = EasingCurve(args.p1, args.p2)
    st = solve_u_stats(curve, args.t)
    out = {"t_norm": args.t, "u": st.u, "t_eased": eval_easing(curve, args.t),
           "iterations": st.iterations, "bisection": st.bisection}
    if args.json:
        print(json.dumps(out))
    else:
        print(f"t_norm={args.t:g} u={st.u:.6f} t_eased={out['t_eased']:.6f} "
              f"iterations={st.iterations}{' (bisection)' if st.bisection else ''}")
    return EXIT_OK


def cmd_score(args) -> int:
    rep = score_texts(Path(args.gt).read_bytes(), Path(args.pred).read_bytes())
    row = asdict(rep)
    if args.json:
        print(json.dumps(row))
    elif args.csv:
        write_csv(None, list(row), [row])
    else:
        print(f"valid={rep.valid} key_f1={rep.key_f1:.4f} value_match={rep.value_match:.4f} "
              f"numeric_mae={rep.numeric_mae:.4f} json_struct_sim={rep.json_struct_sim:.4f} "
              f"(common {rep.common}, missing {rep.missing}, extra {rep.extra})")
    return EXIT_OK


def cmd_score_dir(args) -> int:
    pred_dir = Path(args.pred)
    pairs = [(str(p), str(pred_dir / p.name)) for p in corpus.list_files(args.gt)]
    outcomes = corpus.run_batch(_score_pair, pairs, _jobs(args))
    rows = [o.row if o.ok else {"file": o.name, "valid": False} for o in outcomes]
    write_csv(args.report, SCORE_COLUMNS, rows)
    write_json(args.json_out, {"rows": rows, "errors": _errors(outcomes)})
    scored = [r for r in rows if "json_struct_sim" in r]
    if scored:
        log.info("mean json_struct_sim %.4f over %d files",
                 sum(r["json_struct_sim"] for r in scored) / len(scored), len(scored))
    return EXIT_OK


def cmd_convert_svg(args) -> int:
    src = Path(args.input)
    if src.is_dir():
        if args.output:
            Path(args.output).mkdir(parents=True, exist_ok=True)
        fn = partial(_convert_file, out_dir=args.output, strict=args.strict)
        outcomes = corpus.run_batch(fn, corpus.list_files(src, (".svg",)), _jobs(args))
        rejects = [f"{o.name}\t{o.error}" for o in outcomes if not o.ok]
        if args.rejects:
            Path(args.rejects).write_text("".join(r + "\n" for r in rejects), encoding="utf-8")
        else:
            for r in rejects:
                print(r)
        log.info("converted %d, rejected %d", len(outcomes) - len(rejects), len(rejects))
        return EXIT_OK
    svg = src.read_bytes()
    doc = convert(svg)
    if args.strict and not consistency_check(svg, doc):
        raise LottieError("bounding boxes disagree with the source drawing")
    _write_text(args.output, serialize(doc))
    return EXIT_OK


def cmd_stats(args) -> int:
    result, outcomes = corpus.stats(args.dir, _jobs(args))
    rows = [o.row for o in outcomes if o.ok]
    if args.report:
        write_csv(args.report, [f.name for f in corpus.FileStats.__dataclass_fields__.values()], rows)
    write_json(args.json_out, {"summary": asdict(result), "rows": rows, "errors": _errors(outcomes)})
    print(result.summary())
    return EXIT_OK


def cmd_stratify(args) -> int:
    fn = partial(_stratify_file, strict=args.strict)
    outcomes = corpus.run_batch(fn, corpus.list_files(args.dir), _jobs(args))
    rows = [o.row for o in outcomes if o.ok]
    buckets = stratify([(r["file"], r["tokens"]) for r in rows], args.thresholds)
    where = {name: b for b, names in buckets.items() for name in names}
    for r in rows:
        r["bucket"] = where[r["file"]]
    if args.report:
        write_csv(args.report, ("file", "tokens", "bucket"), rows)
    write_json(args.json_out, {"buckets": buckets, "errors": _errors(outcomes)})
    for b, names in buckets.items():
        print(f"{b}: {len(names)}")
    return EXIT_OK


def cmd_pipeline(args) -> int:
    steps = tuple(s.strip() for s in args.steps.split(",") if s.strip())
    unknown = [s for s in steps if s not in PIPELINE_STEPS]
    if unknown:
        raise ValueError(f"unknown pipeline steps: {', '.join(unknown)}")
    fn = partial(_pipeline_file, steps=steps, cfg=_optimize_config(args), quantize=args.quantize,
                 presets=args.presets, thresholds=args.thresholds, strict=args.strict)
    outcomes = corpus.run_batch(fn, corpus.list_files(args.dir), _jobs(args))
    rows = []
    for o in outcomes:
        row = o.row if o.ok else {"file": o.name, "error": o.error}
        if not o.ok and "roundtrip" in steps:
            row["roundtrip_ok"] = False  # an unreadable file cannot roundtrip
        rows.append(row)
    columns = ["file"] + [c for s in steps for c in _PIPELINE_COLUMNS[s]] + ["error"]
    write_csv(args.report, columns, rows)
    write_json(args.json_out, {"steps": steps, "rows": rows})
    failed = sum(1 for r in rows if r.get("roundtrip_ok") is False)
    return EXIT_FAIL if failed else EXIT_OK


def _errors(outcomes) -> dict[str, str]:
    return {o.name: o.error for o in outcomes if not o.ok}


# ---------------------------------------------------------------- argument parsing


def _thresholds(text: str) -> tuple[int, int]:
    parts = [int(p) for p in text.split(",")]
    if len(parts) != 2 or parts[0] > parts[1]:
        raise argparse.ArgumentTypeError("expected two ascending integers lo,hi")
    return parts[0], parts[1]


def _globals(suppress: bool) -> argparse.ArgumentParser:
    """Flags accepted both before and after the subcommand."""
    p = argparse.ArgumentParser(add_help=False)

    def dflt(v):
        return argparse.SUPPRESS if suppress else v

    p.add_argument("--digits", type=int, default=dflt(4), help="significant digits kept by optimize")
    p.add_argument("--quantize", action="store_true", default=dflt(False),
                   help="round numbers to 4 significant digits in token streams")
    p.add_argument("--presets", action="store_true", default=dflt(False),
                   help="emit catalog easing curves as single tokens")
    p.add_argument("--jobs", type=int, default=dflt(1), metavar="N",
                   help=f"worker processes for batch runs (0 = all cores; ${corpus.JOBS_ENV} overrides)")
    p.add_argument("--strict", action="store_true", default=dflt(False),
                   help="reject expressions and 3D layers; verify SVG conversions")
    p.add_argument("-v", "--verbose", action="count", default=dflt(0))
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lottie-forge", parents=[_globals(False)],
                                     description="Lottie optimization, tokenization, easing and scoring tools.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    common = [_globals(True)]

    def add(name, fn, help_):
        p = sub.add_parser(name, parents=common, help=help_)
        p.set_defaults(func=fn)
        return p

    def json_mirror(p):
        p.add_argument("--json-out", metavar="PATH", help="also write the report as JSON")

    p = add("optimize", cmd_optimize, "simplify a file or every file in a directory")
    p.add_argument("input")
    p.add_argument("-o", "--output", help="output file, or output directory in batch mode")
    p.add_argument("--keep-names", action="store_true", help="keep nm/mn name fields")
    p.add_argument("--report", help="batch size report CSV (default stdout)")
    json_mirror(p)

    p = add("tokenize", cmd_tokenize, "write the token stream of a document")
    p.add_argument("input")
    p.add_argument("-o", "--output")

    p = add("detokenize", cmd_detokenize, "rebuild a document from a token stream")
    p.add_argument("input")
    p.add_argument("-o", "--output")

    p = add("roundtrip", cmd_roundtrip, "check tokenize/detokenize on every file in a directory")
    p.add_argument("dir")
    p.add_argument("--report", help="CSV report (default stdout)")
    json_mirror(p)

    p = add("sample", cmd_sample, "sample a property over a frame range")
    p.add_argument("input")
    p.add_argument("--path", required=True, help='property path such as "layers[0].ks.r"')
    p.add_argument("--frames", required=True, help="a:b:step (inclusive) or a comma list")
    p.add_argument("--csv", action="store_true")

    p = add("ease", cmd_ease, "evaluate one easing curve")
    p.add_argument("--p1", type=_point, required=True, metavar="X,Y")
    p.add_argument("--p2", type=_point, required=True, metavar="X,Y")
    p.add_argument("--t", type=float, required=True, help="normalized time in [0, 1]")
    p.add_argument("--json", action="store_true")

    p = add("score", cmd_score, "structural similarity of two JSON files")
    p.add_argument("--gt", required=True)
    p.add_argument("--pred", required=True)
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--csv", action="store_true")

    p = add("score-dir", cmd_score_dir, "score every prediction against its same-named reference")
    p.add_argument("gt")
    p.add_argument("pred")
    p.add_argument("--report", help="CSV report (default stdout)")
    json_mirror(p)

    p = add("convert-svg", cmd_convert_svg, "convert an SVG file or directory to Lottie")
    p.add_argument("input")
    p.add_argument("-o", "--output", help="output file, or output directory in batch mode")
    p.add_argument("--rejects", help="batch mode: write rejected files and reasons here")

    p = add("stats", cmd_stats, "corpus statistics and duration histogram")
    p.add_argument("dir")
    p.add_argument("--report", help="per-file CSV")
    json_mirror(p)

    p = add("stratify", cmd_stratify, "bucket files into Simple/Medium/Complex by structural token count")
    p.add_argument("dir")
    p.add_argument("--thresholds", type=_thresholds, default=DEFAULT_THRESHOLDS, metavar="LO,HI")
    p.add_argument("--report", help="per-file CSV")
    json_mirror(p)

    p = add("pipeline", cmd_pipeline, "run several steps per file into one report")
    p.add_argument("dir")
    p.add_argument("--steps", default=",".join(PIPELINE_STEPS),
                   help=f"comma list from {', '.join(PIPELINE_STEPS)}")
    p.add_argument("--thresholds", type=_thresholds, default=DEFAULT_THRESHOLDS, metavar="LO,HI")
    p.add_argument("--report", help="CSV report (default stdout)")
    json_mirror(p)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(message)s", stream=sys.stderr, force=True)
    try:
        return args.func(args)
    except (LottieError, OSError, ValueError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"lottie-forge {args.command}: {type(exc).__name__}: {msg}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
