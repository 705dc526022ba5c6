"""Command-line interface: ``split``, ``score``, ``batch`` and ``dot``.

Exit codes: 0 success, 1 unreadable or invalid input (or a failing batch
reference), 2 a program without outputs, 3 a submission that is not
equivalent to its reference.
"""

from __future__ import annotations

import argparse
import os
import statistics
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .config import Config, load_config, with_overrides
from .ddg.canonical import program_form
from .errors import DecompError, NoGoalsError
from .lang import decode_source, parse_source
from .metrics import METRICS, compare, flag_findings, measure
from .report import RenderOptions, render_dot, render_feedback_md, render_frames, to_json
from .split import split_program

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NO_GOALS = 2
EXIT_NOT_EQUIVALENT = 3
SOURCE_SUFFIXES = (".src", ".py")


class InputError(DecompError):
    pass


# ------------------------------------------------------------------ helpers


def read_program(path):
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    return parse_source(decode_source(data))


def write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_all(outputs: dict) -> None:
    """Write every file only once all of them have been produced."""
    for path, text in outputs.items():
        write_atomic(Path(path), text)


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, NoGoalsError):
        return EXIT_NO_GOALS
    return EXIT_ERROR


def report_error(path, exc) -> None:
    print(f"{path}:{exc}", file=sys.stderr)


def reference_program(path):
    """A decomposed reference; undecomposed code is split first."""
    program = read_program(path)
    if program.functions:
        return program
    return parse_source(split_program(program).source)


def split_payload(result) -> dict:
    return {
        "coloring": result.coloring.to_dict(),
        "duplicates": [g.to_dict() for g in result.duplicates],
        "plan": result.plan.to_dict(),
        "refined": result.refined.to_dict(),
    }


# ------------------------------------------------------------------- split


def cmd_split(input_path, config: Config, frames: bool = False, refine: bool = True) -> int:
    input_path = Path(input_path)
    try:
        program = read_program(input_path)
        result = split_program(program, refine=refine)
        options = RenderOptions(palette=config.palette)
        out = Path(config.output_dir)
        stem = input_path.stem
        outputs = {
            out / f"{stem}.plan.json": to_json(split_payload(result)),
            out / f"{stem}.split.src": result.source,
            out / f"{stem}.dot": render_dot(result.ddg, result.coloring, options),
        }
        if frames:
            for k, text in enumerate(render_frames(result.ddg, options), start=1):
                outputs[out / f"{stem}.frame{k:02d}.dot"] = text
    except DecompError as exc:
        report_error(input_path, exc)
        return exit_code_for(exc)
    write_all(outputs)
    if config.format == "json":
        sys.stdout.write(to_json(split_payload(result)))
    elif config.format == "dot":
        sys.stdout.write(outputs[out / f"{stem}.dot"])
    else:
        sys.stdout.write(result.source)
    return EXIT_OK


# ------------------------------------------------------------------- score


def score(candidate, reference, config: Config, ref_form=None, ref_measure=None):
    ref_form = ref_form if ref_form is not None else program_form(reference)
    ref_measure = ref_measure if ref_measure is not None else measure(reference)
    cand_measure = measure(candidate)
    equivalent = program_form(candidate) == ref_form
    findings = flag_findings(candidate, cand_measure, config.param_threshold, ref_measure)
    return compare(cand_measure, ref_measure, config.weights, equivalent, findings)


def cmd_score(student_path, reference_path, config: Config) -> int:
    try:
        reference = reference_program(reference_path)
    except DecompError as exc:
        report_error(reference_path, exc)
        return exit_code_for(exc)
    try:
        report = score(read_program(student_path), reference, config)
    except DecompError as exc:
        report_error(student_path, exc)
        return exit_code_for(exc)
    out = Path(config.output_dir)
    stem = Path(student_path).stem
    markdown = render_feedback_md(report)
    write_all({out / f"{stem}.report.json": to_json(report), out / f"{stem}.report.md": markdown})
    sys.stdout.write(markdown if config.format == "md" else to_json(report))
    if not report.equivalent:
        print(f"{student_path}: outputs differ from the reference", file=sys.stderr)
        return EXIT_NOT_EQUIVALENT
    return EXIT_OK


# ------------------------------------------------------------------- batch


@dataclass(frozen=True)
class BatchRow:
    path: str
    composite: Optional[float] = None
    subscores: tuple = ()
    equivalent: bool = False
    error: Optional[str] = None
    report: object = None

    def to_dict(self) -> dict:
        out = {"path": self.path}
        if self.error is not None:
            out["error"] = self.error
            return out
        out["composite"] = self.composite
        out["subscores"] = {f"s{i}": s for i, s in enumerate(self.subscores, start=1)}
        out["equivalent"] = self.equivalent
        return out


def batch_files(corpus_dir: Path, exclude=()) -> list:
    excluded = {Path(p).resolve() for p in exclude}
    files = [
        p
        for p in corpus_dir.rglob("*")
        if p.is_file() and p.suffix in SOURCE_SUFFIXES and p.resolve() not in excluded
    ]
    return sorted(files, key=lambda p: p.relative_to(corpus_dir).as_posix())


def summarize(rows) -> dict:
    good = [r for r in rows if r.error is None and r.equivalent]
    summary = {
        "files": len(rows),
        "errors": sum(1 for r in rows if r.error is not None),
        "not_equivalent": sum(1 for r in rows if r.error is None and not r.equivalent),
        "summarized": len(good),
    }
    composites = [r.composite for r in good]
    summary["mean_composite"] = statistics.fmean(composites) if composites else None
    summary["median_composite"] = statistics.median(composites) if composites else None
    histograms = {}
    for metric in METRICS:
        counts = {}
        for row in good:
            value = getattr(row.report.candidate, metric)
            counts[value] = counts.get(value, 0) + 1
        histograms[metric] = {str(k): counts[k] for k in sorted(counts)}
    summary["histograms"] = histograms
    return summary


def run_batch(corpus_dir, reference, config: Config, jobs: int = 1, exclude=()) -> tuple:
    """Score every source file under ``corpus_dir``; rows come back in path order."""
    corpus_dir = Path(corpus_dir)
    ref_form = program_form(reference)
    ref_measure = measure(reference)

    def one(path):
        rel = path.relative_to(corpus_dir).as_posix()
        try:
            report = score(read_program(path), reference, config, ref_form, ref_measure)
        except DecompError as exc:
            return BatchRow(rel, error=str(exc))
        return BatchRow(rel, report.composite, report.subscores, report.equivalent, report=report)

    files = batch_files(corpus_dir, exclude)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(one, files))
    else:
        rows = [one(path) for path in files]
    return rows, summarize(rows)


def cmd_batch(corpus_dir, reference_path, config: Config, jobs: int = 1) -> int:
    try:
        reference = reference_program(reference_path)
        rows, summary = run_batch(corpus_dir, reference, config, jobs, exclude=[reference_path])
    except DecompError as exc:
        report_error(reference_path, exc)
        return EXIT_ERROR
    out = Path(config.output_dir)
    outputs = {}
    for row in rows:
        if row.report is not None:
            outputs[out / "reports" / f"{row.path}.json"] = to_json(row.report)
    payload = {"rows": [row.to_dict() for row in rows], "summary": summary}
    text = to_json(payload)
    outputs[out / "batch.json"] = text
    write_all(outputs)
    sys.stdout.write(text)
    return EXIT_OK


# --------------------------------------------------------------------- dot


def cmd_dot(input_path, config: Config, frames: bool = False, to_file: bool = False) -> int:
    try:
        program = read_program(input_path)
        result = split_program(program, refine=False)
        options = RenderOptions(palette=config.palette)
        if frames:
            text = "".join(render_frames(result.ddg, options))
        else:
            text = render_dot(result.ddg, result.coloring, options)
    except DecompError as exc:
        report_error(input_path, exc)
        return exit_code_for(exc)
    if to_file:
        write_atomic(Path(config.output_dir) / f"{Path(input_path).stem}.dot", text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# -------------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI configuration file (default: $DECOMP_CONFIG)")
    common.add_argument("--out", help="output directory")
    common.add_argument("--weights", help="metric weights w1,w2,w3,w4")
    common.add_argument("--param-threshold", type=int, help="parameter count that triggers a finding")
    common.add_argument("--format", choices=("dot", "json", "md"), help="what to print on stdout")

    parser = argparse.ArgumentParser(prog="decomp", description="Functional decomposition analysis.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("split", parents=[common], help="decompose a program")
    p.add_argument("file")
    p.add_argument("--frames", action="store_true", help="also write one DOT file per coloring step")
    p.add_argument("--no-refine", action="store_true", help="skip duplicate collapsing")

    p = sub.add_parser("score", parents=[common], help="score a submission against a reference")
    p.add_argument("student")
    p.add_argument("reference")

    p = sub.add_parser("batch", parents=[common], help="score every file in a directory")
    p.add_argument("dir")
    p.add_argument("reference")
    p.add_argument("--jobs", type=int, default=1, help="worker threads")

    p = sub.add_parser("dot", parents=[common], help="print the colored dependency graph")
    p.add_argument("file")
    p.add_argument("--frames", action="store_true", help="print every coloring step")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = with_overrides(
            load_config(args.config),
            weights=args.weights,
            param_threshold=args.param_threshold,
            format=args.format,
            output_dir=args.out,
        )
    except DecompError as exc:
        print(f"decomp: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if args.command == "split":
        return cmd_split(args.file, config, frames=args.frames, refine=not args.no_refine)
    if args.command == "score":
        return cmd_score(args.student, args.reference, config)
    if args.command == "batch":
        return cmd_batch(args.dir, args.reference, config, jobs=max(1, args.jobs))
    return cmd_dot(args.file, config, frames=args.frames, to_file=args.out is not None)


if __name__ == "__main__":
    sys.exit(main())
