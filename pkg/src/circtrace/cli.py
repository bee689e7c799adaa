"""Command-line front end.

Every command echoes its full configuration as ``# key=value`` header lines
(or a ``config`` object in JSON) so that any output row can be regenerated.
Logarithms are natural throughout.  Exit codes: 0 success, 1 runtime error,
2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Sequence

from . import __version__
from .channel import ChannelParams, exact_trace_prob, make_rng, sample_traces
from .cyclicstats import (
    DEFAULT_ORDER_CAP,
    min_distinguishing_stat,
    stat,
    stats_equal_up_to,
    iter_stat_indices,
    verify_characterization,
)
from .distinguisher import DistinguishInstance, Verdict, run_trial
from .errors import CircTraceError
from .gapseq import GapSequence, to_binary
from .lowerbound import LowerBoundPair, paper_pair, ratio_deviation_sweep, search_matching_pairs
from .numfourier import default_zero_tol, dft, zero_pattern
from .partition import DEFAULT_C


def _gaps(text: str) -> GapSequence:
    try:
        return GapSequence.from_text(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _prob(text: str) -> Fraction:
    try:
        p = Fraction(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0 < p < 1:
        raise argparse.ArgumentTypeError(f"p must lie in (0, 1), got {text}")
    return p


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


class _Output:
    """Collects header and rows, then renders CSV (default) or JSON."""

    def __init__(self, args: argparse.Namespace):
        self.fmt = getattr(args, "format", "csv")
        skip = {"func", "out", "format"}
        self.config = {"command": args.command, "version": __version__}
        for key, value in sorted(vars(args).items()):
            if key in skip or key == "command":
                continue
            self.config[key] = _plain(value)
        self.columns: list[str] = []
        self.rows: list[dict] = []
        self.extra: dict = {}

    def render(self) -> str:
        if self.fmt == "json":
            return json.dumps({"config": self.config, **self.extra, "rows": self.rows}, indent=2) + "\n"
        buf = io.StringIO()
        for key, value in self.config.items():
            buf.write(f"# {key}={value}\n")
        for line in self.extra.get("notes", []):
            buf.write(f"# {line}\n")
        if self.columns:
            writer = csv.DictWriter(buf, fieldnames=self.columns, lineterminator="\n")
            writer.writeheader()
            writer.writerows(self.rows)
        return buf.getvalue()


def _plain(value):
    if isinstance(value, GapSequence):
        return value.to_text()
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (list, tuple)):
        return ",".join(str(v) for v in value)
    return value


def _emit(out: _Output, path: str | None) -> None:
    text = out.render()
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_sample(args) -> None:
    params = ChannelParams(args.p, args.seed)
    traces = sample_traces(to_binary(args.gaps), params, make_rng(args.seed), args.count)
    out = _Output(args)
    out.columns = ["index", "trace"]
    out.rows = [{"index": i, "trace": t} for i, t in enumerate(traces)]
    _emit(out, args.out)


def cmd_prob(args) -> None:
    value = exact_trace_prob(args.gaps, args.trace_gaps, args.p)
    out = _Output(args)
    out.columns = ["probability", "decimal"]
    out.rows = [{"probability": str(value), "decimal": f"{float(value):.12g}"}]
    _emit(out, args.out)


def cmd_stats(args) -> None:
    k = len(args.gaps)
    out = _Output(args)
    out.columns = ["order", "index", "value"]
    for m in range(1, args.max_order + 1):
        for idx in iter_stat_indices(k, m, args.ell):
            out.rows.append({"order": m, "index": idx.to_text(), "value": stat(args.gaps, idx)})
    _emit(out, args.out)


def cmd_fourier(args) -> None:
    spectrum = dft(args.gaps)
    tol = args.tol if args.tol is not None else default_zero_tol(args.gaps)
    pattern = zero_pattern(spectrum, tol)
    payload = {
        "config": {"command": "fourier", "version": __version__, "gaps": args.gaps.to_text(), "tol": tol},
        "spectrum": spectrum.as_dict(),
        "zero_pattern": {str(alpha): cls.value for alpha, cls in pattern.items()},
    }
    text = json.dumps(payload, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_verify_char(args) -> None:
    pairs = verify_characterization(args.k, args.max_value, args.cap)
    out = _Output(args)
    out.extra["notes"] = [f"{len(pairs)} counterexamples"]
    out.extra["counterexamples"] = len(pairs)
    out.columns = ["x", "y", "cap"]
    out.rows = [{"x": ",".join(map(str, x)), "y": ",".join(map(str, y)), "cap": args.cap} for x, y in pairs]
    _emit(out, args.out)
    if not args.out and out.fmt == "csv":
        sys.stderr.write(f"{len(pairs)} counterexamples\n")


def _trial_row(inst: DistinguishInstance, source: Verdict, trial: int) -> dict:
    try:
        res = run_trial(inst, source, trial)
    except CircTraceError as exc:
        return {"trial": trial, "verdict": type(exc).__name__, "f_hat": "", "target_x": "",
                "target_y": "", "useful_count": 0}
    return {
        "trial": trial,
        "verdict": res.verdict.value,
        "f_hat": f"{res.f_hat:.10g}",
        "target_x": f"{res.target_x:.10g}",
        "target_y": f"{res.target_y:.10g}",
        "useful_count": res.useful_count,
    }


def cmd_distinguish(args) -> None:
    inst = DistinguishInstance(args.x, args.y, ChannelParams(float(args.p), args.seed), args.C, args.traces)
    source = Verdict(args.source)
    with ThreadPoolExecutor(max_workers=max(1, args.threads)) as pool:
        rows = list(pool.map(lambda t: _trial_row(inst, source, t), range(args.trials)))
    out = _Output(args)
    correct = sum(r["verdict"] == source.value for r in rows)
    out.extra["notes"] = [f"correct={correct}/{args.trials}"]
    out.extra["correct"] = correct
    out.columns = ["trial", "verdict", "f_hat", "target_x", "target_y", "useful_count"]
    out.rows = rows
    _emit(out, args.out)


def _load_pair(source: str) -> LowerBoundPair:
    if source == "paper":
        return paper_pair()
    with open(source, encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip() and not ln.startswith("#")]
    if len(lines) < 2:
        raise argparse.ArgumentTypeError(f"{source}: expected two lines of gaps (x then y)")
    return LowerBoundPair.from_sequences(GapSequence.from_text(lines[0]), GapSequence.from_text(lines[1]))


def cmd_ratio_sweep(args) -> None:
    pair = _load_pair(args.pair)
    result = ratio_deviation_sweep(pair, float(args.p), args.n_list, args.samples, args.C_window, args.seed)
    out = _Output(args)
    out.extra["notes"] = [f"slope={result.slope:.6g}"]
    out.extra["slope"] = result.slope
    out.columns = ["n", "samples_kept", "max_dev", "q99_dev", "slope_so_far"]
    out.rows = [
        {"n": r.n, "samples_kept": r.samples_kept, "max_dev": f"{r.max_dev:.10g}",
         "q99_dev": f"{r.q99_dev:.10g}", "slope_so_far": f"{r.slope_so_far:.6g}"}
        for r in result.rows
    ]
    _emit(out, args.out)


def cmd_search_pairs(args) -> None:
    pairs = search_matching_pairs(args.k, args.max_value, args.order)
    out = _Output(args)
    out.extra["notes"] = [f"{len(pairs)} pairs"]
    out.columns = ["x", "y", "matched_order"]
    out.rows = [{"x": p.x.to_text(), "y": p.y.to_text(), "matched_order": p.matched_order} for p in pairs]
    _emit(out, args.out)


def cmd_pair_demo(args) -> None:
    pair = paper_pair()
    idx = min_distinguishing_stat(pair.x, pair.y, 1, DEFAULT_ORDER_CAP)
    lines = [
        f"x = {pair.x.to_text()}",
        f"y = {pair.y.to_text()}",
    ]
    for m in range(1, pair.matched_order + 1):
        lines.append(f"orders 1..{m} agree: {stats_equal_up_to(pair.x, pair.y, m)}")
    lines.append(
        f"first distinguishing statistic: {idx.to_text()} (order {idx.order}), "
        f"x -> {stat(pair.x, idx)}, y -> {stat(pair.y, idx)}"
    )
    sys.stdout.write("\n".join(lines) + "\n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="circtrace",
        description="Circular deletion channel experiments on sparse strings (natural log throughout).",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, out=True):
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.set_defaults(func=func)
        if out:
            p.add_argument("--out", help="output file (default stdout)")
            p.add_argument("--format", choices=["csv", "json"], default="csv")
        return p

    p = add("sample", cmd_sample, "draw traces of a gap sequence")
    p.add_argument("--gaps", type=_gaps, required=True)
    p.add_argument("--p", type=_prob, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=10)

    p = add("prob", cmd_prob, "exact probability of a k-one trace")
    p.add_argument("--gaps", type=_gaps, required=True)
    p.add_argument("--trace-gaps", type=_gaps, required=True)
    p.add_argument("--p", type=_prob, required=True)

    p = add("stats", cmd_stats, "cyclic statistics of a gap sequence")
    p.add_argument("--gaps", type=_gaps, required=True)
    p.add_argument("--max-order", type=int, default=3)
    p.add_argument("--ell", type=int, default=1)

    p = sub.add_parser("fourier", help="spectrum and zero pattern as JSON")
    p.set_defaults(func=cmd_fourier)
    p.add_argument("--gaps", type=_gaps, required=True)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--out")

    p = add("verify-char", cmd_verify_char, "exhaustive check that statistics up to cap determine rotation class")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--max-value", type=int, required=True)
    p.add_argument("--cap", type=int, default=DEFAULT_ORDER_CAP)

    p = add("distinguish", cmd_distinguish, "seeded distinguishing trials")
    p.add_argument("--x", type=_gaps, required=True)
    p.add_argument("--y", type=_gaps, required=True)
    p.add_argument("--p", type=_prob, required=True)
    p.add_argument("--C", type=float, default=DEFAULT_C)
    p.add_argument("--traces", type=int, default=100_000)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--source", choices=["x", "y"], default="x")
    p.add_argument("--threads", type=int, default=1, help="worker threads; results do not depend on it")

    p = add("ratio-sweep", cmd_ratio_sweep, "probability-ratio deviation versus n")
    p.add_argument("--pair", default="paper", help="'paper' or a file with x and y on two lines")
    p.add_argument("--p", type=_prob, default=Fraction(1, 2))
    p.add_argument("--n-list", type=_int_list, default=[64, 128, 256, 512])
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--C-window", type=float, default=3.0)
    p.add_argument("--seed", type=int, default=0)

    p = add("search-pairs", cmd_search_pairs, "exhaustive search for permutation pairs with matching statistics")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--max-value", type=int, required=True)
    p.add_argument("--order", type=int, required=True)

    p = sub.add_parser("pair-demo", help="show the length-12 pair matching through order 4")
    p.set_defaults(func=cmd_pair_demo)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args)
    except argparse.ArgumentTypeError as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"usage error: {exc}\n")
        return 2
    except CircTraceError as exc:
        sys.stderr.write(f"{type(exc).__name__}: {exc}\n")
        return 1
    except (OSError, ValueError) as exc:
        sys.stderr.write(f"{type(exc).__name__}: {exc}\n")
        return 1
    return 0


def main() -> None:
    sys.exit(run())
