"""Command-line interface: synth, summarize, eval, report.

Exit codes: 0 success, 2 usage error (argparse), 3 data/validation error,
4 numeric error. All file outputs are written atomically.
"""

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from epdyn import dmd, summarizers, synth
from epdyn._io import atomic_write_text
from epdyn.ep import (
    EpKind,
    load_dataset,
    save_dataset,
    save_representations,
)
from epdyn.errors import NumericError, ParseError, TooShortError, ValidationError
from epdyn.experiment import (
    confusion_csv,
    load_experiment_config,
    render_table,
    report_to_dict,
    run_experiment,
)


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _u64(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer seed, got {text!r}")
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"seed must fit in an unsigned 64-bit integer, got {text!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="epdyn",
        description="Emotion-profile dynamics: synthesize, summarize, evaluate.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_synth = sub.add_parser("synth", help="generate a synthetic EEP/BEP dataset pair")
    p_synth.add_argument("--config", help="JSON SynthConfig; defaults to the built-in benchmark")
    p_synth.add_argument("--out-eep", required=True, help="output EEP dataset (JSON lines)")
    p_synth.add_argument("--out-bep", required=True, help="output BEP dataset (JSON lines)")
    p_synth.add_argument("--seed", type=_u64, default=None, help="override the config seed")
    p_synth.add_argument("--jobs", type=int, default=1, help="accepted for symmetry; generation is sequential")
    p_synth.set_defaults(func=cmd_synth)

    p_sum = sub.add_parser("summarize", help="compute fixed-length utterance representations")
    p_sum.add_argument("--input", required=True, help="dataset to summarize (JSON lines)")
    p_sum.add_argument("--output", required=True, help="representations output (JSON lines)")
    p_sum.add_argument(
        "--method", required=True, choices=["avg", "pmeans", "functionals", "dct", "dmd"]
    )
    p_sum.add_argument("--d", type=_int_list, help="stacking orders for dmd, e.g. 1,2")
    p_sum.add_argument("--powers", type=_int_list, help="powers for pmeans, e.g. 1,2,3")
    p_sum.add_argument("--k", type=int, help="coefficients kept per dimension for dct")
    p_sum.add_argument("--kind", choices=["eep", "bep"], help="expected kind; default: first record's")
    p_sum.add_argument("--jobs", type=int, default=1, help="parallel workers (never changes results)")
    p_sum.set_defaults(func=cmd_summarize)

    p_eval = sub.add_parser("eval", help="run an experiment grid with cross-validation")
    p_eval.add_argument("--grid", required=True, help="experiment config (JSON)")
    p_eval.add_argument("--eep", required=True, help="EEP dataset (JSON lines)")
    p_eval.add_argument("--bep", required=True, help="BEP dataset (JSON lines)")
    p_eval.add_argument("--out", required=True, help="report output (JSON)")
    p_eval.add_argument("--seed", type=_u64, default=0, help="default seed when the grid omits one")
    p_eval.add_argument("--jobs", type=int, default=1, help="parallel workers (never changes results)")
    p_eval.set_defaults(func=cmd_eval)

    p_rep = sub.add_parser("report", help="render a report as a table and confusion CSV")
    p_rep.add_argument("--report", required=True, help="report JSON from `epdyn eval`")
    p_rep.add_argument("--table", help="write the table here instead of stdout")
    p_rep.add_argument("--csv", help="also write a confusion-matrix CSV here")
    p_rep.set_defaults(func=cmd_report)
    return parser


def cmd_synth(args) -> int:
    cfg = synth.config_from_json(args.config) if args.config else synth.default_benchmark()
    if args.seed is not None:
        cfg.seed = args.seed
    eep, bep = synth.generate(cfg)
    save_dataset(eep, args.out_eep)
    save_dataset(bep, args.out_bep)
    print(f"wrote {len(eep)} utterances to {args.out_eep} and {args.out_bep}")
    return 0


def _peek_kind(path) -> EpKind:
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                try:
                    return EpKind(json.loads(line).get("kind"))
                except (json.JSONDecodeError, ValueError) as exc:
                    raise ParseError(f"{path}:1: cannot infer dataset kind: {exc}") from exc
    raise ParseError(f"{path}: empty dataset")


def _summarize_one(task):
    seq, method, params = task
    try:
        if method == "avg":
            return "ok", summarizers.average(seq)
        if method == "pmeans":
            return "ok", summarizers.p_means(seq, params["powers"])
        if method == "functionals":
            return "ok", summarizers.functionals(seq)
        if method == "dct":
            return "ok", summarizers.dct_summary(seq, params["k"])
        return "ok", dmd.representation(seq, params["d"])
    except TooShortError as exc:
        return "skip", (seq.id, str(exc))


def cmd_summarize(args) -> int:
    params = {}
    if args.method == "dmd":
        if not args.d:
            raise ValidationError("summarize: --method dmd requires --d")
        params["d"] = tuple(sorted(set(args.d)))
    elif args.method == "pmeans":
        if not args.powers:
            raise ValidationError("summarize: --method pmeans requires --powers")
        params["powers"] = tuple(sorted(set(args.powers)))
    elif args.method == "dct":
        if not args.k:
            raise ValidationError("summarize: --method dct requires --k")
        params["k"] = args.k
    kind = EpKind(args.kind) if args.kind else _peek_kind(args.input)
    dataset = load_dataset(args.input, kind)
    tasks = [(seq, args.method, params) for seq in dataset.sequences]
    if args.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            outcomes = list(pool.map(_summarize_one, tasks, chunksize=32))
    else:
        outcomes = [_summarize_one(task) for task in tasks]
    reps = [payload for status, payload in outcomes if status == "ok"]
    for status, payload in outcomes:
        if status == "skip":
            print(f"epdyn: skipping {payload[0]}: {payload[1]}", file=sys.stderr)
    save_representations(reps, args.output)
    print(f"wrote {len(reps)} representations to {args.output}")
    return 0


def cmd_eval(args) -> int:
    config = load_experiment_config(args.grid, default_seed=args.seed)
    eep = load_dataset(args.eep, EpKind.EEP)
    bep = load_dataset(args.bep, EpKind.BEP)
    results = run_experiment(config, eep, bep, jobs=args.jobs)
    report = report_to_dict(config, results)
    atomic_write_text(args.out, json.dumps(report, indent=2) + "\n")
    print(f"wrote {len(report['cells'])} cell reports to {args.out}")
    return 0


def cmd_report(args) -> int:
    with open(args.report, "r", encoding="utf-8") as fh:
        report = json.load(fh)
    table = render_table(report)
    if args.table:
        atomic_write_text(args.table, table)
    else:
        print(table, end="")
    if args.csv:
        atomic_write_text(args.csv, confusion_csv(report))
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"epdyn: data error: {exc}", file=sys.stderr)
        return 3
    except (NumericError, np.linalg.LinAlgError) as exc:
        print(f"epdyn: numeric error: {exc}", file=sys.stderr)
        return 4
    except OSError as exc:
        print(f"epdyn: i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
