"""Command-line front end.

Exit codes: 0 success or passing verdict, 1 failing verdict, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from typing import Any, Sequence

from .chaincx import betti
from .partitions import (
    PartitionSyntaxError,
    build_ek,
    classify_map,
    parse_map,
    parse_partition,
)
from .ptower import collapse_check, layer_table, reduced_layer_table, t_homology

SCHEMA = "parcalc.cli/1"
MAX_K = 10
MAX_EK = 3
MAX_DIRECT_N = 6
DIM_RANGE = (2, 16)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class Output:
    command: str
    inputs: dict
    result: dict
    columns: list[str]
    rows: list[list[Any]]
    verdict: bool | None = None
    notes: list[str] = field(default_factory=list)


def emit(out: Output, fmt: str) -> str:
    if fmt == "json":
        obj = {"schema": SCHEMA, "command": out.command, "input": out.inputs, "result": out.result}
        if out.verdict is not None:
            obj["verdict"] = "pass" if out.verdict else "fail"
        return json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if out.verdict is None:
            w.writerow(out.columns)
            w.writerows(out.rows)
        else:
            flag = "pass" if out.verdict else "fail"
            w.writerow(out.columns + ["verdict"])
            w.writerows(r + [flag] for r in out.rows)
        return buf.getvalue()
    cells = [out.columns] + [[str(c) for c in r] for r in out.rows]
    widths = [max(len(str(r[i])) for r in cells) for i in range(len(out.columns))]
    lines = ["  ".join(str(c).rjust(w) for c, w in zip(r, widths)) for r in cells]
    lines.extend(out.notes)
    if out.verdict is not None:
        lines.append("verdict: " + ("pass" if out.verdict else "fail"))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# argument checks


def _need(args, name):
    v = getattr(args, name)
    if v is None:
        raise UsageError(f"--{name.replace('_', '-')} is required for {args.command}")
    return v


def _k(args, hi=MAX_K, lo=1):
    k = _need(args, "k")
    if not lo <= k <= hi:
        raise UsageError(f"--k must be in [{lo}, {hi}], got {k}")
    return k


def _dim(args):
    d = _need(args, "dim")
    if not DIM_RANGE[0] <= d <= DIM_RANGE[1]:
        raise UsageError(f"--dim must be in [{DIM_RANGE[0]}, {DIM_RANGE[1]}], got {d}")
    return d


def _partition(args):
    try:
        p = parse_partition(_need(args, "blocks"))
    except PartitionSyntaxError as e:
        raise UsageError(str(e)) from None
    if not 1 <= len(p) <= MAX_K:
        raise UsageError(f"partition support must have 1..{MAX_K} elements")
    return p


def _load_spec(args):
    path = _need(args, "spec")
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as e:
        raise UsageError(f"cannot read spec {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise UsageError(f"spec {path} is not valid JSON: {e.msg} at line {e.lineno}") from None


def _homology_rows(h) -> list[list[int]]:
    return [[g, r] for g, r in enumerate(h) if r]


# ---------------------------------------------------------------------------
# commands


def cmd_tn(args) -> Output:
    n = _need(args, "n")
    if not 1 <= n <= MAX_DIRECT_N:
        raise UsageError(f"--n must be in [1, {MAX_DIRECT_N}] for the direct computation, got {n}")
    h = t_homology(parse_partition(",".join(str(i) for i in range(1, n + 1))), method="pair")
    rows = _homology_rows(h)
    return Output("tn", {"n": n}, {"homology": [{"degree": g, "rank": r} for g, r in rows]},
                  ["degree", "rank"], rows)


def cmd_tlambda(args) -> Output:
    p = _partition(args)
    h = t_homology(p)
    rows = _homology_rows(h)
    result = {"excess": p.excess(), "homology": [{"degree": g, "rank": r} for g, r in rows]}
    return Output("tlambda", {"blocks": p.to_text()}, result, ["degree", "rank"], rows)


def cmd_layers(args) -> Output:
    d = _dim(args)
    if args.reduced:
        k = _k(args, lo=2)
        table = reduced_layer_table(k, d)
    else:
        k = _k(args)
        table = layer_table(k, d)
    rows = [[k, d, r.i, r.degree, r.rank] for r in table.rows]
    if args.excess is not None:
        rows = [r for r in rows if r[2] == args.excess]
    payload = table.to_json()
    payload["rows"] = [dict(zip(("k", "d", "i", "degree", "rank"), r)) for r in rows]
    inputs = {"k": k, "dim": d, "reduced": bool(args.reduced), "excess": args.excess}
    return Output("layers", inputs, payload, ["k", "d", "i", "degree", "rank"], rows)


def cmd_collapse(args) -> Output:
    k, d = _k(args), _dim(args)
    v = collapse_check(k, d)
    rows = [[g, a, b] for g, (a, b) in enumerate(zip(v.layers, v.oracle)) if a or b]
    notes = [f"mismatch in degree {g}: layers {a}, oracle {b}" for g, a, b in v.diff]
    return Output("collapse", {"k": k, "dim": d}, v.to_json(), ["degree", "layers", "oracle"], rows, v.passed, notes)


def cmd_ek(args) -> Output:
    k = args.excess if args.excess is not None else args.k
    if k is None:
        raise UsageError("--excess (or --k) is required for ek")
    if not 1 <= k <= MAX_EK:
        raise UsageError(f"excess must be in [1, {MAX_EK}] for ek, got {k}")
    cat = build_ek(k)
    objects = [p.to_text() for p in cat.objects]
    rows = [[i, len(p), p.to_text()] for i, p in enumerate(cat.objects)]
    result = {"excess": k, "objects": objects, "morphisms": len(cat.morphisms),
              "compositions_checked": cat.composition_checked}
    notes = [f"morphisms: {len(cat.morphisms)}", f"compositions checked: {cat.composition_checked}"]
    return Output("ek", {"excess": k}, result, ["index", "support", "blocks"], rows, notes=notes)


def cmd_goodmap(args) -> Output:
    p = _partition(args)
    try:
        f = parse_map(_need(args, "map"))
    except PartitionSyntaxError as e:
        raise UsageError(str(e)) from None
    if set(f) != set(p.support):
        raise UsageError("--map must assign every support element exactly once")
    label = classify_map(p, f)
    inputs = {"blocks": p.to_text(), "map": ",".join(f"{k}:{v}" for k, v in f.items())}
    return Output("goodmap", inputs, {"classification": label}, ["classification"], [[label]])


def cmd_holim(args) -> Output:
    from .diagrams import DiagramError, diagram_from_spec, holim, holim_negative_betti
    from .diagrams.category import CategoryError

    spec = _load_spec(args)
    try:
        f = diagram_from_spec(spec)
    except (DiagramError, CategoryError, ValueError, KeyError, TypeError) as e:
        raise UsageError(f"invalid diagram spec: {e}") from None
    b = betti(holim(f))
    neg = holim_negative_betti(f)
    rows = _homology_rows(b)
    result = {"betti": list(b), "negative_degrees": {str(k): v for k, v in sorted(neg.items())}}
    notes = [f"truncated: degree {k} rank {v}" for k, v in sorted(neg.items())]
    return Output("holim", {"spec": args.spec}, result, ["degree", "rank"], rows, notes=notes)


def cmd_split_check(args) -> Output:
    from .diagrams import DiagramError, holim_splitting_check, split_from_spec
    from .diagrams.category import CategoryError

    spec = _load_spec(args)
    try:
        f, split = split_from_spec(spec)
    except (DiagramError, CategoryError, ValueError, KeyError, TypeError) as e:
        raise UsageError(f"invalid splitting spec: {e}") from None
    v = holim_splitting_check(f, split)
    top = max(len(v.holim_betti), len(v.summand_betti))
    rows = [[g, v.holim_betti[g], v.summand_betti[g]] for g in range(top)]
    return Output("split-check", {"spec": args.spec}, v.to_json(), ["degree", "holim", "summands"], rows,
                  v.passed, list(v.problems))


COMMANDS = {
    "tn": (cmd_tn, "homology of the partition complex T_n (direct)"),
    "tlambda": (cmd_tlambda, "homology of T for a partition given by --blocks"),
    "layers": (cmd_layers, "layer-rank table for k points in dimension --dim"),
    "collapse": (cmd_collapse, "layer table against the Poincaré polynomial"),
    "ek": (cmd_ek, "objects and morphisms of the category of excess-k partitions"),
    "goodmap": (cmd_goodmap, "classify a map of a partitioned set as good or bad"),
    "holim": (cmd_holim, "homotopy limit of a diagram spec"),
    "split-check": (cmd_split_check, "verify a homogeneous splitting and compare holims"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="parcalc", description="Partition complexes, layer tables and diagram checks.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--n", type=int)
        p.add_argument("--k", type=int)
        p.add_argument("--dim", type=int)
        p.add_argument("--excess", type=int)
        p.add_argument("--blocks")
        p.add_argument("--map")
        p.add_argument("--spec")
        p.add_argument("--reduced", action="store_true", help="irreducible partitions only (layers)")
        p.add_argument("--format", choices=("table", "csv", "json"), default="table")
        p.add_argument("--out")
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required: " + ", ".join(COMMANDS))
        out = COMMANDS[args.command][0](args)
        text = emit(out, args.format)
        if args.out:
            try:
                with open(args.out, "w", encoding="utf-8") as fh:
                    fh.write(text)
            except OSError as e:
                raise UsageError(f"cannot write {args.out}: {e.strerror}") from None
        else:
            sys.stdout.write(text)
    except UsageError as e:
        sys.stderr.write(f"parcalc: error: {' '.join(str(e).split())}\n")
        return 2
    return 1 if out.verdict is False else 0


def main() -> None:
    sys.exit(run())


__all__ = ["run", "emit", "main", "build_parser", "Output"]
