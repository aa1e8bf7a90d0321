"""Command-line interface: htseq <command> ...

Exit status 0 on success, 2 when the input is not of hypergeometric type
(the recurrence and initial values are still printed), 1 on errors.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from dataclasses import dataclass, field

from .cyclo import cyclo_string
from .errors import HTSError, MalformedInputError
from .expr import evaluate, parse
from .holonomic import InitialSegment, NotFound, Recurrence, find_recurrence, parse_recurrence
from .hyper import mfold_hyper
from .indicator import IndicatorTerm, indicator_product
from .normal_form import HTSOutcome, hts, re_to_hts

COMMANDS = ("hts", "find-re", "re-to-hts", "mfold-solve", "chi-product", "eval")
FORMATS = ("text", "json", "latex")


@dataclass
class JobSpec:
    command: str
    payload: list = field(default_factory=list)
    max_order: int = 10
    shift_step: int = 1
    max_m: int | None = None
    fmt: str = "text"
    values: str | None = None
    re: str | None = None
    start: int = 0
    count: int = 10

    def validate(self):
        if self.command not in COMMANDS:
            raise MalformedInputError(f"unknown command {self.command!r}")
        if self.fmt not in FORMATS:
            raise MalformedInputError(f"unknown format {self.fmt!r}")
        for name in ("max_order", "shift_step", "count"):
            if getattr(self, name) < 1:
                raise MalformedInputError(f"--{name.replace('_', '-')} must be positive")
        if self.max_m is not None and self.max_m < 1:
            raise MalformedInputError("--max-m must be positive")
        if self.command in ("hts", "find-re", "eval") and len(self.payload) != 1:
            raise MalformedInputError(f"{self.command} takes exactly one expression")
        if self.command in ("re-to-hts", "mfold-solve") and self.re is None and len(self.payload) != 1:
            raise MalformedInputError(f"{self.command} needs a recurrence (--re or positional)")
        if self.command == "re-to-hts" and self.values is None:
            raise MalformedInputError("re-to-hts needs --values")
        if self.command == "chi-product" and not self.payload:
            raise MalformedInputError("chi-product needs at least one m:j argument")


class FileFormatError(MalformedInputError):
    stage = "input"


def read_bfile(path: str) -> InitialSegment:
    """OEIS b-file: 'index value' per line, '#' comments and blank lines ignored."""
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2 or not all(re.fullmatch(r"[+-]?\d+", p) for p in parts):
                raise FileFormatError(f"{path}:{lineno}: expected 'index value', got {line!r}")
            values[int(parts[0])] = int(parts[1])
    return InitialSegment(values)


def read_recurrence(arg: str) -> Recurrence:
    if os.path.exists(arg):
        with open(arg, encoding="utf-8") as fh:
            arg = fh.read()
    return parse_recurrence(arg)


def recurrence_latex(r: Recurrence) -> str:
    s = str(r).replace("*", " ")
    return re.sub(r"a\(n([+-]\d+)?\)", lambda mo: f"a_{{n{mo.group(1) or ''}}}", s)


# -- output ---------------------------------------------------------------------------------


def _outcome_text(o: HTSOutcome) -> str:
    if o.ok:
        v = o.verification
        return (f"a(n) = {o.term.text()}\n"
                f"verified: recurrence residual vanishes on n = {v.checked_recurrence[0]}..{v.checked_recurrence[1]}, "
                f"values agree on n = {v.checked_values[0]}..{v.checked_values[1]}")
    lines = [f"not of hypergeometric type: {o.reason}"]
    if o.recurrence is not None:
        lines.append(f"recurrence: {o.recurrence}")
        lines.append("initial values: " + ", ".join(f"a({k}) = {cyclo_string(v)}" for k, v in enumerate(o.initial)))
    return "\n".join(lines)


def _outcome_latex(o: HTSOutcome) -> str:
    if o.ok:
        return "a_n = " + o.term.latex()
    return recurrence_latex(o.recurrence)


def _emit_outcome(o: HTSOutcome, fmt: str, out) -> int:
    if o.kind == "failed":
        raise _Failed(o.reason)
    if fmt == "json":
        out.write(json.dumps(o.to_json()) + "\n")
    elif fmt == "latex":
        out.write(_outcome_latex(o) + "\n")
    else:
        out.write(_outcome_text(o) + "\n")
    return 0 if o.ok else 2


class _Failed(HTSError):
    stage = "recurrence"


# -- commands -----------------------------------------------------------------------------


def run(job: JobSpec, out=None) -> int:
    out = sys.stdout if out is None else out
    job.validate()
    cmd = job.command
    if cmd == "hts":
        return _emit_outcome(hts(job.payload[0], job.max_order, job.shift_step, job.max_m), job.fmt, out)
    if cmd == "find-re":
        try:
            r = find_recurrence(parse(job.payload[0]), job.max_order, job.shift_step)
        except NotFound as exc:
            raise _Failed(str(exc)) from None
        if job.fmt == "json":
            out.write(json.dumps(r.to_json()) + "\n")
        elif job.fmt == "latex":
            out.write(recurrence_latex(r) + "\n")
        else:
            out.write(str(r) + "\n")
        return 0
    if cmd in ("re-to-hts", "mfold-solve"):
        r = read_recurrence(job.re if job.re is not None else job.payload[0])
        if cmd == "mfold-solve":
            basis = mfold_hyper(r, job.max_m)
            if job.fmt == "json":
                out.write(json.dumps(basis.to_json()) + "\n")
            else:
                for entry in basis.to_json():
                    out.write(f"m = {entry['m']}: " + ", ".join(entry["ratios"]) + "\n")
            return 0
        return _emit_outcome(re_to_hts(r, read_bfile(job.values), job.max_m), job.fmt, out)
    if cmd == "chi-product":
        acc = IndicatorTerm(1, 0)
        for arg in job.payload:
            mo = re.fullmatch(r"(\d+):(\d+)", arg)
            if not mo:
                raise MalformedInputError(f"indicator must be written m:j, got {arg!r}")
            acc = indicator_product(acc, IndicatorTerm(int(mo.group(1)), int(mo.group(2))))
        if job.fmt == "json":
            out.write(json.dumps(acc.to_json()) + "\n")
        elif job.fmt == "latex":
            out.write(acc.latex() + "\n")
        else:
            out.write(str(acc) + "\n")
        return 0
    # eval
    idx = range(job.start, job.start + job.count)
    vals = evaluate(job.payload[0], idx)
    if job.fmt == "json":
        out.write(json.dumps({str(k): cyclo_string(v) for k, v in zip(idx, vals)}) + "\n")
    else:
        for k, v in zip(idx, vals):
            out.write(f"{k} {cyclo_string(v)}\n")
    return 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # argparse would exit with 2, which is reserved for "not of hypergeometric type"
        self.print_usage(sys.stderr)
        print(f"error [input]: {message}", file=sys.stderr)
        sys.exit(1)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="htseq", description="Hypergeometric-type normal forms of sequences.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("payload", nargs="*", help="expression, recurrence, or m:j indicators")
    p.add_argument("--max-order", type=int, default=10)
    p.add_argument("--shift-step", type=int, default=1)
    p.add_argument("--max-m", type=int, default=None)
    p.add_argument("--format", dest="fmt", choices=FORMATS, default="text")
    p.add_argument("--values", help="b-file with initial values")
    p.add_argument("--re", help="recurrence file (JSON or text) or inline text")
    p.add_argument("--start", type=int, default=0, help="first index for eval")
    p.add_argument("--count", type=int, default=10, help="number of values for eval")
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # usage errors and --help
        return exc.code
    job = JobSpec(**vars(args))
    try:
        return run(job)
    except (HTSError, OSError, ValueError) as exc:
        err = exc.to_json() if isinstance(exc, HTSError) else {
            "error": type(exc).__name__, "stage": "input", "message": str(exc)}
        if job.fmt == "json":
            print(json.dumps(err))
        else:
            print(f"error [{err['stage']}]: {err['message']}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
