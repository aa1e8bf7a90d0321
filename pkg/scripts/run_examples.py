"""Normal forms of a fixed set of expressions and recurrences, with timings.

    python scripts/run_examples.py [--json out.json] [--max-order 10]
"""

import argparse
import json
import time
from dataclasses import asdict, dataclass, field

from htseq.holonomic import InitialSegment, find_recurrence, parse_recurrence
from htseq.errors import HTSError
from htseq.expr import parse
from htseq.normal_form import HTSConfig, hts, re_to_hts

EXPRESSIONS = [
    "sin(n*Pi/4)^2",
    "n! + 1/n!",
    "sin(cos(n*Pi/3)*Pi)",
    "tan(n*Pi/3)",
    "sin(Pi*cos(n*Pi)/6)*sin(n*Pi/4)",
    "(1 + (-1)^n)/(2*n!)",
    "31/3 - chi(2,0)",
    "binomial(2*n,n)*chi(3,1) + 2^n",
    "cos(n*Pi/6)*n!",
]

RECURRENCES = [
    ("a(n)=a(n-1)+2*a(n-2)-a(n-3)-2*a(n-4)-a(n-5)+2*a(n-6)+a(n-7)-a(n-8)",
     [0, 1, 8, 31, 80, 171, 308, 509, 780, 1137, 1584, 2143, 2812]),
    ("(-4*n-4)*a(n) + (-n-3)*a(n+1) + (-2*n-10)*a(n+2) + (4*n+4)*a(n+3) + (n+3)*a(n+4) + (2*n+10)*a(n+5) = 0",
     [2, 1, 4, 2, 1, 4]),
    ("a(n+2) = a(n+1) + a(n)", [0, 1]),
]


@dataclass
class Row:
    input: str
    kind: str
    result: str
    recurrence: str = ""
    seconds: float = 0.0
    trace: list = field(default_factory=list)


def run(cfg: HTSConfig) -> list:
    rows = []
    for src in EXPRESSIONS:
        t0 = time.perf_counter()
        out = hts(src, **asdict(cfg))
        dt = time.perf_counter() - t0
        rec = str(out.recurrence) if out.recurrence else ""
        if not rec:
            try:
                rec = str(find_recurrence(parse(src), cfg.max_order))
            except HTSError:
                rec = ""
        rows.append(Row(src, out.kind, out.term.text() if out.term else out.reason, rec, dt, out.trace))
    for text, values in RECURRENCES:
        t0 = time.perf_counter()
        out = re_to_hts(parse_recurrence(text), InitialSegment.from_list(values), cfg.max_m)
        dt = time.perf_counter() - t0
        rows.append(Row(text, out.kind, out.term.text() if out.term else out.reason, str(out.recurrence), dt,
                        out.trace))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--max-order", type=int, default=10)
    ap.add_argument("--max-m", type=int, default=None)
    ap.add_argument("--json", help="write rows as JSON to this path")
    args = ap.parse_args()
    rows = run(HTSConfig(max_order=args.max_order, max_m=args.max_m))
    for r in rows:
        print(f"{r.input}\n    [{r.kind}, {r.seconds:.3f} s] {r.result}")
        if r.recurrence:
            print(f"    recurrence: {r.recurrence}")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump([asdict(r) for r in rows], fh, indent=2)


if __name__ == "__main__":
    main()
