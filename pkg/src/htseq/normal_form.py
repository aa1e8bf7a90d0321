"""Hypergeometric-type normal forms: ansatz, exact solve, verification, driver."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .cyclo import CycloNumber, common_order, euler_phi
from .errors import OutOfDomainError, RankDeficiencyError, UndefinedValueError
from .expr import eval_at, parse
from .holonomic import (InitialSegment, NotFound, Recurrence, check_initial_values,
                        extend_by_recurrence, find_recurrence, re_from_normal_form)
from .hyper import solution_terms
from .hyperterm import HTSTerm, HyperTerm
from .linalg import DependencyFinder, solve

RETRY_STEPS = (2, 3, 4, 6)


@dataclass(frozen=True)
class HTSConfig:
    """Options of :func:`hts`; ``hts(e, **asdict(cfg))``."""

    max_order: int = 10
    shift_step: int = 1
    max_m: int | None = None
    retry_steps: tuple = RETRY_STEPS


@dataclass
class Verification:
    ok: bool
    checked_recurrence: tuple  # (first, last) index where L_r(candidate) was evaluated
    checked_values: tuple  # (first, last) index compared with the input sequence
    first_mismatch: int | None = None
    detail: str = ""

    def to_json(self):
        return {"ok": self.ok, "recurrence_window": list(self.checked_recurrence),
                "value_window": list(self.checked_values), "first_mismatch": self.first_mismatch,
                "detail": self.detail}


@dataclass
class HTSOutcome:
    """Result of a normal-form computation.

    kind is "normal_form" (term set), "not_hyper_type" (recurrence and initial
    values set) or "failed" (reason set).
    """

    kind: str
    term: HTSTerm | None = None
    recurrence: Recurrence | None = None
    initial: list = field(default_factory=list)
    reason: str = ""
    verification: Verification | None = None
    trace: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.kind == "normal_form"

    def to_json(self):
        out = {"kind": self.kind}
        if self.term is not None:
            out["normal_form"] = self.term.to_json()
            out["text"] = self.term.text()
        if self.recurrence is not None:
            out["recurrence"] = self.recurrence.to_json()
            out["recurrence_text"] = str(self.recurrence)
        if self.initial:
            out["initial_values"] = [str(v) for v in self.initial]
        if self.reason:
            out["reason"] = self.reason
        if self.verification is not None:
            out["verification"] = self.verification.to_json()
        out["trace"] = list(self.trace)
        return out


# -- ansatz columns ------------------------------------------------------------------------


def _column_value(h: HyperTerm, n: int):
    """chi(n mod m = j) * h((n-j)/m), or None where the term is undefined."""
    if n % h.m != h.j:
        return Fraction(0)
    try:
        return h(n)
    except OutOfDomainError:
        return None


def _row(terms, n: int):
    row = [_column_value(h, n) for h in terms]
    return None if any(v is None for v in row) else row


def independent_terms(terms: list, window: int | None = None) -> list:
    """Drop columns that are linear combinations of earlier ones (as sequences)."""
    if not terms:
        return []
    if window is None:
        window = 2 * len(terms) + 2 * max(h.m for h in terms) + 20
    rows = []
    n = 0
    while len(rows) < window:
        r = _row(terms, n)
        if r is not None:
            rows.append(r)
        n += 1
    finder = DependencyFinder()
    kept = []
    for idx, h in enumerate(terms):
        if finder.add([row[idx] for row in rows]) is None:
            kept.append(h)
    return kept


def choose_E0(r: Recurrence, terms: list, extra: int | None = None):
    """Indices where the ansatz matrix reaches full column rank, plus d spare rows.

    Skips roots of the leading and trailing coefficients and indices where a
    column is undefined.
    """
    d = r.to_dense()
    p = len(terms)
    extra = d.order if extra is None else extra
    skip = set(d.singular_indices) | set(d.trailing_roots)
    cap = 4 * p + d.order + 50
    finder = DependencyFinder()
    chosen, rows = [], []
    rank = 0
    n = 0
    while n < cap:
        if n not in skip:
            row = _row(terms, n)
            if row is not None:
                if rank < p:
                    if finder.add(row) is None:
                        rank += 1
                chosen.append(n)
                rows.append(row)
                if rank == p:
                    if extra == 0:
                        return chosen, rows
                    extra -= 1
        n += 1
    if rank < p:
        raise RankDeficiencyError(f"ansatz matrix stayed at rank {rank} < {p} on indices 0..{cap - 1}")
    return chosen, rows


def _coordinates(v: CycloNumber, order: int) -> list:
    c = list(v.embed(order).coords) if not v.is_rational() else [v.coords[0]]
    c += [Fraction(0)] * (euler_phi(order) - len(c))
    return c


def solve_cyclotomic(rows: list, rhs: list):
    """Rational matrix, cyclotomic right-hand side; exact solution or None."""
    N = common_order(rhs)
    dim = euler_phi(N)
    coords = [_coordinates(CycloNumber.coerce(b), N) for b in rhs]
    ncols = len(rows[0]) if rows else 0
    parts = []
    for k in range(dim):
        x = solve(rows, [c[k] for c in coords], ncols)
        if x is None:
            return None
        parts.append(x)
    out = []
    for i in range(ncols):
        out.append(CycloNumber(N, [parts[k][i] for k in range(dim)]) if N > 1 else CycloNumber.rational(parts[0][i]))
    return out


# -- verification ----------------------------------------------------------------------------


def verify(candidate: HTSTerm, r: Recurrence, values, extra: int = 10) -> Verification:
    """Check L_r(candidate) = 0 on a window and candidate = values up to the last singular index."""
    d = r.to_dense()
    anchor = max((h.m * h.k0 + h.j for _, h in candidate.pairs()), default=0)
    rw = (0, candidate.order_bound + d.order + extra + anchor)
    last_sing = max(d.singular_indices, default=-1)
    vw = (0, max(last_sing, d.order - 1) + d.order + extra)
    for n in range(vw[0], vw[1] + 1):
        try:
            same = candidate(n) == values(n)
        except OutOfDomainError:
            same = False
        except UndefinedValueError:
            continue
        if not same:
            return Verification(False, rw, vw, n, f"normal form differs from the sequence at n = {n}")
    for n in range(rw[0], rw[1] + 1):
        try:
            res = d.residual(candidate, n)
        except OutOfDomainError:
            continue
        if not res.is_zero():
            return Verification(False, rw, vw, n, f"recurrence residual is nonzero at n = {n}")
    return Verification(True, rw, vw)


# -- recurrence to normal form ------------------------------------------------------------


def re_to_hts(r: Recurrence, init: InitialSegment, max_m: int | None = None, trace: list | None = None) -> HTSOutcome:
    """Normal form of the solution of r determined by init, if it is of hypergeometric type."""
    trace = [] if trace is None else trace
    d = r.to_dense()
    check_initial_values(init, d)
    values = init if init.provider is not None else extend_by_recurrence(init, d)

    def not_hyper(reason):
        initial = [values(k) for k in range(d.order)]
        return HTSOutcome("not_hyper_type", recurrence=d, initial=initial, reason=reason, trace=trace)

    terms = solution_terms(d, max_m)
    trace.append(f"ansatz: {len(terms)} candidate terms")
    if not terms:
        return not_hyper("the recurrence has no m-fold hypergeometric solutions")
    # first the terms that solve r on their own, then every section term
    own = [h for h in terms if is_solution_column(d, h)]
    stages = [own, terms] if own and len(own) < len(terms) else [terms]
    detail = "initial values are not matched by any combination of m-fold hypergeometric terms"
    for cols in stages:
        cols = independent_terms(cols)
        E0, rows = choose_E0(d, cols)
        trace.append(f"ansatz: p = {len(cols)}, E0 = {E0}")
        x = solve_cyclotomic(rows, [values(n) for n in E0])
        if x is None:
            trace.append("ansatz system inconsistent")
            continue
        cand = HTSTerm.from_terms(zip(x, cols))
        ver = verify(cand, d, values)
        if ver.ok:
            return HTSOutcome("normal_form", term=cand, recurrence=d, verification=ver, trace=trace)
        trace.append(f"verification failed: {ver.detail}")
        detail = ver.detail
    return not_hyper(detail)


def is_solution_column(r: Recurrence, h: HyperTerm, extra: int = 10) -> bool:
    """Whether chi(n mod m = j) * h((n-j)/m) satisfies r on a window."""

    def col(k):
        v = _column_value(h, k)
        if v is None:
            raise OutOfDomainError(f"term undefined at {k}")
        return v

    checked, n = 0, 0
    while checked < 2 * (h.m + r.order) + extra:
        try:
            if not r.residual(col, n).is_zero():
                return False
            checked += 1
        except OutOfDomainError:
            pass
        n += 1
    return True


# -- driver -------------------------------------------------------------------------------------


def hts(e, max_order: int = 10, shift_step: int = 1, max_m: int | None = None,
        retry_steps=RETRY_STEPS) -> HTSOutcome:
    """Normal form of an expression in n, via a recurrence and an exact ansatz."""
    if isinstance(e, str):
        e = parse(e)
    trace: list = []
    values = InitialSegment(provider=lambda n: eval_at(e, n))
    first = None
    steps = [shift_step] + [t for t in retry_steps if t != shift_step]
    for t in steps:
        try:
            r = find_recurrence(e, max_order, t)
        except NotFound as exc:
            trace.append(f"shift step {t}: {exc}")
            continue
        trace.append(f"shift step {t}: {r}")
        dense = r.to_dense()
        first = first or dense
        out = re_to_hts(dense, values, max_m, trace)
        if out.ok:
            return out
    if first is None:
        return HTSOutcome("failed", reason=f"no recurrence of order <= {max_order} found", trace=trace)
    initial = [values(k) for k in range(first.order)]
    return HTSOutcome("not_hyper_type", recurrence=first, initial=initial,
                      reason="no hypergeometric-type normal form", trace=trace)


def normal_form_recurrence(t: HTSTerm) -> Recurrence:
    return re_from_normal_form(t)
