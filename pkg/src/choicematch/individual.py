"""Single-agent analysis: revealed comparisons, individual rationality,
strong maximality, and the grow-or-discard fixed point search."""

from __future__ import annotations

from dataclasses import dataclass

from .core import AGENT_CAP, iter_submasks
from .errors import NonTermination, PreconditionFailed
from .axioms import check_sub

# classify_pair outcomes
PREFERS_FIRST = "first"
PREFERS_SECOND = "second"
INDIFFERENT = "indifferent"
INCOMPARABLE = "incomparable"


def classify_pair(table, a, b):
    """Revealed comparison of two sets through their union.

    first / second when the union's choice equals one side only,
    indifferent when it equals both (a == b), incomparable otherwise.
    """
    ma = table.mask_of(a)
    mb = table.mask_of(b)
    c = table.choose_mask(ma | mb)
    if c == ma and c == mb:
        return INDIFFERENT
    if c == ma:
        return PREFERS_FIRST
    if c == mb:
        return PREFERS_SECOND
    return INCOMPARABLE


def is_ir(table, s):
    """Individually rational: the set chooses itself."""
    m = table.mask_of(s)
    return table.choose_mask(m) == m


def is_strongly_maximal_ir(table, s):
    """An IR set no disjoint challenger can be added to acceptably.

    Returns (True, None) or (False, reason) where reason is
    ("not_ir", chosen) or ("challenger", least accepted challenger).
    """
    m = table.mask_of(s)
    c = table.choose_mask(m)
    if c != m:
        return False, ("not_ir", table.ids_of(c))
    full = (1 << table.n) - 1
    for ch in iter_submasks(full & ~m):
        if not ch:
            continue
        if not ch & ~table.choose_mask(m | ch):
            return False, ("challenger", table.ids_of(ch))
    return True, None


def enumerate_strongly_maximal_ir(table, cap=AGENT_CAP):
    """All strongly maximal IR sets in ascending mask order."""
    if table.n > cap:
        from .errors import UniverseTooLarge

        raise UniverseTooLarge(table.n, cap, "agent %r universe" % table.agent)
    out = []
    for m in range(1 << table.n):
        s = table.ids_of(m)
        ok, _ = is_strongly_maximal_ir(table, s)
        if ok:
            out.append(s)
    return out


@dataclass(frozen=True)
class GdaStep:
    index: int
    current: frozenset
    challenger: frozenset
    kind: str  # "grow" | "discard" | "rejected"
    result: frozenset

    def line(self):
        def ids(s):
            return "{%s}" % ",".join(sorted(s))

        return "step=%d kind=%s current=%s challenger=%s result=%s" % (
            self.index,
            self.kind,
            ids(self.current),
            ids(self.challenger),
            ids(self.result),
        )


def gda(table, step_budget=None, require_sub=True):
    """Grow-or-discard search for a strongly maximal IR set.

    Starts from the choice out of the whole universe and repeatedly scans
    disjoint challengers in ascending mask order.  A challenger whose union
    is chosen outright grows the set; one kept in full while part of the
    current set is dropped discards down to the chosen set.  Either move
    restarts the scan.  Terminates when a full scan makes no move.

    Returns (result_set, trace).  Raises NonTermination with the cycle of
    revisited states when a state repeats, and PreconditionFailed when the
    table is not substitutable (pass require_sub=False to search anyway).
    """
    if require_sub:
        verdict = check_sub(table)
        if not verdict.holds:
            raise PreconditionFailed("gda requires a substitutable table", verdict)
    full = (1 << table.n) - 1
    if step_budget is None:
        step_budget = 1 << (table.n + 1)

    current = table.choose_mask(full)
    trace = []
    history = [current]
    seen = {current: 0}
    moves = 0
    while True:
        moved = False
        for ch in iter_submasks(full & ~current):
            if not ch:
                continue
            kind, nxt = _step(table, current, ch)
            trace.append(
                GdaStep(
                    len(trace) + 1,
                    table.ids_of(current),
                    table.ids_of(ch),
                    kind,
                    table.ids_of(nxt),
                )
            )
            if kind == "rejected":
                continue
            moves += 1
            if nxt in seen:
                cycle = history[seen[nxt]:]
                raise NonTermination(
                    "gda revisited state {%s}" % ",".join(table.sorted_ids(nxt)),
                    [table.ids_of(m) for m in cycle],
                    tuple(trace),
                )
            if moves > step_budget:
                from .errors import BudgetExceeded

                raise BudgetExceeded("gda exceeded %d moves" % step_budget, moves)
            seen[nxt] = len(history)
            history.append(nxt)
            current = nxt
            moved = True
            break
        if not moved:
            return table.ids_of(current), tuple(trace)


def _step(table, current, challenger):
    union = current | challenger
    c = table.choose_mask(union)
    if c == union:
        return "grow", union
    if not challenger & ~c and current & ~c:
        return "discard", c
    return "rejected", current
