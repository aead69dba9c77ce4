"""Many-to-many matchings: individual rationality, CY-stability, and a
dynamic grow-or-discard matching algorithm.

A matching is a frozenset of contract ids.  A nonempty set X of unmatched
contracts blocks a matching when every involved firm and worker would keep
all of its X-contracts out of holdings-plus-X.  CY-stability is individual
rationality plus absence of blocks.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import MARKET_CAP, iter_submasks
from .errors import LogicError, NonTermination, PreconditionFailed
from .axioms import check_sub
from .individual import gda


def is_matching_ir(market, nu):
    """(True, None) or (False, first agent whose holdings it would drop)."""
    for agent in market.agents:
        held = market.project(nu, agent)
        if market.table(agent).choose(held) != held:
            return False, agent
    return True, None


@dataclass(frozen=True)
class BlockWitness:
    contracts: frozenset
    evaluations: tuple  # ((agent, menu, chosen), ...)

    def to_dict(self):
        return {
            "contracts": sorted(self.contracts),
            "evaluations": [
                {"agent": a, "menu": sorted(m), "chosen": sorted(c)}
                for a, m, c in self.evaluations
            ],
        }


def verify_block(market, nu, contracts):
    """Replay the blocking conditions for a candidate set."""
    x = frozenset(contracts)
    if not x or x & nu:
        return False
    agents = set()
    for cid in x:
        c = market.by_id[cid]
        agents.add(c.firm)
        agents.add(c.worker)
    for agent in sorted(agents):
        offered = market.project(x, agent)
        held = market.project(nu, agent)
        if not offered <= market.table(agent).choose(held | offered):
            return False
    return True


def _block_witness(market, nu, x):
    agents = sorted({market.by_id[c].firm for c in x} | {market.by_id[c].worker for c in x})
    evals = []
    for agent in agents:
        menu = market.project(nu, agent) | market.project(x, agent)
        evals.append((agent, frozenset(menu), market.table(agent).choose(menu)))
    return BlockWitness(frozenset(x), tuple(evals))


def find_block_reference(market, nu, cap=MARKET_CAP):
    """Scan every nonempty subset of the unmatched contracts in ascending
    mask order over the whole market; first block found is returned."""
    market.check_cap(cap)
    ids = tuple(c.id for c in market.contracts)
    free = [x for x in ids if x not in nu]
    free_mask = (1 << len(free)) - 1
    for m in iter_submasks(free_mask):
        if not m:
            continue
        x = frozenset(free[i] for i in range(len(free)) if m >> i & 1)
        if verify_block(market, nu, x):
            return _block_witness(market, nu, x)
    return None


def find_block_single_firm(market, nu):
    """Scan single-firm proposals only: firms ascending, then offer sets in
    ascending mask order within the firm's free contracts.  Complete when
    every worker table is substitutable."""
    for firm in market.firms:
        table = market.table(firm)
        free = [x for x in table.universe if x not in nu]
        for m in iter_submasks((1 << len(free)) - 1):
            if not m:
                continue
            x = frozenset(free[i] for i in range(len(free)) if m >> i & 1)
            if verify_block(market, nu, x):
                return _block_witness(market, nu, x)
    return None


def is_cy_stable(market, nu, method="reference", cap=MARKET_CAP):
    """(True, None) if IR and unblocked, else (False, witness).

    The witness is the failing agent's id for an IR failure, or a
    BlockWitness.  method picks the block scan: "reference" tries every
    subset of unmatched contracts, "single-firm" only one firm's offers at
    a time (equivalent when worker tables are substitutable).
    """
    ir, agent = is_matching_ir(market, nu)
    if not ir:
        return False, agent
    if method == "reference":
        block = find_block_reference(market, nu, cap)
    elif method == "single-firm":
        block = find_block_single_firm(market, nu)
    else:
        raise ValueError("unknown method %r" % method)
    return (block is None), block


def enumerate_cy_stable(market, cap=MARKET_CAP):
    """All CY-stable matchings in ascending mask order over the contracts."""
    market.check_cap(cap)
    ids = tuple(c.id for c in market.contracts)
    out = []
    for m in range(1 << len(ids)):
        nu = frozenset(ids[i] for i in range(len(ids)) if m >> i & 1)
        ok, _ = is_cy_stable(market, nu, cap=cap)
        if ok:
            out.append(nu)
    return out


@dataclass(frozen=True)
class GdmaRound:
    index: int
    firm: str
    proposal: frozenset
    firm_dropped: frozenset
    worker_moves: tuple  # ((worker, menu, chosen), ...)
    matching_after: frozenset

    def line(self):
        def ids(s):
            return "{%s}" % ",".join(sorted(s))

        return "round=%d firm=%s proposal=%s dropped=%s matching=%s" % (
            self.index,
            self.firm,
            ids(self.proposal),
            ids(self.firm_dropped),
            ids(self.matching_after),
        )


@dataclass(frozen=True)
class GdmaTrace:
    initial_proposals: tuple  # ((firm, proposal), ...)
    initial_matching: frozenset
    rounds: tuple

    def lines(self):
        def ids(s):
            return "{%s}" % ",".join(sorted(s))

        out = ["init proposals=%s matching=%s" % (
            " ".join("%s:%s" % (f, ids(p)) for f, p in self.initial_proposals),
            ids(self.initial_matching),
        )]
        out.extend(r.line() for r in self.rounds)
        return out


def _apply_round(market, nu, firm, offer):
    """Execute an accepted proposal; returns (new matching, round pieces)."""
    table = market.table(firm)
    held_f = market.project(nu, firm)
    new_f = table.choose(held_f | offer)
    dropped = set(held_f - new_f)
    moves = []
    kept = set(nu) | set(offer)
    for worker in sorted({market.by_id[c].worker for c in offer}):
        wt = market.table(worker)
        held_w = market.project(nu, worker)
        offer_w = market.project(offer, worker)
        menu = held_w | offer_w
        chosen = wt.choose(menu)
        moves.append((worker, frozenset(menu), chosen))
        dropped.update(held_w - chosen)
    kept -= dropped
    return frozenset(kept), frozenset(set(held_f) - set(new_f)), tuple(moves)


def gdma(market, budget=None, require_sub=True):
    """Dynamic grow-or-discard matching.

    Firms first propose their grow-or-discard outcomes and workers choose
    from the pooled offers.  Then rounds run: the least (firm, offer)
    candidate whose firm keeps the offer and whose workers all keep their
    share executes; the firm and each offered worker move to their choice
    out of holdings plus offer, dropped contracts leave the matching.  The
    algorithm stops when no candidate is accepted, at which point no single
    firm can block, hence (worker tables being substitutable) nothing can.

    Returns (matching, GdmaTrace).  Raises PreconditionFailed unless every
    agent's table passes the substitutability check, and NonTermination if
    a tentative matching ever repeats.
    """
    if require_sub:
        for agent in market.agents:
            verdict = check_sub(market.table(agent))
            if not verdict.holds:
                raise PreconditionFailed(
                    "gdma requires substitutable tables; agent %r fails" % agent,
                    verdict,
                )
    if budget is None:
        budget = 1 << min(len(market.contracts) + 1, MARKET_CAP)

    proposals = []
    offers_to = {w: set() for w in market.workers}
    for firm in market.firms:
        s, _ = gda(market.table(firm), require_sub=False)
        proposals.append((firm, s))
        for cid in s:
            offers_to[market.by_id[cid].worker].add(cid)
    nu = set()
    for worker in market.workers:
        nu |= market.table(worker).choose(offers_to[worker])
    nu = frozenset(nu)

    trace_rounds = []
    history = [nu]
    seen = {nu: 0}
    while True:
        candidate = _next_candidate(market, nu)
        if candidate is None:
            _assert_ir(market, nu)
            return nu, GdmaTrace(tuple(proposals), history[0], tuple(trace_rounds))
        firm, offer = candidate
        nxt, dropped, moves = _apply_round(market, nu, firm, offer)
        trace_rounds.append(
            GdmaRound(len(trace_rounds) + 1, firm, offer, dropped, moves, nxt)
        )
        _assert_ir(market, nxt)
        if nxt in seen:
            cycle = history[seen[nxt]:]
            raise NonTermination(
                "gdma revisited a tentative matching", cycle,
                GdmaTrace(tuple(proposals), history[0], tuple(trace_rounds)),
            )
        seen[nxt] = len(history)
        history.append(nxt)
        nu = nxt
        if len(trace_rounds) > budget:
            from .errors import BudgetExceeded

            raise BudgetExceeded("gdma exceeded %d rounds" % budget, len(trace_rounds))


def _next_candidate(market, nu):
    """Least accepted (firm, offer) candidate, or None at stability."""
    for firm in market.firms:
        table = market.table(firm)
        held = market.project(nu, firm)
        free = [x for x in table.universe if x not in nu]
        for m in iter_submasks((1 << len(free)) - 1):
            if not m:
                continue
            offer = frozenset(free[i] for i in range(len(free)) if m >> i & 1)
            if not offer <= table.choose(held | offer):
                continue
            if all(
                market.project(offer, w)
                <= market.table(w).choose(market.project(nu, w) | market.project(offer, w))
                for w in {market.by_id[c].worker for c in offer}
            ):
                return firm, offer
    return None


def _assert_ir(market, nu):
    ok, agent = is_matching_ir(market, nu)
    if not ok:
        raise LogicError("tentative matching not rational for agent %r" % agent)


def replay_gdma_trace(market, trace):
    """Re-derive the final matching from the recorded rounds; used to audit
    a trace against the market it came from."""
    nu = trace.initial_matching
    for r in trace.rounds:
        nxt, dropped, moves = _apply_round(market, nu, r.firm, r.proposal)
        if nxt != r.matching_after or dropped != r.firm_dropped or moves != r.worker_moves:
            raise LogicError("recorded round %d does not replay" % r.index)
        nu = nxt
    return nu
