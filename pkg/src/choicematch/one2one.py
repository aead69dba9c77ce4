"""One-to-one matching through induced binary orders.

Choice tables that are binary-acyclic induce a weak preference order over an
agent's contracts plus the outside option.  Orders feed a classic deferred
acceptance run after deterministic tie-breaking, and R-stability checks a
given one-to-one matching directly against the tables.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import OUTSIDE
from .errors import BaViolation, LogicError, PreconditionFailed
from .axioms import check_ba


@dataclass(frozen=True)
class AgentOrder:
    """A weak order as best-to-worst indifference levels.

    Levels partition the agent's contracts plus the outside option marker;
    ids within a level are sorted.  The order is strict when every level is
    a singleton.
    """

    agent: str
    levels: tuple  # tuple of tuples of ids, OUTSIDE included once

    def rank(self, x):
        for i, level in enumerate(self.levels):
            if x in level:
                return i
        raise KeyError(x)

    def weakly_prefers(self, x, y):
        return self.rank(x) <= self.rank(y)

    def strictly_prefers(self, x, y):
        return self.rank(x) < self.rank(y)

    @property
    def is_strict(self):
        return all(len(level) == 1 for level in self.levels)

    def acceptable(self):
        """Contracts strictly above the outside option, best first."""
        out = []
        outside_rank = self.rank(OUTSIDE)
        for level in self.levels[:outside_rank]:
            out.extend(level)
        return tuple(out)

    def to_lists(self):
        return [list(level) for level in self.levels]


def _verify_weak_order(order, items):
    """Exhaustive completeness, reflexivity, and transitivity check."""
    for x in items:
        if not order.weakly_prefers(x, x):
            raise LogicError("order not reflexive at %r" % x)
    for x in items:
        for y in items:
            if not order.weakly_prefers(x, y) and not order.weakly_prefers(y, x):
                raise LogicError("order not complete at (%r, %r)" % (x, y))
            for z in items:
                if (
                    order.weakly_prefers(x, y)
                    and order.weakly_prefers(y, z)
                    and not order.weakly_prefers(x, z)
                ):
                    raise LogicError("order not transitive at (%r, %r, %r)" % (x, y, z))


def build_order(table):
    """Induce the agent's weak order from empty, singleton, and pair menus.

    Acceptable contracts (chosen from their own singleton) sit above the
    outside option; unacceptable ones sit together below it.  Among
    acceptable contracts, a decisive pair choice gives strict preference,
    its transitive closure is taken, and all remaining pairs are
    indifferent.  Requires binary acyclicity; raises BaViolation otherwise.
    """
    verdict = check_ba(table)
    if verdict.violated:
        raise BaViolation("table is not binary-acyclic", verdict)

    n = table.n
    acceptable = [i for i in range(n) if table.choose_mask(1 << i) == 1 << i]
    unacceptable = [i for i in range(n) if i not in acceptable]

    # strict base relation from decisive pair choices, then Floyd-Warshall
    strict = [[False] * n for _ in range(n)]
    for i in acceptable:
        for j in acceptable:
            if i != j and table.choose_mask((1 << i) | (1 << j)) == 1 << i:
                strict[i][j] = True
    for k in acceptable:
        for i in acceptable:
            for j in acceptable:
                if strict[i][k] and strict[k][j]:
                    strict[i][j] = True
    for i in acceptable:
        if strict[i][i]:
            raise LogicError("strict preference cycle despite binary acyclicity")

    # indifference classes: mutual absence of strict preference; under
    # binary acyclicity the quotient is a chain, recovered by sorting on
    # the number of strictly worse contracts.
    remaining = list(acceptable)
    classes = []
    while remaining:
        seed = remaining[0]
        cls = [i for i in remaining if not strict[seed][i] and not strict[i][seed]]
        classes.append(cls)
        remaining = [i for i in remaining if i not in cls]
    classes.sort(key=lambda cls: -sum(strict[cls[0]][j] for j in acceptable))

    levels = [tuple(sorted(table.universe[i] for i in cls)) for cls in classes]
    levels.append((OUTSIDE,))
    if unacceptable:
        levels.append(tuple(sorted(table.universe[i] for i in unacceptable)))
    order = AgentOrder(table.agent, tuple(levels))
    _verify_weak_order(order, [x for level in order.levels for x in level])
    return order


def tie_break(order):
    """Deterministic strict refinement: split each level into singletons by
    byte-wise id comparison."""
    levels = []
    for level in order.levels:
        for x in sorted(level):
            levels.append((x,))
    return AgentOrder(order.agent, tuple(levels))


@dataclass(frozen=True)
class DaaRound:
    index: int
    proposals: tuple  # ((proposer, contract id), ...)
    rejections: tuple  # contract ids rejected this round
    held: tuple  # ((receiver, contract id), ...) after the round

    def line(self):
        return "round=%d proposals=%s rejections=%s held=%s" % (
            self.index,
            ",".join("%s:%s" % p for p in self.proposals) or "-",
            ",".join(self.rejections) or "-",
            ",".join("%s:%s" % h for h in self.held) or "-",
        )


def daa(market, proposers="firms"):
    """Deferred acceptance over tie-broken induced orders.

    Proposing agents offer their acceptable contracts best first; receivers
    hold the best acceptable offer and permanently reject the rest.  Every
    agent's table must induce an order, so BaViolation propagates from
    build_order.  Returns (matching, orders, trace) where orders maps each
    agent to its tie-broken strict order.
    """
    if proposers not in ("firms", "workers"):
        raise ValueError("proposers must be 'firms' or 'workers'")
    orders = {agent: tie_break(build_order(market.table(agent))) for agent in market.agents}
    side = market.firms if proposers == "firms" else market.workers
    other_of = (lambda c: c.worker) if proposers == "firms" else (lambda c: c.firm)

    prefs = {}
    for agent in side:
        ranked = orders[agent].acceptable()
        # keep only contracts acceptable to the receiver too; the receiver
        # would reject the rest immediately anyway
        prefs[agent] = [
            x
            for x in ranked
            if x in orders[other_of(market.by_id[x])].acceptable()
        ]
    next_idx = {agent: 0 for agent in side}
    held_by = {}  # receiver -> contract id
    holder = {}  # proposer -> contract id
    rounds = []

    while True:
        proposals = []
        for agent in side:
            if agent in holder:
                continue
            if next_idx[agent] < len(prefs[agent]):
                proposals.append((agent, prefs[agent][next_idx[agent]]))
        if not proposals:
            break
        rejections = []
        incoming = {}
        for agent, cid in proposals:
            incoming.setdefault(other_of(market.by_id[cid]), []).append(cid)
        for receiver in sorted(incoming):
            options = list(incoming[receiver])
            if receiver in held_by:
                options.append(held_by[receiver])
            best = min(options, key=orders[receiver].rank)
            for cid in options:
                if cid == best:
                    continue
                rejections.append(cid)
                loser = market.by_id[cid]
                prop = loser.firm if proposers == "firms" else loser.worker
                next_idx[prop] += 1
                holder.pop(prop, None)
            held_by[receiver] = best
            winner = market.by_id[best]
            holder[winner.firm if proposers == "firms" else winner.worker] = best
        rounds.append(
            DaaRound(
                len(rounds) + 1,
                tuple(proposals),
                tuple(sorted(rejections)),
                tuple(sorted(held_by.items())),
            )
        )

    matching = frozenset(held_by.values())
    return matching, orders, tuple(rounds)


def is_one_to_one(market, nu):
    """No agent appears in two contracts of the matching."""
    firms = set()
    workers = set()
    for cid in nu:
        c = market.by_id[cid]
        if c.firm in firms or c.worker in workers:
            return False
        firms.add(c.firm)
        workers.add(c.worker)
    return True


def is_r_stable(market, nu):
    """(True, None) or (False, witness) for a one-to-one matching.

    Fails IR with the offending agent id; fails stability with the least
    unmatched contract both sides would switch to outright, meaning each
    side's choice out of holdings plus the contract is exactly that
    contract.  Raises PreconditionFailed when nu is not one-to-one.
    """
    if not is_one_to_one(market, nu):
        raise PreconditionFailed("matching is not one-to-one")
    ok, agent = _matching_ir(market, nu)
    if not ok:
        return False, agent
    for c in market.contracts:
        if c.id in nu:
            continue
        take = frozenset([c.id])
        if (
            market.table(c.firm).choose(market.project(nu, c.firm) | take) == take
            and market.table(c.worker).choose(market.project(nu, c.worker) | take) == take
        ):
            return False, c.id
    return True, None


def _matching_ir(market, nu):
    for agent in market.agents:
        held = market.project(nu, agent)
        if market.table(agent).choose(held) != held:
            return False, agent
    return True, None
