"""Seeded generators for tables and markets with known axiom profiles.

All randomness flows from random.Random(seed) through integer draws only,
so results are reproducible across platforms.  Every generated object is
re-verified against the axiom checkers before it is returned; a profile
mismatch raises LogicError because it can only mean a generator bug.
"""

from __future__ import annotations

from dataclasses import dataclass
from random import Random

from .core import ChoiceTable, Contract, Market
from .errors import BudgetExceeded, LogicError
from .axioms import check_ba, check_ga_graph, check_pi, check_sub

PROFILES = ("PI", "SUB_GA", "SUB_ONLY", "BA", "TRIVIAL", "UNRESTRICTED")


@dataclass(frozen=True)
class GenSpec:
    seed: int
    profile: str = "PI"
    firms: int = 2
    workers: int = 2
    density: int = 100  # percent chance a (firm, worker) pair contracts
    firm_profile: str = None
    worker_profile: str = None

    def side_profile(self, side):
        override = self.firm_profile if side == "firm" else self.worker_profile
        return override or self.profile


def _subset_mask(rng, mask):
    """A uniformly random submask."""
    out = 0
    m = mask
    while m:
        bit = m & -m
        if rng.randrange(2):
            out |= bit
        m ^= bit
    return out


def gen_pi_table(agent, universe, rng):
    """Path-independent table: a random strict priority, a quota, and an
    acceptability cutoff; each menu chooses its best acceptable contracts
    up to quota."""
    universe = tuple(sorted(universe))
    n = len(universe)
    priority = list(range(n))
    rng.shuffle(priority)
    quota = rng.randrange(1, n + 1) if n else 1
    cutoff = rng.randrange(n + 1)
    acceptable = set(priority[:cutoff])

    entries = []
    for m in range(1 << n):
        chosen = 0
        taken = 0
        for i in priority:
            if taken == quota:
                break
            if m >> i & 1 and i in acceptable:
                chosen |= 1 << i
                taken += 1
        entries.append(chosen)
    table = ChoiceTable(agent, universe, entries)
    _require_verdict(check_pi(table), "PI", agent)
    return table


def _perturb(agent, universe, rng, keep, attempts=40):
    """Random entry rewrites filtered by a predicate on the whole table."""
    table = gen_pi_table(agent, universe, rng)
    n = len(universe)
    if n == 0:
        return table
    for _ in range(attempts):
        m = rng.randrange(1, 1 << n)
        c = _subset_mask(rng, m)
        candidate = table.with_entry(m, c)
        if keep(candidate):
            table = candidate
    return table


def gen_sub_table(agent, universe, rng):
    """Substitutable table, no other axiom enforced (profile SUB_ONLY)."""
    table = _perturb(agent, universe, rng, lambda t: check_sub(t).holds)
    _require_verdict(check_sub(table), "SUB_ONLY", agent)
    return table


def gen_sub_ga_table(agent, universe, rng):
    """Substitutable and acyclic table (profile SUB_GA)."""
    table = _perturb(
        agent,
        universe,
        rng,
        lambda t: check_sub(t).holds and check_ga_graph(t).holds,
    )
    _require_verdict(check_sub(table), "SUB_GA", agent)
    _require_verdict(check_ga_graph(table), "SUB_GA", agent)
    return table


def gen_separating_sub_ga_table(agent, universe, rng, tries=200):
    """A SUB_GA table that is not path independent, found by retrying
    perturbation runs.  Raises BudgetExceeded when the tries run out."""
    for _ in range(tries):
        table = gen_sub_ga_table(agent, universe, rng)
        if not check_pi(table).holds:
            return table
    raise BudgetExceeded(
        "no SUB_GA table violating PI found in %d tries" % tries, tries
    )


def gen_ba_table(agent, universe, rng):
    """Binary-acyclic table: singleton and pair menus follow integer
    utilities with an acceptability flag, larger menus are arbitrary."""
    universe = tuple(sorted(universe))
    n = len(universe)
    utility = {i: rng.randrange(1000) for i in range(n)}
    acceptable = {i for i in range(n) if rng.randrange(100) < 80}

    entries = [None] * (1 << n)
    entries[0] = 0
    for i in range(n):
        entries[1 << i] = (1 << i) if i in acceptable else 0
    for i in range(n):
        for j in range(i + 1, n):
            m = (1 << i) | (1 << j)
            live = [k for k in (i, j) if k in acceptable]
            if not live:
                entries[m] = 0
            else:
                top = max(utility[k] for k in live)
                entries[m] = sum(1 << k for k in live if utility[k] == top)
    for m in range(1, 1 << n):
        if entries[m] is None:
            entries[m] = _subset_mask(rng, m)
    table = ChoiceTable(agent, universe, entries)
    _require_verdict(check_ba(table), "BA", agent)
    return table


def gen_trivial_table(agent, universe, rng):
    """Trivial table: every menu chooses nothing."""
    universe = tuple(sorted(universe))
    return ChoiceTable(agent, universe, [0] * (1 << len(universe)))


def gen_unrestricted_table(agent, universe, rng):
    """Uniformly random table; no axiom guaranteed."""
    universe = tuple(sorted(universe))
    n = len(universe)
    entries = [_subset_mask(rng, m) for m in range(1 << n)]
    return ChoiceTable(agent, universe, entries)


_GENERATORS = {
    "PI": gen_pi_table,
    "SUB_GA": gen_sub_ga_table,
    "SUB_ONLY": gen_sub_table,
    "BA": gen_ba_table,
    "TRIVIAL": gen_trivial_table,
    "UNRESTRICTED": gen_unrestricted_table,
}

# Which checkers each profile promises to pass.
_PROFILE_CHECKS = {
    "PI": (check_pi,),
    "SUB_GA": (check_sub, check_ga_graph),
    "SUB_ONLY": (check_sub,),
    "BA": (check_ba,),
    "TRIVIAL": (check_pi,),
    "UNRESTRICTED": (),
}


def _require_verdict(verdict, profile, agent):
    if not verdict.holds:
        raise LogicError(
            "profile %s broken for agent %r: %s violated" % (profile, agent, verdict.axiom)
        )


def gen_table(profile, agent, universe, seed):
    """One table from a named profile; seed is required."""
    if profile not in _GENERATORS:
        raise ValueError("unknown profile %r" % profile)
    rng = Random(seed)
    table = _GENERATORS[profile](agent, universe, rng)
    for check in _PROFILE_CHECKS[profile]:
        _require_verdict(check(table), profile, agent)
    return table


def passes_profile(table, profile):
    """True when the table satisfies everything the profile promises."""
    return all(check(table).holds for check in _PROFILE_CHECKS[profile])


def gen_market(spec):
    """A market whose agents' tables follow the spec's profiles.

    Returns (market, verdicts) where verdicts maps each agent to the
    verdict dicts of its profile checks, re-verified on the final tables.
    """
    rng = Random(spec.seed)
    firms = ["f%d" % (i + 1) for i in range(spec.firms)]
    workers = ["w%d" % (i + 1) for i in range(spec.workers)]
    contracts = []
    for f in firms:
        for w in workers:
            if rng.randrange(100) < spec.density:
                contracts.append(Contract("%s%s" % (f, w), f, w))

    verdicts = {}
    market = Market(firms, workers, contracts, {})
    for agent in market.agents:
        side = "firm" if agent in market.firms else "worker"
        profile = spec.side_profile(side)
        agent_seed = rng.randrange(1 << 63)
        table = gen_table(profile, agent, market.universe_ids(agent), agent_seed)
        market.tables[agent] = table
        checks = {}
        for check in _PROFILE_CHECKS[profile]:
            verdict = check(table)
            _require_verdict(verdict, profile, agent)
            key = "ga" if check is check_ga_graph else verdict.axiom
            checks[key] = verdict.to_dict()
        verdicts[agent] = {"profile": profile, "checks": checks}
    return market, verdicts
