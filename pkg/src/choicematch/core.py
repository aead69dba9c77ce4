"""Domain types: contracts, choice tables, markets, matchings, and file I/O.

Contract sets are frozensets of contract ids at the API surface and bitmasks
internally.  Bit i of an agent's mask is the i-th contract of that agent's
universe in ascending id order, so mask order is a total canonical order on
subsets and all exhaustive scans walk it ascending.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import LoadError, MissingEntry, ParseError, UniverseTooLarge, UnknownAgent

AGENT_CAP = 16
MARKET_CAP = 24

# Placeholder for the outside option in serialized preference orders.
OUTSIDE = "∅"


def iter_submasks(mask):
    """Yield every submask of mask in ascending numeric order, 0 first."""
    sub = 0
    while True:
        yield sub
        if sub == mask:
            return
        sub = (sub - mask) & mask


def bit_indices(mask):
    """Indices of the set bits of mask, ascending."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


@dataclass(frozen=True, order=True)
class Contract:
    id: str
    firm: str
    worker: str


class ChoiceTable:
    """A dense choice correspondence for one agent.

    entries[m] is the chosen submask for menu mask m, or None when the table
    does not define that menu.  entries[0] is always 0: nothing is chosen
    from the empty menu.
    """

    __slots__ = ("agent", "universe", "entries", "_bit")

    def __init__(self, agent, universe, entries):
        universe = tuple(universe)
        if list(universe) != sorted(universe):
            raise ValueError("universe must be sorted by contract id")
        if len(set(universe)) != len(universe):
            raise ValueError("universe has duplicate contract ids")
        if len(universe) > AGENT_CAP:
            raise UniverseTooLarge(len(universe), AGENT_CAP, "agent %r universe" % agent)
        entries = tuple(entries)
        if len(entries) != 1 << len(universe):
            raise ValueError("entries length must be 2^|universe|")
        if entries[0] != 0:
            raise ValueError("C(empty) must be empty")
        self.agent = agent
        self.universe = universe
        self.entries = entries
        self._bit = {x: i for i, x in enumerate(universe)}

    @classmethod
    def from_menus(cls, agent, universe, menus, identity_singletons=False):
        """Build a table from a {frozenset: frozenset} mapping of menus.

        Menus not in the mapping stay undefined, except the empty menu and,
        when identity_singletons is set, singleton menus which default to
        choosing themselves.  Entries are stored as given; containment is
        checked by validate_table, not here.
        """
        universe = tuple(sorted(universe))
        bit = {x: i for i, x in enumerate(universe)}
        n = len(universe)
        if n > AGENT_CAP:
            raise UniverseTooLarge(n, AGENT_CAP, "agent %r universe" % agent)
        entries = [None] * (1 << n)
        entries[0] = 0
        if identity_singletons:
            for i in range(n):
                entries[1 << i] = 1 << i
        for menu, chosen in menus.items():
            m = 0
            for x in menu:
                m |= 1 << bit[x]
            c = 0
            for x in chosen:
                c |= 1 << bit[x]
            entries[m] = c
        return cls(agent, universe, entries)

    @property
    def n(self):
        return len(self.universe)

    def mask_of(self, ids, strict=True):
        """Mask for a collection of ids; ids outside the universe either
        raise (strict) or are projected away."""
        m = 0
        for x in ids:
            i = self._bit.get(x)
            if i is None:
                if strict:
                    raise UnknownAgent(
                        "contract %r is not in agent %r's universe" % (x, self.agent)
                    )
                continue
            m |= 1 << i
        return m

    def ids_of(self, mask):
        return frozenset(self.universe[i] for i in bit_indices(mask))

    def sorted_ids(self, mask):
        return tuple(self.universe[i] for i in bit_indices(mask))

    def choose_mask(self, mask):
        c = self.entries[mask]
        if c is None:
            raise MissingEntry(self.agent, self.ids_of(mask))
        return c

    def choose(self, ids):
        """C(S) for a set of ids; ids outside the universe are projected away."""
        return self.ids_of(self.choose_mask(self.mask_of(ids, strict=False)))

    def is_total(self):
        return all(e is not None for e in self.entries)

    def with_entry(self, mask, chosen_mask):
        """A copy of this table with one entry replaced."""
        entries = list(self.entries)
        entries[mask] = chosen_mask
        return ChoiceTable(self.agent, self.universe, entries)

    def __eq__(self, other):
        return (
            isinstance(other, ChoiceTable)
            and self.agent == other.agent
            and self.universe == other.universe
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.agent, self.universe, self.entries))

    def __repr__(self):
        return "ChoiceTable(agent=%r, n=%d)" % (self.agent, self.n)


class Market:
    """A two-sided market: firms, workers, contracts, and one table per agent."""

    __slots__ = ("firms", "workers", "contracts", "tables", "by_id", "defaults")

    def __init__(self, firms, workers, contracts, tables, defaults=None):
        self.firms = tuple(sorted(firms))
        self.workers = tuple(sorted(workers))
        self.contracts = tuple(sorted(contracts, key=lambda c: c.id))
        self.tables = dict(tables)
        self.by_id = {c.id: c for c in self.contracts}
        self.defaults = dict(defaults or {"singletons": "explicit"})

    @property
    def agents(self):
        return self.firms + self.workers

    def side_of(self, agent):
        if agent in self.firms:
            return "firm"
        if agent in self.workers:
            return "worker"
        raise UnknownAgent("no agent %r in market" % agent)

    def universe_ids(self, agent):
        side = self.side_of(agent)
        if side == "firm":
            return tuple(c.id for c in self.contracts if c.firm == agent)
        return tuple(c.id for c in self.contracts if c.worker == agent)

    def table(self, agent):
        self.side_of(agent)
        return self.tables[agent]

    def project(self, ids, agent):
        """The contracts of a set that involve the given agent."""
        side = self.side_of(agent)
        out = set()
        for x in ids:
            c = self.by_id.get(x)
            if c is None:
                raise UnknownAgent("unknown contract id %r" % x)
            if (c.firm if side == "firm" else c.worker) == agent:
                out.add(x)
        return frozenset(out)

    def check_cap(self, cap=MARKET_CAP, what="market"):
        if len(self.contracts) > cap:
            raise UniverseTooLarge(len(self.contracts), cap, what)


@dataclass(frozen=True)
class Issue:
    kind: str
    agent: str
    detail: str


@dataclass
class ValidationReport:
    issues: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.issues

    def add(self, kind, agent, detail):
        self.issues.append(Issue(kind, agent, detail))

    def lines(self):
        return ["%s agent=%s %s" % (i.kind, i.agent, i.detail) for i in self.issues]


def validate_table(table, report=None, agent=None):
    """Check containment and totality of one table."""
    report = report if report is not None else ValidationReport()
    agent = agent or table.agent
    for m, c in enumerate(table.entries):
        if c is None:
            report.add("missing_entry", agent, "menu {%s}" % ", ".join(table.sorted_ids(m)))
        elif c & ~m:
            report.add(
                "containment",
                agent,
                "menu {%s} chooses {%s}"
                % (", ".join(table.sorted_ids(m)), ", ".join(table.sorted_ids(c))),
            )
    return report


def validate_market(market):
    """Structural checks: wiring, universes, containment, totality."""
    report = ValidationReport()
    seen = set()
    for c in market.contracts:
        if c.id in seen:
            report.add("duplicate_contract", "-", "id %s" % c.id)
        seen.add(c.id)
        if c.firm not in market.firms:
            report.add("unknown_agent", c.firm, "contract %s names undeclared firm" % c.id)
        if c.worker not in market.workers:
            report.add("unknown_agent", c.worker, "contract %s names undeclared worker" % c.id)
    for agent in market.agents:
        table = market.tables.get(agent)
        if table is None:
            report.add("missing_table", agent, "no choice table")
            continue
        want = market.universe_ids(agent)
        if table.universe != want:
            report.add(
                "universe_mismatch",
                agent,
                "table covers {%s}, market gives {%s}"
                % (", ".join(table.universe), ", ".join(want)),
            )
            continue
        validate_table(table, report, agent)
    for agent in market.tables:
        if agent not in market.firms and agent not in market.workers:
            report.add("unknown_agent", agent, "table for undeclared agent")
    return report


# ---------------------------------------------------------------------------
# File formats.  Markets and single tables are JSON documents; save_* emit a
# canonical form (sorted ids, menus in ascending mask order, 2-space indent)
# so that load . save is the identity on canonical files.
# ---------------------------------------------------------------------------


def _parse_json(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError("invalid JSON: %s" % e.msg, e.lineno, e.colno) from e


def _require(doc, key, typ, where):
    if key not in doc:
        raise ParseError("%s is missing %r" % (where, key))
    val = doc[key]
    if not isinstance(val, typ):
        raise ParseError("%s %r has wrong type" % (where, key))
    return val


def _read_menus(raw_choices, universe, owner):
    """Shared menu-list reader for market and table files."""
    bit = {x: i for i, x in enumerate(universe)}
    menus = {}
    seen = set()
    for entry in raw_choices:
        if not isinstance(entry, dict):
            raise ParseError("choice entry for %s is not an object" % owner)
        menu = _require(entry, "menu", list, "choice entry for %s" % owner)
        chosen = _require(entry, "chosen", list, "choice entry for %s" % owner)
        m = 0
        for x in menu:
            if x not in bit:
                raise ParseError("unknown contract id %r in a menu for %s" % (x, owner))
            m |= 1 << bit[x]
        c = 0
        for x in chosen:
            if x not in bit:
                raise ParseError("unknown contract id %r in a chosen set for %s" % (x, owner))
            c |= 1 << bit[x]
        if m in seen:
            raise LoadError("duplicate menu {%s} for %s" % (", ".join(sorted(menu)), owner))
        seen.add(m)
        if c & ~m:
            raise LoadError(
                "chosen set not inside menu {%s} for %s" % (", ".join(sorted(menu)), owner)
            )
        menus[m] = c
    return menus


def _build_table(agent, universe, menus, identity_singletons):
    n = len(universe)
    entries = [None] * (1 << n)
    entries[0] = 0
    if identity_singletons:
        for i in range(n):
            entries[1 << i] = 1 << i
    for m, c in menus.items():
        entries[m] = c
    return ChoiceTable(agent, universe, entries)


def _singleton_default(doc):
    defaults = doc.get("defaults", {})
    if not isinstance(defaults, dict):
        raise ParseError("'defaults' must be an object")
    rule = defaults.get("singletons", "explicit")
    if rule not in ("identity", "explicit"):
        raise ParseError("unknown singleton default %r" % rule)
    return rule


def load_market(text, strict=True):
    """Parse a market file.  With strict=True (the default) a failing
    validation report is raised as LoadError; with strict=False the market
    is returned alongside its report for inspection."""
    doc = _parse_json(text)
    if not isinstance(doc, dict):
        raise ParseError("market file must be a JSON object")
    firms = _require(doc, "firms", list, "market")
    workers = _require(doc, "workers", list, "market")
    raw_contracts = _require(doc, "contracts", list, "market")
    raw_choices = _require(doc, "choices", dict, "market")
    rule = _singleton_default(doc)

    contracts = []
    for rc in raw_contracts:
        if not isinstance(rc, dict):
            raise ParseError("contract entries must be objects")
        contracts.append(
            Contract(
                _require(rc, "id", str, "contract"),
                _require(rc, "firm", str, "contract"),
                _require(rc, "worker", str, "contract"),
            )
        )
    if len(contracts) > MARKET_CAP:
        raise UniverseTooLarge(len(contracts), MARKET_CAP, "market")

    market = Market(firms, workers, contracts, {}, {"singletons": rule})
    for agent in raw_choices:
        if agent not in market.firms and agent not in market.workers:
            raise ParseError("choices listed for undeclared agent %r" % agent)
    for agent in market.agents:
        universe = market.universe_ids(agent)
        menus = _read_menus(raw_choices.get(agent, []), universe, "agent %s" % agent)
        market.tables[agent] = _build_table(agent, universe, menus, rule == "identity")

    report = validate_market(market)
    if strict:
        if not report.ok:
            raise LoadError("market failed validation:\n" + "\n".join(report.lines()), report)
        return market
    return market, report


def _menu_json(table, mask, chosen):
    return {
        "menu": list(table.sorted_ids(mask)),
        "chosen": list(table.sorted_ids(chosen)),
    }


def _table_menus_json(table, identity_singletons):
    out = []
    for m in range(1, 1 << table.n):
        c = table.entries[m]
        if c is None:
            continue
        if identity_singletons and m.bit_count() == 1 and c == m:
            continue
        out.append(_menu_json(table, m, c))
    return out


def save_market(market):
    """Canonical serialization; inverse of load_market on its own output."""
    identity = market.defaults.get("singletons") == "identity"
    doc = {
        "firms": list(market.firms),
        "workers": list(market.workers),
        "contracts": [
            {"id": c.id, "firm": c.firm, "worker": c.worker} for c in market.contracts
        ],
        "defaults": {"singletons": market.defaults.get("singletons", "explicit")},
        "choices": {
            agent: _table_menus_json(market.tables[agent], identity)
            for agent in market.agents
        },
    }
    return json.dumps(doc, ensure_ascii=False, indent=2) + "\n"


def load_table(text):
    """Parse a single-agent table file.  Returns (table, singleton_rule)."""
    doc = _parse_json(text)
    if not isinstance(doc, dict):
        raise ParseError("table file must be a JSON object")
    agent = _require(doc, "agent", str, "table")
    universe = tuple(_require(doc, "universe", list, "table"))
    if list(universe) != sorted(universe) or len(set(universe)) != len(universe):
        raise ParseError("table universe must be sorted and duplicate-free")
    rule = _singleton_default(doc)
    menus = _read_menus(_require(doc, "choices", list, "table"), universe, "agent %s" % agent)
    table = _build_table(agent, universe, menus, rule == "identity")
    report = validate_table(table)
    if not report.ok:
        raise LoadError("table failed validation:\n" + "\n".join(report.lines()), report)
    return table, rule


def save_table(table, singleton_rule="explicit"):
    doc = {
        "agent": table.agent,
        "universe": list(table.universe),
        "defaults": {"singletons": singleton_rule},
        "choices": _table_menus_json(table, singleton_rule == "identity"),
    }
    return json.dumps(doc, ensure_ascii=False, indent=2) + "\n"


def load_any(text):
    """Load either a market or a table file, sniffing by schema.

    Returns ("market", Market) or ("table", ChoiceTable)."""
    doc = _parse_json(text)
    if isinstance(doc, dict) and "universe" in doc:
        table, _ = load_table(text)
        return "table", table
    return "market", load_market(text)


def load_matching(text, market):
    """A matching file is a JSON array of contract ids."""
    doc = _parse_json(text)
    if not isinstance(doc, list) or not all(isinstance(x, str) for x in doc):
        raise ParseError("matching file must be a JSON array of contract ids")
    for x in doc:
        if x not in market.by_id:
            raise ParseError("unknown contract id %r in matching" % x)
    return frozenset(doc)


def save_matching(ids):
    return json.dumps(sorted(ids), ensure_ascii=False, indent=2) + "\n"
