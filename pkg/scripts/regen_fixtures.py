#!/usr/bin/env python3
"""Rebuild the canonical fixture files under fixtures/.

Fixtures are committed; run this only when the serialization format or the
fixture definitions change.
"""

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from choicematch.core import (  # noqa: E402
    ChoiceTable,
    Contract,
    Market,
    save_market,
    save_matching,
    save_table,
)

ROOT = pathlib.Path(__file__).resolve().parents[1]
FIX = ROOT / "fixtures"


def table_from(agent, universe, rows):
    menus = {
        frozenset(menu.split()): frozenset(chosen.split()) for menu, chosen in rows
    }
    return ChoiceTable.from_menus(agent, universe, menus, identity_singletons=True)


# Four contracts, substitutable and acyclic but not path independent.
SUB_GA_NOT_PI = [
    ("a b", "a b"),
    ("a c", "a"),
    ("a d", "a d"),
    ("b c", "b"),
    ("b d", "b d"),
    ("c d", "d"),
    ("a b c", "a b"),
    ("a b d", "a b d"),
    ("a c d", "a d"),
    ("b c d", "b d"),
    ("a b c d", "a d"),
]

# Four contracts, substitutable but cyclic: the grow-or-discard search
# loops {a,d} -> {b,d} -> {c,d} -> {a,d}.
SUB_NOT_GA = [
    ("a b", "a b"),
    ("a c", "a c"),
    ("a d", "a d"),
    ("b c", "b c"),
    ("b d", "b d"),
    ("c d", "c d"),
    ("a b c", "a c"),
    ("a b d", "b d"),
    ("a c d", "a d"),
    ("b c d", "c d"),
    ("a b c d", "d"),
]


def _market(choices):
    firms = ["f1", "f2", "f3"]
    workers = ["w1", "w2", "w3"]
    contracts = [Contract(f + w, f, w) for f in firms for w in workers]
    tables = {}
    for agent in firms + workers:
        rows = []
        for menu, chosen in choices[agent]:
            if agent in firms:
                to_id = lambda x: agent + x
            else:
                to_id = lambda x: x + agent
            rows.append(
                (
                    " ".join(to_id(x) for x in menu.split()),
                    " ".join(to_id(x) for x in chosen.split()),
                )
            )
        universe = sorted(
            c.id for c in contracts if (c.firm if agent in firms else c.worker) == agent
        )
        tables[agent] = table_from(agent, universe, rows)
    return Market(firms, workers, contracts, tables, {"singletons": "identity"})


# Many-to-many example: every agent may hold several contracts; f1's table
# is substitutable but not path independent.
M2M_CHOICES = {
    "f1": [("w1 w2", "w1"), ("w1 w3", "w1 w3"), ("w2 w3", "w2 w3"), ("w1 w2 w3", "w2 w3")],
    "f2": [("w1 w2", "w1"), ("w1 w3", "w1"), ("w2 w3", "w2 w3"), ("w1 w2 w3", "w1 w2 w3")],
    "f3": [("w1 w2", "w2"), ("w1 w3", "w3"), ("w2 w3", "w2 w3"), ("w1 w2 w3", "w1 w2 w3")],
    "w1": [("f1 f2", "f1 f2"), ("f1 f3", "f1 f3"), ("f2 f3", "f3"), ("f1 f2 f3", "f1 f2 f3")],
    "w2": [("f1 f2", "f1 f2"), ("f1 f3", "f1 f3"), ("f2 f3", "f2"), ("f1 f2 f3", "f1 f2 f3")],
    "w3": [("f1 f2", "f1"), ("f1 f3", "f1 f3"), ("f2 f3", "f2 f3"), ("f1 f2 f3", "f1 f2 f3")],
}
M2M_MATCHING = ["f1w2", "f1w3", "f2w2", "f2w3", "f3w1", "f3w2", "f3w3"]

# One-to-one example: w3's pairwise choices are cyclic, so its induced
# order does not exist, yet an R-stable matching does.
O2O_CHOICES = {
    "f1": [("w1 w2", "w2"), ("w1 w3", "w1 w3"), ("w2 w3", "w3"), ("w1 w2 w3", "w1")],
    "f2": [("w1 w2", "w1"), ("w1 w3", "w1 w3"), ("w2 w3", "w2"), ("w1 w2 w3", "w1 w2 w3")],
    "f3": [("w1 w2", "w1"), ("w1 w3", "w1"), ("w2 w3", "w2 w3"), ("w1 w2 w3", "w3")],
    "w1": [("f1 f2", "f2"), ("f1 f3", "f1 f3"), ("f2 f3", "f3"), ("f1 f2 f3", "f1 f2 f3")],
    "w2": [("f1 f2", "f1"), ("f1 f3", "f1"), ("f2 f3", "f2 f3"), ("f1 f2 f3", "f1 f2 f3")],
    "w3": [("f1 f2", "f2"), ("f1 f3", "f1"), ("f2 f3", "f2 f3"), ("f1 f2 f3", "f1 f2")],
}
O2O_MATCHING = ["f1w2", "f2w3", "f3w1"]


def main():
    FIX.mkdir(exist_ok=True)
    universe = ("a", "b", "c", "d")
    (FIX / "sub_ga_not_pi.table").write_text(
        save_table(table_from("C", universe, SUB_GA_NOT_PI), "identity"),
        encoding="utf-8",
    )
    (FIX / "sub_not_ga.table").write_text(
        save_table(table_from("C", universe, SUB_NOT_GA), "identity"),
        encoding="utf-8",
    )
    (FIX / "example_m2m.market").write_text(save_market(_market(M2M_CHOICES)), encoding="utf-8")
    (FIX / "example_m2m.matching").write_text(save_matching(M2M_MATCHING), encoding="utf-8")
    (FIX / "example_o2o.market").write_text(save_market(_market(O2O_CHOICES)), encoding="utf-8")
    (FIX / "example_o2o.matching").write_text(save_matching(O2O_MATCHING), encoding="utf-8")
    print("fixtures written to", FIX)


if __name__ == "__main__":
    main()
