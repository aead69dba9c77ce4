"""Axiom checkers: golden verdicts, witness replay, and cross-implications."""

import pytest

from choicematch import ChoiceTable
from choicematch.axioms import (
    HOLDS,
    NO_VIOLATION_UP_TO,
    VIOLATED,
    check_ba,
    check_con,
    check_ga_chain,
    check_ga_graph,
    check_pi,
    check_sub,
    implication_suite,
    replay_witness,
    validate_ba_chain,
    validate_ga_chain,
)
from choicematch.errors import BudgetExceeded, UniverseTooLarge
from choicematch.genlab import gen_table


def table_of(universe, rows):
    menus = {frozenset(m.split()): frozenset(c.split()) for m, c in rows}
    return ChoiceTable.from_menus("A", universe, menus, identity_singletons=True)


def identity_table(n=3):
    ids = tuple("x%d" % i for i in range(n))
    return ChoiceTable("A", ids, tuple(range(1 << n)))


class TestGoldenVerdicts:
    def test_sub_ga_not_pi(self, sub_ga_not_pi):
        assert check_sub(sub_ga_not_pi).status == HOLDS
        assert check_ga_graph(sub_ga_not_pi).status == HOLDS
        chain = check_ga_chain(sub_ga_not_pi, max_k=8)
        assert chain.status == NO_VIOLATION_UP_TO and chain.bound == 8
        assert check_con(sub_ga_not_pi).status == VIOLATED
        assert check_ba(sub_ga_not_pi).status == HOLDS
        pi = check_pi(sub_ga_not_pi)
        assert pi.status == VIOLATED
        assert pi.witness.sets == (frozenset("abc"), frozenset("d"))
        menus = dict(pi.witness.evaluations)
        assert menus[frozenset("abcd")] == frozenset("ad")
        assert menus[frozenset("abd")] == frozenset("abd")

    def test_sub_not_ga(self, sub_not_ga):
        assert check_sub(sub_not_ga).status == HOLDS
        assert check_pi(sub_not_ga).status == VIOLATED
        assert check_ba(sub_not_ga).status == HOLDS
        graph = check_ga_graph(sub_not_ga)
        assert graph.status == VIOLATED
        chain = check_ga_chain(sub_not_ga, max_k=8)
        assert chain.status == VIOLATED
        assert len(chain.witness.sets) == 4  # no shorter chain exists

    def test_sub_not_ga_cycle_matches_up_to_rotation(self, sub_not_ga):
        got = [frozenset(s) for s in check_ga_graph(sub_not_ga).witness.sets]
        want = [frozenset("bd"), frozenset("cd"), frozenset("ad")]
        assert len(got) == len(want)
        shift = got.index(want[0])
        assert [got[(shift + i) % len(got)] for i in range(len(got))] == want

    def test_known_k4_chain_validates(self, sub_not_ga):
        assert validate_ga_chain(sub_not_ga, [{"b", "d"}, {"c"}, {"a"}, {"b"}])
        # and the strict-index variant accepts it as well
        assert validate_ga_chain(sub_not_ga, [{"b", "d"}, {"c"}, {"a"}, {"b"}], strict=True)

    def test_identity_table_all_hold(self):
        t = identity_table()
        for check in (check_sub, check_con, check_pi, check_ba, check_ga_graph):
            assert check(t).status == HOLDS
        assert check_ga_chain(t, max_k=8).status == NO_VIOLATION_UP_TO

    def test_trivial_table_all_hold(self):
        t = ChoiceTable("A", ("x", "y", "z"), (0,) * 8)
        for check in (check_sub, check_con, check_pi, check_ba, check_ga_graph):
            assert check(t).status == HOLDS


class TestWitnessReplay:
    def test_violated_witnesses_replay(self, sub_ga_not_pi, sub_not_ga):
        for table in (sub_ga_not_pi, sub_not_ga):
            for check in (check_sub, check_con, check_pi, check_ba, check_ga_graph):
                verdict = check(table)
                if verdict.violated:
                    assert replay_witness(table, verdict.witness)
            chain = check_ga_chain(table, max_k=8)
            if chain.violated:
                assert replay_witness(table, chain.witness)

    def test_replay_rejects_tampered_witness(self, sub_not_ga):
        verdict = check_ga_graph(sub_not_ga)
        broken = verdict.witness.__class__(
            axiom="ga_cycle",
            sets=verdict.witness.sets[:-1] + (frozenset("ab"),),
            derived=verdict.witness.derived,
            kinds=verdict.witness.kinds,
            evaluations=verdict.witness.evaluations,
        )
        assert not replay_witness(sub_not_ga, broken)

    def test_replay_on_random_tables(self):
        for seed in range(60):
            n = 2 + seed % 3
            t = gen_table("UNRESTRICTED", "A", ["x%d" % i for i in range(n)], seed)
            for check in (check_sub, check_con, check_pi, check_ba, check_ga_graph):
                verdict = check(t)
                if verdict.violated:
                    assert replay_witness(t, verdict.witness), verdict.axiom


class TestBaChains:
    def test_three_cycle_example(self):
        t = table_of(("a", "b", "c"), [("a b", "a"), ("b c", "b"), ("a c", "c"),
                                       ("a b c", "a")])
        verdict = check_ba(t)
        assert verdict.violated
        assert verdict.witness.chain == ("a", "b", "c")
        assert validate_ba_chain(t, ("b", "c", "a"))
        assert validate_ba_chain(t, ("c", "a", "b"))
        assert not validate_ba_chain(t, ("a", "c", "b"))

    def test_chain_too_short_rejected(self, sub_not_ga):
        assert not validate_ba_chain(sub_not_ga, ("a", "b"))


class TestGaChainModes:
    def test_budget_exceeded(self, sub_not_ga):
        with pytest.raises(BudgetExceeded):
            check_ga_chain(sub_not_ga, max_k=8, node_budget=3)

    def test_strict_mode_still_finds_fixture_violation(self, sub_not_ga):
        assert check_ga_chain(sub_not_ga, max_k=8, strict=True).status == VIOLATED

    def test_default_bound(self, sub_ga_not_pi):
        verdict = check_ga_chain(sub_ga_not_pi)
        assert verdict.status == NO_VIOLATION_UP_TO
        assert verdict.bound == 2 * 15

    def test_cap(self):
        ids = ["x%02d" % i for i in range(15)]
        t = ChoiceTable("A", tuple(ids), tuple(range(1 << 15)))
        with pytest.raises(UniverseTooLarge):
            check_ga_chain(t, cap=8)


class TestCheckerInequivalence:
    """Pinned findings on how the two acyclicity checkers can disagree.

    Direction one: the chain form is strictly stronger than absence of
    grow/discard cycles.  In the first table x2 beats x1, x3 beats x2, yet
    {x1, x3} is chosen jointly, so a revealed-preference cycle exists and
    the chain checker reports a violation while the transition graph is
    acyclic and the grow-or-discard search terminates.

    Direction two: a graph cycle can evade the disjoint-challenger chain
    reading.  The second table has the state cycle {x2} -> {x0, x2} ->
    {x3} -> {x1, x3} -> {x2}, but closing a chain on it needs a final
    challenger overlapping the start, which only the literal index-range
    reading (strict=True) allows."""

    def table(self):
        return table_of(
            ("x1", "x2", "x3"),
            [
                ("x1 x2", "x2"),
                ("x1 x3", "x1 x3"),
                ("x2 x3", "x3"),
                ("x1 x2 x3", "x3"),
            ],
        )

    def cyclic_graph_table(self):
        return table_of(
            ("x0", "x1", "x2", "x3"),
            [
                ("x0 x1", "x0 x1"),
                ("x0 x2", "x0 x2"),
                ("x0 x3", "x0 x3"),
                ("x1 x2", "x1 x2"),
                ("x1 x3", "x1 x3"),
                ("x2 x3", "x2 x3"),
                ("x0 x1 x2", "x0"),
                ("x0 x1 x3", "x0 x3"),
                ("x0 x2 x3", "x3"),
                ("x1 x2 x3", "x2"),
                ("x0 x1 x2 x3", ""),
            ],
        )

    def test_chain_stronger_than_graph(self):
        t = self.table()
        assert check_sub(t).status == HOLDS
        assert check_ga_graph(t).status == HOLDS
        chain = check_ga_chain(t, max_k=8)
        assert chain.status == VIOLATED
        assert [sorted(s) for s in chain.witness.sets] == [["x1"], ["x2"], ["x3"], ["x1"]]
        assert replay_witness(t, chain.witness)

    def test_gda_still_terminates(self):
        from choicematch.individual import gda

        result, _ = gda(self.table())
        assert result == {"x1", "x3"}

    def test_graph_cycle_needs_strict_chain_reading(self):
        t = self.cyclic_graph_table()
        assert check_sub(t).status == HOLDS
        assert check_ga_graph(t).status == VIOLATED
        assert check_ga_chain(t, max_k=12).status == NO_VIOLATION_UP_TO
        assert check_ga_chain(t, max_k=8, strict=True).status == VIOLATED

    def test_gda_terminates_off_the_unreachable_cycle(self):
        # the cycle never meets the search, which starts at C(universe)
        from choicematch.individual import gda

        result, _ = gda(self.cyclic_graph_table())
        assert result == {"x0", "x3"}


class TestImplicationSuite:
    def test_fixture_tables_consistent(self, sub_ga_not_pi, sub_not_ga):
        for table in (sub_ga_not_pi, sub_not_ga):
            report = implication_suite(table, max_k=8)
            assert report.ok, report.logic_errors

    def test_pi_tables_imply_everything(self):
        for seed in range(50):
            n = 1 + seed % 5
            t = gen_table("PI", "A", ["x%d" % i for i in range(n)], seed)
            report = implication_suite(t, max_k=8)
            assert report.ok, report.logic_errors
            assert all(
                report.verdicts[name].holds
                for name in ("sub", "con", "pi", "ba", "ga_graph")
            )

    def test_random_tables_consistent(self):
        for seed in range(80):
            n = 2 + seed % 3
            t = gen_table("UNRESTRICTED", "A", ["x%d" % i for i in range(n)], seed)
            report = implication_suite(t, max_k=8)
            assert report.ok, report.logic_errors
