"""Axiom checkers over a single choice table.

Five axioms: substitutability (SUB), consistency (CON), path independence
(PI), general acyclicity (GA), and binary acyclicity (BA).  Each checker
returns a Verdict; violated verdicts carry a witness that replay_witness can
confirm against the table from the recorded sets alone.

Witnesses are canonical: every checker scans candidates in ascending bitmask
order and returns the first hit, and the two acyclicity checkers search
shortest chains / cycles first with lexicographic tie-breaks.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import AGENT_CAP, iter_submasks
from .errors import BudgetExceeded, UniverseTooLarge

HOLDS = "holds"
VIOLATED = "violated"
NO_VIOLATION_UP_TO = "no_violation_up_to"

AXIOMS = ("sub", "con", "pi", "ga", "ba")

GA_NODE_BUDGET = 10_000_000


@dataclass(frozen=True)
class AxiomWitness:
    """A replayable counterexample.

    sets holds the menus or chain states involved (frozensets of ids in
    order of appearance); meaning varies per axiom and is documented on the
    checker.  evaluations records every (menu, chosen) pair the finding
    relies on, so replay needs only the table.
    """

    axiom: str
    sets: tuple = ()
    derived: tuple = ()
    element: str = None
    chain: tuple = ()
    kinds: tuple = ()
    evaluations: tuple = ()

    def to_dict(self):
        def ids(s):
            return sorted(s)

        out = {"axiom": self.axiom}
        if self.axiom in ("sub", "con", "pi"):
            out["A"] = ids(self.sets[0])
            out["B"] = ids(self.sets[1])
        if self.axiom == "sub":
            out["element"] = self.element
        if self.axiom == "ba":
            out["chain"] = list(self.chain)
        if self.axiom == "ga":
            out["S"] = [ids(s) for s in self.sets]
            out["D"] = [ids(d) for d in self.derived]
        if self.axiom == "ga_cycle":
            out["cycle"] = [ids(s) for s in self.sets]
            out["challengers"] = [ids(s) for s in self.derived]
            out["kinds"] = list(self.kinds)
        out["evaluations"] = [
            {"menu": ids(m), "chosen": ids(c)} for m, c in self.evaluations
        ]
        return out


@dataclass(frozen=True)
class Verdict:
    axiom: str
    status: str
    witness: AxiomWitness = None
    bound: int = None

    @property
    def holds(self):
        return self.status == HOLDS

    @property
    def violated(self):
        return self.status == VIOLATED

    def to_dict(self):
        out = {"axiom": self.axiom, "verdict": self.status}
        out["witness"] = self.witness.to_dict() if self.witness else None
        if self.bound is not None:
            out["bound"] = self.bound
        return out


def _check_cap(table, cap):
    if table.n > cap:
        raise UniverseTooLarge(table.n, cap, "agent %r universe" % table.agent)


def check_sub(table, cap=AGENT_CAP):
    """Substitutability: A subset of B implies C(B) meet A subset of C(A).

    Witness sets: (A, B); element is the contract chosen from B, present in
    A, but not chosen from A.
    """
    _check_cap(table, cap)
    for b in range(1 << table.n):
        cb = table.choose_mask(b)
        if not cb:
            continue
        for a in iter_submasks(b):
            bad = cb & a & ~table.choose_mask(a)
            if bad:
                x = table.universe[(bad & -bad).bit_length() - 1]
                wit = AxiomWitness(
                    axiom="sub",
                    sets=(table.ids_of(a), table.ids_of(b)),
                    element=x,
                    evaluations=(
                        (table.ids_of(a), table.ids_of(table.choose_mask(a))),
                        (table.ids_of(b), table.ids_of(cb)),
                    ),
                )
                return Verdict("sub", VIOLATED, wit)
    return Verdict("sub", HOLDS)


def check_con(table, cap=AGENT_CAP):
    """Consistency: C(B) subset of A subset of B implies C(A) = C(B).

    Witness sets: (A, B) with differing choices.
    """
    _check_cap(table, cap)
    for b in range(1 << table.n):
        cb = table.choose_mask(b)
        for extra in iter_submasks(b & ~cb):
            a = cb | extra
            ca = table.choose_mask(a)
            if ca != cb:
                wit = AxiomWitness(
                    axiom="con",
                    sets=(table.ids_of(a), table.ids_of(b)),
                    evaluations=(
                        (table.ids_of(a), table.ids_of(ca)),
                        (table.ids_of(b), table.ids_of(cb)),
                    ),
                )
                return Verdict("con", VIOLATED, wit)
    return Verdict("con", HOLDS)


def check_pi(table, cap=AGENT_CAP):
    """Path independence: C(A u B) = C(C(A) u C(B)) for all pairs.

    Pairs are scanned triangularly (outer mask B ascending, inner mask
    A <= B ascending), so the reported pair has the smallest possible B and,
    within it, the smallest A.  Witness sets: (A, B); evaluations record
    C(A), C(B), C(A u B), and C(C(A) u C(B)).
    """
    _check_cap(table, cap)
    for b in range(1 << table.n):
        cb = table.choose_mask(b)
        for a in range(b + 1):
            ca = table.choose_mask(a)
            direct = table.choose_mask(a | b)
            staged = table.choose_mask(ca | cb)
            if direct != staged:
                wit = AxiomWitness(
                    axiom="pi",
                    sets=(table.ids_of(a), table.ids_of(b)),
                    evaluations=(
                        (table.ids_of(a), table.ids_of(ca)),
                        (table.ids_of(b), table.ids_of(cb)),
                        (table.ids_of(a | b), table.ids_of(direct)),
                        (table.ids_of(ca | cb), table.ids_of(staged)),
                    ),
                )
                return Verdict("pi", VIOLATED, wit)
    return Verdict("pi", HOLDS)


def _ba_relation(table):
    """r[i][j] true iff contract i is chosen from the pair {i, j}."""
    n = table.n
    r = [[False] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i != j:
                r[i][j] = bool(table.choose_mask((1 << i) | (1 << j)) & (1 << i))
    return r


def validate_ba_chain(table, chain):
    """True iff the id chain x1..xk witnesses a BA violation: each link is
    revealed-preferred to the next, yet x1 is not chosen from {x1, xk}."""
    if len(chain) < 3:
        return False
    idx = [table.universe.index(x) for x in chain]
    for i, j in zip(idx, idx[1:]):
        if not table.choose_mask((1 << i) | (1 << j)) & (1 << i):
            return False
    first, last = idx[0], idx[-1]
    return not table.choose_mask((1 << first) | (1 << last)) & (1 << first)


def check_ba(table, cap=AGENT_CAP):
    """Binary acyclicity over the pairwise revealed relation.

    The witness chain is the shortest violating chain, lexicographically
    least among chains of that length.
    """
    _check_cap(table, cap)
    n = table.n
    r = _ba_relation(table)
    succ = [[j for j in range(n) if r[i][j]] for i in range(n)]
    pred = [[j for j in range(n) if r[j][i]] for i in range(n)]

    best = None
    for x in range(n):
        for z in range(n):
            if x == z or r[x][z]:
                continue
            # x is not chosen from {x, z}; a chain x ~> z of two or more
            # links closes a violation.  BFS distances toward z, then a
            # greedy walk gives the lexicographically least shortest chain.
            dist = {z: 0}
            frontier = [z]
            while frontier:
                nxt = []
                for v in frontier:
                    for u in pred[v]:
                        if u not in dist:
                            dist[u] = dist[v] + 1
                            nxt.append(u)
                frontier = nxt
            if x not in dist or dist[x] < 2:
                continue
            path = [x]
            cur = x
            while cur != z:
                cur = min(v for v in succ[cur] if dist.get(v) == dist[cur] - 1)
                path.append(cur)
            chain = tuple(table.universe[i] for i in path)
            key = (len(chain), chain)
            if best is None or key < best[0]:
                best = (key, chain, path)

    if best is None:
        return Verdict("ba", HOLDS)
    _, chain, path = best
    evals = []
    for i, j in zip(path, path[1:]):
        m = (1 << i) | (1 << j)
        evals.append((table.ids_of(m), table.ids_of(table.choose_mask(m))))
    m = (1 << path[0]) | (1 << path[-1])
    evals.append((table.ids_of(m), table.ids_of(table.choose_mask(m))))
    wit = AxiomWitness(axiom="ba", chain=chain, evaluations=tuple(evals))
    return Verdict("ba", VIOLATED, wit)


# ---------------------------------------------------------------------------
# General acyclicity, chain form.  A violating chain is nonempty sets
# S_1, ..., S_k where each stage is a proper discard: the menu
# A_i u S_{i+1} chooses S_{i+1} u D_i with D_i a proper subset of the
# dropped state, states A_1 = S_1 and A_{i+1} = S_{i+1} u D_i, and finally
# S_1 subset of C(A_{k-1} u S_k), re-admitting the discarded start.
# By default every challenger must be disjoint from the current state (the
# reading used by the termination proof); strict=True relaxes S_2 and S_k
# to the literal definition's index range.
# ---------------------------------------------------------------------------


def _ga_stage(table, state, challenger):
    """Result of challenging state with a set: ("grow"|"discard"|None, next)."""
    union = state | challenger
    c = table.choose_mask(union)
    if c == union:
        return "grow", union
    if challenger & ~c:
        return None, None
    if not (state & ~c):
        return None, None
    return "discard", c


def validate_ga_chain(table, sets, strict=False):
    """True iff the given id-set chain S_1..S_k is a GA violation."""
    masks = [table.mask_of(s) for s in sets]
    k = len(masks)
    if k < 3 or not all(masks):
        return False
    state = masks[0]
    for i in range(1, k - 1):
        ch = masks[i]
        if not strict or i >= 2:
            if ch & state:
                return False
        c = table.choose_mask(state | ch)
        if ch & ~c:
            return False
        d = c & ~ch
        if d | state != state or d == state:
            return False
        state = c
    final = masks[k - 1]
    if not strict and final & state:
        return False
    return not masks[0] & ~table.choose_mask(state | final)


def check_ga_chain(table, max_k=None, cap=AGENT_CAP, node_budget=GA_NODE_BUDGET,
                   strict=False):
    """Search for a violating chain, shortest first.

    Chains of each length k are explored depth first with every choice point
    (S_1, then each challenger) scanned in ascending mask order, so the first
    hit is the lexicographically least violating chain of minimal length.
    Returns Violated with that chain, or NoViolationUpTo(max_k).
    """
    _check_cap(table, cap)
    n = table.n
    full = (1 << n) - 1
    if max_k is None:
        max_k = 2 * full
    spent = 0

    def charge():
        nonlocal spent
        spent += 1
        if spent > node_budget:
            raise BudgetExceeded("ga chain search exceeded %d stage evaluations"
                                 % node_budget, spent)

    def finals(state, start, stages):
        for ch in range(1, full + 1):
            if not strict and ch & state:
                continue
            charge()
            c = table.choose_mask(state | ch)
            if not start & ~c:
                evals = list(stages)
                evals.append((table.ids_of(state | ch), table.ids_of(c)))
                return ch, tuple(evals)
        return None

    def extend(state, start, depth, chain, derived, stages, k):
        # chain has depth stage sets so far; we need k - 2 discard stages
        # before the closing challenger.
        if depth == k - 1:
            hit = finals(state, start, stages)
            if hit is None:
                return None
            ch, evals = hit
            return chain + (ch,), tuple(derived), evals
        for ch in range(1, full + 1):
            # strict mode lets S_2 overlap S_1; later challengers never may
            if ch & state and not (strict and depth == 1):
                continue
            charge()
            union = state | ch
            c = table.choose_mask(union)
            if ch & ~c:
                continue
            d = c & ~ch
            if d & ~state or d == state:
                continue
            hit = extend(c, start, depth + 1, chain + (ch,), derived + (d,),
                         stages + ((table.ids_of(union), table.ids_of(c)),), k)
            if hit is not None:
                return hit
        return None

    for k in range(3, max_k + 1):
        for s1 in range(1, full + 1):
            hit = extend(s1, s1, 1, (s1,), (), (), k)
            if hit is not None:
                chain, derived, evals = hit
                wit = AxiomWitness(
                    axiom="ga",
                    sets=tuple(table.ids_of(m) for m in chain),
                    derived=tuple(table.ids_of(d) for d in derived),
                    evaluations=evals,
                )
                return Verdict("ga", VIOLATED, wit)
    return Verdict("ga", NO_VIOLATION_UP_TO, bound=max_k)


# ---------------------------------------------------------------------------
# General acyclicity, transition-graph form.  Nodes are contract sets;
# challenging a node with a disjoint set either grows it (the union is
# chosen outright) or discards down to the chosen set (the challenger is
# kept in full, part of the node dropped).  The table is acyclic iff the
# transition graph has no directed cycle.  All subsets participate as
# nodes: under SUB only individually rational sets can sit on a cycle, so
# this agrees with restricting nodes to IR sets, and it stays sound when
# the table is not substitutable.
# ---------------------------------------------------------------------------


def _ga_graph_succ(table, node, full):
    """Sorted successor list [(target, challenger, kind)], least challenger
    kept when several reach the same target."""
    found = {}
    for ch in iter_submasks(full & ~node):
        if not ch:
            continue
        kind, nxt = _ga_stage(table, node, ch)
        if kind is not None and nxt not in found:
            found[nxt] = (ch, kind)
    return sorted((t, ch, kind) for t, (ch, kind) in found.items())


def check_ga_graph(table, cap=AGENT_CAP):
    """Cycle detection on the grow-or-discard transition graph.

    The witness lists the cycle's nodes starting from the least node, with
    the challenger and move kind taken on each edge.  The reported cycle is
    a shortest one; ties break toward the least starting node.
    """
    _check_cap(table, cap)
    n = table.n
    full = (1 << n) - 1
    succ = {v: _ga_graph_succ(table, v, full) for v in range(full + 1)}

    # Iterative Tarjan: strongly connected components with 2+ nodes hold
    # every cycle (the graph has no self loops).
    index = {}
    low = {}
    on = set()
    stack = []
    comp_of = {}
    comps = []
    counter = 0
    for root in range(full + 1):
        if root in index:
            continue
        work = [(root, iter(succ[root]))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for t, _, _ in it:
                if t not in index:
                    index[t] = low[t] = counter
                    counter += 1
                    stack.append(t)
                    on.add(t)
                    work.append((t, iter(succ[t])))
                    advanced = True
                    break
                if t in on:
                    low[v] = min(low[v], index[t])
            if advanced:
                continue
            work.pop()
            if work:
                pv = work[-1][0]
                low[pv] = min(low[pv], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on.discard(w)
                    comp.append(w)
                    comp_of[w] = len(comps)
                    if w == v:
                        break
                comps.append(comp)

    cyclic = [set(c) for c in comps if len(c) > 1]
    if not cyclic:
        return Verdict("ga", HOLDS)

    best = None
    for comp in cyclic:
        for v in sorted(comp):
            # Shortest cycle through v inside its component: BFS distances
            # back to v, then a greedy least-successor walk.
            dist = {v: 0}
            frontier = [v]
            while frontier:
                nxt = []
                for u in frontier:
                    for p in comp:
                        if p in dist:
                            continue
                        if any(t == u for t, _, _ in succ[p]):
                            dist[p] = dist[u] + 1
                            nxt.append(p)
                frontier = nxt
            length = min(
                (dist[t] + 1 for t, _, _ in succ[v] if t in dist), default=None
            )
            if length is None:
                continue
            if best is not None and length >= best[0]:
                continue
            cycle = [v]
            cur = v
            while True:
                cur = min(t for t, _, _ in succ[cur]
                          if t in dist and dist[t] == (length - len(cycle)) % length
                          and (len(cycle) < length or t == v))
                if cur == v:
                    break
                cycle.append(cur)
            best = (length, cycle)

    length, cycle = best
    challengers = []
    kinds = []
    evals = []
    for i, v in enumerate(cycle):
        t = cycle[(i + 1) % length]
        ch, kind = next((c, k) for tt, c, k in succ[v] if tt == t)
        challengers.append(table.ids_of(ch))
        kinds.append(kind)
        evals.append((table.ids_of(v | ch), table.ids_of(table.choose_mask(v | ch))))
    wit = AxiomWitness(
        axiom="ga_cycle",
        sets=tuple(table.ids_of(v) for v in cycle),
        derived=tuple(challengers),
        kinds=tuple(kinds),
        evaluations=tuple(evals),
    )
    return Verdict("ga", VIOLATED, wit)


def replay_witness(table, witness):
    """Recompute a witness's evaluations and confirm it still violates."""
    if witness.axiom == "sub":
        a, b = witness.sets
        if not a <= b or witness.element is None:
            return False
        x = witness.element
        return x in table.choose(b) and x in a and x not in table.choose(a)
    if witness.axiom == "con":
        a, b = witness.sets
        cb = table.choose(b)
        return cb <= a <= b and table.choose(a) != cb
    if witness.axiom == "pi":
        a, b = witness.sets
        return table.choose(a | b) != table.choose(table.choose(a) | table.choose(b))
    if witness.axiom == "ba":
        return validate_ba_chain(table, witness.chain)
    if witness.axiom == "ga":
        return validate_ga_chain(table, witness.sets)
    if witness.axiom == "ga_cycle":
        cycle = [table.mask_of(s) for s in witness.sets]
        if len(cycle) < 2:
            return False
        for i, v in enumerate(cycle):
            ch = table.mask_of(witness.derived[i])
            kind, nxt = _ga_stage(table, v, ch)
            if kind != witness.kinds[i] or nxt != cycle[(i + 1) % len(cycle)]:
                return False
        return True
    return False


@dataclass
class ImplicationReport:
    verdicts: dict = field(default_factory=dict)
    logic_errors: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.logic_errors

    def to_dict(self):
        return {
            "verdicts": {k: v.to_dict() for k, v in self.verdicts.items()},
            "logic_errors": list(self.logic_errors),
        }


def implication_suite(table, max_k=None, cap=AGENT_CAP):
    """Run every checker and cross-check the known implications.

    PI implies each of SUB, CON, GA, and BA; SUB together with CON implies
    PI.  Any contradiction is recorded as a logic error: it can only mean a
    checker bug.
    """
    report = ImplicationReport()
    v = report.verdicts
    v["sub"] = check_sub(table, cap)
    v["con"] = check_con(table, cap)
    v["pi"] = check_pi(table, cap)
    v["ba"] = check_ba(table, cap)
    v["ga_graph"] = check_ga_graph(table, cap)
    v["ga_chain"] = check_ga_chain(table, max_k=max_k, cap=cap)

    if v["pi"].holds:
        for name in ("sub", "con", "ba", "ga_graph"):
            if not v[name].holds:
                report.logic_errors.append("pi holds but %s is violated" % name)
        if v["ga_chain"].violated:
            report.logic_errors.append("pi holds but a ga chain was found")
    if v["sub"].holds and v["con"].holds and not v["pi"].holds:
        report.logic_errors.append("sub and con hold but pi is violated")
    for name, verdict in v.items():
        if verdict.violated and not replay_witness(table, verdict.witness):
            report.logic_errors.append("%s witness does not replay" % name)
    return report
