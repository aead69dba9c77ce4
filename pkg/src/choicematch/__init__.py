"""Matching markets with explicit choice correspondences.

Axiom checking with replayable witnesses, strongly maximal set search,
stable many-to-many and one-to-one matching construction, and seeded
generators for test markets.
"""

from .core import (
    AGENT_CAP,
    MARKET_CAP,
    OUTSIDE,
    ChoiceTable,
    Contract,
    Market,
    load_any,
    load_market,
    load_matching,
    load_table,
    save_market,
    save_matching,
    save_table,
    validate_market,
    validate_table,
)
from .axioms import (
    AxiomWitness,
    Verdict,
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
from .individual import (
    classify_pair,
    enumerate_strongly_maximal_ir,
    gda,
    is_ir,
    is_strongly_maximal_ir,
)
from .many2many import (
    BlockWitness,
    enumerate_cy_stable,
    gdma,
    is_cy_stable,
    is_matching_ir,
    replay_gdma_trace,
    verify_block,
)
from .one2one import AgentOrder, build_order, daa, is_one_to_one, is_r_stable, tie_break
from .genlab import (
    GenSpec,
    PROFILES,
    gen_market,
    gen_table,
    passes_profile,
)

__version__ = "0.1.0"
