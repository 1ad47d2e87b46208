"""Synchronizing-strategy analysis for finite Markov decision processes.

Decides whether a strongly or weakly synchronizing strategy exists under
blind or perfect-information play, synthesizes a pure eventually periodic
witness strategy when one does, and certifies the answer by propagating the
induced sequence of state distributions.
"""

__version__ = "0.1.0"

from .bitset import bits, mask_of
from .cycles import (
    Cycle,
    Relation,
    STRONG,
    WEAK,
    delta,
    delta_bruteforce,
    family_satisfies,
    is_witness,
    round_trip,
    step_relation,
)
from .decide import (
    DecideConfig,
    INCONCLUSIVE,
    NO,
    Verdict,
    Verification,
    Witness,
    YES,
    bounded_cycle_search,
    decide,
    verify_witness,
)
from .formats import (
    ParseError,
    gen_cerny,
    gen_random,
    parse_mdp,
    parse_strategy,
    serialize_mdp,
    serialize_strategy,
    shortest_sync_word,
)
from .model import (
    Distribution,
    MarkovChain,
    Mdp,
    StateClassification,
    classify,
    induced_chain,
    is_deterministic,
    make_mdp,
    post,
    uniform_chain,
    validate,
)
from .simulate import (
    DistributionTrace,
    SyncEstimate,
    check_sync,
    default_epsilon,
    default_horizon,
    power_iterate,
    simulate,
)
from .subset import (
    BLIND,
    Letter,
    PERFECT,
    ReachabilityIndex,
    blind_letter,
    letters,
    perfect_letter,
    reachable,
    successor,
)
from .synthesize import (
    NotDeterministic,
    ProductChain,
    Strategy,
    extract_sync_word,
    product_chain,
    strategy_from_witness,
)

__all__ = [name for name in dir() if not name.startswith("_")]
