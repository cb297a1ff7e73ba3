"""Size guards for the exponential-search cores.

Every limit can be overridden through an integer environment variable of the
same name prefixed with ``MEDIANALG_`` (e.g. ``MEDIANALG_MAX_TABLE=128``).
Overriding a limit never changes refusal semantics, only where refusal kicks in.
"""

import os

_DEFAULTS = {
    "MAX_TABLE": 64,            # full n^3 median tables only up to here
    "MAX_INTERVAL_TABLE": 128,  # n^2 interval bitmasks computed by rule
    "MAX_AXIOM_EXHAUSTIVE": 40,  # M3 is an n^5 scan
    "MAX_BRUTE_HALFSPACE": 20,  # 2^(n-1) subset scan
    "MAX_EMBED_K": 5,           # hypercube embedding search
    "MAX_IND_K": 24,            # 2^k sign-pattern cells
    "MAX_VC_GROUND": 24,        # shattering scan ground size
    "MAX_FUN_IND_K": 20,        # function-family cells
    "MAX_TOTAL_VARIATION": 16,  # subalgebra enumeration
    "MAX_CHAIN_FAMILY": 64,     # halfspace-chain DFS family size
    "MAX_AUT_EXHAUSTIVE": 12,   # automorphism backtracking without hints
    "MAX_GROUP_ELEMENTS": 10_000,  # explicit group element lists
}


def get(name: str) -> int:
    """Current value of a named limit, honouring the environment override."""
    if name not in _DEFAULTS:
        raise KeyError(name)
    raw = os.environ.get("MEDIANALG_" + name)
    if raw is None:
        return _DEFAULTS[name]
    return int(raw)


def max_table() -> int:
    return get("MAX_TABLE")


def max_interval_table() -> int:
    return get("MAX_INTERVAL_TABLE")


def max_axiom_exhaustive() -> int:
    return get("MAX_AXIOM_EXHAUSTIVE")


def max_brute_halfspace() -> int:
    return get("MAX_BRUTE_HALFSPACE")


def max_embed_k() -> int:
    return get("MAX_EMBED_K")


def max_ind_k() -> int:
    return get("MAX_IND_K")


def max_vc_ground() -> int:
    return get("MAX_VC_GROUND")


def max_fun_ind_k() -> int:
    return get("MAX_FUN_IND_K")


def max_total_variation() -> int:
    return get("MAX_TOTAL_VARIATION")


def max_chain_family() -> int:
    return get("MAX_CHAIN_FAMILY")


def max_aut_exhaustive() -> int:
    return get("MAX_AUT_EXHAUSTIVE")


def max_group_elements() -> int:
    return get("MAX_GROUP_ELEMENTS")
