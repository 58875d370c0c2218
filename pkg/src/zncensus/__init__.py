"""Exact census of integers n whose unit group (Z/n)^x avoids a given
finite abelian group, with the matching main-term asymptotics."""

__version__ = "0.1.0"

from .counting import (  # noqa: E402
    Census,
    MertensDiagnostic,
    count_D_m,
    count_D_m_residue,
    count_pi_m,
    count_pi_m_star,
    count_S,
    count_S0,
    count_S_ell,
    count_S_pair,
    cyclic_power,
    mertens_diagnostic,
)
from .groups import (  # noqa: E402
    DomainError,
    FiniteAbelianGroup,
    GatheredSummand,
    GroupSpecError,
    PPartition,
    PrimePower,
    TrivialGroupError,
    dominant_summands,
    embeds,
    gathered_summands,
    p_partition,
    parse_group,
    phi_collision_partner,
    preorder_cmp,
    unit_group,
)
from .identities import IdentityRow, identity_suite  # noqa: E402
from .sieve import SieveCapError, build_spf, unit_group_stream  # noqa: E402

__all__ = [
    "__version__",
    "Census",
    "MertensDiagnostic",
    "count_D_m",
    "count_D_m_residue",
    "count_pi_m",
    "count_pi_m_star",
    "count_S",
    "count_S0",
    "count_S_ell",
    "count_S_pair",
    "cyclic_power",
    "mertens_diagnostic",
    "DomainError",
    "FiniteAbelianGroup",
    "GatheredSummand",
    "GroupSpecError",
    "PPartition",
    "PrimePower",
    "TrivialGroupError",
    "dominant_summands",
    "embeds",
    "gathered_summands",
    "p_partition",
    "parse_group",
    "phi_collision_partner",
    "preorder_cmp",
    "unit_group",
    "IdentityRow",
    "identity_suite",
    "SieveCapError",
    "build_spf",
    "unit_group_stream",
]
