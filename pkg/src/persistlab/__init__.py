"""persistlab: persistence probabilities of random walks and their iterated sums.

Exact rational tables for Rademacher steps, reproducible parallel Monte Carlo for
general laws, and checks of the identities and bounds that tie them together.
"""

__version__ = "0.1.0"

from persistlab.distributions import (  # noqa: E402
    DistributionSpec,
    format_spec,
    gaussian,
    laplace,
    parse_spec,
    rademacher,
    shifted_pareto,
)
from persistlab.exact import ExactTable, order1_table, order2_table  # noqa: E402
from persistlab.models import (  # noqa: E402
    BoundReport,
    Estimate,
    PersistlabError,
    ResultRecord,
    Strictness,
)
from persistlab.montecarlo import RunConfig, estimate_persistence, fit_exponent  # noqa: E402
from persistlab.walks import Path  # noqa: E402

__all__ = [
    "__version__",
    "BoundReport",
    "DistributionSpec",
    "Estimate",
    "ExactTable",
    "Path",
    "PersistlabError",
    "ResultRecord",
    "RunConfig",
    "Strictness",
    "estimate_persistence",
    "fit_exponent",
    "format_spec",
    "gaussian",
    "laplace",
    "order1_table",
    "order2_table",
    "parse_spec",
    "rademacher",
    "shifted_pareto",
]
