"""Message constants for errors and user-facing reports."""

# Distribution messages
SPEC_UNKNOWN = (
    "Unknown distribution '{text}'. "
    "Use rademacher, gaussian:<sigma>, laplace:<lambda> or pareto:<alpha>."
)
SPEC_BAD_PARAMETER = "Invalid parameter '{value}' for distribution '{tag}'."
SPEC_SIGMA_POSITIVE = "Gaussian sigma must be positive, got {value}."
SPEC_LAMBDA_POSITIVE = "Laplace lambda must be positive, got {value}."
SPEC_ALPHA_RANGE = "Pareto alpha must lie strictly between 1 and 2, got {value}."
SPEC_NEGATIVE_T = "Tail arguments must be non-negative, got t={value}."
SPEC_DEGENERATE_TAIL = "P(-X1 > {r}) is zero for {spec}; alpha = -log P(-X1 > r) is undefined."
SPEC_NOT_SYMMETRIC = "{spec} is not symmetric; the identity requires a symmetric law."
SPEC_NO_CERTIFIED_PARAMS = "No certified decay parameters for {spec}."

# Decay assumption messages
DECAY_THETA_R = "Decay parameters need theta * r > 1, got theta={theta}, r={r}."
DECAY_NEGATIVE_KL = "Decay constants K and L must be non-negative, got K={K}, L={L}."
DECAY_R_POSITIVE = "Decay parameter r must be positive, got {r}."
DECAY_ALPHA_POSITIVE = "Derived alpha must be positive and finite, got {alpha}."
DECAY_GRID_POSITIVE = "Grid points must be strictly positive."
DECAY_NON_FINITE = "Non-finite tail evaluation at t={t}, s={s}."

# Path messages
PATH_EMPTY = "A path needs at least one increment."
PATH_NON_FINITE = "Path increments must be finite."
PATH_INDEX_RANGE = "Index k={k} outside the allowed range {lo}..{hi}."
PATH_TOO_SHORT = "Path of length {length} is too short; need at least {minimum} increments."
PATH_SUM_MISMATCH = "Iterated sum formulas disagree at index {k}: {a} != {b}."
PATH_EMPTY_VALUES = "Cannot take the argmax of an empty sequence."

# Exact table messages
TABLE_N_RANGE = "n_max={n} outside the supported range 0..{cap} for order {order}."
TABLE_ORDER = "Order must be 1 or 2, got {order}."
TABLE_INDEX = "n={n} exceeds the table's n_max={n_max}."
TABLE_ORDER_MISMATCH = "Expected an order-{expected} table, got order {got}."
TABLE_BRUTE_FORCE_N = "Brute force enumeration supports n <= {cap}, got {n}."
TABLE_THRESHOLD = "Exact thresholds must be non-negative integers, got {y}."
TABLE_THRESHOLD_POSITIVE = "Level comparisons need an integer level y >= 1, got {y}."
TABLE_STEPS = "The number of level steps k must be a positive integer, got {k}."

# Monte Carlo messages
MC_PATHS_POSITIVE = "paths must be at least 1, got {paths}."
MC_THRESHOLD_NEGATIVE = "threshold y must be non-negative, got {y}."
MC_N_NEGATIVE = "n must be non-negative, got {n}."
MC_WORKERS_POSITIVE = "workers must be at least 1, got {workers}."
MC_MARGINAL_RANGE = "marginal identity needs 2 <= k <= n, got k={k}, n={n}."
MC_BLOCK_FAILED = "Simulation block {index} failed: {error}"
MC_ORDER = "order must be 1 or 2, got {order}."
MC_CONVOLUTION_KIND = "Convolution kind must be 'mixed' or 'strict', got '{kind}'."
MC_CORPUS_RANGE = "Path lengths must satisfy 3 <= n_min <= n_max, got {n_min}..{n_max}."
MC_CHAIN_N = "The upper chain needs n >= 3, got {n}."

# Budget messages
BUDGET_EXCEEDED = "Requested {steps} path-steps exceeds the budget of {budget}."
BUDGET_MEMORY = (
    "Block working set of {need_mb:.1f} MB exceeds available memory ({available_mb:.1f} MB)."
)
BUDGET_NOT_INITIALIZED = "Step budget not initialized. Call init_step_budget() first."

# Fit messages
FIT_TOO_FEW_POINTS = "Need at least 3 usable points for an exponent fit, got {count}."
FIT_NON_POSITIVE = "Fit points must have positive estimates and n >= 1."

# Bound messages
BOUND_MISSING_INPUT = "Missing bound input: {name}."
BOUND_NON_POSITIVE = "{name} must be positive, got {value}."
BOUND_NOT_CERTIFIED = "Decay assumption not certified for {spec}; the lower bound does not apply."

# Gaussian comparison messages
COV_ORDERING = "Covariance arguments need m >= k >= 1, got k={k}, m={m}."
IBM_DT_RANGE = "dt must lie in (0, 0.05], got {dt}."
IBM_T_MULTIPLE = "T={T} is not a multiple of dt={dt}."
IBM_T_POSITIVE = "T must be positive, got {T}."

# CLI messages
CLI_N_LIST_INVALID = "Invalid n list '{text}'. Use '64,256' or a doubling range '64..8192'."
CLI_FLOAT_LIST_INVALID = "Invalid number list '{text}'."
CLI_EXACT_RESIDUAL = "Nonzero exact residual at n={n}: {value}"
CLI_SANDWICH_FAILED = "Double factorial sandwich fails at n in {ns}."
CLI_LEVEL_COMPARISON_FAILED = "Level comparison against y={y} fails (chain broken at n in {ns})."
CLI_BOUND_FAILED = "Bound {inequality} failed at n={n}: lhs={lhs} rhs={rhs}"
CLI_INPUT_EMPTY = "Input file {path} holds no persistence estimates."
CLI_FIT_OUTSIDE = "Fitted gamma {gamma:.4f} is not within {tolerance} of {expect}."
CLI_IBM_EXPECT_HORIZONS = "--expect needs at least three horizons in --T, got {count}."
CLI_EXACT_NEEDS_RADEMACHER = "--exact needs --dist rademacher, got {spec}."
CLI_DECAY_PARAMS = "Give all of --K, --L, --theta and --r, or none of them."
CLI_DECAY_FAILED = (
    "Decay assumption violated for {spec}: max violation {violation:.3e} at t={t:g}, s={s:g}."
)
CLI_CONFIG_NAME = "Unknown configuration '{name}'."
