"""Walsh-spectral analysis of the von Mangoldt function on {0,1}^n.

Public surface: cube vectors and transforms (`cube`), the sieved table
and its correlation sums (`arithmetic`), the bit-clearing smoother and
its spectrum identity (`smoothing`), the monotone zoo (`monotone`),
report-level analysis (`analysis`), the disk cache (`cache`), and the
self-verification suite (`verify`).  `cli.main` backs the
`walshprime` console script.
"""

from .analysis import (
    CoefficientCheck,
    CorrelationReport,
    LowLevelMassReport,
    TrendTable,
    classify_trend,
    correlation_report,
    degree_pattern_checks,
    low_level_mass,
    trend_table,
)
from .arithmetic import (
    DEFAULT_SEGMENT_SIZE,
    PairCorrelation,
    PairCorrelationMax,
    VonMangoldtTable,
    chebyshev_psi,
    pair_correlation,
    pair_correlation_max,
    sieve_von_mangoldt,
)
from .cache import (
    MAGIC,
    VERSION,
    default_cache_path,
    fnv1a64,
    read_vector,
    write_vector,
)
from .config import RunConfig, max_n_for_memory
from .cube import (
    DEFAULT_MAX_N,
    CubeVector,
    InnerProduct,
    LevelProfile,
    Spectrum,
    check_dimension,
    inner_product,
    level_profile,
    popcounts,
    wht_forward,
    wht_inverse,
)
from .errors import (
    CacheFormatError,
    CapacityError,
    ConfigError,
    DegenerateInputError,
    WalshPrimeError,
)
from .monotone import (
    DEFAULT_ZOO_SPECS,
    FAMILIES,
    InfluenceIdentity,
    MonotoneFunctionSpec,
    MonotonicityVerdict,
    TailReport,
    default_zoo,
    influence_identity_check,
    materialize,
    monotonicity_check,
    parse_spec,
    tail_report,
)
from .smoothing import (
    MeanConstantCheck,
    SmoothedMoments,
    mean_constant_check,
    smooth_von_mangoldt,
    smoothed_moments,
    smoothed_spectrum_via_identity,
)
from .verify import CheckResult, VerificationReport, run_verification

__version__ = "0.1.0"
