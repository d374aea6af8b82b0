"""Covering numbers, Hewitt-Stromberg premeasures and dimension estimates for
exactly described subsets of the unit interval and square."""
from .covering import (
    BallCoverCertificate,
    BallFamily,
    CubeCoverResult,
    ExactCapError,
    PackingResult,
    ResourceCapError,
    ball_cover,
    cover_ball_by_smaller,
    cover_cube_by_balls,
    cube_count,
    packing_number,
)
from .estimators import BallCoveringDimension, CubeCountingDimension
from .measures import (
    DimensionEstimate,
    LiminfEstimate,
    PremeasureProfile,
    estimate_dimension,
    harmonic_deltas,
    liminf_value,
    premeasure_profile,
)
from .serialize import SchemaError, model_from_json, model_to_json, schedule_from_json, schedule_to_json
from .sets import (
    AffineImage,
    DigitSet,
    FinitePoints,
    HarmonicTail,
    InexactBaseError,
    Product,
    Schedule,
    ScheduleError,
    cell_intersects,
    sample_points,
    schedule_to_digit_sets,
)
from .verify import (
    ClaimReport,
    check_ball_lemma,
    check_comparison,
    check_example_section6,
    check_harmonic_K,
    check_product_inequality,
    check_projection_lemma,
    run_suite,
)

__version__ = "0.1.0"
