"""Exact desk-scale experiments on rich lines in grids, additive energy,
quadruple convolutions of measures and point-line incidences."""

__version__ = "0.1.0"

from .errors import (
    DegenerateGeneratorError,
    DegenerateMeasureError,
    EmptySetError,
    InvalidMeasureError,
    NonInvertibleMapError,
    NotSquareError,
    ParseError,
    RichLinesError,
    SizeMismatchError,
    SlopeMismatchError,
    SupportBlowupError,
    ThresholdTooSmallError,
)
from .incidence import (
    Configuration,
    GeneralLine,
    IncidenceReport,
    count_incidences,
    elekes_experiment,
    representation_as_incidences,
    representation_count,
)
from .lines import (
    AffineMap,
    Line,
    RichnessReport,
    combine,
    compose,
    from_matrix,
    general_position_select,
    inverse,
    richness,
    richness_report,
    same_slope_combine,
    to_matrix,
    x_projection,
    y_projection,
)
from .measure import (
    Caps,
    DyadicDecomposition,
    EnergyReport,
    Measure,
    additive_energy,
    dyadic_decompose,
    energy_identity_check,
    find_translate,
    flattening_report,
    iterate_star,
    star,
    theta_iterate,
)
from .rich import (
    OverlapStats,
    RichFamily,
    Theorem2Report,
    amplify,
    count_two_rich,
    enumerate_rich_lines,
    overlap_pairs,
    theorem2_check,
)
from .scalar import (
    Grid,
    NumberSet,
    differenceset,
    intersect,
    make_ap,
    make_gp,
    make_random,
    productset,
    sumset,
    symmetrize,
    translate,
    union,
)
