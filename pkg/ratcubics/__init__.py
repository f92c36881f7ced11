from __future__ import annotations

from .ratcubics_types import (
    Config,
    RatCubicsError,
    PreconditionError,
    NotARationalMapError,
    DegenerateParameterError,
    RecordFormatError,
    EmptyClassError,
)
from .forms import (
    BinaryForm,
    MobiusMap,
    RationalMap3,
    transvectant,
    act,
    resultant,
    conjugate_map,
    associated_pair,
    inverse_associated,
    fixed_point_form,
    rational_fixed_points,
)
from .invariants import (
    XiTuple,
    WeightedPoint,
    AbsoluteInvariants,
    xi_explicit,
    xi_via_transvectants,
    i6_from_xi,
    j6,
    j6_from_xi,
    syzygy_residual,
    absolute_invariants,
    normalize_weighted,
    coordinate_height,
    weighted_height,
    weighted_points_equal,
)
from .aut import (
    AutLabel,
    LocusResiduals,
    family_representative,
    locus_residuals,
    c3_family_match,
    classify,
)
from .dataset import (
    EnumerationConfig,
    DatasetRecord,
    DatasetStats,
    Enumerator,
    enumerate_maps,
    build_record,
    write_jsonl,
    read_jsonl,
    write_csv,
    read_csv,
    stats,
)
from .ml import (
    FeatureMatrix,
    RandomForest,
    ClassMetrics,
    ForestExperiment,
    featurize,
    class_weights,
    stratified_split,
    train_forest,
    evaluate,
)
