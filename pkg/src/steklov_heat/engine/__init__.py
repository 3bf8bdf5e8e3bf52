from .algebra import (
    NORMAL,
    DimensionError,
    Direction,
    GaussianRational,
    JetIndeterminate,
    Nor,
    SymbolSum,
    SymbolTerm,
    Tan,
    Xi,
    diff,
    inv_metric,
    log_vol,
    metric,
    mul,
)
from .recursion import (
    AuditReport,
    MissingOrderError,
    build_operator_data,
    clear_caches,
    dtn_hat_symbols,
    dtn_symbols,
    parametrix_for_dimension,
    parametrix_symbols,
    structure_audit,
)
