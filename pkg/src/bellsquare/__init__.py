"""Exact simulator and analyzer for the two-observer magic-square
demonstration of Bell's theorem."""

from .classical import (
    Game,
    GameValueReport,
    NoCommonPanel,
    check_coloring,
    classical_game_value,
    element_of_reality_trace,
    enumerate_colorings,
)
from .experiment import (
    BatchReport,
    Color,
    Fixed,
    PanelGrid,
    RoundRecord,
    RowsForAliceColsForBob,
    UniformRandom,
    no_signaling_check,
    run_batch,
    run_round,
    verify_correlation,
    verify_parity,
)
from .quantum import (
    ATOL,
    Observable,
    Party,
    Pauli,
    StateVector,
    commutes,
    embed_observable,
    expectation,
    measure,
    source_state,
)
from .magic_square import (
    MagicSquare,
    NotScalar,
    Setting,
    Variant,
    biorthogonal_decomposition_check,
    product_check,
    setting_observables,
    simultaneous_eigenbasis,
    square,
)

__version__ = "0.1.0"
