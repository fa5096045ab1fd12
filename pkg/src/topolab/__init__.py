"""topolab: exact-arithmetic topology laboratory on the Sorgenfrey line.

Everything runs on rationals and ordinal normal forms; there is no floating
point anywhere.  The subpackages cover Lusin schemes and their audits, the
Sorgenfrey interval algebra and pi-bases, certified open maps onto presented
Polish spaces, Choquet-style games, fiber amplification over the Baire
space, and Cantor-Bendixson analysis with closed-open map compilation.
"""

from .finseq import EMPTY, FinSeq
from .seqcore import (
    BaireAlgebra,
    BoundExhausted,
    SchemeAudit,
    SchemeRule,
    baire_standard_base,
    scheme_address,
    validate_strict_lusin,
)
from .sorgenfrey import (
    HalfInterval,
    SOpenSet,
    SorgenfreyAlgebra,
    address,
    decompose_clopen,
    decompose_prefix,
    make_pi_base,
    make_pi_base_with_endpoints,
)
from .polish import (
    Ball,
    BallFamily,
    OpenMap,
    ball_family_audit,
    child_radius,
    enum_point,
    eval_h,
    presentation,
    solve_preimage,
)
from .games import (
    ClosedMarginHalvingII,
    EuclidSpace,
    HalvingChoquetI,
    RandomStrongI,
    Run,
    SorgenfreySpace,
    SorgenfreyStrongII,
    StrictFromChoquetII,
    audit_run,
    play,
)
from .fiber import (
    AmplifierState,
    Certificate,
    Cover,
    ShrinkPiece,
    ShrinkTarget,
    SplitAll,
    SplitFirst,
    amplify,
    check_certificate,
    even_projection,
    initial_cover,
    refine,
    verify_amplifier,
)
from .ordinals import OMEGA, ZERO, OrdinalCNF, fundamental_sequence
from .scattered import (
    CBReport,
    MapLeaf,
    MapNode,
    MapSum,
    OrdinalInterval,
    OrdinalSpace,
    SubSpace,
    build_closed_open_map,
    cantor_scheme,
    cb_analyze,
    eval_map,
    preimage_upper,
    preimage_witness,
    thirds_oracle,
    validate_cantor_scheme,
    verify_map,
)

__version__ = "0.1.0"
