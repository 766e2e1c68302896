"""Information flow between logics and system consequence over finite institutions."""
from .institution import (
    DEFAULT_BOUND,
    CapExceeded,
    EntailmentReport,
    Institution,
    InstitutionError,
    MorphismMismatch,
    SymbolMap,
    check_satisfaction_invariance,
    colimit_of_finite_sets,
    compose,
)
from .infoflow import IF, Classification, IFLanguage, Infomorphism, Sequent, parse_sequent, seq
from .folf import FOLF, FiniteStructure, RelSignature, parse_formula
from .specflow import (
    Specification,
    consequence,
    direct,
    entails,
    equivalent,
    inverse,
    is_spec_morphism,
    join,
    leq,
    meet,
)
from .logic import (
    IndexedStructure,
    Logic,
    StructureMorphism,
    dir_logic,
    inv_logic,
    inv_sound,
    is_complete,
    is_sound,
    nat,
    res,
)
from .systems import (
    Channel,
    DistributedSystem,
    Edge,
    InformationSystem,
    ShapeGraph,
    fusion,
    is_covering,
    mediator,
    minimal_cover,
    sound_system_consequence,
    system_consequence,
    underlying,
)

__version__ = "0.1.0"
