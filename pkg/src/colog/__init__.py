"""Branching-recurrence game semantics, cirquent calculus proof checking,
and proof-to-strategy synthesis with adversarial simulation."""

from .bits import InfBits, defusion, fuse_inf, fusions, is_prefix, ones, shortlex, zeros
from .syntax import (
    And,
    Atom,
    CCoRec,
    CRec,
    Cirquent,
    Formula,
    NegAtom,
    OldCCoRec,
    OldCRec,
    Or,
    UCoRec,
    URec,
    clubsuit,
    negate,
    parse_cirquent,
    parse_formula,
    serialize_cirquent,
    serialize_formula,
    validate_cirquent,
)
from .kernel import (
    BOT,
    TOP,
    BTStructure,
    CirquentGame,
    FiniteAtomGame,
    Labmove,
    Player,
    Run,
    bt_structure,
    enumeration_game,
    is_delay,
    legal_extension,
    legal_run,
    negate_run,
    parse_run,
    format_run,
    project_cell,
    project_thread,
    strip_prefix,
    thread_class_reps,
    winner,
)
from .calculus import (
    Proof,
    ProofStep,
    check_formula_proof,
    check_proof,
    check_step,
    parse_proof,
    serialize_proof,
)
from .machines import (
    Environment,
    MachineStrategy,
    SilentMachine,
    SimConfig,
    compose_modus_ponens,
    random_legal_environment,
    scripted_environment,
    simulate,
)
from .strategies import (
    CATALOG,
    CounterstrategyLoop,
    catalog_game,
    catalog_machine,
    equivalence_game,
    equivalence_machine,
    formula_adapter,
    synthesize,
    synthesize_formula,
    transform_rule,
)

__version__ = "0.1.0"
