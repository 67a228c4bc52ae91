"""Opacity verification for partially observed nondeterministic finite
automata: standard and strong current-/initial-state opacity plus strong
infinite-step opacity, decided on observer and synchronized-product
constructions and cross-checked by an independent subset-pair oracle.
"""

from .constructions import (
    CCAutomaton,
    CCState,
    ObserverAutomaton,
    build_cc,
    build_gdss,
    build_ghat,
    build_observer,
)
from .fileformat import (
    AutomatonDocument,
    FormatError,
    export_dot,
    load,
    parse,
    serialize,
)
from .model import (
    Automaton,
    AutomatonWarning,
    Run,
    ValidationError,
    delta_extended,
    enumerate_runs,
    project,
    unobservable_reach,
    validate,
)
from .oracle import (
    MalformedWitness,
    oracle_cso,
    oracle_inf_sso,
    oracle_iso,
    oracle_scso,
    oracle_siso,
    replay_witness,
)
from .verifiers import (
    PROPERTIES,
    Verdict,
    Witness,
    check,
    check_all,
    check_cso,
    check_inf_sso,
    check_iso,
    check_scso,
    check_siso,
    extract_witness,
)

__version__ = "0.1.0"

__all__ = [
    "Automaton",
    "AutomatonDocument",
    "AutomatonWarning",
    "CCAutomaton",
    "CCState",
    "FormatError",
    "MalformedWitness",
    "ObserverAutomaton",
    "PROPERTIES",
    "Run",
    "ValidationError",
    "Verdict",
    "Witness",
    "build_cc",
    "build_gdss",
    "build_ghat",
    "build_observer",
    "check",
    "check_all",
    "check_cso",
    "check_inf_sso",
    "check_iso",
    "check_scso",
    "check_siso",
    "delta_extended",
    "enumerate_runs",
    "export_dot",
    "extract_witness",
    "load",
    "oracle_cso",
    "oracle_inf_sso",
    "oracle_iso",
    "oracle_scso",
    "oracle_siso",
    "parse",
    "project",
    "replay_witness",
    "serialize",
    "unobservable_reach",
    "validate",
]
