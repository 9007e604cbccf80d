"""Temporal plan validation, timed automata encoding and witness runs."""

from ._tpta import (  # noqa: F401
    ModelError,
    Network,
    ParseError,
    Plan,
    Problem,
    ResolutionError,
    Run,
    WitnessError,
    build_witness,
    ef_goal,
    encode,
    explore,
    load_run,
    parse_plan,
    run_check,
    validate,
)
