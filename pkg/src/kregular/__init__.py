"""Polynomial-generated sequences, k-kernel witnesses, and Hankel determinants of powers of two."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    CorruptRepresentation,
    DefinitionError,
    HorizonExhausted,
    HorizonTooSmall,
    InconsistentSystem,
    KRegularError,
    NotWithinCaps,
    ProbeInapplicable,
    UnderdeterminedSystem,
    UsageError,
)
from .seq_core import (  # noqa: E402
    Sequence,
    SequencePolynomial,
    TruncatedSequence,
    apply_poly,
    builtin,
    combine,
    prefix,
    scale,
    shift,
)
from .polygen import GeneratedRule, GeneratedSystem, construct, linear_system, resolve, verify_rules  # noqa: E402
