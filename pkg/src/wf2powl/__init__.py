"""Translate safe and sound workflow nets into POWL models."""

from .errors import *  # noqa: F401,F403
from .petri import IdFactory, Partition, PetriNet, WorkflowNet, validate_workflow_net
from .powl import (
    LanguageBounds,
    Leaf,
    Loop,
    PartialOrder,
    PowlModel,
    StrictOrder,
    Xor,
    bounded_powl_language,
    canonicalize,
    sequence,
    validate,
)
from .powl_to_net import to_wf_net
from .semantics import ExplorationLimits, Marking, bounded_language, check_safe, check_sound, explore
from .translate import ConvertOptions, ConvertOutcome, convert, convert_verified

__version__ = "0.1.0"
