"""icb: talk a smart contract into existence.

A dialogue engine elicits a contract specification turn by turn, stores it
as a textual intention DSL, validates it, and generates deployable artifacts
for Azure, Hyperledger Fabric (Composer) or Ethereum.
"""

from .codegen import ArtifactKind, GeneratedArtifact, generate
from .dialogue import BotTurn, DialogueState, Phase, missing_next, start, step
from .intents import IntentDef, IntentMatch, classify, load_intent_table, shipped_intent_table
from .model import (
    Asset,
    Comparison,
    ComparisonOp,
    Condition,
    ContractHeader,
    FieldPath,
    IntentionModel,
    Literal,
    Param,
    ParamType,
    Participant,
    Platform,
    Relationship,
    RelationshipKind,
    Transaction,
)
from .parser import DslSyntaxError, SyntaxIssue, parse
from .serializer import serialize
from .validation import Severity, ValidationIssue, is_generatable, validate

__version__ = "0.1.0"

__all__ = [
    "ArtifactKind",
    "Asset",
    "BotTurn",
    "Comparison",
    "ComparisonOp",
    "Condition",
    "ContractHeader",
    "DialogueState",
    "DslSyntaxError",
    "FieldPath",
    "GeneratedArtifact",
    "IntentDef",
    "IntentMatch",
    "IntentionModel",
    "Literal",
    "Param",
    "ParamType",
    "Participant",
    "Phase",
    "Platform",
    "Relationship",
    "RelationshipKind",
    "Severity",
    "SyntaxIssue",
    "Transaction",
    "ValidationIssue",
    "classify",
    "generate",
    "is_generatable",
    "load_intent_table",
    "missing_next",
    "parse",
    "serialize",
    "shipped_intent_table",
    "start",
    "step",
    "validate",
    "__version__",
]
