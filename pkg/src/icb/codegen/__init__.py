"""Model-to-text generation of deployment artifacts.

One generator per platform; `generate` dispatches on the model's platform
after checking that validation left no Errors. Output is deterministic:
LF endings, single trailing newline, and a header carrying the tool version
plus a hash of the model's canonical serialization (never a timestamp).
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from enum import Enum
from typing import Any

from ..model import IntentionModel, Platform
from ..serializer import serialize
from ..validation import is_generatable, validate


class ArtifactKind(Enum):
    CONTRACT_SOURCE = "ContractSource"
    MODEL_DEFINITION = "ModelDefinition"
    ACCESS_CONTROL = "AccessControl"
    PLATFORM_CONFIG = "PlatformConfig"
    README = "Readme"


@dataclass(frozen=True)
class GeneratedArtifact:
    rel_path: str
    content: str
    kind: ArtifactKind

    def to_dict(self) -> dict[str, Any]:
        return {"relPath": self.rel_path, "content": self.content, "kind": self.kind.value}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> GeneratedArtifact:
        return cls(rel_path=d["relPath"], content=d["content"], kind=ArtifactKind(d["kind"]))


def model_hash(model: IntentionModel) -> str:
    return hashlib.sha256(serialize(model).encode("utf-8")).hexdigest()[:12]


def generator_stamp(model: IntentionModel) -> str:
    from .. import __version__

    return f"Generated by icb {__version__} (model {model_hash(model)})"


def generate(model: IntentionModel) -> list[GeneratedArtifact]:
    """Produce the artifact set for the model's platform.

    The model must be free of validation Errors; anything else is a caller
    bug and raises ValueError.
    """
    issues = validate(model)
    if not is_generatable(issues):
        errors = [i.render() for i in issues if i.severity.value == "Error"]
        raise ValueError("model has validation errors: " + "; ".join(errors))

    from .azure import generate_azure
    from .composer import generate_composer
    from .ethereum import generate_ethereum

    platform = model.contract.platform
    if platform is Platform.ETHEREUM:
        return generate_ethereum(model)
    if platform is Platform.HYPERLEDGER_FABRIC:
        return generate_composer(model)
    return generate_azure(model)
