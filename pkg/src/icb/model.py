"""Abstract syntax of the intention DSL.

Every value here is immutable; list-like fields are tuples so that models
compare structurally and hash. A model may be *incomplete* (empty contract
name, unset platform, dangling references); completeness is the validator's
business, not the type's. to_dict()/from_dict() give a stable JSON form used
by the session store and the HTTP API.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from decimal import Decimal
from enum import Enum
from typing import Any, Union


class Platform(Enum):
    """Supported deployment targets; values are the DSL spellings."""

    AZURE = "azure"
    HYPERLEDGER_FABRIC = "hyperledger-fabric"
    ETHEREUM = "ethereum"


class ParamType(Enum):
    TEXT = "text"
    INTEGER = "integer"
    DECIMAL = "decimal"
    BOOLEAN = "boolean"
    IDENTITY = "identity"


class RelationshipKind(Enum):
    TRANREL = "tranrel"
    ASSETREL = "assetrel"


class ComparisonOp(Enum):
    EQ = "=="
    NE = "!="
    LT = "<"
    LE = "<="
    GT = ">"
    GE = ">="


@dataclass(frozen=True)
class FieldPath:
    """Dotted reference to a declared attribute, e.g. Owner.balance."""

    segments: tuple[str, ...]

    def __str__(self) -> str:
        return ".".join(self.segments)

    def to_dict(self) -> dict[str, Any]:
        return {"path": list(self.segments)}


@dataclass(frozen=True)
class Literal:
    """Typed constant operand: text, integer, decimal or boolean."""

    value: Union[str, int, Decimal, bool]

    @property
    def kind(self) -> str:
        if isinstance(self.value, bool):
            return "boolean"
        if isinstance(self.value, int):
            return "integer"
        if isinstance(self.value, Decimal):
            return "decimal"
        return "text"

    def to_dict(self) -> dict[str, Any]:
        kind = self.kind
        value: Any = str(self.value) if kind == "decimal" else self.value
        return {"literal": {"kind": kind, "value": value}}


Operand = Union[FieldPath, Literal]


def operand_from_dict(d: dict[str, Any]) -> Operand:
    if "path" in d:
        return FieldPath(tuple(d["path"]))
    lit = d["literal"]
    kind, value = lit["kind"], lit["value"]
    if kind == "decimal":
        return Literal(Decimal(value))
    return Literal(value)


@dataclass(frozen=True)
class Comparison:
    lhs: Operand
    op: ComparisonOp
    rhs: Operand

    def to_dict(self) -> dict[str, Any]:
        return {"lhs": self.lhs.to_dict(), "op": self.op.value, "rhs": self.rhs.to_dict()}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> Comparison:
        return cls(
            lhs=operand_from_dict(d["lhs"]),
            op=ComparisonOp(d["op"]),
            rhs=operand_from_dict(d["rhs"]),
        )


@dataclass(frozen=True)
class Param:
    """Named, typed attribute of a participant, asset or transaction."""

    name: str
    ptype: ParamType

    def to_dict(self) -> dict[str, str]:
        return {"name": self.name, "type": self.ptype.value}

    @classmethod
    def from_dict(cls, d: dict[str, str]) -> Param:
        return cls(name=d["name"], ptype=ParamType(d["type"]))


@dataclass(frozen=True)
class Participant:
    name: str
    creator: bool = False
    params: tuple[Param, ...] = ()

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "creator": self.creator,
            "params": [p.to_dict() for p in self.params],
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> Participant:
        return cls(
            name=d["name"],
            creator=d["creator"],
            params=tuple(Param.from_dict(p) for p in d["params"]),
        )


@dataclass(frozen=True)
class Asset:
    name: str
    fields: tuple[Param, ...] = ()

    def to_dict(self) -> dict[str, Any]:
        return {"name": self.name, "fields": [f.to_dict() for f in self.fields]}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> Asset:
        return cls(name=d["name"], fields=tuple(Param.from_dict(f) for f in d["fields"]))


@dataclass(frozen=True)
class Transaction:
    name: str
    params: tuple[Param, ...] = ()

    def to_dict(self) -> dict[str, Any]:
        return {"name": self.name, "params": [p.to_dict() for p in self.params]}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> Transaction:
        return cls(name=d["name"], params=tuple(Param.from_dict(p) for p in d["params"]))


@dataclass(frozen=True)
class Relationship:
    """Links a transaction to its caller role (tranrel) or the asset it touches (assetrel)."""

    kind: RelationshipKind
    transaction: str
    target: str

    def to_dict(self) -> dict[str, str]:
        return {"kind": self.kind.value, "transaction": self.transaction, "target": self.target}

    @classmethod
    def from_dict(cls, d: dict[str, str]) -> Relationship:
        return cls(
            kind=RelationshipKind(d["kind"]),
            transaction=d["transaction"],
            target=d["target"],
        )


@dataclass(frozen=True)
class Condition:
    """Access guard attached to a transaction: a single binary comparison."""

    transaction: str
    guard: Comparison

    def to_dict(self) -> dict[str, Any]:
        return {"transaction": self.transaction, "guard": self.guard.to_dict()}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> Condition:
        return cls(transaction=d["transaction"], guard=Comparison.from_dict(d["guard"]))


@dataclass(frozen=True)
class ContractHeader:
    name: str = ""
    platform: Platform | None = None

    @property
    def is_complete(self) -> bool:
        return bool(self.name.strip()) and self.platform is not None

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "platform": self.platform.value if self.platform else None,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> ContractHeader:
        platform = Platform(d["platform"]) if d.get("platform") else None
        return cls(name=d["name"], platform=platform)


@dataclass(frozen=True)
class IntentionModel:
    """Root of a contract specification; declaration order is preserved."""

    contract: ContractHeader = field(default_factory=ContractHeader)
    participants: tuple[Participant, ...] = ()
    assets: tuple[Asset, ...] = ()
    transactions: tuple[Transaction, ...] = ()
    relationships: tuple[Relationship, ...] = ()
    conditions: tuple[Condition, ...] = ()

    def participant(self, name: str) -> Participant | None:
        return next((p for p in self.participants if p.name == name), None)

    def asset(self, name: str) -> Asset | None:
        return next((a for a in self.assets if a.name == name), None)

    def transaction(self, name: str) -> Transaction | None:
        return next((t for t in self.transactions if t.name == name), None)

    def replace_participant(self, name: str, updated: Participant) -> IntentionModel:
        participants = tuple(updated if p.name == name else p for p in self.participants)
        return replace(self, participants=participants)

    def replace_asset(self, name: str, updated: Asset) -> IntentionModel:
        assets = tuple(updated if a.name == name else a for a in self.assets)
        return replace(self, assets=assets)

    def to_dict(self) -> dict[str, Any]:
        return {
            "contract": self.contract.to_dict(),
            "participants": [p.to_dict() for p in self.participants],
            "assets": [a.to_dict() for a in self.assets],
            "transactions": [t.to_dict() for t in self.transactions],
            "relationships": [r.to_dict() for r in self.relationships],
            "conditions": [c.to_dict() for c in self.conditions],
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> IntentionModel:
        return cls(
            contract=ContractHeader.from_dict(d["contract"]),
            participants=tuple(Participant.from_dict(p) for p in d["participants"]),
            assets=tuple(Asset.from_dict(a) for a in d["assets"]),
            transactions=tuple(Transaction.from_dict(t) for t in d["transactions"]),
            relationships=tuple(Relationship.from_dict(r) for r in d["relationships"]),
            conditions=tuple(Condition.from_dict(c) for c in d["conditions"]),
        )
