"""Turn-by-turn elicitation of an intention model.

The conversation walks a fixed phase order (contract name, platform,
participants (with a creator question and optional parameters per
participant), assets (with fields), transactions, relationships, conditions,
review) and builds the draft model as it goes. `done` exits the current
section; naming an entity from a later section (e.g. `add asset Vehicle`
while still adding participants) advances implicitly. `restart` and `help`
work everywhere.

Referential mistakes (linking an unknown transaction, duplicating a name)
are rejected on the spot; everything else is checked in bulk when the
conversation reaches review, which routes back to the offending section on
errors. States are immutable; step() returns a new one.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

from .codegen import GeneratedArtifact, generate
from .intents import UNRECOGNIZED, classify
from .model import (
    Asset,
    Comparison,
    ComparisonOp,
    Condition,
    ContractHeader,
    FieldPath,
    IntentionModel,
    Param,
    ParamType,
    Participant,
    Platform,
    Relationship,
    RelationshipKind,
    Transaction,
)
from .parser import parse_operand_text
from .validation import Severity, ValidationIssue, resolve_field_path, validate


class Phase(Enum):
    GREETING = "Greeting"
    CONTRACT_NAME = "ContractName"
    PLATFORM = "Platform"
    PARTICIPANTS = "Participants"
    PARTICIPANT_PARAMS = "ParticipantParams"
    ASSETS = "Assets"
    ASSET_FIELDS = "AssetFields"
    TRANSACTIONS = "Transactions"
    RELATIONSHIPS = "Relationships"
    CONDITIONS = "Conditions"
    REVIEW = "Review"
    GENERATE = "Generate"
    DONE = "Done"


@dataclass(frozen=True)
class DialogueState:
    phase: Phase
    draft: IntentionModel
    focus: str | None
    awaiting: str | None
    transcript: tuple[tuple[str, str], ...]

    def to_dict(self) -> dict:
        return {
            "phase": self.phase.value,
            "draft": self.draft.to_dict(),
            "focus": self.focus,
            "awaiting": self.awaiting,
            "transcript": [list(t) for t in self.transcript],
        }

    @classmethod
    def from_dict(cls, d: dict) -> DialogueState:
        return cls(
            phase=Phase(d["phase"]),
            draft=IntentionModel.from_dict(d["draft"]),
            focus=d["focus"],
            awaiting=d["awaiting"],
            transcript=tuple((s, t) for s, t in d["transcript"]),
        )


@dataclass(frozen=True)
class BotTurn:
    prompt: str
    quick_replies: tuple[str, ...] | None = None
    artifact_offer: tuple[GeneratedArtifact, ...] | None = None


START_PROMPT = (
    "Hi! Let's specify a smart contract together. "
    "What name should the contract have?"
)

_PLATFORM_CHOICES = tuple(p.value for p in Platform)

# entry intents for each section, in flow order; naming one from an earlier
# section closes the current loop and jumps forward
_SECTION_ORDER = (
    (Phase.PARTICIPANTS, "add_participant"),
    (Phase.ASSETS, "add_asset"),
    (Phase.TRANSACTIONS, "add_transaction"),
    (Phase.RELATIONSHIPS, "add_relationship"),
    (Phase.CONDITIONS, "add_condition"),
)

_NEXT_SECTION = {
    Phase.PARTICIPANTS: Phase.ASSETS,
    Phase.PARTICIPANT_PARAMS: Phase.ASSETS,
    Phase.ASSETS: Phase.TRANSACTIONS,
    Phase.ASSET_FIELDS: Phase.TRANSACTIONS,
    Phase.TRANSACTIONS: Phase.RELATIONSHIPS,
    Phase.RELATIONSHIPS: Phase.CONDITIONS,
    Phase.CONDITIONS: Phase.REVIEW,
}

_EXAMPLES = {
    Phase.CONTRACT_NAME: "`create a contract called Vehicle Auction` (or just the name)",
    Phase.PLATFORM: "`ethereum`, `azure` or `hyperledger-fabric`",
    Phase.PARTICIPANTS: "`add participant Owner`, or `done` to move on",
    Phase.ASSETS: "`add asset Vehicle`, or `done`",
    Phase.ASSET_FIELDS: "`vin: text`, `add asset Garage`, or `done`",
    Phase.TRANSACTIONS: "`add transaction Place-bid`, or `done`",
    Phase.RELATIONSHIPS: (
        "`link Place-bid to participant Bidder`, "
        "`link Place-bid to asset Vehicle`, or `done`"
    ),
    Phase.CONDITIONS: "`require Owner.balance >= 100 on Withdraw`, or `done`",
    Phase.REVIEW: "`yes` to generate, `no` to hold off",
}


def _section_of(phase: Phase) -> Phase:
    if phase is Phase.PARTICIPANT_PARAMS:
        return Phase.PARTICIPANTS
    if phase is Phase.ASSET_FIELDS:
        return Phase.ASSETS
    return phase


def _forward_entries(phase: Phase) -> set[str]:
    section = _section_of(phase)
    sections = [s for s, _ in _SECTION_ORDER]
    if section not in sections:
        return set()
    index = sections.index(section)
    return {intent for s, intent in _SECTION_ORDER[index + 1 :]}


def candidates(state: DialogueState) -> set[str]:
    """Intent ids live in the current phase (restart/help are always live)."""
    phase = state.phase
    if phase is Phase.CONTRACT_NAME:
        return {"create_contract"}
    if phase is Phase.PLATFORM:
        return {"choose_platform"}
    if phase is Phase.PARTICIPANT_PARAMS and state.awaiting == "creator":
        return {"mark_creator"}
    if phase is Phase.REVIEW:
        return {"confirm"}
    base = {"done_section"} | _forward_entries(phase)
    if phase in (Phase.PARTICIPANTS, Phase.PARTICIPANT_PARAMS):
        base.add("add_participant")
    if phase is Phase.PARTICIPANT_PARAMS:
        base.add("add_param")
    if phase in (Phase.ASSETS, Phase.ASSET_FIELDS):
        base.add("add_asset")
    if phase is Phase.ASSET_FIELDS:
        base.add("add_param")
    if phase is Phase.TRANSACTIONS:
        base.add("add_transaction")
    if phase is Phase.RELATIONSHIPS:
        base.add("add_relationship")
    if phase is Phase.CONDITIONS:
        base.add("add_condition")
    return base


def _examples_for(state: DialogueState) -> str:
    if state.phase is Phase.PARTICIPANT_PARAMS:
        if state.awaiting == "creator":
            return "`yes` or `no`"
        return "`balance: integer`, `add participant Bidder`, or `done`"
    return _EXAMPLES.get(state.phase, "`restart`")


def _replies_for(state: DialogueState) -> tuple[str, ...] | None:
    """Quick replies exist exactly when the awaited answer is enum/yes-no."""
    if state.phase is Phase.PLATFORM:
        return _PLATFORM_CHOICES
    if state.phase is Phase.PARTICIPANT_PARAMS and state.awaiting == "creator":
        return ("yes", "no")
    if state.phase is Phase.REVIEW:
        return ("yes", "no")
    return None


def start() -> tuple[DialogueState, BotTurn]:
    state = DialogueState(
        phase=Phase.CONTRACT_NAME,
        draft=IntentionModel(),
        focus=None,
        awaiting=None,
        transcript=(("bot", START_PROMPT),),
    )
    return state, BotTurn(START_PROMPT)


def step(state: DialogueState, user_text: str) -> tuple[DialogueState, BotTurn]:
    """Apply one user turn; returns the successor state and the bot's reply."""
    if state.phase is Phase.DONE:
        raise ValueError("the conversation is finished; start a new session")

    match = classify(user_text, candidates(state))

    if match.intent == "restart":
        return start()
    if match.intent == "help":
        prompt = (
            f"You can say things like: {_examples_for(state)}. "
            "`restart` and `help` work anytime."
        )
        return _reply(state, user_text, prompt)
    if match.intent == UNRECOGNIZED:
        prompt = f"Sorry, I did not catch that. Try: {_examples_for(state)}."
        return _reply(state, user_text, prompt)

    handler = _HANDLERS[match.intent]
    return handler(state, user_text, match.slots)


def missing_next(state: DialogueState) -> str | None:
    """Prompt for the first unmet requirement, or None when the draft is clean."""
    errors = [i for i in validate(state.draft) if i.severity is Severity.ERROR]
    if not errors:
        return None
    return _issue_prompt(errors[0])


# --------------------------------------------------------------------------
# turn plumbing
# --------------------------------------------------------------------------


def _reply(
    state: DialogueState,
    user_text: str,
    prompt: str,
    artifacts: tuple[GeneratedArtifact, ...] | None = None,
    **changes,
) -> tuple[DialogueState, BotTurn]:
    new_state = replace(
        state,
        transcript=state.transcript + (("user", user_text), ("bot", prompt)),
        **changes,
    )
    return new_state, BotTurn(prompt, _replies_for(new_state), artifacts)


def _known(names: list[str]) -> str:
    return ", ".join(f'"{n}"' for n in names) if names else "none yet"


# --------------------------------------------------------------------------
# intent handlers
# --------------------------------------------------------------------------


def _on_create_contract(state, user_text, slots):
    name = slots["name"]
    draft = replace(state.draft, contract=ContractHeader(name=name, platform=state.draft.contract.platform))
    if draft.contract.platform is not None:  # re-entered via review routing
        prompt = f'Renamed the contract to "{name}". Which platform should it run on?'
    else:
        prompt = f'Alright, "{name}" it is. Which platform should it run on?'
    return _reply(state, user_text, prompt, draft=draft, phase=Phase.PLATFORM)


def _on_choose_platform(state, user_text, slots):
    platform = Platform(slots["platform"])
    draft = replace(state.draft, contract=replace(state.draft.contract, platform=platform))
    prompt = (
        f"Targeting {platform.value}. Who takes part in the contract? "
        "Add one with `add participant Owner`."
    )
    return _reply(state, user_text, prompt, draft=draft, phase=Phase.PARTICIPANTS)


def _on_add_participant(state, user_text, slots):
    name = slots["name"]
    if state.draft.participant(name) is not None:
        prompt = f'There is already a participant called "{name}". Pick another name, or say done.'
        return _reply(state, user_text, prompt)
    draft = replace(state.draft, participants=state.draft.participants + (Participant(name),))
    prompt = f'Is "{name}" the contract creator (the account that deploys it)?'
    return _reply(
        state,
        user_text,
        prompt,
        draft=draft,
        phase=Phase.PARTICIPANT_PARAMS,
        focus=name,
        awaiting="creator",
    )


def _on_mark_creator(state, user_text, slots):
    answer = slots["creator"] == "yes"
    participant = state.draft.participant(state.focus)
    draft = state.draft.replace_participant(state.focus, replace(participant, creator=answer))
    word = "the creator" if answer else "a regular participant"
    prompt = (
        f'Noted, "{state.focus}" is {word}. Add a parameter for it '
        "(like `balance: integer`), add another participant, or say done."
    )
    return _reply(state, user_text, prompt, draft=draft, awaiting="param")


def _on_add_param(state, user_text, slots):
    name, ptype = slots["name"], ParamType(slots["ptype"])
    param = Param(name=name, ptype=ptype)
    if state.phase is Phase.ASSET_FIELDS:
        asset = state.draft.asset(state.focus)
        if any(f.name == name for f in asset.fields):
            prompt = f'"{state.focus}" already has a field called "{name}".'
            return _reply(state, user_text, prompt)
        draft = state.draft.replace_asset(state.focus, replace(asset, fields=asset.fields + (param,)))
        prompt = (
            f'Added field "{name}" ({ptype.value}) to "{state.focus}". '
            "More fields, another asset, or done."
        )
    else:
        participant = state.draft.participant(state.focus)
        if any(p.name == name for p in participant.params):
            prompt = f'"{state.focus}" already has a parameter called "{name}".'
            return _reply(state, user_text, prompt)
        draft = state.draft.replace_participant(
            state.focus, replace(participant, params=participant.params + (param,))
        )
        prompt = (
            f'Added parameter "{name}" ({ptype.value}) to "{state.focus}". '
            "More parameters, another participant, or done."
        )
    return _reply(state, user_text, prompt, draft=draft)


def _on_add_asset(state, user_text, slots):
    name = slots["name"]
    if state.draft.asset(name) is not None:
        prompt = f'There is already an asset called "{name}". Pick another name, or say done.'
        return _reply(state, user_text, prompt)
    draft = replace(state.draft, assets=state.draft.assets + (Asset(name),))
    prompt = (
        f'Added asset "{name}". Describe it with fields like `vin: text`, '
        "add another asset, or say done."
    )
    return _reply(
        state,
        user_text,
        prompt,
        draft=draft,
        phase=Phase.ASSET_FIELDS,
        focus=name,
        awaiting="field",
    )


def _on_add_transaction(state, user_text, slots):
    name = slots["name"]
    if state.draft.transaction(name) is not None:
        prompt = f'There is already a transaction called "{name}". Pick another name, or say done.'
        return _reply(state, user_text, prompt)
    draft = replace(state.draft, transactions=state.draft.transactions + (Transaction(name),))
    prompt = f'Added transaction "{name}". Add another, or say done to link them.'
    return _reply(
        state,
        user_text,
        prompt,
        draft=draft,
        phase=Phase.TRANSACTIONS,
        focus=None,
        awaiting=None,
    )


def _on_add_relationship(state, user_text, slots):
    kind = RelationshipKind(slots["kind"])
    transaction, target = slots["transaction"], slots["target"]
    draft = state.draft
    if draft.transaction(transaction) is None:
        prompt = (
            f'I do not know a transaction called "{transaction}". '
            f"Declared transactions: {_known([t.name for t in draft.transactions])}."
        )
        return _reply(state, user_text, prompt)
    if kind is RelationshipKind.TRANREL and draft.participant(target) is None:
        prompt = (
            f'"{target}" is not a declared participant. '
            f"Participants: {_known([p.name for p in draft.participants])}."
        )
        return _reply(state, user_text, prompt)
    if kind is RelationshipKind.ASSETREL and draft.asset(target) is None:
        prompt = (
            f'"{target}" is not a declared asset. '
            f"Assets: {_known([a.name for a in draft.assets])}."
        )
        return _reply(state, user_text, prompt)
    rel = Relationship(kind=kind, transaction=transaction, target=target)
    if rel in draft.relationships:
        prompt = f'"{transaction}" is already linked to "{target}".'
        return _reply(state, user_text, prompt)
    draft = replace(draft, relationships=draft.relationships + (rel,))
    word = "participant" if kind is RelationshipKind.TRANREL else "asset"
    prompt = (
        f'Linked "{transaction}" to {word} "{target}". '
        "Add another link, a condition, or say done."
    )
    return _reply(
        state,
        user_text,
        prompt,
        draft=draft,
        phase=Phase.RELATIONSHIPS,
        focus=None,
        awaiting=None,
    )


def _on_add_condition(state, user_text, slots):
    draft = state.draft
    transaction = slots["transaction"]
    if draft.transaction(transaction) is None:
        prompt = (
            f'I do not know a transaction called "{transaction}". '
            f"Declared transactions: {_known([t.name for t in draft.transactions])}."
        )
        return _reply(state, user_text, prompt)
    lhs = parse_operand_text(slots["lhs"])
    rhs = parse_operand_text(slots["rhs"])
    if lhs is None or rhs is None:
        prompt = (
            "I could not read that comparison. Use field paths like `Owner.balance` "
            "or literals like `100`, `1.5`, `true` or `\"open\"`."
        )
        return _reply(state, user_text, prompt)
    if not isinstance(lhs, FieldPath) and not isinstance(rhs, FieldPath):
        prompt = "At least one side of the condition must be a field path like `Owner.balance`."
        return _reply(state, user_text, prompt)
    for operand in (lhs, rhs):
        if isinstance(operand, FieldPath) and resolve_field_path(draft, operand) is None:
            prompt = (
                f"`{operand}` does not resolve to a declared parameter or field. "
                "Field paths look like `Owner.balance`."
            )
            return _reply(state, user_text, prompt)
    guard = Comparison(lhs=lhs, op=ComparisonOp(slots["op"]), rhs=rhs)
    draft = replace(draft, conditions=draft.conditions + (Condition(transaction=transaction, guard=guard),))
    prompt = f'Condition recorded on "{transaction}". Add another, or say done to review.'
    return _reply(
        state,
        user_text,
        prompt,
        draft=draft,
        phase=Phase.CONDITIONS,
        focus=None,
        awaiting=None,
    )


def _on_done_section(state, user_text, slots):
    next_phase = _NEXT_SECTION.get(state.phase)
    if next_phase is Phase.REVIEW:
        return _enter_review(state, user_text)
    prompts = {
        Phase.ASSETS: (
            "Participants noted. What assets are involved? "
            "Add one with `add asset Vehicle`, or say done if there are none."
        ),
        Phase.TRANSACTIONS: (
            "Now the transactions. Add one with `add transaction Place-bid`, or say done."
        ),
        Phase.RELATIONSHIPS: (
            "Link each transaction to its caller or to what it touches, e.g. "
            "`link Place-bid to participant Bidder` or `link Place-bid to asset "
            "Vehicle`. Say done when finished."
        ),
        Phase.CONDITIONS: (
            "Any access conditions? e.g. `require Owner.balance >= 100 on Withdraw`. "
            "Say done to review."
        ),
    }
    return _reply(
        state,
        user_text,
        prompts[next_phase],
        phase=next_phase,
        focus=None,
        awaiting=None,
    )


def _enter_review(state, user_text):
    issues = validate(state.draft)
    errors = [i for i in issues if i.severity is Severity.ERROR]
    warnings = [i for i in issues if i.severity is Severity.WARNING]
    if errors:
        listing = "\n".join(f"- {i.message}" for i in errors)
        target = _route_phase(state.draft, errors[0])
        prompt = (
            f"I found problems that need fixing first:\n{listing}\n"
            f"Let's sort the first one out. {_issue_prompt(errors[0])}"
        )
        return _reply(state, user_text, prompt, phase=target, focus=None, awaiting=None)
    warning_block = ""
    if warnings:
        warning_block = "\n" + "\n".join(f"- warning: {i.message}" for i in warnings)
    prompt = (
        f"Your specification is complete: 0 errors, {len(warnings)} warning(s)."
        f"{warning_block}\nGenerate the {state.draft.contract.platform.value} artifacts now?"
    )
    return _reply(state, user_text, prompt, phase=Phase.REVIEW, focus=None, awaiting=None)


def _on_confirm(state, user_text, slots):
    if slots["answer"] != "yes":
        prompt = (
            "No problem. Say yes whenever you are ready to generate, "
            "or restart to begin again."
        )
        return _reply(state, user_text, prompt)
    artifacts = tuple(generate(state.draft))
    paths = ", ".join(a.rel_path for a in artifacts)
    prompt = (
        f"All set! Generated {len(artifacts)} file(s): {paths}. "
        "They are ready to download. Say restart to begin a new contract."
    )
    return _reply(
        state,
        user_text,
        prompt,
        artifacts=artifacts,
        phase=Phase.DONE,
        focus=None,
        awaiting=None,
    )


_HANDLERS = {
    "create_contract": _on_create_contract,
    "choose_platform": _on_choose_platform,
    "add_participant": _on_add_participant,
    "mark_creator": _on_mark_creator,
    "add_param": _on_add_param,
    "add_asset": _on_add_asset,
    "add_transaction": _on_add_transaction,
    "add_relationship": _on_add_relationship,
    "add_condition": _on_add_condition,
    "done_section": _on_done_section,
    "confirm": _on_confirm,
}


# --------------------------------------------------------------------------
# review routing and requirement prompts
# --------------------------------------------------------------------------


def _route_phase(model: IntentionModel, issue: ValidationIssue) -> Phase:
    if issue.rule == "V1":
        return Phase.CONTRACT_NAME if not model.contract.name.strip() else Phase.PLATFORM
    if issue.rule == "V2":
        return Phase.PARTICIPANTS
    if issue.rule in ("V4", "V5"):
        return Phase.RELATIONSHIPS
    if issue.rule == "V6":
        return Phase.CONDITIONS
    for prefix, phase in (
        ("participants", Phase.PARTICIPANTS),
        ("assets", Phase.ASSETS),
        ("transactions", Phase.TRANSACTIONS),
        ("contract", Phase.CONTRACT_NAME),
    ):
        if issue.path.startswith(prefix):
            return phase
    return Phase.PARTICIPANTS


def _issue_prompt(issue: ValidationIssue) -> str:
    if issue.rule == "V1" and "name" in issue.message:
        return "The contract still needs a name. What should it be called?"
    if issue.rule == "V1":
        return "Pick a platform for the contract: azure, hyperledger-fabric or ethereum."
    if issue.rule == "V2" and "creator" in issue.message:
        return "Mark one participant as the contract creator (add one and answer yes)."
    if issue.rule == "V2":
        return "Add at least one participant, e.g. `add participant Owner`."
    if issue.rule == "V4":
        return f"{issue.message}; add one with `link <transaction> to participant <name>`."
    return issue.message
