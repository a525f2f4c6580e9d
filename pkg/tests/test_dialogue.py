"""Dialogue flow: the golden conversation, escapes, rejections, random walks."""

from __future__ import annotations

import random

import pytest
from helpers import random_conversation

from icb import Phase, Severity, missing_next, parse, serialize, start, step, validate
from icb.dialogue import DialogueState
from icb.model import IntentionModel


def run_script(turns: list[str]) -> tuple[DialogueState, object]:
    state, turn = start()
    for text in turns:
        state, turn = step(state, text)
    return state, turn


def test_start_prompt_mentions_naming_the_contract():
    _state, turn = start()
    assert "contract" in turn.prompt.lower() and "name" in turn.prompt.lower()


def test_start_draft_is_empty():
    state, _turn = start()
    assert state.draft.participants == ()
    assert state.draft.assets == () and state.draft.transactions == ()
    assert state.phase is Phase.CONTRACT_NAME


def test_two_starts_are_equal():
    assert start()[0] == start()[0]


def test_golden_14_turn_script_reproduces_golden_file(chat_script, golden_source):
    assert len(chat_script) == 14
    state, turn = run_script(chat_script)
    assert state.phase is Phase.DONE
    assert serialize(state.draft) == golden_source
    assert turn.artifact_offer is not None
    assert [a.rel_path for a in turn.artifact_offer] == [
        "contracts/Vehicle_Auction.sol",
        "README.md",
    ]


def test_restart_returns_to_start_anywhere(chat_script):
    fresh = start()[0]
    state, _turn = run_script(chat_script[:7])
    restarted, turn = step(state, "restart")
    assert restarted == fresh
    assert "contract" in turn.prompt.lower()


def test_unrecognized_changes_neither_phase_nor_draft():
    state, _turn = run_script(["I want a contract called X", "ethereum"])
    before = (state.phase, state.draft)
    after, turn = step(state, "fhqwhgads blorp")
    assert (after.phase, after.draft) == before
    assert "add participant" in turn.prompt


def test_help_lists_examples_and_preserves_state():
    state, _turn = run_script(["I want a contract called X"])
    after, turn = step(state, "help")
    assert (after.phase, after.draft) == (state.phase, state.draft)
    assert "restart" in turn.prompt


def test_transcript_appends_user_and_bot_lines():
    state, _turn = start()
    before = len(state.transcript)
    after, _turn = step(state, "call the contract X")
    assert after.transcript[:before] == state.transcript
    assert [s for s, _ in after.transcript[before:]] == ["user", "bot"]


def test_quick_replies_only_for_enum_and_yes_no():
    state, turn = start()
    assert turn.quick_replies is None  # free-text name
    state, turn = step(state, "call the contract X")
    assert turn.quick_replies == ("azure", "hyperledger-fabric", "ethereum")
    state, turn = step(state, "ethereum")
    assert turn.quick_replies is None
    state, turn = step(state, "add participant P")
    assert turn.quick_replies == ("yes", "no")


def test_creator_question_flow():
    state, _ = run_script(["X", "ethereum", "add participant Owner"])
    assert state.phase is Phase.PARTICIPANT_PARAMS and state.awaiting == "creator"
    state, _ = step(state, "yes")
    assert state.draft.participant("Owner").creator is True
    assert state.awaiting == "param"


def test_params_attach_to_focused_participant():
    state, _ = run_script(["X", "ethereum", "add participant Owner", "yes", "balance : integer"])
    params = state.draft.participant("Owner").params
    assert [(p.name, p.ptype.value) for p in params] == [("balance", "integer")]


def test_duplicate_participant_rejected_inline():
    script = ["X", "ethereum", "add participant Owner", "yes", "add participant Owner"]
    state, turn = run_script(script)
    assert len(state.draft.participants) == 1
    assert "already" in turn.prompt


def test_relationship_referencing_unknown_transaction_rejected():
    state, _ = run_script(
        ["X", "ethereum", "add participant Owner", "yes", "done", "done", "add transaction Pay", "done"]
    )
    assert state.phase is Phase.RELATIONSHIPS
    after, turn = step(state, "link Ghost to participant Owner")
    assert after.draft.relationships == ()
    assert "Ghost" in turn.prompt and "Pay" in turn.prompt


def test_relationship_wrong_namespace_rejected():
    state, _ = run_script(
        ["X", "ethereum", "add participant Owner", "yes", "done", "done", "add transaction Pay", "done"]
    )
    after, turn = step(state, "link Pay to asset Owner")
    assert after.draft.relationships == ()
    assert "not a declared asset" in turn.prompt


def test_condition_with_unresolvable_path_rejected():
    script = [
        "X", "ethereum", "add participant Owner", "yes", "done", "done",
        "add transaction Pay", "done", "link Pay to participant Owner", "done",
    ]
    state, _ = run_script(script)
    assert state.phase is Phase.CONDITIONS
    after, turn = step(state, "require Owner.balance >= 10 on Pay")
    assert after.draft.conditions == ()
    assert "does not resolve" in turn.prompt


def test_condition_accepted_when_path_resolves():
    script = [
        "X", "ethereum", "add participant Owner", "yes", "balance : integer", "done",
        "done", "add transaction Pay", "done", "link Pay to participant Owner", "done",
        "require Owner.balance >= 10 on Pay",
    ]
    state, _ = run_script(script)
    assert len(state.draft.conditions) == 1
    assert state.phase is Phase.CONDITIONS


def test_review_routes_back_on_missing_relationship():
    script = ["X", "ethereum", "add participant Owner", "yes", "done", "done",
              "add transaction Pay", "done", "done", "done"]
    state, turn = run_script(script)
    assert state.phase is Phase.RELATIONSHIPS
    assert "Pay" in turn.prompt


def test_review_requires_creator():
    script = ["X", "ethereum", "add participant Owner", "no", "done", "done", "done", "done", "done"]
    state, turn = run_script(script)
    assert state.phase is Phase.PARTICIPANTS
    assert "creator" in turn.prompt


def test_confirm_no_keeps_review_phase(chat_script):
    state, _ = run_script(chat_script[:-1])
    assert state.phase is Phase.REVIEW
    after, turn = step(state, "no")
    assert after.phase is Phase.REVIEW
    assert "yes" in turn.prompt


def test_step_after_done_raises(chat_script):
    state, _ = run_script(chat_script)
    with pytest.raises(ValueError):
        step(state, "hello")


def test_forward_jump_skips_section_dones():
    script = ["X", "ethereum", "add participant Owner", "yes", "add transaction Pay"]
    state, _ = run_script(script)
    assert state.phase is Phase.TRANSACTIONS
    assert state.draft.transaction("Pay") is not None


def test_missing_next_on_empty_draft_asks_for_name():
    state, _ = start()
    prompt = missing_next(state)
    assert prompt is not None and "name" in prompt.lower()


def test_missing_next_names_unlinked_transaction(golden_model):
    from dataclasses import replace

    draft = replace(golden_model, relationships=())
    state = DialogueState(Phase.RELATIONSHIPS, draft, None, None, ())
    prompt = missing_next(state)
    assert "Place-bid" in prompt
    assert "participant" in prompt and "asset" in prompt


def test_missing_next_clean_draft_returns_none(golden_model):
    state = DialogueState(Phase.REVIEW, golden_model, None, None, ())
    assert missing_next(state) is None


def test_500_random_conversations_validate_clean():
    rng = random.Random(424242)
    for index in range(500):
        script = random_conversation(rng)
        state, turn = run_script(script)
        assert state.phase is Phase.DONE, f"conversation {index} stalled: {script}"
        errors = [i for i in validate(state.draft) if i.severity is Severity.ERROR]
        assert errors == [], f"conversation {index}: {errors}"
        assert turn.artifact_offer


def test_progress_bound_on_canonical_conversation(chat_script):
    state, _ = run_script(chat_script)
    entities = (
        len(state.draft.participants)
        + len(state.draft.assets)
        + len(state.draft.transactions)
        + len(state.draft.relationships)
        + len(state.draft.conditions)
    )
    assert len(chat_script) <= 3 + 4 * entities


def test_accepted_intents_mutate_or_advance():
    state, _ = start()
    seen = state
    for text in ["call the contract X", "ethereum", "add participant P", "yes", "done"]:
        after, _ = step(seen, text)
        assert after.draft != seen.draft or after.phase != seen.phase
        seen = after


def test_state_round_trips_through_dict(chat_script):
    state, _ = run_script(chat_script[:9])
    assert DialogueState.from_dict(state.to_dict()) == state
