"""Tests for the core data model: values, choices, snapshots, adaptors."""

import pytest

from multirate import (
    BOT,
    Bot,
    Component,
    EnvChoice,
    ExecutionError,
    IN,
    Leaf,
    OUT,
    Port,
    Status,
    SystemState,
    identity,
    pad_with_bots,
    take_last,
)
from multirate.model import fingerprint


def _leaf(state=0.0, content=()):
    def behavior(s, inputs, period):
        return s, {"out": 0.0}

    return Component(
        "m", 1, 10, (Port("in", IN, tuple(content)), Port("out", OUT)), Leaf(state, behavior)
    )


class TestValues:
    def test_bot_is_singleton(self):
        assert Bot() is BOT
        assert repr(BOT) == "bot"

    def test_status_equality_is_exact(self):
        assert Status(1.0, 2.0, 3.0, 4.0) == Status(1.0, 2.0, 3.0, 4.0)
        assert Status(1.0, 2.0, 3.0, 4.0) != Status(1.0, 2.0, 3.0, 4.0 + 1e-12)

    def test_env_choice_of_coerces_numbers(self):
        c = EnvChoice.of({"input": 60})
        assert c.items() == (("input", (60.0,)),)
        assert c.ports() == {"input"}

    def test_env_choice_ordering_is_canonical(self):
        a = EnvChoice.of({"b": 1.0, "a": 2.0})
        b = EnvChoice.of({"a": 2.0, "b": 1.0})
        assert a == b

    def test_empty_choice_is_falsy(self):
        assert not EnvChoice()
        assert EnvChoice.of({"input": 0.0})


class TestSystemStateEquality:
    def test_equal_trees_compare_equal(self):
        assert SystemState(_leaf()) == SystemState(_leaf())

    def test_elapsed_time_is_ignored(self):
        assert SystemState(_leaf(), 0) == SystemState(_leaf(), 600)
        assert hash(SystemState(_leaf(), 0)) == hash(SystemState(_leaf(), 600))

    def test_state_difference_detected(self):
        assert SystemState(_leaf(state=1.0)) != SystemState(_leaf(state=2.0))

    def test_port_content_difference_detected(self):
        assert SystemState(_leaf(content=(1.0,))) != SystemState(_leaf(content=(2.0,)))
        assert SystemState(_leaf(content=(1.0,))) != SystemState(_leaf(content=(1.0, 1.0)))

    def test_negative_zero_is_identified_with_zero(self):
        # float equality treats -0.0 == 0.0; the key agrees
        assert SystemState(_leaf(state=-0.0)) == SystemState(_leaf(state=0.0))

    def test_bot_and_zero_differ(self):
        assert SystemState(_leaf(content=(BOT,))) != SystemState(_leaf(content=(0.0,)))

    def test_quantized_fingerprint_merges_close_states(self):
        a, b = _leaf(state=1.00004), _leaf(state=1.00006)
        assert fingerprint(a) != fingerprint(b)
        assert fingerprint(a, ndigits=3) == fingerprint(b, ndigits=3)
        assert fingerprint(a, ndigits=7) != fingerprint(b, ndigits=7)

    def test_cleared_input_ports_leave_the_key(self):
        a, b = _leaf(content=(1.0,)), _leaf(content=(2.0,))
        assert fingerprint(a) != fingerprint(b)
        assert fingerprint(a, clear_top_inputs=frozenset({"in"})) == fingerprint(
            b, clear_top_inputs=frozenset({"in"})
        )


class TestAdaptors:
    def test_pad_with_bots(self):
        assert pad_with_bots(4)((5.0,)) == (5.0, BOT, BOT, BOT)

    def test_pad_requires_single_value(self):
        with pytest.raises(ExecutionError):
            pad_with_bots(3)((1.0, 2.0))

    def test_take_last(self):
        assert take_last((1.0, 2.0, 3.0, 4.0)) == (4.0,)

    def test_identity(self):
        assert identity((1.0, BOT)) == (1.0, BOT)


class TestComponentAccessors:
    def test_port_lookup(self):
        c = _leaf()
        assert c.port("in").direction == IN
        with pytest.raises(Exception):
            c.port("nope")

    def test_is_ensemble(self):
        assert not _leaf().is_ensemble
