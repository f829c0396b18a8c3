"""Tests for the verification-suite registry and its discovery listing."""

import pytest
from pydantic import BaseModel, ConfigDict, Field

import hypernorm.suites  # noqa: F401
from hypernorm.errors import InputError
from hypernorm.registry import SuiteRegistry, SuiteSchema, parameters_from_model, registry


class EchoArgs(BaseModel):
    model_config = ConfigDict(extra="forbid")

    cases: int = Field(default=3, ge=1, description="How many")
    label: str = Field(description="A name")


def _echo(args: EchoArgs) -> dict:
    return {"cases": args.cases, "label": args.label}


@pytest.fixture
def local_registry() -> SuiteRegistry:
    reg = SuiteRegistry()
    schema = SuiteSchema(
        name="echo",
        description="Echo the arguments",
        category="constructions",
        parameters=parameters_from_model(EchoArgs),
    )
    reg.register(schema, _echo, EchoArgs)
    return reg


def test_execute_validates_arguments(local_registry):
    assert local_registry.execute("echo", {"label": "x", "cases": "5"}) == {"cases": 5, "label": "x"}


def test_invalid_arguments(local_registry):
    with pytest.raises(InputError, match="Invalid arguments"):
        local_registry.execute("echo", {"label": "x", "cases": 0})
    with pytest.raises(InputError, match="Invalid arguments"):
        local_registry.execute("echo", {"label": "x", "colour": "red"})


def test_unknown_suite(local_registry):
    with pytest.raises(InputError, match="Unknown suite: nope"):
        local_registry.execute("nope", {})


def test_unknown_category_rejected_on_register():
    reg = SuiteRegistry()
    schema = SuiteSchema(name="x", description="", category="misc", parameters=[])
    with pytest.raises(ValueError, match="Unknown category"):
        reg.register(schema, _echo)


def test_parameters_from_model():
    params = {p.name: p for p in parameters_from_model(EchoArgs)}
    assert params["cases"].type == "integer"
    assert params["cases"].default == 3
    assert not params["cases"].required
    assert params["label"].required
    assert params["label"].description == "A name"


def test_listing(local_registry):
    names = [c["name"] for c in local_registry.list_categories()]
    assert names == ["theorems", "constructions", "bounds", "oracles"]
    assert [s["name"] for s in local_registry.list_suites("constructions")] == ["echo"]
    assert local_registry.list_suites("bounds") == []
    with pytest.raises(InputError, match="Unknown category"):
        local_registry.list_suites("misc")


def test_global_registry_has_every_suite():
    names = {s["name"] for s in registry.list_suites()}
    assert names == {
        "th2p",
        "thr2",
        "thrp",
        "corp",
        "symmetrization",
        "power-mean",
        "holder",
        "sign-flip",
        "bounds",
        "counterexample",
    }
    assert {s["name"] for s in registry.list_suites("theorems")} == {"th2p", "thr2", "thrp", "corp"}
    assert [s["name"] for s in registry.list_suites("oracles")] == ["counterexample"]
