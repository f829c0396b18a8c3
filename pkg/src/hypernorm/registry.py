"""Central registry for verification suites with category-based discovery."""

from collections.abc import Callable
from dataclasses import dataclass
from typing import Any

from pydantic import BaseModel, ValidationError

from .errors import InputError

SuiteHandler = Callable[..., dict[str, Any]]


class SuiteParameter(BaseModel):
    """Schema for a suite parameter."""

    name: str
    type: str  # "integer", "number", "boolean", "list[int]"
    description: str
    required: bool = False
    default: Any = None


class SuiteSchema(BaseModel):
    """Complete schema for a suite."""

    name: str
    description: str
    category: str  # "theorems", "constructions", "bounds", "oracles"
    parameters: list[SuiteParameter]


@dataclass
class SuiteRegistryEntry:
    """A registered suite: its schema, handler and argument model."""

    schema: SuiteSchema
    handler: SuiteHandler
    arg_model: type[BaseModel] | None = None


_TYPE_NAMES = {int: "integer", float: "number", bool: "boolean", str: "string"}


def parameters_from_model(arg_model: type[BaseModel]) -> list[SuiteParameter]:
    """Derive parameter schemas from an argument model's fields."""
    parameters = []
    for name, info in arg_model.model_fields.items():
        annotation = info.annotation
        type_name = _TYPE_NAMES.get(annotation, str(annotation).replace("typing.", ""))  # type: ignore[arg-type]
        parameters.append(
            SuiteParameter(
                name=name,
                type=type_name,
                description=info.description or "",
                required=info.is_required(),
                default=None if info.is_required() else info.default,
            )
        )
    return parameters


class SuiteRegistry:
    """Central registry for all verification suites."""

    def __init__(self) -> None:
        self._suites: dict[str, SuiteRegistryEntry] = {}
        self._categories: dict[str, str] = {
            "theorems": "Constrained versus unconstrained optimum agreement under the symmetry theorems",
            "constructions": "Pointwise checks of the symmetrization, power-mean, Hoelder and sign-flip steps",
            "bounds": "Slice-sum and degree lower bounds against computed spectral radii",
            "oracles": "Brute-force searches, including the counterexample miner for p != 2",
        }

    def register(
        self,
        schema: SuiteSchema,
        handler: SuiteHandler,
        arg_model: type[BaseModel] | None = None,
    ) -> None:
        """Register a suite with its schema and handler."""
        if schema.category not in self._categories:
            raise ValueError(f"Unknown category: {schema.category}")
        self._suites[schema.name] = SuiteRegistryEntry(
            schema=schema,
            handler=handler,
            arg_model=arg_model,
        )

    def execute(self, suite_name: str, arguments: dict[str, Any]) -> dict[str, Any]:
        """Run a suite with validated arguments."""
        entry = self._suites.get(suite_name)

        if not entry:
            available = sorted(self._suites)
            raise InputError(f"Unknown suite: {suite_name}. Available suites: {available}")

        if entry.arg_model:
            try:
                validated = entry.arg_model(**arguments)
            except ValidationError as e:
                raise InputError(f"Invalid arguments: {e}") from e
            return entry.handler(validated)

        return entry.handler(**arguments)

    def list_categories(self) -> list[dict[str, str]]:
        """List all available suite categories with descriptions."""
        return [{"name": name, "description": desc} for name, desc in self._categories.items()]

    def list_suites(self, category: str | None = None) -> list[dict[str, Any]]:
        """List suites, optionally filtered by category."""
        if category is not None and category not in self._categories:
            raise InputError(f"Unknown category: {category}. Available categories: {list(self._categories)}")
        suites: list[dict[str, Any]] = []
        for entry in self._suites.values():
            if category is None or entry.schema.category == category:
                suites.append(
                    {
                        "name": entry.schema.name,
                        "description": entry.schema.description,
                        "category": entry.schema.category,
                        "parameters": [p.model_dump() for p in entry.schema.parameters],
                    }
                )
        return sorted(suites, key=lambda s: (s["category"], s["name"]))


def verification_suite(
    name: str,
    description: str,
    category: str,
    arg_model: type[BaseModel],
    parameters: list[SuiteParameter] | None = None,
) -> Callable[[SuiteHandler], SuiteHandler]:
    """Decorator to register a verification suite with the global registry.

    The handler receives the validated ``arg_model`` instance. Parameter schemas are
    derived from the model unless given explicitly.
    """

    def decorator(func: SuiteHandler) -> SuiteHandler:
        schema = SuiteSchema(
            name=name,
            description=description,
            category=category,
            parameters=parameters if parameters is not None else parameters_from_model(arg_model),
        )
        registry.register(schema, func, arg_model)
        return func

    return decorator


# suites register here on import of hypernorm.suites
registry = SuiteRegistry()
