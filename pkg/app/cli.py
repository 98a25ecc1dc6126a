"""
Command-line surface: `python -m app.cli <command>`.

Every command prints one JSON document on stdout; logs go to stderr.
Exit codes: 0 success, 2 budget exceeded, 3 malformed input.
"""
import functools
import json
import sys
from contextlib import nullcontext
from pathlib import Path
from typing import Optional

import click
from pydantic import ValidationError

from app import operations
from app.config import Settings
from app.database import session_scope
from app.demos import DEMOS, run_demo
from app.exactgeom import BudgetExceededError
from app.logger import logger
from app.scenario import Scenario
from app.schemas import (
    BehaviourModel,
    ClassifyRequest,
    DemoResultModel,
    InseparabilityRequest,
    JointRequest,
    MembershipRequest,
    ScenarioModel,
    VerticesRequest,
)
from app.utils.serialization import decimal_output

EXIT_BUDGET = 2
EXIT_INPUT = 3

FAMILIES = click.Choice(["e", "bell", "ns", "pd"])


def _load_json(path: Path) -> dict:
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ValueError(f"{path} is not valid JSON: {e}") from e


def _scenario(scenario_file: Optional[Path], shape: Optional[str], outputs: int) -> ScenarioModel:
    """A scenario from a JSON file, or from a shape like "2,2" (parties A, B, ..., inputs "1", "2", ...)."""
    if scenario_file is not None:
        return ScenarioModel.model_validate(_load_json(scenario_file))
    if not shape:
        raise ValueError("Give --scenario FILE or --shape")
    try:
        counts = [int(k) for k in shape.split(",")]
    except ValueError as e:
        raise ValueError(f"Bad shape {shape!r}") from e
    return ScenarioModel.from_domain(Scenario.uniform(counts, outputs))


def _collection(text: Optional[str]) -> Optional[dict[str, list[str]]]:
    """Parse "A=1,2;B=" into {"A": ["1", "2"], "B": []}, or load that mapping from a JSON file."""
    if text is None:
        return None
    path = Path(text)
    if path.is_file():
        loaded = _load_json(path)
        if not isinstance(loaded, dict):
            raise ValueError(f"{path} must hold a mapping from parties to inputs")
        return {str(p): [str(x) for x in xs] for p, xs in loaded.items()}
    mapping: dict[str, list[str]] = {}
    for part in filter(None, text.split(";")):
        party, _, inputs = part.partition("=")
        mapping[party.strip()] = [x.strip() for x in inputs.split(",") if x.strip()]
    return mapping


scenario_options = [
    click.option("--scenario", "scenario_file", type=click.Path(exists=True, dir_okay=False, path_type=Path),
                 help="Scenario JSON file."),
    click.option("--shape", help="Input counts per party, e.g. 2,2,2."),
    click.option("--outputs", default=2, show_default=True, help="Outputs per input with --shape."),
]


def with_scenario(func):
    for option in reversed(scenario_options):
        func = option(func)
    return func


def _behaviour(argument: Optional[Path], option: Optional[Path]) -> BehaviourModel:
    if (argument is None) == (option is None):
        raise ValueError("Give the behaviour file either as an argument or with --behaviour")
    return BehaviourModel.model_validate(_load_json(argument or option))


behaviour_input = [
    click.argument("behaviour_file", required=False, type=click.Path(exists=True, dir_okay=False, path_type=Path)),
    click.option("--behaviour", "behaviour_option", type=click.Path(exists=True, dir_okay=False, path_type=Path),
                 help="Behaviour JSON file (scenario and table)."),
]


def with_behaviour(func):
    for decorator in reversed(behaviour_input):
        func = decorator(func)
    return func


class Context:
    def __init__(self, budget: Optional[int], collection_budget: Optional[int], pretty: bool, cache: Optional[str]):
        self.budget = budget
        self.collection_budget = collection_budget
        self.pretty = pretty
        self.cache = cache

    def session(self):
        return nullcontext() if self.cache is None else session_scope(self.cache)

    def emit(self, payload) -> None:
        if hasattr(payload, "model_dump"):
            payload = payload.model_dump()
        click.echo(json.dumps(payload, indent=2 if self.pretty else None, ensure_ascii=False))


def _guarded(func):
    """Turn domain errors into exit codes."""
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except BudgetExceededError as e:
            logger.error(f"{e} (partial count {e.partial})")
            sys.exit(EXIT_BUDGET)
        except (ValueError, ValidationError) as e:
            logger.error(str(e))
            sys.exit(EXIT_INPUT)

    return wrapper


@click.group()
@click.option("--threads", type=int, default=None, help="Worker threads (default: THREADS setting).")
@click.option("--budget", type=int, default=None, help="Vertex budget (default: VERTEX_BUDGET setting).")
@click.option("--collection-budget", type=int, default=None,
              help="Collections walked by classify (default: COLLECTION_BUDGET setting).")
@click.option("--pretty/--json", default=False, help="Indent the JSON output.")
@click.option("--decimal", is_flag=True, help="Print rationals as decimals.")
@click.option("--cache", is_flag=False, flag_value=Settings.DATABASE_URL, default=None,
              help="Cache enumerations in a database (default: DATABASE_URL).")
@click.pass_context
def cli(ctx: click.Context, threads, budget, collection_budget, pretty, decimal, cache):
    """Partially deterministic polytopes of Bell scenarios."""
    if threads is not None:
        previous = Settings.THREADS
        Settings.THREADS = threads
        ctx.call_on_close(lambda: setattr(Settings, "THREADS", previous))
    token = decimal_output.set(decimal)
    ctx.call_on_close(lambda: decimal_output.reset(token))
    ctx.obj = Context(budget, collection_budget, pretty, cache)


@cli.command()
@with_scenario
@click.pass_obj
@_guarded
def scenario(obj: Context, scenario_file, shape, outputs):
    """Dimensions of a scenario."""
    obj.emit(operations.dimensions(_scenario(scenario_file, shape, outputs)))


@cli.command()
@with_scenario
@click.option("--family", type=FAMILIES, default="bell", show_default=True)
@click.option("--collection", help='M′ for --family pd: inline like "A=1;B=" or a JSON file.')
@click.pass_obj
@_guarded
def vertices(obj: Context, scenario_file, shape, outputs, family, collection):
    """Vertices of E, B, NS or PD(S, M′)."""
    request = VerticesRequest(
        scenario=_scenario(scenario_file, shape, outputs), family=family,
        collection=_collection(collection), budget=obj.budget,
    )
    with obj.session() as db:
        obj.emit(operations.vertices(request, db))


@cli.command()
@with_scenario
@click.option("--family", type=FAMILIES, default="bell", show_default=True)
@click.option("--collection", help='M′ for --family pd: inline like "A=1;B=" or a JSON file.')
@click.pass_obj
@_guarded
def facets(obj: Context, scenario_file, shape, outputs, family, collection):
    """Facet inequalities of E, B, NS or PD(S, M′)."""
    request = VerticesRequest(
        scenario=_scenario(scenario_file, shape, outputs), family=family,
        collection=_collection(collection), budget=obj.budget,
    )
    with obj.session() as db:
        obj.emit(operations.facets(request, db))


@cli.command()
@with_behaviour
@click.option("--family", type=FAMILIES, default="bell", show_default=True)
@click.option("--collection", help='M′ for --family pd: inline like "A=1;B=" or a JSON file.')
@click.pass_obj
@_guarded
def member(obj: Context, behaviour_file, behaviour_option, family, collection):
    """Membership of a behaviour (JSON with scenario and table) in a polytope."""
    request = MembershipRequest(
        behaviour=_behaviour(behaviour_file, behaviour_option),
        family=family, collection=_collection(collection), budget=obj.budget,
    )
    obj.emit(operations.member(request))


@cli.command()
@with_behaviour
@click.option("--subset", "subsets", multiple=True, help='Party subset, e.g. "A,B"; repeat. Default: singletons.')
@click.pass_obj
@_guarded
def witness(obj: Context, behaviour_file, behaviour_option, subsets):
    """Inseparability witnesses of a behaviour."""
    request = InseparabilityRequest(
        behaviour=_behaviour(behaviour_file, behaviour_option),
        subsets=[s.split(",") for s in subsets] or None, budget=obj.budget,
    )
    obj.emit(operations.inseparability(request))


@cli.command()
@with_behaviour
@click.option("--family", type=FAMILIES, default=None, help="Decompose over this family.")
@click.option("--collection", help='M′ for --family pd: inline like "A=1;B=" or a JSON file.')
@click.pass_obj
@_guarded
def joint(obj: Context, behaviour_file, behaviour_option, family, collection):
    """Fine joint distribution of a behaviour."""
    request = JointRequest(
        behaviour=_behaviour(behaviour_file, behaviour_option),
        family=family, collection=_collection(collection), budget=obj.budget,
    )
    obj.emit(operations.joint(request))


@cli.command()
@with_scenario
@click.pass_obj
@_guarded
def classify(obj: Context, scenario_file, shape, outputs):
    """Equivalence classes of PD(S, M′) over all input collections."""
    request = ClassifyRequest(scenario=_scenario(scenario_file, shape, outputs), budget=obj.collection_budget)
    with obj.session() as db:
        obj.emit(operations.classify(request, db))


@cli.command()
@click.argument("name", type=click.Choice(sorted(DEMOS)))
@click.pass_obj
@_guarded
def demo(obj: Context, name):
    """Run a worked example; exits 1 if any check fails."""
    result = run_demo(name)
    obj.emit(DemoResultModel.from_domain(result))
    if not result.passed:
        sys.exit(1)


if __name__ == "__main__":
    cli()
