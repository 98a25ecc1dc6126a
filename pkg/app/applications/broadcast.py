"""
Broadcast-local behaviour sets: a classical source whose outputs reach the parties in
I_L directly and reach each broadcasting block through a no-signalling channel.
"""
from __future__ import annotations

from typing import Iterable, Sequence

from app.logger import logger

from app.polytopes import bell_vertices, ns_vertices, pd_vertices
from app.product import compose_blocks
from app.scenario import InputCollection, Scenario, ScenarioError, restrict_scenario
from app.vertexset import Family, VertexSet


def broadcast_local_vertices(
    scenario: Scenario,
    local: Iterable[str] = (),
    blocks: Sequence[Iterable[str]] | None = None,
    budget: int | None = None,
    threads: int | None = None
) -> VertexSet:
    """
    Vertices of the broadcast-local set.

    Args:
        scenario (Scenario): S.
        local (Iterable[str]): I_L, parties measuring the source directly.
        blocks (Sequence[Iterable[str]] | None): Partition of the remaining parties into
            broadcasting blocks. None means a single broadcaster for all of them.
        budget (int | None): Vertex budget.
        threads (int | None): Fan-out width for the set products.

    Returns:
        VertexSet: PD(S, M^{I_L}) without blocks; otherwise the folded product of
        B(S^{I_L}) with NS(S^{B}) for every block B.

    Raises:
        ScenarioError: If blocks overlap, meet I_L, or fail to cover the other parties.
    """
    local = frozenset(local)
    unknown = local - set(scenario.parties)
    if unknown:
        raise ScenarioError(f"Unknown parties {sorted(unknown)}")
    rest = [p for p in scenario.parties if p not in local]

    if blocks is None:
        result = pd_vertices(scenario, InputCollection.of_parties(scenario, local), budget)
        return result.tagged(Family.COMPOSED, result.collection)

    block_sets = [frozenset(b) for b in blocks]
    seen: set[str] = set()
    for block in block_sets:
        if not block:
            raise ScenarioError("Broadcasting blocks must be nonempty")
        if block & seen or block & local:
            raise ScenarioError("Broadcasting blocks overlap each other or the local parties")
        seen |= block
    if seen != set(rest):
        raise ScenarioError("Broadcasting blocks must cover every non-local party")

    parts = []
    if local:
        collection = InputCollection.of_parties(scenario, local)
        parts.append((collection, bell_vertices(restrict_scenario(scenario, collection), budget)))
    for block in block_sets:
        collection = InputCollection.of_parties(scenario, block)
        parts.append((collection, ns_vertices(restrict_scenario(scenario, collection), budget)))
    if len(parts) == 1:
        return parts[0][1].tagged(Family.COMPOSED)
    result = compose_blocks(scenario, parts, threads)
    logger.info(f"Broadcast-local set with {len(block_sets)} blocks has {len(result)} vertices")
    return result
