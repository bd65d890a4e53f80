"""Greedy grammar extraction and the exact decoder.

Each iteration scores every known rule by its predicted nodes-per-bit
ratio, extracts one cheapest occurrence of the winner (edge edits first,
then collapse to the smallest member id), and incrementally refreshes the
occurrence index around the nodes the extraction disturbed.  The records
written along the way replay in reverse to reproduce the input bit for
bit.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .enumeration import (
    ConfigInvalid,
    EnumState,
    ExtractConfig,
    affected_nodes,
    enumerate_connected_sets,
    update_after_extraction,
)
from .graphs import DiGraph
from .mdl import (
    BitAccount,
    CostLevel,
    b_application,
    b_graph,
    b_rule,
    boundary_patterns,
    default_params,
    edit_cost,
    pcr,
)
from .rules import RuleLibrary, apply_rule, canonical_form, from_node_set, rule_from_code


class StaleCandidate(Exception):
    """The occurrence index disagreed with the graph at extraction time."""


class CorruptRecord(Exception):
    """A replay step referenced ids or edges inconsistent with the graph."""


@dataclass(frozen=True)
class ApplicationRecord:
    """One accepted extraction, sufficient to invert it.

    ``node_ids[p]`` is the original node id standing at canonical fragment
    position ``p``.  ``edits`` are edge toggles ``(position, external,
    direction)`` applied immediately before the collapse; ``direction`` is
    ``"in"`` for external -> fragment.  ``boundary`` and ``multi_boundary``
    snapshot the pre-edit externals for incremental-update bookkeeping and
    are not needed for decoding.
    """

    rule_id: int
    node_ids: tuple[int, ...]
    edits: tuple[tuple[int, int, str], ...]
    boundary: frozenset[int] = frozenset()
    multi_boundary: frozenset[int] = frozenset()

    @property
    def survivor(self) -> int:
        return min(self.node_ids)

    @property
    def freed_ids(self) -> tuple[int, ...]:
        s = self.survivor
        return tuple(sorted(v for v in self.node_ids if v != s))


@dataclass
class ExtractionResult:
    grammar: RuleLibrary
    records: list[ApplicationRecord]
    residual: DiGraph
    account: BitAccount
    rule_stats: dict[int, dict]
    config: ExtractConfig
    iterations: int = 0
    runtime_seconds: float = 0.0


@dataclass(frozen=True)
class Choice:
    rule_id: int
    code: bytes
    value: Fraction
    nodes: tuple[int, ...]
    pair: tuple[int, int]
    cost: int


def _cost_table(levels: dict[int, set[tuple[int, ...]]]) -> list[CostLevel]:
    table = []
    for c in sorted(levels):
        sets = levels[c]
        table.append(CostLevel(c, len(sets), sum(len(t) for t in sets)))
    return table


def select_best(
    state: EnumState, library: RuleLibrary, n0: int
) -> Optional[Choice]:
    """Highest predicted nodes-per-bit rule plus one cheapest occurrence.

    Ties break toward the cheaper occurrence, then the smaller fragment,
    then the older rule id, then the lexicographically smallest node set.
    """
    best: Optional[tuple] = None
    for code, levels in state.tables.items():
        rid = library.index[code]
        k = code[0]
        params = default_params(k, n0, library.frequency[rid] > 0)
        table = _cost_table(levels)
        value, _ = pcr(table, params)
        min_cost = table[0].c
        key = (-value, min_cost, k, rid)
        if best is None or key < best[0]:
            occurrence = min(levels[min_cost])
            best = (key, Choice(rid, code, value, occurrence, (0, 0), min_cost))
    if best is None:
        return None
    choice = best[1]
    entry = state.entries[choice.nodes]
    pair = entry.pairs[entry.codes.index(choice.code)]
    return Choice(choice.rule_id, choice.code, choice.value, choice.nodes, pair, choice.cost)


def extract_one(graph: DiGraph, choice: Choice, library: RuleLibrary) -> ApplicationRecord:
    """Apply the chosen occurrence in place and return its replay record."""
    nodes = choice.nodes
    i_mask, o_mask = choice.pair
    in_pats, out_pats = boundary_patterns(graph, nodes)
    boundary = frozenset(u for u, _ in in_pats) | frozenset(w for w, _ in out_pats)
    counts: dict[int, int] = {}
    for u, pat in in_pats:
        counts[u] = counts.get(u, 0) + pat.bit_count()
    for w, pat in out_pats:
        counts[w] = counts.get(w, 0) + pat.bit_count()
    multi = frozenset(v for v, c in counts.items() if c >= 2)
    cost, edits = edit_cost(graph, nodes, i_mask, o_mask)
    if cost != choice.cost:
        raise StaleCandidate(
            f"occurrence {nodes} scored {choice.cost} but costs {cost} now"
        )
    rule = from_node_set(graph, nodes, i_mask, o_mask)
    _, perm = canonical_form(rule)
    node_ids = tuple(nodes[old] for old in perm)
    set_pos = {v: p for p, v in enumerate(nodes)}
    canon_pos = {old: new for new, old in enumerate(perm)}
    packed = []
    for e in edits:
        if e.src in set_pos:
            packed.append((canon_pos[set_pos[e.src]], e.dst, "out"))
        else:
            packed.append((canon_pos[set_pos[e.dst]], e.src, "in"))
        graph.apply_edit(e)
    graph.collapse(set(nodes))
    return ApplicationRecord(
        choice.rule_id, node_ids, tuple(packed), boundary, multi
    )


def _mdl_worthwhile(value: Fraction, graph: DiGraph) -> bool:
    """Extraction pays off while its bits per removed node stay below the
    residual encoding's bits per node."""
    n, m = graph.num_nodes(), graph.num_edges()
    if n == 0:
        return False
    return value >= Fraction(n, b_graph(n, m))


def extract(graph: DiGraph, config: ExtractConfig) -> ExtractionResult:
    started = time.perf_counter()
    g = graph.copy()
    n0 = g.n0
    if n0 < 1:
        raise ConfigInvalid("cannot extract from an empty graph")
    original_edges = g.num_edges()
    library = RuleLibrary()
    state = EnumState()
    probe = lambda nodes: state.register(g, nodes, library)
    for _ in enumerate_connected_sets(g, config, cost_probe=probe):
        pass
    records: list[ApplicationRecord] = []
    rule_stats: dict[int, dict] = {}
    while True:
        choice = select_best(state, library, n0)
        if choice is None:
            break
        if config.mdl_stop and not _mdl_worthwhile(choice.value, g):
            break
        record = extract_one(g, choice, library)
        library.record_extraction(choice.rule_id)
        records.append(record)
        stats = rule_stats.setdefault(
            choice.rule_id, {"frequency": 0, "cost_histogram": {}, "edges_edited": 0}
        )
        stats["frequency"] += 1
        hist = stats["cost_histogram"]
        hist[choice.cost] = hist.get(choice.cost, 0) + 1
        stats["edges_edited"] += len(record.edits)
        affected = affected_nodes(g, record)
        affected |= record.boundary
        affected |= set(record.freed_ids)
        update_after_extraction(state, g, affected, config, library)
    account = BitAccount(
        original_bits=b_graph(n0, original_edges),
        rule_bits=sum(
            b_rule(library.rules[rid].k, n0)
            for rid in range(len(library))
            if library.frequency[rid] > 0
        ),
        application_bits=realized_application_bits(records, library, n0),
        residual_bits=b_graph(g.num_nodes(), g.num_edges()),
    )
    return ExtractionResult(
        grammar=library,
        records=records,
        residual=g,
        account=account,
        rule_stats=rule_stats,
        config=config,
        iterations=len(records),
        runtime_seconds=time.perf_counter() - started,
    )


def realized_application_bits(
    records: list[ApplicationRecord], library: RuleLibrary, n0: int
) -> int:
    bits = 0
    previous = None
    for record in records:
        k = library.rules[record.rule_id].k
        bits += b_application(
            k, len(record.edits), n0, same_rule_as_previous=record.rule_id == previous
        )
        previous = record.rule_id
    return bits


def decode(result: ExtractionResult) -> DiGraph:
    """Reconstruct the original graph from an extraction result."""
    return replay(result.residual, result.records, result.grammar)


def replay(
    residual: DiGraph, records: list[ApplicationRecord], library: RuleLibrary
) -> DiGraph:
    """Replay records newest first, regrowing each collapsed fragment and
    then re-toggling its recorded edits."""
    g = residual.copy()
    for record in reversed(records):
        try:
            rule = rule_from_code(library.codes[record.rule_id])
        except IndexError as exc:
            raise CorruptRecord(f"unknown rule id {record.rule_id}") from exc
        try:
            apply_rule(g, record.survivor, rule, record.node_ids)
            for position, external, direction in record.edits:
                member = record.node_ids[position]
                if direction == "in":
                    g.toggle_edge(external, member)
                elif direction == "out":
                    g.toggle_edge(member, external)
                else:
                    raise CorruptRecord(f"bad edit direction {direction!r}")
        except CorruptRecord:
            raise
        except Exception as exc:
            raise CorruptRecord(f"replay failed at rule {record.rule_id}: {exc}") from exc
    return g
