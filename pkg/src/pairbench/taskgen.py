"""Procedural generators for the paired benchmark families.

Each paired family builds one underlying plan and renders it twice: as a code
snippet (via the dsl module) and as a short narrative. Ground truth for the
code side comes from executing the program; the narrative side is evaluated
independently by simulating the plan, so the two can be cross-checked.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path
from typing import Union

from . import algolib
from .dsl import (
    AddAssign,
    AndAssign,
    Assign,
    Init,
    LoopBlock,
    MultiInit,
    OrAssign,
    Program,
    SimpleStmt,
    Stmt,
    SubAssign,
    Var,
    critical_path_length,
    execute,
    parse_source,
    render_source,
)

SCHEMA_VERSION = 1


class InfeasibleParams(ValueError):
    """Raised when the requested parameters cannot produce a valid instance."""


class TaskFamily(Enum):
    STRAIGHT_LINE = "straight-line"
    CRITICAL_PATH = "critical-path"
    PARALLEL_PATHS = "parallel-paths"
    NESTED_LOOPS = "nested-loops"
    SORTING = "sorting"
    APPROXIMATE_LOOPS = "approximate-loops"
    FAULT_TOLERANT = "fault-tolerant"


PAIRED_FAMILIES = (
    TaskFamily.STRAIGHT_LINE,
    TaskFamily.CRITICAL_PATH,
    TaskFamily.PARALLEL_PATHS,
    TaskFamily.NESTED_LOOPS,
    TaskFamily.SORTING,
)

OP_GROUPS = ("add_sub", "mov", "and_or")

# (name, subject pronoun, matching form of "to have"); pronouns are fixed
# attributes of the vocabulary entries, used only for narrative grammar.
AGENT_TABLE: tuple[tuple[str, str, str], ...] = (
    ("Alice", "she", "has"), ("Bob", "he", "has"), ("Carol", "she", "has"),
    ("Dana", "they", "have"), ("Evan", "he", "has"), ("Fiona", "she", "has"),
    ("George", "he", "has"), ("Hana", "she", "has"), ("Ivan", "he", "has"),
    ("Julia", "she", "has"), ("Kevin", "he", "has"), ("Lena", "she", "has"),
    ("Marco", "he", "has"), ("Nora", "she", "has"), ("Oscar", "he", "has"),
    ("Priya", "she", "has"), ("Quinn", "they", "have"), ("Rosa", "she", "has"),
    ("Sam", "they", "have"), ("Tara", "she", "has"), ("Umar", "he", "has"),
    ("Vera", "she", "has"), ("Wendy", "she", "has"), ("Xavier", "he", "has"),
    ("Yusuf", "he", "has"), ("Zoe", "she", "has"), ("Aaron", "he", "has"),
    ("Bella", "she", "has"), ("Carlos", "he", "has"), ("Daria", "she", "has"),
    ("Eli", "they", "have"), ("Farid", "he", "has"), ("Greta", "she", "has"),
    ("Hugo", "he", "has"), ("Ines", "she", "has"), ("Jonas", "he", "has"),
)

GOOD_TABLE: tuple[tuple[str, str], ...] = (
    ("apple", "apples"), ("orange", "oranges"), ("coin", "coins"),
    ("marble", "marbles"), ("book", "books"), ("pencil", "pencils"),
    ("stone", "stones"), ("card", "cards"), ("shell", "shells"),
    ("button", "buttons"),
)

CONTAINER_TABLE: tuple[tuple[str, str], ...] = (
    ("warehouse", "warehouses"), ("room", "rooms"), ("shelf", "shelves"),
    ("box", "boxes"), ("crate", "crates"), ("bag", "bags"),
    ("pouch", "pouches"), ("packet", "packets"), ("bundle", "bundles"),
)

OBJECT_NOUNS: tuple[tuple[str, str], ...] = (
    ("parcel", "parcels"), ("stone", "stones"), ("crate", "crates"),
    ("melon", "melons"), ("brick", "bricks"),
)


@dataclass(frozen=True)
class GenParams:
    family: TaskFamily
    n_ops: int = 10
    n_vars: int = 3
    path_len: int = 5
    n_paths: int = 2
    depth: int = 1
    vector_len: int = 10
    n_variants: int = 2
    op_subset: frozenset[str] = frozenset({"add_sub"})
    seed: int = 0
    algorithm: str | None = None
    noise_sentences: int = 0


@dataclass(frozen=True)
class Give:
    giver: int
    receiver: int
    qty: int


@dataclass(frozen=True)
class Acquire:
    agent: int
    qty: int


@dataclass(frozen=True)
class Lose:
    agent: int
    qty: int


@dataclass(frozen=True)
class GiveAll:
    giver: int
    receiver: int


Event = Union[Give, Acquire, Lose, GiveAll]


@dataclass(frozen=True)
class EventPlan:
    agents: tuple[str, ...]
    good: tuple[str, str]
    initial: tuple[int, ...]
    events: tuple[Event, ...]
    targets: tuple[int, ...]


@dataclass(frozen=True)
class RecurringPlan:
    counts: tuple[int, ...]
    deltas: tuple[int, ...]
    good: tuple[str, str]
    noise: tuple[str, ...] = ()


@dataclass(frozen=True)
class RankingPlan:
    noun: tuple[str, str]
    labels: tuple[str, ...]
    weights: tuple[int, ...]
    rank: int
    heaviest: bool


Plan = Union[EventPlan, RecurringPlan, RankingPlan]


@dataclass(frozen=True)
class PairedInstance:
    id: str
    family: TaskFamily
    params: GenParams
    seed: int
    program: Program | None
    synthetic_source: str
    synthetic_question: str
    naturalistic_text: str | None
    naturalistic_question: str | None
    ground_truth: int | tuple[int, ...]
    naturalistic_ground_truth: int | tuple[int, ...] | None
    answer_kind: str
    input_vector: tuple[int, ...] | None = None
    variant_programs: tuple[Program, ...] | None = None
    variant_sources: tuple[str, ...] | None = None
    rank: int | None = None
    rank_heaviest: bool | None = None

    def kind_for(self, rendering: str) -> str:
        if rendering == "naturalistic" and self.family is TaskFamily.SORTING:
            return "int"
        return self.answer_kind

    def truth_for(self, rendering: str):
        if rendering == "naturalistic":
            return self.naturalistic_ground_truth
        return self.ground_truth

    @property
    def is_paired(self) -> bool:
        return self.naturalistic_text is not None


# ---------------------------------------------------------------------------
# plan compilation and native plan semantics

def compile_plan(plan: EventPlan) -> Program:
    body: list[Stmt] = [
        Init(Var(i), v) for i, v in enumerate(plan.initial)
    ]
    for event in plan.events:
        body.extend(_event_statements(event))
    return Program(var_count=len(plan.agents), body=tuple(body))


def _event_statements(event: Event) -> list[SimpleStmt]:
    if isinstance(event, Acquire):
        return [AddAssign(Var(event.agent), event.qty)]
    if isinstance(event, Lose):
        return [SubAssign(Var(event.agent), event.qty)]
    if isinstance(event, Give):
        return [
            SubAssign(Var(event.giver), event.qty),
            AddAssign(Var(event.receiver), event.qty),
        ]
    if isinstance(event, GiveAll):
        return [
            AddAssign(Var(event.receiver), Var(event.giver)),
            SubAssign(Var(event.giver), Var(event.giver)),
        ]
    raise TypeError(f"unknown event {event!r}")


def event_statement_count(event: Event) -> int:
    return len(_event_statements(event))


def plan_final_counts(plan: EventPlan) -> list[int]:
    """Simulate the events directly, independently of the dsl interpreter."""
    counts = list(plan.initial)
    for event in plan.events:
        if isinstance(event, Acquire):
            counts[event.agent] += event.qty
        elif isinstance(event, Lose):
            counts[event.agent] -= event.qty
        elif isinstance(event, Give):
            counts[event.giver] -= event.qty
            counts[event.receiver] += event.qty
        elif isinstance(event, GiveAll):
            counts[event.receiver] += counts[event.giver]
            counts[event.giver] = 0
    return counts


def recurring_total(plan: RecurringPlan) -> int:
    total = 1
    for count in plan.counts:
        total *= count
    return total * sum(plan.deltas)


def ranking_answer(plan: RankingPlan) -> int:
    ordered = sorted(plan.weights, reverse=plan.heaviest)
    return ordered[plan.rank - 1]


# ---------------------------------------------------------------------------
# narrative rendering

def _plural(noun: tuple[str, str], qty: int) -> str:
    return noun[0] if qty == 1 else noun[1]


def _agent_entry(name: str) -> tuple[str, str, str]:
    for entry in AGENT_TABLE:
        if entry[0] == name:
            return entry
    return (name, "they", "have")


def _ordinal(n: int) -> str:
    if 10 <= n % 100 <= 20:
        suffix = "th"
    else:
        suffix = {1: "st", 2: "nd", 3: "rd"}.get(n % 10, "th")
    return f"{n}{suffix}"


def _event_sentence(plan: EventPlan, event: Event) -> str:
    good = plan.good
    if isinstance(event, Acquire):
        return f"{plan.agents[event.agent]} acquires {event.qty} {_plural(good, event.qty)}."
    if isinstance(event, Lose):
        return f"{plan.agents[event.agent]} loses {event.qty} {_plural(good, event.qty)}."
    if isinstance(event, Give):
        return (
            f"{plan.agents[event.giver]} gives {plan.agents[event.receiver]} "
            f"{event.qty} {_plural(good, event.qty)}."
        )
    if isinstance(event, GiveAll):
        _, pronoun, have = _agent_entry(plan.agents[event.giver])
        return (
            f"{plan.agents[event.giver]} gives {plan.agents[event.receiver]} "
            f"everything {pronoun} {have}."
        )
    raise TypeError(f"unknown event {event!r}")


def plan_sentences(plan: Plan) -> list[str]:
    if isinstance(plan, EventPlan):
        sentences = [
            f"{name} starts with {qty} {_plural(plan.good, qty)}."
            for name, qty in zip(plan.agents, plan.initial)
        ]
        sentences.extend(_event_sentence(plan, event) for event in plan.events)
        return sentences
    if isinstance(plan, RecurringPlan):
        levels = CONTAINER_TABLE[: len(plan.counts)]
        sentences = [f"There are {plan.counts[0]} {levels[0][1]}."]
        for i in range(1, len(plan.counts)):
            sentences.append(
                f"Each {levels[i - 1][0]} holds {plan.counts[i]} {levels[i][1]}."
            )
        inner = levels[-1][0]
        parts = [
            f"you gain 1 {plan.good[0]}" if d > 0 else f"you lose 1 {plan.good[0]}"
            for d in plan.deltas
        ]
        sentences.append(f"For each {inner}: {', then '.join(parts)}.")
        sentences.extend(plan.noise)
        return sentences
    if isinstance(plan, RankingPlan):
        return [
            f"{plan.noun[0].capitalize()} {label} weighs {weight} grams."
            for label, weight in zip(plan.labels, plan.weights)
        ]
    raise TypeError(f"unknown plan {plan!r}")


def plan_question(plan: Plan) -> str:
    if isinstance(plan, EventPlan):
        good_pl = plan.good[1]
        if len(plan.targets) == 1:
            return f"How many {good_pl} does {plan.agents[plan.targets[0]]} have at the end?"
        names = [plan.agents[t] for t in plan.targets]
        listed = ", ".join(names[:-1]) + f" and {names[-1]}"
        return (
            f"How many {good_pl} do {listed} each have at the end? "
            f"Give the counts in that order."
        )
    if isinstance(plan, RecurringPlan):
        return (
            f"Over everything, what is the net change in the number of "
            f"{plan.good[1]} you have?"
        )
    if isinstance(plan, RankingPlan):
        kind = "heaviest" if plan.heaviest else "lightest"
        which = kind if plan.rank == 1 else f"{_ordinal(plan.rank)} {kind}"
        return f"What is the weight, in grams, of the {which} {plan.noun[0]}?"
    raise TypeError(f"unknown plan {plan!r}")


def render_naturalistic(plan: Plan) -> str:
    """Narrate a plan: one sentence per event, ending with the question."""
    return " ".join(plan_sentences(plan) + [plan_question(plan)])


# ---------------------------------------------------------------------------
# statement-level samplers (synthetic-only programs)

def _sample_ops(
    rng: random.Random,
    n_ops: int,
    var_pool: list[int],
    op_groups: tuple[str, ...],
) -> list[SimpleStmt]:
    groups = tuple(sorted(set(op_groups)))
    if not groups or not set(groups) <= set(OP_GROUPS):
        raise InfeasibleParams(f"bad op groups {op_groups!r}")
    if "and_or" in groups and len(groups) > 1:
        raise InfeasibleParams("logical programs use logical instructions only")
    if ("mov" in groups or "and_or" in groups) and len(var_pool) < 2:
        raise InfeasibleParams("mov/logical statements need two variables")
    out: list[SimpleStmt] = []
    prev: SimpleStmt | None = None
    for _ in range(n_ops):
        for _attempt in range(50):
            stmt = _sample_one(rng, var_pool, groups)
            if _acceptable(stmt, prev):
                break
        out.append(stmt)
        prev = stmt
    return out


def _sample_one(
    rng: random.Random, var_pool: list[int], groups: tuple[str, ...]
) -> SimpleStmt:
    group = rng.choice(groups)
    dst = Var(rng.choice(var_pool))
    if group == "mov":
        src = Var(rng.choice([v for v in var_pool if v != dst.index]))
        return Assign(dst, src)
    if group == "and_or":
        src = Var(rng.choice([v for v in var_pool if v != dst.index]))
        return AndAssign(dst, src) if rng.random() < 0.5 else OrAssign(dst, src)
    op = AddAssign if rng.random() < 0.5 else SubAssign
    if len(var_pool) > 1 and rng.random() < 0.5:
        return op(dst, Var(rng.choice(var_pool)))
    return op(dst, rng.randint(1, 9))


def _acceptable(stmt: SimpleStmt, prev: SimpleStmt | None) -> bool:
    # Self-zeroing is meaningful once but pointless twice in a row.
    if isinstance(stmt, SubAssign) and stmt.src == stmt.dst and stmt == prev:
        return False
    return True


def random_straight_line(
    rng: random.Random,
    n_ops: int,
    n_vars: int,
    op_groups: tuple[str, ...] = ("add_sub",),
) -> Program:
    """A free-form straight-line program: inits for every variable followed by
    n_ops sampled operation statements."""
    if n_vars < 1 or n_ops < 0:
        raise InfeasibleParams("need at least one variable and n_ops >= 0")
    if "mov" in op_groups and n_vars < 2:
        raise InfeasibleParams("mov statements need two variables")
    logic = "and_or" in op_groups
    if logic and n_vars < 2:
        raise InfeasibleParams("logical statements need two variables")
    inits: list[Stmt] = [
        Init(Var(i), rng.randint(0, 1) if logic else rng.randint(-9, 9))
        for i in range(n_vars)
    ]
    ops = _sample_ops(rng, n_ops, list(range(n_vars)), op_groups)
    return Program(var_count=n_vars, body=tuple(inits + list(ops)))


# ---------------------------------------------------------------------------
# event sampling (paired plans)

def _sample_events(
    rng: random.Random,
    n_stmts: int,
    agents: list[int],
    balances: list[int],
) -> list[Event]:
    """Events whose compiled statements total exactly n_stmts, keeping every
    agent's balance non-negative so the narrative stays sensible."""
    events: list[Event] = []
    remaining = n_stmts
    while remaining > 0:
        kinds = ["acquire"]
        holders = [a for a in agents if balances[a] >= 1]
        if holders:
            kinds.append("lose")
        if remaining >= 2 and len(agents) >= 2 and holders:
            kinds.extend(["give", "giveall"])
        kind = rng.choice(kinds)
        if kind == "acquire":
            agent = rng.choice(agents)
            qty = rng.randint(1, 9)
            balances[agent] += qty
            events.append(Acquire(agent, qty))
            remaining -= 1
        elif kind == "lose":
            agent = rng.choice(holders)
            qty = rng.randint(1, min(9, balances[agent]))
            balances[agent] -= qty
            events.append(Lose(agent, qty))
            remaining -= 1
        elif kind == "give":
            giver = rng.choice(holders)
            receiver = rng.choice([a for a in agents if a != giver])
            qty = rng.randint(1, min(9, balances[giver]))
            balances[giver] -= qty
            balances[receiver] += qty
            events.append(Give(giver, receiver, qty))
            remaining -= 2
        else:
            giver = rng.choice(holders)
            receiver = rng.choice([a for a in agents if a != giver])
            balances[receiver] += balances[giver]
            balances[giver] = 0
            events.append(GiveAll(giver, receiver))
            remaining -= 2
    return events


def _interleave(rng: random.Random, streams: list[list]) -> list:
    """Merge streams in random order while preserving each stream's order."""
    pending = [list(s) for s in streams]
    merged = []
    while any(pending):
        ready = [i for i, s in enumerate(pending) if s]
        pick = rng.choice(ready)
        merged.append(pending[pick].pop(0))
    return merged


# ---------------------------------------------------------------------------
# family generators

def generate_pair(params: GenParams) -> PairedInstance:
    rng = random.Random(params.seed)
    builders = {
        TaskFamily.STRAIGHT_LINE: _gen_straight_line,
        TaskFamily.CRITICAL_PATH: _gen_critical_path,
        TaskFamily.PARALLEL_PATHS: _gen_parallel_paths,
        TaskFamily.NESTED_LOOPS: _gen_nested_loops,
        TaskFamily.SORTING: _gen_sorting,
        TaskFamily.APPROXIMATE_LOOPS: _gen_approximate,
        TaskFamily.FAULT_TOLERANT: _gen_fault_tolerant,
    }
    return builders[params.family](params, rng)


def _instance_id(params: GenParams) -> str:
    digest = hashlib.sha256(
        json.dumps(params_to_dict(params), sort_keys=True).encode()
    ).hexdigest()[:12]
    return f"{params.family.value}-{digest}"


def _value_question(target: Var) -> str:
    return f"What is the value of {target.name} at the end?"


def _gen_straight_line(params: GenParams, rng: random.Random) -> PairedInstance:
    if params.n_ops < 1 or params.n_vars < 1:
        raise InfeasibleParams("straight-line needs n_ops >= 1 and n_vars >= 1")
    if params.op_subset == frozenset({"add_sub"}):
        names = tuple(e[0] for e in rng.sample(AGENT_TABLE, params.n_vars))
        good = rng.choice(GOOD_TABLE)
        initial = tuple(rng.randint(0, 9) for _ in range(params.n_vars))
        balances = list(initial)
        events = _sample_events(rng, params.n_ops, list(range(params.n_vars)), balances)
        target = rng.randrange(params.n_vars)
        plan = EventPlan(names, good, initial, tuple(events), (target,))
        program = compile_plan(plan)
        final, _ = execute(program)
        return PairedInstance(
            id=_instance_id(params),
            family=params.family,
            params=params,
            seed=params.seed,
            program=program,
            synthetic_source=render_source(program),
            synthetic_question=_value_question(Var(target)),
            naturalistic_text=" ".join(plan_sentences(plan)),
            naturalistic_question=plan_question(plan),
            ground_truth=final[target],
            naturalistic_ground_truth=plan_final_counts(plan)[target],
            answer_kind="int",
        )
    program = random_straight_line(
        rng, params.n_ops, params.n_vars, tuple(sorted(params.op_subset))
    )
    target = rng.randrange(params.n_vars)
    final, _ = execute(program)
    return PairedInstance(
        id=_instance_id(params),
        family=params.family,
        params=params,
        seed=params.seed,
        program=program,
        synthetic_source=render_source(program),
        synthetic_question=_value_question(Var(target)),
        naturalistic_text=None,
        naturalistic_question=None,
        ground_truth=final[target],
        naturalistic_ground_truth=None,
        answer_kind="int",
    )


def _stage_sizes(rng: random.Random, total: int, stages: int) -> list[int]:
    cuts = sorted(rng.sample(range(1, total), stages - 1)) if stages > 1 else []
    bounds = [0] + cuts + [total]
    return [bounds[i + 1] - bounds[i] for i in range(stages)]


def _gen_critical_path(params: GenParams, rng: random.Random) -> PairedInstance:
    if params.path_len < 1:
        raise InfeasibleParams("path_len must be >= 1")
    if params.path_len > params.n_ops:
        raise InfeasibleParams("path_len cannot exceed n_ops")
    if params.op_subset == frozenset({"add_sub"}):
        return _gen_critical_paired(params, rng)
    if params.op_subset == frozenset({"mov"}):
        return _gen_critical_synthetic(params, rng, style="mov")
    if params.op_subset == frozenset({"and_or"}):
        return _gen_critical_synthetic(params, rng, style="and_or")
    if params.op_subset == frozenset({"add_sub", "mov"}):
        return _gen_critical_synthetic(params, rng, style="mixed")
    raise InfeasibleParams(f"unsupported op subset {sorted(params.op_subset)}")


def _critical_stage_count(
    params: GenParams, rng: random.Random, link_cost: int
) -> tuple[int, int]:
    """Pick the number of chained path variables and the distractor budget."""
    feasible = []
    for r in range(1, min(params.n_vars, params.path_len) + 1):
        budget = params.n_ops - params.path_len - (r - 1) * link_cost
        if budget < 0:
            continue
        if budget > 0 and params.n_vars - r < 1:
            continue
        feasible.append(r)
    if not feasible:
        raise InfeasibleParams(
            "no chain layout fits n_ops/n_vars/path_len "
            f"({params.n_ops}/{params.n_vars}/{params.path_len})"
        )
    r = rng.choice(feasible)
    return r, params.n_ops - params.path_len - (r - 1) * link_cost


def _gen_critical_paired(params: GenParams, rng: random.Random) -> PairedInstance:
    # Chained GiveAll links cost one extra (off-slice) zeroing statement each.
    r, distract_budget = _critical_stage_count(params, rng, link_cost=1)
    order = rng.sample(range(params.n_vars), params.n_vars)
    path_agents = order[:r]
    distractor_agents = order[r:]
    target = path_agents[-1]
    names = tuple(e[0] for e in rng.sample(AGENT_TABLE, params.n_vars))
    good = rng.choice(GOOD_TABLE)
    initial = [0] * params.n_vars
    for a in path_agents:
        initial[a] = rng.randint(1, 9)
    for a in distractor_agents:
        initial[a] = rng.randint(0, 9)
    balances = list(initial)

    sizes = _stage_sizes(rng, params.path_len, r)
    path_events: list[Event] = []

    def stage_interior(agent: int, count: int) -> None:
        for _ in range(count):
            can_lose = balances[agent] >= 2
            if can_lose and rng.random() < 0.4:
                qty = rng.randint(1, min(9, balances[agent] - 1))
                balances[agent] -= qty
                path_events.append(Lose(agent, qty))
            else:
                qty = rng.randint(1, 9)
                balances[agent] += qty
                path_events.append(Acquire(agent, qty))

    stage_interior(path_agents[0], sizes[0])
    for j in range(1, r):
        giver, receiver = path_agents[j - 1], path_agents[j]
        balances[receiver] += balances[giver]
        balances[giver] = 0
        path_events.append(GiveAll(giver, receiver))
        stage_interior(receiver, sizes[j] - 1)

    distractor_events = (
        _sample_events(rng, distract_budget, distractor_agents, balances)
        if distract_budget
        else []
    )
    events = _interleave(rng, [path_events, distractor_events])
    plan = EventPlan(names, good, tuple(initial), tuple(events), (target,))
    program = compile_plan(plan)
    if critical_path_length(program, Var(target)) != params.path_len:
        raise AssertionError("generator bug: critical path length mismatch")
    final, _ = execute(program)
    return PairedInstance(
        id=_instance_id(params),
        family=params.family,
        params=params,
        seed=params.seed,
        program=program,
        synthetic_source=render_source(program),
        synthetic_question=_value_question(Var(target)),
        naturalistic_text=" ".join(plan_sentences(plan)),
        naturalistic_question=plan_question(plan),
        ground_truth=final[target],
        naturalistic_ground_truth=plan_final_counts(plan)[target],
        answer_kind="int",
    )


def _gen_critical_synthetic(
    params: GenParams, rng: random.Random, style: str
) -> PairedInstance:
    logic = style == "and_or"
    if params.n_vars < 2:
        raise InfeasibleParams("synthetic critical path needs n_vars >= 2")
    distract_budget = None
    if style == "mixed":
        r, distract_budget = _critical_stage_count(params, rng, link_cost=0)
        order = rng.sample(range(params.n_vars), params.n_vars)
        path_vars, rest = order[:r], order[r:]
        target = path_vars[-1]
        sizes = _stage_sizes(rng, params.path_len, r)
        path_stmts: list[SimpleStmt] = []

        def interior(v: int, count: int) -> None:
            for _ in range(count):
                op = AddAssign if rng.random() < 0.5 else SubAssign
                path_stmts.append(op(Var(v), rng.randint(1, 9)))

        interior(path_vars[0], sizes[0])
        for j in range(1, r):
            link = rng.choice((AddAssign, SubAssign, Assign))
            path_stmts.append(link(Var(path_vars[j]), Var(path_vars[j - 1])))
            interior(path_vars[j], sizes[j] - 1)
        distractors = (
            _sample_ops(rng, distract_budget, rest, ("add_sub", "mov"))
            if distract_budget
            else []
        )
    elif style == "mov":
        distract_budget = params.n_ops - params.path_len
        if distract_budget > 0 and params.n_vars < 3:
            raise InfeasibleParams("mov distractors need a third variable")
        order = rng.sample(range(params.n_vars), params.n_vars)
        max_chain = params.n_vars - 1 if distract_budget > 0 else params.n_vars
        n_chain_vars = rng.randint(2, max_chain)
        chain_pool, rest = order[:n_chain_vars], order[n_chain_vars:]
        target = chain_pool[0]
        # Walk backwards from the target so the chain ends where the question asks.
        chain = [target]
        for _ in range(params.path_len):
            prev = rng.choice([v for v in chain_pool if v != chain[-1]])
            chain.append(prev)
        chain.reverse()
        path_stmts = [
            Assign(Var(chain[i + 1]), Var(chain[i]))
            for i in range(params.path_len)
        ]
        distractors = []
        for _ in range(distract_budget):
            dst = rng.choice(rest)
            src = rng.choice([v for v in range(params.n_vars) if v != dst])
            distractors.append(Assign(Var(dst), Var(src)))
    else:
        distract_budget = params.n_ops - params.path_len
        if distract_budget > 0 and params.n_vars < 3:
            raise InfeasibleParams("logic distractors need a third variable")
        order = rng.sample(range(params.n_vars), params.n_vars)
        target = order[0]
        n_rest = min(len(order) - 2, distract_budget) if distract_budget else 0
        rest = order[1 : 1 + n_rest]
        fresh = order[1 + n_rest :]
        path_stmts = []
        for _ in range(params.path_len):
            op = AndAssign if rng.random() < 0.5 else OrAssign
            path_stmts.append(op(Var(target), Var(rng.choice(fresh))))
        distractors = []
        for _ in range(distract_budget):
            dst = rng.choice(rest)
            src = rng.choice(
                [v for v in ([target] + rest + fresh) if v != dst]
            )
            op = AndAssign if rng.random() < 0.5 else OrAssign
            distractors.append(op(Var(dst), Var(src)))

    stmts = _interleave(rng, [path_stmts, distractors])
    inits: list[Stmt] = [
        Init(Var(i), rng.randint(0, 1) if logic else rng.randint(-9, 9))
        for i in range(params.n_vars)
    ]
    program = Program(params.n_vars, tuple(inits + stmts))
    if critical_path_length(program, Var(target)) != params.path_len:
        raise AssertionError("generator bug: critical path length mismatch")
    final, _ = execute(program)
    return PairedInstance(
        id=_instance_id(params),
        family=params.family,
        params=params,
        seed=params.seed,
        program=program,
        synthetic_source=render_source(program),
        synthetic_question=_value_question(Var(target)),
        naturalistic_text=None,
        naturalistic_question=None,
        ground_truth=final[target],
        naturalistic_ground_truth=None,
        answer_kind="int",
    )


def _gen_parallel_paths(params: GenParams, rng: random.Random) -> PairedInstance:
    k = params.n_paths
    if not 1 <= k <= 9:
        raise InfeasibleParams("n_paths must be in 1..9")
    if params.n_ops < k:
        raise InfeasibleParams("need at least one operation per path")
    if params.n_vars < 1:
        raise InfeasibleParams("need at least one variable per group")
    group_size = params.n_vars
    total_agents = k * group_size
    paired = params.op_subset == frozenset({"add_sub"})
    if paired and total_agents > len(AGENT_TABLE):
        raise InfeasibleParams("not enough agent names for this clique layout")

    parts = _stage_sizes(rng, params.n_ops, k)
    groups = [
        list(range(g * group_size, (g + 1) * group_size)) for g in range(k)
    ]
    targets = tuple(rng.choice(group) for group in groups)

    if paired:
        names = tuple(e[0] for e in rng.sample(AGENT_TABLE, total_agents))
        good = rng.choice(GOOD_TABLE)
        initial = tuple(rng.randint(0, 9) for _ in range(total_agents))
        balances = list(initial)
        streams = [
            _sample_events(rng, parts[g], groups[g], balances) for g in range(k)
        ]
        events = _interleave(rng, streams)
        plan = EventPlan(names, good, initial, tuple(events), targets)
        program = compile_plan(plan)
        final, _ = execute(program)
        native = plan_final_counts(plan)
        return PairedInstance(
            id=_instance_id(params),
            family=params.family,
            params=params,
            seed=params.seed,
            program=program,
            synthetic_source=render_source(program),
            synthetic_question=_tuple_question(targets),
            naturalistic_text=" ".join(plan_sentences(plan)),
            naturalistic_question=plan_question(plan),
            ground_truth=tuple(final[t] for t in targets),
            naturalistic_ground_truth=tuple(native[t] for t in targets),
            answer_kind="tuple",
        )

    logic = params.op_subset == frozenset({"and_or"})
    inits: list[Stmt] = [
        Init(Var(i), rng.randint(0, 1) if logic else rng.randint(-9, 9))
        for i in range(total_agents)
    ]
    streams = [
        _sample_ops(rng, parts[g], groups[g], tuple(sorted(params.op_subset)))
        for g in range(k)
    ]
    stmts = _interleave(rng, streams)
    program = Program(total_agents, tuple(inits + stmts))
    final, _ = execute(program)
    return PairedInstance(
        id=_instance_id(params),
        family=params.family,
        params=params,
        seed=params.seed,
        program=program,
        synthetic_source=render_source(program),
        synthetic_question=_tuple_question(targets),
        naturalistic_text=None,
        naturalistic_question=None,
        ground_truth=tuple(final[t] for t in targets),
        naturalistic_ground_truth=None,
        answer_kind="tuple",
    )


def _tuple_question(targets: tuple[int, ...]) -> str:
    listed = ", ".join(f"a{t}" for t in targets)
    return f"What are the final values of ({listed})?"


def _gen_nested_loops(params: GenParams, rng: random.Random) -> PairedInstance:
    k = params.depth
    if not 1 <= k <= 9:
        raise InfeasibleParams("depth must be in 1..9")
    net = rng.choice((-1, 1))
    deltas = [net] + [1, -1] * rng.randint(0, 1)
    rng.shuffle(deltas)
    acc = Var(0)
    inner: tuple[Stmt, ...] = tuple(
        AddAssign(acc, 1) if d > 0 else SubAssign(acc, 1) for d in deltas
    )
    body = inner
    for _ in range(k):
        body = (LoopBlock(2, body),)
    program = Program(1, (Init(acc, 0),) + body)
    final, _ = execute(program)

    good = rng.choice(GOOD_TABLE)
    noise = tuple(
        f"Each {CONTAINER_TABLE[rng.randrange(len(CONTAINER_TABLE))][0]} has a "
        f"label with the number {rng.randint(2, 9)} on it."
        for _ in range(params.noise_sentences)
    )
    plan = RecurringPlan(counts=(2,) * k, deltas=tuple(deltas), good=good, noise=noise)
    truth = final[0]
    if abs(truth) > min(2**k, 1024):
        raise AssertionError("generator bug: nested-loop bound violated")
    return PairedInstance(
        id=_instance_id(params),
        family=params.family,
        params=params,
        seed=params.seed,
        program=program,
        synthetic_source=render_source(program),
        synthetic_question=_value_question(acc),
        naturalistic_text=" ".join(plan_sentences(plan)),
        naturalistic_question=plan_question(plan),
        ground_truth=truth,
        naturalistic_ground_truth=recurring_total(plan),
        answer_kind="int",
    )


def _letter_labels(n: int) -> tuple[str, ...]:
    labels = []
    alphabet = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"
    for i in range(n):
        if i < 26:
            labels.append(alphabet[i])
        else:
            labels.append(alphabet[i // 26 - 1] + alphabet[i % 26])
    return tuple(labels)


def _gen_sorting(params: GenParams, rng: random.Random) -> PairedInstance:
    if params.vector_len < 1:
        raise InfeasibleParams("vector_len must be >= 1")
    spec = params.algorithm or "bubble:iterative"
    try:
        name, style = spec.split(":")
        entry = algolib.get_entry(name, style)
    except (ValueError, KeyError) as exc:
        raise InfeasibleParams(f"unknown algorithm {spec!r}") from exc
    vector = tuple(rng.randint(0, 100) for _ in range(params.vector_len))
    truth = tuple(algolib.oracle_run(entry, vector))
    rank = rng.randint(1, params.vector_len)
    heaviest = rng.random() < 0.5
    plan = RankingPlan(
        noun=rng.choice(OBJECT_NOUNS),
        labels=_letter_labels(params.vector_len),
        weights=vector,
        rank=rank,
        heaviest=heaviest,
    )
    return PairedInstance(
        id=_instance_id(params),
        family=params.family,
        params=params,
        seed=params.seed,
        program=None,
        synthetic_source=entry.source_text,
        synthetic_question=(
            f"What is the output of main({list(vector)}, {len(vector)})?"
        ),
        naturalistic_text=" ".join(plan_sentences(plan)),
        naturalistic_question=plan_question(plan),
        ground_truth=truth,
        naturalistic_ground_truth=ranking_answer(plan),
        answer_kind="sequence",
        input_vector=vector,
        rank=rank,
        rank_heaviest=heaviest,
    )


def _gen_approximate(params: GenParams, rng: random.Random) -> PairedInstance:
    k = params.n_paths
    if not 1 <= k <= 9:
        raise InfeasibleParams("n_paths must be in 1..9")
    if params.n_ops < 1:
        raise InfeasibleParams("need at least one instruction per loop")
    inits: list[Stmt] = [Init(Var(i), 0) for i in range(k)]
    loops: list[Stmt] = []
    for i in range(k):
        ops = tuple(
            (AddAssign if rng.random() < 0.6 else SubAssign)(Var(i), rng.randint(1, 3))
            for _ in range(params.n_ops)
        )
        loops.append(LoopBlock(rng.randint(2, 4), ops))
    program = Program(k, tuple(inits + loops))
    final, _ = execute(program)
    targets = tuple(range(k))
    return PairedInstance(
        id=_instance_id(params),
        family=params.family,
        params=params,
        seed=params.seed,
        program=program,
        synthetic_source=render_source(program),
        synthetic_question=_tuple_question(targets),
        naturalistic_text=None,
        naturalistic_question=None,
        ground_truth=tuple(final[t] for t in targets),
        naturalistic_ground_truth=None,
        answer_kind="tuple",
    )


def approximate_instance(k: int, n: int, seed: int) -> PairedInstance:
    """Synthetic-only: k independent single-level loops, one tuple component each."""
    return generate_pair(
        GenParams(TaskFamily.APPROXIMATE_LOOPS, n_ops=n, n_paths=k, seed=seed)
    )


def _gen_fault_tolerant(params: GenParams, rng: random.Random) -> PairedInstance:
    if params.n_variants < 2:
        raise InfeasibleParams("redundancy requires at least two variants")
    base = random_straight_line(rng, params.n_ops, params.n_vars, ("add_sub",))
    target = Var(rng.randrange(params.n_vars))
    variants = equivalent_variants(
        base, params.n_variants, seed=rng.getrandbits(63), target=target
    )
    final, _ = execute(base)
    return PairedInstance(
        id=_instance_id(params),
        family=params.family,
        params=params,
        seed=params.seed,
        program=base,
        synthetic_source=render_source(base),
        synthetic_question=_value_question(target),
        naturalistic_text=None,
        naturalistic_question=None,
        ground_truth=final[target.index],
        naturalistic_ground_truth=None,
        answer_kind="int",
        variant_programs=tuple(variants),
        variant_sources=tuple(render_source(v) for v in variants),
    )


# ---------------------------------------------------------------------------
# semantics-preserving transforms

def _delta_stmt(var: Var, delta: int) -> SimpleStmt:
    return AddAssign(var, delta) if delta > 0 else SubAssign(var, -delta)


def _split_candidates(program: Program) -> list[int]:
    return [
        i
        for i, s in enumerate(program.body)
        if isinstance(s, (AddAssign, SubAssign)) and isinstance(s.src, int)
    ]


def _apply_split(program: Program, rng: random.Random, index: int) -> Program:
    stmt = program.body[index]
    delta = stmt.src if isinstance(stmt, AddAssign) else -stmt.src
    if abs(delta) >= 2:
        sign = 1 if delta > 0 else -1
        first = sign * rng.randint(1, abs(delta) - 1)
    else:
        first = delta * 2  # |delta| == 1: split into (2d, -d), both nonzero
    second = delta - first
    body = (
        program.body[:index]
        + (_delta_stmt(stmt.dst, first), _delta_stmt(stmt.dst, second))
        + program.body[index + 1 :]
    )
    return Program(program.var_count, body)


def _reorder_candidates(program: Program) -> list[int]:
    from .dsl import reads, writes

    out = []
    for i in range(len(program.body) - 1):
        a, b = program.body[i], program.body[i + 1]
        if isinstance(a, LoopBlock) or isinstance(b, LoopBlock):
            continue
        if (reads(a) | writes(a)) & (reads(b) | writes(b)):
            continue
        out.append(i)
    return out


def _apply_reorder(program: Program, index: int) -> Program:
    body = list(program.body)
    body[index], body[index + 1] = body[index + 1], body[index]
    return Program(program.var_count, tuple(body))


def _apply_rename(program: Program, rng: random.Random, target: Var) -> Program:
    others = [i for i in range(program.var_count) if i != target.index]
    a, b = rng.sample(others, 2)
    mapping = {a: b, b: a}

    def remap_var(v: Var) -> Var:
        return Var(mapping.get(v.index, v.index))

    def remap(stmt: Stmt) -> Stmt:
        if isinstance(stmt, LoopBlock):
            return LoopBlock(stmt.count, tuple(remap(s) for s in stmt.body))
        if isinstance(stmt, Init):
            return Init(remap_var(stmt.var), stmt.value)
        if isinstance(stmt, MultiInit):
            return MultiInit(tuple(remap_var(v) for v in stmt.vars), stmt.value)
        if isinstance(stmt, Assign):
            return Assign(remap_var(stmt.dst), remap_var(stmt.src))
        if isinstance(stmt, (AddAssign, SubAssign)):
            src = remap_var(stmt.src) if isinstance(stmt.src, Var) else stmt.src
            return type(stmt)(remap_var(stmt.dst), src)
        if isinstance(stmt, (AndAssign, OrAssign)):
            return type(stmt)(remap_var(stmt.dst), remap_var(stmt.src))
        return stmt

    return Program(program.var_count, tuple(remap(s) for s in program.body))


def equivalent_variants(
    program: Program,
    m: int,
    seed: int,
    target: Var = Var(0),
) -> list[Program]:
    """m programs (the original first) that agree on the target's final value,
    derived by reordering independent statements, splitting literal updates,
    and renaming non-target variables."""
    if m < 2:
        raise InfeasibleParams("m must be >= 2")
    if not program.is_straight_line():
        raise InfeasibleParams("variants are derived from loop-free programs")
    if not program.body:
        raise InfeasibleParams("empty program cannot be transformed")
    rng = random.Random(seed)
    base_value = execute(program)[0][target.index]
    out = [program]
    seen = {render_source(program)}
    for _ in range(m - 1):
        candidate = None
        for _attempt in range(60):
            cand = program
            for _step in range(rng.randint(1, 3)):
                cand = _transform_once(cand, rng, target)
            text = render_source(cand)
            if text not in seen:
                candidate = cand
                seen.add(text)
                break
        if candidate is None:
            raise InfeasibleParams("program too small for m distinct variants")
        if execute(candidate)[0][target.index] != base_value:
            raise AssertionError("generator bug: variant changed the target value")
        out.append(candidate)
    return out


def _transform_once(program: Program, rng: random.Random, target: Var) -> Program:
    moves = []
    if _split_candidates(program):
        moves.append("split")
    if _reorder_candidates(program):
        moves.append("reorder")
    if program.var_count >= 3:
        moves.append("rename")
    if not moves:
        raise InfeasibleParams("no applicable transform")
    move = rng.choice(moves)
    if move == "split":
        return _apply_split(program, rng, rng.choice(_split_candidates(program)))
    if move == "reorder":
        return _apply_reorder(program, rng.choice(_reorder_candidates(program)))
    return _apply_rename(program, rng, target)


# ---------------------------------------------------------------------------
# serialisation

def params_to_dict(params: GenParams) -> dict:
    return {
        "family": params.family.value,
        "n_ops": params.n_ops,
        "n_vars": params.n_vars,
        "path_len": params.path_len,
        "n_paths": params.n_paths,
        "depth": params.depth,
        "vector_len": params.vector_len,
        "n_variants": params.n_variants,
        "op_subset": sorted(params.op_subset),
        "seed": params.seed,
        "algorithm": params.algorithm,
        "noise_sentences": params.noise_sentences,
    }


def params_from_dict(data: dict) -> GenParams:
    return GenParams(
        family=TaskFamily(data["family"]),
        n_ops=data["n_ops"],
        n_vars=data["n_vars"],
        path_len=data["path_len"],
        n_paths=data["n_paths"],
        depth=data["depth"],
        vector_len=data["vector_len"],
        n_variants=data["n_variants"],
        op_subset=frozenset(data["op_subset"]),
        seed=data["seed"],
        algorithm=data.get("algorithm"),
        noise_sentences=data.get("noise_sentences", 0),
    )


def _truth_to_json(value):
    return list(value) if isinstance(value, tuple) else value


def _truth_from_json(value, kind: str):
    if kind in ("tuple", "sequence") and isinstance(value, list):
        return tuple(value)
    return value


def instance_to_dict(inst: PairedInstance) -> dict:
    data = {
        "id": inst.id,
        "family": inst.family.value,
        "params": params_to_dict(inst.params),
        "seed": inst.seed,
        "synthetic_source": inst.synthetic_source,
        "naturalistic_text": inst.naturalistic_text,
        "questions": {
            "synthetic": inst.synthetic_question,
            "naturalistic": inst.naturalistic_question,
        },
        "ground_truth": _truth_to_json(inst.ground_truth),
        "naturalistic_ground_truth": _truth_to_json(inst.naturalistic_ground_truth)
        if inst.naturalistic_ground_truth is not None
        else None,
        "answer_kind": inst.answer_kind,
    }
    if inst.input_vector is not None:
        data["input_vector"] = list(inst.input_vector)
    if inst.variant_sources is not None:
        data["variant_sources"] = list(inst.variant_sources)
    if inst.rank is not None:
        data["rank"] = inst.rank
        data["rank_heaviest"] = inst.rank_heaviest
    return data


def instance_from_dict(data: dict) -> PairedInstance:
    family = TaskFamily(data["family"])
    params = params_from_dict(data["params"])
    kind = data["answer_kind"]
    nat_kind = "int" if family is TaskFamily.SORTING else kind
    nat_truth = data.get("naturalistic_ground_truth")
    program = None
    if family is not TaskFamily.SORTING:
        program = parse_source(data["synthetic_source"])
    variant_sources = data.get("variant_sources")
    return PairedInstance(
        id=data["id"],
        family=family,
        params=params,
        seed=data["seed"],
        program=program,
        synthetic_source=data["synthetic_source"],
        synthetic_question=data["questions"]["synthetic"],
        naturalistic_text=data.get("naturalistic_text"),
        naturalistic_question=data["questions"].get("naturalistic"),
        ground_truth=_truth_from_json(data["ground_truth"], kind),
        naturalistic_ground_truth=_truth_from_json(nat_truth, nat_kind)
        if nat_truth is not None
        else None,
        answer_kind=kind,
        input_vector=tuple(data["input_vector"]) if "input_vector" in data else None,
        variant_programs=tuple(parse_source(s) for s in variant_sources)
        if variant_sources
        else None,
        variant_sources=tuple(variant_sources) if variant_sources else None,
        rank=data.get("rank"),
        rank_heaviest=data.get("rank_heaviest"),
    )


FAMILY_FILENAME_FIELDS: dict[TaskFamily, tuple[tuple[str, str], ...]] = {
    TaskFamily.STRAIGHT_LINE: (("n_ops", "n_ops"), ("n_vars", "n_vars")),
    TaskFamily.CRITICAL_PATH: (
        ("n_ops", "n_ops"),
        ("n_vars", "n_vars"),
        ("len_critical_path", "path_len"),
    ),
    TaskFamily.PARALLEL_PATHS: (
        ("n_ops", "n_ops"),
        ("n_vars", "n_vars"),
        ("n_paths", "n_paths"),
    ),
    TaskFamily.NESTED_LOOPS: (("depth", "depth"),),
    TaskFamily.SORTING: (("vector_len", "vector_len"),),
    TaskFamily.APPROXIMATE_LOOPS: (("n_paths", "n_paths"), ("n_ops", "n_ops")),
    TaskFamily.FAULT_TOLERANT: (
        ("n_ops", "n_ops"),
        ("n_vars", "n_vars"),
        ("n_variants", "n_variants"),
    ),
}


def batch_filename(params: GenParams, n_instances: int, batch_no: int) -> str:
    parts = [
        f"{label}-{getattr(params, attr)}"
        for label, attr in FAMILY_FILENAME_FIELDS[params.family]
    ]
    parts.append(f"n_instances-{n_instances}")
    parts.append(f"batch-{batch_no}")
    return "_".join(parts) + ".json"


def derive_seed(*parts) -> int:
    digest = hashlib.sha256("|".join(str(p) for p in parts).encode()).digest()
    return int.from_bytes(digest[:8], "big")


def generate_batch(params: GenParams, n_instances: int) -> list[PairedInstance]:
    """n deterministic instances; params.seed acts as the batch seed."""
    return [
        generate_pair(replace(params, seed=derive_seed(params.seed, i)))
        for i in range(n_instances)
    ]


def write_batch(
    out_dir: Path | str,
    params: GenParams,
    instances: list[PairedInstance],
    batch_no: int = 1,
) -> Path:
    out_dir = Path(out_dir) / params.family.value
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / batch_filename(params, len(instances), batch_no)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "family": params.family.value,
        "params": params_to_dict(params),
        "instances": [instance_to_dict(i) for i in instances],
    }
    path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    return path


def read_batch(path: Path | str) -> list[PairedInstance]:
    payload = json.loads(Path(path).read_text())
    return [instance_from_dict(d) for d in payload["instances"]]
