"""A tiny imperative language: AST, interpreter, source renderer, and slicing.

Programs are straight-line sequences of integer assignments plus constant-bound
loops. Executing a program is the ground-truth oracle for every generated task.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union

DEFAULT_STEP_LIMIT = 10**6
MAX_LOOP_DEPTH = 9


class DslError(Exception):
    pass


class MalformedProgram(DslError):
    pass


class UninitialisedRead(DslError):
    pass


class StepLimitExceeded(DslError):
    pass


class NotStraightLine(DslError):
    pass


class ParseError(DslError):
    pass


@dataclass(frozen=True)
class Var:
    """A variable reference, rendered as ``a<index>``."""

    index: int

    @property
    def name(self) -> str:
        return f"a{self.index}"


Operand = Union[Var, int]


@dataclass(frozen=True)
class Init:
    var: Var
    value: int


@dataclass(frozen=True)
class MultiInit:
    vars: tuple[Var, ...]
    value: int


@dataclass(frozen=True)
class Assign:
    dst: Var
    src: Var


@dataclass(frozen=True)
class AddAssign:
    dst: Var
    src: Operand


@dataclass(frozen=True)
class SubAssign:
    dst: Var
    src: Operand


@dataclass(frozen=True)
class AndAssign:
    dst: Var
    src: Var


@dataclass(frozen=True)
class OrAssign:
    dst: Var
    src: Var


SimpleStmt = Union[Init, MultiInit, Assign, AddAssign, SubAssign, AndAssign, OrAssign]


@dataclass(frozen=True)
class LoopBlock:
    count: int
    body: tuple["Stmt", ...]


Stmt = Union[SimpleStmt, LoopBlock]

Env = dict[int, int]
Trace = tuple[tuple[int, Env], ...]


@dataclass(frozen=True)
class Program:
    var_count: int
    body: tuple[Stmt, ...]

    def is_straight_line(self) -> bool:
        return not any(isinstance(s, LoopBlock) for s in self.body)

    def validate(self) -> None:
        if self.var_count < 0:
            raise MalformedProgram("negative variable count")
        _check_block(self.body, depth=0, var_count=self.var_count)
        initialised: set[int] = set()
        _check_init_before_read(self.body, initialised)
        if _has_logic(self.body):
            for value in _init_values(self.body):
                if value not in (0, 1):
                    raise MalformedProgram(
                        "logical statements require all initial values in {0, 1}"
                    )


def reads(stmt: SimpleStmt) -> set[int]:
    if isinstance(stmt, (Init, MultiInit)):
        return set()
    if isinstance(stmt, Assign):
        return {stmt.src.index}
    out = {stmt.dst.index}
    if isinstance(stmt.src, Var):
        out.add(stmt.src.index)
    return out


def writes(stmt: SimpleStmt) -> set[int]:
    if isinstance(stmt, MultiInit):
        return {v.index for v in stmt.vars}
    if isinstance(stmt, Init):
        return {stmt.var.index}
    return {stmt.dst.index}


def _kills(stmt: SimpleStmt) -> bool:
    # True when the statement fully redefines its destination(s).
    return isinstance(stmt, (Init, MultiInit, Assign))


def _check_block(body: tuple[Stmt, ...], depth: int, var_count: int) -> None:
    for stmt in body:
        if isinstance(stmt, LoopBlock):
            if stmt.count < 1:
                raise MalformedProgram("loop count must be a positive constant")
            if depth + 1 > MAX_LOOP_DEPTH:
                raise MalformedProgram(f"loop nesting exceeds {MAX_LOOP_DEPTH}")
            _check_block(stmt.body, depth + 1, var_count)
            continue
        if isinstance(stmt, MultiInit) and len(stmt.vars) < 2:
            raise MalformedProgram("MultiInit needs at least two variables")
        for index in reads(stmt) | writes(stmt):
            if not 0 <= index < var_count:
                raise MalformedProgram(f"a{index} outside declared range")


def _check_init_before_read(body: tuple[Stmt, ...], initialised: set[int]) -> None:
    for stmt in body:
        if isinstance(stmt, LoopBlock):
            # Constant counts are >= 1, so one pass establishes definite assignment.
            _check_init_before_read(stmt.body, initialised)
            continue
        missing = reads(stmt) - initialised
        if missing:
            raise MalformedProgram(f"a{min(missing)} read before initialisation")
        initialised |= writes(stmt)


def _has_logic(body: tuple[Stmt, ...]) -> bool:
    for stmt in body:
        if isinstance(stmt, LoopBlock):
            if _has_logic(stmt.body):
                return True
        elif isinstance(stmt, (AndAssign, OrAssign)):
            return True
    return False


def _init_values(body: tuple[Stmt, ...]) -> Iterator[int]:
    for stmt in body:
        if isinstance(stmt, LoopBlock):
            yield from _init_values(stmt.body)
        elif isinstance(stmt, (Init, MultiInit)):
            yield stmt.value


def nesting_depth(program: Program) -> int:
    def depth_of(body: tuple[Stmt, ...]) -> int:
        best = 0
        for stmt in body:
            if isinstance(stmt, LoopBlock):
                best = max(best, 1 + depth_of(stmt.body))
        return best

    return depth_of(program.body)


def execute(program: Program, step_limit: int = DEFAULT_STEP_LIMIT) -> tuple[Env, Trace]:
    """Run the program and return its final state plus the full statement trace.

    The trace pairs each dynamically executed statement's static index (leaf
    position in pre-order) with a snapshot of the state after it ran.
    """
    program.validate()
    env: Env = {}
    trace: list[tuple[int, Env]] = []
    steps = 0

    def value_of(operand: Operand) -> int:
        if isinstance(operand, Var):
            if operand.index not in env:
                raise UninitialisedRead(f"{operand.name} read before initialisation")
            return env[operand.index]
        return operand

    def run_block(body: tuple[Stmt, ...], start_index: int) -> int:
        nonlocal steps
        index = start_index
        for stmt in body:
            if isinstance(stmt, LoopBlock):
                for _ in range(stmt.count):
                    index_after = run_block(stmt.body, index)
                index = index_after
                continue
            steps += 1
            if steps > step_limit:
                raise StepLimitExceeded(f"exceeded {step_limit} dynamic steps")
            if isinstance(stmt, Init):
                env[stmt.var.index] = stmt.value
            elif isinstance(stmt, MultiInit):
                for var in stmt.vars:
                    env[var.index] = stmt.value
            elif isinstance(stmt, Assign):
                env[stmt.dst.index] = value_of(stmt.src)
            elif isinstance(stmt, AddAssign):
                env[stmt.dst.index] = value_of(stmt.dst) + value_of(stmt.src)
            elif isinstance(stmt, SubAssign):
                env[stmt.dst.index] = value_of(stmt.dst) - value_of(stmt.src)
            elif isinstance(stmt, AndAssign):
                env[stmt.dst.index] = 1 if value_of(stmt.dst) != 0 and value_of(stmt.src) != 0 else 0
            elif isinstance(stmt, OrAssign):
                env[stmt.dst.index] = 1 if value_of(stmt.dst) != 0 or value_of(stmt.src) != 0 else 0
            else:
                raise MalformedProgram(f"unknown statement {stmt!r}")
            trace.append((index, dict(env)))
            index += 1
        return index

    run_block(program.body, 0)
    return dict(env), tuple(trace)


def _render_operand(src: Operand) -> str:
    return src.name if isinstance(src, Var) else str(src)


def _render_stmt(stmt: SimpleStmt) -> str:
    if isinstance(stmt, Init):
        return f"{stmt.var.name}={stmt.value}"
    if isinstance(stmt, MultiInit):
        return " = ".join(v.name for v in stmt.vars) + f" = {stmt.value}"
    if isinstance(stmt, Assign):
        return f"{stmt.dst.name} = {stmt.src.name}"
    if isinstance(stmt, AddAssign):
        return f"{stmt.dst.name} += {_render_operand(stmt.src)}"
    if isinstance(stmt, SubAssign):
        return f"{stmt.dst.name} -= {_render_operand(stmt.src)}"
    if isinstance(stmt, AndAssign):
        return f"{stmt.dst.name} &= {stmt.src.name}"
    if isinstance(stmt, OrAssign):
        return f"{stmt.dst.name} |= {stmt.src.name}"
    raise MalformedProgram(f"unknown statement {stmt!r}")


def render_source(program: Program) -> str:
    """Render the program as plain Python: one statement per line, loops as
    ``for _ in range(n):`` with 4-space indented bodies."""
    lines: list[str] = []

    def emit(body: tuple[Stmt, ...], depth: int) -> None:
        pad = "    " * depth
        for stmt in body:
            if isinstance(stmt, LoopBlock):
                lines.append(f"{pad}for _ in range({stmt.count}):")
                emit(stmt.body, depth + 1)
            else:
                lines.append(pad + _render_stmt(stmt))

    emit(program.body, 0)
    return "\n".join(lines)


_LOOP_RE = re.compile(r"^for\s+\w+\s+in\s+range\((\d+)\):$")
_VAR_RE = re.compile(r"^a(\d+)$")
_COMPOUND_RE = re.compile(r"^(a\d+)\s*(\+=|-=|&=|\|=)\s*(a\d+|-?\d+)$")
_ASSIGN_RE = re.compile(r"^(a\d+)\s*=\s*(a\d+)$")
_INIT_RE = re.compile(r"^((?:a\d+\s*=\s*)+)(-?\d+)$")


def _parse_var(token: str) -> Var:
    match = _VAR_RE.match(token)
    if not match:
        raise ParseError(f"not a variable: {token!r}")
    return Var(int(match.group(1)))


def _parse_stmt(text: str) -> SimpleStmt:
    text = text.strip()
    match = _COMPOUND_RE.match(text)
    if match:
        dst = _parse_var(match.group(1))
        op = match.group(2)
        raw = match.group(3)
        src: Operand = _parse_var(raw) if raw.startswith("a") else int(raw)
        if op == "+=":
            return AddAssign(dst, src)
        if op == "-=":
            return SubAssign(dst, src)
        if not isinstance(src, Var):
            raise ParseError(f"logical operand must be a variable: {text!r}")
        return AndAssign(dst, src) if op == "&=" else OrAssign(dst, src)
    match = _ASSIGN_RE.match(text)
    if match:
        return Assign(_parse_var(match.group(1)), _parse_var(match.group(2)))
    match = _INIT_RE.match(text)
    if match:
        targets = [
            _parse_var(tok.strip())
            for tok in match.group(1).split("=")
            if tok.strip()
        ]
        value = int(match.group(2))
        if len(targets) == 1:
            return Init(targets[0], value)
        return MultiInit(tuple(targets), value)
    raise ParseError(f"unparsable statement: {text!r}")


def parse_source(text: str) -> Program:
    """Inverse of render_source, used for round-trip checks and log replay."""
    root: list = []
    stack: list[list] = [root]
    for raw in text.splitlines():
        if not raw.strip():
            continue
        stripped = raw.lstrip(" ")
        indent = len(raw) - len(stripped)
        if indent % 4 != 0:
            raise ParseError(f"indentation not a multiple of 4: {raw!r}")
        level = indent // 4
        if level >= len(stack):
            raise ParseError(f"unexpected indent: {raw!r}")
        del stack[level + 1 :]
        body = stack[level]
        match = _LOOP_RE.match(stripped)
        if match:
            child: list = []
            body.append(("loop", int(match.group(1)), child))
            stack.append(child)
            continue
        for part in stripped.split(";"):
            if part.strip():
                body.append(_parse_stmt(part))

    def freeze(nodes: list) -> tuple[Stmt, ...]:
        out: list[Stmt] = []
        for node in nodes:
            if isinstance(node, tuple) and node and node[0] == "loop":
                inner = freeze(node[2])
                if not inner:
                    raise ParseError("loop with empty body")
                out.append(LoopBlock(node[1], inner))
            else:
                out.append(node)
        return tuple(out)

    program_body = freeze(root)
    max_index = -1
    for stmt in _iter_leaves(program_body):
        for index in reads(stmt) | writes(stmt):
            max_index = max(max_index, index)
    return Program(var_count=max_index + 1, body=program_body)


def _iter_leaves(body: tuple[Stmt, ...]) -> Iterator[SimpleStmt]:
    for stmt in body:
        if isinstance(stmt, LoopBlock):
            yield from _iter_leaves(stmt.body)
        else:
            yield stmt


def backward_slice(program: Program, target: Var) -> set[int]:
    """Indices of the statements the target's final value depends on, under the
    def-use relation. Defined for loop-free programs only."""
    if not program.is_straight_line():
        raise NotStraightLine("slicing is defined for loop-free programs")
    if not 0 <= target.index < program.var_count:
        raise MalformedProgram(f"{target.name} not declared")
    needed = {target.index}
    keep: set[int] = set()
    for i in range(len(program.body) - 1, -1, -1):
        stmt = program.body[i]
        written = writes(stmt)
        if written & needed:
            keep.add(i)
            if _kills(stmt):
                needed -= written
            needed |= reads(stmt)
    return keep


def restrict(program: Program, indices: set[int]) -> Program:
    """The subprogram containing only the given statement indices, in order."""
    body = tuple(program.body[i] for i in sorted(indices))
    return Program(var_count=program.var_count, body=body)


def critical_path_length(program: Program, target: Var) -> int:
    """Size of the target's backward slice, not counting initialisations."""
    sliced = backward_slice(program, target)
    return sum(
        1 for i in sliced if not isinstance(program.body[i], (Init, MultiInit))
    )


def env_by_name(env: Env) -> dict[str, int]:
    return {f"a{i}": v for i, v in sorted(env.items())}
