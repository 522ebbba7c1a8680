import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pairbench.dsl import (
    AddAssign,
    AndAssign,
    Assign,
    Init,
    LoopBlock,
    MalformedProgram,
    MultiInit,
    NotStraightLine,
    OrAssign,
    ParseError,
    Program,
    StepLimitExceeded,
    SubAssign,
    UninitialisedRead,
    Var,
    backward_slice,
    critical_path_length,
    env_by_name,
    execute,
    nesting_depth,
    parse_source,
    render_source,
    restrict,
)

A0, A1, A2, A3 = Var(0), Var(1), Var(2), Var(3)


def figure_program() -> Program:
    # a0=-1; a1=0; a2=-6; a1+=a2; a0=a2; a0-=a0; a1=a0; a0-=a2
    return Program(
        var_count=3,
        body=(
            Init(A0, -1),
            Init(A1, 0),
            Init(A2, -6),
            AddAssign(A1, A2),
            Assign(A0, A2),
            SubAssign(A0, A0),
            Assign(A1, A0),
            SubAssign(A0, A2),
        ),
    )


def test_execute_figure_program():
    final, trace = execute(figure_program())
    assert final == {0: 6, 1: 0, 2: -6}
    assert env_by_name(final) == {"a0": 6, "a1": 0, "a2": -6}
    assert len(trace) == 8


def test_execute_noop_program():
    final, trace = execute(Program(1, (Init(A0, 0),)))
    assert final == {0: 0}
    assert len(trace) == 1


def test_execute_simple_loop():
    prog = Program(1, (Init(A0, 0), LoopBlock(3, (AddAssign(A0, 1),))))
    final, trace = execute(prog)
    assert final == {0: 3}
    # one init plus three dynamic executions of the same static statement
    assert [idx for idx, _ in trace] == [0, 1, 1, 1]


def test_execute_is_deterministic():
    prog = figure_program()
    assert execute(prog) == execute(prog)


def test_trace_last_snapshot_equals_final():
    final, trace = execute(figure_program())
    assert trace[-1][1] == final


def test_uninitialised_read_rejected():
    prog = Program(2, (Init(A0, 1), AddAssign(A0, A1)))
    with pytest.raises((UninitialisedRead, MalformedProgram)):
        execute(prog)


def test_step_limit_exceeded():
    prog = Program(1, (Init(A0, 0), LoopBlock(100, (AddAssign(A0, 1),))))
    with pytest.raises(StepLimitExceeded):
        execute(prog, step_limit=10)


def test_out_of_range_variable_rejected():
    prog = Program(1, (Init(A1, 0),))
    with pytest.raises(MalformedProgram):
        execute(prog)


def test_logic_requires_01_inits():
    bad = Program(2, (Init(A0, 3), Init(A1, 1), AndAssign(A0, A1)))
    with pytest.raises(MalformedProgram):
        execute(bad)


def test_logic_ops_yield_01():
    prog = Program(
        2,
        (
            Init(A0, 1),
            Init(A1, 0),
            OrAssign(A1, A0),
            AndAssign(A0, A1),
            AndAssign(A1, A1),
        ),
    )
    final, trace = execute(prog)
    for _, env in trace:
        assert set(env.values()) <= {0, 1}
    assert final == {0: 1, 1: 1}


def test_multi_init_assigns_all():
    prog = Program(3, (MultiInit((A0, A1, A2), 1), SubAssign(A0, A1)))
    final, _ = execute(prog)
    assert final == {0: 0, 1: 1, 2: 1}


def test_render_init_exact():
    assert render_source(Program(1, (Init(A0, -1),))) == "a0=-1"


def test_render_add_assign_exact():
    prog = Program(3, (Init(A1, 0), Init(A2, 0), AddAssign(A1, A2)))
    assert render_source(prog).splitlines()[-1] == "a1 += a2"


def test_render_multi_init():
    prog = Program(3, (MultiInit((A0, A1, A2), 1),))
    assert render_source(prog) == "a0 = a1 = a2 = 1"


def test_render_nested_loop_shape():
    prog = Program(
        1,
        (
            Init(A0, 0),
            LoopBlock(2, (LoopBlock(2, (AddAssign(A0, 1),)),)),
        ),
    )
    lines = render_source(prog).splitlines()
    assert lines == [
        "a0=0",
        "for _ in range(2):",
        "    for _ in range(2):",
        "        a0 += 1",
    ]
    assert nesting_depth(prog) == 2


def test_parse_round_trip_figure():
    prog = figure_program()
    assert parse_source(render_source(prog)) == prog


def test_parse_semicolon_line():
    prog = parse_source("a0=-1; a1=0; a2=-6\na1 += a2")
    final, _ = execute(prog)
    assert final == {0: -1, 1: -6, 2: -6}


def test_parse_rejects_garbage():
    with pytest.raises(ParseError):
        parse_source("a0 *= 2")


def test_slice_chain_of_updates():
    prog = Program(
        1,
        (Init(A0, 0),) + tuple(AddAssign(A0, 1) for _ in range(5)),
    )
    assert backward_slice(prog, A0) == set(range(6))
    assert critical_path_length(prog, A0) == 5


def test_slice_two_element_chain():
    prog = Program(
        4,
        (
            Init(A0, 1),
            Init(A1, 2),
            Init(A2, 3),
            Init(A3, 0),
            AddAssign(A0, A1),
            Assign(A3, A2),
        ),
    )
    assert backward_slice(prog, A3) == {2, 5}
    assert critical_path_length(prog, A3) == 1


def test_slice_no_update_after_init():
    prog = Program(2, (Init(A0, 4), Init(A1, 0), AddAssign(A1, 2)))
    assert critical_path_length(prog, A0) == 0


def test_slice_requires_straight_line():
    prog = Program(1, (Init(A0, 0), LoopBlock(2, (AddAssign(A0, 1),))))
    with pytest.raises(NotStraightLine):
        backward_slice(prog, A0)


def test_slice_assign_kills_history():
    prog = Program(
        2,
        (
            Init(A0, 1),
            Init(A1, 5),
            AddAssign(A0, 3),
            Assign(A0, A1),
            AddAssign(A0, 2),
        ),
    )
    sliced = backward_slice(prog, A0)
    assert 2 not in sliced  # overwritten by the Assign
    assert sliced == {1, 3, 4}


@settings(max_examples=200, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**32 - 1))
def test_slice_soundness_random_programs(seed):
    from pairbench.taskgen import random_straight_line
    import random

    rng = random.Random(seed)
    prog = random_straight_line(
        rng,
        n_ops=rng.randint(1, 30),
        n_vars=rng.randint(2, 6),
        op_groups=("add_sub", "mov"),
    )
    target = Var(rng.randrange(prog.var_count))
    full, _ = execute(prog)
    sliced = restrict(prog, backward_slice(prog, target))
    partial, _ = execute(sliced)
    assert partial[target.index] == full[target.index]


@settings(max_examples=200, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**32 - 1))
def test_render_parse_round_trip_random(seed):
    from pairbench.taskgen import random_straight_line
    import random

    rng = random.Random(seed)
    prog = random_straight_line(
        rng,
        n_ops=rng.randint(1, 25),
        n_vars=rng.randint(2, 5),
        op_groups=("add_sub", "mov"),
    )
    reparsed = parse_source(render_source(prog))
    assert reparsed == prog
    assert execute(reparsed)[0] == execute(prog)[0]
