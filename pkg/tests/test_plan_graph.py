import pytest

from app.models.instance_models import PrecedenceSet
from app.models.plan_models import EdgeKind, IncomingEdge, MissionPlan, Vertex
from app.services.plan_graph import (
    append_task,
    as_digraph,
    augment,
    incoming_edges,
    insert_task,
    relocate,
    remove_task,
    task_slots,
)
from app.utils.errors import PlanInputError
from plan_builders import chain


def test_incoming_edges_of_coalition_task(coalition_plan, coalition_instance):
    aug = augment(coalition_plan, coalition_instance.precedence)
    edges = incoming_edges(aug, Vertex.task(2), include_precedence=False)
    assert edges == {
        IncomingEdge(Vertex.task(1), EdgeKind.PATH, 1),
        IncomingEdge(Vertex.task(4), EdgeKind.PATH, 2),
    }


def test_incoming_edges_with_precedence(coalition_plan, coalition_instance):
    aug = augment(coalition_plan, coalition_instance.precedence)
    edges = incoming_edges(aug, Vertex.task(3))
    assert edges == {
        IncomingEdge(Vertex.task(2), EdgeKind.PATH, 1),
        IncomingEdge(Vertex.task(1), EdgeKind.PRECEDENCE),
    }
    assert incoming_edges(aug, Vertex.task(3), include_precedence=False) == {
        IncomingEdge(Vertex.task(2), EdgeKind.PATH, 1),
    }


def test_start_vertex_has_no_incoming_edges(coalition_plan, coalition_instance):
    aug = augment(coalition_plan, coalition_instance.precedence)
    assert incoming_edges(aug, Vertex.start(1)) == frozenset()


def test_incoming_edges_rejects_foreign_vertex(coalition_plan, coalition_instance):
    aug = augment(coalition_plan, coalition_instance.precedence)
    with pytest.raises(PlanInputError):
        incoming_edges(aug, Vertex.task(9))
    with pytest.raises(PlanInputError):
        incoming_edges(aug, Vertex.start(7))


def test_digraph_of_empty_plan():
    open_plan = MissionPlan.empty([1, 2])
    graph = as_digraph(augment(open_plan, PrecedenceSet()))
    assert graph.number_of_nodes() == 2
    assert graph.number_of_edges() == 0

    graph = as_digraph(augment(open_plan.closed(), PrecedenceSet()))
    assert graph.number_of_nodes() == 4
    assert graph.number_of_edges() == 2


def test_digraph_of_single_robot_schedule():
    plan = MissionPlan({1: chain(1, 1, 2, 3)}, {1: 1, 2: 1, 3: 1})
    graph = as_digraph(augment(plan, PrecedenceSet()))
    assert graph.number_of_nodes() == 5
    assert graph.number_of_edges() == 4


def test_digraph_of_coalition_plan(coalition_plan, coalition_instance):
    graph = as_digraph(augment(coalition_plan, coalition_instance.precedence))
    kinds = [data['kind'] for _, _, data in graph.edges(data=True)]
    assert graph.number_of_nodes() == 8
    assert graph.number_of_edges() == 8
    assert kinds.count('path') == 7
    assert kinds.count('precedence') == 1


def test_augment_keeps_only_arcs_between_assigned_tasks(coalition_plan):
    precedence = PrecedenceSet(pairs=((1, 3), (3, 5), (5, 6)))
    assert augment(coalition_plan, precedence).precedence_arcs == ((1, 3),)


def test_relocate_swaps_two_task_chain():
    plan = MissionPlan({1: chain(1, 1, 2)}, {1: 1, 2: 1})
    moved = relocate(plan, 1, 1, {1: 2})
    assert moved.sequence(1) == chain(1, 2, 1)
    assert moved.assignment == {1: 1, 2: 1}


def test_identity_relocation_reproduces_plan(coalition_plan, coalition_instance):
    moved = relocate(coalition_plan, 2, 3, {1: 2, 2: 2}, instance=coalition_instance)
    assert moved == coalition_plan


def test_relocate_coalition_partner_task(coalition_plan, coalition_instance):
    moved = relocate(coalition_plan, 4, 1, {1: 1}, instance=coalition_instance)
    assert moved.sequence(1) == chain(1, 4, 1, 2, 3)
    assert moved.sequence(2) == chain(2, 2)
    assert moved.assignment[4] == 1


def test_relocate_round_trip(coalition_plan):
    original_positions = coalition_plan.task_positions(4)
    moved = relocate(coalition_plan, 4, 1, {1: 3})
    back = relocate(moved, 4, 2, original_positions)
    assert back == coalition_plan


def test_relocate_rejects_bad_positions(coalition_plan, coalition_instance):
    with pytest.raises(PlanInputError):
        relocate(coalition_plan, 4, 1, {1: 0})
    with pytest.raises(PlanInputError):
        relocate(coalition_plan, 4, 1, {1: 5})
    with pytest.raises(PlanInputError):
        relocate(coalition_plan, 4, 3, {1: 1}, instance=coalition_instance)
    with pytest.raises(PlanInputError):
        relocate(coalition_plan, 7, 1, {1: 1})
    with pytest.raises(PlanInputError):
        relocate(coalition_plan, 4, 9, {1: 1}, instance=coalition_instance)


def test_insert_before_end_vertex():
    plan = MissionPlan({1: chain(1, 1)}, {1: 1})
    assert task_slots(plan.sequence(1)) == 2
    grown = insert_task(plan, 2, 1, {1: 2})
    assert grown.sequence(1) == chain(1, 1, 2)


def test_append_and_remove_are_inverse():
    plan = MissionPlan.empty([1, 2])
    grown = append_task(plan, 5, 3, [1, 2])
    assert grown.sequence(1) == chain(1, 5, closed=False)
    assert grown.holders(5) == (1, 2)
    assert remove_task(grown, 5) == plan
    with pytest.raises(PlanInputError):
        append_task(grown, 5, 3, [1])
