from app.models.plan_models import MissionPlan, Vertex


def chain(robot, *tasks, closed=True):
    """Vertex sequence start -> tasks -> end of one robot"""
    seq = (Vertex.start(robot),) + tuple(Vertex.task(t) for t in tasks)
    return seq + (Vertex.end(robot),) if closed else seq


def random_task_order(instance, rng):
    """Random order of all tasks that respects the precedence pairs"""
    preds = {t: set(instance.predecessors(t)) for t in instance.task_ids}
    placed, order = set(), []
    while len(order) < len(preds):
        ready = [t for t in instance.task_ids if t not in placed and preds[t] <= placed]
        task = rng.choice(ready)
        order.append(task)
        placed.add(task)
    return order


def random_feasible_plan(instance, rng, order=None):
    """Random capable assignment; every robot visits its tasks in one shared precedence-respecting order"""
    order = order or random_task_order(instance, rng)
    assignment = {t: rng.choice(instance.capable_alliances(t)).id for t in instance.task_ids}
    sequences = {
        r: chain(r, *(t for t in order if r in instance.alliance(assignment[t]).members))
        for r in instance.robot_ids
    }
    return MissionPlan(sequences, assignment)


def random_topological_order(succ, rng):
    indegree = {v: 0 for v in succ}
    for targets in succ.values():
        for w in targets:
            indegree[w] += 1
    ready = [v for v, d in indegree.items() if d == 0]
    order = []
    while ready:
        v = ready.pop(rng.randrange(len(ready)))
        order.append(v)
        for w in succ[v]:
            indegree[w] -= 1
            if indegree[w] == 0:
                ready.append(w)
    return order
