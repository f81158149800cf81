import json

import pytest

from app.models.instance_models import GeneratorConfig, ProblemClass
from app.services.constructive_heuristic import construct
from app.services.instance_generator import generate
from app.services.schedule_simulator import simulate
from app.utils.errors import InstanceValidationError, PlanFileError
from app.utils.file_handlers import (
    FileHandler,
    build_plan_document,
    instance_to_document,
    parse_instance,
    parse_instance_text,
    parse_plan,
    plan_from_document,
    resolve_instance_path,
    serialize_instance,
)


@pytest.fixture
def generated():
    return generate(GeneratorConfig(problem_class=ProblemClass.parse('3A2BCD'), seed=5))


def test_instance_round_trip_is_byte_identical(tmp_path, generated):
    path = FileHandler(str(tmp_path)).save_instance(generated, 'instance.json')
    text = open(path, encoding='utf-8').read()
    parsed = parse_instance(path)
    assert serialize_instance(parsed) == text
    assert parsed == generated


def test_incapability_is_written_as_token(generated):
    document = instance_to_document(generated)
    costs = document['static_costs'][3]['costs']
    assert document['static_costs'][3]['task'] == 4
    assert costs['2'] == 'inf'
    assert costs['4'] == 110.0
    assert document['meta'] == {'format_version': 1, 'seed': 5, 'class': '3A2BCD'}


def _document(generated, **changes):
    document = instance_to_document(generated)
    document.update(changes)
    return json.dumps(document)


def _codes(text):
    with pytest.raises(InstanceValidationError) as excinfo:
        parse_instance_text(text, source='test.json')
    return excinfo.value.codes, excinfo.value


def test_cyclic_precedence_is_rejected(generated):
    codes, error = _codes(_document(generated, precedence=[[1, 2], [2, 1]]))
    assert codes == ['cyclic_precedence']
    assert 'acyclic' in str(error)


def test_task_without_capable_alliance_is_rejected(generated):
    document = instance_to_document(generated)
    document['static_costs'][3]['costs'] = {str(a): 'inf' for a in range(1, 7)}
    codes, error = _codes(json.dumps(document))
    assert codes == ['no_capable_alliance']
    assert 'capable alliance' in str(error)


def test_malformed_document_reports_position():
    codes, error = _codes('{\n  "meta": {,\n}')
    assert codes == ['malformed_document']
    assert error.diagnostics[0].location.startswith('line 2')


def test_schema_problems_are_collected(generated):
    document = instance_to_document(generated)
    document['robots'][0]['speed'] = -1
    document['static_costs'][0]['costs']['1'] = 'lots'
    del document['alliances']
    codes, error = _codes(json.dumps(document))
    assert codes.count('schema') == 3
    locations = [d.location for d in error.diagnostics]
    assert 'robots[0].speed' in locations
    assert 'static_costs[0].costs.1' in locations


def test_negative_cost_and_unknown_ids(generated):
    document = instance_to_document(generated)
    document['static_costs'][0]['costs']['1'] = -3
    document['precedence'].append([1, 42])
    codes, _ = _codes(json.dumps(document))
    assert 'negative_cost' in codes
    assert 'unknown_id' in codes


def test_invalid_weights(generated):
    codes, _ = _codes(_document(generated, weights={'w1': 0, 'w2': 0, 'w3': 0}))
    assert codes == ['invalid_weights']


def test_plan_document_round_trip(tmp_path, generated):
    handler = FileHandler(str(tmp_path / 'out'))
    instance_path = FileHandler(str(tmp_path)).save_instance(generated, 'instance.json')
    plan, breakdown = construct(generated)
    schedule = simulate(plan, generated)
    plan_path = handler.path('plan.json')
    document = build_plan_document(instance_path, plan_path, generated, plan, schedule, breakdown,
                                   generated.weights, 'construct')
    handler.save_plan(document, 'plan.json')

    loaded = parse_plan(plan_path)
    assert loaded.instance.path == '../instance.json'
    assert resolve_instance_path(plan_path, loaded) == str(tmp_path / 'instance.json')
    assert plan_from_document(loaded) == plan
    assert loaded.objective.total == breakdown.total
    assert loaded.sequences['3'][0] == 's3'
    summary = loaded.robots['1']
    assert summary.finishing_time == pytest.approx(summary.travel_time + summary.wait + summary.task_time)


def test_broken_plan_file(tmp_path):
    path = tmp_path / 'plan.json'
    path.write_text('{"format_version": 1}')
    with pytest.raises(PlanFileError):
        parse_plan(str(path))
    path.write_text('not json')
    with pytest.raises(PlanFileError):
        parse_plan(str(path))


def test_undecodable_instance_is_malformed(tmp_path):
    path = tmp_path / 'bad.json'
    path.write_bytes(b'{"meta": "\xff\xfe"}')
    with pytest.raises(InstanceValidationError) as excinfo:
        parse_instance(str(path))
    assert excinfo.value.codes == ['malformed_document']
    assert excinfo.value.diagnostics[0].location == 'byte 10'


def test_undecodable_plan_file(tmp_path):
    path = tmp_path / 'plan.json'
    path.write_bytes(b'{"format_version": "\xff"}')
    with pytest.raises(PlanFileError, match='UTF-8'):
        parse_plan(str(path))


def test_integer_literals_are_written_back_canonically(tmp_path, generated):
    document = instance_to_document(generated)
    document['robots'][0]['speed'] = 2
    document['static_costs'][0]['costs']['1'] = 30
    path = tmp_path / 'hand_written.json'
    path.write_text(json.dumps(document, indent=2))

    canonical = serialize_instance(parse_instance(str(path)))
    written = json.loads(canonical)
    assert written['robots'][0]['speed'] == 2.0
    assert '"speed": 2.0' in canonical
    assert written['static_costs'][0]['costs']['1'] == 30.0

    path.write_text(canonical, encoding='utf-8')
    assert serialize_instance(parse_instance(str(path))) == canonical
