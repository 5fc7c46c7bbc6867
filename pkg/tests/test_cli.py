import json
from pathlib import Path
from typing import List

import pytest
from pytest_mock import MockerFixture

from migration_balancer.cli import main
from migration_balancer.model import Scenario
from migration_balancer.scenarios import random_scenario, serialize_assignment, serialize_scenario
from tests.utils import moved, unsolvable_scenario, write_scenario


def test_solve_with_fullscan(
    reference_scenario: Scenario, tmp_path: Path, capsys: pytest.CaptureFixture[str],
) -> None:
    path = write_scenario(tmp_path, reference_scenario)
    assert main(['solve', '--scenario', str(path), '--strategy', 'fullscan']) == 0
    out = capsys.readouterr().out
    assert 'Scenario: scenario' in out
    row = next(line for line in out.splitlines() if line.startswith('FULLSCAN strategy'))
    assert row.split()[-1] == '7'


def test_solve_unknown_strategy(
    reference_scenario: Scenario, tmp_path: Path, capsys: pytest.CaptureFixture[str],
) -> None:
    path = write_scenario(tmp_path, reference_scenario)
    assert main(['solve', '--scenario', str(path), '-s', 'fullscan,annealing']) == 2
    assert "unknown strategy 'annealing'" in capsys.readouterr().err


def test_solve_unsolvable(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    path = write_scenario(tmp_path, unsolvable_scenario())
    argv = ['solve', '--scenario', str(path), '-s', 'ijiids08', '--timeout', '1', '--max-cycles', '20', '--runs', '1']
    assert main(argv) == 1
    assert 'no solution' in capsys.readouterr().out


def test_solve_timeout_json_is_reproducible(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    path = write_scenario(tmp_path, unsolvable_scenario())
    argv = ['solve', '--scenario', str(path), '-s', 'ijiids08', '--timeout', '0.3', '--runs', '1',
            '--format', 'json']
    assert main(argv) == 1
    first = capsys.readouterr().out
    assert main(argv) == 1
    assert capsys.readouterr().out == first
    run = json.loads(first)['strategies'][0]['runs'][0]
    assert run['status'] == 'no-solution'
    assert run['budget_exhausted'] is True
    assert 'cycles' not in run


def test_solve_parse_error(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    path = tmp_path / 'broken.txt'
    path.write_text("resources cpu\nbogus line\n", encoding='utf-8')
    assert main(['solve', '--scenario', str(path)]) == 2
    assert 'line 2:' in capsys.readouterr().err


def test_solve_missing_file(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    assert main(['solve', '--scenario', str(tmp_path / 'absent.txt')]) == 2
    assert capsys.readouterr().err.startswith('migration-balancer solve: ')


@pytest.mark.parametrize(
    "argv",
    [
        ['solve', '--scenario', 'x', '--runs', '0'],
        ['solve', '--scenario', 'x', '--timeout', '-1'],
        ['paper', '--test', '9'],
        ['paper'],
        [],
    ],
)
def test_usage_errors(argv: List[str], capsys: pytest.CaptureFixture[str]) -> None:
    assert main(argv) == 2
    assert 'usage:' in capsys.readouterr().err


def test_help(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(['--help']) == 0
    assert 'solve' in capsys.readouterr().out


def test_verify_initial_assignment(
    reference_scenario: Scenario, tmp_path: Path, capsys: pytest.CaptureFixture[str],
) -> None:
    scenario_path = write_scenario(tmp_path, reference_scenario)
    assignment_path = tmp_path / 'initial.txt'
    assignment_path.write_text(serialize_assignment(reference_scenario.initial, reference_scenario.space))

    assert main(['verify', '--scenario', str(scenario_path), '--assignment', str(assignment_path)]) == 1
    out = capsys.readouterr().out
    assert out.splitlines()[0] == 'Verdict: overloaded'
    assert 'Node01  cpu: -26, memory: +38  (overloaded)' in out
    assert 'Transformation cost: 0 (all tasks migrated: 45)' in out


def test_verify_stable_assignment(
    reference_scenario: Scenario, tmp_path: Path, capsys: pytest.CaptureFixture[str],
) -> None:
    scenario_path = write_scenario(tmp_path, reference_scenario)
    target = moved(reference_scenario, 'J03', 'J06', to='Node02')
    assignment_path = tmp_path / 'final.txt'
    assignment_path.write_text(serialize_assignment(target, reference_scenario.space))

    assert main(['verify', '--scenario', str(scenario_path), '--assignment', str(assignment_path)]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == 'Verdict: stable'
    assert 'Transformation cost: 7 (all tasks migrated: 45)' in out


def test_verify_incomplete_assignment(
    reference_scenario: Scenario, tmp_path: Path, capsys: pytest.CaptureFixture[str],
) -> None:
    scenario_path = write_scenario(tmp_path, reference_scenario)
    assignment_path = tmp_path / 'partial.txt'
    assignment_path.write_text("assign J01 Node01\n")

    assert main(['verify', '--scenario', str(scenario_path), '--assignment', str(assignment_path)]) == 2
    assert "'J02'" in capsys.readouterr().err


def test_paper(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(['paper', '--test', '1', '--strategies', 'fullscan,balance']) == 0
    out = capsys.readouterr().out
    rows = [line for line in out.splitlines() if line.startswith(('FULLSCAN', 'BALANCE'))]
    assert [row.split()[-1] for row in rows[:2]] == ['7', '7']


def test_paper_json_is_reproducible(capsys: pytest.CaptureFixture[str]) -> None:
    argv = ['paper', '--test', '5', '--strategies', 'ijiids08', '--seed', '7', '--runs', '5', '--format', 'json']
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    second = capsys.readouterr().out
    assert first == second
    data = json.loads(first)
    assert data['seed'] == 7
    assert [run['seed'] for run in data['strategies'][0]['runs']] == [7, 8, 9, 10, 11]


def test_paper_entropy_seed(mocker: MockerFixture, capsys: pytest.CaptureFixture[str]) -> None:
    seed_sequence = mocker.patch('migration_balancer.cli.np.random.SeedSequence')
    seed_sequence.return_value.entropy = 123456789
    assert main(['paper', '--test', '1', '-s', 'greedy', '--entropy']) == 0
    assert 'Base seed: 123456789' in capsys.readouterr().out


def test_verbose_logging(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(['-v', 'paper', '--test', '1', '-s', 'greedy']) == 0
    assert 'greedy: stable, cost 7' in capsys.readouterr().err


def test_oracle_output_is_an_assignment_file(
    reference_scenario: Scenario, tmp_path: Path, capsys: pytest.CaptureFixture[str],
) -> None:
    scenario_path = write_scenario(tmp_path, reference_scenario)
    assert main(['oracle', '--scenario', str(scenario_path)]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == '# optimal, cost 7, 256 assignments checked'

    assignment_path = tmp_path / 'optimal.txt'
    assignment_path.write_text(out)
    assert main(['verify', '--scenario', str(scenario_path), '--assignment', str(assignment_path)]) == 0
    assert 'Transformation cost: 7' in capsys.readouterr().out


def test_oracle_json(reference_scenario: Scenario, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    scenario_path = write_scenario(tmp_path, reference_scenario)
    assert main(['oracle', '--scenario', str(scenario_path), '--format', 'json']) == 0
    data = json.loads(capsys.readouterr().out)
    assert (data['status'], data['cost'], data['visited']) == ('optimal', 7, 256)
    assert data['assignment']['J06'] == 'Node02'


def test_oracle_unsolvable(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    scenario_path = write_scenario(tmp_path, unsolvable_scenario())
    assert main(['oracle', '--scenario', str(scenario_path)]) == 1
    assert capsys.readouterr().out.startswith('# infeasible')


def test_generate(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(['generate', '--seed', '3']) == 0
    assert capsys.readouterr().out == serialize_scenario(random_scenario(3))
