import json
import os

import pytest

import main
from history_check.helper.lab_journal import LabJournal
from history_check.helper.load_store import load_hamiltonian_terms, read_stats_csv
from history_check.testbed.statistics import STATS_COLUMNS


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    for name in list(os.environ):
        if name.startswith(main.ENV_PREFIX):
            monkeypatch.delenv(name)


def read_json(path):
    with open(path, 'r') as infile:
        return json.load(infile)


@pytest.mark.parametrize('name, output_energy', [('const1', 0.5), ('const0', 0.0)])
def test_dump_writes_hamiltonians_and_diagnostics(tmp_path, name, output_energy):
    assert main.main(['dump', '--instance', name, '--out', str(tmp_path)]) == main.EXIT_OK
    report = read_json(tmp_path / 'dump.json')
    assert report['instance'] == name
    energies = report['diagnostics']['psi0']['term_energies']
    assert energies['output'] == pytest.approx(output_energy, abs=1e-9)
    assert energies['propagation'] == pytest.approx(0.0, abs=1e-9)
    assert report['plan']['k0'] >= 1
    terms = load_hamiltonian_terms(str(tmp_path / 'H0.json'))
    assert sum(abs(s.coeff) for s in terms) == pytest.approx(read_json(tmp_path / 'H0.json')['sum_abs'])


def test_instance_or_circuit_is_required():
    with pytest.raises(SystemExit) as info:
        main.main(['dump'])
    assert info.value.code == main.EXIT_USAGE


def test_run_is_reproducible(tmp_path):
    first, second = tmp_path / 'first.jsonl', tmp_path / 'second.jsonl'
    for path in (first, second):
        assert main.main(['run', '--instance', 'const1', '--seed', '3', '--out', str(path)]) == main.EXIT_OK
    assert first.read_bytes() == second.read_bytes()
    lines = first.read_text().splitlines()
    summary = json.loads(lines[-1])
    assert len(lines) == summary['k0'] + summary['k1'] + 1


def test_stats_needs_a_seed():
    with pytest.raises(SystemExit) as info:
        main.main(['stats', '--instance', 'const1'])
    assert info.value.code == main.EXIT_USAGE


def test_small_stats_campaign_writes_csv_and_journal(tmp_path):
    out = tmp_path / 'stats.csv'
    argv = ['stats', '--instance', 'const1', '--seed', '1', '--trials', '3', '--u', '1.0',
            '--strategy', 'swap_psi', '--out', str(out), '--base-dir', str(tmp_path)]
    assert main.main(argv) == main.EXIT_OK
    assert out.read_text().startswith('# history-check stats v1\n')
    frame = read_stats_csv(str(out))
    assert list(frame.columns) == STATS_COLUMNS
    assert frame.loc[0, 'instance'] == 'const1'
    assert frame.loc[0, 'trials'] == 3
    assert main.main(argv) == main.EXIT_OK
    journal = LabJournal(str(tmp_path), STATS_COLUMNS)
    assert journal.next_line_number == 2
    assert journal.find_line(1)['strategy'] == 'swap_psi'


def test_budget_exit_code():
    assert main.main(['run', '--instance', 'const1', '--seed', '0', '--budget', '10']) == main.EXIT_BUDGET


def test_promise_violating_circuit_file_collapses(tmp_path):
    circuit = tmp_path / 'lonely_coin.txt'
    circuit.write_text('qubits 1\nh 0\n')
    assert main.main(['run', '--circuit', str(circuit), '--seed', '0']) == main.EXIT_GAP


def test_malformed_circuit_file(tmp_path):
    circuit = tmp_path / 'broken.txt'
    circuit.write_text('qubits 1\nfoo 0\n')
    assert main.main(['dump', '--circuit', str(circuit)]) == main.EXIT_IO


def test_dump_hamiltonian(tmp_path):
    out = tmp_path / 'H1.json'
    assert main.main(['dump-hamiltonian', '--instance', 'const1', '--variant', 'H1', '--out', str(out)]) == main.EXIT_OK
    records = read_json(out)
    assert {r['word']: r['coeff'] for r in records} == pytest.approx({'II': 1.0, 'ZI': -0.5, 'IX': -0.5})
    assert all(set(r) == {'word', 'coeff', 'tag'} for r in records)


def test_environment_defaults_and_flag_precedence(monkeypatch):
    monkeypatch.setenv('HC_INSTANCE', 'const1')
    monkeypatch.setenv('HC_U', '2.5')
    monkeypatch.setenv('HC_KEEP_IDENTITY_TERM', 'false')
    arglist = main.parse_args(['dump'])
    assert (arglist.instance, arglist.u, arglist.keep_identity_term) == ('const1', 2.5, False)
    arglist = main.parse_args(['dump', '--instance', 'const0', '--u', '4'])
    assert (arglist.instance, arglist.u) == ('const0', 4.0)
