import sys, os
import argparse
import collections
import json
import logging
import math

from history_check.agents.bob import STRATEGIES, make_strategy
from history_check.agents.protocol import (DEFAULT_TEST_BUDGET, DEFAULT_U, BudgetExceededError, plan_repetitions,
                                           prepare_protocol, run_trial)
from history_check.environment.circuit import CircuitFormatError, Instance, classify_circuit, get_instance, parse_circuit, acceptance_probability
from history_check.environment.statevector import ResourceLimitError, expectation
from history_check.helper.lab_journal import LabJournal
from history_check.helper.load_store import dump_directory, save_dump, save_json, write_stats_csv, write_transcript
from history_check.helper.utils import format_float, str2bool
from history_check.tasks.hamiltonian import (GapCollapseError, build_clock_hamiltonian, completeness_bound,
                                             compute_thresholds, hoeffding_bound, soundness_bound)
from history_check.tasks.history import build_history_state, layout_of, term_energies
from history_check.testbed.statistics import STATS_COLUMNS, estimate_statistics

logger = logging.getLogger('history_check')

ENV_PREFIX = 'HC_'
EXIT_OK, EXIT_IO, EXIT_USAGE, EXIT_GAP, EXIT_BUDGET = 0, 1, 2, 3, 4


def _env(name, default=None):
    """ default of a flag, taken from the HC_ prefixed environment variable if set """
    return os.environ.get(ENV_PREFIX + name, default)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--instance", type=str, default=_env('INSTANCE'), help="name of a catalog instance")
    common.add_argument("--circuit", type=str, default=_env('CIRCUIT'), help="circuit file to use instead of a catalog instance")
    common.add_argument("--u", type=float, default=_env('U', DEFAULT_U), help="soundness exponent u")
    common.add_argument("--strategy", type=str, default=_env('STRATEGY', 'honest'), choices=STRATEGIES, help="Bob's strategy")
    common.add_argument("--state", type=str, default=_env('STATE'), help="product state for the fixed_state strategy, e.g. 0+1")
    common.add_argument("--decoy", type=str, default=_env('DECOY'), help="catalog circuit for the wrong_instance strategy")
    common.add_argument("--trials", type=int, default=_env('TRIALS', 200), help="number of protocol runs of a stats campaign")
    common.add_argument("--seed", type=int, default=_env('SEED'), help="root seed of all random streams")
    common.add_argument("--out", type=str, default=_env('OUT'), help="output file or directory, '-' for stdout")
    common.add_argument("--variant", type=str, default=_env('VARIANT', 'H0'), choices=('H0', 'H1'), help="Hamiltonian exported by dump-hamiltonian")
    common.add_argument("--keep-identity-term", type=str2bool, default=_env('KEEP_IDENTITY_TERM', 'true'), help="keep the identity word among the sampled terms")
    common.add_argument("--budget", type=int, default=_env('BUDGET', DEFAULT_TEST_BUDGET), help="maximum number of energy tests k0 + k1 per run")
    common.add_argument("--base-dir", type=str, default=_env('BASE_DIR', './'), help="directory the testruns are saved in")
    common.add_argument("--log-level", type=str, default=_env('LOG_LEVEL', 'WARNING'), help="logging level")

    parser = argparse.ArgumentParser("Verifiable delegated computation by history-state energy tests")
    subparsers = parser.add_subparsers(dest='command')
    subparsers.required = True
    subparsers.add_parser('dump', parents=[common], help="write Hamiltonians, thresholds, plan and diagnostics")
    subparsers.add_parser('dump-hamiltonian', parents=[common], help="export one Hamiltonian as a JSON term list")
    subparsers.add_parser('run', parents=[common], help="run the protocol once and write the JSON-lines transcript")
    subparsers.add_parser('stats', parents=[common], help="run a campaign and write the CSV summary")
    return parser


def parse_args(argv=None):
    parser = build_parser()
    arglist = parser.parse_args(argv)
    if (arglist.instance is None) == (arglist.circuit is None):
        parser.error("exactly one of --instance and --circuit is required")
    if not arglist.u > 0:
        parser.error(f"--u must be positive, got {arglist.u}")
    if arglist.budget < 1:
        parser.error(f"--budget must be at least 1, got {arglist.budget}")
    if arglist.command == 'stats':
        if arglist.seed is None:
            parser.error("stats needs --seed")
        if arglist.trials < 1:
            parser.error(f"--trials must be at least 1, got {arglist.trials}")
    return arglist


class RunConfig(collections.namedtuple('RunConfig', [
        'command', 'instance', 'circuit', 'u', 'strategy', 'strategy_params', 'trials', 'seed',
        'out', 'variant', 'keep_identity', 'budget', 'base_dir'])):
    """ the validated settings of one CLI invocation """
    @classmethod
    def from_args(cls, arglist) -> 'RunConfig':
        params = {}
        if arglist.strategy == 'fixed_state':
            params['state'] = arglist.state
        elif arglist.strategy == 'wrong_instance':
            params['decoy'] = arglist.decoy
        return cls(arglist.command, arglist.instance, arglist.circuit, arglist.u, arglist.strategy, params,
                   arglist.trials, 0 if arglist.seed is None else arglist.seed, arglist.out, arglist.variant,
                   arglist.keep_identity_term, arglist.budget, arglist.base_dir)

    def load_instance(self) -> Instance:
        if self.instance is not None:
            return get_instance(self.instance)
        with open(self.circuit, 'r') as infile:
            text = infile.read()
        label = os.path.splitext(os.path.basename(self.circuit))[0]
        return classify_circuit(parse_circuit(text, label))


def _r_text(r_bound):
    if r_bound is None:
        return None
    return format_float(r_bound) if math.isinf(r_bound) else r_bound


def cmd_dump(config: RunConfig) -> int:
    inst = config.load_instance()
    c = inst.circuit
    H0 = build_clock_hamiltonian(c, 'H0', config.keep_identity)
    H1 = build_clock_hamiltonian(c, 'H1', config.keep_identity)
    th0, th1 = compute_thresholds(H0, H1, inst)
    plan = plan_repetitions(th0, th1, config.u, config.budget)
    psi0, psi1 = build_history_state(c, 'psi0'), build_history_state(c, 'psi1')
    layout = layout_of(c)
    report = {
        'instance': inst.name,
        'membership': inst.membership,
        'r_bound': _r_text(inst.r_bound),
        'twin': inst.twin,
        'n': layout.n, 'T': layout.T, 'm': layout.m,
        'p_acc': acceptance_probability(c),
        'keep_identity_term': config.keep_identity,
        'thresholds0': th0.to_dict(),
        'thresholds1': th1.to_dict(),
        'plan': {'u': plan.u, 'k0': plan.k0, 'k1': plan.k1},
        'bounds': {
            'completeness': completeness_bound(plan.u),
            'soundness': soundness_bound(plan.u),
            'hoeffding0': hoeffding_bound(plan.k0, th0.gap),
            'hoeffding1': hoeffding_bound(plan.k1, th1.gap),
        },
        'diagnostics': {
            'psi0': {'norm': psi0.norm(), 'energy': expectation(psi0, H0), 'term_energies': term_energies(psi0, H0)},
            'psi1': {'norm': psi1.norm(), 'energy': expectation(psi1, H1), 'term_energies': term_energies(psi1, H1)},
        },
    }
    save_dir = config.out if config.out not in (None, '-') else dump_directory(config.base_dir, inst.name)
    for file_name in save_dump(save_dir, H0, H1, report):
        print(f'wrote {file_name}')
    print(f'{inst.name}: a={th0.a:.6g}, b={th0.b:.6g}, alpha={th0.alpha:.6g}, beta={th0.beta:.6g}, k0={plan.k0}, k1={plan.k1}')
    return EXIT_OK


def cmd_dump_hamiltonian(config: RunConfig) -> int:
    inst = config.load_instance()
    H = build_clock_hamiltonian(inst.circuit, config.variant, config.keep_identity)
    records = [{'word': r['word'], 'coeff': r['coeff'], 'tag': r['tag']} for r in H.to_records()]
    if config.out in (None, '-'):
        print(json.dumps(records, indent=4))
    else:
        save_json(config.out, records)
        print(f'wrote {len(records)} terms of {H.label} to {config.out}')
    return EXIT_OK


def cmd_run(config: RunConfig) -> int:
    inst = config.load_instance()
    setup = prepare_protocol(inst, config.u, config.keep_identity, config.budget)
    transcript = run_trial(setup, make_strategy(config.strategy, **config.strategy_params), config.seed, 0)
    write_transcript(transcript, config.out)
    if config.out not in (None, '-'):
        print(f'{inst.name}/{config.strategy}: eta0={transcript.eta0}/{setup.plan.k0}, '
              f'eta1={transcript.eta1}/{setup.plan.k1} -> {transcript.conclusion}')
    return EXIT_OK


def cmd_stats(config: RunConfig) -> int:
    inst = config.load_instance()
    strategy = make_strategy(config.strategy, **config.strategy_params)
    summary = estimate_statistics(inst, config.u, strategy, config.trials, config.seed,
                                  config.keep_identity, config.budget)
    row = summary.row()
    to_file = config.out not in (None, '-')
    write_stats_csv([row], STATS_COLUMNS, config.out)
    lab_journal = LabJournal(config.base_dir, STATS_COLUMNS)
    line_number = lab_journal.append_campaign(row, config.out if to_file else None)
    if to_file:
        print(f'{inst.name}/{config.strategy}: ' +
              ', '.join(f'{c}={f:.4f}' for c, f in summary.frequencies.items()) +
              f' (judgment: {summary.judgment}, journal line {line_number})')
    return EXIT_OK


COMMANDS = {
    'dump': cmd_dump,
    'dump-hamiltonian': cmd_dump_hamiltonian,
    'run': cmd_run,
    'stats': cmd_stats,
}


def main(argv=None) -> int:
    arglist = parse_args(argv)
    logging.basicConfig(level=getattr(logging, str(arglist.log_level).upper(), logging.WARNING),
                        format='%(asctime)s %(levelname)s %(name)s: %(message)s')
    config = RunConfig.from_args(arglist)
    try:
        return COMMANDS[config.command](config)
    except GapCollapseError as e:
        print(f'error: {e}; the instance cannot be used for protocol statistics', file=sys.stderr)
        return EXIT_GAP
    except BudgetExceededError as e:
        print(f'error: {e}; raise --budget or lower --u', file=sys.stderr)
        return EXIT_BUDGET
    except (ResourceLimitError, CircuitFormatError, OSError) as e:
        print(f'error: {e}', file=sys.stderr)
        return EXIT_IO
    except ValueError as e:
        print(f'error: {e}', file=sys.stderr)
        return EXIT_USAGE


if __name__ == '__main__':
    sys.exit(main())
