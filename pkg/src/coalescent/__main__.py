import argparse
import dataclasses
import logging
import sys
from typing import Any, Dict, List

import yaml

from .base.coalescing_config import InvalidMaxDwellException, InvalidThresholdException, ThresholdOrderException
from .base.config import Config, InvalidConfigFileException
from .base.experiment_config import ExperimentConfig, InvalidExperimentException, Mode, OutputFormat
from .base.format_mapping import UnknownOutputFormatException
from .base.info import VERSION
from .base.orchestrator import Orchestrator
from .base.phy_profile import (
    InvalidEfficiencyProfileException,
    InvalidLineRateException,
    NegativeDurationException,
)
from .base.result_row import ResultRow
from .base.traffic_spec import (
    InvalidArrivalRateException,
    InvalidFrameSizeException,
    InvalidLoadException,
    InvalidRateScaleException,
)
from .oracle.renewal_oracle import InvalidCycleCountException
from .oracle.samplers import InvalidSamplerException, SamplerKind
from .simulation.simulator import InvalidHorizonException
from .traffic.trace import EmptyTraceException, TraceParseException, read_trace

logger = logging.getLogger(__name__)

_COMMAND_PARAMETER = 'command'
_TRACE_PATH_PARAMETER = 'trace_path'
_PROFILE_FILE_PARAMETER = 'profile-file'
_LOAD_PARAMETER = 'load'
_QF_PARAMETER = 'qf'
_QD_PARAMETER = 'qd'
_HORIZON_PARAMETER = 'horizon'
_SEEDS_PARAMETER = 'seeds'
_REPETITIONS_PARAMETER = 'repetitions'
_FORMAT_PARAMETER = 'format'
_OUT_PARAMETER = 'out'
_RATE_SCALE_PARAMETER = 'rate-scale'
_MAX_DWELL_PARAMETER = 'max-dwell'
_MODE_PARAMETER = 'mode'
_CYCLES_PARAMETER = 'cycles'
_SAMPLER_PARAMETER = 'sampler'
_JOBS_PARAMETER = 'jobs'
_LOG_LEVEL_PARAMETER = 'log-level'

_COMMAND_SWEEP = 'sweep'
_COMMAND_VALIDATE = 'validate'
_COMMAND_TRACE = 'trace'
_COMMAND_ORACLE = 'oracle'

_EXIT_VALIDATION_FAILED = 1
_EXIT_CONFIG_ERROR = 2

# Errors caused by the configuration or the input files, reported with exit status 2.
_INPUT_ERRORS = (
    InvalidConfigFileException,
    InvalidExperimentException,
    NegativeDurationException,
    InvalidLineRateException,
    InvalidEfficiencyProfileException,
    InvalidThresholdException,
    ThresholdOrderException,
    InvalidMaxDwellException,
    InvalidArrivalRateException,
    InvalidFrameSizeException,
    InvalidLoadException,
    InvalidRateScaleException,
    InvalidHorizonException,
    InvalidCycleCountException,
    InvalidSamplerException,
    UnknownOutputFormatException,
    TraceParseException,
    EmptyTraceException,
    yaml.YAMLError,
    OSError,
)


def _attribute(name: str) -> str:
    return name.replace('-', '_')


def _value(args: argparse.Namespace, name: str) -> Any:
    return getattr(args, _attribute(name), None)


def _create_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)

    common.add_argument('-p', f'--{_PROFILE_FILE_PARAMETER}',
        help='YAML file with profile and experiment sections (see example/test-experiment.yaml)', type=str)
    common.add_argument('-l', f'--{_LOAD_PARAMETER}', help='Offered load in Gb/s (repeatable)', action='append',
        type=float)
    common.add_argument(f'--{_QF_PARAMETER}', help='Fast-Wake threshold Q_f, paired with --qd (repeatable)',
        action='append', type=int)
    common.add_argument(f'--{_QD_PARAMETER}', help='Deep-Sleep threshold Q_d, paired with --qf (repeatable)',
        action='append', type=int)
    common.add_argument(f'--{_HORIZON_PARAMETER}', help='Simulated time per run in seconds', type=float)
    common.add_argument(f'--{_SEEDS_PARAMETER}', help='Random seeds, one simulation run each', nargs='+', type=int)
    common.add_argument(f'--{_REPETITIONS_PARAMETER}', help='Number of runs with seeds 1..N', type=int)
    common.add_argument('-f', f'--{_FORMAT_PARAMETER}', help='Output format',
        choices=[output_format.value for output_format in OutputFormat])
    common.add_argument('-o', f'--{_OUT_PARAMETER}', help='Output file (default: stdout)', type=str)
    common.add_argument(f'--{_RATE_SCALE_PARAMETER}', help='Factor applied to trace timestamps', type=float)
    common.add_argument(f'--{_MAX_DWELL_PARAMETER}', help='Cap in microseconds on the wait of a buffered frame',
        type=float)
    common.add_argument('-m', f'--{_MODE_PARAMETER}', help='Evaluation modes of a sweep',
        choices=[mode.value for mode in Mode])
    common.add_argument(f'--{_CYCLES_PARAMETER}', help='Renewal oracle cycles per point', type=int)
    common.add_argument(f'--{_SAMPLER_PARAMETER}', help='Interarrival distribution of oracle rows',
        choices=[kind.value for kind in SamplerKind])
    common.add_argument('-j', f'--{_JOBS_PARAMETER}', help='Worker processes for simulation runs', type=int)
    common.add_argument(f'--{_LOG_LEVEL_PARAMETER}', help='Logging level', default='INFO',
        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'])

    parser = argparse.ArgumentParser(prog='coalescent', description='Dual-mode EEE frame coalescing experiments')
    parser.add_argument('--version', action='version', version=f'%(prog)s {VERSION}')
    commands = parser.add_subparsers(dest=_COMMAND_PARAMETER, required=True)

    commands.add_parser(_COMMAND_SWEEP, parents=[common], help='Sweep loads and thresholds')
    commands.add_parser(_COMMAND_VALIDATE, parents=[common], help='Compare model, simulation and renewal oracle')
    trace_parser = commands.add_parser(_COMMAND_TRACE, parents=[common], help='Replay a timestamp,size trace')
    trace_parser.add_argument(_TRACE_PATH_PARAMETER, help='Trace file', type=str)
    commands.add_parser(_COMMAND_ORACLE, parents=[common], help='Renewal oracle estimates')
    return parser


def _overrides(args: argparse.Namespace) -> Dict[str, Any]:
    """
    Collects the config fields set on the command line (converted to SI units). Flags win over the file.
    """
    overrides: Dict[str, Any] = {}
    loads = _value(args, _LOAD_PARAMETER)
    q_fast = _value(args, _QF_PARAMETER)
    q_deep = _value(args, _QD_PARAMETER)

    if loads:
        overrides['loads'] = [load * 1e9 for load in loads]
    if q_fast or q_deep:
        if len(q_fast or []) != len(q_deep or []):
            raise InvalidExperimentException('--qf and --qd must be given the same number of times')
        overrides['thresholds'] = list(zip(q_fast, q_deep))
    if _value(args, _SEEDS_PARAMETER):
        overrides['seeds'] = _value(args, _SEEDS_PARAMETER)
    elif _value(args, _REPETITIONS_PARAMETER) is not None:
        overrides['seeds'] = list(range(1, _value(args, _REPETITIONS_PARAMETER) + 1))
    if _value(args, _MAX_DWELL_PARAMETER) is not None:
        overrides['max_dwell'] = _value(args, _MAX_DWELL_PARAMETER) * 1e-6

    for name, field in [
        (_HORIZON_PARAMETER, 'horizon'),
        (_RATE_SCALE_PARAMETER, 'rate_scale'),
        (_CYCLES_PARAMETER, 'oracle_cycles'),
        (_JOBS_PARAMETER, 'jobs'),
    ]:
        if _value(args, name) is not None:
            overrides[field] = _value(args, name)

    if _value(args, _FORMAT_PARAMETER):
        overrides['output_format'] = OutputFormat(_value(args, _FORMAT_PARAMETER))
    if _value(args, _MODE_PARAMETER):
        overrides['mode'] = Mode(_value(args, _MODE_PARAMETER))
    if _value(args, _SAMPLER_PARAMETER):
        overrides['oracle_sampler'] = SamplerKind(_value(args, _SAMPLER_PARAMETER))
    return overrides


def _load_config(args: argparse.Namespace) -> ExperimentConfig:
    profile_file = _value(args, _PROFILE_FILE_PARAMETER)
    config = Config.read(profile_file) if profile_file else ExperimentConfig()
    return dataclasses.replace(config, **_overrides(args))


def _emit(orchestrator: Orchestrator, rows: List[ResultRow], out: str):
    if out:
        orchestrator.write(rows, out)
        logger.info('Wrote %d rows to %s', len(rows), out)
    else:
        sys.stdout.write(orchestrator.dump(rows))


def run(argv: List[str] = None) -> int:
    """
    Runs the command line and returns the exit status.

    :param argv: Arguments without the program name, defaults to sys.argv[1:]
    :type argv:  List[str], optional

    :return: 0 on success, 1 on a failed validation, 2 on configuration or input errors.
    :rtype:  int
    """
    args = _create_parser().parse_args(argv)
    logging.basicConfig(level=_value(args, _LOG_LEVEL_PARAMETER), stream=sys.stderr,
        format='%(asctime)s %(levelname)s %(name)s: %(message)s')
    command = _value(args, _COMMAND_PARAMETER)
    out = _value(args, _OUT_PARAMETER)

    try:
        orchestrator = Orchestrator(_load_config(args))

        if command == _COMMAND_SWEEP:
            _emit(orchestrator, orchestrator.sweep(), out)
        elif command == _COMMAND_ORACLE:
            _emit(orchestrator, orchestrator.oracle(), out)
        elif command == _COMMAND_TRACE:
            records = read_trace(_value(args, _TRACE_PATH_PARAMETER))
            _emit(orchestrator, orchestrator.trace(records), out)
        else:
            report = orchestrator.validate()
            _emit(orchestrator, report.rows, out)
            logger.info('Validation %s: max |dphi|=%.4g, max |z|=%.3g', 'PASS' if report.passed else 'FAIL',
                report.max_deviation, report.max_abs_z)

            if not report.passed:
                return _EXIT_VALIDATION_FAILED
    except _INPUT_ERRORS as e:
        logger.error('%s', e)
        return _EXIT_CONFIG_ERROR
    return 0


def main():
    sys.exit(run())


if __name__ == '__main__':
    main()
