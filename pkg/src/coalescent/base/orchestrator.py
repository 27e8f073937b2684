from __future__ import annotations
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
import logging
from typing import List, Optional, Sequence

from ..helpers.statistics import mean_confidence_interval
from ..model.energy_model import EnergyModel
from ..oracle.renewal_oracle import OracleEstimate, estimate_cycle_quantities
from ..oracle.samplers import SamplerKind, create_sampler
from ..simulation.sim_report import SimReport
from ..simulation.simulator import simulate
from ..traffic.sources import replay_span
from ..traffic.trace import TraceRecord
from .coalescing_config import CoalescingConfig
from .config import Config
from .experiment_config import ExperimentConfig, Mode
from .format_mapping import FormatMapping
from .model_breakdown import ModelBreakdown
from .phy_profile import PhyProfile
from .result_row import ResultRow
from .traffic_spec import TrafficSpec

logger = logging.getLogger(__name__)

_GIGABITS = 1e9

# Row mode names.
_MODE_MODEL = 'model'
_MODE_SIM = 'sim'
_MODE_ORACLE = 'oracle'

# Number of standard errors a degenerate (zero-variance) oracle estimate may deviate per sample.
_DEGENERATE_SPREAD = 3.0


@dataclass(frozen=True)
class _SimTask:
    load: float
    profile: PhyProfile
    cfg: CoalescingConfig
    traffic: TrafficSpec
    horizon: float
    seed: int


def _run_task(task: _SimTask) -> SimReport:
    # Module level so worker processes can unpickle it.
    return simulate(task.profile, task.cfg, task.traffic, task.horizon, task.seed).check_invariants(task.cfg)


@dataclass(frozen=True)
class ValidationPoint:
    """
    Comparison of model, simulation and renewal oracle at one (load, thresholds) point.
    """
    load: float
    cfg: CoalescingConfig
    phi_model: float
    phi_sim: float
    z_p_deep: float
    z_e_tf: float
    z_e_td: float

    @property
    def deviation(self) -> float:
        return abs(self.phi_model - self.phi_sim)

    @property
    def max_abs_z(self) -> float:
        return max(abs(self.z_p_deep), abs(self.z_e_tf), abs(self.z_e_td))


@dataclass(frozen=True)
class ValidationReport:
    rows: List[ResultRow]
    points: List[ValidationPoint]
    tolerance: float
    z_limit: float

    @property
    def max_deviation(self) -> float:
        return max((point.deviation for point in self.points), default=0.0)

    @property
    def max_abs_z(self) -> float:
        return max((point.max_abs_z for point in self.points), default=0.0)

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tolerance and self.max_abs_z <= self.z_limit


class Orchestrator:
    """
    Runs experiments (sweeps, validation, trace replay, oracle estimates) for one ExperimentConfig and turns their
    outcome into result rows. Row order only depends on the configuration: loads, then threshold pairs in config
    order, then model, sim and oracle rows.
    """

    def __init__(self, config: ExperimentConfig):
        self.config = config

    def sweep(self) -> List[ResultRow]:
        """
        Evaluates every load and threshold pair in the modes selected by the config. Simulation rows aggregate all
        seeds (mean and 95 % Student-t half-width). Points with rho >= 1 produce unstable rows.

        :return: Result rows.
        :rtype:  List[ResultRow]
        """
        mode = self.config.mode
        points = self._points()
        reports = self._simulate_points(points) if mode.runs_sim else {}
        rows = []

        for load, cfg in points:
            traffic = TrafficSpec.from_load(load, self.config.frame_size)
            logger.info('Sweep point %.6g Gb/s, Q=(%d, %d)', load / _GIGABITS, cfg.q_fast, cfg.q_deep)

            if mode.runs_model:
                rows.append(self._model_row(load, cfg, traffic))
            if mode.runs_sim:
                rows.append(self._sim_row(load, cfg, reports.get((load, cfg))))
            if mode == Mode.ORACLE:
                rows.append(self._oracle_row(load, cfg, traffic)[0])
        return rows

    def oracle(self) -> List[ResultRow]:
        """
        Estimates p_d, E[T_f] and E[T_d] with the renewal oracle for every point and assembles them into phi. The
        interarrival distribution is the configured oracle sampler at the mean rate of the load.

        :return: Oracle rows.
        :rtype:  List[ResultRow]
        """
        rows = []

        for load, cfg in self._points():
            logger.info('Oracle point %.6g Gb/s, Q=(%d, %d)', load / _GIGABITS, cfg.q_fast, cfg.q_deep)
            rows.append(self._oracle_row(load, cfg, TrafficSpec.from_load(load, self.config.frame_size))[0])
        return rows

    def validate(self) -> ValidationReport:
        """
        Runs model, simulation and renewal oracle on the grid and compares them. Unstable points get one unstable row
        per mode and take no part in the comparison.

        :return: Comparison report; rows hold the model, sim and oracle rows of every point.
        :rtype:  ValidationReport
        """
        reports = self._simulate_points(self._points())
        rows = []
        points = []

        for load, cfg in self._points():
            if not self._is_stable(load):
                rows.extend([
                    self._unstable_row(_MODE_MODEL, load, cfg),
                    self._unstable_row(_MODE_SIM, load, cfg),
                    self._unstable_row(_MODE_ORACLE, load, cfg),
                ])
                continue
            traffic = TrafficSpec.from_load(load, self.config.frame_size)
            breakdown = EnergyModel.energy_ratio(self.config.profile, cfg, traffic)
            model_row = self._breakdown_row(_MODE_MODEL, load, cfg, breakdown)
            sim_row = self._sim_row(load, cfg, reports[(load, cfg)])
            oracle_row, estimate = self._oracle_row(load, cfg, traffic, SamplerKind.EXPONENTIAL)
            rows.extend([model_row, sim_row, oracle_row])

            point = self._compare(load, cfg, traffic, breakdown, sim_row.phi, estimate)
            points.append(point)
            logger.info('Validated %.6g Gb/s, Q=(%d, %d): |dphi|=%.4g, max |z|=%.3g', load / _GIGABITS, cfg.q_fast,
                cfg.q_deep, point.deviation, point.max_abs_z)

        report = ValidationReport(rows, points, self.config.tolerance, self.config.z_limit)

        if not report.passed:
            logger.warning('Validation failed: max |dphi|=%.4g (limit %.4g), max |z|=%.3g (limit %.3g)',
                report.max_deviation, report.tolerance, report.max_abs_z, report.z_limit)
        return report

    def trace(self, records: Sequence[TraceRecord]) -> List[ResultRow]:
        """
        Replays a trace for every threshold pair and adds model rows computed at the trace's measured mean rate
        (unless the mode is sim only). The replay lasts until the last replayed arrival (scaled, with ties spaced
        apart); a replay ending at time zero uses the configured horizon.

        :param records: Parsed trace records.
        :type records:  Sequence[TraceRecord]

        :raises EmptyTraceException: Raised if there are no records.

        :return: Result rows.
        :rtype:  List[ResultRow]
        """
        traffic = TrafficSpec.from_trace(records, self.config.rate_scale)
        span = replay_span(records, self.config.rate_scale)
        horizon = span if span > 0 else self.config.horizon
        arrival_rate = traffic.mean_arrival_rate
        load = traffic.offered_load
        rows = []

        logger.info('Replaying %d records over %.6g s (%.6g Gb/s)', len(records), horizon, load / _GIGABITS)

        for cfg in self.config.coalescing_configs():
            report = simulate(self.config.profile, cfg, traffic, horizon).check_invariants(cfg)
            rows.append(ResultRow(
                mode=_MODE_SIM,
                load_gbps=load / _GIGABITS,
                qf=cfg.q_fast,
                qd=cfg.q_deep,
                phi=report.phi_sim,
                delay_s=report.mean_queue_delay,
                rho_f=report.rho_f_sim,
                rho_d=report.rho_d_sim,
                p_d=report.p_deep_sim,
                horizon_s=horizon,
            ))

            if self.config.mode == Mode.SIM:
                continue
            if not (arrival_rate > 0):
                logger.warning('Trace spans no time, skipping model row for Q=(%d, %d)', cfg.q_fast, cfg.q_deep)
                continue
            rows.append(self._model_row(load, cfg, traffic.as_poisson()))
        return rows

    def dump(self, rows: List[ResultRow]) -> str:
        """
        Renders rows in the configured output format.

        :param rows: Result rows.
        :type rows:  List[ResultRow]

        :return: Result document.
        :rtype:  str
        """
        return FormatMapping.writer_for(self.config.output_format).dump(rows)

    def write(self, rows: List[ResultRow], path: str) -> Orchestrator:
        """
        Writes rows in the configured output format.

        :param rows: Result rows.
        :type rows:  List[ResultRow]
        :param path: Output file path.
        :type path:  str

        :return: The current Orchestrator instance.
        :rtype:  Orchestrator
        """
        FormatMapping.writer_for(self.config.output_format).write(rows, path)
        return self

    @staticmethod
    def read_config(path: str) -> Orchestrator:
        """
        Reads the provided YAML configuration file (see example/test-experiment.yaml).

        :param path: Path to load the YAML file from.
        :type path:  str

        :return: Orchestrator instance.
        :rtype:  Orchestrator
        """
        return Orchestrator(Config.read(path))

    @staticmethod
    def parse_config(content: str) -> Orchestrator:
        return Orchestrator(Config.parse(content))

    def _points(self) -> List[tuple]:
        return [(load, cfg) for load in self.config.loads for cfg in self.config.coalescing_configs()]

    def _is_stable(self, load: float) -> bool:
        # Compared on the configured load, so a load equal to the line rate is exactly rho = 1.
        return load / self.config.profile.line_rate < 1

    def _simulate_points(self, points: List[tuple]) -> dict:
        """
        Simulates every stable point once per seed. Reports come back in submission order, so the outcome does not
        depend on the number of workers.
        """
        tasks = []

        for load, cfg in points:
            if not self._is_stable(load):
                continue
            traffic = TrafficSpec.from_load(load, self.config.frame_size)
            tasks.extend(
                _SimTask(load, self.config.profile, cfg, traffic, self.config.horizon, seed)
                for seed in self.config.seeds
            )

        if self.config.jobs > 1 and len(tasks) > 1:
            with ProcessPoolExecutor(max_workers=self.config.jobs) as executor:
                reports = list(executor.map(_run_task, tasks))
        else:
            reports = [_run_task(task) for task in tasks]

        grouped = {}
        repetitions = self.config.repetitions

        for i in range(0, len(tasks), repetitions):
            task = tasks[i]
            grouped[(task.load, task.cfg)] = reports[i:i + repetitions]
        return grouped

    def _unstable_row(self, mode: str, load: float, cfg: CoalescingConfig) -> ResultRow:
        logger.warning('Load %.6g Gb/s saturates the link, Q=(%d, %d) %s row marked unstable', load / _GIGABITS,
            cfg.q_fast, cfg.q_deep, mode)
        return ResultRow(mode=mode, load_gbps=load / _GIGABITS, qf=cfg.q_fast, qd=cfg.q_deep, unstable=True)

    def _breakdown_row(self, mode: str, load: float, cfg: CoalescingConfig, breakdown: ModelBreakdown,
        seed: Optional[int] = None) -> ResultRow:
        return ResultRow(
            mode=mode,
            load_gbps=load / _GIGABITS,
            qf=cfg.q_fast,
            qd=cfg.q_deep,
            phi=breakdown.phi,
            rho_f=breakdown.rho_f,
            rho_d=breakdown.rho_d,
            p_d=breakdown.p_deep,
            seed=seed,
        )

    def _model_row(self, load: float, cfg: CoalescingConfig, traffic: TrafficSpec) -> ResultRow:
        if not self._is_stable(load):
            return self._unstable_row(_MODE_MODEL, load, cfg)
        return self._breakdown_row(_MODE_MODEL, load, cfg, EnergyModel.energy_ratio(self.config.profile, cfg, traffic))

    def _sim_row(self, load: float, cfg: CoalescingConfig, reports: Optional[List[SimReport]]) -> ResultRow:
        if not reports:
            return self._unstable_row(_MODE_SIM, load, cfg)

        phi, phi_ci = mean_confidence_interval([report.phi_sim for report in reports])
        delay, delay_ci = mean_confidence_interval([report.mean_queue_delay for report in reports])

        return ResultRow(
            mode=_MODE_SIM,
            load_gbps=load / _GIGABITS,
            qf=cfg.q_fast,
            qd=cfg.q_deep,
            phi=phi,
            phi_ci=phi_ci,
            delay_s=delay,
            delay_ci=delay_ci,
            rho_f=mean_confidence_interval([report.rho_f_sim for report in reports])[0],
            rho_d=mean_confidence_interval([report.rho_d_sim for report in reports])[0],
            p_d=mean_confidence_interval([report.p_deep_sim for report in reports])[0],
            seed=reports[0].seed,
            horizon_s=reports[0].horizon,
        )

    def _oracle_row(self, load: float, cfg: CoalescingConfig, traffic: TrafficSpec,
        sampler: Optional[SamplerKind] = None) -> tuple[ResultRow, Optional[OracleEstimate]]:
        """
        Estimates the cycle quantities with the first seed and turns them into a row. The sampler defaults to the
        configured one.

        :return: Oracle row and the raw estimate (None for unstable points).
        :rtype:  tuple[ResultRow, Optional[OracleEstimate]]
        """
        if not self._is_stable(load):
            return self._unstable_row(_MODE_ORACLE, load, cfg), None

        seed = self.config.seeds[0]
        estimate = estimate_cycle_quantities(
            self.config.profile,
            cfg,
            create_sampler(sampler or self.config.oracle_sampler, traffic.arrival_rate),
            self.config.oracle_cycles,
            seed,
        )
        breakdown = EnergyModel.assemble_breakdown(
            self.config.profile,
            load / self.config.profile.line_rate,
            estimate.e_tf.value,
            estimate.e_td.value,
            estimate.p_deep.value,
        )
        return self._breakdown_row(_MODE_ORACLE, load, cfg, breakdown, seed), estimate

    def _compare(self, load: float, cfg: CoalescingConfig, traffic: TrafficSpec, breakdown: ModelBreakdown,
        phi_sim: float, estimate: OracleEstimate) -> ValidationPoint:
        n = estimate.n_cycles
        profile = self.config.profile
        probability_tol = _DEGENERATE_SPREAD / n
        duration_tol = _DEGENERATE_SPREAD * (cfg.q_deep / traffic.arrival_rate + profile.t_idle) / n

        return ValidationPoint(
            load=load,
            cfg=cfg,
            phi_model=breakdown.phi,
            phi_sim=phi_sim,
            z_p_deep=estimate.p_deep.z_score(breakdown.p_deep, probability_tol),
            z_e_tf=estimate.e_tf.z_score(breakdown.e_tf, duration_tol),
            z_e_td=estimate.e_td.z_score(breakdown.e_td, duration_tol),
        )
