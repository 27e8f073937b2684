from __future__ import annotations
from typing import Any, Dict, List

import yaml
from schema import And, Optional, Or, Schema, SchemaError, Use

from ..oracle.samplers import SamplerKind
from .experiment_config import ExperimentConfig, Mode, OutputFormat
from .phy_profile import PhyProfile

# Main categories.
_KEY_PROFILE = 'profile'
_KEY_EXPERIMENT = 'experiment'

# Profile keys (document units in the key names).
_PROFILE_KEY_T_ATOF = 't_atof_us'
_PROFILE_KEY_T_FTOA = 't_ftoa_us'
_PROFILE_KEY_T_FTOD = 't_ftod_us'
_PROFILE_KEY_T_DTOA = 't_dtoa_us'
_PROFILE_KEY_T_IDLE = 't_idle_us'
_PROFILE_KEY_LINE_RATE = 'line_rate_gbps'
_PROFILE_KEY_PHI_FAST = 'phi_fast'
_PROFILE_KEY_PHI_DEEP = 'phi_deep'

# Experiment keys.
_EXPERIMENT_KEY_MODE = 'mode'
_EXPERIMENT_KEY_LOADS = 'loads_gbps'
_EXPERIMENT_KEY_THRESHOLDS = 'thresholds'
_EXPERIMENT_KEY_FRAME_SIZE = 'frame_size'
_EXPERIMENT_KEY_HORIZON = 'horizon_s'
_EXPERIMENT_KEY_REPETITIONS = 'repetitions'
_EXPERIMENT_KEY_SEEDS = 'seeds'
_EXPERIMENT_KEY_MAX_DWELL = 'max_dwell_us'
_EXPERIMENT_KEY_FORMAT = 'format'
_EXPERIMENT_KEY_RATE_SCALE = 'rate_scale'
_EXPERIMENT_KEY_ORACLE_CYCLES = 'oracle_cycles'
_EXPERIMENT_KEY_ORACLE_SAMPLER = 'oracle_sampler'
_EXPERIMENT_KEY_TOLERANCE = 'tolerance'
_EXPERIMENT_KEY_Z_LIMIT = 'z_limit'
_EXPERIMENT_KEY_JOBS = 'jobs'

_MICROSECONDS = 1e-6
_GIGABITS = 1e9

# Profile document key -> PhyProfile field and unit factor.
_PROFILE_FIELDS = {
    _PROFILE_KEY_T_ATOF: ('t_atof', _MICROSECONDS),
    _PROFILE_KEY_T_FTOA: ('t_ftoa', _MICROSECONDS),
    _PROFILE_KEY_T_FTOD: ('t_ftod', _MICROSECONDS),
    _PROFILE_KEY_T_DTOA: ('t_dtoa', _MICROSECONDS),
    _PROFILE_KEY_T_IDLE: ('t_idle', _MICROSECONDS),
    _PROFILE_KEY_LINE_RATE: ('line_rate', _GIGABITS),
    _PROFILE_KEY_PHI_FAST: ('phi_fast', 1.0),
    _PROFILE_KEY_PHI_DEEP: ('phi_deep', 1.0),
}


class InvalidConfigFileException(Exception):
    def __init__(self, reason: str):
        super().__init__(f'Invalid configuration document: {reason}')


class Config:
    """
    Reads experiment configurations from YAML documents (see example/test-experiment.yaml). Document values use
    microseconds and Gb/s; the returned ExperimentConfig holds SI units. Missing keys keep their defaults.
    """

    @staticmethod
    def read(path: str) -> ExperimentConfig:
        """
        Reads the provided YAML configuration file.

        :param path: Path to load the YAML file from.
        :type path:  str

        :return: Validated experiment configuration.
        :rtype:  ExperimentConfig
        """
        with open(path, 'r') as f:
            content = f.read()
        return Config.parse(content)

    @staticmethod
    def parse(content: str) -> ExperimentConfig:
        """
        Parses the provided YAML configuration string.

        :param content: YAML configuration string.
        :type content:  str

        :raises InvalidConfigFileException: Raised if the document does not match the schema.

        :return: Validated experiment configuration.
        :rtype:  ExperimentConfig
        """
        yaml_object = yaml.safe_load(content) or {}

        try:
            validated_object = Config._schema().validate(yaml_object)
        except SchemaError as e:
            raise InvalidConfigFileException(str(e))

        return ExperimentConfig(**Config._experiment_kwargs(
            validated_object.get(_KEY_EXPERIMENT, {}),
            Config._evaluate_profile(validated_object.get(_KEY_PROFILE, {})),
        ))

    @staticmethod
    def _schema() -> Schema:
        """
        Returns the config validation schema.

        :return: Config validation schema.
        :rtype:  Schema
        """
        number = Use(float)

        return Schema({
            Optional(_KEY_PROFILE): {Optional(key): number for key in _PROFILE_FIELDS},
            Optional(_KEY_EXPERIMENT): {
                Optional(_EXPERIMENT_KEY_MODE): Use(Mode),
                Optional(_EXPERIMENT_KEY_LOADS): [number],
                Optional(_EXPERIMENT_KEY_THRESHOLDS): [And([int], lambda pair: len(pair) == 2)],
                Optional(_EXPERIMENT_KEY_FRAME_SIZE): int,
                Optional(_EXPERIMENT_KEY_HORIZON): number,
                Optional(_EXPERIMENT_KEY_REPETITIONS): int,
                Optional(_EXPERIMENT_KEY_SEEDS): [int],
                Optional(_EXPERIMENT_KEY_MAX_DWELL): Or(None, number),
                Optional(_EXPERIMENT_KEY_FORMAT): Use(OutputFormat),
                Optional(_EXPERIMENT_KEY_RATE_SCALE): number,
                Optional(_EXPERIMENT_KEY_ORACLE_CYCLES): int,
                Optional(_EXPERIMENT_KEY_ORACLE_SAMPLER): Use(SamplerKind),
                Optional(_EXPERIMENT_KEY_TOLERANCE): number,
                Optional(_EXPERIMENT_KEY_Z_LIMIT): number,
                Optional(_EXPERIMENT_KEY_JOBS): int,
            },
        })

    @staticmethod
    def _evaluate_profile(profile: Dict[str, float]) -> PhyProfile:
        """
        Builds the PHY profile from the profile section, converting to SI units.

        :param profile: Validated profile section.
        :type profile:  Dict[str, float]

        :return: Validated profile (raises the PhyProfile exceptions on bad values).
        :rtype:  PhyProfile
        """
        kwargs = {}

        for key, value in profile.items():
            name, factor = _PROFILE_FIELDS[key]
            kwargs[name] = value * factor
        return PhyProfile(**kwargs)

    @staticmethod
    def _experiment_kwargs(experiment: Dict[str, Any], profile: PhyProfile) -> Dict[str, Any]:
        """
        Maps the experiment section onto ExperimentConfig keyword arguments.

        :param experiment: Validated experiment section.
        :type experiment:  Dict[str, Any]
        :param profile:    Profile to put into the config.
        :type profile:     PhyProfile

        :return: Keyword arguments for ExperimentConfig.
        :rtype:  Dict[str, Any]
        """
        kwargs: Dict[str, Any] = {'profile': profile}

        def set_if_present(key: str, name: str, convert=lambda value: value):
            if key in experiment:
                kwargs[name] = convert(experiment[key])

        set_if_present(_EXPERIMENT_KEY_MODE, 'mode')
        set_if_present(_EXPERIMENT_KEY_LOADS, 'loads', lambda loads: [load * _GIGABITS for load in loads])
        set_if_present(_EXPERIMENT_KEY_THRESHOLDS, 'thresholds', Config._evaluate_thresholds)
        set_if_present(_EXPERIMENT_KEY_FRAME_SIZE, 'frame_size')
        set_if_present(_EXPERIMENT_KEY_HORIZON, 'horizon')
        set_if_present(_EXPERIMENT_KEY_MAX_DWELL, 'max_dwell',
            lambda max_dwell: None if max_dwell is None else max_dwell * _MICROSECONDS)
        set_if_present(_EXPERIMENT_KEY_FORMAT, 'output_format')
        set_if_present(_EXPERIMENT_KEY_RATE_SCALE, 'rate_scale')
        set_if_present(_EXPERIMENT_KEY_ORACLE_CYCLES, 'oracle_cycles')
        set_if_present(_EXPERIMENT_KEY_ORACLE_SAMPLER, 'oracle_sampler')
        set_if_present(_EXPERIMENT_KEY_TOLERANCE, 'tolerance')
        set_if_present(_EXPERIMENT_KEY_Z_LIMIT, 'z_limit')
        set_if_present(_EXPERIMENT_KEY_JOBS, 'jobs')

        # Explicit seeds win over a repetition count.
        if _EXPERIMENT_KEY_SEEDS in experiment:
            kwargs['seeds'] = list(experiment[_EXPERIMENT_KEY_SEEDS])
        elif _EXPERIMENT_KEY_REPETITIONS in experiment:
            kwargs['seeds'] = list(range(1, experiment[_EXPERIMENT_KEY_REPETITIONS] + 1))
        return kwargs

    @staticmethod
    def _evaluate_thresholds(pairs: List[List[int]]) -> List[tuple]:
        return [(pair[0], pair[1]) for pair in pairs]
