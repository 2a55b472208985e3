"""
Configuration module for simulator settings.
Handles loading of environment variables and logging setup.
"""
import os
import logging
from collections import namedtuple
from dotenv import load_dotenv


# Simple named tuple for simulator configuration
SimConfig = namedtuple('SimConfig', [
    'dense_qubit_cap',
    'stabilizer_qubit_cap',
    'enumeration_cap',
    'oracle_qubit_cap',
    'dilation_term_cap',
    'workers',
    'log_level'
])

DEFAULT_DENSE_QUBIT_CAP = 20
DEFAULT_STABILIZER_QUBIT_CAP = 4096
DEFAULT_ENUMERATION_CAP = 4096
DEFAULT_ORACLE_QUBIT_CAP = 6
DEFAULT_DILATION_TERM_CAP = 64


def get_config():
    """
    Get application configuration.

    Returns:
        Dictionary containing raw configuration values
    """
    load_dotenv()

    return {
        'SIM_DENSE_QUBIT_CAP': os.getenv('SIM_DENSE_QUBIT_CAP', str(DEFAULT_DENSE_QUBIT_CAP)),
        'SIM_STABILIZER_QUBIT_CAP': os.getenv('SIM_STABILIZER_QUBIT_CAP', str(DEFAULT_STABILIZER_QUBIT_CAP)),
        'SIM_ENUMERATION_CAP': os.getenv('SIM_ENUMERATION_CAP', str(DEFAULT_ENUMERATION_CAP)),
        'SIM_ORACLE_QUBIT_CAP': os.getenv('SIM_ORACLE_QUBIT_CAP', str(DEFAULT_ORACLE_QUBIT_CAP)),
        'SIM_DILATION_TERM_CAP': os.getenv('SIM_DILATION_TERM_CAP', str(DEFAULT_DILATION_TERM_CAP)),
        'SIM_WORKERS': os.getenv('SIM_WORKERS', '1'),
        'SIM_LOG_LEVEL': os.getenv('SIM_LOG_LEVEL', 'WARNING')
    }


def load_sim_config(env_file=None):
    """
    Load simulator configuration from the environment.

    Args:
        env_file: Path to environment file. If None, uses current environment variables

    Returns:
        Simulator configuration

    Raises:
        ValueError: If a value is not a positive integer or the log level is unknown
    """
    if env_file:
        load_dotenv(env_file, override=True)
    raw = get_config()

    config = SimConfig(
        dense_qubit_cap=_positive_int(raw, 'SIM_DENSE_QUBIT_CAP'),
        stabilizer_qubit_cap=_positive_int(raw, 'SIM_STABILIZER_QUBIT_CAP'),
        enumeration_cap=_positive_int(raw, 'SIM_ENUMERATION_CAP'),
        oracle_qubit_cap=_positive_int(raw, 'SIM_ORACLE_QUBIT_CAP'),
        dilation_term_cap=_positive_int(raw, 'SIM_DILATION_TERM_CAP'),
        workers=_positive_int(raw, 'SIM_WORKERS'),
        log_level=raw['SIM_LOG_LEVEL'].upper()
    )
    if config.log_level not in logging.getLevelNamesMapping():
        raise ValueError(f"Unknown log level: {config.log_level}")
    return config


def _positive_int(raw, key):
    try:
        value = int(raw[key])
    except ValueError:
        raise ValueError(f"{key} must be an integer, got {raw[key]!r}")
    if value < 1:
        raise ValueError(f"{key} must be positive, got {value}")
    return value


def configure_logging(config, verbose=False):
    """
    Configure the root logger for command-line runs.

    Args:
        config: Simulator configuration
        verbose: Force DEBUG level
    """
    level = logging.DEBUG if verbose else getattr(logging, config.log_level)
    logging.basicConfig(
        level=level,
        format='%(asctime)s %(levelname)s %(name)s: %(message)s'
    )
    logging.getLogger().setLevel(level)
