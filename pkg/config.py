import os
from dotenv import load_dotenv

load_dotenv()


def _int_env(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or not raw.strip():
        return default
    try:
        return int(raw.replace('_', ''))
    except ValueError:
        raise ValueError(f"{name} must be an integer, got '{raw}'") from None


class Config:
    """Base configuration."""

    # Bounded model search
    MAX_DOMAIN = _int_env('LPF_MAX_DOMAIN', 3)
    SEARCH_BUDGET = _int_env('LPF_SEARCH_BUDGET', 2_000_000)  # structure/assignment points
    # "identity": off-diagonal equality cells are f; "free": any value
    EQUALITY = os.environ.get('LPF_EQUALITY', 'identity')

    # Command line defaults
    MODE = os.environ.get('LPF_MODE', 'LP')
    OUTPUT_FORMAT = os.environ.get('LPF_FORMAT', 'text')

    # Logging
    LOG_LEVEL = os.environ.get('LPF_LOG_LEVEL', 'INFO')
    LOG_FILE = os.environ.get('LPF_LOG_FILE')  # file logging is off unless set


class DevelopmentConfig(Config):
    """Development configuration."""
    LOG_LEVEL = os.environ.get('LPF_LOG_LEVEL', 'DEBUG')


class ProductionConfig(Config):
    """Production configuration."""
    LOG_LEVEL = os.environ.get('LPF_LOG_LEVEL', 'WARNING')


# Configuration mapping
config = {
    'development': DevelopmentConfig,
    'production': ProductionConfig,
    'default': Config
}


def get_config():
    """Return the configuration class selected by LPF_ENV."""
    return config.get(os.environ.get('LPF_ENV', 'default'), Config)
