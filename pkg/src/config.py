import os
import yaml
from dotenv import load_dotenv

DEFAULT_CONFIG_PATH = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), 'config', 'settings.yaml')

# env var -> (section, key, cast)
ENV_OVERRIDES = {
    'SHIMURA_PRECISION': ('embedding', 'precision', int),
    'SHIMURA_FORMAT': ('output', 'format', str),
    'SHIMURA_SWEEP_PMAX': ('sweep', 'pmax', int),
    'SHIMURA_WORKERS': ('sweep', 'workers', int),
    'SHIMURA_LOG_LEVEL': ('logging', 'level', str),
}


def load_config(path=None):
    # Load .env file
    load_dotenv()

    config_path = path or DEFAULT_CONFIG_PATH
    with open(config_path, 'r', encoding='utf-8') as f:
        config = yaml.safe_load(f) or {}

    # Override with environment variables
    for env_name, (section, key, cast) in ENV_OVERRIDES.items():
        value = os.getenv(env_name)
        if value:
            if section not in config or config[section] is None:
                config[section] = {}
            config[section][key] = cast(value)

    return config
