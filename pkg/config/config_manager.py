import os
import json
import logging

from dotenv import load_dotenv

logger = logging.getLogger(__name__)

load_dotenv()

DEFAULT_CONFIG_FILE = "zxlattice_config.json"

# env var -> (config key, parser)
ENV_OVERRIDES = {
    "ZXLAT_DENSE_CAP": ("dense_cap", int),
    "ZXLAT_MAX_RANK": ("max_rank", int),
    "ZXLAT_MEMORY_BUDGET_MB": ("memory_budget_mb", int),
    "ZXLAT_ENUM_CAP": ("enum_cap", int),
    "ZXLAT_SEARCH_CAP": ("search_cap", int),
    "ZXLAT_WORKERS": ("workers", int),
    "ZXLAT_SEED": ("seed", int),
    "ZXLAT_EIGSH_NCV": ("eigsh_ncv", int),
    "ZXLAT_LOG_LEVEL": ("log_level", str),
}

_shared_config = None


class ConfigManager:
    """Caps, tolerances and run settings: JSON file over defaults, then env overrides"""

    DEFAULTS = {
        "dense_cap": 12,
        "max_rank": 26,
        "memory_budget_mb": 1536,
        "enum_cap": 1 << 18,
        "search_cap": 64,
        "workers": 1,
        "seed": 0,
        "eigsh_ncv": 8,
        "log_level": "INFO",
        "tolerances": {
            "rule": 1e-10,
            "dense": 1e-12,
            "structured": 1e-10,
            "lattice": 1e-8,
            "eigensolve": 1e-6,
        },
    }

    def __init__(self, config_file=None):
        self.config_file = config_file or os.environ.get("ZXLAT_CONFIG", DEFAULT_CONFIG_FILE)
        self.config = self.load_config()
        self.apply_env_overrides()

    def load_config(self):
        """Load the JSON file on top of the defaults"""
        config = json.loads(json.dumps(self.DEFAULTS))
        if os.path.exists(self.config_file):
            try:
                with open(self.config_file, 'r') as f:
                    loaded = json.load(f)
                tolerances = loaded.pop("tolerances", {})
                config.update(loaded)
                config["tolerances"].update(tolerances)
            except (OSError, ValueError) as e:
                logger.warning(f"⚠️ Ignoring unreadable config {self.config_file}: {e}")
        return config

    def apply_env_overrides(self):
        for env_key, (key, parser) in ENV_OVERRIDES.items():
            raw = os.environ.get(env_key)
            if raw is None:
                continue
            try:
                self.config[key] = parser(raw)
            except ValueError:
                logger.warning(f"⚠️ Bad value for {env_key}={raw!r}, keeping {self.config[key]!r}")

    def save_config(self):
        try:
            with open(self.config_file, 'w') as f:
                json.dump(self.config, f, indent=2)
            return True
        except OSError as e:
            logger.error(f"❌ Error saving config: {e}")
            return False

    def get(self, key, default=None):
        return self.config.get(key, default)

    def set(self, key, value):
        self.config[key] = value

    def tolerance(self, name):
        return self.config["tolerances"][name]

    @property
    def dense_cap(self):
        return self.config["dense_cap"]

    @property
    def max_rank(self):
        return self.config["max_rank"]

    @property
    def max_elements(self):
        """Largest tensor (complex128 entries) allowed by the memory budget"""
        return (self.config["memory_budget_mb"] << 20) // 16

    @property
    def enum_cap(self):
        return self.config["enum_cap"]

    @property
    def search_cap(self):
        return self.config["search_cap"]

    @property
    def workers(self):
        return max(1, self.config["workers"])

    @property
    def seed(self):
        return self.config["seed"]


def get_config():
    """Shared config instance for the whole process"""
    global _shared_config
    if _shared_config is None:
        _shared_config = ConfigManager()
    return _shared_config


def set_config(config):
    global _shared_config
    _shared_config = config
    return config
