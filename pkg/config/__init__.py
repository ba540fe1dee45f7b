from .config_manager import ConfigManager, get_config, set_config
