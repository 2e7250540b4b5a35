import os
import yaml

ROOT_PATH = os.path.dirname(__file__)

CONFIG_FILE_PATH = os.path.join(ROOT_PATH, "env.yaml")

if os.path.exists(CONFIG_FILE_PATH):
    with open(CONFIG_FILE_PATH, "r") as r_file:
        data = yaml.safe_load(r_file) or dict()
else:
    data = dict()


def _default_models_dir() -> str:
    cache_home = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return os.path.join(cache_home, "style-cloak", "models")


class ApplicationConfig:
    # Logging configuration
    LOG_LEVEL = data.get("LOG_LEVEL", "INFO")  # DEBUG, INFO, WARNING, ERROR, CRITICAL

    # Encoder weights: env var wins over env.yaml
    MODELS_DIR = os.environ.get("STYLE_CLOAK_MODELS") or data.get("MODELS_DIR") or _default_models_dir()

    # Compute configuration
    DEVICE = data.get("DEVICE", "auto")  # auto, cpu, cuda, cuda:1 ...
    DEFAULT_JOBS = int(data.get("DEFAULT_JOBS", 1))

    # Error reporting
    ENABLE_SENTRY = bool(int(data.get("ENABLE_SENTRY", 0) or 0))
    DSN_SENTRY = data.get("DSN_SENTRY", "")
    SENTRY_ENVIRONMENT = data.get("SENTRY_ENVIRONMENT", "dev")
