"""
Configuration loader for the filling-length toolkit
"""
import os
from pathlib import Path
from typing import Any, Dict

import yaml
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

SETTINGS_PATH = Path(__file__).parent / 'settings.yaml'
PROJECT_ROOT = Path(__file__).resolve().parents[2]


def _load_yaml(path: Path) -> Dict[str, Any]:
    if path.exists():
        with open(path, 'r') as f:
            return yaml.safe_load(f) or {}
    return {}


_DEFAULTS = _load_yaml(SETTINGS_PATH).get('defaults', {})


def _setting(env_name: str, key: str, fallback: Any, cast=int) -> Any:
    raw = os.getenv(env_name)
    if raw is not None and raw != '':
        return cast(raw)
    return cast(_DEFAULTS.get(key, fallback))


class Config:
    """Application configuration"""

    # Logging
    LOG_LEVEL = os.getenv('FILLING_LOG', 'WARNING')
    LOG_FILE = os.getenv('FILLING_LOG_FILE') or None

    # Filling-function runs
    N_MAX = _setting('FILLING_N_MAX', 'n_max', 6)
    MAX_AREA = _setting('FILLING_MAX_AREA', 'max_area', 6)
    NODE_BUDGET = _setting('FILLING_NODE_BUDGET', 'node_budget', 200000)
    MAX_DIAGRAMS = _setting('FILLING_MAX_DIAGRAMS', 'max_diagrams', 50000)
    ORACLE_MAX_AREA = _setting('FILLING_ORACLE_MAX_AREA', 'oracle_max_area', 4)
    ABELIAN_CAP = _setting('FILLING_ABELIAN_CAP', 'abelian_cap', 20000)

    # Tree shelling
    EXACT_VISIBILITY_MAX_NODES = _setting(
        'FILLING_EXACT_VISIBILITY_MAX_NODES', 'exact_visibility_max_nodes', 17
    )
    SEED = _setting('FILLING_SEED', 'seed', 0)

    # Exponent r of the polynomial area bound used by the radius estimate
    RADIUS_EXPONENT = _setting('FILLING_RADIUS_EXPONENT', 'radius_exponent', 2)

    # Run ledger (empty disables)
    AUDIT_DB = os.getenv('FILLING_AUDIT_DB', _DEFAULTS.get('audit_db') or '')

    @classmethod
    def load_settings(cls) -> Dict[str, Any]:
        """Load the full settings file from YAML"""
        return _load_yaml(SETTINGS_PATH)

    @classmethod
    def resolve_input(cls, name: str) -> str:
        """
        Map a sample name from settings.yaml (e.g. "z2_triangular") to its
        file path; anything else is returned unchanged
        """
        samples = cls.load_settings().get('samples', {})
        if name in samples:
            return str(PROJECT_ROOT / samples[name])
        return name


# Create singleton instance
config = Config()
