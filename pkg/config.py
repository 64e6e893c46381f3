import logging
import os
from typing import Any, Dict, Optional

from dotenv import load_dotenv

from errors import DomainError
from quad import QuadConfig

logger = logging.getLogger(__name__)

RTOL_ENV_VAR = 'KRATZEL_RTOL'


class Config:
    """
    Numeric settings merged from defaults, the environment and CLI flags.

    Later sources win: defaults < environment (including a .env file) < overrides.
    """

    def __init__(self, overrides: Optional[Dict[str, Any]] = None, use_env: bool = True):
        self.default_config = {
            'rel_tol': 1e-10,
            'abs_tol': 1e-300,
            'max_refinements': 60,
            'max_intervals': 4000,
        }
        self.config = {**self.default_config}
        if use_env:
            self.config.update(self.load_env())
        if overrides:
            self.config.update({k: v for k, v in overrides.items() if v is not None})
        logger.debug(f"Numeric configuration: {self.config}")

    def load_env(self) -> Dict[str, Any]:
        load_dotenv()
        raw = os.getenv(RTOL_ENV_VAR)
        if raw is None or not raw.strip():
            return {}
        try:
            rel_tol = float(raw)
        except ValueError:
            logger.error(f"{RTOL_ENV_VAR}={raw!r} is not a number")
            raise DomainError(f"{RTOL_ENV_VAR} must be a positive number")
        if not rel_tol > 0.0:
            logger.error(f"{RTOL_ENV_VAR}={raw!r} is not positive")
            raise DomainError(f"{RTOL_ENV_VAR} must be a positive number")
        logger.info(f"Using rel_tol={rel_tol:g} from {RTOL_ENV_VAR}")
        return {'rel_tol': rel_tol}

    def quad_config(self) -> QuadConfig:
        return QuadConfig(
            rel_tol=self['rel_tol'],
            abs_tol=self['abs_tol'],
            max_refinements=self['max_refinements'],
            max_intervals=self['max_intervals'],
        )

    def __getitem__(self, key):
        return self.config[key]
