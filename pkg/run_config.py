"""
Run configuration management
JSON file of run defaults, merged under the command-line flags and validated into a RunConfig
"""

import json
import logging
import os
from datetime import datetime
from typing import Any, Dict, Literal, Optional

from pydantic import BaseModel, Field, ValidationError

from algebra_core import Mode
from config import Config, DEFAULT_MODE, DEFAULT_SAMPLES, DEFAULT_SEED, RUN_CONFIG_FILE
from exceptions import ParameterError

logger = logging.getLogger(__name__)


class RunConfig(BaseModel):
    k: int = Field(2, ge=1)
    mode: Mode = Mode(DEFAULT_MODE)
    seed: int = Field(DEFAULT_SEED, ge=0, lt=2 ** 64)
    samples: int = Field(DEFAULT_SAMPLES, ge=1)
    tol_rank: float = Field(Config.TAU_RANK, gt=0)
    tol_root: float = Field(Config.TAU_ROOT, gt=0)
    pole_radius: float = Field(Config.POLE_RADIUS, gt=0)
    workers: int = Field(Config.WORKERS, ge=1)
    out: Optional[str] = None
    format: Literal["json", "csv"] = "json"


class RunConfigStore:
    def __init__(self, config_file_path: str = RUN_CONFIG_FILE):
        self.config_file_path = config_file_path
        self.default_config = {
            **RunConfig().model_dump(mode="json"),
            "last_updated": datetime.now().isoformat(),
            "version": "1.0",
        }
        self.config = self.load_config()

        if os.path.exists(self.config_file_path):
            self._last_modified = os.path.getmtime(self.config_file_path)
        else:
            self._last_modified = 0

    def load_config(self) -> Dict[str, Any]:
        """Stored defaults merged over the built-in ones; a missing file means built-ins only"""
        try:
            if os.path.exists(self.config_file_path):
                with open(self.config_file_path, "r", encoding="utf-8") as f:
                    return {**self.default_config, **json.load(f)}
            return self.default_config.copy()
        except (OSError, json.JSONDecodeError) as e:
            logger.warning(f"⚠️ Error loading run config {self.config_file_path}: {e}")
            return self.default_config.copy()

    def save_config(self, config: Optional[Dict[str, Any]] = None) -> bool:
        try:
            config_to_save = config or self.config
            config_to_save["last_updated"] = datetime.now().isoformat()
            with open(self.config_file_path, "w", encoding="utf-8") as f:
                json.dump(config_to_save, f, indent=2, ensure_ascii=False)
            if config:
                self.config = config_to_save
            logger.info(f"💾 Run config saved to {self.config_file_path}")
            return True
        except OSError as e:
            logger.error(f"❌ Error saving run config: {e}")
            return False

    def update_config(self, updates: Dict[str, Any]) -> bool:
        """Validate then persist; invalid values leave the stored config alone"""
        merged = {**self.config, **updates}
        self.build(merged)
        self.config = merged
        return self.save_config()

    def _needs_reload(self) -> bool:
        try:
            if os.path.exists(self.config_file_path):
                return os.path.getmtime(self.config_file_path) > self._last_modified
            return False
        except OSError:
            return True

    def reload_config(self) -> bool:
        if self._needs_reload():
            self.config = self.load_config()
            if os.path.exists(self.config_file_path):
                self._last_modified = os.path.getmtime(self.config_file_path)
        return True

    def reset_to_defaults(self) -> bool:
        return self.save_config(self.default_config.copy())

    @staticmethod
    def build(values: Dict[str, Any]) -> RunConfig:
        fields = {key: value for key, value in values.items() if key in RunConfig.model_fields}
        try:
            return RunConfig(**fields)
        except ValidationError as e:
            raise ParameterError(f"invalid run configuration: {e}") from e

    def resolve(self, overrides: Optional[Dict[str, Any]] = None) -> RunConfig:
        """Stored defaults with non-None overrides (usually command-line flags) on top"""
        self.reload_config()
        values = dict(self.config)
        values.update({key: value for key, value in (overrides or {}).items() if value is not None})
        return self.build(values)

    def stored_values(self) -> Dict[str, Any]:
        """Validated stored defaults, without bookkeeping keys"""
        self.reload_config()
        return self.build(self.config).model_dump(mode="json")
