#!/usr/bin/env python3
"""
Configuration Management Module
Centralized settings for the exact kernel, the series engine, the identity suite and the CLI
"""

import json
import logging
import os
from typing import Dict, Any, Optional

from errors import ConfigError

ACCELERATION_METHODS = ("auto", "none", "euler", "wynn-epsilon", "levin", "richardson")
OUTPUT_FORMATS = ("plain", "json", "csv", "markdown")


_LOGGER_NAMES = set()


def get_logger(name):
    """Module logger at the configured level"""
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    logger = logging.getLogger(name)
    logger.setLevel(str(config.get("log_level", "WARNING")).upper())
    _LOGGER_NAMES.add(name)
    return logger


def set_log_level(level: str) -> None:
    """Re-level every module logger handed out so far"""
    level = str(level).upper()
    if level not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
        raise ConfigError(f"log_level: unknown level '{level}'")
    config.set("log_level", level)
    for name in _LOGGER_NAMES:
        logging.getLogger(name).setLevel(level)


class Config:
    """Centralized configuration management"""

    def __init__(self, config_file: str = "identity_toolkit.json"):
        self.config_file = config_file
        self.defaults = {
            # Exact kernel
            "kernel_max_index": 10000,
            "kernel_max_triangle": 500,

            # Series engine
            "accel": "auto",
            "max_raw_terms": 200000,
            "max_accel_terms": 400,
            "exact_head": 48,
            "exact_term_limit": 160,
            "default_tol": 1e-8,
            "extended_precision": False,
            "extended_digits": 30,

            # Identity suite
            "tolerance_overrides": {},
            "jobs": 4,
            "identity_filter": "",

            # Output
            "output_format": "plain",
            "report_timing": True,
            "color": True,

            # History
            "history_enabled": False,
            "database_path": "identity_history.db",

            # Advanced Settings
            "log_level": "WARNING",
        }

        self.settings = self.load_config()

    def load_config(self, path: Optional[str] = None) -> Dict[str, Any]:
        """Load configuration from file, merged over the defaults"""
        path = path or self.config_file
        settings = self.defaults.copy()
        if not os.path.exists(path):
            return settings

        try:
            if path.endswith(".json"):
                with open(path, "r") as f:
                    saved = json.load(f)
            else:
                saved = self._parse_key_values(path)
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"cannot read {path}: {e}") from e

        for key, value in saved.items():
            if key not in self.defaults:
                raise ConfigError(f"{path}: unknown setting '{key}'")
            settings[key] = self._coerce(key, value)
        return settings

    def load_file(self, path: str) -> None:
        """Replace current settings with defaults + the given file"""
        if not os.path.exists(path):
            raise ConfigError(f"config file not found: {path}")
        self.config_file = path
        self.settings = self.load_config(path)

    def _parse_key_values(self, path: str) -> Dict[str, Any]:
        values = {}
        with open(path, "r") as f:
            for lineno, raw in enumerate(f, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{lineno}: expected key = value")
                key, value = (part.strip() for part in line.split("=", 1))
                if key.startswith("tol."):
                    values.setdefault("tolerance_overrides", {})[key[4:]] = value
                else:
                    values[key] = value
        return values

    def _coerce(self, key: str, value: Any) -> Any:
        default = self.defaults[key]
        try:
            if isinstance(default, bool):
                if isinstance(value, str):
                    return value.strip().lower() in ("1", "true", "yes", "on")
                return bool(value)
            if isinstance(default, int):
                return int(value)
            if isinstance(default, float):
                return float(value)
            if isinstance(default, dict):
                if not isinstance(value, dict):
                    raise ConfigError(f"{key}: expected a mapping")
                return {str(k): float(v) for k, v in value.items()}
        except (TypeError, ValueError) as e:
            raise ConfigError(f"{key}: invalid value {value!r}") from e

        value = str(value)
        if key == "accel" and value not in ACCELERATION_METHODS:
            raise ConfigError(f"accel: unknown method '{value}' (choose from {', '.join(ACCELERATION_METHODS)})")
        if key == "output_format" and value not in OUTPUT_FORMATS:
            raise ConfigError(f"output_format: unknown format '{value}'")
        return value

    def save_config(self) -> bool:
        """Save configuration to file"""
        try:
            with open(self.config_file, "w") as f:
                json.dump(self.settings, f, indent=2, sort_keys=True)
            print(f"💾 Configuration saved to {self.config_file}")
            return True
        except Exception as e:
            print(f"❌ Config save error: {e}")
            return False

    def get(self, key: str, default: Any = None) -> Any:
        """Get configuration value"""
        return self.settings.get(key, default)

    def set(self, key: str, value: Any, persist: bool = False) -> bool:
        """Set configuration value (optionally saving it)"""
        if key not in self.defaults:
            raise ConfigError(f"unknown setting '{key}'")
        self.settings[key] = self._coerce(key, value)
        return self.save_config() if persist else True

    def update(self, updates: Dict[str, Any], persist: bool = False) -> bool:
        """Update multiple configuration values"""
        for key, value in updates.items():
            self.set(key, value)
        return self.save_config() if persist else True

    def apply_overrides(self, overrides: Dict[str, Any]) -> None:
        """Apply CLI flag values; None means 'not given'"""
        for key, value in overrides.items():
            if value is None:
                continue
            if key == "tolerance_overrides":
                merged = dict(self.settings["tolerance_overrides"])
                merged.update(self._coerce(key, value))
                self.settings[key] = merged
            else:
                self.set(key, value)

    def reset_to_defaults(self, persist: bool = False) -> bool:
        """Reset configuration to defaults"""
        self.settings = self.defaults.copy()
        return self.save_config() if persist else True

    def get_kernel_config(self) -> Dict[str, int]:
        """Get exact-kernel bounds"""
        return {
            "max_index": self.get("kernel_max_index"),
            "max_triangle": self.get("kernel_max_triangle"),
        }

    def get_series_config(self) -> Dict[str, Any]:
        """Get series-engine configuration"""
        return {
            "accel": self.get("accel"),
            "max_raw_terms": self.get("max_raw_terms"),
            "max_accel_terms": self.get("max_accel_terms"),
            "exact_head": self.get("exact_head"),
            "exact_term_limit": self.get("exact_term_limit"),
            "extended_precision": self.get("extended_precision"),
            "extended_digits": self.get("extended_digits"),
        }

    def get_suite_config(self) -> Dict[str, Any]:
        """Get identity-suite configuration"""
        return {
            "tolerance_overrides": dict(self.get("tolerance_overrides")),
            "jobs": self.get("jobs"),
            "filter": self.get("identity_filter"),
            "default_tol": self.get("default_tol"),
        }

    def get_output_config(self) -> Dict[str, Any]:
        """Get report-output configuration"""
        return {
            "format": self.get("output_format"),
            "timing": self.get("report_timing"),
            "color": self.get("color"),
        }

    def get_history_config(self) -> Dict[str, Any]:
        """Get verification-history configuration"""
        return {
            "enabled": self.get("history_enabled"),
            "database_path": os.path.expanduser(self.get("database_path")),
        }

    def show_current_config(self):
        """Display current configuration"""
        print("\n⚙️ CURRENT CONFIGURATION")
        print("=" * 50)

        kernel = self.get_kernel_config()
        print(f"🔢 Kernel bounds: 1-D ≤ {kernel['max_index']}, triangles ≤ {kernel['max_triangle']}")

        series = self.get_series_config()
        print(f"⚡ Acceleration: {series['accel']}")
        print(f"📏 Term caps: raw {series['max_raw_terms']}, accelerated {series['max_accel_terms']}")
        print(f"🎯 Exact head: {series['exact_head']} terms")
        print(f"🔬 Extended precision: {'✅ ' + str(series['extended_digits']) + ' digits' if series['extended_precision'] else '❌'}")

        suite = self.get_suite_config()
        print(f"👥 Jobs: {suite['jobs']}")
        print(f"🎚️ Tolerance overrides: {len(suite['tolerance_overrides'])} configured")
        if suite["filter"]:
            print(f"🔍 Filter: {suite['filter']}")

        output = self.get_output_config()
        print(f"📄 Output format: {output['format']}")

        history = self.get_history_config()
        print(f"💾 History: {'✅ ' + history['database_path'] if history['enabled'] else '❌'}")
        print(f"📝 Log level: {self.get('log_level')}")


# Global config instance
config = Config()
