#!/usr/bin/env python3
"""
Configuration Manager Module
Zentrale Konfigurationsverwaltung für Rechengrenzen, Profile, Knotensuche und Orakel
"""

import os
import copy
import json
import logging
from typing import Dict, Any, Optional

from core.architecture import ComputationLimits, Granularity
from core.oracle import METHODS

logger = logging.getLogger(__name__)

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


class ConfigManager:
    """Zentrale Konfigurationsverwaltung"""

    def __init__(self, config_file: Optional[str] = None) -> None:
        """
        Initialisiert den Config Manager

        Args:
            config_file: Pfad zur JSON-Konfigurationsdatei; None verwendet nur Standardwerte
        """
        self.config_file: Optional[str] = config_file
        self.config: Dict[str, Any] = self._load_config()

    def _load_config(self) -> Dict[str, Any]:
        """Lädt die Konfiguration aus der Datei und ergänzt fehlende Standardwerte"""
        config = self._get_default_config()
        if self.config_file is None:
            return config
        try:
            if os.path.exists(self.config_file):
                with open(self.config_file, 'r', encoding='utf-8') as f:
                    loaded = json.load(f)
                _merge(config, loaded)
                logger.info(f"Konfiguration aus {self.config_file} geladen")
            else:
                logger.info(f"Konfigurationsdatei {self.config_file} nicht gefunden, verwende Standard")
        except (json.JSONDecodeError, IOError) as e:
            logger.error(f"Fehler beim Laden der Konfiguration: {e}")
        return config

    def _get_default_config(self) -> Dict[str, Any]:
        """Gibt Standard-Konfiguration zurück"""
        return {
            "limits": {
                "modulus": 10 ** 6,
                "ambient": 10 ** 7,
                "galois_scan": 10 ** 7
            },
            "profile": {
                "granularity": "auto",
                "max_workers": 1
            },
            "knot": {
                "bound": 30
            },
            "oracle": {
                "method": "exhaustive",
                "bound": 10,
                "denominator_bound": 1,
                "spot_check_budget": 200
            },
            "logging": {
                "level": "WARNING"
            }
        }

    def get(self, key: str, default: Any = None) -> Any:
        """
        Holt einen Konfigurationswert

        Args:
            key: Konfigurationsschlüssel (dot notation: "limits.ambient")
            default: Standardwert falls nicht gefunden

        Returns:
            Konfigurationswert oder Standardwert
        """
        value = self.config
        for k in key.split('.'):
            if isinstance(value, dict) and k in value:
                value = value[k]
            else:
                return default
        return value

    def set(self, key: str, value: Any) -> bool:
        """
        Setzt einen Konfigurationswert

        Args:
            key: Konfigurationsschlüssel (dot notation: "oracle.bound")
            value: Neuer Wert

        Returns:
            True wenn erfolgreich, False sonst
        """
        keys = key.split('.')
        config = self.config
        for k in keys[:-1]:
            if k not in config:
                config[k] = {}
            if not isinstance(config[k], dict):
                logger.error(f"Fehler beim Setzen der Konfiguration '{key}': '{k}' ist kein Abschnitt")
                return False
            config = config[k]
        config[keys[-1]] = value
        logger.debug(f"Konfiguration '{key}' auf '{value}' gesetzt")
        return True

    def update(self, updates: Dict[str, Any]) -> bool:
        """
        Aktualisiert mehrere Konfigurationswerte

        Args:
            updates: Dictionary mit Updates

        Returns:
            True wenn erfolgreich, False sonst
        """
        for key, value in updates.items():
            if not self.set(key, value):
                return False
        return True

    def get_limits(self) -> ComputationLimits:
        """Rechengrenzen aus den Abschnitten limits und profile"""
        return ComputationLimits(
            modulus=int(self.get("limits.modulus")),
            ambient=int(self.get("limits.ambient")),
            galois=int(self.get("limits.galois_scan")),
            granularity=Granularity(self.get("profile.granularity")),
            max_workers=int(self.get("profile.max_workers")),
        )

    def log_level(self, verbose: bool = False) -> int:
        """Log-Level aus logging.level; DEBUG bei verbose, WARNING bei unbekanntem Namen"""
        if verbose:
            return logging.DEBUG
        level = str(self.get("logging.level", "WARNING")).upper()
        return getattr(logging, level) if level in LOG_LEVELS else logging.WARNING

    def validate_config(self) -> Dict[str, Any]:
        """
        Validiert die Konfiguration

        Returns:
            Dictionary mit Validierungsergebnissen
        """
        validation_results = {
            "valid": True,
            "errors": [],
            "warnings": []
        }

        for key in ("limits.modulus", "limits.ambient", "limits.galois_scan", "knot.bound",
                    "oracle.bound", "oracle.denominator_bound", "profile.max_workers"):
            value = self.get(key)
            if not isinstance(value, int) or value <= 0:
                validation_results["errors"].append(f"Ungültiger Wert für {key}: {value}")
                validation_results["valid"] = False

        budget = self.get("oracle.spot_check_budget")
        if not isinstance(budget, int) or budget < 0:
            validation_results["errors"].append(f"Ungültiges Stichprüfungsbudget: {budget}")
            validation_results["valid"] = False

        method = self.get("oracle.method")
        if method not in METHODS:
            validation_results["errors"].append(f"Unbekannte Suchmethode: {method}")
            validation_results["valid"] = False

        granularity = self.get("profile.granularity")
        if granularity not in {g.value for g in Granularity}:
            validation_results["errors"].append(f"Unbekannte Granularität: {granularity}")
            validation_results["valid"] = False

        if str(self.get("logging.level")).upper() not in LOG_LEVELS:
            validation_results["warnings"].append(
                f"Unbekanntes Log-Level '{self.get('logging.level')}', verwende WARNING"
            )

        workers = self.get("profile.max_workers")
        if isinstance(workers, int) and workers > (os.cpu_count() or 1):
            validation_results["warnings"].append(f"Mehr Worker ({workers}) als CPU-Kerne")

        return validation_results


def _merge(base: Dict[str, Any], updates: Dict[str, Any]) -> None:
    for key, value in updates.items():
        if isinstance(value, dict) and isinstance(base.get(key), dict):
            _merge(base[key], value)
        else:
            base[key] = copy.deepcopy(value)
