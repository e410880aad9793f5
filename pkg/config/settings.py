"""
Configuration centralisée du moteur de calcul DG (dgcalc).

Ce fichier contient toutes les configurations pour :
- Moteur (bornes de longueur de chemins et d'arité A∞)
- Fixtures (carquois DG livrés avec le dépôt)
- Rapports (barres de progression, format JSON)
- Logging (structlog, rendu sur stderr)
"""

import os
import sys
import logging
from pathlib import Path
from dataclasses import dataclass, field
from typing import Optional

import structlog
from dotenv import load_dotenv

# Charger les variables d'environnement depuis .env
load_dotenv()

ROOT_DIR = Path(__file__).resolve().parent.parent


def read_threads(raw: Optional[str] = None) -> int:
    """
    Indication du nombre de threads (DGCALC_THREADS, défaut 1).

    Les calculs restent séquentiels : la valeur est validée puis journalisée.

    Raises:
        ValueError: valeur non entière ou inférieure à 1
    """
    if raw is None:
        raw = os.getenv("DGCALC_THREADS", "1")
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"DGCALC_THREADS doit etre un entier >= 1 (recu {raw!r})") from None
    if value < 1:
        raise ValueError(f"DGCALC_THREADS doit etre un entier >= 1 (recu {raw!r})")
    return value


@dataclass
class EngineConfig:
    max_path_len: int = 8
    max_arity: int = 4
    stabilization_margin: int = 1

    @property
    def threads(self) -> int:
        # Seule variable d'environnement lue, relue à chaque accès.
        return read_threads()


@dataclass
class FixtureConfig:
    fixtures_dir: Path = ROOT_DIR / "fixtures"
    x_surface: str = "x_surface.dgq"
    x_first_quiver: str = "x_first_quiver.dgq"
    v_collection: str = "v_collection.dgq"
    y_surface: str = "y_surface.dgq"
    delta_family: str = "delta_family.dgq"
    names: tuple = field(
        default=(
            "x_surface.dgq",
            "x_first_quiver.dgq",
            "v_collection.dgq",
            "y_surface.dgq",
            "delta_family.dgq",
        )
    )

    def path(self, name: str) -> Path:
        return self.fixtures_dir / name


@dataclass
class ReportConfig:
    show_progress: bool = True
    json_indent: int = 2


@dataclass
class LoggingConfig:
    level: str = "WARNING"


def configure_logging(level: str = "WARNING") -> None:
    """Configure structlog pour écrire sur stderr (stdout reste réservé aux rapports)."""
    structlog.configure(
        processors=[
            structlog.processors.add_log_level,
            structlog.dev.ConsoleRenderer(colors=False),
        ],
        wrapper_class=structlog.make_filtering_bound_logger(
            getattr(logging, level.upper(), logging.WARNING)
        ),
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
        cache_logger_on_first_use=False,
    )


# Instances globales
engine_config = EngineConfig()
fixture_config = FixtureConfig()
report_config = ReportConfig()
logging_config = LoggingConfig()

if __name__ == "__main__":
    print("=== Configuration moteur ===")
    print(engine_config)
    print("\n=== Configuration fixtures ===")
    print(fixture_config)
    print("\n=== Configuration rapports ===")
    print(report_config)
    print("\n=== Configuration logging ===")
    print(logging_config)
