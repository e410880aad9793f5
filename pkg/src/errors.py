"""
Exceptions et rapports de vérification partagés par tous les modules.

Les opérations `check_*` ne lèvent jamais d'exception pour un échec
mathématique : elles renvoient un `Report`. Les exceptions sont réservées
aux entrées invalides et aux préconditions violées.
"""

from dataclasses import dataclass, field
from typing import Optional


class DGCalcError(Exception):
    """Erreur de base du moteur."""

    exit_code = 1


class InputError(DGCalcError):
    """Fichier mal formé, objet ou flèche inconnus, argument invalide."""

    exit_code = 2

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        if line is not None:
            message = f"{message} (ligne {line}, colonne {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class StructureError(DGCalcError):
    """Incohérence de formes ou de dimensions."""

    exit_code = 2


class MathematicalError(DGCalcError):
    """Invariant mathématique violé ; `witness` décrit le contre-exemple."""

    exit_code = 1

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass
class Report:
    name: str
    failures: list = field(default_factory=list)
    checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, **details) -> None:
        self.failures.append(details)

    def merge(self, other: "Report") -> "Report":
        self.failures.extend(other.failures)
        self.checked += other.checked
        return self

    def to_lines(self) -> list:
        status = "OK" if self.ok else "ECHEC"
        lines = [f"{self.name}: {status} ({self.checked} verifications, {len(self.failures)} echecs)"]
        for failure in self.failures:
            parts = ", ".join(f"{k}={failure[k]}" for k in sorted(failure))
            lines.append(f"  - {parts}")
        return lines
