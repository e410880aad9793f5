"""
Fichiers .dgq : carquois DG au format JSON canonique.

Ce module fournit :
- Lecture avec erreurs localisées (ligne, colonne)
- Écriture canonique (clés triées, indentation 2, UTF-8, fins de ligne LF)
- Conversion vers `DGQuiver` et réseau de Picard optionnel
- Familles à un paramètre formel t et leur spécialisation exacte

Format :
    {
      "vertices": ["O", "O(E2)", ...],
      "arrows": [{"name": "alpha", "src": "O", "tgt": "O(E2)", "degree": 0}, ...],
      "differential": {"eps1": [{"coeff": "1", "path": ["gamma1", "betabar"]}]},
      "relations": [[{"coeff": "1", "path": [...]}, {"coeff": "-1", "path": [...]}]],
      "lattice": {...},        (optionnel)
      "parameters": ["t"],     (familles uniquement)
      "comment": "..."         (optionnel)
    }
Les chemins s'écrivent de gauche à droite, la flèche la plus à droite agissant en premier.
"""

import json
from fractions import Fraction
from pathlib import Path
from typing import Optional

import structlog
from sympy import Rational, Symbol
from sympy.parsing.sympy_parser import parse_expr

from config import report_config
from src.categories.quiver import Arrow, DGQuiver
from src.errors import InputError
from src.geometry.surfaces import PicardLattice

logger = structlog.get_logger()

REQUIRED_KEYS = ("vertices", "arrows", "relations")


def canonical_json(data: dict) -> str:
    return json.dumps(data, sort_keys=True, indent=report_config.json_indent, ensure_ascii=False) + "\n"


def _locate(text: str, needle: str) -> tuple:
    """(ligne, colonne) de la première occurrence, (None, None) sinon."""
    position = text.find(needle)
    if position < 0:
        return None, None
    line = text.count("\n", 0, position) + 1
    column = position - (text.rfind("\n", 0, position) + 1) + 1
    return line, column


def parse_coefficient(text, parameters: Optional[dict] = None) -> Fraction:
    """Coefficient rationnel exact ; avec `parameters`, expression polynomiale en t."""
    if parameters is None:
        try:
            return Fraction(str(text))
        except (ValueError, ZeroDivisionError):
            raise InputError(f"coefficient invalide : {text!r}") from None
    symbols = {name: Symbol(name) for name in parameters}
    try:
        expr = parse_expr(str(text), local_dict=symbols)
    except Exception:
        raise InputError(f"coefficient invalide : {text!r}") from None
    value = expr.subs({symbols[name]: Rational(str(v)) for name, v in parameters.items()})
    if not value.is_Rational:
        raise InputError(f"coefficient {text!r} non rationnel apres substitution")
    return Fraction(int(value.p), int(value.q))


class DgqFile:
    """
    Document .dgq chargé en mémoire.

    Attributes:
        data: document JSON (dictionnaire)
        text: texte source, pour localiser les erreurs
        name: nom du carquois (nom du fichier sans extension)

    Example:
        >>> f = DgqFile.load("fixtures/x_surface.dgq")
        >>> q = f.to_quiver()
        >>> f.save("/tmp/copie.dgq")
    """

    def __init__(self, data: dict, text: str = "", name: str = ""):
        self.data = data
        self.text = text or canonical_json(data)
        self.name = name
        for key in REQUIRED_KEYS:
            if key not in data:
                raise InputError(f"cle obligatoire manquante : {key!r}", line=1, column=1)

    @classmethod
    def load(cls, path) -> "DgqFile":
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise InputError(f"lecture impossible de {path} : {e.strerror}") from None
        return cls.loads(text, name=path.stem)

    @classmethod
    def loads(cls, text: str, name: str = "") -> "DgqFile":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise InputError(f"JSON invalide : {e.msg}", line=e.lineno, column=e.colno) from None
        if not isinstance(data, dict):
            raise InputError("le document doit etre un objet JSON", line=1, column=1)
        return cls(data, text, name)

    def dumps(self) -> str:
        return canonical_json(self.data)

    def save(self, path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(self.dumps())
        logger.info("dgq_saved", path=str(path), arrows=len(self.data["arrows"]))
        return path

    # ==================== Conversion ====================

    @property
    def parameters(self) -> list:
        return list(self.data.get("parameters", []))

    @property
    def is_family(self) -> bool:
        return bool(self.parameters)

    def _error(self, message: str, needle: str) -> InputError:
        line, column = _locate(self.text, needle)
        return InputError(message, line=line, column=column)

    def _combination(self, terms, values: Optional[dict]) -> dict:
        combo = {}
        if not isinstance(terms, list):
            raise self._error("combinaison attendue sous forme de liste", json.dumps(terms, ensure_ascii=False)[:20])
        for term in terms:
            try:
                coeff = parse_coefficient(term["coeff"], values)
                path = tuple(term["path"])
            except (KeyError, TypeError):
                raise self._error(f"terme mal forme : {term!r}", '"coeff"') from None
            if coeff:
                combo[path] = combo.get(path, 0) + coeff
        return {p: x for p, x in combo.items() if x}

    def to_quiver(self, values: Optional[dict] = None) -> DGQuiver:
        """
        Raises:
            InputError: flèche inconnue, chemin non composable, famille non spécialisée
        """
        if self.is_family and values is None:
            raise InputError(f"famille de parametres {self.parameters} : specialiser d'abord (deform --t)")
        arrows = []
        for entry in self.data["arrows"]:
            try:
                arrows.append(Arrow(entry["name"], entry["src"], entry["tgt"], int(entry.get("degree", 0))))
            except (KeyError, TypeError, ValueError):
                raise self._error(f"fleche mal formee : {entry!r}", '"arrows"') from None
        differential = {}
        for name, terms in self.data.get("differential", {}).items():
            combo = self._combination(terms, values)
            if combo:
                differential[name] = combo
        relations = [self._combination(terms, values) for terms in self.data["relations"]]
        try:
            return DGQuiver(self.data["vertices"], arrows, differential, [r for r in relations if r], name=self.name)
        except InputError as e:
            # "fleche inconnue : eps3" -> position de "eps3" dans le texte
            needle = str(e).rsplit(":", 1)[-1].strip().split("*")[0]
            line, column = _locate(self.text, f'"{needle}"')
            raise InputError(str(e), line=line, column=column) from None

    def lattice(self) -> Optional[PicardLattice]:
        data = self.data.get("lattice")
        return PicardLattice.from_dict(data) if data else None

    @classmethod
    def from_quiver(cls, q: DGQuiver, lattice: Optional[PicardLattice] = None, comment: str = "") -> "DgqFile":
        def terms(combo):
            return [{"coeff": str(Fraction(x)), "path": list(path)} for path, x in combo.items()]

        data = {
            "vertices": list(q.vertices),
            "arrows": [{"name": a.name, "src": a.src, "tgt": a.tgt, "degree": a.degree} for a in q.arrows],
            "differential": {name: terms(combo) for name, combo in q.differential.items() if combo},
            "relations": [terms(r) for r in q.relations],
        }
        if lattice is not None:
            data["lattice"] = lattice.to_dict()
        if comment:
            data["comment"] = comment
        return cls(data, name=q.name)


# ==================== Familles ====================

class DeformationFamily:
    """
    Carquois DG dont les coefficients dépendent polynomialement d'un paramètre.

    Example:
        >>> family = DeformationFamily(DgqFile.load("fixtures/delta_family.dgq"))
        >>> family.specialize(Fraction(0)).save("/tmp/x.dgq")
    """

    def __init__(self, document: DgqFile):
        if len(document.parameters) != 1:
            raise InputError(f"famille a un parametre attendue, trouve {document.parameters}")
        self.document = document
        self.parameter = document.parameters[0]

    def specialize(self, value) -> DgqFile:
        """
        Substitue t = value ; les termes nuls et les différentielles vides
        disparaissent, la clé "parameters" est retirée.
        """
        value = Fraction(str(value))
        values = {self.parameter: value}

        def terms(raw):
            out = []
            for term in raw:
                coeff = parse_coefficient(term["coeff"], values)
                if coeff:
                    out.append({"coeff": str(coeff), "path": list(term["path"])})
            return out

        source = self.document.data
        data = {key: v for key, v in source.items() if key not in ("parameters", "differential", "relations")}
        differential = {}
        for name, raw in source.get("differential", {}).items():
            specialized = terms(raw)
            if specialized:
                differential[name] = specialized
        data["differential"] = differential
        data["relations"] = [r for r in (terms(raw) for raw in source["relations"]) if r]
        logger.info("family_specialized", family=self.document.name, value=str(value))
        return DgqFile(data, name=f"{self.document.name}_t={value}")

    def quiver(self, value) -> DGQuiver:
        return self.specialize(value).to_quiver()
