"""
Interface en ligne de commande du moteur de calcul DG.

Chaque commande charge un fichier .dgq (ou .ainf), exécute l'opération
demandée et écrit un rapport déterministe sur la sortie standard. Les
journaux structlog et les barres de progression vont sur stderr.

Codes de sortie : 0 succès, 1 échec mathématique, 2 entrée invalide.

Usage:
    python -m src.cli check fixtures/x_surface.dgq
    python -m src.cli cohomology fixtures/x_surface.dgq
    python -m src.cli exceptional fixtures/v_collection.dgq
    python -m src.cli mutate fixtures/x_surface.dgq --word "L1 R2"
    python -m src.cli minimal-model fixtures/x_surface.dgq --emit x.ainf
    python -m src.cli massey fixtures/x_surface.dgq --chain "O,O(E2),O(E1+E2),O(H)"
    python -m src.cli universal-dg fixtures/x_surface.dgq
    python -m src.cli uext fixtures/x_surface.dgq --emit reconstruit.dgq
    python -m src.cli deform fixtures/delta_family.dgq --t 0
    python -m src.cli chi fixtures/x_surface.dgq --divisor "H-E2"
"""

import argparse
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional

import pandas as pd
import structlog

from config import configure_logging, engine_config, logging_config, report_config
from src.ainfinity.ainfty import check_stasheff, check_strict_unit
from src.ainfinity.barcobar import bar, finiteness_report, universal_dg
from src.ainfinity.transfer import massey3, massey_profile, minimal_model, strictify
from src.categories.dgcore import (
    DGCategory,
    check_dg_axioms,
    collapse_CIJ,
    exceptionality_report,
    format_combination,
    forward_subcategory,
    hom_cohomology,
    is_exceptional_collection,
)
from src.categories.mutation import BraidWord, apply_braid, euler_form, hom_table
from src.categories.quiver import check_quiver, path_algebra, presentation_of
from src.errors import DGCalcError, InputError, MathematicalError, Report
from src.geometry.surfaces import (
    augment_chain,
    chi,
    format_divisor,
    parse_divisor,
    riemann_roch_report,
)
from src.geometry.uext import collection_of, dg_quiver_of_collection, pipeline_report, tilting_collection
from src.storage.ainf_file import load_ainf, save_ainf
from src.storage.dgq_file import DeformationFamily, DgqFile

logger = structlog.get_logger()


def _degree_columns(tables: dict) -> list:
    return sorted({k for dims in tables.values() for k in dims})


def cohomology_frame(c: DGCategory, table: Optional[dict] = None) -> pd.DataFrame:
    """Une ligne par paire d'objets non nulle, une colonne H^k par degré."""
    table = table if table is not None else hom_cohomology(c)
    degrees = _degree_columns(table)
    rows = []
    for (i, j), dims in sorted(table.items()):
        if not dims:
            continue
        row = {"source": c.objects[i], "but": c.objects[j]}
        for k in degrees:
            row[f"H^{k}"] = dims.get(k, 0)
        rows.append(row)
    return pd.DataFrame(rows, columns=["source", "but"] + [f"H^{k}" for k in degrees])


def gram_frame(names: list, gram: list) -> pd.DataFrame:
    return pd.DataFrame(gram, index=names, columns=names)


class DGCalcRunner:
    """
    Exécute une commande sur un fichier d'entrée.

    Attributes:
        path: fichier .dgq ou .ainf
        max_path_len: borne de longueur des chemins
        show_progress: barres tqdm sur stderr
        stats: compteurs et erreurs de l'exécution
    """

    def __init__(self, path: str, max_path_len: Optional[int] = None, show_progress: bool = False):
        self.path = Path(path)
        self.max_path_len = max_path_len or engine_config.max_path_len
        self.show_progress = show_progress
        self.document = None
        self.quiver = None
        self.category = None
        self.lines = []
        self.stats = {"reports": 0, "failures": 0, "errors": []}

    # ==================== Chargement ====================

    def _ensure_document(self) -> DgqFile:
        if self.document is None:
            if self.path.suffix != ".dgq":
                raise InputError(f"fichier .dgq attendu : {self.path}")
            self.document = DgqFile.load(self.path)
        return self.document

    def _ensure_quiver(self):
        if self.quiver is None:
            self.quiver = self._ensure_document().to_quiver()
        return self.quiver

    def _ensure_category(self) -> DGCategory:
        if self.category is None:
            self.category = path_algebra(self._ensure_quiver(), self.max_path_len)
        return self.category

    def _ordered_category(self) -> DGCategory:
        c = self._ensure_category()
        if not is_exceptional_collection(c):
            raise MathematicalError("not exceptional : sous-categorie ordonnee indisponible", witness={"category": c.name})
        return forward_subcategory(c)

    def _ensure_lattice(self):
        lattice = self._ensure_document().lattice()
        if lattice is None:
            raise InputError(f"{self.path.name} : pas de reseau de Picard (cle 'lattice')")
        return lattice

    # ==================== Sorties ====================

    def emit(self, *lines) -> None:
        self.lines.extend(lines)

    def emit_frame(self, frame: pd.DataFrame) -> None:
        if frame.empty:
            self.emit("(vide)")
        else:
            self.emit(*frame.to_string(index=False).splitlines())

    def emit_report(self, report: Report) -> bool:
        self.stats["reports"] += 1
        self.stats["failures"] += len(report.failures)
        self.emit(*report.to_lines())
        return report.ok

    # ==================== Commandes ====================

    def check(self) -> int:
        if self.path.suffix == ".ainf":
            structure = load_ainf(self.path)
            return 0 if self.emit_report(check_stasheff(structure, show_progress=self.show_progress)) else 1
        q = self._ensure_quiver()
        ok = self.emit_report(check_quiver(q, self.max_path_len))
        c = self._ensure_category()
        ok = self.emit_report(check_dg_axioms(c, show_progress=self.show_progress)) and ok
        self.emit(f"objets: {len(c.objects)}, dimension totale: {sum(c.dim(i, j) for (i, j) in c.pairs())}")
        return 0 if ok else 1

    def cohomology(self) -> int:
        self.emit_frame(cohomology_frame(self._ensure_category()))
        return 0

    def exceptional(self) -> int:
        report = exceptionality_report(self._ensure_category())
        self.emit_report(report)
        self.emit("exceptionnelle" if report.ok else "not exceptional")
        return 0 if report.ok else 1

    def mutate(self, word: str) -> int:
        braid = BraidWord.parse(word)
        c = self._ensure_category()
        col = collection_of(c)
        self.emit("Gram avant :")
        self.emit_frame(gram_frame(list(c.objects), euler_form(col)))
        mutated = apply_braid(col, braid)
        names = mutated.names()
        self.emit(f"mot : {braid}", "collection :", *[f"  {k + 1}. {name}" for k, name in enumerate(names)])
        table = hom_table(mutated)
        degrees = _degree_columns(table)
        rows = [
            {"source": names[i], "but": names[j], **{f"H^{k}": dims.get(k, 0) for k in degrees}}
            for (i, j), dims in sorted(table.items())
            if dims
        ]
        self.emit_frame(pd.DataFrame(rows))
        self.emit("Gram apres :")
        self.emit_frame(gram_frame(names, euler_form(mutated)))
        return 0

    def minimal_model(self, max_arity: Optional[int], strategy: str, emit: Optional[str]) -> int:
        c = self._ordered_category()
        mm = minimal_model(c, max_arity=max_arity, strategy=strategy, show_progress=self.show_progress)
        a = mm.structure
        rows = [{"arite": n, "operations non nulles": len(table)} for n, table in sorted(a.ops.items())]
        self.emit_frame(pd.DataFrame(rows))
        ok = self.emit_report(check_stasheff(a, up_to=a.max_arity, show_progress=self.show_progress))
        ok = self.emit_report(check_strict_unit(a)) and ok
        strictify(mm)
        if emit:
            save_ainf(a, emit)
            self.emit(f"ecrit : {emit}")
        return 0 if ok else 1

    def massey(self, chain: str, elements: Optional[str]) -> int:
        c = self._ordered_category()
        objs = tuple(c.index(name.strip()) for name in chain.split(","))
        if len(objs) != 4:
            raise InputError("--chain attend quatre objets separes par des virgules")
        mm = minimal_model(c, max_arity=3, show_progress=self.show_progress)
        a = mm.structure
        if elements:
            labels = [e.strip() for e in elements.split(",")]
            if len(labels) != 3:
                raise InputError("--elements attend trois classes x,y,z")
            pairs = [(objs[2], objs[3]), (objs[1], objs[2]), (objs[0], objs[1])]
            picked = []
            for label, (i, j) in zip(labels, pairs):
                lookup = {a.label(i, j, x): x for x in range(a.dim(i, j))}
                if label not in lookup:
                    raise InputError(f"classe inconnue {label!r} ; disponibles : {sorted(lookup)}")
                picked.append(lookup[label])
            coset = massey3(mm, objs, *picked)
            names = a.space(objs[0], objs[3]).labels(coset.degree)
            self.emit(
                f"<{', '.join(labels)}> = {format_combination(names, coset.local(coset.value))}",
                f"indetermination : dimension {len(coset.indeterminacy)}",
                f"contient 0 : {'oui' if coset.contains_zero() else 'non'}",
            )
            return 0
        profile = massey_profile(mm)
        rows = [
            {"objets": " -> ".join(str(a.objects[o]) for o in key[:4]), "|x|": key[4], "|y|": key[5], "|z|": key[6], "rang": rank}
            for key, rank in sorted(profile.items())
            if key[:4] == objs
        ]
        self.emit_frame(pd.DataFrame(rows))
        return 0

    def universal_dg(self, emit: Optional[str]) -> int:
        c = self._ordered_category()
        mm = minimal_model(c, show_progress=self.show_progress)
        b = bar(mm.structure)
        ok = self.emit_report(b.check_d2(show_progress=self.show_progress))
        ok = self.emit_report(b.check_coleibniz()) and ok
        u = universal_dg(mm.structure)
        ok = self.emit_report(finiteness_report(u)) and ok
        expected, actual = hom_cohomology(c), hom_cohomology(u)
        comparison = Report("quasi-isomorphisme")
        for pair in sorted(set(expected) | set(actual)):
            comparison.checked += 1
            if expected.get(pair, {}) != actual.get(pair, {}):
                comparison.fail(pair=pair, attendu=expected.get(pair, {}), obtenu=actual.get(pair, {}))
        ok = self.emit_report(comparison) and ok
        self.emit_frame(cohomology_frame(u, actual))
        if emit:
            DgqFile.from_quiver(presentation_of(u).quiver).save(emit)
            self.emit(f"ecrit : {emit}")
        return 0 if ok else 1

    def tilting(self) -> int:
        c = self._ensure_category()
        td = tilting_collection(collection_of(c), show_progress=self.show_progress)
        self.emit(*[f"extension {td.names[i]} par {td.names[j]} : Ext1 de dimension {w}" for (i, j), w in sorted(td.steps.items()) if w])
        self.emit_frame(cohomology_frame(td.algebra))
        return 0

    def uext(self, emit: Optional[str], mode: str) -> int:
        c = self._ensure_category()
        td = tilting_collection(collection_of(c), show_progress=self.show_progress)
        self.emit("algebre basculante :")
        self.emit_frame(cohomology_frame(td.algebra))
        ok = self.emit_report(pipeline_report(td, c, show_progress=self.show_progress))
        presentation = dg_quiver_of_collection(td, mode=mode, show_progress=self.show_progress)
        q = presentation.quiver
        self.emit(f"carquois DG : {len(q.arrows)} fleches, {len(q.relations)} relations, {len(q.differential)} differentielles")
        if emit:
            DgqFile.from_quiver(q, lattice=self._ensure_document().lattice()).save(emit)
            self.emit(f"ecrit : {emit}")
        return 0 if ok else 1

    def deform(self, value: str, emit: Optional[str], classify: bool) -> int:
        family = DeformationFamily(self._ensure_document())
        try:
            t = Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise InputError(f"valeur de parametre invalide : {value!r}") from None
        specialized = family.specialize(t)
        if emit:
            specialized.save(emit)
        if not classify:
            if not emit:
                self.emit(*specialized.dumps().rstrip("\n").split("\n"))
            return 0
        c = path_algebra(specialized.to_quiver(), self.max_path_len)
        table = hom_cohomology(c)
        concentrated = all(set(dims) <= {0} for dims in table.values())
        self.emit(f"t = {t} : cohomologie {'concentree en degre 0' if concentrated else 'non concentree en degre 0'}")
        if concentrated:
            self.emit_frame(cohomology_frame(collapse_CIJ(c)))
        else:
            self.emit_frame(cohomology_frame(c, table))
        return 0

    def chi(self, divisor: str) -> int:
        lattice = self._ensure_lattice()
        d = parse_divisor(lattice, divisor)
        self.emit(f"chi({format_divisor(lattice, d)}) = {chi(lattice, d)}")
        return 0

    def euler(self) -> int:
        lattice = self._ensure_lattice()
        rows = riemann_roch_report(lattice, self._ensure_category())
        frame = pd.DataFrame(rows, columns=["source", "but", "chi", "euler"])
        self.emit_frame(frame)
        mismatches = frame[frame["chi"] != frame["euler"]]
        report = Report("Riemann-Roch", checked=len(frame))
        for row in mismatches.itertuples(index=False):
            report.fail(pair=(row.source, row.but), chi=row.chi, euler=row.euler)
        return 0 if self.emit_report(report) else 1

    def augment(self, base: str, steps: list) -> int:
        lattice = self._ensure_lattice()
        classes = [parse_divisor(lattice, d.strip()) for d in base.split(",")]
        parsed = []
        for step in steps:
            divisor, _, slot = step.rpartition(":")
            if not divisor or not slot.isdigit():
                raise InputError(f"etape d'augmentation invalide : {step!r} (attendu R:k)")
            parsed.append((parse_divisor(lattice, divisor), int(slot)))
        result = augment_chain(lattice, classes, parsed)
        names = [format_divisor(lattice, d) for d in result]
        self.emit("collection : <" + ", ".join(names) + ">")
        gram = [[chi(lattice, tuple(y - x for x, y in zip(a, b))) for b in result] for a in result]
        self.emit_frame(gram_frame(names, gram))
        return 0


# ==================== Analyse des arguments ====================

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dgcalc",
        description="Calculs exacts sur les categories DG, complexes tordus et structures A-infini",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Exemples:
  python -m src.cli check fixtures/x_surface.dgq
  python -m src.cli deform fixtures/delta_family.dgq --t 0 | diff - fixtures/x_surface.dgq
  python -m src.cli exceptional fixtures/v_collection.dgq

Environnement:
  DGCALC_THREADS  indication du nombre de threads (entier >= 1, defaut 1) ;
                  les calculs restent sequentiels, la valeur est seulement journalisee
        """,
    )
    parser.add_argument("--quiet", action="store_true", help="Mode silencieux (erreurs seulement, pas de barre de progression)")
    parser.add_argument("--verbose", action="store_true", help="Journaux detailles sur stderr")
    parser.add_argument("--max-path-len", type=int, default=None, help=f"Longueur maximale des chemins (defaut: {engine_config.max_path_len})")

    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, help_text: str):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("file", help="Fichier .dgq (ou .ainf pour check)")
        return p

    command("check", "Verifie le carquois et les axiomes DG")
    command("cohomology", "Table des cohomologies des espaces de morphismes")
    command("exceptional", "Teste si les objets forment une collection exceptionnelle")
    p = command("mutate", "Applique un mot de tresses a la collection des objets")
    p.add_argument("--word", required=True, help='Mot de tresses, ex. "L1 R2"')
    p = command("minimal-model", "Modele minimal A-infini par transfert")
    p.add_argument("--max-arity", type=int, default=None, help="Arite maximale (defaut: nombre d'objets - 1)")
    p.add_argument("--strategy", choices=["first", "last"], default="first", help="Choix du scindage")
    p.add_argument("--emit", default=None, help="Ecrit la structure dans un fichier .ainf")
    p = command("massey", "Produits de Massey triples")
    p.add_argument("--chain", required=True, help='Quatre objets, ex. "O,O(E2),O(E1+E2),O(H)"')
    p.add_argument("--elements", default=None, help='Trois classes x,y,z (z appliquee en premier)')
    p = command("universal-dg", "Categorie DG universelle U(A) du modele minimal")
    p.add_argument("--emit", default=None, help="Ecrit une presentation .dgq de U(A)")
    p = command("uext", "Extensions universelles et reconstruction du carquois DG")
    p.add_argument("--emit", default=None, help="Ecrit le carquois DG reconstruit (.dgq)")
    p.add_argument("--mode", choices=["direct", "universal"], default="direct")
    command("tilting", "Collection basculante et son algebre")
    p = command("deform", "Specialise une famille a un parametre")
    p.add_argument("--t", required=True, help="Valeur rationnelle du parametre, ex. 0, 1, -1/2")
    p.add_argument("--emit", default=None, help="Ecrit le carquois specialise")
    p.add_argument("--classify", action="store_true", help="Rapport de cohomologie au lieu du document")
    p = command("chi", "Caracteristique d'Euler de Riemann-Roch")
    p.add_argument("--divisor", required=True, help='Diviseur, ex. "H-E2"')
    command("euler", "Compare Riemann-Roch et l'accouplement d'Euler sur toutes les paires")
    p = command("augment", "Augmentations successives d'une collection de fibres en droites")
    p.add_argument("--base", required=True, help='Collection de depart, ex. "0,H,2H"')
    p.add_argument("--step", action="append", default=[], help='Etape R:k, ex. "E1+E2:1" (repetable)')
    return parser


def dispatch(runner: DGCalcRunner, args: argparse.Namespace) -> int:
    command = args.command
    if command == "check":
        return runner.check()
    if command == "cohomology":
        return runner.cohomology()
    if command == "exceptional":
        return runner.exceptional()
    if command == "mutate":
        return runner.mutate(args.word)
    if command == "minimal-model":
        return runner.minimal_model(args.max_arity, args.strategy, args.emit)
    if command == "massey":
        return runner.massey(args.chain, args.elements)
    if command == "universal-dg":
        return runner.universal_dg(args.emit)
    if command == "uext":
        return runner.uext(args.emit, args.mode)
    if command == "tilting":
        return runner.tilting()
    if command == "deform":
        return runner.deform(args.t, args.emit, args.classify)
    if command == "chi":
        return runner.chi(args.divisor)
    if command == "euler":
        return runner.euler()
    return runner.augment(args.base, args.step)


def thread_hint() -> int:
    try:
        return engine_config.threads
    except ValueError as e:
        raise InputError(str(e)) from None


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = "DEBUG" if args.verbose else ("ERROR" if args.quiet else logging_config.level)
    configure_logging(level)
    show_progress = report_config.show_progress and args.verbose

    runner = DGCalcRunner(args.file, max_path_len=args.max_path_len, show_progress=show_progress)
    try:
        logger.debug("command_started", command=args.command, file=args.file, threads=thread_hint())
        code = dispatch(runner, args)
    except DGCalcError as e:
        runner.stats["errors"].append(str(e))
        logger.error("command_failed", command=args.command, error=str(e))
        if runner.lines:
            print("\n".join(runner.lines))
        print(f"Erreur: {e}")
        if isinstance(e, MathematicalError) and e.witness is not None:
            print(f"temoin: {e.witness}")
        return e.exit_code
    if runner.lines:
        print("\n".join(runner.lines))
    logger.info("command_completed", command=args.command, code=code, **{k: v for k, v in runner.stats.items() if k != "errors"})
    return code


if __name__ == "__main__":
    sys.exit(main())
