"""
Construction bar-cobar : catégorie DG universelle d'une catégorie A∞ ordonnée.

Fonctionnalités :
- Cocatégorie bar B∞(A) : mots de morphismes réduits suspendus, différentielle
  d'insertion des b_k et cocomposition par déconcaténation
- Vérifications d² = 0 et co-Leibniz sur tous les mots (ensemble fini)
- Catégorie cobar Ω(B) : concaténations de mots désuspendus
- Catégorie DG universelle U(A) = Ω(B∞(A)), ordonnée et finie

Les mots sont stockés dans l'ordre d'application : (objs, idxs) avec
objs = (o_0 < o_1 < ... < o_n) et idxs[p] ∈ Ā(o_p, o_(p+1)). Le mot vide
((i,), ()) est la co-unité de B(i, i).
"""

from dataclasses import dataclass, field
from fractions import Fraction

import structlog
from tqdm import tqdm

from src.ainfinity.ainfty import AInfinityStructure, Augmentation, augment
from src.ainfinity.transfer import suspension_sign
from src.algebra.cochain import CochainComplex, GradedVS
from src.algebra.exactla import Matrix
from src.algebra.sparse import add_into
from src.categories.dgcore import DGCategory
from src.errors import InputError, Report

logger = structlog.get_logger()


def _sign(exponent: int) -> int:
    return -1 if exponent % 2 else 1


def _reversal_sign(shifted: list) -> int:
    """Signe de Koszul du retournement d'un bloc de degrés suspendus."""
    exponent = 0
    for p in range(len(shifted)):
        for q in range(p + 1, len(shifted)):
            exponent += shifted[p] * shifted[q]
    return _sign(exponent)


@dataclass
class BarCocategory:
    augmentation: Augmentation
    words: dict = field(default_factory=dict)

    @property
    def structure(self) -> AInfinityStructure:
        return self.augmentation.structure

    @property
    def objects(self) -> tuple:
        return self.structure.objects

    def all_words(self, nonempty: bool = False) -> list:
        return [w for pair in sorted(self.words) for w in self.words[pair] if not (nonempty and not w[1])]

    def shifted(self, word: tuple) -> list:
        objs, idxs = word
        return [self.structure.degree(objs[p], objs[p + 1], x) - 1 for p, x in enumerate(idxs)]

    def degree(self, word: tuple) -> int:
        """Degré suspendu Σ (|y| - 1)."""
        return sum(self.shifted(word))

    def label(self, word: tuple) -> str:
        objs, idxs = word
        if not idxs:
            return f"1_{self.objects[objs[0]]}"
        a = self.structure
        return "|".join(a.label(objs[p], objs[p + 1], x) for p, x in reversed(list(enumerate(idxs))))

    # ==================== Différentielle ====================

    def d(self, word: tuple) -> dict:
        """
        Somme sur les blocs contigus, chaque bloc remplacé par b_s (au signe de
        retournement près) et pondéré par (-1)^(degré suspendu des mots appliqués avant).
        """
        a = self.structure
        objs, idxs = word
        n = len(idxs)
        shifted = self.shifted(word)
        result = {}
        for t in range(n):
            prefix = _sign(sum(shifted[:t]))
            for s in range(1, min(n - t, a.max_arity) + 1):
                value = a.op(objs[t:t + s + 1], idxs[t:t + s])
                if not value:
                    continue
                block = shifted[t:t + s]
                # b_s = -ε m_s, ε calculé sur les degrés non suspendus du bloc
                sign = prefix * _reversal_sign(block) * -suspension_sign([k + 1 for k in block])
                new_objs = objs[: t + 1] + objs[t + s:]
                for y, x in value.items():
                    new_word = (new_objs, idxs[:t] + (y,) + idxs[t + s:])
                    add_into(result, {new_word: x}, sign)
        return result

    def d_combo(self, combo: dict) -> dict:
        result = {}
        for word, x in combo.items():
            add_into(result, self.d(word), x)
        return result

    def delta(self, word: tuple) -> dict:
        """Déconcaténation, termes de co-unité compris : {(début, fin): 1}."""
        objs, idxs = word
        return {
            ((objs[: p + 1], idxs[:p]), (objs[p:], idxs[p:])): Fraction(1)
            for p in range(len(idxs) + 1)
        }

    # ==================== Vérifications ====================

    def check_d2(self, show_progress: bool = False) -> Report:
        report = Report("bar d2")
        words = self.all_words()
        iterator = tqdm(words, desc="Bar d2", unit="mot") if show_progress else words
        for word in iterator:
            report.checked += 1
            residue = self.d_combo(self.d(word))
            if residue:
                report.fail(word=self.label(word), residue={self.label(w): str(x) for w, x in residue.items()})
        return report

    def check_coleibniz(self) -> Report:
        """Δ∘d = (d⊗1 + 1⊗d)∘Δ, avec (1⊗d)(u⊗v) = (-1)^|u| u⊗dv."""
        report = Report("co-Leibniz")
        for word in self.all_words():
            report.checked += 1
            lhs = {}
            for w, x in self.d(word).items():
                add_into(lhs, self.delta(w), x)
            rhs = {}
            for (u, v) in self.delta(word):
                for du, x in self.d(u).items():
                    add_into(rhs, {(du, v): Fraction(1)}, x)
                for dv, x in self.d(v).items():
                    add_into(rhs, {(u, dv): Fraction(1)}, x * _sign(self.degree(u)))
            if lhs != rhs:
                report.fail(word=self.label(word))
        return report


def _extend(a: AInfinityStructure, reduced: dict, word: tuple, words: dict) -> None:
    objs, idxs = word
    last = objs[-1]
    for nxt in range(last + 1, a.size):
        for x in reduced.get((last, nxt), ()):
            new_word = (objs + (nxt,), idxs + (x,))
            words.setdefault((objs[0], nxt), []).append(new_word)
            _extend(a, reduced, new_word, words)


def bar(a: AInfinityStructure) -> BarCocategory:
    """
    B∞(A) = T^c(SĀ) pour une structure augmentée ordonnée.

    Raises:
        MathematicalError: structure non augmentable (propagée depuis `augment`)
        InputError: morphismes réduits ne respectant pas l'ordre des objets
    """
    augmentation = augment(a)
    backward = [pair for pair in augmentation.reduced if pair[0] > pair[1]]
    if backward:
        i, j = backward[0]
        raise InputError(f"bar : structure non ordonnee ({a.objects[i]} -> {a.objects[j]})")
    words = {(i, i): [((i,), ())] for i in range(a.size)}
    for i in range(a.size):
        _extend(a, augmentation.reduced, ((i,), ()), words)
    for pair in words:
        words[pair].sort(key=lambda w: (len(w[1]), w))
    b = BarCocategory(augmentation, words)
    logger.info("bar_built", structure=a.name, words=sum(len(v) for v in words.values()))
    return b


# ==================== Cobar ====================

def _sequences(generators: dict, i: int, j: int) -> list:
    """Suites de générateurs composables de i à j (ordre d'application)."""
    if i == j:
        return [()]
    result = []
    for k in range(i + 1, j + 1):
        for g in generators.get((i, k), ()):
            for rest in _sequences(generators, k, j):
                result.append((g,) + rest)
    return result


@dataclass
class _Cobar:
    b: BarCocategory
    generators: dict

    def degree(self, seq: tuple) -> int:
        return sum(self.b.degree(g) + 1 for g in seq)

    def d_generator(self, g: tuple) -> dict:
        """∂⟨c⟩ = -⟨dc⟩ + Σ (-1)^|c'| ⟨c'⟩⟨c''⟩ sur les coupures non triviales."""
        result = {}
        for w, x in self.b.d(g).items():
            add_into(result, {(w,): Fraction(1)}, -x)
        for (u, v) in self.b.delta(g):
            if u[1] and v[1]:
                add_into(result, {(u, v): Fraction(1)}, _sign(self.b.degree(u)))
        return result

    def d(self, seq: tuple) -> dict:
        result = {}
        before = 0
        for p, g in enumerate(seq):
            for inner, x in self.d_generator(g).items():
                add_into(result, {seq[:p] + inner + seq[p + 1:]: Fraction(1)}, x * _sign(before))
            before += self.b.degree(g) + 1
        return result

    def label(self, seq: tuple, obj: int) -> str:
        if not seq:
            return f"id_{self.b.objects[obj]}"
        return "*".join(f"<{self.b.label(g)}>" for g in reversed(seq))


def cobar(b: BarCocategory, name: str = "") -> DGCategory:
    """
    Ω(B) : morphismes = concaténations de générateurs ⟨c⟩ (c mot non vide,
    de degré |c| + 1), g∘f = (-1)^(|f||g|) (f puis g).
    """
    a = b.structure
    generators = {}
    for (i, j), words in b.words.items():
        if i != j:
            generators[(i, j)] = list(words)
    co = _Cobar(b, generators)

    index, hom = {}, {}
    for i in range(a.size):
        for j in range(i, a.size):
            seqs = _sequences(generators, i, j)
            if not seqs:
                continue
            seqs.sort(key=lambda s: (co.degree(s), len(s), s))
            components = {}
            positions = {}
            for s in seqs:
                labels = components.setdefault(co.degree(s), [])
                positions[s] = (co.degree(s), len(labels))
                labels.append(co.label(s, i))
            space = GradedVS(components)
            flat = {s: space.flat(*positions[s]) for s in seqs}
            index[(i, j)] = flat
            doks = {}
            for s in seqs:
                k, col = positions[s]
                for target, x in co.d(s).items():
                    row = positions[target][1]
                    dok = doks.setdefault(k, {})
                    dok[(row, col)] = dok.get((row, col), 0) + x
            differential = {
                k: Matrix.from_sparse(space.dim(k + 1), space.dim(k), {key: v for key, v in dok.items() if v})
                for k, dok in doks.items()
            }
            hom[(i, j)] = CochainComplex(space, differential)

    table = {}
    for (i, j), left in index.items():
        for k in range(j, a.size):
            right = index.get((j, k))
            if right is None:
                continue
            entries = {}
            for f, fa in left.items():
                for g, gb in right.items():
                    sign = _sign(co.degree(f) * co.degree(g))
                    entries[(gb, fa)] = {index[(i, k)][f + g]: Fraction(sign)}
            table[(i, j, k)] = entries
    units = {i: {index[(i, i)][()]: Fraction(1)} for i in range(a.size)}
    result = DGCategory(a.objects, hom, table, units, ordered=True, reduced=True, name=name or f"Omega({a.name})")
    logger.info(
        "cobar_built",
        category=result.name,
        dims={f"{a.objects[i]}->{a.objects[j]}": result.dim(i, j) for (i, j) in hom},
    )
    return result


def universal_dg(a: AInfinityStructure, name: str = "") -> DGCategory:
    """U(A) = Ω(B∞(A)), quasi-isomorphe à A."""
    return cobar(bar(a), name=name or f"U({a.name})")


def finiteness_report(c: DGCategory) -> Report:
    """Espaces de morphismes de dimension finie et ordre des objets respecté."""
    report = Report("finitude")
    for (i, j), cx in c.hom.items():
        report.checked += 1
        if i > j and cx.space.total_dim:
            report.fail(kind="order", pair=(c.objects[i], c.objects[j]))
    return report
