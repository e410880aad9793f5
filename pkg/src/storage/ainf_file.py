"""
Fichiers .ainf : structures A∞ sous forme de tables d'opérations.

Format :
    {
      "name": "x_surface_min",
      "objects": ["O", ...],
      "max_arity": 4,
      "ordered": true,
      "hom": [{"src": "O", "tgt": "O(E2)", "basis": [{"label": "[alpha]", "degree": 0}]}],
      "units": {"O": "[id_O]"},
      "ops": [{"objects": ["O", "O(E2)", ...], "inputs": ["[alpha]", ...],
               "value": [{"coeff": "1", "label": "..."}]}]
    }
Les entrées d'une opération sont listées dans l'ordre d'application.
"""

import json
from fractions import Fraction
from pathlib import Path

import structlog

from src.ainfinity.ainfty import AInfinityStructure
from src.algebra.cochain import GradedVS
from src.errors import InputError
from src.storage.dgq_file import canonical_json

logger = structlog.get_logger()


def structure_to_dict(a: AInfinityStructure) -> dict:
    hom = []
    for (i, j) in sorted(a.hom):
        space = a.space(i, j)
        basis = [{"label": space.label(x), "degree": a.degree(i, j, x)} for x in range(a.dim(i, j))]
        if basis:
            hom.append({"src": a.objects[i], "tgt": a.objects[j], "basis": basis})
    ops = []
    for n in sorted(a.ops):
        for (objs, idxs), value in sorted(a.ops[n].items()):
            if not value:
                continue
            target = (objs[0], objs[-1])
            ops.append({
                "objects": [a.objects[o] for o in objs],
                "inputs": [a.label(objs[p], objs[p + 1], x) for p, x in enumerate(idxs)],
                "value": [{"coeff": str(Fraction(x)), "label": a.label(*target, y)} for y, x in sorted(value.items())],
            })
    return {
        "name": a.name,
        "objects": list(a.objects),
        "max_arity": a.max_arity,
        "ordered": a.ordered,
        "hom": hom,
        "units": {a.objects[i]: a.label(i, i, u) for i, u in sorted(a.units.items())},
        "ops": ops,
    }


def save_ainf(a: AInfinityStructure, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(canonical_json(structure_to_dict(a)))
    logger.info("ainf_saved", path=str(path), ops=sum(len(t) for t in a.ops.values()))
    return path


def structure_from_dict(data: dict) -> AInfinityStructure:
    """
    Raises:
        InputError: objet, étiquette ou degré incohérents
    """
    try:
        objects = tuple(data["objects"])
        index = {name: i for i, name in enumerate(objects)}
        hom, labels = {}, {}
        for entry in data["hom"]:
            i, j = index[entry["src"]], index[entry["tgt"]]
            components = {}
            for b in entry["basis"]:
                components.setdefault(int(b["degree"]), []).append(b["label"])
            space = GradedVS(components)
            hom[(i, j)] = space
            labels[(i, j)] = {space.label(x): x for x in range(space.total_dim)}
        ops = {}
        for entry in data.get("ops", []):
            objs = tuple(index[o] for o in entry["objects"])
            idxs = tuple(labels[(objs[p], objs[p + 1])][x] for p, x in enumerate(entry["inputs"]))
            target = labels[(objs[0], objs[-1])]
            value = {target[t["label"]]: Fraction(t["coeff"]) for t in entry["value"]}
            ops.setdefault(len(idxs), {})[(objs, idxs)] = value
        units = {index[o]: labels[(index[o], index[o])][u] for o, u in data.get("units", {}).items()}
    except KeyError as e:
        raise InputError(f"structure A-infini : reference inconnue {e}") from None
    except (TypeError, ValueError) as e:
        raise InputError(f"structure A-infini mal formee : {e}") from None
    return AInfinityStructure(
        objects,
        hom,
        ops,
        max_arity=int(data.get("max_arity", max(ops, default=2))),
        units=units,
        ordered=bool(data.get("ordered", False)),
        name=data.get("name", ""),
    )


def load_ainf(path) -> AInfinityStructure:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"lecture impossible de {path} : {e.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"JSON invalide : {e.msg}", line=e.lineno, column=e.colno) from None
    return structure_from_dict(data)
