"""Combinaisons linéaires creuses {clé: Fraction}."""

from fractions import Fraction


def add_into(target: dict, source: dict, coeff=1) -> dict:
    """target += coeff * source, en supprimant les zéros."""
    if not coeff:
        return target
    for key, value in source.items():
        new = target.get(key, 0) + coeff * value
        if new:
            target[key] = new
        else:
            target.pop(key, None)
    return target


def scaled(source: dict, coeff) -> dict:
    if not coeff:
        return {}
    return {key: coeff * value for key, value in source.items()}


def combine(*terms) -> dict:
    """Somme de couples (coefficient, combinaison)."""
    result = {}
    for coeff, vec in terms:
        add_into(result, vec, coeff)
    return result


def to_dense(vec: dict, n: int) -> tuple:
    out = [Fraction(0)] * n
    for key, value in vec.items():
        out[key] = Fraction(value)
    return tuple(out)


def from_dense(values) -> dict:
    return {i: Fraction(x) for i, x in enumerate(values) if x}
