"""Named small transitive groups used by the sweeps and the CLI."""

from __future__ import annotations

from functools import lru_cache

from .permgroup import PermGroup, Permutation, parse_generators, symmetric_group, wreath_product

# name -> (degree, generators in cycle notation)
_GENERATED: dict[str, tuple[int, str]] = {
    "C2": (2, "(1,2)"),
    "C3": (3, "(1,2,3)"),
    "S3": (3, "(1,2,3);(1,2)"),
    "C4": (4, "(1,2,3,4)"),
    "V4": (4, "(1,2)(3,4);(1,3)(2,4)"),
    "D4": (4, "(1,2,3,4);(1,3)"),
    "A4": (4, "(1,2,3);(2,3,4)"),
    "S4": (4, "(1,2,3,4);(1,2)"),
    "C5": (5, "(1,2,3,4,5)"),
    "D5": (5, "(1,2,3,4,5);(2,5)(3,4)"),
    "F20": (5, "(1,2,3,4,5);(2,3,5,4)"),
    "A5": (5, "(1,2,3,4,5);(1,2,3)"),
    "S5": (5, "(1,2,3,4,5);(1,2)"),
    "C6": (6, "(1,2,3,4,5,6)"),
    "S3_6": (6, "(1,2,3)(4,5,6);(1,4)(2,6)(3,5)"),
    "D6": (6, "(1,2,3,4,5,6);(2,6)(3,5)"),
    "A4_6": (6, "(1,4)(2,5);(1,3,5)(2,4,6)"),
    "C7": (7, "(1,2,3,4,5,6,7)"),
    "D7": (7, "(1,2,3,4,5,6,7);(2,7)(3,6)(4,5)"),
    "F21": (7, "(1,2,3,4,5,6,7);(2,3,5)(4,7,6)"),
    "C8": (8, "(1,2,3,4,5,6,7,8)"),
    "D8": (8, "(1,2,3,4,5,6,7,8);(2,8)(3,7)(4,6)"),
}

_WREATHS: dict[str, tuple[str, str]] = {
    "C2wrC2": ("C2", "C2"),
    "C2wrC3": ("C2", "C3"),
    "C2wrS3": ("C2", "S3"),
    "C2wrC4": ("C2", "C4"),
    "C2wrV4": ("C2", "V4"),
    "C2wrC5": ("C2", "C5"),
    "C2wrC2wrC2": ("C2", "C2wrC2"),
    "C3wrC2": ("C3", "C2"),
    "S3wrC2": ("S3", "C2"),
    "S3wrC3": ("S3", "C3"),
    "C3wrC3": ("C3", "C3"),
    "S4wrC2": ("S4", "C2"),
}

EXPECTED_ORDERS = {
    "C2": 2, "C3": 3, "S3": 6, "C4": 4, "V4": 4, "D4": 8, "A4": 12, "S4": 24,
    "C5": 5, "D5": 10, "F20": 20, "A5": 60, "S5": 120, "C6": 6, "S3_6": 6,
    "D6": 12, "A4_6": 12, "C7": 7, "D7": 14, "F21": 21, "C8": 8, "D8": 16,
    "Q8": 8, "C2wrC2": 8, "C2wrC3": 24, "C2wrS3": 48, "C2wrC4": 64,
    "C2wrV4": 64, "C2wrC5": 160, "C2wrC2wrC2": 128, "C3wrC2": 18,
    "S3wrC2": 72, "S3wrC3": 648, "C3wrC3": 81, "S4wrC2": 1152,
}


def _quaternion_regular() -> PermGroup:
    # units +-1, +-i, +-j, +-k as (sign, axis); left multiplication by i and j
    units = [(s, a) for a in "1ijk" for s in (1, -1)]
    table = {
        ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
        ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
        ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
        ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
    }

    def left(g):
        out = []
        for s, a in units:
            t, b = table[(g, a)]
            out.append(units.index((s * t, b)))
        return Permutation(tuple(out))

    return PermGroup(8, [left("i"), left("j")])


@lru_cache(maxsize=None)
def get_group(name: str) -> PermGroup:
    """Look up a catalog group; ``S<n>`` is accepted for any n."""
    if name in _GENERATED:
        deg, gens = _GENERATED[name]
        return PermGroup(deg, parse_generators(gens, deg))
    if name == "Q8":
        return _quaternion_regular()
    if name in _WREATHS:
        inner, outer = _WREATHS[name]
        return wreath_product(get_group(inner), get_group(outer))
    if name.startswith("S") and name[1:].isdigit():
        return symmetric_group(int(name[1:]))
    raise KeyError(f"unknown group {name!r}")


def catalog_names() -> list[str]:
    return list(_GENERATED) + ["Q8"] + list(_WREATHS)


def catalog() -> dict[str, PermGroup]:
    return {name: get_group(name) for name in catalog_names()}
