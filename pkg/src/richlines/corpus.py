"""The standard experiment corpus: small APs, GPs, random sets and unions.

Everything here is a pure function of the seed.
"""

from __future__ import annotations

import json
import os
from fractions import Fraction

from .incidence import Configuration, format_configuration, grid_configuration, random_configuration
from .rich import enumerate_rich_lines
from .scalar import Grid, NumberSet, format_numberset, make_ap, make_gp, make_random, union

CORPUS_SCHEMA = "richlines.corpus/1"

_MIXED_GRIDS = [
    ("ap_4", "gp_2_8"),
    ("ap_6", "random_8"),
    ("gp_2_8", "gp_3_6"),
    ("random_10", "random_12"),
    ("ap_half_6", "ap_6"),
    ("union_ap_gp", "ap_8"),
    ("ap_12", "gp_2_8"),
    ("gp_neg2_5", "ap_odd_7"),
]

# (N, L) shapes of the random incidence configurations
_RANDOM_CONFIGS = [(50, 50), (100, 200), (200, 100), (300, 500), (500, 300), (500, 500)]
_ST_GRIDS = [(4, 2), (8, 2), (10, 2), (12, 3), (16, 3), (20, 3)]


def corpus_sets(seed: int) -> dict[str, NumberSet]:
    """Named number sets, each of size at most 12."""
    sets = {
        "ap_4": make_ap(4, 0, 1),
        "ap_6": make_ap(6, 0, 1),
        "ap_8": make_ap(8, 0, 1),
        "ap_10": make_ap(10, 0, 1),
        "ap_12": make_ap(12, 0, 1),
        "ap_odd_7": make_ap(7, 1, 2),
        "ap_half_6": make_ap(6, 0, Fraction(1, 2)),
        "gp_2_8": make_gp(8, 1, 2),
        "gp_3_6": make_gp(6, 1, 3),
        "gp_half_6": make_gp(6, 1, Fraction(1, 2)),
        "gp_neg2_5": make_gp(5, 1, -2),
    }
    for n in (6, 8, 10, 12):
        sets[f"random_{n}"] = make_random(n, seed * 1000 + n, 40)
    sets["union_ap_gp"] = union(make_ap(6, 1, 1), make_gp(6, 1, 2))
    sets["union_random"] = union(make_random(5, seed * 1000 + 1, 20), make_random(5, seed * 1000 + 2, 20))
    return sets


def _grid_pairs(sets) -> list[tuple[str, str, str]]:
    pairs = [(f"{name}^2", name, name) for name in sets]
    pairs += [(f"{a}x{b}", a, b) for a, b in _MIXED_GRIDS]
    return pairs


def corpus_grids(seed: int) -> list[tuple[str, Grid]]:
    """25 grids: the square of every corpus set plus a fixed list of mixed pairs."""
    sets = corpus_sets(seed)
    return [(name, Grid(sets[a], sets[b])) for name, a, b in _grid_pairs(sets)]


def st_configurations(seed: int) -> list[tuple[str, Configuration]]:
    """Incidence configurations used for the Szemeredi-Trotter ratio regression.

    AP grids with every r-rich line, then random integer configurations with
    lines drawn through pairs of points.
    """
    configs = []
    for n, r in _ST_GRIDS:
        g = Grid.square(make_ap(n))
        configs.append((f"ap_{n}^2_r{r}", grid_configuration(g, enumerate_rich_lines(g, r).lines())))
    for i, (n_points, n_lines) in enumerate(_RANDOM_CONFIGS):
        cfg = random_configuration(seed * 1000 + i, n_points, n_lines, box=25)
        configs.append((f"random_{n_points}p_{n_lines}l", cfg))
    return configs


def write_corpus(seed: int, out_dir) -> list[str]:
    """Write sets, configurations and a manifest under ``out_dir``; return relative paths."""
    written = []

    def put(rel, text):
        path = os.path.join(out_dir, rel)
        os.makedirs(os.path.dirname(path), exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        written.append(rel)

    sets = corpus_sets(seed)
    for name, s in sets.items():
        put(f"sets/{name}.txt", format_numberset(s))
    grids = [{"name": name, "a": f"sets/{a}.txt", "b": f"sets/{b}.txt"} for name, a, b in _grid_pairs(sets)]
    configs = []
    for name, cfg in st_configurations(seed):
        put(f"configs/{name}.txt", format_configuration(cfg))
        configs.append(f"configs/{name}.txt")
    manifest = {"schema": CORPUS_SCHEMA, "seed": seed, "sets": sorted(f"sets/{n}.txt" for n in sets),
                "grids": grids, "configs": configs}
    put("manifest.json", json.dumps(manifest, indent=2) + "\n")
    return written
