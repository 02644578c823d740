"""Access to bundled data: formulas, the residue table, matrices, census graphs."""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from importlib import resources

from .graphcore import Embedding, GraphError, Multigraph, parse_graph
from .matmod import IntMatrix, parse_matrix

FIXED_PRIMES = (5, 13, 17, 29, 37, 41)
FLIPPABLE_PRIMES = (3, 7, 11, 19, 23, 31)
TABLE_PRIMES = (3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def _data_root():
    return resources.files("egperm").joinpath("data")


def load_formula_text(stem: str) -> str:
    path = _data_root().joinpath("formulas", f"{stem}.fml")
    if not path.is_file():
        raise FileNotFoundError(f"no bundled formula {stem!r}")
    return path.read_text()


@dataclass(frozen=True)
class GoldenTable:
    """Transcribed residue rows at primes 3..41 with their sign metadata."""
    rows: dict[str, dict[int, int]]
    fixed_primes: tuple[int, ...] = FIXED_PRIMES
    flippable_primes: tuple[int, ...] = FLIPPABLE_PRIMES

    def row(self, name: str) -> dict[int, int]:
        return dict(self.rows[name])

    def names(self) -> list[str]:
        return list(self.rows)


def golden_table(verify_checksum: bool = True) -> GoldenTable:
    raw = _data_root().joinpath("goldens.csv").read_bytes()
    if verify_checksum:
        want = _data_root().joinpath("goldens.sha256").read_text().strip()
        got = hashlib.sha256(raw).hexdigest()
        if got != want:
            raise ValueError(f"golden table checksum mismatch: {got} != {want}")
    rows: dict[str, dict[int, int]] = {}
    primes: list[int] = []
    for line in raw.decode().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        cells = line.split(",")
        if cells[0] == "name":
            primes = [int(x) for x in cells[1:]]
            continue
        rows[cells[0]] = {p: int(v) for p, v in zip(primes, cells[1:])}
    return GoldenTable(rows)


def r10_matrix() -> IntMatrix:
    return parse_matrix(_data_root().joinpath("r10.txt").read_text())


def bundled_completion(name: str) -> Multigraph:
    """A census completion shipped as a graph file (e.g. P_7_11)."""
    path = _data_root().joinpath("graphs", f"{name.lower()}.graph")
    if not path.is_file():
        raise GraphError(f"no bundled graph for {name!r}")
    g, _ = parse_graph(path.read_text())
    return g


def bundled_graph_with_embedding(stem: str) -> tuple[Multigraph, Embedding | None]:
    path = _data_root().joinpath("graphs", f"{stem}.graph")
    if not path.is_file():
        raise GraphError(f"no bundled graph {stem!r}")
    return parse_graph(path.read_text())


def bundled_twist_data() -> dict:
    """Cut, pairing, and side realizing the bundled seven-loop twist pair."""
    path = _data_root().joinpath("twist_p_7_4.json")
    return json.loads(path.read_text())
