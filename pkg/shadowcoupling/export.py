"""
Serialization of instances, couplings and curve data.

Rationals travel as strings ("3/4", "-2") so JSON round trips are exact.
Finite decimal strings and JSON numbers are read exactly through Fraction;
JSON floats never become binary floats because the decoder hands their text
straight to Fraction.
"""

import csv
import io
import json
import logging
import os
from datetime import datetime, timezone
from fractions import Fraction
from typing import Dict, List, Optional, TextIO

from .coupling import Coupling, CouplingRow
from .curves import SupportTriple
from .errors import DomainError, InputFormatError
from .instances import Instance
from .measure import DiscreteMeasure, Infinity, as_rational

logger = logging.getLogger(__name__)

CURVE_FIELDS = ["u", "region", "G", "R", "S", "T", "phi"]


# ============================================================================
# SCALARS AND MEASURES
# ============================================================================

def rational_to_str(value) -> str:
    if isinstance(value, Infinity):
        return str(value)
    return str(as_rational(value))


def parse_rational(value) -> Fraction:
    """Exact parse of "p/q", a finite decimal string, an int or a Fraction."""
    if isinstance(value, str):
        value = value.strip()
    try:
        return as_rational(value)
    except DomainError as e:
        raise InputFormatError(f"not an exact rational: {value!r}") from e


def measure_from_json(data, name: str = "measure") -> DiscreteMeasure:
    """Accepts a list of {x, w} objects or {"atoms": [...]}."""
    if isinstance(data, dict) and "atoms" in data:
        data = data["atoms"]
    if not isinstance(data, list):
        raise InputFormatError(f"{name}: expected a list of {{x, w}} atoms, got {type(data).__name__}")
    pairs = []
    for i, atom in enumerate(data):
        if not isinstance(atom, dict) or "x" not in atom or "w" not in atom:
            raise InputFormatError(f"{name}[{i}]: expected an object with keys x and w")
        w = parse_rational(atom["w"])
        if w <= 0:
            raise InputFormatError(f"{name}[{i}]: weight must be positive, got {w}")
        pairs.append((parse_rational(atom["x"]), w))
    return DiscreteMeasure.from_pairs(pairs)


def _load_json(path: str):
    if not os.path.exists(path):
        raise InputFormatError(f"no such file: {path}")
    if not path.endswith(".json"):
        raise InputFormatError(f"unsupported file format: {path} (expected .json)")
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f, parse_float=Fraction)
    except json.JSONDecodeError as e:
        raise InputFormatError(f"{path}: invalid JSON ({e})") from e


def instance_from_json(data) -> Instance:
    if isinstance(data, dict) and "instance" in data:
        data = data["instance"]
    if not isinstance(data, dict) or "mu" not in data or "nu" not in data:
        raise InputFormatError("instance must be an object with keys mu and nu")
    seed = data.get("seed")
    return Instance(
        measure_from_json(data["mu"], "mu"),
        measure_from_json(data["nu"], "nu"),
        data.get("kind", "custom"),
        int(seed) if seed is not None else None,
    )


def load_instance(path: str) -> Instance:
    """
    Read an instance file.

    Args:
        path: JSON file with "mu" and "nu" atom lists

    Returns:
        Instance with exact rational atoms
    """
    instance = instance_from_json(_load_json(path))
    logger.info(f"Loaded instance from {path}: {len(instance.mu)} mu atoms, {len(instance.nu)} nu atoms")
    return instance


# ============================================================================
# COUPLINGS
# ============================================================================

def coupling_from_json(data) -> Coupling:
    if isinstance(data, dict) and "coupling" in data:
        data = data["coupling"]
    if not isinstance(data, dict) or not isinstance(data.get("rows"), list):
        raise InputFormatError("coupling must be an object with a rows list")
    rows = []
    for i, row in enumerate(data["rows"]):
        try:
            source, weight = parse_rational(row["x"]), parse_rational(row["w"])
            conditional = measure_from_json(row["conditional"], f"rows[{i}].conditional")
        except (KeyError, TypeError) as e:
            raise InputFormatError(f"rows[{i}]: expected keys x, w, conditional") from e
        if weight <= 0 or conditional.mass != 1:
            raise InputFormatError(f"rows[{i}]: weight must be positive and the conditional a probability")
        rows.append(CouplingRow(source, weight, conditional))
    return Coupling(tuple(sorted(rows, key=lambda r: r.source)))


def load_coupling(path: str) -> Coupling:
    pi = coupling_from_json(_load_json(path))
    logger.info(f"Loaded coupling from {path}: {len(pi.rows)} rows")
    return pi


# ============================================================================
# WRITERS
# ============================================================================

def export_to_json(
    payload: Dict,
    filepath: Optional[str] = None,
    include_metadata: bool = False,
    metadata: Optional[Dict] = None,
) -> str:
    """
    Write a JSON payload to `filepath` (stdout when None).

    With include_metadata the payload is wrapped as {"metadata": ..., "result": payload}.

    Returns:
        The path written, or "-" for stdout
    """
    if include_metadata:
        payload = {
            "metadata": {
                "exported_at": datetime.now(timezone.utc).isoformat(),
                **(metadata or {}),
            },
            "result": payload,
        }
    text = json.dumps(payload, indent=2, ensure_ascii=False)
    if filepath is None:
        print(text)
        return "-"
    os.makedirs(os.path.dirname(filepath) or ".", exist_ok=True)
    with open(filepath, "w", encoding="utf-8") as f:
        f.write(text + "\n")
    logger.info(f"Exported JSON to {filepath}")
    return filepath


def export_instance(instance: Instance, filepath: Optional[str] = None) -> str:
    return export_to_json(instance.to_dict(), filepath)


def curve_rows(triples: List[SupportTriple]) -> List[Dict[str, str]]:
    """Triples as CSV rows; undefined entries become empty cells."""
    rows = []
    for t in triples:
        row = t.to_dict()
        rows.append({k: ("" if row[k] is None else row[k]) for k in CURVE_FIELDS})
    return rows


def write_curves_csv(triples: List[SupportTriple], stream: TextIO) -> None:
    writer = csv.DictWriter(stream, fieldnames=CURVE_FIELDS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(curve_rows(triples))


def export_curves_csv(triples: List[SupportTriple], filepath: Optional[str] = None) -> str:
    """Write the u,region,G,R,S,T,phi table to `filepath` (stdout when None)."""
    if filepath is None:
        buffer = io.StringIO()
        write_curves_csv(triples, buffer)
        print(buffer.getvalue(), end="")
        return "-"
    os.makedirs(os.path.dirname(filepath) or ".", exist_ok=True)
    with open(filepath, "w", newline="", encoding="utf-8") as f:
        write_curves_csv(triples, f)
    logger.info(f"Exported {len(triples)} curve rows to CSV: {filepath}")
    return filepath


def read_curves_csv(stream: TextIO) -> List[Dict[str, Optional[str]]]:
    """Parse a curves CSV back into dicts with None for empty cells."""
    reader = csv.DictReader(stream)
    if reader.fieldnames != CURVE_FIELDS:
        raise InputFormatError(f"unexpected curve header {reader.fieldnames}")
    return [{k: (v if v != "" else None) for k, v in row.items()} for row in reader]
