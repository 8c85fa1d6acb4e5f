"""Dataset container, one-column CSV input and output, and bundled data.

CSV layout: optional `#` comment lines carrying metadata, then an `x` header,
then one full-precision value per line.  Writes are atomic (temp file in the
target directory, then rename).
"""

from __future__ import annotations

import os
import tempfile
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .errors import DataError

__all__ = [
    "Dataset",
    "load_dataset",
    "write_dataset",
    "atomic_write_text",
    "load_guinea_pigs",
    "load_frontier",
]


def atomic_write_text(path, text: str) -> None:
    """Write text to path via a temp file in the same directory plus rename,
    so readers never observe a partial file."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


@dataclass(frozen=True)
class Dataset:
    """A named vector of observations plus where it came from."""

    values: np.ndarray
    name: str
    source: str  # "Simulated" or "File"
    provenance: dict

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.size == 0:
            raise DataError("dataset must be a nonempty 1-D vector")
        if not np.all(np.isfinite(values)):
            raise DataError("dataset values must be finite")
        if self.source not in ("Simulated", "File"):
            raise ValueError("source must be 'Simulated' or 'File'")
        object.__setattr__(self, "values", values)
        self.values.setflags(write=False)


def _parse_csv_text(text: str, origin: str) -> tuple[np.ndarray, dict]:
    comments = {}
    rows = []
    saw_header = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line.lstrip("#").strip()
            if ":" in body:
                key, _, value = body.partition(":")
                comments[key.strip()] = value.strip()
            continue
        if not saw_header:
            if line != "x":
                raise DataError(
                    f"{origin}:{lineno}: expected header 'x', got {line!r}")
            saw_header = True
            continue
        try:
            rows.append(float(line))
        except ValueError as exc:
            raise DataError(f"{origin}:{lineno}: not a number: {line!r}") from exc
    if not saw_header:
        raise DataError(f"{origin}: missing 'x' header")
    if not rows:
        raise DataError(f"{origin}: no data rows")
    return np.asarray(rows), comments


def load_dataset(path) -> Dataset:
    """Read a one-column CSV; `#` comments become provenance metadata."""
    path = os.fspath(path)
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise DataError(f"cannot read dataset {path}: {exc}") from exc
    values, comments = _parse_csv_text(text, path)
    provenance = {"path": path}
    provenance.update(comments)
    return Dataset(values=values, name=os.path.basename(path),
                   source="File", provenance=provenance)


def write_dataset(values, path, metadata=None) -> None:
    """Write a one-column CSV atomically, full repr precision."""
    values = np.asarray(values, dtype=float)
    if values.ndim != 1 or values.size == 0:
        raise DataError("refusing to write an empty dataset")
    if not np.all(np.isfinite(values)):
        raise DataError("refusing to write non-finite values")
    path = os.fspath(path)
    lines = []
    for key, value in (metadata or {}).items():
        lines.append(f"# {key}: {value}")
    lines.append("x")
    lines.extend(repr(float(v)) for v in values)
    atomic_write_text(path, "\n".join(lines) + "\n")


def _load_bundled(filename: str) -> Dataset:
    ref = resources.files("skewfit").joinpath("data", filename)
    try:
        text = ref.read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(
            f"bundled dataset {filename} is missing from this installation; "
            "reinstall the package so its data files are included "
            "(pip install skewfit)") from exc
    values, comments = _parse_csv_text(text, filename)
    provenance = {"bundled": filename}
    provenance.update(comments)
    return Dataset(values=values, name=filename, source="File",
                   provenance=provenance)


def load_guinea_pigs() -> Dataset:
    """Bjerkedal (1960) guinea pig survival times, n=72."""
    return _load_bundled("guinea_pigs.csv")


def load_frontier() -> Dataset:
    """Bundled 50-point skewed sample; see data/README.md for provenance."""
    return _load_bundled("frontier.csv")
