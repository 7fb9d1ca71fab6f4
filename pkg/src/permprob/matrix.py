"""Dense square matrices: validation, CSV/JSON text formats, seeded generators."""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import NonFiniteEntry, ParseError, ShapeError

__all__ = [
    "SquareMatrix",
    "GeneratorKind",
    "MatrixSpec",
    "as_array",
    "parse_matrix",
    "serialize_matrix",
    "generate",
]


class SquareMatrix:
    """Immutable real n x n matrix.

    Entries are stored row-major as a read-only float64 array, so instances
    can be shared freely between threads.
    """

    __slots__ = ("_entries",)

    def __init__(self, entries):
        a = np.array(entries, dtype=np.float64, copy=True)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise ShapeError(f"expected a non-empty square matrix, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise NonFiniteEntry("matrix contains NaN or infinite entries")
        a.setflags(write=False)
        self._entries = a

    @property
    def n(self) -> int:
        return self._entries.shape[0]

    @property
    def entries(self) -> np.ndarray:
        return self._entries

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self._entries
        return self._entries.astype(dtype)

    def __getitem__(self, key):
        return self._entries[key]

    def __eq__(self, other):
        if not isinstance(other, SquareMatrix):
            return NotImplemented
        # bit-exact comparison, so -0.0 != 0.0
        return self._entries.tobytes() == other._entries.tobytes()

    def __hash__(self):
        return hash(self._entries.tobytes())

    def __repr__(self):
        return f"SquareMatrix({self._entries.tolist()!r})"


def as_array(a) -> np.ndarray:
    """Return the entries of `a` as a contiguous float64 square array.

    Accepts a :class:`SquareMatrix` or anything ``np.asarray`` understands.
    """
    if isinstance(a, SquareMatrix):
        return a.entries
    return SquareMatrix(a).entries


# -- text formats ------------------------------------------------------------

def _parse_csv(text):
    lines = text.strip().splitlines()
    if not lines:
        raise ParseError("empty CSV input")
    rows = []
    for lineno, line in enumerate(lines, start=1):
        try:
            rows.append([float(field) for field in line.split(",")])
        except ValueError as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
    return rows


def _parse_json(text):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(str(exc)) from None
    if not isinstance(data, list) or not data:
        raise ParseError("JSON matrix must be a non-empty array of arrays")
    rows = []
    for row in data:
        if not isinstance(row, list):
            raise ParseError("JSON matrix must be a non-empty array of arrays")
        for v in row:
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise ParseError(f"non-numeric entry {v!r}")
        rows.append([float(v) for v in row])
    return rows


def parse_matrix(text: str, format: str = "csv") -> SquareMatrix:
    """Parse CSV (no header, one row per line) or JSON (array of arrays).

    Raises ParseError for malformed text, ShapeError for ragged or
    non-square data and NonFiniteEntry (a ValueError) for NaN/inf entries.
    """
    fmt = format.lower()
    if fmt == "csv":
        rows = _parse_csv(text)
    elif fmt == "json":
        rows = _parse_json(text)
    else:
        raise ValueError(f"unknown matrix format {format!r}")

    n = len(rows)
    for i, row in enumerate(rows):
        if len(row) != n:
            raise ShapeError(f"row {i + 1} has {len(row)} entries, expected {n}")
    return SquareMatrix(rows)


def _csv_field(v):
    if v == 0.0:
        return "-0" if math.copysign(1.0, v) < 0 else "0"
    if v.is_integer() and abs(v) < 2.0**53:
        return str(int(v))
    return repr(v)


def serialize_matrix(a, format: str = "csv") -> str:
    """Inverse of :func:`parse_matrix`; round-trips bit-exactly."""
    arr = as_array(a)
    fmt = format.lower()
    if fmt == "csv":
        return "\n".join(",".join(_csv_field(float(v)) for v in row) for row in arr)
    if fmt == "json":
        return json.dumps(arr.tolist())
    raise ValueError(f"unknown matrix format {format!r}")


# -- generators --------------------------------------------------------------

class GeneratorKind(str, enum.Enum):
    ONES = "ones"
    IDENTITY = "identity"
    RADEMACHER = "rademacher"
    UNIFORM = "uniform"
    SPD = "spd"


_ALIASES = {
    "rademacherrandom": GeneratorKind.RADEMACHER,
    "uniformrandom": GeneratorKind.UNIFORM,
    "symmetricpositivedefinite": GeneratorKind.SPD,
}


@dataclass(frozen=True)
class MatrixSpec:
    """A seeded recipe for a test matrix, e.g. ``MatrixSpec.parse("ones:5")``."""

    kind: GeneratorKind
    n: int
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "kind", _kind(self.kind))
        if self.n < 1:
            raise ValueError(f"dimension must be >= 1, got {self.n}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    @classmethod
    def parse(cls, text: str, seed: int = 0) -> "MatrixSpec":
        kind, sep, n = text.partition(":")
        if not sep:
            raise ParseError(f"generator spec must look like KIND:N, got {text!r}")
        try:
            return cls(kind, int(n), seed)
        except ValueError as exc:
            raise ParseError(f"bad generator spec {text!r}: {exc}") from None

    def __str__(self):
        return f"{self.kind.value}:{self.n}"


def _kind(kind):
    if isinstance(kind, GeneratorKind):
        return kind
    key = str(kind).lower().replace("_", "").replace("-", "")
    if key in _ALIASES:
        return _ALIASES[key]
    try:
        return GeneratorKind(key)
    except ValueError:
        names = ", ".join(k.value for k in GeneratorKind)
        raise ValueError(f"unknown generator kind {kind!r} (expected one of {names})") from None


def generate(spec, n=None, seed=0) -> SquareMatrix:
    """Build a matrix from a :class:`MatrixSpec` or from ``(kind, n, seed)``.

    Output is a pure function of (kind, n, seed); the seed is ignored by the
    deterministic kinds. ``spd`` returns ``B.T @ B / n + I / 10`` with ``B``
    the ``uniform`` matrix for the same seed.
    """
    if not isinstance(spec, MatrixSpec):
        spec = MatrixSpec(spec, n, seed)
    kind, n = spec.kind, spec.n
    if kind is GeneratorKind.ONES:
        return SquareMatrix(np.ones((n, n)))
    if kind is GeneratorKind.IDENTITY:
        return SquareMatrix(np.eye(n))

    rng = np.random.default_rng(spec.seed)
    if kind is GeneratorKind.RADEMACHER:
        return SquareMatrix(2.0 * rng.integers(0, 2, size=(n, n)) - 1.0)
    b = rng.uniform(-1.0, 1.0, size=(n, n))
    if kind is GeneratorKind.UNIFORM:
        return SquareMatrix(b)
    m = b.T @ b / n
    m = 0.5 * (m + m.T) + 0.1 * np.eye(n)
    return SquareMatrix(m)
