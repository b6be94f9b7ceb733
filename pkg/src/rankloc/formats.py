"""Text file formats for code specs, codewords, patterns, and subspaces.

Everything is line-oriented text so golden files diff cleanly.  Files
produced by the CLI embed a fingerprint of the canonical code-spec text;
consumers reject mixed-spec inputs when both sides carry fingerprints.
Parsers report the offending line number on malformed input.
"""

from __future__ import annotations

import hashlib
import os
import tempfile
from dataclasses import dataclass

import numpy as np

from .codes import LocalRankCode, CodeParams
from .gf import Field, FieldSpec, field_make, tower_build

SPEC_FORMAT_VERSION = "1"

_SPEC_KEYS = ("q", "m", "n", "k", "r", "delta")
_SPEC_OPTIONAL = ("modulus", "basisA", "basisB")


class FormatError(ValueError):
    """Malformed input file; carries the 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def _read_kv_lines(text: str) -> tuple[dict[str, str], dict[str, int]]:
    values: dict[str, str] = {}
    where: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise FormatError("expected key=value", lineno)
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key in values:
            raise FormatError(f"duplicate key {key!r}", lineno)
        values[key] = value
        where[key] = lineno
    return values, where


@dataclass(frozen=True)
class CodeSpec:
    """Parsed contents of a code-spec file."""

    q: int
    m: int
    n: int
    k: int
    r: int
    delta: int
    modulus: tuple[int, ...] | None = None
    basis_a: tuple[str, ...] | None = None
    basis_b: tuple[str, ...] | None = None

    @classmethod
    def from_text(cls, text: str) -> "CodeSpec":
        values, where = _read_kv_lines(text)
        unknown = set(values) - set(_SPEC_KEYS) - set(_SPEC_OPTIONAL)
        if unknown:
            key = sorted(unknown)[0]
            raise FormatError(f"unknown key {key!r}", where[key])
        nums = {}
        for key in _SPEC_KEYS:
            if key not in values:
                raise FormatError(f"missing key {key!r}")
            try:
                nums[key] = int(values[key])
            except ValueError:
                raise FormatError(f"{key} must be an integer", where[key]) from None
        modulus = None
        if "modulus" in values:
            try:
                modulus = tuple(int(c) for c in values["modulus"].split(","))
            except ValueError:
                raise FormatError(
                    "modulus must be comma-separated integers", where["modulus"]
                ) from None
        basis_a = basis_b = None
        if "basisA" in values:
            basis_a = tuple(part.strip() for part in values["basisA"].split(","))
        if "basisB" in values:
            basis_b = tuple(part.strip() for part in values["basisB"].split(","))
        return cls(
            q=nums["q"], m=nums["m"], n=nums["n"], k=nums["k"], r=nums["r"],
            delta=nums["delta"], modulus=modulus, basis_a=basis_a, basis_b=basis_b,
        )

    def canonical_text(self) -> str:
        lines = [f"{key}={getattr(self, key)}" for key in _SPEC_KEYS]
        if self.modulus is not None:
            lines.append("modulus=" + ",".join(str(c) for c in self.modulus))
        if self.basis_a is not None:
            lines.append("basisA=" + ",".join(self.basis_a))
        if self.basis_b is not None:
            lines.append("basisB=" + ",".join(self.basis_b))
        return "\n".join(lines) + "\n"

    def fingerprint(self) -> str:
        return hashlib.sha256(self.canonical_text().encode()).hexdigest()[:12]

    def build(self) -> LocalRankCode:
        if self.modulus is not None:
            # prefer w^k reporting; fall back when x is not primitive
            field_spec = FieldSpec(self.q, self.m, self.modulus, 1)
            try:
                f = field_make(field_spec)
            except ValueError:
                field_spec = FieldSpec(self.q, self.m, self.modulus)
                f = field_make(field_spec)
        else:
            field_spec = FieldSpec.default(self.q, self.m)
            f = field_make(field_spec)
        basis_a = basis_b = None
        if self.basis_a is not None:
            basis_a = [f.parse_element(el) for el in self.basis_a]
        if self.basis_b is not None:
            basis_b = [f.parse_element(el) for el in self.basis_b]
        s = self.r + self.delta - 1
        tower = tower_build(
            self.q, self.m, self.n, s, spec=field_spec,
            basis_a=basis_a, basis_b=basis_b,
        )
        params = CodeParams(self.q, self.m, self.n, self.k, self.r, self.delta)
        return LocalRankCode(params, tower)


def load_code_spec(path: str) -> CodeSpec:
    with open(path, encoding="utf-8") as fh:
        return CodeSpec.from_text(fh.read())


def atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".rankloc-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _header(kind: str, fingerprint: str | None, spec_name: str | None) -> list[str]:
    lines = [f"# rankloc {kind} format {SPEC_FORMAT_VERSION}"]
    if spec_name:
        lines.append(f"# spec: {spec_name}")
    if fingerprint:
        lines.append(f"# spec-fingerprint: {fingerprint}")
    return lines


def _scan_fingerprint(text: str) -> str | None:
    for raw in text.splitlines():
        line = raw.strip()
        if line.startswith("#") and "spec-fingerprint:" in line:
            return line.split("spec-fingerprint:", 1)[1].strip()
    return None


def check_fingerprint(text: str, expected: str) -> None:
    found = _scan_fingerprint(text)
    if found is not None and found != expected:
        raise FormatError("spec mismatch")


# ---------------------------------------------------------------------------
# Codeword files: n element lines, an m x n digit-matrix block, or both.


def format_codeword(
    field: Field,
    elements: list[int],
    fingerprint: str | None = None,
    spec_name: str | None = None,
) -> str:
    lines = _header("codeword", fingerprint, spec_name)
    lines.append(f"# columns: {len(elements)} elements of GF({field.q}^{field.m})")
    lines.extend(field.format_element(c) for c in elements)
    mat = field.to_matrix(elements)
    lines.append(f"# matrix: {mat.shape[0]} x {mat.shape[1]} over GF({field.q}),"
                 " column t expands element t (low coefficient first)")
    lines.extend("".join(str(v) for v in row) for row in mat)
    return "\n".join(lines) + "\n"


def parse_codeword(text: str, field: Field, n: int) -> list[int]:
    """Accept element lines, a digit-matrix block, or both (cross-checked)."""
    entries: list[tuple[int, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            entries.append((lineno, line))
    m = field.m

    def parse_elements(chunk: list[tuple[int, str]]) -> list[int]:
        out = []
        for lineno, line in chunk:
            try:
                out.append(field.parse_element(line))
            except ValueError as exc:
                raise FormatError(str(exc), lineno) from None
        return out

    def parse_matrix(chunk: list[tuple[int, str]]) -> list[int]:
        rows = []
        for lineno, line in chunk:
            if len(line) != n or not all(ch.isdigit() for ch in line):
                raise FormatError(f"expected {n} digits", lineno)
            row = [int(ch) for ch in line]
            if max(row) >= field.q:
                raise FormatError("digit out of range", lineno)
            rows.append(row)
        return field.from_matrix(np.array(rows, dtype=np.uint8))

    if len(entries) == n + m:
        elements = parse_elements(entries[:n])
        from_matrix = parse_matrix(entries[n:])
        if elements != from_matrix:
            raise FormatError(
                "element lines disagree with matrix block", entries[n][0]
            )
        return elements
    if len(entries) == n and not all(
        len(line) == n and line.isdigit() for _, line in entries
    ):
        return parse_elements(entries)
    if len(entries) == m:
        return parse_matrix(entries)
    if len(entries) == n:
        return parse_elements(entries)
    raise FormatError(
        f"expected {n} element lines, {m} matrix rows, or both;"
        f" found {len(entries)} data lines"
    )


def parse_message(text: str, field: Field, k: int) -> list[int]:
    entries = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            entries.append(field.parse_element(line))
        except ValueError as exc:
            raise FormatError(str(exc), lineno) from None
    if len(entries) != k:
        raise FormatError(f"expected {k} message elements, found {len(entries)}")
    return entries


def format_message(field: Field, elements: list[int]) -> str:
    lines = _header("message", None, None)
    lines.extend(field.format_element(c) for c in elements)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Pattern files: m lines of n characters, '.' ok / '?' erased / 'E' errored.


def parse_pattern(text: str, m: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Returns (erasure mask, error-location mask)."""
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if len(line) != n:
            raise FormatError(f"expected {n} pattern characters", lineno)
        bad = next((ch for ch in line if ch not in ".?E"), None)
        if bad is not None:
            raise FormatError(f"bad pattern character {bad!r}", lineno)
        rows.append(line)
    if len(rows) != m:
        raise FormatError(f"expected {m} pattern rows, found {len(rows)}")
    erased = np.array([[ch == "?" for ch in row] for row in rows], dtype=np.uint8)
    errored = np.array([[ch == "E" for ch in row] for row in rows], dtype=np.uint8)
    return erased, errored


def parse_error_values(
    text: str, field: Field, errored: np.ndarray
) -> np.ndarray:
    """Sidecar element list, one value per 'E' cell in row-major order."""
    values = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            code = field.parse_element(line)
        except ValueError as exc:
            raise FormatError(str(exc), lineno) from None
        if field.m != 1 and code >= field.q:
            raise FormatError("error values are base-field symbols", lineno)
        values.append(code)
    cells = np.argwhere(errored)
    if len(values) != len(cells):
        raise FormatError(
            f"expected {len(cells)} error values, found {len(values)}"
        )
    out = np.zeros_like(errored)
    for (i, j), v in zip(cells, values):
        out[i, j] = v
    return out


# ---------------------------------------------------------------------------
# Received files: m lines of n characters, digits or '?' for erased cells.


def format_received(
    values: np.ndarray,
    erased: np.ndarray,
    fingerprint: str | None = None,
    spec_name: str | None = None,
) -> str:
    lines = _header("received", fingerprint, spec_name)
    m, n = values.shape
    lines.append(f"# {m} x {n} over GF(q); '?' marks an erased cell")
    for i in range(m):
        lines.append(
            "".join("?" if erased[i, j] else str(values[i, j]) for j in range(n))
        )
    return "\n".join(lines) + "\n"


def parse_received(text: str, q: int, m: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if len(line) != n:
            raise FormatError(f"expected {n} characters", lineno)
        cells = []
        for ch in line:
            if ch == "?":
                cells.append(-1)
            elif ch.isdigit() and int(ch) < q:
                cells.append(int(ch))
            else:
                raise FormatError(f"bad received character {ch!r}", lineno)
        rows.append(cells)
    if len(rows) != m:
        raise FormatError(f"expected {m} received rows, found {len(rows)}")
    grid = np.array(rows, dtype=np.int64)
    erased = (grid < 0).astype(np.uint8)
    values = np.where(grid < 0, 0, grid).astype(np.uint8)
    return values, erased


# ---------------------------------------------------------------------------
# Subspace files: header M=<int> dim=<int>, then M rows of dim digits.


def format_subspace(
    basis: np.ndarray, fingerprint: str | None = None, spec_name: str | None = None
) -> str:
    ambient, dim = basis.shape
    lines = _header("subspace", fingerprint, spec_name)
    lines.append(f"M={ambient} dim={dim}")
    lines.extend("".join(str(v) for v in row) for row in basis)
    return "\n".join(lines) + "\n"


def parse_subspace(text: str, q: int = 2) -> np.ndarray:
    header = None
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if header is None:
            parts = line.split()
            if (
                len(parts) != 2
                or not parts[0].startswith("M=")
                or not parts[1].startswith("dim=")
            ):
                raise FormatError("expected 'M=<int> dim=<int>' header", lineno)
            try:
                header = (int(parts[0][2:]), int(parts[1][4:]))
            except ValueError:
                raise FormatError("bad subspace header", lineno) from None
            continue
        if len(line) != header[1] or not all(ch.isdigit() for ch in line):
            raise FormatError(f"expected {header[1]} digits", lineno)
        row = [int(ch) for ch in line]
        if row and max(row) >= q:
            raise FormatError("digit out of range", lineno)
        rows.append(row)
    if header is None:
        raise FormatError("missing subspace header")
    if len(rows) != header[0]:
        raise FormatError(f"expected {header[0]} basis rows, found {len(rows)}")
    return np.array(rows, dtype=np.uint8)
