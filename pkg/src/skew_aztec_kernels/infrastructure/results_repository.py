"""Repository for spec, point, tiling and result files (JSON, JSONL, CSV)."""

import csv
import io
import json
import logging
from collections.abc import Iterable, Mapping, Sequence
from pathlib import Path
from typing import Any

import yaml
from pydantic import BaseModel, ConfigDict, ValidationError

from skew_aztec_kernels.domain.exceptions import DomainError
from skew_aztec_kernels.domain.models import (
    DomainSpec,
    Domino,
    Orientation,
    TacnodePoint,
    Tiling,
    XiEta,
)
from skew_aztec_kernels.domain.services.tiling import validate_tiling

logger = logging.getLogger(__name__)

NUMBER_FORMAT = "%.15g"
KERNEL_VALUE_COLUMNS = ("re", "im", "err_estimate")


def format_number(value: float) -> str:
    """Fixed 15 significant digits, the precision of every emitted number."""
    return NUMBER_FORMAT % value


def _plain(value: Any) -> Any:
    """JSON-ready copy with complex split into re/im and floats at 15 digits."""
    if isinstance(value, BaseModel):
        return _plain(value.model_dump(mode="python"))
    if isinstance(value, complex):
        return {"re": _plain(value.real), "im": _plain(value.imag)}
    if isinstance(value, float):
        return float(format_number(value))
    if isinstance(value, Mapping):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, list | tuple | set | frozenset):
        return [_plain(v) for v in value]
    return value


def to_json(payload: Any) -> str:
    """Serialize a model or plain structure."""
    return json.dumps(_plain(payload), indent=2, ensure_ascii=False)


def kernel_row(inputs: Mapping[str, Any], value: complex, err_estimate: float) -> dict[str, str]:
    """One CSV row: the inputs followed by re, im and err_estimate."""
    row = {k: format_number(v) if isinstance(v, float) else str(v) for k, v in inputs.items()}
    row["re"] = format_number(value.real)
    row["im"] = format_number(value.imag)
    row["err_estimate"] = format_number(err_estimate)
    return row


def csv_text(rows: Sequence[Mapping[str, Any]]) -> str:
    """RFC 4180 text of a list of uniform rows."""
    output = io.StringIO()
    if rows:
        writer = csv.DictWriter(output, fieldnames=list(rows[0].keys()), lineterminator="\r\n")
        writer.writeheader()
        for row in rows:
            writer.writerow(
                {k: format_number(v) if isinstance(v, float) else v for k, v in row.items()}
            )
    return output.getvalue()


class TilingRecord(BaseModel):
    """Serialized tiling: the domain and one (xi, eta, orientation) per domino."""

    model_config = ConfigDict(extra="forbid")

    spec: DomainSpec
    dominoes: list[tuple[int, int, Orientation]]

    @classmethod
    def of(cls, t: Tiling) -> "TilingRecord":
        return cls(
            spec=t.spec,
            dominoes=[(d.anchor.xi, d.anchor.eta, d.orientation) for d in t.sorted_dominoes()],
        )

    def to_tiling(self) -> Tiling:
        t = Tiling(
            self.spec,
            frozenset(Domino(XiEta(xi, eta), o) for xi, eta, o in self.dominoes),
        )
        validate_tiling(t)
        return t


class PointRecord(BaseModel):
    """A point pair in lattice (xi, eta) or scaled (tau, y) form."""

    model_config = ConfigDict(extra="forbid")

    first: tuple[float, float]
    second: tuple[float, float]


class ResultsRepository:
    """Reads inputs and writes results under the conventions of the CLI."""

    def _load(self, path: Path) -> Any:
        if not path.exists():
            raise DomainError(f"File does not exist: {path}")
        with path.open(encoding="utf-8") as f:
            return yaml.safe_load(f)

    def load_spec(self, path: Path) -> DomainSpec:
        """DomainSpec from a JSON/YAML object with keys n, m, M and optional a."""
        try:
            return DomainSpec(**(self._load(path) or {}))
        except ValidationError as e:
            raise DomainError(f"Invalid spec file {path}: {e}") from e

    def load_points(self, path: Path) -> list[PointRecord]:
        """Point pairs from a JSON/YAML list of {first: [..], second: [..]}."""
        data = self._load(path) or []
        try:
            return [PointRecord(**item) for item in data]
        except (ValidationError, TypeError) as e:
            raise DomainError(f"Invalid points file {path}: {e}") from e

    def load_tacnode_points(self, path: Path) -> list[tuple[TacnodePoint, TacnodePoint]]:
        """Point pairs read as (tau, y); tau must be integral."""
        pairs = []
        for rec in self.load_points(path):
            points = []
            for tau, y in (rec.first, rec.second):
                if tau != int(tau):
                    raise DomainError(f"tau must be an integer, got {tau}")
                points.append(TacnodePoint(tau=int(tau), y=y))
            pairs.append((points[0], points[1]))
        return pairs

    def save_tiling(self, t: Tiling, path: Path) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(TilingRecord.of(t).model_dump_json(indent=2), encoding="utf-8")
        logger.info(f"Tiling with {len(t.dominoes)} dominoes written to {path}")

    def load_tiling(self, path: Path) -> Tiling:
        """Tiling from a file written by ``save_tiling``.

        Raises:
            DomainError: If the file is malformed or the dominoes do not tile the domain
        """
        try:
            record = TilingRecord(**(self._load(path) or {}))
        except ValidationError as e:
            raise DomainError(f"Invalid tiling file {path}: {e}") from e
        return record.to_tiling()

    def write_json(self, payload: Any, path: Path) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(to_json(payload) + "\n", encoding="utf-8")
        logger.info(f"Results written to {path}")

    def append_jsonl(self, records: Iterable[Any], path: Path) -> int:
        """Append one compact JSON object per line; returns the number written."""
        path.parent.mkdir(parents=True, exist_ok=True)
        count = 0
        with path.open("a", encoding="utf-8") as f:
            for record in records:
                f.write(json.dumps(_plain(record), ensure_ascii=False) + "\n")
                count += 1
        return count

    def read_jsonl(self, path: Path) -> list[Any]:
        with path.open(encoding="utf-8") as f:
            return [json.loads(line) for line in f if line.strip()]

    def write_csv(self, rows: Sequence[Mapping[str, Any]], path: Path) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8", newline="") as f:
            f.write(csv_text(rows))
        logger.info(f"{len(rows)} rows written to {path}")

    def read_csv(self, path: Path) -> list[dict[str, str]]:
        with path.open(encoding="utf-8", newline="") as f:
            return list(csv.DictReader(f))

    def write_text(self, text: str, path: Path) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        logger.info(f"Wrote {path}")
