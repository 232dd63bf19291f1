"""Run configuration, config-file grammar and report serialisation.

Config files are plain text, one ``key = value`` per line::

    # comments run to end of line
    a_values = 0.5, 1, 2.5        # comma-separated list
    r_values = 0.05:0.95:0.05     # start:stop:step, stop inclusive
    tol = 1e-12
    exploratory = false

Keys are the :class:`~xistrip.verifier.Grid` field names plus
``exploratory`` and ``output``.  Command-line flags override file values.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from . import __version__
from .errors import DomainError
from .kernels import A_REGION_MAX
from .verifier import FAIL, NOT_ASSERTED, PASS, Grid, LemmaReport

SCHEMA_VERSION = 1

_GRID_TYPES = {f.name: f.type for f in dataclasses.fields(Grid)}


class ConfigError(DomainError):
    """Malformed configuration; reported as a usage error."""


@dataclass
class RunConfig:
    grid: Grid = field(default_factory=Grid)
    exploratory: bool = False
    output: str | None = None

    def echo(self) -> dict:
        return {"grid": dataclasses.asdict(self.grid), "exploratory": self.exploratory}

    def check_region(self):
        values = list(self.grid.a_values) + list(self.grid.route_a) + list(self.grid.ledger_a)
        if not self.exploratory and any(a > A_REGION_MAX for a in values):
            raise ConfigError(f"a-values beyond {A_REGION_MAX} need the exploratory flag")


def _parse_bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


def _parse_list(text: str, kind) -> tuple:
    out = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        if ":" in chunk:
            try:
                start, stop, step = (float(x) for x in chunk.split(":"))
            except ValueError:
                raise ConfigError(f"bad range {chunk!r}; expected start:stop:step") from None
            if step <= 0 or stop < start:
                raise ConfigError(f"empty or reversed range {chunk!r}")
            count = int(math.floor((stop - start) / step + 1e-9)) + 1
            out.extend(kind(round(start + i * step, 12)) for i in range(count))
        else:
            try:
                out.append(kind(chunk))
            except ValueError:
                raise ConfigError(f"cannot parse {chunk!r} as {kind.__name__}") from None
    if not out:
        raise ConfigError("empty list")
    return tuple(out)


def parse_value(key: str, text: str):
    """Convert the textual value of ``key`` to the type its field expects."""
    if key == "exploratory":
        return _parse_bool(text)
    if key == "output":
        return text.strip()
    if key not in _GRID_TYPES:
        raise ConfigError(f"unknown config key {key!r}")
    kind = _GRID_TYPES[key]
    try:
        if kind.startswith("tuple[int"):
            return _parse_list(text, int)
        if kind.startswith("tuple[float"):
            return _parse_list(text, float)
        if kind == "int":
            return int(text)
        return float(text)
    except ValueError:
        raise ConfigError(f"cannot parse {key} = {text!r}") from None


def parse_config_text(text: str) -> dict:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        values[key] = parse_value(key, value)
    return values


def build_config(file_values: dict | None = None, overrides: dict | None = None) -> RunConfig:
    merged = dict(file_values or {})
    merged.update({k: v for k, v in (overrides or {}).items() if v is not None})
    grid_kw = {k: v for k, v in merged.items() if k in _GRID_TYPES}
    cfg = RunConfig(Grid(**grid_kw), bool(merged.get("exploratory", False)), merged.get("output"))
    cfg.check_region()
    return cfg


def load_config(path: str | Path | None, overrides: dict | None = None) -> RunConfig:
    file_values = parse_config_text(Path(path).read_text()) if path else {}
    return build_config(file_values, overrides)


# ---------------------------------------------------------------------------


def clean(obj):
    """JSON-safe copy: numpy scalars to Python, tuples to lists, non-finite floats to None."""
    if isinstance(obj, dict):
        return {str(k): clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        return value if math.isfinite(value) else None
    return obj


def exit_code_for(reports: list[LemmaReport]) -> int:
    return 1 if any(r.verdict == FAIL for r in reports) else 0


def verify_document(reports: list[LemmaReport], cfg: RunConfig, lemma_ids: list[str]) -> dict:
    summary = {
        "pass": sum(r.verdict == PASS for r in reports),
        "fail": sum(r.verdict == FAIL for r in reports),
        "not_asserted": sum(r.verdict == NOT_ASSERTED for r in reports),
        "exit_code": exit_code_for(reports),
    }
    return clean({
        "schema_version": SCHEMA_VERSION,
        "tool": "xistrip",
        "version": __version__,
        "command": "verify",
        "lemmas": lemma_ids,
        "config": cfg.echo(),
        "reports": [r.to_dict() for r in reports],
        "summary": summary,
    })


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n"


def load_schema() -> dict:
    return json.loads(resources.files("xistrip").joinpath("report_schema.json").read_text())


def summary_table(reports: list[LemmaReport]) -> str:
    width = max(len(r.lemma_id) for r in reports)
    lines = [f"{'lemma':<{width}}  {'verdict':<13} {'margin_min':>14}  witness"]
    for r in reports:
        margin = "nan" if r.margin_min is None or not math.isfinite(r.margin_min) else f"{r.margin_min:.6g}"
        lines.append(f"{r.lemma_id:<{width}}  {r.verdict:<13} {margin:>14}  {clean(r.witness_worst)}")
    return "\n".join(lines)
