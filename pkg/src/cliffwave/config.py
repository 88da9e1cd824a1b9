"""Run configuration: dataclasses, JSON loading and schema validation."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, replace
from importlib import resources
from pathlib import Path

import jsonschema

from .cwt import CWTGrid
from .grid import GridSpec


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending line or field."""


@dataclass(frozen=True)
class ScaleRange:
    min: float = 2.0**-3
    max: float = 2.0**3
    count: int = 32


@dataclass(frozen=True)
class Tolerances:
    parseval: float = 1e-8
    roundtrip: float = 1e-10
    kernel: float = 0.02
    scalarity: float = 1e-8
    plancherel: float = 0.05
    reconstruction: float = 0.05
    lemma: float = 0.05
    saturation: float = 1e-3
    uncertainty_slack: float = 0.05
    algebra: float = 1e-10


@dataclass(frozen=True)
class RunConfig:
    """Settings for one verification run.  Defaults are the n=2 reference settings."""

    n: int = 2
    points: int = 65
    span: float = 8.0
    wavelets: tuple = ("mexican-hat",)
    scales: ScaleRange = field(default_factory=ScaleRange)
    spins: int = 16
    fields: tuple = ("vector-gaussian", "mexican-hat")
    random_fields: int = 0
    seed: int = 0
    axes: tuple = (1, 2)
    kernel_xis: tuple = ((1.0, 0.0), (0.0, 2.0), (1.5, -0.5))
    kernel_scales: ScaleRange = field(default_factory=lambda: ScaleRange(2.0**-4, 2.0**4, 48))
    kernel_spins: int = 32
    tolerances: Tolerances = field(default_factory=Tolerances)
    threads: int | None = None
    report_dir: str = "reports"
    stem: str = "report"

    def grid(self) -> GridSpec:
        return GridSpec.centered(self.n, self.points, self.span)

    def cwt_grid(self, grid: GridSpec | None = None) -> CWTGrid:
        grid = grid or self.grid()
        return CWTGrid.logarithmic(self.scales.min, self.scales.max, self.scales.count, self.spins, grid)

    def refined(self) -> RunConfig:
        """Twice the quadrature reach in every direction.

        Space keeps its step and doubles its extent (halving the frequency
        step), the scale grid keeps its log step over a doubled log range,
        and the spin count doubles.
        """
        lo, hi = math.log(self.scales.min), math.log(self.scales.max)
        mid, half = (lo + hi) / 2, hi - lo
        return replace(
            self,
            points=2 * self.points - 1,
            span=2 * self.span,
            scales=ScaleRange(math.exp(mid - half), math.exp(mid + half), 2 * self.scales.count),
            spins=2 * self.spins,
        )

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "grid": {"points": self.points, "span": self.span},
            "wavelets": list(self.wavelets),
            "scales": asdict(self.scales),
            "spins": self.spins,
            "corpus": {"fields": list(self.fields), "random": self.random_fields, "seed": self.seed},
            "axes": list(self.axes),
            "kernel": {"xis": [list(x) for x in self.kernel_xis], "scales": asdict(self.kernel_scales), "spins": self.kernel_spins},
            "tolerances": asdict(self.tolerances),
            "outputs": {"report_dir": self.report_dir, "stem": self.stem},
        } | ({"threads": self.threads} if self.threads else {})

    @classmethod
    def from_dict(cls, doc: dict) -> RunConfig:
        validate_document(doc)
        base = cls()
        n = doc.get("n", base.n)
        grid = doc.get("grid", {})
        corpus = doc.get("corpus", {})
        kernel = doc.get("kernel", {})
        outputs = doc.get("outputs", {})
        default_xis = base.kernel_xis if n == 2 else ((1.0, 0.0, 0.0), (0.0, 2.0, 0.0), (1.5, -0.5, 0.5))
        cfg = cls(
            n=n,
            points=grid.get("points", base.points),
            span=float(grid.get("span", base.span)),
            wavelets=tuple(doc.get("wavelets", base.wavelets)),
            scales=ScaleRange(**doc["scales"]) if "scales" in doc else base.scales,
            spins=doc.get("spins", base.spins),
            fields=tuple(corpus.get("fields", base.fields)),
            random_fields=corpus.get("random", base.random_fields),
            seed=corpus.get("seed", base.seed),
            axes=tuple(doc.get("axes", tuple(range(1, n + 1)))),
            kernel_xis=tuple(tuple(float(v) for v in x) for x in kernel.get("xis", default_xis)),
            kernel_scales=ScaleRange(**kernel["scales"]) if "scales" in kernel else base.kernel_scales,
            kernel_spins=kernel.get("spins", base.kernel_spins),
            tolerances=replace(base.tolerances, **doc.get("tolerances", {})),
            threads=doc.get("threads"),
            report_dir=outputs.get("report_dir", base.report_dir),
            stem=outputs.get("stem", base.stem),
        )
        cfg.check()
        return cfg

    def check(self):
        for name, rng in (("scales", self.scales), ("kernel.scales", self.kernel_scales)):
            if not rng.min < rng.max:
                raise ConfigError(f"field '{name}': min must be below max ({rng.min} >= {rng.max})")
        for k in self.axes:
            if not 1 <= k <= self.n:
                raise ConfigError(f"field 'axes': axis {k} outside 1..{self.n}")
        for i, xi in enumerate(self.kernel_xis):
            if len(xi) != self.n:
                raise ConfigError(f"field 'kernel.xis[{i}]': expected {self.n} components, got {len(xi)}")
            if not any(xi):
                raise ConfigError(f"field 'kernel.xis[{i}]': kernel samples must be nonzero")
        if self.points % 2 == 0:
            raise ConfigError("field 'grid.points': must be odd")


def schema() -> dict:
    text = resources.files("cliffwave").joinpath("data/config.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def _field_path(error: jsonschema.ValidationError) -> str:
    path = ""
    for part in error.absolute_path:
        path += f"[{part}]" if isinstance(part, int) else (f".{part}" if path else str(part))
    return path or "<root>"


def validate_document(doc):
    validator = jsonschema.Draft202012Validator(schema())
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(map(str, e.absolute_path)))
    if errors:
        first = errors[0]
        more = f" (and {len(errors) - 1} more)" if len(errors) > 1 else ""
        raise ConfigError(f"field '{_field_path(first)}': {first.message}{more}")


def load_config(path) -> RunConfig:
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    try:
        return RunConfig.from_dict(doc)
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from None
