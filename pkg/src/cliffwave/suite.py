"""Configurable verification runs producing one CSV table and one JSON summary."""

from __future__ import annotations

import math
import traceback
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .algebra import algebra
from .config import RunConfig
from .corpus import corpus
from .cwt import cwt_analyze, normalizer, plancherel_check, reconstruct, relative_error
from .fourier import cft_forward, cft_inverse, parseval_check
from .grid import CliffordField, GridSpec
from .io import load_field
from .report import to_columns, to_csv, to_json, write_text
from .scales import log_scale_grid
from .spin import haar_quadrature
from .uncertainty import fourier_uncertainty, lemma_check, wavelet_uncertainty
from .wavelets import MotherWavelet, admissibility, builtin, kernel_constant_check, wavelet_from_field

SUITES = ("algebra", "fourier", "wavelet", "uncertainty")
COLUMNS = ["suite", "check", "wavelet", "field", "axis", "value", "lower", "upper", "status", "note"]


@dataclass
class CheckResult:
    suite: str
    check: str
    value: float
    lower: float | None = None
    upper: float | None = None
    wavelet: str = ""
    field: str = ""
    axis: int | None = None
    status: str = ""
    note: str = ""

    def __post_init__(self):
        if not self.status:
            self.status = "pass" if self.within() else "fail"

    def within(self) -> bool:
        v = self.value
        if v is None or (isinstance(v, float) and math.isnan(v)):
            return False
        if self.lower is not None and v < self.lower:
            return False
        return self.upper is None or v <= self.upper

    @classmethod
    def skipped(cls, suite, check, reason, **kw):
        return cls(suite, check, math.nan, status="skip", note=reason, **kw)

    @classmethod
    def error(cls, suite, check, exc: BaseException, **kw):
        return cls(suite, check, math.nan, status="error", note=f"{type(exc).__name__}: {exc}", **kw)


@dataclass
class SuiteReport:
    config: RunConfig
    rows: list

    @property
    def counts(self) -> dict:
        out = {"pass": 0, "fail": 0, "skip": 0, "error": 0}
        for r in self.rows:
            out[r.status] += 1
        return out

    @property
    def passed(self) -> bool:
        c = self.counts
        return c["fail"] == 0 and c["error"] == 0

    def find(self, check: str, **match) -> list:
        return [r for r in self.rows if r.check == check and all(getattr(r, k) == v for k, v in match.items())]

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "checks": [asdict(r) for r in self.rows],
            "summary": self.counts | {"total": len(self.rows), "passed": self.passed},
        }

    def csv(self) -> str:
        return to_csv([asdict(r) for r in self.rows], COLUMNS)

    def json(self) -> str:
        return to_json(self.to_dict())

    def write(self, report_dir=None, stem: str | None = None, gnuplot: bool = False) -> list[Path]:
        folder = Path(report_dir or self.config.report_dir)
        folder.mkdir(parents=True, exist_ok=True)
        stem = stem or self.config.stem
        paths = [folder / f"{stem}.csv", folder / f"{stem}.json"]
        write_text(paths[0], self.csv())
        write_text(paths[1], self.json())
        if gnuplot:
            paths.append(folder / f"{stem}.dat")
            write_text(paths[2], to_columns([asdict(r) | {"index": i} for i, r in enumerate(self.rows)], ["index"] + COLUMNS))
        return paths


def load_wavelet(spec: str, grid: GridSpec) -> MotherWavelet:
    """A built-in name, or ``file:PATH`` for a CField file sampled on ``grid``."""
    if spec.startswith("file:"):
        f = load_field(spec[5:])
        if f.grid != grid:
            raise ValueError(f"wavelet file {spec[5:]} is sampled on {f.grid.shape}, run grid is {grid.shape}")
        return wavelet_from_field(f, name=spec)
    return builtin(spec, grid)


# -- individual checks -------------------------------------------------------


def _algebra_rows(cfg: RunConfig) -> list:
    rng = np.random.default_rng(cfg.seed)
    tol = cfg.tolerances.algebra
    rows = []
    for n in range(1, 5):
        alg = algebra(n)
        a, b, c = (rng.normal(size=(200, alg.dim)) for _ in range(3))
        scale = np.abs(a).max() * np.abs(b).max() * np.abs(c).max()
        assoc = np.abs(alg.product(alg.product(a, b), c) - alg.product(a, alg.product(b, c))).max() / scale
        rows.append(CheckResult("algebra", "associativity", float(assoc), upper=tol, field=f"n={n}"))
        ab = alg.product(a, b)
        rev = np.abs(ab * alg.reversion_signs - alg.product(b * alg.reversion_signs, a * alg.reversion_signs)).max()
        con = np.abs(ab * alg.conjugation_signs - alg.product(b * alg.conjugation_signs, a * alg.conjugation_signs)).max()
        rows.append(CheckResult("algebra", "anti-automorphism", float(max(rev, con)), upper=tol, field=f"n={n}"))
        x = np.zeros((200, alg.dim))
        x[:, alg.vector_masks] = rng.normal(size=(200, n))
        sq = alg.product(x, x)
        expected = -np.sum(x[:, alg.vector_masks] ** 2, axis=1)
        err = max(np.abs(sq[:, 0] - expected).max(), np.abs(sq[:, 1:]).max())
        rows.append(CheckResult("algebra", "vector-square", float(err), upper=tol, field=f"n={n}"))
    return rows


def _fourier_rows(cfg: RunConfig, grid: GridSpec, fields: dict) -> list:
    tol = cfg.tolerances
    r2 = np.sum(grid.coords() ** 2, axis=-1)
    g = CliffordField.from_scalar(grid, np.exp(-r2 / 2))
    G = cft_forward(g)
    expected = np.exp(-np.sum(G.grid.coords() ** 2, axis=-1) / 2)
    rows = [CheckResult("fourier", "gaussian-pair", float(np.abs(G.data[..., 0] - expected).max()), upper=tol.parseval, field="gaussian")]
    for name, f in fields.items():
        back = cft_inverse(cft_forward(f))
        rows.append(CheckResult("fourier", "roundtrip", relative_error(f, back), upper=tol.roundtrip, field=name))
        lhs, rhs = parseval_check(f, f)
        scale = max(abs(lhs.scalar_part), 1e-300)
        rows.append(CheckResult("fourier", "parseval", (lhs - rhs).magnitude() / scale, upper=tol.parseval, field=name))
    return rows


def _admissibility_rows(cfg: RunConfig, psi: MotherWavelet) -> tuple[list, object]:
    report = admissibility(psi, strict=False)
    tol = cfg.tolerances
    rows = [
        CheckResult("wavelet", "admissibility", report.C_psi, wavelet=psi.name, status="pass" if report.admissible else "fail", note=report.reason),
        CheckResult("wavelet", "scalarity", report.scalarity_max_violation, upper=tol.scalarity, wavelet=psi.name),
    ]
    return rows, report


def _kernel_rows(cfg: RunConfig, psi: MotherWavelet, C: float) -> list:
    scales, w = log_scale_grid(cfg.kernel_scales.min, cfg.kernel_scales.max, cfg.kernel_scales.count)
    spins = haar_quadrature(cfg.n, cfg.kernel_spins)
    rep = kernel_constant_check(psi, cfg.kernel_xis, scales, w, spins, C_psi=C)
    note = "scale grid too narrow" if rep.scale_grid_too_narrow else ""
    rows = []
    for xi, dev, ns in zip(rep.xis, rep.deviations, rep.nonscalar):
        label = "xi=(" + ",".join(f"{v:g}" for v in xi) + ")"
        rows.append(CheckResult("wavelet", "kernel-constant", float(dev), upper=cfg.tolerances.kernel, wavelet=psi.name, field=label, note=note))
        rows.append(CheckResult("wavelet", "kernel-scalar", float(ns), upper=cfg.tolerances.scalarity, wavelet=psi.name, field=label))
    return rows


def _transform_rows(cfg: RunConfig, psi: MotherWavelet, C: float, name: str, f: CliffordField) -> list:
    tol = cfg.tolerances
    cgrid = cfg.cwt_grid(f.grid)
    Z = normalizer(psi, C)
    pl = plancherel_check(f, psi, cgrid, C_psi=C, threads=1)
    T = cwt_analyze(f, psi, cgrid, threads=1, warn=False)
    err = relative_error(f, reconstruct(T, psi, Z))
    return [
        CheckResult("wavelet", "plancherel", pl.ratio, 1 - tol.plancherel, 1 + tol.plancherel, wavelet=psi.name, field=name),
        CheckResult("wavelet", "reconstruction", err, upper=tol.reconstruction, wavelet=psi.name, field=name),
    ]


def _fourier_uncertainty_rows(cfg: RunConfig, name: str, f: CliffordField) -> list:
    tol = cfg.tolerances.saturation
    rows = []
    for k in cfg.axes:
        rep = fourier_uncertainty(f, k)
        note = "" if rep.diagnostics["decays"] else "field does not decay at the boundary"
        rows.append(CheckResult("uncertainty", "fourier-uncertainty", rep.ratio, lower=1 - tol, field=name, axis=k, note=note))
        if name == "gaussian":
            rows.append(CheckResult("uncertainty", "fourier-saturation", abs(rep.ratio - 1), upper=tol, field=name, axis=k))
    return rows


def _wavelet_uncertainty_rows(cfg: RunConfig, psi: MotherWavelet, C: float, name: str, f: CliffordField) -> list:
    tol = cfg.tolerances
    cgrid = cfg.cwt_grid(f.grid)
    rows = []
    for k in cfg.axes:
        _, _, ratio = lemma_check(f, psi, cgrid, k, C_psi=C, threads=1)
        rows.append(CheckResult("uncertainty", "lemma", ratio, 1 - tol.lemma, 1 + tol.lemma, wavelet=psi.name, field=name, axis=k))
        rep = wavelet_uncertainty(f, psi, cgrid, k, C_psi=C, threads=1)
        note = f"sphere-constant ratio {rep.diagnostics['sphere_constant_ratio']:.6g}"
        rows.append(CheckResult("uncertainty", "wavelet-uncertainty", rep.ratio, lower=1 - tol.uncertainty_slack, wavelet=psi.name, field=name, axis=k, note=note))
        rows.append(CheckResult("uncertainty", "slice-heisenberg", rep.diagnostics["slice_heisenberg_min"], lower=1 - tol.uncertainty_slack, wavelet=psi.name, field=name, axis=k))
    return rows


def _guard(suite: str, check: str, func, *args, **labels) -> list:
    try:
        return func(*args)
    except Exception as exc:  # one broken check must not stop the run
        traceback.print_exc()
        return [CheckResult.error(suite, check, exc, **labels)]


def _run_tasks(tasks, threads: int) -> list:
    if threads > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda t: t(), tasks))
    else:
        results = [t() for t in tasks]
    return [row for rows in results for row in rows]


def run_verification_suite(cfg: RunConfig, suites=("all",), threads: int | None = None) -> SuiteReport:
    """Run the selected suites over the configured corpus.

    Wavelet-dependent checks are skipped for wavelets that fail the
    admissibility test.  An empty corpus gives an empty report.  Row order
    depends only on the configuration, never on scheduling.
    """
    chosen = SUITES if "all" in suites else tuple(s for s in SUITES if s in suites)
    unknown = set(suites) - set(SUITES) - {"all"}
    if unknown:
        raise ValueError(f"unknown suite(s): {sorted(unknown)}")
    grid = cfg.grid()
    fields = corpus(grid, cfg.fields, cfg.random_fields, cfg.seed)
    if not fields:
        return SuiteReport(cfg, [])
    threads = threads or cfg.threads or 1

    rows = []
    if "algebra" in chosen:
        rows += _guard("algebra", "algebra", _algebra_rows, cfg)
    if "fourier" in chosen:
        rows += _guard("fourier", "fourier", _fourier_rows, cfg, grid, fields)
    if not ({"wavelet", "uncertainty"} & set(chosen)):
        return SuiteReport(cfg, rows)

    if "uncertainty" in chosen:
        rows += _run_tasks([lambda n=n, f=f: _guard("uncertainty", "fourier-uncertainty", _fourier_uncertainty_rows, cfg, n, f, field=n) for n, f in fields.items()], threads)

    for spec in cfg.wavelets:
        try:
            psi = load_wavelet(spec, grid)
        except Exception as exc:
            rows.append(CheckResult.error("wavelet", "load", exc, wavelet=spec))
            continue
        adm_rows, report = _admissibility_rows(cfg, psi)
        rows += adm_rows
        if not report.admissible:
            rows.append(CheckResult.skipped("wavelet", "downstream", "wavelet is not admissible", wavelet=psi.name))
            continue
        C = report.C_psi
        tasks = []
        if "wavelet" in chosen:
            tasks.append(lambda psi=psi: _guard("wavelet", "kernel-constant", _kernel_rows, cfg, psi, C, wavelet=psi.name))
            tasks += [lambda n=n, f=f, psi=psi: _guard("wavelet", "plancherel", _transform_rows, cfg, psi, C, n, f, wavelet=psi.name, field=n) for n, f in fields.items()]
        if "uncertainty" in chosen:
            tasks += [lambda n=n, f=f, psi=psi: _guard("uncertainty", "wavelet-uncertainty", _wavelet_uncertainty_rows, cfg, psi, C, n, f, wavelet=psi.name, field=n) for n, f in fields.items()]
        rows += _run_tasks(tasks, threads)
    return SuiteReport(cfg, rows)

