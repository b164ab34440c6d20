"""Checkpointed, parallel census of twisted central values.

The work unit is one conductor: all characters of the family at that
conductor share one series pass, and conjugate pairs share one L-value.
Workers process conductors independently; results are committed to an
append-only JSON-lines store strictly in conductor order, so the store
is byte-identical no matter how many workers ran or how often the run
was interrupted.  The checkpoint records the highest fully committed
conductor; on resume any rows beyond it (a torn batch) are dropped and
recomputed.
"""

from __future__ import annotations

import csv
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .arith import spf_sieve
from .characters import FamilySpec, characters_of_conductor, count_family
from .discretize import IntegralityFailure, TwistRecord, build_twist_record
from .gauss import (
    histogram_args,
    weyl_sums,
    write_histogram_csv,
    write_weyl_csv,
)
from .lfun import (
    DEFAULT_N_MAX,
    EllipticCurveData,
    LValue,
    afe_cutoff,
    afe_terms,
    an_table,
    builtin_curve,
    l_values_at_conductor,
    load_curve,
)
from .rmt import fit_constant

DEFAULT_CENSUS_TOL = 1e-8


class CensusError(RuntimeError):
    pass


class MissingFamily(CensusError):
    """Requested plot data for a family absent from the record store."""


@dataclass(frozen=True)
class CensusConfig:
    curve: str
    family: FamilySpec
    x_max: int
    tol: float = DEFAULT_CENSUS_TOL
    workers: int = 1
    out_dir: str = "census-out"
    checkpoint_every: int = 50
    stop_after: int | None = None  # commit at most this many new conductors, then stop

    def __post_init__(self) -> None:
        if self.x_max < 3:
            raise ValueError("x_max must be >= 3")
        if not (0.0 < self.tol <= 1e-6):
            raise ValueError("tolerance must lie in (0, 1e-6]")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")

    def stem(self) -> str:
        return f"{self.curve.replace('/', '_')}_{self.family.tag()}"


@dataclass
class CensusSummary:
    curve: str
    family_tag: str
    x_max: int
    grid: list[tuple[int, int, int]]  # (X, family size, vanishings), cumulative
    records: int
    wall_time: float
    max_terms: int
    failures: list[dict] = field(default_factory=list)
    partial: bool = False

    def vanishings(self) -> int:
        return self.grid[-1][2] if self.grid else 0


def resolve_curve(name: str) -> EllipticCurveData:
    if os.path.exists(name):
        return load_curve(name)
    return builtin_curve(name)


# ---------------------------------------------------------------------------
# worker

_STATE: dict = {}


def _init_worker(curve_name: str, family: FamilySpec, tol: float, x_max: int) -> None:
    _STATE["curve"] = resolve_curve(curve_name)
    _STATE["family"] = family
    _STATE["tol"] = tol
    _STATE["spf"] = spf_sieve(x_max)


def process_conductor(q: int) -> tuple[int, list[dict], list[dict]]:
    """All records of one conductor, sorted by Conrey index.

    Evaluates one representative per conjugate pair and derives the
    partner through L(chi bar) = conj(L(chi)).
    """
    curve: EllipticCurveData = _STATE["curve"]
    family: FamilySpec = _STATE["family"]
    tol: float = _STATE["tol"]
    chars = characters_of_conductor(family, q, _STATE["spf"])
    if not chars:
        return q, [], []
    reps = [chi for chi in chars if chi.conrey_index() <= chi.conjugate().conrey_index()]
    lvals = l_values_at_conductor(curve, q, reps, tol=tol)
    records: list[tuple[int, dict]] = []
    failures: list[dict] = []
    for chi, lv in zip(reps, lvals):
        partners = [(chi, lv)]
        bar = chi.conjugate()
        if bar.conrey_index() != chi.conrey_index():
            partners.append((bar, LValue(lv.value.conjugate(), lv.truncation_bound, lv.terms_used)))
        for psi, plv in partners:
            try:
                rec = build_twist_record(curve, psi, plv, tol=tol)
                records.append((psi.conrey_index(), rec.to_dict()))
            except IntegralityFailure as exc:
                failures.append(
                    {"conductor": q, "conrey_index": psi.conrey_index(), "reason": str(exc)}
                )
    records.sort(key=lambda t: t[0])
    return q, [r for _, r in records], failures


# ---------------------------------------------------------------------------
# store

def _dump_record(d: dict) -> str:
    return json.dumps(d, sort_keys=True, separators=(",", ":"))


def records_path(cfg: CensusConfig) -> Path:
    return Path(cfg.out_dir) / f"{cfg.stem()}_records.jsonl"


def checkpoint_path(cfg: CensusConfig) -> Path:
    return Path(cfg.out_dir) / f"{cfg.stem()}_checkpoint.json"


def summary_path(cfg: CensusConfig) -> Path:
    return Path(cfg.out_dir) / f"{cfg.stem()}_summary.csv"


def load_records(path: str | Path) -> list[TwistRecord]:
    out = []
    with open(path) as f:
        for line in f:
            line = line.strip()
            if line:
                out.append(TwistRecord.from_dict(json.loads(line)))
    return out


def _read_committed(path: Path, committed: int) -> list[str]:
    """Record lines up to the committed conductor; a torn tail is dropped."""
    lines = []
    if not path.exists():
        return lines
    with open(path) as f:
        for raw in f:
            raw = raw.strip()
            if not raw:
                continue
            try:
                d = json.loads(raw)
            except json.JSONDecodeError:
                break
            if d["conductor"] > committed:
                break
            lines.append(raw)
    return lines


def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


# ---------------------------------------------------------------------------
# driver

def run_census(cfg: CensusConfig, resume: bool = False) -> CensusSummary:
    """Run (or resume) a census and write the record store plus summary CSV."""
    t0 = time.monotonic()
    curve = resolve_curve(cfg.curve)
    family = cfg.family
    if family.coprime_to % curve.conductor != 0:
        family = FamilySpec(
            family.order,
            family.variant,
            coprime_to=family.coprime_to * curve.conductor,
            sextic_include_nine=family.sextic_include_nine,
        )
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rec_path = records_path(cfg)
    ckpt_path = checkpoint_path(cfg)

    committed = 0
    kept: list[str] = []
    if resume and ckpt_path.exists():
        ckpt = json.loads(ckpt_path.read_text())
        for key, want in (("curve", cfg.curve), ("family", family.tag()), ("tol", cfg.tol)):
            if ckpt[key] != want:
                raise CensusError(f"checkpoint {key}={ckpt[key]!r} does not match {want!r}")
        committed = ckpt["committed"]
        kept = _read_committed(rec_path, committed)
    _atomic_write(rec_path, "".join(line + "\n" for line in kept))

    # warm the coefficient cache before forking so workers inherit it
    cut = afe_cutoff(curve, cfg.x_max)
    max_terms = afe_terms(cut, cfg.tol / 100.0, DEFAULT_N_MAX)
    an_table(curve, max_terms)

    todo = [q for q in range(committed + 1, cfg.x_max + 1) if math.gcd(q, curve.conductor) == 1]
    failures: list[dict] = []
    new_conductors = 0
    stopped = False

    def commit(batch: list[tuple[int, list[dict], list[dict]]], f) -> None:
        nonlocal committed
        for q, recs, fails in batch:
            for d in recs:
                f.write(_dump_record(d) + "\n")
            failures.extend(fails)
            committed = q
        f.flush()
        os.fsync(f.fileno())
        _atomic_write(
            ckpt_path,
            json.dumps(
                {
                    "curve": cfg.curve,
                    "family": family.tag(),
                    "tol": cfg.tol,
                    "x_max": cfg.x_max,
                    "committed": committed,
                }
            ),
        )

    with open(rec_path, "a") as f:
        batch: list[tuple[int, list[dict], list[dict]]] = []
        if cfg.workers == 1:
            _init_worker(cfg.curve, family, cfg.tol, cfg.x_max)
            results = map(process_conductor, todo)
            for item in results:
                batch.append(item)
                if len(batch) >= cfg.checkpoint_every:
                    commit(batch, f)
                    batch = []
                new_conductors += 1
                if cfg.stop_after is not None and new_conductors >= cfg.stop_after:
                    stopped = True
                    break
        else:
            with ProcessPoolExecutor(
                max_workers=cfg.workers,
                initializer=_init_worker,
                initargs=(cfg.curve, family, cfg.tol, cfg.x_max),
            ) as pool:
                for item in pool.map(process_conductor, todo, chunksize=4):
                    batch.append(item)
                    if len(batch) >= cfg.checkpoint_every:
                        commit(batch, f)
                        batch = []
                    new_conductors += 1
                    if cfg.stop_after is not None and new_conductors >= cfg.stop_after:
                        stopped = True
                        pool.shutdown(wait=False, cancel_futures=True)
                        break
        commit(batch, f)

    records = load_records(rec_path)
    grid = vanishing_grid(records)
    for (x1, f1, v1), (x2, f2, v2) in zip(grid, grid[1:]):
        assert f1 <= f2 and v1 <= v2 and v2 <= f2
    summary = CensusSummary(
        curve=cfg.curve,
        family_tag=family.tag(),
        x_max=cfg.x_max,
        grid=grid,
        records=len(records),
        wall_time=time.monotonic() - t0,
        max_terms=max_terms,
        failures=failures,
        partial=stopped,
    )
    if not stopped:
        write_summary_csv(summary_path(cfg), summary)
        streamed = sum(1 for r in records if r.vanished)
        assert streamed == summary.vanishings()
    return summary


def vanishing_grid(records: list[TwistRecord]) -> list[tuple[int, int, int]]:
    """Cumulative (X, family size, vanishing count) at each distinct conductor."""
    grid = []
    fam = van = 0
    for rec in sorted(records, key=lambda r: (r.conductor, r.conrey_index)):
        fam += 1
        van += 1 if rec.vanished else 0
        if grid and grid[-1][0] == rec.conductor:
            grid[-1] = (rec.conductor, fam, van)
        else:
            grid.append((rec.conductor, fam, van))
    return grid


def write_summary_csv(path: Path, summary: CensusSummary) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["family", "X", "family_size", "vanishings"])
        for x, fam, van in summary.grid:
            w.writerow([summary.family_tag, x, fam, van])


# ---------------------------------------------------------------------------
# derived artifacts

def emit_plot_data(
    cfg: CensusConfig,
    bins: int = 100,
    k_max: int = 4,
) -> list[Path]:
    """Ratio, histogram, and Weyl CSVs for a completed census."""
    rec_path = records_path(cfg)
    if not rec_path.exists():
        raise MissingFamily(f"no record store at {rec_path}")
    records = load_records(rec_path)
    if not records:
        raise MissingFamily(f"record store {rec_path} is empty")
    out = Path(cfg.out_dir)
    stem = cfg.stem()
    written = []

    grid = vanishing_grid(records)
    curve = resolve_curve(cfg.curve)
    family = records_family(cfg, curve)
    empirical = [(float(x), float(v)) for x, _, v in grid if v > 0]
    ratio_path = out / f"{stem}_ratio.csv"
    fit = fit_constant(empirical, family)
    with open(ratio_path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["family", "X", "empirical", "predicted", "ratio"])
        for x, predicted, emp, ratio in fit.grid:
            w.writerow([family.tag(), x, emp, predicted, ratio])
    written.append(ratio_path)

    weyl_path = out / f"{stem}_weyl.csv"
    write_weyl_csv(weyl_sums(family, cfg.x_max, k_max), family, str(weyl_path))
    written.append(weyl_path)

    hist_path = out / f"{stem}_hist.csv"
    write_histogram_csv(histogram_args(family, cfg.x_max, bins=bins), str(hist_path))
    written.append(hist_path)
    return written


def records_family(cfg: CensusConfig, curve: EllipticCurveData) -> FamilySpec:
    fam = cfg.family
    if fam.coprime_to % curve.conductor != 0:
        fam = FamilySpec(
            fam.order,
            fam.variant,
            coprime_to=fam.coprime_to * curve.conductor,
            sextic_include_nine=fam.sextic_include_nine,
        )
    return fam


# ---------------------------------------------------------------------------
# verification

def verify_store(cfg: CensusConfig) -> list[str]:
    """Invariant suite over a record store; returns a list of violations."""
    problems: list[str] = []
    rec_path = records_path(cfg)
    if not rec_path.exists():
        return [f"missing record store {rec_path}"]
    records = load_records(rec_path)
    curve = resolve_curve(cfg.curve)
    family = records_family(cfg, curve)

    by_key = {(r.conductor, r.conrey_index): r for r in records}
    if len(by_key) != len(records):
        problems.append("duplicate (conductor, conrey_index) rows")
    keys = [(r.conductor, r.conrey_index) for r in records]
    if keys != sorted(keys):
        problems.append("records not sorted by (conductor, conrey_index)")

    spf = spf_sieve(max((r.conductor for r in records), default=3))
    seen_max = max((r.conductor for r in records), default=0)
    expected = count_family(family, [seen_max])[0] if seen_max else 0
    if len(records) != expected:
        problems.append(f"store has {len(records)} records, family counting gives {expected}")

    for r in records:
        if r.quality > 0.05:
            problems.append(f"quality {r.quality} at {(r.conductor, r.conrey_index)}")
        if r.vanished != (r.n_int == 0):
            problems.append(f"vanished flag mismatch at {(r.conductor, r.conrey_index)}")
        if not r.is_totally and r.prime_conductor:
            problems.append(f"variant nesting violated at {(r.conductor, r.conrey_index)}")
        chars = characters_of_conductor(family, r.conductor, spf)
        match = [c for c in chars if c.conrey_index() == r.conrey_index]
        if not match:
            problems.append(f"record {(r.conductor, r.conrey_index)} not in family")
            continue
        bar = match[0].conjugate()
        partner = by_key.get((r.conductor, bar.conrey_index()))
        if partner is None:
            problems.append(f"conjugate of {(r.conductor, r.conrey_index)} missing")
        elif partner.vanished != r.vanished:
            problems.append(f"conjugate vanishing mismatch at {(r.conductor, r.conrey_index)}")
        if r.n_int != 0:
            gap = abs(r.l_value) * math.sqrt(r.conductor) / abs(r.k * curve.period(r.parity))
            if gap < 0.5:
                problems.append(f"threshold gap {gap:.3f} at {(r.conductor, r.conrey_index)}")
    return problems
