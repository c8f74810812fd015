"""CSV emission and loading.

Floats are written with ``repr`` (shortest round-trip decimal), so
``load(emit(x))`` reproduces every value exactly. Files open with ``#``
metadata lines (RNG algorithm, seeds); loaders skip them. Multi-section
files separate sections by a fresh header row.
"""

from __future__ import annotations

import io
import math
from pathlib import Path

import numpy as np

from smeargas.errors import ConfigError
from smeargas.gascloud import RNG_ALGORITHM
from smeargas.harness.runs import SweepAggregate, SweepRow, SweepTable

SWEEP_ROW_HEADER = ("size_m", "repeat", "seed", "tr", "n_inside", "cloud_hash")
SWEEP_AGG_HEADER = ("size_m", "mean_tr", "stdev_tr")
RATIO_ROW_HEADER = ("repeat", "seed", "tr_small", "tr_large", "ratio")
RATIO_SUMMARY_HEADER = ("quantity", "mean", "stdev")
CLOUD_HEADER = ("x_m", "y_m", "z_m")


def fmt(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if value is None:
        return ""
    return str(value)


def csv_line(fields):
    return ",".join(fmt(f) for f in fields) + "\n"


def meta_lines(kind, **items):
    out = [f"# smeargas {kind}\n", f"# rng={RNG_ALGORITHM}\n"]
    out.extend(f"# {k}={fmt(v)}\n" for k, v in items.items())
    return "".join(out)


def write_text(text, path=None):
    """Write ``text`` to ``path`` (bytes exactly as given, ``\\n`` line ends) or return it."""
    if path is not None:
        Path(path).write_bytes(text.encode("utf-8"))
    return text


def sweep_csv(table: SweepTable, base_seed=None) -> str:
    buf = io.StringIO()
    buf.write(meta_lines("sweep", base_seed=base_seed))
    buf.write(csv_line(SWEEP_ROW_HEADER))
    for r in table.rows:
        buf.write(csv_line((r.size_m, r.repeat, r.seed, r.tr, r.n_inside, r.cloud_hash)))
    buf.write(csv_line(SWEEP_AGG_HEADER))
    for a in table.aggregates:
        buf.write(csv_line((a.size_m, a.mean_tr, a.stdev_tr)))
    return buf.getvalue()


def emit_csv(table: SweepTable, path=None, base_seed=None) -> str:
    """Write a sweep table; returns the CSV text."""
    return write_text(sweep_csv(table, base_seed), path)


def _sections(text):
    """Split CSV text into [(header, rows, first_line_no)] on header rows."""
    sections = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split(",")
        if fields and fields[0] in ("size_m", "repeat", "quantity", "x_m") and not _numeric(fields[0]):
            sections.append((tuple(fields), [], lineno))
        elif not sections:
            raise ConfigError("data row before any header", line=lineno)
        else:
            sections[-1][1].append((lineno, fields))
    return sections


def _numeric(text):
    try:
        float(text)
    except ValueError:
        return False
    return True


def _parse(lineno, header, fields, types):
    if len(fields) != len(header):
        raise ConfigError(f"expected {len(header)} fields, got {len(fields)}", line=lineno)
    out = []
    for name, text, kind in zip(header, fields, types):
        try:
            out.append(kind(text))
        except ValueError as exc:
            raise ConfigError(f"bad value {text!r}", line=lineno, key=name) from exc
    return out


def load_csv(path) -> SweepTable:
    """Load a sweep table written by :func:`emit_csv`."""
    text = Path(path).read_text()
    return parse_sweep_csv(text)


def parse_sweep_csv(text) -> SweepTable:
    sections = _sections(text)
    if [s[0] for s in sections] != [SWEEP_ROW_HEADER, SWEEP_AGG_HEADER]:
        raise ConfigError("not a sweep CSV (unexpected section headers)")
    rows = []
    for lineno, fields in sections[0][1]:
        size, rep, seed, tr, n_in, digest = _parse(
            lineno, SWEEP_ROW_HEADER, fields, (float, int, int, float, int, str))
        rows.append(SweepRow(size, rep, seed, tr, n_in, digest, tr == 0.0))
    aggregates = []
    for lineno, fields in sections[1][1]:
        size, mean, stdev = _parse(lineno, SWEEP_AGG_HEADER, fields, (float, float, float))
        n_in = [r.n_inside for r in rows if r.size_m == size]
        mean_n = float(np.mean(n_in)) if n_in else math.nan
        aggregates.append(SweepAggregate(size, mean, stdev, mean_n))
    return SweepTable(tuple(rows), tuple(aggregates))


def ratio_csv(report) -> str:
    buf = io.StringIO()
    buf.write(meta_lines("ratio", base_seed=report.base_seed, small_m=report.small_m,
                         large_m=report.large_m))
    buf.write(csv_line(RATIO_ROW_HEADER))
    for r, (seed, a, b, q) in enumerate(zip(report.seeds, report.tr_small_values,
                                            report.tr_large_values, report.ratio_values)):
        buf.write(csv_line((r, seed, a, b, q)))
    buf.write(csv_line(RATIO_SUMMARY_HEADER))
    for name in ("tr_small", "tr_large", "ratio"):
        st = getattr(report, name)
        buf.write(csv_line((name, st.mean, st.stdev)))
    if report.z_score is not None:
        z = report.z_score
    else:
        z = "degenerate" if report.degenerate else "undefined"
    buf.write(csv_line(("z_score", z, "")))
    return buf.getvalue()


def ratio_summary(report) -> str:
    if report.z_score is not None:
        z = f"{report.z_score:.3f}"
    else:
        z = "degenerate (zero spread)" if report.degenerate else "undefined (single repeat)"
    n = len(report.ratio_values)
    return (
        f"detectors: small {report.small_m:g} m, large {report.large_m:g} m, {n} seeds\n"
        f"TR(small) = {report.tr_small.mean:.9g} +/- {report.tr_small.stdev:.3g}\n"
        f"TR(large) = {report.tr_large.mean:.9g} +/- {report.tr_large.stdev:.3g}\n"
        f"ratio     = {report.ratio.mean:.9g} +/- {report.ratio.stdev:.3g}\n"
        f"z-score   = {z}\n"
    )


def cloud_csv(cloud) -> str:
    buf = io.StringIO()
    buf.write(meta_lines("cloud", seed=cloud.seed, n_particles=len(cloud),
                         t_bar_s=cloud.t_bar, cloud_hash=cloud.digest()))
    buf.write(csv_line(CLOUD_HEADER))
    for x, y, z in cloud.positions.tolist():
        buf.write(f"{x!r},{y!r},{z!r}\n")
    return buf.getvalue()


def load_cloud_positions(path) -> np.ndarray:
    """Positions (N, 3) from a cloud CSV."""
    sections = _sections(Path(path).read_text())
    if len(sections) != 1 or sections[0][0] != CLOUD_HEADER:
        raise ConfigError("not a cloud CSV (expected header x_m,y_m,z_m)")
    pts = [_parse(lineno, CLOUD_HEADER, f, (float, float, float)) for lineno, f in sections[0][1]]
    return np.array(pts, dtype=float).reshape(-1, 3)
