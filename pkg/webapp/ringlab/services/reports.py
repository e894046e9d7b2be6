"""
Report emission: sweep tables (CSV / JSON / XLSX), sensor grid rendering and
deterministic output bundles.
"""

import csv
import io
import json
import logging
import os

import openpyxl

from .capacity import integer_text
from .circuit import format_pi
from .engine import PARAM_PHASE

logger = logging.getLogger(__name__)

CSV_HEADER = ("param_value", "path_count", "sensor_bits")

LIT = "█"
DARK = "·"


def format_value(parameter, value):
    """Phases in π units, gains as plain numbers."""
    if parameter == PARAM_PHASE:
        return format_pi(value)
    return f"{value:g}"


def render_grid(sensors):
    """One line per mesh row, then the flat bit string."""
    lines = []
    for r in range(sensors.rows):
        row = sensors.cells[r * sensors.cols:(r + 1) * sensors.cols]
        lines.append("".join(LIT if c else DARK for c in row))
    lines.append(sensors.bits)
    return "\n".join(lines)


def resonant_to_dict(resonant):
    path = resonant.path
    return {
        "input": path.input_port,
        "output": path.output_port,
        "nodes": list(path.node_ids),
        "length_l0": path.length_l0,
        "total_phase": format_pi(resonant.total_phase.value),
        "required_gain": resonant.required_gain,
        "channel": resonant.channel,
        "channels": sorted(path.channels),
    }


def describe_path(resonant):
    path = resonant.path
    route = "-".join(str(i) for i in path.node_ids)
    return (
        f"in {path.input_port} -> {route} -> out {path.output_port}"
        f"  ({path.length_l0} l0, f{resonant.channel})"
    )


# ---------------------------------------------------------------------------
# Sweep reports
# ---------------------------------------------------------------------------

def sweep_rows(report):
    return [
        (format_value(report.parameter, r.value), r.path_count, r.sensors.bits)
        for r in report.records
    ]


def sweep_csv(report):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    writer.writerows(sweep_rows(report))
    return buf.getvalue()


def sweep_to_dict(report):
    return {
        "parameter": report.parameter,
        "records": [
            {
                "param_value": format_value(report.parameter, r.value),
                "path_count": r.path_count,
                "sensor_bits": r.sensors.bits,
                "paths": [resonant_to_dict(p) for p in r.resonant],
            }
            for r in report.records
        ],
    }


def to_json(data):
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def write_sweep_xlsx(report, filename):
    """Workbook with a summary sheet and one row per resonant path.

    `filename` may be a path or a binary file object.
    """
    wb = openpyxl.Workbook()
    ws = wb.active
    ws.title = "Sweep"
    ws.append(list(CSV_HEADER))
    for row in sweep_rows(report):
        ws.append(list(row))

    paths = wb.create_sheet("Paths")
    paths.append(["param_value", "input", "output", "nodes", "length_l0", "total_phase", "channel"])
    for record in report.records:
        for p in record.resonant:
            d = resonant_to_dict(p)
            paths.append([
                format_value(report.parameter, record.value),
                d["input"], d["output"], "-".join(str(i) for i in d["nodes"]),
                d["length_l0"], d["total_phase"], d["channel"],
            ])
    wb.save(filename)
    wb.close()


def sweep_xlsx(report):
    """The sweep workbook as bytes (openpyxl stamps creation times, so not reproducible)."""
    buf = io.BytesIO()
    write_sweep_xlsx(report, buf)
    return buf.getvalue()


def sweep_summary(report):
    lines = [f"{report.parameter} sweep, {len(report.records)} points"]
    for record in report.records:
        if not record.resonant:
            continue
        value = format_value(report.parameter, record.value)
        lines.append(f"{report.parameter} = {value}: {record.path_count} path(s)")
        lines.extend(f"  {describe_path(p)}" for p in record.resonant)
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Other tables
# ---------------------------------------------------------------------------

def dispersion_csv(points):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("k_rad_per_m", "f_ghz"))
    for p in points:
        writer.writerow((f"{p.k:.6g}", f"{p.f:.9f}"))
    return buf.getvalue()


def capacity_table(report):
    if report.throughput is None:
        rate = f"10^{report.log10_throughput:.3f}"
    else:
        rate = f"{report.throughput:.6g}"
    rows = [
        ("n", str(report.n)),
        ("corner paths", integer_text(report.corner_paths)),
        ("total paths", integer_text(report.total_paths)),
        ("instructions", integer_text(report.instructions)),
        ("area (m^2)", f"{report.area_m2:.6g}"),
        ("time (s)", f"{report.time_s:.6g}"),
        ("throughput (ops/m^2/s)", rate),
    ]
    width = max(len(k) for k, _ in rows)
    lines = [f"{k.ljust(width)}  {v}" for k, v in rows]
    lines.extend(f"note: {note}" for note in report.notes)
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Bundles
# ---------------------------------------------------------------------------

def write_bundle(output_dir, files):
    """Write {name: text or bytes} under output_dir in sorted order; returns the paths."""
    os.makedirs(output_dir, exist_ok=True)
    written = []
    for name in sorted(files):
        fn = os.path.join(output_dir, name)
        content = files[name]
        if isinstance(content, bytes):
            with open(fn, "wb") as f:
                f.write(content)
        else:
            with open(fn, "w", encoding="utf-8", newline="\n") as f:
                f.write(content)
        written.append(fn)
    logger.info("wrote %d file(s) to %s", len(written), output_dir)
    return written
