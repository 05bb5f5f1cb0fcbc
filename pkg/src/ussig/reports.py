"""Serialization of experiment records and sweep figures.

Two delimited formats are supported. JSON output is one compact object
per line with sorted keys, preceded by a header object echoing the run
configuration. CSV output flattens the per-run parameters into columns
and carries the same header as '#'-prefixed comment lines. Neither
format includes wall-clock timings, so a rerun with the same seed is
byte-identical.
"""

from __future__ import annotations

import csv
import io
import json

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be fixed first)

from ussig import __version__

_SCALARS = (str, int, float, bool, type(None))


def header_record(seed: int, config: dict) -> dict:
    return {
        "record": "header",
        "version": __version__,
        "seed": seed,
        "config": {k: config[k] for k in sorted(config)},
    }


def flatten_record(record: dict) -> dict:
    """Lift ``params`` entries to top-level columns; serialize any other
    nested value to a compact JSON string."""
    flat: dict = {}
    for key, value in record.items():
        if key == "params" and isinstance(value, dict):
            for pk in sorted(value):
                flat[pk] = value[pk]
        elif isinstance(value, _SCALARS):
            flat[key] = value
        else:
            flat[key] = json.dumps(value, sort_keys=True, separators=(",", ":"))
    return flat


def _json_line(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def render_jsonl(records: list[dict], header: dict | None = None) -> str:
    lines = []
    if header is not None:
        lines.append(_json_line(header))
    lines.extend(_json_line(r) for r in records)
    return "\n".join(lines) + "\n"


def render_csv(records: list[dict], header: dict | None = None) -> str:
    """Flattened CSV. When every record carries the same bound tag, the
    bound column is named after it (for example ``bound_p2_forging``) and
    the tag column is dropped."""
    flats = [flatten_record(r) for r in records]
    tags = {f.get("bound_tag") for f in flats if f.get("bound_tag")}
    if len(tags) == 1 and all("bound" in f for f in flats):
        tag = tags.pop()
        for f in flats:
            f[f"bound_{tag}"] = f.pop("bound")
            f.pop("bound_tag", None)
    columns: list[str] = []
    for f in flats:
        for key in f:
            if key not in columns:
                columns.append(key)
    buffer = io.StringIO()
    if header is not None:
        for key in ("version", "seed"):
            buffer.write(f"# {key}: {header[key]}\n")
        buffer.write(f"# config: {_json_line(header['config'])}\n")
    writer = csv.DictWriter(buffer, fieldnames=columns, restval="",
                            lineterminator="\n")
    writer.writeheader()
    for f in flats:
        writer.writerow({k: _csv_cell(f.get(k)) for k in columns})
    return buffer.getvalue()


def _csv_cell(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return value


def render_report(records: list[dict], fmt: str,
                  header: dict | None = None) -> str:
    if fmt == "json":
        return render_jsonl(records, header)
    if fmt == "csv":
        return render_csv(records, header)
    raise ValueError(f"unknown format {fmt!r}")


def _bound_column(flats: list[dict]) -> str:
    """The column carrying bound values: a renamed ``bound_<tag>`` column
    when present (CSV-style records), otherwise plain ``bound``. The
    ``bound_tag`` label column never qualifies."""
    return next((c for f in flats for c in f
                 if c.startswith("bound_") and c != "bound_tag"),
                "bound")


def render_sweep_figure(records: list[dict], swept: list[str],
                        path: str) -> None:
    """Plot empirical frequencies against the first swept parameter with
    the analytic bound (dashed) and exact oracle (dotted) overlaid; a
    second swept parameter fans out into one line group per value. Zero
    frequencies cannot sit on the log axis and are dropped from it.
    """
    if not swept:
        raise ValueError("at least one swept parameter required")
    x_name = swept[0]
    series_name = swept[1] if len(swept) > 1 else None
    flats = [flatten_record(r) for r in records]
    bound_col = _bound_column(flats)

    groups: dict = {}
    for f in flats:
        groups.setdefault(f.get(series_name) if series_name else None,
                          []).append(f)

    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    for idx, (series_value, rows) in enumerate(sorted(
            groups.items(), key=lambda kv: (kv[0] is None, kv[0]))):
        rows = sorted(rows, key=lambda f: f.get(x_name, 0))
        xs = [f.get(x_name) for f in rows]
        label = f"{series_name}={series_value}" if series_name else "empirical"
        color = f"C{idx}"
        emp = [(x, f["empirical"]) for x, f in zip(xs, rows)
               if f.get("empirical", 0) > 0]
        if emp:
            ax.plot(*zip(*emp), marker="o", linestyle="-", color=color,
                    label=label)
        bnd = [(x, f[bound_col]) for x, f in zip(xs, rows)
               if isinstance(f.get(bound_col), (int, float)) and f[bound_col] > 0]
        if bnd:
            ax.plot(*zip(*bnd), linestyle="--", color=color, alpha=0.7,
                    label=f"{label} bound" if series_name else "bound")
        orc = [(x, f["oracle"]) for x, f in zip(xs, rows)
               if isinstance(f.get("oracle"), (int, float)) and f["oracle"] > 0]
        if orc:
            ax.plot(*zip(*orc), linestyle=":", color=color, alpha=0.7,
                    label=f"{label} oracle" if series_name else "oracle")
    ax.set_xlabel(x_name)
    ax.set_ylabel("success frequency")
    ax.set_yscale("log")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
