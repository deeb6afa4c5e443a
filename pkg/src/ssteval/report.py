"""Human-readable artifacts: text tables, scatter and heatmap figures.

Figures are self-contained SVG built by plain string assembly — a pure
function of the data records, so reruns are byte-identical and the records
alone can regenerate every figure.
"""

import json
import os
from dataclasses import dataclass

from .types import ValidationError

_SVG_FONT = "font-family=\"sans-serif\""


@dataclass(frozen=True)
class HeatmapSpec:
    labels: tuple  # ordered variant labels
    p_matrix: tuple  # rows of p-values; diagonal entries unused
    diagonal: tuple  # correlation-to-rating values, shown bold

    def __post_init__(self):
        size = len(self.labels)
        if len(self.p_matrix) != size or any(len(r) != size for r in self.p_matrix):
            raise ValidationError("heatmap matrix must be square and match labels")
        if len(self.diagonal) != size:
            raise ValidationError("heatmap diagonal must match labels")
        for d in self.diagonal:
            if not -1.0 <= d <= 1.0:
                raise ValidationError(f"diagonal value {d} outside [-1, 1]")
        for i, row in enumerate(self.p_matrix):
            for j, p in enumerate(row):
                if i != j and not 0.0 <= p <= 1.0:
                    raise ValidationError(f"p value {p} at ({i},{j}) outside [0, 1]")


def _fmt(value, digits=2):
    return f"{value:.{digits}f}"


def emit_scatter(points, x_label, y_label, width=520, height=400):
    """Scatter SVG plus one data record per point. Points carry 'rating'
    (x), 'score' (y) and a 'subset' tag that selects the marker color."""
    if not points:
        raise ValidationError("nothing to plot")
    margin = 55
    xs = [p["rating"] for p in points]
    ys = [p["score"] for p in points]
    x_min, x_max = 1.0, 4.0  # rating scale is fixed
    x_min = min(x_min, min(xs))
    x_max = max(x_max, max(xs))
    y_min, y_max = min(ys), max(ys)
    if y_min == y_max:
        y_min, y_max = y_min - 1.0, y_max + 1.0
    pad = 0.05 * (y_max - y_min)
    y_min -= pad
    y_max += pad

    def sx(v):
        return margin + (v - x_min) / (x_max - x_min) * (width - 2 * margin)

    def sy(v):
        return height - margin - (v - y_min) / (y_max - y_min) * (height - 2 * margin)

    colors = {"Common": "#1f77b4", "NonNative": "#ff7f0e"}
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" '
        f'y2="{height - margin}" stroke="black"/>',
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{height - margin}" '
        f'stroke="black"/>',
        f'<text x="{width // 2}" y="{height - 12}" {_SVG_FONT} font-size="13" '
        f'text-anchor="middle">{x_label}</text>',
        f'<text x="16" y="{height // 2}" {_SVG_FONT} font-size="13" text-anchor="middle" '
        f'transform="rotate(-90 16 {height // 2})">{y_label}</text>',
    ]
    for tick in (x_min, (x_min + x_max) / 2, x_max):
        parts.append(
            f'<text x="{_fmt(sx(tick))}" y="{height - margin + 18}" {_SVG_FONT} '
            f'font-size="11" text-anchor="middle">{_fmt(tick)}</text>'
        )
    for tick in (y_min, (y_min + y_max) / 2, y_max):
        parts.append(
            f'<text x="{margin - 8}" y="{_fmt(sy(tick) + 4)}" {_SVG_FONT} '
            f'font-size="11" text-anchor="end">{_fmt(tick)}</text>'
        )
    for p in points:
        color = colors.get(p.get("subset", ""), "#555555")
        parts.append(
            f'<circle cx="{_fmt(sx(p["rating"]))}" cy="{_fmt(sy(p["score"]))}" r="3" '
            f'fill="{color}" fill-opacity="0.65"/>'
        )
    legend_y = margin - 18
    for i, (name, color) in enumerate(sorted(colors.items())):
        x0 = margin + i * 130
        parts.append(f'<circle cx="{x0}" cy="{legend_y}" r="4" fill="{color}"/>')
        parts.append(
            f'<text x="{x0 + 10}" y="{legend_y + 4}" {_SVG_FONT} font-size="11">{name}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts), points


def emit_heatmap(spec: HeatmapSpec, cell=34, label_width=230):
    """Matrix SVG: p-values in two decimals, correlation coefficients bold
    on the diagonal, darker cells for smaller p."""
    size = len(spec.labels)
    top = 30
    width = label_width + size * cell + 20
    height = top + size * cell + 20
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    records = []
    for i in range(size):
        parts.append(
            f'<text x="{label_width - 8}" y="{top + i * cell + cell // 2 + 4}" '
            f'{_SVG_FONT} font-size="10" text-anchor="end">{i + 1}: {spec.labels[i]}</text>'
        )
        parts.append(
            f'<text x="{label_width + i * cell + cell // 2}" y="{top - 8}" {_SVG_FONT} '
            f'font-size="10" text-anchor="middle">{i + 1}</text>'
        )
        for j in range(size):
            x0 = label_width + j * cell
            y0 = top + i * cell
            if i == j:
                value = spec.diagonal[i]
                fill = "#f0f0f0"
                text = f'<text x="{x0 + cell // 2}" y="{y0 + cell // 2 + 4}" {_SVG_FONT} ' \
                       f'font-size="11" font-weight="bold" text-anchor="middle">' \
                       f'{_fmt(value)}</text>'
                records.append({"row": i, "col": j, "kind": "r", "value": value})
            else:
                value = spec.p_matrix[i][j]
                shade = int(235 - 110 * (1.0 - min(1.0, value)))
                fill = f"rgb({shade},{shade},255)"
                text = f'<text x="{x0 + cell // 2}" y="{y0 + cell // 2 + 4}" {_SVG_FONT} ' \
                       f'font-size="10" text-anchor="middle">{_fmt(value)}</text>'
                records.append({"row": i, "col": j, "kind": "p", "value": value})
            parts.append(
                f'<rect x="{x0}" y="{y0}" width="{cell}" height="{cell}" fill="{fill}" '
                f'stroke="#cccccc"/>'
            )
            parts.append(text)
    parts.append("</svg>")
    return "\n".join(parts), records


def format_table1(table1, cr_definition="CR"):
    """Fixed-width text rendering; sub-threshold correlations in brackets
    (the print analogue of italics)."""
    lines = []
    metrics = [c["metric"] for c in table1["panels"][0]["rows"][0]["cells"]]
    for panel in table1["panels"]:
        title = (
            "Averaged document ratings" if panel["aggregation"] == "averaged"
            else "All document ratings"
        )
        lines.append(f"== {title} ({cr_definition} vs metric, Pearson r) ==")
        lines.append(f"{'subset':<12}{'n':>6}  " + "".join(f"{m:>12}" for m in metrics))
        for row in panel["rows"]:
            cells = []
            for cell in row["cells"]:
                mark = f"{cell['r']:.2f}" if cell["strong"] else f"[{cell['r']:.2f}]"
                cells.append(f"{mark:>12}")
            lines.append(f"{row['subset']:<12}{row['n']:>6}  " + "".join(cells))
        lines.append("")
    lines.append("[r] marks correlations below the strong-correlation bar (0.6).")
    return "\n".join(lines) + "\n"


def format_table2(comparison):
    """Ordered variant table with cluster boundary lines. Boundaries use
    '----' for the tightest threshold and '- -' style dashes for looser
    ones, mirroring dashed/dotted lines."""
    lines = [
        f"Variants ordered by Pearson r with {comparison.cr_definition} "
        f"(subset={comparison.subset}, aggregation={comparison.aggregation}, "
        f"n={comparison.n})",
        f"{'#':>3}  {'metric/reference/alignment':<38}{'r':>7}",
    ]
    thresholds = sorted(comparison.clusters)
    markers = {}
    for rank, threshold in enumerate(thresholds):
        style = "-" * 50 if rank == 0 else "- " * 25
        for b in comparison.clusters[threshold]:
            # the tightest threshold wins when both draw the same boundary
            markers.setdefault(b, f"{style}  (p < {threshold:g})")
    for i, (label, r) in enumerate(zip(comparison.variants, comparison.r_values)):
        lines.append(f"{i + 1:>3}  {label:<38}{r:>7.2f}")
        if i in markers:
            lines.append(markers[i])
    return "\n".join(lines) + "\n"


def _write(path, content):
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(content)


def _write_jsonl(path, records):
    _write(path, "".join(json.dumps(r, ensure_ascii=False) + "\n" for r in records))


def write_report(result, out_dir):
    """Lay the analysis result out as text tables, machine-readable records
    and figures under out_dir, mirroring (subset, aggregation)."""
    analysis_dir = os.path.join(out_dir, "analysis")
    figures_dir = os.path.join(out_dir, "figures")

    correlation_records = []
    for comparison in result["comparisons"]:
        for label, r, p in zip(
            comparison.variants, comparison.r_values, comparison.p_values
        ):
            correlation_records.append({
                "subset": comparison.subset,
                "aggregation": comparison.aggregation,
                "metric_variant": label,
                "n": comparison.n,
                "r": r,
                "p": p,
            })
    _write_jsonl(os.path.join(analysis_dir, "correlations.jsonl"), correlation_records)

    if result.get("table1") is not None:
        _write(
            os.path.join(analysis_dir, "table1.txt"),
            format_table1(result["table1"], result["cr_definition"]),
        )
        _write(
            os.path.join(analysis_dir, "table1.json"),
            json.dumps(result["table1"], ensure_ascii=False, indent=2) + "\n",
        )

    for comparison in result["comparisons"]:
        base = os.path.join(analysis_dir, comparison.subset, comparison.aggregation)
        _write(os.path.join(base, "table2.txt"), format_table2(comparison))
        _write(
            os.path.join(base, "table2.json"),
            json.dumps(
                {
                    "subset": comparison.subset,
                    "aggregation": comparison.aggregation,
                    "cr_definition": comparison.cr_definition,
                    "n": comparison.n,
                    "variants": comparison.variants,
                    "r": comparison.r_values,
                    "p": comparison.p_values,
                    "clusters": {str(t): b for t, b in comparison.clusters.items()},
                },
                ensure_ascii=False,
                indent=2,
            ) + "\n",
        )
        pairwise_records = []
        for i, va in enumerate(comparison.variants):
            for j, vb in enumerate(comparison.variants):
                if i < j:
                    pairwise_records.append({
                        "variant_a": va,
                        "variant_b": vb,
                        "r_a": comparison.r_values[i],
                        "r_b": comparison.r_values[j],
                        "n": comparison.n,
                        "t": comparison.pairwise_t[i][j],
                        "p": comparison.pairwise_p[i][j],
                    })
        _write_jsonl(os.path.join(base, "pairwise.jsonl"), pairwise_records)

        spec = HeatmapSpec(
            labels=tuple(comparison.variants),
            p_matrix=tuple(tuple(row) for row in comparison.pairwise_p),
            diagonal=tuple(comparison.r_values),
        )
        svg, records = emit_heatmap(spec)
        fig_base = os.path.join(figures_dir, comparison.subset, comparison.aggregation)
        _write(os.path.join(fig_base, "heatmap.svg"), svg + "\n")
        _write_jsonl(os.path.join(fig_base, "heatmap.jsonl"), records)

    for scatter in result.get("scatters", []):
        fig_base = os.path.join(
            figures_dir, scatter["subset"], scatter["aggregation"]
        )
        name = "scatter_" + scatter["variant"].replace("/", "_").replace("+", "-")
        svg, records = emit_scatter(
            scatter["points"],
            x_label=result["cr_definition"],
            y_label=scatter["variant"],
        )
        _write(os.path.join(fig_base, name + ".svg"), svg + "\n")
        _write_jsonl(os.path.join(fig_base, name + ".jsonl"), records)

    cr_cri = result.get("cr_vs_cri")
    if cr_cri and cr_cri["points"]:
        points = [
            dict(p, rating=p["cr"], score=p["cri"]) for p in cr_cri["points"]
        ]
        svg, _ = emit_scatter(points, x_label="CR", y_label="CRi")
        _write(os.path.join(figures_dir, "cr_vs_cri.svg"), svg + "\n")
        _write_jsonl(os.path.join(figures_dir, "cr_vs_cri.jsonl"), cr_cri["points"])
        summary = {"n": len(cr_cri["points"])}
        if cr_cri.get("r") is not None:
            summary["pearson_r"] = cr_cri["r"]
            summary["p"] = cr_cri["p"]
        _write(
            os.path.join(figures_dir, "cr_vs_cri_summary.json"),
            json.dumps(summary, ensure_ascii=False, indent=2) + "\n",
        )

    if result.get("recommendations"):
        _write(
            os.path.join(analysis_dir, "recommendations.txt"),
            "\n".join(result["recommendations"]) + "\n",
        )
