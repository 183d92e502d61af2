"""Aggregation of benchmark records into tables and a chart.

Produces the per-condition summary (mean/std of accuracy and F-measure
over repeats), the found-architecture tables, and a static SVG bar chart
of mean accuracy per algorithm.
"""

import csv
from collections import defaultdict

import numpy as np


def split_records(records):
    """(clean, failed) record lists."""
    clean = [r for r in records if not r.error]
    failed = [r for r in records if r.error]
    return clean, failed


def group_scores(records):
    """{(algorithm, rate): {"accuracy": [...], "f_measure": [...]}}
    over repeats, error records excluded."""
    groups = defaultdict(lambda: {"accuracy": [], "f_measure": []})
    for r in records:
        if r.error:
            continue
        cell = groups[(r.algorithm, r.missing_rate)]
        cell["accuracy"].append(r.accuracy)
        cell["f_measure"].append(r.f_measure)
    return dict(groups)


def algorithms_in(records):
    seen = []
    for r in records:
        if r.algorithm not in seen:
            seen.append(r.algorithm)
    return seen


def rates_in(records):
    seen = []
    for r in records:
        if r.missing_rate not in seen:
            seen.append(r.missing_rate)
    return sorted(seen)


def summary_rows(records):
    """Paper-shaped summary: one row per (rate, algorithm) with
    Mean/Std columns for both metrics."""
    groups = group_scores(records)
    rows = []
    for rate in rates_in(records):
        for alg in algorithms_in(records):
            cell = groups.get((alg, rate))
            if not cell:
                continue
            acc = np.array(cell["accuracy"])
            f1 = np.array(cell["f_measure"])
            rows.append({
                "missing_rate": rate,
                "algorithm": alg,
                "accuracy_mean": float(acc.mean()),
                "accuracy_std": float(acc.std()),
                "f_measure_mean": float(f1.mean()),
                "f_measure_std": float(f1.std()),
                "repeats": acc.size,
            })
    return rows


def write_summary_csv(path, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["missing_rate", "algorithm",
                         "accuracy_mean", "accuracy_std",
                         "f_measure_mean", "f_measure_std", "repeats"])
        for row in rows:
            writer.writerow([
                row["missing_rate"], row["algorithm"],
                f"{row['accuracy_mean']:.2f}", f"{row['accuracy_std']:.2f}",
                f"{row['f_measure_mean']:.2f}",
                f"{row['f_measure_std']:.2f}", row["repeats"]])


def best_architectures(records):
    """{rate: [(algorithm, structure, learning_rate, solver_name)]} using
    each cell's lowest-fitness repeat."""
    best = {}
    for r in records:
        if r.error:
            continue
        key = (r.algorithm, r.missing_rate)
        if key not in best or r.fitness < best[key].fitness:
            best[key] = r
    tables = defaultdict(list)
    for (alg, rate), r in sorted(best.items(),
                                 key=lambda kv: (kv[0][1], kv[0][0])):
        arch = r.architecture
        tables[rate].append((
            alg,
            str(arch.get("hidden_layer_sizes", [])),
            arch.get("learning_rate"),
            arch.get("solver_name"),
        ))
    return dict(tables)


def write_architecture_csv(path, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["algorithm", "structure", "learning_rate",
                         "solver"])
        for alg, structure, lr, solver in rows:
            lr_text = "" if lr is None else f"{lr:.4f}"
            writer.writerow([alg, structure, lr_text, solver])


def _svg_escape(text):
    return (str(text).replace("&", "&amp;").replace("<", "&lt;")
            .replace(">", "&gt;"))


def accuracy_bar_chart(records, width=640, height=360):
    """Static SVG: one bar per algorithm, height = mean accuracy over
    every clean record of that algorithm."""
    algs = algorithms_in(records)
    means = []
    for alg in algs:
        accs = [r.accuracy for r in records
                if r.algorithm == alg and not r.error]
        means.append(float(np.mean(accs)) if accs else 0.0)

    margin = 50
    plot_w = width - 2 * margin
    plot_h = height - 2 * margin
    n = max(len(algs), 1)
    slot = plot_w / n
    bar_w = slot * 0.6

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<line x1="{margin}" y1="{height - margin}" '
        f'x2="{width - margin}" y2="{height - margin}" stroke="black"/>',
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" '
        f'y2="{height - margin}" stroke="black"/>',
        f'<text x="{margin - 40}" y="{margin - 10}" font-size="12">'
        f'accuracy %</text>',
    ]
    for tick in (0, 25, 50, 75, 100):
        y = height - margin - plot_h * tick / 100.0
        parts.append(f'<text x="{margin - 35}" y="{y + 4}" '
                     f'font-size="10">{tick}</text>')
        parts.append(f'<line x1="{margin - 4}" y1="{y}" x2="{margin}" '
                     f'y2="{y}" stroke="black"/>')
    for i, (alg, mean) in enumerate(zip(algs, means)):
        x = margin + i * slot + (slot - bar_w) / 2
        bar_h = plot_h * max(0.0, min(mean, 100.0)) / 100.0
        y = height - margin - bar_h
        parts.append(
            f'<rect class="bar" x="{x:.1f}" y="{y:.1f}" '
            f'width="{bar_w:.1f}" height="{bar_h:.1f}" fill="#4878a8"/>')
        parts.append(
            f'<text x="{x + bar_w / 2:.1f}" y="{height - margin + 14}" '
            f'font-size="10" text-anchor="middle">'
            f'{_svg_escape(alg)}</text>')
        parts.append(
            f'<text x="{x + bar_w / 2:.1f}" y="{y - 4:.1f}" '
            f'font-size="10" text-anchor="middle">{mean:.1f}</text>')
    parts.append("</svg>")
    return "\n".join(parts)
