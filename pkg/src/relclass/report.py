"""Tables and figures for search and catalog output.

Figures are written next to the tables they summarize, with the same stem.
The Agg backend is forced so this works headless.
"""

from __future__ import annotations

from collections import Counter
from pathlib import Path
from typing import Dict, Optional, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from . import lp_bounds as LP  # noqa: E402
from . import search as S  # noqa: E402

RC = {
    "font.size": 9,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "savefig.dpi": 150,
    "savefig.bbox": "tight",
}


def _save(fig, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_scenario_counts(reports: Dict[tuple, S.ScenarioReport], path) -> Path:
    """Bar chart of surviving pairs per (d, g, g') scenario."""
    keys = sorted(reports)
    n = [len(reports[k].results) for k in keys]
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(max(4.0, 0.22 * len(keys)), 3.0))
        colors = ["C0" if v else "0.7" for v in n]
        ax.bar(range(len(keys)), n, color=colors)
        for i, v in enumerate(n):
            ax.text(i, v, str(v), ha="center", va="bottom", fontsize=5)
        ax.set_xticks(range(len(keys)))
        ax.set_xticklabels(["%d,%d,%d" % k[1:] for k in keys], rotation=90, fontsize=6)
        ax.set_xlabel("(d, g, g')")
        ax.set_ylabel("pairs (C, A)")
        return _save(fig, Path(path))


def plot_order_one_excess(rows: Sequence[dict], path) -> Path:
    """Excess over the per-dimension budget for each order-one class."""
    from fractions import Fraction

    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(5.0, 3.0))
        ex = [float(Fraction(r["excess"])) for r in rows]
        ax.bar(range(len(rows)), ex, color=["C3" if e > 0 else "C0" for e in ex])
        ax.axhline(0, color="k", lw=0.6)
        ax.set_xticks(range(len(rows)))
        ax.set_xticklabels([r["label"] for r in rows], rotation=90, fontsize=6)
        ax.set_ylabel("excess")
        return _save(fig, Path(path))


def plot_bounds(q: int, path, g_max: int = 40) -> Path:
    """Linear point-count bounds against the tabulated maxima."""
    gs = list(range(1, g_max + 1))
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(4.5, 3.0))
        if q in LP.PUBLISHED_FIRST:
            s, c = LP.PUBLISHED_FIRST[q]
            ax.plot(gs, [float(s * g + c) for g in gs], "C0-", lw=1, label="linear bound")
        if q == 2:
            ax.plot(gs, [float(LP.refined_rhs(g)) for g in gs], "C1--", lw=1, label="refined rhs")
        tab = [g for g in gs if LP.has_static_bound(q, g)]
        if tab:
            ax.plot(tab, [LP.static_bound(q, g) for g in tab], "ko", ms=3, label="table")
        ax.set_xlabel("genus")
        ax.set_ylabel("#C(F_%d)" % q)
        ax.legend(frameon=False)
        return _save(fig, Path(path))


def write_search(reports: Dict[tuple, S.ScenarioReport], out_dir, stem: str = "geometric",
                 fmt: str = "csv", figures: bool = True) -> dict:
    """Write the pair table, a per-scenario summary, and (optionally) a figure."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = {"pairs": S.emit_tables(S.all_pairs(reports), out / f"{stem}.{fmt}", fmt)}
    written["summary"] = write_summary(reports, out / f"{stem}_summary.csv")
    if figures:
        written["figure"] = plot_scenario_counts(reports, out / f"{stem}.png")
    return written


def write_summary(reports: Dict[tuple, S.ScenarioReport], path) -> Path:
    import csv

    names = sorted({n for r in reports.values() for n in r.eliminated_by})
    cols = ["q", "d", "g", "gp", "pryms", "bases", "checked", "pairs", "curve_verified"] + names
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(cols)
        for k in sorted(reports):
            r = reports[k]
            st = Counter(p.status for p in r.results)
            w.writerow(list(k) + [r.n_pryms, r.n_bases, r.n_pairs_checked, len(r.results),
                                  st.get(S.CURVE_VERIFIED, 0)] + [r.eliminated_by.get(n, 0) for n in names])
    return Path(path)


def write_constant(results: Sequence[tuple], out_dir, fmt: str = "csv") -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return S.emit_tables(list(results), out / f"constant.{fmt}", fmt)


def write_catalog(rows: Sequence[dict], out_dir, fmt: str = "csv", figures: bool = True,
                  stem: str = "order_one") -> dict:
    import csv
    import json

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    p = out / f"{stem}.{fmt}"
    if fmt == "csv":
        with open(p, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(rows[0]) if rows else ["label"], lineterminator="\n")
            w.writeheader()
            w.writerows(rows)
    else:
        p.write_text(json.dumps(list(rows), indent=1))
    written = {"catalog": p}
    if figures and rows:
        written["figure"] = plot_order_one_excess(rows, out / f"{stem}.png")
    return written


def format_table(rows: Sequence[dict], cols: Optional[Sequence[str]] = None) -> str:
    """Plain fixed-width text table."""
    if not rows:
        return ""
    cols = list(cols or rows[0])
    w = {c: max(len(c), *(len(str(r.get(c, ""))) for r in rows)) for c in cols}
    lines = ["  ".join(c.rjust(w[c]) for c in cols)]
    for r in rows:
        lines.append("  ".join(str(r.get(c, "")).rjust(w[c]) for c in cols))
    return "\n".join(lines)
