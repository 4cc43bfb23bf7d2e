"""Figure rendering for sweep results, written to files next to the CSV."""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .errors import ValidationError


def _group(records, key):
    grouped = {}
    for rec in records:
        grouped.setdefault(key(rec), []).append(rec)
    return grouped


def plot_degradation_sweep(records, path):
    """SDR vs degradation level: degraded in blue, corrected in red,
    median over seeds with min-max spread."""
    if not records:
        raise ValidationError("no records to plot")
    grouped = _group(records, lambda r: r.degradation_fraction)
    fractions = sorted(grouped)
    deg = [[r.sdr_degraded_db for r in grouped[f]] for f in fractions]
    cor = [[r.sdr_corrected_db for r in grouped[f]] for f in fractions]

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for values, color, label in ((deg, "tab:blue", "degraded"),
                                 (cor, "tab:red", "corrected")):
        med = [np.median(v) for v in values]
        lo = [np.min(v) for v in values]
        hi = [np.max(v) for v in values]
        ax.plot(fractions, med, color=color, marker="o", label=label)
        ax.fill_between(fractions, lo, hi, color=color, alpha=0.2, lw=0)
    ax.set_xlabel("degradation fraction")
    ax.set_ylabel("SDR (dB)")
    ax.set_title(f"Restoration vs degradation (N = {records[0].n_passes})")
    ax.grid(True, linestyle=":")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_n_sweep(records, path):
    """SDR vs re-synthesis count on a log axis, with the degraded level
    shown as a reference line."""
    if not records:
        raise ValidationError("no records to plot")
    grouped = _group(records, lambda r: r.n_passes)
    n_values = sorted(grouped)
    cor_med = [np.median([r.sdr_corrected_db for r in grouped[n]]) for n in n_values]
    cor_lo = [np.min([r.sdr_corrected_db for r in grouped[n]]) for n in n_values]
    cor_hi = [np.max([r.sdr_corrected_db for r in grouped[n]]) for n in n_values]
    deg_med = np.median([r.sdr_degraded_db for r in records])

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(n_values, cor_med, color="tab:red", marker="o", label="corrected")
    ax.fill_between(n_values, cor_lo, cor_hi, color="tab:red", alpha=0.2, lw=0)
    ax.axhline(deg_med, color="tab:blue", linestyle="--", label="degraded")
    ax.set_xscale("log")
    ax.set_xlabel("re-synthesis passes N")
    ax.set_ylabel("SDR (dB)")
    fraction = records[0].degradation_fraction
    ax.set_title(f"Restoration vs N ({fraction:.0%} degradation)")
    ax.grid(True, linestyle=":", which="both")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
