//! Standalone matplotlib script generation. The CSV stays the data
//! contract; scripts only read it and draw the standard layouts: a
//! two-panel gain/angle figure for `run`, a single panel for sweeps.

use std::path::Path;

/// Script for a `run` CSV: mean normalized gain and mean squared angle
/// versus iteration index, one line per algorithm.
pub fn run_plot_script(csv_path: &Path) -> String {
    let csv = csv_path.display();
    format!(
        r#"#!/usr/bin/env python3
"""Plot a beam-alignment run: gain and squared-angle curves per algorithm."""
import csv
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

CSV_PATH = "{csv}"

series = defaultdict(lambda: ([], [], []))
with open(CSV_PATH, newline="") as fh:
    for row in csv.DictReader(fh):
        ks, gains, angles = series[row["algorithm"]]
        ks.append(int(row["k"]))
        gains.append(float(row["mean_norm_gain"]))
        angles.append(float(row["mean_angle_sq"]))

fig, (ax_gain, ax_angle) = plt.subplots(1, 2, figsize=(11, 4.2))
for name, (ks, gains, angles) in series.items():
    ax_gain.plot(ks, gains, label=name)
    ax_angle.semilogy(ks, angles, label=name)
ax_gain.set_xlabel("iteration k")
ax_gain.set_ylabel("mean |z* H f|^2 / ||H||_2^2")
ax_gain.set_ylim(0.0, 1.02)
ax_gain.grid(True, alpha=0.3)
ax_angle.set_xlabel("iteration k")
ax_angle.set_ylabel("mean |phi_k|^2")
ax_angle.grid(True, alpha=0.3)
ax_gain.legend(fontsize=8)
fig.tight_layout()
out = CSV_PATH.rsplit(".", 1)[0] + ".png"
fig.savefig(out, dpi=150)
print(f"wrote {{out}}")
"#
    )
}

/// Script for a sweep CSV: final-iteration gain versus the swept parameter.
pub fn sweep_plot_script(csv_path: &Path, param_name: &str) -> String {
    let csv = csv_path.display();
    format!(
        r#"#!/usr/bin/env python3
"""Plot a beam-alignment sweep: final-iteration gain per algorithm."""
import csv
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

CSV_PATH = "{csv}"
PARAM = "{param_name}"

series = defaultdict(lambda: ([], []))
with open(CSV_PATH, newline="") as fh:
    for row in csv.DictReader(fh):
        xs, gains = series[row["algorithm"]]
        xs.append(float(row[PARAM]))
        gains.append(float(row["mean_norm_gain"]))

fig, ax = plt.subplots(figsize=(6.5, 4.2))
for name, (xs, gains) in series.items():
    ax.plot(xs, gains, marker="o", label=name)
ax.set_xlabel(PARAM)
ax.set_ylabel("mean |z* H f|^2 / ||H||_2^2")
ax.grid(True, alpha=0.3)
ax.legend(fontsize=8)
fig.tight_layout()
out = CSV_PATH.rsplit(".", 1)[0] + ".png"
fig.savefig(out, dpi=150)
print(f"wrote {{out}}")
"#
    )
}

pub fn emit_plot_script(script: &str, path: &Path) -> std::io::Result<()> {
    std::fs::write(path, script)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn script_generation_is_idempotent() {
        let p = Path::new("results.csv");
        assert_eq!(run_plot_script(p), run_plot_script(p));
        assert_eq!(
            sweep_plot_script(p, "m_t"),
            sweep_plot_script(p, "m_t")
        );
        assert!(run_plot_script(p).contains("results.csv"));
        assert!(sweep_plot_script(p, "snr_db").contains("snr_db"));
    }
}
