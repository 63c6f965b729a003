//! Complexity and feedback cost table for the configured algorithms.

use crate::harness::SimConfig;
use beamalign_core::metrics::cost_report;

pub fn cost_table(config: &SimConfig) -> String {
    let mut rows: Vec<(String, String, String)> = vec![(
        "algorithm".into(),
        "computational count".into(),
        "feedback bits".into(),
    )];
    for kind in &config.algorithms {
        let report = cost_report(
            kind,
            config.k_max,
            config.channel.m_r,
            config.channel.m_t,
            config.b_bits,
        );
        rows.push((
            report.algorithm.to_string(),
            report.flops_order,
            report.feedback_bits.to_string(),
        ));
    }
    let widths = (
        rows.iter().map(|r| r.0.len()).max().unwrap_or(0),
        rows.iter().map(|r| r.1.len()).max().unwrap_or(0),
        rows.iter().map(|r| r.2.len()).max().unwrap_or(0),
    );
    let mut out = String::new();
    for (i, (a, b, c)) in rows.iter().enumerate() {
        out.push_str(&format!(
            "{:<w0$}  {:<w1$}  {:>w2$}\n",
            a,
            b,
            c,
            w0 = widths.0,
            w1 = widths.1,
            w2 = widths.2
        ));
        if i == 0 {
            out.push_str(&format!(
                "{}\n",
                "-".repeat(widths.0 + widths.1 + widths.2 + 4)
            ));
        }
    }
    out.push_str(&format!(
        "(M = max(M_r, M_t) = {}, B = {} bits per complex element, k_max = {})\n",
        config.channel.m_r.max(config.channel.m_t),
        config.b_bits,
        config.k_max
    ));
    out
}
