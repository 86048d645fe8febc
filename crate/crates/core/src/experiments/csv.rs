//! Fixed-schema CSV output for sweep tables.

use std::fmt::Write as _;

use super::SweepRow;

pub const HEADER: &str = "axis_name,axis_value,L,M,B,alpha,d_M,d_V,sigma_s,sigma_n,c_prime,\
p_zd_analytic,p_zd_mc,p_zd_ci,p_wzd_analytic,p_wzd_mc,p_wzd_ci,p_d_analytic,p_d_mc,\
p_fa_analytic,p_fa_mc,trials,undefined_pwzd_trials,seed";

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// One CSV line (no trailing newline). Missing values are empty fields.
pub fn format_row(row: &SweepRow) -> String {
    let cfg = row.cfg();
    let pred = row.prediction();
    let s = &row.summary;
    let degrees = cfg.regular_degrees();
    let fields = [
        row.axis_name.clone(),
        row.axis_value.to_string(),
        cfg.l.to_string(),
        cfg.m.to_string(),
        cfg.block_len.to_string(),
        cfg.alpha.to_string(),
        opt(degrees.map(|d| d.1)),
        opt(degrees.map(|d| d.0)),
        cfg.sigma_s.to_string(),
        cfg.sigma_n.to_string(),
        opt(row.point.c_prime),
        opt(pred.map(|p| p.p_zd)),
        opt(s.p_zd.value),
        opt(s.p_zd.half_width()),
        opt(pred.and_then(|p| p.p_wzd)),
        opt(s.p_wzd.value),
        opt(s.p_wzd.half_width()),
        opt(pred.map(|p| p.p_d)),
        opt(s.p_d.value),
        opt(pred.and_then(|p| p.p_fa)),
        opt(s.p_fa.value),
        s.trials.to_string(),
        s.undefined_pwzd_trials.to_string(),
        cfg.seed.to_string(),
    ];
    fields.join(",")
}

/// Header plus one line per row, newline-terminated.
pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(out, "{}", format_row(r));
    }
    out
}
