//! Text, `key=value` and JSON renderings of a [`SchemeReport`].

use latcrypt_core::analysis::SchemeReport;
use serde_json::json;

/// `(key, value)` pairs in display order.
pub fn fields(r: &SchemeReport) -> Vec<(&'static str, String)> {
    let p = &r.params;
    vec![
        ("b", p.b.to_string()),
        ("n0", p.n0.to_string()),
        ("dv", p.dv.to_string()),
        ("q", p.q.to_string()),
        ("L", p.l.to_string()),
        ("d", p.d.to_string()),
        ("n", r.n.to_string()),
        ("k", r.k.to_string()),
        ("key_bits", r.key.total().to_string()),
        ("key_l1", r.key.l1.to_string()),
        ("key_l2", r.key.l2.to_string()),
        ("key_l3", r.key.l3.to_string()),
        ("key_l4", r.key.l4.to_string()),
        ("key_l2_overridden", r.key.l2_overridden.to_string()),
        ("rate_symbol", format!("{:.4}", r.rate_symbol)),
        ("rate_packed", format!("{:.4}", r.rate_packed)),
        ("expansion", format!("{}/{}", r.expansion.0, r.expansion.1)),
        ("expansion_value", format!("{:.4}", r.expansion_f64())),
        ("bruteforce_log2", format!("{:.2}", r.bruteforce.total())),
        ("bruteforce_rdf_log2", format!("{:.2}", r.bruteforce.rdf)),
        ("bruteforce_lfsr_log2", format!("{:.2}", r.bruteforce.lfsr)),
        ("bruteforce_control_log2", format!("{:.2}", r.bruteforce.control)),
        ("bruteforce_permutation_log2", format!("{:.2}", r.bruteforce.permutation)),
        ("differential_log2", format!("{:.2}", r.differential_seeds.total())),
        ("differential_first_stage_log2", format!("{:.2}", r.differential_seeds.first_stage)),
        ("differential_recovery_log2", format!("{:.2}", r.differential_seeds.recovery)),
        ("differential_rounds_log2", format!("{:.2}", r.differential_seeds.rounds)),
        ("differential_period_log2", format!("{:.2}", r.differential_period.total())),
        ("differential_period_rounds_log2", format!("{:.2}", r.differential_period.rounds)),
    ]
}

pub fn text(r: &SchemeReport) -> String {
    let p = &r.params;
    let mut out = String::new();
    let mut line = |label: &str, value: String| out.push_str(&format!("{label:<34}{value}\n"));
    line("parameters", format!("b={} n0={} dv={} q={} L={} d={}", p.b, p.n0, p.dv, p.q, p.l, p.d));
    line("lattice (k, n)", format!("({}, {})", r.k, r.n));
    line(
        "key size",
        format!(
            "{} bits (l1={} l2={}{} l3={} l4={})",
            r.key.total(),
            r.key.l1,
            r.key.l2,
            if r.key.l2_overridden { " [d overrides 7*l1]" } else { "" },
            r.key.l3,
            r.key.l4
        ),
    );
    line("information rate, log2(2L)", format!("{:.4}", r.rate_symbol));
    line("packed payload rate, log2(L)", format!("{:.4}", r.rate_packed));
    line("message expansion", format!("{}/{} = {:.4}", r.expansion.0, r.expansion.1, r.expansion_f64()));
    line(
        "brute force, log2",
        format!(
            "{:.2} (rdf {:.2} + lfsr {:.2} + control {:.2} + perm {:.2})",
            r.bruteforce.total(),
            r.bruteforce.rdf,
            r.bruteforce.lfsr,
            r.bruteforce.control,
            r.bruteforce.permutation
        ),
    );
    for (label, d) in [
        ("differential (N_p = 2^(v*g)), log2", &r.differential_seeds),
        ("differential (N_p = 2^g - 1), log2", &r.differential_period),
    ] {
        line(
            label,
            format!(
                "{:.2} (first {:.2}, recovery {:.2}, rounds {:.2})",
                d.total(),
                d.first_stage,
                d.recovery,
                d.rounds
            ),
        );
    }
    line("note", "attack terms are explicit expressions; O() constants differ".into());
    out
}

pub fn key_values(r: &SchemeReport) -> String {
    fields(r).into_iter().map(|(k, v)| format!("{k}={v}\n")).collect()
}

pub fn json_line(r: &SchemeReport) -> String {
    let p = &r.params;
    json!({
        "params": {"b": p.b, "n0": p.n0, "dv": p.dv, "q": p.q, "L": p.l, "d": p.d},
        "n": r.n,
        "k": r.k,
        "key_bits": r.key.total(),
        "key_terms": {"l1": r.key.l1, "l2": r.key.l2, "l3": r.key.l3, "l4": r.key.l4, "l2_overridden": r.key.l2_overridden},
        "rate_symbol": r.rate_symbol,
        "rate_packed": r.rate_packed,
        "expansion": {"num": r.expansion.0 as u64, "den": r.expansion.1 as u64, "value": r.expansion_f64()},
        "bruteforce_log2": r.bruteforce.total(),
        "differential_log2": r.differential_seeds.total(),
        "differential_period_log2": r.differential_period.total(),
    })
    .to_string()
}
