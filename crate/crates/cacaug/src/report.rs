//! Benchmark CSV rows and the JSON form of the verification report.

use crate::bounds::VerificationReport;

pub const BENCH_HEADER: &str = "instance,n,t,links,cuts,method,cost,opt,ratio,wall_ms,seed";

#[derive(Debug, Clone)]
pub struct BenchRow {
    pub instance: String,
    pub node_count: usize,
    pub terminal_count: usize,
    pub link_count: usize,
    pub cut_count: usize,
    pub method: String,
    pub cost: usize,
    pub optimum: Option<usize>,
    /// Not populated in reproducible mode (`--no-times`).
    pub wall_ms: Option<u128>,
    pub seed: u64,
}

impl BenchRow {
    pub fn to_csv(&self) -> String {
        let opt = self
            .optimum
            .map(|o| o.to_string())
            .unwrap_or_default();
        let ratio = self
            .optimum
            .map(|o| format!("{:.4}", self.cost as f64 / o as f64))
            .unwrap_or_default();
        let wall = self.wall_ms.map(|w| w.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.instance,
            self.node_count,
            self.terminal_count,
            self.link_count,
            self.cut_count,
            self.method,
            self.cost,
            opt,
            ratio,
            wall,
            self.seed
        )
    }
}

fn json_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

fn json_f64(x: f64) -> String {
    if x.is_finite() {
        // Shortest round-trip formatting keeps output deterministic.
        format!("{x}")
    } else {
        "null".into()
    }
}

/// Deterministic JSON rendering of the full verification report.
pub fn verification_json(report: &VerificationReport) -> String {
    let mut out = String::from("{\n");
    out.push_str(&format!("  \"rho\": {},\n", json_f64(report.rho)));
    out.push_str(&format!("  \"p_star\": {},\n", json_f64(report.p_star)));
    out.push_str("  \"h_hat\": [");
    for (i, v) in report.h_hat_first_eight.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push_str(&json_f64(*v));
    }
    out.push_str("],\n");
    out.push_str(&format!(
        "  \"claim_max_argmax\": [{}, {}, {}, {}],\n",
        report.claim_max_argmax[0],
        report.claim_max_argmax[1],
        report.claim_max_argmax[2],
        report.claim_max_argmax[3]
    ));
    out.push_str(&format!("  \"all_pass\": {},\n", report.all_pass()));
    out.push_str("  \"checks\": [\n");
    for (i, check) in report.checks.iter().enumerate() {
        out.push_str(&format!(
            "    {{\"name\": \"{}\", \"pass\": {}, \"residual\": {}, \"detail\": \"{}\"}}{}\n",
            json_escape(&check.name),
            check.pass,
            json_f64(check.residual),
            json_escape(&check.detail),
            if i + 1 < report.checks.len() { "," } else { "" }
        ));
    }
    out.push_str("  ]\n}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_row_with_and_without_optimum() {
        let mut row = BenchRow {
            instance: "a.cacap".into(),
            node_count: 5,
            terminal_count: 4,
            link_count: 3,
            cut_count: 7,
            method: "irr".into(),
            cost: 3,
            optimum: Some(2),
            wall_ms: None,
            seed: 9,
        };
        assert_eq!(row.to_csv(), "a.cacap,5,4,3,7,irr,3,2,1.5000,,9");
        row.optimum = None;
        row.wall_ms = Some(12);
        assert_eq!(row.to_csv(), "a.cacap,5,4,3,7,irr,3,,,12,9");
    }

    #[test]
    fn json_is_parseable_shape() {
        let report = crate::bounds::run_full_verification(1e-3, 32, 50, 1);
        let json = verification_json(&report);
        assert!(json.contains("\"rho\""));
        assert!(json.contains("\"checks\""));
        assert!(json.trim_end().ends_with('}'));
    }
}
