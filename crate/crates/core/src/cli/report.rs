//! Plain-text reports and CSV tables.
//!
//! Every number goes through [`num`], so output is byte-identical across runs.
//!
//! Bound report, one `key: value` per line:
//! `table`, `class`, `ell`, `eps`, `N`, `method`, `root`, `bound (nats)`,
//! `bound (bits)` (with `--bits`), `rigorous geometry`, `certified`, then `chain:` with
//! one indented step per line.
//!
//! Free-arc report, one block per curved cap: `cap`, `eps`, `p+`, `p-`,
//! `position step`, `angle step`, `samples`, `rigorous`, `result`, then `witnesses:`
//! with counts per condition, listing `condition r theta reason` for the first few.

use std::fmt::Write as _;

use num_bigint::BigUint;

use crate::coding::log_biguint;
use crate::freearc::{FreeArcCertificate, FreeCondition, Witness};
use crate::geometry::{PhasePoint, Table, TableClass};
use crate::sft::EntropyCertificate;

/// Witness lines printed per cap and condition; the totals are always reported.
pub const MAX_WITNESS_LINES: usize = 10;

/// `x` with 12 significant digits, trailing zeros removed.
pub fn num(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".into();
    }
    let e = x.abs().log10().floor() as i32;
    if (-5..15).contains(&e) {
        let digits = (11 - e).max(0) as usize;
        trim(format!("{x:.digits$}"))
    } else {
        let s = format!("{x:.11e}");
        let (mantissa, exp) = s.split_once('e').expect("exponent form");
        format!("{}e{exp}", trim(mantissa.to_string()))
    }
}

fn trim(mut s: String) -> String {
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    s
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "none".into(), num)
}

/// Human form of the certified inequality, e.g. `h ≥ ½ log 2`.
pub fn certified_line(cert: &EntropyCertificate) -> String {
    let Some(root) = cert.root.filter(|_| cert.certified) else {
        return "no".into();
    };
    let log = if root == 2.0 { "log 2".to_string() } else { format!("log {}", num(root)) };
    match cert.class {
        TableClass::Full => format!("h ≥ {log}"),
        TableClass::Semistadium => format!("h ≥ ½ {log}"),
    }
}

pub fn bound_report(description: &str, cert: &EntropyCertificate, bits: bool) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "table: {description}");
    let _ = writeln!(s, "class: {}", cert.class);
    let _ = writeln!(s, "ell: {}", num(cert.ell));
    let _ = writeln!(s, "eps: {}", num(cert.eps));
    let _ = writeln!(s, "N: {}", cert.n);
    let _ = writeln!(s, "method: {}", cert.method);
    let _ = writeln!(s, "root: {}", opt(cert.root));
    let _ = writeln!(s, "bound (nats): {}", num(cert.bound));
    if bits {
        let _ = writeln!(s, "bound (bits): {}", num(cert.bound_bits()));
    }
    let _ = writeln!(s, "rigorous geometry: {}", cert.rigorous_geometry);
    let _ = writeln!(s, "certified: {}", certified_line(cert));
    let _ = writeln!(s, "chain:");
    for step in &cert.chain {
        let _ = writeln!(s, "  {step}");
    }
    s
}

pub fn free_arc_report(certs: &[FreeArcCertificate]) -> String {
    let mut s = String::new();
    for (i, c) in certs.iter().enumerate() {
        if i > 0 {
            s.push('\n');
        }
        let _ = writeln!(s, "cap: {}", c.arc);
        let _ = writeln!(s, "eps: {}", num(c.eps));
        let _ = writeln!(s, "p+: {}", opt(c.p_plus));
        let _ = writeln!(s, "p-: {}", opt(c.p_minus));
        let _ = writeln!(s, "position step: {}", num(c.position_grid_step));
        let _ = writeln!(s, "angle step: {}", num(c.angle_grid_step));
        let _ = writeln!(s, "samples: {}", c.samples_checked);
        let _ = writeln!(s, "rigorous: {}", c.rigorous);
        let _ = writeln!(s, "result: {}", if c.passed() { "pass" } else { "fail" });
        let mut groups: Vec<(FreeCondition, Vec<&Witness>)> = Vec::new();
        for w in &c.failures {
            match groups.last_mut() {
                Some((cond, ws)) if *cond == w.condition => ws.push(w),
                _ => groups.push((w.condition, vec![w])),
            }
        }
        let counts: Vec<String> = groups.iter().map(|(cond, ws)| format!("{cond} {}", ws.len())).collect();
        if counts.is_empty() {
            let _ = writeln!(s, "witnesses: 0");
        } else {
            let _ = writeln!(s, "witnesses: {} ({})", c.failures.len(), counts.join(", "));
        }
        for (_, ws) in &groups {
            for w in ws.iter().take(MAX_WITNESS_LINES) {
                let _ = writeln!(s, "  {} r={} theta={} {}", w.condition, num(w.r), num(w.theta), w.reason);
            }
            if ws.len() > MAX_WITNESS_LINES {
                let _ = writeln!(s, "  ... {} more", ws.len() - MAX_WITNESS_LINES);
            }
        }
    }
    s
}

/// Orbit CSV: `step,arc_id,r,phi,x,y`.
pub fn orbit_csv(table: &Table, orbit: &[PhasePoint]) -> String {
    let mut s = String::from("step,arc_id,r,phi,x,y\n");
    for (i, p) in orbit.iter().enumerate() {
        let q = table.point(p.arc, p.r);
        let _ = writeln!(s, "{i},{},{},{},{},{}", p.arc, num(p.r), num(p.phi), num(q.x), num(q.y));
    }
    s
}

/// Word-count CSV: `n,a_n,rate` with `rate = log(a_n) / n`, halved for semistadia.
pub fn count_csv(counts: &[(usize, BigUint)], class: TableClass) -> String {
    let mut s = String::from("n,a_n,rate\n");
    for (n, a) in counts {
        let mut rate = log_biguint(a) / *n as f64;
        if class == TableClass::Semistadium {
            rate *= 0.5;
        }
        let _ = writeln!(s, "{n},{a},{}", num(rate));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(num(std::f64::consts::LN_2), "0.69314718056");
        assert_eq!(num(2.0), "2");
        assert_eq!(num(-0.0), "0");
        assert_eq!(num(1234.5), "1234.5");
        assert_eq!(num(std::f64::consts::PI * 1e-9), "3.14159265359e-9");
        assert_eq!(num(9.999_999_999_999_9), "10");
        assert_eq!(num(-0.125), "-0.125");
        assert_eq!(num(6.02e23), "6.02e23");
    }

    #[test]
    fn count_rows() {
        let rows: Vec<_> = (1..=3).map(|n| (n, crate::coding::count_words(1, n))).collect();
        let csv = count_csv(&rows, TableClass::Full);
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "n,a_n,rate");
        assert!(lines[1].starts_with("1,3,"));
        assert!(lines[2].starts_with("2,5,"));
        assert!(lines[3].starts_with("3,11,"));
    }
}
