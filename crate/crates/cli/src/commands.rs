use std::path::PathBuf;
use std::time::Duration;

use anyhow::{bail, Result};
use biharmonic::crystals::{
    conjecture_scan, crystal_decompositions, crystals_up_to, equivalence_check, generate_all_crystals, CrystalRecord,
};
use biharmonic::divisor_means::{divisor_means, enumerate, sum_identity_check, MeanKind};
use biharmonic::formal::{verify_geo2_formal, verify_geo2_numeric, ExponentPattern};
use biharmonic::oeis::{cross_check, BfileCache, CrossCheckReport, Offline, Transport, Verdict};
use biharmonic::recurrences::{
    a_on_conic_check, conic_maps_check, diophantine_completeness, theta_u_link, u_seq, u_seq_order3, ConicSamples,
};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::output::{Report, Status, Table};

pub fn means(n: u64) -> Result<Report> {
    let rec = divisor_means(n)?;
    let results = serde_json::to_value(&rec)?;
    let mut table = Table::new(&["field", "value"]);
    if let Value::Object(map) = &results {
        for (k, v) in map {
            let cell = match v {
                Value::String(s) => s.clone(),
                Value::Null => String::new(),
                other => other.to_string(),
            };
            table.push(vec![k.clone(), cell]);
        }
    }
    let summary = vec![("n", n.to_string()), ("B", rec.biharmonic.to_string())];
    Ok(Report { results, summary, table, status: Status::Ok })
}

pub struct OeisConfig {
    pub cache_dir: PathBuf,
    pub network: bool,
    pub timeout: Duration,
}

fn oeis_ids(kind: MeanKind) -> &'static str {
    match kind {
        MeanKind::Arithmetic => "A003601",
        MeanKind::Harmonic => "A001599",
        MeanKind::Contraharmonic => "A020487",
        MeanKind::Biharmonic => "A210494",
    }
}

fn check_with<T: Transport>(cache: &BfileCache<T>, checks: &[(&str, Vec<BigInt>)]) -> Result<Vec<CrossCheckReport>> {
    checks.iter().map(|(id, v)| Ok(cross_check(id, v, 1, Some(cache))?)).collect()
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "pass",
        Verdict::Fail => "fail",
        Verdict::InsufficientOverlap => "insufficient-overlap",
    }
}

pub fn enumerate_cmd(kind: MeanKind, limit: u64, oeis: Option<&OeisConfig>) -> Result<Report> {
    let e = enumerate(kind, limit)?;
    let mut table =
        if kind == MeanKind::Harmonic { Table::new(&["index", "n", "H"]) } else { Table::new(&["index", "n"]) };
    for (i, n) in e.terms.iter().enumerate() {
        let mut row = vec![(i + 1).to_string(), n.to_string()];
        if let Some(h) = &e.harmonic_values {
            row.push(h[i].to_string());
        }
        table.push(row);
    }
    let mut summary = vec![("count", e.terms.len().to_string())];
    let mut status = Status::Ok;
    let mut reports = Vec::new();
    if let Some(cfg) = oeis {
        let mut checks = vec![(oeis_ids(kind), e.terms.iter().map(|&t| BigInt::from(t)).collect::<Vec<_>>())];
        if let Some(h) = &e.harmonic_values {
            checks.push(("A001600", h.iter().map(|&t| BigInt::from(t)).collect()));
        }
        reports = if cfg.network {
            let transport = biharmonic::oeis::HttpTransport::new(cfg.timeout);
            check_with(&BfileCache::new(&cfg.cache_dir, transport), &checks)?
        } else {
            check_with(&BfileCache::new(&cfg.cache_dir, Offline), &checks)?
        };
        for r in &reports {
            summary.push((
                "oeis",
                format!("{} {} ({} compared, {:?})", r.id, verdict_name(r.verdict), r.compared, r.source),
            ));
            if r.verdict == Verdict::Fail {
                status = Status::VerificationFailed;
            }
        }
    }
    let mut results = serde_json::to_value(&e)?;
    results["count"] = json!(e.terms.len());
    if oeis.is_some() {
        results["oeis"] = serde_json::to_value(&reports)?;
    }
    Ok(Report { results, summary, table, status })
}

fn crystal_table(records: &[CrystalRecord]) -> Table {
    let mut t = Table::new(&["N", "a", "b", "w", "index"]);
    for r in records {
        t.push(vec![
            r.n.to_string(),
            r.a.to_string(),
            r.b.to_string(),
            r.w.to_string(),
            r.index.map(|i| i.to_string()).unwrap_or_default(),
        ]);
    }
    t
}

pub fn crystals(w: Option<u64>, limit: u64, verify: bool) -> Result<Report> {
    let (records, mut results) = match w {
        Some(w) => {
            let recs = crystals_up_to(w, limit);
            let v = json!({ "w": w, "limit": limit, "records": recs });
            (recs, v)
        }
        None => {
            let cat = generate_all_crystals(limit);
            let v = serde_json::to_value(&cat)?;
            (cat.records, v)
        }
    };
    let mut summary = vec![("count", records.len().to_string())];
    if let Some(m) = results.get("monotone") {
        summary.push(("monotone", m.to_string()));
    }
    let mut status = Status::Ok;
    if verify {
        let mut failures = Vec::new();
        for r in &records {
            let n = u64::try_from(&r.n)?;
            let found = crystal_decompositions(n)?.iter().any(|d| d.key() == r.key());
            if !found {
                failures.push(r.n.to_string());
            }
        }
        summary.push(("verified", (failures.is_empty()).to_string()));
        results["verified"] = json!(failures.is_empty());
        results["unconfirmed"] = json!(failures);
        if !failures.is_empty() {
            status = Status::VerificationFailed;
        }
    }
    Ok(Report { results, summary, table: crystal_table(&records), status })
}

struct Verification {
    target: &'static str,
    checked: usize,
    first_failure: Option<String>,
    table: Table,
    extra: Vec<(&'static str, String)>,
}

impl Verification {
    fn new(target: &'static str, columns: &[&'static str]) -> Self {
        Verification { target, checked: 0, first_failure: None, table: Table::new(columns), extra: Vec::new() }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.first_failure.is_none() {
            self.first_failure = Some(what());
        }
    }

    fn into_report(self) -> Report {
        let passed = self.first_failure.is_none();
        let mut summary = vec![
            ("target", self.target.to_string()),
            ("passed", passed.to_string()),
            ("checked", self.checked.to_string()),
        ];
        if let Some(f) = &self.first_failure {
            summary.push(("first failure", f.clone()));
        }
        summary.extend(self.extra);
        let results = json!({
            "target": self.target,
            "passed": passed,
            "checked": self.checked,
            "first_failure": self.first_failure,
        });
        let status = if passed { Status::Ok } else { Status::VerificationFailed };
        Report { results, summary, table: self.table, status }
    }
}

pub struct Geo2Args {
    pub k_max: usize,
    pub e_max: u32,
    pub pattern: Option<ExponentPattern>,
    pub numeric: bool,
    pub trials: usize,
    pub seed: u64,
}

pub fn verify_geo2(args: &Geo2Args) -> Result<Report> {
    let patterns = match &args.pattern {
        Some(p) => vec![p.clone()],
        None => ExponentPattern::all_up_to(args.k_max, args.e_max),
    };
    let mut v = Verification::new("geo2", &["pattern", "divisors", "formal", "structured_passed", "control_failed"]);
    for p in &patterns {
        let f = verify_geo2_formal(p)?;
        let shown = p.exponents().iter().map(u32::to_string).collect::<Vec<_>>().join(",");
        v.record(f.holds(), || format!("formal identity fails for pattern {shown}"));
        let (mut passed, mut control) = (String::new(), String::new());
        if args.numeric {
            let n = verify_geo2_numeric(p, args.trials, args.seed)?;
            v.record(n.holds(), || {
                n.first_failure.clone().unwrap_or_else(|| format!("no failing control for pattern {shown}"))
            });
            passed = format!("{}/{}", n.structured_passed, n.trials);
            control =
                if n.control_applicable { format!("{}/{}", n.unstructured_failed, n.trials) } else { "n/a".into() };
        }
        v.table.push(vec![shown, f.divisors.to_string(), f.holds().to_string(), passed, control]);
    }
    Ok(v.into_report())
}

pub fn verify_theta(w_max: u64, n_max: usize) -> Result<Report> {
    let mut v = Verification::new("theta", &["w", "theta_link", "order3", "on_C"]);
    for w in 1..=w_max {
        let link = theta_u_link(w, n_max)?;
        let order3 = u_seq(w, n_max) == u_seq_order3(w, n_max);
        let on_c = a_on_conic_check(w, n_max)?;
        v.record(link, || format!("θ(a_n) ≠ 2u_n − 1 for w = {w}"));
        v.record(order3, || format!("order-3 recurrence differs for w = {w}"));
        v.record(on_c.holds(), || on_c.first_failure.clone().unwrap_or_default());
        v.table.push(vec![w.to_string(), link.to_string(), order3.to_string(), on_c.holds().to_string()]);
    }
    Ok(v.into_report())
}

pub fn verify_conics(w_max: u64, n_max: usize) -> Result<Report> {
    let mut v = Verification::new("conics", &["w", "checked", "passed"]);
    for w in 1..=w_max {
        let rep = conic_maps_check(&ConicSamples::consecutive(w, n_max)?)?;
        v.record(rep.holds(), || rep.first_failure.clone().unwrap_or_default());
        v.table.push(vec![w.to_string(), rep.checked.to_string(), rep.holds().to_string()]);
    }
    Ok(v.into_report())
}

pub fn verify_diophantine(ws: impl Iterator<Item = u64>, bound: u64) -> Result<Report> {
    if bound == 0 || bound >= 1 << 40 {
        bail!("--bound must be in 1..2^40");
    }
    let mut v = Verification::new("diophantine", &["w", "solutions", "recurrence_pairs", "passed", "boundary_pairs"]);
    for w in ws {
        if w == 0 || w >= 1 << 20 {
            bail!("w must be in 1..2^20");
        }
        let rep = diophantine_completeness(w, bound);
        v.record(rep.holds(), || format!("w = {w}: unexplained {:?}, missed {:?}", rep.unexplained, rep.missed));
        let boundary = rep.boundary_pairs.iter().map(|(x, y)| format!("({x},{y})")).collect::<Vec<_>>().join(" ");
        v.table.push(vec![
            w.to_string(),
            rep.solutions.to_string(),
            rep.recurrence_pairs.to_string(),
            rep.holds().to_string(),
            boundary,
        ]);
    }
    Ok(v.into_report())
}

pub fn verify_sum_identity(n_max: u64) -> Result<Report> {
    let mut v = Verification::new("sum-identity", &["n", "lhs", "rhs"]);
    for n in 2..=n_max {
        let s = sum_identity_check(n)?;
        v.record(s.equal, || format!("n = {n}: {} ≠ {}", s.lhs, s.rhs));
        if !s.equal {
            v.table.push(vec![n.to_string(), s.lhs.to_string(), s.rhs.to_string()]);
        }
    }
    Ok(v.into_report())
}

pub fn verify_equivalence(max: u64) -> Result<Report> {
    let mut v = Verification::new("equivalence", &["a", "b", "B", "F", "P", "Q"]);
    let mut integral = 0;
    for a in (1..=max).step_by(2) {
        for b in (1..=a).step_by(2) {
            let e = equivalence_check(a, b);
            v.record(e.holds(), || format!("({a}, {b}): integrality {:?}, links {}", e.integral, e.links_hold));
            if e.integral[0] {
                integral += 1;
                let x = &e.values;
                v.table.push(vec![
                    a.to_string(),
                    b.to_string(),
                    x.b.to_string(),
                    x.f.to_string(),
                    x.p.to_string(),
                    x.q.to_string(),
                ]);
            }
        }
    }
    v.extra.push(("integral pairs", integral.to_string()));
    Ok(v.into_report())
}

pub fn conjecture(limit: u64) -> Result<Report> {
    let rep = conjecture_scan(limit)?;
    let mut table = Table::new(&["N", "decompositions"]);
    for f in &rep.findings {
        let d = f.decompositions.iter().map(|r| format!("{}*{}", r.a, r.b)).collect::<Vec<_>>().join(" ");
        table.push(vec![f.n.to_string(), d]);
    }
    let summary = vec![
        ("scanned", rep.scanned.to_string()),
        ("crystals", rep.crystals.to_string()),
        ("multi-decomposition", rep.findings.len().to_string()),
    ];
    let status = if rep.findings.is_empty() { Status::Ok } else { Status::Counterexample };
    Ok(Report { results: serde_json::to_value(&rep)?, summary, table, status })
}
