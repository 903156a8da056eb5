use std::thread;

use serde::Serialize;
use serde_json::{json, Value};

use wronskian_core::eisenstein::{junk_space_from, EisensteinFamily};
use wronskian_core::error::Error;
use wronskian_core::heilbronn::{euclid_check, units};
use wronskian_core::linalg::format_rational;
use wronskian_core::modsym::{admissible, extra_relation, Monomial, PresentedSpace, SymbolVector};
use wronskian_core::pdmu::{composition_check, hecke_table, mu_xy_direct, pd_suite, DualFunctional};
use wronskian_core::rankzero::{
    gamma0_generator, gamma0_span, is_prime, theorem_check, wronskian_span, Verdict,
};

use crate::config::{RunConfig, Suite};

pub const SCHEMA: u32 = 1;
pub const EUCLID_N_MAX: i64 = 300;

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Indeterminate,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteResult {
    pub suite: Suite,
    pub level: Option<u64>,
    pub status: Status,
    pub details: Value,
    /// Counterexamples or residual witnesses; empty on success.
    pub failures: Vec<Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub levels: Vec<u64>,
    pub results: Vec<SuiteResult>,
    pub status: Status,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        exit_code(self.status)
    }
}

pub fn exit_code(status: Status) -> i32 {
    match status {
        Status::Pass => 0,
        Status::Fail => 2,
        Status::Indeterminate => 3,
    }
}

struct LevelContext {
    space: PresentedSpace,
    fam: EisensteinFamily,
    n_max: usize,
}

/// Runs the selected suites for every level. Levels run on separate threads;
/// results come back in level order, suites in dependency order.
pub fn run_suite(config: &RunConfig, progress: &(dyn Fn(&str) + Sync)) -> Result<Report, Error> {
    let mut levels = config.levels.clone();
    levels.sort_unstable();
    levels.dedup();

    let per_level: Vec<Result<Vec<SuiteResult>, Error>> = thread::scope(|scope| {
        let handles: Vec<_> = levels
            .iter()
            .map(|&l| scope.spawn(move || run_level(config, l, progress)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("suite thread panicked"))
            .collect()
    });

    let mut results = Vec::new();
    if config.suites.contains(&Suite::Euclid) {
        progress(&format!("euclid: n <= {EUCLID_N_MAX}"));
        results.push(euclid_suite());
    }
    for r in per_level {
        results.extend(r?);
    }
    results.sort_by_key(|r| (r.suite, r.level));
    let status = results.iter().map(|r| r.status).max().unwrap_or(Status::Pass);
    Ok(Report {
        schema: SCHEMA,
        command: "verify".into(),
        levels,
        results,
        status,
    })
}

fn run_level(config: &RunConfig, l: u64, progress: &(dyn Fn(&str) + Sync)) -> Result<Vec<SuiteResult>, Error> {
    progress(&format!("level {l}: building M4"));
    let ctx = LevelContext {
        space: PresentedSpace::build(l)?,
        fam: EisensteinFamily::new(l, config.precision_for(l))?,
        n_max: config.n_max_for(l),
    };
    let mut out = Vec::new();
    for &suite in &config.suites {
        if suite == Suite::Euclid {
            continue;
        }
        progress(&format!("level {l}: {suite}"));
        let result = match suite {
            Suite::Dims => dims_suite(&ctx),
            Suite::Relations => relations_suite(&ctx),
            Suite::Pd => pd_check(&ctx),
            Suite::Composition => composition_suite(&ctx),
            Suite::Theorem => theorem_suite(&ctx),
            Suite::Gamma0 => gamma0_suite(&ctx),
            Suite::Euclid => unreachable!(),
        };
        out.push(result.unwrap_or_else(|e| SuiteResult {
            suite,
            level: Some(l),
            status: Status::Fail,
            details: Value::Null,
            failures: vec![json!({ "error": e.to_string() })],
        }));
    }
    Ok(out)
}

fn verdict(suite: Suite, level: Option<u64>, details: Value, failures: Vec<Value>) -> SuiteResult {
    SuiteResult {
        suite,
        level,
        status: if failures.is_empty() { Status::Pass } else { Status::Fail },
        details,
        failures,
    }
}

fn dims_suite(ctx: &LevelContext) -> Result<SuiteResult, Error> {
    let l = ctx.space.level();
    let d = ctx.space.dimensions();
    let mut failures = Vec::new();
    if d.dim_s4_plus != d.dim_s4_minus || d.dim_s4 != d.dim_s4_plus + d.dim_s4_minus {
        failures.push(json!({ "check": "plus/minus split" }));
    }
    if d.dim_m4 != d.dim_s4 + d.cusps {
        failures.push(json!({ "check": "dim M4 = dim S4 + #cusps" }));
    }
    let expected = is_prime(l).then(|| ((l - 1) * l.saturating_sub(3) / 8) as usize);
    if let Some(e) = expected {
        if l >= 5 && d.dim_s4_plus != e {
            failures.push(json!({ "check": "dim S4+ = (l-1)(l-3)/8", "expected": e, "found": d.dim_s4_plus }));
        }
    }
    let mut details = serde_json::to_value(&d).expect("serializable");
    details["expectedS4plus"] = json!(expected.filter(|_| l >= 5));
    Ok(verdict(Suite::Dims, Some(l), details, failures))
}

fn relations_suite(ctx: &LevelContext) -> Result<SuiteResult, Error> {
    let s = &ctx.space;
    let l = s.level();
    let li = l as i64;
    let mut failures = Vec::new();
    if !s.xy_span().equals(s.cuspidal_subspace())? {
        failures.push(json!({ "check": "xy generators span S4" }));
    }
    let mut pairs = 0usize;
    for u in 0..li {
        for v in 0..li {
            if !admissible(u, v, l) {
                continue;
            }
            pairs += 1;
            let extra = extra_relation(u, v, l);
            if !s.coords(&extra)?.is_zero() {
                failures.push(json!({ "check": "extra relation vanishes in M4", "u": u, "v": v }));
            }
            let mu = mu_xy_direct(&ctx.fam, &extra)?;
            if !mu.is_zero() {
                failures.push(json!({ "check": "mu(extra relation) = 0", "u": u, "v": v, "series": mu.to_json() }));
            }
            let mut sym = SymbolVector::generator(l, Monomial::XY, u, v);
            sym.add_term(Monomial::XY, v, -u, wronskian_core::linalg::int(-1));
            let mu = mu_xy_direct(&ctx.fam, &sym)?;
            if !mu.is_zero() {
                failures.push(json!({ "check": "mu(xy(u,v) - xy(v,-u)) = 0", "u": u, "v": v, "series": mu.to_json() }));
            }
        }
    }
    let details = json!({ "pairs": pairs, "precision": ctx.fam.precision() });
    Ok(verdict(Suite::Relations, Some(l), details, failures))
}

fn pd_check(ctx: &LevelContext) -> Result<SuiteResult, Error> {
    let r = pd_suite(&ctx.space)?;
    let mut failures: Vec<Value> = r.failures.iter().map(|f| json!(f)).collect();
    if r.induced_rank != r.dim_minus || r.dim_minus != r.dim_plus {
        failures.push(json!({ "check": "rank", "rank": r.induced_rank, "dimMinus": r.dim_minus, "dimPlus": r.dim_plus }));
    }
    if !r.passed() && failures.is_empty() {
        failures.push(json!({ "check": "pd" }));
    }
    let details = serde_json::to_value(&r).expect("serializable");
    Ok(verdict(Suite::Pd, Some(r.level), details, failures))
}

fn composition_suite(ctx: &LevelContext) -> Result<SuiteResult, Error> {
    let s = &ctx.space;
    let junk = junk_space_from(&ctx.fam)?;
    let table = hecke_table(s, ctx.fam.precision())?;
    let basis = DualFunctional::minus_basis(s);
    let mut failures = Vec::new();
    for (i, phi) in basis.iter().enumerate() {
        let r = composition_check(s, &ctx.fam, &junk, &table, phi)?;
        if !r.passed {
            let residual: Vec<Value> = r
                .residual
                .entries()
                .iter()
                .map(|(n, c)| json!([n, format_rational(c)]))
                .collect();
            failures.push(json!({ "functional": i, "residual": residual }));
        }
    }
    let details = json!({
        "functionals": basis.len(),
        "junkDim": junk.dim(),
        "precision": ctx.fam.precision(),
    });
    Ok(verdict(Suite::Composition, Some(s.level()), details, failures))
}

fn euclid_suite() -> SuiteResult {
    let mut failures = Vec::new();
    let mut tuples = 0usize;
    let mut runs = 0usize;
    for n in 1..=EUCLID_N_MAX {
        let r = euclid_check(n);
        tuples += r.size;
        runs += r.runs;
        if !r.passed() {
            failures.push(serde_json::to_value(&r).expect("serializable"));
        }
    }
    let details = json!({ "nMax": EUCLID_N_MAX, "tuples": tuples, "runs": runs });
    verdict(Suite::Euclid, None, details, failures)
}

fn theorem_suite(ctx: &LevelContext) -> Result<SuiteResult, Error> {
    let r = theorem_check(&ctx.space, &ctx.fam, ctx.n_max)?;
    let status = match r.verdict {
        Verdict::Match => Status::Pass,
        Verdict::Mismatch => Status::Fail,
        Verdict::Indeterminate => Status::Indeterminate,
    };
    let mut failures = Vec::new();
    if !r.bridge {
        failures.push(json!({ "check": "span{B} + J = wronskian span + J" }));
    }
    if status == Status::Fail && r.bridge {
        failures.push(json!({ "check": "wronskian dim = cyclic dim", "wronskianDim": r.wronskian_dim, "cyclicDim": r.cyclic_dim }));
    }
    Ok(SuiteResult {
        suite: Suite::Theorem,
        level: Some(r.level),
        status,
        details: serde_json::to_value(&r).expect("serializable"),
        failures,
    })
}

fn gamma0_suite(ctx: &LevelContext) -> Result<SuiteResult, Error> {
    let fam = &ctx.fam;
    let l = fam.level();
    let li = l as i64;
    let g = gamma0_span(fam)?;
    let w = wronskian_span(fam)?;
    let mut failures = Vec::new();
    if !w.contains_subspace(&g)? {
        failures.push(json!({ "check": "gamma0 span inside wronskian span" }));
    }
    for a in 0..li {
        for b in 0..li {
            let base = gamma0_generator(fam, a, b);
            for j in units(l) {
                if gamma0_generator(fam, a * j, b * j) != base {
                    failures.push(json!({ "check": "rescaling invariance", "a": a, "b": b, "j": j }));
                }
            }
        }
    }
    let details = json!({
        "gamma0Dim": g.dim(),
        "wronskianDim": w.dim(),
        "equal": g.equals(&w)?,
    });
    Ok(verdict(Suite::Gamma0, Some(l), details, failures))
}

/// One row per suite result: `suite,level,status,failures`.
pub fn report_csv(report: &Report) -> String {
    let mut out = String::from("suite,level,status,failures\n");
    for r in &report.results {
        let level = r.level.map(|l| l.to_string()).unwrap_or_default();
        let status = serde_json::to_value(r.status).expect("serializable");
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.suite,
            level,
            status.as_str().unwrap_or_default(),
            r.failures.len()
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_suites;

    #[test]
    fn level_five_all_pass() {
        let config = RunConfig::new(vec![5]);
        let r = run_suite(&config, &|_| {}).unwrap();
        assert_eq!(r.status, Status::Pass, "{r:#?}");
        assert_eq!(r.results.len(), 7);
        assert_eq!(r.exit_code(), 0);
        let order: Vec<Suite> = r.results.iter().map(|x| x.suite).collect();
        let mut sorted = order.clone();
        sorted.sort();
        assert_eq!(order, sorted);
    }

    #[test]
    fn reports_are_deterministic() {
        let mut config = RunConfig::new(vec![7, 5]);
        config.suites = parse_suites("dims,theorem").unwrap();
        let a = serde_json::to_string(&run_suite(&config, &|_| {}).unwrap()).unwrap();
        let b = serde_json::to_string(&run_suite(&config, &|_| {}).unwrap()).unwrap();
        assert_eq!(a, b);
        assert!(a.contains("\"schema\":1"));
    }

    #[test]
    fn non_stabilized_cyclic_is_indeterminate() {
        let mut config = RunConfig::new(vec![7]);
        config.suites = parse_suites("theorem").unwrap();
        config.n_max = Some(3);
        let r = run_suite(&config, &|_| {}).unwrap();
        assert_eq!(r.status, Status::Indeterminate);
        assert_eq!(r.exit_code(), 3);
    }

    #[test]
    fn csv_rows() {
        let mut config = RunConfig::new(vec![5]);
        config.suites = parse_suites("dims,euclid").unwrap();
        let r = run_suite(&config, &|_| {}).unwrap();
        assert_eq!(report_csv(&r), "suite,level,status,failures\ndims,5,pass,0\neuclid,,pass,0\n");
    }
}
