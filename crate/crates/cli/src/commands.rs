use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};
use symdist::codes::{
    bound_hamming, bound_johnson, bound_scheme, check_tight, code_to_hadamard, construct_ekr,
    hadamard_to_code, load_code, sylvester_hadamard, verify_rank_s2, Code, HadamardMatrix, Metric,
    Tightness, RANK_CHECK_MAX_LENGTH,
};
use symdist::exactnum::{
    binom_half, binomial, int, is_prime, kummer_half_bound, padic_val, rat, Rational,
};
use symdist::phicert::{certify as certify_pair, p_coeff, phi_reflection_check, PhiParams};
use symdist::primetools::{rho as rho_scan, rho_lower_bound, Rho, DEFAULT_CEILING};
use symdist::schemepoly::verify_prop41;
use symdist::sweeper::{prop56_prefilter, run_sweep, RRule, SweepSpec};
use symdist::{Error, Result, SchemeParams};

use crate::report::{exact, integer, Report};
use crate::{Family, MetricArg, Rule, Space, Suite};

pub enum Output {
    Report(Report),
    Raw(String),
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

pub fn bound(space: Space, n: u64, s: u64) -> Result<Output> {
    let (params, closed) = match space {
        Space::Johnson => (SchemeParams::johnson(n)?, bound_johnson(n, s)),
        Space::Hamming => (SchemeParams::hamming(n)?, bound_hamming(n, s)),
    };
    let total = bound_scheme(params, s)?;
    let closed = closed?;
    debug_assert_eq!(total, closed);
    let terms: Vec<Value> = (s % 2..=s)
        .step_by(2)
        .map(|i| Ok(json!({ "i": i, "m": integer(&params.multiplicity(i)?) })))
        .collect::<Result<_>>()?;
    let mut r = Report::new("bound")
        .input("space", params.family.to_string())
        .input("n", n)
        .input("s", s);
    r.set("scheme", params.to_string());
    r.set("bound", integer(&total));
    r.set("multiplicities", terms);
    Ok(Output::Report(r))
}

fn resolve_metric(c: &Code, metric: MetricArg) -> Metric {
    match metric {
        MetricArg::Hamming => Metric::Hamming,
        MetricArg::Johnson => Metric::Johnson,
        MetricArg::Auto => match c.weight() {
            Some(w) if c.length() == 2 * w as usize => Metric::Johnson,
            _ => Metric::Hamming,
        },
    }
}

pub fn analyze(file: &Path, metric: MetricArg) -> Result<Output> {
    let code = load_code(&read(file)?)?;
    let metric = resolve_metric(&code, metric);
    let mut r = Report::new("analyze")
        .input("file", file.display().to_string())
        .input("metric", metric.to_string());
    r.set("length", code.length());
    r.set("size", code.len());
    r.set("weight", code.weight().map_or(Value::Null, Value::from));
    let profile = symdist::codes::distance_profile(&code, metric)?;
    r.set("degree_set", profile.degree_set.iter().copied().collect::<Vec<u64>>());
    r.set("degree", profile.degree());
    r.set("reflection", profile.reflection);
    r.set("symmetric", profile.symmetric);
    if profile.degree() == 0 {
        r.set("bound", Value::Null);
        r.set("verdict", "degree_zero");
        return Ok(Output::Report(r));
    }
    let t = check_tight(&code, metric)?;
    r.set("bound", t.bound.as_ref().map_or(Value::Null, integer));
    r.set("verdict", t.verdict.as_str());
    match &t.verdict {
        Tightness::BelowBound { gap } => r.set("gap", integer(gap)),
        Tightness::ExceedsBound { excess } => r.set("excess", integer(excess)),
        _ => {}
    }
    Ok(Output::Report(r))
}

pub fn certify(n: u64, s: u64) -> Result<Output> {
    let c = certify_pair(n, s)?;
    let mut r = Report::new("certify").input("n", n).input("s", s);
    r.set("r", c.r);
    r.set("phi", c.phi.to_string());
    r.set("phi_coefficients", c.phi.coeffs().iter().map(exact).collect::<Vec<_>>());
    let zeros: Vec<Value> = c
        .zeros
        .zeros
        .iter()
        .map(|z| json!({ "value": z.value, "multiplicity": z.multiplicity }))
        .collect();
    r.set("integral_zeros", zeros);
    r.set("residual_degree", c.zeros.residual_degree);
    r.set("all_integral", c.zeros.all_integral);
    r.set("distinct", c.zeros.distinct);
    r.set("verdict", c.verdict.as_str());
    r.set("rule", c.rule);
    Ok(Output::Report(r))
}

pub struct SweepArgs {
    pub s_min: u64,
    pub s_max: u64,
    pub rule: Rule,
    pub r_min: Option<u64>,
    pub r_max: Option<u64>,
    pub prefilter: bool,
    pub jobs: usize,
    pub checkpoint: Option<PathBuf>,
    pub ack_long_run: bool,
}

pub fn sweep(a: SweepArgs) -> Result<Output> {
    let rule = match a.rule {
        Rule::Case1 => RRule::Case1,
        Rule::Case21 => RRule::Case21,
        Rule::Explicit => match (a.r_min, a.r_max) {
            (Some(lo), Some(hi)) => RRule::Explicit { lo, hi },
            _ => return Err(Error::Domain("explicit rule needs --r-min and --r-max".into())),
        },
    };
    let mut spec = SweepSpec::new(a.s_min, a.s_max, rule);
    spec.prefilter = a.prefilter;
    spec.jobs = a.jobs;
    spec.checkpoint = a.checkpoint;
    spec.ack_long_run = a.ack_long_run;
    let out = run_sweep(&spec)?;
    eprintln!(
        "sweep: {:.3}s wall, {} rows resumed, {} rows computed",
        out.stats.wall.as_secs_f64(),
        out.stats.rows_resumed,
        out.stats.rows_computed
    );
    let rep = out.report;
    let mut r = Report::new("sweep")
        .input("s_min", a.s_min)
        .input("s_max", a.s_max)
        .input("rule", rule.to_string())
        .input("prefilter", a.prefilter);
    r.set("cells_total", rep.cells_total);
    r.set("cells_examined", rep.cells_examined);
    r.set("cells_prefiltered", rep.cells_prefiltered);
    r.set(
        "hits",
        rep.hits.iter().map(|&(s, r)| json!([s, r])).collect::<Vec<_>>(),
    );
    let hist: Map<String, Value> = rep
        .first_fail_histogram
        .iter()
        .map(|(i, c)| (i.to_string(), Value::from(*c)))
        .collect();
    r.set("first_fail_histogram", hist);
    Ok(Output::Report(r))
}

pub fn rho(s: u64, limit: u64, allow_above_ceiling: bool) -> Result<Output> {
    if s == 0 {
        return Err(Error::Domain("s must be at least 1".into()));
    }
    if limit > DEFAULT_CEILING && !allow_above_ceiling {
        return Err(Error::Resource(format!(
            "limit {limit} exceeds the sieve ceiling {DEFAULT_CEILING}; pass --allow-above-ceiling"
        )));
    }
    let mut r = Report::new("rho").input("s", s).input("limit", limit);
    match rho_scan(s, limit) {
        Rho::Found(v) => {
            r.set("found", true);
            r.set("rho", v);
        }
        Rho::NotFoundBelowCeiling { ceiling } => {
            r.set("found", false);
            r.set("rho", Value::Null);
            r.set("searched_to", ceiling);
        }
    }
    if s >= 288 {
        let lb = rho_lower_bound(s)?;
        r.set("lower_bound_floor", integer(&lb.floor));
        r.set("lower_bound_exceeds_2000000s", lb.exceeds_two_million_s);
    }
    Ok(Output::Report(r))
}

fn need<T>(v: Option<T>, flag: &str, family: &str) -> Result<T> {
    v.ok_or_else(|| Error::Domain(format!("--family {family} needs {flag}")))
}

pub fn construct(
    family: Family,
    n: Option<u64>,
    anchor: u64,
    k: Option<u32>,
    input: Option<&Path>,
    out: Option<&Path>,
    json_mode: bool,
) -> Result<Output> {
    let mut r = Report::new("construct");
    let content = match family {
        Family::Ekr => {
            let n = need(n, "--n", "ekr")?;
            let c = construct_ekr(n, anchor)?;
            r = r.input("family", "ekr").input("n", n).input("anchor", anchor);
            r.set("size", c.len());
            c.to_text()
        }
        Family::Sylvester => {
            let k = need(k, "--k", "sylvester")?;
            if k > 12 {
                return Err(Error::Resource(format!("order 2^{k} is too large to print")));
            }
            let h = sylvester_hadamard(k);
            r = r.input("family", "sylvester").input("k", k);
            r.set("order", h.order());
            h.to_text()
        }
        Family::HadamardCode => {
            let path = need(input, "--input", "hadamard-code")?;
            let h = HadamardMatrix::parse(&read(path)?)?;
            let c = hadamard_to_code(&h)?;
            r = r
                .input("family", "hadamard-code")
                .input("input", path.display().to_string());
            r.set("size", c.len());
            c.to_text()
        }
        Family::CodeHadamard => {
            let path = need(input, "--input", "code-hadamard")?;
            let c = load_code(&read(path)?)?;
            let h = code_to_hadamard(&c)?;
            r = r
                .input("family", "code-hadamard")
                .input("input", path.display().to_string());
            r.set("order", h.order());
            h.to_text()
        }
    };
    if let Some(path) = out {
        fs::write(path, &content)?;
        r = r.input("out", path.display().to_string());
        return Ok(Output::Report(r));
    }
    if json_mode {
        r.set("content", content);
        return Ok(Output::Report(r));
    }
    Ok(Output::Raw(content))
}

struct Check {
    name: &'static str,
    checked: u64,
    failures: Vec<Value>,
    details: Vec<Value>,
}

impl Check {
    fn new(name: &'static str) -> Self {
        Check {
            name,
            checked: 0,
            failures: Vec::new(),
            details: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, at: Value) {
        self.checked += 1;
        if !ok && self.failures.len() < 20 {
            self.failures.push(at);
        }
    }

    fn to_value(&self) -> Value {
        let mut v = json!({
            "name": self.name,
            "checked": self.checked,
            "failures": self.failures,
            "passed": self.failures.is_empty(),
        });
        if !self.details.is_empty() {
            v["details"] = Value::from(self.details.clone());
        }
        v
    }
}

fn suite_prop41(max_n: u64) -> Result<Vec<Check>> {
    let mut c = Check::new("dual polynomial identity");
    for n in 2..=max_n {
        for s in 1..n {
            c.record(verify_prop41(n, s)?, json!([n, s]));
        }
    }
    Ok(vec![c])
}

fn suite_rank2(max_n: u64) -> Result<Vec<Check>> {
    let max_n = max_n.min(RANK_CHECK_MAX_LENGTH as u64 / 2);
    let mut codes: Vec<(String, Code)> = Vec::new();
    for k in 2..=3u32 {
        if 1u64 << (k - 1) <= max_n {
            let h = sylvester_hadamard(k);
            codes.push((format!("hadamard order {}", h.order()), hadamard_to_code(&h)?));
        }
    }
    for n in 2..=max_n {
        codes.push((format!("ekr n={n}"), construct_ekr(n, 1)?));
    }
    let mut c = Check::new("rank of the evaluation matrix");
    for (label, code) in codes {
        let rc = verify_rank_s2(&code)?;
        c.record(rc.holds(), Value::from(label.clone()));
        c.details.push(json!({
            "code": label,
            "rank": rc.rank,
            "expected": rc.expected,
            "points": rc.columns,
        }));
    }
    Ok(vec![c])
}

fn suite_identities(max_n: u64) -> Result<Vec<Check>> {
    let mut telescoping = Check::new("scheme bound equals closed forms");
    for n in 2..=max_n {
        let j = SchemeParams::johnson(n)?;
        let h = SchemeParams::hamming(n)?;
        for s in 1..n {
            let ok = bound_scheme(j, s)? == binomial(2 * n - 1, s)
                && bound_scheme(h, s)? == bound_hamming(n, s)?;
            telescoping.record(ok, json!([n, s]));
        }
    }
    let mut reflection = Check::new("certificate reflection symmetry");
    for r in 1..=max_n {
        for s in 1..=max_n {
            reflection.record(phi_reflection_check(PhiParams::new(r, s)?), json!([r, s]));
        }
    }
    let mut prefilter = Check::new("prefiltered cells have non-integral p_(s,2)");
    let mut p2 = Check::new("16 p_(s,2) closed form");
    for s in 2..=max_n {
        let start = (3 * s * s).div_ceil(4);
        for r in start..start + 20 {
            let skipped = !prop56_prefilter(r, s)?;
            let p = p_coeff(PhiParams::new(r, s)?, 2)?;
            prefilter.record(skipped && !p.is_integer(), json!([s, r]));
        }
        for r in 1..=max_n {
            let lhs = p_coeff(PhiParams::new(r, s)?, 2)? * int(16);
            let ri = r as i64;
            let rhs = Rational::from_integer(binomial(s, 2))
                * (int(4 * ri * ri + 14 * ri + 13) + rat(3, 2 * ri + 1));
            p2.record(lhs == rhs, json!([s, r]));
        }
    }
    let mut valuation = Check::new("half-integer binomial valuation bound");
    let primes: Vec<u64> = (2..=101).filter(|&p| is_prime(p)).collect();
    for n in 0..=max_n {
        for m in 0..=n {
            let b = binom_half(n, m)?;
            for &p in &primes {
                let ok = padic_val(p, &b)? <= kummer_half_bound(p, n, m)?;
                valuation.record(ok, json!([n, m, p]));
            }
        }
    }
    Ok(vec![telescoping, reflection, prefilter, p2, valuation])
}

pub fn verify(suite: Suite, max_n: Option<u64>) -> Result<Output> {
    let (name, checks, max_n) = match suite {
        Suite::Prop41 => {
            let m = max_n.unwrap_or(12);
            ("prop41", suite_prop41(m)?, m)
        }
        Suite::Rank2 => {
            let m = max_n.unwrap_or(6);
            ("rank2", suite_rank2(m)?, m)
        }
        Suite::Identities => {
            let m = max_n.unwrap_or(30);
            ("identities", suite_identities(m)?, m)
        }
    };
    let passed = checks.iter().all(|c| c.failures.is_empty());
    let mut r = Report::new("verify").input("suite", name).input("max_n", max_n);
    r.set("checks", checks.iter().map(Check::to_value).collect::<Vec<_>>());
    r.set("all_passed", passed);
    Ok(Output::Report(r))
}
