use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::Parser;
use gfl_core::fiber::{verify_theorem_a, FiberReport, Verdict, VerifyOptions};
use gfl_core::formulas::{
    betti_number, cancellation_check, complex_shape, delta, hilbert_expression, jmultiplicity, sweep,
    thm_a_multiplicity, ShapeTermKind, SweepRow,
};
use gfl_core::gorenstein::{build_example, certify_matrix, AttemptReport, CertStatus, GorensteinError, GorensteinExample};
use gfl_core::groebner::{Budget, IdealFile};
use gfl_core::hilbert::{degree_of_quotient, dimension, hilbert_polynomial, hilbert_series};
use gfl_core::polycore::{Field, MonomialOrder};
use gfl_core::polymat::{AlternatingMatrix, MatrixFile};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::manifest::RunManifest;
use crate::{
    BettiArgs, CertifyArgs, Cli, Command, FormulaTarget, GenerateArgs, IdealArgs, OrderArg, ReplayArgs, ShapeArgs,
    SweepArgs, TripleArgs, VerifyArgs,
};

pub const CERTIFICATE_SCHEMA: &str = "gfl.certificate/1";
pub const GENERATE_FAILURE_SCHEMA: &str = "gfl.generate-failure/1";
pub const IDEAL_REPORT_SCHEMA: &str = "gfl.ideal-report/1";

/// What a command produced. Nothing is printed or written until the caller
/// decides to, so `replay` can rerun a command silently.
#[derive(Debug, Default)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
    pub files: Vec<(PathBuf, String)>,
    pub results: Value,
    pub seeds: Vec<u64>,
    pub field: Option<Field>,
    pub budget: Option<Budget>,
}

impl Outcome {
    fn new(results: Value) -> Self {
        Outcome {
            results,
            ..Outcome::default()
        }
    }

    fn with_json(mut self, path: &Option<PathBuf>) -> Self {
        if let Some(p) = path {
            self.files.push((p.clone(), pretty(&self.results)));
        }
        self
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

pub fn name(cmd: &Command) -> String {
    match cmd {
        Command::Formula { target } => {
            let t = match target {
                FormulaTarget::Mult(_) => "mult",
                FormulaTarget::Jmult(_) => "jmult",
                FormulaTarget::Betti(_) => "betti",
                FormulaTarget::Shape(_) => "shape",
                FormulaTarget::HilbertExpr(_) => "hilbert-expr",
                FormulaTarget::CheckIdentity(_) => "check-identity",
            };
            format!("formula {t}")
        }
        Command::Generate(_) => "generate".into(),
        Command::Verify(_) => "verify".into(),
        Command::Certify(_) => "certify".into(),
        Command::Ideal(_) => "ideal".into(),
        Command::Replay(_) => "replay".into(),
    }
}

pub fn run(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Formula { target } => formula(target),
        Command::Generate(a) => generate(a),
        Command::Verify(a) => verify(a),
        Command::Certify(a) => certify(a),
        Command::Ideal(a) => ideal(a),
        Command::Replay(a) => replay(a),
    }
}

fn formula(target: &FormulaTarget) -> Result<Outcome> {
    match target {
        FormulaTarget::Mult(a) => mult(a),
        FormulaTarget::Jmult(a) => jmult(a),
        FormulaTarget::Betti(a) => betti(a),
        FormulaTarget::Shape(a) => shape(a),
        FormulaTarget::HilbertExpr(a) => hilbert_expr(a),
        FormulaTarget::CheckIdentity(a) => check_identity(a),
    }
}

fn mult(a: &TripleArgs) -> Result<Outcome> {
    let e = thm_a_multiplicity(a.d, a.n, a.big_d)?;
    let mut out = Outcome::new(json!({"d": a.d, "n": a.n, "D": a.big_d, "e": e.to_string()}));
    out.stdout = format!("{e}\n");
    Ok(out.with_json(&a.json))
}

fn jmult(a: &TripleArgs) -> Result<Outcome> {
    let j = jmultiplicity(a.d, a.n, a.big_d)?;
    let e = thm_a_multiplicity(a.d, a.n, a.big_d)?;
    let mut out = Outcome::new(json!({
        "d": a.d, "n": a.n, "D": a.big_d,
        "delta": delta(a.n, a.big_d),
        "e": e.to_string(),
        "j": j.to_string(),
    }));
    out.stdout = format!("{j}\n");
    Ok(out.with_json(&a.json))
}

fn betti(a: &BettiArgs) -> Result<Outcome> {
    let b = betti_number(a.n, a.q, a.r)?;
    let mut out = Outcome::new(json!({"n": a.n, "q": a.q, "r": a.r, "betti": b.to_string()}));
    out.stdout = format!("{b}\n");
    Ok(out.with_json(&a.json))
}

fn shape(a: &ShapeArgs) -> Result<Outcome> {
    let s = complex_shape(a.n, a.big_d, a.q)?;
    let chi = s.euler_characteristic();
    let mut results = serde_json::to_value(&s)?;
    results["euler_characteristic"] = json!(chi.to_string());
    let mut out = Outcome::new(results);
    writeln!(out.stdout, "{:>4}  {:>12}  {:>6}  kind", "r", "rank", "twist")?;
    for t in &s.terms {
        let kind = match t.kind {
            ShapeTermKind::Free => "free",
            ShapeTermKind::Extra => "extra",
        };
        writeln!(out.stdout, "{:>4}  {:>12}  {:>6}  {kind}", t.r, t.rank.to_string(), t.twist)?;
    }
    writeln!(out.stdout, "euler characteristic {chi}")?;
    Ok(out.with_json(&a.json))
}

fn hilbert_expr(a: &TripleArgs) -> Result<Outcome> {
    let h = hilbert_expression(a.d, a.n, a.big_d)?;
    let c = cancellation_check(a.d, a.n, a.big_d)?;
    let ok = c.high_terms_vanish && c.multiplicity_match;
    let mut out = Outcome::new(json!({
        "d": a.d, "n": a.n, "D": a.big_d,
        "polynomial": h.polynomial.to_string(),
        "coefficients": h.polynomial,
        "valid_from": h.valid_from,
        "cancellation": c,
    }));
    writeln!(out.stdout, "P(q) = {}   (q >= {})", h.polynomial, h.valid_from)?;
    writeln!(
        out.stdout,
        "degree {}, leading coefficient {}, (d-1)! * leading = {}, e = {}",
        c.degree.map_or("-".to_string(), |v| v.to_string()),
        c.leading_coefficient,
        c.normalized_leading,
        c.multiplicity
    )?;
    writeln!(out.stdout, "{}", if ok { "identity holds" } else { "identity FAILS" })?;
    out.code = if ok { 0 } else { 2 };
    Ok(out.with_json(&a.json))
}

fn sweep_columns(row: &SweepRow) -> [String; 8] {
    [
        row.d.to_string(),
        row.n.to_string(),
        row.big_d.to_string(),
        row.e.to_string(),
        row.j.to_string(),
        row.degree.map_or(String::new(), |v| v.to_string()),
        row.leading.to_string(),
        row.matches.to_string(),
    ]
}

const SWEEP_HEADER: [&str; 8] = ["d", "n", "D", "e", "j", "degree", "leading", "match"];

fn check_identity(a: &SweepArgs) -> Result<Outcome> {
    let rows = sweep(a.d_max, a.n_max, a.big_d_max)?;
    if rows.is_empty() {
        bail!("empty sweep: need d-max >= 3, n-max >= 3, D-max >= 1");
    }
    let table: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({
                "d": r.d, "n": r.n, "D": r.big_d,
                "e": r.e.to_string(), "j": r.j.to_string(),
                "degree": r.degree, "leading": r.leading.to_string(),
                "match": r.matches,
            })
        })
        .collect();
    let mut out = Outcome::new(Value::Array(table)).with_json(&a.json);

    let cells: Vec<[String; 8]> = rows.iter().map(sweep_columns).collect();
    let widths: Vec<usize> = (0..8)
        .map(|k| cells.iter().map(|c| c[k].len()).chain([SWEEP_HEADER[k].len()]).max().unwrap_or(0))
        .collect();
    let line = |cols: &[&str]| -> String {
        cols.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect::<Vec<_>>().join("  ")
    };
    writeln!(out.stdout, "{}", line(&SWEEP_HEADER))?;
    for c in &cells {
        writeln!(out.stdout, "{}", line(&c.iter().map(String::as_str).collect::<Vec<_>>()))?;
    }
    let bad = rows.iter().filter(|r| !r.matches).count();
    if bad == 0 {
        writeln!(out.stdout, "all {} triples match", rows.len())?;
    } else {
        writeln!(out.stdout, "{bad} of {} triples mismatch", rows.len())?;
        out.code = 2;
    }

    if let Some(path) = &a.csv {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(SWEEP_HEADER)?;
        for c in &cells {
            w.write_record(c)?;
        }
        let bytes = w.into_inner().map_err(|e| anyhow!("csv: {e}"))?;
        out.files.push((path.clone(), String::from_utf8(bytes)?));
    }
    Ok(out)
}

fn generate(a: &GenerateArgs) -> Result<Outcome> {
    let budget = a.budget.budget();
    let attempts = a.retries.max(1);
    let result = build_example(a.d, a.n, a.big_d, a.seed, a.field, attempts, budget);
    let failure = |status: &str, list: Vec<AttemptReport>, code: u8| -> Result<Outcome> {
        let report = json!({
            "schema": GENERATE_FAILURE_SCHEMA,
            "d": a.d, "n": a.n, "D": a.big_d,
            "seed": a.seed,
            "field": a.field,
            "status": status,
            "attempts": list,
        });
        let mut out = Outcome::new(report);
        out.stdout = pretty(&out.results);
        out.stderr = format!("error: no certified example after {attempts} attempt(s) ({status})\n");
        out.code = code;
        Ok(out)
    };
    let ex = match result {
        Ok(ex) => ex,
        Err(GorensteinError::Exhausted(list)) => return failure("exhausted", list, 2),
        Err(GorensteinError::Inconclusive(list)) => return failure("inconclusive", list, 3),
        Err(err) => return Err(err.into()),
    };

    let text = ex.to_json().trim_end().to_string() + "\n";
    let mut out = Outcome::new(serde_json::from_str(&text)?);
    out.seeds = vec![a.seed];
    out.field = Some(a.field);
    out.budget = Some(budget);
    match &a.output {
        Some(path) => {
            writeln!(
                out.stdout,
                "certified (d, n, D) = ({}, {}, {}) seed {} attempt {}: {} generators of degree {}",
                ex.d,
                ex.n,
                ex.big_d,
                ex.seed,
                ex.attempt,
                ex.generators.len(),
                ex.delta
            )?;
            writeln!(out.stdout, "wrote {}", path.display())?;
            out.files.push((path.clone(), text));
        }
        None => out.stdout = text,
    }
    Ok(out)
}

fn load_bundle(path: &Path) -> Result<GorensteinExample> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let ex = GorensteinExample::from_json(&text).with_context(|| format!("loading {}", path.display()))?;
    if !ex.is_certified() {
        bail!("{}: bundle is not certified", path.display());
    }
    Ok(ex)
}

fn render_report(out: &mut String, path: &Path, r: &FiberReport) -> std::fmt::Result {
    let ex = &r.example;
    writeln!(
        out,
        "{}: (d, n, D) = ({}, {}, {}) seed {} attempt {} over {}",
        path.display(),
        ex.d,
        ex.n,
        ex.big_d,
        ex.seed,
        ex.attempt,
        ex.field
    )?;
    writeln!(out, "{:>4}  {:>10}  {:>12}  {:>12}  match", "q", "special", "saturated", "expression")?;
    for row in &r.rows {
        let m = row.expression_match.map_or("-", |b| if b { "yes" } else { "no" });
        writeln!(
            out,
            "{:>4}  {:>10}  {:>12}  {:>12}  {m}",
            row.q,
            row.special,
            row.saturated.to_string(),
            row.expression.to_string()
        )?;
    }
    let image = r.image_degree.map_or("?".to_string(), |v| v.to_string());
    writeln!(out, "image degree {image} (formula {})", r.expected_image_degree)?;
    let product = r.product_value.map_or("?".to_string(), |v| v.to_string());
    let birational = r.birational.map_or("?", |b| if b { "yes" } else { "no" });
    writeln!(
        out,
        "e = {}, deg F = {} ({}), deg F * deg Y = {product}, birational {birational}",
        r.formula_value, r.map_degree.value, r.map_degree.status
    )?;
    for f in &r.failures {
        writeln!(out, "failure: {f}")?;
    }
    for s in &r.budget_stops {
        writeln!(out, "budget stop: {s}")?;
    }
    let verdict = match r.verdict {
        Verdict::Pass => "pass",
        Verdict::Fail => "fail",
        Verdict::Inconclusive => "inconclusive",
    };
    writeln!(out, "verdict: {verdict}")
}

fn verify(a: &VerifyArgs) -> Result<Outcome> {
    let budget = a.budget.budget();
    let opts = VerifyOptions {
        q_max: a.q_max,
        budget,
        row_cap: a.row_cap,
    };
    let examples = a.bundles.iter().map(|p| load_bundle(p)).collect::<Result<Vec<_>>>()?;
    let reports: Vec<FiberReport> = examples
        .par_iter()
        .zip(&a.bundles)
        .map(|(ex, p)| verify_theorem_a(ex, opts).with_context(|| format!("verifying {}", p.display())))
        .collect::<Result<_>>()?;

    let results = if reports.len() == 1 {
        serde_json::to_value(&reports[0])?
    } else {
        serde_json::to_value(&reports)?
    };
    let mut out = Outcome::new(results);
    out.seeds = examples.iter().map(|e| e.seed).collect();
    out.field = examples.first().map(|e| e.field);
    out.budget = Some(budget);
    for (r, p) in reports.iter().zip(&a.bundles) {
        render_report(&mut out.stdout, p, r)?;
    }
    out.code = if reports.iter().any(|r| r.verdict == Verdict::Fail) {
        2
    } else if reports.iter().any(|r| r.verdict == Verdict::Inconclusive) {
        3
    } else {
        0
    };
    if let Some(path) = &a.output {
        let text = match reports.as_slice() {
            [one] => one.to_json(),
            many => serde_json::to_string_pretty(many)?,
        };
        out.files.push((path.clone(), text + "\n"));
    }
    Ok(out)
}

fn certify(a: &CertifyArgs) -> Result<Outcome> {
    let text = std::fs::read_to_string(&a.matrix).with_context(|| format!("reading {}", a.matrix.display()))?;
    let file: MatrixFile = serde_json::from_str(&text).with_context(|| format!("parsing {}", a.matrix.display()))?;
    let phi = AlternatingMatrix::new(file.to_matrix()?)?;
    let budget = a.budget.budget();
    let (gens, report) = certify_matrix(&phi, budget)?;
    let status = report.status();

    let mut out = Outcome::new(json!({
        "schema": CERTIFICATE_SCHEMA,
        "vars": file.vars,
        "field": file.field,
        "entries": file.entries,
        "generators": gens.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
        "status": status,
        "certificate": report,
    }));
    out.field = Some(file.field);
    out.budget = Some(budget);
    let s = &mut out.stdout;
    let show = |o: Option<i64>| o.map_or("?".to_string(), |v| v.to_string());
    writeln!(s, "generators: {}", gens.len())?;
    writeln!(s, "homogeneous of one degree: {}", report.degrees_ok)?;
    writeln!(s, "phi * f = 0: {}", report.syzygy_ok)?;
    writeln!(s, "linearly independent: {}", report.generators_independent)?;
    writeln!(s, "ht(I) = {}", show(report.height))?;
    for row in &report.gd_table {
        writeln!(
            s,
            "ht(I_{}(phi)) = {} > {}: {}",
            row.t,
            show(row.height),
            row.required_greater_than,
            row.pass
        )?;
    }
    for f in &report.budget_failures {
        writeln!(s, "budget stop: {f}")?;
    }
    let (label, code) = match status {
        CertStatus::Certified => ("certified", 0),
        CertStatus::Failed => ("failed", 2),
        CertStatus::Inconclusive => ("inconclusive", 3),
    };
    writeln!(s, "status: {label}")?;
    out.code = code;
    if let Some(path) = &a.output {
        out.files.push((path.clone(), pretty(&out.results)));
    }
    Ok(out)
}

fn ideal(a: &IdealArgs) -> Result<Outcome> {
    let text = std::fs::read_to_string(&a.ideal).with_context(|| format!("reading {}", a.ideal.display()))?;
    let file: IdealFile = serde_json::from_str(&text).with_context(|| format!("parsing {}", a.ideal.display()))?;
    let budget = a.budget.budget();
    let ideal = file.to_ideal()?.with_budget(budget);
    let order = match a.order {
        OrderArg::Grevlex => MonomialOrder::Grevlex,
        OrderArg::Lex => MonomialOrder::Lex,
    };
    let basis = match ideal.groebner_basis(order) {
        Ok(b) => b,
        Err(err) if err.is_budget() => {
            let mut out = Outcome::new(json!({"schema": IDEAL_REPORT_SCHEMA, "budget_stop": err.to_string()}));
            out.stderr = format!("inconclusive: {err}\n");
            out.code = 3;
            return Ok(out);
        }
        Err(err) => return Err(err.into()),
    };
    let basis: Vec<String> = basis.iter().map(|g| g.to_string()).collect();
    let homogeneous = ideal.is_homogeneous();
    let unit = ideal.is_unit()?;
    let dim = if unit { None } else { Some(dimension(&ideal)?) };

    let (mut series, mut poly, mut degree) = (None, None, None);
    if homogeneous && !unit {
        let hs = hilbert_series(&ideal)?;
        series = Some(json!({"numerator": hs.numerator, "denominator_exp": hs.denominator_exp}));
        if hs.dimension() > 0 {
            poly = Some(hilbert_polynomial(&ideal)?.polynomial);
            degree = Some(degree_of_quotient(&ideal)?.degree);
        } else {
            degree = Some(hs.numerator_at_one() as u64);
        }
    }

    let mut out = Outcome::new(json!({
        "schema": IDEAL_REPORT_SCHEMA,
        "vars": file.vars,
        "field": file.field,
        "order": a.order,
        "basis": basis,
        "homogeneous": homogeneous,
        "unit": unit,
        "dimension": dim,
        "hilbert_series": series,
        "hilbert_polynomial": poly.as_ref().map(|p| p.to_string()),
        "degree": degree,
    }));
    out.field = Some(file.field);
    out.budget = Some(budget);
    let s = &mut out.stdout;
    writeln!(s, "basis ({} elements):", basis.len())?;
    for g in &basis {
        writeln!(s, "  {g}")?;
    }
    match dim {
        Some(k) => writeln!(s, "dimension of R/I: {k}")?,
        None => writeln!(s, "unit ideal")?,
    }
    if let Some(p) = &poly {
        writeln!(s, "hilbert polynomial: {p}")?;
    }
    if let Some(deg) = degree {
        writeln!(s, "degree: {deg}")?;
    }
    Ok(out.with_json(&a.json))
}

fn replay(a: &ReplayArgs) -> Result<Outcome> {
    let m = RunManifest::load(&a.manifest)?;
    let cli = Cli::try_parse_from(std::iter::once("gfl".to_string()).chain(m.argv.iter().cloned()))
        .map_err(|e| anyhow!("manifest arguments do not parse: {e}"))?;
    if matches!(cli.command, Command::Replay(_)) {
        bail!("a replay manifest cannot be replayed");
    }
    let again = run(&cli.command)?;
    let same_results = again.results == m.results;
    let same_code = again.code == m.exit_code;
    let mut out = Outcome::new(json!({
        "command": m.command,
        "results_match": same_results,
        "exit_code_match": same_code,
    }));
    if same_results && same_code {
        writeln!(out.stdout, "replay of `{}` reproduces the recorded results", m.command)?;
    } else {
        writeln!(
            out.stdout,
            "replay of `{}` differs: results {}, exit code {} (recorded {})",
            m.command,
            if same_results { "match" } else { "differ" },
            again.code,
            m.exit_code
        )?;
        out.code = 2;
    }
    Ok(out)
}
