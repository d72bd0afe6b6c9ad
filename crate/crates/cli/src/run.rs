//! Subcommand drivers.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;

use nikishin::analysis::{
    at_sampler, default_c1, orthogonality_residuals, phi_sign_change_check, psl_identity_check, remainder_check,
    type1_ratio_errors, type1_zero_counts, type2_errors, type2_series_check, zero_check, zero_report_type2,
    CheckReport, ErrorRow, ErrorTable,
};
use nikishin::hermite_pade::{solve_type1_multipoint, solve_type2};
use nikishin::measures::{carleman_indicator, inverse_recomposition_residual, inverse_transform_series};
use nikishin::nikishin::MultiIndex;
use nikishin::numkernel::{parse_real, precision};
use nikishin::Error;

use crate::error::{CliError, CliResult};
use crate::output::{
    read_checks_csv, sort_reports, summary, write_checks_csv, write_manifest, write_table_csv, write_text, Manifest,
};
use crate::scenario::{Prepared, Scenario};

/// Scenario-driven subcommands.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Type2Run,
    Type1Run,
    AtCheck,
    Identities,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Type2Run => "type2-run",
            Command::Type1Run => "type1-run",
            Command::AtCheck => "at-check",
            Command::Identities => "identities",
        }
    }

    /// Every check the subcommand knows about.
    pub fn checks(self) -> &'static [&'static str] {
        match self {
            Command::Type2Run => &["convergence", "orthogonality", "remainder", "zeros", "phi", "series"],
            Command::Type1Run => &["ratio", "coefficient-zeros", "form-integral"],
            Command::AtCheck => &["at-sampling"],
            Command::Identities => &["inverse-series", "carleman"],
        }
    }
}

/// Command-line overrides of scenario fields.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub precision: Option<u32>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub jobs: Option<usize>,
    pub check: Vec<String>,
}

#[derive(Debug)]
pub struct RunOutcome {
    pub reports: Vec<CheckReport>,
    pub tables: Vec<ErrorTable>,
    pub out_dir: PathBuf,
    pub summary: String,
}

impl RunOutcome {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(CheckReport::passed)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }
}

/// Hypothesis and input problems are configuration errors; the rest are
/// numerical failures.
fn classify(context: String, e: Error) -> CliError {
    match e {
        Error::HypothesisViolation(_)
        | Error::PoleOnSupport { .. }
        | Error::InvalidInput(_)
        | Error::InfeasibleDegrees(_)
        | Error::BadWeight { .. }
        | Error::OverlappingIntervals(..)
        | Error::TouchingNotEnabled(..)
        | Error::PoleInForbiddenRegion { .. }
        | Error::SharedPoles(..) => CliError::config(context, e),
        Error::NoKernel | Error::DegenerateInput(_) | Error::ZeroMass => CliError::numeric(context, e),
    }
}

struct Ctx<'a> {
    prep: &'a Prepared,
    selected: Vec<&'static str>,
}

impl Ctx<'_> {
    fn on(&self, check: &str) -> bool {
        self.selected.contains(&check)
    }
}

/// Checks to run: the scenario list (or every check of the command, minus
/// those without inputs), narrowed by `--check`.
fn select_checks(cmd: Command, scn: &Scenario, prep: &Prepared, filter: &[String]) -> CliResult<Vec<&'static str>> {
    let known = cmd.checks();
    for name in scn.checks.iter().chain(filter) {
        if !known.contains(&name.as_str()) {
            return Err(CliError::config("checks", format!("{name:?} is not a {} check (known: {known:?})", cmd.name())));
        }
    }
    let m = prep.ps.m();
    let defaults = |c: &&str| match *c {
        "convergence" | "ratio" => !prep.grid.is_empty(),
        "remainder" | "form-integral" => !prep.test_points.is_empty(),
        "phi" => m >= 2,
        _ => true,
    };
    let mut out: Vec<&'static str> = if scn.checks.is_empty() {
        known.iter().copied().filter(defaults).collect()
    } else {
        known.iter().copied().filter(|c| scn.checks.iter().any(|s| s == c)).collect()
    };
    if !filter.is_empty() {
        out.retain(|c| filter.iter().any(|f| f == c));
    }
    Ok(out)
}

fn type2_job(ctx: &Ctx<'_>, n: &MultiIndex) -> CliResult<(Vec<CheckReport>, Vec<ErrorRow>)> {
    let prep = ctx.prep;
    let ps = &prep.ps;
    let tol = &prep.tol;
    let at = |what: &str| format!("{what} at n={n}");
    let t2 = solve_type2(ps, n).map_err(|e| classify(at("type II solve"), e))?;
    let mut reports = Vec::new();
    if ctx.on("series") {
        reports.push(type2_series_check(&t2));
    }
    if ctx.on("orthogonality") {
        reports.push(
            orthogonality_residuals(&t2, ps, tol.orthogonality, tol.unimposed).map_err(|e| classify(at("orthogonality"), e))?,
        );
    }
    if ctx.on("remainder") {
        reports.push(remainder_check(&t2, ps, &prep.test_points, tol.remainder).map_err(|e| classify(at("remainder"), e))?);
    }
    if ctx.on("zeros") {
        let rep = zero_report_type2(&t2, ps, tol.zero_eps).map_err(|e| classify(at("zero localization"), e))?;
        let interior: usize = (1..=ps.m()).map(|j| n.get(j - 1).saturating_sub(ps.r(j).degree())).sum();
        reports.push(zero_check(&rep, n.abs(), interior));
    }
    if ctx.on("phi") {
        for j in 1..=ps.m() {
            reports.push(phi_sign_change_check(&t2, ps, j, tol.sign_grid).map_err(|e| classify(at("Phi sign changes"), e))?);
        }
    }
    let rows = if ctx.on("convergence") {
        type2_errors(&t2, ps, &prep.grid).map_err(|e| classify(at("convergence"), e))?
    } else {
        Vec::new()
    };
    Ok((reports, rows))
}

fn type1_job(ctx: &Ctx<'_>, n: &MultiIndex) -> CliResult<(Vec<CheckReport>, Vec<ErrorRow>)> {
    let prep = ctx.prep;
    let sys = prep.ps.base();
    let at = |what: &str| format!("{what} at n={n}");
    let t1 = solve_type1_multipoint(sys, &prep.t, n, &prep.nodes).map_err(|e| classify(at("type I solve"), e))?;
    let mut reports = Vec::new();
    if ctx.on("coefficient-zeros") {
        let c1 = prep.tol.c1.unwrap_or_else(|| default_c1(&prep.t));
        reports.push(type1_zero_counts(&t1, sys, c1).map_err(|e| classify(at("coefficient zeros"), e))?);
    }
    if ctx.on("form-integral") {
        reports.push(
            psl_identity_check(&t1, sys, &prep.test_points, prep.tol.identity).map_err(|e| classify(at("form integral"), e))?,
        );
    }
    let rows = if ctx.on("ratio") {
        type1_ratio_errors(&t1, sys, &prep.grid).map_err(|e| classify(at("ratio asymptotics"), e))?
    } else {
        Vec::new()
    };
    Ok((reports, rows))
}

/// Monotonicity along the sequence and the optional bound on the last error.
fn table_reports(table: &ErrorTable, check: &str, final_error: Option<f64>) -> CheckReport {
    let mut rep = table.monotonicity_report(check);
    if let Some(bound) = final_error {
        for j in table.components() {
            if let Some(last) = table.rows.iter().rev().find(|r| r.j == j) {
                rep.at_most(format!("final sup error at {}", last.multi_index), Some(j), last.sup_error, bound);
            }
        }
    }
    rep
}

type JobOutput = CliResult<(Vec<CheckReport>, Vec<ErrorRow>)>;

fn fan_out<F>(jobs: usize, lambda: &[MultiIndex], job: F) -> CliResult<Vec<(Vec<CheckReport>, Vec<ErrorRow>)>>
where
    F: Fn(&MultiIndex) -> JobOutput + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::config("--jobs", e))?;
    // par_iter + collect keeps the input order
    let results: Vec<JobOutput> = pool.install(|| lambda.par_iter().map(&job).collect());
    results.into_iter().collect()
}

fn sequence_run(
    cmd: Command,
    scn: &Scenario,
    ctx: &Ctx<'_>,
    jobs: usize,
) -> CliResult<(Vec<CheckReport>, Vec<ErrorTable>)> {
    let m = ctx.prep.ps.m();
    let (len, anchor, table_check, table_on) = match cmd {
        Command::Type2Run => (m, "type2-uniform-convergence", "convergence", ctx.on("convergence")),
        _ => (m + 1, "type1-ratio-asymptotics", "ratio", ctx.on("ratio")),
    };
    let lambda = scn.lambda(len)?;
    let results = match cmd {
        Command::Type2Run => fan_out(jobs, &lambda, |n| type2_job(ctx, n))?,
        _ => fan_out(jobs, &lambda, |n| type1_job(ctx, n))?,
    };
    let mut reports = Vec::new();
    let mut rows = Vec::new();
    for (r, e) in results {
        reports.extend(r);
        rows.extend(e);
    }
    let mut tables = Vec::new();
    if table_on {
        let table = ErrorTable::new(anchor, &ctx.prep.grid, rows);
        reports.push(table_reports(&table, table_check, ctx.prep.tol.final_error));
        tables.push(table);
    }
    Ok((reports, tables))
}

fn at_run(scn: &Scenario, prep: &Prepared, seed: u64) -> CliResult<Vec<CheckReport>> {
    let cfg = scn
        .sampler
        .as_ref()
        .ok_or_else(|| CliError::config("sampler", "at-check needs a sampler section"))?;
    let n = MultiIndex::new(cfg.index.clone()).map_err(|e| CliError::config("sampler.index", e))?;
    let a = parse_real(&cfg.interval[0]).map_err(|e| CliError::config("sampler.interval[0]", e))?;
    let b = parse_real(&cfg.interval[1]).map_err(|e| CliError::config("sampler.interval[1]", e))?;
    let rep = at_sampler(prep.ps.base(), &prep.t, &n, (&a, &b), cfg.trials, seed, cfg.grid)
        .map_err(|e| classify(format!("AT sampling at n={n}"), e))?;
    Ok(vec![rep])
}

fn identities_run(ctx: &Ctx<'_>) -> CliResult<Vec<CheckReport>> {
    let prep = ctx.prep;
    let tol = &prep.tol;
    let mut reports = Vec::new();
    for (i, g) in prep.ps.base().generators().iter().enumerate() {
        let j = i + 1;
        if ctx.on("inverse-series") {
            let k = tol.inverse_order;
            let mt = g.moment_table(k + 3);
            let inv = inverse_transform_series(&mt, k).map_err(|e| classify(format!("inverse series of sigma_{j}"), e))?;
            let mut rep = CheckReport::new("inverse-series", "inverse-transform-expansion");
            rep.at_most("max recomposition coefficient error", Some(j), inverse_recomposition_residual(&mt, &inv, k).to_f64(), tol.inverse);
            rep.meta("a", inv.a.to_f64());
            rep.meta("b", inv.b.to_f64());
            for (l, d) in inv.d.iter().take(3).enumerate() {
                rep.meta(&format!("d{l}"), d.to_f64());
            }
            rep.meta("order", k);
            reports.push(rep);
        }
        if ctx.on("carleman") {
            let terms = tol.carleman_terms;
            let mt = g.unit_interval_moments(terms + 1);
            let ind = carleman_indicator(&mt, terms).map_err(|e| classify(format!("Carleman indicator of sigma_{j}"), e))?;
            let mut rep = CheckReport::new("carleman", "carleman-indicator");
            let last = ind.partial_sums.last().map(|s| s.to_f64()).unwrap_or(0.0);
            if let Some(min) = tol.carleman_min_sum {
                rep.at_least(format!("partial sum S_{terms}"), Some(j), last, min);
            }
            rep.meta(&format!("S_{terms}"), last);
            rep.meta("verdict", if ind.divergent { "divergent" } else { "undetermined" });
            reports.push(rep);
        }
    }
    Ok(reports)
}

/// Loads, runs and writes one scenario. Check failures are part of the
/// outcome; only configuration, numerical and I/O failures are errors.
pub fn run_scenario(cmd: Command, path: &Path, opts: &RunOptions) -> CliResult<RunOutcome> {
    let mut scn = Scenario::load(path)?;
    if let Some(p) = opts.precision {
        scn.precision = p;
    }
    if let Some(s) = opts.seed {
        scn.seed = s;
    }
    let prep = scn.prepare()?;
    let selected = select_checks(cmd, &scn, &prep, &opts.check)?;
    let jobs = opts.jobs.unwrap_or(1).max(1);
    let ctx = Ctx { prep: &prep, selected };
    let (mut reports, tables) = match cmd {
        Command::Type2Run | Command::Type1Run => sequence_run(cmd, &scn, &ctx, jobs)?,
        Command::AtCheck => (at_run(&scn, &prep, scn.seed)?, Vec::new()),
        Command::Identities => (identities_run(&ctx)?, Vec::new()),
    };
    sort_reports(&mut reports);

    let out_dir = match (&opts.out, &scn.output) {
        (Some(o), _) => o.clone(),
        (None, Some(o)) => PathBuf::from(o),
        (None, None) => PathBuf::from("out").join(if scn.name.is_empty() { cmd.name() } else { &scn.name }),
    };
    std::fs::create_dir_all(&out_dir).map_err(|e| CliError::io(&out_dir, e))?;
    let mut files = vec!["checks.csv".to_string()];
    write_checks_csv(&out_dir.join("checks.csv"), &reports)?;
    for t in &tables {
        let name = if cmd == Command::Type2Run { "convergence.csv" } else { "ratio.csv" };
        write_table_csv(&out_dir.join(name), t)?;
        files.push(name.into());
    }
    let text = summary(&reports);
    write_text(&out_dir.join("summary.txt"), &text)?;
    files.push("summary.txt".into());
    let passed = reports.iter().all(CheckReport::passed);
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        subcommand: cmd.name(),
        scenario_path: path.display().to_string(),
        scenario: &scn,
        precision: precision(),
        seed: scn.seed,
        jobs,
        checks: ctx.selected.iter().map(|s| s.to_string()).collect(),
        files,
        passed,
        timestamp_unix: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
    };
    write_manifest(&out_dir.join("manifest.json"), &manifest)?;
    Ok(RunOutcome {
        reports,
        tables,
        out_dir,
        summary: text,
    })
}

/// Re-reads `checks.csv` from earlier runs, recomputes every verdict and
/// writes a combined summary. Returns the summary and whether all rows pass.
pub fn aggregate(dirs: &[PathBuf], out: Option<&Path>) -> CliResult<(String, bool)> {
    if dirs.is_empty() {
        return Err(CliError::config("report", "no result directories given"));
    }
    let mut text = String::new();
    let mut all_ok = true;
    for d in dirs {
        let rows = read_checks_csv(&d.join("checks.csv"))?;
        let failed: Vec<_> = rows.iter().filter(|r| !r.recomputed).collect();
        all_ok &= failed.is_empty();
        text.push_str(&format!(
            "{} {}: {} rows, {} failed\n",
            if failed.is_empty() { "PASS" } else { "FAIL" },
            d.display(),
            rows.len(),
            failed.len()
        ));
        for r in failed {
            text.push_str(&format!("  FAIL {} {} j={} {}: {} {} {}\n", r.fields[1], r.fields[0], r.fields[3], r.fields[4], r.fields[5], r.fields[7], r.fields[6]));
        }
    }
    if let Some(o) = out {
        std::fs::create_dir_all(o).map_err(|e| CliError::io(o, e))?;
        write_text(&o.join("report.txt"), &text)?;
    }
    Ok((text, all_ok))
}
