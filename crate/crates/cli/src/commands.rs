use std::path::Path;

use krein_core::completion::{completion_from_y, solvable, solve, verify_completion, CompletionProblem};
use krein_core::extension::{
    criterion, extremal_pair, membership, sample_extensions, signature_triple, solution_index, ExtensionProblem,
};
use krein_core::krein::{j_form, negative_squares};
use krein_core::random::{random_psd, trial_rng, well_separated};
use krein_core::spectral::{eigh, inertia, SymmetricMatrix};
use krein_core::verify::{replay_trial, run_suite, Counterexample, Suite, SuiteConfig, SuiteReport};
use krein_core::{Error, Mat, TolerancePolicy};
use rand::Rng;
use serde_json::{json, Map, Value};

use crate::error::CliError;
use crate::problem::ProblemFile;
use crate::report::{self, matrix, number};

/// Tolerance overrides given on the command line.
#[derive(Debug, Clone, Copy, Default)]
pub struct Options {
    pub tol_zero: Option<f64>,
    pub tol_residual: Option<f64>,
}

/// A finished command: its report and the process exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct CmdOutput {
    pub report: Value,
    pub exit_code: i32,
}

impl CmdOutput {
    fn ok(report: Value) -> Self {
        Self { report, exit_code: 0 }
    }
}

fn load(path: &Path, opts: &Options) -> Result<(ProblemFile, TolerancePolicy), CliError> {
    let file = ProblemFile::load(path)?;
    let tol = file.tolerances(opts.tol_zero, opts.tol_residual)?;
    Ok((file, tol))
}

pub fn cmd_inertia(path: &Path, opts: &Options) -> Result<CmdOutput, CliError> {
    let (file, tol) = load(path, opts)?;
    let (m, j) = file.inertia_input(&tol)?;
    let mut r = Map::new();
    r.insert("command".into(), json!("inertia"));
    r.insert("dimension".into(), json!(m.nrows()));
    r.insert("matrix".into(), matrix(&m));
    r.insert("tolerances".into(), report::tolerances(&tol));
    match &j {
        None => {
            let s = SymmetricMatrix::with_tolerance(m, &tol)?;
            r.insert("inertia".into(), report::inertia(&inertia(&s, &tol)));
        }
        Some(j) => {
            r.insert("J".into(), matrix(j.matrix()));
            let form = negative_squares(&m, j, &tol)?;
            r.insert("negative_squares".into(), json!(form.nu_minus));
            r.insert("form_inertia".into(), report::inertia(&form));
            if let Ok(s) = SymmetricMatrix::with_tolerance(m.clone(), &tol) {
                r.insert("inertia".into(), report::inertia(&inertia(&s, &tol)));
            }
        }
    }
    Ok(CmdOutput::ok(Value::Object(r)))
}

fn completion_input(p: &CompletionProblem) -> Value {
    json!({
        "kind": "completion",
        "J1": matrix(p.space().j1().matrix()),
        "J2": matrix(p.space().j2().matrix()),
        "A11": matrix(p.a11()),
        "A12": matrix(p.a12()),
        "n1": p.space().n1(),
        "n2": p.space().n2(),
    })
}

fn spectral_norm(m: &Mat) -> f64 {
    if m.is_empty() {
        0.0
    } else {
        m.clone().singular_values().max()
    }
}

pub fn cmd_complete(path: &Path, sample: usize, seed: u64, opts: &Options) -> Result<CmdOutput, CliError> {
    let (file, tol) = load(path, opts)?;
    let p = file.completion_problem(&tol)?;
    let sv = solvable(&p);
    let j1a11 = j_form(p.a11(), p.space().j1(), &tol)?;
    let mut r = Map::new();
    r.insert("command".into(), json!("complete"));
    r.insert("input".into(), completion_input(&p));
    r.insert("tolerances".into(), report::tolerances(&tol));
    r.insert("kappa".into(), json!(p.kappa()));
    r.insert(
        "range_criterion".into(),
        json!({
            "included": sv.ok,
            "residual": number(sv.witness.residual),
            "bound": number(sv.witness.bound),
        }),
    );
    r.insert("seed".into(), json!(seed));
    if !sv.ok {
        r.insert("outcome".into(), json!("unsolvable"));
        return Ok(CmdOutput::ok(Value::Object(r)));
    }
    let sol = solve(&p)?;
    r.insert("outcome".into(), json!("solved"));
    r.insert("S".into(), matrix(&sol.s));
    r.insert("J11".into(), matrix(sol.j11.as_matrix()));
    r.insert("A22_min".into(), matrix(&sol.a22_min));
    r.insert(
        "diagnostics".into(),
        json!({
            "ill_conditioned": sol.ill_conditioned,
            "near_boundary": !well_separated(&eigh(&j1a11), &tol),
        }),
    );
    // Y = GᵀG rescaled to norm u·(2‖A22_min‖ + 1), u ∈ (0, 1]
    let n2 = p.space().n2();
    let cap = 2.0 * spectral_norm(&sol.a22_min) + 1.0;
    let mut samples = Vec::with_capacity(sample);
    for k in 0..sample {
        let mut rng = trial_rng(seed, k as u64);
        let rank = rng.random_range(1..=n2);
        let g = random_psd(&mut rng, n2, rank, 1.0);
        let u: f64 = 1.0 - rng.random::<f64>();
        let y = SymmetricMatrix::symmetrize(&(g.as_matrix() * (u * cap / spectral_norm(g.as_matrix()).max(f64::MIN_POSITIVE))));
        let a22 = completion_from_y(&sol, &y)?;
        let check = verify_completion(&p, &a22)?;
        if !check.preserved {
            return Err(Error::Numerical(format!(
                "sample {k} has ν₋[A] = {} instead of {}",
                check.kappa_a.nu_minus,
                p.kappa()
            ))
            .into());
        }
        samples.push(json!({
            "Y": matrix(y.as_matrix()),
            "A22": matrix(&a22),
            "nu_minus": check.kappa_a.nu_minus,
            "preserved": check.preserved,
        }));
    }
    r.insert("samples".into(), Value::Array(samples));
    Ok(CmdOutput::ok(Value::Object(r)))
}

fn extension_input(p: &ExtensionProblem) -> Value {
    json!({
        "kind": "extension",
        "variant": p.variant().name(),
        "J1": matrix(p.space().j1().matrix()),
        "J2": matrix(p.space().j2().matrix()),
        "T11": matrix(p.t11()),
        "T21": matrix(p.t21()),
        "n1": p.space().n1(),
        "n2": p.space().n2(),
    })
}

pub fn cmd_extend(path: &Path, sample: usize, seed: u64, opts: &Options) -> Result<CmdOutput, CliError> {
    let (file, tol) = load(path, opts)?;
    let p = file.extension_problem(&tol)?;
    let c = criterion(&p);
    let triple = signature_triple(&p);
    let mut r = Map::new();
    r.insert("command".into(), json!("extend"));
    r.insert("input".into(), extension_input(&p));
    r.insert("tolerances".into(), report::tolerances(&tol));
    r.insert("seed".into(), json!(seed));
    r.insert(
        "criterion".into(),
        json!({ "lhs": c.lhs, "rhs": c.rhs, "holds": c.holds }),
    );
    r.insert("kappa".into(), json!(triple.kappa));
    r.insert("kappa_plus".into(), json!(triple.kappa_plus));
    r.insert("kappa_minus".into(), json!(triple.kappa_minus));
    r.insert(
        "signature".into(),
        json!({
            "J_plus": matrix(triple.j_plus.as_matrix()),
            "J_minus": matrix(triple.j_minus.as_matrix()),
            "J11": matrix(triple.j11.as_matrix()),
        }),
    );
    r.insert("diagnostics".into(), json!({ "near_boundary": c.near_boundary }));
    if !c.holds {
        r.insert("outcome".into(), json!("no solution"));
        return Ok(CmdOutput::ok(Value::Object(r)));
    }
    let pair = extremal_pair(&p)?;
    r.insert("outcome".into(), json!("solved"));
    r.insert("T_m".into(), matrix(&pair.t_min));
    r.insert("T_M".into(), matrix(&pair.t_max));
    r.insert("V".into(), matrix(&pair.v));
    r.insert("D_T11".into(), matrix(pair.d_t11.as_matrix()));
    r.insert("gap22".into(), matrix(&pair.gap22));
    r.insert("target_index".into(), json!(pair.diagnostics.target_index));
    r.insert("unique".into(), json!(pair.is_unique(&tol)));
    let mut samples = Vec::with_capacity(sample);
    for (k, t) in sample_extensions(&p, &pair, sample, seed)?.into_iter().enumerate() {
        let member = membership(&p, &pair, &t)?;
        let index = solution_index(&p, &t)?;
        if !member || index != pair.diagnostics.target_index {
            return Err(Error::Numerical(format!("sample {k} left the solution set")).into());
        }
        samples.push(json!({ "T": matrix(&t), "member": member, "index": index }));
    }
    r.insert("samples".into(), Value::Array(samples));
    Ok(CmdOutput::ok(Value::Object(r)))
}

/// Arguments of the `verify` command.
#[derive(Debug, Clone)]
pub struct VerifyArgs {
    /// Suite name, or `all`.
    pub suite: String,
    pub trials: usize,
    pub dim_max: usize,
    pub seed: u64,
    /// Re-run only this trial index.
    pub trial: Option<usize>,
}

fn counterexample(index: usize, c: &Counterexample) -> Value {
    let instance: Map<String, Value> = c.matrices.iter().map(|(k, m)| (k.clone(), matrix(m))).collect();
    json!({ "trial": index, "reason": c.reason, "instance": instance })
}

fn suite_report(r: &SuiteReport) -> Value {
    json!({
        "suite": r.suite.name(),
        "passed": r.passed,
        "failed": r.failed,
        "rejections": r.rejections,
        "rejection_rate": number(r.rejection_rate()),
        "failures": r.failures.iter().map(|(i, c)| counterexample(*i, c)).collect::<Vec<_>>(),
    })
}

pub fn cmd_verify(args: &VerifyArgs, opts: &Options) -> Result<CmdOutput, CliError> {
    let suites: Vec<Suite> = if args.suite.eq_ignore_ascii_case("all") {
        Suite::ALL.to_vec()
    } else {
        vec![args.suite.parse()?]
    };
    if args.dim_max == 0 {
        return Err(CliError::Parse("--dim-max must be at least 1".into()));
    }
    let base = TolerancePolicy::default();
    let tol = TolerancePolicy::new(
        opts.tol_zero.unwrap_or(base.relative_zero),
        opts.tol_residual.unwrap_or(base.residual_tol),
    )?;
    let config = SuiteConfig {
        trials: args.trials,
        dim_max: args.dim_max,
        seed: args.seed,
        tol,
    };
    let mut r = Map::new();
    r.insert("command".into(), json!("verify"));
    r.insert("seed".into(), json!(args.seed));
    r.insert("dim_max".into(), json!(args.dim_max));
    r.insert("tolerances".into(), report::tolerances(&tol));
    let mut failed = 0;
    let mut reports = Vec::new();
    match args.trial {
        Some(index) => {
            r.insert("trial".into(), json!(index));
            for s in suites {
                let o = replay_trial(s, &config, index);
                failed += usize::from(!o.passed());
                reports.push(json!({
                    "suite": s.name(),
                    "passed": o.passed(),
                    "rejections": o.rejections,
                    "failure": o.failure.as_ref().map(|c| counterexample(index, c)),
                }));
            }
        }
        None => {
            r.insert("trials".into(), json!(args.trials));
            for s in suites {
                let rep = run_suite(s, &config);
                failed += rep.failed;
                reports.push(suite_report(&rep));
            }
        }
    }
    r.insert("suites".into(), Value::Array(reports));
    r.insert("outcome".into(), json!(if failed == 0 { "pass" } else { "fail" }));
    Ok(CmdOutput {
        report: Value::Object(r),
        exit_code: if failed == 0 { 0 } else { 3 },
    })
}
