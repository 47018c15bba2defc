//! Randomized verification suites.
//!
//! Every suite runs independent trials; trial `k` draws from
//! [`trial_rng(seed, k)`](crate::random::trial_rng), so any failure can be
//! replayed from `(suite, seed, index, dim_max)` alone. Trials run on the rayon
//! pool when the `parallel` feature is enabled; results are ordered by trial
//! index either way.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::completion::{
    completion_from_y, decompose_solution, inertia_bound, min_index_factorization, schur_inertia, solve,
    verify_completion, Decomposition,
};
use crate::defect::{defect_data, link_operators, selfadjoint_defect_relations, verify_link_identities};
use crate::error::Error;
use crate::extension::{
    block_modulus_formula, criterion, extremal_pair, extremal_pair_via_completion, in_solution_set,
    inertia_sum_identity, lemma_implication_checks, membership, negation_duality, sample_extensions,
    signature_triple, solution_index, target_index, Variant,
};
use crate::generate;
use crate::krein::j_geq;
use crate::random::{random_orthogonal, random_psd, trial_rng, TrialRng};
use crate::spectral::{inertia, max_abs, max_diff, Mat, SymmetricMatrix, TolerancePolicy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Sylvester,
    Completion,
    ThmB,
    LinkOps,
    LemmaLjt2,
    LemmaLjt,
    LemmaWt,
    LemmaRanran,
    ExtensionSandwich,
    Negation,
    Reduction,
    Unsolvable,
}

impl Suite {
    pub const ALL: [Suite; 12] = [
        Suite::Sylvester,
        Suite::Completion,
        Suite::ThmB,
        Suite::LinkOps,
        Suite::LemmaLjt2,
        Suite::LemmaLjt,
        Suite::LemmaWt,
        Suite::LemmaRanran,
        Suite::ExtensionSandwich,
        Suite::Negation,
        Suite::Reduction,
        Suite::Unsolvable,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Sylvester => "sylvester",
            Suite::Completion => "completion",
            Suite::ThmB => "thmB",
            Suite::LinkOps => "linkops",
            Suite::LemmaLjt2 => "lemma-LJT2",
            Suite::LemmaLjt => "lemma-LJT",
            Suite::LemmaWt => "lemma-wT",
            Suite::LemmaRanran => "lemma-ranran",
            Suite::ExtensionSandwich => "extension-sandwich",
            Suite::Negation => "negation",
            Suite::Reduction => "reduction",
            Suite::Unsolvable => "unsolvable",
        }
    }

    fn trial(self) -> fn(&mut TrialRng, &SuiteConfig) -> TrialResult {
        match self {
            Suite::Sylvester => sylvester_trial,
            Suite::Completion => completion_trial,
            Suite::ThmB => thmb_trial,
            Suite::LinkOps => linkops_trial,
            Suite::LemmaLjt2 => ljt2_trial,
            Suite::LemmaLjt => ljt_trial,
            Suite::LemmaWt => lemma_wt_trial,
            Suite::LemmaRanran => lemma_ranran_trial,
            Suite::ExtensionSandwich => sandwich_trial,
            Suite::Negation => negation_trial,
            Suite::Reduction => reduction_trial,
            Suite::Unsolvable => unsolvable_trial,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                let names: Vec<_> = Suite::ALL.iter().map(|s| s.name()).collect();
                Error::Usage(format!("unknown suite {s:?}; expected one of {}", names.join(", ")))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteConfig {
    pub trials: usize,
    pub dim_max: usize,
    pub seed: u64,
    pub tol: TolerancePolicy,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            trials: 100,
            dim_max: 4,
            seed: 0,
            tol: TolerancePolicy::default(),
        }
    }
}

/// A failing trial's verdict and the matrices needed to inspect it.
#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub reason: String,
    pub matrices: BTreeMap<String, Mat>,
}

impl Counterexample {
    fn new(reason: impl Into<String>) -> Self {
        Self {
            reason: reason.into(),
            matrices: BTreeMap::new(),
        }
    }

    fn with(mut self, name: &str, m: &Mat) -> Self {
        self.matrices.insert(name.to_string(), m.clone());
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub index: usize,
    pub rejections: usize,
    pub failure: Option<Counterexample>,
}

impl TrialOutcome {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub config: SuiteConfig,
    pub passed: usize,
    pub failed: usize,
    pub rejections: usize,
    /// Failing trials in index order.
    pub failures: Vec<(usize, Counterexample)>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }

    /// Rejected draws over all draws.
    pub fn rejection_rate(&self) -> f64 {
        let total = self.rejections + self.config.trials;
        if total == 0 {
            0.0
        } else {
            self.rejections as f64 / total as f64
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

#[derive(Default)]
struct TrialResult {
    rejections: usize,
    failure: Option<Counterexample>,
}

impl TrialResult {
    fn rejected(&mut self, n: usize) {
        self.rejections += n;
    }

    fn fail(&mut self, c: Counterexample) {
        if self.failure.is_none() {
            self.failure = Some(c);
        }
    }

    fn check(&mut self, ok: bool, c: impl FnOnce() -> Counterexample) {
        if !ok {
            self.fail(c());
        }
    }

    fn error(&mut self, what: &str, e: Error) {
        self.fail(Counterexample::new(format!("{what}: {e}")));
    }
}

pub fn run_trial(suite: Suite, config: &SuiteConfig, index: usize) -> TrialOutcome {
    let mut rng = trial_rng(config.seed, index as u64);
    let r = (suite.trial())(&mut rng, config);
    TrialOutcome {
        index,
        rejections: r.rejections,
        failure: r.failure,
    }
}

/// Re-runs a single trial; identical to the trial inside [`run_suite`].
pub fn replay_trial(suite: Suite, config: &SuiteConfig, index: usize) -> TrialOutcome {
    run_trial(suite, config, index)
}

pub fn run_suite(suite: Suite, config: &SuiteConfig) -> SuiteReport {
    run_suite_with(suite, config, Execution::default())
}

pub fn run_suite_with(suite: Suite, config: &SuiteConfig, execution: Execution) -> SuiteReport {
    let outcomes = run_trials(suite, config, execution);
    let mut report = SuiteReport {
        suite,
        config: *config,
        passed: 0,
        failed: 0,
        rejections: 0,
        failures: Vec::new(),
    };
    for o in outcomes {
        report.rejections += o.rejections;
        match o.failure {
            None => report.passed += 1,
            Some(c) => {
                report.failed += 1;
                report.failures.push((o.index, c));
            }
        }
    }
    report
}

#[cfg(feature = "parallel")]
fn run_trials(suite: Suite, config: &SuiteConfig, execution: Execution) -> Vec<TrialOutcome> {
    use rayon::prelude::*;
    match execution {
        Execution::Parallel => (0..config.trials)
            .into_par_iter()
            .map(|k| run_trial(suite, config, k))
            .collect(),
        Execution::Sequential => (0..config.trials).map(|k| run_trial(suite, config, k)).collect(),
    }
}

#[cfg(not(feature = "parallel"))]
fn run_trials(suite: Suite, config: &SuiteConfig, _execution: Execution) -> Vec<TrialOutcome> {
    (0..config.trials).map(|k| run_trial(suite, config, k)).collect()
}

fn pick_variant(rng: &mut TrialRng) -> Variant {
    Variant::ALL[rng.random_range(0..Variant::ALL.len())]
}

fn sylvester_trial(rng: &mut TrialRng, cfg: &SuiteConfig) -> TrialResult {
    let mut r = TrialResult::default();
    let tol = &cfg.tol;
    let n = rng.random_range(1..=cfg.dim_max.max(1));
    let m = generate::random_gapped_symmetric(rng, n, 0.25);
    let singular: Vec<f64> = (0..n).map(|_| rng.random_range(0.3..3.0)).collect();
    let g = random_orthogonal(rng, n)
        * Mat::from_diagonal(&nalgebra::DVector::from_vec(singular))
        * random_orthogonal(rng, n);
    let congruent = SymmetricMatrix::symmetrize(&(g.transpose() * m.as_matrix() * &g));
    let (a, b) = (inertia(&m, tol), inertia(&congruent, tol));
    r.check(a == b, || {
        Counterexample::new(format!("inertia {a} changed to {b} under congruence"))
            .with("M", m.as_matrix())
            .with("G", &g)
    });
    let sign = crate::spectral::sign_operator(&m, tol);
    let modulus = crate::spectral::abs_power(&m, 1.0, tol).expect("supported exponent");
    let res = max_diff(&(sign.as_matrix() * modulus.as_matrix()), m.as_matrix());
    r.check(res <= tol.residual_bound(max_abs(m.as_matrix())), || {
        Counterexample::new(format!("sign(M)|M| != M (residual {res:.3e})")).with("M", m.as_matrix())
    });
    r
}

fn completion_trial(rng: &mut TrialRng, cfg: &SuiteConfig) -> TrialResult {
    let mut r = TrialResult::default();
    let tol = &cfg.tol;
    let (p, rej) = generate::solvable_completion(rng, cfg.dim_max, tol);
    r.rejected(rej);
    let instance = |c: Counterexample| c.with("A11", p.a11()).with("A12", p.a12()).with("J1", p.space().j1().matrix()).with("J2", p.space().j2().matrix());
    let sol = match solve(&p) {
        Ok(s) => s,
        Err(e) => {
            r.fail(instance(Counterexample::new(format!("solve failed: {e}"))));
            return r;
        }
    };
    match verify_completion(&p, &sol.a22_min) {
        Ok(c) => r.check(c.preserved, || {
            instance(Counterexample::new(format!("A22_min gives ν₋[A] = {} != κ = {}", c.kappa_a.nu_minus, p.kappa())))
        }),
        Err(e) => r.error("verify_completion", e),
    }
    let n2 = p.space().n2();
    let (rank, scale) = (rng.random_range(0..=n2), rng.random_range(0.1..3.0));
    let y = random_psd(rng, n2, rank, scale);
    match completion_from_y(&sol, &y).and_then(|a22| Ok((decompose_solution(&sol, &a22)?, a22))) {
        Ok((Decomposition::Member { y: back }, a22)) => {
            let res = max_diff(back.as_matrix(), y.as_matrix());
            r.check(res <= 1e-8, || instance(Counterexample::new(format!("Y round trip residual {res:.3e}")).with("Y", y.as_matrix())));
            r.check(j_geq(&a22, &sol.a22_min, p.space().j2(), tol).unwrap_or(false), || {
                instance(Counterexample::new("member not above A22_min").with("A22", &a22))
            });
            match verify_completion(&p, &a22) {
                Ok(c) => r.check(c.preserved, || instance(Counterexample::new("member does not preserve κ").with("A22", &a22))),
                Err(e) => r.error("verify_completion", e),
            }
        }
        Ok((Decomposition::Outside { .. }, a22)) => {
            r.fail(instance(Counterexample::new("A22_min + J₂Y classified outside").with("A22", &a22)))
        }
        Err(e) => r.error("decompose_solution", e),
    }
    for _ in 0..4 {
        let Some(a22) = generate::completion_candidate(rng, &p, &sol) else {
            r.rejected(1);
            continue;
        };
        match (verify_completion(&p, &a22), decompose_solution(&sol, &a22)) {
            (Ok(c), Ok(d)) => r.check(c.preserved == d.is_member(), || {
                instance(Counterexample::new(format!(
                    "index test says {} but decomposition says {}",
                    c.preserved,
                    d.is_member()
                )))
                .with("A22", &a22)
            }),
            (Err(e), _) | (_, Err(e)) => r.error("candidate", e),
        }
    }
    r
}

fn thmb_trial(rng: &mut TrialRng, cfg: &SuiteConfig) -> TrialResult {
    let mut r = TrialResult::default();
    let tol = &cfg.tol;
    let (inst, rej) = generate::bound_instance(rng, cfg.dim_max, tol);
    r.rejected(rej);
    let dump = |c: Counterexample, i: &generate::BoundInstance| {
        c.with("A", &i.a).with("B", &i.b).with("J1", i.j1.matrix()).with("J2", i.j2.matrix())
    };
    match inertia_bound(&inst.a, &inst.b, &inst.j1, &inst.j2, tol) {
        Ok(b) => r.check(b.holds, || dump(Counterexample::new(format!("bound fails: {} > {}", b.lhs.nu_minus, b.rhs_minus)), &inst)),
        Err(e) => r.error("inertia_bound", e),
    }
    match min_index_factorization(&inst.a, &inst.b, &inst.j1, &inst.j2, tol) {
        Ok(f) if f.equality_holds => r.check(f.k.is_some() && f.k_is_j_contraction, || {
            dump(Counterexample::new("equality holds but no J-contractive K"), &inst)
        }),
        Ok(_) => {}
        Err(e) => r.error("min_index_factorization", e),
    }
    if let Err(e) = schur_inertia(&inst.a, &inst.b, &inst.j1, &inst.j2, tol) {
        r.error("schur_inertia", e);
    }
    let (inst, rej) = generate::bound_instance_from_contraction(rng, cfg.dim_max, tol);
    r.rejected(rej);
    match min_index_factorization(&inst.a, &inst.b, &inst.j1, &inst.j2, tol) {
        Ok(f) => r.check(f.equality_holds && f.k_is_j_contraction, || {
            dump(Counterexample::new(format!("constructed from a J-contraction but lhs {} rhs {}", f.lhs, f.rhs)), &inst)
        }),
        Err(e) => r.error("min_index_factorization", e),
    }
    r
}

fn linkops_trial(rng: &mut TrialRng, cfg: &SuiteConfig) -> TrialResult {
    let mut r = TrialResult::default();
    let tol = &cfg.tol;
    let ((j, t), rej) = generate::link_instance(rng, cfg.dim_max, tol);
    r.rejected(rej);
    let outcome = defect_data(&t, &j, tol).and_then(|dd| {
        let lo = link_operators(&t, &j, &dd, tol)?;
        Ok(verify_link_identities(&t, &j, &dd, &lo))
    });
    match outcome {
        Ok(res) => r.check(res.max() <= 1e-8, || {
            Counterexample::new(format!("link identities: {res:?}")).with("T", &t).with("J", j.matrix())
        }),
        Err(e) => r.fail(Counterexample::new(format!("link operators: {e}")).with("T", &t).with("J", j.matrix())),
    }
    let ((j, t), rej) = generate::selfadjoint_instance(rng, cfg.dim_max, tol);
    r.rejected(rej);
    match selfadjoint_defect_relations(&t, &j, tol) {
        Ok(res) => r.check(res.max() <= 1e-8, || {
            Counterexample::new(format!("selfadjoint defect relations: {res:?}")).with("T", &t).with("J", j.matrix())
        }),
        Err(e) => r.fail(Counterexample::new(format!("selfadjoint defect relations: {e}")).with("T", &t).with("J", j.matrix())),
    }
    r
}

fn ljt2_trial(rng: &mut TrialRng, cfg: &SuiteConfig) -> TrialResult {
    let mut r = TrialResult::default();
    let ((j, t), rej) = generate::symmetric_pair(rng, cfg.dim_max, &cfg.tol);
    r.rejected(rej);
    match inertia_sum_identity(&j, &t, &cfg.tol) {
        Ok(s) => r.check(s.holds, || {
            Counterexample::new(format!("lhs {} rhs {} block {}", s.lhs, s.rhs, s.block))
                .with("J", j.matrix())
                .with("T", t.as_matrix())
        }),
        Err(e) => r.error("inertia_sum_identity", e),
    }
    r
}

fn ljt_trial(rng: &mut TrialRng, cfg: &SuiteConfig) -> TrialResult {
    let mut r = TrialResult::default();
    let n = rng.random_range(1..=cfg.dim_max.max(1));
    let j = crate::random::random_symmetry(rng, n);
    let scale = rng.random_range(0.3..3.0);
    let t = crate::random::random_symmetric(rng, n, scale);
    if let Err(e) = block_modulus_formula(&j, &t, &cfg.tol) {
        r.fail(Counterexample::new(e.to_string()).with("J", j.matrix()).with("T", t.as_matrix()));
    }
    r
}

fn dump_problem(c: Counterexample, p: &crate::extension::ExtensionProblem) -> Counterexample {
    Counterexample {
        reason: format!("[{}] {}", p.variant(), c.reason),
        matrices: c.matrices,
    }
    .with("T11", p.t11())
    .with("T21", p.t21())
    .with("J1", p.space().j1().matrix())
    .with("J2", p.space().j2().matrix())
}

fn lemma_wt_trial(rng: &mut TrialRng, cfg: &SuiteConfig) -> TrialResult {
    let mut r = TrialResult::default();
    let tol = &cfg.tol;
    let variant = if rng.random_bool(0.5) { Variant::Pontryagin } else { Variant::Hilbert };
    let (p, rej) = generate::solvable_extension(rng, variant, cfg.dim_max, tol);
    r.rejected(rej);
    let pair = match extremal_pair(&p) {
        Ok(pair) => pair,
        Err(e) => {
            r.fail(dump_problem(Counterexample::new(format!("extremal_pair: {e}")), &p));
            return r;
        }
    };
    let pp = p.with_variant(Variant::Pontryagin).expect("valid problem");
    for k in 0..4 {
        let Some(t) = generate::candidate_extension(rng, &p, &pair, k % 2 == 0) else {
            r.rejected(1);
            continue;
        };
        match lemma_implication_checks(&pp, Some(&t)) {
            Ok(rep) => r.check(rep.holds(), || dump_problem(Counterexample::new(rep.violations.join("; ")), &p).with("T", &t)),
            Err(e) => r.error("lemma checks", e),
        }
    }
    r
}

fn lemma_ranran_trial(rng: &mut TrialRng, cfg: &SuiteConfig) -> TrialResult {
    let mut r = TrialResult::default();
    let (p, rej) = generate::any_extension(rng, Variant::Pontryagin, cfg.dim_max, &cfg.tol);
    r.rejected(rej);
    match lemma_implication_checks(&p, None) {
        Ok(rep) => r.check(rep.holds(), || dump_problem(Counterexample::new(rep.violations.join("; ")), &p)),
        Err(e) => r.error("lemma checks", e),
    }
    r
}

fn sandwich_trial(rng: &mut TrialRng, cfg: &SuiteConfig) -> TrialResult {
    let mut r = TrialResult::default();
    let tol = &cfg.tol;
    let (p, rej) = generate::solvable_extension(rng, Variant::Pontryagin, cfg.dim_max, tol);
    r.rejected(rej);
    let pair = match extremal_pair(&p) {
        Ok(pair) => pair,
        Err(e) => {
            r.fail(dump_problem(Counterexample::new(format!("extremal_pair: {e}")), &p));
            return r;
        }
    };
    let triple = signature_triple(&p);
    r.check(triple.invariants_hold(&p), || dump_problem(Counterexample::new("signature triple identities"), &p));
    match extremal_pair_via_completion(&p) {
        Ok((tm, tmax)) => {
            let res = max_diff(&tm, &pair.t_min).max(max_diff(&tmax, &pair.t_max));
            r.check(res <= 1e-8, || {
                dump_problem(Counterexample::new(format!("completion route differs by {res:.3e}")), &p)
            });
        }
        Err(e) => r.error("extremal_pair_via_completion", e),
    }
    for k in 0..10 {
        let Some(t) = generate::candidate_extension(rng, &p, &pair, k % 2 == 0) else {
            r.rejected(1);
            continue;
        };
        match (membership(&p, &pair, &t), in_solution_set(&p, &t)) {
            (Ok(a), Ok(b)) => r.check(a == b, || {
                dump_problem(Counterexample::new(format!("sandwich says {a}, index says {b}")), &p).with("T", &t)
            }),
            (Err(e), _) | (_, Err(e)) => r.error("membership", e),
        }
    }
    match sample_extensions(&p, &pair, 3, rng.random()) {
        Ok(samples) => {
            for s in samples {
                let ok = membership(&p, &pair, &s).unwrap_or(false) && in_solution_set(&p, &s).unwrap_or(false);
                r.check(ok, || dump_problem(Counterexample::new("sample outside the solution set"), &p).with("T", &s));
            }
        }
        Err(e) => r.error("sample_extensions", e),
    }
    r
}

fn negation_trial(rng: &mut TrialRng, cfg: &SuiteConfig) -> TrialResult {
    let mut r = TrialResult::default();
    let variant = pick_variant(rng);
    let (p, rej) = generate::solvable_extension(rng, variant, cfg.dim_max, &cfg.tol);
    r.rejected(rej);
    match extremal_pair(&p).and_then(|pair| negation_duality(&p, &pair)) {
        Ok(n) => r.check(n.holds, || dump_problem(Counterexample::new(format!("negation residual {:.3e}", n.residual)), &p)),
        Err(e) => r.fail(dump_problem(Counterexample::new(e.to_string()), &p)),
    }
    r
}

fn reduction_trial(rng: &mut TrialRng, cfg: &SuiteConfig) -> TrialResult {
    let mut r = TrialResult::default();
    let (p, rej) = generate::solvable_extension(rng, Variant::Hilbert, cfg.dim_max, &cfg.tol);
    r.rejected(rej);
    let pairs: Result<Vec<_>, Error> = Variant::ALL
        .iter()
        .map(|&v| extremal_pair(&p.with_variant(v)?))
        .collect();
    match pairs {
        Ok(pairs) => {
            let h = &pairs[0];
            for other in &pairs[1..] {
                let res = max_diff(&h.t_min, &other.t_min).max(max_diff(&h.t_max, &other.t_max));
                r.check(res <= 1e-8, || {
                    dump_problem(Counterexample::new(format!("{} differs from hilbert by {res:.3e}", other.variant)), &p)
                });
            }
        }
        Err(e) => r.fail(dump_problem(Counterexample::new(e.to_string()), &p)),
    }
    r
}

/// Grid of `T22` values scanned for a one-dimensional `ℋ₂`.
pub const GRID_POINTS: usize = 10_000;
pub const GRID_RADIUS: f64 = 10.0;

fn unsolvable_trial(rng: &mut TrialRng, cfg: &SuiteConfig) -> TrialResult {
    let mut r = TrialResult::default();
    let tol = &cfg.tol;
    let (p, rej) = generate::failing_extension(rng, Variant::Pontryagin, cfg.dim_max, Some(1), tol);
    r.rejected(rej);
    let c = criterion(&p);
    r.check(
        matches!(extremal_pair(&p), Err(Error::NoSolution { .. })),
        || dump_problem(Counterexample::new("solver did not report no solution"), &p),
    );
    let target = c.lhs as i64 - p.space().j2().nu_minus() as i64;
    debug_assert_eq!(target_index(&p).map(|t| t as i64), (target >= 0).then_some(target));
    for k in 0..GRID_POINTS {
        let x = -GRID_RADIUS + 2.0 * GRID_RADIUS * k as f64 / (GRID_POINTS - 1) as f64;
        let t = p.assemble(&Mat::from_element(1, 1, x)).expect("1x1 block");
        match solution_index(&p, &t) {
            Ok(idx) if idx as i64 == target => {
                r.fail(dump_problem(Counterexample::new(format!("T22 = {x} attains the target index")), &p));
                break;
            }
            Ok(_) => {}
            Err(e) => {
                r.error("solution_index", e);
                break;
            }
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(trials: usize) -> SuiteConfig {
        SuiteConfig {
            trials,
            dim_max: 4,
            seed: 20,
            tol: TolerancePolicy::default(),
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!(matches!("nope".parse::<Suite>(), Err(Error::Usage(_))));
    }

    #[test]
    fn zero_trials_is_vacuous_pass() {
        let r = run_suite(Suite::Completion, &cfg(0));
        assert!(r.ok());
        assert_eq!(r.passed, 0);
    }

    #[test]
    fn every_suite_passes_a_few_trials() {
        for s in Suite::ALL {
            let r = run_suite(s, &cfg(8));
            assert!(r.ok(), "{s}: {:?}", r.failures.first());
        }
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let c = cfg(12);
        let a = run_suite_with(Suite::ExtensionSandwich, &c, Execution::Sequential);
        let b = run_suite_with(Suite::ExtensionSandwich, &c, Execution::Parallel);
        assert_eq!(a, b);
    }

    #[test]
    fn replay_matches_run() {
        let c = cfg(5);
        for k in 0..5 {
            assert_eq!(replay_trial(Suite::Negation, &c, k), run_trial(Suite::Negation, &c, k));
        }
    }
}
