//! Selfadjoint extensions of a column `T₁ = (T11; T21)` that keep the
//! negative index of `I − T²` as small as possible.
//!
//! Three settings are supported, chosen explicitly by [`Variant`]:
//! a Hilbert space (`J₁ = J₂ = I`), a Kreĭn space with Euclidean-adjoint
//! criterion, and the general Pontryagin-type setting with Kreĭn adjoints.
//! When a solution exists the solution set is an order interval
//! `T_m ≤_J T ≤_J T_M` in the free `(2,2)` block.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::completion::{solve, CompletionProblem};
use crate::defect::{defect_data, link_operators};
use crate::error::{dim_err, Error, Result};
use crate::krein::{j_adjoint, j_form, j_geq, negative_squares, BlockSpace, FundamentalSymmetry};
use crate::random::{random_orthogonal, trial_rng, well_separated, BOUNDARY_FACTOR};
use crate::spectral::{
    abs_power, abs_power_of, eigh, inertia, max_abs, max_diff, range_inclusion, Mat, SymmetricMatrix,
    TolerancePolicy,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    Hilbert,
    Krein,
    Pontryagin,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Hilbert, Variant::Krein, Variant::Pontryagin];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Hilbert => "hilbert",
            Variant::Krein => "krein",
            Variant::Pontryagin => "pontryagin",
        }
    }

    /// Hilbert and Kreĭn variants work with the symmetric operator `T̃ = J T`.
    fn uses_tilde(self) -> bool {
        !matches!(self, Variant::Pontryagin)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hilbert" => Ok(Variant::Hilbert),
            "krein" | "kreĭn" => Ok(Variant::Krein),
            "pontryagin" => Ok(Variant::Pontryagin),
            other => Err(Error::Usage(format!(
                "unknown variant {other:?} (expected hilbert, krein or pontryagin)"
            ))),
        }
    }
}

fn sym(m: &Mat) -> SymmetricMatrix {
    SymmetricMatrix::symmetrize(m)
}

fn eye(n: usize) -> Mat {
    Mat::identity(n, n)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionProblem {
    space: BlockSpace,
    t11: Mat,
    t21: Mat,
    variant: Variant,
    tol: TolerancePolicy,
}

impl ExtensionProblem {
    pub fn new(space: BlockSpace, t11: Mat, t21: Mat, variant: Variant, tol: TolerancePolicy) -> Result<Self> {
        let (n1, n2) = (space.n1(), space.n2());
        if t11.shape() != (n1, n1) {
            return Err(dim_err(format!(
                "T11 must be {n1}x{n1}, got {}x{}",
                t11.nrows(),
                t11.ncols()
            )));
        }
        if t21.shape() != (n2, n1) {
            return Err(dim_err(format!(
                "T21 must be {n2}x{n1}, got {}x{}",
                t21.nrows(),
                t21.ncols()
            )));
        }
        if variant == Variant::Hilbert && !(space.j1().is_identity() && space.j2().is_identity()) {
            return Err(Error::Usage("the hilbert variant requires J1 = I and J2 = I".into()));
        }
        j_form(&t11, space.j1(), &tol)?;
        Ok(Self {
            space,
            t11,
            t21,
            variant,
            tol,
        })
    }

    pub fn space(&self) -> &BlockSpace {
        &self.space
    }

    pub fn t11(&self) -> &Mat {
        &self.t11
    }

    pub fn t21(&self) -> &Mat {
        &self.t21
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn tol(&self) -> &TolerancePolicy {
        &self.tol
    }

    /// `T12 = T21^{[*]} = J₁ T21ᵀ J₂`.
    pub fn t12(&self) -> Mat {
        j_adjoint(&self.t21, self.space.j1(), self.space.j2()).expect("shape checked on construction")
    }

    /// The column `T₁ = (T11; T21)`.
    pub fn column(&self) -> Mat {
        let (n1, n2) = (self.space.n1(), self.space.n2());
        let mut c = Mat::zeros(n1 + n2, n1);
        c.view_mut((0, 0), (n1, n1)).copy_from(&self.t11);
        c.view_mut((n1, 0), (n2, n1)).copy_from(&self.t21);
        c
    }

    /// The same data with another variant.
    pub fn with_variant(&self, variant: Variant) -> Result<Self> {
        Self::new(self.space.clone(), self.t11.clone(), self.t21.clone(), variant, self.tol)
    }

    /// The problem for `−T₁`.
    pub fn negated(&self) -> Self {
        Self {
            t11: -&self.t11,
            t21: -&self.t21,
            ..self.clone()
        }
    }

    /// The extension with the given free block.
    pub fn assemble(&self, t22: &Mat) -> Result<Mat> {
        let n2 = self.space.n2();
        if t22.shape() != (n2, n2) {
            return Err(dim_err(format!("T22 must be {n2}x{n2}")));
        }
        Ok(self.space.assemble(&self.t11, &self.t12(), &self.t21, t22))
    }

    /// Whether `t` has `T11`, `T21` as its first block column.
    pub fn extends(&self, t: &Mat) -> bool {
        let n = self.space.j.dim();
        if t.shape() != (n, n) {
            return false;
        }
        let (b11, _, b21, _) = self.space.blocks(t);
        let bound = self.tol.residual_bound(max_abs(&self.column()));
        max_diff(&b11, &self.t11) <= bound && (b21.is_empty() || max_diff(&b21, &self.t21) <= bound)
    }

    /// Metric used by the defect form: `I` for the Hilbert and Kreĭn variants, `J₁` otherwise.
    fn defect_metric(&self) -> Mat {
        if self.variant.uses_tilde() {
            eye(self.space.n1())
        } else {
            self.space.j1().matrix().clone()
        }
    }

    /// `J₁(I − T11²)` (Pontryagin) or `I − T11ᵀT11` (Hilbert, Kreĭn).
    fn defect_form(&self) -> SymmetricMatrix {
        let g = self.defect_metric();
        sym(&(&g - self.t11.transpose() * &g * &self.t11))
    }
}

/// Both sides of the solvability criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Criterion {
    pub holds: bool,
    pub lhs: usize,
    pub rhs: usize,
    /// Some eigenvalue entering either side lies just above the zero threshold.
    pub near_boundary: bool,
}

pub fn criterion(p: &ExtensionProblem) -> Criterion {
    let reduced_metric = if p.variant.uses_tilde() {
        eye(p.space.n2())
    } else {
        p.space.j2().matrix().clone()
    };
    let x = p.defect_form();
    let y = sym(&(x.as_matrix() - p.t21.transpose() * reduced_metric * &p.t21));
    let (ex, ey) = (eigh(&x), eigh(&y));
    let lhs = ex.inertia(&p.tol).nu_minus;
    let mut rhs = ey.inertia(&p.tol).nu_minus;
    if !p.variant.uses_tilde() {
        rhs += p.space.j2().nu_minus();
    }
    Criterion {
        holds: lhs == rhs,
        lhs,
        rhs,
        near_boundary: !(well_separated(&ex, &p.tol) && well_separated(&ey, &p.tol)),
    }
}

/// Signature operators and indices of `I ∓ T11` and `I − T11²`.
#[derive(Debug, Clone, PartialEq)]
pub struct SignatureTriple {
    pub j_plus: SymmetricMatrix,
    pub j_minus: SymmetricMatrix,
    pub j11: SymmetricMatrix,
    pub kappa_plus: usize,
    pub kappa_minus: usize,
    pub kappa: usize,
}

pub fn signature_triple(p: &ExtensionProblem) -> SignatureTriple {
    let n1 = p.space.n1();
    let g = p.defect_metric();
    // J₁T11 is symmetric; it is T̃11 for the Hilbert and Kreĭn variants
    let t = p.space.j1().matrix() * &p.t11;
    let sign_and_index = |m: &Mat| {
        let e = eigh(&sym(m));
        let thr = e.zero_threshold(&p.tol);
        (e.map(|l| if l < -thr { -1.0 } else { 1.0 }), e.inertia(&p.tol).nu_minus)
    };
    let (j_plus, kappa_plus) = sign_and_index(&(&g - &t));
    let (j_minus, kappa_minus) = sign_and_index(&(&g + &t));
    let (j11, kappa) = sign_and_index(p.defect_form().as_matrix());
    debug_assert_eq!(j11.dim(), n1);
    SignatureTriple {
        j_plus,
        j_minus,
        j11,
        kappa_plus,
        kappa_minus,
        kappa,
    }
}

impl SignatureTriple {
    /// `J11 = J₋J₊ = J₊J₋` and `κ = κ₊ + κ₋` for the Hilbert and Kreĭn variants;
    /// `κ + ν₋(J₁) = κ₊ + κ₋` for the Pontryagin variant, where `I ∓ T11` need not commute
    /// with `J₁`.
    pub fn invariants_hold(&self, p: &ExtensionProblem) -> bool {
        if p.variant.uses_tilde() {
            let (jp, jm) = (self.j_plus.as_matrix(), self.j_minus.as_matrix());
            let bound = p.tol.residual_bound(1.0);
            max_diff(self.j11.as_matrix(), &(jm * jp)) <= bound
                && max_diff(&(jm * jp), &(jp * jm)) <= bound
                && self.kappa == self.kappa_plus + self.kappa_minus
        } else {
            self.kappa + p.space.j1().nu_minus() == self.kappa_plus + self.kappa_minus
        }
    }
}

/// `V` with `J₁T21^{[*]} = D·Vᵀ` and `ker V ⊇ ker D`, where `D` is the defect
/// root of `T11` for the variant. Stored as an `n₂ × n₁` matrix.
pub fn build_v(p: &ExtensionProblem) -> Result<Mat> {
    let d = abs_power(&p.defect_form(), 0.5, &p.tol)?;
    let target = if p.variant.uses_tilde() {
        p.t21.transpose() * p.space.j2().matrix()
    } else {
        p.space.j1().matrix() * p.t12()
    };
    let fit = range_inclusion(&target, &d, &p.tol)?;
    if !fit.included {
        return Err(Error::Numerical(format!(
            "criterion/range mismatch: residual {:.3e} exceeds {:.3e}",
            fit.residual, fit.bound
        )));
    }
    Ok(fit.coefficients.transpose())
}

/// Residuals and flags checked when the pair is built.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairDiagnostics {
    pub extends_residual: f64,
    pub gap_residual: f64,
    pub index_min: usize,
    pub index_max: usize,
    pub target_index: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtremalPair {
    pub variant: Variant,
    pub t_min: Mat,
    pub t_max: Mat,
    /// `n₂ × n₁`, vanishing on `ker D`.
    pub v: Mat,
    pub d_t11: SymmetricMatrix,
    pub j11: SymmetricMatrix,
    /// `(2,2)` block of `T_M − T_m`.
    pub gap22: Mat,
    pub diagnostics: PairDiagnostics,
}

impl ExtremalPair {
    pub fn min22(&self) -> Mat {
        let n2 = self.gap22.nrows();
        let n = self.t_min.nrows();
        self.t_min.view((n - n2, n - n2), (n2, n2)).into_owned()
    }

    pub fn is_unique(&self, tol: &TolerancePolicy) -> bool {
        max_abs(&self.gap22) <= tol.residual_bound(1.0)
    }
}

/// `ν₋` of `I − T²` in the variant's sense; the solution set is the set of
/// J-selfadjoint extensions where this equals [`target_index`].
pub fn solution_index(p: &ExtensionProblem, t: &Mat) -> Result<usize> {
    let n = p.space.j.dim();
    if t.shape() != (n, n) {
        return Err(dim_err(format!("extension must be {n}x{n}")));
    }
    if p.variant.uses_tilde() {
        Ok(inertia(&sym(&(eye(n) - t.transpose() * t)), &p.tol).nu_minus)
    } else {
        Ok(negative_squares(&(eye(n) - t * t), &p.space.j, &p.tol)?.nu_minus)
    }
}

/// `κ − ν₋(J₂)` (Pontryagin) or `κ`; `None` when negative.
pub fn target_index(p: &ExtensionProblem) -> Option<usize> {
    let c = criterion(p);
    if p.variant.uses_tilde() {
        Some(c.lhs)
    } else {
        c.lhs.checked_sub(p.space.j2().nu_minus())
    }
}

/// `ν₋[I + s·T]` in the variant's sense, `s = ±1`.
fn shifted_index(p: &ExtensionProblem, t: &Mat, s: f64) -> Result<usize> {
    let n = p.space.j.dim();
    if p.variant.uses_tilde() {
        Ok(inertia(&sym(&(eye(n) + p.space.j.matrix() * t * s)), &p.tol).nu_minus)
    } else {
        Ok(negative_squares(&(eye(n) + t * s), &p.space.j, &p.tol)?.nu_minus)
    }
}

fn gap_formula(p: &ExtensionProblem, v: &Mat, j11: &SymmetricMatrix) -> Mat {
    let n2 = p.space.n2();
    let vjv = v * j11.as_matrix() * v.transpose();
    let j2 = p.space.j2().matrix();
    match p.variant {
        Variant::Krein => (j2 - j2 * vjv) * 2.0,
        _ => (eye(n2) - j2 * vjv) * 2.0,
    }
}

pub fn extremal_pair(p: &ExtensionProblem) -> Result<ExtremalPair> {
    let crit = criterion(p);
    if !crit.holds {
        return Err(Error::NoSolution {
            lhs: crit.lhs,
            rhs: crit.rhs,
        });
    }
    let (n1, n2) = (p.space.n1(), p.space.n2());
    let x = p.defect_form();
    let ex = eigh(&x);
    let thr = ex.zero_threshold(&p.tol);
    let d = abs_power_of(&ex, 0.5, &p.tol);
    let j11 = ex.map(|l| if l < -thr { -1.0 } else { 1.0 });
    let v = build_v(p)?;
    let j1 = p.space.j1().matrix();
    let j2 = p.space.j2().matrix();
    let (i1, i2) = (eye(n1), eye(n2));

    let (t12, t21, m22, big22) = match p.variant {
        Variant::Hilbert => {
            let vj = &v;
            let m22 = -&i2 + vj * (&i1 - &p.t11) * j11.as_matrix() * v.transpose();
            let big22 = &i2 - vj * (&i1 + &p.t11) * j11.as_matrix() * v.transpose();
            (d.as_matrix() * v.transpose(), &v * d.as_matrix(), m22, big22)
        }
        Variant::Krein => {
            let tt = j1 * &p.t11;
            let m22 = -j2 + j2 * &v * (&i1 - &tt) * j11.as_matrix() * v.transpose();
            let big22 = j2 - j2 * &v * (&i1 + &tt) * j11.as_matrix() * v.transpose();
            (j1 * d.as_matrix() * v.transpose(), j2 * &v * d.as_matrix(), m22, big22)
        }
        Variant::Pontryagin => {
            let dd = defect_data(&p.t11, p.space.j1(), &p.tol)?;
            let lo = link_operators(&p.t11, p.space.j1(), &dd, &p.tol)?;
            let (b, bs) = (&dd.basis_d, &dd.basis_dstar);
            let r = b.ncols();
            let vb = &v * b;
            // L_T^* J₁ acting on 𝔇_{T11}, written in the defect basis
            let lj = lo.l_t.transpose() * bs.transpose() * j1 * b;
            let jb = b.transpose() * j11.as_matrix() * b;
            let ir = eye(r);
            let m22 = -&i2 + j2 * &vb * (&ir - &lj) * &jb * vb.transpose();
            let big22 = &i2 - j2 * &vb * (&ir + &lj) * &jb * vb.transpose();
            (j1 * d.as_matrix() * v.transpose(), j2 * &v * d.as_matrix(), m22, big22)
        }
    };
    let t_min = p.space.assemble(&p.t11, &t12, &t21, &m22);
    let t_max = p.space.assemble(&p.t11, &t12, &t21, &big22);
    let gap22 = &big22 - &m22;

    let scale = max_abs(&p.column()).max(1.0);
    let extends_residual = {
        let (a, _, b, _) = p.space.blocks(&t_min);
        let r = max_diff(&a, &p.t11);
        if b.is_empty() {
            r
        } else {
            r.max(max_diff(&b, &p.t21))
        }
    };
    let gap_residual = max_diff(&gap22, &gap_formula(p, &v, &j11));
    let bound = p.tol.residual_bound(scale * scale);
    let triple = signature_triple(p);
    let index_min = solution_index(p, &t_min)?;
    let index_max = solution_index(p, &t_max)?;
    let target = target_index(p).expect("criterion holds");
    let diagnostics = PairDiagnostics {
        extends_residual,
        gap_residual,
        index_min,
        index_max,
        target_index: target,
    };

    let mut problems = Vec::new();
    if extends_residual > bound {
        problems.push(format!("extremal pair does not extend T1 (residual {extends_residual:.3e})"));
    }
    for (name, t) in [("T_m", &t_min), ("T_M", &t_max)] {
        if let Err(e) = j_form(t, &p.space.j, &p.tol) {
            problems.push(format!("{name} is not J-selfadjoint: {e}"));
        }
    }
    if problems.is_empty() {
        if gap_residual > bound {
            problems.push(format!("gap formula residual {gap_residual:.3e}"));
        }
        let km = shifted_index(p, &t_min, 1.0)?;
        let kp = shifted_index(p, &t_max, -1.0)?;
        if km != triple.kappa_minus || kp != triple.kappa_plus {
            problems.push(format!(
                "minimal indices: ν₋[I+T_m] = {km} (expected {}), ν₋[I−T_M] = {kp} (expected {})",
                triple.kappa_minus, triple.kappa_plus
            ));
        }
        if index_min != target || index_max != target {
            problems.push(format!(
                "solution index of T_m = {index_min}, T_M = {index_max}, expected {target}"
            ));
        }
        if !j_geq(&t_max, &t_min, &p.space.j, &p.tol)? {
            problems.push("T_M is not above T_m".into());
        }
    }
    if !problems.is_empty() {
        return Err(Error::Numerical(problems.join("; ")));
    }
    Ok(ExtremalPair {
        variant: p.variant,
        t_min,
        t_max,
        v,
        d_t11: d,
        j11,
        gap22,
        diagnostics,
    })
}

/// `T_m`, `T_M` computed as minimal completions of `I ± T` instead of from the
/// closed formulas.
pub fn extremal_pair_via_completion(p: &ExtensionProblem) -> Result<(Mat, Mat)> {
    let (n1, n2) = (p.space.n1(), p.space.n2());
    let (i1, i2) = (eye(n1), eye(n2));
    let (space, t11, t21, back) = if p.variant == Variant::Krein {
        let identity_space = BlockSpace::new(FundamentalSymmetry::identity(n1), FundamentalSymmetry::identity(n2));
        (
            identity_space,
            p.space.j1().matrix() * &p.t11,
            p.space.j2().matrix() * &p.t21,
            Some(p.space.j.matrix()),
        )
    } else {
        (p.space.clone(), p.t11.clone(), p.t21.clone(), None)
    };
    let t12 = j_adjoint(&t21, space.j1(), space.j2())?;
    let plus = solve(&CompletionProblem::new(space.clone(), &i1 + &t11, t12.clone(), p.tol)?)?;
    let minus = solve(&CompletionProblem::new(space.clone(), &i1 - &t11, -&t12, p.tol)?)?;
    let m22 = &plus.a22_min - &i2;
    let big22 = &i2 - &minus.a22_min;
    let t_min = space.assemble(&t11, &t12, &t21, &m22);
    let t_max = space.assemble(&t11, &t12, &t21, &big22);
    Ok(match back {
        Some(j) => (j * t_min, j * t_max),
        None => (t_min, t_max),
    })
}

/// Sandwich test `T_m ≤_J T ≤_J T_M` for a J-selfadjoint extension `T` of `T₁`.
pub fn membership(p: &ExtensionProblem, pair: &ExtremalPair, t: &Mat) -> Result<bool> {
    let n = p.space.j.dim();
    if t.shape() != (n, n) {
        return Err(dim_err(format!(
            "membership: expected a {n}x{n} operator, got {}x{}",
            t.nrows(),
            t.ncols()
        )));
    }
    if j_form(t, &p.space.j, &p.tol).is_err() || !p.extends(t) {
        return Ok(false);
    }
    Ok(j_geq(t, &pair.t_min, &p.space.j, &p.tol)? && j_geq(&pair.t_max, t, &p.space.j, &p.tol)?)
}

/// Direct index test: `T` is a J-selfadjoint extension of `T₁` with
/// solution index equal to the target.
pub fn in_solution_set(p: &ExtensionProblem, t: &Mat) -> Result<bool> {
    let n = p.space.j.dim();
    if t.shape() != (n, n) {
        return Err(dim_err(format!("expected a {n}x{n} operator")));
    }
    if j_form(t, &p.space.j, &p.tol).is_err() || !p.extends(t) {
        return Ok(false);
    }
    Ok(Some(solution_index(p, t)?) == target_index(p))
}

/// Extension with `T22 = (T_m)22 + J₂ Δ^{1/2} C Δ^{1/2}`, `Δ = J₂·gap22`.
pub fn extension_from_c(p: &ExtensionProblem, pair: &ExtremalPair, c: &SymmetricMatrix) -> Result<Mat> {
    let n2 = p.space.n2();
    if c.dim() != n2 {
        return Err(dim_err(format!("C must be {n2}x{n2}")));
    }
    let j2 = p.space.j2().matrix();
    let delta = sym(&(j2 * &pair.gap22));
    let root = abs_power(&delta, 0.5, &p.tol)?;
    let t22 = pair.min22() + j2 * root.as_matrix() * c.as_matrix() * root.as_matrix();
    p.assemble(&t22)
}

/// Margin keeping sampled `C` strictly inside `[0, I]`.
pub const SAMPLE_MARGIN: f64 = 1e-6;

/// Random `C = Q diag(u) Qᵀ` with `u` uniform in `[lo, hi]`.
pub fn random_c<R: Rng + ?Sized>(rng: &mut R, n: usize, lo: f64, hi: f64) -> SymmetricMatrix {
    let q = random_orthogonal(rng, n);
    let u: Vec<f64> = (0..n).map(|_| rng.random_range(lo..=hi)).collect();
    sym(&(&q * Mat::from_diagonal(&nalgebra::DVector::from_vec(u)) * q.transpose()))
}

/// `count` members of the solution set; sample `k` uses the `k`-th trial stream of `seed`.
pub fn sample_extensions(p: &ExtensionProblem, pair: &ExtremalPair, count: usize, seed: u64) -> Result<Vec<Mat>> {
    (0..count)
        .map(|k| {
            let mut rng = trial_rng(seed, k as u64);
            let c = random_c(&mut rng, p.space.n2(), SAMPLE_MARGIN, 1.0 - SAMPLE_MARGIN);
            extension_from_c(p, pair, &c)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NegationCheck {
    pub holds: bool,
    pub residual: f64,
}

/// `(−T)_m = −T_M` and `(−T)_M = −T_m`.
pub fn negation_duality(p: &ExtensionProblem, pair: &ExtremalPair) -> Result<NegationCheck> {
    let q = extremal_pair(&p.negated())?;
    let residual = max_diff(&q.t_min, &(-&pair.t_max)).max(max_diff(&q.t_max, &(-&pair.t_min)));
    let scale = max_abs(&pair.t_max).max(max_abs(&pair.t_min));
    Ok(NegationCheck {
        holds: residual <= p.tol.residual_bound(scale),
        residual,
    })
}

/// Discrepancy between `|[[J, T], [T, J]]|^{1/2}` and
/// `U·diag(|J+T|^{1/2}, |J−T|^{1/2})·Uᵀ`, `U = (1/√2)[[I, I], [I, −I]]`.
/// Fails when it exceeds the residual bound.
pub fn block_modulus_formula(j: &FundamentalSymmetry, t: &SymmetricMatrix, tol: &TolerancePolicy) -> Result<f64> {
    let n = j.dim();
    if t.dim() != n {
        return Err(dim_err("block_modulus_formula: T and J differ in dimension"));
    }
    let jm = j.matrix();
    let tm = t.as_matrix();
    let space = BlockSpace::new(j.clone(), j.clone());
    let big = sym(&space.assemble(jm, tm, tm, jm));
    let direct = abs_power(&big, 0.5, tol)?;

    let plus = abs_power(&sym(&(jm + tm)), 0.5, tol)?;
    let minus = abs_power(&sym(&(jm - tm)), 0.5, tol)?;
    let zero = Mat::zeros(n, n);
    let diag = space.assemble(plus.as_matrix(), &zero, &zero, minus.as_matrix());
    let i = eye(n);
    let u = space.assemble(&i, &i, &i, &(-&i)) * std::f64::consts::FRAC_1_SQRT_2;
    let via = &u * diag * u.transpose();

    let residual = max_diff(direct.as_matrix(), &via);
    let bound = tol.residual_bound(max_abs(direct.as_matrix()));
    if residual > bound {
        return Err(Error::Numerical(format!(
            "block modulus discrepancy {residual:.3e} exceeds {bound:.3e}"
        )));
    }
    Ok(residual)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InertiaSumIdentity {
    /// `ν₋(J − TJT) + ν₋(J)`.
    pub lhs: usize,
    /// `ν₋(J − T) + ν₋(J + T)`.
    pub rhs: usize,
    /// `ν₋` of `[[J, T], [T, J]]`, equal to both sides by congruence.
    pub block: usize,
    pub holds: bool,
    pub near_boundary: bool,
}

pub fn inertia_sum_identity(
    j: &FundamentalSymmetry,
    t: &SymmetricMatrix,
    tol: &TolerancePolicy,
) -> Result<InertiaSumIdentity> {
    let n = j.dim();
    if t.dim() != n {
        return Err(dim_err("inertia_sum_identity: T and J differ in dimension"));
    }
    let (jm, tm) = (j.matrix(), t.as_matrix());
    let forms = [
        sym(&(jm - tm * jm * tm)),
        sym(&(jm - tm)),
        sym(&(jm + tm)),
        sym(&BlockSpace::new(j.clone(), j.clone()).assemble(jm, tm, tm, jm)),
    ];
    let es: Vec<_> = forms.iter().map(eigh).collect();
    let nu: Vec<usize> = es.iter().map(|e| e.inertia(tol).nu_minus).collect();
    let lhs = nu[0] + j.nu_minus();
    let rhs = nu[1] + nu[2];
    Ok(InertiaSumIdentity {
        lhs,
        rhs,
        block: nu[3],
        holds: lhs == rhs && lhs == nu[3],
        near_boundary: es.iter().any(|e| e.boundary_margin(tol) <= BOUNDARY_FACTOR),
    })
}

/// Truth values of statements (i), (ii), (iii).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Statements {
    pub i: bool,
    pub ii: bool,
    pub iii: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaReport {
    /// Statements about a given extension `T`: (i) `ν₋[I ± T] = ν₋[I ± T11]`,
    /// (ii) `ν₋[I − T²] = ν₋[I − T11²] − ν₋(J₂)`, (iii) `ran J₁T21^{[*]} ⊂ ran |I ± T11|^{1/2}`.
    pub extension: Option<Statements>,
    /// Statements about `T₁` alone: (i) the criterion, (ii) `ran J₁T21^{[*]} ⊂ ran |I − T11²|^{1/2}`,
    /// (iii) `ran J₁T21^{[*]} ⊂ ran |I ± T11|^{1/2}`.
    pub column: Statements,
    /// Claimed implications that failed.
    pub violations: Vec<String>,
    /// Converses that failed; these are allowed.
    pub notes: Vec<String>,
}

impl LemmaReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Evaluates the statements of the two range/index lemmas in the Kreĭn-adjoint
/// setting and records violated implications. The claimed implications are
/// (i) ⇔ (ii) ⇒ (iii) for an extension and (i) ⇒ (ii), (i) ⇒ (iii) for the column.
pub fn lemma_implication_checks(p: &ExtensionProblem, t: Option<&Mat>) -> Result<LemmaReport> {
    let tol = &p.tol;
    let n1 = p.space.n1();
    let j1 = p.space.j1();
    let i1 = eye(n1);
    let target = j1.matrix() * p.t12();
    let included = |m: &Mat| -> Result<bool> {
        let root = abs_power(&j_form(m, j1, tol)?, 0.5, tol)?;
        Ok(range_inclusion(&target, &root, tol)?.included)
    };
    let sq = &i1 - &p.t11 * &p.t11;
    let nu_sq = negative_squares(&sq, j1, tol)?.nu_minus;
    let reduced = j1.matrix() - p.t11.transpose() * j1.matrix() * &p.t11
        - p.t21.transpose() * p.space.j2().matrix() * &p.t21;
    let rhs = inertia(&sym(&reduced), tol).nu_minus + p.space.j2().nu_minus();
    let pm_included = included(&(&i1 - &p.t11))? && included(&(&i1 + &p.t11))?;
    let column = Statements {
        i: nu_sq == rhs,
        ii: included(&sq)?,
        iii: pm_included,
    };
    let mut violations = Vec::new();
    let mut notes = Vec::new();
    if column.i && !column.ii {
        violations.push("column: (i) holds but (ii) fails".to_string());
    }
    if column.i && !column.iii {
        violations.push("column: (i) holds but (iii) fails".to_string());
    }
    if !column.i && (column.ii || column.iii) {
        notes.push(format!(
            "column: (i) fails while (ii) = {}, (iii) = {}",
            column.ii, column.iii
        ));
    }

    let extension = match t {
        None => None,
        Some(t) => {
            let n = p.space.j.dim();
            if t.shape() != (n, n) {
                return Err(dim_err(format!("extension must be {n}x{n}")));
            }
            if j_form(t, &p.space.j, tol).is_err() || !p.extends(t) {
                return Err(Error::Usage(
                    "lemma checks need a J-selfadjoint extension of T1".into(),
                ));
            }
            let i = eye(n);
            let j = &p.space.j;
            let s_i = negative_squares(&(&i + t), j, tol)?.nu_minus
                == negative_squares(&(&i1 + &p.t11), j1, tol)?.nu_minus
                && negative_squares(&(&i - t), j, tol)?.nu_minus
                    == negative_squares(&(&i1 - &p.t11), j1, tol)?.nu_minus;
            let nu_t = negative_squares(&(&i - t * t), j, tol)?.nu_minus;
            let s_ii = nu_sq.checked_sub(p.space.j2().nu_minus()) == Some(nu_t);
            let st = Statements {
                i: s_i,
                ii: s_ii,
                iii: pm_included,
            };
            if st.i != st.ii {
                violations.push(format!("extension: (i) = {} but (ii) = {}", st.i, st.ii));
            }
            if st.ii && !st.iii {
                violations.push("extension: (ii) holds but (iii) fails".to_string());
            }
            if st.iii && !st.i {
                notes.push("extension: (iii) holds while (i) fails".to_string());
            }
            Some(st)
        }
    };
    Ok(LemmaReport {
        extension,
        column,
        violations,
        notes,
    })
}
