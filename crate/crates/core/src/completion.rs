//! Completion of incomplete 2×2 block operators with a preserved negative index,
//! and the inertia formulas built on it.
//!
//! Given `A11 = A11^{[*]}` on `(ℋ₁, J₁)` and `A12: (ℋ₂, J₂) → (ℋ₁, J₁)`, a
//! completion `A22` is sought with `ν₋[A] = ν₋[A11]`. It exists iff
//! `ran J₁A12 ⊂ ran |A11|^{1/2}`; then with `S = |A11|^{[-1/2]} J₁ A12` and
//! `J11 = sign(J₁A11)` every solution is `A22 = S^{[*]} J₁ J11 S + J₂ Y`, `Y ⪰ 0`.

use crate::error::{dim_err, Error, Result};
use crate::krein::{j_adjoint, j_form, negative_squares, BlockSpace, FundamentalSymmetry};
use crate::spectral::{
    abs_power, eigh, inertia, range_inclusion, sign_operator, Inertia, Mat, RangeInclusion, SymmetricMatrix,
    TolerancePolicy,
};

/// The incomplete block operator `[[A11, A12], [A12^{[*]}, ∗]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CompletionProblem {
    space: BlockSpace,
    a11: Mat,
    a12: Mat,
    tol: TolerancePolicy,
    kappa: usize,
}

impl CompletionProblem {
    pub fn new(space: BlockSpace, a11: Mat, a12: Mat, tol: TolerancePolicy) -> Result<Self> {
        let (n1, n2) = (space.n1(), space.n2());
        if a12.shape() != (n1, n2) {
            return Err(dim_err(format!(
                "A12 must be {n1}x{n2}, got {}x{}",
                a12.nrows(),
                a12.ncols()
            )));
        }
        let kappa = negative_squares(&a11, space.j1(), &tol)?.nu_minus;
        Ok(Self {
            space,
            a11,
            a12,
            tol,
            kappa,
        })
    }

    pub fn space(&self) -> &BlockSpace {
        &self.space
    }

    pub fn a11(&self) -> &Mat {
        &self.a11
    }

    pub fn a12(&self) -> &Mat {
        &self.a12
    }

    /// `A21 = A12^{[*]} = J₂ A12ᵀ J₁`.
    pub fn a21(&self) -> Mat {
        j_adjoint(&self.a12, self.space.j2(), self.space.j1()).expect("shape checked on construction")
    }

    pub fn tol(&self) -> &TolerancePolicy {
        &self.tol
    }

    /// `κ = ν₋[A11]`.
    pub fn kappa(&self) -> usize {
        self.kappa
    }

    fn j1_a11(&self) -> SymmetricMatrix {
        j_form(&self.a11, self.space.j1(), &self.tol).expect("checked on construction")
    }

    /// The full block operator with the given `(2,2)` block.
    pub fn completed(&self, a22: &Mat) -> Result<Mat> {
        let n2 = self.space.n2();
        if a22.shape() != (n2, n2) {
            return Err(dim_err(format!("A22 must be {n2}x{n2}")));
        }
        Ok(self.space.assemble(&self.a11, &self.a12, &self.a21(), a22))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solvability {
    pub ok: bool,
    pub witness: RangeInclusion,
}

/// Range criterion `ran J₁A12 ⊂ ran |A11|^{1/2}`, with `|A11| = |J₁A11|`.
pub fn solvable(p: &CompletionProblem) -> Solvability {
    let tol = p.tol;
    let root = abs_power(&p.j1_a11(), 0.5, &tol).expect("supported exponent");
    let target = p.space.j1().matrix() * &p.a12;
    let witness = range_inclusion(&target, &root, &tol).expect("shapes checked on construction");
    Solvability {
        ok: witness.included,
        witness,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompletionSolution {
    space: BlockSpace,
    tol: TolerancePolicy,
    /// `S = |A11|^{[-1/2]} J₁ A12`.
    pub s: Mat,
    /// `J11 = sign(J₁ A11)`.
    pub j11: SymmetricMatrix,
    /// Minimal completion `S^{[*]} J₁ J11 S = J₂ Sᵀ J11 S`.
    pub a22_min: Mat,
    pub kappa: usize,
    /// Range residual was within a factor 10 of its bound.
    pub ill_conditioned: bool,
}

impl CompletionSolution {
    pub fn space(&self) -> &BlockSpace {
        &self.space
    }
}

pub fn solve(p: &CompletionProblem) -> Result<CompletionSolution> {
    let sv = solvable(p);
    if !sv.ok {
        return Err(Error::RangeCriterion {
            residual: sv.witness.residual,
        });
    }
    let s = sv.witness.coefficients;
    let j11 = sign_operator(&p.j1_a11(), &p.tol);
    // S: (ℋ₂, J₂) → (ℋ₁, J₁), so S^{[*]} = J₂ Sᵀ J₁
    let s_adj = j_adjoint(&s, p.space.j2(), p.space.j1())?;
    let a22_min = s_adj * p.space.j1().matrix() * j11.as_matrix() * &s;
    Ok(CompletionSolution {
        space: p.space.clone(),
        tol: p.tol,
        s,
        j11,
        a22_min,
        kappa: p.kappa,
        ill_conditioned: sv.witness.ill_conditioned,
    })
}

/// `A22 = A22_min + J₂ Y` for `Y ⪰ 0`.
pub fn completion_from_y(sol: &CompletionSolution, y: &SymmetricMatrix) -> Result<Mat> {
    let n2 = sol.space.n2();
    if y.dim() != n2 {
        return Err(dim_err(format!("Y must be {n2}x{n2}")));
    }
    let iy = inertia(y, &sol.tol);
    if iy.nu_minus != 0 {
        return Err(Error::Usage(format!(
            "Y must be positive semidefinite, has {} negative eigenvalue(s)",
            iy.nu_minus
        )));
    }
    Ok(&sol.a22_min + sol.space.j2().matrix() * y.as_matrix())
}

/// Result of splitting a candidate `A22` as `A22_min + J₂ Y`.
#[derive(Debug, Clone, PartialEq)]
pub enum Decomposition {
    Member { y: SymmetricMatrix },
    Outside { y: SymmetricMatrix, min_eigenvalue: f64 },
}

impl Decomposition {
    pub fn is_member(&self) -> bool {
        matches!(self, Decomposition::Member { .. })
    }
}

pub fn decompose_solution(sol: &CompletionSolution, a22: &Mat) -> Result<Decomposition> {
    let j2 = sol.space.j2();
    j_form(a22, j2, &sol.tol)?;
    let y = j_form(&(a22 - &sol.a22_min), j2, &sol.tol)?;
    let e = eigh(&y);
    if e.inertia(&sol.tol).nu_minus == 0 {
        Ok(Decomposition::Member { y })
    } else {
        Ok(Decomposition::Outside {
            min_eigenvalue: e.eigenvalues[0],
            y,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompletionCheck {
    pub kappa_a: Inertia,
    pub preserved: bool,
}

/// `ν₋[A]` of the completed operator and whether it equals `ν₋[A11]`.
pub fn verify_completion(p: &CompletionProblem, a22: &Mat) -> Result<CompletionCheck> {
    j_form(a22, p.space.j2(), &p.tol)?;
    let a = p.completed(a22)?;
    let kappa_a = negative_squares(&a, &p.space.j, &p.tol)?;
    Ok(CompletionCheck {
        preserved: kappa_a.nu_minus == p.kappa,
        kappa_a,
    })
}

fn check_pair(a: &Mat, b: &Mat, j1: &FundamentalSymmetry, j2: &FundamentalSymmetry) -> Result<()> {
    if b.ncols() != j1.dim() || b.nrows() != j2.dim() {
        return Err(dim_err(format!(
            "B must be {}x{}, got {}x{}",
            j2.dim(),
            j1.dim(),
            b.nrows(),
            b.ncols()
        )));
    }
    if a.shape() != (j1.dim(), j1.dim()) {
        return Err(dim_err("A does not match J₁"));
    }
    Ok(())
}

/// Both sides of `ν±[A] ≤ ν±[A − B^{[*]}B] + ν±(J₂)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InertiaBound {
    pub lhs: Inertia,
    pub reduced: Inertia,
    pub rhs_minus: usize,
    pub rhs_plus: usize,
    pub holds: bool,
}

pub fn inertia_bound(
    a: &Mat,
    b: &Mat,
    j1: &FundamentalSymmetry,
    j2: &FundamentalSymmetry,
    tol: &TolerancePolicy,
) -> Result<InertiaBound> {
    check_pair(a, b, j1, j2)?;
    let lhs = negative_squares(a, j1, tol)?;
    let reduced = negative_squares(&(a - j_adjoint(b, j1, j2)? * b), j1, tol)?;
    let rhs_minus = reduced.nu_minus + j2.nu_minus();
    let rhs_plus = reduced.nu_plus + j2.nu_plus();
    Ok(InertiaBound {
        lhs,
        reduced,
        rhs_minus,
        rhs_plus,
        holds: lhs.nu_minus <= rhs_minus && lhs.nu_plus <= rhs_plus,
    })
}

/// The equality case of the inertia bound and its factorization
/// `J₁B^{[*]} = |A|^{1/2} K` with `K` J-contractive.
#[derive(Debug, Clone, PartialEq)]
pub struct MinIndexFactorization {
    pub lhs: usize,
    pub rhs: usize,
    pub equality_holds: bool,
    pub k: Option<Mat>,
    pub k_is_j_contraction: bool,
}

pub fn min_index_factorization(
    a: &Mat,
    b: &Mat,
    j1: &FundamentalSymmetry,
    j2: &FundamentalSymmetry,
    tol: &TolerancePolicy,
) -> Result<MinIndexFactorization> {
    let bound = inertia_bound(a, b, j1, j2, tol)?;
    let (lhs, rhs) = (bound.lhs.nu_minus, bound.rhs_minus);
    let mut out = MinIndexFactorization {
        lhs,
        rhs,
        equality_holds: lhs == rhs,
        k: None,
        k_is_j_contraction: false,
    };
    if !out.equality_holds {
        return Ok(out);
    }
    let j1a = j_form(a, j1, tol)?;
    let root = abs_power(&j1a, 0.5, tol)?;
    let target = j1.matrix() * j_adjoint(b, j1, j2)?;
    let fit = range_inclusion(&target, &root, tol)?;
    if !fit.included {
        return Ok(out);
    }
    let k = fit.coefficients;
    // J_A carries sign(0) = +1 on ker J₁A; K maps into ran J₁A so the padding is inert
    let j_a = sign_operator(&j1a, tol);
    let defect = SymmetricMatrix::symmetrize(&(j2.matrix() - k.transpose() * j_a.as_matrix() * &k));
    out.k_is_j_contraction = inertia(&defect, tol).nu_minus == 0;
    out.k = Some(k);
    Ok(out)
}

/// Inertia of `H = [[A, B^{[*]}], [B, I]]` computed directly and through the
/// congruence `H = [[I, B^{[*]}], [0, I]] · diag(A − B^{[*]}B, I) · [[I, 0], [B, I]]`.
/// Disagreement is reported as a numerical diagnostic.
pub fn schur_inertia(
    a: &Mat,
    b: &Mat,
    j1: &FundamentalSymmetry,
    j2: &FundamentalSymmetry,
    tol: &TolerancePolicy,
) -> Result<Inertia> {
    check_pair(a, b, j1, j2)?;
    let space = BlockSpace::new(j1.clone(), j2.clone());
    let b_adj = j_adjoint(b, j1, j2)?;
    let n2 = j2.dim();
    let h = space.assemble(a, &b_adj, b, &Mat::identity(n2, n2));
    let direct = negative_squares(&h, &space.j, tol)?;
    let reduced = negative_squares(&(a - &b_adj * b), j1, tol)?;
    let factored = Inertia::new(
        reduced.nu_plus + j2.nu_plus(),
        reduced.nu_zero,
        reduced.nu_minus + j2.nu_minus(),
    );
    if direct != factored {
        return Err(Error::Numerical(format!(
            "schur_inertia: direct {direct} disagrees with factored {factored}"
        )));
    }
    Ok(direct)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use crate::random::{random_psd, trial_rng};
    use crate::spectral::max_diff;
    use approx::assert_abs_diff_eq;
    use nalgebra::DVector;

    fn sig(s: &str) -> FundamentalSymmetry {
        FundamentalSymmetry::from_signature(s).unwrap()
    }

    fn m(r: usize, c: usize, v: &[f64]) -> Mat {
        Mat::from_row_slice(r, c, v)
    }

    fn problem(j1: &str, j2: &str, a11: Mat, a12: Mat) -> CompletionProblem {
        CompletionProblem::new(BlockSpace::new(sig(j1), sig(j2)), a11, a12, TolerancePolicy::default()).unwrap()
    }

    #[test]
    fn solvable_examples() {
        let p = problem("++", "+", m(2, 2, &[1.0, 0.0, 0.0, 0.0]), Mat::zeros(2, 1));
        assert!(solvable(&p).ok);
        let p = problem("++", "+", m(2, 2, &[1.0, 0.0, 0.0, 0.0]), m(2, 1, &[0.0, 1.0]));
        assert!(!solvable(&p).ok);
        assert!(matches!(solve(&p), Err(Error::RangeCriterion { .. })));
        let p = problem("+", "+", m(1, 1, &[1.0]), m(1, 1, &[0.5]));
        assert!(solvable(&p).ok);
    }

    #[test]
    fn hilbert_scalar_example() {
        let p = problem("+", "+", m(1, 1, &[1.0]), m(1, 1, &[0.5]));
        let sol = solve(&p).unwrap();
        assert_abs_diff_eq!(sol.s[(0, 0)], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(sol.a22_min[(0, 0)], 0.25, epsilon = 1e-15);
        let a = p.completed(&sol.a22_min).unwrap();
        let e = eigh(&SymmetricMatrix::new(a).unwrap());
        assert_abs_diff_eq!(e.eigenvalues[0], 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(e.eigenvalues[1], 1.25, epsilon = 1e-14);
        assert!(verify_completion(&p, &sol.a22_min).unwrap().preserved);

        let below = verify_completion(&p, &m(1, 1, &[0.2])).unwrap();
        assert!(!below.preserved);
        assert_eq!(below.kappa_a.nu_minus, 1);
    }

    #[test]
    fn krein_scalar_example() {
        let p = problem("+", "-", m(1, 1, &[1.0]), m(1, 1, &[1.0]));
        assert_eq!(p.a21(), m(1, 1, &[-1.0]));
        let sol = solve(&p).unwrap();
        assert_abs_diff_eq!(sol.s[(0, 0)], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(sol.j11.as_matrix()[(0, 0)], 1.0);
        assert_abs_diff_eq!(sol.a22_min[(0, 0)], -1.0, epsilon = 1e-15);
        let a = p.completed(&sol.a22_min).unwrap();
        assert!(max_diff(&a, &m(2, 2, &[1.0, 1.0, -1.0, -1.0])) < 1e-15);
        let check = verify_completion(&p, &sol.a22_min).unwrap();
        assert_eq!(check.kappa_a.nu_minus, 0);
        assert!(check.preserved);

        for y in [0.0, 0.5, 3.0] {
            let a22 = completion_from_y(&sol, &SymmetricMatrix::from_diagonal(&[y])).unwrap();
            assert_abs_diff_eq!(a22[(0, 0)], -1.0 - y, epsilon = 1e-15);
            assert!(verify_completion(&p, &a22).unwrap().preserved);
        }
    }

    #[test]
    fn zero_coupling() {
        let p = problem("+-", "-+", m(2, 2, &[2.0, 0.0, 0.0, 3.0]), Mat::zeros(2, 2));
        let sol = solve(&p).unwrap();
        assert_eq!(sol.s, Mat::zeros(2, 2));
        assert_eq!(sol.a22_min, Mat::zeros(2, 2));
        let check = verify_completion(&p, &Mat::zeros(2, 2)).unwrap();
        assert!(check.preserved);
        assert_eq!(check.kappa_a.nu_minus, p.kappa());
    }

    #[test]
    fn completion_from_y_rejects_indefinite_y() {
        let p = problem("+", "+", m(1, 1, &[1.0]), m(1, 1, &[0.5]));
        let sol = solve(&p).unwrap();
        assert!(matches!(
            completion_from_y(&sol, &SymmetricMatrix::from_diagonal(&[-1.0])),
            Err(Error::Usage(_))
        ));
        assert_eq!(completion_from_y(&sol, &SymmetricMatrix::zeros(1)).unwrap(), sol.a22_min);
    }

    #[test]
    fn decompose_examples() {
        let p = problem("+", "+", m(1, 1, &[1.0]), m(1, 1, &[0.5]));
        let sol = solve(&p).unwrap();
        match decompose_solution(&sol, &sol.a22_min).unwrap() {
            Decomposition::Member { y } => assert!(y.as_matrix()[(0, 0)].abs() < 1e-15),
            other => panic!("expected member, got {other:?}"),
        }
        let eps = 1e-3;
        match decompose_solution(&sol, &m(1, 1, &[0.25 - eps])).unwrap() {
            Decomposition::Outside { min_eigenvalue, .. } => assert_abs_diff_eq!(min_eigenvalue, -eps, epsilon = 1e-12),
            other => panic!("expected outside, got {other:?}"),
        }
        let j = sig("+-");
        let sol2 = solve(&problem("+", "+-", m(1, 1, &[1.0]), m(1, 2, &[0.5, 0.3]))).unwrap();
        let not_sa = m(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        assert!(j_form(&not_sa, &j, &TolerancePolicy::default()).is_err());
        assert!(matches!(decompose_solution(&sol2, &not_sa), Err(Error::NotJSelfadjoint { .. })));
    }

    #[test]
    fn y_round_trip_and_minimality_on_random_problems() {
        let tol = TolerancePolicy::default();
        for trial in 0..40 {
            let mut rng = trial_rng(31, trial);
            let p = generate::solvable_completion(&mut rng, 4, &tol).0;
            let sol = solve(&p).unwrap();
            assert!(verify_completion(&p, &sol.a22_min).unwrap().preserved);
            let y0 = random_psd(&mut rng, p.space().n2(), 2, 1.5);
            let a22 = completion_from_y(&sol, &y0).unwrap();
            assert!(verify_completion(&p, &a22).unwrap().preserved);
            match decompose_solution(&sol, &a22).unwrap() {
                Decomposition::Member { y } => assert!(max_diff(y.as_matrix(), y0.as_matrix()) <= 1e-8),
                other => panic!("trial {trial}: {other:?}"),
            }
            assert!(crate::krein::j_geq(&a22, &sol.a22_min, p.space().j2(), &tol).unwrap());
        }
    }

    #[test]
    fn hilbert_reduction_is_shmulyan_set() {
        let mut rng = trial_rng(32, 0);
        let q = crate::random::random_orthogonal(&mut rng, 3);
        let a11 = &q * Mat::from_diagonal(&DVector::from_vec(vec![2.0, 0.5, 0.0])) * q.transpose();
        let a12 = &a11 * crate::random::gaussian(&mut rng, 3, 2);
        let p = problem("+++", "++", a11, a12);
        let sol = solve(&p).unwrap();
        assert!(max_diff(&sol.a22_min, &(sol.s.transpose() * &sol.s)) < 1e-10);
    }

    #[test]
    fn inertia_bound_examples() {
        let tol = TolerancePolicy::default();
        let a = m(2, 2, &[1.0, 0.0, 0.0, -2.0]);
        let j1 = sig("++");
        let j2 = sig("-");
        let b0 = Mat::zeros(1, 2);
        let r = inertia_bound(&a, &b0, &j1, &j2, &tol).unwrap();
        assert_eq!(r.lhs.nu_minus, 1);
        assert_eq!(r.rhs_minus, 2);
        assert!(r.holds);
    }

    #[test]
    fn factorization_scalar_example() {
        let tol = TolerancePolicy::default();
        let i1 = sig("+");
        let r = min_index_factorization(&m(1, 1, &[1.0]), &m(1, 1, &[0.5]), &i1, &i1, &tol).unwrap();
        assert!(r.equality_holds);
        assert_abs_diff_eq!(r.k.unwrap()[(0, 0)], 0.5, epsilon = 1e-15);
        assert!(r.k_is_j_contraction);
    }

    #[test]
    fn factorization_with_zero_b() {
        let tol = TolerancePolicy::default();
        let a = m(2, 2, &[1.0, 0.0, 0.0, 3.0]);
        let j1 = sig("+-");
        let r = min_index_factorization(&a, &Mat::zeros(2, 2), &j1, &sig("++"), &tol).unwrap();
        assert!(r.equality_holds);
        assert_eq!(r.k.unwrap(), Mat::zeros(2, 2));
        let r = min_index_factorization(&a, &Mat::zeros(1, 2), &j1, &sig("-"), &tol).unwrap();
        assert!(!r.equality_holds);
        assert!(r.k.is_none());
    }

    #[test]
    fn schur_inertia_examples() {
        let tol = TolerancePolicy::default();
        let a = m(2, 2, &[1.0, 0.0, 0.0, -2.0]);
        let j1 = sig("++");
        let j2 = sig("+-");
        let h = schur_inertia(&a, &Mat::zeros(2, 2), &j1, &j2, &tol).unwrap();
        assert_eq!(h.nu_minus, 1 + 1);

        let mut rng = trial_rng(33, 0);
        let i2 = sig("++");
        let b = crate::random::gaussian(&mut rng, 2, 2);
        let h = schur_inertia(&Mat::identity(2, 2), &b, &i2, &i2, &tol).unwrap();
        let direct = inertia(&SymmetricMatrix::symmetrize(&(Mat::identity(2, 2) - b.transpose() * &b)), &tol);
        assert_eq!(h.nu_minus, direct.nu_minus);
    }
}
