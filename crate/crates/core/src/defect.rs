//! Defect operators, signature operators and link operators.
//!
//! For `T` on `(ℋ, J)`:
//! `D_T = |J − TᵀJT|^{1/2}`, `J_T = sign(J − TᵀJT)`, `𝔇_T = ran D_T`, and the
//! same objects for `T* = Tᵀ`. Defect subspaces are stored as orthonormal
//! bases; the link operators `L_T: 𝔇_T → 𝔇_{T*}` and `L_{T*}: 𝔇_{T*} → 𝔇_T`
//! are small matrices in those bases.

use crate::error::{dim_err, Error, Result};
use crate::krein::FundamentalSymmetry;
use crate::spectral::{
    abs_power_of, eigh, max_abs, max_diff, Eigendecomposition, Mat, SymmetricMatrix, TolerancePolicy,
};

#[derive(Debug, Clone, PartialEq)]
pub struct DefectData {
    pub d_t: SymmetricMatrix,
    pub j_t: SymmetricMatrix,
    /// `n × r`, orthonormal columns spanning `𝔇_T`.
    pub basis_d: Mat,
    pub d_tstar: SymmetricMatrix,
    pub j_tstar: SymmetricMatrix,
    /// `n × r*`, orthonormal columns spanning `𝔇_{T*}`.
    pub basis_dstar: Mat,
    /// Moore–Penrose inverses of `D_T` and `D_{T*}`.
    d_t_pinv: SymmetricMatrix,
    d_tstar_pinv: SymmetricMatrix,
}

struct DefectSide {
    d: SymmetricMatrix,
    j: SymmetricMatrix,
    basis: Mat,
    pinv: SymmetricMatrix,
}

fn defect_side(form: &SymmetricMatrix, tol: &TolerancePolicy) -> DefectSide {
    let e: Eigendecomposition = eigh(form);
    let thr = e.zero_threshold(tol);
    DefectSide {
        d: abs_power_of(&e, 0.5, tol),
        j: e.map(|l| if l < -thr { -1.0 } else { 1.0 }),
        basis: e.range_basis(tol),
        pinv: abs_power_of(&e, -0.5, tol),
    }
}

impl DefectData {
    /// `r = dim 𝔇_T`.
    pub fn rank(&self) -> usize {
        self.basis_d.ncols()
    }

    pub fn rank_star(&self) -> usize {
        self.basis_dstar.ncols()
    }

    pub fn projector(&self) -> Mat {
        &self.basis_d * self.basis_d.transpose()
    }

    pub fn projector_star(&self) -> Mat {
        &self.basis_dstar * self.basis_dstar.transpose()
    }

    /// `D_T⁺`.
    pub fn d_t_pinv(&self) -> &SymmetricMatrix {
        &self.d_t_pinv
    }

    pub fn d_tstar_pinv(&self) -> &SymmetricMatrix {
        &self.d_tstar_pinv
    }

    /// Replace the stored bases by `basis_d · r` and `basis_dstar · r_star`
    /// for orthogonal `r`, `r_star`.
    pub fn rebased(&self, r: &Mat, r_star: &Mat) -> Self {
        let mut out = self.clone();
        out.basis_d = &self.basis_d * r;
        out.basis_dstar = &self.basis_dstar * r_star;
        out
    }

    /// Residuals of `J_T D_T² = J − TᵀJT` and `J_T D_T = D_T J_T`, and the same for `T*`.
    pub fn invariant_residuals(&self, t: &Mat, j: &FundamentalSymmetry) -> [f64; 4] {
        let jm = j.matrix();
        let form = jm - t.transpose() * jm * t;
        let form_star = jm - t * jm * t.transpose();
        let (d, jt) = (self.d_t.as_matrix(), self.j_t.as_matrix());
        let (ds, jts) = (self.d_tstar.as_matrix(), self.j_tstar.as_matrix());
        [
            max_diff(&(jt * d * d), &form),
            max_diff(&(jt * d), &(d * jt)),
            max_diff(&(jts * ds * ds), &form_star),
            max_diff(&(jts * ds), &(ds * jts)),
        ]
    }
}

pub fn defect_data(t: &Mat, j: &FundamentalSymmetry, tol: &TolerancePolicy) -> Result<DefectData> {
    let n = j.dim();
    if t.shape() != (n, n) {
        return Err(dim_err(format!(
            "defect_data: T must be {n}x{n}, got {}x{}",
            t.nrows(),
            t.ncols()
        )));
    }
    let jm = j.matrix();
    let side = defect_side(&SymmetricMatrix::symmetrize(&(jm - t.transpose() * jm * t)), tol);
    let star = defect_side(&SymmetricMatrix::symmetrize(&(jm - t * jm * t.transpose())), tol);
    Ok(DefectData {
        d_t: side.d,
        j_t: side.j,
        basis_d: side.basis,
        d_t_pinv: side.pinv,
        d_tstar: star.d,
        j_tstar: star.j,
        basis_dstar: star.basis,
        d_tstar_pinv: star.pinv,
    })
}

/// `L_T` (`r* × r`) and `L_{T*}` (`r × r*`) in the stored defect bases.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkOperators {
    pub l_t: Mat,
    pub l_tstar: Mat,
}

impl LinkOperators {
    /// `L_T` as an `n × n` operator, zero on `𝔇_T^⊥`.
    pub fn l_t_full(&self, dd: &DefectData) -> Mat {
        &dd.basis_dstar * &self.l_t * dd.basis_d.transpose()
    }

    pub fn l_tstar_full(&self, dd: &DefectData) -> Mat {
        &dd.basis_d * &self.l_tstar * dd.basis_dstar.transpose()
    }
}

fn defining_residuals(t: &Mat, j: &FundamentalSymmetry, dd: &DefectData, lo: &LinkOperators) -> (f64, f64, f64) {
    let jm = j.matrix();
    let lhs = dd.d_tstar.as_matrix() * &dd.basis_dstar * &lo.l_t;
    let rhs = t * jm * dd.d_t.as_matrix() * &dd.basis_d;
    let lhs_s = dd.d_t.as_matrix() * &dd.basis_d * &lo.l_tstar;
    let rhs_s = t.transpose() * jm * dd.d_tstar.as_matrix() * &dd.basis_dstar;
    let scale = max_abs(&rhs).max(max_abs(&rhs_s));
    (
        if rhs.is_empty() { 0.0 } else { max_diff(&lhs, &rhs) },
        if rhs_s.is_empty() { 0.0 } else { max_diff(&lhs_s, &rhs_s) },
        scale,
    )
}

/// `L_T = D_{T*}^{[-1]} T J D_T ↾ 𝔇_T` and `L_{T*} = D_T^{[-1]} Tᵀ J D_{T*} ↾ 𝔇_{T*}`.
///
/// Fails with a numerical diagnostic when the defining relations
/// `D_{T*} L_T = T J D_T` and `D_T L_{T*} = Tᵀ J D_{T*}` are violated, which
/// signals a misclassified rank.
pub fn link_operators(
    t: &Mat,
    j: &FundamentalSymmetry,
    dd: &DefectData,
    tol: &TolerancePolicy,
) -> Result<LinkOperators> {
    let n = j.dim();
    if t.shape() != (n, n) || dd.d_t.dim() != n {
        return Err(dim_err("link_operators: T, J and defect data disagree in dimension"));
    }
    let jm = j.matrix();
    let l_t = dd.basis_dstar.transpose() * dd.d_tstar_pinv.as_matrix() * t * jm * dd.d_t.as_matrix() * &dd.basis_d;
    let l_tstar =
        dd.basis_d.transpose() * dd.d_t_pinv.as_matrix() * t.transpose() * jm * dd.d_tstar.as_matrix() * &dd.basis_dstar;
    let lo = LinkOperators { l_t, l_tstar };
    let (r1, r2, scale) = defining_residuals(t, j, dd, &lo);
    let bound = tol.residual_bound(scale);
    if r1 > bound || r2 > bound {
        return Err(Error::Numerical(format!(
            "link operator defining relations violated (residuals {r1:.3e}, {r2:.3e}; bound {bound:.3e})"
        )));
    }
    Ok(lo)
}

/// Residuals of the defining relations and the three link identities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkIdentityResiduals {
    pub defining_t: f64,
    pub defining_tstar: f64,
    /// `L_Tᵀ J_{T*} = J_T L_{T*}` on `𝔇_{T*}`.
    pub adjoint_signature: f64,
    /// `(J_T − D_T J D_T)↾𝔇_T = L_Tᵀ J_{T*} L_T`.
    pub defect_t: f64,
    /// `(J_{T*} − D_{T*} J D_{T*})↾𝔇_{T*} = L_{T*}ᵀ J_T L_{T*}`.
    pub defect_tstar: f64,
}

impl LinkIdentityResiduals {
    pub fn max(&self) -> f64 {
        [
            self.defining_t,
            self.defining_tstar,
            self.adjoint_signature,
            self.defect_t,
            self.defect_tstar,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

fn residual(a: &Mat, b: &Mat) -> f64 {
    if a.is_empty() {
        0.0
    } else {
        max_diff(a, b)
    }
}

pub fn verify_link_identities(
    t: &Mat,
    j: &FundamentalSymmetry,
    dd: &DefectData,
    lo: &LinkOperators,
) -> LinkIdentityResiduals {
    let jm = j.matrix();
    let (b, bs) = (&dd.basis_d, &dd.basis_dstar);
    let jt_c = b.transpose() * dd.j_t.as_matrix() * b;
    let jts_c = bs.transpose() * dd.j_tstar.as_matrix() * bs;
    let (defining_t, defining_tstar, _) = defining_residuals(t, j, dd, lo);

    let a_lhs = lo.l_t.transpose() * &jts_c;
    let a_rhs = &jt_c * &lo.l_tstar;

    let d = dd.d_t.as_matrix();
    let b_lhs = b.transpose() * (dd.j_t.as_matrix() - d * jm * d) * b;
    let b_rhs = lo.l_t.transpose() * &jts_c * &lo.l_t;

    let ds = dd.d_tstar.as_matrix();
    let c_lhs = bs.transpose() * (dd.j_tstar.as_matrix() - ds * jm * ds) * bs;
    let c_rhs = lo.l_tstar.transpose() * &jt_c * &lo.l_tstar;

    LinkIdentityResiduals {
        defining_t,
        defining_tstar,
        adjoint_signature: residual(&a_lhs, &a_rhs),
        defect_t: residual(&b_lhs, &b_rhs),
        defect_tstar: residual(&c_lhs, &c_rhs),
    }
}

/// Residuals of the relations between `T` and `T*` for J-selfadjoint `T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelfadjointDefectReport {
    /// `D_{T*} = J D_T J`.
    pub d_tstar: f64,
    /// `J_{T*} = J J_T J`.
    pub j_tstar: f64,
    /// `L_{T*} = J L_T J`, compared as full-space operators.
    pub l_tstar: f64,
    /// `𝔇_{T*} = J 𝔇_T`, compared through orthogonal projectors.
    pub subspace: f64,
    /// `D_T = |I − T²|^{1/2}` with `|X| = (XᵀX)^{1/2}`.
    pub d_t_formula: f64,
}

impl SelfadjointDefectReport {
    pub fn max(&self) -> f64 {
        [self.d_tstar, self.j_tstar, self.l_tstar, self.subspace, self.d_t_formula]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

pub fn selfadjoint_defect_relations(
    t: &Mat,
    j: &FundamentalSymmetry,
    tol: &TolerancePolicy,
) -> Result<SelfadjointDefectReport> {
    let n = j.dim();
    if t.shape() != (n, n) {
        return Err(dim_err("selfadjoint_defect_relations: T does not match J"));
    }
    let jm = j.matrix();
    let defect = max_diff(&t.transpose(), &(jm * t * jm));
    if defect > tol.residual_bound(max_abs(t)) {
        return Err(Error::Usage(format!(
            "T is not J-selfadjoint (‖Tᵀ − JTJ‖_max = {defect:.3e})"
        )));
    }
    let dd = defect_data(t, j, tol)?;
    let lo = link_operators(t, j, &dd, tol)?;

    let i_minus_sq = Mat::identity(n, n) - t * t;
    let gram = SymmetricMatrix::symmetrize(&(i_minus_sq.transpose() * &i_minus_sq));
    let quartic_root = eigh(&gram).map(|l| l.max(0.0).sqrt().sqrt());

    Ok(SelfadjointDefectReport {
        d_tstar: max_diff(dd.d_tstar.as_matrix(), &(jm * dd.d_t.as_matrix() * jm)),
        j_tstar: max_diff(dd.j_tstar.as_matrix(), &(jm * dd.j_t.as_matrix() * jm)),
        l_tstar: max_diff(&lo.l_tstar_full(&dd), &(jm * lo.l_t_full(&dd) * jm)),
        subspace: max_diff(&dd.projector_star(), &(jm * dd.projector() * jm)),
        d_t_formula: max_diff(dd.d_t.as_matrix(), quartic_root.as_matrix()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{gaussian, random_orthogonal, random_symmetric, random_symmetry, trial_rng};
    use approx::assert_abs_diff_eq;
    use nalgebra::DVector;

    fn tol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    #[test]
    fn zero_operator() {
        let j = FundamentalSymmetry::from_signature("+-+").unwrap();
        let t = Mat::zeros(3, 3);
        let dd = defect_data(&t, &j, &tol()).unwrap();
        assert!(max_diff(dd.d_t.as_matrix(), &Mat::identity(3, 3)) < 1e-14);
        assert!(max_diff(dd.j_t.as_matrix(), j.matrix()) < 1e-14);
        assert_eq!(dd.rank(), 3);
        let lo = link_operators(&t, &j, &dd, &tol()).unwrap();
        assert!(max_abs(&lo.l_t) < 1e-15);
        assert!(verify_link_identities(&t, &j, &dd, &lo).max() < 1e-14);
    }

    #[test]
    fn hilbert_diagonal_example() {
        let j = FundamentalSymmetry::identity(2);
        let t = Mat::from_diagonal(&DVector::from_vec(vec![2.0, 0.5]));
        let dd = defect_data(&t, &j, &tol()).unwrap();
        let d = dd.d_t.as_matrix();
        assert_abs_diff_eq!(d[(0, 0)], 3f64.sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(d[(1, 1)], 0.75f64.sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(dd.j_t.as_matrix()[(0, 0)], -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(dd.j_t.as_matrix()[(1, 1)], 1.0, epsilon = 1e-14);
        // symmetric T with J = I: L_T is T compressed to the defect space
        let lo = link_operators(&t, &j, &dd, &tol()).unwrap();
        assert!(max_diff(&lo.l_t_full(&dd), &t) < 1e-12);
    }

    #[test]
    fn j_unitary_has_trivial_defect() {
        let j = FundamentalSymmetry::from_signature("+-").unwrap();
        let (c, s) = (0.7f64.cosh(), 0.7f64.sinh());
        let t = Mat::from_row_slice(2, 2, &[c, s, s, c]);
        let dd = defect_data(&t, &j, &tol()).unwrap();
        assert_eq!(dd.rank(), 0);
        assert!(max_abs(dd.d_t.as_matrix()) < 1e-6);
        let lo = link_operators(&t, &j, &dd, &tol()).unwrap();
        assert_eq!(lo.l_t.shape(), (0, 0));
    }

    #[test]
    fn hilbert_symmetric_contraction_identities() {
        let mut rng = trial_rng(41, 0);
        let j = FundamentalSymmetry::identity(4);
        let t = random_symmetric(&mut rng, 4, 0.5).into_matrix();
        let dd = defect_data(&t, &j, &tol()).unwrap();
        assert!(max_diff(dd.j_t.as_matrix(), &Mat::identity(4, 4)) < 1e-12);
        let lo = link_operators(&t, &j, &dd, &tol()).unwrap();
        assert!(verify_link_identities(&t, &j, &dd, &lo).max() < 1e-10);
    }

    #[test]
    fn random_link_identities_and_basis_independence() {
        for trial in 0..40 {
            let mut rng = trial_rng(42, trial);
            let n = 2 + (trial as usize % 4);
            let j = random_symmetry(&mut rng, n);
            let t = gaussian(&mut rng, n, n) * 0.6;
            let dd = defect_data(&t, &j, &tol()).unwrap();
            for r in dd.invariant_residuals(&t, &j) {
                assert!(r < 1e-10);
            }
            let lo = link_operators(&t, &j, &dd, &tol()).unwrap();
            let res = verify_link_identities(&t, &j, &dd, &lo);
            assert!(res.max() < 1e-8, "trial {trial}: {res:?}");

            let rot = dd.rebased(&random_orthogonal(&mut rng, dd.rank()), &random_orthogonal(&mut rng, dd.rank_star()));
            let lo2 = link_operators(&t, &j, &rot, &tol()).unwrap();
            assert!(verify_link_identities(&t, &j, &rot, &lo2).max() < 1e-8);
            assert!(max_diff(&lo2.l_t_full(&rot), &lo.l_t_full(&dd)) < 1e-8);
        }
    }

    #[test]
    fn selfadjoint_relations_hand_example() {
        let j = FundamentalSymmetry::from_signature("+-").unwrap();
        let t = Mat::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        let r = selfadjoint_defect_relations(&t, &j, &tol()).unwrap();
        assert!(r.max() < 1e-12, "{r:?}");
    }

    #[test]
    fn selfadjoint_relations_collapse_for_hilbert() {
        let mut rng = trial_rng(43, 0);
        let j = FundamentalSymmetry::identity(3);
        let t = random_symmetric(&mut rng, 3, 2.0).into_matrix();
        let dd = defect_data(&t, &j, &tol()).unwrap();
        assert!(max_diff(dd.d_t.as_matrix(), dd.d_tstar.as_matrix()) < 1e-12);
        assert!(selfadjoint_defect_relations(&t, &j, &tol()).unwrap().max() < 1e-10);
    }

    #[test]
    fn selfadjoint_relations_random() {
        for trial in 0..40 {
            let mut rng = trial_rng(44, trial);
            let j = random_symmetry(&mut rng, 4);
            let t = j.matrix() * random_symmetric(&mut rng, 4, 2.0).as_matrix();
            let r = selfadjoint_defect_relations(&t, &j, &tol()).unwrap();
            assert!(r.max() < 1e-8, "trial {trial}: {r:?}");
        }
    }

    #[test]
    fn selfadjoint_relations_reject_general_t() {
        let j = FundamentalSymmetry::from_signature("+-").unwrap();
        let t = Mat::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        assert!(matches!(selfadjoint_defect_relations(&t, &j, &tol()), Err(Error::Usage(_))));
    }
}
