//! Indefinite inner-product structure.
//!
//! A Kreĭn space here is `R^n` with the form `[f, g] = (J f, g)` for a
//! fundamental symmetry `J = Jᵀ = J⁻¹`. Operators between two such spaces
//! always carry both symmetries explicitly.

use nalgebra::DVector;

use crate::error::{dim_err, Error, Result};
use crate::spectral::{eigh, inertia, max_abs, max_diff, Inertia, Mat, SymmetricMatrix, TolerancePolicy};

/// Symmetric involution defining the indefinite metric.
#[derive(Debug, Clone, PartialEq)]
pub struct FundamentalSymmetry {
    j: SymmetricMatrix,
    nu_minus: usize,
}

impl FundamentalSymmetry {
    pub fn new(m: Mat) -> Result<Self> {
        Self::with_tolerance(m, &TolerancePolicy::default())
    }

    pub fn with_tolerance(m: Mat, tol: &TolerancePolicy) -> Result<Self> {
        let j = SymmetricMatrix::with_tolerance(m, tol)?;
        let n = j.dim();
        let sq = j.as_matrix() * j.as_matrix();
        let defect = max_diff(&sq, &Mat::identity(n, n));
        if defect > tol.residual_tol {
            return Err(Error::NotInvolution(format!("‖J² − I‖_max = {defect:.3e}")));
        }
        let e = eigh(&j);
        if let Some(bad) = e.eigenvalues.iter().find(|l| (l.abs() - 1.0).abs() > tol.residual_tol) {
            return Err(Error::NotInvolution(format!("eigenvalue {bad} is not ±1")));
        }
        let nu_minus = e.eigenvalues.iter().filter(|&&l| l < 0.0).count();
        Ok(Self { j, nu_minus })
    }

    /// Canonical `diag(signs)`; every entry must be `±1`.
    pub fn from_signs(signs: &[i8]) -> Result<Self> {
        if signs.is_empty() {
            return Err(dim_err("empty signature"));
        }
        if let Some(s) = signs.iter().find(|s| s.abs() != 1) {
            return Err(Error::NotInvolution(format!("signature entry {s} is not ±1")));
        }
        let d: Vec<f64> = signs.iter().map(|&s| s as f64).collect();
        Ok(Self {
            j: SymmetricMatrix::from_diagonal(&d),
            nu_minus: signs.iter().filter(|&&s| s < 0).count(),
        })
    }

    /// Parses shorthand like `"+-+"` into `diag(1, -1, 1)`. Accepts `−` (U+2212) for minus.
    pub fn from_signature(s: &str) -> Result<Self> {
        let signs = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '+' => Ok(1),
                '-' | '−' => Ok(-1),
                other => Err(Error::Usage(format!("invalid signature character {other:?}"))),
            })
            .collect::<Result<Vec<i8>>>()?;
        Self::from_signs(&signs)
    }

    pub fn identity(n: usize) -> Self {
        Self {
            j: SymmetricMatrix::identity(n),
            nu_minus: 0,
        }
    }

    /// `diag(J₁, J₂)`.
    pub fn direct_sum(a: &Self, b: &Self) -> Self {
        let (n1, n2) = (a.dim(), b.dim());
        let mut m = Mat::zeros(n1 + n2, n1 + n2);
        m.view_mut((0, 0), (n1, n1)).copy_from(a.matrix());
        m.view_mut((n1, n1), (n2, n2)).copy_from(b.matrix());
        Self {
            j: SymmetricMatrix::symmetrize(&m),
            nu_minus: a.nu_minus + b.nu_minus,
        }
    }

    pub fn dim(&self) -> usize {
        self.j.dim()
    }

    pub fn matrix(&self) -> &Mat {
        self.j.as_matrix()
    }

    pub fn symmetric(&self) -> &SymmetricMatrix {
        &self.j
    }

    /// `ν₋(J)`.
    pub fn nu_minus(&self) -> usize {
        self.nu_minus
    }

    pub fn nu_plus(&self) -> usize {
        self.dim() - self.nu_minus
    }

    pub fn is_identity(&self) -> bool {
        self.nu_minus == 0
    }

    /// Signs of a diagonal symmetry, `None` when `J` is not diagonal.
    pub fn diagonal_signs(&self) -> Option<Vec<i8>> {
        let m = self.matrix();
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                if i != j && m[(i, j)] != 0.0 {
                    return None;
                }
            }
        }
        Some((0..n).map(|i| if m[(i, i)] < 0.0 { -1 } else { 1 }).collect())
    }
}

/// `(ℋ, J)` together with its negative index.
#[derive(Debug, Clone, PartialEq)]
pub struct KreinSpace {
    pub symmetry: FundamentalSymmetry,
    pub kappa_minus: usize,
}

impl KreinSpace {
    pub fn new(symmetry: FundamentalSymmetry) -> Self {
        let kappa_minus = symmetry.nu_minus();
        Self {
            symmetry,
            kappa_minus,
        }
    }

    pub fn dim(&self) -> usize {
        self.symmetry.dim()
    }
}

/// Orthogonal sum `(ℋ₁ ⊕ ℋ₂, diag(J₁, J₂))`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockSpace {
    pub space1: KreinSpace,
    pub space2: KreinSpace,
    pub j: FundamentalSymmetry,
}

impl BlockSpace {
    pub fn new(j1: FundamentalSymmetry, j2: FundamentalSymmetry) -> Self {
        let j = FundamentalSymmetry::direct_sum(&j1, &j2);
        Self {
            space1: KreinSpace::new(j1),
            space2: KreinSpace::new(j2),
            j,
        }
    }

    pub fn j1(&self) -> &FundamentalSymmetry {
        &self.space1.symmetry
    }

    pub fn j2(&self) -> &FundamentalSymmetry {
        &self.space2.symmetry
    }

    pub fn n1(&self) -> usize {
        self.space1.dim()
    }

    pub fn n2(&self) -> usize {
        self.space2.dim()
    }

    /// `[[a11, a12], [a21, a22]]`.
    pub fn assemble(&self, a11: &Mat, a12: &Mat, a21: &Mat, a22: &Mat) -> Mat {
        let (n1, n2) = (self.n1(), self.n2());
        let mut m = Mat::zeros(n1 + n2, n1 + n2);
        m.view_mut((0, 0), (n1, n1)).copy_from(a11);
        m.view_mut((0, n1), (n1, n2)).copy_from(a12);
        m.view_mut((n1, 0), (n2, n1)).copy_from(a21);
        m.view_mut((n1, n1), (n2, n2)).copy_from(a22);
        m
    }

    /// Splits a full matrix into `(a11, a12, a21, a22)`.
    pub fn blocks(&self, m: &Mat) -> (Mat, Mat, Mat, Mat) {
        let (n1, n2) = (self.n1(), self.n2());
        (
            m.view((0, 0), (n1, n1)).into_owned(),
            m.view((0, n1), (n1, n2)).into_owned(),
            m.view((n1, 0), (n2, n1)).into_owned(),
            m.view((n1, n1), (n2, n2)).into_owned(),
        )
    }
}

/// Kreĭn adjoint of `T: (ℋ_dom, J_dom) → (ℋ_cod, J_cod)`: `T^{[*]} = J_dom Tᵀ J_cod`.
pub fn j_adjoint(t: &Mat, jdom: &FundamentalSymmetry, jcod: &FundamentalSymmetry) -> Result<Mat> {
    if t.ncols() != jdom.dim() || t.nrows() != jcod.dim() {
        return Err(dim_err(format!(
            "j_adjoint: operator is {}x{}, symmetries have dims {} (domain) and {} (codomain)",
            t.nrows(),
            t.ncols(),
            jdom.dim(),
            jcod.dim()
        )));
    }
    Ok(jdom.matrix() * t.transpose() * jcod.matrix())
}

/// The Hilbert-space operator `J·A`, checked to be symmetric at tolerance.
pub fn j_form(a: &Mat, j: &FundamentalSymmetry, tol: &TolerancePolicy) -> Result<SymmetricMatrix> {
    if a.nrows() != j.dim() || a.ncols() != j.dim() {
        return Err(dim_err(format!(
            "expected a {0}x{0} operator, got {1}x{2}",
            j.dim(),
            a.nrows(),
            a.ncols()
        )));
    }
    let ja = j.matrix() * a;
    let defect = max_diff(&ja, &ja.transpose());
    if defect > tol.residual_bound(max_abs(a)) {
        return Err(Error::NotJSelfadjoint { defect });
    }
    Ok(SymmetricMatrix::symmetrize(&ja))
}

/// Inertia of the form `[A f, f]`; its `nu_minus` is `ν₋[A]`.
pub fn negative_squares(a: &Mat, j: &FundamentalSymmetry, tol: &TolerancePolicy) -> Result<Inertia> {
    Ok(inertia(&j_form(a, j, tol)?, tol))
}

/// `A ≥_J B`, i.e. `J(A − B)` has no negative eigenvalues at tolerance.
pub fn j_geq(a: &Mat, b: &Mat, j: &FundamentalSymmetry, tol: &TolerancePolicy) -> Result<bool> {
    if a.shape() != b.shape() {
        return Err(dim_err("j_geq: operands differ in shape"));
    }
    j_form(a, j, tol)?;
    j_form(b, j, tol)?;
    Ok(negative_squares(&(a - b), j, tol)?.nu_minus == 0)
}

/// `J_dom − Tᵀ J_cod T ⪰ 0` at tolerance.
pub fn is_j_contraction(
    t: &Mat,
    jdom: &FundamentalSymmetry,
    jcod: &FundamentalSymmetry,
    tol: &TolerancePolicy,
) -> Result<bool> {
    if t.ncols() != jdom.dim() || t.nrows() != jcod.dim() {
        return Err(dim_err("is_j_contraction: shape does not match symmetries"));
    }
    let defect = SymmetricMatrix::symmetrize(&(jdom.matrix() - t.transpose() * jcod.matrix() * t));
    Ok(inertia(&defect, tol).nu_minus == 0)
}

/// Orthogonal change of basis bringing `J` to `diag(+1, …, +1, −1, …, −1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalForm {
    pub basis: Mat,
    pub signs: Vec<i8>,
}

impl CanonicalForm {
    pub fn canonical(&self) -> Mat {
        Mat::from_diagonal(&DVector::from_iterator(
            self.signs.len(),
            self.signs.iter().map(|&s| s as f64),
        ))
    }
}

pub fn canonicalize(j: &FundamentalSymmetry) -> CanonicalForm {
    let e = eigh(j.symmetric());
    let n = j.dim();
    // eigenvalues ascend, so reverse to put +1 first
    let order: Vec<usize> = (0..n).rev().collect();
    let basis = e.eigenvectors.select_columns(order.iter());
    let signs = order
        .iter()
        .map(|&k| if e.eigenvalues[k] < 0.0 { -1 } else { 1 })
        .collect();
    CanonicalForm { basis, signs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{gaussian, random_j_unitary, random_psd, random_signs, random_symmetric, random_symmetry, trial_rng};

    fn tol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    fn m1(x: f64) -> Mat {
        Mat::from_element(1, 1, x)
    }

    #[test]
    fn symmetry_validation() {
        assert!(FundamentalSymmetry::new(Mat::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0])).is_ok());
        assert!(matches!(
            FundamentalSymmetry::new(Mat::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 0.5])),
            Err(Error::NotInvolution(_))
        ));
        let j = FundamentalSymmetry::from_signature("+−+").unwrap();
        assert_eq!(j.diagonal_signs(), Some(vec![1, -1, 1]));
        assert_eq!(j.nu_minus(), 1);
        assert!(FundamentalSymmetry::from_signature("+x").is_err());
        assert!(FundamentalSymmetry::from_signature("").is_err());
    }

    #[test]
    fn j_adjoint_examples() {
        let mut rng = trial_rng(21, 0);
        let t = gaussian(&mut rng, 3, 2);
        let adj = j_adjoint(&t, &FundamentalSymmetry::identity(2), &FundamentalSymmetry::identity(3)).unwrap();
        assert_eq!(adj, t.transpose());

        let jp = FundamentalSymmetry::from_signature("+").unwrap();
        let jm = FundamentalSymmetry::from_signature("-").unwrap();
        assert_eq!(j_adjoint(&m1(1.0), &jp, &jm).unwrap(), m1(-1.0));

        assert!(j_adjoint(&t, &FundamentalSymmetry::identity(3), &FundamentalSymmetry::identity(3)).is_err());
    }

    #[test]
    fn j_adjoint_involution_and_product_rule() {
        let mut rng = trial_rng(22, 0);
        for _ in 0..50 {
            let (a, b, c) = (random_symmetry(&mut rng, 3), random_symmetry(&mut rng, 4), random_symmetry(&mut rng, 2));
            let t = gaussian(&mut rng, 4, 3); // a -> b
            let s = gaussian(&mut rng, 2, 4); // b -> c
            let tt = j_adjoint(&t, &a, &b).unwrap();
            assert!(max_diff(&j_adjoint(&tt, &b, &a).unwrap(), &t) < 1e-12);
            let st = j_adjoint(&(&s * &t), &a, &c).unwrap();
            let rev = &tt * j_adjoint(&s, &b, &c).unwrap();
            assert!(max_diff(&st, &rev) < 1e-12);
        }
    }

    #[test]
    fn negative_squares_examples() {
        let t = tol();
        let j = FundamentalSymmetry::from_signature("+-").unwrap();
        assert_eq!(negative_squares(&Mat::identity(2, 2), &j, &t).unwrap().nu_minus, 1);
        let a = Mat::from_diagonal(&DVector::from_vec(vec![2.0, -1.0]));
        assert_eq!(negative_squares(&a, &j, &t).unwrap().nu_minus, 0);
        assert_eq!(negative_squares(j.matrix(), &j, &t).unwrap().nu_minus, 0);
        let not_sa = Mat::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        assert!(matches!(negative_squares(&not_sa, &j, &t), Err(Error::NotJSelfadjoint { .. })));
    }

    #[test]
    fn negative_squares_is_j_unitary_invariant() {
        let mut rng = trial_rng(23, 0);
        let t = tol();
        for _ in 0..50 {
            let signs = random_signs(&mut rng, 4);
            let j = FundamentalSymmetry::from_signs(&signs).unwrap();
            let a = j.matrix() * random_symmetric(&mut rng, 4, 2.0).as_matrix();
            let u = random_j_unitary(&mut rng, &signs);
            let ua = j_adjoint(&u, &j, &j).unwrap() * &a * &u;
            assert_eq!(
                negative_squares(&ua, &j, &t).unwrap().nu_minus,
                negative_squares(&a, &j, &t).unwrap().nu_minus
            );
        }
    }

    #[test]
    fn j_geq_is_a_partial_order() {
        let t = tol();
        let i = FundamentalSymmetry::identity(1);
        assert!(j_geq(&m1(2.0), &m1(1.0), &i, &t).unwrap());
        assert!(!j_geq(&m1(1.0), &m1(2.0), &i, &t).unwrap());

        let mut rng = trial_rng(24, 0);
        for _ in 0..50 {
            let j = random_symmetry(&mut rng, 4);
            let b = j.matrix() * random_symmetric(&mut rng, 4, 1.0).as_matrix();
            assert!(j_geq(&b, &b, &j, &t).unwrap());
            let a = &b + j.matrix() * random_psd(&mut rng, 4, 4, 1.0).as_matrix();
            let c = &a + j.matrix() * random_psd(&mut rng, 4, 2, 1.0).as_matrix();
            assert!(j_geq(&a, &b, &j, &t).unwrap());
            assert!(j_geq(&c, &a, &j, &t).unwrap());
            assert!(j_geq(&c, &b, &j, &t).unwrap());
            assert!(!j_geq(&b, &a, &j, &t).unwrap());
        }
    }

    #[test]
    fn j_contraction_examples() {
        let t = tol();
        let i = FundamentalSymmetry::identity(2);
        assert!(is_j_contraction(&Mat::zeros(2, 2), &i, &i, &t).unwrap());
        let j = FundamentalSymmetry::from_signature("+-").unwrap();
        assert!(!is_j_contraction(&Mat::zeros(2, 2), &j, &i, &t).unwrap());
        let i1 = FundamentalSymmetry::identity(1);
        assert!(!is_j_contraction(&m1(2.0), &i1, &i1, &t).unwrap());
    }

    #[test]
    fn canonicalize_examples() {
        let j = FundamentalSymmetry::from_signature("-+").unwrap();
        let c = canonicalize(&j);
        assert_eq!(c.signs, vec![1, -1]);
        assert!(c.basis.iter().all(|x| x.abs() == 0.0 || x.abs() == 1.0));

        let x = FundamentalSymmetry::new(Mat::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0])).unwrap();
        let c = canonicalize(&x);
        assert_eq!(c.signs, vec![1, -1]);
        let back = &c.basis * c.canonical() * c.basis.transpose();
        assert!(max_diff(&back, x.matrix()) < 1e-12);
        let fwd = c.basis.transpose() * x.matrix() * &c.basis;
        assert!(max_diff(&fwd, &c.canonical()) < 1e-12);
    }
}
