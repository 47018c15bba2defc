//! Dense symmetric eigen-machinery.
//!
//! Everything downstream reduces to spectral calculus of real symmetric
//! matrices: inertia counts, the signature `sign(M)`, moduli `|M|^p` with
//! Moore–Penrose inversion on the kernel, and range inclusion tests. The
//! eigensolver is a cyclic Jacobi iteration with a fixed sweep order, so all
//! results are deterministic for a given input.

use std::fmt;

use nalgebra::DMatrix;

use crate::error::{dim_err, Error, Result};

/// Dense real matrix used throughout the crate.
pub type Mat = DMatrix<f64>;

const JACOBI_REL_STOP: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 64;

/// Largest absolute entry, `0.0` for an empty matrix.
pub fn max_abs(m: &Mat) -> f64 {
    m.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

/// Max-norm distance between two matrices of equal shape.
pub fn max_diff(a: &Mat, b: &Mat) -> f64 {
    assert_eq!(a.shape(), b.shape(), "max_diff: shape mismatch");
    a.iter()
        .zip(b.iter())
        .fold(0.0_f64, |acc, (x, y)| acc.max((x - y).abs()))
}

/// Thresholds used to turn exact range/kernel dichotomies into numerical ones.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TolerancePolicy {
    /// An eigenvalue `λ` counts as zero when `|λ| <= relative_zero * max(1, max_k |λ_k|)`.
    pub relative_zero: f64,
    /// Bound for range-inclusion, reconstruction and identity residuals.
    pub residual_tol: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        Self {
            relative_zero: 1e-10,
            residual_tol: 1e-8,
        }
    }
}

impl TolerancePolicy {
    pub fn new(relative_zero: f64, residual_tol: f64) -> Result<Self> {
        let ok = |x: f64| x.is_finite() && x > 0.0;
        if !ok(relative_zero) || !ok(residual_tol) {
            return Err(Error::Usage(format!(
                "tolerances must be positive and finite (relative_zero={relative_zero}, residual_tol={residual_tol})"
            )));
        }
        Ok(Self {
            relative_zero,
            residual_tol,
        })
    }

    /// Absolute zero threshold for a spectrum whose largest modulus is `spectral_radius`.
    pub fn zero_threshold(&self, spectral_radius: f64) -> f64 {
        self.relative_zero * spectral_radius.max(1.0)
    }

    /// Absolute residual bound for quantities of magnitude `scale`.
    pub fn residual_bound(&self, scale: f64) -> f64 {
        self.residual_tol * scale.max(1.0)
    }
}

/// A dense real symmetric matrix, the model of a bounded selfadjoint operator.
///
/// Construction checks symmetry at tolerance and then stores the exactly
/// symmetrized matrix `(M + Mᵀ)/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix(Mat);

impl SymmetricMatrix {
    pub fn new(m: Mat) -> Result<Self> {
        Self::with_tolerance(m, &TolerancePolicy::default())
    }

    pub fn with_tolerance(m: Mat, tol: &TolerancePolicy) -> Result<Self> {
        if !m.is_square() {
            return Err(dim_err(format!(
                "expected a square matrix, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        if m.nrows() == 0 {
            return Err(dim_err("empty matrix"));
        }
        let defect = max_diff(&m, &m.transpose());
        if defect > tol.residual_bound(max_abs(&m)) {
            return Err(Error::NotSymmetric { defect });
        }
        Ok(Self::symmetrize(&m))
    }

    /// Symmetric part `(M + Mᵀ)/2` without any check.
    pub fn symmetrize(m: &Mat) -> Self {
        assert!(m.is_square(), "symmetrize: matrix must be square");
        Self((m + m.transpose()) * 0.5)
    }

    pub fn identity(n: usize) -> Self {
        Self(Mat::identity(n, n))
    }

    pub fn zeros(n: usize) -> Self {
        Self(Mat::zeros(n, n))
    }

    pub fn from_diagonal(d: &[f64]) -> Self {
        let n = d.len();
        Self(Mat::from_fn(n, n, |i, j| if i == j { d[i] } else { 0.0 }))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &Mat {
        &self.0
    }

    pub fn into_matrix(self) -> Mat {
        self.0
    }
}

impl AsRef<Mat> for SymmetricMatrix {
    fn as_ref(&self) -> &Mat {
        &self.0
    }
}

/// `M = Q Λ Qᵀ` with eigenvalues ascending and eigenvectors in the columns of `Q`.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigendecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Mat,
}

impl Eigendecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0_f64, |a, l| a.max(l.abs()))
    }

    pub fn zero_threshold(&self, tol: &TolerancePolicy) -> f64 {
        tol.zero_threshold(self.spectral_radius())
    }

    /// `Q f(Λ) Qᵀ`, symmetrized.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> SymmetricMatrix {
        let q = &self.eigenvectors;
        let mut scaled = q.clone();
        for (k, &l) in self.eigenvalues.iter().enumerate() {
            let fl = f(l);
            scaled.column_mut(k).scale_mut(fl);
        }
        SymmetricMatrix::symmetrize(&(scaled * q.transpose()))
    }

    pub fn reconstruct(&self) -> Mat {
        self.map(|l| l).into_matrix()
    }

    /// Orthonormal basis (as columns) of eigenvectors whose eigenvalue passes `keep`.
    fn basis_where(&self, keep: impl Fn(f64) -> bool) -> Mat {
        let cols: Vec<usize> = (0..self.dim())
            .filter(|&k| keep(self.eigenvalues[k]))
            .collect();
        self.eigenvectors.select_columns(cols.iter())
    }

    /// Orthonormal basis of the range (eigenvalues above the zero threshold).
    pub fn range_basis(&self, tol: &TolerancePolicy) -> Mat {
        let thr = self.zero_threshold(tol);
        self.basis_where(|l| l.abs() > thr)
    }

    /// Orthonormal basis of the numerical kernel.
    pub fn kernel_basis(&self, tol: &TolerancePolicy) -> Mat {
        let thr = self.zero_threshold(tol);
        self.basis_where(|l| l.abs() <= thr)
    }

    pub fn inertia(&self, tol: &TolerancePolicy) -> Inertia {
        let thr = self.zero_threshold(tol);
        let mut out = Inertia::default();
        for &l in &self.eigenvalues {
            if l > thr {
                out.nu_plus += 1;
            } else if l < -thr {
                out.nu_minus += 1;
            } else {
                out.nu_zero += 1;
            }
        }
        out
    }

    /// Smallest ratio `|λ| / threshold` over eigenvalues that are classified
    /// as nonzero; `f64::INFINITY` when all are zero.
    pub fn boundary_margin(&self, tol: &TolerancePolicy) -> f64 {
        let thr = self.zero_threshold(tol);
        self.eigenvalues
            .iter()
            .filter(|l| l.abs() > thr)
            .map(|l| l.abs() / thr)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
///
/// Sweeps rows in order `(0,1), (0,2), …, (n-2,n-1)` until the off-diagonal
/// Frobenius mass drops below `1e-14 · ‖M‖_F`.
pub fn eigh(m: &SymmetricMatrix) -> Eigendecomposition {
    let n = m.dim();
    let mut a = m.as_matrix().clone();
    let mut v = Mat::identity(n, n);
    let stop = JACOBI_REL_STOP * a.norm();

    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a) <= stop {
            break;
        }
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]));
    let eigenvalues = order.iter().map(|&k| a[(k, k)]).collect();
    let eigenvectors = v.select_columns(order.iter());
    Eigendecomposition {
        eigenvalues,
        eigenvectors,
    }
}

fn off_diagonal_norm(a: &Mat) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)] * a[(i, j)];
            }
        }
    }
    s.sqrt()
}

/// Counts of positive, zero and negative eigenvalues.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Inertia {
    pub nu_plus: usize,
    pub nu_zero: usize,
    pub nu_minus: usize,
}

impl Inertia {
    pub fn new(nu_plus: usize, nu_zero: usize, nu_minus: usize) -> Self {
        Self {
            nu_plus,
            nu_zero,
            nu_minus,
        }
    }

    pub fn dim(&self) -> usize {
        self.nu_plus + self.nu_zero + self.nu_minus
    }
}

impl fmt::Display for Inertia {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.nu_plus, self.nu_zero, self.nu_minus)
    }
}

pub fn inertia(m: &SymmetricMatrix, tol: &TolerancePolicy) -> Inertia {
    eigh(m).inertia(tol)
}

/// Signature operator `sign(M)` with the convention `sign(0) = +1`.
pub fn sign_operator(m: &SymmetricMatrix, tol: &TolerancePolicy) -> SymmetricMatrix {
    let e = eigh(m);
    let thr = e.zero_threshold(tol);
    e.map(|l| if l < -thr { -1.0 } else { 1.0 })
}

const SUPPORTED_EXPONENTS: [f64; 4] = [1.0, 0.5, -0.5, -1.0];

/// `|M|^p` for `p ∈ {1, 1/2, -1/2, -1}`.
///
/// Eigenvalues at or below the zero threshold map to `0`; negative powers
/// are therefore Moore–Penrose.
pub fn abs_power(m: &SymmetricMatrix, p: f64, tol: &TolerancePolicy) -> Result<SymmetricMatrix> {
    if !SUPPORTED_EXPONENTS.iter().any(|&q| (q - p).abs() < 1e-12) {
        return Err(Error::Usage(format!(
            "unsupported exponent {p}; expected one of 1, 1/2, -1/2, -1"
        )));
    }
    Ok(abs_power_of(&eigh(m), p, tol))
}

pub(crate) fn abs_power_of(e: &Eigendecomposition, p: f64, tol: &TolerancePolicy) -> SymmetricMatrix {
    let thr = e.zero_threshold(tol);
    // eigenvalues classified as zero stay exactly zero, so ran |M|^p = ran M for every p
    e.map(|l| if l.abs() <= thr { 0.0 } else { l.abs().powf(p) })
}

/// Moore–Penrose inverse of a symmetric matrix.
pub fn pseudo_inverse(m: &SymmetricMatrix, tol: &TolerancePolicy) -> SymmetricMatrix {
    let e = eigh(m);
    let thr = e.zero_threshold(tol);
    e.map(|l| if l.abs() <= thr { 0.0 } else { 1.0 / l })
}

/// Orthogonal projector onto the numerical range of `m`.
pub fn range_projector(m: &SymmetricMatrix, tol: &TolerancePolicy) -> Mat {
    let b = eigh(m).range_basis(tol);
    &b * b.transpose()
}

/// Outcome of a range-inclusion test `ran target ⊂ ran within`.
#[derive(Debug, Clone, PartialEq)]
pub struct RangeInclusion {
    pub included: bool,
    /// `‖(I − P) target‖_max` where `P` projects onto `ran within`.
    pub residual: f64,
    /// The bound `residual` was compared against.
    pub bound: f64,
    /// Least-norm solution of `within · X = target`; `ran X ⊂ ran within`.
    pub coefficients: Mat,
    /// Residual lies within a factor 10 of the bound.
    pub ill_conditioned: bool,
}

pub fn range_inclusion(
    target: &Mat,
    within: &SymmetricMatrix,
    tol: &TolerancePolicy,
) -> Result<RangeInclusion> {
    if target.nrows() != within.dim() {
        return Err(dim_err(format!(
            "range_inclusion: target has {} rows, operator has dimension {}",
            target.nrows(),
            within.dim()
        )));
    }
    let e = eigh(within);
    let basis = e.range_basis(tol);
    let projected = &basis * (basis.transpose() * target);
    let residual = if target.is_empty() {
        0.0
    } else {
        max_diff(target, &projected)
    };
    let bound = tol.residual_bound(max_abs(target));
    let thr = e.zero_threshold(tol);
    let pinv = e.map(|l| if l.abs() <= thr { 0.0 } else { 1.0 / l });
    Ok(RangeInclusion {
        included: residual <= bound,
        residual,
        bound,
        coefficients: pinv.as_matrix() * target,
        ill_conditioned: residual >= 0.1 * bound && residual <= 10.0 * bound,
    })
}
