//! Seeded random generators for matrices and problem instances.
//!
//! Every trial draws from its own `ChaCha8Rng`, seeded from the run seed and
//! the trial index through a SplitMix64 finalizer, so trials are independent
//! and reproducible across platforms and thread schedules.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::krein::FundamentalSymmetry;
use crate::spectral::{eigh, Eigendecomposition, Mat, SymmetricMatrix, TolerancePolicy};

pub type TrialRng = ChaCha8Rng;

/// Eigenvalues in `(threshold, BOUNDARY_FACTOR · threshold]` make an instance
/// too close to a rank change; generators reject it.
pub const BOUNDARY_FACTOR: f64 = 1e4;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Independent generator for trial `index` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, index: u64) -> TrialRng {
    let mixed = splitmix64(splitmix64(seed) ^ index.wrapping_mul(0xD6E8_FEB8_6659_FD93));
    ChaCha8Rng::seed_from_u64(mixed)
}

pub fn gaussian<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> Mat {
    Mat::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

/// Symmetric matrix with entries of size roughly `scale / sqrt(n)`.
pub fn random_symmetric<R: Rng + ?Sized>(rng: &mut R, n: usize, scale: f64) -> SymmetricMatrix {
    let g = gaussian(rng, n, n);
    let m = (&g + g.transpose()) * (0.5 * scale / (n as f64).sqrt());
    SymmetricMatrix::symmetrize(&m)
}

/// Haar-distributed orthogonal matrix.
pub fn random_orthogonal<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Mat {
    let qr = gaussian(rng, n, n).qr();
    let (q, r) = (qr.q(), qr.r());
    let mut q = q;
    for k in 0..n {
        if r[(k, k)] < 0.0 {
            q.column_mut(k).neg_mut();
        }
    }
    q
}

/// `Q diag(values) Qᵀ` with Haar `Q`.
pub fn with_spectrum<R: Rng + ?Sized>(rng: &mut R, values: &[f64]) -> SymmetricMatrix {
    let q = random_orthogonal(rng, values.len());
    let d = Mat::from_diagonal(&DVector::from_row_slice(values));
    SymmetricMatrix::symmetrize(&(&q * d * q.transpose()))
}

/// `GᵀG` scaled to operator size about `scale`, optionally rank deficient.
pub fn random_psd<R: Rng + ?Sized>(rng: &mut R, n: usize, rank: usize, scale: f64) -> SymmetricMatrix {
    let g = gaussian(rng, rank, n) * (scale / (n.max(rank) as f64).sqrt());
    SymmetricMatrix::symmetrize(&(g.transpose() * g))
}

/// Random `±1` signature of length `n`.
pub fn random_signs<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<i8> {
    (0..n).map(|_| if rng.random_bool(0.5) { 1 } else { -1 }).collect()
}

pub fn random_symmetry<R: Rng + ?Sized>(rng: &mut R, n: usize) -> FundamentalSymmetry {
    FundamentalSymmetry::from_signs(&random_signs(rng, n)).expect("nonempty signature")
}

/// Product of elementary Givens and hyperbolic rotations; `Uᵀ diag(signs) U = diag(signs)`.
pub fn random_j_unitary<R: Rng + ?Sized>(rng: &mut R, signs: &[i8]) -> Mat {
    let n = signs.len();
    let mut u = Mat::identity(n, n);
    if n < 2 {
        return u;
    }
    for _ in 0..n {
        let i = rng.random_range(0..n);
        let mut j = rng.random_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let (c, s, t) = if signs[i] == signs[j] {
            let a: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            (a.cos(), -a.sin(), a.sin())
        } else {
            let h: f64 = rng.random_range(-0.5..0.5);
            (h.cosh(), h.sinh(), h.sinh())
        };
        // right-multiply by the rotation acting on coordinates (i, j)
        for k in 0..n {
            let uki = u[(k, i)];
            let ukj = u[(k, j)];
            u[(k, i)] = c * uki + t * ukj;
            u[(k, j)] = s * uki + c * ukj;
        }
    }
    u
}

/// Strict J-contraction `K: (dom, diag(dom_signs)) → (cod, diag(cod_signs))`,
/// i.e. `diag(dom_signs) − Kᵀ diag(cod_signs) K` positive definite.
///
/// Returns `None` when the codomain has fewer negative directions than the
/// domain, in which case no J-contraction exists.
pub fn random_j_contraction<R: Rng + ?Sized>(rng: &mut R, dom_signs: &[i8], cod_signs: &[i8]) -> Option<Mat> {
    let pos = |s: &[i8]| (0..s.len()).filter(|&k| s[k] > 0).collect::<Vec<_>>();
    let neg = |s: &[i8]| (0..s.len()).filter(|&k| s[k] < 0).collect::<Vec<_>>();
    let (dp, dn, cp, cn) = (pos(dom_signs), neg(dom_signs), pos(cod_signs), neg(cod_signs));
    if cn.len() < dn.len() {
        return None;
    }
    let mut k0 = Mat::zeros(cod_signs.len(), dom_signs.len());

    if !dp.is_empty() && !cp.is_empty() {
        let g = gaussian(rng, cp.len(), dp.len());
        let shrink: f64 = rng.random_range(0.05..0.9);
        let x = &g * (shrink / g.norm().max(f64::MIN_POSITIVE));
        for (a, &r) in cp.iter().enumerate() {
            for (b, &c) in dp.iter().enumerate() {
                k0[(r, c)] = x[(a, b)];
            }
        }
    }
    if !dn.is_empty() {
        let (b, q) = (cn.len(), dn.len());
        let frame = gaussian(rng, b, q).qr().q();
        let stretch: Vec<f64> = (0..q).map(|_| rng.random_range(1.1..2.5)).collect();
        let y = frame.columns(0, q) * Mat::from_diagonal(&DVector::from_vec(stretch)) * random_orthogonal(rng, q);
        for (a, &r) in cn.iter().enumerate() {
            for (bcol, &c) in dn.iter().enumerate() {
                k0[(r, c)] = y[(a, bcol)];
            }
        }
    }
    let ucod = random_j_unitary(rng, cod_signs);
    let udom = random_j_unitary(rng, dom_signs);
    Some(ucod * k0 * udom)
}

/// Signs (+1 for eigenvalue ≥ 0) of a signature operator in its eigenbasis,
/// with the basis; `J = Q diag(signs) Qᵀ`.
pub fn signature_frame(j: &SymmetricMatrix) -> (Vec<i8>, Mat) {
    let e = eigh(j);
    let signs = e.eigenvalues.iter().map(|&l| if l < 0.0 { -1 } else { 1 }).collect();
    (signs, e.eigenvectors)
}

/// True when no eigenvalue sits just above the zero threshold.
pub fn well_separated(e: &Eigendecomposition, tol: &TolerancePolicy) -> bool {
    e.boundary_margin(tol) > BOUNDARY_FACTOR
}

pub fn well_separated_matrix(m: &SymmetricMatrix, tol: &TolerancePolicy) -> bool {
    well_separated(&eigh(m), tol)
}

/// Draw from `gen` until it yields a value; returns the value and the number
/// of rejected draws. Panics after `max_tries` rejections.
pub fn draw_with_rejection<R, T>(rng: &mut R, max_tries: usize, mut gen: impl FnMut(&mut R) -> Option<T>) -> (T, usize)
where
    R: Rng + ?Sized,
{
    for rejected in 0..max_tries {
        if let Some(v) = gen(rng) {
            return (v, rejected);
        }
    }
    panic!("generator rejected {max_tries} consecutive draws");
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{inertia, max_diff};

    #[test]
    fn trial_streams_are_reproducible_and_distinct() {
        let a: f64 = trial_rng(7, 3).random();
        let b: f64 = trial_rng(7, 3).random();
        let c: f64 = trial_rng(7, 4).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn orthogonal_is_orthogonal() {
        let mut rng = trial_rng(1, 0);
        let q = random_orthogonal(&mut rng, 5);
        assert!(max_diff(&(q.transpose() * &q), &Mat::identity(5, 5)) < 1e-12);
    }

    #[test]
    fn j_unitary_preserves_signature() {
        let mut rng = trial_rng(2, 0);
        let signs = [1, -1, 1, -1, -1];
        let j = Mat::from_diagonal(&DVector::from_iterator(5, signs.iter().map(|&s| s as f64)));
        for _ in 0..20 {
            let u = random_j_unitary(&mut rng, &signs);
            assert!(max_diff(&(u.transpose() * &j * &u), &j) < 1e-10);
        }
    }

    #[test]
    fn j_contraction_is_strict() {
        let mut rng = trial_rng(3, 0);
        let tol = TolerancePolicy::default();
        let dom = [1, -1, 1];
        let cod = [-1, 1, -1, 1];
        let jd = Mat::from_diagonal(&DVector::from_iterator(3, dom.iter().map(|&s| s as f64)));
        let jc = Mat::from_diagonal(&DVector::from_iterator(4, cod.iter().map(|&s| s as f64)));
        for _ in 0..50 {
            let k = random_j_contraction(&mut rng, &dom, &cod).unwrap();
            let defect = SymmetricMatrix::symmetrize(&(&jd - k.transpose() * &jc * &k));
            let i = inertia(&defect, &tol);
            assert_eq!((i.nu_minus, i.nu_zero), (0, 0));
        }
        assert!(random_j_contraction(&mut rng, &[-1, -1], &[1, -1]).is_none());
    }
}
