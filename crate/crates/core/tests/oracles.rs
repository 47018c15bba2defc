//! Values checked against direct nalgebra computations that share no code
//! with the crate's Jacobi solver or its range-based formulas.

use approx::assert_abs_diff_eq;
use krein_core::completion::{solve, CompletionProblem};
use krein_core::extension::{extremal_pair, ExtensionProblem, Variant};
use krein_core::generate;
use krein_core::random::{random_symmetric, trial_rng};
use krein_core::spectral::{abs_power, eigh, max_diff, pseudo_inverse};
use krein_core::{BlockSpace, FundamentalSymmetry, Mat, TolerancePolicy};

fn tol() -> TolerancePolicy {
    TolerancePolicy::default()
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

#[test]
fn jacobi_matches_nalgebra_eigenvalues() {
    for k in 0..100 {
        let mut rng = trial_rng(11, k);
        let n = 1 + (k as usize % 7);
        let m = random_symmetric(&mut rng, n, 2.0);
        let ours = sorted(eigh(&m).eigenvalues);
        let theirs = sorted(m.as_matrix().clone().symmetric_eigenvalues().iter().copied().collect());
        for (a, b) in ours.iter().zip(&theirs) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
    }
}

/// The four Penrose conditions characterize the pseudo-inverse uniquely.
#[test]
fn pseudo_inverse_satisfies_penrose_conditions() {
    for k in 0..50 {
        let mut rng = trial_rng(12, k);
        let n = 1 + (k as usize % 6);
        let m = generate::random_gapped_symmetric(&mut rng, n, 0.3);
        let a = m.as_matrix();
        let x = pseudo_inverse(&m, &tol()).into_matrix();
        let (ax, xa) = (a * &x, &x * a);
        assert!(max_diff(&(&ax * a), a) < 1e-12, "k = {k}");
        assert!(max_diff(&(&xa * &x), &x) < 1e-12, "k = {k}");
        assert!(max_diff(&ax, &ax.transpose()) < 1e-12, "k = {k}");
        assert!(max_diff(&xa, &xa.transpose()) < 1e-12, "k = {k}");
    }
}

#[test]
fn square_root_of_modulus_squares_to_modulus() {
    for k in 0..50 {
        let mut rng = trial_rng(13, k);
        let m = generate::random_gapped_symmetric(&mut rng, 5, 0.3);
        let root = abs_power(&m, 0.5, &tol()).unwrap();
        let sq = root.as_matrix() * root.as_matrix();
        let e = m.as_matrix().clone().symmetric_eigen();
        let abs = &e.eigenvectors * Mat::from_diagonal(&e.eigenvalues.map(f64::abs)) * e.eigenvectors.transpose();
        assert!(max_diff(&sq, &abs) < 1e-10, "k = {k}");
    }
}

/// With `A11` invertible the minimal completion is the Schur complement
/// expression `J₂ (J₂A21)(J₁A11)⁻¹(J₁A12)`.
#[test]
fn minimal_completion_is_schur_complement() {
    let mut checked = 0;
    for k in 0..100 {
        let mut rng = trial_rng(14, k);
        let (p, _) = generate::solvable_completion(&mut rng, 5, &tol());
        let (j1, j2) = (p.space().j1().matrix(), p.space().j2().matrix());
        let f11 = j1 * p.a11();
        if f11.clone().symmetric_eigenvalues().amin() < 0.1 {
            continue;
        }
        let inv = f11.try_inverse().unwrap();
        let expected = j2 * (j2 * p.a21()) * inv * (j1 * p.a12());
        let sol = solve(&p).unwrap();
        assert!(max_diff(&sol.a22_min, &expected) < 1e-8, "k = {k}");
        checked += 1;
    }
    assert!(checked > 20);
}

#[test]
fn hilbert_minimal_completion_of_rank_one() {
    let p = CompletionProblem::new(
        BlockSpace::new(FundamentalSymmetry::identity(2), FundamentalSymmetry::identity(1)),
        Mat::from_row_slice(2, 2, &[4.0, 0.0, 0.0, 0.0]),
        Mat::from_row_slice(2, 1, &[2.0, 0.0]),
        tol(),
    )
    .unwrap();
    let sol = solve(&p).unwrap();
    assert_abs_diff_eq!(sol.a22_min[(0, 0)], 1.0, epsilon = 1e-14);
    assert_abs_diff_eq!(sol.s[(0, 0)], 1.0, epsilon = 1e-14);
}

/// Away from `±1` in the spectrum of `T11` the extremal blocks are
/// `T21(I ± T11)⁻¹T12 ∓ I`.
#[test]
fn extremal_blocks_by_direct_inversion() {
    let mut checked = 0;
    for variant in [Variant::Hilbert, Variant::Pontryagin] {
        for k in 0..100 {
            let mut rng = trial_rng(15, k);
            let (p, _) = generate::solvable_extension(&mut rng, variant, 5, &tol());
            let n1 = p.space().n1();
            let i1 = Mat::identity(n1, n1);
            let (plus, minus) = (&i1 + p.t11(), &i1 - p.t11());
            let gap = |m: &Mat| m.clone().singular_values().min();
            if gap(&plus).min(gap(&minus)) < 0.1 {
                continue;
            }
            let (plus, minus) = (plus.try_inverse().unwrap(), minus.try_inverse().unwrap());
            let n2 = p.space().n2();
            let i2 = Mat::identity(n2, n2);
            let t12 = p.t12();
            let m22 = p.t21() * plus * &t12 - &i2;
            let big_m22 = &i2 - p.t21() * minus * &t12;
            let pair = extremal_pair(&p).unwrap();
            let n = n1 + n2;
            let got_m = pair.t_min.view((n1, n1), (n2, n2)).into_owned();
            let got_big = pair.t_max.view((n1, n1), (n2, n2)).into_owned();
            let scale = 1.0 + m22.amax().max(big_m22.amax());
            assert!(max_diff(&got_m, &m22) < 1e-8 * scale, "{variant} k = {k}");
            assert!(max_diff(&got_big, &big_m22) < 1e-8 * scale, "{variant} k = {k}");
            assert_eq!(pair.t_min.nrows(), n);
            checked += 1;
        }
    }
    assert!(checked > 50);
}

#[test]
fn pontryagin_pair_of_hand_example() {
    let space = BlockSpace::new(
        FundamentalSymmetry::from_signature("-").unwrap(),
        FundamentalSymmetry::from_signature("+").unwrap(),
    );
    let p = ExtensionProblem::new(
        space,
        Mat::zeros(1, 1),
        Mat::from_element(1, 1, 1.0),
        Variant::Pontryagin,
        tol(),
    )
    .unwrap();
    let pair = extremal_pair(&p).unwrap();
    assert_eq!(pair.t_min, Mat::from_row_slice(2, 2, &[0.0, -1.0, 1.0, -2.0]));
    assert_eq!(pair.t_max, Mat::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 2.0]));
}
