//! Random problem instances for tests, verification suites and benchmarks.
//!
//! Generators reject draws whose relevant spectra have an eigenvalue just
//! above the zero threshold (see [`BOUNDARY_FACTOR`](crate::random::BOUNDARY_FACTOR)),
//! and report how many draws they rejected.

use rand::Rng;

use crate::completion::{solve, CompletionProblem, CompletionSolution};
use crate::extension::{criterion, extension_from_c, random_c, ExtensionProblem, ExtremalPair, Variant};
use crate::krein::{BlockSpace, FundamentalSymmetry};
use crate::random::{
    draw_with_rejection, gaussian, random_j_contraction, random_orthogonal, random_symmetry,
    signature_frame, well_separated, well_separated_matrix, with_spectrum,
};
use crate::spectral::{abs_power_of, eigh, max_abs, Mat, SymmetricMatrix, TolerancePolicy};

const MAX_TRIES: usize = 10_000;

fn dim<R: Rng + ?Sized>(rng: &mut R, dim_max: usize) -> usize {
    rng.random_range(1..=dim_max.max(1))
}

fn sym(m: &Mat) -> SymmetricMatrix {
    SymmetricMatrix::symmetrize(m)
}

fn signs_of(j: &FundamentalSymmetry) -> Vec<i8> {
    j.diagonal_signs().expect("generated symmetries are diagonal")
}

/// Symmetric matrix whose eigenvalues are zero with probability `p_zero` and
/// otherwise of modulus in `[0.3, 3]` with random sign.
pub fn random_gapped_symmetric<R: Rng + ?Sized>(rng: &mut R, n: usize, p_zero: f64) -> SymmetricMatrix {
    let values: Vec<f64> = (0..n)
        .map(|_| {
            if rng.random_bool(p_zero) {
                0.0
            } else {
                let m: f64 = rng.random_range(0.3..3.0);
                if rng.random_bool(0.5) {
                    m
                } else {
                    -m
                }
            }
        })
        .collect();
    with_spectrum(rng, &values)
}

/// Solvable completion problem with `A11 = J₁M` (possibly singular) and
/// `J₁A12 = M·R`, so the range criterion holds by construction.
pub fn solvable_completion<R: Rng + ?Sized>(
    rng: &mut R,
    dim_max: usize,
    tol: &TolerancePolicy,
) -> (CompletionProblem, usize) {
    draw_with_rejection(rng, MAX_TRIES, |rng| {
        let (n1, n2) = (dim(rng, dim_max), dim(rng, dim_max));
        let j1 = random_symmetry(rng, n1);
        let j2 = random_symmetry(rng, n2);
        let m = random_gapped_symmetric(rng, n1, 0.2);
        let r = gaussian(rng, n1, n2) * rng.random_range(0.2..1.5);
        let a11 = j1.matrix() * m.as_matrix();
        let a12 = j1.matrix() * m.as_matrix() * r;
        let p = CompletionProblem::new(BlockSpace::new(j1, j2), a11, a12, *tol).ok()?;
        let sol = solve(&p).ok()?;
        (!sol.ill_conditioned).then_some(p)
    })
}

/// Independent J₂-selfadjoint candidate `A22 = A22_min + J₂W` with `W`
/// symmetric and shifted so that members and non-members both occur.
/// Returns `None` when the completed operator or `W` is too close to singular.
pub fn completion_candidate<R: Rng + ?Sized>(
    rng: &mut R,
    p: &CompletionProblem,
    sol: &CompletionSolution,
) -> Option<Mat> {
    let n2 = p.space().n2();
    let tol = p.tol();
    let scale = max_abs(&sol.a22_min).max(1.0);
    let g = gaussian(rng, n2, n2);
    let shift: f64 = rng.random_range(-0.3..1.0);
    let w = sym(&((&g + g.transpose()) * (0.5 * scale / (n2 as f64).sqrt()) + Mat::identity(n2, n2) * (shift * scale)));
    if !well_separated_matrix(&w, tol) {
        return None;
    }
    let a22 = &sol.a22_min + p.space().j2().matrix() * w.as_matrix();
    let full = p.completed(&a22).ok()?;
    let form = sym(&(p.space().j.matrix() * full));
    well_separated_matrix(&form, tol).then_some(a22)
}

/// Random instance `(A, B, J₁, J₂)` of the inertia bound, `B: ℋ₁ → ℋ₂`.
pub struct BoundInstance {
    pub a: Mat,
    pub b: Mat,
    pub j1: FundamentalSymmetry,
    pub j2: FundamentalSymmetry,
}

pub fn bound_instance<R: Rng + ?Sized>(rng: &mut R, dim_max: usize, tol: &TolerancePolicy) -> (BoundInstance, usize) {
    draw_with_rejection(rng, MAX_TRIES, |rng| {
        let (n1, n2) = (dim(rng, dim_max), dim(rng, dim_max));
        let j1 = random_symmetry(rng, n1);
        let j2 = random_symmetry(rng, n2);
        let m = random_gapped_symmetric(rng, n1, 0.1);
        let a = j1.matrix() * m.as_matrix();
        let b = gaussian(rng, n2, n1) * rng.random_range(0.1..1.5);
        let reduced = sym(&(m.as_matrix() - b.transpose() * j2.matrix() * &b));
        (well_separated_matrix(&m, tol) && well_separated_matrix(&reduced, tol)).then_some(BoundInstance {
            a,
            b,
            j1,
            j2,
        })
    })
}

/// Instance in the equality case: `B = J₂Kᵀ|A|^{1/2}` with `K` a strict J-contraction
/// from `(ℋ₂, J₂)` into `(ℋ₁, sign(J₁A))`.
pub fn bound_instance_from_contraction<R: Rng + ?Sized>(
    rng: &mut R,
    dim_max: usize,
    tol: &TolerancePolicy,
) -> (BoundInstance, usize) {
    draw_with_rejection(rng, MAX_TRIES, |rng| {
        let (n1, n2) = (dim(rng, dim_max), dim(rng, dim_max));
        let j1 = random_symmetry(rng, n1);
        let j2 = random_symmetry(rng, n2);
        let m = random_gapped_symmetric(rng, n1, 0.0);
        let e = eigh(&m);
        let (frame_signs, frame) = signature_frame(&e.map(f64::signum));
        let kc = random_j_contraction(rng, &signs_of(&j2), &frame_signs)?;
        let k = frame * kc;
        let root = abs_power_of(&e, 0.5, tol);
        let b = j2.matrix() * k.transpose() * root.as_matrix();
        let a = j1.matrix() * m.as_matrix();
        let reduced = sym(&(m.as_matrix() - b.transpose() * j2.matrix() * &b));
        well_separated_matrix(&reduced, tol).then_some(BoundInstance { a, b, j1, j2 })
    })
}

/// Random `J` with an operator `T` of moderate size (not J-selfadjoint) whose
/// defect forms are well separated and nonzero.
pub fn link_instance<R: Rng + ?Sized>(
    rng: &mut R,
    dim_max: usize,
    tol: &TolerancePolicy,
) -> ((FundamentalSymmetry, Mat), usize) {
    draw_with_rejection(rng, MAX_TRIES, |rng| {
        let n = dim(rng, dim_max);
        let j = random_symmetry(rng, n);
        let t = gaussian(rng, n, n) * (rng.random_range(0.3..2.0) / (n as f64).sqrt());
        let jm = j.matrix();
        let x = sym(&(jm - t.transpose() * jm * &t));
        let xs = sym(&(jm - &t * jm * t.transpose()));
        let ok = well_separated_matrix(&x, tol) && well_separated_matrix(&xs, tol) && max_abs(x.as_matrix()) > 0.1;
        ok.then_some((j, t))
    })
}

/// Random `J` with a J-selfadjoint `T = J·M`, well separated defect form.
pub fn selfadjoint_instance<R: Rng + ?Sized>(
    rng: &mut R,
    dim_max: usize,
    tol: &TolerancePolicy,
) -> ((FundamentalSymmetry, Mat), usize) {
    draw_with_rejection(rng, MAX_TRIES, |rng| {
        let n = dim(rng, dim_max);
        let j = random_symmetry(rng, n);
        let scale = rng.random_range(0.5..3.0);
        let m = crate::random::random_symmetric(rng, n, scale);
        let t = j.matrix() * m.as_matrix();
        let x = sym(&(j.matrix() - t.transpose() * j.matrix() * &t));
        well_separated_matrix(&x, tol).then_some((j, t))
    })
}

/// Random `J` with symmetric `T` such that `J − TJT`, `J ± T` are well separated.
pub fn symmetric_pair<R: Rng + ?Sized>(
    rng: &mut R,
    dim_max: usize,
    tol: &TolerancePolicy,
) -> ((FundamentalSymmetry, SymmetricMatrix), usize) {
    draw_with_rejection(rng, MAX_TRIES, |rng| {
        let n = dim(rng, dim_max);
        let j = random_symmetry(rng, n);
        let scale = rng.random_range(0.3..3.0);
        let t = crate::random::random_symmetric(rng, n, scale);
        let (jm, tm) = (j.matrix(), t.as_matrix());
        let ok = [jm - tm * jm * tm, jm - tm, jm + tm]
            .iter()
            .all(|f| well_separated_matrix(&sym(f), tol));
        ok.then_some((j, t))
    })
}

fn symmetries<R: Rng + ?Sized>(rng: &mut R, variant: Variant, n1: usize, n2: usize) -> (FundamentalSymmetry, FundamentalSymmetry) {
    match variant {
        Variant::Hilbert => (FundamentalSymmetry::identity(n1), FundamentalSymmetry::identity(n2)),
        _ => (random_symmetry(rng, n1), random_symmetry(rng, n2)),
    }
}

/// `T11 = J₁M` with the spectrum of `M` spread over `[−2, 2]`, so that both
/// contractive and expansive directions occur.
fn random_t11<R: Rng + ?Sized>(rng: &mut R, j1: &FundamentalSymmetry) -> Mat {
    let n1 = j1.dim();
    let values: Vec<f64> = (0..n1).map(|_| rng.random_range(-2.0..2.0)).collect();
    j1.matrix() * with_spectrum(rng, &values).as_matrix()
}

fn defect_form(variant: Variant, j1: &FundamentalSymmetry, t11: &Mat) -> SymmetricMatrix {
    let n1 = j1.dim();
    let g = match variant {
        Variant::Pontryagin => j1.matrix().clone(),
        _ => Mat::identity(n1, n1),
    };
    sym(&(&g - t11.transpose() * &g * t11))
}

/// Solvable extension problem: `T21 = J₂·V·D` with `Vᵀ` a strict J-contraction
/// into the defect space of `T11` (`V·D` for the Hilbert variant, where `J₂ = I`).
pub fn solvable_extension<R: Rng + ?Sized>(
    rng: &mut R,
    variant: Variant,
    dim_max: usize,
    tol: &TolerancePolicy,
) -> (ExtensionProblem, usize) {
    draw_with_rejection(rng, MAX_TRIES, |rng| {
        let (n1, n2) = (dim(rng, dim_max), dim(rng, dim_max));
        let (j1, j2) = symmetries(rng, variant, n1, n2);
        let t11 = random_t11(rng, &j1);
        let x = defect_form(variant, &j1, &t11);
        let e = eigh(&x);
        if !well_separated(&e, tol) {
            return None;
        }
        let (frame_signs, frame) = signature_frame(&e.map(f64::signum));
        let dom = match variant {
            Variant::Pontryagin => signs_of(&j2),
            _ => vec![1; n2],
        };
        let k = frame * random_j_contraction(rng, &dom, &frame_signs)?;
        let d = abs_power_of(&e, 0.5, tol);
        let t21 = j2.matrix() * k.transpose() * d.as_matrix();
        let p = ExtensionProblem::new(BlockSpace::new(j1, j2), t11, t21, variant, *tol).ok()?;
        let c = criterion(&p);
        (c.holds && !c.near_boundary).then_some(p)
    })
}

/// Extension problem with unrestricted `T21` for which the criterion fails.
/// `n2` fixes the dimension of `ℋ₂` when given.
pub fn failing_extension<R: Rng + ?Sized>(
    rng: &mut R,
    variant: Variant,
    dim_max: usize,
    n2: Option<usize>,
    tol: &TolerancePolicy,
) -> (ExtensionProblem, usize) {
    draw_with_rejection(rng, MAX_TRIES, |rng| {
        let n1 = dim(rng, dim_max);
        let n2 = n2.unwrap_or_else(|| dim(rng, dim_max));
        let (j1, j2) = symmetries(rng, variant, n1, n2);
        let t11 = random_t11(rng, &j1);
        let t21 = gaussian(rng, n2, n1) * rng.random_range(0.5..3.0);
        let p = ExtensionProblem::new(BlockSpace::new(j1, j2), t11, t21, variant, *tol).ok()?;
        let c = criterion(&p);
        (!c.holds && !c.near_boundary).then_some(p)
    })
}

/// Solvable or failing problem with equal probability.
pub fn any_extension<R: Rng + ?Sized>(
    rng: &mut R,
    variant: Variant,
    dim_max: usize,
    tol: &TolerancePolicy,
) -> (ExtensionProblem, usize) {
    if rng.random_bool(0.5) {
        solvable_extension(rng, variant, dim_max, tol)
    } else {
        failing_extension(rng, variant, dim_max, None, tol)
    }
}

/// J-selfadjoint extension of `T₁` with `T22 = (T_m)22 + J₂Δ^{1/2}CΔ^{1/2}`.
/// With `inside` the eigenvalues of `C` lie in `[0.05, 0.95]`; otherwise they
/// are drawn from `[−1, 2]` away from `0` and `1`, which usually leaves the
/// solution set. Returns `None` near an index change.
pub fn candidate_extension<R: Rng + ?Sized>(
    rng: &mut R,
    p: &ExtensionProblem,
    pair: &ExtremalPair,
    inside: bool,
) -> Option<Mat> {
    let n2 = p.space().n2();
    let c = if inside {
        random_c(rng, n2, 0.05, 0.95)
    } else {
        let q = random_orthogonal(rng, n2);
        let u: Vec<f64> = (0..n2)
            .map(|_| loop {
                let x: f64 = rng.random_range(-1.0..2.0);
                if x.abs() > 0.05 && (x - 1.0).abs() > 0.05 {
                    break x;
                }
            })
            .collect();
        sym(&(&q * Mat::from_diagonal(&nalgebra::DVector::from_vec(u)) * q.transpose()))
    };
    let t = extension_from_c(p, pair, &c).ok()?;
    let n = t.nrows();
    let j = p.space().j.matrix();
    let i = Mat::identity(n, n);
    let forms = match p.variant() {
        Variant::Pontryagin => [j * (&i - &t * &t), j * (&t - &pair.t_min), j * (&pair.t_max - &t)],
        _ => [&i - t.transpose() * &t, j * (&t - &pair.t_min), j * (&pair.t_max - &t)],
    };
    // the order forms vanish on the first block, so only their (2,2) parts are tested
    let ok = well_separated_matrix(&sym(&forms[0]), p.tol())
        && forms[1..].iter().all(|f| {
            let b = f.view((n - n2, n - n2), (n2, n2)).into_owned();
            well_separated_matrix(&sym(&b), p.tol())
        });
    ok.then_some(t)
}
