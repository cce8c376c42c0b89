//! Epoch-composition checks: evaluating n epochs by one conditioning step
//! against the (n-1)-epoch result must reproduce the direct expansion.
//!
//! Spectrally positive side: the (n-1)-epoch transform with shifted indices
//! is a finite sum of exponentials in the conditioning variable, so one
//! application of the single-epoch transform per term folds it exactly
//! (semianalytic, no quadrature).
//!
//! Spectrally negative side: the same step needs a z-integral of the
//! (n-1)-epoch density against the single-epoch kernel, done by piecewise
//! adaptive quadrature with the kernel's exponential growth cancelled in
//! closed form first.

use levque::numeric::adaptive_simpson;
use levque::{density_neg, joint_lst_pos, AlphaVector, LevyModel, PhaseVector};

/// E_x e^{-a Q_T} for one exponential epoch: q/(q-phi(a)) (e^{-a x} - a/psi e^{-psi x}).
fn single_epoch_lst(model: &LevyModel, x: f64, q: f64, a: f64) -> f64 {
    let psi = model.psi(q).unwrap();
    let phi = model.phi(a).unwrap();
    q / (q - phi) * ((-a * x).exp() - a / psi * (-psi * x).exp())
}

fn fold_lst(model: &LevyModel, x: f64, rates: &[f64], alphas: &[f64]) -> f64 {
    let inner_phases = PhaseVector::new(rates[1..].to_vec()).unwrap();
    let inner_alphas = AlphaVector::new(alphas[1..].to_vec()).unwrap();
    let terms = levque::terms_pos(model, 0.0, &inner_phases, &inner_alphas).unwrap();
    // E_x[n] = sum_k coeff_k E_x e^{-(alpha_1 + e_k) Q_{T_1}}
    terms
        .iter()
        .map(|t| t.coefficient * single_epoch_lst(model, x, rates[0], alphas[0] + t.exponent))
        .sum()
}

#[test]
fn lst_fold_reproduces_direct_expansion() {
    for model in [
        LevyModel::bm_pos(-1.0, 1.0).unwrap(),
        LevyModel::gamma(1.0, 1.0, 2.0).unwrap(),
    ] {
        let rates = [1.3, 0.6, 2.2, 1.9];
        let alphas = [0.4, 0.9, 0.15, 1.1];
        for n in 2..=4usize {
            for &x in &[0.0, 0.8, 2.0] {
                let phases = PhaseVector::new(rates[..n].to_vec()).unwrap();
                let avec = AlphaVector::new(alphas[..n].to_vec()).unwrap();
                let direct = joint_lst_pos(&model, x, &phases, &avec).unwrap().value;
                let folded = fold_lst(&model, x, &rates[..n], &alphas[..n]);
                assert!(
                    (direct - folded).abs() <= 1e-10 * direct.abs().max(1.0),
                    "fold mismatch n={n}, x={x}: {direct} vs {folded}"
                );
            }
        }
    }
}

/// Single-epoch transition kernel -q W^(q)(z-y) + Psi e^{-Psi y} Z^(q)(z)
/// for Brownian input, grouped so the e^{theta_plus z} growth cancels
/// analytically (safe for large z).
fn stable_bm_kernel(drift: f64, sigma2: f64, q: f64, z: f64, y: f64) -> f64 {
    let disc = (drift * drift + 2.0 * sigma2 * q).sqrt();
    let tp = (-drift + disc) / sigma2;
    let tm = (-drift - disc) / sigma2;
    let a = 2.0 / (sigma2 * (tp - tm));
    if z < y {
        let zfun = 1.0 + q * a * ((tp * z).exp_m1() / tp - (tm * z).exp_m1() / tm);
        return tp * (-tp * y).exp() * zfun;
    }
    (-tp * y).exp() * (tp - q * a - q * a * tp / tm * (tm * z).exp_m1())
        + q * a * (tm * (z - y)).exp()
}

#[test]
fn density_fold_reproduces_direct_expansion() {
    let model = LevyModel::bm_neg(-1.0, 1.0).unwrap();
    let rates = [1.1, 2.3, 0.7];
    for n in 2..=3usize {
        let phases = PhaseVector::new(rates[..n].to_vec()).unwrap();
        let prev = PhaseVector::new(rates[..n - 1].to_vec()).unwrap();
        let q_last = rates[n - 1];
        let psi_min = rates[..n - 1]
            .iter()
            .map(|&q| model.big_psi(q).unwrap())
            .fold(f64::INFINITY, f64::min);
        for &x in &[0.0, 0.5, 2.0] {
            for &y in &[0.1, 0.8, 1.7] {
                let direct = density_neg(&model, x, y, &phases).unwrap();
                let z_cut = x.max(y) + 16.0 / psi_min;
                let integrand = |z: f64| {
                    density_neg(&model, x, z, &prev).unwrap()
                        * stable_bm_kernel(-1.0, 1.0, q_last, z, y)
                };
                // split at the kinks z = x (density) and z = y (kernel)
                let mut knots = vec![0.0, x.min(y), x.max(y), z_cut];
                knots.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
                let mut folded = 0.0;
                for w in knots.windows(2) {
                    folded += adaptive_simpson(&integrand, w[0], w[1], 1e-9).unwrap();
                }
                assert!(
                    (direct - folded).abs() <= 1e-5,
                    "density fold mismatch n={n}, x={x}, y={y}: {direct} vs {folded}"
                );
            }
        }
    }
}

#[test]
fn stable_kernel_matches_naive_form_for_moderate_z() {
    let model = LevyModel::bm_neg(-1.0, 1.0).unwrap();
    let q = 1.3;
    let psi = model.big_psi(q).unwrap();
    for &z in &[0.0, 0.4, 1.0, 2.5] {
        for &y in &[0.1, 0.9, 3.0] {
            let naive = -q * levque::scale_w(&model, q, z - y).unwrap()
                + psi * (-psi * y).exp() * levque::scale_z(&model, q, z).unwrap();
            let stable = stable_bm_kernel(-1.0, 1.0, q, z, y);
            assert!(
                (naive - stable).abs() <= 1e-10 * naive.abs().max(1.0),
                "kernel mismatch at z={z}, y={y}: {naive} vs {stable}"
            );
        }
    }
}
