//! Transform-side identities for the scale functions and their chains, and
//! the closed-form-versus-inversion cross checks.

use levque::numeric::adaptive_simpson;
use levque::{
    scale_w, scale_z, w_chain, z_chain, EulerInversion, LevyModel, PhaseVector,
    ScaleFunctionGrid, ScaleMethod,
};
use num_complex::Complex64;

#[test]
fn bm_closed_form_equals_numerical_inversion() {
    let (d, s2) = (-1.0, 1.0);
    let model = LevyModel::bm_neg(d, s2).unwrap();
    let q = 1.0;
    let psi = model.big_psi(q).unwrap();
    let transform = |z: Complex64| 1.0 / (d * (z + psi) + 0.5 * s2 * (z + psi) * (z + psi) - q);
    let inv = EulerInversion::default();
    let mut x = 0.05;
    while x <= 5.0 {
        let numeric = (psi * x).exp() * inv.invert(transform, x).unwrap();
        let closed = scale_w(&model, q, x).unwrap();
        let err = (numeric - closed).abs() / closed.abs().max(1.0);
        assert!(err <= 1e-7, "inversion mismatch at x={x}: rel {err:.2e}");
        x += 0.05;
    }
}

#[test]
fn w_chain_symmetric_under_rate_permutations() {
    let model = LevyModel::bm_neg(-1.0, 1.0).unwrap();
    let orders = [
        vec![0.7, 1.1, 2.3],
        vec![2.3, 0.7, 1.1],
        vec![1.1, 2.3, 0.7],
    ];
    for &x in &[0.3, 1.0, 2.4] {
        let base = w_chain(&model, &PhaseVector::new(orders[0].clone()).unwrap(), x).unwrap();
        for rates in &orders[1..] {
            let v = w_chain(&model, &PhaseVector::new(rates.clone()).unwrap(), x).unwrap();
            assert!(
                (v - base).abs() <= 1e-10 * base.abs().max(1.0),
                "chain not symmetric at x={x}"
            );
        }
    }
}

/// Integral over [0, 40] split so adaptive refinement cannot mistake the
/// concentrated mass near the origin for an identically small integrand.
fn transform_integral<F: Fn(f64) -> f64>(f: F) -> f64 {
    adaptive_simpson(&f, 0.0, 8.0, 1e-10).unwrap() + adaptive_simpson(&f, 8.0, 40.0, 1e-10).unwrap()
}

#[test]
fn chain_laplace_identities() {
    // int e^{-beta x} (W-chain) = prod 1/(Phi(beta)-q_i)
    // int e^{-beta x} (Z_l-chain) = Phi(beta)/beta prod_{i<=l} 1/(Phi(beta)-q_i)
    for model in [
        LevyModel::bm_neg(-1.0, 1.0).unwrap(),
        LevyModel::cpexp(1.0, 1.0, 0.5).unwrap(),
    ] {
        let rates = vec![1.1, 2.3];
        let phases = PhaseVector::new(rates.clone()).unwrap();
        let beta = rates
            .iter()
            .map(|&q| model.big_psi(q).unwrap())
            .fold(0.0f64, f64::max)
            + 1.0;
        let phi_b = model.big_phi(beta).unwrap();

        let w_int =
            transform_integral(|x| (-beta * x).exp() * w_chain(&model, &phases, x).unwrap());
        let w_want = 1.0 / ((phi_b - rates[0]) * (phi_b - rates[1]));
        assert!(
            (w_int - w_want).abs() <= 1e-6 * w_want.abs().max(1.0),
            "w-chain transform identity: {w_int} vs {w_want}"
        );

        for l in 1..=2usize {
            let z_int =
                transform_integral(|x| (-beta * x).exp() * z_chain(&model, l, &phases, x).unwrap());
            let mut z_want = phi_b / beta;
            for &q in &rates[..l] {
                z_want /= phi_b - q;
            }
            assert!(
                (z_int - z_want).abs() <= 1e-6 * z_want.abs().max(1.0),
                "z-chain transform identity at l={l}: {z_int} vs {z_want}"
            );
        }
    }
}

#[test]
fn partial_fractions_agree_with_nested_convolution() {
    // (W3 * W2 * W1)(x) by two nested Simpson passes, BM closed forms only
    let model = LevyModel::bm_neg(-1.0, 1.0).unwrap();
    let rates = vec![1.1, 2.3, 0.7];
    let phases = PhaseVector::new(rates.clone()).unwrap();
    let w = |q: f64, u: f64| scale_w(&model, q, u).unwrap();
    for &x in &[0.35, 1.2, 2.6] {
        let inner = |u: f64| {
            if u <= 0.0 {
                0.0
            } else {
                levque::numeric::simpson(|v| w(rates[1], u - v) * w(rates[0], v), 0.0, u, 1024)
            }
        };
        let nested = levque::numeric::simpson(|u| w(rates[2], x - u) * inner(u), 0.0, x, 1024);
        let fast = w_chain(&model, &phases, x).unwrap();
        let rel = (fast - nested).abs() / nested.abs().max(1.0);
        assert!(rel <= 1e-8, "PF vs convolution at x={x}: rel {rel:.2e}");
    }
}

#[test]
fn z_chain_agrees_with_grid_convolution() {
    // (Z2 * W1)(x) against direct Simpson of Z(x-u) W(u)
    let model = LevyModel::bm_neg(-1.0, 1.0).unwrap();
    let rates = vec![1.1, 2.3];
    let phases = PhaseVector::new(rates.clone()).unwrap();
    for &x in &[0.4, 1.3, 2.2] {
        let conv = levque::scale::convolve_at(
            |u| scale_z(&model, rates[1], u).unwrap(),
            |u| scale_w(&model, rates[0], u).unwrap(),
            x,
            4096,
        );
        let fast = z_chain(&model, 2, &phases, x).unwrap();
        let rel = (fast - conv).abs() / conv.abs().max(1.0);
        assert!(rel <= 1e-8, "z-chain vs convolution at x={x}: rel {rel:.2e}");
    }
}

#[test]
fn inversion_grid_for_bounded_variation_family() {
    let model = LevyModel::cpexp(1.0, 1.0, 0.5).unwrap();
    let grid = ScaleFunctionGrid::build(&model, 0.8, 4.0, 256).unwrap();
    assert_eq!(grid.method, ScaleMethod::Inversion);
    // W(0) carries the bounded-variation mass 1/c
    assert!((grid.w[0] - 2.0).abs() < 1e-7);
    assert_eq!(grid.z[0], 1.0);
    // spot values against the pointwise path
    for &x in &[0.5, 2.0, 3.5] {
        let direct = scale_w(&model, 0.8, x).unwrap();
        assert!((grid.w_at(x) - direct).abs() <= 1e-4 * direct.abs());
    }
}
