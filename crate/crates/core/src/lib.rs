//! Transient workload of Levy-driven queues observed at epochs distributed
//! as sums of independent exponentials (and Coxian mixtures thereof).
//!
//! Spectrally positive input yields the exact joint Laplace-Stieltjes
//! transform; spectrally negative input yields the exact density and triple
//! transform through q-scale functions. Deterministic times are approximated
//! by phase sums with variance-optimal rates, and an independent Monte Carlo
//! reflection simulator serves as an oracle throughout the test suite.

// parity tests read better as `% 2` than as divisibility checks
#![allow(clippy::manual_is_multiple_of)]

pub mod approx;
pub mod config;
pub mod dd;
pub mod density_neg;
pub mod emit;
pub mod error;
pub mod invlap;
pub mod mc;
pub mod model;
pub mod numeric;
pub mod oracle;
pub mod phases;
pub mod reference;
pub mod scale;
pub mod transform_pos;

pub use approx::{
    choose_phase_rates, exact_rbm_lst, exact_rbm_mean, lst_at_time, mean_at_time, MeanEstimate,
    RateScheme, SchemeKind,
};
pub use config::ModelConfig;
pub use density_neg::{
    coefficient_neg, density_grid, density_neg, m_index, neg_coefficients, sign_neg,
    triple_transform, DensityResult, NegCoefficient,
};
pub use error::{Error, Result};
pub use invlap::EulerInversion;
pub use mc::{
    mc_density_estimate, mc_lst_estimate, simulate_reflected_path, Horizon, McEstimate,
    McHistogram, ReflectionScheme, SimConfig,
};
pub use model::{ExponentValue, Family, LevyModel, Side};
pub use oracle::{oracle_density_n2, oracle_lst_n2};
pub use phases::{AlphaVector, CoxianSpec, PhaseVector};
pub use scale::{
    scale_w, scale_w_at_zero, scale_z, w_chain, w_chain_integral, z_chain, ScaleFunctionGrid,
    ScaleMethod,
};
pub use transform_pos::{
    coefficient_pos, d_chain, joint_lst_pos, lst_coxian, lst_sum_pos, sign_pos, terms_pos,
    CoefficientTerm, DChain, Diagnostics, TransientResult, DEFAULT_PHASE_CAP,
};
