//! Parameter initialization and the RMSprop update.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{CellParams, CellSpec, CellWeights, Gradients, Readout};
use crate::error::{Error, Result};

/// Every entry (recurrent weights and readout) i.i.d. uniform in
/// `[low, high]`, deterministic in the seed.
pub fn init_params(spec: &CellSpec, seed: u64, low: f64, high: f64) -> Result<CellParams> {
    if !(low < high) {
        return Err(Error::invalid("init range must satisfy low < high"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || rng.gen_range(low..=high);
    let weights = CellWeights::build(spec, &mut draw);
    let readout = Readout {
        w: (0..spec.n_h).map(|_| draw()).collect(),
        b: draw(),
    };
    Ok(CellParams {
        spec: *spec,
        weights,
        readout,
    })
}

/// RMSprop hyper-parameters. The learning rate follows the experiment
/// protocol; decay and epsilon are conventional.
#[derive(Debug, Clone, Copy)]
pub struct RmsProp {
    pub lr: f64,
    pub decay: f64,
    pub eps: f64,
}

impl Default for RmsProp {
    fn default() -> Self {
        RmsProp {
            lr: 0.01,
            decay: 0.9,
            eps: 1e-8,
        }
    }
}

/// Squared-gradient accumulators, one per parameter array.
#[derive(Debug, Clone)]
pub struct RmsPropState {
    sq: CellWeights,
    sq_readout_w: Vec<f64>,
    sq_readout_b: f64,
}

impl RmsPropState {
    pub fn new(spec: &CellSpec) -> RmsPropState {
        RmsPropState {
            sq: CellWeights::zeros(spec),
            sq_readout_w: vec![0.0; spec.n_h],
            sq_readout_b: 0.0,
        }
    }

    /// Accumulator value for a given array position; test hook.
    pub fn accumulators(&self) -> Vec<(String, &[f64])> {
        self.sq.arrays()
    }
}

/// One RMSprop step: `v <- decay v + (1 - decay) g^2;  p <- p - lr g / (sqrt v + eps)`.
pub fn rmsprop_step(
    params: &mut CellParams,
    grads: &Gradients,
    state: &mut RmsPropState,
    cfg: &RmsProp,
) {
    let apply = |p: &mut [f64], g: &[f64], v: &mut [f64]| {
        for ((p, &g), v) in p.iter_mut().zip(g).zip(v.iter_mut()) {
            *v = cfg.decay * *v + (1.0 - cfg.decay) * g * g;
            *p -= cfg.lr * g / (v.sqrt() + cfg.eps);
        }
    };
    let mut p_arrays = params.weights.arrays_mut();
    let g_arrays = grads.weights.arrays();
    let mut v_arrays = state.sq.arrays_mut();
    debug_assert_eq!(p_arrays.len(), g_arrays.len());
    for ((p, (_, g)), v) in p_arrays.iter_mut().zip(&g_arrays).zip(v_arrays.iter_mut()) {
        apply(p, g, v);
    }
    apply(
        &mut params.readout.w,
        &grads.readout_w,
        &mut state.sq_readout_w,
    );
    let g = grads.readout_b;
    state.sq_readout_b = cfg.decay * state.sq_readout_b + (1.0 - cfg.decay) * g * g;
    params.readout.b -= cfg.lr * g / (state.sq_readout_b.sqrt() + cfg.eps);
}

#[cfg(test)]
mod tests {
    use super::super::{Activation, CellKind, CellSpec};
    use super::*;

    fn srn_spec() -> CellSpec {
        CellSpec::new(CellKind::Srn, 2, 4, None, Activation::Tanh).unwrap()
    }

    #[test]
    fn init_within_bounds_and_deterministic() {
        let spec = srn_spec();
        let a = init_params(&spec, 7, -0.02, 0.02).unwrap();
        let b = init_params(&spec, 7, -0.02, 0.02).unwrap();
        assert_eq!(a, b);
        for (_, arr) in a.weights.arrays() {
            assert!(arr.iter().all(|&v| (-0.02..=0.02).contains(&v)));
        }
        let c = init_params(&spec, 8, -0.02, 0.02).unwrap();
        assert_ne!(a, c);
        assert!(init_params(&spec, 7, 0.5, -0.5).is_err());
    }

    #[test]
    fn init_mean_is_near_zero() {
        // ~1e5 entries: mean within 3 standard errors of 0
        let spec = CellSpec::new(CellKind::Srn, 2, 180, None, Activation::Tanh).unwrap();
        let p = init_params(&spec, 123, -0.02, 0.02).unwrap();
        let mut sum = 0.0;
        let mut count = 0usize;
        for (_, arr) in p.weights.arrays() {
            sum += arr.iter().sum::<f64>();
            count += arr.len();
        }
        assert!(count > 30_000, "want a large sample, got {count}");
        let mean = sum / count as f64;
        // Var of U(-a, a) = a^2/3
        let se = (0.02f64 * 0.02 / 3.0 / count as f64).sqrt();
        assert!(mean.abs() <= 3.0 * se, "mean {mean} vs se {se}");
    }

    #[test]
    fn zero_gradient_leaves_params_unchanged() {
        let spec = srn_spec();
        let mut params = init_params(&spec, 1, -0.02, 0.02).unwrap();
        let before = params.clone();
        let grads = Gradients::zeros(&spec);
        let mut state = RmsPropState::new(&spec);
        rmsprop_step(&mut params, &grads, &mut state, &RmsProp::default());
        assert_eq!(params, before);
    }

    #[test]
    fn one_step_descends_a_quadratic() {
        // f(w) = w^2 on the readout bias alone
        let spec = srn_spec();
        let mut params = init_params(&spec, 2, -0.02, 0.02).unwrap();
        params.readout.b = 1.0;
        let mut grads = Gradients::zeros(&spec);
        grads.readout_b = 2.0 * params.readout.b;
        let mut state = RmsPropState::new(&spec);
        rmsprop_step(&mut params, &grads, &mut state, &RmsProp::default());
        assert!(params.readout.b < 1.0 && params.readout.b > 0.0);
    }

    #[test]
    fn accumulator_two_equal_steps_closed_form() {
        let spec = srn_spec();
        let mut params = init_params(&spec, 3, -0.02, 0.02).unwrap();
        let mut grads = Gradients::zeros(&spec);
        let g = 0.3;
        if let CellWeights::Srn { u, .. } = &mut grads.weights {
            u.set(0, 0, g);
        }
        let mut state = RmsPropState::new(&spec);
        let cfg = RmsProp::default();
        rmsprop_step(&mut params, &grads, &mut state, &cfg);
        rmsprop_step(&mut params, &grads, &mut state, &cfg);
        // v = (1 - d) g^2 (1 + d) after two equal-gradient steps
        let expect = g * g * (1.0 - cfg.decay) * (1.0 + cfg.decay);
        let v = state.accumulators()[0].1[0];
        assert!((v - expect).abs() < 1e-12, "v {v} vs {expect}");
    }
}
