//! Recurrent cells over one-hot symbol streams: seven hidden-update rules,
//! exact hand-derived gradients through time, the analytic DFA-to-2-RNN
//! construction, first-order fits, and the unified cell that emulates the
//! others under the published configurations.
//!
//! All cells share a single linear readout on the final hidden state, trained
//! with binary cross-entropy; parameter budget comparisons deliberately cover
//! the recurrent layer only.

mod analytic;
mod cells;
mod optim;

pub use analytic::{
    configure_unified, construct_2rnn, eq3_objective, first_order_fit, first_order_fit_with_seed,
    mi_switch_property_check, ConstructedRnn, FirstOrderFit, FirstOrderMode,
};
pub use cells::{backward, forward};
pub use optim::{init_params, rmsprop_step, RmsProp, RmsPropState};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Mat;

/// The seven cell kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CellKind {
    Srn,
    #[serde(rename = "mirnn")]
    MiRnn,
    #[serde(rename = "mrnn")]
    MRnn,
    Rnn2,
    Lstm,
    Gru,
    Uni,
}

impl CellKind {
    pub const ALL: [CellKind; 7] = [
        CellKind::Srn,
        CellKind::MiRnn,
        CellKind::MRnn,
        CellKind::Rnn2,
        CellKind::Lstm,
        CellKind::Gru,
        CellKind::Uni,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            CellKind::Srn => "srn",
            CellKind::MiRnn => "mirnn",
            CellKind::MRnn => "mrnn",
            CellKind::Rnn2 => "rnn2",
            CellKind::Lstm => "lstm",
            CellKind::Gru => "gru",
            CellKind::Uni => "uni",
        }
    }

    pub fn parse(s: &str) -> Result<CellKind> {
        CellKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown cell kind {s:?}")))
    }
}

impl std::fmt::Display for CellKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Recurrent nonlinearity. LSTM/GRU gate sigmoids are fixed regardless; the
/// activation governs their tanh slots and every other kind's update.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    Tanh,
    Linear,
}

impl Activation {
    #[inline]
    pub fn apply(self, x: f64) -> f64 {
        match self {
            Activation::Tanh => x.tanh(),
            Activation::Linear => x,
        }
    }

    /// Derivative expressed through the activation value.
    #[inline]
    pub fn derivative_from_output(self, y: f64) -> f64 {
        match self {
            Activation::Tanh => 1.0 - y * y,
            Activation::Linear => 1.0,
        }
    }
}

/// Architecture of one cell: input width (the alphabet size under one-hot
/// coding), hidden width, the factor width for the multiplicative cell, and
/// the recurrent nonlinearity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellSpec {
    pub kind: CellKind,
    pub n_x: usize,
    pub n_h: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_f: Option<usize>,
    pub activation: Activation,
}

impl CellSpec {
    pub fn new(
        kind: CellKind,
        n_x: usize,
        n_h: usize,
        n_f: Option<usize>,
        activation: Activation,
    ) -> Result<CellSpec> {
        if n_x == 0 || n_h == 0 {
            return Err(Error::invalid("input and hidden sizes must be positive"));
        }
        match (kind, n_f) {
            (CellKind::MRnn, Some(f)) if f > 0 => {}
            (CellKind::MRnn, _) => {
                return Err(Error::invalid("the multiplicative cell needs a positive N_f"))
            }
            (_, Some(_)) => {
                return Err(Error::invalid(format!("{kind} does not take an N_f")))
            }
            (_, None) => {}
        }
        Ok(CellSpec {
            kind,
            n_x,
            n_h,
            n_f,
            activation,
        })
    }
}

/// Named weight arrays, one layout per kind (readout excluded).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "layout", rename_all = "lowercase")]
pub enum CellWeights {
    Srn {
        u: Mat,
        v: Mat,
        b: Vec<f64>,
    },
    #[serde(rename = "mirnn")]
    MiRnn {
        u: Mat,
        v: Mat,
        b: Vec<f64>,
        alpha: Vec<f64>,
        beta1: Vec<f64>,
        beta2: Vec<f64>,
    },
    #[serde(rename = "mrnn")]
    MRnn {
        w_hf: Mat,
        w_fx: Mat,
        w_fh: Mat,
        w_hx: Mat,
        b: Vec<f64>,
    },
    Rnn2 {
        /// one hidden-to-hidden matrix per symbol
        w: Vec<Mat>,
        b: Vec<f64>,
    },
    Lstm {
        u_i: Mat,
        v_i: Mat,
        b_i: Vec<f64>,
        u_f: Mat,
        v_f: Mat,
        b_f: Vec<f64>,
        u_o: Mat,
        v_o: Mat,
        b_o: Vec<f64>,
        u_g: Mat,
        v_g: Mat,
        b_g: Vec<f64>,
    },
    Gru {
        u_z: Mat,
        v_z: Mat,
        b_z: Vec<f64>,
        u_r: Mat,
        v_r: Mat,
        b_r: Vec<f64>,
        u_h: Mat,
        v_h: Mat,
        b_h: Vec<f64>,
    },
    Uni {
        w: Vec<Mat>,
        u: Mat,
        v: Mat,
        b: Vec<f64>,
    },
}

impl CellWeights {
    /// Allocates the weight arrays for a spec, filling entries from `fill`
    /// in a fixed, documented order (field order as declared).
    pub fn build(spec: &CellSpec, fill: &mut impl FnMut() -> f64) -> CellWeights {
        let (n_x, n_h) = (spec.n_x, spec.n_h);
        let mut mat = |r: usize, c: usize| Mat::from_fn(r, c, |_, _| fill());
        match spec.kind {
            CellKind::Srn => {
                let u = mat(n_h, n_x);
                let v = mat(n_h, n_h);
                let b = (0..n_h).map(|_| fill()).collect();
                CellWeights::Srn { u, v, b }
            }
            CellKind::MiRnn => {
                let u = mat(n_h, n_x);
                let v = mat(n_h, n_h);
                let b = (0..n_h).map(|_| fill()).collect();
                let alpha = (0..n_h).map(|_| fill()).collect();
                let beta1 = (0..n_h).map(|_| fill()).collect();
                let beta2 = (0..n_h).map(|_| fill()).collect();
                CellWeights::MiRnn {
                    u,
                    v,
                    b,
                    alpha,
                    beta1,
                    beta2,
                }
            }
            CellKind::MRnn => {
                let n_f = spec.n_f.expect("validated");
                let w_hf = mat(n_h, n_f);
                let w_fx = mat(n_f, n_x);
                let w_fh = mat(n_f, n_h);
                let w_hx = mat(n_h, n_x);
                let b = (0..n_h).map(|_| fill()).collect();
                CellWeights::MRnn {
                    w_hf,
                    w_fx,
                    w_fh,
                    w_hx,
                    b,
                }
            }
            CellKind::Rnn2 => {
                let w = (0..n_x).map(|_| mat(n_h, n_h)).collect();
                let b = (0..n_h).map(|_| fill()).collect();
                CellWeights::Rnn2 { w, b }
            }
            CellKind::Lstm => {
                let mut gate = || {
                    let u = Mat::from_fn(n_h, n_x, |_, _| fill());
                    let v = Mat::from_fn(n_h, n_h, |_, _| fill());
                    let b: Vec<f64> = (0..n_h).map(|_| fill()).collect();
                    (u, v, b)
                };
                let (u_i, v_i, b_i) = gate();
                let (u_f, v_f, b_f) = gate();
                let (u_o, v_o, b_o) = gate();
                let (u_g, v_g, b_g) = gate();
                CellWeights::Lstm {
                    u_i,
                    v_i,
                    b_i,
                    u_f,
                    v_f,
                    b_f,
                    u_o,
                    v_o,
                    b_o,
                    u_g,
                    v_g,
                    b_g,
                }
            }
            CellKind::Gru => {
                let mut gate = || {
                    let u = Mat::from_fn(n_h, n_x, |_, _| fill());
                    let v = Mat::from_fn(n_h, n_h, |_, _| fill());
                    let b: Vec<f64> = (0..n_h).map(|_| fill()).collect();
                    (u, v, b)
                };
                let (u_z, v_z, b_z) = gate();
                let (u_r, v_r, b_r) = gate();
                let (u_h, v_h, b_h) = gate();
                CellWeights::Gru {
                    u_z,
                    v_z,
                    b_z,
                    u_r,
                    v_r,
                    b_r,
                    u_h,
                    v_h,
                    b_h,
                }
            }
            CellKind::Uni => {
                let w = (0..n_x).map(|_| mat(n_h, n_h)).collect();
                let u = mat(n_h, n_x);
                let v = mat(n_h, n_h);
                let b = (0..n_h).map(|_| fill()).collect();
                CellWeights::Uni { w, u, v, b }
            }
        }
    }

    pub fn zeros(spec: &CellSpec) -> CellWeights {
        CellWeights::build(spec, &mut || 0.0)
    }

    /// (name, values) view of every array, in a stable order.
    pub fn arrays(&self) -> Vec<(String, &[f64])> {
        match self {
            CellWeights::Srn { u, v, b } => vec![
                ("U".into(), u.as_slice()),
                ("V".into(), v.as_slice()),
                ("b".into(), b.as_slice()),
            ],
            CellWeights::MiRnn {
                u,
                v,
                b,
                alpha,
                beta1,
                beta2,
            } => vec![
                ("U".into(), u.as_slice()),
                ("V".into(), v.as_slice()),
                ("b".into(), b.as_slice()),
                ("alpha".into(), alpha.as_slice()),
                ("beta1".into(), beta1.as_slice()),
                ("beta2".into(), beta2.as_slice()),
            ],
            CellWeights::MRnn {
                w_hf,
                w_fx,
                w_fh,
                w_hx,
                b,
            } => vec![
                ("W_hf".into(), w_hf.as_slice()),
                ("W_fx".into(), w_fx.as_slice()),
                ("W_fh".into(), w_fh.as_slice()),
                ("W_hx".into(), w_hx.as_slice()),
                ("b".into(), b.as_slice()),
            ],
            CellWeights::Rnn2 { w, b } => {
                let mut out: Vec<(String, &[f64])> = w
                    .iter()
                    .enumerate()
                    .map(|(k, m)| (format!("W{k}"), m.as_slice()))
                    .collect();
                out.push(("b".into(), b.as_slice()));
                out
            }
            CellWeights::Lstm {
                u_i,
                v_i,
                b_i,
                u_f,
                v_f,
                b_f,
                u_o,
                v_o,
                b_o,
                u_g,
                v_g,
                b_g,
            } => vec![
                ("U_i".into(), u_i.as_slice()),
                ("V_i".into(), v_i.as_slice()),
                ("b_i".into(), b_i.as_slice()),
                ("U_f".into(), u_f.as_slice()),
                ("V_f".into(), v_f.as_slice()),
                ("b_f".into(), b_f.as_slice()),
                ("U_o".into(), u_o.as_slice()),
                ("V_o".into(), v_o.as_slice()),
                ("b_o".into(), b_o.as_slice()),
                ("U_g".into(), u_g.as_slice()),
                ("V_g".into(), v_g.as_slice()),
                ("b_g".into(), b_g.as_slice()),
            ],
            CellWeights::Gru {
                u_z,
                v_z,
                b_z,
                u_r,
                v_r,
                b_r,
                u_h,
                v_h,
                b_h,
            } => vec![
                ("U_z".into(), u_z.as_slice()),
                ("V_z".into(), v_z.as_slice()),
                ("b_z".into(), b_z.as_slice()),
                ("U_r".into(), u_r.as_slice()),
                ("V_r".into(), v_r.as_slice()),
                ("b_r".into(), b_r.as_slice()),
                ("U_h".into(), u_h.as_slice()),
                ("V_h".into(), v_h.as_slice()),
                ("b_h".into(), b_h.as_slice()),
            ],
            CellWeights::Uni { w, u, v, b } => {
                let mut out: Vec<(String, &[f64])> = w
                    .iter()
                    .enumerate()
                    .map(|(k, m)| (format!("W{k}"), m.as_slice()))
                    .collect();
                out.push(("U".into(), u.as_slice()));
                out.push(("V".into(), v.as_slice()));
                out.push(("b".into(), b.as_slice()));
                out
            }
        }
    }

    /// Mutable view matching [`arrays`](Self::arrays) order.
    pub fn arrays_mut(&mut self) -> Vec<&mut [f64]> {
        match self {
            CellWeights::Srn { u, v, b } => {
                vec![u.as_mut_slice(), v.as_mut_slice(), b.as_mut_slice()]
            }
            CellWeights::MiRnn {
                u,
                v,
                b,
                alpha,
                beta1,
                beta2,
            } => vec![
                u.as_mut_slice(),
                v.as_mut_slice(),
                b.as_mut_slice(),
                alpha.as_mut_slice(),
                beta1.as_mut_slice(),
                beta2.as_mut_slice(),
            ],
            CellWeights::MRnn {
                w_hf,
                w_fx,
                w_fh,
                w_hx,
                b,
            } => vec![
                w_hf.as_mut_slice(),
                w_fx.as_mut_slice(),
                w_fh.as_mut_slice(),
                w_hx.as_mut_slice(),
                b.as_mut_slice(),
            ],
            CellWeights::Rnn2 { w, b } => {
                let mut out: Vec<&mut [f64]> = w.iter_mut().map(Mat::as_mut_slice).collect();
                out.push(b.as_mut_slice());
                out
            }
            CellWeights::Lstm {
                u_i,
                v_i,
                b_i,
                u_f,
                v_f,
                b_f,
                u_o,
                v_o,
                b_o,
                u_g,
                v_g,
                b_g,
            } => vec![
                u_i.as_mut_slice(),
                v_i.as_mut_slice(),
                b_i.as_mut_slice(),
                u_f.as_mut_slice(),
                v_f.as_mut_slice(),
                b_f.as_mut_slice(),
                u_o.as_mut_slice(),
                v_o.as_mut_slice(),
                b_o.as_mut_slice(),
                u_g.as_mut_slice(),
                v_g.as_mut_slice(),
                b_g.as_mut_slice(),
            ],
            CellWeights::Gru {
                u_z,
                v_z,
                b_z,
                u_r,
                v_r,
                b_r,
                u_h,
                v_h,
                b_h,
            } => vec![
                u_z.as_mut_slice(),
                v_z.as_mut_slice(),
                b_z.as_mut_slice(),
                u_r.as_mut_slice(),
                v_r.as_mut_slice(),
                b_r.as_mut_slice(),
                u_h.as_mut_slice(),
                v_h.as_mut_slice(),
                b_h.as_mut_slice(),
            ],
            CellWeights::Uni { w, u, v, b } => {
                let mut out: Vec<&mut [f64]> = w.iter_mut().map(Mat::as_mut_slice).collect();
                out.push(u.as_mut_slice());
                out.push(v.as_mut_slice());
                out.push(b.as_mut_slice());
                out
            }
        }
    }
}

/// Trace-plot grouping of an array name: second-order tensors under `W`,
/// input maps under `U`, recurrent maps under `V`, biases under `b`, and the
/// multiplicative-integration gain vectors under `g`.
pub fn norm_group(name: &str) -> &'static str {
    if name.starts_with('W') {
        "W"
    } else if name.starts_with('U') {
        "U"
    } else if name.starts_with('V') {
        "V"
    } else if name == "b" || name.starts_with("b_") {
        "b"
    } else {
        "g"
    }
}

/// Shared linear readout: label logit = w . h^T + b.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Readout {
    pub w: Vec<f64>,
    pub b: f64,
}

/// A complete model: architecture, recurrent weights, readout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellParams {
    pub spec: CellSpec,
    pub weights: CellWeights,
    pub readout: Readout,
}

impl CellParams {
    /// JSON checkpoint (plain nested lists, no binary).
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<CellParams> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Gradients mirror the parameter layout.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub weights: CellWeights,
    pub readout_w: Vec<f64>,
    pub readout_b: f64,
}

impl Gradients {
    pub fn zeros(spec: &CellSpec) -> Gradients {
        Gradients {
            weights: CellWeights::zeros(spec),
            readout_w: vec![0.0; spec.n_h],
            readout_b: 0.0,
        }
    }

    pub fn scale(&mut self, factor: f64) {
        for arr in self.weights.arrays_mut() {
            for v in arr {
                *v *= factor;
            }
        }
        for v in &mut self.readout_w {
            *v *= factor;
        }
        self.readout_b *= factor;
    }

    pub fn accumulate(&mut self, other: &Gradients) {
        let mut mine = self.weights.arrays_mut();
        let theirs = other.weights.arrays();
        for (dst, (_, src)) in mine.iter_mut().zip(&theirs) {
            for (d, s) in dst.iter_mut().zip(*src) {
                *d += s;
            }
        }
        for (d, s) in self.readout_w.iter_mut().zip(&other.readout_w) {
            *d += s;
        }
        self.readout_b += other.readout_b;
    }
}

/// Per-step internals the backward pass needs beyond the hidden states.
#[derive(Debug, Clone)]
pub(crate) enum StepAux {
    Plain,
    MiRnn {
        p: Vec<f64>,
        q: Vec<f64>,
    },
    MRnn {
        f: Vec<f64>,
        g: Vec<f64>,
    },
    Lstm {
        i: Vec<f64>,
        f: Vec<f64>,
        o: Vec<f64>,
        g: Vec<f64>,
        c: Vec<f64>,
        tc: Vec<f64>,
    },
    Gru {
        z: Vec<f64>,
        r: Vec<f64>,
        g: Vec<f64>,
        hr: Vec<f64>,
    },
}

/// Everything recorded by a forward pass: inputs, h^0..h^T, per-step gate and
/// factor values, and the final logit.
#[derive(Debug, Clone)]
pub struct ForwardTrace {
    pub inputs: Vec<u8>,
    pub hidden: Vec<Vec<f64>>,
    pub(crate) aux: Vec<StepAux>,
    pub logit: f64,
}

impl ForwardTrace {
    pub fn final_hidden(&self) -> &[f64] {
        self.hidden.last().expect("h0 always present")
    }

    pub fn predicts_positive(&self) -> bool {
        self.logit > 0.0
    }
}

/// Numerically stable binary cross-entropy on a logit.
pub fn loss_bce(logit: f64, target: bool) -> f64 {
    let y = f64::from(target);
    logit.max(0.0) - logit * y + (-logit.abs()).exp_ln1p()
}

trait ExpLn1p {
    fn exp_ln1p(self) -> f64;
}

impl ExpLn1p for f64 {
    #[inline]
    fn exp_ln1p(self) -> f64 {
        self.exp().ln_1p()
    }
}

#[inline]
pub(crate) fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Number of recurrent-layer parameters (readout excluded).
pub fn param_count(spec: &CellSpec) -> usize {
    let (x, h) = (spec.n_x, spec.n_h);
    match spec.kind {
        CellKind::Srn => h * x + h * h + h,
        CellKind::MiRnn => h * x + h * h + h + 3 * h,
        CellKind::MRnn => {
            let f = spec.n_f.expect("validated");
            h * f + f * x + f * h + h * x + h
        }
        CellKind::Rnn2 => x * h * h + h,
        CellKind::Lstm => 4 * (h * x + h * h + h),
        CellKind::Gru => 3 * (h * x + h * h + h),
        CellKind::Uni => x * h * h + h * x + h * h + h,
    }
}

/// Largest hidden size whose recurrent-parameter count fits the budget.
/// The multiplicative cell keeps N_f = N_h.
pub fn match_budget(
    kind: CellKind,
    budget: usize,
    n_x: usize,
    activation: Activation,
) -> Result<CellSpec> {
    let spec_for = |n_h: usize| {
        let n_f = (kind == CellKind::MRnn).then_some(n_h);
        CellSpec::new(kind, n_x, n_h, n_f, activation)
    };
    let mut best = None;
    let mut n_h = 1;
    loop {
        let spec = spec_for(n_h)?;
        if param_count(&spec) > budget {
            break;
        }
        best = Some(spec);
        n_h += 1;
    }
    best.ok_or_else(|| {
        Error::invalid(format!(
            "budget {budget} is below the {kind} cell's minimum (N_h = 1 needs {})",
            param_count(&spec_for(1).expect("n_h 1 is valid")),
        ))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_validates_factor_size() {
        assert!(CellSpec::new(CellKind::MRnn, 2, 4, None, Activation::Tanh).is_err());
        assert!(CellSpec::new(CellKind::Srn, 2, 4, Some(3), Activation::Tanh).is_err());
        assert!(CellSpec::new(CellKind::MRnn, 2, 4, Some(4), Activation::Tanh).is_ok());
    }

    #[test]
    fn param_counts_follow_shapes() {
        let srn = CellSpec::new(CellKind::Srn, 2, 10, None, Activation::Tanh).unwrap();
        assert_eq!(param_count(&srn), 10 * 2 + 100 + 10); // 130
        let rnn2 = CellSpec::new(CellKind::Rnn2, 2, 7, None, Activation::Tanh).unwrap();
        assert_eq!(param_count(&rnn2), 2 * 49 + 7); // 105
        let lstm = CellSpec::new(CellKind::Lstm, 2, 3, None, Activation::Tanh).unwrap();
        assert_eq!(param_count(&lstm), 4 * (6 + 9 + 3));
        let mrnn = CellSpec::new(CellKind::MRnn, 2, 5, Some(5), Activation::Tanh).unwrap();
        assert_eq!(param_count(&mrnn), 25 + 10 + 25 + 10 + 5);
    }

    #[test]
    fn budget_match_against_srn_anchor() {
        let srn = CellSpec::new(CellKind::Srn, 2, 10, None, Activation::Tanh).unwrap();
        let budget = param_count(&srn);
        let rnn2 = match_budget(CellKind::Rnn2, budget, 2, Activation::Tanh).unwrap();
        assert_eq!(rnn2.n_h, 7); // 2*49+7 = 105 <= 130 < 2*64+8 = 136
        let uni = match_budget(CellKind::Uni, budget, 2, Activation::Tanh).unwrap();
        assert!(param_count(&uni) <= budget);
        assert!(match_budget(CellKind::Lstm, 10, 2, Activation::Tanh).is_err());
    }

    #[test]
    fn checkpoint_json_round_trip() {
        let spec = CellSpec::new(CellKind::Gru, 2, 3, None, Activation::Tanh).unwrap();
        let params = init_params(&spec, 5, -0.02, 0.02).unwrap();
        let text = params.to_json().unwrap();
        let back = CellParams::from_json(&text).unwrap();
        assert_eq!(back, params);
        assert!(text.contains("\"layout\""));
    }

    #[test]
    fn norm_groups() {
        assert_eq!(norm_group("W3"), "W");
        assert_eq!(norm_group("W_hf"), "W");
        assert_eq!(norm_group("U_i"), "U");
        assert_eq!(norm_group("b_f"), "b");
        assert_eq!(norm_group("alpha"), "g");
    }

    #[test]
    fn bce_loss_matches_naive_formula() {
        for (logit, y) in [(0.3, true), (-2.0, false), (5.0, false), (-7.0, true)] {
            let p = sigmoid(logit);
            let naive = if y { -p.ln() } else { -(1.0 - p).ln() };
            assert!((loss_bce(logit, y) - naive).abs() < 1e-12);
        }
    }
}
