//! Trainable Q-value heads over the concatenated (observation, reservoir
//! state) input: a two-layer ReLU network and a single linear layer
//! baseline, each with exact analytic gradients.
//!
//! The training loss is mean squared error on the selected action's
//! Q-value, averaged over the batch, so the learning rate keeps its
//! meaning when the batch size changes. ReLU uses subgradient 0 at zero.

use crate::error::{Error, Result};
use crate::numerics::{axpy, dot, SeededRng, Vector};
use std::io::{BufRead, Write};

/// Which readout architecture to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ReadoutKind {
    Mlp,
    Linear,
}

impl ReadoutKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ReadoutKind::Mlp => "mlp",
            ReadoutKind::Linear => "linear",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "mlp" => Ok(ReadoutKind::Mlp),
            "linear" => Ok(ReadoutKind::Linear),
            other => Err(Error::InvalidConfig(format!(
                "unknown readout kind '{other}' (expected mlp or linear)"
            ))),
        }
    }
}

/// Hidden-layer network: `q = w2 relu(w1 input + b1) + b2`.
///
/// Tensors are flat row-major; the documented parameter order (also the
/// checkpoint order) is w1, b1, w2, b2.
#[derive(Clone, Debug, PartialEq)]
pub struct MlpReadout {
    d_in: usize,
    n_hidden: usize,
    n_actions: usize,
    w1: Vec<f64>,
    b1: Vec<f64>,
    w2: Vec<f64>,
    b2: Vec<f64>,
}

/// Single-layer baseline: `q = w input + b`. Parameter order w, b.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearReadout {
    d_in: usize,
    n_actions: usize,
    w: Vec<f64>,
    b: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Readout {
    Mlp(MlpReadout),
    Linear(LinearReadout),
}

fn glorot_bound(fan_in: usize, fan_out: usize) -> f64 {
    (6.0 / (fan_in + fan_out) as f64).sqrt()
}

impl MlpReadout {
    pub fn init(
        d_in: usize,
        n_hidden: usize,
        n_actions: usize,
        rng: &mut SeededRng,
    ) -> Result<Self> {
        check_dim("d_in", d_in)?;
        check_dim("n_hidden", n_hidden)?;
        check_dim("n_actions", n_actions)?;
        let bound1 = glorot_bound(d_in, n_hidden);
        let bound2 = glorot_bound(n_hidden, n_actions);
        // Draw order: w1 row-major, then w2 row-major; biases start at zero.
        let w1 = (0..n_hidden * d_in)
            .map(|_| rng.uniform(-bound1, bound1))
            .collect();
        let w2 = (0..n_actions * n_hidden)
            .map(|_| rng.uniform(-bound2, bound2))
            .collect();
        Ok(MlpReadout {
            d_in,
            n_hidden,
            n_actions,
            w1,
            b1: vec![0.0; n_hidden],
            w2,
            b2: vec![0.0; n_actions],
        })
    }

    pub fn from_weights(
        d_in: usize,
        n_hidden: usize,
        n_actions: usize,
        w1: Vec<f64>,
        b1: Vec<f64>,
        w2: Vec<f64>,
        b2: Vec<f64>,
    ) -> Result<Self> {
        expect_len(&w1, n_hidden * d_in)?;
        expect_len(&b1, n_hidden)?;
        expect_len(&w2, n_actions * n_hidden)?;
        expect_len(&b2, n_actions)?;
        Ok(MlpReadout {
            d_in,
            n_hidden,
            n_actions,
            w1,
            b1,
            w2,
            b2,
        })
    }
}

impl LinearReadout {
    pub fn init(d_in: usize, n_actions: usize, rng: &mut SeededRng) -> Result<Self> {
        check_dim("d_in", d_in)?;
        check_dim("n_actions", n_actions)?;
        let bound = glorot_bound(d_in, n_actions);
        let w = (0..n_actions * d_in)
            .map(|_| rng.uniform(-bound, bound))
            .collect();
        Ok(LinearReadout {
            d_in,
            n_actions,
            w,
            b: vec![0.0; n_actions],
        })
    }

    pub fn from_weights(d_in: usize, n_actions: usize, w: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        expect_len(&w, n_actions * d_in)?;
        expect_len(&b, n_actions)?;
        Ok(LinearReadout {
            d_in,
            n_actions,
            w,
            b,
        })
    }
}

fn check_dim(what: &'static str, v: usize) -> Result<()> {
    if v < 1 {
        Err(Error::InvalidDimension { what, got: v })
    } else {
        Ok(())
    }
}

fn expect_len(v: &[f64], expected: usize) -> Result<()> {
    if v.len() != expected {
        Err(Error::DimensionMismatch {
            expected,
            got: v.len(),
        })
    } else {
        Ok(())
    }
}

/// Reusable forward-pass buffers for the training hot path.
#[derive(Clone, Debug, Default)]
pub struct FwdScratch {
    hidden: Vec<f64>,
    q: Vec<f64>,
}

impl FwdScratch {
    pub fn new() -> Self {
        FwdScratch::default()
    }

    pub fn q_values(&self) -> &[f64] {
        &self.q
    }
}

/// Flat training batch: `(input, action, target)` triples with the inputs
/// packed row-major to keep the training loop allocation-free.
#[derive(Clone, Debug)]
pub struct QBatch {
    d_in: usize,
    inputs: Vec<f64>,
    actions: Vec<usize>,
    targets: Vec<f64>,
}

impl QBatch {
    pub fn new(d_in: usize) -> Self {
        QBatch {
            d_in,
            inputs: Vec::new(),
            actions: Vec::new(),
            targets: Vec::new(),
        }
    }

    pub fn push(&mut self, input: &[f64], action: usize, target: f64) -> Result<()> {
        if input.len() != self.d_in {
            return Err(Error::DimensionMismatch {
                expected: self.d_in,
                got: input.len(),
            });
        }
        if !target.is_finite() {
            return Err(Error::NonFiniteValue { context: "target" });
        }
        self.inputs.extend_from_slice(input);
        self.actions.push(action);
        self.targets.push(target);
        Ok(())
    }

    pub fn clear(&mut self) {
        self.inputs.clear();
        self.actions.clear();
        self.targets.clear();
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    pub fn input(&self, i: usize) -> &[f64] {
        &self.inputs[i * self.d_in..(i + 1) * self.d_in]
    }

    pub fn action(&self, i: usize) -> usize {
        self.actions[i]
    }

    pub fn target(&self, i: usize) -> f64 {
        self.targets[i]
    }
}

/// Gradient buffers shaped like a readout's parameters, in the documented
/// parameter order.
#[derive(Clone, Debug, PartialEq)]
pub struct GradientSet {
    tensors: Vec<Vec<f64>>,
}

impl GradientSet {
    pub fn zeros_like(net: &Readout) -> Self {
        GradientSet {
            tensors: net.params().iter().map(|t| vec![0.0; t.len()]).collect(),
        }
    }

    pub fn tensors(&self) -> &[Vec<f64>] {
        &self.tensors
    }

    fn zero(&mut self) {
        for t in &mut self.tensors {
            for v in t.iter_mut() {
                *v = 0.0;
            }
        }
    }
}

impl Readout {
    /// Builds a readout of the requested kind; `n_hidden` is ignored for
    /// the linear baseline.
    pub fn init(
        kind: ReadoutKind,
        d_in: usize,
        n_hidden: usize,
        n_actions: usize,
        rng: &mut SeededRng,
    ) -> Result<Self> {
        match kind {
            ReadoutKind::Mlp => Ok(Readout::Mlp(MlpReadout::init(
                d_in, n_hidden, n_actions, rng,
            )?)),
            ReadoutKind::Linear => Ok(Readout::Linear(LinearReadout::init(d_in, n_actions, rng)?)),
        }
    }

    pub fn kind(&self) -> ReadoutKind {
        match self {
            Readout::Mlp(_) => ReadoutKind::Mlp,
            Readout::Linear(_) => ReadoutKind::Linear,
        }
    }

    pub fn d_in(&self) -> usize {
        match self {
            Readout::Mlp(m) => m.d_in,
            Readout::Linear(l) => l.d_in,
        }
    }

    pub fn n_hidden(&self) -> usize {
        match self {
            Readout::Mlp(m) => m.n_hidden,
            Readout::Linear(_) => 0,
        }
    }

    pub fn n_actions(&self) -> usize {
        match self {
            Readout::Mlp(m) => m.n_actions,
            Readout::Linear(l) => l.n_actions,
        }
    }

    /// Parameter tensors in checkpoint order (mlp: w1, b1, w2, b2;
    /// linear: w, b), each flat row-major.
    pub fn params(&self) -> Vec<&[f64]> {
        match self {
            Readout::Mlp(m) => vec![&m.w1[..], &m.b1[..], &m.w2[..], &m.b2[..]],
            Readout::Linear(l) => vec![&l.w[..], &l.b[..]],
        }
    }

    pub fn params_mut(&mut self) -> Vec<&mut [f64]> {
        match self {
            Readout::Mlp(m) => vec![&mut m.w1[..], &mut m.b1[..], &mut m.w2[..], &mut m.b2[..]],
            Readout::Linear(l) => vec![&mut l.w[..], &mut l.b[..]],
        }
    }

    pub fn arch_matches(&self, other: &Readout) -> bool {
        match (self, other) {
            (Readout::Mlp(a), Readout::Mlp(b)) => {
                a.d_in == b.d_in && a.n_hidden == b.n_hidden && a.n_actions == b.n_actions
            }
            (Readout::Linear(a), Readout::Linear(b)) => {
                a.d_in == b.d_in && a.n_actions == b.n_actions
            }
            _ => false,
        }
    }

    /// Q-values for one input.
    pub fn forward(&self, input: &Vector) -> Result<Vector> {
        if input.len() != self.d_in() {
            return Err(Error::DimensionMismatch {
                expected: self.d_in(),
                got: input.len(),
            });
        }
        let mut scratch = FwdScratch::new();
        self.forward_into(input.as_slice(), &mut scratch);
        Vector::from_slice(&scratch.q)
    }

    /// Forward pass into reusable buffers; `scratch.q_values()` holds the
    /// result. Input length must already match.
    pub fn forward_into(&self, input: &[f64], scratch: &mut FwdScratch) {
        match self {
            Readout::Mlp(m) => {
                scratch.hidden.resize(m.n_hidden, 0.0);
                scratch.q.resize(m.n_actions, 0.0);
                for j in 0..m.n_hidden {
                    let pre = dot(&m.w1[j * m.d_in..(j + 1) * m.d_in], input) + m.b1[j];
                    scratch.hidden[j] = if pre > 0.0 { pre } else { 0.0 };
                }
                for a in 0..m.n_actions {
                    scratch.q[a] =
                        dot(&m.w2[a * m.n_hidden..(a + 1) * m.n_hidden], &scratch.hidden) + m.b2[a];
                }
            }
            Readout::Linear(l) => {
                scratch.q.resize(l.n_actions, 0.0);
                for a in 0..l.n_actions {
                    scratch.q[a] = dot(&l.w[a * l.d_in..(a + 1) * l.d_in], input) + l.b[a];
                }
            }
        }
    }

    /// Mean squared error on the selected action's Q-value, with exact
    /// gradients written into `grads` (overwritten, then averaged over the
    /// batch). Only the selected action's output row contributes per
    /// sample.
    pub fn backward_mse(
        &self,
        batch: &QBatch,
        grads: &mut GradientSet,
        scratch: &mut FwdScratch,
    ) -> Result<f64> {
        if batch.is_empty() {
            return Err(Error::EmptyBatch);
        }
        if batch.d_in != self.d_in() {
            return Err(Error::DimensionMismatch {
                expected: self.d_in(),
                got: batch.d_in,
            });
        }
        let expected_tensors = self.params().len();
        if grads.tensors.len() != expected_tensors {
            return Err(Error::ShapeMismatch {
                expected: expected_tensors,
                got: grads.tensors.len(),
            });
        }
        for (g, p) in grads.tensors.iter().zip(self.params()) {
            if g.len() != p.len() {
                return Err(Error::ShapeMismatch {
                    expected: p.len(),
                    got: g.len(),
                });
            }
        }
        grads.zero();

        let n = batch.len() as f64;
        let mut loss = 0.0;
        for i in 0..batch.len() {
            let input = batch.input(i);
            let action = batch.action(i);
            if action >= self.n_actions() {
                return Err(Error::InvalidAction {
                    action,
                    n_actions: self.n_actions(),
                });
            }
            self.forward_into(input, scratch);
            let err = scratch.q[action] - batch.target(i);
            loss += err * err;
            let delta = 2.0 * err / n;

            match self {
                Readout::Mlp(m) => {
                    let [gw1, gb1, gw2, gb2] = match &mut grads.tensors[..] {
                        [a, b, c, d] => [a, b, c, d],
                        _ => unreachable!(),
                    };
                    axpy(
                        delta,
                        &scratch.hidden,
                        &mut gw2[action * m.n_hidden..(action + 1) * m.n_hidden],
                    );
                    gb2[action] += delta;
                    let w2_row = &m.w2[action * m.n_hidden..(action + 1) * m.n_hidden];
                    for j in 0..m.n_hidden {
                        // ReLU dead zone: units with non-positive
                        // pre-activation pass no gradient.
                        if scratch.hidden[j] > 0.0 {
                            let dpre = delta * w2_row[j];
                            axpy(dpre, input, &mut gw1[j * m.d_in..(j + 1) * m.d_in]);
                            gb1[j] += dpre;
                        }
                    }
                }
                Readout::Linear(l) => {
                    let [gw, gb] = match &mut grads.tensors[..] {
                        [a, b] => [a, b],
                        _ => unreachable!(),
                    };
                    axpy(
                        delta,
                        input,
                        &mut gw[action * l.d_in..(action + 1) * l.d_in],
                    );
                    gb[action] += delta;
                }
            }
        }
        Ok(loss / n)
    }

    /// Copies all parameters from `src`; architectures must match exactly.
    pub fn copy_from(&mut self, src: &Readout) -> Result<()> {
        if !self.arch_matches(src) {
            return Err(Error::ArchitectureMismatch);
        }
        let src_params: Vec<Vec<f64>> = src.params().iter().map(|p| p.to_vec()).collect();
        for (dst, s) in self.params_mut().into_iter().zip(src_params) {
            dst.copy_from_slice(&s);
        }
        Ok(())
    }

    /// Writes the checkpoint text format: a header line
    /// (`mlp d_in n_hidden n_actions` or `linear d_in n_actions`) followed
    /// by one value per line in parameter order, printed with full
    /// round-trip precision.
    pub fn write_text(&self, w: &mut dyn Write) -> Result<()> {
        match self {
            Readout::Mlp(m) => writeln!(w, "mlp {} {} {}", m.d_in, m.n_hidden, m.n_actions)?,
            Readout::Linear(l) => writeln!(w, "linear {} {}", l.d_in, l.n_actions)?,
        }
        for tensor in self.params() {
            for v in tensor {
                writeln!(w, "{v}")?;
            }
        }
        Ok(())
    }

    /// Reads the checkpoint format written by [`Readout::write_text`].
    pub fn read_text(r: &mut dyn BufRead) -> Result<Readout> {
        let mut header = String::new();
        r.read_line(&mut header)?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let parse_dim = |s: &str| -> Result<usize> {
            s.parse()
                .map_err(|_| Error::Parse(format!("bad dimension '{s}'")))
        };
        let (kind, dims) = match fields.as_slice() {
            ["mlp", d, h, a] => (
                ReadoutKind::Mlp,
                (parse_dim(d)?, parse_dim(h)?, parse_dim(a)?),
            ),
            ["linear", d, a] => (ReadoutKind::Linear, (parse_dim(d)?, 0, parse_dim(a)?)),
            _ => return Err(Error::Parse(format!("bad checkpoint header '{header}'"))),
        };
        let (d_in, n_hidden, n_actions) = dims;
        let sizes: Vec<usize> = match kind {
            ReadoutKind::Mlp => vec![n_hidden * d_in, n_hidden, n_actions * n_hidden, n_actions],
            ReadoutKind::Linear => vec![n_actions * d_in, n_actions],
        };
        let mut tensors = Vec::with_capacity(sizes.len());
        let mut line = String::new();
        for size in sizes {
            let mut t = Vec::with_capacity(size);
            for _ in 0..size {
                line.clear();
                if r.read_line(&mut line)? == 0 {
                    return Err(Error::Parse("checkpoint truncated".into()));
                }
                let v: f64 = line
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad value '{}'", line.trim())))?;
                t.push(v);
            }
            tensors.push(t);
        }
        match kind {
            ReadoutKind::Mlp => {
                let mut it = tensors.into_iter();
                Ok(Readout::Mlp(MlpReadout::from_weights(
                    d_in,
                    n_hidden,
                    n_actions,
                    it.next().unwrap(),
                    it.next().unwrap(),
                    it.next().unwrap(),
                    it.next().unwrap(),
                )?))
            }
            ReadoutKind::Linear => {
                let mut it = tensors.into_iter();
                Ok(Readout::Linear(LinearReadout::from_weights(
                    d_in,
                    n_actions,
                    it.next().unwrap(),
                    it.next().unwrap(),
                )?))
            }
        }
    }
}

/// Greedy action: index of the maximum Q-value, lowest index on ties.
pub fn argmax(q: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in q.iter().enumerate().skip(1) {
        if v > q[best] {
            best = i;
        }
    }
    best
}
