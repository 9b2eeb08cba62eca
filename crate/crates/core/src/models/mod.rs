//! Hamiltonian builders: the all-pairs random Heisenberg chain, the
//! disordered (MBL) Heisenberg chain, and the lattice Schwinger model.
//!
//! A model is an ordered list of Hermitian terms; the order is the exact
//! product order of the first-order formula `S_δt = e^{-iH_L δt} ... e^{-iH_1 δt}`
//! (term 1 is applied to the state first). Each term is either diagonal in
//! the computational basis or a sum of mutually commuting local factors, so
//! its exponential factorizes exactly into local gates.

mod heisenberg;
mod schwinger;

pub use heisenberg::{build_mbl_heisenberg, build_random_heisenberg};
pub use schwinger::{
    build_schwinger, gauge_operators, ground_state_physical, physical_projector, GaugeOperator,
    GroundState, PhysicalSubspace,
};

use crate::linalg::{kron, Layout, LocalPlan, Operator, StateVec, C64};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("qubit count {0} outside supported range {1}..={2}")]
    SizeOutOfRange(usize, usize, usize),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("operation requires a {expected} model, got {got}")]
    WrongModelKind { expected: &'static str, got: String },
    #[error(transparent)]
    Linalg(#[from] crate::linalg::LinalgError),
}

/// Single-qubit constants.
pub mod pauli {
    use crate::linalg::{Layout, Operator, C64};

    fn q(entries: [[f64; 2]; 4]) -> Operator {
        let data: Vec<C64> = entries.iter().map(|e| C64::new(e[0], e[1])).collect();
        Operator::from_rows(Layout::qubits(1), &data)
    }

    pub fn identity() -> Operator {
        q([[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [1.0, 0.0]])
    }

    pub fn x() -> Operator {
        q([[0.0, 0.0], [1.0, 0.0], [1.0, 0.0], [0.0, 0.0]])
    }

    pub fn y() -> Operator {
        q([[0.0, 0.0], [0.0, -1.0], [0.0, 1.0], [0.0, 0.0]])
    }

    pub fn z() -> Operator {
        q([[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [-1.0, 0.0]])
    }

    pub fn hadamard() -> Operator {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        q([[s, 0.0], [s, 0.0], [s, 0.0], [-s, 0.0]])
    }
}

/// Role of a tensor factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SiteKind {
    Qubit,
    LinkBoson,
}

/// Hilbert-space layout with per-factor roles.
#[derive(Clone, Debug)]
pub struct Hilbert {
    pub layout: Layout,
    pub kinds: Vec<SiteKind>,
}

impl Hilbert {
    pub fn qubits(n: usize) -> Self {
        Hilbert {
            layout: Layout::qubits(n),
            kinds: vec![SiteKind::Qubit; n],
        }
    }

    pub fn dim(&self) -> usize {
        self.layout.dim()
    }

    /// Factor indices of the qubit sites.
    pub fn qubit_factors(&self) -> Vec<usize> {
        self.kinds
            .iter()
            .enumerate()
            .filter(|(_, k)| **k == SiteKind::Qubit)
            .map(|(i, _)| i)
            .collect()
    }
}

/// One local factor of a Hamiltonian term.
#[derive(Clone, Debug)]
pub struct LocalFactor {
    /// Ascending factor indices.
    pub support: Vec<usize>,
    /// Hermitian matrix of dimension = product of supported local dims.
    pub matrix: Operator,
}

#[derive(Clone, Debug)]
pub enum TermBody {
    /// Real diagonal in the computational basis.
    Diagonal(Vec<f64>),
    /// Sum of mutually commuting local factors.
    Factors(Vec<LocalFactor>),
}

/// One term `H_μ` of the product formula.
#[derive(Clone, Debug)]
pub struct Term {
    pub label: String,
    pub body: TermBody,
}

impl Term {
    /// Dense materialization on the full space.
    pub fn materialize(&self, hilbert: &Hilbert) -> Operator {
        match &self.body {
            TermBody::Diagonal(d) => Operator::from_diag_real(hilbert.layout.clone(), d),
            TermBody::Factors(fs) => {
                let mut total = Operator::zeros(hilbert.layout.clone());
                for f in fs {
                    total.add_assign(&embed_local(&hilbert.layout, &f.support, &f.matrix));
                }
                total
            }
        }
    }

    /// Accumulate `out += H_μ |amps>`.
    pub fn accumulate_apply(&self, hilbert: &Hilbert, amps: &[C64], out: &mut [C64]) {
        match &self.body {
            TermBody::Diagonal(d) => {
                for ((o, a), v) in out.iter_mut().zip(amps.iter()).zip(d.iter()) {
                    *o += a * v;
                }
            }
            TermBody::Factors(fs) => {
                for f in fs {
                    let plan = LocalPlan::new(&hilbert.layout, &f.support);
                    plan.accumulate(amps, f.matrix.data(), out);
                }
            }
        }
    }
}

/// Embed a small operator on `support` into the full space.
pub fn embed_local(layout: &Layout, support: &[usize], small: &Operator) -> Operator {
    let factors = layout.factors();
    let dim = layout.dim();
    let mut out = Operator::zeros(layout.clone());
    let strides: Vec<usize> = (0..factors.len()).map(|f| layout.stride(f)).collect();
    let sup_dims: Vec<usize> = support.iter().map(|&f| factors[f]).collect();
    let block: usize = sup_dims.iter().product();
    debug_assert_eq!(small.dim(), block);

    // offsets of support digit patterns and of rest patterns
    let mut local_offsets = Vec::with_capacity(block);
    for b in 0..block {
        let mut rem = b;
        let mut off = 0;
        for k in (0..support.len()).rev() {
            off += (rem % sup_dims[k]) * strides[support[k]];
            rem /= sup_dims[k];
        }
        local_offsets.push(off);
    }
    let mut rest_offsets = Vec::new();
    'outer: for idx in 0..dim {
        for (k, &f) in support.iter().enumerate() {
            let _ = k;
            if (idx / strides[f]) % factors[f] != 0 {
                continue 'outer;
            }
        }
        rest_offsets.push(idx);
    }
    for &base in &rest_offsets {
        for bi in 0..block {
            let row = base + local_offsets[bi];
            for bj in 0..block {
                let v = small.get(bi, bj);
                if v != C64::new(0.0, 0.0) {
                    out.set(row, base + local_offsets[bj], v);
                }
            }
        }
    }
    out
}

/// Two-site embedding helper: `a` on factor `i`, `b` on factor `j` (`i < j`).
pub fn embed_pair(layout: &Layout, i: usize, j: usize, a: &Operator, b: &Operator) -> Operator {
    embed_local(layout, &[i, j], &kron(a, b).expect("pair embed within cap"))
}

/// Serializable model metadata: name, parameters, coupling arrays.
#[derive(Clone, Debug, Serialize, Deserialize, Default)]
pub struct ModelMeta {
    pub name: String,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub disorder_h: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cutoff_lambda: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coupling_x: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mass_mu: Option<f64>,
    /// All-pairs couplings J_ij in fixed lexicographic (i<j) order.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub couplings_j: Option<Vec<f64>>,
    /// On-site field strengths h_i.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fields_h: Option<Vec<f64>>,
}

/// An ordered-term Hamiltonian with metadata.
#[derive(Clone, Debug)]
pub struct HamiltonianModel {
    pub hilbert: Hilbert,
    pub terms: Vec<Term>,
    pub meta: ModelMeta,
}

impl HamiltonianModel {
    pub fn dim(&self) -> usize {
        self.hilbert.dim()
    }

    pub fn layout(&self) -> &Layout {
        &self.hilbert.layout
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Dense materializations of all terms, in product order.
    pub fn term_matrices(&self) -> Vec<Operator> {
        self.terms.iter().map(|t| t.materialize(&self.hilbert)).collect()
    }

    /// Dense total Hamiltonian (sum of terms).
    pub fn total(&self) -> Operator {
        let mut h = Operator::zeros(self.hilbert.layout.clone());
        for t in &self.terms {
            match &t.body {
                TermBody::Diagonal(d) => {
                    for (i, v) in d.iter().enumerate() {
                        let cur = h.get(i, i);
                        h.set(i, i, cur + C64::new(*v, 0.0));
                    }
                }
                TermBody::Factors(_) => h.add_assign(&t.materialize(&self.hilbert)),
            }
        }
        h
    }

    /// `out += H |amps>` accumulated term by term, without densifying.
    pub fn accumulate_apply(&self, amps: &[C64], out: &mut [C64]) {
        for t in &self.terms {
            t.accumulate_apply(&self.hilbert, amps, out);
        }
    }

    /// `H |state>` as a fresh vector.
    pub fn apply_total(&self, state: &StateVec) -> StateVec {
        let mut out = vec![C64::new(0.0, 0.0); state.dim()];
        self.accumulate_apply(state.amps(), &mut out);
        StateVec::new(state.layout().clone(), out)
    }

    pub fn is_schwinger(&self) -> bool {
        self.meta.name == "schwinger"
    }

    /// Reproducibility record: name, parameters, coupling arrays.
    pub fn manifest(&self) -> ModelMeta {
        self.meta.clone()
    }
}
