//! Lattice Schwinger model: `n` staggered-fermion sites (qubits) alternating
//! with `n-1` truncated bosonic links of dimension `2Λ`.
//!
//! The Hamiltonian is `H = H_0 + H_1` with a diagonal on-site/on-link part
//!
//! ```text
//!     H_0 = Σ_i F_i²  -  (μ/2) Σ_i (-1)^i Z_i,
//! ```
//!
//! and a site-link hopping part that is decomposed, per link, into eight
//! three-body Hermitian factors using `U + U† = A + U†AU` and
//! `i(U - U†) = B + U†BU`, where `A`/`B` are Pauli `X`/`Y` on the
//! lowest-order encoded qubit of the link register.
//!
//! Link levels `j ∈ [-Λ, Λ-1]` map to unsigned digits `u = j + Λ`. Gauss law
//! propagates `F_i = F_{i-1} + Q_i` from the open-boundary convention
//! `F_0 = F_n = 0`, so each admissible spin configuration fixes its link
//! digits uniquely and the physical subspace is spanned by at most `2^n`
//! computational basis states.

use super::{
    pauli, HamiltonianModel, Hilbert, LocalFactor, ModelError, ModelMeta, SiteKind, Term, TermBody,
};
use crate::linalg::{kron, HermitianEig, Layout, LocalPlan, Operator, StateVec, C64};

/// Basis-digit accessor for the interleaved site/link layout.
#[derive(Clone)]
pub(crate) struct SchwingerIndex {
    n: usize,
    lambda: i64,
    strides: Vec<usize>,
    factors: Vec<usize>,
}

impl SchwingerIndex {
    fn new(hilbert: &Hilbert, n: usize, lambda: usize) -> Self {
        let layout = &hilbert.layout;
        SchwingerIndex {
            n,
            lambda: lambda as i64,
            strides: (0..layout.factors().len()).map(|f| layout.stride(f)).collect(),
            factors: layout.factors().to_vec(),
        }
    }

    /// Z eigenvalue (+-1) of site `i` (1-based) in basis state `b`.
    #[inline]
    pub fn site_z(&self, b: usize, i: usize) -> i64 {
        let f = 2 * (i - 1);
        let bit = (b / self.strides[f]) % self.factors[f];
        1 - 2 * bit as i64
    }

    /// Electric field value `F ∈ [-Λ, Λ-1]` of link `i` (1-based) in state `b`.
    #[inline]
    pub fn link_f(&self, b: usize, i: usize) -> i64 {
        let f = 2 * (i - 1) + 1;
        let digit = (b / self.strides[f]) % self.factors[f];
        digit as i64 - self.lambda
    }

    /// Staggered charge `Q_i = (-Z_i + (-1)^i) / 2`.
    #[inline]
    pub fn charge(&self, b: usize, i: usize) -> i64 {
        let sign = if i % 2 == 0 { 1 } else { -1 };
        (-self.site_z(b, i) + sign) / 2
    }

    /// Gauss-law value `G_i = F_i - F_{i-1} - Q_i` with `F_0 = F_n = 0`.
    pub fn gauss(&self, b: usize, i: usize) -> i64 {
        let fi = if i == self.n { 0 } else { self.link_f(b, i) };
        let fprev = if i == 1 { 0 } else { self.link_f(b, i - 1) };
        fi - fprev - self.charge(b, i)
    }

    /// Assemble the basis index from site bits and link digits.
    fn index_of(&self, bits: &[usize], links: &[usize]) -> usize {
        let mut idx = 0;
        for i in 0..self.n {
            idx += bits[i] * self.strides[2 * i];
            if i < self.n - 1 {
                idx += links[i] * self.strides[2 * i + 1];
            }
        }
        idx
    }
}

/// Cyclic raising operator on a `2Λ`-dim link register.
fn link_raising(two_lambda: usize) -> Operator {
    let mut u = Operator::zeros(Layout::single(two_lambda));
    for j in 0..two_lambda - 1 {
        u.set(j + 1, j, C64::new(1.0, 0.0));
    }
    u.set(0, two_lambda - 1, C64::new(1.0, 0.0));
    u
}

/// Pauli X on the lowest-order encoded qubit of the link register.
fn link_a(two_lambda: usize) -> Operator {
    let mut a = Operator::zeros(Layout::single(two_lambda));
    for u in 0..two_lambda {
        a.set(u ^ 1, u, C64::new(1.0, 0.0));
    }
    a
}

/// Pauli Y on the lowest-order encoded qubit of the link register.
fn link_b(two_lambda: usize) -> Operator {
    let mut b = Operator::zeros(Layout::single(two_lambda));
    for u in 0..two_lambda {
        let v = if u % 2 == 0 {
            C64::new(0.0, 1.0)
        } else {
            C64::new(0.0, -1.0)
        };
        b.set(u ^ 1, u, v);
    }
    b
}

/// Build the Schwinger model at `n` sites, cutoff `Λ`, hopping `x`, mass `μ`.
///
/// Terms come out as `[H_0]` followed by the `8(n-1)` three-body factors in
/// the product order of the step decomposition, links ascending.
pub fn build_schwinger(
    n: usize,
    lambda: usize,
    x: f64,
    mu: f64,
) -> Result<HamiltonianModel, ModelError> {
    if n < 2 {
        return Err(ModelError::InvalidParam(format!("need n >= 2 sites, got {n}")));
    }
    if lambda < 2 || !(2 * lambda).is_power_of_two() {
        return Err(ModelError::InvalidParam(format!(
            "cutoff must satisfy lambda >= 2 with 2*lambda a power of two, got {lambda}"
        )));
    }
    let two_lambda = 2 * lambda;

    let mut dims = Vec::with_capacity(2 * n - 1);
    let mut kinds = Vec::with_capacity(2 * n - 1);
    for i in 0..n {
        dims.push(2);
        kinds.push(SiteKind::Qubit);
        if i < n - 1 {
            dims.push(two_lambda);
            kinds.push(SiteKind::LinkBoson);
        }
    }
    let hilbert = Hilbert {
        layout: Layout(dims),
        kinds,
    };
    let dim = hilbert.dim();
    let ix = SchwingerIndex::new(&hilbert, n, lambda);

    // H_0: strictly diagonal
    let mut diag = vec![0.0f64; dim];
    for (b, v) in diag.iter_mut().enumerate() {
        let mut acc = 0.0;
        for link in 1..n {
            let f = ix.link_f(b, link) as f64;
            acc += f * f;
        }
        for site in 1..=n {
            let sign = if site % 2 == 0 { 1.0 } else { -1.0 };
            acc -= 0.5 * mu * sign * ix.site_z(b, site) as f64;
        }
        *v = acc;
    }
    let mut terms = vec![Term {
        label: "H_0".into(),
        body: TermBody::Diagonal(diag),
    }];

    // hopping factors per link
    let u_raise = link_raising(two_lambda);
    let a_op = link_a(two_lambda);
    let b_op = link_b(two_lambda);
    let a_tilde = u_raise.dagger().mul(&a_op).mul(&u_raise);
    let b_tilde = u_raise.dagger().mul(&b_op).mul(&u_raise);

    let three_body = |left: &Operator, link: &Operator, right: &Operator, coef: f64| {
        kron(&kron(left, link).expect("within cap"), right)
            .expect("within cap")
            .scale_real(coef)
    };
    let (px, py) = (pauli::x(), pauli::y());
    let q = 0.25 * x;
    for link in 1..n {
        let support = vec![2 * (link - 1), 2 * (link - 1) + 1, 2 * link];
        let factors: [(&str, Operator); 8] = [
            ("A.XX", three_body(&px, &a_op, &px, q)),
            ("At.XX", three_body(&px, &a_tilde, &px, q)),
            ("A.YY", three_body(&py, &a_op, &py, q)),
            ("At.YY", three_body(&py, &a_tilde, &py, q)),
            ("B.XY", three_body(&px, &b_op, &py, q)),
            ("Bt.XY", three_body(&px, &b_tilde, &py, q)),
            ("B.YX", three_body(&py, &b_op, &px, -q)),
            ("Bt.YX", three_body(&py, &b_tilde, &px, -q)),
        ];
        for (tag, m) in factors {
            terms.push(Term {
                label: format!("link{link}:{tag}"),
                body: TermBody::Factors(vec![LocalFactor {
                    support: support.clone(),
                    matrix: m,
                }]),
            });
        }
    }

    Ok(HamiltonianModel {
        hilbert,
        terms,
        meta: ModelMeta {
            name: "schwinger".into(),
            n,
            cutoff_lambda: Some(lambda),
            coupling_x: Some(x),
            mass_mu: Some(mu),
            ..ModelMeta::default()
        },
    })
}

/// A gauge operator `G_i`, diagonal in the computational basis with integer
/// spectrum.
#[derive(Clone, Debug)]
pub struct GaugeOperator {
    pub site: usize,
    layout: Layout,
    diag: Vec<f64>,
}

impl GaugeOperator {
    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn to_dense(&self) -> Operator {
        Operator::from_diag_real(self.layout.clone(), &self.diag)
    }
}

fn require_schwinger(model: &HamiltonianModel) -> Result<(usize, usize), ModelError> {
    if !model.is_schwinger() {
        return Err(ModelError::WrongModelKind {
            expected: "schwinger",
            got: model.meta.name.clone(),
        });
    }
    Ok((model.meta.n, model.meta.cutoff_lambda.expect("schwinger meta")))
}

/// The `n` gauge operators `G_i = F_i - F_{i-1} - Q_i` (with `F_0 = F_n = 0`).
pub fn gauge_operators(model: &HamiltonianModel) -> Result<Vec<GaugeOperator>, ModelError> {
    let (n, lambda) = require_schwinger(model)?;
    let ix = SchwingerIndex::new(&model.hilbert, n, lambda);
    let dim = model.dim();
    Ok((1..=n)
        .map(|i| GaugeOperator {
            site: i,
            layout: model.layout().clone(),
            diag: (0..dim).map(|b| ix.gauss(b, i) as f64).collect(),
        })
        .collect())
}

/// The joint kernel of all gauge operators.
#[derive(Clone, Debug)]
pub struct PhysicalSubspace {
    layout: Layout,
    /// Sorted computational-basis indices spanning the subspace.
    pub basis_indices: Vec<usize>,
    member: Vec<bool>,
}

impl PhysicalSubspace {
    pub fn dim_phys(&self) -> usize {
        self.basis_indices.len()
    }

    pub fn contains(&self, basis_index: usize) -> bool {
        self.member[basis_index]
    }

    /// 0/1 projector diagonal.
    pub fn projector_diag(&self) -> Vec<f64> {
        self.member.iter().map(|&m| if m { 1.0 } else { 0.0 }).collect()
    }

    pub fn projector_dense(&self) -> Operator {
        Operator::from_diag_real(self.layout.clone(), &self.projector_diag())
    }

    /// `1 - <ψ|Π_0|ψ>` for a normalized state.
    pub fn leakage(&self, state: &StateVec) -> f64 {
        let inside: f64 = self
            .basis_indices
            .iter()
            .map(|&b| state.amps()[b].norm_sqr())
            .sum();
        (1.0 - inside).max(0.0)
    }
}

/// Construct the physical subspace by Gauss-law propagation over all `2^n`
/// spin configurations, keeping those whose link values stay in `[-Λ, Λ-1]`
/// and return to `F_n = 0` at the right boundary.
pub fn physical_projector(model: &HamiltonianModel) -> Result<PhysicalSubspace, ModelError> {
    let (n, lambda) = require_schwinger(model)?;
    let ix = SchwingerIndex::new(&model.hilbert, n, lambda);
    let dim = model.dim();
    let lam = lambda as i64;

    let mut basis_indices = Vec::new();
    let mut member = vec![false; dim];
    'config: for c in 0..(1usize << n) {
        let bits: Vec<usize> = (0..n).map(|i| (c >> (n - 1 - i)) & 1).collect();
        let charge = |i: usize| -> i64 {
            let z = 1 - 2 * bits[i - 1] as i64;
            let sign = if i % 2 == 0 { 1 } else { -1 };
            (-z + sign) / 2
        };
        let mut links = Vec::with_capacity(n - 1);
        let mut f = 0i64;
        for i in 1..n {
            f += charge(i);
            if !(-lam..=lam - 1).contains(&f) {
                continue 'config;
            }
            links.push((f + lam) as usize);
        }
        if f + charge(n) != 0 {
            continue; // F_n = 0 violated
        }
        let idx = ix.index_of(&bits, &links);
        member[idx] = true;
        basis_indices.push(idx);
    }
    basis_indices.sort_unstable();
    Ok(PhysicalSubspace {
        layout: model.layout().clone(),
        basis_indices,
        member,
    })
}

/// Ground state of `Π_0 H Π_0` on the physical basis, embedded in the full
/// space.
#[derive(Clone, Debug)]
pub struct GroundState {
    pub state: StateVec,
    pub energy: f64,
    /// Ground level degenerate within 1e-10; the lowest-index eigenvector is
    /// chosen deterministically.
    pub degenerate: bool,
}

pub fn ground_state_physical(model: &HamiltonianModel) -> Result<GroundState, ModelError> {
    let phys = physical_projector(model)?;
    ground_state_on(model, &phys)
}

/// Ground state given a precomputed physical subspace.
pub fn ground_state_on(
    model: &HamiltonianModel,
    phys: &PhysicalSubspace,
) -> Result<GroundState, ModelError> {
    let dp = phys.dim_phys();
    assert!(dp > 0, "physical subspace is empty");
    let dim = model.dim();

    // restricted matrix <a|H|b> over physical basis states
    let mut h_phys = Operator::zeros(Layout::single(dp));
    let mut col = vec![C64::new(0.0, 0.0); dim];
    let mut basis = vec![C64::new(0.0, 0.0); dim];
    for (jp, &bj) in phys.basis_indices.iter().enumerate() {
        basis[bj] = C64::new(1.0, 0.0);
        col.iter_mut().for_each(|z| *z = C64::new(0.0, 0.0));
        model.accumulate_apply(&basis, &mut col);
        basis[bj] = C64::new(0.0, 0.0);
        for (ip, &bi) in phys.basis_indices.iter().enumerate() {
            h_phys.set(ip, jp, col[bi]);
        }
    }

    let eig = HermitianEig::new(&h_phys)?;
    let energy = eig.values()[0];
    let degenerate = dp > 1 && (eig.values()[1] - energy) <= 1e-10;

    let mut amps = vec![C64::new(0.0, 0.0); dim];
    for (k, &b) in phys.basis_indices.iter().enumerate() {
        amps[b] = eig.vectors().get(k, 0);
    }
    let mut state = StateVec::new(model.layout().clone(), amps);
    state.normalize();
    Ok(GroundState {
        state,
        energy,
        degenerate,
    })
}

/// Restricted matrix elements `<a|M|b>` over the physical basis for a dense
/// check of commutators without materializing the full operator.
pub fn restricted_elements(
    model: &HamiltonianModel,
    phys: &PhysicalSubspace,
    op_diag: Option<&[f64]>,
) -> Operator {
    let dp = phys.dim_phys();
    let dim = model.dim();
    let mut out = Operator::zeros(Layout::single(dp));
    let mut col = vec![C64::new(0.0, 0.0); dim];
    let mut basis = vec![C64::new(0.0, 0.0); dim];
    for (jp, &bj) in phys.basis_indices.iter().enumerate() {
        basis[bj] = C64::new(1.0, 0.0);
        col.iter_mut().for_each(|z| *z = C64::new(0.0, 0.0));
        model.accumulate_apply(&basis, &mut col);
        if let Some(d) = op_diag {
            // commutator with a diagonal: <a|[H, D]|b> = (d_b - d_a) <a|H|b>
            for (ip, &bi) in phys.basis_indices.iter().enumerate() {
                let v = col[bi] * C64::new(d[bj] - d[bi], 0.0);
                out.set(ip, jp, v);
            }
        } else {
            for (ip, &bi) in phys.basis_indices.iter().enumerate() {
                out.set(ip, jp, col[bi]);
            }
        }
        basis[bj] = C64::new(0.0, 0.0);
    }
    out
}
