//! Protection schedules: per-step symmetry transformations `C_k` and the
//! kick-spectrum quantities (`m`, `ξ`) they induce.
//!
//! A schedule is lazily materialized from `(kind, seed, k)`, so memory stays
//! O(1) per step and `materialize(k)` is pure and thread-safe. For schedules
//! with `C_k = C_0^k` the base transformation is exposed separately for the
//! bound evaluators.

use crate::linalg::{
    eigphases_unitary, kron, Layout, LinalgError, Operator, StateVec, C64,
};
use crate::models::{gauge_operators, HamiltonianModel, ModelError};
use crate::rng::{rng_from, sub_seed};
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleKind {
    Identity,
    HaarSu2,
    HadamardDet,
    U1Z,
    Gauge,
    TermOrdering,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleMode {
    Independent,
    PowersOfC0,
    UniformAngles,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymmetryGroup {
    Su2Global,
    U1Global,
    Z2LambdaGauge,
    U1Gauge,
    None,
}

/// Gauge group selector for [`ProtectionSchedule::gauge`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GaugeGroup {
    /// Angles restricted to multiples of `π/Λ` (symmetry of the truncated H).
    Z2Lambda,
    /// Arbitrary angles (symmetry of `Π_0 H Π_0`).
    U1,
}

/// The transformation applied around one simulation step.
#[derive(Clone, Debug)]
pub enum StepTransform {
    Identity,
    /// `C = w^{⊗n}`: the same 2x2 unitary on every qubit factor.
    Qubitwise(Operator),
    /// Diagonal unitary: per-basis-state phases.
    Diagonal(Vec<C64>),
    /// Permutation of the term product order for this step (no conjugation).
    TermPermutation(Vec<usize>),
}

impl StepTransform {
    /// Dense materialization; `None` for a term permutation.
    pub fn materialize_dense(&self, layout: &Layout, qubit_factors: &[usize]) -> Option<Operator> {
        match self {
            StepTransform::Identity => Some(Operator::identity(layout.clone())),
            StepTransform::Diagonal(d) => Some(Operator::from_diag(layout.clone(), d)),
            StepTransform::Qubitwise(w) => {
                assert_eq!(qubit_factors.len(), layout.factors().len(),
                    "qubitwise transforms require an all-qubit layout");
                let mut c = w.clone();
                for _ in 1..qubit_factors.len() {
                    c = kron(&c, w).expect("within cap");
                }
                Some(c)
            }
            StepTransform::TermPermutation(_) => None,
        }
    }

    /// Apply `C` (or `C^dag`) to a state in place.
    pub fn apply_to_state(&self, state: &mut StateVec, qubit_factors: &[usize], adjoint: bool) {
        match self {
            StepTransform::Identity | StepTransform::TermPermutation(_) => {}
            StepTransform::Diagonal(d) => {
                let amps = state.amps_mut();
                if adjoint {
                    for (a, p) in amps.iter_mut().zip(d.iter()) {
                        *a *= p.conj();
                    }
                } else {
                    for (a, p) in amps.iter_mut().zip(d.iter()) {
                        *a *= p;
                    }
                }
            }
            StepTransform::Qubitwise(w) => {
                let m = if adjoint { w.dagger() } else { w.clone() };
                let m2 = [m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1)];
                let layout = state.layout().clone();
                crate::linalg::apply_qubitwise(&layout, state.amps_mut(), qubit_factors, &m2);
            }
        }
    }

    /// `C^dag S C` for a dense step operator.
    pub fn conjugate_dense(&self, s: &Operator, qubit_factors: &[usize]) -> Operator {
        match self {
            StepTransform::Identity | StepTransform::TermPermutation(_) => s.clone(),
            StepTransform::Diagonal(d) => {
                let dim = s.dim();
                let mut out = s.clone();
                for i in 0..dim {
                    let ci = d[i].conj();
                    for j in 0..dim {
                        let v = ci * out.get(i, j) * d[j];
                        out.set(i, j, v);
                    }
                }
                out
            }
            StepTransform::Qubitwise(_) => {
                let c = self
                    .materialize_dense(s.layout(), qubit_factors)
                    .expect("qubitwise materializes");
                c.dagger().mul(&s.mul(&c))
            }
        }
    }
}

#[derive(Clone, Debug)]
enum ScheduleData {
    None,
    U1Z { sz: Vec<i64>, base_phi: f64 },
    Gauge {
        gauge_diags: Vec<Vec<f64>>,
        base_angles: Vec<f64>,
        lambda: usize,
        group: GaugeGroup,
    },
    TermOrdering { term_count: usize },
}

/// Rule producing the protection transformation for each step `k = 1..=r`.
#[derive(Clone, Debug)]
pub struct ProtectionSchedule {
    pub kind: ScheduleKind,
    pub mode: ScheduleMode,
    pub group: SymmetryGroup,
    pub r: usize,
    pub seed: u64,
    n_qubits: usize,
    data: ScheduleData,
}

impl ProtectionSchedule {
    /// Raw simulation: `C_k = I` for every step.
    pub fn identity(r: usize) -> Self {
        assert!(r >= 1);
        ProtectionSchedule {
            kind: ScheduleKind::Identity,
            mode: ScheduleMode::Independent,
            group: SymmetryGroup::None,
            r,
            seed: 0,
            n_qubits: 0,
            data: ScheduleData::None,
        }
    }

    /// `C_k = W_k^{⊗n}` for independent Haar-random `W_k` on SU(2).
    pub fn haar_su2(n: usize, r: usize, seed: u64) -> Self {
        assert!(n >= 1 && r >= 1);
        ProtectionSchedule {
            kind: ScheduleKind::HaarSu2,
            mode: ScheduleMode::Independent,
            group: SymmetryGroup::Su2Global,
            r,
            seed,
            n_qubits: n,
            data: ScheduleData::None,
        }
    }

    /// Alternating identity / global Hadamard; cancellation of the averaged
    /// leading error holds for even `r`.
    pub fn hadamard_det(n: usize, r: usize) -> Self {
        assert!(n >= 1 && r >= 1);
        ProtectionSchedule {
            kind: ScheduleKind::HadamardDet,
            mode: ScheduleMode::PowersOfC0,
            group: SymmetryGroup::Su2Global,
            r,
            seed: 0,
            n_qubits: n,
            data: ScheduleData::None,
        }
    }

    /// Global z-rotations `C_k = [e^{-iφ_k Z}]^{⊗n}`; `independent` draws
    /// `φ_k` i.i.d. uniform, `powers_of_c0` sets `φ_k = k φ_1`.
    pub fn u1_z(n: usize, r: usize, seed: u64, mode: ScheduleMode) -> Result<Self, ModelError> {
        assert!(n >= 1 && r >= 1);
        if mode == ScheduleMode::UniformAngles {
            return Err(ModelError::InvalidParam(
                "u1_z supports independent or powers_of_c0 modes".into(),
            ));
        }
        let dim = 1usize << n;
        let sz: Vec<i64> = (0..dim)
            .map(|b| n as i64 - 2 * (b as u64).count_ones() as i64)
            .collect();
        let base_phi = rng_from(sub_seed(seed, "u1z-base", 0))
            .gen_range(0.0..std::f64::consts::TAU);
        Ok(ProtectionSchedule {
            kind: ScheduleKind::U1Z,
            mode,
            group: SymmetryGroup::U1Global,
            r,
            seed,
            n_qubits: n,
            data: ScheduleData::U1Z { sz, base_phi },
        })
    }

    /// Gauge transformations `C_k = ∏_i exp(-i φ_{k,i} G_i)`, diagonal.
    ///
    /// `uniform_angles` sets `φ_{k,i} = k φ_{1,i}` with the base angles drawn
    /// once; `independent` redraws every step. The `Z2Lambda` group restricts
    /// the angles to `m π/Λ` with integer `m`.
    pub fn gauge(
        model: &HamiltonianModel,
        r: usize,
        group: GaugeGroup,
        mode: ScheduleMode,
        seed: u64,
    ) -> Result<Self, ModelError> {
        assert!(r >= 1);
        if mode == ScheduleMode::PowersOfC0 {
            return Err(ModelError::InvalidParam(
                "gauge schedules use uniform_angles (= powers of C_0) or independent mode".into(),
            ));
        }
        let lambda = model
            .meta
            .cutoff_lambda
            .ok_or_else(|| ModelError::WrongModelKind {
                expected: "schwinger",
                got: model.meta.name.clone(),
            })?;
        let gauge_diags: Vec<Vec<f64>> = gauge_operators(model)?
            .into_iter()
            .map(|g| g.diag().to_vec())
            .collect();
        let n = model.meta.n;
        let mut rng = rng_from(sub_seed(seed, "gauge-base", 0));
        let base_angles: Vec<f64> = (0..n)
            .map(|_| draw_gauge_angle(&mut rng, group, lambda))
            .collect();
        Ok(ProtectionSchedule {
            kind: ScheduleKind::Gauge,
            mode,
            group: match group {
                GaugeGroup::Z2Lambda => SymmetryGroup::Z2LambdaGauge,
                GaugeGroup::U1 => SymmetryGroup::U1Gauge,
            },
            r,
            seed,
            n_qubits: n,
            data: ScheduleData::Gauge {
                gauge_diags,
                base_angles,
                lambda,
                group,
            },
        })
    }

    /// Random term ordering: one uniform permutation per step, no conjugating
    /// unitary. Valid only for the first-order formula.
    pub fn random_ordering(term_count: usize, r: usize, seed: u64) -> Self {
        assert!(r >= 1 && term_count >= 1);
        ProtectionSchedule {
            kind: ScheduleKind::TermOrdering,
            mode: ScheduleMode::Independent,
            group: SymmetryGroup::None,
            r,
            seed,
            n_qubits: 0,
            data: ScheduleData::TermOrdering { term_count },
        }
    }

    pub fn is_term_ordering(&self) -> bool {
        self.kind == ScheduleKind::TermOrdering
    }

    /// `C_k` for step `k ∈ 1..=r`.
    pub fn materialize(&self, k: usize) -> StepTransform {
        debug_assert!((1..=self.r).contains(&k));
        match (&self.kind, &self.data) {
            (ScheduleKind::Identity, _) => StepTransform::Identity,
            (ScheduleKind::HaarSu2, _) => {
                let mut rng = rng_from(sub_seed(self.seed, "haar-step", k as u64));
                StepTransform::Qubitwise(haar_su2(&mut rng))
            }
            (ScheduleKind::HadamardDet, _) => {
                if k % 2 == 0 {
                    StepTransform::Identity
                } else {
                    StepTransform::Qubitwise(crate::models::pauli::hadamard())
                }
            }
            (ScheduleKind::U1Z, ScheduleData::U1Z { sz, base_phi }) => {
                let phi = match self.mode {
                    ScheduleMode::PowersOfC0 => (k as f64) * base_phi,
                    _ => rng_from(sub_seed(self.seed, "u1z-step", k as u64))
                        .gen_range(0.0..std::f64::consts::TAU),
                };
                let diag: Vec<C64> = sz
                    .iter()
                    .map(|&z| C64::new(0.0, -phi * z as f64).exp())
                    .collect();
                StepTransform::Diagonal(diag)
            }
            (
                ScheduleKind::Gauge,
                ScheduleData::Gauge {
                    gauge_diags,
                    base_angles,
                    lambda,
                    group,
                },
            ) => {
                let angles: Vec<f64> = match self.mode {
                    ScheduleMode::UniformAngles => {
                        base_angles.iter().map(|a| a * k as f64).collect()
                    }
                    _ => {
                        let mut rng = rng_from(sub_seed(self.seed, "gauge-step", k as u64));
                        (0..base_angles.len())
                            .map(|_| draw_gauge_angle(&mut rng, *group, *lambda))
                            .collect()
                    }
                };
                StepTransform::Diagonal(gauge_diag(gauge_diags, &angles))
            }
            (ScheduleKind::TermOrdering, ScheduleData::TermOrdering { term_count }) => {
                let mut rng = rng_from(sub_seed(self.seed, "perm-step", k as u64));
                let mut perm: Vec<usize> = (0..*term_count).collect();
                // Fisher-Yates
                for i in (1..*term_count).rev() {
                    let j = rng.gen_range(0..=i);
                    perm.swap(i, j);
                }
                StepTransform::TermPermutation(perm)
            }
            _ => unreachable!("schedule kind/data mismatch"),
        }
    }

    /// The base transformation `C_0` for schedules of the form `C_k = C_0^k`.
    pub fn base_transform(&self) -> Option<StepTransform> {
        match (&self.kind, &self.data) {
            (ScheduleKind::HadamardDet, _) => {
                Some(StepTransform::Qubitwise(crate::models::pauli::hadamard()))
            }
            (ScheduleKind::U1Z, ScheduleData::U1Z { sz, base_phi })
                if self.mode == ScheduleMode::PowersOfC0 =>
            {
                let diag: Vec<C64> = sz
                    .iter()
                    .map(|&z| C64::new(0.0, -base_phi * z as f64).exp())
                    .collect();
                Some(StepTransform::Diagonal(diag))
            }
            (
                ScheduleKind::Gauge,
                ScheduleData::Gauge {
                    gauge_diags,
                    base_angles,
                    ..
                },
            ) if self.mode == ScheduleMode::UniformAngles => {
                Some(StepTransform::Diagonal(gauge_diag(gauge_diags, base_angles)))
            }
            (ScheduleKind::Identity, _) => Some(StepTransform::Identity),
            _ => None,
        }
    }

    /// Number of qubit factors used by qubitwise transforms.
    pub fn qubit_count(&self) -> usize {
        self.n_qubits
    }
}

fn draw_gauge_angle(rng: &mut impl Rng, group: GaugeGroup, lambda: usize) -> f64 {
    match group {
        GaugeGroup::U1 => rng.gen_range(0.0..std::f64::consts::TAU),
        GaugeGroup::Z2Lambda => {
            let m = rng.gen_range(0..(2 * lambda)) as f64;
            m * std::f64::consts::PI / lambda as f64
        }
    }
}

fn gauge_diag(gauge_diags: &[Vec<f64>], angles: &[f64]) -> Vec<C64> {
    let dim = gauge_diags[0].len();
    let mut phase = vec![0.0f64; dim];
    for (g, a) in gauge_diags.iter().zip(angles.iter()) {
        for (p, gv) in phase.iter_mut().zip(g.iter()) {
            *p += a * gv;
        }
    }
    phase.into_iter().map(|p| C64::new(0.0, -p).exp()).collect()
}

/// Haar-random SU(2) element from four standard normals (a normalized
/// quaternion), `W = q_0 I - i (q_1 X + q_2 Y + q_3 Z)`.
pub fn haar_su2(rng: &mut impl Rng) -> Operator {
    let q = loop {
        let mut q = [0.0f64; 4];
        for pair in q.chunks_mut(2) {
            let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
            let u2: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let radius = (-2.0 * u1.ln()).sqrt();
            pair[0] = radius * u2.cos();
            if pair.len() > 1 {
                pair[1] = radius * u2.sin();
            }
        }
        let norm = q.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            q.iter_mut().for_each(|x| *x /= norm);
            break q;
        }
    };
    Operator::from_rows(
        Layout::qubits(1),
        &[
            C64::new(q[0], -q[3]),
            C64::new(-q[2], -q[1]),
            C64::new(q[2], -q[1]),
            C64::new(q[0], q[3]),
        ],
    )
}

/// Distinct-eigenphase count `m`, inverse spectral gap `ξ`, and the spectral
/// projectors of a kick unitary.
#[derive(Clone, Debug)]
pub struct KickSpectrum {
    pub m: usize,
    /// `max_{μ≠ν} |sin((φ_μ - φ_ν)/2)|^{-1}`; undefined when `m = 1`.
    pub xi: Option<f64>,
    pub phases: Vec<f64>,
    pub projectors: Vec<Operator>,
}

/// Spectral analysis of a kick unitary with eigenphase clustering tolerance
/// `tol` (module default 1e-9).
pub fn kick_spectrum(c0: &Operator, tol: f64) -> Result<KickSpectrum, LinalgError> {
    let (phases, projectors) = eigphases_unitary(c0, tol)?;
    let xi = xi_from_phases(&phases);
    Ok(KickSpectrum {
        m: phases.len(),
        xi,
        phases,
        projectors,
    })
}

/// `ξ` recomputed from a clustered phase list; `None` when fewer than two.
pub fn xi_from_phases(phases: &[f64]) -> Option<f64> {
    if phases.len() < 2 {
        return None;
    }
    let mut min_gap = f64::INFINITY;
    for (i, a) in phases.iter().enumerate() {
        for b in phases.iter().skip(i + 1) {
            min_gap = min_gap.min(((a - b) / 2.0).sin().abs());
        }
    }
    Some(1.0 / min_gap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{commutator, spectral_norm};
    use crate::models::{build_random_heisenberg, pauli};
    use crate::rng::rng_from;

    #[test]
    fn identity_schedule() {
        let s = ProtectionSchedule::identity(5);
        for k in 1..=5 {
            assert!(matches!(s.materialize(k), StepTransform::Identity));
        }
    }

    #[test]
    fn haar_mean_conjugated_z_vanishes() {
        // E[W^dag Z W] = 0 componentwise
        let mut rng = rng_from(7);
        let mut acc = Operator::zeros(Layout::qubits(1));
        let samples = 10_000;
        for _ in 0..samples {
            let w = haar_su2(&mut rng);
            acc.add_assign(&w.dagger().mul(&pauli::z()).mul(&w));
        }
        let mean = acc.scale_real(1.0 / samples as f64);
        // components along X, Y, Z: tr(sigma mean)/2
        for sigma in [pauli::x(), pauli::y(), pauli::z()] {
            let comp = sigma.mul(&mean).trace().re / 2.0;
            assert!(comp.abs() <= 0.03, "component {comp}");
        }
    }

    #[test]
    fn haar_trace_second_moment() {
        // E[|tr W|^2] = 1 for Haar SU(2)
        let mut rng = rng_from(8);
        let samples = 100_000;
        let mut acc = 0.0;
        for _ in 0..samples {
            acc += haar_su2(&mut rng).trace().norm_sqr();
        }
        let mean = acc / samples as f64;
        assert!((mean - 1.0).abs() < 0.05, "second moment {mean}");
    }

    #[test]
    fn haar_schedule_commutes_with_heisenberg() {
        let m = build_random_heisenberg(3, 4).unwrap();
        let h = m.total();
        let s = ProtectionSchedule::haar_su2(3, 8, 11);
        for k in 1..=8 {
            let c = s
                .materialize(k)
                .materialize_dense(m.layout(), &[0, 1, 2])
                .unwrap();
            assert!(c.unitarity_defect() <= 1e-10);
            assert!(commutator(&c, &h).unwrap().max_abs() <= 1e-12);
        }
    }

    #[test]
    fn schedules_are_deterministic() {
        let a = ProtectionSchedule::haar_su2(2, 4, 9);
        let b = ProtectionSchedule::haar_su2(2, 4, 9);
        for k in 1..=4 {
            match (a.materialize(k), b.materialize(k)) {
                (StepTransform::Qubitwise(x), StepTransform::Qubitwise(y)) => {
                    assert!(x.sub(&y).max_abs() == 0.0);
                }
                _ => panic!("expected qubitwise"),
            }
        }
    }

    #[test]
    fn hadamard_conjugation_table() {
        let h = pauli::hadamard();
        let conj = |p: &Operator| h.mul(p).mul(&h);
        assert!(conj(&pauli::x()).sub(&pauli::z()).max_abs() < 1e-15);
        assert!(conj(&pauli::z()).sub(&pauli::x()).max_abs() < 1e-15);
        assert!(conj(&pauli::y()).add(&pauli::y()).max_abs() < 1e-15);
    }

    #[test]
    fn hadamard_schedule_alternates_and_is_powers_of_c0() {
        let s = ProtectionSchedule::hadamard_det(2, 6);
        let layout = Layout::qubits(2);
        let qf = [0, 1];
        let c0 = s
            .base_transform()
            .unwrap()
            .materialize_dense(&layout, &qf)
            .unwrap();
        let mut power = Operator::identity(layout.clone());
        for k in 1..=6 {
            power = c0.mul(&power);
            let ck = s.materialize(k).materialize_dense(&layout, &qf).unwrap();
            assert!(
                spectral_norm(&ck.sub(&power)) <= 1e-9,
                "C_k = C_0^k at k={k}"
            );
        }
    }

    #[test]
    fn u1z_powers_mode_is_powers_of_c0() {
        let s = ProtectionSchedule::u1_z(3, 5, 21, ScheduleMode::PowersOfC0).unwrap();
        let layout = Layout::qubits(3);
        let qf = [0, 1, 2];
        let c0 = s
            .base_transform()
            .unwrap()
            .materialize_dense(&layout, &qf)
            .unwrap();
        let mut power = Operator::identity(layout.clone());
        for k in 1..=5 {
            power = c0.mul(&power);
            let ck = s.materialize(k).materialize_dense(&layout, &qf).unwrap();
            assert!(spectral_norm(&ck.sub(&power)) <= 1e-9);
        }
        // successor relation C_{k+1} = C_0 C_k
        for k in 1..5 {
            let ck = s.materialize(k).materialize_dense(&layout, &qf).unwrap();
            let ck1 = s.materialize(k + 1).materialize_dense(&layout, &qf).unwrap();
            assert!(spectral_norm(&ck1.sub(&c0.mul(&ck))) <= 1e-9);
        }
    }

    #[test]
    fn u1z_quarter_turn_gives_global_z() {
        // phi = pi/2: e^{-i(pi/2)Z} = -i Z, so C = Z^{(x)n} up to global phase
        let n = 3;
        let layout = Layout::qubits(n);
        let sz: Vec<i64> = (0..8)
            .map(|b: usize| n as i64 - 2 * (b.count_ones() as i64))
            .collect();
        let diag: Vec<C64> = sz
            .iter()
            .map(|&z| C64::new(0.0, -std::f64::consts::FRAC_PI_2 * z as f64).exp())
            .collect();
        let c = Operator::from_diag(layout.clone(), &diag);
        let mut zn = pauli::z();
        for _ in 1..n {
            zn = kron(&zn, &pauli::z()).unwrap();
        }
        // strip the global phase by comparing c * conj(phase of first entry)
        let phase = c.get(0, 0) / zn.get(0, 0);
        assert!((phase.norm() - 1.0).abs() < 1e-12);
        assert!(c.sub(&zn.scale(phase)).max_abs() < 1e-12);
    }

    #[test]
    fn random_ordering_uniform_over_permutations() {
        // chi-squared over the 6 orderings of 3 terms, 6000 draws
        let draws = 6000;
        let s = ProtectionSchedule::random_ordering(3, draws, 123);
        let mut counts = std::collections::HashMap::new();
        for k in 1..=draws {
            match s.materialize(k) {
                StepTransform::TermPermutation(p) => *counts.entry(p).or_insert(0usize) += 1,
                _ => panic!("expected permutation"),
            }
        }
        assert_eq!(counts.len(), 6);
        let expected = draws as f64 / 6.0;
        let chi2: f64 = counts
            .values()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        // chi^2_5 critical value at p = 0.01
        assert!(chi2 < 15.086, "chi2 = {chi2}");
    }

    #[test]
    fn kick_spectrum_two_phase_formula() {
        let c0 = Operator::from_diag(
            Layout::single(2),
            &[C64::new(1.0, 0.0), C64::new(0.0, -std::f64::consts::FRAC_PI_2).exp()],
        );
        let ks = kick_spectrum(&c0, 1e-9).unwrap();
        assert_eq!(ks.m, 2);
        let expect = 1.0 / (std::f64::consts::FRAC_PI_4).sin();
        assert!((ks.xi.unwrap() - expect).abs() < 1e-12);
        assert!((ks.xi.unwrap() - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn kick_spectrum_hadamard_pair() {
        let u = kron(&pauli::hadamard(), &pauli::hadamard()).unwrap();
        let ks = kick_spectrum(&u, 1e-9).unwrap();
        assert_eq!(ks.m, 2);
        assert!((ks.xi.unwrap() - 1.0).abs() < 1e-12); // phases 0 and pi
    }

    #[test]
    fn kick_spectrum_degenerate_m1() {
        let ks = kick_spectrum(&Operator::identity(Layout::qubits(1)), 1e-9).unwrap();
        assert_eq!(ks.m, 1);
        assert!(ks.xi.is_none());
    }

    #[test]
    fn kick_spectrum_gauge_generator() {
        // C_0 = exp(-i (pi/lambda) G_1) at lambda = 4: phases are multiples of
        // pi/4 and xi = 1/sin(pi/8) when adjacent integers appear in the
        // spectrum of G_1
        let m = crate::models::build_schwinger(2, 4, 0.6, 0.1).unwrap();
        let g = crate::models::gauge_operators(&m).unwrap().remove(0);
        let angle = std::f64::consts::PI / 4.0;
        let diag: Vec<C64> = g
            .diag()
            .iter()
            .map(|&v| C64::new(0.0, -angle * v).exp())
            .collect();
        let c0 = Operator::from_diag(m.layout().clone(), &diag);
        let ks = kick_spectrum(&c0, 1e-9).unwrap();
        // oracle: enumerate the distinct integer values of G_1 directly
        let mut values: Vec<i64> = g.diag().iter().map(|&v| v as i64).collect();
        values.sort_unstable();
        values.dedup();
        let phases_oracle: Vec<f64> = {
            let mut ps: Vec<f64> = values
                .iter()
                .map(|&v| {
                    let mut p = (-angle * v as f64) % std::f64::consts::TAU;
                    if p <= -std::f64::consts::PI {
                        p += std::f64::consts::TAU;
                    } else if p > std::f64::consts::PI {
                        p -= std::f64::consts::TAU;
                    }
                    p
                })
                .collect();
            ps.sort_by(|a, b| a.partial_cmp(b).unwrap());
            ps.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
            ps
        };
        assert_eq!(ks.m, phases_oracle.len());
        let xi_oracle = xi_from_phases(&phases_oracle).unwrap();
        assert!((ks.xi.unwrap() - xi_oracle).abs() < 1e-9);
        assert!((xi_oracle - 1.0 / (std::f64::consts::PI / 8.0).sin()).abs() < 1e-9);
        for p in &ks.phases {
            let ratio = p / (std::f64::consts::FRAC_PI_4);
            assert!((ratio - ratio.round()).abs() < 1e-9, "phase {p} not k*pi/4");
        }
    }

    #[test]
    fn gauge_uniform_schedule_is_powers_of_base() {
        let m = crate::models::build_schwinger(2, 2, 0.6, 0.1).unwrap();
        let s = ProtectionSchedule::gauge(&m, 4, GaugeGroup::Z2Lambda, ScheduleMode::UniformAngles, 5)
            .unwrap();
        let layout = m.layout().clone();
        let c0 = s.base_transform().unwrap().materialize_dense(&layout, &[]).unwrap();
        let mut power = Operator::identity(layout.clone());
        for k in 1..=4 {
            power = c0.mul(&power);
            let ck = s.materialize(k).materialize_dense(&layout, &[]).unwrap();
            assert!(spectral_norm(&ck.sub(&power)) <= 1e-9);
        }
    }

    #[test]
    fn gauge_z2lambda_commutes_with_truncated_h() {
        let m = crate::models::build_schwinger(3, 2, 0.6, 0.1).unwrap();
        let h = m.total();
        let s = ProtectionSchedule::gauge(&m, 6, GaugeGroup::Z2Lambda, ScheduleMode::Independent, 3)
            .unwrap();
        for k in 1..=6 {
            let c = s.materialize(k).materialize_dense(m.layout(), &[]).unwrap();
            assert!(spectral_norm(&commutator(&c, &h).unwrap()) <= 1e-10);
        }
    }
}
