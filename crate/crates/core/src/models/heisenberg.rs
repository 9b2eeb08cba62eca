//! Heisenberg-interaction models.
//!
//! Both builders group the Hamiltonian into three mutually-commuting-inside
//! terms `[H_X, H_Y, H_Z]`; for the disordered chain the on-site field is
//! folded into `H_Z`, which stays diagonal.

use super::{
    pauli, Hilbert, HamiltonianModel, LocalFactor, ModelError, ModelMeta, Term, TermBody,
};
use crate::linalg::kron;
use crate::rng::rng_from;
use rand::Rng;

const N_MIN_RANDOM: usize = 2;
const N_MIN_MBL: usize = 3;
const N_MAX: usize = 13;

/// All-pairs homogeneous couplings `J_ij ~ Uniform[-1, 1]`, drawn in fixed
/// lexicographic `(i < j)` order from `seed`; no external field.
///
/// Terms come out in the order `[H_X, H_Y, H_Z]` with
/// `H_A = Σ_{i<j} J_ij A_i A_j`.
pub fn build_random_heisenberg(n: usize, seed: u64) -> Result<HamiltonianModel, ModelError> {
    if !(N_MIN_RANDOM..=N_MAX).contains(&n) {
        return Err(ModelError::SizeOutOfRange(n, N_MIN_RANDOM, N_MAX));
    }
    let mut rng = rng_from(seed);
    let mut couplings = Vec::with_capacity(n * (n - 1) / 2);
    let mut pairs = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n - 1 {
        for j in i + 1..n {
            couplings.push(rng.gen_range(-1.0..1.0));
            pairs.push((i, j));
        }
    }

    let hilbert = Hilbert::qubits(n);
    let xx = kron(&pauli::x(), &pauli::x())?;
    let yy = kron(&pauli::y(), &pauli::y())?;

    let pair_term = |small: &crate::linalg::Operator, label: &str| Term {
        label: label.into(),
        body: TermBody::Factors(
            pairs
                .iter()
                .zip(couplings.iter())
                .map(|(&(i, j), &jij)| LocalFactor {
                    support: vec![i, j],
                    matrix: small.scale_real(jij),
                })
                .collect(),
        ),
    };

    // H_Z is diagonal: accumulate its diagonal directly
    let dim = hilbert.dim();
    let mut zdiag = vec![0.0f64; dim];
    for (b, v) in zdiag.iter_mut().enumerate() {
        for (&(i, j), &jij) in pairs.iter().zip(couplings.iter()) {
            let zi = 1.0 - 2.0 * ((b >> (n - 1 - i)) & 1) as f64;
            let zj = 1.0 - 2.0 * ((b >> (n - 1 - j)) & 1) as f64;
            *v += jij * zi * zj;
        }
    }

    let terms = vec![
        pair_term(&xx, "H_X"),
        pair_term(&yy, "H_Y"),
        Term {
            label: "H_Z".into(),
            body: TermBody::Diagonal(zdiag),
        },
    ];

    Ok(HamiltonianModel {
        hilbert,
        terms,
        meta: ModelMeta {
            name: "random_heisenberg".into(),
            n,
            seed: Some(seed),
            couplings_j: Some(couplings),
            ..ModelMeta::default()
        },
    })
}

/// Nearest-neighbor homogeneous chain (`J = 1`, periodic boundary) with an
/// on-site field `h_i ~ Uniform[-h, h]`; terms `[H_X, H_Y, H_Z + Σ h_i Z_i]`.
pub fn build_mbl_heisenberg(n: usize, h: f64, seed: u64) -> Result<HamiltonianModel, ModelError> {
    if !(N_MIN_MBL..=N_MAX).contains(&n) {
        return Err(ModelError::SizeOutOfRange(n, N_MIN_MBL, N_MAX));
    }
    if h < 0.0 {
        return Err(ModelError::InvalidParam(format!(
            "disorder strength must be nonnegative, got {h}"
        )));
    }
    let mut rng = rng_from(seed);
    let fields: Vec<f64> = (0..n)
        .map(|_| {
            if h == 0.0 {
                0.0
            } else {
                rng.gen_range(-h..h)
            }
        })
        .collect();

    let hilbert = Hilbert::qubits(n);
    // periodic bonds with ascending support; the wrap bond (n-1, 0) is stored
    // as [0, n-1], which is safe because A(x)A is swap-symmetric
    let bonds: Vec<(usize, usize)> = (0..n)
        .map(|i| {
            let j = (i + 1) % n;
            (i.min(j), i.max(j))
        })
        .collect();

    let xx = kron(&pauli::x(), &pauli::x())?;
    let yy = kron(&pauli::y(), &pauli::y())?;
    let bond_term = |small: &crate::linalg::Operator, label: &str| Term {
        label: label.into(),
        body: TermBody::Factors(
            bonds
                .iter()
                .map(|&(i, j)| LocalFactor {
                    support: vec![i, j],
                    matrix: small.clone(),
                })
                .collect(),
        ),
    };

    let dim = hilbert.dim();
    let mut zdiag = vec![0.0f64; dim];
    for (b, v) in zdiag.iter_mut().enumerate() {
        let z = |q: usize| 1.0 - 2.0 * ((b >> (n - 1 - q)) & 1) as f64;
        for &(i, j) in &bonds {
            *v += z(i) * z(j);
        }
        for (q, hi) in fields.iter().enumerate() {
            *v += hi * z(q);
        }
    }

    let terms = vec![
        bond_term(&xx, "H_X"),
        bond_term(&yy, "H_Y"),
        Term {
            label: "H_Z".into(),
            body: TermBody::Diagonal(zdiag),
        },
    ];

    Ok(HamiltonianModel {
        hilbert,
        terms,
        meta: ModelMeta {
            name: "mbl_heisenberg".into(),
            n,
            seed: Some(seed),
            disorder_h: Some(h),
            fields_h: Some(fields),
            ..ModelMeta::default()
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{commutator, expm_hermitian, spectral_norm, HermitianEig, Operator};
    use crate::models::embed_local;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn two_qubit_terms_commute_pairwise() {
        let m = build_random_heisenberg(2, 3).unwrap();
        let mats = m.term_matrices();
        for i in 0..3 {
            for j in i + 1..3 {
                let c = commutator(&mats[i], &mats[j]).unwrap();
                assert!(spectral_norm(&c) < 1e-13, "terms {i},{j}");
            }
        }
    }

    #[test]
    fn four_qubit_total_hermitian_traceless() {
        let m = build_random_heisenberg(4, 11).unwrap();
        let h = m.total();
        assert_eq!(h.dim(), 16);
        assert!(h.hermiticity_defect() < 1e-14);
        assert!(h.trace().norm() < 1e-12);
    }

    #[test]
    fn seed_determines_model() {
        let a = build_random_heisenberg(4, 9).unwrap();
        let b = build_random_heisenberg(4, 9).unwrap();
        assert_eq!(a.meta.couplings_j, b.meta.couplings_j);
        assert!(a.total().sub(&b.total()).max_abs() == 0.0);
    }

    #[test]
    fn size_range_enforced() {
        assert!(build_random_heisenberg(1, 0).is_err());
        assert!(build_random_heisenberg(14, 0).is_err());
        assert!(build_mbl_heisenberg(2, 1.0, 0).is_err());
        assert!(build_mbl_heisenberg(3, -1.0, 0).is_err());
    }

    #[test]
    fn term_sum_matches_total() {
        for m in [
            build_random_heisenberg(3, 5).unwrap(),
            build_mbl_heisenberg(4, 2.0, 5).unwrap(),
        ] {
            let mut sum = Operator::zeros(m.layout().clone());
            for t in m.term_matrices() {
                sum.add_assign(&t);
            }
            assert!(sum.sub(&m.total()).max_abs() < 1e-12);
        }
    }

    #[test]
    fn global_su2_invariance() {
        // [W^{(x)n}, H] = 0 for random single-qubit W
        let m = build_random_heisenberg(3, 21).unwrap();
        let h = m.total();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..20 {
            let w = crate::symmetry::haar_su2(&mut rng);
            let mut c = w.clone();
            for _ in 1..3 {
                c = crate::linalg::kron(&c, &w).unwrap();
            }
            let comm = commutator(&c, &h).unwrap();
            assert!(comm.max_abs() < 1e-12, "defect {}", comm.max_abs());
        }
    }

    #[test]
    fn u1_invariance_with_and_without_disorder() {
        for h in [0.0, 2.0] {
            let m = build_mbl_heisenberg(4, h, 31).unwrap();
            let total = m.total();
            // S_z = sum Z_i as a diagonal
            let layout = m.layout().clone();
            let mut sz = Operator::zeros(layout.clone());
            for q in 0..4 {
                sz.add_assign(&embed_local(&layout, &[q], &pauli::z()));
            }
            assert!(spectral_norm(&commutator(&sz, &total).unwrap()) < 1e-12);
            let mut rng = ChaCha8Rng::seed_from_u64(1);
            for _ in 0..20 {
                let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                let c = expm_hermitian(&sz, phi).unwrap();
                assert!(spectral_norm(&commutator(&c, &total).unwrap()) <= 1e-12);
            }
        }
    }

    #[test]
    fn mbl_ground_energy_two_routes() {
        // eigensolver route vs matrix-free Rayleigh quotient of the eigvec
        let m = build_mbl_heisenberg(4, 2.0, 17).unwrap();
        let h = m.total();
        let eig = HermitianEig::new(&h).unwrap();
        let e0 = eig.values()[0];
        let dim = m.dim();
        let gs: Vec<crate::linalg::C64> =
            (0..dim).map(|i| eig.vectors().get(i, 0)).collect();
        let s = crate::linalg::StateVec::new(m.layout().clone(), gs);
        let hs = m.apply_total(&s);
        let rayleigh = s.inner(&hs).re;
        assert!(
            (rayleigh - e0).abs() < 1e-10,
            "rayleigh {rayleigh} vs eig {e0}"
        );
    }
}
