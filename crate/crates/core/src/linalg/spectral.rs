//! Spectral operations: Hermitian eigendecomposition, matrix exponential,
//! principal logarithm of a unitary, eigenphase clustering, spectral norm.

use super::{matmul_into, LinalgError, Operator, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const HERMITICITY_TOL: f64 = 1e-10;
const UNITARITY_TOL: f64 = 1e-10;
/// Eigenvalue-gap floor used when splitting near-degenerate subspaces of a
/// unitary; spectral reconstruction stays within ~this of the input.
const DEGENERACY_FLOOR: f64 = 1e-8;

/// Eigendecomposition of a Hermitian operator, reusable across many
/// exponentials `exp(-iHt)` with different `t`.
pub struct HermitianEig {
    values: Vec<f64>,
    /// Columns are orthonormal eigenvectors.
    vectors: Operator,
}

impl HermitianEig {
    pub fn new(h: &Operator) -> Result<Self, LinalgError> {
        let defect = h.hermiticity_defect();
        if defect > HERMITICITY_TOL * h.max_abs().max(1.0) {
            return Err(LinalgError::NotHermitian(defect));
        }
        let eig = h
            .as_faer()
            .self_adjoint_eigen(faer::Side::Lower)
            .map_err(|_| LinalgError::EigNonConvergence)?;
        let dim = h.dim();
        let u = eig.U();
        let s = eig.S();
        let values: Vec<f64> = (0..dim).map(|i| s[i].re).collect();
        let vectors = Operator::from_fn(h.layout().clone(), |i, j| u[(i, j)]);
        Ok(HermitianEig { values, vectors })
    }

    /// Eigenvalues in nondecreasing order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Column-eigenvector matrix.
    pub fn vectors(&self) -> &Operator {
        &self.vectors
    }

    /// `exp(-i H t)` rebuilt as `V exp(-i λ t) V^dag`.
    pub fn expm(&self, t: f64) -> Operator {
        self.apply_phase_fn(|lambda| {
            let (s, c) = (-lambda * t).sin_cos();
            C64::new(c, s)
        })
    }

    /// `V f(λ) V^dag` for a scalar spectral function `f`.
    pub fn apply_phase_fn(&self, f: impl Fn(f64) -> C64) -> Operator {
        let dim = self.vectors.dim();
        let v = &self.vectors;
        // scaled = V * diag(f(λ))
        let mut scaled = v.clone();
        for i in 0..dim {
            for j in 0..dim {
                let z = scaled.get(i, j) * f(self.values[j]);
                scaled.set(i, j, z);
            }
        }
        let vd = v.dagger();
        let mut out = Operator::zeros(v.layout().clone());
        matmul_into(&mut out, &scaled, &vd);
        out
    }
}

/// `exp(-i h t)` for Hermitian `h`, by full eigendecomposition.
pub fn expm_hermitian(h: &Operator, t: f64) -> Result<Operator, LinalgError> {
    Ok(HermitianEig::new(h)?.expm(t))
}

/// Spectral norm (largest singular value), to relative accuracy 1e-9.
///
/// Power iteration on `a^dag a` from a fixed-seed random complex start; the
/// geometric tail of the Rayleigh-quotient sequence is estimated Aitken-style
/// and iteration stops once the projected tail is below tolerance. Falls back
/// to a full SVD if 10 000 iterations stagnate without that certificate.
pub fn spectral_norm(a: &Operator) -> f64 {
    let dim = a.dim();
    if dim == 0 {
        return 0.0;
    }
    let scale = a.max_abs();
    if scale == 0.0 {
        return 0.0;
    }
    if dim == 1 {
        return scale;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_57ec);
    let mut v: Vec<C64> = (0..dim)
        .map(|_| C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
        .collect();
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|z| *z /= n);

    let mut lambda_prev = 0.0f64;
    let mut delta_prev = f64::INFINITY;
    for _ in 0..10_000 {
        let w = a.matvec(&v);
        let lambda: f64 = w.iter().map(|z| z.norm_sqr()).sum();
        let mut u = a.matvec_adjoint(&w);
        let un = u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if un == 0.0 {
            // v landed in the kernel of a^dag a
            return lambda.sqrt();
        }
        u.iter_mut().for_each(|z| *z /= un);
        v = u;

        let delta = lambda - lambda_prev;
        if lambda > 0.0 && delta.abs() <= 1e-13 * lambda {
            // projected geometric tail: delta * q / (1 - q)
            let q = if delta_prev.abs() > 0.0 {
                (delta / delta_prev).clamp(0.0, 0.999)
            } else {
                0.0
            };
            let tail = delta.abs() * q / (1.0 - q);
            if tail <= 1e-10 * lambda {
                return lambda.sqrt();
            }
        }
        delta_prev = delta;
        lambda_prev = lambda;
    }
    // stagnated: full singular value decomposition
    svd_norm(a)
}

fn svd_norm(a: &Operator) -> f64 {
    match a.as_faer().svd() {
        Ok(svd) => svd.S()[0].re,
        Err(_) => a.frobenius_norm(), // crude upper bound; svd failure is not expected
    }
}

/// Full singular values, largest first. Test oracle and fallback path.
pub fn singular_values(a: &Operator) -> Vec<f64> {
    match a.as_faer().svd() {
        Ok(svd) => (0..a.dim()).map(|i| svd.S()[i].re).collect(),
        Err(_) => vec![a.frobenius_norm()],
    }
}

/// Eigendecomposition of a unitary: per-column eigenphases in `(-pi, pi]`
/// plus an orthonormal eigenvector matrix.
///
/// A unitary is normal, so it is diagonalized by simultaneously diagonalizing
/// the commuting Hermitian pair `(U + U^dag)/2` and `(U - U^dag)/(2i)`:
/// eigenspaces of the first are refined by the second, and each final
/// column's phase is read off the complex Rayleigh quotient `v^dag U v`.
pub struct UnitaryEigen {
    /// Per-column phases, not clustered.
    pub phases: Vec<f64>,
    /// Columns are orthonormal eigenvectors, aligned with `phases`.
    pub vectors: Operator,
}

impl UnitaryEigen {
    pub fn new(u: &Operator) -> Result<Self, LinalgError> {
        let defect = u.unitarity_defect();
        if defect > UNITARITY_TOL {
            return Err(LinalgError::NotUnitary(defect));
        }
        let dim = u.dim();
        let ud = u.dagger();
        let hr = u.add(&ud).scale_real(0.5);
        let hi = u.sub(&ud).scale(C64::new(0.0, -0.5));

        let eig_r = HermitianEig::new(&hr)?;
        let mut vectors = eig_r.vectors().clone();

        // Refine each near-degenerate cos-cluster with the sin part.
        let vals = eig_r.values();
        let mut start = 0;
        while start < dim {
            let mut end = start + 1;
            while end < dim && vals[end] - vals[end - 1] <= DEGENERACY_FLOOR {
                end += 1;
            }
            let width = end - start;
            if width > 1 {
                refine_block(&mut vectors, &hi, start, width)?;
            }
            start = end;
        }

        // Phases from complex Rayleigh quotients of the final columns.
        let mut phases = Vec::with_capacity(dim);
        for j in 0..dim {
            let col: Vec<C64> = (0..dim).map(|i| vectors.get(i, j)).collect();
            let w = u.matvec(&col);
            let z: C64 = col.iter().zip(w.iter()).map(|(a, b)| a.conj() * b).sum();
            phases.push(z.im.atan2(z.re));
        }
        Ok(UnitaryEigen { phases, vectors })
    }
}

/// Diagonalize `v^dag hi v` on the column block `[start, start+width)` and
/// rotate those columns by the small eigenbasis.
fn refine_block(
    vectors: &mut Operator,
    hi: &Operator,
    start: usize,
    width: usize,
) -> Result<(), LinalgError> {
    let dim = vectors.dim();
    // columns of the block
    let cols: Vec<Vec<C64>> = (0..width)
        .map(|b| (0..dim).map(|i| vectors.get(i, start + b)).collect())
        .collect();
    let hi_cols: Vec<Vec<C64>> = cols.iter().map(|c| hi.matvec(c)).collect();
    let block = Operator::from_fn(super::Layout::single(width), |a, b| {
        cols[a]
            .iter()
            .zip(hi_cols[b].iter())
            .map(|(x, y)| x.conj() * y)
            .sum()
    });
    let sub = HermitianEig::new(&block)?;
    let w = sub.vectors();
    for i in 0..dim {
        let mut rot = vec![C64::new(0.0, 0.0); width];
        for (b, r) in rot.iter_mut().enumerate() {
            for a in 0..width {
                *r += cols[a][i] * w.get(a, b);
            }
        }
        for (b, r) in rot.into_iter().enumerate() {
            vectors.set(i, start + b, r);
        }
    }
    Ok(())
}

/// Principal logarithm of a unitary: the anti-Hermitian `L` with
/// `exp(L) = u` and all eigenphases strictly inside `(-pi, pi)`.
///
/// An eigenphase within 1e-9 of the branch cut at `+-pi` is rejected.
pub fn principal_log_unitary(u: &Operator) -> Result<Operator, LinalgError> {
    let eig = UnitaryEigen::new(u)?;
    for &phi in &eig.phases {
        let margin = std::f64::consts::PI - phi.abs();
        if margin <= 1e-9 {
            return Err(LinalgError::BranchAmbiguity(margin.max(0.0)));
        }
    }
    let dim = u.dim();
    let v = &eig.vectors;
    let mut scaled = v.clone();
    for i in 0..dim {
        for j in 0..dim {
            let z = scaled.get(i, j) * C64::new(0.0, eig.phases[j]);
            scaled.set(i, j, z);
        }
    }
    let vd = v.dagger();
    let mut out = Operator::zeros(u.layout().clone());
    matmul_into(&mut out, &scaled, &vd);
    Ok(out)
}

/// Clustered eigenphases of a unitary and the projectors onto each cluster.
///
/// Phases are clustered on the circle: sorted, split at gaps larger than
/// `cluster_tol`, with the wrap-around gap across `+-pi` treated the same.
/// Returns `(phases, projectors)` with one representative phase per cluster.
pub fn eigphases_unitary(
    u: &Operator,
    cluster_tol: f64,
) -> Result<(Vec<f64>, Vec<Operator>), LinalgError> {
    let eig = UnitaryEigen::new(u)?;
    let dim = u.dim();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.phases[a].partial_cmp(&eig.phases[b]).unwrap());

    // cluster boundaries on the sorted circle
    let tol = cluster_tol.max(0.0);
    let sorted: Vec<f64> = order.iter().map(|&j| eig.phases[j]).collect();
    let mut breaks = Vec::new(); // index i: gap between sorted[i-1] and sorted[i]
    for i in 1..dim {
        if sorted[i] - sorted[i - 1] > tol {
            breaks.push(i);
        }
    }
    let wrap_gap = (sorted[0] + 2.0 * std::f64::consts::PI) - sorted[dim - 1];
    let wrapped = dim > 1 && wrap_gap <= tol && !breaks.is_empty();

    // member lists per cluster, merging the first and last runs if the circle wraps
    let mut runs: Vec<Vec<usize>> = Vec::new();
    let mut begin = 0;
    for &b in &breaks {
        runs.push(order[begin..b].to_vec());
        begin = b;
    }
    runs.push(order[begin..].to_vec());
    if wrapped && runs.len() > 1 {
        let last = runs.pop().unwrap();
        runs[0].extend(last);
    }

    let mut phases = Vec::with_capacity(runs.len());
    let mut projectors = Vec::with_capacity(runs.len());
    for members in &runs {
        // circular mean of the member phases
        let (mut sx, mut sy) = (0.0f64, 0.0f64);
        for &j in members {
            sx += eig.phases[j].cos();
            sy += eig.phases[j].sin();
        }
        let mut rep = sy.atan2(sx);
        if rep <= -std::f64::consts::PI {
            rep = std::f64::consts::PI;
        }
        phases.push(rep);

        let mut p = Operator::zeros(u.layout().clone());
        for &j in members {
            for a in 0..dim {
                let va = eig.vectors.get(a, j);
                for b in 0..dim {
                    let add = va * eig.vectors.get(b, j).conj();
                    let cur = p.get(a, b);
                    p.set(a, b, cur + add);
                }
            }
        }
        projectors.push(p);
    }
    Ok((phases, projectors))
}
