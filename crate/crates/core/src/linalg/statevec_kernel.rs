//! Local-operator application on dense state vectors by tensor-index
//! contraction.
//!
//! A local operator acts on a subset of factors (`support`, ascending factor
//! indices) with a small `D x D` matrix, `D` the product of the supported
//! local dimensions. Contiguous supports take a blocked fast path that walks
//! unit-stride slices; arbitrary supports fall back to a gather/scatter over
//! precomputed strides.

use super::{Layout, C64};

/// Precomputed index plan for applying a small matrix on `support`.
pub struct LocalPlan {
    support: Vec<usize>,
    /// Strides (in amplitudes) of each supported factor.
    strides: Vec<usize>,
    /// Local dims of each supported factor.
    dims: Vec<usize>,
    /// Product of supported dims.
    block: usize,
    /// Base offsets enumerating the non-support configurations.
    rest_offsets: Vec<usize>,
    /// Offsets of the block entries relative to a base offset.
    local_offsets: Vec<usize>,
    /// Contiguous fast path: support occupies adjacent factors.
    contiguous: Option<Contig>,
}

struct Contig {
    outer: usize,
    inner: usize,
}

impl LocalPlan {
    pub fn new(layout: &Layout, support: &[usize]) -> Self {
        let factors = layout.factors();
        debug_assert!(support.windows(2).all(|w| w[0] < w[1]));
        let dims: Vec<usize> = support.iter().map(|&f| factors[f]).collect();
        let strides: Vec<usize> = support.iter().map(|&f| layout.stride(f)).collect();
        let block: usize = dims.iter().product();
        let dim = layout.dim();

        let contiguous = if support.windows(2).all(|w| w[1] == w[0] + 1) {
            let inner = layout.stride(*support.last().unwrap());
            let outer = dim / (block * inner);
            Some(Contig { outer, inner })
        } else {
            None
        };

        // local offsets: mixed-radix walk over supported digits
        let mut local_offsets = Vec::with_capacity(block);
        for b in 0..block {
            let mut rem = b;
            let mut off = 0;
            for k in (0..dims.len()).rev() {
                off += (rem % dims[k]) * strides[k];
                rem /= dims[k];
            }
            local_offsets.push(off);
        }

        // base offsets: every index whose supported digits are all zero
        let mut rest_offsets = Vec::with_capacity(dim / block);
        if contiguous.is_none() {
            'outer: for idx in 0..dim {
                let mut rem = idx;
                for (f, &d) in factors.iter().enumerate() {
                    let stride = layout.stride(f);
                    let digit = (rem / stride) % d;
                    if support.contains(&f) && digit != 0 {
                        continue 'outer;
                    }
                    rem %= stride * d;
                }
                rest_offsets.push(idx);
            }
        }

        LocalPlan {
            support: support.to_vec(),
            strides,
            dims,
            block,
            rest_offsets,
            local_offsets,
            contiguous,
        }
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn block_dim(&self) -> usize {
        self.block
    }

    /// In-place `amps <- M_local |amps>` with `matrix` row-major `block x block`.
    pub fn apply(&self, amps: &mut [C64], matrix: &[C64], scratch: &mut Vec<C64>) {
        debug_assert_eq!(matrix.len(), self.block * self.block);
        match &self.contiguous {
            Some(c) => apply_contiguous(amps, matrix, self.block, c.outer, c.inner, scratch),
            None => self.apply_strided(amps, matrix, scratch),
        }
    }

    /// Accumulate `out += M_local |amps>` without modifying `amps`.
    pub fn accumulate(&self, amps: &[C64], matrix: &[C64], out: &mut [C64]) {
        debug_assert_eq!(matrix.len(), self.block * self.block);
        let d = self.block;
        let mut gathered = vec![C64::new(0.0, 0.0); d];
        match &self.contiguous {
            Some(c) => {
                for o in 0..c.outer {
                    let base = o * d * c.inner;
                    for x in 0..c.inner {
                        for (b, g) in gathered.iter_mut().enumerate() {
                            *g = amps[base + b * c.inner + x];
                        }
                        for bp in 0..d {
                            let row = &matrix[bp * d..(bp + 1) * d];
                            let mut acc = C64::new(0.0, 0.0);
                            for (m, g) in row.iter().zip(gathered.iter()) {
                                acc += m * g;
                            }
                            out[base + bp * c.inner + x] += acc;
                        }
                    }
                }
            }
            None => {
                for &base in &self.rest_offsets {
                    for (b, g) in gathered.iter_mut().enumerate() {
                        *g = amps[base + self.local_offsets[b]];
                    }
                    for bp in 0..d {
                        let row = &matrix[bp * d..(bp + 1) * d];
                        let mut acc = C64::new(0.0, 0.0);
                        for (m, g) in row.iter().zip(gathered.iter()) {
                            acc += m * g;
                        }
                        out[base + self.local_offsets[bp]] += acc;
                    }
                }
            }
        }
    }

    fn apply_strided(&self, amps: &mut [C64], matrix: &[C64], scratch: &mut Vec<C64>) {
        let d = self.block;
        scratch.clear();
        scratch.resize(d, C64::new(0.0, 0.0));
        let _ = &self.dims; // dims participate via precomputed offsets
        for &base in &self.rest_offsets {
            for (b, g) in scratch.iter_mut().enumerate() {
                *g = amps[base + self.local_offsets[b]];
            }
            for bp in 0..d {
                let row = &matrix[bp * d..(bp + 1) * d];
                let mut acc = C64::new(0.0, 0.0);
                for (m, g) in row.iter().zip(scratch.iter()) {
                    acc += m * g;
                }
                amps[base + self.local_offsets[bp]] = acc;
            }
        }
    }
}

/// Contiguous-support kernel: the state reshapes to `(outer, block, inner)`
/// and the matrix contracts the middle axis. The inner loop is unit-stride.
fn apply_contiguous(
    amps: &mut [C64],
    matrix: &[C64],
    d: usize,
    outer: usize,
    inner: usize,
    scratch: &mut Vec<C64>,
) {
    if inner == 1 {
        // blocks of d contiguous amplitudes: plain matvec per block
        scratch.clear();
        scratch.resize(d, C64::new(0.0, 0.0));
        for o in 0..outer {
            let blk = &mut amps[o * d..(o + 1) * d];
            scratch.copy_from_slice(blk);
            for bp in 0..d {
                let row = &matrix[bp * d..(bp + 1) * d];
                let mut acc = C64::new(0.0, 0.0);
                for (m, g) in row.iter().zip(scratch.iter()) {
                    acc += m * g;
                }
                blk[bp] = acc;
            }
        }
    } else {
        // out[b', x] = sum_b M[b', b] in[b, x]: axpy over the inner axis
        scratch.clear();
        scratch.resize(d * inner, C64::new(0.0, 0.0));
        for o in 0..outer {
            let base = o * d * inner;
            let src = &amps[base..base + d * inner];
            scratch.iter_mut().for_each(|z| *z = C64::new(0.0, 0.0));
            for bp in 0..d {
                let dst = &mut scratch[bp * inner..(bp + 1) * inner];
                for b in 0..d {
                    let m = matrix[bp * d + b];
                    if m.re == 0.0 && m.im == 0.0 {
                        continue;
                    }
                    let s = &src[b * inner..(b + 1) * inner];
                    for (dv, sv) in dst.iter_mut().zip(s.iter()) {
                        *dv += m * sv;
                    }
                }
            }
            amps[base..base + d * inner].copy_from_slice(&scratch);
        }
    }
}

/// Elementwise phase multiply `amps[b] *= phases[b]`.
pub fn apply_diag(amps: &mut [C64], phases: &[C64]) {
    debug_assert_eq!(amps.len(), phases.len());
    for (a, p) in amps.iter_mut().zip(phases.iter()) {
        *a *= p;
    }
}

/// Apply the same 2x2 matrix to every factor listed in `qubits` (all must be
/// dimension-2 factors).
pub fn apply_qubitwise(layout: &Layout, amps: &mut [C64], qubits: &[usize], m2: &[C64; 4]) {
    let dim = layout.dim();
    for &q in qubits {
        debug_assert_eq!(layout.factors()[q], 2);
        let stride = layout.stride(q);
        let period = stride * 2;
        let mut base = 0;
        while base < dim {
            for x in 0..stride {
                let i0 = base + x;
                let i1 = i0 + stride;
                let a0 = amps[i0];
                let a1 = amps[i1];
                amps[i0] = m2[0] * a0 + m2[1] * a1;
                amps[i1] = m2[2] * a0 + m2[3] * a1;
            }
            base += period;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{kron, Operator, StateVec};
    use crate::models::pauli;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_state(layout: Layout, seed: u64) -> StateVec {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = layout.dim();
        let amps: Vec<C64> = (0..dim)
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let mut s = StateVec::new(layout, amps);
        s.normalize();
        s
    }

    /// Dense-embedding oracle: build the full operator and use a matvec.
    fn embed_dense(layout: &Layout, support: &[usize], small: &Operator) -> Operator {
        let factors = layout.factors();
        let dim = layout.dim();
        Operator::from_fn(layout.clone(), |i, j| {
            // digits of i and j
            let mut ii = i;
            let mut jj = j;
            let mut si = 0usize;
            let mut sj = 0usize;
            let mut agree = true;
            for (f, &d) in factors.iter().enumerate() {
                let stride: usize = factors[f + 1..].iter().product();
                let di = (ii / stride) % d;
                let dj = (jj / stride) % d;
                if let Some(pos) = support.iter().position(|&s| s == f) {
                    let _ = pos;
                    si = si * d + di;
                    sj = sj * d + dj;
                } else if di != dj {
                    agree = false;
                }
                ii %= stride * d;
                jj %= stride * d;
            }
            let _ = dim;
            if agree {
                small.get(si, sj)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    #[test]
    fn contiguous_apply_matches_dense_oracle() {
        let layout = Layout(vec![2, 4, 2, 3]);
        let small = {
            let a = kron(&pauli::x(), &Operator::from_diag_real(Layout::single(4), &[0.5, -1.0, 2.0, 0.0])).unwrap();
            kron(&a, &pauli::y()).unwrap()
        };
        let support = [0usize, 1, 2];
        let dense = embed_dense(&layout, &support, &small);
        let s = random_state(layout.clone(), 5);
        let expect = s.apply_dense(&dense);

        let plan = LocalPlan::new(&layout, &support);
        let mut got = s.clone();
        let mut scratch = Vec::new();
        plan.apply(got.amps_mut(), small.data(), &mut scratch);
        let diff: f64 = got
            .amps()
            .iter()
            .zip(expect.amps())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(diff < 1e-13);
    }

    #[test]
    fn strided_apply_matches_dense_oracle() {
        let layout = Layout(vec![2, 3, 2, 2]);
        let small = kron(&pauli::y(), &pauli::z()).unwrap();
        let support = [0usize, 3]; // non-contiguous
        let dense = embed_dense(&layout, &support, &small);
        let s = random_state(layout.clone(), 6);
        let expect = s.apply_dense(&dense);

        let plan = LocalPlan::new(&layout, &support);
        let mut got = s.clone();
        let mut scratch = Vec::new();
        plan.apply(got.amps_mut(), small.data(), &mut scratch);
        let diff: f64 = got
            .amps()
            .iter()
            .zip(expect.amps())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(diff < 1e-13);
    }

    #[test]
    fn accumulate_matches_dense_oracle() {
        let layout = Layout(vec![2, 2, 3]);
        let small = kron(&pauli::x(), &pauli::x()).unwrap();
        let support = [0usize, 1];
        let dense = embed_dense(&layout, &support, &small);
        let s = random_state(layout.clone(), 9);
        let expect = s.apply_dense(&dense);

        let plan = LocalPlan::new(&layout, &support);
        let mut out = vec![C64::new(0.0, 0.0); layout.dim()];
        plan.accumulate(s.amps(), small.data(), &mut out);
        let diff: f64 = out
            .iter()
            .zip(expect.amps())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(diff < 1e-13);
    }

    #[test]
    fn qubitwise_matches_per_qubit_dense() {
        let layout = Layout(vec![2, 3, 2]);
        let h = pauli::hadamard();
        let m2 = [h.get(0, 0), h.get(0, 1), h.get(1, 0), h.get(1, 1)];
        let s = random_state(layout.clone(), 11);

        let mut got = s.clone();
        apply_qubitwise(&layout, got.amps_mut(), &[0, 2], &m2);

        let mut expect = s.clone();
        for &q in &[0usize, 2] {
            let plan = LocalPlan::new(&layout, &[q]);
            let mut scratch = Vec::new();
            plan.apply(expect.amps_mut(), h.data(), &mut scratch);
        }
        let diff: f64 = got
            .amps()
            .iter()
            .zip(expect.amps())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(diff < 1e-14);
    }
}
