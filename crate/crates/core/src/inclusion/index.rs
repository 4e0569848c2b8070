//! Pimsner–Popa index: best `λ` with `ε(x) ≥ λx` (positive variant) and with
//! `ε − λ·id` completely positive (CP variant).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::Inclusion;
use crate::algebra::random_unit_vector;
use crate::matrix::{herm_eig, linalg, ComplexMatrix, HermitianMatrix, C64, SUPPORT_CUTOFF, ZERO};

/// Multistart settings for the positive index.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PositiveSearch {
    pub starts: usize,
    pub iterations: usize,
    pub seed: u64,
}

impl Default for PositiveSearch {
    fn default() -> Self {
        Self {
            starts: 64,
            iterations: 40,
            seed: 0x9e37,
        }
    }
}

/// Data certifying the CP index: at `λ = 1/index` the Choi matrix of
/// `ε_kk − λ·id` on block `block` is PSD with smallest eigenvalue `min_eigenvalue`,
/// and `Ω` is in the support of `Choi(ε_kk)` iff `in_support`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChoiCertificate {
    pub block: usize,
    pub lambda: f64,
    pub min_eigenvalue: f64,
    pub in_support: bool,
    /// Spectrum of `Choi(ε_kk)`.
    pub choi_spectrum: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IndexReport {
    pub pp_positive: f64,
    pub pp_cp: f64,
    /// Unit vector on `ℂ^d` whose rank-one projection attains `pp_positive`.
    pub witness_vector: Vec<C64>,
    pub witness_block: usize,
    /// Closed form, when the inclusion is a tensor factor `M_p ⊗ 1_q ⊂ M_{pq}`.
    pub closed_form: Option<f64>,
    /// `pp_cp − pp_positive`: the CP index bounds the positive one from above.
    pub optimality_gap: f64,
    pub choi_certificate: ChoiCertificate,
}

/// `ε` restricted to block `k` of `A` and read off in block `l`.
fn abstract_map(inc: &Inclusion, k: usize, x: &ComplexMatrix) -> Vec<ComplexMatrix> {
    let a = inc.ambient();
    a.compress(&inc.apply(&a.embed_block(k, x)))
}

/// `f(u) = ⟨u, Y(u)⁺ u⟩ / ‖u‖²` with `Y(u)` the block-`k` part of `ε(uu*)`.
fn rank_one_value(inc: &Inclusion, k: usize, u: &[C64]) -> f64 {
    let n2: f64 = u.iter().map(|z| z.norm_sqr()).sum();
    let y = HermitianMatrix::hermitize(
        abstract_map(inc, k, &ComplexMatrix::outer(u, u)).swap_remove(k),
    );
    let es = herm_eig(&y);
    let cutoff = SUPPORT_CUTOFF * es.max_abs_eigenvalue();
    let mut v = 0.0;
    for (j, &l) in es.eigenvalues.iter().enumerate() {
        if l <= cutoff {
            continue;
        }
        let c: C64 = es.vector(j).iter().zip(u).map(|(a, b)| a.conj() * b).sum();
        v += c.norm_sqr() / l;
    }
    v / n2
}

fn to_real(u: &[C64]) -> Vec<f64> {
    u.iter().flat_map(|z| [z.re, z.im]).collect()
}

fn from_real(x: &[f64]) -> Vec<C64> {
    let v: Vec<C64> = x.chunks(2).map(|p| C64::new(p[0], p[1])).collect();
    let n = linalg::norm(&v);
    v.into_iter().map(|z| z / n).collect()
}

/// Projected gradient ascent on the unit sphere with finite-difference gradients.
fn ascend(inc: &Inclusion, k: usize, start: Vec<C64>, iterations: usize) -> (f64, Vec<C64>) {
    let mut x = to_real(&start);
    let mut fx = rank_one_value(inc, k, &from_real(&x));
    let mut step = 0.1;
    let h = 1e-7;
    for _ in 0..iterations {
        let grad: Vec<f64> = (0..x.len())
            .map(|i| {
                let mut xp = x.clone();
                xp[i] += h;
                (rank_one_value(inc, k, &from_real(&xp)) - fx) / h
            })
            .collect();
        let gn = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        if gn < 1e-9 {
            break;
        }
        let mut improved = false;
        while step > 1e-8 {
            let cand: Vec<f64> = x
                .iter()
                .zip(&grad)
                .map(|(a, g)| a + step * g / gn)
                .collect();
            let nrm = cand.iter().map(|a| a * a).sum::<f64>().sqrt();
            let cand: Vec<f64> = cand.iter().map(|a| a / nrm).collect();
            let fc = rank_one_value(inc, k, &from_real(&cand));
            if fc > fx {
                x = cand;
                fx = fc;
                step *= 1.5;
                improved = true;
                break;
            }
            step *= 0.5;
        }
        if !improved {
            break;
        }
    }
    (fx, from_real(&x))
}

/// `(p, q)` when `A = M_{pq}` acting without multiplicity and `B = M_p ⊗ 1_q`.
fn tensor_shape(inc: &Inclusion) -> Option<(usize, usize)> {
    let a = inc.ambient();
    let b = inc.sub();
    if a.blocks().len() != 1 || a.blocks()[0].multiplicity != 1 || b.blocks().len() != 1 {
        return None;
    }
    let blk = b.blocks()[0];
    (blk.dim * blk.multiplicity == a.ambient_dim()).then_some((blk.dim, blk.multiplicity))
}

/// Schmidt vectors `Σ_i s_i e_i ⊗ f_i` in the frame adapted to `B ⊗ B′`,
/// weights on a simplex grid.
fn schmidt_candidates(inc: &Inclusion, p: usize, q: usize) -> Vec<Vec<C64>> {
    let r = p.min(q);
    let w = &inc.sub().isometries()[0];
    let res = 8usize;
    let mut out = Vec::new();
    let mut comp = vec![0usize; r];
    fn rec(i: usize, left: usize, comp: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i + 1 == comp.len() {
            comp[i] = left;
            out.push(comp.clone());
            return;
        }
        for c in 0..=left {
            comp[i] = c;
            rec(i + 1, left - c, comp, out);
        }
    }
    let mut compositions = Vec::new();
    rec(0, res, &mut comp, &mut compositions);
    // The uniform point first, so ties resolve to the maximally entangled vector.
    compositions.sort_by_key(|c| {
        c.iter()
            .map(|&x| (x as isize * r as isize - res as isize).abs())
            .sum::<isize>()
    });
    for c in compositions {
        let mut local = vec![ZERO; p * q];
        for (i, &ci) in c.iter().enumerate() {
            local[i * q + i] = C64::new((ci as f64 / res as f64).sqrt(), 0.0);
        }
        let v: Vec<C64> = (0..w.nrows())
            .map(|row| (0..p * q).map(|j| w[(row, j)] * local[j]).sum())
            .collect();
        out.push(v);
    }
    out
}

/// Positive index `sup_u ⟨u, ε(uu*)⁺ u⟩` over all blocks of `A`, with its witness.
pub fn pp_index_positive(inc: &Inclusion, search: &PositiveSearch) -> (f64, usize, Vec<C64>) {
    let a = inc.ambient();
    let mut candidates: Vec<(f64, usize, Vec<C64>)> = Vec::new();
    if let Some((p, q)) = tensor_shape(inc) {
        let wa = &a.isometries()[0];
        for v in schmidt_candidates(inc, p, q) {
            let u: Vec<C64> = (0..wa.ncols())
                .map(|c| (0..wa.nrows()).map(|r| wa[(r, c)].conj() * v[r]).sum())
                .collect();
            candidates.push((rank_one_value(inc, 0, &u), 0, u));
        }
    }
    let starts: Vec<(usize, u64)> = (0..a.blocks().len())
        .flat_map(|k| (0..search.starts).map(move |s| (k, s as u64)))
        .collect();
    let results: Vec<(f64, usize, Vec<C64>)> = starts
        .par_iter()
        .map(|&(k, s)| {
            let mut rng = ChaCha8Rng::seed_from_u64(
                search.seed ^ (s.wrapping_mul(0x9E37_79B9_7F4A_7C15) + k as u64),
            );
            let n = a.blocks()[k].dim;
            let u0 = random_unit_vector(n, &mut rng);
            let (f, u) = ascend(inc, k, u0, search.iterations);
            (f, k, u)
        })
        .collect();
    candidates.extend(results);
    let mut best = 0usize;
    for (i, c) in candidates.iter().enumerate() {
        if c.0 > candidates[best].0 + 1e-12 {
            best = i;
        }
    }
    let (val, k, u) = candidates.swap_remove(best);
    (val, k, block_vector_to_ambient(inc, k, &u))
}

fn block_vector_to_ambient(inc: &Inclusion, k: usize, u: &[C64]) -> Vec<C64> {
    let a = inc.ambient();
    let b = a.blocks()[k];
    let w = &a.isometries()[k];
    // column order i·m + l; take the l = 0 copy
    (0..w.nrows())
        .map(|row| {
            (0..b.dim)
                .map(|i| w[(row, i * b.multiplicity)] * u[i])
                .sum()
        })
        .collect()
}

/// CP index `max_k ⟨Ω_k, Choi(ε_kk)⁺ Ω_k⟩`, `+∞` when some `Ω_k` leaves the support.
pub fn pp_index_cp(inc: &Inclusion) -> (f64, ChoiCertificate) {
    let a = inc.ambient();
    let mut best: Option<(f64, ChoiCertificate)> = None;
    for (k, blk) in a.blocks().iter().enumerate() {
        let n = blk.dim;
        let mut choi = ComplexMatrix::zeros(n * n);
        for i in 0..n {
            for j in 0..n {
                let img = abstract_map(inc, k, &ComplexMatrix::unit(n, i, j)).swap_remove(k);
                for x in 0..n {
                    for y in 0..n {
                        choi[(i * n + x, j * n + y)] = img[(x, y)];
                    }
                }
            }
        }
        let choi = HermitianMatrix::hermitize(choi);
        let es = herm_eig(&choi);
        let cutoff = SUPPORT_CUTOFF * es.max_abs_eigenvalue();
        let omega: Vec<C64> = (0..n * n)
            .map(|r| {
                if r / n == r % n {
                    C64::new(1.0, 0.0)
                } else {
                    ZERO
                }
            })
            .collect();
        let mut val = 0.0;
        let mut outside = 0.0;
        for (j, &l) in es.eigenvalues.iter().enumerate() {
            let c: C64 = es
                .vector(j)
                .iter()
                .zip(&omega)
                .map(|(a, b)| a.conj() * b)
                .sum();
            if l <= cutoff {
                outside += c.norm_sqr();
            } else {
                val += c.norm_sqr() / l;
            }
        }
        let in_support = outside <= 1e-10 * n as f64;
        let index = if in_support { val } else { f64::INFINITY };
        let lambda = if index.is_finite() { 1.0 / index } else { 0.0 };
        let shifted = &choi.matrix().clone() - &ComplexMatrix::outer(&omega, &omega).scale(lambda);
        let min_eigenvalue = herm_eig(&HermitianMatrix::hermitize(shifted)).eigenvalues[0];
        let cert = ChoiCertificate {
            block: k,
            lambda,
            min_eigenvalue,
            in_support,
            choi_spectrum: es.eigenvalues,
        };
        if best.as_ref().is_none_or(|(b, _)| index > *b) {
            best = Some((index, cert));
        }
    }
    best.expect("algebra has at least one block")
}

pub(super) fn index_report(inc: &Inclusion, search: &PositiveSearch) -> IndexReport {
    let (pp_positive, witness_block, witness_vector) = pp_index_positive(inc, search);
    let (pp_cp, choi_certificate) = pp_index_cp(inc);
    let closed_form = tensor_shape(inc).map(|(p, q)| (q * p.min(q)) as f64);
    IndexReport {
        pp_positive,
        pp_cp,
        witness_vector,
        witness_block,
        closed_form,
        optimality_gap: pp_cp - pp_positive,
        choi_certificate,
    }
}
