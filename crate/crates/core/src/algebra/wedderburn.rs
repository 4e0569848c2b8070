//! Recovering `⊕ M_{n_k} ⊗ 1_{m_k}` from a spanning set, and commutants.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Block, MultiMatrixAlgebra};
use crate::error::{Error, Result};
use crate::matrix::{
    herm_eig, linalg, partial_trace, ComplexMatrix, HermitianMatrix, Side, C64, ZERO,
};

const SPAN_TOL: f64 = 1e-10;
const CLOSURE_TOL: f64 = 1e-9;
const STRUCTURE_TOL: f64 = 1e-8;
const COMMUTANT_TOL: f64 = 1e-10;

/// Orthonormal (Frobenius) basis of `span`.
fn span_basis(span: &[ComplexMatrix], d: usize) -> Result<Vec<ComplexMatrix>> {
    for s in span {
        if s.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: s.dim(),
            });
        }
        if !s.is_finite() {
            return Err(Error::NonFinite);
        }
    }
    let flats: Vec<Vec<C64>> = span.iter().map(|m| m.to_row_major()).collect();
    Ok(linalg::orthonormalize_scaled(&flats, SPAN_TOL)
        .into_iter()
        .map(|v| ComplexMatrix::from_row_major(d, &v))
        .collect())
}

/// `‖x − P(x)‖_F / scale` for the projection onto an orthonormal basis.
fn residual_in(basis: &[ComplexMatrix], x: &ComplexMatrix, scale: f64) -> f64 {
    let mut r = x.clone();
    for b in basis {
        let c = b.inner(x);
        r = &r - &b.scale_c(c);
    }
    r.frobenius_norm() / scale.max(1e-300)
}

fn random_combination(basis: &[ComplexMatrix], d: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(d);
    for b in basis {
        let c = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        out += &b.scale_c(c);
    }
    out
}

/// Groups sorted eigenvalues into clusters separated by more than `tol`.
fn clusters(vals: &[f64], tol: f64) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    for (i, &v) in vals.iter().enumerate() {
        match out.last_mut() {
            Some(c) if (v - vals[*c.last().unwrap()]).abs() <= tol => c.push(i),
            _ => out.push(vec![i]),
        }
    }
    out
}

/// Decomposes the *-algebra spanned by `span` into `⊕ M_{n_k} ⊗ 1_{m_k}`.
///
/// The span must contain the identity and be closed under adjoints and
/// products; otherwise the worst residual is reported. Random elements used to
/// split the center and the blocks are drawn from a generator seeded by `seed`.
/// Blocks are ordered by `(n_k, m_k)` and then by position on `ℂ^d`.
pub fn wedderburn_decompose(span: &[ComplexMatrix], seed: u64) -> Result<MultiMatrixAlgebra> {
    let d = span.first().map(|m| m.dim()).ok_or(Error::EmptyEnsemble)?;
    let basis = span_basis(span, d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let unit_res = residual_in(&basis, &ComplexMatrix::identity(d), (d as f64).sqrt());
    if unit_res > CLOSURE_TOL {
        return Err(Error::NotUnital { residual: unit_res });
    }
    let adj_res = basis
        .iter()
        .map(|b| residual_in(&basis, &b.adjoint(), 1.0))
        .fold(0.0, f64::max);
    if adj_res > CLOSURE_TOL {
        return Err(Error::NotSelfAdjoint { residual: adj_res });
    }
    // The set of r with b·r ∈ span is a subspace, so a generic r decides closure.
    let mut closed_res = 0.0f64;
    if basis.len() <= 36 {
        for a in &basis {
            for b in &basis {
                closed_res = closed_res.max(residual_in(&basis, &(a * b), 1.0));
            }
        }
    } else {
        for _ in 0..2 {
            let r = random_combination(&basis, d, &mut rng);
            for a in &basis {
                closed_res = closed_res.max(residual_in(&basis, &(a * &r), r.frobenius_norm()));
            }
        }
    }
    if closed_res > CLOSURE_TOL {
        return Err(Error::NotClosed {
            residual: closed_res,
        });
    }

    let k = basis.len();
    // Center: coefficients c with Σ_j c_j [b_j, g] = 0 for g in a generating set.
    // Large algebras use three generic elements, which generate A almost surely.
    let gens: Vec<ComplexMatrix> = if k <= 36 {
        basis.clone()
    } else {
        (0..3)
            .map(|_| random_combination(&basis, d, &mut rng))
            .collect()
    };
    let dd = d * d;
    let mut sys = vec![ZERO; gens.len() * dd * k];
    for (i, g) in gens.iter().enumerate() {
        for (j, bj) in basis.iter().enumerate() {
            let c = bj.commutator(g).to_row_major();
            for (r, z) in c.into_iter().enumerate() {
                sys[(i * dd + r) * k + j] = z;
            }
        }
    }
    let center_coeffs = linalg::nullspace(&sys, gens.len() * dd, k, 1e-10);
    if center_coeffs.is_empty() {
        return Err(Error::Decomposition("empty center".into()));
    }
    let center: Vec<ComplexMatrix> = center_coeffs
        .iter()
        .map(|c| {
            let mut z = ComplexMatrix::zeros(d);
            for (b, &cj) in basis.iter().zip(c) {
                z += &b.scale_c(cj);
            }
            z
        })
        .collect();
    let central_res = center
        .iter()
        .flat_map(|z| basis.iter().map(move |b| z.commutator(b).frobenius_norm()))
        .fold(0.0, f64::max);
    if central_res > STRUCTURE_TOL {
        return Err(Error::Decomposition(format!(
            "center residual {central_res:.3e}"
        )));
    }

    let z = HermitianMatrix::hermitize(random_combination(&center, d, &mut rng).hermitian_part());
    let ez = herm_eig(&z);
    let spread = ez.max_abs_eigenvalue().max(1e-300);
    let central_groups = clusters(&ez.eigenvalues, 1e-7 * spread.max(1.0));
    if central_groups.len() != center.len() {
        return Err(Error::Decomposition(format!(
            "center has dimension {} but the spectrum splits into {} projections",
            center.len(),
            central_groups.len()
        )));
    }

    struct Part {
        block: Block,
        w: DMatrix<C64>,
        p: HermitianMatrix,
        key: usize,
    }
    let mut parts = Vec::new();
    for group in &central_groups {
        let r = group.len();
        let q = DMatrix::from_fn(d, r, |i, j| ez.eigenvectors[(i, group[j])]);
        let qa = q.adjoint();
        let local: Vec<ComplexMatrix> = basis
            .iter()
            .map(|b| ComplexMatrix::from_nalgebra(&qa * b.as_nalgebra() * &q))
            .collect();
        let local_basis = span_basis(&local, r)?;
        let dim2 = local_basis.len();
        let n = (dim2 as f64).sqrt().round() as usize;
        if n * n != dim2 || n == 0 || r % n != 0 {
            return Err(Error::Decomposition(format!(
                "block of linear dimension {dim2} on rank {r}"
            )));
        }
        let m = r / n;

        let h = HermitianMatrix::hermitize(
            random_combination(&local_basis, r, &mut rng).hermitian_part(),
        );
        let eh = herm_eig(&h);
        let hs = eh.max_abs_eigenvalue().max(1e-300);
        let groups = clusters(&eh.eigenvalues, 1e-7 * hs.max(1.0));
        if groups.len() != n || groups.iter().any(|g| g.len() != m) {
            return Err(Error::Decomposition(format!(
                "expected {n} minimal projections of rank {m}, found sizes {:?}",
                groups.iter().map(|g| g.len()).collect::<Vec<_>>()
            )));
        }
        let a = random_combination(&local_basis, r, &mut rng);
        let cols = |g: &Vec<usize>| DMatrix::from_fn(r, m, |i, j| eh.eigenvectors[(i, g[j])]);
        let f1 = cols(&groups[0]);
        let e1 = &f1 * f1.adjoint();
        let mut v = DMatrix::<C64>::zeros(r, n * m);
        for (gi, g) in groups.iter().enumerate() {
            let fi = cols(g);
            let vi = if gi == 0 {
                f1.clone()
            } else {
                let ei = &fi * fi.adjoint();
                let x = &e1 * a.as_nalgebra() * &ei;
                let alpha = ((&x * x.adjoint()).trace().re / m as f64).sqrt();
                if alpha < 1e-10 {
                    return Err(Error::Decomposition("degenerate matrix unit".into()));
                }
                let e1i = x / C64::new(alpha, 0.0);
                e1i.adjoint() * &f1
            };
            for l in 0..m {
                v.set_column(gi * m + l, &vi.column(l));
            }
        }
        let w = &q * v;
        let p = HermitianMatrix::hermitize(ComplexMatrix::from_nalgebra(&q * &qa));
        let key = (0..d).find(|&i| p[(i, i)].re > 0.5 / d as f64).unwrap_or(0);
        parts.push(Part {
            block: Block {
                dim: n,
                multiplicity: m,
            },
            w,
            p,
            key,
        });
    }
    parts.sort_by_key(|p| (p.block.dim, p.block.multiplicity, p.key));

    // Verify W_k* b W_l = δ_kl X ⊗ 1.
    let mut worst = 0.0f64;
    for b in &basis {
        let bn = b.frobenius_norm().max(1e-300);
        for (ik, pk) in parts.iter().enumerate() {
            for (il, pl) in parts.iter().enumerate() {
                let y = pk.w.adjoint() * b.as_nalgebra() * &pl.w;
                if ik != il {
                    worst = worst.max(y.norm() / bn);
                    continue;
                }
                let y = ComplexMatrix::from_nalgebra(y);
                let (n, m) = (pk.block.dim, pk.block.multiplicity);
                let x = partial_trace(&y, (n, m), Side::Right)?.scale(1.0 / m as f64);
                let fit = crate::matrix::kron(&x, &ComplexMatrix::identity(m));
                worst = worst.max((&y - &fit).frobenius_norm() / bn);
            }
        }
    }
    if worst > STRUCTURE_TOL {
        return Err(Error::Decomposition(format!(
            "block structure residual {worst:.3e}"
        )));
    }

    let (blocks, rest): (Vec<_>, Vec<_>) = parts.into_iter().map(|p| (p.block, (p.w, p.p))).unzip();
    let (isometries, central_projections) = rest.into_iter().unzip();
    Ok(MultiMatrixAlgebra::from_parts(
        d,
        blocks,
        basis,
        isometries,
        central_projections,
    ))
}

/// The unital *-algebra generated by `generators` inside `M_d`.
pub fn generated_algebra(
    generators: &[ComplexMatrix],
    ambient_dim: usize,
    seed: u64,
) -> Result<MultiMatrixAlgebra> {
    let mut span = vec![ComplexMatrix::identity(ambient_dim)];
    for g in generators {
        span.push(g.clone());
        span.push(g.adjoint());
    }
    let mut basis = span_basis(&span, ambient_dim)?;
    loop {
        let mut next = basis.clone();
        for x in &basis {
            for y in &basis {
                next.push(x * y);
            }
        }
        let grown = span_basis(&next, ambient_dim)?;
        if grown.len() == basis.len() {
            break;
        }
        basis = grown;
    }
    wedderburn_decompose(&basis, seed)
}

/// Commutant `{x ∈ M_d : [x, g] = 0 for all g}` of a self-adjoint generating set
/// (adjoints are added automatically), decomposed into blocks.
pub fn commutant(
    generators: &[ComplexMatrix],
    ambient_dim: usize,
    seed: u64,
) -> Result<MultiMatrixAlgebra> {
    let d = ambient_dim;
    let mut all: Vec<ComplexMatrix> = Vec::with_capacity(2 * generators.len());
    for g in generators {
        if g.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: g.dim(),
            });
        }
        all.push(g.clone());
        all.push(g.adjoint());
    }
    let gens = span_basis(&all, d)?;
    let dd = d * d;
    let rows = gens.len() * dd;
    let mut sys = vec![ZERO; rows * dd];
    // (g x − x g)_{ij} = Σ_a g_{ia} x_{aj} − Σ_b x_{ib} g_{bj}
    for (gi, g) in gens.iter().enumerate() {
        for i in 0..d {
            for j in 0..d {
                let row = (gi * dd + i * d + j) * dd;
                for a in 0..d {
                    sys[row + a * d + j] += g[(i, a)];
                    sys[row + i * d + a] -= g[(a, j)];
                }
            }
        }
    }
    let ns = linalg::nullspace(&sys, rows, dd, 1e-11);
    let span: Vec<ComplexMatrix> = ns
        .iter()
        .map(|v| ComplexMatrix::from_row_major(d, v))
        .collect();
    let mut worst = 0.0f64;
    for g in &gens {
        for x in &span {
            worst = worst.max(g.commutator(x).frobenius_norm());
        }
    }
    if worst > COMMUTANT_TOL {
        return Err(Error::Decomposition(format!(
            "commutant residual {worst:.3e}"
        )));
    }
    wedderburn_decompose(&span, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::kron;

    fn signature(a: &MultiMatrixAlgebra) -> Vec<(usize, usize)> {
        a.block_signature()
            .iter()
            .map(|b| (b.dim, b.multiplicity))
            .collect()
    }

    #[test]
    fn recovers_direct_sum() {
        let reference = MultiMatrixAlgebra::from_blocks(&[(2, 1), (1, 2)]);
        // scramble by a unitary
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let u = super::super::haar_unitary(4, &mut rng);
        let span: Vec<ComplexMatrix> = reference
            .basis()
            .iter()
            .map(|b| &(&u * b) * &u.adjoint())
            .collect();
        let a = wedderburn_decompose(&span, 9).unwrap();
        assert_eq!(signature(&a), vec![(1, 2), (2, 1)]);
        let x = a.random_element(&mut rng);
        assert!(a.contains(&x));
        assert!((&a.embed(&a.compress(&x)) - &x).frobenius_norm() < 1e-10);
    }

    #[test]
    fn generators_close_up() {
        // a single diagonal projection generates C + C
        let p = ComplexMatrix::from_real_diag(&[1.0, 0.0, 0.0]);
        assert_eq!(
            signature(&generated_algebra(&[p], 3, 1).unwrap()),
            vec![(1, 1), (1, 2)]
        );
        // Pauli X and Z on the left factor generate M_2 (x) 1
        let x = ComplexMatrix::from_rows(&[
            vec![ZERO, C64::new(1.0, 0.0)],
            vec![C64::new(1.0, 0.0), ZERO],
        ])
        .unwrap();
        let z = ComplexMatrix::from_real_diag(&[1.0, -1.0]);
        let i2 = ComplexMatrix::identity(2);
        let a = generated_algebra(&[kron(&x, &i2), kron(&z, &i2)], 4, 1).unwrap();
        assert_eq!(signature(&a), vec![(2, 2)]);
    }

    #[test]
    fn commutant_of_tensor_factor() {
        let a = MultiMatrixAlgebra::tensor_left(2, 3);
        let c = commutant(a.basis(), 6, 1).unwrap();
        assert_eq!(signature(&c), vec![(3, 2)]);
        // A'' = A
        let cc = commutant(c.basis(), 6, 2).unwrap();
        assert_eq!(signature(&cc), vec![(2, 3)]);
        assert!(cc.contains_algebra(&a) && a.contains_algebra(&cc));
    }

    #[test]
    fn commutant_of_diagonal_is_diagonal() {
        let a = MultiMatrixAlgebra::diagonal(3);
        let c = commutant(a.basis(), 3, 0).unwrap();
        assert_eq!(c.linear_dim(), 3);
        assert!(c.contains_algebra(&a));
    }

    #[test]
    fn rejects_non_algebra() {
        let span = vec![
            ComplexMatrix::identity(2),
            ComplexMatrix::unit(2, 0, 1),
            ComplexMatrix::unit(2, 1, 0),
        ];
        assert!(matches!(
            wedderburn_decompose(&span, 0),
            Err(Error::NotClosed { .. })
        ));
        let span = vec![ComplexMatrix::unit(2, 0, 0)];
        assert!(matches!(
            wedderburn_decompose(&span, 0),
            Err(Error::NotUnital { .. })
        ));
        let span = vec![ComplexMatrix::identity(2), ComplexMatrix::unit(2, 0, 1)];
        assert!(matches!(
            wedderburn_decompose(&span, 0),
            Err(Error::NotSelfAdjoint { .. })
        ));
    }

    #[test]
    fn seed_does_not_change_structure() {
        let a = MultiMatrixAlgebra::tensor_left(2, 2);
        let b = kron(&ComplexMatrix::identity(1), &ComplexMatrix::identity(4));
        let mut span = a.basis().to_vec();
        span.push(b);
        let x = wedderburn_decompose(&span, 1).unwrap();
        let y = wedderburn_decompose(&span, 2).unwrap();
        assert_eq!(x.blocks(), y.blocks());
    }
}
