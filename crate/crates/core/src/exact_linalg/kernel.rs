use super::matrix::dot_mod;
use super::{LinalgError, ModMatrix};
use crate::numtheory::inv_mod;

/// Largest number of `x += f * y` updates (with `f, y < l`) that a `u32`
/// entry starting below `l` absorbs without overflow; 0 if reduction must be
/// eager.
fn lazy_budget(l: u32) -> u64 {
    let sq = (l as u64 - 1) * (l as u64 - 1);
    if sq == 0 {
        return u64::MAX;
    }
    (u32::MAX as u64 - l as u64) / sq
}

struct Echelon {
    pivots: Vec<usize>,
    /// Product of the pivots times the permutation sign; the determinant for
    /// square full-rank input.
    det: u32,
}

/// Gaussian elimination in place. With `full`, rows above each pivot are
/// cleared as well, producing the reduced row echelon form with the pivot
/// rows first.
fn echelon(m: &mut ModMatrix, full: bool) -> Echelon {
    let l = m.modulus();
    let (rows, cols) = (m.rows(), m.cols());
    let budget = lazy_budget(l);
    let lazy = budget > 0;
    let mut pending = 0u64;
    let mut pivots = Vec::new();
    let mut det = 1u64;
    let data = m.data_mut();
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&r| data[r * cols + c] % l != 0) else {
            continue;
        };
        if piv != rank {
            for j in 0..cols {
                data.swap(piv * cols + j, rank * cols + j);
            }
            det = (l as u64 - det) % l as u64;
        }
        if lazy && pending >= budget {
            for x in data.iter_mut() {
                *x %= l;
            }
            pending = 0;
        }
        let (before, rest) = data.split_at_mut(rank * cols);
        let (prow, after) = rest.split_at_mut(cols);
        for x in prow[c..].iter_mut() {
            *x %= l;
        }
        let pv = prow[c] as u64;
        det = det * pv % l as u64;
        let inv = inv_mod(pv, l as u64).expect("prime modulus") ;
        for x in prow[c..].iter_mut() {
            *x = (*x as u64 * inv % l as u64) as u32;
        }
        let prow = &prow[c..];
        let update = |row: &mut [u32]| {
            let x = row[c] % l;
            if x == 0 {
                return;
            }
            let f = l - x;
            if lazy {
                for (dst, &src) in row[c..].iter_mut().zip(prow) {
                    *dst += f * src;
                }
            } else {
                for (dst, &src) in row[c..].iter_mut().zip(prow) {
                    *dst = ((*dst as u64 + f as u64 * src as u64) % l as u64) as u32;
                }
            }
        };
        for row in after.chunks_exact_mut(cols) {
            update(row);
        }
        if full {
            for row in before.chunks_exact_mut(cols) {
                update(row);
            }
        }
        pending += 1;
        pivots.push(c);
        rank += 1;
    }
    for x in data.iter_mut() {
        *x %= l;
    }
    let det = if rank == rows && rows == cols { det as u32 } else { 0 };
    Echelon { pivots, det }
}

pub(crate) fn det_small_prime(mut m: ModMatrix) -> u32 {
    assert_eq!(m.rows(), m.cols());
    if m.rows() == 0 {
        return 1 % m.modulus();
    }
    echelon(&mut m, false).det
}

/// Rank over `F_l`.
pub fn rank_mod(m: &ModMatrix) -> usize {
    let mut work = m.clone();
    echelon(&mut work, false).pivots.len()
}

/// Basis of `{x : A x = 0}` read off from the reduced echelon form of `A`,
/// one row per free column.
fn right_nullspace(mut a: ModMatrix) -> ModMatrix {
    let l = a.modulus();
    let n = a.cols();
    let pivots = echelon(&mut a, true).pivots;
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
    let mut out = ModMatrix::zeros(l, free.len(), n);
    for (k, &f) in free.iter().enumerate() {
        let row = out.row_mut(k);
        row[f] = 1;
        for (i, &pc) in pivots.iter().enumerate() {
            let v = a.get(i, f);
            row[pc] = if v == 0 { 0 } else { l - v };
        }
    }
    out
}

/// The left kernel `{v : v M = 0}` of a matrix over `F_l`, together with the
/// history of its dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelState {
    basis: ModMatrix,
    trace: Vec<usize>,
}

impl KernelState {
    pub fn modulus(&self) -> u32 {
        self.basis.modulus()
    }

    /// Dimension of the ambient space the kernel lives in.
    pub fn ambient(&self) -> usize {
        self.basis.cols()
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    /// Linearly independent rows spanning the kernel.
    pub fn basis(&self) -> &ModMatrix {
        &self.basis
    }

    /// Kernel dimension after initialisation and after each refinement.
    pub fn trace(&self) -> &[usize] {
        &self.trace
    }

    /// Reduced echelon basis; equal for equal subspaces.
    pub fn canonical_basis(&self) -> ModMatrix {
        let mut b = self.basis.clone();
        let rank = echelon(&mut b, true).pivots.len();
        debug_assert_eq!(rank, b.rows());
        b
    }

    pub fn refine(&mut self, columns: &ModMatrix) -> Result<(), LinalgError> {
        if columns.rows() != self.ambient() {
            return Err(LinalgError::DimensionMismatch {
                expected: self.ambient(),
                found: columns.rows(),
            });
        }
        if columns.modulus() != self.modulus() {
            return Err(LinalgError::BadModulus(columns.modulus() as u64));
        }
        if self.dim() > 0 && columns.cols() > 0 {
            self.basis = refine_basis(&self.basis, columns);
        }
        self.trace.push(self.dim());
        Ok(())
    }
}

/// New basis of `{u K : (u K) C = 0}`.
fn refine_basis(k: &ModMatrix, c: &ModMatrix) -> ModMatrix {
    let l = k.modulus();
    let ct = c.transpose();
    // P^T = (K C)^T, one row per new column
    let mut pt = ModMatrix::zeros(l, ct.rows(), k.rows());
    for t in 0..ct.rows() {
        let crow = ct.row(t);
        for i in 0..k.rows() {
            let v = dot_mod(k.row(i), crow, l);
            pt.row_mut(t)[i] = v;
        }
    }
    let null = right_nullspace(pt);
    combine_rows(&null, k)
}

/// `coeffs * basis` with delayed reduction.
fn combine_rows(coeffs: &ModMatrix, basis: &ModMatrix) -> ModMatrix {
    let l = basis.modulus() as u64;
    let n = basis.cols();
    let sq = (l - 1) * (l - 1);
    let budget = if sq == 0 { u64::MAX } else { u64::MAX / sq - 1 };
    let mut out = Vec::with_capacity(coeffs.rows() * n);
    let mut acc = vec![0u64; n];
    for i in 0..coeffs.rows() {
        acc.iter_mut().for_each(|x| *x = 0);
        let mut pending = 0u64;
        for (j, &f) in coeffs.row(i).iter().enumerate() {
            if f == 0 {
                continue;
            }
            if pending >= budget {
                acc.iter_mut().for_each(|x| *x %= l);
                pending = 0;
            }
            let f = f as u64;
            for (dst, &src) in acc.iter_mut().zip(basis.row(j)) {
                *dst += f * src as u64;
            }
            pending += 1;
        }
        out.extend(acc.iter().map(|&x| (x % l) as u32));
    }
    ModMatrix::from_raw(basis.modulus(), coeffs.rows(), n, out)
}

/// Left kernel of `m` over its prime field.
pub fn kernel_mod(m: &ModMatrix) -> KernelState {
    let basis = right_nullspace(m.transpose());
    let trace = vec![basis.rows()];
    KernelState { basis, trace }
}

/// Intersects the kernel with the left kernel of `columns`, recording the new
/// dimension in the trace.
pub fn kernel_refine(
    mut state: KernelState,
    columns: &ModMatrix,
) -> Result<KernelState, LinalgError> {
    state.refine(columns)?;
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(l: u32, rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> ModMatrix {
        ModMatrix::from_fn(l, rows, cols, |_, _| rng.gen_range(0..l as i64))
    }

    #[test]
    fn small_kernels() {
        assert_eq!(kernel_mod(&ModMatrix::identity(5, 4)).dim(), 0);
        let ones = ModMatrix::from_fn(5, 3, 3, |_, _| 1);
        let k = kernel_mod(&ones);
        assert_eq!(k.dim(), 2);
        assert!(k.basis().mul(&ones).unwrap().is_zero());
    }

    #[test]
    fn determinants_mod_small_primes() {
        let m = ModMatrix::from_fn(7, 3, 3, |i, j| [[2, 0, 1], [1, 3, 2], [1, 1, 1]][i][j]);
        // 2(3-2) - 0 + 1(1-3) = 0
        assert_eq!(det_small_prime(m), 0);
        let m = ModMatrix::from_fn(7, 2, 2, |i, j| [[0, 1], [1, 0]][i][j]);
        assert_eq!(det_small_prime(m), 6);
    }

    #[test]
    fn lazy_and_eager_paths_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for &l in &[2u32, 3, 97, 65_537, 2_147_483_647] {
            for _ in 0..10 {
                let a = random(l, 12, 9, &mut rng);
                let b = random(l, 9, 12, &mut rng);
                let ab = a.mul(&b).unwrap();
                let k = kernel_mod(&ab);
                assert_eq!(k.dim(), 12 - rank_mod(&ab));
                assert!(k.basis().mul(&ab).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn refine_matches_one_shot() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for &l in &[5u32, 7, 1_000_003] {
            for _ in 0..5 {
                // rank-deficient so the kernel is interesting
                let a = random(l, 20, 6, &mut rng);
                let b = random(l, 6, 14, &mut rng);
                let m = a.mul(&b).unwrap();
                let one_shot = kernel_mod(&m);
                let init = kernel_mod(&ModMatrix::zeros(l, 20, 0));
                assert_eq!(init.dim(), 20);
                let s = kernel_refine(init, &m.column_slice(0..5)).unwrap();
                let s = kernel_refine(s, &m.column_slice(5..14)).unwrap();
                assert_eq!(s.canonical_basis(), one_shot.canonical_basis());
                assert_eq!(s.trace().len(), 3);
                let again = kernel_refine(s.clone(), &m).unwrap();
                assert_eq!(again.canonical_basis(), s.canonical_basis());
            }
        }
    }

    #[test]
    fn refine_rejects_wrong_shape() {
        let s = kernel_mod(&ModMatrix::identity(5, 3));
        assert_eq!(
            kernel_refine(s, &ModMatrix::zeros(5, 4, 1)).unwrap_err(),
            LinalgError::DimensionMismatch {
                expected: 3,
                found: 4
            }
        );
    }
}
