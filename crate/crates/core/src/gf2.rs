//! Bit-packed GF(2) linear algebra: rank, solving and incremental bases.
//!
//! Rows are `Vec<u64>` bit vectors. Everything here is plain Gaussian
//! elimination, packed 64 columns to the word.

/// Number of words needed for `bits` columns.
pub fn words_for(bits: usize) -> usize {
    bits.div_ceil(64)
}

pub fn get_bit(row: &[u64], i: usize) -> bool {
    row[i / 64] >> (i % 64) & 1 == 1
}

pub fn set_bit(row: &mut [u64], i: usize, v: bool) {
    let (w, b) = (i / 64, i % 64);
    row[w] = row[w] & !(1 << b) | (u64::from(v) << b);
}

pub fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= *s;
    }
}

pub fn is_zero(row: &[u64]) -> bool {
    row.iter().all(|&w| w == 0)
}

/// Row-echelon basis built incrementally. Each inserted row is reduced
/// against the current basis; rows that reduce to zero are rejected.
#[derive(Clone, Debug)]
pub struct RowBasis {
    bits: usize,
    /// (pivot column, reduced row, combination over the original inserts)
    rows: Vec<(usize, Vec<u64>, Vec<u64>)>,
    inserted: usize,
}

impl RowBasis {
    pub fn new(bits: usize) -> RowBasis {
        RowBasis { bits, rows: Vec::new(), inserted: 0 }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Insert a row; returns true if it was independent of the basis.
    pub fn insert(&mut self, row: &[u64]) -> bool {
        let idx = self.inserted;
        self.inserted += 1;
        let mut r = row.to_vec();
        let mut combo = vec![0u64; words_for(self.inserted.max(64))];
        if combo.len() * 64 <= idx {
            combo.resize(words_for(idx + 1), 0);
        }
        set_bit(&mut combo, idx, true);
        for (pivot, basis_row, basis_combo) in &self.rows {
            if get_bit(&r, *pivot) {
                xor_into(&mut r, basis_row);
                if combo.len() < basis_combo.len() {
                    combo.resize(basis_combo.len(), 0);
                }
                for (i, w) in basis_combo.iter().enumerate() {
                    combo[i] ^= w;
                }
            }
        }
        match (0..self.bits).find(|&i| get_bit(&r, i)) {
            None => false,
            Some(pivot) => {
                self.rows.push((pivot, r, combo));
                true
            }
        }
    }

    /// Reduce `row` against the basis; returns the residual.
    pub fn reduce(&self, row: &[u64]) -> Vec<u64> {
        let mut r = row.to_vec();
        for (pivot, basis_row, _) in &self.rows {
            if get_bit(&r, *pivot) {
                xor_into(&mut r, basis_row);
            }
        }
        r
    }

    /// True iff `row` is in the span of the inserted rows.
    pub fn contains(&self, row: &[u64]) -> bool {
        is_zero(&self.reduce(row))
    }

    /// If `row` is in the span, return which original inserts combine to it.
    pub fn decompose(&self, row: &[u64]) -> Option<Vec<bool>> {
        let mut r = row.to_vec();
        let mut combo = vec![0u64; words_for(self.inserted.max(1))];
        for (pivot, basis_row, basis_combo) in &self.rows {
            if get_bit(&r, *pivot) {
                xor_into(&mut r, basis_row);
                for (i, w) in basis_combo.iter().enumerate() {
                    if i < combo.len() {
                        combo[i] ^= w;
                    }
                }
            }
        }
        if is_zero(&r) {
            Some((0..self.inserted).map(|i| get_bit(&combo, i)).collect())
        } else {
            None
        }
    }
}

/// Rank of a set of rows over GF(2).
pub fn rank(rows: &[Vec<u64>], bits: usize) -> usize {
    let mut basis = RowBasis::new(bits);
    for r in rows {
        basis.insert(r);
    }
    basis.rank()
}

/// Solve `sum_i sel_i · rows_i = target` over GF(2); returns the selection.
pub fn solve(rows: &[Vec<u64>], target: &[u64], bits: usize) -> Option<Vec<bool>> {
    let mut basis = RowBasis::new(bits);
    for r in rows {
        basis.insert(r);
    }
    basis.decompose(target)
}

/// Solve `M·v = rhs` for an unknown vector `v`, where the rows of `M` are
/// `constraints`. Free variables are set to zero. Returns `None` when the
/// system is inconsistent.
pub fn solve_linear_system(
    constraints: &[Vec<u64>],
    rhs: &[bool],
    bits: usize,
) -> Option<Vec<u64>> {
    assert_eq!(constraints.len(), rhs.len());
    let w = words_for(bits);
    let mut mat: Vec<Vec<u64>> = constraints.iter().map(|r| r[..w].to_vec()).collect();
    let mut b: Vec<bool> = rhs.to_vec();
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut rank = 0usize;
    for col in 0..bits {
        if let Some(row_idx) = (rank..mat.len()).find(|&r| get_bit(&mat[r], col)) {
            mat.swap(rank, row_idx);
            b.swap(rank, row_idx);
            let pivot_row = mat[rank].clone();
            let pivot_rhs = b[rank];
            for r in 0..mat.len() {
                if r != rank && get_bit(&mat[r], col) {
                    xor_into(&mut mat[r], &pivot_row);
                    b[r] ^= pivot_rhs;
                }
            }
            pivots.push((rank, col));
            rank += 1;
        }
    }
    // Inconsistent if any zero row has rhs 1.
    for r in rank..mat.len() {
        if is_zero(&mat[r]) && b[r] {
            return None;
        }
    }
    let mut v = vec![0u64; w];
    for &(row, col) in &pivots {
        set_bit(&mut v, col, b[row]);
    }
    Some(v)
}

/// All vectors `v` (over the first `bits` columns) with `v ⊥ rows` under the
/// standard inner product, returned as a basis of the kernel of the matrix.
pub fn kernel_basis(rows: &[Vec<u64>], bits: usize) -> Vec<Vec<u64>> {
    // Gaussian elimination on the matrix whose rows are the constraints.
    let w = words_for(bits);
    let mut mat: Vec<Vec<u64>> = rows.iter().map(|r| r[..w].to_vec()).collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut rank = 0usize;
    for col in 0..bits {
        if let Some(row_idx) = (rank..mat.len()).find(|&r| get_bit(&mat[r], col)) {
            mat.swap(rank, row_idx);
            let pivot_row = mat[rank].clone();
            for (r, row) in mat.iter_mut().enumerate() {
                if r != rank && get_bit(row, col) {
                    xor_into(row, &pivot_row);
                }
            }
            pivots.push(col);
            rank += 1;
        }
    }
    let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    let free: Vec<usize> = (0..bits).filter(|c| !pivot_set.contains(c)).collect();
    let mut kernel = Vec::with_capacity(free.len());
    for &f in &free {
        let mut v = vec![0u64; w];
        set_bit(&mut v, f, true);
        for (r, &p) in pivots.iter().enumerate() {
            if get_bit(&mat[r], f) {
                set_bit(&mut v, p, true);
            }
        }
        kernel.push(v);
    }
    kernel
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(bits: &[usize], n: usize) -> Vec<u64> {
        let mut r = vec![0u64; words_for(n)];
        for &b in bits {
            set_bit(&mut r, b, true);
        }
        r
    }

    #[test]
    fn rank_and_solve() {
        let rows = vec![row(&[0, 1], 4), row(&[1, 2], 4), row(&[0, 2], 4)];
        assert_eq!(rank(&rows, 4), 2);
        let sel = solve(&rows, &row(&[0, 2], 4), 4).unwrap();
        let mut acc = vec![0u64; 1];
        for (i, s) in sel.iter().enumerate() {
            if *s {
                xor_into(&mut acc, &rows[i]);
            }
        }
        assert_eq!(acc, row(&[0, 2], 4));
        assert!(solve(&rows, &row(&[3], 4), 4).is_none());
    }

    #[test]
    fn kernel_orthogonality() {
        let rows = vec![row(&[0, 1, 2], 5), row(&[2, 3], 5)];
        let kernel = kernel_basis(&rows, 5);
        assert_eq!(kernel.len(), 3);
        for v in &kernel {
            for r in &rows {
                let dot: u32 = v.iter().zip(r).map(|(&a, &b)| (a & b).count_ones()).sum();
                assert_eq!(dot % 2, 0);
            }
        }
    }
}
