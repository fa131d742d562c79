//! Sparse rational matrices with labelled rows and columns.
//!
//! Columns are stored as sorted sparse vectors. Rank and cokernel come from
//! an incremental column elimination: each column is reduced against the
//! pivots found so far (in creation order) and, if anything survives, a new
//! pivot row is chosen among its entries.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use super::rational::{height, Rational};

type SparseVec = Vec<(usize, Rational)>;

#[derive(Clone, Debug, PartialEq)]
pub struct GradedMatrix<L> {
    rows: Vec<L>,
    cols: Vec<L>,
    columns: Vec<SparseVec>,
}

impl<L: Clone> GradedMatrix<L> {
    pub fn new(rows: Vec<L>, cols: Vec<L>) -> Self {
        let columns = vec![Vec::new(); cols.len()];
        GradedMatrix { rows, cols, columns }
    }

    pub fn identity(labels: Vec<L>) -> Self {
        let mut m = Self::new(labels.clone(), labels);
        for i in 0..m.cols.len() {
            m.columns[i].push((i, Rational::one()));
        }
        m
    }

    pub fn rows(&self) -> &[L] {
        &self.rows
    }

    pub fn cols(&self) -> &[L] {
        &self.cols
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols.len()
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn column(&self, c: usize) -> &[(usize, Rational)] {
        &self.columns[c]
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        match self.columns[c].binary_search_by_key(&r, |(i, _)| *i) {
            Ok(k) => self.columns[c][k].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    /// Adds `value` to entry `(r, c)`.
    pub fn add_to(&mut self, r: usize, c: usize, value: Rational) {
        assert!(r < self.rows.len() && c < self.cols.len(), "entry ({r}, {c}) out of range");
        if value.is_zero() {
            return;
        }
        let col = &mut self.columns[c];
        match col.binary_search_by_key(&r, |(i, _)| *i) {
            Ok(k) => {
                col[k].1 += value;
                if col[k].1.is_zero() {
                    col.remove(k);
                }
            }
            Err(k) => col.insert(k, (r, value)),
        }
    }

    /// Replaces column `c` with an already assembled sparse column.
    pub fn set_column(&mut self, c: usize, mut entries: Vec<(usize, Rational)>) {
        entries.sort_by_key(|(r, _)| *r);
        let mut merged: SparseVec = Vec::with_capacity(entries.len());
        for (r, v) in entries {
            assert!(r < self.rows.len(), "row {r} out of range");
            match merged.last_mut() {
                Some((lr, lv)) if *lr == r => *lv += v,
                _ => merged.push((r, v)),
            }
        }
        merged.retain(|(_, v)| !v.is_zero());
        self.columns[c] = merged;
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    /// `self * rhs`, requiring `self.cols == rhs.rows` in length.
    pub fn compose(&self, rhs: &GradedMatrix<L>) -> GradedMatrix<L> {
        assert_eq!(self.cols.len(), rhs.rows.len(), "shape mismatch in compose");
        let mut out = GradedMatrix::new(self.rows.clone(), rhs.cols.clone());
        for (c, col) in rhs.columns.iter().enumerate() {
            let mut acc: SparseVec = Vec::new();
            for (k, v) in col {
                acc = axpy(&acc, &self.columns[*k], v);
            }
            out.columns[c] = acc;
        }
        out
    }

    /// Side-by-side concatenation of two matrices with the same rows.
    pub fn hstack(&self, rhs: &GradedMatrix<L>) -> GradedMatrix<L> {
        assert_eq!(self.rows.len(), rhs.rows.len(), "row mismatch in hstack");
        let mut cols = self.cols.clone();
        cols.extend(rhs.cols.iter().cloned());
        let mut columns = self.columns.clone();
        columns.extend(rhs.columns.iter().cloned());
        GradedMatrix { rows: self.rows.clone(), cols, columns }
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        let mut d = vec![vec![Rational::zero(); self.cols.len()]; self.rows.len()];
        for (c, col) in self.columns.iter().enumerate() {
            for (r, v) in col {
                d[*r][c] = v.clone();
            }
        }
        d
    }

    pub fn rank(&self) -> usize {
        self.eliminate().len()
    }

    /// Rank of the matrix and labels of the rows that span a complement of
    /// the column space, i.e. coset representatives of the cokernel.
    pub fn solve_cokernel(&self) -> (usize, Vec<L>) {
        let pivots = self.eliminate();
        let mut is_pivot = vec![false; self.rows.len()];
        for &r in &pivots {
            is_pivot[r] = true;
        }
        let coker = self
            .rows
            .iter()
            .zip(&is_pivot)
            .filter(|(_, &p)| !p)
            .map(|(l, _)| l.clone())
            .collect();
        (pivots.len(), coker)
    }

    /// Returns the pivot rows chosen by the elimination.
    fn eliminate(&self) -> Vec<usize> {
        let n = self.rows.len();
        // rows that occur in few columns make cheap pivots
        let mut row_count = vec![0usize; n];
        for col in &self.columns {
            for (r, _) in col {
                row_count[*r] += 1;
            }
        }
        let mut pivot_of_row: Vec<Option<usize>> = vec![None; n];
        let mut pivot_rows: Vec<usize> = Vec::new();
        let mut pivot_vecs: Vec<SparseVec> = Vec::new();

        for col in &self.columns {
            for (r, _) in col {
                row_count[*r] -= 1;
            }
            let mut v = col.clone();
            let mut pending: BTreeSet<usize> = v.iter().filter_map(|(r, _)| pivot_of_row[*r]).collect();
            while let Some(j) = pending.pop_first() {
                let r = pivot_rows[j];
                let coef = match v.binary_search_by_key(&r, |(i, _)| *i) {
                    Ok(k) => v[k].1.clone(),
                    Err(_) => continue,
                };
                v = axpy(&v, &pivot_vecs[j], &-coef);
                for (row, _) in &v {
                    if let Some(p) = pivot_of_row[*row] {
                        if p > j {
                            pending.insert(p);
                        }
                    }
                }
            }
            if v.is_empty() {
                continue;
            }
            let (_, (r, pv)) = v
                .iter()
                .enumerate()
                .min_by_key(|(_, (r, val))| (row_count[*r], height(val), *r))
                .map(|(k, (r, val))| (k, (*r, val.clone())))
                .expect("nonempty");
            let inv = Rational::one() / pv;
            let normalized: SparseVec = v.into_iter().map(|(i, x)| (i, x * &inv)).collect();
            pivot_of_row[r] = Some(pivot_rows.len());
            pivot_rows.push(r);
            pivot_vecs.push(normalized);
        }
        pivot_rows
    }
}

/// `a + s * b` for sorted sparse vectors.
fn axpy(a: &[(usize, Rational)], b: &[(usize, Rational)], s: &Rational) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, &b[j].1 * s));
            j += 1;
        } else {
            let v = &a[i].1 + &b[j].1 * s;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::{int, rat};
    use proptest::prelude::*;

    /// Textbook dense row reduction, written independently of the sparse
    /// column elimination above.
    fn dense_rank(mut a: Vec<Vec<Rational>>) -> usize {
        let rows = a.len();
        let cols = if rows == 0 { 0 } else { a[0].len() };
        let mut rank = 0;
        for c in 0..cols {
            let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else { continue };
            a.swap(rank, p);
            let prow = a[rank].clone();
            for (r, row) in a.iter_mut().enumerate() {
                if r != rank && !row[c].is_zero() {
                    let f = &row[c] / &prow[c];
                    for (x, y) in row.iter_mut().zip(&prow).skip(c) {
                        *x -= y * &f;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    fn from_dense(d: &[Vec<i64>]) -> GradedMatrix<usize> {
        let rows = d.len();
        let cols = if rows == 0 { 0 } else { d[0].len() };
        let mut m = GradedMatrix::new((0..rows).collect(), (0..cols).collect());
        for (r, row) in d.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                m.add_to(r, c, int(v));
            }
        }
        m
    }

    #[test]
    fn zero_matrix() {
        let m: GradedMatrix<&str> = GradedMatrix::new(vec!["a", "b", "c"], vec!["u", "v"]);
        assert_eq!(m.solve_cokernel(), (0, vec!["a", "b", "c"]));
    }

    #[test]
    fn identity() {
        let m = GradedMatrix::identity(vec![1, 2, 3, 4]);
        assert_eq!(m.solve_cokernel(), (4, vec![]));
    }

    #[test]
    fn cokernel_representatives_complete_the_image() {
        let m = from_dense(&[vec![1, 2], vec![2, 4], vec![0, 1]]);
        let (rank, coker) = m.solve_cokernel();
        assert_eq!(rank, 2);
        assert_eq!(coker.len(), 1);
        // image plus the representative unit vectors spans everything
        let mut ext = m.clone();
        let units: Vec<usize> = coker.clone();
        let mut extra = GradedMatrix::new(m.rows().to_vec(), units.clone());
        for (c, r) in units.iter().enumerate() {
            extra.add_to(*r, c, int(1));
        }
        ext = ext.hstack(&extra);
        assert_eq!(ext.rank(), 3);
    }

    #[test]
    fn random_six_by_four_against_dense() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let mut m = GradedMatrix::new((0..6).collect::<Vec<_>>(), (0..4).collect::<Vec<_>>());
            for r in 0..6 {
                for c in 0..4 {
                    if rng.gen_bool(0.6) {
                        m.add_to(r, c, rat(rng.gen_range(-9..10), rng.gen_range(1..6)));
                    }
                }
            }
            assert_eq!(m.rank(), dense_rank(m.to_dense()));
        }
    }

    #[test]
    fn compose_and_rank_of_product() {
        let a = from_dense(&[vec![1, 0], vec![0, 1], vec![1, 1]]);
        let b = from_dense(&[vec![1, -1, 0], vec![0, 0, 0]]);
        let p = a.compose(&b);
        assert_eq!(p.to_dense()[2], vec![int(1), int(-1), int(0)]);
        assert_eq!(p.rank(), 1);
    }

    fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..=8, 1usize..=8).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-3i64..=3, c), r))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn agrees_with_dense_elimination(d in small_matrix()) {
            let m = from_dense(&d);
            let (rank, coker) = m.solve_cokernel();
            prop_assert_eq!(rank, dense_rank(m.to_dense()));
            prop_assert_eq!(rank + coker.len(), m.n_rows());
        }
    }
}
