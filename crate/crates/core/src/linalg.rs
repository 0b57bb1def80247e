//! Dense exact linear algebra, generic over the scalar type.
//!
//! Field-scalar routines (elimination, rank, solve, kernel) and
//! integer-scalar routines (Smith normal form with unimodular transforms,
//! saturated kernels, diophantine solving). Matrices are small and dense;
//! the one sparse routine ([`rank_sparse`]) exists for the incidence
//! matrices of degreewise Čech complexes, which are large but very sparse.

use std::collections::BTreeMap;

use crate::scalar::{FieldScalar, IntScalar, Scalar};

/// Dense row-major matrix. Zero-row and zero-column shapes are legal;
/// several fan operations hit them (e.g. the zero cone has no rays).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Mat<T> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Builds a matrix with an explicit column count, so zero-row matrices
    /// keep their shape.
    pub fn from_rows_with_cols(rows: Vec<Vec<T>>, cols: usize) -> Self {
        let r = rows.len();
        assert!(rows.iter().all(|row| row.len() == cols), "ragged rows");
        Mat { rows: r, cols, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j).clone() + a.clone() * other.get(k, j).clone();
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Mat<U> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[i] -= q * row[k]
    fn row_sub(&mut self, i: usize, k: usize, q: &T) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.get(i, j).clone() - q.clone() * self.get(k, j).clone();
            self.set(i, j, v);
        }
    }

    /// col[j] -= q * col[k]
    fn col_sub(&mut self, j: usize, k: usize, q: &T) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self.get(i, j).clone() - q.clone() * self.get(i, k).clone();
            self.set(i, j, v);
        }
    }

    /// col[j] += q * col[k]
    fn col_add(&mut self, j: usize, k: usize, q: &T) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self.get(i, j).clone() + q.clone() * self.get(i, k).clone();
            self.set(i, j, v);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j).clone();
            self.set(i, j, v);
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -self.get(i, j).clone();
            self.set(i, j, v);
        }
    }
}

pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    assert_eq!(a.len(), b.len(), "dimension mismatch");
    let mut acc = T::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc = acc + x.clone() * y.clone();
        }
    }
    acc
}

// ---------------------------------------------------------------------------
// Field-scalar routines
// ---------------------------------------------------------------------------

/// Row echelon elimination in place; returns the pivot columns in order.
pub fn row_echelon<T: FieldScalar>(m: &mut Mat<T>) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols() {
        if r == m.rows() {
            break;
        }
        let Some(p) = (r..m.rows()).find(|&i| !m.get(i, c).is_zero()) else {
            continue;
        };
        m.swap_rows(r, p);
        let inv_pivot = T::one() / m.get(r, c).clone();
        for j in c..m.cols() {
            let v = m.get(r, j).clone() * inv_pivot.clone();
            m.set(r, j, v);
        }
        for i in 0..m.rows() {
            if i != r && !m.get(i, c).is_zero() {
                let q = m.get(i, c).clone();
                m.row_sub(i, r, &q);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<T: FieldScalar>(m: &Mat<T>) -> usize {
    let mut work = m.clone();
    row_echelon(&mut work).len()
}

/// Particular solution of `a x = b` with free variables set to zero, or
/// `None` if the system is inconsistent.
pub fn solve<T: FieldScalar>(a: &Mat<T>, b: &[T]) -> Option<Vec<T>> {
    assert_eq!(a.rows(), b.len(), "dimension mismatch");
    let mut aug = Mat::zero(a.rows(), a.cols() + 1);
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            aug.set(i, j, a.get(i, j).clone());
        }
        aug.set(i, a.cols(), b[i].clone());
    }
    let pivots = row_echelon(&mut aug);
    if pivots.last() == Some(&a.cols()) {
        return None; // pivot in the constant column
    }
    let mut x = vec![T::zero(); a.cols()];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug.get(r, a.cols()).clone();
    }
    Some(x)
}

/// Basis of the right kernel `{x : a x = 0}`.
pub fn kernel<T: FieldScalar>(a: &Mat<T>) -> Vec<Vec<T>> {
    let mut work = a.clone();
    let pivots = row_echelon(&mut work);
    let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..a.cols() {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![T::zero(); a.cols()];
        v[free] = T::one();
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = -work.get(r, free).clone();
        }
        basis.push(v);
    }
    basis
}

/// Rank of a sparse matrix given as rows of `(column, value)` maps.
///
/// Incremental row reduction against a pivot table. Rows are processed
/// sparsest-first, which keeps fill-in small on the near-unimodular
/// incidence matrices this is used for.
pub fn rank_sparse<T: FieldScalar>(rows: Vec<BTreeMap<usize, T>>) -> usize {
    let mut order: Vec<BTreeMap<usize, T>> = rows.into_iter().filter(|r| !r.is_empty()).collect();
    order.sort_by_key(BTreeMap::len);
    let mut pivots: BTreeMap<usize, BTreeMap<usize, T>> = BTreeMap::new();
    for mut row in order {
        loop {
            let Some((&lead, _)) = row.iter().next() else {
                break;
            };
            let Some(pivot) = pivots.get(&lead) else {
                break;
            };
            let factor = row[&lead].clone();
            for (c, v) in pivot {
                let entry = row.entry(*c).or_insert_with(T::zero);
                *entry = entry.clone() - factor.clone() * v.clone();
                if entry.is_zero() {
                    row.remove(c);
                }
            }
        }
        if let Some((&lead, lv)) = row.iter().next() {
            let inv = T::one() / lv.clone();
            let normalized: BTreeMap<usize, T> =
                row.iter().map(|(c, v)| (*c, v.clone() * inv.clone())).collect();
            pivots.insert(lead, normalized);
        }
    }
    pivots.len()
}

// ---------------------------------------------------------------------------
// Integer-scalar routines
// ---------------------------------------------------------------------------

/// Smith normal form `u * a * v = d` with `u`, `v` unimodular, `d` diagonal
/// with nonnegative entries satisfying the divisibility chain
/// `d[0] | d[1] | ...`. Inverse transforms are tracked alongside.
#[derive(Clone, Debug)]
pub struct Smith<T> {
    pub d: Mat<T>,
    pub u: Mat<T>,
    pub u_inv: Mat<T>,
    pub v: Mat<T>,
    pub v_inv: Mat<T>,
    /// Nonzero invariant factors, in chain order.
    pub factors: Vec<T>,
    pub rank: usize,
}

pub fn smith<T: IntScalar>(a: &Mat<T>) -> Smith<T> {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = Mat::identity(m);
    let mut u_inv = Mat::identity(m);
    let mut v = Mat::identity(n);
    let mut v_inv = Mat::identity(n);

    // Row op row[i] -= q*row[k] on d mirrors to u; u_inv gets the inverse
    // column op. Column ops mirror to v / v_inv symmetrically.
    let mut k = 0;
    while k < m.min(n) {
        // Pivot: entry of minimal absolute value in the trailing block.
        let mut pivot: Option<(usize, usize)> = None;
        for i in k..m {
            for j in k..n {
                if d.get(i, j).is_zero() {
                    continue;
                }
                match &pivot {
                    Some((pi, pj)) if d.get(*pi, *pj).abs() <= d.get(i, j).abs() => {}
                    _ => pivot = Some((i, j)),
                }
            }
        }
        let Some((pi, pj)) = pivot else {
            break;
        };
        d.swap_rows(k, pi);
        u.swap_rows(k, pi);
        u_inv.swap_cols(k, pi);
        d.swap_cols(k, pj);
        v.swap_cols(k, pj);
        v_inv.swap_rows(k, pj);

        loop {
            let mut dirty = false;
            for i in k + 1..m {
                if !d.get(i, k).is_zero() {
                    let q = quotient_nearest(d.get(i, k), d.get(k, k));
                    d.row_sub(i, k, &q);
                    u.row_sub(i, k, &q);
                    u_inv.col_add(k, i, &q);
                    if !d.get(i, k).is_zero() {
                        // Remainder strictly smaller in absolute value:
                        // promote it to the pivot slot and restart.
                        d.swap_rows(k, i);
                        u.swap_rows(k, i);
                        u_inv.swap_cols(k, i);
                        dirty = true;
                    }
                }
            }
            for j in k + 1..n {
                if !d.get(k, j).is_zero() {
                    let q = quotient_nearest(d.get(k, j), d.get(k, k));
                    d.col_sub(j, k, &q);
                    v.col_sub(j, k, &q);
                    v_inv.row_sub(k, j, &-q);
                    if !d.get(k, j).is_zero() {
                        d.swap_cols(k, j);
                        v.swap_cols(k, j);
                        v_inv.swap_rows(k, j);
                        dirty = true;
                    }
                }
            }
            if !dirty {
                break;
            }
        }

        // Divisibility fix-up: fold a non-divisible entry into row k.
        let mut fixed = true;
        'scan: for i in k + 1..m {
            for j in k + 1..n {
                if !d.get(i, j).mod_floor(d.get(k, k)).is_zero() {
                    let one = T::one();
                    d.row_sub(k, i, &-one.clone());
                    u.row_sub(k, i, &-one.clone());
                    u_inv.col_add(i, k, &-one);
                    fixed = false;
                    break 'scan;
                }
            }
        }
        if fixed {
            if d.get(k, k).is_negative() {
                d.negate_row(k);
                u.negate_row(k);
                u_inv.negate_col(k);
            }
            k += 1;
        }
    }

    let rank = k;
    let factors = (0..rank).map(|i| d.get(i, i).clone()).collect();
    Smith { d, u, u_inv, v, v_inv, factors, rank }
}

/// Nearest-integer quotient; the remainder `a - q*b` satisfies
/// `|a - q*b| <= |b|/2`, which makes the Smith elimination terminate fast.
fn quotient_nearest<T: IntScalar>(a: &T, b: &T) -> T {
    let (q, r) = a.div_rem(b);
    if r.abs() + r.abs() > b.abs() {
        if r.is_negative() == b.is_negative() {
            q + T::one()
        } else {
            q - T::one()
        }
    } else {
        q
    }
}

/// Basis of the saturated integer kernel `{x in Z^n : a x = 0}`.
pub fn int_kernel<T: IntScalar>(a: &Mat<T>) -> Vec<Vec<T>> {
    let s = smith(a);
    (s.rank..a.cols()).map(|j| s.v.col(j)).collect()
}

/// Exact solution data for an integer linear system `a x = b`.
#[derive(Clone, Debug)]
pub struct Diophantine<T> {
    /// Least `m >= 1` such that `a x = m b` has an integer solution, when
    /// the system is consistent over the rationals.
    pub denominator: T,
    /// Particular rational solution with free variables zero.
    pub rational: Vec<num_rational::Ratio<T>>,
    /// Particular integer solution, when `denominator == 1`.
    pub integral: Option<Vec<T>>,
}

/// Solves `a x = b` exactly; `None` when inconsistent over the rationals.
pub fn solve_diophantine<T: IntScalar>(a: &Mat<T>, b: &[T]) -> Option<Diophantine<T>> {
    use num_rational::Ratio;
    assert_eq!(a.rows(), b.len(), "dimension mismatch");
    let s = smith(a);
    let ub = s.u.mul_vec(b);
    for item in ub.iter().skip(s.rank) {
        if !item.is_zero() {
            return None;
        }
    }
    let mut denominator = T::one();
    let mut y: Vec<Ratio<T>> = vec![Ratio::from_integer(T::zero()); a.cols()];
    for k in 0..s.rank {
        let dk = s.d.get(k, k).clone();
        let g = ub[k].gcd(&dk);
        denominator = denominator.lcm(&(dk.clone() / g));
        y[k] = Ratio::new(ub[k].clone(), dk);
    }
    // x = v y
    let v_rat = s.v.map(|e| Ratio::from_integer(e.clone()));
    let rational = v_rat.mul_vec(&y);
    let integral = if denominator.is_one() {
        Some(rational.iter().map(|r| r.to_integer()).collect())
    } else {
        None
    };
    Some(Diophantine { denominator, rational, integral })
}

/// Rank over the fraction field of an integer matrix.
pub fn int_rank<T: IntScalar>(a: &Mat<T>) -> usize {
    smith(a).rank
}
