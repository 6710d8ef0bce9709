//! Exact linear algebra over the rationals.
//!
//! Elimination is fraction-free: rows are scaled to primitive integer rows
//! and combined as `p * row - a * pivot_row`, then divided by their content.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::modular::kernel_modular;
use super::poly::Polynomial;
use super::rational::{primitive_integer_vector, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::ArityMismatch {
                left: cols,
                right: bad.len(),
            });
        }
        Ok(RationalMatrix {
            rows: rows.len(),
            cols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Rational::from_integer(v.into())).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::ArityMismatch {
                left: self.cols,
                right: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn mul(&self, other: &RationalMatrix) -> Result<RationalMatrix> {
        if self.cols != other.rows {
            return Err(Error::ArityMismatch {
                left: self.cols,
                right: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let s: Rational = (0..self.cols).map(|k| self.get(i, k) * other.get(k, j)).sum();
                out.set(i, j, s);
            }
        }
        Ok(out)
    }

    /// Leading principal minors; all positive iff symmetric positive definite
    /// (for symmetric input).
    pub fn leading_minors(&self) -> Vec<Rational> {
        (1..=self.rows.min(self.cols))
            .map(|k| {
                let mut sub = Self::zeros(k, k);
                for i in 0..k {
                    for j in 0..k {
                        sub.set(i, j, self.get(i, j).clone());
                    }
                }
                sub.determinant().expect("square")
            })
            .collect()
    }

    /// Scalar determinant by rational Gaussian elimination.
    pub fn determinant(&self) -> Result<Rational> {
        if self.rows != self.cols {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut a: Vec<Vec<Rational>> = (0..n).map(|r| self.row(r).to_vec()).collect();
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
                return Ok(Rational::zero());
            };
            if p != c {
                a.swap(p, c);
                det = -det;
            }
            let piv = a[c][c].clone();
            det *= &piv;
            for r in c + 1..n {
                if a[r][c].is_zero() {
                    continue;
                }
                let f = &a[r][c] / &piv;
                for j in c..n {
                    let t = &f * &a[c][j];
                    a[r][j] -= t;
                }
            }
        }
        Ok(det)
    }

    pub fn rank(&self) -> usize {
        let mut ech = Echelon::new(self.cols);
        for r in 0..self.rows {
            ech.insert_rational(self.row(r));
        }
        ech.rank()
    }
}

/// Sparse integer row: sorted `(column, nonzero value)` pairs.
#[derive(Clone, Debug, Default)]
pub(crate) struct SparseRow {
    entries: Vec<(usize, BigInt)>,
}

impl SparseRow {
    pub(crate) fn from_rational(values: &[Rational]) -> Self {
        let ints = primitive_integer_vector(values);
        SparseRow {
            entries: ints
                .into_iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        }
    }

    /// From sparse rational entries (sorted or not, distinct columns).
    pub(crate) fn from_sparse_rational(mut entries: Vec<(usize, Rational)>) -> Self {
        entries.retain(|(_, v)| !v.is_zero());
        entries.sort_by_key(|(c, _)| *c);
        let vals: Vec<Rational> = entries.iter().map(|(_, v)| v.clone()).collect();
        let ints = primitive_integer_vector(&vals);
        SparseRow {
            entries: entries.into_iter().map(|(c, _)| c).zip(ints).collect(),
        }
    }

    pub(crate) fn entries(&self) -> &[(usize, BigInt)] {
        &self.entries
    }

    fn lead(&self) -> Option<usize> {
        self.entries.first().map(|(c, _)| *c)
    }

    fn make_primitive(&mut self) {
        let mut g = BigInt::zero();
        for (_, v) in &self.entries {
            g = g.gcd(v);
            if g.is_one() {
                break;
            }
        }
        let flip = self.entries.first().is_some_and(|(_, v)| v.is_negative());
        if !g.is_zero() && !g.is_one() {
            for (_, v) in self.entries.iter_mut() {
                *v /= &g;
            }
        }
        if flip {
            for (_, v) in self.entries.iter_mut() {
                *v = -std::mem::take(v);
            }
        }
    }

    /// `self <- p * self - a * pivot`, eliminating the shared leading column.
    fn eliminate(&mut self, pivot: &SparseRow) {
        let a = self.entries[0].1.clone();
        let p = pivot.entries[0].1.clone();
        let g = a.gcd(&p);
        let (a, p) = (a / &g, p / &g);
        let mut out = Vec::with_capacity(self.entries.len() + pivot.entries.len());
        let (mut i, mut j) = (1, 1);
        let (x, y) = (&self.entries, &pivot.entries);
        while i < x.len() || j < y.len() {
            let cx = x.get(i).map(|e| e.0);
            let cy = y.get(j).map(|e| e.0);
            match (cx, cy) {
                (Some(c1), Some(c2)) if c1 == c2 => {
                    let v = &x[i].1 * &p - &y[j].1 * &a;
                    if !v.is_zero() {
                        out.push((c1, v));
                    }
                    i += 1;
                    j += 1;
                }
                (Some(c1), Some(c2)) if c1 < c2 => {
                    out.push((c1, &x[i].1 * &p));
                    i += 1;
                }
                (Some(c1), None) => {
                    out.push((c1, &x[i].1 * &p));
                    i += 1;
                }
                (_, Some(c2)) => {
                    out.push((c2, -(&y[j].1 * &a)));
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        self.entries = out;
        self.make_primitive();
    }
}

/// Row echelon form built incrementally, keyed by pivot column.
#[derive(Clone, Debug)]
pub(crate) struct Echelon {
    cols: usize,
    pivots: BTreeMap<usize, SparseRow>,
}

impl Echelon {
    pub(crate) fn new(cols: usize) -> Self {
        Echelon {
            cols,
            pivots: BTreeMap::new(),
        }
    }

    pub(crate) fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `row` against the current pivots; returns the reduced row
    /// (empty iff `row` lies in the span).
    fn reduce(&self, mut row: SparseRow) -> SparseRow {
        row.make_primitive();
        while let Some(lead) = row.lead() {
            match self.pivots.get(&lead) {
                Some(p) => row.eliminate(p),
                None => break,
            }
        }
        row
    }

    /// Inserts a row; returns true iff it increased the rank.
    pub(crate) fn insert(&mut self, row: SparseRow) -> bool {
        let row = self.reduce(row);
        match row.lead() {
            Some(lead) => {
                self.pivots.insert(lead, row);
                true
            }
            None => false,
        }
    }

    pub(crate) fn insert_rational(&mut self, row: &[Rational]) -> bool {
        self.insert(SparseRow::from_rational(row))
    }

    /// Null-space basis by back-substitution, one vector per free column,
    /// returned in reduced row echelon form.
    pub(crate) fn null_space(&self) -> Vec<Vec<Rational>> {
        let free: Vec<usize> = (0..self.cols)
            .filter(|c| !self.pivots.contains_key(c))
            .collect();
        let mut basis = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![Rational::zero(); self.cols];
            v[f] = Rational::one();
            for (&pc, row) in self.pivots.iter().rev() {
                if pc > f {
                    // pivot rows right of f only involve columns >= pc, where
                    // v is still zero
                    continue;
                }
                let mut s = Rational::zero();
                for (c, a) in &row.entries[1..] {
                    if !v[*c].is_zero() {
                        s += &v[*c] * Rational::from_integer(a.clone());
                    }
                }
                if !s.is_zero() {
                    v[pc] = -s / Rational::from_integer(row.entries[0].1.clone());
                }
            }
            basis.push(v);
        }
        rref_rows(basis)
    }
}

/// Reduced row echelon form of the span of `rows` (zero rows dropped).
pub(crate) fn rref_rows(mut rows: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Rational::one() / &rows[r][c];
        if !inv.is_one() {
            for v in rows[r].iter_mut() {
                if !v.is_zero() {
                    *v *= &inv;
                }
            }
        }
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    rows
}

/// Null-space basis of `m`, exact and deterministic: the reduced row echelon
/// basis of the solution space (first nonzero entry of each vector is 1).
pub fn kernel(m: &RationalMatrix) -> Vec<Vec<Rational>> {
    kernel_sparse(m.cols(), (0..m.rows()).map(|r| SparseRow::from_rational(m.row(r))))
}

/// Null space of a matrix given by sparse rows with `cols` columns, in
/// reduced row echelon form. Tries the modular route first.
pub(crate) fn kernel_sparse(cols: usize, rows: impl IntoIterator<Item = SparseRow>) -> Vec<Vec<Rational>> {
    let rows: Vec<SparseRow> = rows.into_iter().collect();
    match kernel_modular(cols, &rows) {
        Some(basis) => rref_rows(basis),
        None => kernel_fraction_free(cols, rows),
    }
}

/// Null space by fraction-free elimination over the integers.
pub(crate) fn kernel_fraction_free(cols: usize, rows: impl IntoIterator<Item = SparseRow>) -> Vec<Vec<Rational>> {
    let mut ech = Echelon::new(cols);
    for row in rows {
        ech.insert(row);
        if ech.rank() == cols {
            return Vec::new();
        }
    }
    ech.null_space()
}

/// Determinant of a square polynomial matrix by fraction-free (Bareiss)
/// elimination with exact polynomial division.
pub fn poly_det(m: &[Vec<Polynomial>]) -> Result<Polynomial> {
    let n = m.len();
    if let Some(bad) = m.iter().find(|r| r.len() != n) {
        return Err(Error::NotSquare {
            rows: n,
            cols: bad.len(),
        });
    }
    if n == 0 {
        return Err(Error::InvalidParameter("empty matrix".into()));
    }
    let arity = m[0][0].arity();
    let mut a: Vec<Vec<Polynomial>> = m.to_vec();
    let mut prev = Polynomial::one(arity);
    let mut negate = false;
    for k in 0..n - 1 {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return Ok(Polynomial::zero(arity));
        };
        if p != k {
            a.swap(p, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num
                    .divide_exact(&prev)?
                    .expect("Bareiss quotient is exact");
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    Ok(if negate { -&det } else { det })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::{rat, ratio};

    fn check_kernel(m: &RationalMatrix) -> Vec<Vec<Rational>> {
        let k = kernel(m);
        for v in &k {
            assert!(m.mul_vec(v).unwrap().iter().all(Zero::is_zero));
            let first = v.iter().find(|x| !x.is_zero()).unwrap();
            assert!(first.is_one());
        }
        assert_eq!(k.len(), m.cols() - m.rank());
        k
    }

    #[test]
    fn kernel_examples() {
        assert!(check_kernel(&RationalMatrix::identity(2)).is_empty());
        assert_eq!(check_kernel(&RationalMatrix::zeros(2, 2)).len(), 2);
        let k = check_kernel(&RationalMatrix::from_i64(&[&[1, 1]]).unwrap());
        assert_eq!(k, vec![vec![rat(1), rat(-1)]]);
    }

    #[test]
    fn kernel_rational_entries() {
        let m = RationalMatrix::from_rows(vec![
            vec![ratio(1, 2), ratio(1, 3), rat(1), rat(0)],
            vec![rat(2), rat(0), ratio(-1, 5), rat(3)],
        ])
        .unwrap();
        let k = check_kernel(&m);
        assert_eq!(k.len(), 2);
    }

    #[test]
    fn scalar_determinant() {
        let m = RationalMatrix::from_i64(&[&[2, -1], &[-1, 2]]).unwrap();
        assert_eq!(m.determinant().unwrap(), rat(3));
        assert_eq!(m.leading_minors(), vec![rat(2), rat(3)]);
    }

    #[test]
    fn poly_det_examples() {
        let x = |i| Polynomial::var(2, i);
        let zero = Polynomial::zero(2);
        let d = poly_det(&[vec![x(0), zero.clone()], vec![zero.clone(), x(1)]]).unwrap();
        assert_eq!(d, &x(0) * &x(1));
        let d = poly_det(&[vec![x(0), x(1)], vec![x(0), x(1)]]).unwrap();
        assert!(d.is_zero());
        let d = poly_det(&[vec![x(0), x(1)], vec![x(1), x(0)]]).unwrap();
        assert_eq!(d, &(&x(0) * &x(0)) - &(&x(1) * &x(1)));
        assert!(matches!(
            poly_det(&[vec![x(0), x(1)]]),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn poly_det_needs_row_swap() {
        let x = |i| Polynomial::var(3, i);
        let zero = Polynomial::zero(3);
        let m = vec![
            vec![zero.clone(), x(0), x(1)],
            vec![x(2), zero.clone(), x(0)],
            vec![x(1), x(2), zero],
        ];
        // det = x0*x0*x1 + x1*x2*x2  (cofactor expansion by hand)
        let expect = &(&(&x(0) * &x(0)) * &x(1)) + &(&(&x(1) * &x(2)) * &x(2));
        assert_eq!(poly_det(&m).unwrap(), expect);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
            (1usize..6, 1usize..7).prop_flat_map(|(r, c)| {
                proptest::collection::vec(proptest::collection::vec(-4i64..=4, c), r)
            })
        }

        fn to_matrix(rows: &[Vec<i64>]) -> RationalMatrix {
            RationalMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()).unwrap()
        }

        proptest! {
            #[test]
            fn kernel_is_annihilated(rows in small_matrix()) {
                let m = to_matrix(&rows);
                let k = kernel(&m);
                for v in &k {
                    prop_assert!(m.mul_vec(v).unwrap().iter().all(Zero::is_zero));
                }
                prop_assert_eq!(k.len(), m.cols() - m.rank());
            }

            #[test]
            fn modular_and_fraction_free_agree(rows in small_matrix()) {
                let m = to_matrix(&rows);
                let sparse = || (0..m.rows()).map(|r| SparseRow::from_rational(m.row(r)));
                prop_assert_eq!(kernel_sparse(m.cols(), sparse()), kernel_fraction_free(m.cols(), sparse()));
            }

            #[test]
            fn poly_det_matches_pointwise(
                entries in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 3), 9),
                point in proptest::collection::vec(-5i64..=5, 2),
            ) {
                // 3x3 matrix of linear forms a*x0 + b*x1 + c in two variables
                let poly = |e: &Vec<i64>| {
                    let mut p = Polynomial::linear(&e[..2]);
                    p.add_term(crate::exactalg::Monomial::one(2), rat(e[2]));
                    p
                };
                let m: Vec<Vec<Polynomial>> = entries.chunks(3).map(|row| row.iter().map(poly).collect()).collect();
                let pt: Vec<Rational> = point.iter().map(|&x| rat(x)).collect();
                let det = poly_det(&m).unwrap();
                let scalar = RationalMatrix::from_rows(
                    m.iter().map(|row| row.iter().map(|p| p.eval(&pt).unwrap()).collect()).collect(),
                ).unwrap().determinant().unwrap();
                prop_assert_eq!(det.eval(&pt).unwrap(), scalar);
            }
        }
    }
}
