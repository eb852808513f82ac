//! Dense exact linear algebra: matrices of [`Scalar`], fraction-free rank,
//! reduced echelon forms and tracked subspaces.

use crate::field::{Field, Scalar};

/// Row-major dense matrix over a single field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    /// Builds a `rows × columns.len()` matrix from column vectors.
    pub fn from_columns(field: Field, rows: usize, columns: &[Vec<Scalar>]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Scalar) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Scalar>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "vector length");
        (0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "inner dimension");
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let cur = out.get(i, j) + &(a * b);
                        out.set(i, j, cur);
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    /// Nonzero entries as `(row, col, value)`, row-major.
    pub fn triplets(&self) -> Vec<(usize, usize, Scalar)> {
        let mut out = Vec::new();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let x = self.get(i, j);
                if !x.is_zero() {
                    out.push((i, j, x.clone()));
                }
            }
        }
        out
    }

    /// Rank by fraction-free (Bareiss) elimination; the pivot in each
    /// column is the first nonzero entry among the remaining rows.
    #[allow(clippy::needless_range_loop)]
    pub fn rank(&self) -> usize {
        let mut m: Vec<Vec<Scalar>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        let mut prev = self.field.one();
        let mut r = 0;
        for c in 0..self.cols {
            let Some(p) = (r..self.rows).find(|&i| !m[i][c].is_zero()) else { continue };
            m.swap(r, p);
            let pivot = m[r][c].clone();
            for i in r + 1..self.rows {
                let lead = m[i][c].clone();
                for j in c + 1..self.cols {
                    let x = &(&m[i][j] * &pivot) - &(&lead * &m[r][j]);
                    m[i][j] = &x / &prev;
                }
                m[i][c] = self.field.zero();
            }
            prev = pivot;
            r += 1;
            if r == self.rows {
                break;
            }
        }
        r
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else { continue };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inverse().expect("nonzero pivot");
            for j in c..m.cols {
                let x = m.get(r, j) * &inv;
                m.set(r, j, x);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let x = m.get(i, j) - &(&f * m.get(r, j));
                    m.set(i, j, x);
                }
            }
            pivots.push(c);
            r += 1;
            if r == m.rows {
                break;
            }
        }
        (m, pivots)
    }

    /// Kernel basis, one vector per free column in increasing order.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let (r, pivots) = self.rref();
        Self::nullspace_from_rref(&r, &pivots)
    }

    /// Kernel basis read off a reduced echelon form.
    pub fn nullspace_from_rref(r: &Matrix, pivots: &[usize]) -> Vec<Vec<Scalar>> {
        let mut is_pivot = vec![false; r.cols];
        for &p in pivots {
            is_pivot[p] = true;
        }
        (0..r.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = vec![r.field.zero(); r.cols];
                v[f] = r.field.one();
                for (k, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(k, f);
                }
                v
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

/// Subspace of `field^ambient` kept in reduced echelon form. Each echelon
/// row remembers its expression in the vectors accepted by
/// [`Subspace::insert`], so membership queries also return coefficients.
#[derive(Clone, Debug)]
pub struct Subspace {
    field: Field,
    ambient: usize,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
    combos: Vec<Vec<Scalar>>,
    generators: usize,
}

impl Subspace {
    pub fn new(field: Field, ambient: usize) -> Self {
        Subspace { field, ambient, rows: Vec::new(), pivots: Vec::new(), combos: Vec::new(), generators: 0 }
    }

    pub fn spanned_by<'a>(field: Field, ambient: usize, vectors: impl IntoIterator<Item = &'a Vec<Scalar>>) -> Self {
        let mut s = Self::new(field, ambient);
        for v in vectors {
            s.insert(v);
        }
        s
    }

    pub fn whole(field: Field, ambient: usize) -> Self {
        let mut s = Self::new(field, ambient);
        for i in 0..ambient {
            s.insert(&unit(field, ambient, i));
        }
        s
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Echelon rows, sorted by pivot column.
    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Number of independent vectors accepted so far (equals `dim`).
    pub fn generator_count(&self) -> usize {
        self.generators
    }

    /// Residual of `v` and the coefficients (over accepted generators)
    /// of the part removed.
    fn reduce_tracked(&self, v: &[Scalar]) -> (Vec<Scalar>, Vec<Scalar>) {
        assert_eq!(v.len(), self.ambient, "vector length");
        let mut v = v.to_vec();
        let mut combo = vec![self.field.zero(); self.generators];
        for ((row, &p), rc) in self.rows.iter().zip(&self.pivots).zip(&self.combos) {
            let c = v[p].clone();
            if c.is_zero() {
                continue;
            }
            for (x, y) in v.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x = &*x - &(&c * y);
                }
            }
            for (x, y) in combo.iter_mut().zip(rc) {
                if !y.is_zero() {
                    *x = &*x + &(&c * y);
                }
            }
        }
        (v, combo)
    }

    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.reduce_tracked(v).0
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(Scalar::is_zero)
    }

    /// Coefficients of `v` over the accepted generators, if `v` lies in the span.
    pub fn express(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let (res, combo) = self.reduce_tracked(v);
        res.iter().all(Scalar::is_zero).then_some(combo)
    }

    /// Adds `v`; returns `true` when it was independent of the current span.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        let (mut res, removed) = self.reduce_tracked(v);
        let Some(p) = res.iter().position(|x| !x.is_zero()) else { return false };
        let gen = self.generators;
        self.generators += 1;
        for c in &mut self.combos {
            c.push(self.field.zero());
        }
        // new row = (v - removed part) / pivot
        let mut combo: Vec<Scalar> = removed.iter().map(|x| -x).collect();
        combo.push(self.field.one());
        let inv = res[p].inverse().expect("nonzero pivot");
        for x in res.iter_mut() {
            *x = &*x * &inv;
        }
        for x in combo.iter_mut() {
            *x = &*x * &inv;
        }
        for (row, rc) in self.rows.iter_mut().zip(self.combos.iter_mut()) {
            let f = row[p].clone();
            if f.is_zero() {
                continue;
            }
            for (x, y) in row.iter_mut().zip(&res) {
                if !y.is_zero() {
                    *x = &*x - &(&f * y);
                }
            }
            for (x, y) in rc.iter_mut().zip(&combo) {
                if !y.is_zero() {
                    *x = &*x - &(&f * y);
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.rows.insert(at, res);
        self.pivots.insert(at, p);
        self.combos.insert(at, combo);
        debug_assert_eq!(gen + 1, self.generators);
        true
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }

    /// Equality of spans (reduced echelon forms are canonical).
    pub fn same_span(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient && self.pivots == other.pivots && self.rows == other.rows
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut s = self.untracked();
        for r in &other.rows {
            s.insert(r);
        }
        s
    }

    /// Same span with the generator bookkeeping reset to the echelon rows.
    pub fn untracked(&self) -> Subspace {
        Subspace::spanned_by(self.field, self.ambient, &self.rows)
    }
}

pub fn unit(field: Field, n: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![field.zero(); n];
    v[i] = field.one();
    v
}

pub fn is_zero_vector(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64) -> Scalar {
        Field::Rational.from_i64(n)
    }

    fn random_matrix(rng: &mut ChaCha8Rng, field: Field) -> Matrix {
        let (r, c) = (rng.gen_range(0..7), rng.gen_range(0..7));
        let mut m = Matrix::zeros(field, r, c);
        let density = rng.gen_range(0.1..0.9);
        for i in 0..r {
            for j in 0..c {
                if rng.gen_bool(density) {
                    m.set(i, j, field.from_i64(rng.gen_range(-4..=4)));
                }
            }
        }
        m
    }

    #[test]
    fn small_ranks() {
        let mut m = Matrix::zeros(Field::Rational, 2, 3);
        for j in 0..3 {
            m.set(0, j, q(1));
            m.set(1, j, q(2));
        }
        assert_eq!(m.rank(), 1);
        assert_eq!(m.nullspace().len(), 2);
        assert_eq!(Matrix::zeros(Field::Rational, 0, 4).rank(), 0);
        assert_eq!(Matrix::zeros(Field::Rational, 0, 4).nullspace().len(), 4);
    }

    #[test]
    fn tracked_expression() {
        let f = Field::Rational;
        let mut s = Subspace::new(f, 3);
        assert!(s.insert(&[q(1), q(1), q(0)]));
        assert!(s.insert(&[q(0), q(1), q(1)]));
        assert!(!s.insert(&[q(1), q(2), q(1)]));
        let c = s.express(&[q(2), q(5), q(3)]).unwrap();
        assert_eq!(c, vec![q(2), q(3)]);
        assert!(s.express(&[q(0), q(0), q(1)]).is_none());
        assert!(Subspace::whole(f, 3).same_span(&s.sum(&Subspace::spanned_by(f, 3, &[unit(f, 3, 2)]))));
    }

    proptest! {
        #[test]
        fn bareiss_matches_rref_and_rank_nullity(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for field in [Field::Rational, Field::Prime(7)] {
                let m = random_matrix(&mut rng, field);
                let (_, pivots) = m.rref();
                prop_assert_eq!(m.rank(), pivots.len());
                let ker = m.nullspace();
                prop_assert_eq!(m.rank() + ker.len(), m.cols());
                for v in &ker {
                    prop_assert!(is_zero_vector(&m.mul_vec(v)));
                }
            }
        }

        #[test]
        fn subspace_expression_reconstructs(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = random_matrix(&mut rng, Field::Rational);
            let cols = m.columns();
            let mut s = Subspace::new(Field::Rational, m.rows());
            let mut accepted = Vec::new();
            for c in &cols {
                if s.insert(c) {
                    accepted.push(c.clone());
                }
            }
            prop_assert_eq!(s.dim(), m.rank());
            for c in &cols {
                let coeffs = s.express(c).unwrap();
                let mut back = vec![Field::Rational.zero(); m.rows()];
                for (k, a) in coeffs.iter().enumerate() {
                    for (x, y) in back.iter_mut().zip(&accepted[k]) {
                        *x = &*x + &(a * y);
                    }
                }
                prop_assert_eq!(&back, c);
            }
        }
    }
}
