//! Exact rational and integer linear algebra.
//!
//! Everything here works on arbitrary-precision values. There are no
//! tolerances: ranks, kernels and lattice indices are computed exactly.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;
pub type Z = BigInt;

pub fn q(n: i64) -> Q {
    Q::from_integer(Z::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(Z::from(n), Z::from(d))
}

/// A point or direction with exact rational entries.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct QVector(pub Vec<Q>);

impl QVector {
    pub fn zeros(dim: usize) -> Self {
        QVector(vec![Q::zero(); dim])
    }

    pub fn from_ints<I: IntoIterator<Item = i64>>(it: I) -> Self {
        QVector(it.into_iter().map(q).collect())
    }

    pub fn from_z(v: &[Z]) -> Self {
        QVector(v.iter().map(|x| Q::from_integer(x.clone())).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &QVector) -> Q {
        dot(&self.0, &other.0)
    }

    pub fn scale(&self, s: &Q) -> QVector {
        QVector(self.0.iter().map(|x| x * s).collect())
    }

    /// Scales to the primitive integer vector with the same direction.
    /// The zero vector maps to itself.
    pub fn primitive(&self) -> Vec<Z> {
        primitive_direction(&self.0)
    }

    /// Entries as integers, if all denominators are one.
    pub fn to_integers(&self) -> Option<Vec<Z>> {
        self.0
            .iter()
            .map(|x| if x.is_integer() { Some(x.to_integer()) } else { None })
            .collect()
    }
}

impl Index<usize> for QVector {
    type Output = Q;
    fn index(&self, i: usize) -> &Q {
        &self.0[i]
    }
}

impl IndexMut<usize> for QVector {
    fn index_mut(&mut self, i: usize) -> &mut Q {
        &mut self.0[i]
    }
}

impl Add for &QVector {
    type Output = QVector;
    fn add(self, rhs: &QVector) -> QVector {
        QVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &QVector {
    type Output = QVector;
    fn sub(self, rhs: &QVector) -> QVector {
        QVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &QVector {
    type Output = QVector;
    fn neg(self) -> QVector {
        QVector(self.0.iter().map(|a| -a).collect())
    }
}

impl Mul<&Q> for &QVector {
    type Output = QVector;
    fn mul(self, s: &Q) -> QVector {
        self.scale(s)
    }
}

impl fmt::Display for QVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

/// A rectangular matrix of arbitrary-precision integers, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<Z>>,
}

impl ZMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ZMatrix { rows, cols, data: vec![vec![Z::zero(); cols]; rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = Z::one();
        }
        m
    }

    /// Builds a matrix from rows. All rows must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Z>>) -> Result<Self> {
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged matrix rows".into()));
        }
        Ok(ZMatrix { rows: rows.len(), cols, data: rows })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data: Vec<Vec<Z>> =
            rows.iter().map(|r| r.iter().map(|&x| Z::from(x)).collect()).collect();
        assert!(data.iter().all(|r| r.len() == cols), "ragged matrix rows");
        ZMatrix { rows: data.len(), cols, data }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Z] {
        &self.data[i]
    }

    pub fn rows(&self) -> &[Vec<Z>] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &Z {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Z) {
        self.data[i][j] = v;
    }

    pub fn transpose(&self) -> ZMatrix {
        let mut t = ZMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j][i] = self.data[i][j].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &ZMatrix) -> ZMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = ZMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.data[i][k].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i][j] += &self.data[i][k] * &other.data[k][j];
                }
            }
        }
        out
    }

    /// Submatrix on the given column indices.
    pub fn select_columns(&self, cols: &[usize]) -> ZMatrix {
        let data = self
            .data
            .iter()
            .map(|r| cols.iter().map(|&c| r[c].clone()).collect())
            .collect();
        ZMatrix { rows: self.rows, cols: cols.len(), data }
    }

    fn col_swap(&mut self, a: usize, b: usize) {
        for r in &mut self.data {
            r.swap(a, b);
        }
    }

    /// column `dst` += factor * column `src`
    fn col_axpy(&mut self, dst: usize, src: usize, factor: &Z) {
        for r in &mut self.data {
            let add = &r[src] * factor;
            r[dst] += add;
        }
    }

    fn col_neg(&mut self, c: usize) {
        for r in &mut self.data {
            r[c] = -&r[c];
        }
    }

    pub fn rank(&self) -> usize {
        let rows: Vec<Vec<Q>> = self
            .data
            .iter()
            .map(|r| r.iter().map(|x| Q::from_integer(x.clone())).collect())
            .collect();
        rank_q(&rows, self.cols)
    }
}

/// Result of unimodular column reduction: `A * U = H`, where the first `rank`
/// columns of `H` are in lower echelon form and the rest are zero.
#[derive(Clone, Debug)]
pub struct ColumnEchelon {
    pub h: ZMatrix,
    pub u: ZMatrix,
    pub rank: usize,
    /// Row index of the pivot in each of the first `rank` columns.
    pub pivot_rows: Vec<usize>,
}

/// Fraction-free column reduction by repeated Euclidean steps.
pub fn column_echelon(a: &ZMatrix) -> ColumnEchelon {
    let mut h = a.clone();
    let mut u = ZMatrix::identity(a.cols);
    let mut p = 0usize;
    let mut pivot_rows = Vec::new();
    for i in 0..a.rows {
        if p == a.cols {
            break;
        }
        loop {
            // smallest nonzero absolute value among columns p.. in row i
            let best = (p..a.cols)
                .filter(|&j| !h.data[i][j].is_zero())
                .min_by(|&x, &y| h.data[i][x].abs().cmp(&h.data[i][y].abs()));
            let Some(best) = best else { break };
            if best != p {
                h.col_swap(best, p);
                u.col_swap(best, p);
            }
            let mut done = true;
            for j in (p + 1)..a.cols {
                if h.data[i][j].is_zero() {
                    continue;
                }
                let f = -h.data[i][j].div_floor(&h.data[i][p]);
                h.col_axpy(j, p, &f);
                u.col_axpy(j, p, &f);
                if !h.data[i][j].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if !h.data[i][p].is_zero() {
            if h.data[i][p].is_negative() {
                h.col_neg(p);
                u.col_neg(p);
            }
            pivot_rows.push(i);
            p += 1;
        }
    }
    ColumnEchelon { h, u, rank: p, pivot_rows }
}

/// Greatest common divisor of all maximal (`r x r`) minors of an `r x c`
/// matrix with `r <= c`. Zero iff the matrix has rank below `r`.
///
/// The value is invariant under unimodular column operations, so it equals
/// the absolute determinant of the square echelon block.
pub fn gcd_maximal_minors(m: &ZMatrix) -> Result<Z> {
    if m.rows > m.cols {
        return Err(Error::Dimension(format!(
            "gcd of maximal minors needs rows <= cols, got {}x{}",
            m.rows, m.cols
        )));
    }
    if m.rows == 0 {
        return Ok(Z::one());
    }
    let ce = column_echelon(m);
    if ce.rank < m.rows {
        return Ok(Z::zero());
    }
    let mut det = Z::one();
    for (c, &r) in ce.pivot_rows.iter().enumerate() {
        det *= &ce.h.data[r][c];
    }
    Ok(det.abs())
}

/// Enumerates the maximal minors one by one and stops as soon as the running
/// gcd reaches one. `limit` bounds the number of minors visited.
pub fn gcd_maximal_minors_enumerated(m: &ZMatrix, limit: Option<usize>) -> Result<Z> {
    if m.rows > m.cols {
        return Err(Error::Dimension(format!(
            "gcd of maximal minors needs rows <= cols, got {}x{}",
            m.rows, m.cols
        )));
    }
    let r = m.rows;
    let mut g = Z::zero();
    let mut visited = 0usize;
    let mut cols: Vec<usize> = (0..r).collect();
    loop {
        if let Some(l) = limit {
            if visited >= l {
                return Err(Error::Limit(format!("more than {l} minors")));
            }
        }
        visited += 1;
        g = g.gcd(&det_bareiss(&m.select_columns(&cols)));
        if g.is_one() {
            return Ok(g);
        }
        // next combination
        let mut i = r;
        loop {
            if i == 0 {
                return Ok(g);
            }
            i -= 1;
            if cols[i] < m.cols - r + i {
                cols[i] += 1;
                for j in (i + 1)..r {
                    cols[j] = cols[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Determinant of a square integer matrix by Bareiss elimination.
pub fn det_bareiss(m: &ZMatrix) -> Z {
    let n = m.rows;
    assert_eq!(n, m.cols, "determinant of non-square matrix");
    if n == 0 {
        return Z::one();
    }
    let mut a = m.data.clone();
    let mut sign = Z::one();
    let mut prev = Z::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match ((k + 1)..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return Z::zero(),
            }
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(rows: &mut Vec<Vec<Q>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in c..ncols {
                    let sub = &f * &rows[r][j];
                    rows[i][j] -= sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank_q(rows: &[Vec<Q>], ncols: usize) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, ncols).len()
}

/// Canonical basis of the row span (nonzero rows of the RREF).
pub fn row_space(rows: &[Vec<Q>], ncols: usize) -> Vec<Vec<Q>> {
    let mut m = rows.to_vec();
    rref(&mut m, ncols);
    m
}

/// Scales a rational vector to the primitive integer vector on the same ray.
pub fn primitive_direction(v: &[Q]) -> Vec<Z> {
    let lcm = v.iter().fold(Z::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<Z> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let g = ints.iter().fold(Z::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// Makes the first nonzero entry positive.
pub fn canonical_sign(v: &mut [Z]) {
    if let Some(first) = v.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in v.iter_mut() {
                *x = -&*x;
            }
        }
    }
}

/// Kernel of a matrix over the rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Kernel {
    /// Primitive integer vectors with lexicographically canonical sign.
    pub basis: Vec<Vec<Z>>,
    pub rank: usize,
}

/// Basis of `{v : M v = 0}` over the rationals, normalized to primitive
/// integer vectors (first nonzero entry positive).
pub fn rational_kernel(m: &ZMatrix) -> Kernel {
    let rows: Vec<Vec<Q>> = m
        .data
        .iter()
        .map(|r| r.iter().map(|x| Q::from_integer(x.clone())).collect())
        .collect();
    rational_kernel_q(&rows, m.cols)
}

pub fn rational_kernel_q(rows: &[Vec<Q>], ncols: usize) -> Kernel {
    let mut red = rows.to_vec();
    let pivots = rref(&mut red, ncols);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Q::zero(); ncols];
        v[free] = Q::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -red[r][free].clone();
        }
        let mut p = primitive_direction(&v);
        canonical_sign(&mut p);
        basis.push(p);
    }
    Kernel { basis, rank: pivots.len() }
}

/// Z-basis of the integer kernel `{v in Z^c : M v = 0}`.
pub fn integer_kernel(m: &ZMatrix) -> Vec<Vec<Z>> {
    let ce = column_echelon(m);
    (ce.rank..m.cols)
        .map(|j| (0..m.cols).map(|i| ce.u.data[i][j].clone()).collect())
        .collect()
}

/// Z-basis of the saturated lattice `span(dirs) ∩ Z^ambient`.
pub fn saturated_lattice(dirs: &[Vec<Q>], ambient: usize) -> Vec<Vec<Z>> {
    let span = row_space(dirs, ambient);
    if span.is_empty() {
        return Vec::new();
    }
    if span.len() == ambient {
        return (0..ambient)
            .map(|i| (0..ambient).map(|j| if i == j { Z::one() } else { Z::zero() }).collect())
            .collect();
    }
    let perp = rational_kernel_q(&span, ambient);
    let a = ZMatrix { rows: perp.basis.len(), cols: ambient, data: perp.basis };
    integer_kernel(&a)
}

/// Solves `sum_j x_j cols[j] = b` for the coefficient vector `x`, if a solution
/// exists. When the columns are dependent one particular solution is returned.
pub fn solve_in_span(cols: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let k = cols.len();
    let m = b.len();
    let mut aug: Vec<Vec<Q>> = (0..m)
        .map(|i| {
            let mut row: Vec<Q> = cols.iter().map(|c| c[i].clone()).collect();
            row.push(b[i].clone());
            row
        })
        .collect();
    let pivots = rref(&mut aug, k + 1);
    if pivots.last() == Some(&k) {
        return None;
    }
    let mut x = vec![Q::zero(); k];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[r][k].clone();
    }
    Some(x)
}

/// gcd of rational numbers: the positive generator of the Z-module they span.
pub fn gcd_rationals(values: &[Q]) -> Q {
    let lcm = values.iter().fold(Z::one(), |acc, x| acc.lcm(x.denom()));
    let g = values
        .iter()
        .fold(Z::zero(), |acc, x| acc.gcd(&(x.numer() * (&lcm / x.denom()))));
    Q::new(g, lcm)
}

/// Generator of `Λ_σ / Λ_τ ≅ Z` for a corank-one sublattice.
///
/// `sigma` and `tau` are Z-bases (integer vectors) of the lattices, and `side`
/// is a functional vanishing on `tau` whose positive side contains the cell.
/// The returned vector lies in `Λ_σ`, not in `Λ_τ`, and together with `Λ_τ`
/// generates `Λ_σ`.
pub fn lattice_normal_data(sigma: &[Vec<Z>], tau: &[Vec<Z>], side: &[Q]) -> Result<Vec<Z>> {
    let ambient = side.len();
    let to_q = |v: &Vec<Z>| v.iter().map(|x| Q::from_integer(x.clone())).collect::<Vec<Q>>();
    let sig_q: Vec<Vec<Q>> = sigma.iter().map(to_q).collect();
    let tau_q: Vec<Vec<Q>> = tau.iter().map(to_q).collect();
    let rs = rank_q(&sig_q, ambient);
    let rt = rank_q(&tau_q, ambient);
    let mut both = sig_q.clone();
    both.extend(tau_q.iter().cloned());
    if rank_q(&both, ambient) != rs || rt + 1 != rs {
        return Err(Error::Structure(format!(
            "lattice of rank {rt} is not a corank-one sublattice of rank {rs}"
        )));
    }
    let Some(d_idx) = (0..sig_q.len()).find(|&j| {
        let mut t = tau_q.clone();
        t.push(sig_q[j].clone());
        rank_q(&t, ambient) > rt
    }) else {
        return Err(Error::Structure("no direction transverse to tau".into()));
    };
    let d = &sig_q[d_idx];
    let mut cols = tau_q.clone();
    cols.push(d.clone());
    // b_j = T alpha + c_j d
    let mut coeffs = Vec::with_capacity(sigma.len());
    for b in &sig_q {
        let x = solve_in_span(&cols, b)
            .ok_or_else(|| Error::Structure("sigma lattice not in span".into()))?;
        coeffs.push(x[tau_q.len()].clone());
    }
    // Bezout combination of the b_j realizing the gcd of the c_j
    let lcm = coeffs.iter().fold(Z::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<Z> = coeffs.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let mut g = Z::zero();
    let mut z: Vec<Z> = vec![Z::zero(); ints.len()];
    for (j, a) in ints.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let e = g.extended_gcd(a);
        for zz in z.iter_mut().take(j) {
            *zz *= &e.x;
        }
        z[j] = e.y;
        g = e.gcd;
    }
    let mut u = vec![Z::zero(); ambient];
    for (j, b) in sigma.iter().enumerate() {
        if z[j].is_zero() {
            continue;
        }
        for i in 0..ambient {
            u[i] += &z[j] * &b[i];
        }
    }
    let s: Q = u
        .iter()
        .zip(side)
        .fold(Q::zero(), |acc, (x, y)| acc + Q::from_integer(x.clone()) * y);
    if s.is_zero() {
        return Err(Error::Structure("side functional vanishes on the normal".into()));
    }
    if s.is_negative() {
        for x in u.iter_mut() {
            *x = -&*x;
        }
    }
    Ok(u)
}
