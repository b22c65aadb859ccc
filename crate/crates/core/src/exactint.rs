//! Exact integer matrices, Smith normal form with unimodular transforms, and
//! order queries in finitely presented abelian groups.
//!
//! A presentation is an `IntMatrix` whose columns are generators and whose
//! rows are relations; the group is `Z^cols / rowspan`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries supplied for a {}x{} matrix",
                entries.len(),
                rows,
                cols
            )));
        }
        Ok(IntMatrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from small integer rows. All rows must have equal length.
    pub fn from_rows<T: Into<BigInt> + Copy>(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if let Some(bad) = rows.iter().position(|r| r.len() != cols) {
            return Err(Error::Dimension(format!(
                "row {} has length {}, expected {}",
                bad,
                rows[bad].len(),
                cols
            )));
        }
        let entries = rows.iter().flat_map(|r| r.iter().map(|&x| x.into())).collect();
        Ok(IntMatrix { rows: rows.len(), cols, entries })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.entries[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::Dimension("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.entries.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k * n + k].is_zero() {
                match (k + 1..n).find(|&i| !a[i * n + k].is_zero()) {
                    Some(i) => {
                        for j in 0..n {
                            a.swap(k * n + j, i * n + j);
                        }
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i * n + j] * &a[k * n + k] - &a[i * n + k] * &a[k * n + j];
                    a[i * n + j] = v / &prev;
                }
            }
            prev = a[k * n + k].clone();
        }
        Ok(sign * &a[n * n - 1])
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    /// Parses the text format: a header line `rows cols` followed by `rows`
    /// lines of `cols` base-10 integers. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<IntMatrix> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
        let dims: Vec<&str> = header.split_whitespace().collect();
        if dims.len() != 2 {
            return Err(Error::parse(hline, "header must be `rows cols`"));
        }
        let parse_dim = |s: &str| {
            s.parse::<usize>().map_err(|_| Error::parse(hline, format!("bad dimension `{s}`")))
        };
        let (rows, cols) = (parse_dim(dims[0])?, parse_dim(dims[1])?);
        let mut entries = Vec::with_capacity(rows * cols);
        let mut seen = 0;
        for (lineno, line) in lines {
            if seen == rows {
                return Err(Error::parse(lineno, "trailing data after last row"));
            }
            let row: Vec<&str> = line.split_whitespace().collect();
            if row.len() != cols {
                return Err(Error::parse(
                    lineno,
                    format!("expected {} entries, found {}", cols, row.len()),
                ));
            }
            for tok in row {
                let v = tok
                    .parse::<BigInt>()
                    .map_err(|_| Error::parse(lineno, format!("bad integer `{tok}`")))?;
                entries.push(v);
            }
            seen += 1;
        }
        if seen != rows {
            return Err(Error::parse(
                text.lines().count().max(1),
                format!("expected {rows} rows, found {seen}"),
            ));
        }
        IntMatrix::new(rows, cols, entries)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Result of a Smith decomposition `U * A * V = D`.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    /// `d_1 | d_2 | ... | d_r` (positive), followed by zeros up to `min(rows, cols)`.
    pub invariant_factors: Vec<BigInt>,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.invariant_factors.iter().take_while(|d| !d.is_zero()).count()
    }

    /// True when the integer row vector `x` lies in the row span of the
    /// decomposed matrix.
    pub fn row_span_contains(&self, x: &[BigInt]) -> Result<bool> {
        let w = self.to_diagonal_coords(x)?;
        let r = self.rank();
        Ok(w.iter().enumerate().all(|(i, wi)| {
            if i < r {
                wi.is_multiple_of(&self.invariant_factors[i])
            } else {
                wi.is_zero()
            }
        }))
    }

    /// Order of the image of generator `index` in `Z^cols / rowspan`.
    pub fn order_of(&self, index: usize) -> Result<ElementOrder> {
        let cols = self.v.rows();
        if index >= cols {
            return Err(Error::IndexOutOfRange { index, limit: cols });
        }
        // e_index * V is row `index` of V.
        self.order_of_coords(self.v.row(index))
    }

    /// Order of an arbitrary integer combination of the generators.
    pub fn order_of_vector(&self, x: &[BigInt]) -> Result<ElementOrder> {
        let w = self.to_diagonal_coords(x)?;
        self.order_of_coords(&w)
    }

    fn order_of_coords(&self, w: &[BigInt]) -> Result<ElementOrder> {
        let r = self.rank();
        let mut m = BigInt::one();
        for (i, wi) in w.iter().enumerate() {
            if wi.is_zero() {
                continue;
            }
            if i >= r {
                return Ok(ElementOrder::Infinite);
            }
            let di = &self.invariant_factors[i];
            m = m.lcm(&(di / di.gcd(wi)));
        }
        Ok(ElementOrder::Finite(m.to_biguint().expect("lcm of positive values")))
    }

    fn to_diagonal_coords(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        let cols = self.v.rows();
        if x.len() != cols {
            return Err(Error::Dimension(format!(
                "vector of length {} against {} generators",
                x.len(),
                cols
            )));
        }
        let mut w = vec![BigInt::zero(); cols];
        for (k, xk) in x.iter().enumerate() {
            if xk.is_zero() {
                continue;
            }
            for (j, wj) in w.iter_mut().enumerate() {
                let vkj = self.v.get(k, j);
                if !vkj.is_zero() {
                    *wj += xk * vkj;
                }
            }
        }
        Ok(w)
    }
}

/// Order of an element of a finitely generated abelian group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ElementOrder {
    /// Positive order; `1` means the element is zero.
    Finite(BigUint),
    Infinite,
}

impl ElementOrder {
    pub fn finite(&self) -> Option<&BigUint> {
        match self {
            ElementOrder::Finite(m) => Some(m),
            ElementOrder::Infinite => None,
        }
    }

    /// True when the order is finite and divides `n` (every order divides 0).
    pub fn divides(&self, n: &BigInt) -> bool {
        match self {
            ElementOrder::Finite(m) => n.magnitude().is_multiple_of(m),
            ElementOrder::Infinite => false,
        }
    }
}

impl fmt::Display for ElementOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementOrder::Finite(m) => write!(f, "{m}"),
            ElementOrder::Infinite => write!(f, "infinite"),
        }
    }
}

/// Smith normal form with transforms.
///
/// The working matrix is driven to diagonal shape by alternating row and
/// column Hermite normal forms, each built by inserting one row at a time
/// into a reduced echelon basis so that intermediate entries stay bounded by
/// the lattice invariants. The diagonal is then permuted into place and the
/// divisibility chain enforced with 2x2 gcd/lcm moves.
pub fn snf(a: &IntMatrix) -> Result<SnfResult> {
    if a.rows == 0 || a.cols == 0 {
        return Err(Error::Dimension(format!("empty {}x{} matrix", a.rows, a.cols)));
    }
    let mut w = SnfWork::new(a);
    w.run();
    Ok(w.finish())
}

/// Least `m > 0` with `m * e_index` in the row span of `relations`.
pub fn element_order(relations: &IntMatrix, generator_index: usize) -> Result<ElementOrder> {
    if generator_index >= relations.cols {
        return Err(Error::IndexOutOfRange { index: generator_index, limit: relations.cols });
    }
    if relations.rows == 0 {
        return Ok(ElementOrder::Infinite);
    }
    snf(relations)?.order_of(generator_index)
}

/// A matrix row paired with the matching row of its accumulated transform.
struct TrackedRow {
    row: Vec<BigInt>,
    trans: Vec<BigInt>,
}

impl TrackedRow {
    fn leading(&self) -> Option<usize> {
        self.row.iter().position(|x| !x.is_zero())
    }

    // self -= q * other
    fn sub_mul(&mut self, other: &TrackedRow, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        axpy(&mut self.row, &other.row, q, 0);
        axpy(&mut self.trans, &other.trans, q, 0);
    }

    fn negate(&mut self) {
        for x in self.row.iter_mut().chain(self.trans.iter_mut()) {
            *x = -std::mem::take(x);
        }
    }
}

// dst -= q * src, over the index range `from..`.
fn axpy(dst: &mut [BigInt], src: &[BigInt], q: &BigInt, from: usize) {
    for (d, s) in dst[from..].iter_mut().zip(&src[from..]) {
        if !s.is_zero() {
            *d -= q * s;
        }
    }
}

// (x*a + y*b, u*a + v*b) elementwise
fn combine(a: &[BigInt], b: &[BigInt], x: &BigInt, y: &BigInt, u: &BigInt, v: &BigInt) -> (Vec<BigInt>, Vec<BigInt>) {
    a.iter()
        .zip(b)
        .map(|(ai, bi)| {
            if ai.is_zero() && bi.is_zero() {
                (BigInt::zero(), BigInt::zero())
            } else {
                (x * ai + y * bi, u * ai + v * bi)
            }
        })
        .unzip()
}

/// Row Hermite normal form by incremental insertion.
///
/// Returns the pivot rows in increasing pivot-column order (pivots positive,
/// entries above each pivot reduced into `[0, pivot)`), followed by the rows
/// that became zero.
fn hermite_rows(input: Vec<TrackedRow>) -> Vec<TrackedRow> {
    let mut basis: Vec<(usize, TrackedRow)> = Vec::new();
    let mut zeros: Vec<TrackedRow> = Vec::new();
    for mut cur in input {
        let mut k = 0;
        loop {
            let Some(c) = cur.leading() else {
                zeros.push(cur);
                break;
            };
            // skip basis rows whose pivot lies left of cur's leading column
            while k < basis.len() && basis[k].0 < c {
                k += 1;
            }
            if k == basis.len() || basis[k].0 > c {
                basis.insert(k, (c, cur));
                break;
            }
            let b = &mut basis[k].1;
            let (pb, pc) = (b.row[c].clone(), cur.row[c].clone());
            if pc.is_multiple_of(&pb) {
                cur.sub_mul(b, &(&pc / &pb));
            } else {
                let eg = pb.extended_gcd(&pc);
                let (g, x, y) = (eg.gcd, eg.x, eg.y);
                let u = -(&pc / &g);
                let v = &pb / &g;
                let (nb, nc) = combine(&b.row, &cur.row, &x, &y, &u, &v);
                let (nbt, nct) = combine(&b.trans, &cur.trans, &x, &y, &u, &v);
                b.row = nb;
                b.trans = nbt;
                cur.row = nc;
                cur.trans = nct;
            }
            k += 1;
        }
        reduce_basis(&mut basis);
    }
    basis.into_iter().map(|(_, r)| r).chain(zeros).collect()
}

fn reduce_basis(basis: &mut [(usize, TrackedRow)]) {
    for k in 0..basis.len() {
        let c = basis[k].0;
        if basis[k].1.row[c].is_negative() {
            basis[k].1.negate();
        }
        let (above, rest) = basis.split_at_mut(k);
        let pivot_row = &rest[0].1;
        let p = &pivot_row.row[c];
        for (_, r) in above.iter_mut() {
            let x = &r.row[c];
            if x.is_negative() || x >= p {
                let q = x.div_floor(p);
                r.sub_mul(pivot_row, &q);
            }
        }
    }
}

struct SnfWork {
    m: usize,
    n: usize,
    a: Vec<Vec<BigInt>>,
    u: Vec<Vec<BigInt>>,
    // V stored transposed so column operations become row operations.
    vt: Vec<Vec<BigInt>>,
}

fn identity_rows(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

fn transpose_rows(rows: &[Vec<BigInt>], cols: usize) -> Vec<Vec<BigInt>> {
    (0..cols).map(|j| rows.iter().map(|r| r[j].clone()).collect()).collect()
}

impl SnfWork {
    fn new(a: &IntMatrix) -> Self {
        let rows = (0..a.rows).map(|i| a.row(i).to_vec()).collect();
        SnfWork { m: a.rows, n: a.cols, a: rows, u: identity_rows(a.rows), vt: identity_rows(a.cols) }
    }

    fn row_hermite(&mut self) {
        let input = std::mem::take(&mut self.a)
            .into_iter()
            .zip(std::mem::take(&mut self.u))
            .map(|(row, trans)| TrackedRow { row, trans })
            .collect();
        for r in hermite_rows(input) {
            self.a.push(r.row);
            self.u.push(r.trans);
        }
    }

    fn col_hermite(&mut self) {
        let at = transpose_rows(&self.a, self.n);
        let input = at
            .into_iter()
            .zip(std::mem::take(&mut self.vt))
            .map(|(row, trans)| TrackedRow { row, trans })
            .collect();
        let mut cols = Vec::with_capacity(self.n);
        for r in hermite_rows(input) {
            cols.push(r.row);
            self.vt.push(r.trans);
        }
        self.a = transpose_rows(&cols, self.m);
    }

    // each row and each column holds at most one nonzero entry
    fn is_monomial(&self) -> bool {
        let row_ok = self.a.iter().all(|r| r.iter().filter(|x| !x.is_zero()).count() <= 1);
        let col_ok = (0..self.n).all(|j| self.a.iter().filter(|r| !r[j].is_zero()).count() <= 1);
        row_ok && col_ok
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            self.a.swap(i, j);
            self.u.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i != j {
            for row in &mut self.a {
                row.swap(i, j);
            }
            self.vt.swap(i, j);
        }
    }

    fn run(&mut self) {
        self.row_hermite();
        while !self.is_monomial() {
            self.col_hermite();
            if self.is_monomial() {
                break;
            }
            self.row_hermite();
        }
        // permute the surviving entries onto the diagonal
        let mut t = 0;
        for i in 0..self.m {
            if let Some(j) = self.a[i].iter().position(|x| !x.is_zero()) {
                self.swap_rows(t, i);
                self.swap_cols(t, j);
                t += 1;
            }
        }
        let rank = t;
        for i in 0..rank {
            if self.a[i][i].is_negative() {
                self.a[i][i] = -std::mem::take(&mut self.a[i][i]);
                for x in self.u[i].iter_mut() {
                    *x = -std::mem::take(x);
                }
            }
        }
        for i in 0..rank {
            for j in i + 1..rank {
                if !self.a[j][j].is_multiple_of(&self.a[i][i]) {
                    self.gcd_lcm(i, j);
                }
            }
        }
    }

    // diag(a, b) at (i, j) -> diag(gcd, lcm)
    fn gcd_lcm(&mut self, i: usize, j: usize) {
        let a = self.a[i][i].clone();
        let b = self.a[j][j].clone();
        let eg = a.extended_gcd(&b);
        let (g, s, t) = (eg.gcd, eg.x, eg.y);
        // row_i += row_j
        let (src, dst) = pair_mut(&mut self.u, j, i);
        axpy(dst, src, &-BigInt::one(), 0);
        // columns (i, j) <- (s*col_i + t*col_j, -(b/g)*col_i + (a/g)*col_j)
        let (bg, ag) = (&b / &g, &a / &g);
        let (ni, nj) = combine(&self.vt[i], &self.vt[j], &s, &t, &(-&bg), &ag);
        self.vt[i] = ni;
        self.vt[j] = nj;
        // row_j -= (t*b/g) * row_i
        let k = &t * &bg;
        let (src, dst) = pair_mut(&mut self.u, i, j);
        axpy(dst, src, &k, 0);
        self.a[i][i] = g;
        self.a[j][j] = &a * &bg;
    }

    fn finish(self) -> SnfResult {
        let steps = self.m.min(self.n);
        let invariant_factors = (0..steps).map(|i| self.a[i][i].clone()).collect();
        let flatten = |rows: Vec<Vec<BigInt>>, r: usize, c: usize| IntMatrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        };
        let v = flatten(self.vt, self.n, self.n).transpose();
        SnfResult {
            u: flatten(self.u, self.m, self.m),
            d: flatten(self.a, self.m, self.n),
            v,
            invariant_factors,
        }
    }
}

// (&rows[src], &mut rows[dst]) for src != dst
fn pair_mut<T>(rows: &mut [T], src: usize, dst: usize) -> (&T, &mut T) {
    assert_ne!(src, dst);
    if src < dst {
        let (lo, hi) = rows.split_at_mut(dst);
        (&lo[src], &mut hi[0])
    } else {
        let (lo, hi) = rows.split_at_mut(src);
        (&hi[0], &mut lo[dst])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factors(rows: &[Vec<i64>]) -> Vec<BigInt> {
        snf(&IntMatrix::from_rows(rows).unwrap()).unwrap().invariant_factors
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn check_decomposition(a: &IntMatrix) {
        let r = snf(a).unwrap();
        assert_eq!(r.u.mul(a).unwrap().mul(&r.v).unwrap(), r.d);
        assert!(r.d.is_diagonal());
        assert!(r.u.determinant().unwrap().magnitude().is_one());
        assert!(r.v.determinant().unwrap().magnitude().is_one());
    }

    #[test]
    fn zero_one_by_one() {
        assert_eq!(factors(&[vec![0]]), big(&[0]));
    }

    #[test]
    fn diag_two_three() {
        assert_eq!(factors(&[vec![2, 0], vec![0, 3]]), big(&[1, 6]));
    }

    #[test]
    fn identity_three() {
        let r = snf(&IntMatrix::identity(3)).unwrap();
        assert_eq!(r.invariant_factors, big(&[1, 1, 1]));
    }

    #[test]
    fn empty_matrix_is_dimension_error() {
        let e = snf(&IntMatrix::zeros(0, 3)).unwrap_err();
        assert_eq!(e.kind(), "dimension");
    }

    #[test]
    fn needs_divisibility_fix() {
        // diag(2, 3) hidden behind a column operation, plus a 4/6 pair
        let a = IntMatrix::from_rows(&[vec![4, 0, 0], vec![0, 6, 0], vec![0, 0, 10]]).unwrap();
        assert_eq!(snf(&a).unwrap().invariant_factors, big(&[2, 2, 60]));
        check_decomposition(&a);
    }

    #[test]
    fn negative_entries_and_rectangular() {
        let a = IntMatrix::from_rows(&[vec![-6, 4, 2], vec![3, -9, 12]]).unwrap();
        check_decomposition(&a);
        let f = snf(&a).unwrap().invariant_factors;
        assert!(f.iter().all(|x| !x.is_negative()));
        assert!(f[1].is_multiple_of(&f[0]));
    }

    #[test]
    fn element_order_examples() {
        let rel = IntMatrix::from_rows(&[vec![2, 0]]).unwrap();
        assert_eq!(element_order(&rel, 0).unwrap(), ElementOrder::Finite(2u32.into()));
        let rel = IntMatrix::from_rows(&[vec![1, 0]]).unwrap();
        assert_eq!(element_order(&rel, 0).unwrap(), ElementOrder::Finite(1u32.into()));
        let rel = IntMatrix::from_rows(&[vec![0, 1]]).unwrap();
        assert_eq!(element_order(&rel, 0).unwrap(), ElementOrder::Infinite);
    }

    #[test]
    fn element_order_zero_relations_is_infinite() {
        let rel = IntMatrix::zeros(3, 2);
        assert_eq!(element_order(&rel, 1).unwrap(), ElementOrder::Infinite);
    }

    #[test]
    fn element_order_index_out_of_range() {
        let rel = IntMatrix::from_rows(&[vec![2, 0]]).unwrap();
        assert!(matches!(element_order(&rel, 2), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn element_order_mixed_generators() {
        // x = 2y, 6y = 0  ->  y has order 6, x has order 3
        let rel = IntMatrix::from_rows(&[vec![1, -2], vec![0, 6]]).unwrap();
        assert_eq!(element_order(&rel, 1).unwrap(), ElementOrder::Finite(6u32.into()));
        assert_eq!(element_order(&rel, 0).unwrap(), ElementOrder::Finite(3u32.into()));
    }

    #[test]
    fn row_span_membership() {
        let rel = IntMatrix::from_rows(&[vec![2, 4], vec![0, 6]]).unwrap();
        let r = snf(&rel).unwrap();
        assert!(r.row_span_contains(&big(&[2, 10])).unwrap());
        assert!(!r.row_span_contains(&big(&[1, 0])).unwrap());
        assert!(!r.row_span_contains(&big(&[0, 2])).unwrap());
    }

    #[test]
    fn parse_round_trip_and_errors() {
        let m = IntMatrix::parse("2 3\n1 2 3\n-4 5 123456789012345678901234567890\n").unwrap();
        assert_eq!(IntMatrix::parse(&m.to_string()).unwrap(), m);
        match IntMatrix::parse("2 2\n1 2\n3 x\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        match IntMatrix::parse("2 2\n1 2 3\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn determinant_small() {
        let a = IntMatrix::from_rows(&[vec![2, 1, 0], vec![1, 3, 1], vec![0, 1, 4]]).unwrap();
        assert_eq!(a.determinant().unwrap(), BigInt::from(18));
    }
}
