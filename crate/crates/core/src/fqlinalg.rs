//! Arithmetic in GF(q), q = p^e, and linear algebra over it: row reduction,
//! subspace enumeration and full-flag enumeration.
//!
//! Field elements are encoded as integers `0..q`; the element
//! `c_0 + c_1 x + ... + c_{e-1} x^{e-1}` is stored as `sum c_i p^i`.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};

/// Largest field order for which operation tables are built.
pub const MAX_FIELD_ORDER: u32 = 1024;

#[derive(Debug)]
struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

/// A finite field GF(p^e) given by an irreducible monic modulus over F_p.
#[derive(Clone)]
pub struct FieldSpec {
    p: u32,
    e: u32,
    q: u32,
    /// Coefficients `c_0, ..., c_e` of the modulus, lowest degree first; `c_e = 1`.
    modulus: Vec<u32>,
    tables: Arc<Tables>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}) mod {:?}", self.p, self.e, self.modulus)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` as `p^e` with `p` prime, if possible.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

// Polynomials over F_p as coefficient vectors, lowest degree first, no
// trailing zeros (the zero polynomial is empty).
fn poly_trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = poly_trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let c = (r[r.len() - 1] as u64 * lead_inv as u64 % p as u64) as u32;
        for (i, &mi) in m.iter().enumerate() {
            let sub = (c as u64 * mi as u64 % p as u64) as u32;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        r = poly_trim(r);
    }
    r
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    poly_trim(out.into_iter().map(|x| x as u32).collect())
}

fn inv_mod(a: u32, p: u32) -> u32 {
    // p prime, a != 0
    let mut result = 1u64;
    let mut base = a as u64 % p as u64;
    let mut exp = p as u64 - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        exp >>= 1;
    }
    result as u32
}

/// Irreducibility by trial division against every monic polynomial of
/// degree `1..=deg/2`.
pub fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let f = poly_trim(modulus.to_vec());
    if f.len() < 2 {
        return false;
    }
    let deg = f.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                g.push((c % p as u64) as u32);
                c /= p as u64;
            }
            g.push(1);
            if poly_rem(&f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn builtin_modulus(p: u32, e: u32) -> Option<Vec<u32>> {
    match (p, e) {
        (_, 1) => Some(vec![0, 1]),
        (2, 2) => Some(vec![1, 1, 1]),    // x^2 + x + 1
        (2, 3) => Some(vec![1, 1, 0, 1]), // x^3 + x + 1
        (3, 2) => Some(vec![1, 0, 1]),    // x^2 + 1
        _ => None,
    }
}

fn first_irreducible(p: u32, e: u32) -> Vec<u32> {
    let count = (p as u64).pow(e);
    (0..count)
        .map(|code| {
            let mut g = Vec::with_capacity(e as usize + 1);
            let mut c = code;
            for _ in 0..e {
                g.push((c % p as u64) as u32);
                c /= p as u64;
            }
            g.push(1);
            g
        })
        .find(|g| is_irreducible(g, p))
        .expect("irreducible polynomials exist in every degree")
}

impl FieldSpec {
    /// GF(p^e) with the given modulus, or the built-in/default one when `None`.
    pub fn new(p: u32, e: u32, modulus: Option<Vec<u32>>) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::Field(format!("{p} is not prime")));
        }
        if e == 0 {
            return Err(Error::Field("extension degree must be at least 1".into()));
        }
        let q = (p as u64).checked_pow(e).filter(|&q| q <= MAX_FIELD_ORDER as u64).ok_or_else(|| {
            Error::SizeGuard(format!("field order {p}^{e} exceeds {MAX_FIELD_ORDER}"))
        })? as u32;
        let modulus = match modulus {
            Some(m) => {
                if m.len() != e as usize + 1 {
                    return Err(Error::Field(format!(
                        "modulus must have {} coefficients, got {}",
                        e + 1,
                        m.len()
                    )));
                }
                if let Some(c) = m.iter().find(|&&c| c >= p) {
                    return Err(Error::Field(format!("coefficient {c} not reduced mod {p}")));
                }
                if m[e as usize] != 1 {
                    return Err(Error::Field("modulus must be monic".into()));
                }
                if !is_irreducible(&m, p) {
                    return Err(Error::ReducibleModulus(format!("{m:?} over F_{p}")));
                }
                m
            }
            None => builtin_modulus(p, e).unwrap_or_else(|| first_irreducible(p, e)),
        };
        let tables = Arc::new(build_tables(p, e, q, &modulus));
        Ok(FieldSpec { p, e, q, modulus, tables })
    }

    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, 1, None)
    }

    /// The default field of order `q`.
    pub fn of_order(q: u32) -> Result<Self> {
        let (p, e) = prime_power(q as u64)
            .ok_or_else(|| Error::Field(format!("{q} is not a prime power")))?;
        Self::new(p as u32, e, None)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.tables.add[(a * self.q + b) as usize]
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.tables.mul[(a * self.q + b) as usize]
    }

    pub fn neg(&self, a: u32) -> u32 {
        self.tables.neg[a as usize]
    }

    /// Multiplicative inverse; `a` must be nonzero.
    pub fn inv(&self, a: u32) -> u32 {
        debug_assert!(a != 0);
        self.tables.inv[a as usize]
    }
}

fn decode(x: u32, p: u32, e: u32) -> Vec<u32> {
    let mut c = Vec::with_capacity(e as usize);
    let mut v = x;
    for _ in 0..e {
        c.push(v % p);
        v /= p;
    }
    poly_trim(c)
}

fn encode(c: &[u32], p: u32) -> u32 {
    c.iter().rev().fold(0, |acc, &ci| acc * p + ci)
}

fn build_tables(p: u32, e: u32, q: u32, modulus: &[u32]) -> Tables {
    let n = q as usize;
    let polys: Vec<Vec<u32>> = (0..q).map(|x| decode(x, p, e)).collect();
    let mut add = vec![0; n * n];
    let mut mul = vec![0; n * n];
    for a in 0..n {
        for b in 0..n {
            let (pa, pb) = (&polys[a], &polys[b]);
            let len = pa.len().max(pb.len());
            let s: Vec<u32> = (0..len)
                .map(|i| (pa.get(i).copied().unwrap_or(0) + pb.get(i).copied().unwrap_or(0)) % p)
                .collect();
            add[a * n + b] = encode(&poly_trim(s), p);
            mul[a * n + b] = encode(&poly_rem(&poly_mul(pa, pb, p), modulus, p), p);
        }
    }
    let neg = (0..n).map(|a| (0..q).find(|&b| add[a * n + b as usize] == 0).unwrap()).collect();
    let inv = (0..n)
        .map(|a| if a == 0 { 0 } else { (1..q).find(|&b| mul[a * n + b as usize] == 1).unwrap() })
        .collect();
    Tables { add, mul, neg, inv }
}

/// Dense matrix over a finite field.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FqMatrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    entries: Vec<u32>,
}

impl FqMatrix {
    pub fn new(field: &FieldSpec, rows: usize, cols: usize, entries: Vec<u32>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if let Some(x) = entries.iter().find(|&&x| x >= field.q) {
            return Err(Error::Field(format!("entry {x} is not an element of GF({})", field.q)));
        }
        Ok(FqMatrix { field: field.clone(), rows, cols, entries })
    }

    pub fn from_rows(field: &FieldSpec, rows: &[Vec<u32>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Self::new(field, rows.len(), cols, rows.concat())
    }

    pub fn zeros(field: &FieldSpec, rows: usize, cols: usize) -> Self {
        FqMatrix { field: field.clone(), rows, cols, entries: vec![0; rows * cols] }
    }

    pub fn identity(field: &FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.entries[i * n + i] = 1;
        }
        m
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    /// Vertical concatenation.
    pub fn stack(&self, other: &FqMatrix) -> Result<FqMatrix> {
        if self.field != other.field {
            return Err(Error::Field(format!("{:?} vs {:?}", self.field, other.field)));
        }
        if self.cols != other.cols {
            return Err(Error::Dimension(format!("{} vs {} columns", self.cols, other.cols)));
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Ok(FqMatrix { field: self.field.clone(), rows: self.rows + other.rows, cols: self.cols, entries })
    }

    /// Reduced row-echelon form (same shape, zero rows last) and rank.
    pub fn rref(&self) -> (FqMatrix, usize) {
        let f = &self.field;
        let (m, n) = (self.rows, self.cols);
        let mut a = self.entries.clone();
        let mut r = 0;
        for c in 0..n {
            if r == m {
                break;
            }
            let Some(piv) = (r..m).find(|&i| a[i * n + c] != 0) else { continue };
            if piv != r {
                for j in 0..n {
                    a.swap(piv * n + j, r * n + j);
                }
            }
            let inv = f.inv(a[r * n + c]);
            for j in c..n {
                a[r * n + j] = f.mul(a[r * n + j], inv);
            }
            for i in 0..m {
                let x = a[i * n + c];
                if i != r && x != 0 {
                    for j in c..n {
                        let t = f.mul(x, a[r * n + j]);
                        a[i * n + j] = f.sub(a[i * n + j], t);
                    }
                }
            }
            r += 1;
        }
        (FqMatrix { field: f.clone(), rows: m, cols: n, entries: a }, r)
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    fn take_rows(&self, k: usize) -> FqMatrix {
        FqMatrix {
            field: self.field.clone(),
            rows: k,
            cols: self.cols,
            entries: self.entries[..k * self.cols].to_vec(),
        }
    }
}

/// A subspace of F_q^m, stored by its RREF basis (the canonical form).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace {
    basis: FqMatrix,
}

impl Subspace {
    /// Span of the rows of `generators`.
    pub fn span(generators: &FqMatrix) -> Subspace {
        let (r, rank) = generators.rref();
        Subspace { basis: r.take_rows(rank) }
    }

    pub fn zero(field: &FieldSpec, ambient_dim: usize) -> Subspace {
        Subspace { basis: FqMatrix::zeros(field, 0, ambient_dim) }
    }

    pub fn full(field: &FieldSpec, ambient_dim: usize) -> Subspace {
        Subspace { basis: FqMatrix::identity(field, ambient_dim) }
    }

    pub fn basis(&self) -> &FqMatrix {
        &self.basis
    }

    pub fn field(&self) -> &FieldSpec {
        &self.basis.field
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        Ok(Subspace::span(&self.basis.stack(&other.basis)?))
    }

    pub fn intersection_dim(&self, other: &Subspace) -> Result<usize> {
        let s = self.sum(other)?;
        Ok(self.dim() + other.dim() - s.dim())
    }

    pub fn contains(&self, other: &Subspace) -> Result<bool> {
        Ok(self.sum(other)?.dim() == self.dim())
    }

    /// Pivot column of each basis row.
    pub fn pivots(&self) -> Vec<usize> {
        (0..self.dim())
            .map(|i| self.basis.row(i).iter().position(|&x| x != 0).expect("nonzero RREF row"))
            .collect()
    }
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.basis.cols, self.basis.rows, &self.basis.entries).cmp(&(
            other.basis.cols,
            other.basis.rows,
            &other.basis.entries,
        ))
    }
}

/// Gaussian binomial coefficient `[m choose d]_q`.
pub fn gaussian_binomial(q: u64, m: u32, d: u32) -> BigUint {
    if d > m {
        return BigUint::from(0u32);
    }
    let q = BigUint::from(q);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..d {
        num *= q.pow(m - i) - 1u32;
        den *= q.pow(i + 1) - 1u32;
    }
    num / den
}

/// Number of full flags in F_q^m, `prod_{i=1}^{m} (q^i - 1)/(q - 1)`.
pub fn flag_count(q: u64, m: u32) -> BigUint {
    (1..=m).map(|i| gaussian_binomial(q, i, 1)).product()
}

// Odometer over `len` digits in `0..base`.
fn for_each_tuple(len: usize, base: u32, mut f: impl FnMut(&[u32])) {
    let mut t = vec![0u32; len];
    loop {
        f(&t);
        let mut i = 0;
        loop {
            if i == len {
                return;
            }
            t[i] += 1;
            if t[i] < base {
                break;
            }
            t[i] = 0;
            i += 1;
        }
    }
}

fn combinations(m: usize, d: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, m: usize, d: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for c in start..m {
            if m - c < d - cur.len() {
                break;
            }
            cur.push(c);
            go(c + 1, m, d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, m, d, &mut Vec::new(), &mut out);
    out
}

/// Every `d`-dimensional subspace of F_q^m exactly once, sorted
/// lexicographically by RREF basis entries.
pub fn enumerate_subspaces(field: &FieldSpec, ambient_dim: usize, dim: usize) -> Result<Vec<Subspace>> {
    if dim > ambient_dim {
        return Err(Error::Dimension(format!("dimension {dim} exceeds ambient {ambient_dim}")));
    }
    let (m, d, q) = (ambient_dim, dim, field.q);
    let mut out = Vec::new();
    for pivots in combinations(m, d) {
        // free slots: row r, non-pivot column j > pivots[r]
        let free: Vec<(usize, usize)> = (0..d)
            .flat_map(|r| {
                let pv = &pivots;
                (pv[r] + 1..m).filter(move |j| !pv.contains(j)).map(move |j| (r, j))
            })
            .collect();
        for_each_tuple(free.len(), q, |vals| {
            let mut entries = vec![0u32; d * m];
            for (r, &c) in pivots.iter().enumerate() {
                entries[r * m + c] = 1;
            }
            for (&(r, j), &v) in free.iter().zip(vals) {
                entries[r * m + j] = v;
            }
            out.push(Subspace { basis: FqMatrix { field: field.clone(), rows: d, cols: m, entries } });
        });
    }
    out.sort();
    Ok(out)
}

/// A full flag `V_1 < V_2 < ... < V_{m-1}` in F_q^m with `dim V_i = i`.
#[derive(Clone, PartialEq, Eq, Debug, PartialOrd, Ord)]
pub struct Flag {
    subspaces: Vec<Subspace>,
    ambient_dim: usize,
}

impl Flag {
    /// Checks strict nesting and dimensions `1..m-1`.
    pub fn new(ambient_dim: usize, subspaces: Vec<Subspace>) -> Result<Flag> {
        if ambient_dim == 0 {
            return Err(Error::Dimension("ambient dimension must be at least 1".into()));
        }
        if subspaces.len() != ambient_dim - 1 {
            return Err(Error::Dimension(format!(
                "a full flag in dimension {ambient_dim} has {} members, got {}",
                ambient_dim - 1,
                subspaces.len()
            )));
        }
        for (i, s) in subspaces.iter().enumerate() {
            if s.ambient_dim() != ambient_dim || s.dim() != i + 1 {
                return Err(Error::Dimension(format!("member {i} has dimension {}", s.dim())));
            }
            if i > 0 && !s.contains(&subspaces[i - 1])? {
                return Err(Error::InvalidInput(format!("member {i} does not contain member {}", i - 1)));
            }
        }
        Ok(Flag { subspaces, ambient_dim })
    }

    /// The coordinate flag `<e_1> < <e_1, e_2> < ...`.
    pub fn standard(field: &FieldSpec, ambient_dim: usize) -> Flag {
        let id = FqMatrix::identity(field, ambient_dim);
        let subspaces = (1..ambient_dim).map(|k| Subspace { basis: id.take_rows(k) }).collect();
        Flag { subspaces, ambient_dim }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn subspaces(&self) -> &[Subspace] {
        &self.subspaces
    }

    /// `V_i` with the conventions `V_0 = 0` and `V_m = F_q^m`.
    pub fn member(&self, field: &FieldSpec, i: usize) -> Subspace {
        match i {
            0 => Subspace::zero(field, self.ambient_dim),
            i if i == self.ambient_dim => Subspace::full(field, self.ambient_dim),
            i => self.subspaces[i - 1].clone(),
        }
    }
}

// Canonical representatives of the points of F^m / V: vectors vanishing on
// the pivot columns of V, with leading coefficient 1.
fn quotient_points(field: &FieldSpec, v: &Subspace) -> Vec<Vec<u32>> {
    let m = v.ambient_dim();
    let pivots = v.pivots();
    let free: Vec<usize> = (0..m).filter(|j| !pivots.contains(j)).collect();
    let mut out = Vec::new();
    for (lead_pos, &lead) in free.iter().enumerate() {
        let rest = &free[lead_pos + 1..];
        for_each_tuple(rest.len(), field.q, |vals| {
            let mut x = vec![0u32; m];
            x[lead] = 1;
            for (&j, &val) in rest.iter().zip(vals) {
                x[j] = val;
            }
            out.push(x);
        });
    }
    out
}

/// Every full flag of F_q^m exactly once, in sorted order.
pub fn enumerate_full_flags(field: &FieldSpec, ambient_dim: usize) -> Result<Vec<Flag>> {
    if ambient_dim == 0 {
        return Err(Error::Dimension("ambient dimension must be at least 1".into()));
    }
    let m = ambient_dim;
    let mut partial: Vec<Vec<Subspace>> = vec![Vec::new()];
    for _ in 1..m {
        let mut next = Vec::new();
        for chain in partial {
            let top = chain.last().cloned().unwrap_or_else(|| Subspace::zero(field, m));
            for x in quotient_points(field, &top) {
                let gen = top.basis.stack(&FqMatrix { field: field.clone(), rows: 1, cols: m, entries: x })?;
                let mut c = chain.clone();
                c.push(Subspace::span(&gen));
                next.push(c);
            }
        }
        partial = next;
    }
    let mut flags: Vec<Flag> = partial.into_iter().map(|subspaces| Flag { subspaces, ambient_dim: m }).collect();
    flags.sort();
    Ok(flags)
}
