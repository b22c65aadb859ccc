//! The symmetric group S_m as the Coxeter group of type A_{m-1}.
//!
//! Permutations are kept in one-line notation with 1-based images, so
//! `[2, 3, 1]` maps 1 to 2, 2 to 3 and 3 to 1.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Largest degree accepted by whole-group enumerations.
pub const MAX_ENUMERATION_DEGREE: usize = 9;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let m = images.len();
        let mut seen = vec![false; m];
        for &x in &images {
            if x == 0 || x > m || seen[x - 1] {
                return Err(Error::InvalidInput(format!("{images:?} is not a permutation of 1..{m}")));
            }
            seen[x - 1] = true;
        }
        Ok(Permutation(images))
    }

    pub fn identity(m: usize) -> Self {
        Permutation((1..=m).collect())
    }

    /// The longest element `[m, m-1, ..., 1]`.
    pub fn longest(m: usize) -> Self {
        Permutation((1..=m).rev().collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// Image of `i` (1-based).
    pub fn apply(&self, i: usize) -> usize {
        self.0[i - 1]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x - 1] = i + 1;
        }
        Permutation(inv)
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Result<Self> {
        if self.degree() != other.degree() {
            return Err(Error::Dimension(format!("degrees {} and {}", self.degree(), other.degree())));
        }
        Ok(Permutation(other.0.iter().map(|&i| self.0[i - 1]).collect()))
    }

    /// Coxeter length: the number of inversions.
    pub fn length(&self) -> usize {
        let w = &self.0;
        (0..w.len()).map(|i| (i + 1..w.len()).filter(|&j| w[i] > w[j]).count()).sum()
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// The cyclic shift `(k+1, k+2, ..., n+1, 1, 2, ..., k)` in S_{n+1}.
pub fn cycle_perm(n: usize, k: usize) -> Result<Permutation> {
    if k == 0 || k > n {
        return Err(Error::InvalidInput(format!("k = {k} outside 1..={n}")));
    }
    Ok(Permutation((k + 1..=n + 1).chain(1..=k).collect()))
}

/// All of S_m in lexicographic order of one-line notation.
pub fn all_permutations(m: usize) -> Result<Vec<Permutation>> {
    if m > MAX_ENUMERATION_DEGREE {
        return Err(Error::SizeGuard(format!("S_{m} has more than 9! elements")));
    }
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (1..=m).collect();
    loop {
        out.push(Permutation(cur.clone()));
        // next lexicographic permutation
        let Some(i) = (1..cur.len()).rev().find(|&i| cur[i - 1] < cur[i]) else { break };
        let j = (i..cur.len()).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    Ok(out)
}

/// `sum_{w in S_m} q^{l(w)}` by enumerating S_m.
pub fn poincare_polynomial(m: usize, q: u64) -> Result<BigUint> {
    if m == 0 || q == 0 {
        return Err(Error::InvalidInput("need m >= 1 and q >= 1".into()));
    }
    let q = BigUint::from(q);
    let mut total = BigUint::zero();
    for w in all_permutations(m)? {
        total += q.pow(w.length() as u32);
    }
    Ok(total)
}

/// `k(n+1-k)`, the length of `cycle_perm(n, k)` predicted in closed form.
pub fn cycle_length_formula(n: usize, k: usize) -> usize {
    k * (n + 1 - k)
}

/// Coefficients of the length generating function, `counts[l] = #{w : l(w) = l}`.
pub fn length_distribution(m: usize) -> Result<Vec<BigUint>> {
    let max = m * m.saturating_sub(1) / 2;
    let mut counts = vec![BigUint::zero(); max + 1];
    for w in all_permutations(m)? {
        counts[w.length()] += BigUint::one();
    }
    Ok(counts)
}
