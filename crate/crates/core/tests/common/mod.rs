//! Independent oracles and instance generators shared by the integration
//! tests. Nothing here calls into the library's elimination code.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use torsion_core::complexes::QuotientGraph;

pub fn big(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

/// Textbook Smith form without transforms: move the smallest entry to the
/// pivot, clear its row and column by division with remainder, and fold in
/// any row whose entries the pivot fails to divide.
pub fn naive_invariant_factors(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    let mut out = Vec::new();
    for t in 0..m.min(n) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                out.extend(std::iter::repeat_n(BigInt::zero(), m.min(n) - t));
                return out;
            };
            a.swap(t, bi);
            for row in a.iter_mut() {
                row.swap(t, bj);
            }
            let mut clean = true;
            for i in t + 1..m {
                let q = &a[i][t] / &a[t][t];
                if !q.is_zero() {
                    for j in t..n {
                        let v = &q * &a[t][j];
                        a[i][j] -= v;
                    }
                }
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..n {
                let q = &a[t][j] / &a[t][t];
                if !q.is_zero() {
                    for i in t..m {
                        let v = &q * &a[i][t];
                        a[i][j] -= v;
                    }
                }
                clean &= a[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
            match bad {
                Some(i) => {
                    for j in t..n {
                        let v = a[i][j].clone();
                        a[t][j] += v;
                    }
                }
                None => break,
            }
        }
        out.push(a[t][t].abs());
    }
    out
}

/// Order of `e_idx` in `Z^cols / rowspan(rows)`: move column `idx` last,
/// bring the rows to integer echelon form and read off the pivot of the row
/// supported on that column alone.
pub fn naive_order(rows: &[Vec<BigInt>], idx: usize) -> Option<BigInt> {
    let cols = rows.first()?.len();
    let perm: Vec<usize> = (0..cols).filter(|&j| j != idx).chain([idx]).collect();
    let mut a: Vec<Vec<BigInt>> = rows.iter().map(|r| perm.iter().map(|&j| r[j].clone()).collect()).collect();
    let mut top = 0;
    for c in 0..cols {
        loop {
            let nz: Vec<usize> = (top..a.len()).filter(|&i| !a[i][c].is_zero()).collect();
            if nz.len() <= 1 {
                if let Some(&i) = nz.first() {
                    a.swap(top, i);
                    if c == cols - 1 {
                        return Some(a[top][c].abs());
                    }
                    top += 1;
                }
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| a[i][c].abs()).unwrap();
            let pivot = a[p].clone();
            for &i in &nz {
                if i != p {
                    let q = &a[i][c] / &pivot[c];
                    for (x, y) in a[i].iter_mut().zip(&pivot) {
                        *x -= &q * y;
                    }
                }
            }
        }
    }
    None
}

/// Determinant by cofactor expansion along the first row.
pub fn cofactor_det(a: &[Vec<BigInt>]) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    if n == 1 {
        return a[0][0].clone();
    }
    let mut total = BigInt::zero();
    for j in 0..n {
        if a[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigInt>> =
            a[1..].iter().map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| x.clone()).collect()).collect();
        let term = &a[0][j] * cofactor_det(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut with: Vec<Vec<usize>> = subsets(n - 1, k - 1);
    for s in with.iter_mut() {
        s.push(n - 1);
    }
    with.extend(subsets(n - 1, k));
    with
}

/// Invariant factors as ratios of determinantal divisors (gcds of k×k
/// minors).
pub fn determinantal_invariant_factors(a: &[Vec<BigInt>]) -> Vec<BigInt> {
    let m = a.len();
    let n = a[0].len();
    let mut prev = BigInt::one();
    let mut out = Vec::new();
    for k in 1..=m.min(n) {
        let mut g = BigInt::zero();
        for rs in subsets(m, k) {
            for cs in subsets(n, k) {
                let minor: Vec<Vec<BigInt>> = rs.iter().map(|&i| cs.iter().map(|&j| a[i][j].clone()).collect()).collect();
                g = g.gcd(&cofactor_det(&minor));
            }
        }
        if g.is_zero() {
            out.extend(std::iter::repeat_n(BigInt::zero(), m.min(n) - k + 1));
            return out;
        }
        out.push(&g / &prev);
        prev = g;
    }
    out
}

/// Random connected multigraph on `n0` vertices (loops and parallel edges
/// allowed) in which every vertex has degree at least three.
pub fn random_graph(rng: &mut ChaCha8Rng, n0: usize) -> QuotientGraph {
    let mut edges: Vec<(String, usize, usize)> = Vec::new();
    let mut deg = vec![0usize; n0];
    let add = |u: usize, v: usize, edges: &mut Vec<(String, usize, usize)>, deg: &mut Vec<usize>| {
        edges.push((format!("g{}", edges.len()), u, v));
        deg[u] += 1;
        deg[v] += 1;
    };
    for v in 1..n0 {
        let u = rng.gen_range(0..v);
        add(u, v, &mut edges, &mut deg);
    }
    while let Some(u) = (0..n0).find(|&v| deg[v] < 3) {
        let v = if rng.gen_bool(0.2) { u } else { rng.gen_range(0..n0) };
        add(u, v, &mut edges, &mut deg);
    }
    for _ in 0..rng.gen_range(0..=3) {
        let (u, v) = (rng.gen_range(0..n0), rng.gen_range(0..n0));
        add(u, v, &mut edges, &mut deg);
    }
    let names = (0..n0).map(|i| format!("v{i}")).collect();
    QuotientGraph::new(names, edges).unwrap()
}

/// Relation rows of a tree quotient written out directly from the graph:
/// generator 0 is `[I]`, generator `1 + e` the directed edge `e`.
pub fn tree_rows_oracle(g: &QuotientGraph) -> Vec<Vec<BigInt>> {
    let cols = 1 + g.directed_count();
    let mut rows = Vec::new();
    for v in 0..g.n0() {
        let mut r = vec![BigInt::zero(); cols];
        r[0] = BigInt::from(-1);
        for e in 0..g.directed_count() {
            if g.origin(e) == v {
                r[1 + e] += 1;
            }
        }
        rows.push(r);
    }
    for e in (0..g.directed_count()).step_by(2) {
        let mut r = vec![BigInt::zero(); cols];
        r[0] = BigInt::from(-1);
        r[1 + e] += 1;
        r[1 + g.reverse(e)] += 1;
        rows.push(r);
    }
    rows
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i64) -> Vec<Vec<i64>> {
    (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(-bound..=bound)).collect()).collect()
}
