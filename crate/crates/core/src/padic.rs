//! Finite balls in the Bruhat-Tits building of PGL_{n+1}(Q_p).
//!
//! Vertices are homothety classes of Z_p-lattices in Q_p^{n+1}. Each class
//! has a unique representative `L` with `L ⊆ Z_p^{n+1}`, `L ⊄ p Z_p^{n+1}`,
//! stored by the upper-triangular matrix `B` whose columns span `L`:
//! diagonal entries are powers of `p` and `0 <= B[i][j] < B[i][i]` for
//! `j > i`. The type of a vertex is `v_p(det B) mod (n+1)`.
//!
//! The ball of radius `r` around the standard lattice `Z_p^{n+1}` consists of
//! the classes with `p^r Z_p^{n+1} ⊆ L`.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactint::IntMatrix;
use crate::fqlinalg::{enumerate_subspaces, gaussian_binomial, is_prime, FieldSpec, Subspace};
use crate::incidence::Incidence;

/// Default refusal threshold for the estimated number of ball vertices.
pub const MAX_BALL_VERTICES: u64 = 1_000_000;
pub const MAX_DEFAULT_RANK: usize = 3;
pub const MAX_DEFAULT_RADIUS: usize = 3;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct LatticeVertex {
    basis: Vec<i64>,
    dim: usize,
    p: u64,
    det_valuation: u32,
}

fn pow(p: u64, e: u32) -> Result<i128> {
    (p as i128)
        .checked_pow(e)
        .filter(|&m| m < (1i128 << 62))
        .ok_or_else(|| Error::SizeGuard(format!("{p}^{e} exceeds the 62-bit working range")))
}

fn valuation(mut x: i128, p: i128) -> u32 {
    let mut v = 0;
    while x != 0 && x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

// Upper-triangular column Hermite form of the Z-span of `gens` together with
// `modulus * e_i`. Returns the columns.
fn hnf_columns(dim: usize, gens: Vec<Vec<i128>>, modulus: i128) -> Vec<Vec<i128>> {
    let mut cols = gens;
    let mut out = vec![vec![0i128; dim]; dim];
    for i in (0..dim).rev() {
        for c in cols.iter_mut() {
            for x in c.iter_mut().take(i + 1) {
                *x = x.rem_euclid(modulus);
            }
        }
        let mut extra = vec![0i128; dim];
        extra[i] = modulus;
        cols.push(extra);
        cols.retain(|c| c.iter().any(|&x| x != 0));
        loop {
            let nz: Vec<usize> = (0..cols.len()).filter(|&k| cols[k][i] != 0).collect();
            if nz.len() <= 1 {
                break;
            }
            let piv = *nz.iter().min_by_key(|&&k| cols[k][i].abs()).unwrap();
            let pivot = cols[piv].clone();
            for &k in &nz {
                if k != piv {
                    let t = cols[k][i] / pivot[i];
                    for (x, &y) in cols[k].iter_mut().zip(&pivot) {
                        *x -= t * y;
                    }
                }
            }
        }
        let piv = (0..cols.len()).find(|&k| cols[k][i] != 0).expect("modulus column keeps row nonzero");
        let mut pivot = cols.swap_remove(piv);
        if pivot[i] < 0 {
            pivot.iter_mut().for_each(|x| *x = -*x);
        }
        out[i] = pivot;
    }
    for j in 0..dim {
        for i in (0..j).rev() {
            let t = out[j][i].div_euclid(out[i][i]);
            if t != 0 {
                let ci = out[i].clone();
                for (x, y) in out[j].iter_mut().zip(ci).take(i + 1) {
                    *x -= t * y;
                }
            }
        }
    }
    out
}

impl LatticeVertex {
    /// The class of the standard lattice `Z_p^{n+1}`.
    pub fn standard(n: usize, p: u64) -> Result<Self> {
        check_params(n, p)?;
        let dim = n + 1;
        let mut basis = vec![0; dim * dim];
        for i in 0..dim {
            basis[i * dim + i] = 1;
        }
        Ok(LatticeVertex { basis, dim, p, det_valuation: 0 })
    }

    /// The class of the Z_p-span of the given integer vectors, which must
    /// span Q_p^{n+1}.
    pub fn from_generators(p: u64, gens: &[Vec<i64>]) -> Result<Self> {
        let dim = gens.first().map(|g| g.len()).unwrap_or(0);
        if dim < 2 || gens.iter().any(|g| g.len() != dim) {
            return Err(Error::Dimension("generators must share a length of at least 2".into()));
        }
        check_params(dim - 1, p)?;
        // the largest invariant factor d satisfies d Z^N ⊆ L
        let m = IntMatrix::from_rows(gens)?;
        let snf = crate::exactint::snf(&m)?;
        if snf.rank() < dim {
            return Err(Error::InvalidInput("generators do not span a full-rank lattice".into()));
        }
        let last = snf.invariant_factors[dim - 1].magnitude().clone();
        let mut v = 0u32;
        let mut x = last;
        let bp = BigUint::from(p);
        while (&x % &bp).is_zero() {
            x /= &bp;
            v += 1;
        }
        let modulus = pow(p, v)?;
        let gens = gens.iter().map(|g| g.iter().map(|&x| x as i128).collect()).collect();
        Ok(Self::canonical(p, dim, gens, modulus))
    }

    /// Rebuilds a vertex from the rows of its canonical basis matrix,
    /// rejecting matrices not in canonical form.
    pub fn from_basis(p: u64, rows: &[Vec<i64>]) -> Result<Self> {
        let v = Self::from_generators(p, &transpose(rows))?;
        if v.basis_rows() != rows {
            return Err(Error::InvalidInput("basis is not in canonical form".into()));
        }
        Ok(v)
    }

    fn canonical(p: u64, dim: usize, gens: Vec<Vec<i128>>, modulus: i128) -> Self {
        let cols = hnf_columns(dim, gens, modulus);
        let pi = p as i128;
        let mut b: Vec<i128> = (0..dim * dim).map(|k| cols[k % dim][k / dim]).collect();
        while b.iter().all(|&x| x % pi == 0) {
            b.iter_mut().for_each(|x| *x /= pi);
        }
        let det_valuation = (0..dim).map(|i| valuation(b[i * dim + i], pi)).sum();
        LatticeVertex { basis: b.into_iter().map(|x| x as i64).collect(), dim, p, det_valuation }
    }

    pub fn rank(&self) -> usize {
        self.dim - 1
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn det_valuation(&self) -> u32 {
        self.det_valuation
    }

    /// `v_p(det) mod (n+1)`.
    pub fn vertex_type(&self) -> usize {
        self.det_valuation as usize % self.dim
    }

    pub fn basis_rows(&self) -> Vec<Vec<i64>> {
        self.basis.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    fn column(&self, j: usize) -> Vec<i128> {
        (0..self.dim).map(|i| self.basis[i * self.dim + j] as i128).collect()
    }

    /// All adjacent vertices, sorted.
    pub fn neighbors(&self) -> Result<Vec<LatticeVertex>> {
        let subspaces = quotient_subspaces(self.dim, self.p)?;
        self.neighbors_with(&subspaces)
    }

    // Adjacent classes are the lattices L' with pL ⊊ L' ⊊ L, one for every
    // proper nonzero subspace of L/pL.
    fn neighbors_with(&self, subspaces: &[Subspace]) -> Result<Vec<LatticeVertex>> {
        let modulus = pow(self.p, self.det_valuation + 1)?;
        let dim = self.dim;
        let cols: Vec<Vec<i128>> = (0..dim).map(|j| self.column(j)).collect();
        let pi = self.p as i128;
        let mut out: Vec<LatticeVertex> = subspaces
            .iter()
            .map(|w| {
                let basis = w.basis();
                let mut gens: Vec<Vec<i128>> = (0..basis.rows())
                    .map(|r| {
                        let coeffs = basis.row(r);
                        (0..dim)
                            .map(|i| (0..dim).map(|k| coeffs[k] as i128 * cols[k][i]).sum())
                            .collect()
                    })
                    .collect();
                gens.extend(cols.iter().map(|c| c.iter().map(|x| x * pi).collect()));
                Self::canonical(self.p, dim, gens, modulus)
            })
            .collect();
        out.sort();
        Ok(out)
    }
}

fn transpose(rows: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = rows.first().map(|r| r.len()).unwrap_or(0);
    (0..n).map(|j| rows.iter().map(|r| r[j]).collect()).collect()
}

fn check_params(n: usize, p: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidInput("rank n must be at least 1".into()));
    }
    if !is_prime(p) {
        return Err(Error::InvalidInput(format!("{p} is not prime")));
    }
    Ok(())
}

fn quotient_subspaces(dim: usize, p: u64) -> Result<Vec<Subspace>> {
    let p32 = u32::try_from(p).map_err(|_| Error::SizeGuard(format!("p = {p} too large")))?;
    let field = FieldSpec::prime(p32)?;
    let mut all = Vec::new();
    for d in 1..dim {
        all.extend(enumerate_subspaces(&field, dim, d)?);
    }
    Ok(all)
}

/// Exact number of vertices in the ball of radius `r`: the lattices `L` with
/// `p^r Z^{n+1} ⊆ L ⊆ Z^{n+1}` and `L ⊄ p Z^{n+1}`.
pub fn ball_vertex_count(n: usize, p: u64, r: usize) -> BigUint {
    let dim = n + 1;
    if r == 0 {
        return BigUint::from(1u32);
    }
    subgroup_count(dim, p, r) - subgroup_count(dim, p, r - 1)
}

// Number of subgroups of (Z/p^s)^dim, summing the Birkhoff count over
// conjugate partitions dim >= m_1 >= ... >= m_s >= 0.
fn subgroup_count(dim: usize, p: u64, s: usize) -> BigUint {
    fn go(dim: usize, p: u64, s: usize, conj: &mut Vec<usize>, total: &mut BigUint) {
        if conj.len() == s {
            let mut term = BigUint::from(1u32);
            for i in 0..s {
                let mi = conj[i];
                let next = conj.get(i + 1).copied().unwrap_or(0);
                term *= BigUint::from(p).pow((next * (dim - mi)) as u32);
                term *= gaussian_binomial(p, (dim - next) as u32, (mi - next) as u32);
            }
            *total += term;
            return;
        }
        let cap = conj.last().copied().unwrap_or(dim);
        for m in 0..=cap {
            conj.push(m);
            go(dim, p, s, conj, total);
            conj.pop();
        }
    }
    let mut total = BigUint::zero();
    go(dim, p, s, &mut Vec::new(), &mut total);
    total
}

/// A ball around the standard vertex with its induced flag complex.
#[derive(Clone, Debug)]
pub struct Ball {
    pub n: usize,
    pub p: u64,
    pub radius: usize,
    /// Sorted lexicographically by canonical basis; index 0 is the center.
    pub vertices: Vec<LatticeVertex>,
    pub distance: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
    /// Sorted vertex sets of the typed `(n+1)`-cliques.
    pub chambers: Vec<Vec<usize>>,
    pub adjacency: Vec<Vec<usize>>,
}

/// Builds the ball of radius `radius` around `Z_p^{n+1}`. Without
/// `allow_large`, requests with `n > 3`, `radius > 3` or more than
/// [`MAX_BALL_VERTICES`] vertices are refused.
pub fn ball(n: usize, p: u64, radius: usize, allow_large: bool) -> Result<Ball> {
    check_params(n, p)?;
    if !allow_large {
        if n > MAX_DEFAULT_RANK || radius > MAX_DEFAULT_RADIUS {
            return Err(Error::SizeGuard(format!(
                "n = {n}, radius = {radius} beyond the default limits n <= {MAX_DEFAULT_RANK}, radius <= {MAX_DEFAULT_RADIUS}"
            )));
        }
        let est = ball_vertex_count(n, p, radius);
        if est > BigUint::from(MAX_BALL_VERTICES) {
            return Err(Error::SizeGuard(format!("ball would have {est} vertices")));
        }
    }
    pow(p, (radius * n + 1) as u32)?;
    let dim = n + 1;
    let subspaces = quotient_subspaces(dim, p)?;
    let center = LatticeVertex::standard(n, p)?;

    let mut index: HashMap<LatticeVertex, usize> = HashMap::new();
    let mut found = vec![center.clone()];
    let mut dist = vec![0usize];
    let mut nbrs: Vec<Vec<LatticeVertex>> = Vec::new();
    index.insert(center, 0);
    let mut frontier = 0..1;
    for level in 0..=radius {
        let layer: Result<Vec<Vec<LatticeVertex>>> =
            found[frontier.clone()].par_iter().map(|v| v.neighbors_with(&subspaces)).collect();
        let layer = layer?;
        let start = found.len();
        if level < radius {
            for list in &layer {
                for w in list {
                    if !index.contains_key(w) {
                        index.insert(w.clone(), found.len());
                        found.push(w.clone());
                        dist.push(level + 1);
                    }
                }
            }
        }
        nbrs.extend(layer);
        frontier = start..found.len();
        if frontier.is_empty() {
            break;
        }
    }

    let mut order: Vec<usize> = (0..found.len()).collect();
    order.sort_by(|&a, &b| found[a].cmp(&found[b]));
    let mut new_id = vec![0; found.len()];
    for (new, &old) in order.iter().enumerate() {
        new_id[old] = new;
    }
    let vertices: Vec<LatticeVertex> = order.iter().map(|&o| found[o].clone()).collect();
    let distance: Vec<usize> = order.iter().map(|&o| dist[o]).collect();
    let mut adjacency = vec![Vec::new(); vertices.len()];
    for (old, list) in nbrs.iter().enumerate() {
        let u = new_id[old];
        for w in list {
            if let Some(&o) = index.get(w) {
                adjacency[u].push(new_id[o]);
            }
        }
    }
    for a in adjacency.iter_mut() {
        a.sort_unstable();
        a.dedup();
    }
    let mut edges: Vec<(usize, usize)> = adjacency
        .iter()
        .enumerate()
        .flat_map(|(u, a)| a.iter().filter(move |&&w| w > u).map(move |&w| (u, w)))
        .collect();
    edges.sort_unstable();
    let types: Vec<usize> = vertices.iter().map(|v| v.vertex_type()).collect();
    let chambers = typed_cliques(&adjacency, &types, dim);
    Ok(Ball { n, p, radius, vertices, distance, edges, chambers, adjacency })
}

fn typed_cliques(adj: &[Vec<usize>], types: &[usize], size: usize) -> Vec<Vec<usize>> {
    fn extend(adj: &[Vec<usize>], types: &[usize], size: usize, cur: &mut Vec<usize>, cands: &[usize], out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for (k, &c) in cands.iter().enumerate() {
            if cur.iter().any(|&x| types[x] == types[c]) {
                continue;
            }
            let next: Vec<usize> = cands[k + 1..].iter().copied().filter(|x| adj[c].binary_search(x).is_ok()).collect();
            cur.push(c);
            extend(adj, types, size, cur, &next, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for v in 0..adj.len() {
        let cands: Vec<usize> = adj[v].iter().copied().filter(|&w| w > v).collect();
        extend(adj, types, size, &mut vec![v], &cands, &mut out);
    }
    out
}

/// The link of a vertex: its neighbors and the faces of the chambers
/// containing it, with types recorded relative to the vertex.
#[derive(Clone, Debug)]
pub struct VertexLink {
    pub center: usize,
    pub rank: usize,
    pub vertices: Vec<usize>,
    /// `type(w) - type(center) mod (n+1)` for each link vertex.
    pub offsets: Vec<usize>,
    pub simplices: Vec<Vec<usize>>,
}

impl Ball {
    pub fn center(&self) -> usize {
        0
    }

    pub fn index_of(&self, v: &LatticeVertex) -> Option<usize> {
        self.vertices.binary_search(v).ok()
    }

    /// Vertices whose full link lies inside the ball.
    pub fn interior(&self) -> Vec<usize> {
        (0..self.vertices.len()).filter(|&v| self.distance[v] < self.radius).collect()
    }

    pub fn link(&self, v: usize) -> Result<VertexLink> {
        if v >= self.vertices.len() {
            return Err(Error::IndexOutOfRange { index: v, limit: self.vertices.len() });
        }
        if self.distance[v] >= self.radius {
            return Err(Error::IncompleteLink(format!(
                "vertex {v} lies at distance {} on the boundary of a radius {} ball",
                self.distance[v], self.radius
            )));
        }
        let dim = self.n + 1;
        let t = self.vertices[v].vertex_type();
        let vertices = self.adjacency[v].clone();
        let offsets = vertices.iter().map(|&w| (self.vertices[w].vertex_type() + dim - t) % dim).collect();
        let simplices = self
            .chambers
            .iter()
            .filter(|c| c.contains(&v))
            .map(|c| c.iter().copied().filter(|&w| w != v).collect())
            .collect();
        Ok(VertexLink { center: v, rank: self.n, vertices, offsets, simplices })
    }
}

impl VertexLink {
    /// For rank 2, the point-line geometry: points are the neighbors of
    /// relative type 1, lines those of relative type 2, incident when they
    /// span a chamber with the center.
    pub fn incidence(&self) -> Result<Incidence> {
        if self.rank != 2 {
            return Err(Error::InvalidInput(format!("link incidence needs rank 2, not {}", self.rank)));
        }
        let pos = |w: usize| self.vertices.binary_search(&w).unwrap();
        let mut point_id = HashMap::new();
        let mut line_id = HashMap::new();
        for (k, &w) in self.vertices.iter().enumerate() {
            match self.offsets[k] {
                1 => point_id.insert(w, point_id.len()),
                _ => line_id.insert(w, line_id.len()),
            };
        }
        let mut flags = Vec::new();
        for s in &self.simplices {
            let (a, b) = (s[0], s[1]);
            let (pt, ln) = if self.offsets[pos(a)] == 1 { (a, b) } else { (b, a) };
            flags.push((point_id[&pt], line_id[&ln]));
        }
        Ok(Incidence::new(point_id.len(), line_id.len(), flags))
    }

    /// Checks the link against the building axioms: a projective plane of
    /// order `p` for rank 2, `p + 1` isolated points for rank 1. Returns the
    /// order found.
    pub fn check(&self, p: u64) -> Result<u64> {
        match self.rank {
            1 => {
                if self.vertices.len() as u64 == p + 1 && self.simplices.iter().all(|s| s.len() == 1) {
                    Ok(p)
                } else {
                    Err(Error::LinkAxiom(format!("expected {} isolated vertices, found {}", p + 1, self.vertices.len())))
                }
            }
            2 => {
                let q = self.incidence()?.projective_plane_order().map_err(|e| Error::LinkAxiom(e.join("; ")))?;
                if q != p {
                    return Err(Error::LinkAxiom(format!("link is a plane of order {q}, expected {p}")));
                }
                Ok(q)
            }
            r => Err(Error::InvalidInput(format!("no link check implemented for rank {r}"))),
        }
    }
}

/// Largest elementary-divisor exponent of the canonical representative,
/// which equals the graph distance to the standard vertex.
pub fn distance_to_standard(v: &LatticeVertex) -> Result<u32> {
    let snf = crate::exactint::snf(&IntMatrix::from_rows(&v.basis_rows())?)?;
    let last = snf.invariant_factors.last().and_then(|d| d.magnitude().to_u64()).unwrap_or(1);
    let mut x = last;
    let mut e = 0;
    while x % v.p == 0 {
        x /= v.p;
        e += 1;
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_neighbors() {
        let v = LatticeVertex::standard(2, 2).unwrap();
        let nb = v.neighbors().unwrap();
        assert_eq!(nb.len(), 14);
        let ones = nb.iter().filter(|w| w.vertex_type() == 1).count();
        assert_eq!(ones, 7);
        for w in &nb {
            assert_eq!(distance_to_standard(w).unwrap(), 1);
            assert!(w.neighbors().unwrap().contains(&v));
        }
    }

    #[test]
    fn homothety_normalization() {
        let a = LatticeVertex::from_generators(3, &[vec![3, 0], vec![0, 9]]).unwrap();
        let b = LatticeVertex::from_generators(3, &[vec![1, 0], vec![0, 3]]).unwrap();
        assert_eq!(a, b);
        assert_eq!(b.basis_rows(), vec![vec![1, 0], vec![0, 3]]);
        assert_eq!(b.det_valuation(), 1);
    }

    #[test]
    fn units_away_from_p_disappear() {
        let a = LatticeVertex::from_generators(2, &[vec![5, 0], vec![0, 7]]).unwrap();
        assert_eq!(a, LatticeVertex::standard(1, 2).unwrap());
        let b = LatticeVertex::from_generators(2, &[vec![1, 1], vec![0, 2]]).unwrap();
        let c = LatticeVertex::from_generators(2, &[vec![3, 1], vec![2, 0]]).unwrap();
        assert_eq!(b, c);
    }

    #[test]
    fn basis_roundtrip() {
        let b = ball(2, 3, 1, false).unwrap();
        for v in &b.vertices {
            assert_eq!(&LatticeVertex::from_basis(3, &v.basis_rows()).unwrap(), v);
        }
        assert!(LatticeVertex::from_basis(3, &[vec![1, 5, 0], vec![0, 3, 0], vec![0, 0, 1]]).is_err());
    }

    #[test]
    fn small_ball_counts() {
        let b = ball(2, 2, 1, false).unwrap();
        assert_eq!(b.vertices.len(), 15);
        let center_chambers = b.chambers.iter().filter(|c| c.contains(&0)).count();
        assert_eq!(center_chambers, 21);
        let b = ball(2, 3, 1, false).unwrap();
        assert_eq!(b.vertices.len(), 27);
        assert_eq!(b.chambers.iter().filter(|c| c.contains(&0)).count(), 52);
        let t = ball(1, 2, 1, false).unwrap();
        assert_eq!((t.vertices.len(), t.edges.len()), (4, 3));
    }

    #[test]
    fn vertex_count_formula_matches_bfs() {
        for (n, p, r) in [(1, 2, 3), (1, 3, 2), (2, 2, 2), (2, 3, 2), (3, 2, 1), (2, 2, 3)] {
            let b = ball(n, p, r, false).unwrap();
            assert_eq!(BigUint::from(b.vertices.len()), ball_vertex_count(n, p, r), "n={n} p={p} r={r}");
        }
    }

    #[test]
    fn bfs_distance_is_elementary_divisor() {
        let b = ball(2, 2, 2, false).unwrap();
        for (v, &d) in b.vertices.iter().zip(&b.distance) {
            assert_eq!(distance_to_standard(v).unwrap() as usize, d);
        }
    }

    #[test]
    fn tree_ball_is_a_tree() {
        let b = ball(1, 3, 2, false).unwrap();
        assert_eq!(b.vertices.len(), 1 + 4 + 12);
        assert_eq!(b.edges.len(), b.vertices.len() - 1);
        assert_eq!(b.link(0).unwrap().check(3).unwrap(), 3);
    }

    #[test]
    fn links_are_planes() {
        for p in [2, 3] {
            let b = ball(2, p, 2, false).unwrap();
            for v in b.interior() {
                assert_eq!(b.link(v).unwrap().check(p).unwrap(), p);
            }
        }
    }

    #[test]
    fn boundary_link_refused() {
        let b = ball(2, 2, 1, false).unwrap();
        assert!(matches!(b.link(1), Err(Error::IncompleteLink(_))));
    }

    #[test]
    fn guards() {
        assert!(matches!(ball(4, 2, 1, false), Err(Error::SizeGuard(_))));
        assert!(matches!(ball(2, 2, 4, false), Err(Error::SizeGuard(_))));
        assert!(matches!(ball(3, 7, 3, false), Err(Error::SizeGuard(_))));
        assert!(matches!(ball(2, 4, 1, false), Err(Error::InvalidInput(_))));
        assert!(ball(1, 2, 4, true).is_ok());
    }
}
