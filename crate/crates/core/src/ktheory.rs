//! Relation systems on the classes `[I]`, `[d]`, `[d̄]`, `[e]`, `[ē]`, `[ê]`
//! and the order of `[I]` in the group they present.
//!
//! All orders are computed in the universal relation group (free abelian
//! on the generator labels modulo exactly the listed rows), so they bound
//! the order of `[I]` in K0 from above.

use std::collections::HashSet;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::complexes::{build_mk, A2Complex, DirectedCell, QuotientGraph};
use crate::error::{Error, Result};
use crate::exactint::{snf, ElementOrder, IntMatrix, SnfResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    I,
    /// A directed cell.
    D(usize),
    DBar(usize),
    /// A directed edge (both orientations in the tree case).
    E(usize),
    EBar(usize),
    EHat(usize),
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::I => write!(f, "I"),
            Generator::D(i) => write!(f, "d{i}"),
            Generator::DBar(i) => write!(f, "dbar{i}"),
            Generator::E(i) => write!(f, "e{i}"),
            Generator::EBar(i) => write!(f, "ebar{i}"),
            Generator::EHat(i) => write!(f, "ehat{i}"),
        }
    }
}

/// Which family a relation row belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    /// `Σ_{o(e)=v} [e] = [I]`.
    TreeVertex,
    /// `[e] + [ē] = [I]`.
    TreeEdge,
    /// `Σ_{d(0)=x} [d] = [I]`.
    VertexCells,
    /// `Σ_{d on x²} ([d] + [d̄]) = [I]`.
    ChamberCells,
    /// `[e] + [ē] + [ê] = [I]`.
    EdgeTriple,
    /// `Σ_{tail(e)=x} [e] = [I]`.
    EdgeTails,
    /// `Σ_{head(e)=x} [ē] = [I]`.
    EdgeHeads,
    /// `[ê] = Σ [d̄]` over cells whose opposite edge is `e`.
    OppositeCells,
    /// `[c] = Σ_d M_k(d, c) [d]`.
    Mk(u8),
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Provenance::TreeVertex => "tree-vertex",
            Provenance::TreeEdge => "tree-edge",
            Provenance::VertexCells => "vertex-cells",
            Provenance::ChamberCells => "chamber-cells",
            Provenance::EdgeTriple => "edge-triple",
            Provenance::EdgeTails => "edge-tails",
            Provenance::EdgeHeads => "edge-heads",
            Provenance::OppositeCells => "opposite-cells",
            Provenance::Mk(1) => "mk1",
            Provenance::Mk(_) => "mk2",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug)]
pub struct RelationPresentation {
    pub generators: Vec<Generator>,
    pub relations: IntMatrix,
    pub provenance: Vec<Provenance>,
}

struct Builder {
    generators: Vec<Generator>,
    index: std::collections::HashMap<Generator, usize>,
    rows: Vec<Vec<i64>>,
    tags: Vec<Provenance>,
    seen: HashSet<Vec<i64>>,
}

impl Builder {
    fn new(generators: Vec<Generator>) -> Self {
        let index = generators.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        Builder { generators, index, rows: Vec::new(), tags: Vec::new(), seen: HashSet::new() }
    }

    fn push(&mut self, terms: &[(Generator, i64)], tag: Provenance) {
        let mut row = vec![0i64; self.generators.len()];
        for (g, c) in terms {
            row[self.index[g]] += c;
        }
        if row.iter().all(|&x| x == 0) || !self.seen.insert(row.clone()) {
            return;
        }
        self.rows.push(row);
        self.tags.push(tag);
    }

    fn finish(self) -> Result<RelationPresentation> {
        let cols = self.generators.len();
        let entries = self.rows.iter().flatten().map(|&x| BigInt::from(x)).collect();
        let relations = IntMatrix::new(self.rows.len(), cols, entries)?;
        Ok(RelationPresentation { generators: self.generators, relations, provenance: self.tags })
    }
}

impl RelationPresentation {
    pub fn identity_index(&self) -> usize {
        self.generators.iter().position(|&g| g == Generator::I).expect("presentations always contain I")
    }

    /// The coefficient vector `m · [I]`.
    pub fn identity_multiple(&self, m: &BigInt) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.generators.len()];
        v[self.identity_index()] = m.clone();
        v
    }

    pub fn vector(&self, terms: &[(Generator, BigInt)]) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.generators.len()];
        for (g, c) in terms {
            let i = self.generators.iter().position(|h| h == g).expect("generator present");
            v[i] += c;
        }
        v
    }

    pub fn decompose(&self) -> Result<SnfResult> {
        snf(&self.relations)
    }

    /// Order of `[I]` in the universal relation group.
    pub fn order_of_identity(&self) -> Result<ElementOrder> {
        crate::exactint::element_order(&self.relations, self.identity_index())
    }
}

/// Relations for a tree quotient: one row per vertex and one per
/// geometric edge, over the generators `[I]` and the directed edges.
pub fn tree_relations(x: &QuotientGraph) -> Result<RelationPresentation> {
    if !x.is_connected() {
        return Err(Error::Disconnected("quotient graph must be connected".into()));
    }
    let mut gens = vec![Generator::I];
    gens.extend((0..x.directed_count()).map(Generator::E));
    let mut b = Builder::new(gens);
    for v in 0..x.n0() {
        let mut terms: Vec<_> =
            (0..x.directed_count()).filter(|&e| x.origin(e) == v).map(|e| (Generator::E(e), 1)).collect();
        terms.push((Generator::I, -1));
        b.push(&terms, Provenance::TreeVertex);
    }
    for g in 0..x.n1() {
        let e = 2 * g;
        b.push(&[(Generator::E(e), 1), (Generator::E(x.reverse(e)), 1), (Generator::I, -1)], Provenance::TreeEdge);
    }
    b.finish()
}

/// Relations for a validated Ã₂ quotient; with `include_mk` the rows
/// `[c] = Σ_d M_k(d, c)[d]` for `k = 1, 2` are added.
pub fn a2_relations(x: &A2Complex, include_mk: bool) -> Result<RelationPresentation> {
    x.validate_links()?;
    let cells = x.cell_count();
    let mut gens = vec![Generator::I];
    gens.extend((0..cells).map(Generator::D));
    gens.extend((0..cells).map(Generator::DBar));
    gens.extend((0..x.n1()).map(Generator::E));
    gens.extend((0..x.n1()).map(Generator::EBar));
    gens.extend((0..x.n1()).map(Generator::EHat));
    let mut b = Builder::new(gens);
    let minus_i = (Generator::I, -1);

    for v in 0..x.n0() {
        let mut t: Vec<_> = (0..cells)
            .filter(|&d| x.cell_vertex(DirectedCell::from_index(d), 0) == v)
            .map(|d| (Generator::D(d), 1))
            .collect();
        t.push(minus_i);
        b.push(&t, Provenance::VertexCells);
    }
    for c in 0..x.n2() {
        let mut t: Vec<_> = (0..3).flat_map(|j| [(Generator::D(3 * c + j), 1), (Generator::DBar(3 * c + j), 1)]).collect();
        t.push(minus_i);
        b.push(&t, Provenance::ChamberCells);
    }
    for e in 0..x.n1() {
        b.push(&[(Generator::E(e), 1), (Generator::EBar(e), 1), (Generator::EHat(e), 1), minus_i], Provenance::EdgeTriple);
    }
    for v in 0..x.n0() {
        let mut t: Vec<_> = (0..x.n1()).filter(|&e| x.tail(e) == v).map(|e| (Generator::E(e), 1)).collect();
        t.push(minus_i);
        b.push(&t, Provenance::EdgeTails);
        let mut t: Vec<_> = (0..x.n1()).filter(|&e| x.head(e) == v).map(|e| (Generator::EBar(e), 1)).collect();
        t.push(minus_i);
        b.push(&t, Provenance::EdgeHeads);
    }
    for e in 0..x.n1() {
        let mut t = vec![(Generator::EHat(e), 1)];
        t.extend(
            (0..cells)
                .filter(|&d| x.opposite_edge(DirectedCell::from_index(d)) == e)
                .map(|d| (Generator::DBar(d), -1)),
        );
        b.push(&t, Provenance::OppositeCells);
    }
    if include_mk {
        for k in 1..=2u8 {
            let m = build_mk(x, k as usize)?;
            let mut cols: Vec<Vec<usize>> = vec![Vec::new(); cells];
            for &(d, c) in &m.entries {
                cols[c].push(d);
            }
            for (c, ds) in cols.iter().enumerate() {
                let mut t = vec![(Generator::D(c), 1)];
                t.extend(ds.iter().map(|&d| (Generator::D(d), -1)));
                b.push(&t, Provenance::Mk(k));
            }
        }
    }
    b.finish()
}

/// A consequence of the relations checked by row-span membership.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: String,
    pub holds: bool,
}

fn check(snf: &SnfResult, name: &str, v: &[BigInt]) -> Result<IdentityCheck> {
    Ok(IdentityCheck { name: name.to_string(), holds: snf.row_span_contains(v)? })
}

/// `(n0 - n1) [I] = 0`.
pub fn tree_identity_checks(x: &QuotientGraph, p: &RelationPresentation, snf: &SnfResult) -> Result<Vec<IdentityCheck>> {
    let m = BigInt::from(x.n0() as i64 - x.n1() as i64);
    Ok(vec![check(snf, "(n0-n1)[I]=0", &p.identity_multiple(&m))?])
}

/// Sum identities implied by the Ã₂ rows: the Euler characteristic
/// annihilates `[I]`, the cell sums, the edge sums, the global opposite-cell
/// sum and, when `q` and the M_k rows are present, `n0(q^{k(3-k)}-1)[I] = 0`.
pub fn a2_identity_checks(x: &A2Complex, p: &RelationPresentation, snf: &SnfResult, mk_q: Option<u64>) -> Result<Vec<IdentityCheck>> {
    let cells = x.cell_count();
    let (n0, n1, n2) = (x.n0() as i64, x.n1() as i64, x.n2() as i64);
    let one = BigInt::one;
    let neg = || -BigInt::one();
    let all_d: Vec<_> = (0..cells).map(|d| (Generator::D(d), neg())).collect();
    let all_dbar: Vec<_> = (0..cells).map(|d| (Generator::DBar(d), neg())).collect();
    let mut out = Vec::new();
    out.push(check(snf, "(n0-n1+n2)[I]=0", &p.identity_multiple(&BigInt::from(n0 - n1 + n2)))?);

    let mut t = vec![(Generator::I, BigInt::from(n2))];
    t.extend(all_d.iter().cloned());
    t.extend(all_dbar.iter().cloned());
    out.push(check(snf, "sum[d]+sum[dbar]=n2[I]", &p.vector(&t))?);

    let mut t = vec![(Generator::I, BigInt::from(n2 - n0))];
    t.extend(all_dbar.iter().cloned());
    out.push(check(snf, "sum[dbar]=(n2-n0)[I]", &p.vector(&t))?);

    let mut t = vec![(Generator::I, BigInt::from(n0))];
    t.extend((0..x.n1()).map(|e| (Generator::E(e), neg())));
    out.push(check(snf, "sum[e]=n0[I]", &p.vector(&t))?);

    let mut t = vec![(Generator::I, BigInt::from(n0))];
    t.extend((0..x.n1()).map(|e| (Generator::EBar(e), neg())));
    out.push(check(snf, "sum[ebar]=n0[I]", &p.vector(&t))?);

    let mut t: Vec<_> = (0..x.n1()).map(|e| (Generator::EHat(e), one())).collect();
    t.extend(all_dbar.iter().cloned());
    out.push(check(snf, "sum[ehat]=sum[dbar]", &p.vector(&t))?);

    if let Some(q) = mk_q {
        for k in 1..=2u32 {
            let m = BigInt::from(n0) * (BigInt::from(q).pow(k * (3 - k)) - 1);
            out.push(check(snf, &format!("n0(q^{}-1)[I]=0 [k={k}]", k * (3 - k)), &p.identity_multiple(&m))?);
        }
    }
    Ok(out)
}

/// The annihilator `m` of `[I]` with the branch that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundResult {
    pub m: BigUint,
    pub case: String,
}

fn check_bound_args(n: u64, q: u64, n0: u64) -> Result<()> {
    if n == 0 || q < 2 || n0 == 0 {
        return Err(Error::InvalidInput(format!("need n >= 1, q >= 2, n0 >= 1 (got n={n}, q={q}, n0={n0})")));
    }
    Ok(())
}

pub fn bound(n: u64, q: u64, n0: u64) -> Result<BoundResult> {
    check_bound_args(n, q, n0)?;
    let (qb, n0b) = (BigUint::from(q), BigUint::from(n0));
    let q2m1 = &qb * &qb - 1u32;
    let (m, case) = if n != 2 {
        if n % 2 == 1 {
            (n0b * (qb - 1u32), "n odd".to_string())
        } else {
            (n0b * q2m1, "n even".to_string())
        }
    } else {
        match q % 3 {
            1 => (n0b * q2m1, "q ≡ 1 mod 3".to_string()),
            r => {
                if r == 0 && !n0.is_multiple_of(3) {
                    return Err(Error::InvalidInput(format!(
                        "q = {q} is divisible by 3, so n0 must be a multiple of 3 (got {n0})"
                    )));
                }
                (n0b * q2m1 / 3u32, format!("q ≡ {r} mod 3"))
            }
        }
    };
    Ok(BoundResult { m, case })
}

/// `n0(q^{k(n+1-k)} - 1)` for `k = 1..=n`.
pub fn annihilator_family(n: u64, q: u64, n0: u64) -> Result<Vec<BigUint>> {
    check_bound_args(n, q, n0)?;
    let qb = BigUint::from(q);
    Ok((1..=n).map(|k| BigUint::from(n0) * (qb.pow((k * (n + 1 - k)) as u32) - 1u32)).collect())
}

/// gcd of the annihilator family, joined with `|χ|` when `n = 2`, and
/// whether `bound` divides it.
pub fn verify_bound(n: u64, q: u64, n0: u64) -> Result<(BigUint, bool)> {
    let b = bound(n, q, n0)?;
    let mut g = annihilator_family(n, q, n0)?.into_iter().fold(BigUint::zero(), |a, x| a.gcd(&x));
    if n == 2 {
        let c = chi(n, q, n0)?;
        if c.integral {
            g = g.gcd(c.value.numer().magnitude());
        }
    }
    let ok = g.is_multiple_of(&b.m);
    Ok((g, ok))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChiResult {
    pub value: BigRational,
    pub integral: bool,
}

/// Euler characteristic of a quotient with `n0` vertices: `n0(1-q)/2` for
/// trees, `(-1)^n n0 (q-1)(q²-1)...(q^n-1)/(n+1)` otherwise.
pub fn chi(n: u64, q: u64, n0: u64) -> Result<ChiResult> {
    check_bound_args(n, q, n0)?;
    let n0 = BigInt::from(n0);
    let value = if n == 1 {
        BigRational::new(n0 * (1 - BigInt::from(q)), BigInt::from(2))
    } else {
        let qb = BigInt::from(q);
        let prod: BigInt = (1..=n as u32).map(|i| qb.pow(i) - 1).product();
        let sign = if n.is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
        BigRational::new(sign * n0 * prod, BigInt::from(n + 1))
    };
    let integral = value.is_integer();
    Ok(ChiResult { value, integral })
}

/// `|χ|` as an integer when integral.
pub fn chi_magnitude(c: &ChiResult) -> Option<BigUint> {
    c.integral.then(|| c.value.numer().abs().magnitude().clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::{search_presentation, torus_complex};

    fn graph(text: &str) -> QuotientGraph {
        QuotientGraph::parse(text).unwrap()
    }

    fn fin(m: u32) -> ElementOrder {
        ElementOrder::Finite(BigUint::from(m))
    }

    #[test]
    fn tree_examples() {
        let bouquet = graph("vertex a\ngeom-edge x a a\ngeom-edge y a a\n");
        assert_eq!(tree_relations(&bouquet).unwrap().order_of_identity().unwrap(), fin(1));
        let theta = graph("vertex a\nvertex b\ngeom-edge x a b\ngeom-edge y a b\ngeom-edge z a b\n");
        assert_eq!(tree_relations(&theta).unwrap().order_of_identity().unwrap(), fin(1));
        let four = graph("vertex a\nvertex b\ngeom-edge w a b\ngeom-edge x a b\ngeom-edge y a b\ngeom-edge z a b\n");
        let p = tree_relations(&four).unwrap();
        assert_eq!(p.order_of_identity().unwrap(), fin(2));
        let s = p.decompose().unwrap();
        assert!(tree_identity_checks(&four, &p, &s).unwrap().iter().all(|c| c.holds));
    }

    #[test]
    fn disconnected_tree_rejected() {
        let g = graph("vertex a\nvertex b\ngeom-edge x a a\n");
        assert!(matches!(tree_relations(&g), Err(Error::Disconnected(_))));
    }

    #[test]
    fn torus_sizes() {
        let t = torus_complex(1).unwrap();
        let p = a2_relations(&t, false).unwrap();
        assert_eq!(p.generators.len(), 22);
        assert_eq!(p.relations.rows(), 11);
        let s = p.decompose().unwrap();
        assert!(a2_identity_checks(&t, &p, &s, None).unwrap().iter().all(|c| c.holds));
    }

    #[test]
    fn order_two_complex() {
        let x = search_presentation(2, false).unwrap().complex;
        let p = a2_relations(&x, true).unwrap();
        assert_eq!(p.order_of_identity().unwrap(), fin(1));
        let s = p.decompose().unwrap();
        assert!(a2_identity_checks(&x, &p, &s, Some(2)).unwrap().iter().all(|c| c.holds));
    }

    #[test]
    fn bound_values() {
        assert_eq!(bound(2, 5, 1).unwrap(), BoundResult { m: 8u32.into(), case: "q ≡ 2 mod 3".into() });
        assert_eq!(bound(3, 2, 1).unwrap().m, 1u32.into());
        assert_eq!(bound(4, 2, 1).unwrap().m, 3u32.into());
        assert_eq!(bound(2, 3, 3).unwrap().m, 8u32.into());
        assert!(matches!(bound(2, 3, 1), Err(Error::InvalidInput(_))));
        let table = [(2, 1), (4, 15), (5, 8), (7, 48), (8, 21), (11, 40)];
        for (q, m) in table {
            assert_eq!(bound(2, q, 1).unwrap().m, BigUint::from(m as u32));
        }
    }

    #[test]
    fn families() {
        let f = |n, q, n0| annihilator_family(n, q, n0).unwrap().into_iter().map(|x| x.try_into().unwrap()).collect::<Vec<u64>>();
        assert_eq!(f(2, 2, 1), vec![3, 3]);
        assert_eq!(f(3, 2, 1), vec![7, 15, 7]);
        assert_eq!(f(1, 5, 2), vec![8]);
        for n in 1..=4 {
            for q in [2, 4, 5, 7, 8, 9] {
                let n0 = if n == 2 && q % 3 == 0 { 3 } else { 1 };
                assert!(verify_bound(n, q, n0).unwrap().1);
            }
        }
    }

    #[test]
    fn chi_values() {
        let c = chi(2, 2, 1).unwrap();
        assert_eq!(c.value, BigRational::from_integer(1.into()));
        assert_eq!(chi(1, 3, 2).unwrap().value, BigRational::from_integer((-2).into()));
        let c = chi(4, 4, 1).unwrap();
        assert!(c.integral);
        assert_eq!(c.value, BigRational::from_integer(144585.into()));
        assert!(!chi(1, 2, 1).unwrap().integral);
    }
}
