//! Finite quotient data: graphs for the tree case and two-dimensional
//! complexes for the Ã₂ case.
//!
//! An [`A2Complex`] stores one directed edge per geometric edge and its
//! chambers as head-to-tail cyclic triples `(e0, e1, e2)`. The directed
//! cell `(chamber, j)` has vertices
//! `d(0) = tail(e_j)`, `d(1) = head(e_j)`, `d(2) = tail(e_{j+2})`
//! and its edge opposite `d(0)` is `e_{j+1}`.
//!
//! The link at a vertex `x` has the edges leaving `x` as points and the
//! edges entering `x` as lines; the corner of a chamber at `x` where
//! `e_j` leaves and `e_{j-1}` enters gives the flag `(e_j, e_{j-1})`.

use std::collections::{BTreeMap, HashMap, HashSet};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactint::IntMatrix;
use crate::incidence::Incidence;
use crate::padic::Ball;
use crate::weyl::{cycle_perm, Permutation};

fn tokens(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").split_whitespace().collect::<Vec<_>>()))
        .filter(|(_, t)| !t.is_empty())
}

fn lookup(map: &HashMap<String, usize>, key: &str, what: &str, line: usize) -> Result<usize> {
    map.get(key).copied().ok_or_else(|| Error::parse(line, format!("unknown {what} `{key}`")))
}

/// A finite connected graph with each geometric edge split into a directed
/// pair. Directed edge `2g` runs `u -> v` for the `g`-th geometric edge
/// `{u, v}` and `2g + 1` is its reverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientGraph {
    vertex_names: Vec<String>,
    edge_names: Vec<String>,
    origin: Vec<usize>,
}

impl QuotientGraph {
    pub fn new(vertex_names: Vec<String>, geom_edges: Vec<(String, usize, usize)>) -> Result<Self> {
        let n0 = vertex_names.len();
        let mut origin = Vec::with_capacity(2 * geom_edges.len());
        let mut edge_names = Vec::with_capacity(geom_edges.len());
        for (name, u, v) in geom_edges {
            for x in [u, v] {
                if x >= n0 {
                    return Err(Error::IndexOutOfRange { index: x, limit: n0 });
                }
            }
            origin.push(u);
            origin.push(v);
            edge_names.push(name);
        }
        Ok(QuotientGraph { vertex_names, edge_names, origin })
    }

    /// Parses `vertex <id>` and `geom-edge <id> <u> <v>` lines.
    pub fn parse(text: &str) -> Result<Self> {
        let mut vids = HashMap::new();
        let mut vnames = Vec::new();
        let mut eids = HashSet::new();
        let mut edges = Vec::new();
        for (line, t) in tokens(text) {
            match (t[0], t.len()) {
                ("vertex", 2) => {
                    if vids.insert(t[1].to_string(), vnames.len()).is_some() {
                        return Err(Error::parse(line, format!("duplicate vertex `{}`", t[1])));
                    }
                    vnames.push(t[1].to_string());
                }
                ("geom-edge", 4) => {
                    if !eids.insert(t[1].to_string()) {
                        return Err(Error::parse(line, format!("duplicate edge `{}`", t[1])));
                    }
                    let u = lookup(&vids, t[2], "vertex", line)?;
                    let v = lookup(&vids, t[3], "vertex", line)?;
                    edges.push((t[1].to_string(), u, v));
                }
                _ => return Err(Error::parse(line, format!("unrecognised line `{}`", t.join(" ")))),
            }
        }
        Self::new(vnames, edges)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for v in &self.vertex_names {
            s.push_str(&format!("vertex {v}\n"));
        }
        for (g, name) in self.edge_names.iter().enumerate() {
            let (u, v) = (self.origin[2 * g], self.origin[2 * g + 1]);
            s.push_str(&format!("geom-edge {name} {} {}\n", self.vertex_names[u], self.vertex_names[v]));
        }
        s
    }

    pub fn n0(&self) -> usize {
        self.vertex_names.len()
    }

    /// Number of geometric edges.
    pub fn n1(&self) -> usize {
        self.edge_names.len()
    }

    pub fn directed_count(&self) -> usize {
        self.origin.len()
    }

    pub fn origin(&self, e: usize) -> usize {
        self.origin[e]
    }

    pub fn terminus(&self, e: usize) -> usize {
        self.origin[e ^ 1]
    }

    pub fn reverse(&self, e: usize) -> usize {
        e ^ 1
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }

    pub fn directed_name(&self, e: usize) -> String {
        let base = &self.edge_names[e / 2];
        if e.is_multiple_of(2) {
            base.clone()
        } else {
            format!("{base}~")
        }
    }

    /// Number of directed edges leaving `v` (a loop counts twice).
    pub fn degree(&self, v: usize) -> usize {
        self.origin.iter().filter(|&&o| o == v).count()
    }

    /// Vertices of degree below three, which cannot come from a quotient of
    /// a thick tree.
    pub fn warnings(&self) -> Vec<String> {
        (0..self.n0())
            .filter(|&v| self.degree(v) < 3)
            .map(|v| format!("vertex {} has degree {}", self.vertex_names[v], self.degree(v)))
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        if self.n0() == 0 {
            return false;
        }
        let mut seen = vec![false; self.n0()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for e in 0..self.directed_count() {
                let w = self.terminus(e);
                if self.origin(e) == v && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// A chamber together with a choice of initial corner.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DirectedCell {
    pub chamber: usize,
    pub corner: usize,
}

impl DirectedCell {
    pub fn index(&self) -> usize {
        3 * self.chamber + self.corner
    }

    pub fn from_index(i: usize) -> Self {
        DirectedCell { chamber: i / 3, corner: i % 3 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct A2Complex {
    vertex_names: Vec<String>,
    vertex_types: Vec<Option<u8>>,
    edge_names: Vec<String>,
    tails: Vec<usize>,
    heads: Vec<usize>,
    chambers: Vec<[usize; 3]>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CellCounts {
    pub n0: usize,
    pub n1: usize,
    pub n2: usize,
    pub chi: i64,
}

/// The incidence structure at one vertex with the edges behind each point
/// and line.
#[derive(Clone, Debug)]
pub struct LinkAt {
    pub vertex: usize,
    pub out_edges: Vec<usize>,
    pub in_edges: Vec<usize>,
    pub incidence: Incidence,
}

impl A2Complex {
    /// `vertices` carry optional types mod 3 (all or none), `edges` are
    /// `(name, tail, head)` and chambers index into `edges`.
    pub fn new(
        vertices: Vec<(String, Option<u8>)>,
        edges: Vec<(String, usize, usize)>,
        chambers: Vec<[usize; 3]>,
    ) -> Result<Self> {
        let n0 = vertices.len();
        let n1 = edges.len();
        let typed = vertices.iter().filter(|v| v.1.is_some()).count();
        if typed != 0 && typed != n0 {
            return Err(Error::Structure("vertex types must be given for all vertices or none".into()));
        }
        for (name, t, h) in &edges {
            for &x in [t, h] {
                if x >= n0 {
                    return Err(Error::IndexOutOfRange { index: x, limit: n0 });
                }
            }
            if typed == n0 {
                let (a, b) = (vertices[*t].1.unwrap(), vertices[*h].1.unwrap());
                if (a + 1) % 3 != b % 3 {
                    return Err(Error::Structure(format!("edge {name} runs from type {a} to type {b}")));
                }
            }
        }
        for (c, ch) in chambers.iter().enumerate() {
            for &e in ch {
                if e >= n1 {
                    return Err(Error::IndexOutOfRange { index: e, limit: n1 });
                }
            }
            for j in 0..3 {
                let (a, b) = (ch[j], ch[(j + 1) % 3]);
                if edges[a].2 != edges[b].1 {
                    return Err(Error::Structure(format!(
                        "chamber {c}: edge {} does not end where {} starts",
                        edges[a].0, edges[b].0
                    )));
                }
            }
        }
        let (vertex_names, vertex_types) = vertices.into_iter().unzip();
        let mut edge_names = Vec::with_capacity(n1);
        let mut tails = Vec::with_capacity(n1);
        let mut heads = Vec::with_capacity(n1);
        for (name, t, h) in edges {
            edge_names.push(name);
            tails.push(t);
            heads.push(h);
        }
        Ok(A2Complex { vertex_names, vertex_types, edge_names, tails, heads, chambers })
    }

    /// Parses `vertex <id> [type]`, `edge <id> <tail> <head>` and
    /// `chamber <e1> <e2> <e3>` lines.
    pub fn parse(text: &str) -> Result<Self> {
        let mut vids = HashMap::new();
        let mut vertices = Vec::new();
        let mut eids = HashMap::new();
        let mut edges: Vec<(String, usize, usize)> = Vec::new();
        let mut chambers = Vec::new();
        for (line, t) in tokens(text) {
            match (t[0], t.len()) {
                ("vertex", 2 | 3) => {
                    let ty = match t.get(2) {
                        Some(s) => Some(
                            s.parse::<u8>()
                                .ok()
                                .filter(|&x| x < 3)
                                .ok_or_else(|| Error::parse(line, format!("bad vertex type `{s}`")))?,
                        ),
                        None => None,
                    };
                    if vids.insert(t[1].to_string(), vertices.len()).is_some() {
                        return Err(Error::parse(line, format!("duplicate vertex `{}`", t[1])));
                    }
                    if vertices.first().is_some_and(|f: &(String, Option<u8>)| f.1.is_some() != ty.is_some()) {
                        return Err(Error::parse(line, "vertex types must be given for all vertices or none"));
                    }
                    vertices.push((t[1].to_string(), ty));
                }
                ("edge", 4) => {
                    let tail = lookup(&vids, t[2], "vertex", line)?;
                    let head = lookup(&vids, t[3], "vertex", line)?;
                    if let (Some(a), Some(b)) = (vertices[tail].1, vertices[head].1) {
                        if (a + 1) % 3 != b {
                            return Err(Error::parse(line, format!("edge `{}` runs from type {a} to type {b}", t[1])));
                        }
                    }
                    if eids.insert(t[1].to_string(), edges.len()).is_some() {
                        return Err(Error::parse(line, format!("duplicate edge `{}`", t[1])));
                    }
                    edges.push((t[1].to_string(), tail, head));
                }
                ("chamber", 4) => {
                    let mut ch = [0; 3];
                    for j in 0..3 {
                        ch[j] = lookup(&eids, t[j + 1], "edge", line)?;
                    }
                    for j in 0..3 {
                        let (a, b) = (&edges[ch[j]], &edges[ch[(j + 1) % 3]]);
                        if a.2 != b.1 {
                            return Err(Error::parse(
                                line,
                                format!("edge `{}` does not end where `{}` starts", a.0, b.0),
                            ));
                        }
                    }
                    chambers.push(ch);
                }
                _ => return Err(Error::parse(line, format!("unrecognised line `{}`", t.join(" ")))),
            }
        }
        Self::new(vertices, edges, chambers)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (v, t) in self.vertex_names.iter().zip(&self.vertex_types) {
            match t {
                Some(t) => s.push_str(&format!("vertex {v} {t}\n")),
                None => s.push_str(&format!("vertex {v}\n")),
            }
        }
        for e in 0..self.n1() {
            s.push_str(&format!(
                "edge {} {} {}\n",
                self.edge_names[e], self.vertex_names[self.tails[e]], self.vertex_names[self.heads[e]]
            ));
        }
        for ch in &self.chambers {
            let names: Vec<&str> = ch.iter().map(|&e| self.edge_names[e].as_str()).collect();
            s.push_str(&format!("chamber {}\n", names.join(" ")));
        }
        s
    }

    pub fn n0(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn n1(&self) -> usize {
        self.edge_names.len()
    }

    pub fn n2(&self) -> usize {
        self.chambers.len()
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }

    pub fn edge_names(&self) -> &[String] {
        &self.edge_names
    }

    pub fn vertex_type(&self, v: usize) -> Option<u8> {
        self.vertex_types[v]
    }

    pub fn tail(&self, e: usize) -> usize {
        self.tails[e]
    }

    pub fn head(&self, e: usize) -> usize {
        self.heads[e]
    }

    pub fn chambers(&self) -> &[[usize; 3]] {
        &self.chambers
    }

    pub fn cell_count(&self) -> usize {
        3 * self.n2()
    }

    /// `d(i)` for `i` in 0..3.
    pub fn cell_vertex(&self, d: DirectedCell, i: usize) -> usize {
        let ch = &self.chambers[d.chamber];
        self.tails[ch[(d.corner + i) % 3]]
    }

    /// The edge of `d`'s chamber not containing `d(0)`.
    pub fn opposite_edge(&self, d: DirectedCell) -> usize {
        self.chambers[d.chamber][(d.corner + 1) % 3]
    }

    /// The link flag (out-edge, in-edge) of the chamber at `d(i)`.
    pub fn corner_flag(&self, d: DirectedCell, i: usize) -> (usize, usize) {
        let ch = &self.chambers[d.chamber];
        (ch[(d.corner + i) % 3], ch[(d.corner + i + 2) % 3])
    }

    pub fn link(&self, x: usize) -> LinkAt {
        let out_edges: Vec<usize> = (0..self.n1()).filter(|&e| self.tails[e] == x).collect();
        let in_edges: Vec<usize> = (0..self.n1()).filter(|&e| self.heads[e] == x).collect();
        let mut flags = Vec::new();
        for c in 0..self.cell_count() {
            let d = DirectedCell::from_index(c);
            if self.cell_vertex(d, 0) == x {
                let (o, i) = self.corner_flag(d, 0);
                let p = out_edges.binary_search(&o).unwrap();
                let l = in_edges.binary_search(&i).unwrap();
                flags.push((p, l));
            }
        }
        let incidence = Incidence::new(out_edges.len(), in_edges.len(), flags);
        LinkAt { vertex: x, out_edges, in_edges, incidence }
    }

    /// Per-vertex plane check: the order or the list of axiom violations.
    pub fn link_report(&self) -> Vec<std::result::Result<u64, Vec<String>>> {
        (0..self.n0()).into_par_iter().map(|x| self.link(x).incidence.projective_plane_order()).collect()
    }

    /// The common order `q` of every vertex link.
    pub fn validate_links(&self) -> Result<u64> {
        if self.n0() == 0 {
            return Err(Error::Structure("complex has no vertices".into()));
        }
        let report = self.link_report();
        let mut failures = Vec::new();
        for (x, r) in report.iter().enumerate() {
            if let Err(errs) = r {
                failures.push(format!("vertex {}: {}", self.vertex_names[x], errs.join("; ")));
            }
        }
        if !failures.is_empty() {
            return Err(Error::LinkAxiom(failures.join(" | ")));
        }
        let orders: Vec<u64> = report.into_iter().map(|r| r.unwrap()).collect();
        if let Some(x) = orders.iter().position(|&q| q != orders[0]) {
            return Err(Error::InconsistentOrder(format!(
                "vertex {} has order {}, vertex {} has order {}",
                self.vertex_names[0], orders[0], self.vertex_names[x], orders[x]
            )));
        }
        Ok(orders[0])
    }

    /// Cell counts and `χ = n0 - n1 + n2`, cross-checked against the order
    /// `q` when given.
    pub fn cell_counts(&self, q: Option<u64>) -> Result<CellCounts> {
        let (n0, n1, n2) = (self.n0(), self.n1(), self.n2());
        if let Some(q) = q {
            let q = q as usize;
            if n1 != n0 * (q * q + q + 1) {
                return Err(Error::Structure(format!("n1 = {n1} but n0(q²+q+1) = {}", n0 * (q * q + q + 1))));
            }
            if 3 * n2 != n0 * (q + 1) * (q * q + q + 1) {
                return Err(Error::Structure(format!(
                    "3 n2 = {} but n0(q+1)(q²+q+1) = {}",
                    3 * n2,
                    n0 * (q + 1) * (q * q + q + 1)
                )));
            }
        }
        Ok(CellCounts { n0, n1, n2, chi: n0 as i64 - n1 as i64 + n2 as i64 })
    }

    pub fn disjoint_union(&self, other: &A2Complex) -> Result<A2Complex> {
        let tag = |k: usize, s: &str| format!("{k}.{s}");
        let mut vertices = Vec::new();
        let mut edges = Vec::new();
        let mut chambers = Vec::new();
        for (k, x) in [self, other].into_iter().enumerate() {
            let (voff, eoff) = (vertices.len(), edges.len());
            for (n, t) in x.vertex_names.iter().zip(&x.vertex_types) {
                vertices.push((tag(k, n), *t));
            }
            for e in 0..x.n1() {
                edges.push((tag(k, &x.edge_names[e]), x.tails[e] + voff, x.heads[e] + voff));
            }
            for ch in &x.chambers {
                chambers.push([ch[0] + eoff, ch[1] + eoff, ch[2] + eoff]);
            }
        }
        A2Complex::new(vertices, edges, chambers)
    }
}

/// The rank-2 ball as a complex: edges point from type `t` to type `t+1`,
/// so the link of an interior vertex has the neighbors of relative type 1
/// as points.
pub fn from_ball(ball: &Ball) -> Result<A2Complex> {
    if ball.n != 2 {
        return Err(Error::InvalidInput(format!("ball of rank {} is not two-dimensional", ball.n)));
    }
    let types: Vec<u8> = ball.vertices.iter().map(|v| v.vertex_type() as u8).collect();
    let vertices = types.iter().enumerate().map(|(i, &t)| (format!("v{i}"), Some(t))).collect();
    let mut edge_id = HashMap::new();
    let mut edges = Vec::with_capacity(ball.edges.len());
    for &(u, w) in &ball.edges {
        let (t, h) = if (types[u] + 1) % 3 == types[w] { (u, w) } else { (w, u) };
        edge_id.insert((t, h), edges.len());
        edges.push((format!("v{t}-v{h}"), t, h));
    }
    let mut chambers = Vec::with_capacity(ball.chambers.len());
    for ch in &ball.chambers {
        let mut c = ch.clone();
        c.sort_by_key(|&v| types[v]);
        let e = |a: usize, b: usize| edge_id.get(&(a, b)).copied();
        match (e(c[0], c[1]), e(c[1], c[2]), e(c[2], c[0])) {
            (Some(x), Some(y), Some(z)) => chambers.push([x, y, z]),
            _ => return Err(Error::Structure(format!("chamber {ch:?} is not typed 0, 1, 2"))),
        }
    }
    A2Complex::new(vertices, edges, chambers)
}

/// Quotient of the Ã₂ Coxeter plane by translations, with vertices `Z/s`.
/// Edges `a_i: i -> i+1`, `b_i: i -> i`, `c_i: i -> i-1`; chambers
/// `(a_i, b_{i+1}, c_{i+1})` and `(a_i, c_{i+1}, b_i)`. Every link is a
/// hexagon, the plane of order 1.
pub fn torus_complex(scale: usize) -> Result<A2Complex> {
    if scale == 0 {
        return Err(Error::InvalidInput("torus scale must be at least 1".into()));
    }
    let s = scale;
    let vertices = (0..s).map(|i| (format!("v{i}"), None)).collect();
    let mut edges = Vec::with_capacity(3 * s);
    for i in 0..s {
        edges.push((format!("a{i}"), i, (i + 1) % s));
    }
    for i in 0..s {
        edges.push((format!("b{i}"), i, i));
    }
    for i in 0..s {
        edges.push((format!("c{i}"), i, (i + s - 1) % s));
    }
    let (a, b, c) = (|i: usize| i % s, |i: usize| s + i % s, |i: usize| 2 * s + i % s);
    let mut chambers = Vec::with_capacity(2 * s);
    for i in 0..s {
        chambers.push([a(i), b(i + 1), c(i + 1)]);
        chambers.push([a(i), c(i + 1), b(i)]);
    }
    A2Complex::new(vertices, edges, chambers)
}

// Relative position of link flags `g` from `f` as a permutation of S_3.
// Flags are (point, line) = (out-edge, in-edge); the line plays the role of
// the one-dimensional member of the flag.
fn link_position(incident: &HashSet<(usize, usize)>, f: (usize, usize), g: (usize, usize)) -> Permutation {
    let (p, l) = f;
    let (p2, l2) = g;
    let w = if f == g {
        [1, 2, 3]
    } else if p == p2 {
        [2, 1, 3]
    } else if l == l2 {
        [1, 3, 2]
    } else if incident.contains(&(p, l2)) {
        [2, 3, 1]
    } else if incident.contains(&(p2, l)) {
        [3, 1, 2]
    } else {
        [3, 2, 1]
    };
    Permutation::new(w.to_vec()).unwrap()
}

/// Sparse `{0,1}` matrix indexed by directed cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MkMatrix {
    pub k: usize,
    pub size: usize,
    /// Nonzero positions `(d, c)`, sorted.
    pub entries: Vec<(usize, usize)>,
}

impl MkMatrix {
    pub fn row_sums(&self) -> Vec<usize> {
        let mut s = vec![0; self.size];
        for &(d, _) in &self.entries {
            s[d] += 1;
        }
        s
    }

    pub fn col_sums(&self) -> Vec<usize> {
        let mut s = vec![0; self.size];
        for &(_, c) in &self.entries {
            s[c] += 1;
        }
        s
    }

    pub fn to_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.size, self.size);
        for &(d, c) in &self.entries {
            m.set(d, c, 1.into());
        }
        m
    }
}

/// `M_k(d, c) = 1` when `d(0) = c(k)` and the chamber corner of `d` at that
/// vertex lies at relative position `cycle_perm(2, k)` from the corner of
/// `c` there. Links must validate; row and column sums are checked to be
/// `q^{k(3-k)}`.
pub fn build_mk(x: &A2Complex, k: usize) -> Result<MkMatrix> {
    if !(1..=2).contains(&k) {
        return Err(Error::InvalidInput(format!("k = {k} must be 1 or 2")));
    }
    let q = x.validate_links()?;
    let target = cycle_perm(2, k)?;
    let size = x.cell_count();
    let mut by_vertex: Vec<Vec<usize>> = vec![Vec::new(); x.n0()];
    let mut incident: Vec<HashSet<(usize, usize)>> = vec![HashSet::new(); x.n0()];
    for d in 0..size {
        let cell = DirectedCell::from_index(d);
        let v = x.cell_vertex(cell, 0);
        by_vertex[v].push(d);
        incident[v].insert(x.corner_flag(cell, 0));
    }
    let columns: Vec<BTreeMap<usize, usize>> = (0..size)
        .into_par_iter()
        .map(|c| {
            let cell = DirectedCell::from_index(c);
            let v = x.cell_vertex(cell, k);
            let base = x.corner_flag(cell, k);
            let mut hits = BTreeMap::new();
            for &d in &by_vertex[v] {
                let flag = x.corner_flag(DirectedCell::from_index(d), 0);
                if link_position(&incident[v], base, flag) == target {
                    *hits.entry(d).or_insert(0) += 1;
                }
            }
            hits
        })
        .collect();
    let mut entries = Vec::new();
    for (c, hits) in columns.iter().enumerate() {
        for (&d, &m) in hits {
            if m > 1 {
                return Err(Error::Multiplicity(format!("M_{k}({d}, {c}) = {m}")));
            }
            entries.push((d, c));
        }
    }
    entries.sort_unstable();
    let m = MkMatrix { k, size, entries };
    let expected = (q as usize).pow((k * (3 - k)) as u32);
    for (what, sums) in [("row", m.row_sums()), ("column", m.col_sums())] {
        if let Some(i) = sums.iter().position(|&s| s != expected) {
            return Err(Error::Structure(format!("M_{k} {what} {i} sums to {}, expected {expected}", sums[i])));
        }
    }
    Ok(m)
}

/// Result of the one-vertex search at order 2.
#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub complex: A2Complex,
    /// Total number of chamber systems, when the exhaustive search was run.
    pub solutions: Option<usize>,
}

/// Backtracking search for a one-vertex complex of order `q` with `q²+q+1`
/// loop edges: chamber triples `(a, b, c)`, normalized by rotation and
/// chosen in increasing order, such that every edge occurs `q+1` times,
/// the corner flags `(a, c), (b, a), (c, b)` are distinct and two lines
/// never share two points. Only `q = 2` is accepted.
pub fn search_presentation(q: u64, exhaustive: bool) -> Result<SearchOutcome> {
    if q != 2 {
        return Err(Error::SizeGuard(format!("presentation search is limited to q = 2, not {q}")));
    }
    let n = 7;
    let mut candidates = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let rots = [[a, b, c], [b, c, a], [c, a, b]];
                if rots.iter().min() == Some(&[a, b, c]) {
                    candidates.push([a, b, c]);
                }
            }
        }
    }
    candidates.sort();
    let mut state = SearchState {
        n,
        per_edge: q as usize + 1,
        candidates,
        uses: vec![0; n],
        flags: HashSet::new(),
        line_points: vec![Vec::new(); n],
        chosen: Vec::new(),
        first: None,
        count: 0,
        exhaustive,
    };
    state.dfs(0);
    let chambers = state.first.ok_or_else(|| Error::Exhausted("no one-vertex complex of order 2 found".into()))?;
    let vertices = vec![("v".to_string(), None)];
    let edges = (0..n).map(|i| (format!("e{i}"), 0, 0)).collect();
    let complex = A2Complex::new(vertices, edges, chambers)?;
    let order = complex.validate_links()?;
    if order != q {
        return Err(Error::Structure(format!("search produced order {order}")));
    }
    Ok(SearchOutcome { complex, solutions: exhaustive.then_some(state.count) })
}

struct SearchState {
    n: usize,
    per_edge: usize,
    candidates: Vec<[usize; 3]>,
    uses: Vec<usize>,
    flags: HashSet<(usize, usize)>,
    line_points: Vec<Vec<usize>>,
    chosen: Vec<[usize; 3]>,
    first: Option<Vec<[usize; 3]>>,
    count: usize,
    exhaustive: bool,
}

impl SearchState {
    fn fits(&self, t: &[usize; 3]) -> bool {
        let mut uses = self.uses.clone();
        for &e in t {
            uses[e] += 1;
            if uses[e] > self.per_edge {
                return false;
            }
        }
        let new = [(t[0], t[2]), (t[1], t[0]), (t[2], t[1])];
        let mut lines = self.line_points.clone();
        for (k, f) in new.iter().enumerate() {
            if self.flags.contains(f) || new[..k].contains(f) {
                return false;
            }
            lines[f.1].push(f.0);
        }
        for &(_, l) in &new {
            for m in 0..self.n {
                if m != l && lines[l].iter().filter(|p| lines[m].contains(p)).count() > 1 {
                    return false;
                }
            }
        }
        true
    }

    fn apply(&mut self, t: &[usize; 3], add: bool) {
        let new = [(t[0], t[2]), (t[1], t[0]), (t[2], t[1])];
        for &e in t {
            if add {
                self.uses[e] += 1;
            } else {
                self.uses[e] -= 1;
            }
        }
        for f in new {
            if add {
                self.flags.insert(f);
                self.line_points[f.1].push(f.0);
            } else {
                self.flags.remove(&f);
                let pos = self.line_points[f.1].iter().rposition(|&p| p == f.0).unwrap();
                self.line_points[f.1].remove(pos);
            }
        }
        if add {
            self.chosen.push(*t);
        } else {
            self.chosen.pop();
        }
    }

    // returns true to stop
    fn dfs(&mut self, start: usize) -> bool {
        if self.uses.iter().all(|&u| u == self.per_edge) {
            self.count += 1;
            if self.first.is_none() {
                self.first = Some(self.chosen.clone());
            }
            return !self.exhaustive;
        }
        for i in start..self.candidates.len() {
            let t = self.candidates[i];
            if (0..t[0]).any(|e| self.uses[e] < self.per_edge) {
                break;
            }
            if self.fits(&t) {
                self.apply(&t, true);
                let stop = self.dfs(i + 1);
                self.apply(&t, false);
                if stop {
                    return true;
                }
            }
        }
        false
    }
}
