//! Point-line incidence structures and the projective-plane axioms.

use std::collections::BTreeSet;

/// A bipartite incidence structure with points `0..points`, lines `0..lines`
/// and flags `(point, line)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Incidence {
    pub points: usize,
    pub lines: usize,
    pub flags: Vec<(usize, usize)>,
}

impl Incidence {
    pub fn new(points: usize, lines: usize, flags: Vec<(usize, usize)>) -> Self {
        Incidence { points, lines, flags }
    }

    pub fn lines_through(&self) -> Vec<BTreeSet<usize>> {
        let mut out = vec![BTreeSet::new(); self.points];
        for &(p, l) in &self.flags {
            out[p].insert(l);
        }
        out
    }

    pub fn points_on(&self) -> Vec<BTreeSet<usize>> {
        let mut out = vec![BTreeSet::new(); self.lines];
        for &(p, l) in &self.flags {
            out[l].insert(p);
        }
        out
    }

    /// The order `q` when the structure is a projective plane (a triangle
    /// counts as the degenerate plane of order 1), otherwise every axiom
    /// violation found.
    pub fn projective_plane_order(&self) -> std::result::Result<u64, Vec<String>> {
        let mut failures = Vec::new();
        let mut seen = BTreeSet::new();
        for &(p, l) in &self.flags {
            if p >= self.points || l >= self.lines {
                failures.push(format!("flag ({p}, {l}) out of range"));
            } else if !seen.insert((p, l)) {
                failures.push(format!("repeated flag (point {p}, line {l})"));
            }
        }
        if !failures.is_empty() {
            return Err(failures);
        }
        if self.points == 0 {
            return Err(vec!["no points".into()]);
        }
        let through = self.lines_through();
        let on = self.points_on();
        let k = through[0].len();
        if k < 2 {
            failures.push(format!("point 0 lies on {k} lines"));
            return Err(failures);
        }
        let q = (k - 1) as u64;
        let expected = (q * q + q + 1) as usize;
        if self.points != expected {
            failures.push(format!("{} points, expected {expected} for order {q}", self.points));
        }
        if self.lines != expected {
            failures.push(format!("{} lines, expected {expected} for order {q}", self.lines));
        }
        for (p, ls) in through.iter().enumerate() {
            if ls.len() != k {
                failures.push(format!("point {p} lies on {} lines, expected {k}", ls.len()));
            }
        }
        for (l, ps) in on.iter().enumerate() {
            if ps.len() != k {
                failures.push(format!("line {l} carries {} points, expected {k}", ps.len()));
            }
        }
        for a in 0..self.points {
            for b in a + 1..self.points {
                let common = through[a].intersection(&through[b]).count();
                if common != 1 {
                    failures.push(format!("points {a} and {b} share {common} lines"));
                }
            }
        }
        for a in 0..self.lines {
            for b in a + 1..self.lines {
                let common = on[a].intersection(&on[b]).count();
                if common != 1 {
                    failures.push(format!("lines {a} and {b} meet in {common} points"));
                }
            }
        }
        if failures.is_empty() {
            Ok(q)
        } else {
            Err(failures)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn fano() -> Incidence {
        let lines = [[0, 1, 2], [0, 3, 4], [0, 5, 6], [1, 3, 5], [1, 4, 6], [2, 3, 6], [2, 4, 5]];
        let flags = lines.iter().enumerate().flat_map(|(l, ps)| ps.iter().map(move |&p| (p, l))).collect();
        Incidence::new(7, 7, flags)
    }

    #[test]
    fn fano_is_order_two() {
        assert_eq!(fano().projective_plane_order(), Ok(2));
    }

    #[test]
    fn triangle_is_order_one() {
        let t = Incidence::new(3, 3, vec![(0, 0), (1, 0), (1, 1), (2, 1), (2, 2), (0, 2)]);
        assert_eq!(t.projective_plane_order(), Ok(1));
    }

    #[test]
    fn duplicated_flag_fails() {
        let mut f = fano();
        f.flags.push(f.flags[0]);
        assert!(f.projective_plane_order().is_err());
    }

    #[test]
    fn broken_plane_reports() {
        let mut f = fano();
        // move point 0 from line 0 to line 3
        f.flags[0] = (0, 3);
        let errs = f.projective_plane_order().unwrap_err();
        assert!(!errs.is_empty());
    }

    #[test]
    fn biplane_like_structure_fails() {
        // K4 edges as lines: 4 points, 6 lines
        let lines = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]];
        let flags = lines.iter().enumerate().flat_map(|(l, ps)| ps.iter().map(move |&p| (p, l))).collect();
        assert!(Incidence::new(4, 6, flags).projective_plane_order().is_err());
    }
}
