//! The spherical building of type A_{m-1} over F_q, with chambers modelled
//! as full flags of F_q^m.
//!
//! The relative position of flags `F`, `G` is the permutation `w` with
//! `w(j) = i` exactly when the intersection-dimension table
//! `d(i, j) = dim(F_i ∩ G_j)` jumps at `(i, j)`:
//! `d(i,j) - d(i-1,j) - d(i,j-1) + d(i-1,j-1) = 1`.
//! Only lengths and counts are consumed downstream, so the choice of `w`
//! over `w^{-1}` is a fixed convention.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fqlinalg::{enumerate_full_flags, FieldSpec};
pub use crate::fqlinalg::Flag;
use crate::weyl::Permutation;

/// Weyl distance between two chambers of the spherical building.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RelativePosition {
    pub w: Permutation,
}

/// The table `d(i, j) = dim(F_i ∩ G_j)` for `0 <= i, j <= m`.
pub fn intersection_table(field: &FieldSpec, f: &Flag, g: &Flag) -> Result<Vec<Vec<usize>>> {
    if f.ambient_dim() != g.ambient_dim() {
        return Err(Error::Dimension(format!(
            "flags in dimensions {} and {}",
            f.ambient_dim(),
            g.ambient_dim()
        )));
    }
    let m = f.ambient_dim();
    let fs: Vec<_> = (0..=m).map(|i| f.member(field, i)).collect();
    let gs: Vec<_> = (0..=m).map(|j| g.member(field, j)).collect();
    if fs.iter().chain(&gs).any(|s| s.field() != field) {
        return Err(Error::Field("flag defined over a different field".into()));
    }
    let mut d = vec![vec![0; m + 1]; m + 1];
    for i in 1..=m {
        for j in 1..=m {
            d[i][j] = fs[i].intersection_dim(&gs[j])?;
        }
    }
    Ok(d)
}

pub fn relative_position(field: &FieldSpec, f: &Flag, g: &Flag) -> Result<RelativePosition> {
    let d = intersection_table(field, f, g)?;
    let m = f.ambient_dim();
    let mut images = vec![0; m];
    for i in 1..=m {
        for j in 1..=m {
            let jump = d[i][j] + d[i - 1][j - 1] - d[i - 1][j] - d[i][j - 1];
            if jump == 1 {
                if images[j - 1] != 0 {
                    return Err(Error::Structure(format!("two jumps in column {j}")));
                }
                images[j - 1] = i;
            }
        }
    }
    Ok(RelativePosition { w: Permutation::new(images)? })
}

/// Number of flags `G` with `relative_position(base, G) = w`.
pub fn count_at_distance(field: &FieldSpec, m: usize, base: &Flag, w: &Permutation) -> Result<usize> {
    if w.degree() != m || base.ambient_dim() != m {
        return Err(Error::Dimension(format!(
            "permutation of degree {} against flags in dimension {m}",
            w.degree()
        )));
    }
    let flags = enumerate_full_flags(field, m)?;
    let hits: Result<Vec<bool>> = flags
        .par_iter()
        .map(|g| Ok(relative_position(field, base, g)?.w == *w))
        .collect();
    Ok(hits?.into_iter().filter(|&h| h).count())
}

/// Counts for every relative position at once: pairs `(w, #G)` over all
/// flags `G`, sorted by `w`.
pub fn distance_histogram(field: &FieldSpec, m: usize, base: &Flag) -> Result<Vec<(Permutation, usize)>> {
    let flags = enumerate_full_flags(field, m)?;
    let positions: Result<Vec<Permutation>> =
        flags.par_iter().map(|g| Ok(relative_position(field, base, g)?.w)).collect();
    let mut hist = std::collections::BTreeMap::new();
    for w in positions? {
        *hist.entry(w).or_insert(0usize) += 1;
    }
    Ok(hist.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fqlinalg::{FqMatrix, Subspace};
    use crate::weyl::cycle_perm;

    fn reverse_flag(field: &FieldSpec, m: usize) -> Flag {
        let id = FqMatrix::identity(field, m);
        let subs = (1..m)
            .map(|k| {
                let rows: Vec<Vec<u32>> = (0..k).map(|i| id.row(m - 1 - i).to_vec()).collect();
                Subspace::span(&FqMatrix::from_rows(field, &rows).unwrap())
            })
            .collect();
        Flag::new(m, subs).unwrap()
    }

    #[test]
    fn identity_position() {
        let f = FieldSpec::prime(2).unwrap();
        let s = Flag::standard(&f, 3);
        assert_eq!(relative_position(&f, &s, &s).unwrap().w, Permutation::identity(3));
    }

    #[test]
    fn opposite_coordinate_flags() {
        let f = FieldSpec::prime(2).unwrap();
        let w = relative_position(&f, &Flag::standard(&f, 3), &reverse_flag(&f, 3)).unwrap().w;
        assert_eq!(w, Permutation::longest(3));
    }

    #[test]
    fn count_examples() {
        let f2 = FieldSpec::prime(2).unwrap();
        let base = Flag::standard(&f2, 3);
        assert_eq!(count_at_distance(&f2, 3, &base, &Permutation::identity(3)).unwrap(), 1);
        assert_eq!(count_at_distance(&f2, 3, &base, &cycle_perm(2, 1).unwrap()).unwrap(), 4);
        let f3 = FieldSpec::prime(3).unwrap();
        let base = Flag::standard(&f3, 3);
        assert_eq!(count_at_distance(&f3, 3, &base, &Permutation::longest(3)).unwrap(), 27);
    }

    #[test]
    fn degree_mismatch() {
        let f2 = FieldSpec::prime(2).unwrap();
        let base = Flag::standard(&f2, 3);
        assert!(count_at_distance(&f2, 3, &base, &Permutation::identity(4)).is_err());
        let other = Flag::standard(&f2, 4);
        assert!(relative_position(&f2, &base, &other).is_err());
    }

    #[test]
    fn swapping_arguments_inverts() {
        let f = FieldSpec::prime(3).unwrap();
        let flags = enumerate_full_flags(&f, 3).unwrap();
        for g in flags.iter().step_by(7) {
            for h in flags.iter().step_by(5) {
                let a = relative_position(&f, g, h).unwrap().w;
                let b = relative_position(&f, h, g).unwrap().w;
                assert_eq!(a.inverse(), b);
            }
        }
    }
}
