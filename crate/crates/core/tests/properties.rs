mod common;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use torsion_core::complexes::{from_ball, torus_complex};
use torsion_core::exactint::{element_order, snf, IntMatrix};
use torsion_core::fqlinalg::{enumerate_subspaces, flag_count, gaussian_binomial, FieldSpec, Flag, FqMatrix, Subspace};
use torsion_core::ktheory::{a2_identity_checks, a2_relations, tree_relations};
use torsion_core::padic::{ball, LatticeVertex};
use torsion_core::spherical::{count_at_distance, relative_position};
use torsion_core::weyl::{all_permutations, poincare_polynomial, Permutation};

fn matrix(max_rows: usize, max_cols: usize, bound: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_rows, 1..=max_cols)
        .prop_flat_map(move |(r, c)| prop::collection::vec(prop::collection::vec(-bound..=bound, c), r))
}

fn permutation(max: usize) -> impl Strategy<Value = Permutation> {
    (1..=max)
        .prop_flat_map(|m| Just((1..=m).collect::<Vec<_>>()).prop_shuffle())
        .prop_map(|v| Permutation::new(v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn snf_is_a_valid_decomposition(rows in matrix(7, 7, 40)) {
        let a = IntMatrix::from_rows(&rows).unwrap();
        let s = snf(&a).unwrap();
        prop_assert_eq!(s.u.mul(&a).unwrap().mul(&s.v).unwrap(), s.d.clone());
        prop_assert!(s.d.is_diagonal());
        prop_assert!(s.u.determinant().unwrap().magnitude().is_one());
        prop_assert!(s.v.determinant().unwrap().magnitude().is_one());
        let r = s.rank();
        for w in s.invariant_factors[..r].windows(2) {
            prop_assert!(w[1].is_multiple_of(&w[0]));
        }
        prop_assert!(s.invariant_factors[r..].iter().all(|d| d.is_zero()));
        for (i, f) in s.invariant_factors.iter().enumerate() {
            prop_assert_eq!(s.d.get(i, i), f);
        }
    }

    #[test]
    fn snf_matches_determinantal_divisors(rows in matrix(4, 4, 12)) {
        let a = IntMatrix::from_rows(&rows).unwrap();
        let f = snf(&a).unwrap().invariant_factors;
        prop_assert_eq!(f, common::determinantal_invariant_factors(&common::big(&rows)));
    }

    #[test]
    fn element_order_survives_row_operations(
        rows in matrix(6, 5, 9),
        seed in any::<u64>(),
        gen in 0usize..5,
    ) {
        use rand::seq::SliceRandom;
        use rand::Rng;
        let cols = rows[0].len();
        let gen = gen % cols;
        let before = element_order(&IntMatrix::from_rows(&rows).unwrap(), gen).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut moved = rows.clone();
        moved.shuffle(&mut rng);
        let i = rng.gen_range(0..moved.len());
        moved[i].iter_mut().for_each(|x| *x = -*x);
        if moved.len() > 1 {
            let j = (i + 1) % moved.len();
            let k: i64 = rng.gen_range(-3..=3);
            let src = moved[j].clone();
            moved[i].iter_mut().zip(src).for_each(|(x, y)| *x += k * y);
        }
        let after = element_order(&IntMatrix::from_rows(&moved).unwrap(), gen).unwrap();
        prop_assert_eq!(&before, &after);
        let oracle = common::naive_order(&common::big(&rows), gen);
        prop_assert_eq!(before.finite().map(|m| BigInt::from(m.clone())), oracle);
    }

    #[test]
    fn row_span_membership(rows in matrix(5, 5, 9), coeffs in prop::collection::vec(-4i64..=4, 5)) {
        let a = IntMatrix::from_rows(&rows).unwrap();
        let s = snf(&a).unwrap();
        let cols = rows[0].len();
        let mut x = vec![BigInt::zero(); cols];
        for (row, &k) in rows.iter().zip(&coeffs) {
            for (xi, &r) in x.iter_mut().zip(row) {
                *xi += k * r;
            }
        }
        prop_assert!(s.row_span_contains(&x).unwrap());
    }

    #[test]
    fn length_of_inverse_and_longest(w in permutation(7)) {
        let m = w.degree();
        prop_assert_eq!(w.length(), w.inverse().length());
        let w0 = Permutation::longest(m);
        prop_assert_eq!(w0.compose(&w).unwrap().length(), w0.length() - w.length());
    }
}

fn field(q: u32) -> FieldSpec {
    FieldSpec::of_order(q).unwrap()
}

#[test]
fn subspace_counts_match_gaussian_binomials() {
    for (q, m) in [(2u32, 4usize), (3, 3), (4, 3), (5, 2)] {
        let f = field(q);
        for d in 0..=m {
            let subs = enumerate_subspaces(&f, m, d).unwrap();
            let expected = gaussian_binomial(q as u64, m as u32, d as u32);
            assert_eq!(BigUint::from(subs.len()), expected, "q={q} m={m} d={d}");
            assert_eq!(expected, gaussian_binomial(q as u64, m as u32, (m - d) as u32));
        }
    }
}

fn random_invertible(f: &FieldSpec, m: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<u32>> {
    use rand::Rng;
    loop {
        let rows: Vec<Vec<u32>> = (0..m).map(|_| (0..m).map(|_| rng.gen_range(0..f.order())).collect()).collect();
        if FqMatrix::from_rows(f, &rows).unwrap().rank() == m {
            return rows;
        }
    }
}

fn flag_from_rows(f: &FieldSpec, rows: &[Vec<u32>]) -> Flag {
    let m = rows.len();
    let subs = (1..m).map(|k| Subspace::span(&FqMatrix::from_rows(f, &rows[..k]).unwrap())).collect();
    Flag::new(m, subs).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rref_is_canonical(seed in any::<u64>(), q in prop::sample::select(vec![2u32, 3, 4, 5, 8, 9])) {
        use rand::Rng;
        let f = field(q);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (r, c) = (rng.gen_range(1..=4), rng.gen_range(1..=5));
        let rows: Vec<Vec<u32>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(0..q)).collect()).collect();
        let a = FqMatrix::from_rows(&f, &rows).unwrap();
        let (e, rank) = a.rref();
        prop_assert_eq!(rank, a.rank());
        prop_assert_eq!(e.rref().0, e.clone());
        let mixer = random_invertible(&f, r, &mut rng);
        let mixed: Vec<Vec<u32>> = mixer
            .iter()
            .map(|coef| (0..c).map(|j| coef.iter().zip(&rows).fold(0, |acc, (&k, row)| f.add(acc, f.mul(k, row[j])))).collect())
            .collect();
        prop_assert_eq!(FqMatrix::from_rows(&f, &mixed).unwrap().rref().0, e);
    }

    #[test]
    fn distance_counts_do_not_depend_on_the_base(seed in any::<u64>(), q in prop::sample::select(vec![2u32, 3, 4])) {
        let f = field(q);
        let m = 3;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let base = flag_from_rows(&f, &random_invertible(&f, m, &mut rng));
        for w in all_permutations(m).unwrap() {
            let c = count_at_distance(&f, m, &base, &w).unwrap();
            prop_assert_eq!(BigUint::from(c), BigUint::from(q).pow(w.length() as u32));
        }
        prop_assert!(relative_position(&f, &base, &base).unwrap().w == Permutation::identity(m));
    }
}

#[test]
fn distance_counts_for_three_bases_in_dimension_four() {
    let f = field(2);
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    for _ in 0..3 {
        let base = flag_from_rows(&f, &random_invertible(&f, 4, &mut rng));
        for w in all_permutations(4).unwrap() {
            assert_eq!(count_at_distance(&f, 4, &base, &w).unwrap(), 1usize << w.length());
        }
    }
}

#[test]
fn poincare_polynomial_counts_flags() {
    for m in 1..=5usize {
        for q in [2u64, 3, 4, 5, 7] {
            assert_eq!(poincare_polynomial(m, q).unwrap(), flag_count(q, m as u32), "m={m} q={q}");
        }
    }
}

#[test]
fn lattice_neighbors_are_symmetric() {
    for (n, p) in [(1usize, 2u64), (1, 3), (2, 2), (2, 3), (3, 2)] {
        let o = LatticeVertex::standard(n, p).unwrap();
        let nbrs = o.neighbors().unwrap();
        for v in &nbrs {
            let back = LatticeVertex::from_basis(p, &v.basis_rows()).unwrap();
            assert_eq!(&back, v);
            let rows = v.basis_rows();
            let scaled: Vec<Vec<i64>> =
                (0..=n).map(|j| rows.iter().map(|r| r[j] * p as i64).collect()).collect();
            assert_eq!(&LatticeVertex::from_generators(p, &scaled).unwrap(), v);
            assert!(v.neighbors().unwrap().contains(&o), "n={n} p={p}: {v:?} does not see the origin");
        }
    }
}

#[test]
fn interior_edges_lie_in_p_plus_one_chambers() {
    for p in [2u64, 3] {
        let b = ball(2, p, 2, false).unwrap();
        for &(u, w) in &b.edges {
            if b.distance[u] < 2 && b.distance[w] < 2 {
                let c = b.chambers.iter().filter(|ch| ch.contains(&u) && ch.contains(&w)).count() as u64;
                assert_eq!(c, p + 1, "p={p} edge ({u}, {w})");
            }
        }
    }
}

#[test]
fn ball_links_are_planes_of_order_p() {
    for p in [2u64, 3] {
        let b = ball(2, p, 2, false).unwrap();
        let x = from_ball(&b).unwrap();
        for v in b.interior() {
            let order = x.link(v).incidence.projective_plane_order();
            assert_eq!(order, Ok(p), "p={p} vertex {v}");
        }
    }
}

#[test]
fn tree_order_divides_euler_characteristic() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xa11);
    for i in 0..60 {
        use rand::Rng;
        let n0 = rng.gen_range(1..=6);
        let g = common::random_graph(&mut rng, n0);
        let order = tree_relations(&g).unwrap().order_of_identity().unwrap();
        assert!(order.divides(&BigInt::from(g.n0() as i64 - g.n1() as i64)), "graph {i}");
    }
}

#[test]
fn torus_identities_hold() {
    let t1 = torus_complex(1).unwrap();
    let mut cases = vec![t1.clone()];
    for s in 2..=3 {
        cases.push(torus_complex(s).unwrap());
    }
    cases.push(t1.disjoint_union(&torus_complex(2).unwrap()).unwrap());
    for x in cases {
        for with_mk in [false, true] {
            let p = a2_relations(&x, with_mk).unwrap();
            let s = p.decompose().unwrap();
            let q = with_mk.then_some(1);
            for c in a2_identity_checks(&x, &p, &s, q).unwrap() {
                assert!(c.holds, "{} fails on a complex with {} vertices", c.name, x.n0());
            }
        }
    }
}
