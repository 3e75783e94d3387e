//! Randomized invariants of the exact predicates, the LP and the counters.

mod common;

use num_bigint::BigInt;
use proptest::prelude::*;

use common::{in_triangle, int_points, naive_birch_2d, orient2};
use tverberg_core::birch::{count_colored_birch, count_uncolored_birch};
use tverberg_core::config::{ColoredConfiguration, Mode};
use tverberg_core::generators::make_random;
use tverberg_core::geometry::{cone_member, in_general_position, orientation, simplex_contains, RationalPoint, Sign};
use tverberg_core::lp::FeasibilityProblem;
use tverberg_core::rational::{frac, int};

fn pt(c: &[i64]) -> RationalPoint {
    RationalPoint::from_ints(c)
}

fn points(d: usize, n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-50i64..=50, d), n)
}

fn cases(n: u32) -> ProptestConfig {
    ProptestConfig {
        cases: n,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(cases(500))]

    #[test]
    fn orientation_flips_under_transpositions(raw in (2usize..=4).prop_flat_map(|d| points(d, d + 1))) {
        let d = raw.len() - 1;
        let p: Vec<RationalPoint> = raw.iter().map(|c| pt(c)).collect();
        let s = orientation(&p, d).unwrap();
        for i in 0..d {
            let mut q = p.clone();
            q.swap(i, i + 1);
            prop_assert_eq!(orientation(&q, d).unwrap(), s.flip());
        }
        // a 3-cycle is even
        let mut r = p.clone();
        r[..3].rotate_left(1);
        prop_assert_eq!(orientation(&r, d).unwrap(), s);
    }

    #[test]
    fn orientation_is_affine_invariant(
        raw in points(2, 3),
        num in 1i64..=20,
        den in 1i64..=20,
        shift in prop::collection::vec(-100i64..=100, 2),
    ) {
        let p: Vec<RationalPoint> = raw.iter().map(|c| pt(c)).collect();
        let s = orientation(&p, 2).unwrap();
        let scale = frac(num, den);
        let moved: Vec<RationalPoint> = p
            .iter()
            .map(|x| {
                let y = x.scale(&scale);
                RationalPoint::new(y.coords.iter().zip(&shift).map(|(a, &b)| a + int(b)).collect())
            })
            .collect();
        prop_assert_eq!(orientation(&moved, 2).unwrap(), s);
        // the reflection (x, y) -> (y, x) reverses orientation
        let mirrored: Vec<RationalPoint> =
            p.iter().map(|x| RationalPoint::new(vec![x.coords[1].clone(), x.coords[0].clone()])).collect();
        prop_assert_eq!(orientation(&mirrored, 2).unwrap(), s.flip());
    }

    #[test]
    fn orientation_matches_integer_oracle(raw in points(2, 3)) {
        let p: Vec<RationalPoint> = raw.iter().map(|c| pt(c)).collect();
        let w: Vec<Vec<i128>> = raw.iter().map(|c| c.iter().map(|&x| x as i128).collect()).collect();
        prop_assert_eq!(orientation(&p, 2).unwrap().as_i8() as i128, orient2(&w[0], &w[1], &w[2]));
    }
}

fn cone_equivalence(d: usize, gens: Vec<Vec<i64>>, q: Vec<i64>) -> Result<(), TestCaseError> {
    let s: Vec<RationalPoint> = gens.iter().map(|c| pt(c)).collect();
    let q = pt(&q);
    let mut simplex = s.clone();
    simplex.push(q.clone());
    let mut with_origin = simplex.clone();
    with_origin.push(RationalPoint::origin(d));
    prop_assume!(in_general_position(&with_origin, d).unwrap());
    let cone = cone_member(&s, &q.neg()).unwrap();
    let inside = simplex_contains(&simplex, &RationalPoint::origin(d)).unwrap();
    prop_assert_eq!(cone, inside);
    Ok(())
}

proptest! {
    #![proptest_config(cases(1500))]

    #[test]
    fn cone_and_simplex_agree_in_the_plane(gens in points(2, 2), q in prop::collection::vec(-50i64..=50, 2)) {
        cone_equivalence(2, gens, q)?;
    }

    #[test]
    fn cone_and_simplex_agree_in_space(gens in points(3, 3), q in prop::collection::vec(-50i64..=50, 3)) {
        cone_equivalence(3, gens, q)?;
    }
}

/// Hulls of two planar blocks of at most three points in general position
/// meet iff a vertex of one lies inside the other (a triangle) or two edges
/// cross.
fn polygons_meet(a: &[Vec<i128>], b: &[Vec<i128>]) -> bool {
    let contains = |poly: &[Vec<i128>], p: &Vec<i128>| poly.len() == 3 && in_triangle(&poly[0], &poly[1], &poly[2], p);
    if a.iter().any(|p| contains(b, p)) || b.iter().any(|p| contains(a, p)) {
        return true;
    }
    let edges = |poly: &[Vec<i128>]| -> Vec<(Vec<i128>, Vec<i128>)> {
        let n = poly.len();
        match n {
            1 => vec![],
            2 => vec![(poly[0].clone(), poly[1].clone())],
            _ => (0..n).map(|i| (poly[i].clone(), poly[(i + 1) % n].clone())).collect(),
        }
    };
    edges(a).iter().any(|(p, q)| {
        edges(b)
            .iter()
            .any(|(r, s)| orient2(p, q, r) * orient2(p, q, s) < 0 && orient2(r, s, p) * orient2(r, s, q) < 0)
    })
}

fn big(pts: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    pts.iter()
        .map(|p| p.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

fn feasible(coords: &[Vec<BigInt>], blocks: &[Vec<usize>], d: usize) -> bool {
    FeasibilityProblem::new(blocks, d, |i| &coords[i][..]).is_feasible()
}

proptest! {
    #![proptest_config(cases(1500))]

    #[test]
    fn lp_matches_polygon_clipping(raw in points(2, 6), s1 in 1usize..=3, s2 in 1usize..=3) {
        let p: Vec<RationalPoint> = raw.iter().map(|c| pt(c)).collect();
        prop_assume!(in_general_position(&p, 2).unwrap());
        let a: Vec<usize> = (0..s1).collect();
        let b: Vec<usize> = (s1..s1 + s2).collect();
        let w: Vec<Vec<i128>> = raw.iter().map(|c| c.iter().map(|&x| x as i128).collect()).collect();
        let pa: Vec<Vec<i128>> = a.iter().map(|&i| w[i].clone()).collect();
        let pb: Vec<Vec<i128>> = b.iter().map(|&i| w[i].clone()).collect();
        prop_assert_eq!(feasible(&big(&raw), &[a, b], 2), polygons_meet(&pa, &pb));
    }

    #[test]
    fn feasibility_is_monotone(raw in points(2, 9), cut in prop::collection::vec(0usize..4, 9)) {
        let coords = big(&raw);
        let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); 4];
        for (i, &b) in cut.iter().enumerate() {
            blocks[b].push(i);
        }
        blocks.retain(|b| !b.is_empty());
        prop_assume!(blocks.len() >= 3);
        let (head, spare) = blocks.split_at(blocks.len() - 1);
        let head = head.to_vec();
        let f = feasible(&coords, &head, 2);
        let mut more = head.clone();
        more.push(spare[0].clone());
        let mut grown = head.clone();
        grown[0].extend(&spare[0]);
        if f {
            // a larger hull still meets the others
            prop_assert!(feasible(&coords, &grown, 2));
        } else {
            prop_assert!(!feasible(&coords, &more, 2));
            for j in 0..head.len() {
                if head[j].len() > 1 {
                    let mut shrunk = head.clone();
                    shrunk[j].pop();
                    prop_assert!(!feasible(&coords, &shrunk, 2));
                }
            }
        }
    }
}

fn transform(c: &ColoredConfiguration, m: [[i64; 2]; 2], t: [i64; 2]) -> Option<ColoredConfiguration> {
    let map = |p: &RationalPoint| {
        RationalPoint::new(
            (0..2)
                .map(|i| &p.coords[0] * int(m[i][0]) + &p.coords[1] * int(m[i][1]) + int(t[i]))
                .collect(),
        )
    };
    ColoredConfiguration::new(
        2,
        c.points().iter().map(map).collect(),
        c.colors().to_vec(),
        c.mode(),
        c.query().map(map),
    )
    .ok()
}

proptest! {
    #![proptest_config(cases(60))]

    #[test]
    fn birch_count_is_affine_invariant(
        seed in any::<u64>(),
        k in 2usize..=4,
        m in prop::array::uniform2(prop::array::uniform2(-5i64..=5)),
        t in prop::array::uniform2(-20i64..=20),
    ) {
        prop_assume!(m[0][0] * m[1][1] != m[0][1] * m[1][0]);
        let c = make_random(2, Mode::Birch { k }, seed, 1000).unwrap();
        let image = transform(&c, m, t).expect("invertible maps keep general position");
        let n = count_colored_birch(&c, false).unwrap().count;
        prop_assert_eq!(count_colored_birch(&image, false).unwrap().count, n);
        let u = count_uncolored_birch(&c, false).unwrap().count;
        prop_assert!(n <= u);
        prop_assert_eq!(count_uncolored_birch(&image, false).unwrap().count, u);
    }

    #[test]
    fn birch_count_matches_naive_oracle(seed in any::<u64>(), k in 1usize..=3) {
        let c = make_random(2, Mode::Birch { k }, seed, 1000).unwrap();
        prop_assert_eq!(count_colored_birch(&c, false).unwrap().count, naive_birch_2d(&c, true));
        prop_assert_eq!(count_uncolored_birch(&c, false).unwrap().count, naive_birch_2d(&c, false));
        let (pts, _) = int_points(&c);
        prop_assert_eq!(pts.len(), 3 * k);
    }
}

#[test]
fn collinear_triple_has_zero_orientation() {
    let p = [pt(&[0, 0]), pt(&[2, 3]), pt(&[4, 6])];
    assert_eq!(orientation(&p, 2).unwrap(), Sign::Zero);
}

proptest! {
    #![proptest_config(cases(40))]

    #[test]
    fn tverberg_count_is_invariant_under_unimodular_maps(
        seed in any::<u64>(),
        r in 2usize..=4,
        a in -3i64..=3,
        b in -3i64..=3,
        t in prop::array::uniform2(-20i64..=20),
        flip in any::<bool>(),
    ) {
        // [[1, a], [0, 1]] [[1, 0], [b, 1]], optionally with a reflection
        let mut m = [[1 + a * b, a], [b, 1]];
        if flip {
            m[1] = [-m[1][0], -m[1][1]];
        }
        let c = make_random(2, Mode::Tverberg { r }, seed, 1000).unwrap();
        let image = transform(&c, m, t).expect("unimodular maps keep general position");
        let opts = tverberg_core::tverberg::TverbergOptions::default();
        let n = tverberg_core::tverberg::count_colored_tverberg(&c, opts).unwrap().count;
        prop_assert_eq!(tverberg_core::tverberg::count_colored_tverberg(&image, opts).unwrap().count, n);
    }
}
