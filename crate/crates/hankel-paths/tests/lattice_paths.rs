//! Lattice paths: reflection-principle counts, tuple streams, the LGV
//! involution and survivor search.

use hankel_paths::exact_arith::{binomial, catalan_convolution};
use hankel_paths::lattice_paths::*;
use hankel_paths::{hankel_det, HankelDims, Int};
use num_traits::ToPrimitive;
use proptest::prelude::*;

fn budget() -> Budget {
    Budget::default()
}

#[test]
fn reflection_count_example() {
    let n: Int = count_avoiding_paths(Point::new(-3, -4), Point::new(0, 0), 2);
    assert_eq!(n, Int::from(14));
    let paths = enumerate_avoiding_paths(Point::new(-3, -4), Point::new(0, 0), 2, &budget()).unwrap();
    assert_eq!(paths.len(), 14);
    assert!(paths.iter().all(|p| p.avoids(2) && p.end() == Point::new(0, 0)));
}

#[test]
fn counts_are_convoluted_catalan_numbers() {
    for k in 1..=5i64 {
        for m in -3..=5i64 {
            for i in 0..=5usize {
                for j in 0..=5usize {
                    let p = i as i64 + j as i64 + m;
                    let count: Int = count_avoiding_paths(initial_point(i, k, m), terminal_point(j), k);
                    let want = catalan_convolution::<Int>(k, p).unwrap();
                    assert_eq!(count, want, "K={k} M={m} i={i} j={j}");
                }
            }
        }
    }
}

#[test]
fn endpoints_on_the_forbidden_line_have_no_paths() {
    let a = Point::new(2, 0);
    assert!(!a.avoids(2));
    let n: Int = count_avoiding_paths(a, Point::new(3, 3), 2);
    assert_eq!(n, Int::from(0));
    assert!(enumerate_avoiding_paths(a, Point::new(3, 3), 2, &budget()).unwrap().is_empty());
}

#[test]
fn per_pair_budget_is_enforced() {
    let tight = Budget { paths_per_pair: 10, tuples: 10 };
    let err = enumerate_avoiding_paths(Point::new(-3, -4), Point::new(0, 0), 2, &tight).unwrap_err();
    assert!(err.to_string().contains("instance too large for enumeration"), "{err}");
}

#[test]
fn tuple_budget_is_enforced() {
    let dims = HankelDims::new(2, -2, 4);
    let tight = budget().with_tuples(100);
    assert!(enumerate_tuples(dims, &tight).is_err());
    assert!(survivors(HankelDims::new(4, -3, 6), &tight).is_err());
}

#[test]
fn path_text_form() {
    let p = LatticePath::from_points(&[Point::new(0, 0), Point::new(1, 0), Point::new(1, 1)]).unwrap();
    assert_eq!(p.to_string(), "(0,0):RU");
    assert_eq!(p.reflect().to_string(), "(0,0):UR");
    assert!(LatticePath::from_points(&[Point::new(0, 0), Point::new(1, 1)]).is_none());
}

#[test]
fn empty_instance_has_one_empty_survivor() {
    for k in 1..=4 {
        for m in -3..=3 {
            let s = survivors(HankelDims::new(k, m, 0), &budget()).unwrap();
            assert_eq!(s, vec![PathTuple::empty()]);
            assert_eq!(s[0].sign(), 1);
        }
    }
}

#[test]
fn order_one_instance_has_a_single_empty_survivor() {
    let dims = HankelDims::new(1, -2, 3);
    let s = survivors(dims, &budget()).unwrap();
    assert_eq!(s.len(), 1);
    assert!(s[0].paths.iter().all(|p| p.is_empty()));
    assert_eq!(s[0].sign(), -1);
}

#[test]
fn forced_permutation_entries() {
    // Every survivor sends path 1 to B_1 and path 2 to B_0.
    let dims = HankelDims::new(4, -2, 4);
    let s = survivors(dims, &budget()).unwrap();
    assert!(!s.is_empty());
    for t in &s {
        assert_eq!(t.perm[1], 1);
        assert_eq!(t.perm[2], 0);
    }
}

#[test]
fn survivors_are_exactly_the_nonintersecting_tuples() {
    for (k, m, n) in [(2, -1, 3), (3, -1, 3), (2, -2, 4), (1, 0, 3), (3, 0, 2)] {
        let dims = HankelDims::new(k, m, n);
        let from_stream: Vec<PathTuple> =
            enumerate_tuples(dims, &budget()).unwrap().filter(PathTuple::is_nonintersecting).collect();
        let searched = survivors(dims, &budget()).unwrap();
        assert_eq!(from_stream, searched, "{dims}");
        assert!(searched.iter().all(|t| t.is_consistent(dims)));
    }
}

#[test]
fn lgv_involution_on_full_streams() {
    for k in 1..=3 {
        for m in -3..=1 {
            for n in 0..=3 {
                let dims = HankelDims::new(k, m, n);
                let Ok(stream) = enumerate_tuples(dims, &budget().with_tuples(200_000)) else { continue };
                let mut sum = 0i64;
                for t in stream {
                    let q = lgv_involution(&t);
                    assert_eq!(lgv_involution(&q), t, "{dims}");
                    if t.is_nonintersecting() {
                        assert_eq!(q, t);
                        sum += i64::from(t.sign());
                    } else {
                        assert_eq!(q.sign(), -t.sign());
                        assert!(q.is_consistent(dims));
                    }
                }
                assert_eq!(Int::from(sum), hankel_det(dims).unwrap(), "{dims}");
            }
        }
    }
}

#[test]
fn lgv_involution_swaps_tails_at_the_maximal_intersection() {
    // Two paths from A_0 = (0,0) and A_1 = (-1,-1) (K=1, M=0) meeting at (0,1).
    let a = LatticePath::from_points(&[Point::new(0, 0), Point::new(0, 1), Point::new(1, 1)]).unwrap();
    let b = LatticePath::from_points(&[Point::new(-1, -1), Point::new(-1, 0), Point::new(-1, 1), Point::new(0, 1)])
        .unwrap();
    let mut steps = b.steps.clone();
    steps.push(Step::Up);
    steps.push(Step::Right);
    let b = LatticePath::new(b.start, steps);
    assert_eq!(b.end(), Point::new(1, 2));
    let t = PathTuple::new(vec![1, 0], vec![a, b]);
    let (p, pair) = max_intersection(&t).unwrap();
    assert_eq!(pair, (0, 1));
    assert!(t.paths[0].points().any(|q| q == p) && t.paths[1].points().any(|q| q == p));
    let q = lgv_involution(&t);
    assert_eq!(q.perm, vec![0, 1]);
    assert_eq!(q.paths[0].end(), t.paths[1].end());
    assert_eq!(q.paths[1].end(), t.paths[0].end());
    assert_eq!(lgv_involution(&q), t);
}

#[test]
fn signed_sums_match_determinants() {
    for k in 1..=4 {
        for m in -4..=2 {
            for n in 0..=4 {
                let dims = HankelDims::new(k, m, n);
                let det = hankel_det(dims).unwrap();
                assert_eq!(signed_tuple_sum_grouped(dims), det, "{dims}");
                if let Ok(s) = survivors(dims, &budget()) {
                    let sum: i64 = s.iter().map(|t| i64::from(t.sign())).sum();
                    assert_eq!(Int::from(sum), det, "{dims}");
                }
            }
        }
    }
}

#[test]
fn tuple_count_matches_stream_length() {
    for (k, m, n) in [(2, -1, 3), (1, 0, 4), (3, -2, 3)] {
        let dims = HankelDims::new(k, m, n);
        let len = enumerate_tuples(dims, &budget()).unwrap().count();
        assert_eq!(tuple_count(dims).to_usize().unwrap(), len, "{dims}");
    }
}

#[test]
fn sampling_is_deterministic_and_valid() {
    let dims = HankelDims::new(4, -3, 5);
    let a = sample_tuples(dims, &budget(), 200).unwrap();
    let b = sample_tuples(dims, &budget(), 200).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.len(), 200);
    assert!(a.iter().all(|t| t.is_consistent(dims)));
}

#[test]
fn sampling_everything_reproduces_the_stream() {
    let dims = HankelDims::new(2, -1, 3);
    let all: Vec<PathTuple> = enumerate_tuples(dims, &budget()).unwrap().collect();
    let sampled = sample_tuples(dims, &budget(), all.len() as u64).unwrap();
    assert_eq!(all, sampled);
}

#[test]
fn endpoint_positions() {
    assert_eq!(initial_point(0, 1, -1), Point::new(1, 1));
    assert_eq!(initial_point(0, 2, 0), Point::new(0, -1));
    assert_eq!(initial_point(2, 3, 3), Point::new(-5, -7));
    assert_eq!(terminal_point(3), Point::new(3, 3));
}

#[test]
fn degenerate_reflection_counts() {
    let behind: Int = count_avoiding_paths(Point::new(1, 1), Point::new(0, 0), 1);
    assert_eq!(behind, Int::from(0));
    let same: i64 = count_avoiding_paths(Point::new(2, 5), Point::new(2, 5), 1);
    assert_eq!(same, 1);
}

#[test]
fn permutations_in_lexicographic_order() {
    let mut p = vec![0, 1, 2];
    let mut all = vec![p.clone()];
    while next_permutation(&mut p) {
        all.push(p.clone());
    }
    assert_eq!(all.len(), 6);
    assert_eq!(all[1], vec![0, 2, 1]);
    assert_eq!(all[5], vec![2, 1, 0]);
}

#[test]
fn empty_instance_streams_one_tuple() {
    let dims = HankelDims::new(3, 1, 0);
    let all: Vec<_> = enumerate_tuples(dims, &budget()).unwrap().collect();
    assert_eq!(all, vec![PathTuple::empty()]);
}

fn naive_inversions(p: &[usize]) -> usize {
    let mut c = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            c += usize::from(p[i] > p[j]);
        }
    }
    c
}

proptest! {
    #[test]
    fn count_matches_enumeration(ax in -6i64..=3, ay in -8i64..=3, dx in 0i64..=9, dy in 0i64..=9, k in 1i64..=6) {
        let a = Point::new(ax, ay);
        let b = Point::new(ax + dx, ay + dy);
        prop_assume!(binomial::<Int>(dx + dy, dx) <= Int::from(100_000));
        let count: Int = count_avoiding_paths(a, b, k);
        let list = enumerate_avoiding_paths(a, b, k, &budget()).unwrap();
        prop_assert_eq!(count, Int::from(list.len()));
        prop_assert!(list.iter().all(|p| p.avoids(k) && p.start == a && p.end() == b));
    }

    #[test]
    fn inversions_match_naive_count(perm in Just((0..7usize).collect::<Vec<_>>()).prop_shuffle()) {
        prop_assert_eq!(permutation_inversions(&perm), naive_inversions(&perm));
        let want = if naive_inversions(&perm) % 2 == 0 { 1 } else { -1 };
        prop_assert_eq!(permutation_sign(&perm), want);
    }

    #[test]
    fn reflection_is_an_involution(x in -10i64..10, y in -10i64..10, steps in proptest::collection::vec(any::<bool>(), 0..12)) {
        let p = LatticePath::new(Point::new(x, y), steps.into_iter().map(|r| if r { Step::Right } else { Step::Up }).collect());
        prop_assert_eq!(p.reflect().reflect(), p.clone());
        prop_assert_eq!(p.reflect().end(), p.end().reflect());
    }

    #[test]
    fn sampled_tuples_respect_the_involution(k in 2i64..=4, m in -3i64..=-1, n in 3usize..=5) {
        let dims = HankelDims::new(k, m, n);
        if let Ok(ts) = sample_tuples(dims, &budget(), 50) {
            for t in ts {
                let q = lgv_involution(&t);
                prop_assert_eq!(lgv_involution(&q), t.clone());
                if !t.is_nonintersecting() {
                    prop_assert_eq!(q.sign(), -t.sign());
                }
            }
        }
    }
}
