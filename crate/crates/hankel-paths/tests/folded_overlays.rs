//! Folding, essential regions, bicoloured connections and the involution
//! `psi`.

use std::collections::{BTreeMap, BTreeSet};

use hankel_paths::folded_overlays::*;
use hankel_paths::lattice_paths::survivors;
use hankel_paths::xi_bijection::satisfies_colour_pattern;
use hankel_paths::{hankel_det, Budget, IdentityParams, Int, Parity, PathTuple, Point};

mod common;
use common::grid;

fn budget() -> Budget {
    Budget::default()
}

fn endpoint_pairs(o: &FoldedOverlay) -> BTreeSet<(Point, Point)> {
    all_connections(o).unwrap().into_iter().map(|c| (c.start.min(c.end), c.start.max(c.end))).collect()
}

#[test]
fn fold_unfold_is_a_sign_preserving_bijection() {
    for p in grid(2, 2, 2) {
        let ss = survivors(p.lhs().dims(), &budget()).unwrap();
        let mut images = BTreeSet::new();
        for s in &ss {
            let o = fold(s, p).unwrap();
            assert_eq!(&unfold(&o).unwrap(), s, "{p}");
            assert_eq!(o.sign().unwrap(), s.sign(), "{p}");
            images.insert(o);
        }
        assert_eq!(images.len(), ss.len(), "{p}");
    }
}

#[test]
fn folded_paths_stay_below_the_diagonal() {
    let p = IdentityParams::new(3, 2, 2, Parity::Odd);
    assert_eq!(p.lhs().dims(), hankel_paths::HankelDims::new(5, -3, 6));
    let overlays = all_folded_overlays(p, &budget()).unwrap();
    assert!(!overlays.is_empty());
    for o in &overlays {
        for (a, b) in o.edges(Colour::Green).into_iter().chain(o.edges(Colour::Blue)) {
            assert!(a.y <= a.x && b.y <= b.x, "{a} -> {b}");
        }
        for (a, b) in o.edges(Colour::Blue) {
            assert!(a.y > a.x - 5 && b.y > b.x - 5, "{a} -> {b}");
        }
    }
}

#[test]
fn fold_rejects_non_survivors() {
    let p = IdentityParams::new(2, 1, 1, Parity::Even);
    assert!(fold(&PathTuple::empty(), p).is_err());
}

#[test]
fn survivor_without_green_paths_keeps_its_paths() {
    let p = IdentityParams::new(3, 1, 0, Parity::Odd);
    for s in survivors(p.lhs().dims(), &budget()).unwrap() {
        let o = fold(&s, p).unwrap();
        assert!(o.green.is_empty());
        // Blue paths are the original paths from their enforced points on.
        for b in o.blue.iter().filter(|b| !b.is_empty()) {
            let orig = s.paths.iter().find(|q| q.end() == b.end()).expect("same terminal point");
            assert!(orig.steps.ends_with(&b.steps), "{b} is not a tail of {orig}");
        }
        assert_eq!(unfold(&o).unwrap(), s);
    }
}

#[test]
fn bicoloured_points_lie_in_the_essential_region() {
    for p in grid(3, 2, 3) {
        let Ok(all) = all_folded_overlays(p, &budget()) else { continue };
        let region = EssentialRegion::new(p);
        for o in &all {
            for q in o.bicoloured_points() {
                assert!(region.contains(q), "{p}: {q} outside {region:?}");
            }
        }
    }
}

#[test]
fn psi_is_a_sign_reversing_involution_with_the_determinant_as_fixed_sum() {
    for p in grid(3, 2, 3) {
        let Ok(all) = all_folded_overlays(p, &budget()) else { continue };
        let mut fixed_sum = 0i64;
        for o in &all {
            let q = psi(o).unwrap();
            assert_eq!(&psi(&q).unwrap(), o, "{p}");
            if &q == o {
                fixed_sum += i64::from(o.sign().unwrap());
            } else {
                assert_eq!(q.sign().unwrap(), -o.sign().unwrap(), "{p}");
            }
        }
        assert_eq!(Int::from(fixed_sum), hankel_det(p.lhs().dims()).unwrap(), "{p}");
        let fixed = folded_survivors(p, &budget()).unwrap();
        assert_eq!(fixed.iter().map(|o| i64::from(o.sign().unwrap())).sum::<i64>(), fixed_sum);
    }
}

#[test]
fn psi_preserves_connection_endpoints() {
    for p in grid(3, 2, 2) {
        for o in all_folded_overlays(p, &budget()).unwrap() {
            let q = psi(&o).unwrap();
            assert_eq!(endpoint_pairs(&o), endpoint_pairs(&q), "{p}");
        }
    }
}

#[test]
fn involutive_connections_join_opposite_colours() {
    let mut seen = 0;
    for p in grid(3, 2, 2) {
        for o in all_folded_overlays(p, &budget()).unwrap() {
            let colours: BTreeMap<Point, Colour> = o.terminal_colours().into_iter().collect();
            for conn in all_connections(&o).unwrap() {
                assert_eq!(colours[&conn.start], conn.start_colour);
                let keys: BTreeSet<_> = conn.steps.iter().map(|s| (s.edge, s.colour)).collect();
                assert_eq!(keys.len(), conn.steps.len(), "{p}: an edge is traversed twice");
                if is_involutive(&o, &conn) {
                    assert_ne!(colours[&conn.start], colours[&conn.end], "{p}");
                    seen += 1;
                }
            }
        }
    }
    assert!(seen > 0);
}

#[test]
fn connection_without_intersections_retraces_its_path() {
    let mut seen = 0;
    for p in grid(3, 2, 2) {
        for o in all_folded_overlays(p, &budget()).unwrap() {
            if !o.bicoloured_points().is_empty() {
                continue;
            }
            assert!(find_involutive_connection(&o).unwrap().is_none());
            for conn in all_connections(&o).unwrap() {
                let path = o
                    .paths(conn.start_colour)
                    .iter()
                    .find(|q| !q.is_empty() && q.end() == conn.start)
                    .expect("a path ends at the terminal point");
                assert_eq!(conn.end, path.start);
                assert_eq!(conn.steps.len(), path.len());
                seen += 1;
            }
        }
    }
    assert!(seen > 0);
}

#[test]
fn folded_survivors_satisfy_the_colour_pattern() {
    for p in grid(3, 3, 3) {
        let Ok(fixed) = folded_survivors(p, &budget()) else { continue };
        for o in fixed {
            assert!(satisfies_colour_pattern(&o.code()), "{p}: {}", o.code());
        }
    }
}

#[test]
fn order_one_overlays_are_all_fixed() {
    for p in grid(1, 3, 3) {
        let all = all_folded_overlays(p, &budget()).unwrap();
        assert!(all.iter().all(|o| o.blue.is_empty()));
        assert_eq!(folded_survivors(p, &budget()).unwrap(), all, "{p}");
    }
}

#[test]
fn rhs_reflection_is_an_involution() {
    for p in grid(3, 2, 3) {
        for s in survivors(p.rhs().dims(), &budget()).unwrap() {
            let r = reflect_rhs(&s, p).unwrap();
            assert_eq!(r.sign(), s.sign());
            assert_eq!(unreflect_rhs(&r), s);
        }
    }
    let p = IdentityParams::new(3, 2, 0, Parity::Odd);
    assert_eq!(reflect_rhs(&PathTuple::empty(), p).unwrap(), PathTuple::empty());
    assert!(reflect_rhs(&PathTuple::empty(), IdentityParams::new(3, 2, 2, Parity::Odd)).is_err());
}
