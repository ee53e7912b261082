//! Randomized properties of the core invariants.

use gmmn::geom::{manhattan_distance, rat, ratio, Instance, Point, Rational, Segment, Transform};
use gmmn::rsa::{canonical_m_path, ceil_log2, helly_min_point, rsa_shortcut_with_stats, RsaInstance, SteinerBackend};
use gmmn::solver::{median_split, solve_gmmn, SolverConfig};
use gmmn::stabbing::{minimal_piercing, prune_piercing, stab_both, stabs, sweep_stab_halfplane};
use gmmn::verifier::{has_m_path, verify_instance};
use gmmn::RectilinearNetwork;
use proptest::prelude::*;

fn arb_point(d: usize) -> impl Strategy<Value = Point> {
    prop::collection::vec(-20i64..=20, d).prop_map(|v| Point::from_ints(&v))
}

fn arb_rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=8).prop_map(|(n, d)| ratio(n, d))
}

proptest! {
    #[test]
    fn distance_is_a_metric(a in arb_point(3), b in arb_point(3), c in arb_point(3)) {
        let ab = manhattan_distance(&a, &b).unwrap();
        let ba = manhattan_distance(&b, &a).unwrap();
        prop_assert_eq!(&ab, &ba);
        prop_assert_eq!(ab == rat(0), a == b);
        let ac = manhattan_distance(&a, &c).unwrap();
        let cb = manhattan_distance(&c, &b).unwrap();
        prop_assert!(ac + cb >= ab);
    }

    #[test]
    fn canonicalize_is_idempotent_and_order_free(
        segs in prop::collection::vec(
            (arb_point(2), 0usize..2, 1i64..=6),
            0..12,
        ),
        seed in 0u64..100,
    ) {
        let mut built: Vec<Segment> = Vec::new();
        for (p, axis, len) in segs {
            let mut q = p.clone();
            q.coords[axis] = &q.coords[axis] + rat(len);
            built.push(Segment::new(p, q, axis));
        }
        let net = RectilinearNetwork::from_segments(built.clone());
        let canon = net.canonicalize();
        prop_assert_eq!(canon.canonicalize().segments.clone(), canon.segments.clone());
        // shuffling input order must not change the canonical form
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        built.shuffle(&mut rng);
        let shuffled = RectilinearNetwork::from_segments(built).canonicalize();
        prop_assert_eq!(shuffled.segments, canon.segments);
    }

    #[test]
    fn helly_point_lies_in_all_three_boxes(t in arb_point(3), u in arb_point(3), o in arb_point(3)) {
        let m = helly_min_point(&t, &u, &o);
        for (x, y) in [(&t, &u), (&t, &o), (&u, &o)] {
            for i in 0..3 {
                let (lo, hi) = if x.coords[i] <= y.coords[i] {
                    (&x.coords[i], &y.coords[i])
                } else {
                    (&y.coords[i], &x.coords[i])
                };
                prop_assert!(lo <= &m.coords[i] && &m.coords[i] <= hi);
            }
        }
    }

    #[test]
    fn canonical_path_is_an_m_path(a in arb_point(2), b in arb_point(2)) {
        prop_assume!(a != b);
        let net = canonical_m_path(&a, &b, None).unwrap();
        prop_assert_eq!(net.length(), manhattan_distance(&a, &b).unwrap());
        prop_assert!(has_m_path(&net, (&a, &b)));
    }

    #[test]
    fn uniform_scaling_scales_length(
        pairs in prop::collection::vec((arb_point(2), arb_point(2)), 1..6),
        num in 1i64..5,
        den in 1i64..5,
    ) {
        let raw: Vec<(Point, Point)> = pairs;
        let Ok((inst, _)) = Instance::new(2, raw) else { return Ok(()); };
        prop_assume!(!inst.is_empty());
        let net = solve_gmmn(&inst, &SolverConfig::default()).unwrap();
        let t = Transform::uniform(2, ratio(num, den), Point::from_ints(&[3, -2])).unwrap();
        let scaled = t.apply_network(&net);
        prop_assert_eq!(scaled.length(), net.length() * ratio(num, den));
    }

    #[test]
    fn median_split_is_sound(
        pairs in prop::collection::vec((arb_point(2), arb_point(2)), 1..20),
    ) {
        let axis = 0usize;
        let Ok((inst, _)) = Instance::new(2, pairs) else { return Ok(()); };
        prop_assume!(!inst.is_empty());
        let n = inst.len();
        let s = median_split(&inst, axis).unwrap();
        prop_assert!(s.left.len() <= n / 2);
        prop_assert!(s.right.len() <= n / 2);
        prop_assert_eq!(s.left.len() + s.mid.len() + s.right.len(), n);
        prop_assert!(s.mid.check_separation().is_ok());
        for p in &s.left.pairs {
            prop_assert!(p.a.coords[axis] < s.median && p.b.coords[axis] < s.median);
        }
        for p in &s.right.pairs {
            prop_assert!(p.a.coords[axis] > s.median && p.b.coords[axis] > s.median);
        }
    }

    #[test]
    fn shortcut_bounds_and_feasibility(
        terminals in prop::collection::vec(arb_point(2), 1..12),
        root in arb_point(2),
    ) {
        let inst = RsaInstance { terminals: terminals.clone(), root: root.clone() };
        let (net, stats) = rsa_shortcut_with_stats(&inst, SteinerBackend::MstRectilinear).unwrap();
        let log = rat(ceil_log2(stats.n0) as i64);
        prop_assert!(stats.output_length <= log * &stats.steiner_length);
        prop_assert!(stats.depth <= ceil_log2(stats.n0));
        for t in &terminals {
            if t != &root {
                prop_assert!(has_m_path(&net, (t, &root)));
            }
        }
    }

    #[test]
    fn sweep_stabs_every_box(
        boxes in prop::collection::vec((-8i64..0, -10i64..=10, 1i64..8, 1i64..8), 1..10),
    ) {
        let raw: Vec<(Point, Point)> = boxes
            .iter()
            .map(|&(x0, y0, w, h)| {
                (Point::from_ints(&[x0, y0]), Point::from_ints(&[x0 + w.max(-x0), y0 + h]))
            })
            .collect();
        let (inst, _) = Instance::new(2, raw).unwrap();
        prop_assume!(!inst.is_empty());
        let bs = inst.boxes();
        let s = stab_both(&bs).unwrap();
        for b in &bs {
            prop_assert!(stabs(&s, b));
        }
        let right = sweep_stab_halfplane(&bs).unwrap();
        for seg in &right.segments {
            prop_assert_eq!(&seg.a.coords[0], &rat(0));
        }
    }

    #[test]
    fn greedy_piercing_is_minimal(
        ivs in prop::collection::vec((-20i64..=20, 0i64..10), 1..12),
    ) {
        let intervals: Vec<(Rational, Rational)> =
            ivs.iter().map(|&(a, w)| (rat(a), rat(a + w))).collect();
        let points = minimal_piercing(&intervals);
        for (lo, hi) in &intervals {
            prop_assert!(points.iter().any(|p| p >= lo && p <= hi));
        }
        // greedy piercing is already inclusion-minimal
        let pruned = prune_piercing(&points, &intervals).unwrap();
        prop_assert_eq!(pruned, points);
    }

    #[test]
    fn io_round_trips(
        pairs in prop::collection::vec(
            (prop::collection::vec(arb_rational(), 2), prop::collection::vec(arb_rational(), 2)),
            1..8,
        ),
    ) {
        let raw: Vec<(Point, Point)> = pairs
            .into_iter()
            .map(|(a, b)| (Point::new(a), Point::new(b)))
            .collect();
        let Ok((inst, _)) = Instance::new(2, raw) else { return Ok(()); };
        prop_assume!(!inst.is_empty());
        let text = gmmn::io::serialize_instance(&inst, &[]);
        let (back, _) = gmmn::io::parse_instance(&text).unwrap();
        prop_assert_eq!(&back, &inst);

        let net = solve_gmmn(&inst, &SolverConfig::default()).unwrap();
        let ntext = gmmn::io::serialize_network(&net);
        let nback = gmmn::io::parse_network(&ntext).unwrap();
        prop_assert_eq!(nback.segments, net.segments);
    }

    #[test]
    fn solver_output_is_feasible(
        pairs in prop::collection::vec((arb_point(2), arb_point(2)), 1..10),
    ) {
        let Ok((inst, _)) = Instance::new(2, pairs) else { return Ok(()); };
        prop_assume!(!inst.is_empty());
        for algo in [gmmn::Algorithm::RecursiveD, gmmn::Algorithm::Improved2d] {
            let cfg = SolverConfig { algorithm: algo, ..SolverConfig::default() };
            let net = solve_gmmn(&inst, &cfg).unwrap();
            prop_assert!(verify_instance(&net, &inst).feasible());
        }
    }
}
