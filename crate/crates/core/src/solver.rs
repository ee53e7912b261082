//! The main pipelines: median-split recursion over the axes, the
//! reduction of fully separated instances to an all-terminal
//! arborescence, and the stabbing-based improved 2D algorithm for
//! x-separated instances.

use num_traits::Zero;

use crate::error::{GmmnError, Result};
use crate::geom::{Instance, Point, Rational, RectilinearNetwork, Transform};
use crate::rsa::{rsa_shortcut, RsaInstance, SteinerBackend};
use crate::stabbing::stab_both;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Algorithm {
    /// separate along every axis, then reduce to an arborescence
    RecursiveD,
    /// 2D only: handle x-separated instances by stabbing + arborescences
    Improved2d,
}

#[derive(Clone, Copy, Debug)]
pub struct SolverConfig {
    pub algorithm: Algorithm,
    pub backend: SteinerBackend,
    pub parallel: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            algorithm: Algorithm::RecursiveD,
            backend: SteinerBackend::MstRectilinear,
            parallel: false,
        }
    }
}

/// Outcome of one median split along an axis.
#[derive(Clone, Debug)]
pub struct SplitResult {
    pub left: Instance,
    pub mid: Instance,
    pub right: Instance,
    pub median: Rational,
    pub axis: usize,
}

/// Splits at the lower median of the 2n coordinates of the terminals
/// along `axis`. Pairs strictly below go left, strictly above go
/// right; pairs weakly straddling the median (including boxes that
/// merely touch it) go to the middle, which gains the median as its
/// next separator.
pub fn median_split(inst: &Instance, axis: usize) -> Result<SplitResult> {
    if inst.is_empty() {
        return Err(GmmnError::EmptyInstance);
    }
    // separators occupy axes 0..level, so the next split axis is the
    // separation level itself
    if axis != inst.separation_level() {
        return Err(GmmnError::InvalidConfig(format!(
            "median_split on axis {} needs a {}-separated instance",
            axis, axis
        )));
    }
    let n = inst.len();
    let mut coords: Vec<&Rational> = Vec::with_capacity(2 * n);
    for p in &inst.pairs {
        coords.push(&p.a.coords[axis]);
        coords.push(&p.b.coords[axis]);
    }
    coords.sort();
    let m = coords[n - 1].clone();

    let mut left = Vec::new();
    let mut mid = Vec::new();
    let mut right = Vec::new();
    for p in &inst.pairs {
        let (lo, hi) = {
            let (x, y) = (&p.a.coords[axis], &p.b.coords[axis]);
            if x <= y {
                (x, y)
            } else {
                (y, x)
            }
        };
        if *hi < m {
            left.push(p.clone());
        } else if *lo > m {
            right.push(p.clone());
        } else {
            mid.push(p.clone());
        }
    }
    debug_assert!(left.len() <= n / 2 && right.len() <= n / 2);

    let mk = |pairs, extra_sep: Option<&Rational>| {
        let mut i = Instance::from_pairs(inst.dim, pairs);
        i.separators = inst.separators.clone();
        if let Some(s) = extra_sep {
            i.separators.push(s.clone());
        }
        i
    };
    Ok(SplitResult {
        left: mk(left, None),
        mid: mk(mid, Some(&m)),
        right: mk(right, None),
        median: m,
        axis,
    })
}

/// Solves a fully separated instance (one separator per axis): after
/// translating the separator point to the origin, every pair's box
/// contains the origin, so M-paths from both terminals to the origin
/// concatenate into an M-path for the pair. One arborescence over all
/// terminals therefore suffices.
pub fn solve_d_separated(inst: &Instance, backend: SteinerBackend) -> Result<RectilinearNetwork> {
    if inst.separation_level() != inst.dim {
        return Err(GmmnError::InvalidConfig(format!(
            "solve_d_separated needs {} separators, got {}",
            inst.dim,
            inst.separation_level()
        )));
    }
    inst.check_separation()?;
    let root = Point::new(inst.separators.clone());
    let rsa = RsaInstance {
        terminals: inst.terminals(),
        root,
    };
    rsa_shortcut(&rsa, backend)
}

/// Splits an x-separated 2D instance into groups whose boxes form
/// connected components. Because every box crosses x = 0, two boxes
/// touch iff their y-intervals do, so interval merging is exact.
/// Returns each component with its merged y-interval.
pub fn connected_components_on_axis(inst: &Instance) -> Vec<(Instance, (Rational, Rational))> {
    let mut order: Vec<usize> = (0..inst.pairs.len()).collect();
    let boxes = inst.boxes();
    order.sort_by(|&i, &j| {
        (&boxes[i].lo.coords[1], &boxes[i].hi.coords[1])
            .cmp(&(&boxes[j].lo.coords[1], &boxes[j].hi.coords[1]))
    });
    let mut out: Vec<(Vec<usize>, (Rational, Rational))> = Vec::new();
    for &i in &order {
        let lo = boxes[i].lo.coords[1].clone();
        let hi = boxes[i].hi.coords[1].clone();
        match out.last_mut() {
            Some((members, (_, chi))) if lo <= *chi => {
                members.push(i);
                if hi > *chi {
                    *chi = hi;
                }
            }
            _ => out.push((vec![i], (lo, hi))),
        }
    }
    out.into_iter()
        .map(|(members, interval)| {
            let mut sub = Instance::from_pairs(
                inst.dim,
                members.iter().map(|&i| inst.pairs[i].clone()).collect(),
            );
            sub.separators = inst.separators.clone();
            (sub, interval)
        })
        .collect()
}

/// One arborescence call made by the improved 2D algorithm, kept for
/// ratio accounting.
#[derive(Clone, Debug)]
pub struct RsaCall {
    pub terminals: Vec<Point>,
    pub root: Point,
    pub cost: Rational,
}

#[derive(Clone, Debug)]
pub struct ComponentStats {
    pub stab_cost: Rational,
    pub up: Option<RsaCall>,
    pub down: Option<RsaCall>,
}

#[derive(Clone, Debug, Default)]
pub struct Improved2dStats {
    pub components: Vec<ComponentStats>,
}

/// Improved algorithm for x-separated 2D instances: translate the
/// separator to x = 0 and, per connected component, stab all boxes
/// with horizontal segments through the axis, then connect the lower
/// terminal of every pair upward to the component's top and the upper
/// terminal downward to its bottom with two arborescences. A pair's
/// M-path runs up from its lower terminal, along the stabbing segment
/// of its box, and on up to the higher terminal.
pub fn solve_x_separated_improved(
    inst: &Instance,
    backend: SteinerBackend,
) -> Result<RectilinearNetwork> {
    solve_x_separated_improved_with_stats(inst, backend).map(|(net, _)| net)
}

pub fn solve_x_separated_improved_with_stats(
    inst: &Instance,
    backend: SteinerBackend,
) -> Result<(RectilinearNetwork, Improved2dStats)> {
    if inst.dim != 2 {
        return Err(GmmnError::InvalidConfig(
            "the improved algorithm needs dimension 2".into(),
        ));
    }
    if inst.separation_level() < 1 {
        return Err(GmmnError::InvalidConfig(
            "the improved algorithm needs an x-separator".into(),
        ));
    }
    let s1 = inst.separators[0].clone();
    let shift = Transform::translation(Point::new(vec![-&s1, Rational::zero()]));
    let back = Transform::translation(Point::new(vec![s1, Rational::zero()]));
    let mut moved = shift.apply_instance(inst);
    moved.separators = vec![Rational::zero()];
    moved.check_separation()?;

    let mut net = RectilinearNetwork::new();
    let mut stats = Improved2dStats::default();
    for (comp, (y_lo, y_hi)) in connected_components_on_axis(&moved) {
        let stab = stab_both(&comp.boxes())?;
        let stab_cost = stab.cost();
        net.extend(&stab.network());

        // lower terminal of each pair goes up, the other goes down;
        // ties keep the stored order
        let mut low = Vec::new();
        let mut high = Vec::new();
        for p in &comp.pairs {
            if p.a.coords[1] <= p.b.coords[1] {
                low.push(p.a.clone());
                high.push(p.b.clone());
            } else {
                low.push(p.b.clone());
                high.push(p.a.clone());
            }
        }
        let top = Point::new(vec![Rational::zero(), y_hi]);
        let bot = Point::new(vec![Rational::zero(), y_lo]);
        let mut run = |terminals: Vec<Point>, root: Point| -> Result<Option<RsaCall>> {
            if terminals.is_empty() {
                return Ok(None);
            }
            let a = rsa_shortcut(
                &RsaInstance {
                    terminals: terminals.clone(),
                    root: root.clone(),
                },
                backend,
            )?;
            let cost = a.length();
            net.extend(&a);
            Ok(Some(RsaCall {
                terminals,
                root,
                cost,
            }))
        };
        let up = run(low, top)?;
        let down = run(high, bot)?;
        stats.components.push(ComponentStats {
            stab_cost,
            up,
            down,
        });
    }
    Ok((back.apply_network(&net).canonicalize(), stats))
}

fn solve_level(inst: &Instance, level: usize, cfg: &SolverConfig) -> Result<RectilinearNetwork> {
    if inst.is_empty() {
        return Ok(RectilinearNetwork::new());
    }
    if level == inst.dim {
        return solve_d_separated(inst, cfg.backend);
    }
    let split = median_split(inst, level)?;
    let mid = if cfg.algorithm == Algorithm::Improved2d && level == 0 {
        solve_x_separated_improved(&split.mid, cfg.backend)?
    } else {
        solve_level(&split.mid, level + 1, cfg)?
    };
    let (l, r) = if cfg.parallel {
        let (l, r) = rayon::join(
            || solve_level(&split.left, level, cfg),
            || solve_level(&split.right, level, cfg),
        );
        (l?, r?)
    } else {
        (
            solve_level(&split.left, level, cfg)?,
            solve_level(&split.right, level, cfg)?,
        )
    };
    Ok(mid.union(l).union(r))
}

/// Entry point: recursive median separation over the axes, with the
/// configured handler for separated subinstances.
pub fn solve_gmmn(inst: &Instance, cfg: &SolverConfig) -> Result<RectilinearNetwork> {
    if inst.dim == 0 {
        return Err(GmmnError::EmptyInstance);
    }
    if cfg.algorithm == Algorithm::Improved2d && inst.dim != 2 {
        return Err(GmmnError::InvalidConfig(
            "the improved algorithm needs dimension 2".into(),
        ));
    }
    if inst.is_empty() {
        return Ok(RectilinearNetwork::new());
    }
    if inst.separation_level() != 0 {
        return Err(GmmnError::InvalidConfig(
            "solve_gmmn expects an unseparated instance".into(),
        ));
    }
    Ok(solve_level(inst, 0, cfg)?.canonicalize())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::rat;
    use crate::toolkit::{gen_random, gen_tight, mmn_from_points, GenRandomConfig};
    use crate::verifier::verify_instance;

    fn p2(x: i64, y: i64) -> Point {
        Point::from_ints(&[x, y])
    }

    #[test]
    fn median_split_examples() {
        let (inst, _) = Instance::new(2, vec![(p2(1, 0), p2(2, 1)), (p2(3, 0), p2(4, 1))]).unwrap();
        let s = median_split(&inst, 0).unwrap();
        assert_eq!(s.median, rat(2));
        assert!(s.left.is_empty());
        assert_eq!(s.mid.len(), 1);
        assert_eq!(s.right.len(), 1);
        assert_eq!(s.mid.separators, vec![rat(2)]);
        assert!(s.mid.check_separation().is_ok());

        let (single, _) = Instance::new(2, vec![(p2(0, 0), p2(5, 5))]).unwrap();
        let s = median_split(&single, 0).unwrap();
        assert!(s.left.is_empty() && s.right.is_empty());
        assert_eq!(s.mid.len(), 1);

        let (crossing, _) =
            Instance::new(2, vec![(p2(-1, 0), p2(1, 1)), (p2(-2, 2), p2(2, 3))]).unwrap();
        let s = median_split(&crossing, 0).unwrap();
        assert_eq!(s.median, rat(-1));
        assert_eq!(s.mid.len(), 2);

        assert!(median_split(&Instance::from_pairs(2, vec![]), 0).is_err());
    }

    #[test]
    fn d_separated_single_pair_is_optimal() {
        let (inst, _) = Instance::new(2, vec![(p2(-1, -2), p2(3, 1))]).unwrap();
        let mut inst = inst;
        inst.separators = vec![rat(0), rat(0)];
        let net = solve_d_separated(&inst, SteinerBackend::MstRectilinear).unwrap();
        assert_eq!(net.length(), rat(7));
        assert!(verify_instance(&net, &inst).feasible());
    }

    #[test]
    fn d_separated_rejects_bad_precondition() {
        let (inst, _) = Instance::new(2, vec![(p2(1, 1), p2(2, 2))]).unwrap();
        let mut inst = inst;
        inst.separators = vec![rat(0), rat(0)];
        assert!(solve_d_separated(&inst, SteinerBackend::MstRectilinear).is_err());
        inst.separators = vec![rat(1)];
        assert!(matches!(
            solve_d_separated(&inst, SteinerBackend::MstRectilinear),
            Err(GmmnError::InvalidConfig(_))
        ));
    }

    #[test]
    fn components_by_interval_merge() {
        let (inst, _) = Instance::new(
            2,
            vec![
                (p2(-1, 0), p2(1, 1)),
                (p2(-1, 2), p2(1, 3)),
                (p2(-2, 1), p2(2, 2)),
                (p2(-1, 10), p2(1, 11)),
            ],
        )
        .unwrap();
        let comps = connected_components_on_axis(&inst);
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].0.len(), 3);
        assert_eq!(comps[0].1, (rat(0), rat(3)));
        assert_eq!(comps[1].1, (rat(10), rat(11)));
    }

    #[test]
    fn improved_single_pair() {
        let (inst, _) = Instance::new(2, vec![(p2(-1, 0), p2(1, 2))]).unwrap();
        let mut inst = inst;
        inst.separators = vec![rat(0)];
        let net = solve_x_separated_improved(&inst, SteinerBackend::MstRectilinear).unwrap();
        assert!(verify_instance(&net, &inst).feasible());
    }

    #[test]
    fn improved_horizontal_tie_pair() {
        let (inst, _) = Instance::new(2, vec![(p2(-2, 1), p2(3, 1))]).unwrap();
        let mut inst = inst;
        inst.separators = vec![rat(0)];
        let net = solve_x_separated_improved(&inst, SteinerBackend::MstRectilinear).unwrap();
        assert!(verify_instance(&net, &inst).feasible());
    }

    #[test]
    fn improved_requires_2d_and_separator() {
        let (inst3, _) = Instance::new(
            3,
            vec![(Point::from_ints(&[-1, 0, 0]), Point::from_ints(&[1, 1, 1]))],
        )
        .unwrap();
        let mut inst3 = inst3;
        inst3.separators = vec![rat(0)];
        assert!(solve_x_separated_improved(&inst3, SteinerBackend::MstRectilinear).is_err());
        let (flat, _) = Instance::new(2, vec![(p2(-1, 0), p2(1, 1))]).unwrap();
        assert!(solve_x_separated_improved(&flat, SteinerBackend::MstRectilinear).is_err());
    }

    #[test]
    fn solve_single_pair_is_staircase() {
        let (inst, _) = Instance::new(2, vec![(p2(0, 0), p2(3, 2))]).unwrap();
        let net = solve_gmmn(&inst, &SolverConfig::default()).unwrap();
        assert_eq!(net.length(), rat(5));
        assert!(verify_instance(&net, &inst).feasible());
    }

    #[test]
    fn solve_mmn_four_points() {
        let inst = mmn_from_points(2, &[p2(0, 0), p2(3, 1), p2(1, 4), p2(4, 4)]).unwrap();
        for algo in [Algorithm::RecursiveD, Algorithm::Improved2d] {
            let cfg = SolverConfig {
                algorithm: algo,
                ..SolverConfig::default()
            };
            let net = solve_gmmn(&inst, &cfg).unwrap();
            assert!(verify_instance(&net, &inst).feasible());
            let max_dist = inst.pairs.iter().map(|p| p.distance()).max().unwrap();
            assert!(net.length() >= max_dist);
        }
    }

    #[test]
    fn solve_random_instances_feasible() {
        for dim in [2usize, 3] {
            for seed in 0..5u64 {
                let inst = gen_random(&GenRandomConfig {
                    dim,
                    n_pairs: 12,
                    lo: -8,
                    hi: 8,
                    seed,
                })
                .unwrap();
                let net = solve_gmmn(&inst, &SolverConfig::default()).unwrap();
                assert!(
                    verify_instance(&net, &inst).feasible(),
                    "dim {} seed {}",
                    dim,
                    seed
                );
                if dim == 2 {
                    let cfg = SolverConfig {
                        algorithm: Algorithm::Improved2d,
                        ..SolverConfig::default()
                    };
                    let net = solve_gmmn(&inst, &cfg).unwrap();
                    assert!(verify_instance(&net, &inst).feasible());
                }
            }
        }
    }

    #[test]
    fn solve_parallel_matches_sequential() {
        let inst = gen_random(&GenRandomConfig {
            dim: 2,
            n_pairs: 20,
            lo: -10,
            hi: 10,
            seed: 7,
        })
        .unwrap();
        let seq = solve_gmmn(&inst, &SolverConfig::default()).unwrap();
        let par = solve_gmmn(
            &inst,
            &SolverConfig {
                parallel: true,
                ..SolverConfig::default()
            },
        )
        .unwrap();
        assert_eq!(seq.segments, par.segments);
    }

    #[test]
    fn tight_family_recursion_levels_pay() {
        use crate::geom::ratio;
        let fam = gen_tight(3, &ratio(1, 16)).unwrap();
        let cfg = SolverConfig {
            algorithm: Algorithm::Improved2d,
            ..SolverConfig::default()
        };
        let net = solve_gmmn(&fam.instance, &cfg).unwrap();
        assert!(verify_instance(&net, &fam.instance).feasible());
        assert!(net.length() >= rat(2));
    }

    #[test]
    fn improved_rejects_other_dimensions() {
        let (inst, _) = Instance::new(
            3,
            vec![(Point::from_ints(&[0, 0, 0]), Point::from_ints(&[1, 1, 1]))],
        )
        .unwrap();
        let cfg = SolverConfig {
            algorithm: Algorithm::Improved2d,
            ..SolverConfig::default()
        };
        assert!(matches!(
            solve_gmmn(&inst, &cfg),
            Err(GmmnError::InvalidConfig(_))
        ));
    }
}
