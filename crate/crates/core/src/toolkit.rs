//! Supporting machinery: Hanan grids, small exact oracles, instance
//! generators and ratio reporting.

use std::collections::HashMap;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{GmmnError, Result};
use crate::geom::{
    decimal_approx, rat, ratio, Instance, Point, Rational, RectilinearNetwork, Segment, Transform,
};
use crate::rsa::canonical_m_path;

/// Hanan grid of a point set: the grid graph over all combinations of
/// coordinates occurring in the set, one sorted coordinate list per
/// axis. Node ids are mixed-radix over the per-axis indices.
pub struct HananGrid {
    coords: Vec<Vec<Rational>>,
    strides: Vec<usize>,
    count: usize,
}

impl HananGrid {
    pub fn from_points<'a>(points: impl Iterator<Item = &'a Point>) -> HananGrid {
        let mut coords: Vec<Vec<Rational>> = Vec::new();
        for p in points {
            if coords.is_empty() {
                coords = vec![Vec::new(); p.dim()];
            }
            for (i, c) in p.coords.iter().enumerate() {
                coords[i].push(c.clone());
            }
        }
        for axis in coords.iter_mut() {
            axis.sort();
            axis.dedup();
        }
        let mut strides = vec![0usize; coords.len()];
        let mut count = if coords.is_empty() { 0 } else { 1 };
        for i in (0..coords.len()).rev() {
            strides[i] = count;
            count *= coords[i].len();
        }
        HananGrid {
            coords,
            strides,
            count,
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn node_count(&self) -> usize {
        self.count
    }

    pub fn max_axis_size(&self) -> usize {
        self.coords.iter().map(|c| c.len()).max().unwrap_or(0)
    }

    fn indices(&self, id: usize) -> Vec<usize> {
        let mut rest = id;
        (0..self.dim())
            .map(|i| {
                let ix = rest / self.strides[i];
                rest %= self.strides[i];
                ix
            })
            .collect()
    }

    pub fn point(&self, id: usize) -> Point {
        let ix = self.indices(id);
        Point::new(
            ix.iter()
                .enumerate()
                .map(|(axis, &i)| self.coords[axis][i].clone())
                .collect(),
        )
    }

    /// Node id of a point, if it is a grid vertex.
    pub fn node_of(&self, p: &Point) -> Option<usize> {
        if p.dim() != self.dim() {
            return None;
        }
        let mut id = 0;
        for (axis, c) in p.coords.iter().enumerate() {
            let i = self.coords[axis].binary_search(c).ok()?;
            id += i * self.strides[axis];
        }
        Some(id)
    }

    /// Grid neighbors of a node as (neighbor, axis, edge length).
    pub fn neighbors(&self, id: usize) -> Vec<(usize, usize, Rational)> {
        let ix = self.indices(id);
        let mut out = Vec::new();
        for (axis, &i) in ix.iter().enumerate() {
            if i > 0 {
                out.push((
                    id - self.strides[axis],
                    axis,
                    &self.coords[axis][i] - &self.coords[axis][i - 1],
                ));
            }
            if i + 1 < self.coords[axis].len() {
                out.push((
                    id + self.strides[axis],
                    axis,
                    &self.coords[axis][i + 1] - &self.coords[axis][i],
                ));
            }
        }
        out
    }

    /// Segment between two adjacent grid nodes.
    pub fn edge_segment(&self, u: usize, v: usize) -> Segment {
        let (pu, pv) = (self.point(u), self.point(v));
        let axis = (0..self.dim())
            .find(|&i| pu.coords[i] != pv.coords[i])
            .expect("distinct grid nodes");
        Segment::new(pu, pv, axis)
    }
}

const EXACT_GMMN_MAX_PAIRS: usize = 3;
const EXACT_GMMN_MAX_GRID: usize = 6;

#[derive(Clone, Debug)]
pub struct ExactGmmnResult {
    pub network: RectilinearNetwork,
    pub opt: Rational,
    /// summed length of the horizontal (axis-0) segments of the optimum
    pub opt_hor: Rational,
    /// summed length of the vertical (axis-1) segments of the optimum
    pub opt_ver: Rational,
}

/// Exact 2D optimum by exhausting, per pair, all monotone paths on the
/// Hanan grid of the terminals and branch-and-bounding over the choice
/// of one path per pair. The Hanan-grid restriction is lossless for
/// this problem.
pub fn exact_gmmn(inst: &Instance) -> Result<ExactGmmnResult> {
    if inst.dim != 2 {
        return Err(GmmnError::SizeCap(
            "exact_gmmn supports dimension 2 only".into(),
        ));
    }
    if inst.pairs.len() > EXACT_GMMN_MAX_PAIRS {
        return Err(GmmnError::SizeCap(format!(
            "exact_gmmn supports at most {} pairs",
            EXACT_GMMN_MAX_PAIRS
        )));
    }
    if inst.pairs.is_empty() {
        return Err(GmmnError::EmptyInstance);
    }
    let terminals = inst.terminals();
    let grid = HananGrid::from_points(terminals.iter());
    if grid.max_axis_size() > EXACT_GMMN_MAX_GRID {
        return Err(GmmnError::SizeCap(format!(
            "exact_gmmn supports Hanan grids up to {} per axis",
            EXACT_GMMN_MAX_GRID
        )));
    }

    // number all grid edges so path edge sets fit in a u128 mask
    let mut edge_id: HashMap<(usize, usize), usize> = HashMap::new();
    let mut edge_weight: Vec<Rational> = Vec::new();
    let mut edge_ends: Vec<(usize, usize)> = Vec::new();
    for u in 0..grid.node_count() {
        for (v, _axis, w) in grid.neighbors(u) {
            if u < v {
                edge_id.insert((u, v), edge_weight.len());
                edge_weight.push(w);
                edge_ends.push((u, v));
            }
        }
    }
    assert!(edge_weight.len() <= 128);

    // all monotone grid paths of a pair, as (length, edge mask)
    let mut per_pair: Vec<Vec<(Rational, u128)>> = Vec::new();
    for pair in &inst.pairs {
        let s = grid.node_of(&pair.a).expect("terminal on grid");
        let t = grid.node_of(&pair.b).expect("terminal on grid");
        let goal = grid.point(t);
        let mut paths: Vec<(Rational, u128)> = Vec::new();
        let mut stack: Vec<(usize, u128)> = vec![(s, 0)];
        while let Some((u, mask)) = stack.pop() {
            if u == t {
                let len = (0..edge_weight.len())
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| edge_weight[i].clone())
                    .sum();
                paths.push((len, mask));
                continue;
            }
            let pu = grid.point(u);
            for (v, axis, _w) in grid.neighbors(u) {
                let pv = grid.point(v);
                // step strictly toward the far terminal in this axis
                let toward = (&goal.coords[axis] - &pv.coords[axis]).abs()
                    < (&goal.coords[axis] - &pu.coords[axis]).abs();
                if toward {
                    let key = if u < v { (u, v) } else { (v, u) };
                    stack.push((v, mask | 1u128 << edge_id[&key]));
                }
            }
        }
        paths.sort();
        per_pair.push(paths);
    }
    // fewest-choices-first ordering tightens the search
    let mut order: Vec<usize> = (0..per_pair.len()).collect();
    order.sort_by_key(|&i| per_pair[i].len());

    fn mask_cost(mask: u128, weights: &[Rational]) -> Rational {
        (0..weights.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| weights[i].clone())
            .sum()
    }

    let mut best: Option<(Rational, u128)> = None;
    fn search(
        pos: usize,
        order: &[usize],
        per_pair: &[Vec<(Rational, u128)>],
        weights: &[Rational],
        union: u128,
        cost: Rational,
        best: &mut Option<(Rational, u128)>,
    ) {
        if let Some((bc, _)) = best {
            if cost >= *bc {
                return;
            }
        }
        if pos == order.len() {
            *best = Some((cost, union));
            return;
        }
        for (_, mask) in &per_pair[order[pos]] {
            let added = mask_cost(mask & !union, weights);
            search(
                pos + 1,
                order,
                per_pair,
                weights,
                union | mask,
                &cost + &added,
                best,
            );
        }
    }
    search(
        0,
        &order,
        &per_pair,
        &edge_weight,
        0,
        Rational::zero(),
        &mut best,
    );
    let (opt, union) = best.expect("every pair has at least one monotone path");

    let mut net = RectilinearNetwork::new();
    for (i, &(u, v)) in edge_ends.iter().enumerate() {
        if union >> i & 1 == 1 {
            net.push(grid.edge_segment(u, v));
        }
    }
    let net = net.canonicalize();
    let mut opt_hor = Rational::zero();
    let mut opt_ver = Rational::zero();
    for s in &net.segments {
        if s.axis == 0 {
            opt_hor += s.length();
        } else {
            opt_ver += s.length();
        }
    }
    debug_assert_eq!(&opt_hor + &opt_ver, opt);
    Ok(ExactGmmnResult {
        network: net,
        opt,
        opt_hor,
        opt_ver,
    })
}

/// A nested hard family plus a short feasible certificate network.
#[derive(Clone, Debug)]
pub struct TightFamily {
    pub instance: Instance,
    pub certificate: RectilinearNetwork,
    pub certificate_length: Rational,
}

/// Nested-squares family of depth `k`. The outermost pair spans the
/// square [-1/2,0]^2; inside it sit two scaled copies of the depth-k-1
/// family, one filling the square, one of scale `eps` protruding past
/// the top-right corner to (eps, eps). A single monotone staircase from
/// (-1/2,-1/2) to (eps,eps) through all nested corner terminals is
/// feasible, so the certificate has length exactly 1 + 2*eps, while
/// divide-and-conquer solvers pay for every nesting level separately.
pub fn gen_tight(k: usize, eps: &Rational) -> Result<TightFamily> {
    if !(eps > &Rational::zero() && eps < &ratio(1, 4)) {
        return Err(GmmnError::InvalidEpsilon);
    }
    if k == 0 {
        return Ok(TightFamily {
            instance: Instance::from_pairs(2, Vec::new()),
            certificate: RectilinearNetwork::new(),
            certificate_length: Rational::zero(),
        });
    }
    let half = ratio(-1, 2);
    let zero = Rational::zero();
    let lo = Point::new(vec![half.clone(), half.clone()]);
    let hi = Point::new(vec![zero.clone(), zero.clone()]);
    let tip = Point::new(vec![eps.clone(), eps.clone()]);

    // left copy: fixed point (-1/2,-1/2), protruding corner mapped to 0
    let s_left = Rational::one() / (Rational::one() + rat(2) * eps);
    let t_left = -(eps * &s_left);
    let left = Transform::new(vec![s_left.clone(); 2], vec![t_left.clone(); 2])?;
    // right copy: protruding corner is a fixed point at eps
    let s_right = eps.clone();
    let t_right = eps * &(Rational::one() - eps);
    let right = Transform::new(vec![s_right.clone(); 2], vec![t_right.clone(); 2])?;

    fn pairs(
        k: usize,
        lo: &Point,
        hi: &Point,
        left: &Transform,
        right: &Transform,
    ) -> Vec<(Point, Point)> {
        let mut out = vec![(lo.clone(), hi.clone())];
        if k > 1 {
            for sub in pairs(k - 1, lo, hi, left, right) {
                out.push((left.apply_point(&sub.0), left.apply_point(&sub.1)));
                out.push((right.apply_point(&sub.0), right.apply_point(&sub.1)));
            }
        }
        out
    }

    fn waypoints(
        k: usize,
        lo: &Point,
        hi: &Point,
        tip: &Point,
        left: &Transform,
        right: &Transform,
    ) -> Vec<Point> {
        if k == 1 {
            return vec![lo.clone(), hi.clone(), tip.clone()];
        }
        let sub = waypoints(k - 1, lo, hi, tip, left, right);
        let mut out = vec![lo.clone()];
        out.extend(sub.iter().map(|p| left.apply_point(p)));
        out.push(hi.clone());
        out.extend(sub.iter().map(|p| right.apply_point(p)));
        out.dedup();
        out
    }

    let (instance, _) = Instance::new(2, pairs(k, &lo, &hi, &left, &right))?;
    let wps = waypoints(k, &lo, &hi, &tip, &left, &right);
    let mut cert = RectilinearNetwork::new();
    for w in wps.windows(2) {
        debug_assert!((0..2).all(|i| w[0].coords[i] <= w[1].coords[i]));
        cert.extend(&canonical_m_path(&w[0], &w[1], None)?);
    }
    let cert = cert.canonicalize();
    let certificate_length = cert.length();
    debug_assert_eq!(certificate_length, Rational::one() + rat(2) * eps);
    Ok(TightFamily {
        instance,
        certificate: cert,
        certificate_length,
    })
}

/// Configuration for the uniform random generator.
#[derive(Clone, Debug)]
pub struct GenRandomConfig {
    pub dim: usize,
    pub n_pairs: usize,
    /// inclusive integer coordinate range
    pub lo: i64,
    pub hi: i64,
    pub seed: u64,
}

/// Uniform random pairs with integer coordinates; degenerate draws are
/// rejected and redrawn, so the instance has exactly `n_pairs` pairs
/// unless duplicates collapse.
pub fn gen_random(cfg: &GenRandomConfig) -> Result<Instance> {
    if cfg.dim < 2 {
        return Err(GmmnError::InvalidConfig(
            "gen_random needs dimension >= 2".into(),
        ));
    }
    if cfg.n_pairs == 0 {
        return Err(GmmnError::EmptyInstance);
    }
    if cfg.lo > cfg.hi {
        return Err(GmmnError::EmptyRange);
    }
    if cfg.lo == cfg.hi {
        // every draw is the same point; no nondegenerate pair exists
        return Err(GmmnError::EmptyInstance);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let draw = |rng: &mut ChaCha8Rng| {
        Point::new(
            (0..cfg.dim)
                .map(|_| rat(rng.gen_range(cfg.lo..=cfg.hi)))
                .collect(),
        )
    };
    let mut raw = Vec::with_capacity(cfg.n_pairs);
    while raw.len() < cfg.n_pairs {
        let a = draw(&mut rng);
        let b = draw(&mut rng);
        if a != b {
            raw.push((a, b));
        }
    }
    let (inst, _) = Instance::new(cfg.dim, raw)?;
    Ok(inst)
}

/// Classic all-pairs Manhattan-network instance over a point set.
pub fn mmn_from_points(dim: usize, points: &[Point]) -> Result<Instance> {
    let mut distinct = points.to_vec();
    distinct.sort();
    distinct.dedup();
    if distinct.len() < 2 {
        return Err(GmmnError::TooFewPoints);
    }
    let mut raw = Vec::new();
    for i in 0..distinct.len() {
        for j in i + 1..distinct.len() {
            raw.push((distinct[i].clone(), distinct[j].clone()));
        }
    }
    let (inst, _) = Instance::new(dim, raw)?;
    Ok(inst)
}

/// How the reference value of a ratio run is obtained.
#[derive(Clone, Debug)]
pub enum ReferenceKind {
    /// exact_gmmn (subject to its size caps)
    Oracle,
    /// a known feasible network length, e.g. a gen_tight certificate
    Certificate(Rational),
    /// max pair distance; valid since any feasible network contains an
    /// M-path per pair
    LowerBound,
}

/// Runs each labeled solver configuration on the instance, verifies
/// its output and compares costs against the chosen reference.
/// Infeasible output aborts: that is a bug, not a data point.
pub fn ratio_report(
    inst: &Instance,
    algorithms: &[(String, crate::solver::SolverConfig)],
    reference: &ReferenceKind,
) -> Result<RatioReport> {
    if inst.is_empty() {
        return Err(GmmnError::EmptyInstance);
    }
    let ref_value = match reference {
        ReferenceKind::Oracle => Reference::Oracle(exact_gmmn(inst)?.opt),
        ReferenceKind::Certificate(v) => Reference::Certificate(v.clone()),
        ReferenceKind::LowerBound => Reference::LowerBound(
            inst.pairs
                .iter()
                .map(|p| p.distance())
                .max()
                .expect("nonempty instance"),
        ),
    };
    let mut report = RatioReport::default();
    for (label, cfg) in algorithms {
        let net = crate::solver::solve_gmmn(inst, cfg)?;
        if !crate::verifier::verify_instance(&net, inst).feasible() {
            return Err(GmmnError::SelfCheckFailed);
        }
        report.push(label.clone(), net.length(), ref_value.clone());
    }
    Ok(report)
}

/// What a measured cost is compared against.
#[derive(Clone, Debug)]
pub enum Reference {
    /// exact optimum from an oracle
    Oracle(Rational),
    /// length of a known feasible network (an upper bound on opt)
    Certificate(Rational),
    /// any valid lower bound on opt
    LowerBound(Rational),
}

impl Reference {
    pub fn value(&self) -> &Rational {
        match self {
            Reference::Oracle(v) | Reference::Certificate(v) | Reference::LowerBound(v) => v,
        }
    }

    fn tag(&self) -> &'static str {
        match self {
            Reference::Oracle(_) => "oracle",
            Reference::Certificate(_) => "certificate",
            Reference::LowerBound(_) => "lower-bound",
        }
    }
}

#[derive(Clone, Debug)]
pub struct RatioRow {
    pub label: String,
    pub cost: Rational,
    pub reference: Reference,
}

impl RatioRow {
    pub fn ratio(&self) -> Rational {
        &self.cost / self.reference.value()
    }
}

#[derive(Clone, Debug, Default)]
pub struct RatioReport {
    pub rows: Vec<RatioRow>,
}

impl RatioReport {
    pub fn push(&mut self, label: impl Into<String>, cost: Rational, reference: Reference) {
        self.rows.push(RatioRow {
            label: label.into(),
            cost,
            reference,
        });
    }

    pub fn max_ratio(&self) -> Option<Rational> {
        self.rows.iter().map(|r| r.ratio()).max()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            out.push_str(&format!(
                "{}\tcost={}\t{}={}\tratio={}\n",
                r.label,
                decimal_approx(&r.cost, 12),
                r.reference.tag(),
                decimal_approx(r.reference.value(), 12),
                decimal_approx(&r.ratio(), 12),
            ));
        }
        if let Some(m) = self.max_ratio() {
            out.push_str(&format!("max-ratio={}\n", decimal_approx(&m, 12)));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verifier::verify_instance;

    fn p2(x: i64, y: i64) -> Point {
        Point::from_ints(&[x, y])
    }

    #[test]
    fn hanan_grid_basics() {
        let pts = vec![p2(0, 0), p2(2, 1), p2(2, 0)];
        let g = HananGrid::from_points(pts.iter());
        assert_eq!(g.dim(), 2);
        assert_eq!(g.node_count(), 4);
        assert_eq!(g.max_axis_size(), 2);
        for p in &pts {
            let id = g.node_of(p).unwrap();
            assert_eq!(&g.point(id), p);
        }
        assert!(g.node_of(&p2(1, 0)).is_none());
        let id = g.node_of(&p2(0, 0)).unwrap();
        let mut nb = g.neighbors(id);
        nb.sort_by_key(|(n, _, _)| *n);
        assert_eq!(nb.len(), 2);
        assert_eq!(nb[0].2, rat(1)); // to (0,1)
        assert_eq!(nb[1].2, rat(2)); // to (2,0)
        let seg = g.edge_segment(id, nb[1].0);
        assert_eq!(seg.length(), rat(2));
        assert_eq!(seg.axis, 0);
    }

    #[test]
    fn exact_gmmn_single_pair_is_distance() {
        let (inst, _) = Instance::new(2, vec![(p2(0, 0), p2(3, 2))]).unwrap();
        let r = exact_gmmn(&inst).unwrap();
        assert_eq!(r.opt, rat(5));
        assert_eq!(r.opt_hor, rat(3));
        assert_eq!(r.opt_ver, rat(2));
        assert!(verify_instance(&r.network, &inst).feasible());
    }

    #[test]
    fn exact_gmmn_shares_segments() {
        // Two crossing pairs on a unit square: opposite corners. The
        // optimum is 3 (three sides of the square-ish routing), not 4.
        let (inst, _) =
            Instance::new(2, vec![(p2(0, 0), p2(1, 1)), (p2(0, 1), p2(1, 0))]).unwrap();
        let r = exact_gmmn(&inst).unwrap();
        assert_eq!(r.opt, rat(3));
        assert!(verify_instance(&r.network, &inst).feasible());
    }

    #[test]
    fn exact_gmmn_caps() {
        let (big, _) = Instance::new(
            2,
            vec![
                (p2(0, 0), p2(1, 1)),
                (p2(2, 2), p2(3, 3)),
                (p2(4, 4), p2(5, 5)),
                (p2(6, 6), p2(7, 7)),
            ],
        )
        .unwrap();
        assert!(matches!(exact_gmmn(&big), Err(GmmnError::SizeCap(_))));
        let (d3, _) = Instance::new(
            3,
            vec![(Point::from_ints(&[0, 0, 0]), Point::from_ints(&[1, 1, 1]))],
        )
        .unwrap();
        assert!(exact_gmmn(&d3).is_err());
    }

    #[test]
    fn gen_tight_shape_and_certificate() {
        let eps = ratio(1, 16);
        for k in 1..=4usize {
            let fam = gen_tight(k, &eps).unwrap();
            assert_eq!(fam.instance.pairs.len(), (1 << k) - 1);
            assert_eq!(
                fam.certificate_length,
                Rational::one() + rat(2) * &eps
            );
            let report = verify_instance(&fam.certificate, &fam.instance);
            assert!(report.feasible(), "violations: {:?}", report.violations);
        }
        let empty = gen_tight(0, &eps).unwrap();
        assert!(empty.instance.is_empty());
        assert!(empty.certificate.segments.is_empty());
        assert!(gen_tight(2, &ratio(1, 4)).is_err());
        assert!(gen_tight(2, &rat(0)).is_err());
    }

    #[test]
    fn gen_random_is_deterministic_and_in_range() {
        let cfg = GenRandomConfig {
            dim: 3,
            n_pairs: 20,
            lo: -5,
            hi: 5,
            seed: 42,
        };
        let a = gen_random(&cfg).unwrap();
        let b = gen_random(&cfg).unwrap();
        assert_eq!(a.pairs, b.pairs);
        assert!(a.pairs.len() <= 20 && !a.pairs.is_empty());
        for t in a.terminals() {
            for c in &t.coords {
                assert!(*c >= rat(-5) && *c <= rat(5));
            }
        }
        let c = gen_random(&GenRandomConfig { seed: 43, ..cfg.clone() }).unwrap();
        assert_ne!(a.pairs, c.pairs);
        assert!(gen_random(&GenRandomConfig { lo: 2, hi: 2, ..cfg }).is_err());
    }

    #[test]
    fn mmn_from_points_all_pairs() {
        let inst = mmn_from_points(2, &[p2(0, 0), p2(1, 2), p2(3, 1), p2(0, 0)]).unwrap();
        assert_eq!(inst.pairs.len(), 3);
        assert!(mmn_from_points(2, &[p2(1, 1)]).is_err());
    }

    #[test]
    fn ratio_report_rendering() {
        let mut rep = RatioReport::default();
        rep.push("a", rat(3), Reference::Oracle(rat(2)));
        rep.push("b", rat(2), Reference::Certificate(rat(2)));
        assert_eq!(rep.max_ratio().unwrap(), ratio(3, 2));
        let text = rep.render();
        assert!(text.contains("ratio=1.5"));
        assert!(text.contains("max-ratio=1.5"));
    }
}
