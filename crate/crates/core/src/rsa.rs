//! Rectilinear Steiner arborescence approximation in d dimensions:
//! Helly min-points, canonical M-paths, Steiner-tree backends and the
//! Euler-tour shortcutting recursion, plus an exact oracle for tiny
//! instances.

use std::collections::{BinaryHeap, HashMap, HashSet};
use std::cmp::Reverse;

use num_traits::{Signed, Zero};

use crate::error::{GmmnError, Result};
use crate::geom::{manhattan_distance, Point, Rational, RectilinearNetwork, Segment, Transform};
use crate::toolkit::HananGrid;

/// An RSA instance: connect every terminal to the root by an M-path.
#[derive(Clone, Debug)]
pub struct RsaInstance {
    pub terminals: Vec<Point>,
    pub root: Point,
}

/// How `steiner_tree` builds its spanning network.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SteinerBackend {
    /// L1 minimum spanning tree with each edge embedded as a staircase.
    MstRectilinear,
    /// Minimum rectilinear Steiner tree on the Hanan grid (small inputs).
    ExactSmall,
}

/// Componentwise median of (t, t', o). By the Helly property of
/// axis-parallel boxes the result lies in all three bounding boxes
/// B(o,t), B(o,t') and B(t,t').
pub fn helly_min_point(t: &Point, u: &Point, o: &Point) -> Point {
    debug_assert!(t.dim() == u.dim() && u.dim() == o.dim());
    let coords = (0..t.dim())
        .map(|i| {
            let mut v = [&t.coords[i], &u.coords[i], &o.coords[i]];
            v.sort();
            v[1].clone()
        })
        .collect();
    Point::new(coords)
}

/// Staircase from `a` to `b`, visiting axes in fixed order; when `via`
/// is given the staircase passes through it (a -> via -> b).
pub fn canonical_m_path(a: &Point, b: &Point, via: Option<&Point>) -> Result<RectilinearNetwork> {
    let mut net = RectilinearNetwork::new();
    match via {
        Some(v) => {
            for i in 0..a.dim() {
                let lo = a.coords[i].clone().min(b.coords[i].clone());
                let hi = a.coords[i].clone().max(b.coords[i].clone());
                if v.coords[i] < lo || v.coords[i] > hi {
                    return Err(GmmnError::ViaOutsideBox);
                }
            }
            staircase(a, v, &mut net);
            staircase(v, b, &mut net);
        }
        None => staircase(a, b, &mut net),
    }
    Ok(net)
}

fn staircase(a: &Point, b: &Point, out: &mut RectilinearNetwork) {
    let mut cur = a.clone();
    for axis in 0..a.dim() {
        if cur.coords[axis] != b.coords[axis] {
            let mut next = cur.clone();
            next.coords[axis] = b.coords[axis].clone();
            out.push(Segment::new(cur, next.clone(), axis));
            cur = next;
        }
    }
}

fn as_i64_coords(points: &[Point]) -> Option<Vec<Vec<i64>>> {
    use num_traits::ToPrimitive;
    points
        .iter()
        .map(|p| {
            p.coords
                .iter()
                .map(|c| {
                    if c.is_integer() {
                        c.numer().to_i64()
                    } else {
                        None
                    }
                })
                .collect()
        })
        .collect()
}

/// Prim MST over L1 distances; returns parent links (parent[0] = 0).
fn l1_mst(points: &[Point]) -> Vec<usize> {
    let n = points.len();
    let mut parent = vec![0usize; n];
    if n <= 1 {
        return parent;
    }
    if let Some(ints) = as_i64_coords(points) {
        let mut key = vec![i128::MAX; n];
        let mut from = vec![0usize; n];
        let mut done = vec![false; n];
        key[0] = 0;
        for _ in 0..n {
            let mut u = usize::MAX;
            for v in 0..n {
                if !done[v] && (u == usize::MAX || key[v] < key[u]) {
                    u = v;
                }
            }
            done[u] = true;
            parent[u] = from[u];
            for v in 0..n {
                if !done[v] {
                    let d: i128 = ints[u]
                        .iter()
                        .zip(&ints[v])
                        .map(|(&a, &b)| (a as i128 - b as i128).abs())
                        .sum();
                    if d < key[v] {
                        key[v] = d;
                        from[v] = u;
                    }
                }
            }
        }
    } else {
        let mut key: Vec<Option<Rational>> = vec![None; n];
        let mut from = vec![0usize; n];
        let mut done = vec![false; n];
        key[0] = Some(Rational::zero());
        for _ in 0..n {
            let mut u = usize::MAX;
            for v in 0..n {
                if !done[v] && key[v].is_some()
                    && (u == usize::MAX || key[v] < key[u]) {
                        u = v;
                    }
            }
            done[u] = true;
            parent[u] = from[u];
            for v in 0..n {
                if !done[v] {
                    let d = manhattan_distance(&points[u], &points[v]).expect("same dim");
                    if key[v].as_ref().is_none_or(|k| d < *k) {
                        key[v] = Some(d);
                        from[v] = u;
                    }
                }
            }
        }
    }
    parent
}

/// First-visit DFS order over an adjacency map, neighbors in
/// lexicographic point order.
fn dfs_first_visit(adj: &HashMap<Point, Vec<Point>>, root: &Point, keep: &HashSet<Point>) -> Vec<Point> {
    let mut order = Vec::new();
    let mut seen: HashSet<Point> = HashSet::new();
    let mut stack = vec![root.clone()];
    while let Some(p) = stack.pop() {
        if !seen.insert(p.clone()) {
            continue;
        }
        if keep.contains(&p) {
            order.push(p.clone());
        }
        if let Some(ns) = adj.get(&p) {
            let mut ns: Vec<Point> = ns.clone();
            ns.sort();
            // push reversed so the lexicographically smallest is visited first
            for n in ns.into_iter().rev() {
                if !seen.contains(&n) {
                    stack.push(n);
                }
            }
        }
    }
    order
}

/// Connected rectilinear network spanning `points` (first point is the
/// designated root for traversal purposes). Also returns the terminal
/// order of a depth-first Euler traversal of the underlying tree.
fn steiner_tree_internal(
    points: &[Point],
    backend: SteinerBackend,
) -> Result<(RectilinearNetwork, Vec<Point>)> {
    if points.is_empty() {
        return Err(GmmnError::EmptyInstance);
    }
    if points.len() == 1 {
        return Ok((RectilinearNetwork::new(), vec![points[0].clone()]));
    }
    match backend {
        SteinerBackend::MstRectilinear => {
            let parent = l1_mst(points);
            let mut net = RectilinearNetwork::new();
            let mut adj: HashMap<Point, Vec<Point>> = HashMap::new();
            for (i, &p) in parent.iter().enumerate() {
                if i == 0 {
                    continue;
                }
                net.extend(&canonical_m_path(&points[p], &points[i], None)?);
                adj.entry(points[p].clone()).or_default().push(points[i].clone());
                adj.entry(points[i].clone()).or_default().push(points[p].clone());
            }
            let keep: HashSet<Point> = points.iter().cloned().collect();
            let order = dfs_first_visit(&adj, &points[0], &keep);
            Ok((net, order))
        }
        SteinerBackend::ExactSmall => {
            let (net, edges, grid) = exact_steiner_tree(points)?;
            let mut adj: HashMap<Point, Vec<Point>> = HashMap::new();
            for &(u, v) in &edges {
                let (pu, pv) = (grid.point(u), grid.point(v));
                adj.entry(pu.clone()).or_default().push(pv.clone());
                adj.entry(pv).or_default().push(pu);
            }
            let keep: HashSet<Point> = points.iter().cloned().collect();
            let order = dfs_first_visit(&adj, &points[0], &keep);
            Ok((net, order))
        }
    }
}

/// Public Steiner-tree entry point.
pub fn steiner_tree(points: &[Point], backend: SteinerBackend) -> Result<RectilinearNetwork> {
    steiner_tree_internal(points, backend).map(|(n, _)| n)
}

const EXACT_STEINER_MAX_POINTS: usize = 9;
const EXACT_STEINER_MAX_GRID: usize = 9;

/// Minimum rectilinear Steiner tree of `points` on their Hanan grid,
/// by Dreyfus-Wagner over the grid graph. Returns the network and the
/// chosen grid edges.
/// Network, chosen grid edges, and the grid they index into.
type SteinerParts = (RectilinearNetwork, Vec<(usize, usize)>, HananGrid);

fn exact_steiner_tree(points: &[Point]) -> Result<SteinerParts> {
    if points.len() > EXACT_STEINER_MAX_POINTS {
        return Err(GmmnError::SizeCap(format!(
            "exact-small Steiner backend supports at most {} points, got {}",
            EXACT_STEINER_MAX_POINTS,
            points.len()
        )));
    }
    let grid = HananGrid::from_points(points.iter());
    if grid.max_axis_size() > EXACT_STEINER_MAX_GRID {
        return Err(GmmnError::SizeCap(format!(
            "exact-small Steiner backend supports Hanan grids up to {} per axis",
            EXACT_STEINER_MAX_GRID
        )));
    }
    let nv = grid.node_count();
    let terms: Vec<usize> = points
        .iter()
        .map(|p| grid.node_of(p).expect("terminal is a grid vertex"))
        .collect();
    let k = terms.len();
    debug_assert!(k >= 2);
    // Fold the last terminal into the query; DP over the first k-1.
    let kk = k - 1;
    let full = (1usize << kk) - 1;

    #[derive(Clone, Copy)]
    enum Choice {
        None,
        Base,
        Split(usize),
        Move(usize),
    }
    let mut f: Vec<Vec<Option<Rational>>> = vec![vec![None; nv]; full + 1];
    let mut choice: Vec<Vec<Choice>> = vec![vec![Choice::None; nv]; full + 1];

    for mask in 1..=full {
        // seed: singleton base cases and submask merges
        if mask.count_ones() == 1 {
            let i = mask.trailing_zeros() as usize;
            f[mask][terms[i]] = Some(Rational::zero());
            choice[mask][terms[i]] = Choice::Base;
        } else {
            let mut sub = (mask - 1) & mask;
            while sub > 0 {
                let other = mask ^ sub;
                if sub < other {
                    for v in 0..nv {
                        if let (Some(a), Some(b)) = (&f[sub][v], &f[other][v]) {
                            let c = a + b;
                            if f[mask][v].as_ref().is_none_or(|x| c < *x) {
                                f[mask][v] = Some(c);
                                choice[mask][v] = Choice::Split(sub);
                            }
                        }
                    }
                }
                sub = (sub - 1) & mask;
            }
        }
        // Dijkstra closure over grid edges
        let mut heap: BinaryHeap<Reverse<(Rational, usize)>> = BinaryHeap::new();
        for (v, c) in f[mask].iter().enumerate() {
            if let Some(c) = c {
                heap.push(Reverse((c.clone(), v)));
            }
        }
        while let Some(Reverse((c, v))) = heap.pop() {
            if f[mask][v].as_ref() != Some(&c) {
                continue;
            }
            for (u, _axis, w) in grid.neighbors(v) {
                let nc = &c + &w;
                if f[mask][u].as_ref().is_none_or(|x| nc < *x) {
                    f[mask][u] = Some(nc.clone());
                    choice[mask][u] = Choice::Move(v);
                    heap.push(Reverse((nc, u)));
                }
            }
        }
    }

    let root = terms[kk];
    let mut edges: HashSet<(usize, usize)> = HashSet::new();
    let mut stack = vec![(full, root)];
    while let Some((mask, v)) = stack.pop() {
        match choice[mask][v] {
            Choice::None | Choice::Base => {}
            Choice::Split(sub) => {
                stack.push((sub, v));
                stack.push((mask ^ sub, v));
            }
            Choice::Move(u) => {
                edges.insert((v.min(u), v.max(u)));
                stack.push((mask, u));
            }
        }
    }
    let mut edge_list: Vec<(usize, usize)> = edges.into_iter().collect();
    edge_list.sort();
    let mut net = RectilinearNetwork::new();
    for &(u, v) in &edge_list {
        net.push(grid.edge_segment(u, v));
    }
    Ok((net.canonicalize(), edge_list, grid))
}

/// Statistics of one `rsa_shortcut` run, used by the bound checks.
#[derive(Clone, Debug)]
pub struct RsaStats {
    /// number of shortcutting iterations
    pub depth: usize,
    pub steiner_length: Rational,
    pub output_length: Rational,
    /// number of distinct points in T plus the root
    pub n0: usize,
}

pub fn ceil_log2(n: usize) -> usize {
    let mut k = 0usize;
    while (1usize << k) < n {
        k += 1;
    }
    k
}

/// Euler-tour shortcutting (doubled Steiner tree, shortcut cycle, keep
/// the lighter half, recurse on the min-points). The returned network
/// M-connects every terminal to the root; its length is asserted to be
/// at most ceil(log2 n) times the Steiner tree length.
pub fn rsa_shortcut(inst: &RsaInstance, backend: SteinerBackend) -> Result<RectilinearNetwork> {
    rsa_shortcut_with_stats(inst, backend).map(|(n, _)| n)
}

pub fn rsa_shortcut_with_stats(
    inst: &RsaInstance,
    backend: SteinerBackend,
) -> Result<(RectilinearNetwork, RsaStats)> {
    let d = inst.root.dim();
    for t in &inst.terminals {
        if t.dim() != d {
            return Err(GmmnError::DimensionMismatch(t.dim(), d));
        }
    }
    // Work with the root at the origin.
    let shift = Transform::translation(Point::new(
        inst.root.coords.iter().map(|c| -c).collect(),
    ));
    let o = Point::origin(d);
    let mut pts: Vec<Point> = vec![o.clone()];
    let mut seen: HashSet<Point> = pts.iter().cloned().collect();
    for t in &inst.terminals {
        let t = shift.apply_point(t);
        if seen.insert(t.clone()) {
            pts.push(t);
        }
    }
    let n0 = pts.len();
    if n0 == 1 {
        return Ok((
            RectilinearNetwork::new(),
            RsaStats {
                depth: 0,
                steiner_length: Rational::zero(),
                output_length: Rational::zero(),
                n0,
            },
        ));
    }

    let (tree, order) = steiner_tree_internal(&pts, backend)?;
    let b_len = tree.length();
    debug_assert_eq!(order.len(), pts.len());
    debug_assert_eq!(order[0], o);

    let mut acc = RectilinearNetwork::new();
    let mut cyc = order;
    let mut depth = 0usize;
    while cyc.len() > 1 {
        let k = cyc.len();
        let mut halves = [RectilinearNetwork::new(), RectilinearNetwork::new()];
        let mut mins = [Vec::new(), Vec::new()];
        for i in 0..k {
            let a = &cyc[i];
            let b = &cyc[(i + 1) % k];
            let m = helly_min_point(a, b, &o);
            let path = canonical_m_path(a, b, Some(&m))?;
            halves[i % 2].extend(&path);
            mins[i % 2].push(m);
        }
        let len0 = halves[0].length();
        let len1 = halves[1].length();
        let kept = if len0 <= len1 { 0 } else { 1 };
        let kept_len = if kept == 0 { len0 } else { len1 };
        // per-level bound from the halving argument
        assert!(
            kept_len <= b_len,
            "kept half exceeds Steiner tree length: {} > {}",
            kept_len,
            b_len
        );
        acc.extend(&halves[kept]);
        cyc = std::mem::take(&mut mins[kept]);
        // With an odd cycle both root-adjacent edges fall in the even
        // half; the recursion set is min-points plus the root.
        match cyc.iter().position(|p| *p == o) {
            Some(i) => cyc.rotate_left(i),
            None => cyc.insert(0, o.clone()),
        }
        // The point at position 0 of an odd cycle is adjacent to two
        // even edges and would dangle in the odd half; rotating o to
        // the front makes that point the root, which needs no path.
        cyc.dedup();
        if cyc.len() > 1 && cyc.first() == cyc.last() {
            cyc.pop();
        }
        depth += 1;
    }
    assert_eq!(cyc.first(), Some(&o));
    assert!(depth <= ceil_log2(n0), "recursion depth bound violated");

    let out = acc.canonicalize();
    let out_len = out.length();
    let bound = Rational::from_integer(num_bigint::BigInt::from(ceil_log2(n0) as i64)) * &b_len;
    assert!(
        out_len <= bound,
        "shortcutting bound violated: {} > {}",
        out_len,
        bound
    );

    let back = Transform::translation(inst.root.clone());
    Ok((
        back.apply_network(&out).canonicalize(),
        RsaStats {
            depth,
            steiner_length: b_len,
            output_length: out_len,
            n0,
        },
    ))
}

const EXACT_RSA_MAX_TERMINALS: usize = 5;
const EXACT_RSA_MAX_GRID: usize = 7;

/// Minimum-length network on the Hanan grid of T + root that
/// M-connects every terminal to the root. Exact, for oracle use only.
///
/// On the Hanan grid every M-path toward the root follows grid edges
/// directed toward the root, so this is a minimum directed Steiner
/// arborescence on an acyclic grid graph, solved by Dreyfus-Wagner.
pub fn exact_rsa(inst: &RsaInstance) -> Result<RectilinearNetwork> {
    let d = inst.root.dim();
    let shift = Transform::translation(Point::new(
        inst.root.coords.iter().map(|c| -c).collect(),
    ));
    let o = Point::origin(d);
    let mut terms: Vec<Point> = Vec::new();
    let mut seen: HashSet<Point> = HashSet::new();
    seen.insert(o.clone());
    for t in &inst.terminals {
        if t.dim() != d {
            return Err(GmmnError::DimensionMismatch(t.dim(), d));
        }
        let t = shift.apply_point(t);
        if seen.insert(t.clone()) {
            terms.push(t);
        }
    }
    if terms.is_empty() {
        return Ok(RectilinearNetwork::new());
    }
    if terms.len() > EXACT_RSA_MAX_TERMINALS {
        return Err(GmmnError::SizeCap(format!(
            "exact_rsa supports at most {} terminals, got {}",
            EXACT_RSA_MAX_TERMINALS,
            terms.len()
        )));
    }
    let mut all = terms.clone();
    all.push(o.clone());
    let grid = HananGrid::from_points(all.iter());
    if grid.max_axis_size() > EXACT_RSA_MAX_GRID {
        return Err(GmmnError::SizeCap(format!(
            "exact_rsa supports Hanan grids up to {} per axis",
            EXACT_RSA_MAX_GRID
        )));
    }
    let nv = grid.node_count();
    let root_node = grid.node_of(&o).expect("origin on grid");
    let term_nodes: Vec<usize> = terms
        .iter()
        .map(|t| grid.node_of(t).expect("terminal on grid"))
        .collect();
    let k = term_nodes.len();
    let full = (1usize << k) - 1;

    // Topological order: decreasing L1 norm; every toward-root edge
    // strictly decreases the norm.
    let mut topo: Vec<usize> = (0..nv).collect();
    let norms: Vec<Rational> = (0..nv)
        .map(|v| {
            grid.point(v)
                .coords
                .iter()
                .map(|c| c.abs())
                .fold(Rational::zero(), |a, b| a + b)
        })
        .collect();
    topo.sort_by(|a, b| norms[*b].cmp(&norms[*a]).then(a.cmp(b)));

    #[derive(Clone, Copy)]
    enum Choice {
        None,
        Base,
        Split(usize),
        Move(usize),
    }
    let mut g: Vec<Vec<Option<Rational>>> = vec![vec![None; nv]; full + 1];
    let mut choice: Vec<Vec<Choice>> = vec![vec![Choice::None; nv]; full + 1];
    for mask in 1..=full {
        if mask.count_ones() == 1 {
            let i = mask.trailing_zeros() as usize;
            g[mask][term_nodes[i]] = Some(Rational::zero());
            choice[mask][term_nodes[i]] = Choice::Base;
        } else {
            let mut sub = (mask - 1) & mask;
            while sub > 0 {
                let other = mask ^ sub;
                if sub < other {
                    for v in 0..nv {
                        if let (Some(a), Some(b)) = (&g[sub][v], &g[other][v]) {
                            let c = a + b;
                            if g[mask][v].as_ref().is_none_or(|x| c < *x) {
                                g[mask][v] = Some(c);
                                choice[mask][v] = Choice::Split(sub);
                            }
                        }
                    }
                }
                sub = (sub - 1) & mask;
            }
        }
        // relax toward-root edges in topological order
        for &u in &topo {
            if let Some(cu) = g[mask][u].clone() {
                for (v, _axis, w) in grid.neighbors(u) {
                    if norms[v] < norms[u] {
                        let c = &cu + &w;
                        if g[mask][v].as_ref().is_none_or(|x| c < *x) {
                            g[mask][v] = Some(c);
                            choice[mask][v] = Choice::Move(u);
                        }
                    }
                }
            }
        }
    }

    let mut edges: HashSet<(usize, usize)> = HashSet::new();
    let mut stack = vec![(full, root_node)];
    while let Some((mask, v)) = stack.pop() {
        match choice[mask][v] {
            Choice::None | Choice::Base => {}
            Choice::Split(sub) => {
                stack.push((sub, v));
                stack.push((mask ^ sub, v));
            }
            Choice::Move(u) => {
                edges.insert((v.min(u), v.max(u)));
                stack.push((mask, u));
            }
        }
    }
    let mut net = RectilinearNetwork::new();
    let mut edge_list: Vec<(usize, usize)> = edges.into_iter().collect();
    edge_list.sort();
    for &(u, v) in &edge_list {
        net.push(grid.edge_segment(u, v));
    }
    let back = Transform::translation(inst.root.clone());
    Ok(back.apply_network(&net).canonicalize())
}
