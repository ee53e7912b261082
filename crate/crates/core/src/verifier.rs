//! Manhattan-path feasibility checks over the arrangement graph of a
//! rectilinear network.
//!
//! A pair (t, t') is M-connected iff the arrangement graph contains a
//! walk from t to t' in which every edge moves toward t' in its axis
//! without overshooting. Turns can only happen where two segments meet,
//! and those meeting points are vertices of the arrangement, so the
//! graph search is exact.

use std::collections::{HashMap, VecDeque};

use num_traits::Signed;

use crate::geom::{Instance, Point, Rational, RectilinearNetwork, TerminalPair};

/// Arrangement of a canonical network: segment endpoints, pairwise
/// intersection points and registered query points, with the
/// sub-segments between consecutive vertices as edges.
pub struct ArrangementGraph {
    pub verts: Vec<Point>,
    index: HashMap<Point, usize>,
    /// adjacency: (neighbor, axis of the connecting sub-segment)
    adj: Vec<Vec<(usize, usize)>>,
}

impl ArrangementGraph {
    pub fn build(net: &RectilinearNetwork, extra: &[Point]) -> ArrangementGraph {
        let net = net.canonicalize();
        let d = net
            .segments
            .first()
            .map(|s| s.dim())
            .or_else(|| extra.first().map(|p| p.dim()))
            .unwrap_or(0);

        // Points lying on each segment, starting with its endpoints.
        let mut on_seg: Vec<Vec<Point>> = net
            .segments
            .iter()
            .map(|s| vec![s.a.clone(), s.b.clone()])
            .collect();

        // Crossings between segments of different axes. Two such
        // segments can only meet if they agree on every coordinate
        // outside their two axes, so bucket by those coordinates.
        for ai in 0..d {
            for aj in ai + 1..d {
                let mut buckets: HashMap<Vec<Rational>, (Vec<usize>, Vec<usize>)> = HashMap::new();
                for (si, s) in net.segments.iter().enumerate() {
                    if s.axis != ai && s.axis != aj {
                        continue;
                    }
                    let key: Vec<Rational> = s
                        .a
                        .coords
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| *i != ai && *i != aj)
                        .map(|(_, c)| c.clone())
                        .collect();
                    let e = buckets.entry(key).or_default();
                    if s.axis == ai {
                        e.0.push(si);
                    } else {
                        e.1.push(si);
                    }
                }
                for (_, (ii, jj)) in buckets {
                    for &si in &ii {
                        for &sj in &jj {
                            let s = &net.segments[si];
                            let t = &net.segments[sj];
                            // s varies along ai, t along aj.
                            let s_fixed_aj = &s.a.coords[aj];
                            let t_fixed_ai = &t.a.coords[ai];
                            if *s_fixed_aj >= t.a.coords[aj]
                                && *s_fixed_aj <= t.b.coords[aj]
                                && *t_fixed_ai >= s.a.coords[ai]
                                && *t_fixed_ai <= s.b.coords[ai]
                            {
                                let mut coords = s.a.coords.clone();
                                coords[ai] = t_fixed_ai.clone();
                                let p = Point::new(coords);
                                on_seg[si].push(p.clone());
                                on_seg[sj].push(p);
                            }
                        }
                    }
                }
            }
        }

        // Registered query points that lie in a segment's interior.
        for p in extra {
            for (si, s) in net.segments.iter().enumerate() {
                if s.contains_point(p) {
                    on_seg[si].push(p.clone());
                }
            }
        }

        let mut verts: Vec<Point> = Vec::new();
        let mut index: HashMap<Point, usize> = HashMap::new();
        let mut adj: Vec<Vec<(usize, usize)>> = Vec::new();
        let intern = |p: Point, verts: &mut Vec<Point>, adj: &mut Vec<Vec<(usize, usize)>>,
                          index: &mut HashMap<Point, usize>| {
            *index.entry(p.clone()).or_insert_with(|| {
                verts.push(p);
                adj.push(Vec::new());
                verts.len() - 1
            })
        };

        for (si, pts) in on_seg.iter_mut().enumerate() {
            let axis = net.segments[si].axis;
            pts.sort_by(|p, q| p.coords[axis].cmp(&q.coords[axis]));
            pts.dedup();
            for w in pts.windows(2) {
                let u = intern(w[0].clone(), &mut verts, &mut adj, &mut index);
                let v = intern(w[1].clone(), &mut verts, &mut adj, &mut index);
                adj[u].push((v, axis));
                adj[v].push((u, axis));
            }
            if pts.len() == 1 {
                intern(pts[0].clone(), &mut verts, &mut adj, &mut index);
            }
        }

        ArrangementGraph { verts, index, adj }
    }

    pub fn vertex(&self, p: &Point) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Monotone BFS: from `from`, following only edges whose full
    /// traversal moves toward `to` in the edge's axis without
    /// overshooting, i.e. each edge shrinks the Manhattan distance to
    /// `to` by exactly its length.
    pub fn monotone_reachable(&self, from: &Point, to: &Point) -> bool {
        let (s, t) = match (self.vertex(from), self.vertex(to)) {
            (Some(s), Some(t)) => (s, t),
            _ => return false,
        };
        if s == t {
            return true;
        }
        let mut seen = vec![false; self.verts.len()];
        let mut queue = VecDeque::new();
        seen[s] = true;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for &(v, axis) in &self.adj[u] {
                if seen[v] {
                    continue;
                }
                let cu = &self.verts[u].coords[axis];
                let cv = &self.verts[v].coords[axis];
                let ct = &to.coords[axis];
                // toward the target, not past it
                let ok = (ct - cv).abs() + (cv - cu).abs() == (ct - cu).abs();
                if !ok {
                    continue;
                }
                if v == t {
                    return true;
                }
                seen[v] = true;
                queue.push_back(v);
            }
        }
        false
    }
}

/// Why a terminal pair is not M-connected.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ViolationKind {
    TerminalOffNetwork,
    NoMonotonePath,
}

#[derive(Clone, Debug, Default)]
pub struct FeasibilityReport {
    pub violations: Vec<(TerminalPair, ViolationKind)>,
}

impl FeasibilityReport {
    pub fn feasible(&self) -> bool {
        self.violations.is_empty()
    }
}

fn on_network(net: &RectilinearNetwork, p: &Point) -> bool {
    net.segments.iter().any(|s| s.contains_point(p))
}

/// True iff the network M-connects the pair. Terminals that are not on
/// the network yield false.
pub fn has_m_path(net: &RectilinearNetwork, pair: (&Point, &Point)) -> bool {
    let net = net.canonicalize();
    if !on_network(&net, pair.0) || !on_network(&net, pair.1) {
        return false;
    }
    let graph = ArrangementGraph::build(&net, &[pair.0.clone(), pair.1.clone()]);
    graph.monotone_reachable(pair.0, pair.1)
}

/// Checks every pair of the instance against the network, sharing one
/// arrangement graph across all pair queries.
pub fn verify_instance(net: &RectilinearNetwork, inst: &Instance) -> FeasibilityReport {
    let net = net.canonicalize();
    let terminals = inst.terminals();
    let graph = ArrangementGraph::build(&net, &terminals);
    let mut report = FeasibilityReport::default();
    for pair in &inst.pairs {
        let a_on = on_network(&net, &pair.a);
        let b_on = on_network(&net, &pair.b);
        if !a_on || !b_on {
            report
                .violations
                .push((pair.clone(), ViolationKind::TerminalOffNetwork));
            continue;
        }
        if !graph.monotone_reachable(&pair.a, &pair.b) {
            report
                .violations
                .push((pair.clone(), ViolationKind::NoMonotonePath));
        }
    }
    report
}
