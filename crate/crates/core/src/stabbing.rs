//! Sweep-line stabbing of axis-crossing rectangles: greedy minimum
//! piercing, bottom-to-top pruning, half-plane sweep traces and the
//! mirrored two-sided stabbing.
//!
//! All of this is 2D; the solver translates the separating line to
//! x = 0 before calling in.

use num_traits::Zero;

use crate::error::{GmmnError, Result};
use crate::geom::{PairBox, Point, Rational, RectilinearNetwork, Segment};

/// Closed y-interval.
pub type Interval = (Rational, Rational);

/// Set of horizontal segments stabbing a set of boxes.
#[derive(Clone, Debug, Default)]
pub struct Stabbing {
    pub segments: Vec<Segment>,
}

impl Stabbing {
    pub fn network(&self) -> RectilinearNetwork {
        RectilinearNetwork::from_segments(self.segments.clone())
    }

    pub fn cost(&self) -> Rational {
        self.network().length()
    }
}

/// Minimum-cardinality piercing of a set of closed intervals: sort by
/// upper endpoint, pierce at the smallest unpierced upper endpoint.
pub fn minimal_piercing(intervals: &[Interval]) -> Vec<Rational> {
    let mut sorted: Vec<&Interval> = intervals.iter().collect();
    sorted.sort_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)));
    let mut points: Vec<Rational> = Vec::new();
    for (lo, hi) in sorted {
        debug_assert!(lo <= hi);
        if points.last().is_none_or(|p| p < lo) {
            points.push(hi.clone());
        }
    }
    points
}

fn pierces(points: &[Rational], intervals: &[Interval]) -> bool {
    intervals
        .iter()
        .all(|(lo, hi)| points.iter().any(|p| p >= lo && p <= hi))
}

/// Removes points bottom-to-top while the remainder still pierces;
/// the result is an inclusion-wise minimal sub-piercing.
pub fn prune_piercing(piercing: &[Rational], intervals: &[Interval]) -> Result<Vec<Rational>> {
    if !pierces(piercing, intervals) {
        return Err(GmmnError::NotPiercing);
    }
    let mut points: Vec<Rational> = piercing.to_vec();
    points.sort();
    let mut i = 0;
    while i < points.len() {
        let mut rest = points.clone();
        rest.remove(i);
        if pierces(&rest, intervals) {
            points = rest;
        } else {
            i += 1;
        }
    }
    Ok(points)
}

/// One sweep event, recorded for the bound and witness checks.
#[derive(Clone, Debug)]
pub struct SweepEvent {
    /// x-coordinate of the processed right edges
    pub x: Rational,
    /// piercing after pruning at this event
    pub piercing: Vec<Rational>,
    /// intervals still alive after this event
    pub intervals: Vec<Interval>,
}

#[derive(Clone, Debug)]
pub struct SweepOutcome {
    pub stabbing: Stabbing,
    pub initial_piercing: Vec<Rational>,
    pub events: Vec<SweepEvent>,
}

/// Left-to-right sweep over the right parts of boxes crossing the
/// y-axis. The traces of the maintained minimal piercing are horizontal
/// segments anchored at x = 0; every right part is stabbed.
pub fn sweep_stab_halfplane(boxes: &[PairBox]) -> Result<Stabbing> {
    sweep_stab_halfplane_traced(boxes).map(|o| o.stabbing)
}

pub fn sweep_stab_halfplane_traced(boxes: &[PairBox]) -> Result<SweepOutcome> {
    let zero = Rational::zero();
    // right part of each box: y-interval plus death coordinate
    let mut parts: Vec<(Interval, Rational)> = Vec::new();
    for b in boxes {
        if b.dim() != 2 {
            return Err(GmmnError::DimensionMismatch(b.dim(), 2));
        }
        if b.lo.coords[0] > zero || b.hi.coords[0] < zero {
            return Err(GmmnError::BoxNotCrossingAxis);
        }
        parts.push((
            (b.lo.coords[1].clone(), b.hi.coords[1].clone()),
            b.hi.coords[0].clone(),
        ));
    }
    if parts.is_empty() {
        return Ok(SweepOutcome {
            stabbing: Stabbing::default(),
            initial_piercing: Vec::new(),
            events: Vec::new(),
        });
    }

    let intervals: Vec<Interval> = parts.iter().map(|(iv, _)| iv.clone()).collect();
    let initial = minimal_piercing(&intervals);

    let mut events_x: Vec<Rational> = parts.iter().map(|(_, x)| x.clone()).collect();
    events_x.sort();
    events_x.dedup();

    let mut piercing = initial.clone();
    let mut alive = parts;
    let mut out = Vec::new();
    let mut events = Vec::new();
    for ex in events_x {
        alive.retain(|(_, death)| *death > ex);
        let remaining: Vec<Interval> = alive.iter().map(|(iv, _)| iv.clone()).collect();
        let kept = prune_piercing(&piercing, &remaining)?;
        for dead in piercing.iter().filter(|p| !kept.contains(p)) {
            let seg = Segment::new(
                Point::new(vec![zero.clone(), dead.clone()]),
                Point::new(vec![ex.clone(), dead.clone()]),
                0,
            );
            if !seg.is_degenerate() {
                out.push(seg);
            }
        }
        piercing = kept;
        events.push(SweepEvent {
            x: ex,
            piercing: piercing.clone(),
            intervals: remaining,
        });
    }
    debug_assert!(piercing.is_empty());
    Ok(SweepOutcome {
        stabbing: Stabbing { segments: out },
        initial_piercing: initial,
        events,
    })
}

fn mirror_x(seg: &Segment) -> Segment {
    Segment::new(
        Point::new(vec![-&seg.a.coords[0], seg.a.coords[1].clone()]),
        Point::new(vec![-&seg.b.coords[0], seg.b.coords[1].clone()]),
        0,
    )
}

fn reflect_box(b: &PairBox) -> PairBox {
    let flip = |p: &Point| Point::new(vec![-&p.coords[0], p.coords[1].clone()]);
    crate::geom::TerminalPair::new(flip(&b.pair.a), flip(&b.pair.b)).bounding_box()
}

/// Stabbing of whole boxes crossing the y-axis: sweep the right parts
/// and the reflected left parts, then add the mirror image of every
/// trace so each box is stabbed by a segment together with its mirror.
pub fn stab_both(boxes: &[PairBox]) -> Result<Stabbing> {
    let right = sweep_stab_halfplane(boxes)?;
    let reflected: Vec<PairBox> = boxes.iter().map(reflect_box).collect();
    let left = sweep_stab_halfplane(&reflected)?;

    let mut segments = Vec::new();
    for seg in right.segments.iter() {
        segments.push(seg.clone());
        segments.push(mirror_x(seg));
    }
    for seg in left.segments.iter() {
        // sweep ran on reflected boxes; reflect traces back to the left side
        segments.push(mirror_x(seg));
        segments.push(seg.clone());
    }
    Ok(Stabbing {
        segments: RectilinearNetwork::from_segments(segments)
            .canonicalize()
            .segments,
    })
}

/// True iff some segment crosses the full x-extent of the box at a y
/// inside its y-extent.
pub fn stabs(stabbing: &Stabbing, b: &PairBox) -> bool {
    let net = stabbing.network().canonicalize();
    net.segments.iter().any(|s| {
        s.axis == 0
            && s.a.coords[1] >= b.lo.coords[1]
            && s.a.coords[1] <= b.hi.coords[1]
            && s.a.coords[0] <= b.lo.coords[0]
            && s.b.coords[0] >= b.hi.coords[0]
    })
}

const EXACT_STAB_MAX_BOXES: usize = 6;

/// Minimum-total-length set of horizontal segments stabbing all boxes,
/// by exhaustive search over partitions into groups sharing a segment.
pub fn exact_min_stabbing(boxes: &[PairBox]) -> Result<Stabbing> {
    if boxes.len() > EXACT_STAB_MAX_BOXES {
        return Err(GmmnError::SizeCap(format!(
            "exact_min_stabbing supports at most {} boxes",
            EXACT_STAB_MAX_BOXES
        )));
    }
    if boxes.is_empty() {
        return Ok(Stabbing::default());
    }
    // assign each box to a group; groups share one stabbing segment
    let n = boxes.len();
    let mut best: Option<(Rational, Vec<Segment>)> = None;
    let mut assign = vec![0usize; n];
    fn rec(
        i: usize,
        groups: usize,
        assign: &mut Vec<usize>,
        boxes: &[PairBox],
        best: &mut Option<(Rational, Vec<Segment>)>,
    ) {
        let n = boxes.len();
        if i == n {
            let mut total = Rational::zero();
            let mut segs = Vec::new();
            for gr in 0..groups {
                let members: Vec<&PairBox> = boxes
                    .iter()
                    .zip(assign.iter())
                    .filter(|(_, g)| **g == gr)
                    .map(|(b, _)| b)
                    .collect();
                let mut y_lo = members[0].lo.coords[1].clone();
                let mut y_hi = members[0].hi.coords[1].clone();
                let mut x_lo = members[0].lo.coords[0].clone();
                let mut x_hi = members[0].hi.coords[0].clone();
                for m in &members[1..] {
                    y_lo = y_lo.max(m.lo.coords[1].clone());
                    y_hi = y_hi.min(m.hi.coords[1].clone());
                    x_lo = x_lo.min(m.lo.coords[0].clone());
                    x_hi = x_hi.max(m.hi.coords[0].clone());
                }
                if y_lo > y_hi {
                    return; // no common y for this group
                }
                total += &x_hi - &x_lo;
                segs.push(Segment::new(
                    Point::new(vec![x_lo, y_lo.clone()]),
                    Point::new(vec![x_hi, y_lo]),
                    0,
                ));
            }
            if best.as_ref().is_none_or(|(c, _)| total < *c) {
                *best = Some((total, segs));
            }
            return;
        }
        for g in 0..=groups.min(i) {
            assign[i] = g;
            rec(i + 1, groups.max(g + 1), assign, boxes, best);
        }
    }
    rec(0, 0, &mut assign, boxes, &mut best);
    let (_, segs) = best.expect("at least the singleton partition is feasible");
    Ok(Stabbing { segments: segs })
}
