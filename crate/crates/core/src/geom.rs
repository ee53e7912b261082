//! Exact rectilinear geometry: rational coordinates, points, boxes,
//! axis-parallel segments, networks and affine transforms.
//!
//! Everything here is exact; there is no floating point in the core.

use std::collections::{HashMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{GmmnError, Result};

/// Exact rational number with arbitrary-precision numerator/denominator.
pub type Rational = num_rational::BigRational;

/// Rational from an integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational `n/d`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Renders `r` as a decimal approximation with the given number of
/// significant digits. File formats never use this; it is display only.
pub fn decimal_approx(r: &Rational, sig: usize) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    let f = r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN);
    if f.is_finite() {
        return format!("{:.*}", sig.saturating_sub(1), f)
            .trim_end_matches('0')
            .trim_end_matches('.')
            .to_string();
    }
    format!("{}", f)
}

/// A point with exact rational coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub coords: Vec<Rational>,
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, ")")
    }
}

impl Point {
    pub fn new(coords: Vec<Rational>) -> Self {
        Point { coords }
    }

    /// Point from integer coordinates.
    pub fn from_ints(coords: &[i64]) -> Self {
        Point::new(coords.iter().map(|&c| rat(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn origin(d: usize) -> Self {
        Point::new(vec![Rational::zero(); d])
    }
}

/// Sum of coordinate-wise absolute differences.
pub fn manhattan_distance(p: &Point, q: &Point) -> Result<Rational> {
    if p.dim() != q.dim() {
        return Err(GmmnError::DimensionMismatch(p.dim(), q.dim()));
    }
    let mut sum = Rational::zero();
    for (a, b) in p.coords.iter().zip(&q.coords) {
        sum += (a - b).abs();
    }
    Ok(sum)
}

/// An unordered terminal pair, stored with `a <= b` lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct TerminalPair {
    pub a: Point,
    pub b: Point,
}

impl TerminalPair {
    pub fn new(s: Point, t: Point) -> Self {
        if s <= t {
            TerminalPair { a: s, b: t }
        } else {
            TerminalPair { a: t, b: s }
        }
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn is_degenerate(&self) -> bool {
        self.a == self.b
    }

    pub fn distance(&self) -> Rational {
        manhattan_distance(&self.a, &self.b).expect("pair dimensions agree")
    }

    /// The pair's axis-aligned bounding box.
    pub fn bounding_box(&self) -> PairBox {
        let d = self.dim();
        let mut lo = Vec::with_capacity(d);
        let mut hi = Vec::with_capacity(d);
        for i in 0..d {
            let (x, y) = (&self.a.coords[i], &self.b.coords[i]);
            if x <= y {
                lo.push(x.clone());
                hi.push(y.clone());
            } else {
                lo.push(y.clone());
                hi.push(x.clone());
            }
        }
        PairBox {
            lo: Point::new(lo),
            hi: Point::new(hi),
            pair: self.clone(),
        }
    }
}

/// A terminal pair identified with its axis-aligned bounding box.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PairBox {
    pub lo: Point,
    pub hi: Point,
    pub pair: TerminalPair,
}

impl PairBox {
    pub fn dim(&self) -> usize {
        self.lo.dim()
    }

    pub fn contains(&self, p: &Point) -> bool {
        p.dim() == self.dim()
            && (0..self.dim())
                .all(|i| self.lo.coords[i] <= p.coords[i] && p.coords[i] <= self.hi.coords[i])
    }
}

/// Axis-parallel closed segment; `a` and `b` differ only in `axis` and
/// are stored with `a[axis] <= b[axis]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
    pub axis: usize,
}

impl Segment {
    pub fn new(a: Point, b: Point, axis: usize) -> Self {
        debug_assert_eq!(a.dim(), b.dim());
        debug_assert!(axis < a.dim());
        debug_assert!(a
            .coords
            .iter()
            .zip(&b.coords)
            .enumerate()
            .all(|(i, (x, y))| i == axis || x == y));
        if a.coords[axis] <= b.coords[axis] {
            Segment { a, b, axis }
        } else {
            Segment { b: a, a: b, axis }
        }
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn length(&self) -> Rational {
        &self.b.coords[self.axis] - &self.a.coords[self.axis]
    }

    pub fn is_degenerate(&self) -> bool {
        self.a == self.b
    }

    /// Coordinates of the line the segment lies on (all coordinates
    /// except the one along `axis`).
    pub fn line_key(&self) -> (usize, Vec<Rational>) {
        let fixed: Vec<Rational> = self
            .a
            .coords
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != self.axis)
            .map(|(_, c)| c.clone())
            .collect();
        (self.axis, fixed)
    }

    pub fn contains_point(&self, p: &Point) -> bool {
        if p.dim() != self.dim() {
            return false;
        }
        for i in 0..self.dim() {
            if i == self.axis {
                if p.coords[i] < self.a.coords[i] || p.coords[i] > self.b.coords[i] {
                    return false;
                }
            } else if p.coords[i] != self.a.coords[i] {
                return false;
            }
        }
        true
    }
}

/// A set of axis-parallel segments. `canonicalize` merges collinear
/// overlapping or touching segments so that the sum of segment lengths
/// equals the measure of the union.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct RectilinearNetwork {
    pub segments: Vec<Segment>,
}

impl RectilinearNetwork {
    pub fn new() -> Self {
        RectilinearNetwork { segments: Vec::new() }
    }

    pub fn from_segments(segments: Vec<Segment>) -> Self {
        RectilinearNetwork { segments }
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn push(&mut self, s: Segment) {
        self.segments.push(s);
    }

    pub fn extend(&mut self, other: &RectilinearNetwork) {
        self.segments.extend(other.segments.iter().cloned());
    }

    pub fn union(mut self, other: RectilinearNetwork) -> RectilinearNetwork {
        self.segments.extend(other.segments);
        self
    }

    /// Maximal disjoint representation: per line, overlapping or
    /// touching segments are merged and zero-length segments dropped.
    pub fn canonicalize(&self) -> RectilinearNetwork {
        // line key -> intervals along that line
        type Lines = HashMap<(usize, Vec<Rational>), Vec<(Rational, Rational)>>;
        let mut by_line: Lines = HashMap::new();
        for s in &self.segments {
            if s.is_degenerate() {
                continue;
            }
            by_line
                .entry(s.line_key())
                .or_default()
                .push((s.a.coords[s.axis].clone(), s.b.coords[s.axis].clone()));
        }
        let mut out = Vec::new();
        for ((axis, fixed), mut ivals) in by_line {
            ivals.sort();
            let mut merged: Vec<(Rational, Rational)> = Vec::new();
            for (lo, hi) in ivals {
                match merged.last_mut() {
                    Some(last) if lo <= last.1 => {
                        if hi > last.1 {
                            last.1 = hi;
                        }
                    }
                    _ => merged.push((lo, hi)),
                }
            }
            for (lo, hi) in merged {
                let mk = |v: Rational| {
                    let mut coords = Vec::with_capacity(fixed.len() + 1);
                    let mut it = fixed.iter();
                    for i in 0..=fixed.len() {
                        if i == axis {
                            coords.push(v.clone());
                        } else {
                            coords.push(it.next().unwrap().clone());
                        }
                    }
                    Point::new(coords)
                };
                out.push(Segment::new(mk(lo), mk(hi), axis));
            }
        }
        out.sort();
        RectilinearNetwork { segments: out }
    }

    /// Measure of the union of the segments.
    pub fn length(&self) -> Rational {
        self.canonicalize()
            .segments
            .iter()
            .map(|s| s.length())
            .fold(Rational::zero(), |acc, l| acc + l)
    }

    /// Sum of segment lengths without merging. Equals `length()` only
    /// on canonical networks.
    pub fn raw_length(&self) -> Rational {
        self.segments
            .iter()
            .map(|s| s.length())
            .fold(Rational::zero(), |acc, l| acc + l)
    }
}

/// A GMMN instance: dimension, terminal pairs and the separator values
/// accumulated so far (the instance is `separators.len()`-separated).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Instance {
    pub dim: usize,
    pub pairs: Vec<TerminalPair>,
    pub separators: Vec<Rational>,
}

impl Instance {
    /// Builds an instance, dropping degenerate pairs (t = t') and
    /// duplicates. Returns the number of dropped records alongside.
    pub fn new(dim: usize, raw: Vec<(Point, Point)>) -> Result<(Instance, usize)> {
        let mut pairs = Vec::new();
        let mut seen = HashSet::new();
        let mut dropped = 0usize;
        for (s, t) in raw {
            if s.dim() != dim || t.dim() != dim {
                return Err(GmmnError::DimensionMismatch(s.dim().max(t.dim()), dim));
            }
            let p = TerminalPair::new(s, t);
            if p.is_degenerate() || !seen.insert(p.clone()) {
                dropped += 1;
                continue;
            }
            pairs.push(p);
        }
        Ok((
            Instance {
                dim,
                pairs,
                separators: Vec::new(),
            },
            dropped,
        ))
    }

    pub fn from_pairs(dim: usize, pairs: Vec<TerminalPair>) -> Instance {
        Instance {
            dim,
            pairs,
            separators: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn separation_level(&self) -> usize {
        self.separators.len()
    }

    /// All terminals, in pair order.
    pub fn terminals(&self) -> Vec<Point> {
        let mut v = Vec::with_capacity(2 * self.pairs.len());
        for p in &self.pairs {
            v.push(p.a.clone());
            v.push(p.b.clone());
        }
        v
    }

    pub fn boxes(&self) -> Vec<PairBox> {
        self.pairs.iter().map(|p| p.bounding_box()).collect()
    }

    /// Checks the j-separation invariant: for every pair and every
    /// i < level, `separators[i]` lies weakly between the pair's i-th
    /// coordinates.
    pub fn check_separation(&self) -> Result<()> {
        for (idx, p) in self.pairs.iter().enumerate() {
            let bb = p.bounding_box();
            for (i, s) in self.separators.iter().enumerate() {
                if !(bb.lo.coords[i] <= *s && *s <= bb.hi.coords[i]) {
                    return Err(GmmnError::NotSeparated(idx));
                }
            }
        }
        Ok(())
    }
}

/// Per-axis scaling plus translation, `x_i -> scale_i * x_i + translate_i`.
#[derive(Clone, Debug)]
pub struct Transform {
    pub scale: Vec<Rational>,
    pub translate: Vec<Rational>,
}

impl Transform {
    pub fn new(scale: Vec<Rational>, translate: Vec<Rational>) -> Result<Self> {
        if scale.iter().any(|s| *s <= Rational::zero()) {
            return Err(GmmnError::NonPositiveScale);
        }
        if scale.len() != translate.len() {
            return Err(GmmnError::DimensionMismatch(scale.len(), translate.len()));
        }
        Ok(Transform { scale, translate })
    }

    pub fn uniform(d: usize, scale: Rational, translate: Point) -> Result<Self> {
        Transform::new(vec![scale; d], translate.coords)
    }

    pub fn translation(translate: Point) -> Self {
        Transform {
            scale: vec![Rational::one(); translate.dim()],
            translate: translate.coords,
        }
    }

    pub fn dim(&self) -> usize {
        self.scale.len()
    }

    pub fn apply_point(&self, p: &Point) -> Point {
        debug_assert_eq!(p.dim(), self.dim());
        Point::new(
            p.coords
                .iter()
                .enumerate()
                .map(|(i, c)| c * &self.scale[i] + &self.translate[i])
                .collect(),
        )
    }

    pub fn apply_segment(&self, s: &Segment) -> Segment {
        Segment::new(self.apply_point(&s.a), self.apply_point(&s.b), s.axis)
    }

    pub fn apply_network(&self, n: &RectilinearNetwork) -> RectilinearNetwork {
        RectilinearNetwork::from_segments(
            n.segments.iter().map(|s| self.apply_segment(s)).collect(),
        )
    }

    pub fn apply_instance(&self, inst: &Instance) -> Instance {
        Instance {
            dim: inst.dim,
            pairs: inst
                .pairs
                .iter()
                .map(|p| TerminalPair::new(self.apply_point(&p.a), self.apply_point(&p.b)))
                .collect(),
            separators: inst
                .separators
                .iter()
                .enumerate()
                .map(|(i, s)| s * &self.scale[i] + &self.translate[i])
                .collect(),
        }
    }
}
