//! Plain-text, line-oriented instance and network files. Rationals are
//! written as single `num/den` tokens (plain integers allowed), so the
//! formats are exact and diff-friendly.

use std::path::Path;
use std::str::FromStr;

use num_traits::One;

use crate::error::{GmmnError, Result};
use crate::geom::{Instance, Point, Rational, RectilinearNetwork, Segment};

pub const INSTANCE_HEADER: &str = "gmmn instance v1";
pub const NETWORK_HEADER: &str = "gmmn network v1";

pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(tok: &str) -> Result<Rational> {
    Rational::from_str(tok).map_err(|e| GmmnError::Parse(format!("bad rational '{}': {}", tok, e)))
}

fn parse_usize(tok: &str, what: &str) -> Result<usize> {
    tok.parse()
        .map_err(|_| GmmnError::Parse(format!("bad {} '{}'", what, tok)))
}

/// Lines of a file with comments and blanks stripped.
fn body_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
}

pub fn serialize_instance(inst: &Instance, comments: &[String]) -> String {
    let mut out = String::new();
    out.push_str(INSTANCE_HEADER);
    out.push('\n');
    for c in comments {
        out.push_str(&format!("# {}\n", c));
    }
    out.push_str(&format!("dim {}\n", inst.dim));
    out.push_str(&format!("pairs {}\n", inst.pairs.len()));
    if !inst.separators.is_empty() {
        let toks: Vec<String> = inst.separators.iter().map(format_rational).collect();
        out.push_str(&format!("separators {}\n", toks.join(" ")));
    }
    for p in &inst.pairs {
        let toks: Vec<String> = p
            .a
            .coords
            .iter()
            .chain(p.b.coords.iter())
            .map(format_rational)
            .collect();
        out.push_str(&toks.join(" "));
        out.push('\n');
    }
    out
}

/// Parses an instance file. Degenerate and duplicate pairs are dropped
/// with a warning rather than rejected.
pub fn parse_instance(text: &str) -> Result<(Instance, Vec<String>)> {
    let mut lines = body_lines(text);
    match lines.next() {
        Some(h) if h == INSTANCE_HEADER => {}
        other => {
            return Err(GmmnError::Parse(format!(
                "expected header '{}', got '{}'",
                INSTANCE_HEADER,
                other.unwrap_or("<eof>")
            )))
        }
    }
    let mut dim: Option<usize> = None;
    let mut pairs: Option<usize> = None;
    let mut separators: Vec<Rational> = Vec::new();
    let mut raw: Vec<(Point, Point)> = Vec::new();
    for line in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks[0] {
            "dim" if toks.len() == 2 => dim = Some(parse_usize(toks[1], "dimension")?),
            "pairs" if toks.len() == 2 => pairs = Some(parse_usize(toks[1], "pair count")?),
            "separators" => {
                separators = toks[1..]
                    .iter()
                    .map(|t| parse_rational(t))
                    .collect::<Result<_>>()?;
            }
            _ => {
                let d =
                    dim.ok_or_else(|| GmmnError::Parse("pair record before 'dim'".into()))?;
                if toks.len() != 2 * d {
                    return Err(GmmnError::Parse(format!(
                        "pair record needs {} coordinates, got {}: '{}'",
                        2 * d,
                        toks.len(),
                        line
                    )));
                }
                let coords: Vec<Rational> = toks
                    .iter()
                    .map(|t| parse_rational(t))
                    .collect::<Result<_>>()?;
                raw.push((
                    Point::new(coords[..d].to_vec()),
                    Point::new(coords[d..].to_vec()),
                ));
            }
        }
    }
    let dim = dim.ok_or_else(|| GmmnError::Parse("missing 'dim' line".into()))?;
    let declared = pairs.ok_or_else(|| GmmnError::Parse("missing 'pairs' line".into()))?;
    if raw.len() != declared {
        return Err(GmmnError::Parse(format!(
            "declared {} pairs but found {}",
            declared,
            raw.len()
        )));
    }
    if !separators.is_empty() && separators.len() > dim {
        return Err(GmmnError::Parse("more separators than axes".into()));
    }
    let (mut inst, dropped) = Instance::new(dim, raw)?;
    inst.separators = separators;
    let mut warnings = Vec::new();
    if dropped > 0 {
        warnings.push(format!(
            "dropped {} degenerate or duplicate pair record(s)",
            dropped
        ));
    }
    Ok((inst, warnings))
}

pub fn serialize_network(net: &RectilinearNetwork) -> String {
    let net = net.canonicalize();
    let dim = net.segments.first().map_or(0, |s| s.dim());
    let mut out = String::new();
    out.push_str(NETWORK_HEADER);
    out.push('\n');
    out.push_str(&format!("dim {}\n", dim));
    out.push_str(&format!("segments {}\n", net.segments.len()));
    out.push_str(&format!("length {}\n", format_rational(&net.length())));
    for s in &net.segments {
        let mut toks = vec![s.axis.to_string()];
        toks.extend(s.a.coords.iter().map(format_rational));
        toks.extend(s.b.coords.iter().map(format_rational));
        out.push_str(&toks.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_network(text: &str) -> Result<RectilinearNetwork> {
    let mut lines = body_lines(text);
    match lines.next() {
        Some(h) if h == NETWORK_HEADER => {}
        other => {
            return Err(GmmnError::Parse(format!(
                "expected header '{}', got '{}'",
                NETWORK_HEADER,
                other.unwrap_or("<eof>")
            )))
        }
    }
    let mut dim: Option<usize> = None;
    let mut count: Option<usize> = None;
    let mut length: Option<Rational> = None;
    let mut segments: Vec<Segment> = Vec::new();
    for line in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks[0] {
            "dim" if toks.len() == 2 => dim = Some(parse_usize(toks[1], "dimension")?),
            "segments" if toks.len() == 2 => {
                count = Some(parse_usize(toks[1], "segment count")?)
            }
            "length" if toks.len() == 2 => length = Some(parse_rational(toks[1])?),
            _ => {
                let d =
                    dim.ok_or_else(|| GmmnError::Parse("segment record before 'dim'".into()))?;
                if toks.len() != 2 * d + 1 {
                    return Err(GmmnError::Parse(format!(
                        "segment record needs axis + {} coordinates: '{}'",
                        2 * d,
                        line
                    )));
                }
                let axis = parse_usize(toks[0], "axis")?;
                if axis >= d {
                    return Err(GmmnError::Parse(format!("axis {} out of range", axis)));
                }
                let coords: Vec<Rational> = toks[1..]
                    .iter()
                    .map(|t| parse_rational(t))
                    .collect::<Result<_>>()?;
                let a = Point::new(coords[..d].to_vec());
                let b = Point::new(coords[d..].to_vec());
                for i in 0..d {
                    if i != axis && a.coords[i] != b.coords[i] {
                        return Err(GmmnError::Parse(format!(
                            "segment endpoints differ off-axis: '{}'",
                            line
                        )));
                    }
                }
                segments.push(Segment::new(a, b, axis));
            }
        }
    }
    let declared = count.ok_or_else(|| GmmnError::Parse("missing 'segments' line".into()))?;
    if segments.len() != declared {
        return Err(GmmnError::Parse(format!(
            "declared {} segments but found {}",
            declared,
            segments.len()
        )));
    }
    let net = RectilinearNetwork::from_segments(segments);
    let stated = length.ok_or_else(|| GmmnError::Parse("missing 'length' line".into()))?;
    if net.length() != stated {
        return Err(GmmnError::Parse(format!(
            "stated length {} does not match recomputed {}",
            format_rational(&stated),
            format_rational(&net.length())
        )));
    }
    Ok(net)
}

pub fn read_instance(path: &Path) -> Result<(Instance, Vec<String>)> {
    parse_instance(&std::fs::read_to_string(path)?)
}

pub fn read_network(path: &Path) -> Result<RectilinearNetwork> {
    parse_network(&std::fs::read_to_string(path)?)
}

pub fn write_instance(path: &Path, inst: &Instance, comments: &[String]) -> Result<()> {
    Ok(std::fs::write(path, serialize_instance(inst, comments))?)
}

pub fn write_network(path: &Path, net: &RectilinearNetwork) -> Result<()> {
    Ok(std::fs::write(path, serialize_network(net))?)
}
