//! Write-only SVG rendering of 2D instances and networks. Floating
//! point appears here only for display; all geometry stays exact
//! upstream.

use num_traits::ToPrimitive;

use crate::error::{GmmnError, Result};
use crate::geom::{Instance, Rational, RectilinearNetwork};

fn f(r: &Rational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

fn fmt(v: f64) -> String {
    // fixed precision keeps output byte-stable
    format!("{:.6}", v)
}

/// Renders an instance (terminal dots, labels, dashed pair boxes) and
/// optionally a network (solid segments). The viewbox is the data hull
/// with a 5% margin; the y axis points up.
pub fn render_svg(inst: &Instance, net: Option<&RectilinearNetwork>) -> Result<String> {
    if inst.dim != 2 {
        return Err(GmmnError::InvalidConfig("rendering needs dimension 2".into()));
    }
    if inst.is_empty() {
        return Err(GmmnError::EmptyInstance);
    }
    let mut xs: Vec<f64> = Vec::new();
    let mut ys: Vec<f64> = Vec::new();
    for t in inst.terminals() {
        xs.push(f(&t.coords[0]));
        ys.push(f(&t.coords[1]));
    }
    if let Some(n) = net {
        for s in &n.segments {
            for p in [&s.a, &s.b] {
                xs.push(f(&p.coords[0]));
                ys.push(f(&p.coords[1]));
            }
        }
    }
    let (x0, x1) = (
        xs.iter().cloned().fold(f64::INFINITY, f64::min),
        xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
    );
    let (y0, y1) = (
        ys.iter().cloned().fold(f64::INFINITY, f64::min),
        ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
    );
    let w = (x1 - x0).max(1e-9);
    let h = (y1 - y0).max(1e-9);
    let margin = 0.05 * w.max(h);
    let (vx, vy) = (x0 - margin, y0 - margin);
    let (vw, vh) = (w + 2.0 * margin, h + 2.0 * margin);
    // flip y so the math orientation (y up) survives SVG's y-down axis
    let flip_y = |y: f64| y1 + y0 - y;
    let stroke = 0.006 * vw.max(vh);
    let dot = 1.5 * stroke;

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">\n",
        fmt(vx),
        fmt(vy),
        fmt(vw),
        fmt(vh)
    ));

    out.push_str("<g class=\"boxes\">\n");
    for b in inst.boxes() {
        let (bx0, by0) = (f(&b.lo.coords[0]), f(&b.lo.coords[1]));
        let (bx1, by1) = (f(&b.hi.coords[0]), f(&b.hi.coords[1]));
        out.push_str(&format!(
            "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#888888\" stroke-width=\"{}\" stroke-dasharray=\"{} {}\"/>\n",
            fmt(bx0),
            fmt(flip_y(by1)),
            fmt(bx1 - bx0),
            fmt(by1 - by0),
            fmt(0.5 * stroke),
            fmt(2.0 * stroke),
            fmt(2.0 * stroke),
        ));
    }
    out.push_str("</g>\n");

    for (i, s) in inst.separators.iter().enumerate() {
        let v = f(s);
        let line = if i == 0 {
            format!(
                "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"",
                fmt(v),
                fmt(vy),
                fmt(v),
                fmt(vy + vh)
            )
        } else {
            format!(
                "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"",
                fmt(vx),
                fmt(flip_y(v)),
                fmt(vx + vw),
                fmt(flip_y(v))
            )
        };
        out.push_str(&format!(
            "{} stroke=\"#bb4444\" stroke-width=\"{}\" stroke-dasharray=\"{} {}\"/>\n",
            line,
            fmt(0.5 * stroke),
            fmt(stroke),
            fmt(stroke)
        ));
    }

    if let Some(n) = net {
        out.push_str("<g class=\"network\">\n");
        for s in &n.canonicalize().segments {
            out.push_str(&format!(
                "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#1144bb\" stroke-width=\"{}\" stroke-linecap=\"square\"/>\n",
                fmt(f(&s.a.coords[0])),
                fmt(flip_y(f(&s.a.coords[1]))),
                fmt(f(&s.b.coords[0])),
                fmt(flip_y(f(&s.b.coords[1]))),
                fmt(stroke),
            ));
        }
        out.push_str("</g>\n");
    }

    out.push_str("<g class=\"terminals\">\n");
    for (i, p) in inst.pairs.iter().enumerate() {
        for (tag, t) in [("a", &p.a), ("b", &p.b)] {
            let (x, y) = (f(&t.coords[0]), flip_y(f(&t.coords[1])));
            out.push_str(&format!(
                "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"#222222\"/>\n",
                fmt(x),
                fmt(y),
                fmt(dot)
            ));
            out.push_str(&format!(
                "<text x=\"{}\" y=\"{}\" font-size=\"{}\" fill=\"#222222\">{}{}</text>\n",
                fmt(x + 1.5 * dot),
                fmt(y - 1.5 * dot),
                fmt(5.0 * stroke),
                i,
                tag
            ));
        }
    }
    out.push_str("</g>\n</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{Instance, Point};

    fn p2(x: i64, y: i64) -> Point {
        Point::from_ints(&[x, y])
    }

    #[test]
    fn renders_boxes_and_network() {
        let (inst, _) =
            Instance::new(2, vec![(p2(0, 0), p2(2, 1)), (p2(1, 0), p2(3, 2))]).unwrap();
        let net = crate::solver::solve_gmmn(&inst, &Default::default()).unwrap();
        let svg = render_svg(&inst, Some(&net)).unwrap();
        assert_eq!(svg.matches("<rect").count(), 2);
        assert!(svg.matches("<line").count() >= 1);
        assert_eq!(svg.matches("<circle").count(), 4);
        assert!(svg.starts_with("<svg"));
        // determinism
        assert_eq!(svg, render_svg(&inst, Some(&net)).unwrap());
    }

    #[test]
    fn instance_only_has_no_network_layer() {
        let (inst, _) = Instance::new(2, vec![(p2(0, 0), p2(2, 1))]).unwrap();
        let svg = render_svg(&inst, None).unwrap();
        assert!(!svg.contains("class=\"network\""));
    }

    #[test]
    fn rejects_empty_or_3d() {
        let empty = Instance::from_pairs(2, vec![]);
        assert!(render_svg(&empty, None).is_err());
        let (d3, _) = Instance::new(
            3,
            vec![(Point::from_ints(&[0, 0, 0]), Point::from_ints(&[1, 1, 1]))],
        )
        .unwrap();
        assert!(render_svg(&d3, None).is_err());
    }
}
