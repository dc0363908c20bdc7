//! Layered SVG rendering of a solved instance.

use std::fmt::Write as _;

use tspn_core::geom::{GeometricGraph, Point};
use tspn_core::pipeline::Solution;

const CANVAS: f64 = 800.0;
const MARGIN: f64 = 20.0;

struct View {
    lo: Point,
    hi_y: f64,
    k: f64,
}

impl View {
    fn x(&self, p: Point) -> f64 {
        MARGIN + (p.x - self.lo.x) * self.k
    }

    fn y(&self, p: Point) -> f64 {
        MARGIN + (self.hi_y - p.y) * self.k
    }

    fn len(&self, v: f64) -> f64 {
        v * self.k
    }
}

fn num(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

fn graph_path(out: &mut String, view: &View, g: &GeometricGraph, id: &str, style: &str) {
    let _ = write!(out, "<g id=\"{id}\" {style}>");
    if !g.is_empty() {
        out.push_str("<path d=\"");
        for s in g.segments() {
            let _ = write!(
                out,
                "M{} {}L{} {}",
                num(view.x(s.a)),
                num(view.y(s.a)),
                num(view.x(s.b)),
                num(view.y(s.b))
            );
        }
        out.push_str("\"/>");
    }
    out.push_str("</g>\n");
}

/// SVG 1.1 document with one group per layer: disks by class, bounding
/// square, grid, selected cells, `G1`, `G2`, `G3`, chosen sentinels and
/// the tour. Output depends only on the solution.
pub fn render_svg(sol: &Solution) -> String {
    let disks = sol.instance.disks();
    let r = sol.pre.bounding;
    let mut lo = r.corner;
    let mut hi = r.max_corner();
    for d in disks {
        lo.x = lo.x.min(d.center.x - d.radius);
        lo.y = lo.y.min(d.center.y - d.radius);
        hi.x = hi.x.max(d.center.x + d.radius);
        hi.y = hi.y.max(d.center.y + d.radius);
    }
    let extent = (hi.x - lo.x).max(hi.y - lo.y);
    let k = if extent > 0.0 { CANVAS / extent } else { 1.0 };
    let view = View { lo, hi_y: hi.y, k };
    let w = 2.0 * MARGIN + (hi.x - lo.x) * k;
    let h = 2.0 * MARGIN + (hi.y - lo.y) * k;

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">",
        num(w),
        num(h),
        num(w),
        num(h)
    );
    let _ = writeln!(out, "<rect width=\"{}\" height=\"{}\" fill=\"white\"/>", num(w), num(h));

    let part = &sol.pre.partition;
    for (id, set, colour) in [
        ("disks-s1", &part.s1, "#4c9be8"),
        ("disks-s2", &part.s2, "#49b265"),
        ("disks-s3", &part.s3, "#e0603a"),
    ] {
        let _ = write!(out, "<g id=\"{id}\" fill=\"{colour}\" fill-opacity=\"0.25\" stroke=\"{colour}\" stroke-width=\"1\">");
        for &i in set.iter() {
            let d = &disks[i];
            let _ = write!(
                out,
                "<circle cx=\"{}\" cy=\"{}\" r=\"{}\"/>",
                num(view.x(d.center)),
                num(view.y(d.center)),
                num(view.len(d.radius))
            );
        }
        out.push_str("</g>\n");
    }

    let _ = writeln!(
        out,
        "<g id=\"bounding-square\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"><rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\"/></g>",
        num(view.x(Point::new(r.corner.x, r.corner.y + r.side))),
        num(view.y(Point::new(r.corner.x, r.corner.y + r.side))),
        num(view.len(r.side)),
        num(view.len(r.side))
    );

    let rect = |out: &mut String, q: &tspn_core::AxisSquare| {
        let top_left = Point::new(q.corner.x, q.corner.y + q.side);
        let _ = write!(
            out,
            "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\"/>",
            num(view.x(top_left)),
            num(view.y(top_left)),
            num(view.len(q.side)),
            num(view.len(q.side))
        );
    };
    out.push_str("<g id=\"grid\" fill=\"none\" stroke=\"#999999\" stroke-width=\"0.5\">");
    for q in &sol.grid.squares {
        rect(&mut out, &q.cell);
    }
    out.push_str("</g>\n");
    if !sol.selected.is_empty() {
        out.push_str("<g id=\"selected-cells\" fill=\"#f2c94c\" fill-opacity=\"0.35\" stroke=\"none\">");
        for &i in &sol.selected {
            rect(&mut out, &sol.grid.squares[i].cell);
        }
        out.push_str("</g>\n");
    }

    graph_path(&mut out, &view, &sol.pre.g1, "g1", "fill=\"none\" stroke=\"#1f3a93\" stroke-width=\"2\"");
    graph_path(&mut out, &view, &sol.pre.g2, "g2", "fill=\"none\" stroke=\"#2e7d32\" stroke-width=\"2\"");
    graph_path(&mut out, &view, &sol.g3, "g3", "fill=\"none\" stroke=\"#c0392b\" stroke-width=\"1.5\"");

    let sh = &sol.sentinel_hypergraph;
    out.push_str("<g id=\"sentinels\" fill=\"#8e44ad\">");
    for &s in &sol.hitting.chosen {
        let p = sh.sentinels[s].location;
        let _ = write!(out, "<circle cx=\"{}\" cy=\"{}\" r=\"3\"/>", num(view.x(p)), num(view.y(p)));
    }
    out.push_str("</g>\n");

    out.push_str("<g id=\"tour\" fill=\"none\" stroke=\"black\" stroke-width=\"0.75\" stroke-dasharray=\"4 2\">");
    let vs = &sol.tour.vertices;
    if vs.len() > 1 {
        out.push_str("<polygon points=\"");
        for (i, p) in vs.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{},{}", num(view.x(*p)), num(view.y(*p)));
        }
        out.push_str("\"/>");
    } else if let Some(p) = vs.first() {
        let _ = write!(out, "<circle cx=\"{}\" cy=\"{}\" r=\"2\"/>", num(view.x(*p)), num(view.y(*p)));
    }
    out.push_str("</g>\n</svg>\n");
    out
}
