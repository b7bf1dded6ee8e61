use std::fmt::Write;

use crate::family::{Family, PointSet};
use crate::geom::{BBox, Point};
use crate::routing::Drawing;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SvgOptions {
    /// Render only points and edges.
    pub hide_disks: bool,
}

const PALETTE: [&str; 8] = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#17becf"];

/// Display-only decimal: at most four fractional digits, trailing zeros cut.
fn num(v: f64) -> String {
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

struct View {
    min_x: f64,
    max_y: f64,
    width: f64,
    height: f64,
    margin: f64,
}

impl View {
    fn xy(&self, p: &Point) -> String {
        let (x, y) = p.to_f64();
        format!("{},{}", num(x - self.min_x + self.margin), num(self.max_y - y + self.margin))
    }
}

/// Renders disks, points and edge curves. The y axis points up, and the
/// canvas is the bounding box of everything drawn plus a 5% margin.
pub fn emit_svg(family: &Family, s: &PointSet, drawing: Option<&Drawing>, opts: &SvgOptions) -> String {
    let mut bb: Option<BBox> = None;
    let mut add = |p: &Point| match &mut bb {
        Some(b) => b.add(p),
        None => bb = BBox::of([p]),
    };
    if !opts.hide_disks {
        family.disks().iter().flat_map(|d| d.region.vertices()).for_each(&mut add);
    }
    s.points().iter().for_each(|lp| add(&lp.point));
    if let Some(d) = drawing {
        d.edges.iter().flat_map(|e| e.curve.vertices()).for_each(&mut add);
    }
    let view = match bb {
        Some(b) => {
            let (x0, y0) = b.min.to_f64();
            let (x1, y1) = b.max.to_f64();
            let (w, h) = (x1 - x0, y1 - y0);
            let side = w.max(h).max(1.0);
            View { min_x: x0, max_y: y1, width: w, height: h, margin: 0.05 * side }
        }
        None => View { min_x: 0.0, max_y: 0.0, width: 0.0, height: 0.0, margin: 1.0 },
    };
    let (vw, vh) = (view.width + 2.0 * view.margin, view.height + 2.0 * view.margin);
    let unit = vw.max(vh) / 200.0;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="0 0 {} {}" width="{}" height="{}">"#,
        num(vw),
        num(vh),
        num(vw / unit * 3.0),
        num(vh / unit * 3.0)
    );
    if !opts.hide_disks {
        out.push_str("<g id=\"disks\">\n");
        for (i, d) in family.disks().iter().enumerate() {
            let c = PALETTE[i % PALETTE.len()];
            let pts: Vec<String> = d.region.vertices().iter().map(|p| view.xy(p)).collect();
            let _ = writeln!(
                out,
                r#"<path id="disk-{}" d="M {} Z" fill="{c}" fill-opacity="0.15" stroke="{c}" stroke-width="{}"/>"#,
                escape(&d.id),
                pts.join(" L "),
                num(unit * 0.6)
            );
        }
        out.push_str("</g>\n");
    }
    out.push_str("<g id=\"edges\">\n");
    for e in drawing.map(|d| d.edges.as_slice()).unwrap_or_default() {
        let pts: Vec<String> = e.curve.vertices().iter().map(|p| view.xy(p)).collect();
        let _ = writeln!(
            out,
            r#"<polyline id="edge-{}-{}" points="{}" fill="none" stroke="black" stroke-width="{}"/>"#,
            escape(&e.x),
            escape(&e.y),
            pts.join(" "),
            num(unit)
        );
    }
    out.push_str("</g>\n<g id=\"points\">\n");
    for lp in s.points() {
        let (x, y) = lp.point.to_f64();
        let (sx, sy) = (x - view.min_x + view.margin, view.max_y - y + view.margin);
        let _ = writeln!(out, r#"<circle cx="{}" cy="{}" r="{}" fill="black"/>"#, num(sx), num(sy), num(unit * 2.0));
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-size="{}">{}</text>"#,
            num(sx + unit * 3.0),
            num(sy - unit * 3.0),
            num(unit * 8.0),
            escape(&lp.label)
        );
    }
    out.push_str("</g>\n</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse_instance;
    use crate::routing::plane_drawing;

    fn fixture() -> (Family, PointSet) {
        parse_instance(
            r#"{"version": 1,
  "points": [{"label": "p", "x": "1", "y": "1"}, {"label": "q", "x": "3", "y": "1"}, {"label": "r", "x": "2", "y": "3"}],
  "disks": [
    {"id": "D_pq", "polygon": [["0", "0"], ["4", "0"], ["4", "2"], ["0", "2"]]},
    {"id": "D_pr", "polygon": [["1/2", "1/2"], ["5/2", "1/2"], ["5/2", "7/2"], ["1/2", "7/2"]]},
    {"id": "D_all", "polygon": [["-1", "-1"], ["5", "-1"], ["5", "5"], ["-1", "5"]]}
  ]}"#,
        )
        .unwrap()
    }

    #[test]
    fn fixture_element_counts() {
        let (f, s) = fixture();
        let pd = plane_drawing(&f, &s).unwrap();
        let svg = emit_svg(&f, &s, Some(&pd.drawing), &SvgOptions::default());
        assert_eq!(svg.matches("<path ").count(), 3);
        assert_eq!(svg.matches("<circle ").count(), 3);
        assert_eq!(svg.matches("<text ").count(), 3);
        assert_eq!(svg.matches("<polyline ").count(), 2);
        assert_eq!(svg, emit_svg(&f, &s, Some(&pd.drawing), &SvgOptions::default()));
    }

    #[test]
    fn y_axis_points_up() {
        let (f, s) = fixture();
        let svg = emit_svg(&f, &s, None, &SvgOptions::default());
        // r = (2, 3) is the highest point, so it gets the smallest cy
        let cys: Vec<f64> =
            svg.match_indices("cy=\"").map(|(i, _)| svg[i + 4..].split('"').next().unwrap().parse().unwrap()).collect();
        assert!(cys[2] < cys[0] && cys[0] == cys[1]);
    }

    #[test]
    fn empty_instance() {
        let svg = emit_svg(&Family::empty(), &PointSet::default(), None, &SvgOptions::default());
        assert!(svg.starts_with("<svg ") && svg.ends_with("</svg>\n"));
        assert_eq!(svg.matches("<path ").count() + svg.matches("<circle ").count(), 0);
    }

    #[test]
    fn hide_disks() {
        let (f, s) = fixture();
        let pd = plane_drawing(&f, &s).unwrap();
        let svg = emit_svg(&f, &s, Some(&pd.drawing), &SvgOptions { hide_disks: true });
        assert_eq!(svg.matches("<path ").count(), 0);
        assert_eq!(svg.matches("<circle ").count(), 3);
        assert_eq!(svg.matches("<polyline ").count(), 2);
    }
}
