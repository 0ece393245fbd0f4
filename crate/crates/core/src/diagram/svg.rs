//! Plain SVG rendering of a Newton diagram on its lattice grid.

use std::fmt::Write;

use num_traits::ToPrimitive;

use super::NewtonDiagram;

const CELL: f64 = 24.0;
const MARGIN: f64 = 20.0;
const MAX_GRID: u64 = 200;

impl NewtonDiagram {
    /// Renders the diagram as a standalone SVG document. The shaded region
    /// is the diagram clipped to the drawn window; grid lines are omitted
    /// when the window exceeds 200 units per side.
    pub fn to_svg(&self) -> String {
        let last = self.last_vertex();
        let first = self.first_vertex();
        let width_units = last.x.to_f64().unwrap_or(f64::MAX) + 2.0;
        let height_units = first.y.to_f64().unwrap_or(f64::MAX) + 2.0;
        let scale = CELL.min(600.0 / width_units.max(height_units));
        let w = width_units * scale + 2.0 * MARGIN;
        let h = height_units * scale + 2.0 * MARGIN;
        let px = |x: f64| MARGIN + x * scale;
        let py = |y: f64| h - MARGIN - y * scale;
        let coords: Vec<(f64, f64)> = self
            .vertices
            .iter()
            .map(|v| (v.x.to_f64().unwrap_or(f64::MAX), v.y.to_f64().unwrap_or(f64::MAX)))
            .collect();

        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}">"#
        );
        let _ = writeln!(out, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
        if width_units <= MAX_GRID as f64 && height_units <= MAX_GRID as f64 {
            for i in 0..=(width_units as u64) {
                let x = px(i as f64);
                let _ = writeln!(
                    out,
                    r##"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="#e0e0e0" stroke-width="1"/>"##,
                    py(0.0),
                    py(height_units)
                );
            }
            for j in 0..=(height_units as u64) {
                let y = py(j as f64);
                let _ = writeln!(
                    out,
                    r##"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#e0e0e0" stroke-width="1"/>"##,
                    px(0.0),
                    px(width_units)
                );
            }
        }
        let _ = writeln!(
            out,
            r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#000000" stroke-width="1.5"/>"##,
            px(0.0),
            py(0.0),
            px(width_units),
            py(0.0)
        );
        let _ = writeln!(
            out,
            r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#000000" stroke-width="1.5"/>"##,
            px(0.0),
            py(0.0),
            px(0.0),
            py(height_units)
        );

        let mut region = format!("M {:.2} {:.2}", px(coords[0].0), py(height_units));
        for &(x, y) in &coords {
            let _ = write!(region, " L {:.2} {:.2}", px(x), py(y));
        }
        let _ = write!(
            region,
            " L {:.2} {:.2} L {:.2} {:.2} Z",
            px(width_units),
            py(coords[coords.len() - 1].1),
            px(width_units),
            py(height_units)
        );
        let _ = writeln!(out, r##"<path d="{region}" fill="#9ecae1" fill-opacity="0.5" stroke="none"/>"##);

        let polygon: Vec<String> = coords.iter().map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y))).collect();
        let _ = writeln!(
            out,
            r##"<polyline points="{}" fill="none" stroke="#08519c" stroke-width="2.5"/>"##,
            polygon.join(" ")
        );
        for (v, &(x, y)) in self.vertices.iter().zip(&coords) {
            let _ = writeln!(out, r##"<circle cx="{:.2}" cy="{:.2}" r="4" fill="#08519c"/>"##, px(x), py(y));
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{:.2}" font-family="monospace" font-size="11">{v}</text>"#,
                px(x) + 6.0,
                py(y) - 6.0
            );
        }
        out.push_str("</svg>\n");
        out
    }
}
