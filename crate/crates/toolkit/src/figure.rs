//! Slice figures. SVG output uses a fixed convention: symplectic `(x, y)`
//! axes with `y` up, one unit = 100 px, so figures diff cleanly.

use std::fmt::Write as _;
use std::path::Path;

use antisurgery_core::symplectic::PlanarCurve;

use crate::error::CliError;

pub const UNIT_PX: f64 = 100.0;
const MARGIN_PX: f64 = 20.0;

#[derive(Debug, Clone)]
pub struct Figure {
    pub title: String,
    pub curves: Vec<(String, PlanarCurve)>,
}

impl Figure {
    pub fn new(title: impl Into<String>) -> Self {
        Self {
            title: title.into(),
            curves: Vec::new(),
        }
    }

    pub fn add(&mut self, label: impl Into<String>, curve: PlanarCurve) -> &mut Self {
        self.curves.push((label.into(), curve));
        self
    }

    fn bounds(&self) -> [f64; 4] {
        let mut b = [0.0f64, 0.0, 0.0, 0.0];
        for (_, c) in &self.curves {
            for p in c.points() {
                b[0] = b[0].min(p[0]);
                b[1] = b[1].min(p[1]);
                b[2] = b[2].max(p[0]);
                b[3] = b[3].max(p[1]);
            }
        }
        b
    }

    pub fn to_svg(&self) -> String {
        let [x0, y0, x1, y1] = self.bounds();
        let (left, top) = (x0 * UNIT_PX - MARGIN_PX, -y1 * UNIT_PX - MARGIN_PX);
        let (w, h) = ((x1 - x0) * UNIT_PX + 2.0 * MARGIN_PX, (y1 - y0) * UNIT_PX + 2.0 * MARGIN_PX);
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{left:.3} {top:.3} {w:.3} {h:.3}" width="{w:.0}" height="{h:.0}">"#
        );
        let _ = writeln!(s, "<title>{}</title>", escape(&self.title));
        let _ = writeln!(
            s,
            r##"<g stroke="#999" stroke-width="0.5"><line x1="{:.3}" y1="0" x2="{:.3}" y2="0"/><line x1="0" y1="{:.3}" x2="0" y2="{:.3}"/></g>"##,
            left,
            left + w,
            top,
            top + h
        );
        for (i, (label, c)) in self.curves.iter().enumerate() {
            let pts: Vec<String> = c
                .points()
                .iter()
                .map(|p| format!("{:.3},{:.3}", p[0] * UNIT_PX, -p[1] * UNIT_PX))
                .collect();
            let _ = writeln!(
                s,
                r#"<polyline data-label="{}" fill="none" stroke="{}" stroke-width="1" points="{}"/>"#,
                escape(label),
                PALETTE[i % PALETTE.len()],
                pts.join(" ")
            );
        }
        s.push_str("</svg>\n");
        s
    }

    /// Columns `curve,label,x,y`, one row per vertex.
    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let err = |e: csv::Error| CliError::Usage(format!("csv: {e}"));
        w.write_record(["curve", "label", "x", "y"]).map_err(err)?;
        for (i, (label, c)) in self.curves.iter().enumerate() {
            for p in c.points() {
                w.write_record([i.to_string(), label.clone(), format!("{:e}", p[0]), format!("{:e}", p[1])])
                    .map_err(err)?;
            }
        }
        let bytes = w.into_inner().map_err(|e| CliError::Usage(format!("csv: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    /// Writes SVG or CSV depending on the extension.
    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        let body = match path.extension().and_then(|e| e.to_str()) {
            Some("svg") => self.to_svg(),
            Some("csv") => self.to_csv()?,
            _ => return Err(CliError::Usage(format!("--emit-slice expects a .svg or .csv path, got {}", path.display()))),
        };
        std::fs::write(path, body).map_err(|e| CliError::io(path, e))
    }
}

const PALETTE: [&str; 6] = ["#1f5fa8", "#c0392b", "#2e8b57", "#8e44ad", "#d35400", "#555"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_circle() -> PlanarCurve {
        PlanarCurve::sample_closed(32, std::f64::consts::TAU, |t| [t.cos(), t.sin()]).unwrap()
    }

    #[test]
    fn svg_has_axes_and_one_polyline_per_curve() {
        let mut f = Figure::new("circles");
        f.add("a", unit_circle()).add("b", unit_circle());
        let svg = f.to_svg();
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert_eq!(svg.matches("<line").count(), 2);
        assert_eq!(svg, f.to_svg());
    }

    #[test]
    fn csv_rows_are_labelled() {
        let mut f = Figure::new("c");
        f.add("circle", unit_circle());
        let csv = f.to_csv().unwrap();
        let rows: Vec<_> = csv.lines().collect();
        assert_eq!(rows[0], "curve,label,x,y");
        assert!(rows[1].starts_with("0,circle,1"));
    }
}
