//! Ternary SVG panels.
//!
//! The triangle is equilateral with `q0` at the apex `(1/2, √3/2)`, `q1` at
//! `(0, 0)` and `q2` at `(1, 0)`; a frequency triple sits at its barycentric
//! combination of the three vertices. Oracle cells are drawn as `<polygon>`
//! elements and sampled points as `<circle>` elements, one per point.

use std::fmt::Write as _;

use catdilemma::{ClassFilter, FrequencyTriple, Model, TriangleGrid};

use crate::config::Labels;

const HEIGHT: f64 = 0.866_025_403_784_438_6;
const SIZE: f64 = 520.0;
const MARGIN: f64 = 40.0;
const WIDTH_PX: f64 = SIZE + 2.0 * MARGIN;
const HEIGHT_PX: f64 = SIZE * HEIGHT + 2.0 * MARGIN + 60.0;

/// Cartesian position of `q` in the unit-edge triangle.
pub fn cartesian(q: &FrequencyTriple) -> (f64, f64) {
    (q.q2() + 0.5 * q.q0(), HEIGHT * q.q0())
}

fn pixel((x, y): (f64, f64)) -> (f64, f64) {
    (MARGIN + SIZE * x, MARGIN + SIZE * (HEIGHT - y))
}

/// Names of the three items under a labelling.
pub fn item_names(labels: Labels) -> [&'static str; 3] {
    match labels {
        Labels::Foods => ["food 0", "food 1", "food 2"],
        Labels::Electoral => ["candidate A", "candidate B", "candidate C"],
    }
}

pub struct Panel<'a> {
    pub model: Model,
    pub class: ClassFilter,
    pub labels: Labels,
    /// Oracle shading: the grid and which of its cells are feasible.
    pub cells: Option<(&'a TriangleGrid, &'a [bool])>,
    pub points: &'a [FrequencyTriple],
}

impl Panel<'_> {
    pub fn title(&self) -> String {
        format!(
            "{} model, {} optimal strategies",
            self.model.name(),
            self.class.name()
        )
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH_PX:.0}" height="{HEIGHT_PX:.0}" viewBox="0 0 {WIDTH_PX:.0} {HEIGHT_PX:.0}">"#
        );
        let _ = writeln!(s, "<title>{}</title>", self.title());
        let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);

        if let Some((grid, mask)) = self.cells {
            let _ = writeln!(
                s,
                r##"<g id="oracle-cells" fill="#9ecae1" stroke="#9ecae1" stroke-width="0.3">"##
            );
            for cell in grid.cells().filter(|c| mask[c.index]) {
                let pts: Vec<String> = grid
                    .corners(&cell)
                    .iter()
                    .map(|q| {
                        let (x, y) = pixel(cartesian(q));
                        format!("{x:.2},{y:.2}")
                    })
                    .collect();
                let _ = writeln!(s, r#"<polygon points="{}"/>"#, pts.join(" "));
            }
            let _ = writeln!(s, "</g>");
        }

        let corners = [
            FrequencyTriple::new(1.0, 0.0, 0.0),
            FrequencyTriple::new(0.0, 1.0, 0.0),
            FrequencyTriple::new(0.0, 0.0, 1.0),
        ]
        .map(|q| pixel(cartesian(&q.expect("vertex"))));
        let outline: Vec<String> = corners
            .iter()
            .map(|(x, y)| format!("{x:.2},{y:.2}"))
            .collect();
        let _ = writeln!(
            s,
            r#"<polygon id="axes" points="{}" fill="none" stroke="black" stroke-width="1.5"/>"#,
            outline.join(" ")
        );

        let _ = writeln!(
            s,
            r##"<g id="points" fill="#d62728" fill-opacity="0.5" stroke="none">"##
        );
        for q in self.points {
            let (x, y) = pixel(cartesian(q));
            let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="1"/>"#);
        }
        let _ = writeln!(s, "</g>");

        let names = item_names(self.labels);
        let vertex = |j: usize| {
            let (a, b) = match j {
                0 => (names[1], names[2]),
                1 => (names[0], names[2]),
                _ => (names[0], names[1]),
            };
            format!("q{j}: {a} vs {b}")
        };
        let (ax, ay) = corners[0];
        let (lx, ly) = corners[1];
        let (rx, ry) = corners[2];
        let _ = writeln!(
            s,
            r#"<g font-family="sans-serif" font-size="13" fill="black">"#
        );
        let _ = writeln!(
            s,
            r#"<text x="{ax:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            ay - 10.0,
            vertex(0)
        );
        let _ = writeln!(
            s,
            r#"<text x="{lx:.2}" y="{:.2}" text-anchor="start">{}</text>"#,
            ly + 20.0,
            vertex(1)
        );
        let _ = writeln!(
            s,
            r#"<text x="{rx:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            ry + 20.0,
            vertex(2)
        );
        let legend_y = ly + 45.0;
        let _ = writeln!(
            s,
            r##"<rect x="{MARGIN:.0}" y="{:.2}" width="10" height="10" fill="#9ecae1"/><text x="{:.0}" y="{legend_y:.2}">oracle-feasible cell</text>"##,
            legend_y - 9.0,
            MARGIN + 15.0
        );
        let _ = writeln!(
            s,
            r##"<rect x="{:.0}" y="{:.2}" width="10" height="10" fill="#d62728"/><text x="{:.0}" y="{legend_y:.2}">sampled optimal strategy ({} points)</text>"##,
            MARGIN + 180.0,
            legend_y - 9.0,
            MARGIN + 195.0,
            self.points.len()
        );
        let _ = writeln!(s, "</g>");
        let _ = writeln!(s, "</svg>");
        s
    }
}
