//! Figure emitters: polygons and two-dimensional fans as standalone SVG
//! documents with a fixed scale of 40 px per lattice unit. Presentation
//! only; nothing computed here feeds back into the exact pipeline.

use num_traits::ToPrimitive;

use crate::cone::Cone;
use crate::linalg::Rat;
use crate::polygon::Polygon2;

const UNIT: f64 = 40.0;
const PAD: f64 = 1.0;

fn approx(r: &Rat) -> f64 {
    r.numer().to_f64().unwrap_or(0.0) / r.denom().to_f64().unwrap_or(1.0)
}

fn fmt(x: f64) -> String {
    format!("{:.3}", x)
}

struct Canvas {
    min_x: f64,
    max_y: f64,
    body: String,
}

impl Canvas {
    fn new(min_x: f64, max_y: f64) -> Canvas {
        Canvas {
            min_x,
            max_y,
            body: String::new(),
        }
    }

    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        (
            (x - self.min_x + PAD) * UNIT,
            (self.max_y - y + PAD) * UNIT,
        )
    }

    fn finish(self, width: f64, height: f64) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {} {}\">\n{}</svg>\n",
            fmt((width + 2.0 * PAD) * UNIT),
            fmt((height + 2.0 * PAD) * UNIT),
            self.body
        )
    }
}

fn grid(canvas: &mut Canvas, min_x: f64, max_x: f64, min_y: f64, max_y: f64) {
    for i in (min_x.floor() as i64)..=(max_x.ceil() as i64) {
        let (x1, y1) = canvas.map(i as f64, min_y);
        let (x2, y2) = canvas.map(i as f64, max_y);
        canvas.body.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#ddd\" stroke-width=\"1\"/>\n",
            fmt(x1), fmt(y1), fmt(x2), fmt(y2)
        ));
    }
    for j in (min_y.floor() as i64)..=(max_y.ceil() as i64) {
        let (x1, y1) = canvas.map(min_x, j as f64);
        let (x2, y2) = canvas.map(max_x, j as f64);
        canvas.body.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#ddd\" stroke-width=\"1\"/>\n",
            fmt(x1), fmt(y1), fmt(x2), fmt(y2)
        ));
    }
}

/// Polygon figure: light grid, filled polygon, vertex dots.
pub fn polygon_svg(p: &Polygon2) -> String {
    let pts: Vec<(f64, f64)> = p
        .vertices()
        .iter()
        .map(|(x, y)| (approx(x), approx(y)))
        .collect();
    let min_x = pts.iter().map(|p| p.0).fold(0.0, f64::min);
    let max_x = pts.iter().map(|p| p.0).fold(0.0, f64::max);
    let min_y = pts.iter().map(|p| p.1).fold(0.0, f64::min);
    let max_y = pts.iter().map(|p| p.1).fold(0.0, f64::max);
    let mut canvas = Canvas::new(min_x, max_y);
    grid(&mut canvas, min_x, max_x, min_y, max_y);
    if pts.len() >= 2 {
        let path: Vec<String> = pts
            .iter()
            .map(|&(x, y)| {
                let (px, py) = canvas.map(x, y);
                format!("{},{}", fmt(px), fmt(py))
            })
            .collect();
        canvas.body.push_str(&format!(
            "<polygon points=\"{}\" fill=\"#9ecae1\" fill-opacity=\"0.6\" stroke=\"#3182bd\" stroke-width=\"2\"/>\n",
            path.join(" ")
        ));
    }
    for &(x, y) in &pts {
        let (px, py) = canvas.map(x, y);
        canvas.body.push_str(&format!(
            "<circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"#08519c\"/>\n",
            fmt(px),
            fmt(py)
        ));
    }
    canvas.finish(max_x - min_x, max_y - min_y)
}

/// Two-dimensional fan figure: chambers as wedges clipped to a disc of
/// lattice radius 4, rays as arrows.
pub fn fan_svg(chambers: &[Cone]) -> String {
    const R: f64 = 4.0;
    let mut canvas = Canvas::new(-R, R);
    grid(&mut canvas, -R, R, -R, R);
    let palette = ["#a1d99b", "#9ecae1", "#fdae6b", "#bcbddc", "#fc9272", "#c7e9c0"];
    for (k, ch) in chambers.iter().enumerate() {
        if ch.dim != 2 || ch.rays.len() < 2 {
            continue;
        }
        let dirs: Vec<(f64, f64)> = ch
            .rays
            .iter()
            .map(|r| {
                let (x, y) = (approx(&r[0]), approx(&r[1]));
                let n = (x * x + y * y).sqrt().max(1e-9);
                (x / n * R, y / n * R)
            })
            .collect();
        let (o1, o2) = canvas.map(0.0, 0.0);
        let mut path = format!("M {},{}", fmt(o1), fmt(o2));
        for d in &dirs {
            let (px, py) = canvas.map(d.0, d.1);
            path.push_str(&format!(" L {},{}", fmt(px), fmt(py)));
        }
        path.push_str(" Z");
        canvas.body.push_str(&format!(
            "<path d=\"{}\" fill=\"{}\" fill-opacity=\"0.5\" stroke=\"none\"/>\n",
            path,
            palette[k % palette.len()]
        ));
    }
    let mut drawn: Vec<Vec<Rat>> = Vec::new();
    for ch in chambers {
        for r in &ch.rays {
            if drawn.contains(r) {
                continue;
            }
            drawn.push(r.clone());
            let (x, y) = (approx(&r[0]), approx(&r[1]));
            let n = (x * x + y * y).sqrt().max(1e-9);
            let (x1, y1) = canvas.map(0.0, 0.0);
            let (x2, y2) = canvas.map(x / n * R, y / n * R);
            canvas.body.push_str(&format!(
                "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#636363\" stroke-width=\"2\"/>\n",
                fmt(x1), fmt(y1), fmt(x2), fmt(y2)
            ));
        }
    }
    canvas.finish(2.0 * R, 2.0 * R)
}
