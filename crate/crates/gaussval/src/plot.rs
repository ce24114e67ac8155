//! Minimal hand-rolled SVG and CSV rendering of a polygon together with
//! its transform. Presentation only: coordinates are converted to f64 for
//! drawing; the exact data lives in the JSON formats.

use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::legendre::legendre_full;
use crate::polygon::{ConvexProfile, PolygonTail};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 48.0;

fn f(v: &BigRational) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

/// Sampled polyline of the polygon: its nodes, plus one tail point for a
/// constant tail.
fn polygon_points(p: &ConvexProfile) -> Vec<(f64, f64)> {
    let mut pts: Vec<(f64, f64)> = p
        .nodes()
        .iter()
        .map(|(x, y)| (*x as f64, f(y)))
        .collect();
    if p.tail() == PolygonTail::Constant {
        pts.push((p.last_node().0 as f64 + 1.0, f(p.min_value())));
    }
    pts
}

/// Sampled polyline of the transform: floor anchor, breakpoints
/// ascending, one sample above the top breakpoint.
fn transform_points(p: &ConvexProfile) -> Vec<(f64, f64)> {
    let t = legendre_full(p);
    let mut pts = vec![(f(t.validity_floor()), f(&t.eval(t.validity_floor()).expect("floor")))];
    for (bt, bv) in t.breakpoints().iter().rev() {
        pts.push((f(bt), f(bv)));
    }
    let top = match t.breakpoints().first() {
        Some((bt, _)) => bt * BigRational::new(3.into(), 2.into()) + BigRational::one(),
        None => t.validity_floor() + BigRational::one(),
    };
    pts.push((f(&top), f(&t.eval(&top).expect("above floor"))));
    pts
}

/// Renders the polygon (nodes marked) and its transform on one canvas.
pub fn render_svg(p: &ConvexProfile) -> String {
    let poly = polygon_points(p);
    let trans = transform_points(p);
    let all = poly.iter().chain(trans.iter());
    let x_max = all
        .clone()
        .map(|(x, _)| *x)
        .fold(1.0f64, f64::max);
    let y_max = all.map(|(_, y)| *y).fold(1.0f64, f64::max);
    let sx = |x: f64| MARGIN + x / x_max * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - y / y_max * (HEIGHT - 2.0 * MARGIN);
    let path = |pts: &[(f64, f64)]| {
        pts.iter()
            .map(|(x, y)| format!("{:.3},{:.3}", sx(*x), sy(*y)))
            .collect::<Vec<_>>()
            .join(" ")
    };

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    // axes
    svg.push_str(&format!(
        "<line x1=\"{m}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y0}\" stroke=\"black\" stroke-width=\"1\"/>\n",
        m = MARGIN,
        y0 = HEIGHT - MARGIN,
        x1 = WIDTH - MARGIN / 2.0
    ));
    svg.push_str(&format!(
        "<line x1=\"{m}\" y1=\"{y1}\" x2=\"{m}\" y2=\"{y0}\" stroke=\"black\" stroke-width=\"1\"/>\n",
        m = MARGIN,
        y1 = MARGIN / 2.0,
        y0 = HEIGHT - MARGIN
    ));
    svg.push_str(&format!(
        "<text x=\"{:.3}\" y=\"{:.3}\" font-size=\"12\">0</text>\n",
        MARGIN - 12.0,
        HEIGHT - MARGIN + 14.0
    ));
    svg.push_str(&format!(
        "<text x=\"{:.3}\" y=\"{:.3}\" font-size=\"12\">{x_max:.2}</text>\n",
        WIDTH - MARGIN,
        HEIGHT - MARGIN + 14.0
    ));
    svg.push_str(&format!(
        "<text x=\"{:.3}\" y=\"{:.3}\" font-size=\"12\">{y_max:.2}</text>\n",
        4.0,
        MARGIN + 4.0
    ));
    // polygon in blue, transform in red
    svg.push_str(&format!(
        "<polyline points=\"{}\" fill=\"none\" stroke=\"#4a90d6\" stroke-width=\"1.5\"/>\n",
        path(&poly)
    ));
    svg.push_str(&format!(
        "<polyline points=\"{}\" fill=\"none\" stroke=\"#d0021b\" stroke-width=\"1.5\"/>\n",
        path(&trans)
    ));
    for (x, y) in p.nodes().iter().map(|(x, y)| (*x as f64, f(y))) {
        svg.push_str(&format!(
            "<circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"3\" fill=\"#4a90d6\"/>\n",
            sx(x),
            sy(y)
        ));
    }
    let t = legendre_full(p);
    for (bt, bv) in t.breakpoints() {
        svg.push_str(&format!(
            "<circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"3\" fill=\"#d0021b\"/>\n",
            sx(f(bt)),
            sy(f(bv))
        ));
    }
    svg.push_str(&format!(
        "<text x=\"{:.3}\" y=\"{:.3}\" font-size=\"12\" fill=\"#4a90d6\">polygon</text>\n",
        WIDTH - 150.0,
        MARGIN
    ));
    svg.push_str(&format!(
        "<text x=\"{:.3}\" y=\"{:.3}\" font-size=\"12\" fill=\"#d0021b\">transform</text>\n",
        WIDTH - 150.0,
        MARGIN + 16.0
    ));
    svg.push_str("</svg>\n");
    svg
}

/// `series,x,y` rows for both curves.
pub fn render_csv(p: &ConvexProfile) -> String {
    let mut out = String::from("series,x,y\n");
    for (x, y) in polygon_points(p) {
        out.push_str(&format!("polygon,{x},{y}\n"));
    }
    for (t, v) in transform_points(p) {
        out.push_str(&format!("transform,{t},{v}\n"));
    }
    out
}
