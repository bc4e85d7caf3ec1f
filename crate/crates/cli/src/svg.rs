//! Static SVG rendering of a curve and an optional sample cloud.
//!
//! Output is a pure function of the input rows: fixed canvas, fixed
//! formatting, no timestamps or randomness, so identical inputs produce
//! byte-identical files.

pub const WIDTH: f64 = 720.0;
pub const HEIGHT: f64 = 540.0;
pub const MARGIN_LEFT: f64 = 70.0;
pub const MARGIN_RIGHT: f64 = 20.0;
pub const MARGIN_TOP: f64 = 20.0;
pub const MARGIN_BOTTOM: f64 = 50.0;

/// Affine map from data coordinates to screen coordinates (y flipped).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transform {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Transform {
    /// Bounding box of all data points, padded by 5% per side.
    pub fn fit<I: IntoIterator<Item = (f64, f64)>>(points: I) -> Self {
        let (mut x_min, mut x_max) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut y_min, mut y_max) = (f64::INFINITY, f64::NEG_INFINITY);
        for (x, y) in points {
            x_min = x_min.min(x);
            x_max = x_max.max(x);
            y_min = y_min.min(y);
            y_max = y_max.max(y);
        }
        if !x_min.is_finite() {
            (x_min, x_max, y_min, y_max) = (0.0, 1.0, 0.0, 1.0);
        }
        let x_pad = 0.05 * (x_max - x_min).max(1e-9);
        let y_pad = 0.05 * (y_max - y_min).max(1e-9);
        Self {
            x_min: x_min - x_pad,
            x_max: x_max + x_pad,
            y_min: y_min - y_pad,
            y_max: y_max + y_pad,
        }
    }

    pub fn to_screen(self, x: f64, y: f64) -> (f64, f64) {
        let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
        let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
        let sx = MARGIN_LEFT + (x - self.x_min) / (self.x_max - self.x_min) * plot_w;
        let sy = HEIGHT - MARGIN_BOTTOM - (y - self.y_min) / (self.y_max - self.y_min) * plot_h;
        (sx, sy)
    }
}

fn tick_label(v: f64) -> String {
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s.is_empty() || s == "-" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

/// Render curve points (polyline) and cloud points (dots) into an SVG
/// document. Both inputs are (spectral spread, graph spread) rows.
pub fn render(curve: &[(f64, f64)], cloud: &[(f64, f64)]) -> String {
    let tf = Transform::fit(curve.iter().chain(cloud.iter()).copied());
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    // axes
    let x0 = MARGIN_LEFT;
    let x1 = WIDTH - MARGIN_RIGHT;
    let y0 = HEIGHT - MARGIN_BOTTOM;
    let y1 = MARGIN_TOP;
    svg.push_str(&format!(
        "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y0}\" stroke=\"black\"/>\n\
         <line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x0}\" y2=\"{y1}\" stroke=\"black\"/>\n"
    ));
    for i in 0..=5 {
        let f = i as f64 / 5.0;
        let xv = tf.x_min + f * (tf.x_max - tf.x_min);
        let yv = tf.y_min + f * (tf.y_max - tf.y_min);
        let (sx, _) = tf.to_screen(xv, tf.y_min);
        let (_, sy) = tf.to_screen(tf.x_min, yv);
        svg.push_str(&format!(
            "<line x1=\"{sx:.3}\" y1=\"{y0}\" x2=\"{sx:.3}\" y2=\"{:.3}\" stroke=\"black\"/>\n",
            y0 + 5.0
        ));
        svg.push_str(&format!(
            "<text x=\"{sx:.3}\" y=\"{:.3}\" font-size=\"12\" text-anchor=\"middle\">{}</text>\n",
            y0 + 20.0,
            tick_label(xv)
        ));
        svg.push_str(&format!(
            "<line x1=\"{:.3}\" y1=\"{sy:.3}\" x2=\"{x0}\" y2=\"{sy:.3}\" stroke=\"black\"/>\n",
            x0 - 5.0
        ));
        svg.push_str(&format!(
            "<text x=\"{:.3}\" y=\"{:.3}\" font-size=\"12\" text-anchor=\"end\">{}</text>\n",
            x0 - 8.0,
            sy + 4.0,
            tick_label(yv)
        ));
    }
    svg.push_str(&format!(
        "<text x=\"{:.3}\" y=\"{:.3}\" font-size=\"14\" text-anchor=\"middle\">spectral spread</text>\n",
        (x0 + x1) / 2.0,
        HEIGHT - 10.0
    ));
    svg.push_str(&format!(
        "<text x=\"16\" y=\"{:.3}\" font-size=\"14\" text-anchor=\"middle\" \
         transform=\"rotate(-90 16 {:.3})\">graph spread</text>\n",
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    ));

    // cloud first so the curve draws on top
    for &(x, y) in cloud {
        let (sx, sy) = tf.to_screen(x, y);
        svg.push_str(&format!(
            "<circle cx=\"{sx:.3}\" cy=\"{sy:.3}\" r=\"1.5\" fill=\"steelblue\" fill-opacity=\"0.5\"/>\n"
        ));
    }
    if !curve.is_empty() {
        let pts: Vec<String> = curve
            .iter()
            .map(|&(x, y)| {
                let (sx, sy) = tf.to_screen(x, y);
                format!("{sx:.3},{sy:.3}")
            })
            .collect();
        svg.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"crimson\" stroke-width=\"1.5\"/>\n",
            pts.join(" ")
        ));
    }
    svg.push_str("</svg>\n");
    svg
}
