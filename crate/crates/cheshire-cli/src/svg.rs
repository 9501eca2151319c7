//! Minimal self-contained SVG scatter plots with an optional fitted-curve
//! overlay. No plotting dependency: the figures are simple enough (points
//! plus one sinusoid) that direct generation keeps the output reproducible.

use cheshire::analysis::FringeFit;
use cheshire::montecarlo::CountRecord;

const WIDTH: f64 = 860.0;
const HEIGHT: f64 = 560.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 50.0;
const MARGIN_BOTTOM: f64 = 60.0;

struct Axis {
    min: f64,
    max: f64,
    span_px: f64,
    offset_px: f64,
    flip: bool,
}

impl Axis {
    fn to_px(&self, v: f64) -> f64 {
        let t = (v - self.min) / (self.max - self.min);
        let t = if self.flip { 1.0 - t } else { t };
        self.offset_px + t * self.span_px
    }

    fn ticks(&self, n: usize) -> Vec<f64> {
        (0..=n)
            .map(|i| self.min + (self.max - self.min) * i as f64 / n as f64)
            .collect()
    }
}

/// Renders count records as a scatter plot; when a fit is supplied its model
/// curve is overlaid.
pub fn render_counts_plot(records: &[CountRecord], fit: Option<&FringeFit>, title: &str) -> String {
    let (x_min, x_max) = bounds(records.iter().map(|r| r.phase));
    let (y_lo, y_hi) = bounds(records.iter().map(|r| r.counts as f64));
    let pad = ((y_hi - y_lo) * 0.1).max(1.0);
    let x = Axis {
        min: x_min,
        max: if x_max > x_min { x_max } else { x_min + 1.0 },
        span_px: WIDTH - MARGIN_LEFT - MARGIN_RIGHT,
        offset_px: MARGIN_LEFT,
        flip: false,
    };
    let y = Axis {
        min: (y_lo - pad).max(0.0),
        max: y_hi + pad,
        span_px: HEIGHT - MARGIN_TOP - MARGIN_BOTTOM,
        offset_px: MARGIN_TOP,
        flip: true,
    };

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" \
         font-family=\"sans-serif\" font-size=\"14\">\n"
    ));
    svg.push_str(&format!(
        "  <text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"17\">{}</text>\n",
        WIDTH / 2.0,
        escape(title)
    ));

    // Axes and ticks.
    let plot_bottom = HEIGHT - MARGIN_BOTTOM;
    svg.push_str(&format!(
        "  <line x1=\"{MARGIN_LEFT}\" y1=\"{plot_bottom}\" x2=\"{}\" y2=\"{plot_bottom}\" stroke=\"black\"/>\n",
        WIDTH - MARGIN_RIGHT
    ));
    svg.push_str(&format!(
        "  <line x1=\"{MARGIN_LEFT}\" y1=\"{MARGIN_TOP}\" x2=\"{MARGIN_LEFT}\" y2=\"{plot_bottom}\" stroke=\"black\"/>\n"
    ));
    for t in x.ticks(6) {
        let px = x.to_px(t);
        svg.push_str(&format!(
            "  <line x1=\"{px}\" y1=\"{plot_bottom}\" x2=\"{px}\" y2=\"{}\" stroke=\"black\"/>\n",
            plot_bottom + 6.0
        ));
        svg.push_str(&format!(
            "  <text x=\"{px}\" y=\"{}\" text-anchor=\"middle\">{:.2}</text>\n",
            plot_bottom + 24.0,
            t
        ));
    }
    for t in y.ticks(5) {
        let py = y.to_px(t);
        svg.push_str(&format!(
            "  <line x1=\"{}\" y1=\"{py}\" x2=\"{MARGIN_LEFT}\" y2=\"{py}\" stroke=\"black\"/>\n",
            MARGIN_LEFT - 6.0
        ));
        svg.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" text-anchor=\"end\">{:.0}</text>\n",
            MARGIN_LEFT - 10.0,
            py + 5.0,
            t
        ));
    }
    svg.push_str(&format!(
        "  <text x=\"{}\" y=\"{}\" text-anchor=\"middle\">phase (rad)</text>\n",
        MARGIN_LEFT + x.span_px / 2.0,
        HEIGHT - 14.0
    ));
    svg.push_str(&format!(
        "  <text x=\"20\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 20 {})\">counts per bin</text>\n",
        MARGIN_TOP + y.span_px / 2.0,
        MARGIN_TOP + y.span_px / 2.0
    ));

    // Fitted curve under the points.
    if let Some(fit) = fit {
        let samples = 256;
        let mut d = String::new();
        for i in 0..=samples {
            let phase = x.min + (x.max - x.min) * i as f64 / samples as f64;
            let value = fit.mean_level * (1.0 - fit.visibility * (phase - fit.phase_offset).cos());
            let cmd = if i == 0 { 'M' } else { 'L' };
            d.push_str(&format!("{cmd}{:.2} {:.2} ", x.to_px(phase), y.to_px(value)));
        }
        svg.push_str(&format!(
            "  <path d=\"{}\" fill=\"none\" stroke=\"#d95f02\" stroke-width=\"2\"/>\n",
            d.trim_end()
        ));
    }

    for r in records {
        svg.push_str(&format!(
            "  <circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"#1f77b4\"/>\n",
            x.to_px(r.phase),
            y.to_px(r.counts as f64)
        ));
    }

    svg.push_str("</svg>\n");
    svg
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    })
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
