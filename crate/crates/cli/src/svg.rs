//! Minimal SVG line plot of a CAR path with its confidence band.

use marketlab::event::EventResult;

const W: f64 = 720.0;
const H: f64 = 420.0;
const MARGIN: f64 = 50.0;

fn map_x(rel: f64, lo: f64, hi: f64) -> f64 {
    MARGIN + (rel - lo) / (hi - lo).max(1e-12) * (W - 2.0 * MARGIN)
}

fn map_y(v: f64, lo: f64, hi: f64) -> f64 {
    H - MARGIN - (v - lo) / (hi - lo).max(1e-12) * (H - 2.0 * MARGIN)
}

/// Render the cumulative abnormal return with its CI band.
pub fn car_plot(result: &EventResult, title: &str) -> String {
    let days = &result.days;
    let x_lo = days.first().map_or(0.0, |d| d.rel_day as f64);
    let x_hi = days.last().map_or(1.0, |d| d.rel_day as f64);
    let mut y_lo = f64::INFINITY;
    let mut y_hi = f64::NEG_INFINITY;
    for d in days {
        y_lo = y_lo.min(d.ci_lo).min(0.0);
        y_hi = y_hi.max(d.ci_hi).max(0.0);
    }
    let pad = 0.05 * (y_hi - y_lo).max(1e-9);
    y_lo -= pad;
    y_hi += pad;

    let pt = |x: f64, y: f64| format!("{:.2},{:.2}", map_x(x, x_lo, x_hi), map_y(y, y_lo, y_hi));

    let mut band = String::new();
    for d in days {
        band.push_str(&pt(d.rel_day as f64, d.ci_hi));
        band.push(' ');
    }
    for d in days.iter().rev() {
        band.push_str(&pt(d.rel_day as f64, d.ci_lo));
        band.push(' ');
    }

    let car_line: String = days
        .iter()
        .map(|d| pt(d.rel_day as f64, d.car))
        .collect::<Vec<_>>()
        .join(" ");

    let zero_y = map_y(0.0, y_lo, y_hi);
    let event_x = map_x(0.0, x_lo, x_hi);

    format!(
        concat!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" ",
            "viewBox=\"0 0 {w} {h}\">\n",
            "<rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n",
            "<text x=\"{tx}\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" ",
            "font-size=\"14\">{title}</text>\n",
            "<polygon points=\"{band}\" fill=\"#9ecae1\" fill-opacity=\"0.45\" stroke=\"none\"/>\n",
            "<line x1=\"{m}\" y1=\"{zy}\" x2=\"{xe}\" y2=\"{zy}\" stroke=\"#888888\" ",
            "stroke-dasharray=\"4 3\"/>\n",
            "<line x1=\"{ex}\" y1=\"{m}\" x2=\"{ex}\" y2=\"{ym}\" stroke=\"#bbbbbb\" ",
            "stroke-dasharray=\"2 3\"/>\n",
            "<polyline points=\"{car}\" fill=\"none\" stroke=\"#08519c\" stroke-width=\"1.8\"/>\n",
            "<text x=\"{tx}\" y=\"{yl}\" text-anchor=\"middle\" font-family=\"sans-serif\" ",
            "font-size=\"11\">event-relative trading day</text>\n",
            "</svg>\n"
        ),
        w = W,
        h = H,
        tx = W / 2.0,
        title = title,
        band = band.trim_end(),
        m = MARGIN,
        xe = W - MARGIN,
        zy = format!("{zero_y:.2}"),
        ex = format!("{event_x:.2}"),
        ym = H - MARGIN,
        car = car_line,
        yl = H - 14.0,
    )
}
