//! Single-file SVG line chart of the sweep: signal-to-noise against the
//! window shrink fraction, one polyline per channel. Purely cosmetic output;
//! nothing downstream reads it back.

use crate::io::csv::SweepRecord;
use std::fmt::Write;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN_LEFT: f64 = 64.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 28.0;
const MARGIN_BOTTOM: f64 = 48.0;

fn color_for(channel: &str) -> &'static str {
    match channel {
        "r" => "#c0392b",
        "g" => "#27a05d",
        "b" => "#2e6fc0",
        _ => "#444444",
    }
}

fn fmt(v: f64) -> String {
    format!("{v:.2}")
}

/// Renders the chart, or a placeholder note when there is nothing to plot.
pub fn snr_chart(records: &[SweepRecord]) -> String {
    let mut out = String::new();
    let _ = write!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n\
         <rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
    );
    if records.is_empty() {
        out.push_str("<text x=\"20\" y=\"40\" font-family=\"sans-serif\">no records</text>\n</svg>\n");
        return out;
    }

    let (x0, x1) = (MARGIN_LEFT, WIDTH - MARGIN_RIGHT);
    let (y0, y1) = (HEIGHT - MARGIN_BOTTOM, MARGIN_TOP);
    let snr_min = records.iter().map(|r| r.snr_db).fold(f64::INFINITY, f64::min);
    let snr_max = records.iter().map(|r| r.snr_db).fold(f64::NEG_INFINITY, f64::max);
    let pad = (0.05 * (snr_max - snr_min)).max(0.5);
    let (lo, hi) = (snr_min - pad, snr_max + pad);
    let x_of = |shrink: f64| x0 + shrink.clamp(0.0, 1.0) * (x1 - x0);
    let y_of = |snr: f64| y0 + (snr - lo) / (hi - lo) * (y1 - y0);

    // Axes and ticks.
    let _ = write!(
        out,
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#222\"/>\n\
         <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#222\"/>\n",
        fmt(x0), fmt(y0), fmt(x1), fmt(y0), fmt(x0), fmt(y0), fmt(x0), fmt(y1)
    );
    for i in 0..=4 {
        let shrink = i as f64 * 0.25;
        let x = x_of(shrink);
        let _ = write!(
            out,
            "<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"#222\"/>\n\
             <text x=\"{0}\" y=\"{3}\" font-family=\"sans-serif\" font-size=\"12\" \
             text-anchor=\"middle\">{4}</text>\n",
            fmt(x),
            fmt(y0),
            fmt(y0 + 5.0),
            fmt(y0 + 20.0),
            shrink
        );
    }
    for i in 0..=4 {
        let snr = lo + (hi - lo) * i as f64 / 4.0;
        let y = y_of(snr);
        let _ = write!(
            out,
            "<line x1=\"{1}\" y1=\"{0}\" x2=\"{2}\" y2=\"{0}\" stroke=\"#222\"/>\n\
             <text x=\"{3}\" y=\"{4}\" font-family=\"sans-serif\" font-size=\"12\" \
             text-anchor=\"end\">{5}</text>\n",
            fmt(y),
            fmt(x0 - 5.0),
            fmt(x0),
            fmt(x0 - 9.0),
            fmt(y + 4.0),
            fmt(snr)
        );
    }
    let _ = write!(
        out,
        "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"13\" \
         text-anchor=\"middle\">window shrink 1 - n/N</text>\n\
         <text x=\"16\" y=\"{}\" font-family=\"sans-serif\" font-size=\"13\" \
         transform=\"rotate(-90 16 {})\" text-anchor=\"middle\">snr (dB)</text>\n",
        fmt((x0 + x1) / 2.0),
        fmt(HEIGHT - 12.0),
        fmt((y0 + y1) / 2.0),
        fmt((y0 + y1) / 2.0)
    );

    // One polyline per channel, channels in first-seen order.
    let mut channels: Vec<&str> = Vec::new();
    for r in records {
        if !channels.contains(&r.channel.as_str()) {
            channels.push(&r.channel);
        }
    }
    for (slot, channel) in channels.iter().enumerate() {
        let mut points: Vec<(f64, f64)> = records
            .iter()
            .filter(|r| r.channel == *channel)
            .map(|r| (r.shrink, r.snr_db))
            .collect();
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        let path: Vec<String> =
            points.iter().map(|(s, v)| format!("{},{}", fmt(x_of(*s)), fmt(y_of(*v)))).collect();
        let color = color_for(channel);
        let _ = writeln!(
            out,
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.8\" points=\"{}\"/>",
            path.join(" ")
        );
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" \
             fill=\"{color}\">{channel}</text>",
            fmt(x1 - 40.0),
            fmt(y1 + 14.0 * slot as f64 + 4.0)
        );
    }
    out.push_str("</svg>\n");
    out
}
