//! Deterministic SVG rendering of sweep results: `log10(NMSE)` against
//! delta, theory as solid polylines and empirical means as dots with error
//! bars, one color per lambda. Output bytes depend only on the rows.

use crate::error::{Error, Result};

use super::ResultRow;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 560.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 150.0;
const MARGIN_T: f64 = 30.0;
const MARGIN_B: f64 = 55.0;

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

fn fmt(v: f64) -> String {
    format!("{v:.2}")
}

fn fmt_value(v: f64) -> String {
    // compact tick/legend label
    if v != 0.0 && (v.abs() < 1e-3 || v.abs() >= 1e4) {
        format!("{v:e}")
    } else {
        let s = format!("{v:.3}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        s.to_string()
    }
}

pub(crate) fn render_svg(rows: &[ResultRow]) -> Result<String> {
    if rows.is_empty() {
        return Err(Error::EmptyRows);
    }

    let mut lambdas: Vec<f64> = Vec::new();
    for r in rows {
        if !lambdas.contains(&r.lambda) {
            lambdas.push(r.lambda);
        }
    }
    let mut deltas: Vec<f64> = Vec::new();
    for r in rows {
        if !deltas.contains(&r.delta) {
            deltas.push(r.delta);
        }
    }
    deltas.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let mut logs: Vec<f64> = Vec::new();
    for r in rows {
        for v in [
            r.nmse_theory,
            r.nmse_emp_mean,
            r.nmse_emp_mean - r.nmse_emp_std,
            r.nmse_emp_mean + r.nmse_emp_std,
        ] {
            if v.is_finite() && v > 0.0 {
                logs.push(v.log10());
            }
        }
    }
    if logs.is_empty() {
        return Err(Error::BadConfig("no positive finite values to plot".into()));
    }
    let y_lo = logs.iter().cloned().fold(f64::INFINITY, f64::min) - 0.25;
    let y_hi = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + 0.25;

    let (x_lo, x_hi) = {
        let lo = deltas[0];
        let hi = deltas[deltas.len() - 1];
        if lo == hi {
            (lo - 0.5, hi + 0.5)
        } else {
            let pad = 0.04 * (hi - lo);
            (lo - pad, hi + pad)
        }
    };

    let map_x = |d: f64| MARGIN_L + (d - x_lo) / (x_hi - x_lo) * (WIDTH - MARGIN_L - MARGIN_R);
    let map_y =
        |v: f64| MARGIN_T + (y_hi - v.log10()) / (y_hi - y_lo) * (HEIGHT - MARGIN_T - MARGIN_B);

    let mut s = String::new();
    s.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    s.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    // frame
    let plot_r = WIDTH - MARGIN_R;
    let plot_b = HEIGHT - MARGIN_B;
    s.push_str(&format!(
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#333\"/>\n",
        fmt(MARGIN_L),
        fmt(MARGIN_T),
        fmt(plot_r - MARGIN_L),
        fmt(plot_b - MARGIN_T)
    ));

    // y ticks at integer powers of ten
    let k_lo = y_lo.ceil() as i64;
    let k_hi = y_hi.floor() as i64;
    let step = (((k_hi - k_lo) as f64 / 8.0).ceil() as i64).max(1);
    let mut k = k_lo;
    while k <= k_hi {
        let y = MARGIN_T + (y_hi - k as f64) / (y_hi - y_lo) * (plot_b - MARGIN_T);
        s.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#ddd\"/>\n",
            fmt(MARGIN_L),
            fmt(y),
            fmt(plot_r),
            fmt(y)
        ));
        s.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"end\" \
             font-family=\"sans-serif\">1e{k}</text>\n",
            fmt(MARGIN_L - 6.0),
            fmt(y + 4.0)
        ));
        k += step;
    }

    // x ticks at the realized delta values
    for &d in &deltas {
        let x = map_x(d);
        s.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#333\"/>\n",
            fmt(x),
            fmt(plot_b),
            fmt(x),
            fmt(plot_b + 5.0)
        ));
        s.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\" \
             font-family=\"sans-serif\">{}</text>\n",
            fmt(x),
            fmt(plot_b + 20.0),
            fmt_value(d)
        ));
    }

    // axis labels
    s.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"13\" text-anchor=\"middle\" \
         font-family=\"sans-serif\">delta = n_y / n_x</text>\n",
        fmt((MARGIN_L + plot_r) / 2.0),
        fmt(HEIGHT - 12.0)
    ));
    s.push_str(&format!(
        "<text x=\"18\" y=\"{}\" font-size=\"13\" text-anchor=\"middle\" \
         font-family=\"sans-serif\" transform=\"rotate(-90 18 {})\">NMSE (log scale)</text>\n",
        fmt((MARGIN_T + plot_b) / 2.0),
        fmt((MARGIN_T + plot_b) / 2.0)
    ));
    s.push_str(&format!(
        "<text x=\"{}\" y=\"18\" font-size=\"13\" text-anchor=\"middle\" \
         font-family=\"sans-serif\">theory: lines, simulation: dots</text>\n",
        fmt((MARGIN_L + plot_r) / 2.0)
    ));

    for (li, &lambda) in lambdas.iter().enumerate() {
        let color = PALETTE[li % PALETTE.len()];
        let mut series: Vec<&ResultRow> = rows.iter().filter(|r| r.lambda == lambda).collect();
        series.sort_by(|a, b| a.delta.partial_cmp(&b.delta).unwrap());

        // theory polyline
        let pts: Vec<String> = series
            .iter()
            .filter(|r| r.nmse_theory.is_finite() && r.nmse_theory > 0.0)
            .map(|r| format!("{},{}", fmt(map_x(r.delta)), fmt(map_y(r.nmse_theory))))
            .collect();
        if pts.len() >= 2 {
            s.push_str(&format!(
                "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.8\"/>\n",
                pts.join(" ")
            ));
        }

        // empirical dots and error bars
        for r in &series {
            if !(r.nmse_emp_mean.is_finite() && r.nmse_emp_mean > 0.0) {
                continue;
            }
            let x = map_x(r.delta);
            let lo = r.nmse_emp_mean - r.nmse_emp_std;
            let hi = r.nmse_emp_mean + r.nmse_emp_std;
            if r.nmse_emp_std > 0.0 && lo > 0.0 {
                s.push_str(&format!(
                    "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{color}\" \
                     stroke-width=\"1\"/>\n",
                    fmt(x),
                    fmt(map_y(lo)),
                    fmt(x),
                    fmt(map_y(hi))
                ));
            }
            s.push_str(&format!(
                "<circle cx=\"{}\" cy=\"{}\" r=\"3.2\" fill=\"{color}\"/>\n",
                fmt(x),
                fmt(map_y(r.nmse_emp_mean))
            ));
        }

        // legend entry
        let ly = MARGIN_T + 18.0 + 22.0 * li as f64;
        s.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{color}\" stroke-width=\"1.8\"/>\n",
            fmt(plot_r + 12.0),
            fmt(ly),
            fmt(plot_r + 40.0),
            fmt(ly)
        ));
        s.push_str(&format!(
            "<circle cx=\"{}\" cy=\"{}\" r=\"3.2\" fill=\"{color}\"/>\n",
            fmt(plot_r + 26.0),
            fmt(ly)
        ));
        s.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"12\" font-family=\"sans-serif\">lambda = {}</text>\n",
            fmt(plot_r + 48.0),
            fmt(ly + 4.0),
            fmt_value(lambda)
        ));
    }

    s.push_str("</svg>\n");
    Ok(s)
}
