//! Minimal hand-rolled SVG plots.

use crate::report::RefineRow;

const W: f64 = 640.0;
const H: f64 = 420.0;
const MARGIN: f64 = 50.0;

fn header() -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n\
         <rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>\n"
    )
}

fn axes(label_x: &str, label_y: &str) -> String {
    format!(
        "<line x1=\"{m}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>\n\
         <line x1=\"{m}\" y1=\"{m}\" x2=\"{m}\" y2=\"{b}\" stroke=\"black\"/>\n\
         <text x=\"{cx}\" y=\"{ty}\" font-size=\"13\" text-anchor=\"middle\">{label_x}</text>\n\
         <text x=\"14\" y=\"{cy}\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 14 {cy})\">{label_y}</text>\n",
        m = MARGIN,
        b = H - MARGIN,
        r = W - MARGIN,
        cx = W / 2.0,
        ty = H - 12.0,
        cy = H / 2.0,
    )
}

fn map_x(v: f64, lo: f64, hi: f64) -> f64 {
    let span = (hi - lo).max(1e-12);
    MARGIN + (v - lo) / span * (W - 2.0 * MARGIN)
}

fn map_y(v: f64, lo: f64, hi: f64) -> f64 {
    let span = (hi - lo).max(1e-12);
    H - MARGIN - (v - lo) / span * (H - 2.0 * MARGIN)
}

/// Scatter of pencil spectra, one horizontal band per task index.
pub fn spectrum_scatter(spectra: &[(usize, &Vec<f64>)]) -> String {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (_, s) in spectra {
        for &v in s.iter() {
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    if !lo.is_finite() || !hi.is_finite() {
        lo = -1.0;
        hi = 1.0;
    }
    let mut out = header();
    out.push_str(&axes("eigenvalue", "task"));
    let bands = spectra.len().max(1) as f64;
    for (row, (task_index, s)) in spectra.iter().enumerate() {
        let y = MARGIN + (row as f64 + 0.5) / bands * (H - 2.0 * MARGIN);
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"11\">task {}</text>\n",
            6.0,
            y + 4.0,
            task_index
        ));
        for &v in s.iter() {
            out.push_str(&format!(
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"steelblue\" fill-opacity=\"0.6\"/>\n",
                map_x(v, lo, hi),
                y
            ));
        }
    }
    out.push_str("</svg>\n");
    out
}

/// log2–log2 plot of the refinement ratios.
pub fn refine_loglog(rows: &[RefineRow]) -> String {
    let xs: Vec<f64> = rows.iter().map(|r| (r.n as f64).log2()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.r.max(1e-300).log2()).collect();
    let (x_lo, x_hi) = (
        xs.iter().cloned().fold(f64::INFINITY, f64::min),
        xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
    );
    let (y_lo, y_hi) = (
        ys.iter().cloned().fold(f64::INFINITY, f64::min),
        ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
    );
    let mut out = header();
    out.push_str(&axes("log2 N", "log2 r"));
    let mut path = String::new();
    for (i, (x, y)) in xs.iter().zip(&ys).enumerate() {
        let px = map_x(*x, x_lo, x_hi);
        let py = map_y(*y, y_lo, y_hi);
        path.push_str(&format!("{}{:.2},{:.2} ", if i == 0 { "M" } else { "L" }, px, py));
        out.push_str(&format!(
            "<circle cx=\"{px:.2}\" cy=\"{py:.2}\" r=\"4\" fill=\"firebrick\"/>\n"
        ));
    }
    out.push_str(&format!(
        "<path d=\"{path}\" stroke=\"firebrick\" fill=\"none\" stroke-width=\"1.5\"/>\n"
    ));
    out.push_str("</svg>\n");
    out
}
