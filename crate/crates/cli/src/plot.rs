//! Static SVG line chart of CSV columns against `t`.

use std::fmt::Write;

/// Column name and `(t, value)` points; empty cells are skipped.
pub type Series = (String, Vec<(f64, f64)>);

const COLORS: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"];

/// Reads `t` and the requested columns.
pub fn read_columns<R: std::io::Read>(input: R, cols: &[String]) -> Result<Vec<Series>, String> {
    let mut rdr = csv::Reader::from_reader(input);
    let headers = rdr.headers().map_err(|e| e.to_string())?.clone();
    let index = |name: &str| headers.iter().position(|h| h == name).ok_or_else(|| format!("unknown column `{name}`"));
    let t_idx = index("t")?;
    let idx: Vec<usize> = cols.iter().map(|c| index(c)).collect::<Result<_, _>>()?;
    let mut series: Vec<Series> = cols.iter().map(|c| (c.clone(), Vec::new())).collect();
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| e.to_string())?;
        let num = |i: usize| -> Result<Option<f64>, String> {
            match rec.get(i).map(str::trim) {
                None | Some("") => Ok(None),
                Some(s) => s.parse().map(Some).map_err(|_| format!("row {}: `{s}` is not a number", row + 1)),
            }
        };
        let t = num(t_idx)?.ok_or_else(|| format!("row {}: missing t", row + 1))?;
        for (k, &i) in idx.iter().enumerate() {
            if let Some(v) = num(i)? {
                series[k].1.push((t, v));
            }
        }
    }
    Ok(series)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// One polyline per series; axes span the data range plus a 5% margin.
pub fn render(series: &[Series], width: u32, height: u32) -> String {
    let all = series.iter().flat_map(|s| s.1.iter());
    let (mut tmin, mut tmax, mut vmin, mut vmax) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(t, v) in all {
        tmin = tmin.min(t);
        tmax = tmax.max(t);
        vmin = vmin.min(v);
        vmax = vmax.max(v);
    }
    if !tmin.is_finite() {
        (tmin, tmax, vmin, vmax) = (0.0, 1.0, 0.0, 1.0);
    }
    let pad = |lo: f64, hi: f64| {
        let span = if hi > lo { hi - lo } else { 1.0 };
        (lo - 0.05 * span, hi + 0.05 * span)
    };
    let (tmin, tmax) = pad(tmin, tmax);
    let (vmin, vmax) = pad(vmin, vmax);
    let (w, h) = (width as f64, height as f64);
    let x = |t: f64| (t - tmin) / (tmax - tmin) * w;
    let y = |v: f64| h - (v - vmin) / (vmax - vmin) * h;

    let mut out = String::new();
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#);
    let _ = writeln!(out, r#"<rect width="{width}" height="{height}" fill="white"/>"#);
    if vmin < 0.0 && vmax > 0.0 {
        let _ = writeln!(out, r##"<line x1="0" y1="{0:.3}" x2="{w}" y2="{0:.3}" stroke="#999" stroke-width="0.5"/>"##, y(0.0));
    }
    for (k, (name, pts)) in series.iter().enumerate() {
        let points: Vec<String> = pts.iter().map(|&(t, v)| format!("{:.3},{:.3}", x(t), y(v))).collect();
        let color = COLORS[k % COLORS.len()];
        let name = escape(name);
        let _ = writeln!(out, r#"<polyline data-column="{name}" fill="none" stroke="{color}" stroke-width="1" points="{}"/>"#, points.join(" "));
        let _ = writeln!(out, r#"<text x="8" y="{}" font-size="12" fill="{color}">{name}</text>"#, 16 + 14 * k);
    }
    let _ = writeln!(out, r##"<text x="8" y="{}" font-size="10" fill="#333">t: [{tmin:.4}, {tmax:.4}]  value: [{vmin:.4}, {vmax:.4}]</text>"##, height.saturating_sub(6));
    out.push_str("</svg>\n");
    out
}
