//! CSV, JSON and SVG output for scenario reports. All output is a pure
//! function of its input, so identical reports give identical bytes.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::channel::QGrid;
use crate::config::Config;
use crate::engine::{Report, Row};
use crate::error::Result;

pub const SCHEMA_VERSION: u32 = 1;

/// Fixed 12-significant-digit scientific notation; absent values as nan.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.11e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "nan".to_string(), fmt_num)
}

pub fn csv_header_comment(config_sha256: &str) -> String {
    format!("# qpiston schema={SCHEMA_VERSION} config_sha256={config_sha256}\n")
}

fn table(hash: &str, columns: &[&str], rows: impl Iterator<Item = Vec<String>>) -> String {
    let mut out = csv_header_comment(hash);
    out.push_str(&columns.join(","));
    out.push('\n');
    for r in rows {
        out.push_str(&r.join(","));
        out.push('\n');
    }
    out
}

pub fn energy_csv(rows: &[Row], hash: &str) -> String {
    table(
        hash,
        &["t_cycles", "mean_energy", "coherent_component"],
        rows.iter().map(|r| vec![fmt_num(r.t_cycles), fmt_num(r.energy), fmt_num(r.coherent_component)]),
    )
}

pub fn work_csv(rows: &[Row], hash: &str) -> String {
    table(
        hash,
        &["t_cycles", "W_max", "T_P", "S_P", "power_bound"],
        rows.iter().map(|r| {
            vec![fmt_num(r.t_cycles), fmt_num(r.w_max), fmt_num(r.t_p), fmt_num(r.s_p), fmt_num(r.power_bound)]
        }),
    )
}

pub fn heat_csv(rows: &[Row], hash: &str) -> String {
    table(
        hash,
        &["t_cycles", "J_C", "J_H", "sigma", "eta"],
        rows.iter().map(|r| {
            vec![fmt_num(r.t_cycles), fmt_opt(r.j_cold), fmt_opt(r.j_hot), fmt_opt(r.sigma), fmt_opt(r.eta)]
        }),
    )
}

/// Long format: one line per grid point.
pub fn qgrid_csv(grid: &QGrid, hash: &str) -> String {
    let rows = grid.values.iter().zip(&grid.ys).flat_map(|(row, y)| {
        row.iter().zip(&grid.xs).map(move |(q, x)| vec![fmt_num(*x), fmt_num(*y), fmt_num(*q)])
    });
    table(hash, &["re_alpha", "im_alpha", "q"], rows)
}

#[derive(Serialize)]
struct ReportDocument<'a> {
    schema: u32,
    config_sha256: &'a str,
    config: &'a Config,
    report: &'a Report,
}

pub fn report_json(report: &Report, config: &Config) -> String {
    let hash = config.sha256();
    let doc = ReportDocument {
        schema: SCHEMA_VERSION,
        config_sha256: &hash,
        config,
        report,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
    s.push('\n');
    s
}

const W: f64 = 640.0;
const H: f64 = 400.0;
const PAD_L: f64 = 70.0;
const PAD_R: f64 = 20.0;
const PAD_T: f64 = 30.0;
const PAD_B: f64 = 50.0;

fn svg_open(w: f64, h: f64) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.0}\" height=\"{h:.0}\" viewBox=\"0 0 {w:.0} {h:.0}\">\n\
         <rect width=\"{w:.0}\" height=\"{h:.0}\" fill=\"white\"/>\n"
    )
}

fn text(out: &mut String, x: f64, y: f64, anchor: &str, s: &str) {
    let _ = writeln!(
        out,
        "<text x=\"{x:.2}\" y=\"{y:.2}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"{anchor}\">{s}</text>"
    );
}

fn short(x: f64) -> String {
    if x == 0.0 || (1e-2..1e4).contains(&x.abs()) {
        format!("{x:.3}")
    } else {
        format!("{x:.2e}")
    }
}

/// Energy (dashed) and W_max (solid) against cycles.
pub fn energy_work_svg(rows: &[Row], title: &str, log_y: bool) -> String {
    let xs: Vec<f64> = rows.iter().map(|r| r.t_cycles).collect();
    let tf = |v: f64| if log_y { v.max(1e-300).log10() } else { v };
    let series = [
        (rows.iter().map(|r| tf(r.energy)).collect::<Vec<_>>(), "6,4", "energy"),
        (rows.iter().map(|r| tf(r.w_max)).collect::<Vec<_>>(), "", "W_max"),
    ];
    let x0 = xs.first().copied().unwrap_or(0.0);
    let x1 = xs.last().copied().unwrap_or(1.0).max(x0 + 1e-300);
    let mut lo = series.iter().flat_map(|s| s.0.iter()).copied().fold(f64::INFINITY, f64::min);
    let hi = series.iter().flat_map(|s| s.0.iter()).copied().fold(f64::NEG_INFINITY, f64::max);
    if log_y {
        // keep a vanishing ergotropy from flattening the energy curve
        lo = lo.max(hi - 12.0);
    }
    let (lo, hi) = if hi > lo { (lo, hi) } else { (lo - 1.0, hi + 1.0) };
    let px = |x: f64| PAD_L + (x - x0) / (x1 - x0) * (W - PAD_L - PAD_R);
    let py = |y: f64| H - PAD_B - (y.clamp(lo, hi) - lo) / (hi - lo) * (H - PAD_T - PAD_B);

    let mut out = svg_open(W, H);
    let _ = writeln!(
        out,
        "<rect x=\"{PAD_L}\" y=\"{PAD_T}\" width=\"{:.0}\" height=\"{:.0}\" fill=\"none\" stroke=\"black\"/>",
        W - PAD_L - PAD_R,
        H - PAD_T - PAD_B
    );
    for i in 0..=4 {
        let f = i as f64 / 4.0;
        let (x, y) = (x0 + f * (x1 - x0), lo + f * (hi - lo));
        text(&mut out, px(x), H - PAD_B + 18.0, "middle", &short(x));
        let label = if log_y { format!("1e{y:.1}") } else { short(y) };
        text(&mut out, PAD_L - 6.0, py(y) + 4.0, "end", &label);
    }
    text(&mut out, W / 2.0, H - 10.0, "middle", "cycles");
    text(&mut out, W / 2.0, 18.0, "middle", title);
    for (k, (ys, dash, name)) in series.iter().enumerate() {
        let pts: Vec<String> = xs.iter().zip(ys).map(|(x, y)| format!("{:.2},{:.2}", px(*x), py(*y))).collect();
        let dash_attr = if dash.is_empty() { String::new() } else { format!(" stroke-dasharray=\"{dash}\"") };
        let _ = writeln!(
            out,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"{dash_attr}/>",
            pts.join(" ")
        );
        let ly = PAD_T + 16.0 + 16.0 * k as f64;
        let _ = writeln!(
            out,
            "<line x1=\"{:.2}\" y1=\"{ly:.2}\" x2=\"{:.2}\" y2=\"{ly:.2}\" stroke=\"black\" stroke-width=\"1.5\"{dash_attr}/>",
            W - PAD_R - 110.0,
            W - PAD_R - 80.0
        );
        text(&mut out, W - PAD_R - 74.0, ly + 4.0, "start", name);
    }
    out.push_str("</svg>\n");
    out
}

fn shade(v: f64, vmax: f64) -> String {
    let f = if vmax > 0.0 { (v / vmax).clamp(0.0, 1.0) } else { 0.0 };
    let c = (255.0 * (1.0 - f)).round() as u8;
    format!("#{c:02x}{c:02x}ff")
}

/// Q-function heat maps side by side.
pub fn qgrid_panels_svg(panels: &[(&str, &QGrid)]) -> String {
    let side = 260.0;
    let gap = 30.0;
    let width = gap + panels.len() as f64 * (side + gap);
    let height = side + 70.0;
    let mut out = svg_open(width, height);
    for (i, (label, grid)) in panels.iter().enumerate() {
        let ox = gap + i as f64 * (side + gap);
        let oy = 30.0;
        let n = grid.xs.len();
        let cell = side / n as f64;
        let vmax = grid.values.iter().flatten().copied().fold(0.0, f64::max);
        for (r, row) in grid.values.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                // imaginary axis points up
                let y = oy + (n - 1 - r) as f64 * cell;
                let _ = writeln!(
                    out,
                    "<rect x=\"{:.2}\" y=\"{y:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"{}\"/>",
                    ox + c as f64 * cell,
                    cell + 0.05,
                    cell + 0.05,
                    shade(*v, vmax)
                );
            }
        }
        let _ = writeln!(
            out,
            "<rect x=\"{ox:.2}\" y=\"{oy:.2}\" width=\"{side:.2}\" height=\"{side:.2}\" fill=\"none\" stroke=\"black\"/>"
        );
        text(&mut out, ox + side / 2.0, oy - 10.0, "middle", label);
        text(
            &mut out,
            ox + side / 2.0,
            oy + side + 20.0,
            "middle",
            &format!("Re alpha in [-{0}, {0}]", short(grid.spec.alpha_max)),
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Write every output file of a report into `dir` and return the paths.
pub fn write_report(dir: &Path, report: &Report, config: &Config) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let hash = config.sha256();
    let mut files: Vec<(String, String)> = vec![
        ("energy.csv".into(), energy_csv(&report.rows, &hash)),
        ("work.csv".into(), work_csv(&report.rows, &hash)),
        ("heat.csv".into(), heat_csv(&report.rows, &hash)),
        ("report.json".into(), report_json(report, config)),
    ];
    if let Some(joint) = &report.joint_rows {
        files.push(("energy_joint.csv".into(), energy_csv(joint, &hash)));
        files.push(("work_joint.csv".into(), work_csv(joint, &hash)));
        files.push(("heat_joint.csv".into(), heat_csv(joint, &hash)));
    }
    for g in &report.qgrids {
        files.push((format!("qgrid_{}.csv", g.label), qgrid_csv(&g.grid, &hash)));
    }
    if config.output.svg {
        files.push((
            format!("{}.svg", report.label),
            energy_work_svg(&report.rows, &report.label, config.output.log_y),
        ));
        if !report.qgrids.is_empty() {
            let first = &report.qgrids[0];
            let last = &report.qgrids[report.qgrids.len() - 1];
            let mut panels = vec![(first.label.as_str(), &first.grid)];
            if report.qgrids.len() > 1 {
                panels.push((last.label.as_str(), &last.grid));
            }
            files.push((format!("{}_qgrid.svg", report.label), qgrid_panels_svg(&panels)));
        }
    }
    let mut paths = Vec::with_capacity(files.len());
    for (name, body) in files {
        let path = dir.join(name);
        fs::write(&path, body)?;
        paths.push(path);
    }
    Ok(paths)
}
