use std::fmt::Write;

use crate::analytics::SweepRow;

const PANEL_W: f64 = 360.0;
const PANEL_H: f64 = 220.0;
const MARGIN: f64 = 40.0;

type Series = (&'static str, fn(&SweepRow) -> f64);

/// One panel per `b` with the three success curves against `j`.
pub fn sweep_svg(rows: &[SweepRow]) -> String {
    let mut bs: Vec<u32> = rows.iter().map(|r| r.b).collect();
    bs.dedup();
    let j_max = rows.iter().map(|r| r.j).max().unwrap_or(0).max(1) as f64;
    let width = (PANEL_W + MARGIN) * bs.len().max(1) as f64 + MARGIN;
    let height = PANEL_H + 2.0 * MARGIN;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="sans-serif" font-size="11">"#
    );
    for (panel, &b) in bs.iter().enumerate() {
        let x0 = MARGIN + panel as f64 * (PANEL_W + MARGIN);
        let y0 = MARGIN;
        let _ = writeln!(
            s,
            r#"<rect x="{x0}" y="{y0}" width="{PANEL_W}" height="{PANEL_H}" fill="none" stroke="black"/>"#
        );
        let _ = writeln!(s, r#"<text x="{}" y="{}">b = {b}</text>"#, x0 + 4.0, y0 - 6.0);
        let _ = writeln!(s, r#"<text x="{}" y="{}">j</text>"#, x0 + PANEL_W / 2.0, y0 + PANEL_H + 16.0);
        let series: [Series; 3] = [
            ("#1f77b4", |r| r.p_gsa),
            ("#ff7f0e", |r| r.p_no_qmp),
            ("#2ca02c", |r| r.p_qmp),
        ];
        for (color, value) in series {
            let points: Vec<String> = rows
                .iter()
                .filter(|r| r.b == b)
                .map(|r| {
                    let x = x0 + r.j as f64 / j_max * PANEL_W;
                    let y = y0 + (1.0 - value(r)) * PANEL_H;
                    format!("{x:.2},{y:.2}")
                })
                .collect();
            let _ = writeln!(
                s,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                points.join(" ")
            );
        }
    }
    let legend_y = height - 10.0;
    for (i, (color, label)) in [("#1f77b4", "gsa"), ("#ff7f0e", "no qmp"), ("#2ca02c", "qmp")]
        .iter()
        .enumerate()
    {
        let x = MARGIN + i as f64 * 80.0;
        let _ = writeln!(
            s,
            r#"<line x1="{x}" y1="{legend_y}" x2="{}" y2="{legend_y}" stroke="{color}" stroke-width="2"/><text x="{}" y="{}">{label}</text>"#,
            x + 20.0,
            x + 24.0,
            legend_y + 4.0
        );
    }
    s.push_str("</svg>\n");
    s
}
