//! Table rendering: aligned text for humans, CSV for machines.
//!
//! Text mode prints probabilities at 4 decimals; CSV carries the full 17
//! significant digits so that reparsing recovers the engine values.
//! Conditional entries whose conditioning outcome has zero probability
//! render as the `MASKED` marker with a footnote naming the outcome.

use conjoint::{ConditionalTable, Direction, DivergenceReport, JointTable, SampleRun};
use std::fmt::Write as _;

pub const MASKED: &str = "—";

pub fn fmt_prob(p: f64) -> String {
    format!("{p:.4}")
}

/// 17 significant digits: reparses to the exact double.
pub fn fmt_exact(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

/// Pads cells into aligned columns: first column left-aligned, the rest
/// right-aligned, two spaces between columns, no trailing spaces.
pub fn render_grid(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let mut widths = vec![0usize; cols];
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.chars().count());
        }
    }
    let mut out = String::new();
    for row in rows {
        let mut line = String::new();
        for (i, cell) in row.iter().enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            let pad = " ".repeat(widths[i] - cell.chars().count());
            if i == 0 {
                line.push_str(cell);
                line.push_str(&pad);
            } else {
                line.push_str(&pad);
                line.push_str(cell);
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn joint_grid(
    jt: &JointTable,
    corner: &str,
    values: impl Fn(usize, usize) -> String,
) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    let mut header = vec![corner.to_string()];
    header.extend((0..jt.dim_b()).map(|b| format!("b={b}")));
    rows.push(header);
    for a in 0..jt.dim_a() {
        let mut row = vec![format!("a={a}")];
        row.extend((0..jt.dim_b()).map(|b| values(a, b)));
        rows.push(row);
    }
    rows
}

pub fn joint_text(jt: &JointTable) -> String {
    let mut rows = joint_grid(jt, "p(a,b)", |a, b| fmt_prob(jt.p(a, b)));
    rows[0].push("p(a)".to_string());
    let pa = jt.marginal_a();
    for (a, row) in rows.iter_mut().skip(1).enumerate() {
        row.push(fmt_prob(pa[a]));
    }
    let mut footer = vec!["p(b)".to_string()];
    footer.extend(jt.marginal_b().iter().map(|&p| fmt_prob(p)));
    rows.push(footer);
    render_grid(&rows)
}

pub fn joint_csv(jt: &JointTable) -> String {
    let mut out = String::from("a,b,p\n");
    for a in 0..jt.dim_a() {
        for b in 0..jt.dim_b() {
            let _ = writeln!(out, "{a},{b},{}", fmt_exact(jt.p(a, b)));
        }
    }
    out
}

fn conditional_corner(direction: Direction) -> &'static str {
    match direction {
        Direction::Predictive => "p(b|a)",
        Direction::Retrodictive => "p(a|b)",
    }
}

fn masked_footnote(ct: &ConditionalTable) -> Option<String> {
    let masked = ct.masked_outcomes();
    if masked.is_empty() {
        return None;
    }
    let side = match ct.direction() {
        Direction::Predictive => "a",
        Direction::Retrodictive => "b",
    };
    let outcomes: Vec<String> = masked.iter().map(|k| format!("{side}={k}")).collect();
    let list = outcomes.join(", ");
    Some(format!(
        "note: p({list}) = 0; conditionals on {list} are undefined\n"
    ))
}

pub fn conditional_text(ct: &ConditionalTable) -> String {
    let mut rows = Vec::new();
    let mut header = vec![conditional_corner(ct.direction()).to_string()];
    header.extend((0..ct.dim_b()).map(|b| format!("b={b}")));
    rows.push(header);
    for a in 0..ct.dim_a() {
        let mut row = vec![format!("a={a}")];
        row.extend((0..ct.dim_b()).map(|b| match ct.value(a, b) {
            Some(p) => fmt_prob(p),
            None => MASKED.to_string(),
        }));
        rows.push(row);
    }
    let mut out = render_grid(&rows);
    if let Some(note) = masked_footnote(ct) {
        out.push('\n');
        out.push_str(&note);
    }
    out
}

pub fn conditional_csv(ct: &ConditionalTable) -> String {
    let mut out = String::from("a,b,p\n");
    for a in 0..ct.dim_a() {
        for b in 0..ct.dim_b() {
            match ct.value(a, b) {
                Some(p) => {
                    let _ = writeln!(out, "{a},{b},{}", fmt_exact(p));
                }
                None => {
                    let _ = writeln!(out, "{a},{b},");
                }
            }
        }
    }
    out
}

pub fn compare_text(report: &DivergenceReport) -> String {
    let mut out = String::from("conventional joint p(a)·p(b|a)\n");
    out.push_str(&joint_text(&report.conventional_joint));
    out.push_str("\ncomplete joint p(a,b)\n");
    out.push_str(&joint_text(&report.complete_joint));
    out.push('\n');
    let summary = vec![
        vec![
            "total_variation".to_string(),
            fmt_prob(report.total_variation),
        ],
        vec!["max_entry_gap".to_string(), fmt_prob(report.max_entry_gap)],
    ];
    out.push_str(&render_grid(&summary));
    out
}

pub fn compare_csv(report: &DivergenceReport) -> String {
    let conventional = &report.conventional_joint;
    let complete = &report.complete_joint;
    let mut out = String::from("a,b,conventional,complete\n");
    for a in 0..conventional.dim_a() {
        for b in 0..conventional.dim_b() {
            let _ = writeln!(
                out,
                "{a},{b},{},{}",
                fmt_exact(conventional.p(a, b)),
                fmt_exact(complete.p(a, b)),
            );
        }
    }
    let _ = writeln!(out, "total_variation,{}", fmt_exact(report.total_variation));
    let _ = writeln!(out, "max_entry_gap,{}", fmt_exact(report.max_entry_gap));
    out
}

pub fn sample_text(run: &SampleRun, tv: f64) -> String {
    let mut out = String::new();
    let head = vec![
        vec!["n".to_string(), run.n().to_string()],
        vec!["seed".to_string(), run.seed().to_string()],
    ];
    out.push_str(&render_grid(&head));

    out.push_str("\ncounts\n");
    let mut rows = Vec::new();
    let mut header = vec![String::new()];
    header.extend((0..run.dim_b()).map(|b| format!("b={b}")));
    rows.push(header);
    for a in 0..run.dim_a() {
        let mut row = vec![format!("a={a}")];
        row.extend((0..run.dim_b()).map(|b| run.count(a, b).to_string()));
        rows.push(row);
    }
    out.push_str(&render_grid(&rows));

    out.push_str("\nempirical frequencies\n");
    let empirical = run.empirical();
    let mut rows = joint_grid(&empirical, "", |a, b| fmt_prob(empirical.p(a, b)));
    rows[0][0] = String::new();
    out.push_str(&render_grid(&rows));

    let _ = writeln!(out, "\ntv_distance to exact table  {tv:.6}");
    out
}
