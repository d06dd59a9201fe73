//! CSV and table rendering of experiment reports.

use std::fmt::Write as _;
use std::str::FromStr;

use dcsim_core::PolicyKind;

use crate::config::pct;
use crate::experiment::{Report, ReportRow};

pub const CSV_COLUMNS: [&str; 14] = [
    "policy",
    "lower_pct",
    "upper_pct",
    "energy_kwh_mean",
    "energy_kwh_std",
    "sla_pct_mean",
    "sla_pct_std",
    "migrations_mean",
    "migrations_std",
    "avg_sla_pct_mean",
    "duration_s_mean",
    "seed",
    "runs",
    "frame_seconds",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Table,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "table" => Ok(Self::Table),
            other => Err(format!("unknown format `{other}` (expected csv or table)")),
        }
    }
}

/// Static baselines have no SLA figures.
fn has_sla(row: &ReportRow) -> bool {
    !matches!(row.policy.kind(), PolicyKind::Npa | PolicyKind::Dvfs)
}

fn cells(report: &Report, row: &ReportRow) -> [String; 14] {
    let m = &report.metadata;
    let opt = |v: Option<f64>| v.map(pct).unwrap_or_default();
    let sla = |s: String| if has_sla(row) { s } else { String::new() };
    let (energy, sla_pct, migrations) = (row.energy_kwh(), row.sla_pct(), row.migrations());
    [
        row.policy.kind().to_string(),
        opt(row.policy.lower()),
        opt(row.policy.upper()),
        format!("{:.6}", energy.mean),
        format!("{:.6}", energy.std),
        sla(format!("{:.4}", sla_pct.mean)),
        sla(format!("{:.4}", sla_pct.std)),
        format!("{:.2}", migrations.mean),
        format!("{:.2}", migrations.std),
        sla(format!("{:.4}", row.avg_sla_pct().mean)),
        format!("{:.1}", row.duration_s().mean),
        m.seed.to_string(),
        m.runs.to_string(),
        m.frame_seconds.to_string(),
    ]
}

pub fn to_csv(report: &Report) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_COLUMNS).expect("writing to memory");
    for row in &report.rows {
        w.write_record(cells(report, row))
            .expect("writing to memory");
    }
    w.into_inner().expect("writing to memory")
}

pub fn to_table(report: &Report) -> Vec<u8> {
    let m = &report.metadata;
    let mut grid: Vec<Vec<String>> =
        vec![CSV_COLUMNS[..11].iter().map(|s| s.to_string()).collect()];
    for row in &report.rows {
        let mut c = cells(report, row).to_vec();
        c.truncate(11);
        c[0] = row.policy.label();
        grid.push(c);
    }
    let widths: Vec<usize> = (0..11)
        .map(|j| grid.iter().map(|r| r[j].len()).max().unwrap_or(0))
        .collect();

    let mut out = String::new();
    let _ = writeln!(
        out,
        "dcsim {} | hosts {} | vms {} | seed {} | runs {} | frame {} s",
        m.version, m.hosts, m.vms, m.seed, m.runs, m.frame_seconds
    );
    for (i, r) in grid.iter().enumerate() {
        let line: Vec<String> = r
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(j, (cell, &w))| {
                if j == 0 {
                    format!("{cell:<w$}")
                } else {
                    format!("{cell:>w$}")
                }
            })
            .collect();
        let _ = writeln!(out, "{}", line.join("  ").trim_end());
        if i == 0 {
            let total = widths.iter().sum::<usize>() + 2 * (widths.len() - 1);
            let _ = writeln!(out, "{}", "-".repeat(total));
        }
    }
    out.into_bytes()
}

pub fn emit_report(report: &Report, format: Format) -> Vec<u8> {
    match format {
        Format::Csv => to_csv(report),
        Format::Table => to_table(report),
    }
}
