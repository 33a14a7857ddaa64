//! Result persistence: ordered scan tables, CSV with full float precision,
//! JSON run manifests, and self-contained SVG plots.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("table has no rows to plot")]
    EmptyTable,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

// ─── tables ─────────────────────────────────────────────────────────────────

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScanRow {
    pub kernel: String,
    pub sequence: String,
    pub k: usize,
    pub p: f64,
    pub frequency: f64,
    pub value: f64,
    pub refined: bool,
}

#[derive(Clone, Debug, Default)]
pub struct ScanTable {
    rows: Vec<ScanRow>,
}

/// 17 significant digits, '.' decimal, no separators: round-trips f64.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

impl ScanTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, row: ScanRow) {
        self.rows.push(row);
    }

    pub fn rows(&self) -> &[ScanRow] {
        &self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Orders rows by (sequence-id, K, frequency); kernel breaks ties.
    pub fn sort(&mut self) {
        self.rows.sort_by(|a, b| {
            a.sequence
                .cmp(&b.sequence)
                .then(a.k.cmp(&b.k))
                .then(a.frequency.partial_cmp(&b.frequency).unwrap())
                .then(a.kernel.cmp(&b.kernel))
        });
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("kernel,sequence,K,p,frequency,value,refined\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                r.kernel,
                r.sequence,
                r.k,
                format_float(r.p),
                format_float(r.frequency),
                format_float(r.value),
                r.refined
            ));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self, String> {
        let mut rows = Vec::new();
        for (i, line) in text.lines().enumerate().skip(1) {
            if line.trim().is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 7 {
                return Err(format!("line {}: expected 7 columns", i + 1));
            }
            let err = |c: &str| format!("line {}: bad number `{c}`", i + 1);
            rows.push(ScanRow {
                kernel: cols[0].to_string(),
                sequence: cols[1].to_string(),
                k: cols[2].parse().map_err(|_| err(cols[2]))?,
                p: cols[3].parse().map_err(|_| err(cols[3]))?,
                frequency: cols[4].parse().map_err(|_| err(cols[4]))?,
                value: cols[5].parse().map_err(|_| err(cols[5]))?,
                refined: cols[6].trim() == "true",
            });
        }
        Ok(ScanTable { rows })
    }
}

// ─── manifests ──────────────────────────────────────────────────────────────

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub config_text: Option<String>,
    pub seed: u64,
    pub threads: usize,
    pub version: String,
    pub started_unix_ms: u128,
    pub finished_unix_ms: u128,
    pub outputs: Vec<String>,
    pub outcome: String,
}

impl RunManifest {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

pub fn unix_ms_now() -> u128 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_millis())
        .unwrap_or(0)
}

// ─── plots ──────────────────────────────────────────────────────────────────

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlotKind {
    /// value against K, one series per (kernel, sequence)
    SupVsK,
    /// value against frequency
    ValueVsFrequency,
    /// stacked-to-summed sup ratio against K
    AuRatio,
}

impl PlotKind {
    pub fn parse(raw: &str) -> Option<Self> {
        match raw.to_ascii_lowercase().as_str() {
            "sup-vs-k" => Some(PlotKind::SupVsK),
            "value-vs-frequency" | "s-vs-frequency" => Some(PlotKind::ValueVsFrequency),
            "au-ratio" => Some(PlotKind::AuRatio),
            _ => None,
        }
    }

    fn x_label(self) -> &'static str {
        match self {
            PlotKind::SupVsK | PlotKind::AuRatio => "K",
            PlotKind::ValueVsFrequency => "frequency",
        }
    }

    fn y_label(self) -> &'static str {
        match self {
            PlotKind::SupVsK => "value",
            PlotKind::ValueVsFrequency => "value",
            PlotKind::AuRatio => "stacked/summed ratio",
        }
    }
}

struct Axis {
    min: f64,
    max: f64,
    log: bool,
}

impl Axis {
    /// Log scale when all values are positive and span over two decades.
    fn fit(values: &[f64]) -> Axis {
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let log = min > 0.0 && max / min > 100.0;
        if min == max {
            let pad = if min == 0.0 { 1.0 } else { min.abs() * 0.1 };
            return Axis {
                min: min - pad,
                max: max + pad,
                log: false,
            };
        }
        Axis { min, max, log }
    }

    fn project(&self, v: f64, lo_px: f64, hi_px: f64) -> f64 {
        let (a, b, x) = if self.log {
            (self.min.ln(), self.max.ln(), v.ln())
        } else {
            (self.min, self.max, v)
        };
        lo_px + (x - a) / (b - a) * (hi_px - lo_px)
    }

    fn ticks(&self) -> Vec<f64> {
        if self.log {
            let lo = self.min.log10().floor() as i32;
            let hi = self.max.log10().ceil() as i32;
            (lo..=hi).map(|d| 10f64.powi(d)).collect()
        } else {
            (0..=4)
                .map(|i| self.min + (self.max - self.min) * i as f64 / 4.0)
                .collect()
        }
    }
}

const PALETTE: [&str; 6] = [
    "#2563eb", "#dc2626", "#16a34a", "#9333ea", "#ea580c", "#0d9488",
];

/// Renders the table as a self-contained SVG document.
pub fn emit_plot(table: &ScanTable, kind: PlotKind) -> Result<String, ReportError> {
    if table.is_empty() {
        return Err(ReportError::EmptyTable);
    }
    let x_of = |r: &ScanRow| match kind {
        PlotKind::SupVsK | PlotKind::AuRatio => r.k as f64,
        PlotKind::ValueVsFrequency => r.frequency,
    };

    // series keyed by kernel + sequence, points sorted by x
    let mut series: Vec<(String, Vec<(f64, f64)>)> = Vec::new();
    for r in &table.rows {
        let key = format!("{} / {}", r.kernel, r.sequence);
        let pts = match series.iter_mut().find(|(k, _)| *k == key) {
            Some((_, pts)) => pts,
            None => {
                series.push((key, Vec::new()));
                &mut series.last_mut().unwrap().1
            }
        };
        pts.push((x_of(r), r.value));
    }
    for (_, pts) in &mut series {
        pts.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    }

    let xs: Vec<f64> = series.iter().flat_map(|(_, p)| p.iter().map(|q| q.0)).collect();
    let ys: Vec<f64> = series.iter().flat_map(|(_, p)| p.iter().map(|q| q.1)).collect();
    let x_axis = Axis::fit(&xs);
    let y_axis = Axis::fit(&ys);

    let (w, h) = (800.0, 500.0);
    let (l, r, t, b) = (70.0, 20.0, 20.0, 50.0);
    let px = |x: f64| x_axis.project(x, l, w - r);
    let py = |y: f64| y_axis.project(y, h - b, t);

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {w} {h}\" \
         font-family=\"sans-serif\" font-size=\"12\">\n\
         <rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n"
    ));
    svg.push_str(&format!(
        "<line x1=\"{l}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n\
         <line x1=\"{l}\" y1=\"{t}\" x2=\"{l}\" y2=\"{}\" stroke=\"black\"/>\n",
        h - b,
        w - r,
        h - b,
        h - b
    ));
    for tick in x_axis.ticks() {
        let x = px(tick);
        svg.push_str(&format!(
            "<line x1=\"{x:.1}\" y1=\"{}\" x2=\"{x:.1}\" y2=\"{}\" stroke=\"black\"/>\n\
             <text x=\"{x:.1}\" y=\"{}\" text-anchor=\"middle\">{tick:.3e}</text>\n",
            h - b,
            h - b + 5.0,
            h - b + 18.0
        ));
    }
    for tick in y_axis.ticks() {
        let y = py(tick);
        svg.push_str(&format!(
            "<line x1=\"{}\" y1=\"{y:.1}\" x2=\"{l}\" y2=\"{y:.1}\" stroke=\"black\"/>\n\
             <text x=\"{}\" y=\"{:.1}\" text-anchor=\"end\">{tick:.3e}</text>\n",
            l - 5.0,
            l - 8.0,
            y + 4.0
        ));
    }
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}{}</text>\n",
        (l + w - r) / 2.0,
        h - 8.0,
        kind.x_label(),
        if x_axis.log { " (log)" } else { "" }
    ));
    svg.push_str(&format!(
        "<text x=\"14\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 14 {})\">{}{}</text>\n",
        (t + h - b) / 2.0,
        (t + h - b) / 2.0,
        kind.y_label(),
        if y_axis.log { " (log)" } else { "" }
    ));

    for (si, (name, pts)) in series.iter().enumerate() {
        let color = PALETTE[si % PALETTE.len()];
        if pts.len() > 1 {
            let path: Vec<String> = pts
                .iter()
                .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
                .collect();
            svg.push_str(&format!(
                "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n",
                path.join(" ")
            ));
        }
        for &(x, y) in pts {
            svg.push_str(&format!(
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"{color}\"/>\n",
                px(x),
                py(y)
            ));
        }
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" fill=\"{color}\">{name}</text>\n",
            l + 10.0,
            t + 16.0 + 16.0 * si as f64
        ));
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(seq: &str, k: usize, freq: f64, value: f64) -> ScanRow {
        ScanRow {
            kernel: "cesaro".to_string(),
            sequence: seq.to_string(),
            k,
            p: 1.0,
            frequency: freq,
            value,
            refined: true,
        }
    }

    #[test]
    fn csv_round_trip_preserves_floats() {
        let mut table = ScanTable::new();
        table.push(row("geometric2", 20, std::f64::consts::PI / 1024.0, 3.0000000000000004));
        let csv = table.to_csv();
        let back = ScanTable::from_csv(&csv).unwrap();
        assert_eq!(back.rows()[0].frequency, table.rows()[0].frequency);
        assert_eq!(back.rows()[0].value, table.rows()[0].value);
    }

    #[test]
    fn sort_orders_by_sequence_then_k_then_frequency() {
        let mut table = ScanTable::new();
        table.push(row("b", 2, 0.5, 1.0));
        table.push(row("a", 2, 0.5, 1.0));
        table.push(row("a", 1, 0.7, 1.0));
        table.push(row("a", 1, 0.2, 1.0));
        table.sort();
        let keys: Vec<(String, usize, f64)> = table
            .rows()
            .iter()
            .map(|r| (r.sequence.clone(), r.k, r.frequency))
            .collect();
        assert_eq!(
            keys,
            vec![
                ("a".to_string(), 1, 0.2),
                ("a".to_string(), 1, 0.7),
                ("a".to_string(), 2, 0.5),
                ("b".to_string(), 2, 0.5),
            ]
        );
    }

    #[test]
    fn empty_table_cannot_plot() {
        assert!(matches!(
            emit_plot(&ScanTable::new(), PlotKind::SupVsK),
            Err(ReportError::EmptyTable)
        ));
    }

    #[test]
    fn single_row_plots_without_error() {
        let mut table = ScanTable::new();
        table.push(row("a", 1, 0.5, 2.0));
        let svg = emit_plot(&table, PlotKind::ValueVsFrequency).unwrap();
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("circle"));
    }

    #[test]
    fn log_axis_kicks_in_over_two_decades() {
        let mut table = ScanTable::new();
        for (i, v) in [1.0, 10.0, 1000.0].iter().enumerate() {
            table.push(row("a", i + 1, *v, *v));
        }
        let svg = emit_plot(&table, PlotKind::ValueVsFrequency).unwrap();
        assert!(svg.contains("frequency (log)"));
    }

    #[test]
    fn manifest_round_trip() {
        let m = RunManifest {
            command: "scan --config jobs.ini".to_string(),
            config_text: Some("[a]\nkernel = cesaro\n".to_string()),
            seed: 7,
            threads: 4,
            version: "0.1.0".to_string(),
            started_unix_ms: 1000,
            finished_unix_ms: 2000,
            outputs: vec!["scan.csv".to_string()],
            outcome: "ok".to_string(),
        };
        let back = RunManifest::from_json(&m.to_json()).unwrap();
        assert_eq!(back.command, m.command);
        assert_eq!(back.seed, 7);
    }
}
