//! Output rendering: aligned tables for reading, `key=value` lines for diffing.

use std::fmt::Write as _;

use clap::ValueEnum;
use polyindex::{VoteTally, WeightedGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Kv,
}

#[derive(Debug, Clone)]
enum Item {
    Section(String),
    Field { key: String, label: String, value: String },
    Header(Vec<String>),
    Row { cells: Vec<String>, kv: Vec<(String, String)> },
    Kv(String, String),
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    items: Vec<Item>,
}

impl Report {
    pub fn section(&mut self, title: impl Into<String>) {
        self.items.push(Item::Section(title.into()));
    }

    pub fn field(&mut self, key: impl Into<String>, label: impl Into<String>, value: impl Into<String>) {
        self.items.push(Item::Field { key: key.into(), label: label.into(), value: value.into() });
    }

    pub fn header<I, S>(&mut self, columns: I)
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.items.push(Item::Header(columns.into_iter().map(Into::into).collect()));
    }

    /// A table row. In kv form each pair becomes `<prefix>.<key>=<value>`.
    pub fn row<I, K>(&mut self, prefix: impl Into<String>, pairs: I, first_cell: impl Into<String>)
    where
        I: IntoIterator<Item = (K, String)>,
        K: Into<String>,
    {
        let prefix = prefix.into();
        let mut cells = vec![first_cell.into()];
        let mut kv = Vec::new();
        for (k, v) in pairs {
            cells.push(v.clone());
            kv.push((format!("{prefix}.{}", k.into()), v));
        }
        self.items.push(Item::Row { cells, kv });
    }

    /// A pair that only appears in kv output.
    pub fn kv(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.items.push(Item::Kv(key.into(), value.into()));
    }

    /// A row whose table cells and kv pairs differ.
    pub fn raw_row(&mut self, cells: Vec<String>, kv: Vec<(String, String)>) {
        self.items.push(Item::Row { cells, kv });
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Table => self.render_table(),
            Format::Kv => self.render_kv(),
        }
    }

    fn render_kv(&self) -> String {
        let mut out = String::new();
        for item in &self.items {
            match item {
                Item::Field { key, value, .. } => {
                    let _ = writeln!(out, "{key}={value}");
                }
                Item::Row { kv, .. } => {
                    for (k, v) in kv {
                        let _ = writeln!(out, "{k}={v}");
                    }
                }
                Item::Kv(k, v) => {
                    let _ = writeln!(out, "{k}={v}");
                }
                Item::Section(_) | Item::Header(_) => {}
            }
        }
        out
    }

    fn render_table(&self) -> String {
        let mut out = String::new();
        let mut i = 0;
        while i < self.items.len() {
            match &self.items[i] {
                Item::Section(title) => {
                    if !out.is_empty() {
                        out.push('\n');
                    }
                    let _ = writeln!(out, "{title}");
                    i += 1;
                }
                Item::Kv(..) => i += 1,
                Item::Field { .. } => {
                    let end = self.run_end(i, |it| matches!(it, Item::Field { .. }));
                    let width = self.items[i..end]
                        .iter()
                        .map(|it| if let Item::Field { label, .. } = it { label.len() } else { 0 })
                        .max()
                        .unwrap_or(0);
                    for it in &self.items[i..end] {
                        if let Item::Field { label, value, .. } = it {
                            let _ = writeln!(out, "  {label:<width$}  {value}");
                        }
                    }
                    i = end;
                }
                Item::Header(_) | Item::Row { .. } => {
                    let end = self.run_end(i + 1, |it| matches!(it, Item::Row { .. }));
                    let rows: Vec<&Vec<String>> = self.items[i..end]
                        .iter()
                        .map(|it| match it {
                            Item::Header(c) | Item::Row { cells: c, .. } => c,
                            _ => unreachable!("run holds only rows"),
                        })
                        .collect();
                    let columns = rows.iter().map(|r| r.len()).max().unwrap_or(0);
                    let widths: Vec<usize> =
                        (0..columns).map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.len()).max().unwrap_or(0)).collect();
                    for r in rows {
                        let mut line = String::new();
                        for (c, cell) in r.iter().enumerate() {
                            if c + 1 == r.len() {
                                let _ = write!(line, "  {cell}");
                            } else {
                                let _ = write!(line, "  {cell:<w$}", w = widths[c]);
                            }
                        }
                        let _ = writeln!(out, "{}", line.trim_end());
                    }
                    i = end;
                }
            }
        }
        out
    }

    fn run_end(&self, start: usize, same: impl Fn(&Item) -> bool) -> usize {
        let mut end = start;
        while end < self.items.len() && same(&self.items[end]) {
            end += 1;
        }
        end.max(start)
    }
}

/// Scores as `cv=score` with `*` on the row's top score and `+` on the
/// ground-truth CV. Views with no votes are left out.
fn score_cell(ranked: &[(&str, u64)], truth: Option<&str>) -> String {
    let top = ranked.first().map_or(0, |r| r.1);
    let cells: Vec<String> = ranked
        .iter()
        .filter(|(_, s)| *s > 0)
        .map(|(id, s)| {
            let star = if *s == top { "*" } else { "" };
            let hit = if Some(*id) == truth { "+" } else { "" };
            format!("{id}={s}{star}{hit}")
        })
        .collect();
    if cells.is_empty() {
        "-".to_string()
    } else {
        cells.join(" ")
    }
}

/// One scene: a row per scene graph and a total row, like a vote table.
pub fn scene_table(report: &mut Report, k: usize, path: &str, graphs: &[WeightedGraph], tally: &VoteTally, truth: Option<&str>) {
    let p = format!("scene{k}");
    report.section(format!("scene {path}: {} graphs{}", graphs.len(), truth.map(|t| format!(", truth {t}")).unwrap_or_default()));
    report.kv(format!("{p}.path"), path);
    report.kv(format!("{p}.graphs"), graphs.len().to_string());
    if let Some(t) = truth {
        report.kv(format!("{p}.truth"), t);
    }
    report.header(["graph", "nodes", "edges", "subgraphs", "hits", "votes"]);
    for (gi, g) in graphs.iter().enumerate() {
        let q = format!("{p}.graph{}", gi + 1);
        let ranked = tally.ranked_for_graph(gi);
        let mut kv = vec![
            (format!("{q}.nodes"), g.node_count().to_string()),
            (format!("{q}.edges"), g.edge_count().to_string()),
            (format!("{q}.subgraphs"), tally.subgraph_count(gi).to_string()),
            (format!("{q}.hits"), tally.hit_count(gi).to_string()),
        ];
        kv.extend(ranked.iter().filter(|(_, s)| *s > 0).map(|(id, s)| (format!("{q}.score.{id}"), s.to_string())));
        let cells = vec![
            format!("g{}", gi + 1),
            g.node_count().to_string(),
            g.edge_count().to_string(),
            tally.subgraph_count(gi).to_string(),
            tally.hit_count(gi).to_string(),
            score_cell(&ranked, truth),
        ];
        report.raw_row(cells, kv);
    }
    let ranked = tally.ranked();
    let mut kv: Vec<(String, String)> =
        ranked.iter().filter(|(_, s)| *s > 0).map(|(id, s)| (format!("{p}.total.{id}"), s.to_string())).collect();
    kv.push((format!("{p}.leaders"), tally.leaders().join(",")));
    if let Some(t) = truth {
        let score = tally.score(t).unwrap_or(0);
        let rank = if score == 0 { "-".to_string() } else { (1 + ranked.iter().filter(|(_, s)| *s > score).count()).to_string() };
        kv.push((format!("{p}.truth_score"), score.to_string()));
        kv.push((format!("{p}.truth_rank"), rank));
        kv.push((format!("{p}.best_other"), tally.best_other(t).to_string()));
    }
    let cells = vec!["total".into(), String::new(), String::new(), String::new(), String::new(), score_cell(&ranked, truth)];
    report.raw_row(cells, kv);
}
