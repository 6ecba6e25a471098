//! Text and JSON reports.

use std::fmt::Write;

use serde_json::{json, Value};
use structrep::engine::ChartStats;
use structrep::{SizeDistribution, TemplateExpr};

use crate::io::template_to_json;

pub struct ParseReport<'a> {
    pub grammar: &'a str,
    pub sequence: &'a [String],
    pub strategy: &'a str,
    pub minimal_size: u32,
    /// Known only for exhaustive charts.
    pub minimal_count: Option<String>,
    pub templates: &'a [TemplateExpr],
    pub stats: &'a ChartStats,
}

impl ParseReport<'_> {
    pub fn text(&self) -> String {
        let mut out = String::new();
        let s = self.stats;
        writeln!(out, "sequence: {}", self.sequence.join(" ")).unwrap();
        writeln!(out, "minimal size: {}", self.minimal_size).unwrap();
        writeln!(out, "chart: {} ({} items, {} edges, {} pops)", self.strategy, s.items, s.edges, s.pops).unwrap();
        if let Some(c) = &self.minimal_count {
            writeln!(out, "minimal templates: {c}").unwrap();
        }
        for (i, t) in self.templates.iter().enumerate() {
            writeln!(out, "\n#{} {t}", i + 1).unwrap();
            let combs: Vec<String> = t.combinators().iter().filter(|c| !c.is_trivial()).map(ToString::to_string).collect();
            if !combs.is_empty() {
                writeln!(out, "   repeats: {}", combs.join(" ")).unwrap();
            }
            if let Ok(tree) = t.evaluate() {
                writeln!(out, "   tree: {tree}").unwrap();
            }
        }
        out
    }

    pub fn json(&self) -> Value {
        let s = self.stats;
        let templates: Vec<Value> = self
            .templates
            .iter()
            .map(|t| {
                json!({
                    "text": t.to_string(),
                    "size": t.size(),
                    "tree": t.evaluate().map(|tr| tr.to_string()).unwrap_or_default(),
                    "template": template_to_json(t),
                })
            })
            .collect();
        json!({
            "grammar": self.grammar,
            "sequence": self.sequence,
            "strategy": self.strategy,
            "minimal_size": self.minimal_size,
            "minimal_count": self.minimal_count,
            "templates": templates,
            "stats": {
                "items": s.items,
                "edges": s.edges,
                "pops": s.pops,
                "pruned_holes": s.pruned_holes,
                "pruned_size": s.pruned_size,
            },
        })
    }
}

/// Exact counts as JSON numbers when they fit, as strings otherwise.
fn count_value(c: &impl ToString) -> Value {
    let s = c.to_string();
    s.parse::<u64>().map(Value::from).unwrap_or(Value::String(s))
}

pub fn histogram_text(dist: &SizeDistribution, chart: bool) -> String {
    const BAR: usize = 40;
    let mut out = String::new();
    let width = dist.iter().map(|(_, c)| c.to_string().len()).max().unwrap_or(1).max(5);
    writeln!(out, "{:>4}  {:>width$}", "size", "count").unwrap();
    let max_bits = dist.iter().map(|(_, c)| c.bits()).max().unwrap_or(1).max(1);
    for (size, count) in dist.iter() {
        write!(out, "{size:>4}  {:>width$}", count.to_string()).unwrap();
        if chart {
            // log scale: counts span many orders of magnitude
            let len = ((count.bits() as usize * BAR) / max_bits as usize).max(1);
            write!(out, "  {}", "#".repeat(len)).unwrap();
        }
        out.push('\n');
    }
    writeln!(out, "total {:>width$}", dist.total().to_string(), width = width + 1).unwrap();
    out
}

pub fn histogram_json(sequence: &[String], dist: &SizeDistribution) -> Value {
    let rows: Vec<Value> = dist.iter().map(|(size, c)| json!({ "size": size, "count": count_value(c) })).collect();
    json!({
        "sequence": sequence,
        "minimal_size": dist.min_size(),
        "rows": rows,
        "total": count_value(&dist.total()),
    })
}
