//! Grammar, sequence and template files.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use structrep::grammar::{RelationDef, TerminationDef, BUILTIN_NAMES};
use structrep::{builtin_grammar, builtin_sequence, Combinator, Grammar, GrammarDef, Relation, Slot, TemplateExpr};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GrammarFile {
    pub start: String,
    pub nonterminals: Vec<String>,
    pub terminals: Vec<String>,
    pub relations: Vec<RelationFile>,
    pub terminations: Vec<TerminationFile>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationFile {
    pub name: String,
    pub head: String,
    pub children: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TerminationFile {
    pub name: String,
    pub head: String,
    pub terminal: String,
}

impl From<GrammarFile> for GrammarDef {
    fn from(f: GrammarFile) -> Self {
        GrammarDef {
            start: f.start,
            nonterminals: f.nonterminals,
            terminals: f.terminals,
            relations: f
                .relations
                .into_iter()
                .map(|r| RelationDef { name: r.name, head: r.head, children: r.children })
                .collect(),
            terminations: f
                .terminations
                .into_iter()
                .map(|t| TerminationDef { name: t.name, head: t.head, terminal: t.terminal })
                .collect(),
        }
    }
}

impl From<GrammarDef> for GrammarFile {
    fn from(d: GrammarDef) -> Self {
        GrammarFile {
            start: d.start,
            nonterminals: d.nonterminals,
            terminals: d.terminals,
            relations: d
                .relations
                .into_iter()
                .map(|r| RelationFile { name: r.name, head: r.head, children: r.children })
                .collect(),
            terminations: d
                .terminations
                .into_iter()
                .map(|t| TerminationFile { name: t.name, head: t.head, terminal: t.terminal })
                .collect(),
        }
    }
}

pub struct Loaded {
    pub name: String,
    pub grammar: Grammar,
    /// Example sequence of a bundled grammar.
    pub example: Option<Vec<String>>,
}

/// A bundled grammar by name, or a JSON grammar file. An existing file wins.
pub fn load_grammar(arg: &str) -> Result<Loaded> {
    let path = Path::new(arg);
    if !path.exists() && BUILTIN_NAMES.contains(&arg) {
        let grammar = builtin_grammar(arg)?;
        let example = builtin_sequence(arg).map(|s| s.into_iter().map(String::from).collect());
        return Ok(Loaded { name: arg.to_string(), grammar, example });
    }
    let text = fs::read_to_string(path).with_context(|| format!("cannot read grammar `{arg}`"))?;
    let file: GrammarFile = serde_json::from_str(&text).with_context(|| format!("`{arg}` is not a grammar file"))?;
    let grammar = Grammar::from_def(&file.into())?;
    Ok(Loaded { name: arg.to_string(), grammar, example: None })
}

/// Tokens from the command line, else from `--seq-file`, else the bundled example.
pub fn load_sequence(tokens: &[String], seq_file: Option<&Path>, example: Option<&[String]>) -> Result<Vec<String>> {
    let seq: Vec<String> = match (tokens.is_empty(), seq_file) {
        (false, Some(_)) => bail!("give the sequence either as arguments or with --seq-file, not both"),
        (false, None) => tokens.iter().flat_map(|t| t.split_whitespace()).map(String::from).collect(),
        (true, Some(p)) => fs::read_to_string(p)
            .with_context(|| format!("cannot read sequence file {}", p.display()))?
            .split_whitespace()
            .map(String::from)
            .collect(),
        (true, None) => match example {
            Some(e) => e.to_vec(),
            None => bail!("no sequence given"),
        },
    };
    if seq.is_empty() {
        bail!("the sequence is empty");
    }
    Ok(seq)
}

pub fn template_to_json(e: &TemplateExpr) -> Value {
    match e {
        TemplateExpr::Id => json!("id"),
        TemplateExpr::Pure(r) => json!({ "pure": r.name().as_str() }),
        TemplateExpr::Rep { head, comb, children } => {
            let slots: Vec<Value> = comb
                .slots()
                .iter()
                .map(|s| match *s {
                    Slot::Free => json!("free"),
                    Slot::Ref(j) => json!({ "ref": j }),
                    Slot::Star => json!("star"),
                })
                .collect();
            json!({ "rep": {
                "head": template_to_json(head),
                "comb": slots,
                "children": children.iter().map(template_to_json).collect::<Vec<_>>(),
            }})
        }
    }
}

/// Relation arities come from the grammar. An unknown name is kept (as a
/// leaf) so that checking can reject it with a proper reason.
pub fn template_from_json(v: &Value, grammar: &Grammar) -> Result<TemplateExpr> {
    match v {
        Value::String(s) if s == "id" => Ok(TemplateExpr::Id),
        Value::Object(m) if m.len() == 1 && m.contains_key("pure") => {
            let Some(name) = m["pure"].as_str() else { bail!("`pure` expects a relation name, got {}", m["pure"]) };
            let rel = grammar.relation_named(name).cloned().unwrap_or_else(|| Relation::new(name, 0));
            Ok(TemplateExpr::pure(rel))
        }
        Value::Object(m) if m.len() == 1 && m.contains_key("rep") => {
            let Some(rep) = m["rep"].as_object() else { bail!("`rep` expects an object") };
            let field = |k: &str| rep.get(k).with_context(|| format!("`rep` is missing `{k}`"));
            let head = template_from_json(field("head")?, grammar)?;
            let slots = field("comb")?
                .as_array()
                .context("`comb` expects a list")?
                .iter()
                .map(slot_from_json)
                .collect::<Result<Vec<_>>>()?;
            let children = field("children")?
                .as_array()
                .context("`children` expects a list")?
                .iter()
                .map(|c| template_from_json(c, grammar))
                .collect::<Result<Vec<_>>>()?;
            Ok(TemplateExpr::rep(head, Combinator::new(slots)?, children)?)
        }
        other => bail!("not a template node: {other}"),
    }
}

fn slot_from_json(v: &Value) -> Result<Slot> {
    match v {
        Value::String(s) if s == "free" => Ok(Slot::Free),
        Value::String(s) if s == "star" => Ok(Slot::Star),
        Value::Object(m) if m.len() == 1 => match m.get("ref").and_then(Value::as_u64) {
            Some(j) => Ok(Slot::Ref(j as usize)),
            None => bail!("not a combinator slot: {v}"),
        },
        _ => bail!("not a combinator slot: {v}"),
    }
}

/// A template document, or a `parse --format json` report (its first template).
pub fn load_template(path: &Path, grammar: &Grammar) -> Result<TemplateExpr> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read template {}", path.display()))?;
    let doc: Value = serde_json::from_str(&text).with_context(|| format!("{} is not valid JSON", path.display()))?;
    let node = match doc.get("templates") {
        Some(list) => list
            .get(0)
            .and_then(|t| t.get("template"))
            .context("report holds no template")?,
        None => &doc,
    };
    template_from_json(node, grammar)
}
