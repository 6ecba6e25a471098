//! Graphviz rendering of a template and the relation tree it evaluates to.
//!
//! Subtrees that a combinator repeats (a `Ref` slot and its source, or a `Star`
//! slot and the head) share a fill colour and carry the slot as an external label.

use std::fmt::Write;

use structrep::{Combinator, Slot, TemplateExpr};

const PALETTE: [&str; 8] = ["#fde68a", "#bfdbfe", "#bbf7d0", "#fecaca", "#ddd6fe", "#fed7aa", "#a5f3fc", "#f5d0fe"];

/// A relation tree node with its repeat annotations.
#[derive(Clone, Debug)]
pub struct Node {
    pub label: String,
    pub hole: bool,
    /// Innermost repeat group this node belongs to.
    pub group: Option<usize>,
    pub notes: Vec<String>,
    pub children: Vec<Node>,
}

impl Node {
    fn hole() -> Self {
        Node { label: String::new(), hole: true, group: None, notes: Vec::new(), children: Vec::new() }
    }

    fn mark(&mut self, group: usize) {
        if self.hole {
            return;
        }
        self.group.get_or_insert(group);
        self.children.iter_mut().for_each(|c| c.mark(group));
    }

    fn plug(&mut self, fillers: &mut impl Iterator<Item = Node>) {
        if self.hole {
            *self = fillers.next().expect("one filler per hole");
            return;
        }
        self.children.iter_mut().for_each(|c| c.plug(fillers));
    }
}

/// Evaluates `e`, tagging repeated subtrees. Groups are numbered from `*next`.
pub fn annotate(e: &TemplateExpr, next: &mut usize) -> Node {
    match e {
        TemplateExpr::Id => Node::hole(),
        TemplateExpr::Pure(r) => Node {
            label: r.name().to_string(),
            hole: false,
            group: None,
            notes: Vec::new(),
            children: (0..r.arity()).map(|_| Node::hole()).collect(),
        },
        TemplateExpr::Rep { head, comb, children } => {
            let mut h = annotate(head, next);
            let mut free = children.iter().map(|c| annotate(c, next)).collect::<Vec<_>>().into_iter();
            let mut fillers: Vec<Node> = Vec::with_capacity(comb.len());
            // group id per referenced slot, assigned on first use
            let mut groups: Vec<Option<usize>> = vec![None; comb.len()];
            for (i, s) in comb.slots().iter().enumerate() {
                let node = match *s {
                    Slot::Free => free.next().expect("free children match the combinator"),
                    Slot::Ref(j) => {
                        let g = *groups[j].get_or_insert_with(|| {
                            let g = fresh(next);
                            fillers[j].mark(g);
                            fillers[j].notes.push(format!("{comb} slot {j}"));
                            g
                        });
                        let mut copy = strip(&fillers[j]);
                        copy.mark(g);
                        copy.notes.push(format!("{comb} slot {i} = slot {j}"));
                        copy
                    }
                    Slot::Star => {
                        let g = fresh(next);
                        h.mark(g);
                        h.notes.push(format!("{comb} head"));
                        let mut copy = strip(&h);
                        copy.notes.push(format!("{comb} slot {i} = head"));
                        copy
                    }
                };
                fillers.push(node);
            }
            h.plug(&mut fillers.into_iter());
            h
        }
    }
}

fn fresh(next: &mut usize) -> usize {
    *next += 1;
    *next - 1
}

/// A copy without the root's notes, which describe the original only.
fn strip(n: &Node) -> Node {
    let mut c = n.clone();
    c.notes.clear();
    c
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// One `digraph` document. With `with_program`, the template syntax tree is
/// drawn in a cluster next to the relation tree.
pub fn render(name: &str, e: &TemplateExpr, with_program: bool) -> String {
    let mut out = String::new();
    writeln!(out, "digraph \"{}\" {{", escape(name)).unwrap();
    out.push_str("  node [shape=box, style=\"rounded,filled\", fillcolor=white, fontname=\"Helvetica\"];\n");
    out.push_str("  forcelabels=true;\n");
    let mut ids = 0usize;
    if with_program {
        writeln!(out, "  subgraph cluster_program {{\n    label=\"template, size {}\";", e.size()).unwrap();
        program_nodes(e, &mut ids, &mut out);
        out.push_str("  }\n  subgraph cluster_tree {\n    label=\"relation tree\";\n");
    }
    let tree = annotate(e, &mut 0);
    tree_nodes(&tree, &mut ids, &mut out);
    if with_program {
        out.push_str("  }\n");
    }
    out.push_str("}\n");
    out
}

fn program_nodes(e: &TemplateExpr, ids: &mut usize, out: &mut String) -> usize {
    let id = fresh(ids);
    let label = match e {
        TemplateExpr::Id => "Id".to_string(),
        TemplateExpr::Pure(r) => format!("Pure {}", r.name()),
        TemplateExpr::Rep { comb, .. } => format!("Rep {comb}"),
    };
    writeln!(out, "    n{id} [label=\"{}\", shape=ellipse];", escape(&label)).unwrap();
    if let TemplateExpr::Rep { head, comb, children } = e {
        let h = program_nodes(head, ids, out);
        writeln!(out, "    n{id} -> n{h} [label=\"head\"];").unwrap();
        for (k, (c, slot)) in children.iter().zip(free_slots(comb)).enumerate() {
            let cid = program_nodes(c, ids, out);
            writeln!(out, "    n{id} -> n{cid} [label=\"child {k} (slot {slot})\"];").unwrap();
        }
    }
    id
}

fn free_slots(comb: &Combinator) -> impl Iterator<Item = usize> + '_ {
    comb.slots().iter().enumerate().filter(|(_, s)| **s == Slot::Free).map(|(i, _)| i)
}

fn tree_nodes(n: &Node, ids: &mut usize, out: &mut String) -> usize {
    let id = fresh(ids);
    let mut attrs = vec![format!("label=\"{}\"", if n.hole { "□".to_string() } else { escape(&n.label) })];
    if let Some(g) = n.group {
        attrs.push(format!("fillcolor=\"{}\"", PALETTE[g % PALETTE.len()]));
    }
    if !n.notes.is_empty() {
        attrs.push(format!("xlabel=\"{}\"", escape(&n.notes.join("\\n"))));
    }
    writeln!(out, "    n{id} [{}];", attrs.join(", ")).unwrap();
    for c in &n.children {
        let cid = tree_nodes(c, ids, out);
        writeln!(out, "    n{id} -> n{cid};").unwrap();
    }
    id
}

/// Indented text form of an annotated tree.
pub fn render_text(e: &TemplateExpr) -> String {
    fn walk(n: &Node, depth: usize, out: &mut String) {
        let label = if n.hole { "□" } else { n.label.as_str() };
        write!(out, "{}{label}", "  ".repeat(depth)).unwrap();
        if let Some(g) = n.group {
            write!(out, "  #{g}").unwrap();
        }
        for note in &n.notes {
            write!(out, "  [{note}]").unwrap();
        }
        out.push('\n');
        n.children.iter().for_each(|c| walk(c, depth + 1, out));
    }
    let mut out = String::new();
    walk(&annotate(e, &mut 0), 0, &mut out);
    out
}
