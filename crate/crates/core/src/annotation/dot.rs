use std::fmt::Write;

use super::AnnotationGraph;

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Renders a graph in Graphviz DOT.
///
/// Nodes are named by entity id, labeled `"<tokens> [<LABEL>]"`, and emitted
/// in entity order; edges carry the relation label. Output is deterministic.
///
/// ```
/// use radreward::annotation::{export_dot, AnnotationGraph};
///
/// assert_eq!(export_dot(&AnnotationGraph::empty()), "digraph {\n}\n");
/// ```
pub fn export_dot(g: &AnnotationGraph) -> String {
    let mut out = String::from("digraph {\n");
    for e in g.entities() {
        let _ = writeln!(out, "  \"{}\" [label=\"{} [{}]\"];", escape(&e.id), escape(&e.tokens), e.label);
    }
    for r in g.relations() {
        let _ = writeln!(out, "  \"{}\" -> \"{}\" [label=\"{}\"];", escape(&r.source), escape(&r.target), r.label);
    }
    out.push_str("}\n");
    out
}
