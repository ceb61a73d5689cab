use std::fmt::Write;

use super::Context;

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Graphviz rendering of a context's interpretation. Unrestricted bindings
/// are listed in a single box.
pub fn to_dot(ctx: &Context, name: &str) -> String {
    let interp = ctx.interpret();
    let mut out = String::new();
    writeln!(out, "digraph \"{}\" {{", escape(name)).unwrap();
    writeln!(out, "  rankdir=LR;").unwrap();
    for (i, b) in interp.graph.labels.iter().enumerate() {
        writeln!(out, "  n{i} [label=\"{}\"];", escape(&b.to_string())).unwrap();
    }
    for (a, b) in &interp.graph.edges {
        writeln!(out, "  n{a} -> n{b};").unwrap();
    }
    if !interp.unr.is_empty() {
        let items: Vec<String> = interp.unr.iter().map(|b| escape(&b.to_string())).collect();
        writeln!(
            out,
            "  unr [shape=box, label=\"unrestricted\\n{}\"];",
            items.join("\\n")
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}
