//! Graphviz export of order diagrams.

use std::fmt::Write as _;

use forklat_core::{Congruence, FiniteLattice, ForkAnnotation};

/// Fill colours for congruence blocks, cycled by block index.
pub const PALETTE: [&str; 10] = [
    "#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00", "#ffff33", "#a65628", "#f781bf",
    "#999999", "#66c2a5",
];

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

/// Renders `l` bottom-to-top, one rank per height.
///
/// Fork elements named by `fork` are filled black. With a congruence, every
/// node is filled with the colour of its block (block `k` gets
/// `PALETTE[k % 10]`, blocks numbered as in [`Congruence::format`]) and fork
/// elements get a double outline instead.
pub fn export_dot(
    l: &FiniteLattice,
    fork: Option<&ForkAnnotation>,
    congruence: Option<&Congruence>,
) -> String {
    let is_fork = |label: &str| fork.is_some_and(|f| f.labels().any(|x| x == label));
    let heights = l.heights();
    let mut nodes: Vec<_> = l.elements().collect();
    nodes.sort_by(|&a, &b| (heights[a.0], l.label(a)).cmp(&(heights[b.0], l.label(b))));

    let mut out = String::new();
    out.push_str("digraph lattice {\n");
    out.push_str("  rankdir=BT;\n");
    out.push_str("  node [shape=circle, fontsize=10];\n");
    out.push_str("  edge [arrowhead=none];\n");
    for &x in &nodes {
        let label = l.label(x);
        let mut attrs = Vec::new();
        match congruence {
            Some(c) => {
                let colour = PALETTE[c.block_of(x) % PALETTE.len()];
                attrs.push(format!("style=filled, fillcolor={}", quote(colour)));
                if is_fork(label) {
                    attrs.push("peripheries=2".to_string());
                }
            }
            None if is_fork(label) => {
                attrs.push("style=filled, fillcolor=black, fontcolor=white".to_string())
            }
            None => {}
        }
        if attrs.is_empty() {
            let _ = writeln!(out, "  {};", quote(label));
        } else {
            let _ = writeln!(out, "  {} [{}];", quote(label), attrs.join(", "));
        }
    }
    let top = heights.iter().copied().max().unwrap_or(0);
    for h in 0..=top {
        let same: Vec<String> = nodes
            .iter()
            .filter(|x| heights[x.0] == h)
            .map(|&x| quote(l.label(x)))
            .collect();
        if same.len() > 1 {
            let _ = writeln!(out, "  {{ rank=same; {}; }}", same.join("; "));
        }
    }
    let mut edges: Vec<(&str, &str)> = l
        .cover_pairs()
        .map(|(a, b)| (l.label(a), l.label(b)))
        .collect();
    edges.sort_unstable();
    for (a, b) in edges {
        let _ = writeln!(out, "  {} -> {};", quote(a), quote(b));
    }
    out.push_str("}\n");
    out
}
