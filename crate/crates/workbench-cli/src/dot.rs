//! Graphviz output for finite structures.

use std::fmt::Write;

use workbench_core::algebra::RegionAlgebra;
use workbench_core::bits::Bits;
use workbench_core::duality::DualSpace;
use workbench_core::finite::FiniteLca;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Atoms as nodes, non-loop adjacency as edges; bounded atoms get a
/// double border.
pub fn contact_graph(name: &str, s: &FiniteLca) -> String {
    let mut out = format!("graph {} {{\n", quote(name));
    let bounded = s.bound_atoms();
    for (i, a) in s.atom_names().iter().enumerate() {
        let mark = if bounded >> i & 1 == 1 { " [peripheries=2]" } else { "" };
        writeln!(out, "  {}{mark};", quote(a)).unwrap();
    }
    let n = s.atom_count();
    for i in 0..n {
        for j in i + 1..n {
            if s.contact(&s.atom(i), &s.atom(j)) {
                writeln!(out, "  {} -- {};", quote(&s.atom_names()[i]), quote(&s.atom_names()[j])).unwrap();
            }
        }
    }
    out.push_str("}\n");
    out
}

/// Bounded clusters labeled by their bounded traces, with an arrow
/// `x -> y` when `x` lies in the closure of `y`.
pub fn dual_space(name: &str, s: &FiniteLca, d: &DualSpace) -> String {
    let mut out = format!("digraph {} {{\n", quote(&format!("dual of {name}")));
    let ib = s.bounded_set();
    for i in 0..d.len() {
        let label = s.render_set(d.cluster(i).intersection(ib));
        writeln!(out, "  {} [label={}];", quote(d.point_name(i)), quote(&label)).unwrap();
    }
    for y in 0..d.len() {
        let cl = d.space.closure(Bits::singleton(y));
        for x in cl.iter().filter(|&x| x != y) {
            writeln!(out, "  {} -> {};", quote(d.point_name(x)), quote(d.point_name(y))).unwrap();
        }
    }
    out.push_str("}\n");
    out
}
