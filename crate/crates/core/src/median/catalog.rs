use std::collections::BTreeMap;

use crate::graph::{FiniteGraph, PermutationAction};

use super::MedianError;

/// The `a × b` grid of vertices `x,y` with `0 ≤ x < a`, `0 ≤ y < b`.
pub fn grid(a: usize, b: usize) -> FiniteGraph {
    lattice_graph((0..a).flat_map(|x| (0..b).map(move |y| (x, y))).collect())
}

/// The binary tree on `n` vertices with parent `(i − 1) / 2`.
pub fn binary_tree(n: usize) -> FiniteGraph {
    let edges: Vec<(usize, usize)> = (1..n).map(|i| ((i - 1) / 2, i)).collect();
    FiniteGraph::from_edges(n, &edges).expect("tree edges are simple")
}

/// The square complex of a Young diagram: row `j` holds `rows[j]` unit
/// squares, rows are non-increasing, and vertices are the square corners.
pub fn young_diagram(rows: &[usize]) -> FiniteGraph {
    assert!(rows.windows(2).all(|w| w[0] >= w[1]), "rows must be non-increasing");
    let mut corners = std::collections::BTreeSet::new();
    for (y, &r) in rows.iter().enumerate() {
        for x in 0..r {
            for (dx, dy) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
                corners.insert((x + dx, y + dy));
            }
        }
    }
    lattice_graph(corners.into_iter().collect())
}

/// The Young diagram with rows `k + 1, k, …, 1`, whose staircase length is k.
pub fn staircase_complex(k: usize) -> FiniteGraph {
    let rows: Vec<usize> = (1..=k + 1).rev().collect();
    young_diagram(&rows)
}

fn lattice_graph(points: Vec<(usize, usize)>) -> FiniteGraph {
    let index: BTreeMap<(usize, usize), usize> = points.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut edges = Vec::new();
    for (&(x, y), &i) in &index {
        for q in [(x + 1, y), (x, y + 1)] {
            if let Some(&j) = index.get(&q) {
                edges.push((i, j));
            }
        }
    }
    let names = points.iter().map(|(x, y)| format!("{x},{y}")).collect();
    FiniteGraph::new(names, &edges).expect("lattice edges are simple")
}

/// Parses `grid:AxB`, `path:N` (N edges), `tree:N` (N vertices),
/// `cycle:N`, `staircase:K` and `square`, with the trivial action.
pub fn builtin_complex(spec: &str) -> Result<(FiniteGraph, PermutationAction), MedianError> {
    let unknown = || MedianError::UnknownComplex(spec.to_string());
    let (kind, arg) = spec.split_once(':').unwrap_or((spec, ""));
    let num = |s: &str| s.parse::<usize>().map_err(|_| unknown());
    let graph = match kind {
        "square" => FiniteGraph::cycle(4),
        "grid" => {
            let (a, b) = arg.split_once('x').ok_or_else(unknown)?;
            let (a, b) = (num(a)?, num(b)?);
            if a == 0 || b == 0 {
                return Err(unknown());
            }
            grid(a, b)
        }
        "path" => FiniteGraph::path_graph(num(arg)?),
        "tree" => match num(arg)? {
            0 => return Err(unknown()),
            n => binary_tree(n),
        },
        "cycle" => match num(arg)? {
            n if n >= 3 => FiniteGraph::cycle(n),
            _ => return Err(unknown()),
        },
        "staircase" => staircase_complex(num(arg)?),
        _ => return Err(unknown()),
    };
    Ok((graph, PermutationAction::new()))
}

/// The built-in median graphs used by sweeps that need a representative set.
pub fn builtin_median_specs() -> Vec<&'static str> {
    vec!["square", "path:4", "tree:10", "grid:3x3", "grid:4x4", "staircase:2", "staircase:3"]
}
