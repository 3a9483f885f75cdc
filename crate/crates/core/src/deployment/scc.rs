use serde::Serialize;

use super::DeploymentGraph;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Condensation {
    pub component_of: Vec<usize>,
    pub components: Vec<Vec<usize>>,
    /// Deduplicated arcs between component ids.
    pub dag_arcs: Vec<(usize, usize)>,
    pub sinks: Vec<usize>,
}

impl Condensation {
    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn is_sink(&self, c: usize) -> bool {
        self.sinks.binary_search(&c).is_ok()
    }

    /// Component ids in topological order (sources first).
    ///
    /// Tarjan emits components in reverse topological order, so this is the
    /// id order reversed.
    pub fn topological_order(&self) -> Vec<usize> {
        (0..self.components.len()).rev().collect()
    }
}

/// Strongly connected components by an explicit-stack Tarjan.
pub fn condensation(graph: &DeploymentGraph) -> Condensation {
    const UNSEEN: usize = usize::MAX;
    let n = graph.profile_count();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut component_of = vec![UNSEEN; n];
    let mut components: Vec<Vec<usize>> = Vec::new();
    let mut next = 0;
    // (vertex, position in its out-arc list)
    let mut call: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            let arcs = graph.out_arcs(v);
            if *pos < arcs.len() {
                let w = arcs[*pos].target;
                *pos += 1;
                if index[w] == UNSEEN {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let id = components.len();
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack");
                    on_stack[w] = false;
                    component_of[w] = id;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                components.push(comp);
            }
        }
    }
    let mut dag_arcs: Vec<(usize, usize)> = (0..n)
        .flat_map(|v| graph.out_arcs(v).iter().map(move |a| (v, a.target)))
        .map(|(v, w)| (component_of[v], component_of[w]))
        .filter(|(a, b)| a != b)
        .collect();
    dag_arcs.sort_unstable();
    dag_arcs.dedup();
    let mut has_out = vec![false; components.len()];
    for &(a, _) in &dag_arcs {
        has_out[a] = true;
    }
    let sinks = (0..components.len()).filter(|&c| !has_out[c]).collect();
    Condensation {
        component_of,
        components,
        dag_arcs,
        sinks,
    }
}

#[cfg(test)]
mod tests {
    use super::super::{Arc, GraphKind, Polarity};
    use super::*;
    use proptest::prelude::*;

    fn graph(n: usize, edges: &[(usize, usize)]) -> DeploymentGraph {
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            adj[a].push(Arc {
                target: b,
                polarity: Polarity::Positive,
                player: 0,
            });
        }
        DeploymentGraph::from_adjacency(GraphKind::Strict, adj).unwrap()
    }

    fn reach(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<bool>> {
        let mut r = vec![vec![false; n]; n];
        for (i, row) in r.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in edges {
            r[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if r[i][k] {
                    for j in 0..n {
                        if r[k][j] {
                            r[i][j] = true;
                        }
                    }
                }
            }
        }
        r
    }

    #[test]
    fn no_arcs_all_singleton_sinks() {
        let c = condensation(&graph(4, &[]));
        assert_eq!(c.component_count(), 4);
        assert_eq!(c.sinks.len(), 4);
    }

    #[test]
    fn single_cycle() {
        let c = condensation(&graph(3, &[(0, 1), (1, 2), (2, 0)]));
        assert_eq!(c.components, vec![vec![0, 1, 2]]);
        assert_eq!(c.sinks, vec![0]);
    }

    #[test]
    fn long_path_does_not_recurse() {
        let n = 200_000;
        let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        let c = condensation(&graph(n, &edges));
        assert_eq!(c.component_count(), n);
        assert_eq!(c.sinks.len(), 1);
        assert_eq!(c.components[c.sinks[0]], vec![n - 1]);
    }

    proptest! {
        #[test]
        fn matches_reachability_oracle(n in 1usize..12, raw in proptest::collection::vec((0usize..12, 0usize..12), 0..40)) {
            let edges: Vec<_> = raw.into_iter().map(|(a, b)| (a % n, b % n)).collect();
            let c = condensation(&graph(n, &edges));
            let r = reach(n, &edges);
            for i in 0..n {
                for j in 0..n {
                    prop_assert_eq!(c.component_of[i] == c.component_of[j], r[i][j] && r[j][i]);
                }
            }
            // Topological order respects every dag arc.
            let order = c.topological_order();
            let mut pos = vec![0; order.len()];
            for (k, &id) in order.iter().enumerate() {
                pos[id] = k;
            }
            for &(a, b) in &c.dag_arcs {
                prop_assert!(pos[a] < pos[b]);
            }
            for comp in 0..c.component_count() {
                let leaves = c.dag_arcs.iter().any(|&(a, _)| a == comp);
                prop_assert_eq!(c.is_sink(comp), !leaves);
            }
        }
    }
}
