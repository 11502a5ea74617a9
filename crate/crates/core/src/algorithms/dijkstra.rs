use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::graph::Graph;
use super::path::{AlgorithmOutput, ExecutionPath};
use crate::error::{BaxError, Result};

#[derive(Debug, PartialEq)]
struct Frontier {
    dist: f64,
    slot: usize,
}

impl Eq for Frontier {}

impl Ord for Frontier {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on distance, then on vertex slot
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.slot.cmp(&self.slot))
    }
}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Shortest path from `source` to `dest`, querying edge costs only as edges are relaxed.
///
/// Each directed edge is queried at most once. Edges into already settled
/// vertices are not queried, and the search stops once `dest` is settled.
pub fn run_dijkstra<F>(
    graph: &Graph,
    source: usize,
    dest: usize,
    mut cost: F,
) -> Result<(ExecutionPath, AlgorithmOutput)>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    let src = graph
        .slot(source)
        .ok_or_else(|| BaxError::input(format!("unknown source vertex {source}")))?;
    let dst = graph
        .slot(dest)
        .ok_or_else(|| BaxError::input(format!("unknown destination vertex {dest}")))?;

    let n = graph.num_vertices();
    let mut dist = vec![f64::INFINITY; n];
    let mut settled = vec![false; n];
    let mut via_edge: Vec<Option<usize>> = vec![None; n];
    let mut edge_cost: Vec<Option<f64>> = vec![None; graph.num_edges()];
    let mut path = ExecutionPath::default();
    let mut heap = BinaryHeap::new();

    dist[src] = 0.0;
    heap.push(Frontier {
        dist: 0.0,
        slot: src,
    });
    while let Some(Frontier { dist: d, slot: u }) = heap.pop() {
        if settled[u] {
            continue;
        }
        settled[u] = true;
        if u == dst {
            break;
        }
        for &e in graph.outgoing(u) {
            let edge = &graph.edges()[e];
            let v = graph.slot(edge.to).expect("validated edge");
            if settled[v] {
                continue;
            }
            let c = match edge_cost[e] {
                Some(c) => c,
                None => {
                    let c = cost(&edge.midpoint)?;
                    if c.is_nan() || c < 0.0 {
                        return Err(BaxError::Contract(format!(
                            "edge {} -> {} returned cost {c}; costs must be nonnegative",
                            edge.from, edge.to
                        )));
                    }
                    path.record(&edge.midpoint, c);
                    edge_cost[e] = Some(c);
                    c
                }
            };
            let nd = d + c;
            if nd < dist[v] {
                dist[v] = nd;
                via_edge[v] = Some(e);
                heap.push(Frontier { dist: nd, slot: v });
            }
        }
    }
    if !settled[dst] {
        return Err(BaxError::NoPath {
            start: source,
            dest,
        });
    }

    let mut edges_rev = Vec::new();
    let mut cur = dst;
    while let Some(e) = via_edge[cur] {
        edges_rev.push(e);
        cur = graph.slot(graph.edges()[e].from).expect("validated edge");
    }
    edges_rev.reverse();
    let mut vertices = vec![source];
    let mut positions = vec![graph.vertices()[src].position];
    let mut edge_points = Vec::with_capacity(edges_rev.len());
    let mut edge_costs = Vec::with_capacity(edges_rev.len());
    for e in edges_rev {
        let edge = &graph.edges()[e];
        vertices.push(edge.to);
        positions.push(graph.position(edge.to).expect("validated edge"));
        edge_points.push(edge.midpoint.to_vec());
        edge_costs.push(edge_cost[e].expect("path edges were queried"));
    }
    Ok((
        path,
        AlgorithmOutput::GraphPath {
            vertices,
            positions,
            edge_points,
            edge_costs,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::graph::Vertex;

    fn v(id: usize, x: f64, y: f64) -> Vertex {
        Vertex {
            id,
            position: [x, y],
        }
    }

    fn path_vertices(out: &AlgorithmOutput) -> Vec<usize> {
        match out {
            AlgorithmOutput::GraphPath { vertices, .. } => vertices.clone(),
            _ => unreachable!(),
        }
    }

    #[test]
    fn single_edge() {
        let g = Graph::new(vec![v(0, 0.0, 0.0), v(1, 1.0, 0.0)], &[(0, 1)]).unwrap();
        let (path, out) = run_dijkstra(&g, 0, 1, |_| Ok(2.0)).unwrap();
        assert_eq!(path.len(), 1);
        assert_eq!(path_vertices(&out), vec![0, 1]);
    }

    #[test]
    fn triangle_prefers_two_hops() {
        let g = Graph::new(
            vec![v(0, 0.0, 0.0), v(1, 1.0, 1.0), v(2, 2.0, 0.0)],
            &[(0, 1), (1, 0), (1, 2), (2, 1), (0, 2), (2, 0)],
        )
        .unwrap();
        // a-b at (0.5, 0.5), b-c at (1.5, 0.5), a-c at (1, 0)
        let cost = |m: &[f64]| Ok(if m[1] == 0.0 { 3.0 } else { 1.0 });
        let (_, out) = run_dijkstra(&g, 0, 2, cost).unwrap();
        assert_eq!(path_vertices(&out), vec![0, 1, 2]);
        if let AlgorithmOutput::GraphPath { edge_costs, .. } = out {
            assert_eq!(edge_costs.iter().sum::<f64>(), 2.0);
        }
    }

    #[test]
    fn negative_cost_is_contract_violation() {
        let g = Graph::new(vec![v(0, 0.0, 0.0), v(1, 1.0, 0.0)], &[(0, 1)]).unwrap();
        assert!(matches!(
            run_dijkstra(&g, 0, 1, |_| Ok(-1.0)),
            Err(BaxError::Contract(_))
        ));
    }

    #[test]
    fn unreachable_destination() {
        let g = Graph::new(
            vec![v(0, 0.0, 0.0), v(1, 1.0, 0.0), v(2, 5.0, 5.0)],
            &[(0, 1)],
        )
        .unwrap();
        assert!(matches!(
            run_dijkstra(&g, 0, 2, |_| Ok(1.0)),
            Err(BaxError::NoPath { start: 0, dest: 2 })
        ));
    }

    #[test]
    fn source_equals_destination() {
        let g = Graph::new(vec![v(0, 0.0, 0.0), v(1, 1.0, 0.0)], &[(0, 1)]).unwrap();
        let (path, out) = run_dijkstra(&g, 0, 0, |_| Ok(1.0)).unwrap();
        assert!(path.is_empty());
        assert_eq!(path_vertices(&out), vec![0]);
    }
}
