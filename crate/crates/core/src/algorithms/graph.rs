use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{BaxError, Result};

pub const EDGE_LIST_HEADER: &str = "from_id,to_id,x_from,y_from,x_to,y_to";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: usize,
    pub position: [f64; 2],
}

/// A directed edge. Undirected connections are stored as two edges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub midpoint: [f64; 2],
}

/// Planar graph whose edge costs are a function of edge midpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    index: HashMap<usize, usize>,
    /// Outgoing edge indices per vertex slot, in insertion order.
    outgoing: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from vertices and `(from_id, to_id)` pairs; midpoints are computed.
    pub fn new(vertices: Vec<Vertex>, edges: &[(usize, usize)]) -> Result<Self> {
        let mut index = HashMap::with_capacity(vertices.len());
        for (slot, v) in vertices.iter().enumerate() {
            if !v.position.iter().all(|c| c.is_finite()) {
                return Err(BaxError::input(format!(
                    "vertex {} has non-finite position",
                    v.id
                )));
            }
            if index.insert(v.id, slot).is_some() {
                return Err(BaxError::input(format!("duplicate vertex id {}", v.id)));
            }
        }
        let mut outgoing = vec![Vec::new(); vertices.len()];
        let mut built = Vec::with_capacity(edges.len());
        for &(from, to) in edges {
            let (Some(&a), Some(&b)) = (index.get(&from), index.get(&to)) else {
                return Err(BaxError::input(format!(
                    "edge {from} -> {to} references a missing vertex"
                )));
            };
            let (pa, pb) = (vertices[a].position, vertices[b].position);
            outgoing[a].push(built.len());
            built.push(Edge {
                from,
                to,
                midpoint: [(pa[0] + pb[0]) / 2.0, (pa[1] + pb[1]) / 2.0],
            });
        }
        Ok(Graph {
            vertices,
            edges: built,
            index,
            outgoing,
        })
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub(crate) fn slot(&self, id: usize) -> Option<usize> {
        self.index.get(&id).copied()
    }

    pub(crate) fn outgoing(&self, slot: usize) -> &[usize] {
        &self.outgoing[slot]
    }

    pub fn position(&self, id: usize) -> Option<[f64; 2]> {
        self.slot(id).map(|s| self.vertices[s].position)
    }

    /// Distinct edge midpoints in first-appearance order.
    pub fn distinct_midpoints(&self) -> Vec<Vec<f64>> {
        let mut seen = std::collections::HashSet::new();
        self.edges
            .iter()
            .filter(|e| seen.insert(crate::gp::point_key(&e.midpoint)))
            .map(|e| e.midpoint.to_vec())
            .collect()
    }

    /// Area of the axis-aligned bounding box of all vertex positions.
    pub fn bounding_box_area(&self) -> f64 {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for v in &self.vertices {
            for k in 0..2 {
                lo[k] = lo[k].min(v.position[k]);
                hi[k] = hi[k].max(v.position[k]);
            }
        }
        if self.vertices.is_empty() {
            return 0.0;
        }
        (hi[0] - lo[0]) * (hi[1] - lo[1])
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = String::from(EDGE_LIST_HEADER);
        out.push('\n');
        for e in &self.edges {
            let a = self.position(e.from).expect("validated edge");
            let b = self.position(e.to).expect("validated edge");
            // {:?} on f64 prints the shortest string that round-trips exactly
            let _ = writeln!(
                out,
                "{},{},{:?},{:?},{:?},{:?}",
                e.from, e.to, a[0], a[1], b[0], b[1]
            );
        }
        out
    }

    /// Parses the edge-list format: one header line, then one directed edge per row.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, h)) if h.trim() == EDGE_LIST_HEADER => {}
            Some((_, h)) => {
                return Err(BaxError::Parse {
                    line: 1,
                    message: format!("expected header `{EDGE_LIST_HEADER}`, found `{}`", h.trim()),
                })
            }
            None => {
                return Err(BaxError::Parse {
                    line: 1,
                    message: "empty file".into(),
                })
            }
        }
        let mut vertices: Vec<Vertex> = Vec::new();
        let mut seen: HashMap<usize, [f64; 2]> = HashMap::new();
        let mut edges = Vec::new();
        for (i, raw) in lines {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 6 {
                return Err(BaxError::Parse {
                    line: line_no,
                    message: format!("expected 6 fields, found {}", fields.len()),
                });
            }
            let parse_id = |s: &str| {
                s.parse::<usize>().map_err(|e| BaxError::Parse {
                    line: line_no,
                    message: format!("bad vertex id `{s}`: {e}"),
                })
            };
            let parse_f = |s: &str| {
                s.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| BaxError::Parse {
                        line: line_no,
                        message: format!("bad coordinate `{s}`"),
                    })
            };
            let from = parse_id(fields[0])?;
            let to = parse_id(fields[1])?;
            let pa = [parse_f(fields[2])?, parse_f(fields[3])?];
            let pb = [parse_f(fields[4])?, parse_f(fields[5])?];
            for (id, p) in [(from, pa), (to, pb)] {
                match seen.get(&id) {
                    Some(q) if *q != p => {
                        return Err(BaxError::Parse {
                            line: line_no,
                            message: format!("vertex {id} appears with two positions"),
                        })
                    }
                    Some(_) => {}
                    None => {
                        seen.insert(id, p);
                        vertices.push(Vertex { id, position: p });
                    }
                }
            }
            edges.push((from, to));
        }
        if edges.is_empty() {
            return Err(BaxError::Parse {
                line: 2,
                message: "edge list has no edges".into(),
            });
        }
        Graph::new(vertices, &edges)
    }
}

pub fn load_graph(path: impl AsRef<Path>) -> Result<Graph> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| BaxError::io(path, e))?;
    Graph::parse_edge_list(&text)
}

pub fn save_graph(graph: &Graph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, graph.to_edge_list()).map_err(|e| BaxError::io(path, e))
}
