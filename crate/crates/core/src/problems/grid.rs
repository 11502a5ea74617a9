use crate::algorithms::{Graph, Vertex};
use crate::domain::BoxDomain;
use crate::error::{BaxError, Result};

// E, NE, N, NW, W, SW, S, SE
const NEIGHBORS: [(i64, i64); 8] = [
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
    (-1, 0),
    (-1, -1),
    (0, -1),
    (1, -1),
];

/// `nx` by `ny` vertices spaced evenly over a 2-D box, each joined to its
/// cardinal and diagonal neighbours in both directions.
///
/// Vertex ids are row-major: `id = j * nx + i` for column `i`, row `j`.
pub fn make_grid_graph(nx: usize, ny: usize, domain: &BoxDomain) -> Result<Graph> {
    if nx < 2 || ny < 2 {
        return Err(BaxError::input(format!(
            "grid needs at least 2x2 vertices, got {nx}x{ny}"
        )));
    }
    domain.validate()?;
    if domain.dim() != 2 {
        return Err(BaxError::input("grid graphs live in a 2-D domain"));
    }
    let coord = |k: usize, n: usize, d: usize| {
        domain.lower[d] + (domain.upper[d] - domain.lower[d]) * k as f64 / (n - 1) as f64
    };
    let mut vertices = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            vertices.push(Vertex {
                id: j * nx + i,
                position: [coord(i, nx, 0), coord(j, ny, 1)],
            });
        }
    }
    let mut edges = Vec::new();
    for j in 0..ny as i64 {
        for i in 0..nx as i64 {
            for (di, dj) in NEIGHBORS {
                let (a, b) = (i + di, j + dj);
                if a >= 0 && b >= 0 && a < nx as i64 && b < ny as i64 {
                    edges.push(((j * nx as i64 + i) as usize, (b * nx as i64 + a) as usize));
                }
            }
        }
    }
    Graph::new(vertices, &edges)
}

/// Directed edge count of an 8-connected `nx` by `ny` grid.
pub fn grid_edge_count(nx: usize, ny: usize) -> usize {
    2 * (nx * (ny - 1) + ny * (nx - 1) + 2 * (nx - 1) * (ny - 1))
}
