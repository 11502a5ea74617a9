//! Planar area enclosed between two polylines that share their endpoints.

use crate::error::{BaxError, Result};

type Pt = [f64; 2];

const PARAM_EPS: f64 = 1e-12;

fn sub(a: Pt, b: Pt) -> Pt {
    [a[0] - b[0], a[1] - b[1]]
}

fn cross(a: Pt, b: Pt) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn dot(a: Pt, b: Pt) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

fn lerp(a: Pt, b: Pt, t: f64) -> Pt {
    [a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t]
}

/// Signed shoelace area of a closed polygon.
pub fn shoelace_area(polygon: &[Pt]) -> f64 {
    let n = polygon.len();
    if n < 3 {
        return 0.0;
    }
    let twice: f64 = (0..n)
        .map(|i| cross(polygon[i], polygon[(i + 1) % n]))
        .sum();
    twice / 2.0
}

/// Parameter pairs `(t, u)` at which segment `p0 -> p1` meets `q0 -> q1`.
fn segment_hits(p0: Pt, p1: Pt, q0: Pt, q1: Pt) -> Vec<(f64, f64)> {
    let r = sub(p1, p0);
    let s = sub(q1, q0);
    let rr = dot(r, r);
    let ss = dot(s, s);
    if rr == 0.0 || ss == 0.0 {
        return Vec::new();
    }
    let qp = sub(q0, p0);
    let denom = cross(r, s);
    let scale = (rr * ss).sqrt();
    if denom.abs() > PARAM_EPS * scale {
        let t = cross(qp, s) / denom;
        let u = cross(qp, r) / denom;
        let inside = |v: f64| (-PARAM_EPS..=1.0 + PARAM_EPS).contains(&v);
        if inside(t) && inside(u) {
            return vec![(t.clamp(0.0, 1.0), u.clamp(0.0, 1.0))];
        }
        return Vec::new();
    }
    // parallel: only collinear overlaps count
    if cross(qp, r).abs() > PARAM_EPS * rr.sqrt() * (1.0 + dot(qp, qp).sqrt()) {
        return Vec::new();
    }
    let t0 = dot(qp, r) / rr;
    let t1 = dot(sub(q1, p0), r) / rr;
    let lo = t0.min(t1).max(0.0);
    let hi = t0.max(t1).min(1.0);
    if lo > hi + PARAM_EPS {
        return Vec::new();
    }
    let u_at = |t: f64| dot(sub(lerp(p0, p1, t), q0), s) / ss;
    let mut out = vec![(lo, u_at(lo).clamp(0.0, 1.0))];
    if hi - lo > PARAM_EPS {
        out.push((hi, u_at(hi).clamp(0.0, 1.0)));
    }
    out
}

fn point_at(curve: &[Pt], s: f64) -> Pt {
    let i = (s.floor() as usize).min(curve.len() - 2);
    lerp(curve[i], curve[i + 1], s - i as f64)
}

/// Points of `curve` strictly between parameters `from` and `to` (either order), endpoints included.
fn sub_curve(curve: &[Pt], from: f64, to: f64) -> Vec<Pt> {
    let mut out = vec![point_at(curve, from)];
    if from <= to {
        let first = from.floor() as usize + 1;
        for k in first..curve.len() {
            if (k as f64) >= to - PARAM_EPS {
                break;
            }
            if (k as f64) > from + PARAM_EPS {
                out.push(curve[k]);
            }
        }
    } else {
        let mut k = from.ceil() as isize - 1;
        while k >= 0 && (k as f64) > to + PARAM_EPS {
            if (k as f64) < from - PARAM_EPS {
                out.push(curve[k as usize]);
            }
            k -= 1;
        }
    }
    out.push(point_at(curve, to));
    out
}

fn self_intersects(curve: &[Pt]) -> bool {
    let m = curve.len() - 1;
    for i in 0..m {
        let r = sub(curve[i + 1], curve[i]);
        if i + 1 < m {
            let q = sub(curve[i + 2], curve[i + 1]);
            if cross(r, q).abs() <= PARAM_EPS * (dot(r, r) * dot(q, q)).sqrt() && dot(r, q) < 0.0 {
                return true;
            }
        }
        for j in i + 2..m {
            let hits = segment_hits(curve[i], curve[i + 1], curve[j], curve[j + 1]);
            // a closed curve's first and last segments legitimately share a point
            if !hits.is_empty() && !(i == 0 && j == m - 1 && curve[0] == curve[m]) {
                return true;
            }
        }
    }
    false
}

/// Polygon decomposition: split at every crossing, sum `|shoelace|` per piece.
///
/// Returns `None` when the crossings do not occur in the same order along both
/// curves, in which case the pieces are not simple polygons.
fn area_by_decomposition(a: &[Pt], b: &[Pt]) -> Option<f64> {
    let mut hits: Vec<(f64, f64)> = Vec::new();
    for i in 0..a.len() - 1 {
        for j in 0..b.len() - 1 {
            for (t, u) in segment_hits(a[i], a[i + 1], b[j], b[j + 1]) {
                hits.push((i as f64 + t, j as f64 + u));
            }
        }
    }
    hits.push((0.0, 0.0));
    hits.push(((a.len() - 1) as f64, (b.len() - 1) as f64));
    hits.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
    hits.dedup_by(|x, y| (x.0 - y.0).abs() <= 1e-9 && (x.1 - y.1).abs() <= 1e-9);
    if hits.windows(2).any(|w| w[1].1 < w[0].1 - 1e-9) {
        return None;
    }
    let mut total = 0.0;
    for w in hits.windows(2) {
        let (s0, t0) = w[0];
        let (s1, t1) = w[1];
        let mut poly = sub_curve(a, s0, s1);
        poly.extend(sub_curve(b, t1, t0));
        total += shoelace_area(&poly).abs();
    }
    Some(total)
}

/// Integral of |winding number| of the closed curve `a + reverse(b)`, by vertical slabs.
fn area_by_slabs(a: &[Pt], b: &[Pt]) -> f64 {
    let mut ring: Vec<Pt> = a.to_vec();
    ring.extend(b.iter().rev().skip(1));
    let edges: Vec<(Pt, Pt)> = (0..ring.len() - 1)
        .map(|i| (ring[i], ring[i + 1]))
        .collect();
    let mut xs: Vec<f64> = ring.iter().map(|p| p[0]).collect();
    for i in 0..edges.len() {
        for j in i + 1..edges.len() {
            for (t, _) in segment_hits(edges[i].0, edges[i].1, edges[j].0, edges[j].1) {
                xs.push(lerp(edges[i].0, edges[i].1, t)[0]);
            }
        }
    }
    xs.sort_by(f64::total_cmp);
    xs.dedup_by(|x, y| (*x - *y).abs() <= 1e-12);
    let mut total = 0.0;
    for w in xs.windows(2) {
        let (x0, x1) = (w[0], w[1]);
        let xm = 0.5 * (x0 + x1);
        let mut spans: Vec<(f64, f64, f64, f64)> = Vec::new();
        for &(p, q) in &edges {
            let (lo, hi) = (p[0].min(q[0]), p[0].max(q[0]));
            if lo < xm && xm < hi {
                let y_at = |x: f64| p[1] + (q[1] - p[1]) * (x - p[0]) / (q[0] - p[0]);
                let dir = if q[0] > p[0] { 1.0 } else { -1.0 };
                spans.push((y_at(xm), y_at(x0), y_at(x1), dir));
            }
        }
        spans.sort_by(|u, v| u.0.total_cmp(&v.0));
        let mut winding = 0.0;
        for k in 0..spans.len().saturating_sub(1) {
            winding += spans[k].3;
            if winding != 0.0 {
                let h0 = spans[k + 1].1 - spans[k].1;
                let h1 = spans[k + 1].2 - spans[k].2;
                total += winding.abs() * 0.5 * (h0 + h1) * (x1 - x0);
            }
        }
    }
    total
}

/// Raw (unnormalized) area between two polylines with common endpoints.
pub fn area_between(a: &[Pt], b: &[Pt]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(BaxError::input("paths must contain at least one point"));
    }
    let same = |p: Pt, q: Pt| (p[0] - q[0]).abs() <= 1e-12 && (p[1] - q[1]).abs() <= 1e-12;
    if !same(a[0], b[0]) || !same(a[a.len() - 1], b[b.len() - 1]) {
        return Err(BaxError::input("paths must share start and end positions"));
    }
    if a.len() < 2 || b.len() < 2 {
        return Ok(0.0);
    }
    if self_intersects(a) || self_intersects(b) {
        return Ok(area_by_slabs(a, b));
    }
    Ok(area_by_decomposition(a, b).unwrap_or_else(|| area_by_slabs(a, b)))
}

#[cfg(test)]
pub(crate) fn area_between_slabs(a: &[Pt], b: &[Pt]) -> f64 {
    area_by_slabs(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn unit_square_from_two_l_shapes() {
        let a = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]];
        let b = [[0.0, 0.0], [0.0, 1.0], [1.0, 1.0]];
        assert_abs_diff_eq!(area_between(&a, &b).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(area_between_slabs(&a, &b), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn identical_and_resampled_paths() {
        let a = [[0.0, 0.0], [1.0, 1.0], [2.0, 0.5]];
        assert_eq!(area_between(&a, &a).unwrap(), 0.0);
        let b = [[0.0, 0.0], [0.5, 0.5], [1.0, 1.0], [2.0, 0.5]];
        assert_abs_diff_eq!(area_between(&a, &b).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn crossing_paths_sum_absolute_lobes() {
        // two triangles of area 0.5 each, on opposite sides
        let a = [[0.0, 0.0], [1.0, 1.0], [2.0, 0.0]];
        let b = [[0.0, 0.0], [1.0, -1.0], [2.0, 0.0]];
        assert_abs_diff_eq!(area_between(&a, &b).unwrap(), 2.0, epsilon = 1e-12);
        let c = [[0.0, 0.0], [1.0, 1.0], [2.0, 0.0], [3.0, -1.0], [4.0, 0.0]];
        let d = [[0.0, 0.0], [4.0, 0.0]];
        assert_abs_diff_eq!(area_between(&c, &d).unwrap(), 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(area_between_slabs(&c, &d), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn mismatched_endpoints() {
        let a = [[0.0, 0.0], [1.0, 0.0]];
        let b = [[0.0, 0.0], [1.0, 1.0]];
        assert!(area_between(&a, &b).is_err());
    }

    #[test]
    fn shoelace_orientation() {
        let sq = [[0.0, 0.0], [2.0, 0.0], [2.0, 2.0], [0.0, 2.0]];
        assert_eq!(shoelace_area(&sq), 4.0);
        let rev: Vec<_> = sq.iter().rev().copied().collect();
        assert_eq!(shoelace_area(&rev), -4.0);
    }
}
