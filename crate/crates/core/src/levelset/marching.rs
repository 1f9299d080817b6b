//! Marching squares with centre-value saddle resolution and Newton
//! projection of the emitted vertices.

use std::collections::HashMap;

use rayon::prelude::*;

use super::{Component, LevelCurve};
use crate::error::{Error, Result};
use crate::field::{Point, ScalarField};
use crate::grid::Box2;

const PROJECTION_STEPS: usize = 3;

struct Grid<'a> {
    bounds: &'a Box2,
    nx: usize,
    ny: usize,
    values: Vec<f64>,
}

impl Grid<'_> {
    fn node(&self, i: usize, j: usize) -> (f64, f64, f64) {
        (self.bounds.x_at(i, self.nx), self.bounds.y_at(j, self.ny), self.values[j * (self.nx + 1) + i])
    }

    fn horizontal(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    fn vertical(&self, i: usize, j: usize) -> usize {
        (self.ny + 1) * self.nx + j * (self.nx + 1) + i
    }

    /// Endpoints of an edge id.
    fn edge_nodes(&self, e: usize) -> ((usize, usize), (usize, usize)) {
        let h = (self.ny + 1) * self.nx;
        if e < h {
            let (j, i) = (e / self.nx, e % self.nx);
            ((i, j), (i + 1, j))
        } else {
            let e = e - h;
            let (j, i) = (e / (self.nx + 1), e % (self.nx + 1));
            ((i, j), (i, j + 1))
        }
    }

    fn is_boundary_edge(&self, e: usize) -> bool {
        let ((i0, j0), (i1, j1)) = self.edge_nodes(e);
        (j0 == j1 && (j0 == 0 || j0 == self.ny)) || (i0 == i1 && (i0 == 0 || i0 == self.nx))
    }
}

/// Segments of one cell as pairs of edge ids.
fn cell_segments(grid: &Grid, f: &ScalarField, c: f64, i: usize, j: usize, out: &mut Vec<(usize, usize)>) {
    let inside = |v: f64| v >= c;
    let (_, _, bl) = grid.node(i, j);
    let (_, _, br) = grid.node(i + 1, j);
    let (_, _, tr) = grid.node(i + 1, j + 1);
    let (_, _, tl) = grid.node(i, j + 1);
    let (b, r, t, l) = (grid.horizontal(i, j), grid.vertical(i + 1, j), grid.horizontal(i, j + 1), grid.vertical(i, j));
    let code = (inside(bl) as u8) | (inside(br) as u8) << 1 | (inside(tr) as u8) << 2 | (inside(tl) as u8) << 3;
    match code {
        0 | 15 => {}
        1 | 14 => out.push((l, b)),
        2 | 13 => out.push((b, r)),
        3 | 12 => out.push((l, r)),
        4 | 11 => out.push((r, t)),
        6 | 9 => out.push((b, t)),
        7 | 8 => out.push((t, l)),
        5 | 10 => {
            let (x0, y0, _) = grid.node(i, j);
            let (x1, y1, _) = grid.node(i + 1, j + 1);
            let centre_inside = inside(f.value_xy(0.5 * (x0 + x1), 0.5 * (y0 + y1)));
            // code 5: bl and tr inside
            let cut_br_tl = (code == 5) == centre_inside;
            if cut_br_tl {
                out.push((b, r));
                out.push((t, l));
            } else {
                out.push((l, b));
                out.push((r, t));
            }
        }
        _ => unreachable!(),
    }
}

fn project(f: &ScalarField, c: f64, x: f64, y: f64, max_move: f64) -> (f64, f64) {
    let (mut px, mut py) = (x, y);
    for _ in 0..PROJECTION_STEPS {
        let Ok(j) = f.jet(&[px, py]) else { break };
        let r = j.value - c;
        if r.abs() <= 1e-15 * (1.0 + c.abs()) {
            break;
        }
        let g2 = j.gradient[0] * j.gradient[0] + j.gradient[1] * j.gradient[1];
        if !(g2 > 0.0) {
            break;
        }
        let (nx, ny) = (px - r * j.gradient[0] / g2, py - r * j.gradient[1] / g2);
        if !(nx.is_finite() && ny.is_finite()) || (nx - x).hypot(ny - y) > max_move {
            return (x, y);
        }
        (px, py) = (nx, ny);
    }
    (px, py)
}

/// Polylines of f⁻¹(c) on a `cells`×`cells` grid over `bounds`.
pub fn extract_level(f: &ScalarField, c: f64, bounds: &Box2, cells: usize) -> Result<LevelCurve> {
    if cells == 0 {
        return Err(Error::Precondition("resolution must be at least one cell".into()));
    }
    if f.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: f.dim() });
    }
    if !c.is_finite() {
        return Err(Error::Precondition(format!("level must be finite (got {c})")));
    }
    let (nx, ny) = (cells, cells);
    let values: Vec<f64> = (0..=ny)
        .into_par_iter()
        .flat_map_iter(|j| {
            let y = bounds.y_at(j, ny);
            (0..=nx).map(move |i| f.value_xy(bounds.x_at(i, nx), y))
        })
        .collect();
    let grid = Grid { bounds, nx, ny, values };

    let segments: Vec<(usize, usize)> = (0..ny)
        .into_par_iter()
        .flat_map_iter(|j| {
            let mut out = Vec::new();
            for i in 0..nx {
                cell_segments(&grid, f, c, i, j, &mut out);
            }
            out
        })
        .collect();

    let mut incident: HashMap<usize, Vec<usize>> = HashMap::new();
    for (k, &(a, b)) in segments.iter().enumerate() {
        incident.entry(a).or_default().push(k);
        incident.entry(b).or_default().push(k);
    }

    let mut used = vec![false; segments.len()];
    let mut chains: Vec<(Vec<usize>, bool)> = Vec::new();
    let walk = |start_edge: usize, first: usize, used: &mut Vec<bool>| -> (Vec<usize>, bool) {
        let mut edges = vec![start_edge];
        let (mut seg, mut at) = (first, start_edge);
        loop {
            used[seg] = true;
            let (a, b) = segments[seg];
            let next_edge = if a == at { b } else { a };
            if next_edge == start_edge {
                return (edges, true);
            }
            edges.push(next_edge);
            at = next_edge;
            match incident[&at].iter().find(|&&s| !used[s]) {
                Some(&s) => seg = s,
                None => return (edges, false),
            }
        }
    };

    let mut open_starts: Vec<usize> =
        incident.iter().filter(|(e, segs)| segs.len() == 1 && grid.is_boundary_edge(**e)).map(|(e, _)| *e).collect();
    open_starts.sort_unstable();
    for e in open_starts {
        let s = incident[&e][0];
        if !used[s] {
            chains.push(walk(e, s, &mut used));
        }
    }
    for s in 0..segments.len() {
        if !used[s] {
            chains.push(walk(segments[s].0, s, &mut used));
        }
    }

    let mut edge_ids: Vec<usize> = chains.iter().flat_map(|(e, _)| e.iter().copied()).collect();
    edge_ids.sort_unstable();
    edge_ids.dedup();
    let diag = (bounds.width() / nx as f64).hypot(bounds.height() / ny as f64);
    let positions: HashMap<usize, (f64, f64)> = edge_ids
        .par_iter()
        .map(|&e| {
            let ((i0, j0), (i1, j1)) = grid.edge_nodes(e);
            let (x0, y0, v0) = grid.node(i0, j0);
            let (x1, y1, v1) = grid.node(i1, j1);
            let t = if v1 != v0 { ((c - v0) / (v1 - v0)).clamp(0.0, 1.0) } else { 0.5 };
            let (x, y) = (x0 + t * (x1 - x0), y0 + t * (y1 - y0));
            (e, project(f, c, x, y, diag))
        })
        .collect();

    let merge_tol = 1e-9 * bounds.diagonal();
    let mut components = Vec::new();
    for (edges, mut closed) in chains {
        let mut pts: Vec<(f64, f64)> = Vec::with_capacity(edges.len());
        for e in &edges {
            let p = positions[e];
            if pts.last().is_none_or(|q: &(f64, f64)| (q.0 - p.0).hypot(q.1 - p.1) > merge_tol) {
                pts.push(p);
            }
        }
        if pts.len() > 1 {
            let (first, last) = (pts[0], pts[pts.len() - 1]);
            let gap = (first.0 - last.0).hypot(first.1 - last.1);
            if closed && gap <= merge_tol {
                pts.pop();
            } else if !closed && gap <= 0.5 * diag && edges.len() > 2 {
                closed = true;
            }
        }
        if closed && pts.len() < 3 {
            continue;
        }
        components.push(Component { points: pts.into_iter().map(|(x, y)| Point::xy(x, y)).collect(), closed });
    }
    Ok(LevelCurve { level: c, components, bounds: *bounds, nx, ny })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::levelset::tests::f1g1;

    #[test]
    fn unit_circle() {
        let f = ScalarField::polynomial("x^2 + y^2".parse().unwrap());
        let curve = extract_level(&f, 1.0, &Box2::square(2.0), 200).unwrap();
        assert_eq!(curve.components.len(), 1);
        let comp = &curve.components[0];
        assert!(comp.closed);
        let h = 4.0 / 200.0;
        assert!(comp.points.iter().all(|p| (p.norm() - 1.0).abs() <= 2.0 * h));
        assert!(comp.points.iter().all(|p| (f.value(p).unwrap() - 1.0).abs() <= 1e-3 * 2.0));
    }

    #[test]
    fn product_negative_level_has_four_components() {
        let curve = extract_level(&f1g1(), -2.0, &Box2::for_family(1.0), 600).unwrap();
        assert_eq!(curve.components.len(), 4);
        assert!(curve.components.iter().all(|c| c.closed));
    }

    #[test]
    fn product_level_twenty_is_one_loop() {
        let curve = extract_level(&f1g1(), 20.0, &Box2::for_family(1.0), 600).unwrap();
        assert_eq!(curve.components.len(), 1);
        assert!(curve.components[0].closed);
        let f = f1g1();
        for p in &curve.components[0].points {
            assert!((f.value(p).unwrap() - 20.0).abs() <= 1e-3 * 21.0);
        }
    }

    #[test]
    fn open_arcs_cut_by_the_box() {
        let f = ScalarField::polynomial("x^2 + y^2".parse().unwrap());
        let curve = extract_level(&f, 1.0, &Box2::new(0.0, 2.0, -2.0, 2.0).unwrap(), 100).unwrap();
        assert_eq!(curve.components.len(), 1);
        assert!(!curve.components[0].closed);
    }
}
