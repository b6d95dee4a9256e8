//! Exact low-dimensional polyhedral helpers: a dense two-phase simplex over
//! big rationals, hull vertex filtering, and 3D facet meshes.
//!
//! Everything here is infrastructure for bounding-box computation, lattice
//! enumeration, vertex counts and mesh export. Sizes are desk scale
//! (dimension <= 6, a few hundred points), so a tableau simplex with Bland's
//! rule is plenty and exactness is what matters. Big rationals keep tableau
//! entries from ever overflowing.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::rational::Rat;

type Br = BigRational;

fn br(r: &Rat) -> Br {
    Br::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

fn br_to_rat(v: &Br) -> Rat {
    let numer = i64::try_from(v.numer()).expect("coordinate fits in i64");
    let denom = i64::try_from(v.denom()).expect("denominator fits in i64");
    Rat::new(numer, denom)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rel {
    Le,
    Eq,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { value: Rat, point: Vec<Rat> },
    Infeasible,
    Unbounded,
}

/// Maximizes `objective · x` over `x >= 0` subject to the constraints.
/// Two-phase dense simplex with Bland's rule; exact.
pub fn simplex_maximize(
    nvars: usize,
    constraints: &[(Vec<Rat>, Rel, Rat)],
    objective: &[Rat],
) -> LpOutcome {
    let mut tab = Tableau::build(nvars, constraints);
    if !tab.phase_one() {
        return LpOutcome::Infeasible;
    }
    let mut c = vec![Br::zero(); tab.ncols];
    for (j, v) in objective.iter().enumerate() {
        c[j] = br(v);
    }
    tab.load_objective(&c);
    match tab.run() {
        RunResult::Optimal => LpOutcome::Optimal {
            value: br_to_rat(&tab.zval),
            point: (0..nvars).map(|j| br_to_rat(&tab.var_value(j))).collect(),
        },
        RunResult::Unbounded => LpOutcome::Unbounded,
    }
}

/// Whether the system has any solution with `x >= 0`.
pub fn lp_feasible(nvars: usize, constraints: &[(Vec<Rat>, Rel, Rat)]) -> bool {
    Tableau::build(nvars, constraints).phase_one()
}

enum RunResult {
    Optimal,
    Unbounded,
}

struct Tableau {
    ncols: usize,
    artificials: Vec<usize>,
    rows: Vec<Vec<Br>>, // each row has ncols coefficient entries plus rhs
    basis: Vec<usize>,
    red: Vec<Br>, // reduced costs
    zval: Br,
    banned: Vec<bool>,
}

impl Tableau {
    fn build(nvars: usize, constraints: &[(Vec<Rat>, Rel, Rat)]) -> Self {
        let m = constraints.len();
        let n_slack = constraints
            .iter()
            .filter(|(_, rel, _)| *rel == Rel::Le)
            .count();
        // worst case one artificial per row
        let ncols = nvars + n_slack + m;
        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut artificials = Vec::new();
        let mut next_slack = nvars;
        let mut next_artificial = nvars + n_slack;
        for (coeffs, rel, rhs) in constraints {
            let flip = rhs.is_negative();
            let sgn = if flip { -Br::one() } else { Br::one() };
            let mut row = vec![Br::zero(); ncols + 1];
            for (j, v) in coeffs.iter().enumerate() {
                row[j] = br(v) * sgn.clone();
            }
            row[ncols] = br(rhs) * sgn.clone();
            match rel {
                Rel::Le => {
                    row[next_slack] = sgn.clone();
                    if flip {
                        row[next_artificial] = Br::one();
                        basis.push(next_artificial);
                        artificials.push(next_artificial);
                        next_artificial += 1;
                    } else {
                        basis.push(next_slack);
                    }
                    next_slack += 1;
                }
                Rel::Eq => {
                    row[next_artificial] = Br::one();
                    basis.push(next_artificial);
                    artificials.push(next_artificial);
                    next_artificial += 1;
                }
            }
            rows.push(row);
        }
        Tableau {
            ncols,
            artificials,
            rows,
            basis,
            red: vec![Br::zero(); ncols],
            zval: Br::zero(),
            banned: vec![false; ncols],
        }
    }

    fn load_objective(&mut self, c: &[Br]) {
        self.red = c.to_vec();
        self.zval = Br::zero();
        for r in 0..self.rows.len() {
            let b = self.basis[r];
            if !self.red[b].is_zero() {
                let f = self.red[b].clone();
                for j in 0..self.ncols {
                    let adj = &f * &self.rows[r][j];
                    self.red[j] -= adj;
                }
                self.zval += f * &self.rows[r][self.ncols];
            }
        }
    }

    fn pivot(&mut self, r: usize, e: usize) {
        let piv = self.rows[r][e].clone();
        for v in self.rows[r].iter_mut() {
            *v /= piv.clone();
        }
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][e].is_zero() {
                continue;
            }
            let f = self.rows[i][e].clone();
            for j in 0..=self.ncols {
                let adj = &f * &self.rows[r][j];
                self.rows[i][j] -= adj;
            }
        }
        if !self.red[e].is_zero() {
            let f = self.red[e].clone();
            for j in 0..self.ncols {
                let adj = &f * &self.rows[r][j];
                self.red[j] -= adj;
            }
            self.zval += f * &self.rows[r][self.ncols];
        }
        self.basis[r] = e;
    }

    fn run(&mut self) -> RunResult {
        loop {
            // Bland: smallest improving column
            let Some(e) = (0..self.ncols).find(|&j| !self.banned[j] && self.red[j].is_positive())
            else {
                return RunResult::Optimal;
            };
            let mut leave: Option<(usize, Br)> = None;
            for r in 0..self.rows.len() {
                if !self.rows[r][e].is_positive() {
                    continue;
                }
                let ratio = &self.rows[r][self.ncols] / &self.rows[r][e];
                let better = match &leave {
                    None => true,
                    Some((cur, best)) => {
                        ratio < *best || (ratio == *best && self.basis[r] < self.basis[*cur])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            let Some((r, _)) = leave else {
                return RunResult::Unbounded;
            };
            self.pivot(r, e);
        }
    }

    /// Phase one: true when the constraints are feasible. Leaves the tableau
    /// with artificial columns banned and (where possible) out of the basis.
    fn phase_one(&mut self) -> bool {
        if !self.artificials.is_empty() {
            let mut c = vec![Br::zero(); self.ncols];
            for &a in &self.artificials {
                c[a] = -Br::one();
            }
            self.load_objective(&c);
            match self.run() {
                RunResult::Unbounded => unreachable!("phase one is bounded above by zero"),
                RunResult::Optimal => {}
            }
            if self.zval.is_negative() {
                return false;
            }
            for &a in &self.artificials {
                self.banned[a] = true;
            }
            // degenerate artificials still in the basis: pivot them out or
            // drop the (redundant) row
            let mut r = 0;
            while r < self.rows.len() {
                if self.banned[self.basis[r]] {
                    match (0..self.ncols).find(|&j| !self.banned[j] && !self.rows[r][j].is_zero()) {
                        Some(j) => self.pivot(r, j),
                        None => {
                            self.rows.remove(r);
                            self.basis.remove(r);
                            continue;
                        }
                    }
                }
                r += 1;
            }
        }
        true
    }

    fn var_value(&self, j: usize) -> Br {
        self.basis
            .iter()
            .position(|&b| b == j)
            .map(|r| self.rows[r][self.ncols].clone())
            .unwrap_or_else(Br::zero)
    }
}

/// Maximizes `objective · x` over `A x <= b` with free (sign-unrestricted)
/// variables, via the standard positive/negative split.
pub fn maximize_free(dim: usize, rows: &[(Vec<Rat>, Rat)], objective: &[Rat]) -> LpOutcome {
    let split = |v: &[Rat]| -> Vec<Rat> {
        let mut out = Vec::with_capacity(2 * dim);
        out.extend_from_slice(v);
        out.extend(v.iter().map(|c| -c));
        out
    };
    let constraints: Vec<(Vec<Rat>, Rel, Rat)> =
        rows.iter().map(|(a, b)| (split(a), Rel::Le, *b)).collect();
    match simplex_maximize(2 * dim, &constraints, &split(objective)) {
        LpOutcome::Optimal { value, point } => LpOutcome::Optimal {
            value,
            point: (0..dim).map(|j| point[j] - point[dim + j]).collect(),
        },
        other => other,
    }
}

/// Indices of the points that are vertices of the convex hull of `points`.
///
/// A cheap midpoint pre-filter discards points that are averages of two
/// others; survivors are certified by an exact feasibility LP (is the point a
/// convex combination of the rest?).
pub fn hull_vertex_indices(points: &[Vec<i64>]) -> Vec<usize> {
    if points.is_empty() {
        return Vec::new();
    }
    let dim = points[0].len();
    let set: BTreeSet<&[i64]> = points.iter().map(Vec::as_slice).collect();
    let mut out = Vec::new();
    'candidate: for (idx, v) in points.iter().enumerate() {
        // midpoint filter: v = (u + w)/2 with u, w in the set means not a vertex
        for u in &set {
            if *u == v.as_slice() {
                continue;
            }
            let mirrored: Vec<i64> = v.iter().zip(u.iter()).map(|(a, b)| 2 * a - b).collect();
            if mirrored != *v && set.contains(mirrored.as_slice()) {
                continue 'candidate;
            }
        }
        if !in_hull_of_others(points, idx, dim) {
            out.push(idx);
        }
    }
    out
}

fn in_hull_of_others(points: &[Vec<i64>], idx: usize, dim: usize) -> bool {
    let others: Vec<&Vec<i64>> = points
        .iter()
        .enumerate()
        .filter(|&(i, p)| i != idx && p != &points[idx])
        .map(|(_, p)| p)
        .collect();
    if others.is_empty() {
        return false;
    }
    let n = others.len();
    let mut constraints: Vec<(Vec<Rat>, Rel, Rat)> = Vec::with_capacity(dim + 1);
    for k in 0..dim {
        let coeffs: Vec<Rat> = others.iter().map(|p| Rat::from_integer(p[k])).collect();
        constraints.push((coeffs, Rel::Eq, Rat::from_integer(points[idx][k])));
    }
    constraints.push((vec![Rat::from_integer(1); n], Rel::Eq, Rat::from_integer(1)));
    lp_feasible(n, &constraints)
}

/// A triangulated hull boundary, for mesh export.
#[derive(Clone, Debug, PartialEq)]
pub struct Mesh {
    pub vertices: Vec<Vec<Rat>>,
    pub triangles: Vec<[usize; 3]>,
}

/// Convex hull of 3D points as a triangle mesh. Lower-dimensional hulls
/// degrade gracefully: polygons are fan-triangulated into double-sided
/// faces, segments and points come back with vertices and no triangles.
pub fn hull_mesh_3d(points: &[Vec<Rat>]) -> Result<Mesh, Error> {
    if points.is_empty() {
        return Ok(Mesh {
            vertices: Vec::new(),
            triangles: Vec::new(),
        });
    }
    if points.iter().any(|p| p.len() != 3) {
        return Err(Error::DimensionUnsupported {
            got: points.iter().map(Vec::len).find(|&l| l != 3).unwrap_or(0),
        });
    }
    // scale to integers for exact predicates
    let denom = points.iter().fold(1i64, |acc, p| {
        num_integer::lcm(acc, crate::rational::denominator_lcm(p))
    });
    let scaled: Vec<Vec<i64>> = points
        .iter()
        .map(|p| {
            p.iter()
                .map(|c| (c * Rat::from_integer(denom)).to_integer())
                .collect()
        })
        .collect();
    let vertex_idx = hull_vertex_indices(&scaled);
    let mut verts: Vec<Vec<i64>> = vertex_idx.iter().map(|&i| scaled[i].clone()).collect();
    verts.sort();
    verts.dedup();

    let unscale = |v: &[i64]| -> Vec<Rat> { v.iter().map(|&c| Rat::new(c, denom)).collect() };
    let out_vertices: Vec<Vec<Rat>> = verts.iter().map(|v| unscale(v)).collect();
    if verts.len() <= 2 {
        return Ok(Mesh {
            vertices: out_vertices,
            triangles: Vec::new(),
        });
    }

    let mut triangles = Vec::new();
    let mut seen_planes: BTreeSet<(Vec<i64>, i64)> = BTreeSet::new();
    for a in 0..verts.len() {
        for b in (a + 1)..verts.len() {
            for c in (b + 1)..verts.len() {
                let normal = cross3(&sub(&verts[b], &verts[a]), &sub(&verts[c], &verts[a]));
                if normal.iter().all(|&v| v == 0) {
                    continue;
                }
                let offset: i64 = dot(&normal, &verts[a]);
                let mut above = false;
                let mut below = false;
                for p in &scaled {
                    match dot(&normal, p).cmp(&offset) {
                        std::cmp::Ordering::Greater => above = true,
                        std::cmp::Ordering::Less => below = true,
                        std::cmp::Ordering::Equal => {}
                    }
                }
                if above && below {
                    continue;
                }
                // orient outward
                let (normal, offset) = if above {
                    (normal.iter().map(|v| -v).collect::<Vec<i64>>(), -offset)
                } else {
                    (normal, offset)
                };
                let key = normalize_plane(&normal, offset);
                if !seen_planes.insert(key.clone()) {
                    continue;
                }
                let facet: Vec<usize> = (0..verts.len())
                    .filter(|&i| dot(&key.0, &verts[i]) == key.1)
                    .collect();
                let ordered = order_polygon(&verts, &facet, &key.0);
                for k in 1..ordered.len() - 1 {
                    triangles.push([ordered[0], ordered[k], ordered[k + 1]]);
                }
                if !(above || below) {
                    // all points coplanar: emit the back face too and stop
                    let mut reversed = ordered.clone();
                    reversed.reverse();
                    for k in 1..reversed.len() - 1 {
                        triangles.push([reversed[0], reversed[k], reversed[k + 1]]);
                    }
                    return Ok(Mesh {
                        vertices: out_vertices,
                        triangles,
                    });
                }
            }
        }
    }
    Ok(Mesh {
        vertices: out_vertices,
        triangles,
    })
}

fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn cross3(a: &[i64], b: &[i64]) -> Vec<i64> {
    vec![
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn normalize_plane(normal: &[i64], offset: i64) -> (Vec<i64>, i64) {
    let mut g = offset.abs();
    for &v in normal {
        g = num_integer::gcd(g, v.abs());
    }
    if g <= 1 {
        return (normal.to_vec(), offset);
    }
    (normal.iter().map(|v| v / g).collect(), offset / g)
}

/// Orders the facet's vertices counterclockwise around the outward normal.
fn order_polygon(verts: &[Vec<i64>], facet: &[usize], normal: &[i64]) -> Vec<usize> {
    debug_assert!(facet.len() >= 3);
    // rational centroid, cleared of denominators: compare against n*centroid
    let n = facet.len() as i64;
    let centroid: Vec<i64> = (0..3)
        .map(|k| facet.iter().map(|&i| verts[i][k]).sum::<i64>())
        .collect();
    let dir = |i: usize| -> Vec<i64> { (0..3).map(|k| n * verts[i][k] - centroid[k]).collect() };
    let reference = dir(facet[0]);
    let half = |v: &[i64]| -> u8 {
        let s = dot(&cross3(&reference, v), normal);
        match s.cmp(&0) {
            std::cmp::Ordering::Greater => 0,
            std::cmp::Ordering::Less => 1,
            std::cmp::Ordering::Equal => {
                if dot(&reference, v) > 0 {
                    0
                } else {
                    1
                }
            }
        }
    };
    let mut ordered = facet.to_vec();
    ordered.sort_by(|&a, &b| {
        let (va, vb) = (dir(a), dir(b));
        half(&va)
            .cmp(&half(&vb))
            .then_with(|| dot(&cross3(&va, &vb), normal).cmp(&0).reverse())
    });
    ordered
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: i64) -> Rat {
        Rat::from_integer(v)
    }

    #[test]
    fn simplex_solves_a_textbook_problem() {
        // max x + y st x + 2y <= 4, 3x + y <= 6, x,y >= 0 -> (8/5, 6/5), 14/5
        let out = simplex_maximize(
            2,
            &[
                (vec![r(1), r(2)], Rel::Le, r(4)),
                (vec![r(3), r(1)], Rel::Le, r(6)),
            ],
            &[r(1), r(1)],
        );
        assert_eq!(
            out,
            LpOutcome::Optimal {
                value: Rat::new(14, 5),
                point: vec![Rat::new(8, 5), Rat::new(6, 5)]
            }
        );
    }

    #[test]
    fn simplex_detects_unbounded_and_infeasible() {
        let out = simplex_maximize(1, &[(vec![r(-1)], Rel::Le, r(0))], &[r(1)]);
        assert_eq!(out, LpOutcome::Unbounded);
        let out = simplex_maximize(1, &[(vec![r(1)], Rel::Le, r(-1))], &[r(0)]);
        assert_eq!(out, LpOutcome::Infeasible);
        // equality system: x = 2 with x <= 1 is infeasible
        let out = simplex_maximize(
            1,
            &[(vec![r(1)], Rel::Eq, r(2)), (vec![r(1)], Rel::Le, r(1))],
            &[r(0)],
        );
        assert_eq!(out, LpOutcome::Infeasible);
    }

    #[test]
    fn free_variable_wrapper_handles_negative_optima() {
        // max x st -3 <= x <= -1
        let out = maximize_free(1, &[(vec![r(1)], r(-1)), (vec![r(-1)], r(3))], &[r(1)]);
        assert_eq!(
            out,
            LpOutcome::Optimal {
                value: r(-1),
                point: vec![r(-1)]
            }
        );
        let out = maximize_free(1, &[(vec![r(1)], r(5))], &[r(1)]);
        assert!(matches!(out, LpOutcome::Optimal { value, .. } if value == r(5)));
        let out = maximize_free(1, &[(vec![r(-1)], r(0))], &[r(1)]);
        assert_eq!(out, LpOutcome::Unbounded);
    }

    #[test]
    fn hull_vertices_of_a_filled_square() {
        let points: Vec<Vec<i64>> = (0..=2)
            .flat_map(|x| (0..=2).map(move |y| vec![x, y]))
            .collect();
        let idx = hull_vertex_indices(&points);
        let verts: BTreeSet<Vec<i64>> = idx.into_iter().map(|i| points[i].clone()).collect();
        let expected: BTreeSet<Vec<i64>> = [vec![0, 0], vec![0, 2], vec![2, 0], vec![2, 2]].into();
        assert_eq!(verts, expected);
    }

    #[test]
    fn hull_vertices_keep_non_midpoint_boundary_points() {
        // triangle (0,0),(2,1),(1,2) plus its interior point (1,1): the
        // interior point is not a midpoint of lattice points, so only the
        // exact LP can reject it
        let points = vec![vec![0, 0], vec![2, 1], vec![1, 2], vec![1, 1]];
        let idx = hull_vertex_indices(&points);
        assert_eq!(idx, vec![0, 1, 2]);
    }

    #[test]
    fn mesh_of_a_cube() {
        let pts: Vec<Vec<Rat>> = (0..8)
            .map(|k| vec![r(k & 1), r((k >> 1) & 1), r((k >> 2) & 1)])
            .collect();
        let mesh = hull_mesh_3d(&pts).unwrap();
        assert_eq!(mesh.vertices.len(), 8);
        assert_eq!(mesh.triangles.len(), 12);
        // triangles index valid vertices
        assert!(mesh.triangles.iter().flatten().all(|&i| i < 8));
    }

    #[test]
    fn mesh_of_flat_and_degenerate_inputs() {
        let square: Vec<Vec<Rat>> = [(0, 0), (1, 0), (0, 1), (1, 1)]
            .iter()
            .map(|&(x, y)| vec![r(x), r(y), r(0)])
            .collect();
        let mesh = hull_mesh_3d(&square).unwrap();
        assert_eq!(mesh.vertices.len(), 4);
        assert_eq!(mesh.triangles.len(), 4); // two faces, both sides

        let segment: Vec<Vec<Rat>> = vec![
            vec![r(0); 3],
            vec![r(0), r(0), r(2)],
            vec![r(0), r(0), r(1)],
        ];
        let mesh = hull_mesh_3d(&segment).unwrap();
        assert_eq!(mesh.vertices.len(), 2);
        assert!(mesh.triangles.is_empty());

        let half: Vec<Vec<Rat>> = vec![vec![Rat::new(1, 2), r(1), r(0)]];
        let mesh = hull_mesh_3d(&half).unwrap();
        assert_eq!(mesh.vertices, vec![vec![Rat::new(1, 2), r(1), r(0)]]);
    }

    #[test]
    fn mesh_orders_a_hexagonal_facet() {
        // a flat hexagon with its center: 6 hull vertices, fan of 4
        // triangles per side, all consistently oriented
        let hex = [(2, 0), (1, 2), (-1, 2), (-2, 0), (-1, -2), (1, -2), (0, 0)];
        let pts: Vec<Vec<Rat>> = hex.iter().map(|&(x, y)| vec![r(x), r(y), r(0)]).collect();
        let mesh = hull_mesh_3d(&pts).unwrap();
        assert_eq!(mesh.vertices.len(), 6);
        assert_eq!(mesh.triangles.len(), 8); // both sides of the polygon
        let front = &mesh.triangles[..4];
        for t in front {
            let v = |i: usize| -> Vec<i64> {
                mesh.vertices[t[i]].iter().map(|c| c.to_integer()).collect()
            };
            let n = cross3(&sub(&v(1), &v(0)), &sub(&v(2), &v(0)));
            assert!(n[0] == 0 && n[1] == 0 && n[2] != 0);
            assert_eq!(
                n[2].signum(),
                cross3(&sub(&v(1), &v(0)), &sub(&v(2), &v(0)))[2].signum()
            );
        }
        // consistent winding: all front triangles share the normal sign
        let signs: Vec<i64> = front
            .iter()
            .map(|t| {
                let v = |i: usize| -> Vec<i64> {
                    mesh.vertices[t[i]].iter().map(|c| c.to_integer()).collect()
                };
                cross3(&sub(&v(1), &v(0)), &sub(&v(2), &v(0)))[2].signum()
            })
            .collect();
        assert!(signs.iter().all(|&s| s == signs[0]));
    }

    #[test]
    fn mesh_of_a_tetrahedron_orients_outward() {
        let pts: Vec<Vec<Rat>> = vec![
            vec![r(0), r(0), r(0)],
            vec![r(2), r(0), r(0)],
            vec![r(0), r(2), r(0)],
            vec![r(0), r(0), r(2)],
            vec![r(1), r(1), r(0)], // edge midpoint, not a vertex
        ];
        let mesh = hull_mesh_3d(&pts).unwrap();
        assert_eq!(mesh.vertices.len(), 4);
        assert_eq!(mesh.triangles.len(), 4);
        // each face's normal points away from the centroid (1/2,1/2,1/2)
        for t in &mesh.triangles {
            let v = |i: usize| -> Vec<i64> {
                mesh.vertices[t[i]]
                    .iter()
                    .map(|c| (c * r(2)).to_integer())
                    .collect()
            };
            let n = cross3(&sub(&v(1), &v(0)), &sub(&v(2), &v(0)));
            let inside = vec![1i64, 1, 1];
            assert!(dot(&n, &sub(&v(0), &inside)) > 0, "face not outward");
        }
    }
}
