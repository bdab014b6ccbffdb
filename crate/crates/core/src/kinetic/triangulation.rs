use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::geometry::{diameter, incircle_det, orient2d, Point, Tolerances};
use super::KineticError;

/// Undirected edge between two point labels, stored with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
}

impl Edge {
    pub fn new(u: usize, v: usize) -> Self {
        Edge {
            a: u.min(v),
            b: u.max(v),
        }
    }

    pub fn contains(&self, v: usize) -> bool {
        self.a == v || self.b == v
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.a, self.b)
    }
}

/// The two triangles on either side of an internal edge `u–v`. The
/// boundary `u, z, v, w` is counterclockwise: `(u, v, w)` and `(v, u, z)`
/// are the two triangles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Quad {
    pub u: usize,
    pub z: usize,
    pub v: usize,
    pub w: usize,
}

impl Quad {
    pub fn diagonal(&self) -> Edge {
        Edge::new(self.u, self.v)
    }

    pub fn other_diagonal(&self) -> Edge {
        Edge::new(self.z, self.w)
    }

    /// Boundary edges `uz, zv, vw, wu`, in counterclockwise order.
    pub fn boundary(&self) -> [Edge; 4] {
        [
            Edge::new(self.u, self.z),
            Edge::new(self.z, self.v),
            Edge::new(self.v, self.w),
            Edge::new(self.w, self.u),
        ]
    }

    /// Counterclockwise cycle starting at the smallest label.
    pub fn cycle_from_min(&self) -> [usize; 4] {
        let c = [self.u, self.z, self.v, self.w];
        let k = (0..4).min_by_key(|&i| c[i]).expect("four entries");
        [c[k], c[(k + 1) % 4], c[(k + 2) % 4], c[(k + 3) % 4]]
    }

    pub fn triangles(&self) -> [[usize; 3]; 2] {
        [
            rotate_min([self.u, self.v, self.w]),
            rotate_min([self.v, self.u, self.z]),
        ]
    }
}

fn rotate_min(t: [usize; 3]) -> [usize; 3] {
    let k = (0..3).min_by_key(|&i| t[i]).expect("three entries");
    [t[k], t[(k + 1) % 3], t[(k + 2) % 3]]
}

/// A triangulation of labelled points `1..=n`. Triangles are stored
/// counterclockwise, rotated to start at their smallest label, so two
/// triangulations are equal iff they have the same triangles.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triangulation {
    n: usize,
    triangles: BTreeSet<[usize; 3]>,
}

impl Triangulation {
    /// Trusts that each triple is counterclockwise.
    pub fn from_oriented(n: usize, triangles: impl IntoIterator<Item = [usize; 3]>) -> Self {
        Triangulation {
            n,
            triangles: triangles.into_iter().map(rotate_min).collect(),
        }
    }

    /// Orients each triple counterclockwise using `positions` (index `label - 1`).
    pub fn from_positions(
        n: usize,
        triangles: impl IntoIterator<Item = [usize; 3]>,
        positions: &[Point],
    ) -> Self {
        let tris = triangles.into_iter().map(|[a, b, c]| {
            if orient2d(positions[a - 1], positions[b - 1], positions[c - 1]) >= 0.0 {
                [a, b, c]
            } else {
                [a, c, b]
            }
        });
        Triangulation::from_oriented(n, tris)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn triangles(&self) -> impl Iterator<Item = &[usize; 3]> {
        self.triangles.iter()
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    pub fn edges(&self) -> BTreeSet<Edge> {
        let mut out = BTreeSet::new();
        for t in &self.triangles {
            for k in 0..3 {
                out.insert(Edge::new(t[k], t[(k + 1) % 3]));
            }
        }
        out
    }

    /// Directed edge `(u, v)` → third vertex of the triangle that has it.
    fn directed(&self) -> BTreeMap<(usize, usize), usize> {
        let mut m = BTreeMap::new();
        for t in &self.triangles {
            for k in 0..3 {
                m.insert((t[k], t[(k + 1) % 3]), t[(k + 2) % 3]);
            }
        }
        m
    }

    /// The quad around `edge`, or `None` if the edge is missing or on the hull.
    pub fn quad(&self, edge: Edge) -> Option<Quad> {
        let d = self.directed();
        let (u, v) = (edge.a, edge.b);
        let w = *d.get(&(u, v))?;
        let z = *d.get(&(v, u))?;
        Some(Quad { u, z, v, w })
    }

    pub fn internal_edges(&self) -> Vec<Quad> {
        let d = self.directed();
        let mut out = Vec::new();
        for (&(u, v), &w) in &d {
            if u < v {
                if let Some(&z) = d.get(&(v, u)) {
                    out.push(Quad { u, z, v, w });
                }
            }
        }
        out
    }

    /// Hull edges as counterclockwise directed pairs with the third vertex of
    /// their triangle.
    pub fn hull_edges(&self) -> Vec<(usize, usize, usize)> {
        let d = self.directed();
        d.iter()
            .filter(|((u, v), _)| !d.contains_key(&(*v, *u)))
            .map(|(&(u, v), &w)| (u, v, w))
            .collect()
    }

    /// Hull vertices in counterclockwise order, starting at the smallest label.
    pub fn hull(&self) -> Vec<usize> {
        let next: BTreeMap<usize, usize> = self
            .hull_edges()
            .into_iter()
            .map(|(u, v, _)| (u, v))
            .collect();
        let Some((&start, _)) = next.iter().next() else {
            return Vec::new();
        };
        let mut out = vec![start];
        let mut cur = next[&start];
        while cur != start && out.len() <= next.len() {
            out.push(cur);
            cur = next[&cur];
        }
        out
    }

    /// Replaces the diagonal `edge` of its quad by the other diagonal. Fails
    /// if `edge` is on the hull or the other diagonal is already an edge.
    pub fn flip(&self, edge: Edge) -> Result<Triangulation, KineticError> {
        let q = self.quad(edge).ok_or(KineticError::NotFlippable(edge))?;
        if self.edges().contains(&q.other_diagonal()) {
            return Err(KineticError::NotFlippable(edge));
        }
        let mut triangles = self.triangles.clone();
        for t in q.triangles() {
            triangles.remove(&t);
        }
        triangles.insert(rotate_min([q.u, q.z, q.w]));
        triangles.insert(rotate_min([q.z, q.v, q.w]));
        Ok(Triangulation {
            n: self.n,
            triangles,
        })
    }

    /// `#triangles = 2n − 2 − h` and `#edges = 3n − 3 − h`.
    pub fn euler_counts_hold(&self) -> bool {
        let h = self.hull().len();
        let n = self.n;
        self.triangles.len() + 2 + h == 2 * n && self.edges().len() + 3 + h == 3 * n
    }

    /// Worst violation of the empty-circumcircle property: the largest
    /// normalized incircle value over all triangle/point pairs. Negative
    /// means strictly Delaunay.
    pub fn delaunay_margin(&self, positions: &[Point]) -> f64 {
        let scale = diameter(positions).powi(4);
        let mut worst = f64::NEG_INFINITY;
        for t in &self.triangles {
            let [a, b, c] = t.map(|l| positions[l - 1]);
            for d in 1..=self.n {
                if t.contains(&d) {
                    continue;
                }
                worst = worst.max(incircle_det(a, b, c, positions[d - 1]) / scale);
            }
        }
        worst
    }

    pub fn is_delaunay(&self, positions: &[Point], tol: &Tolerances) -> bool {
        self.delaunay_margin(positions) < -tol.det
    }
}

/// The Delaunay triangulation of `positions` (labels `1..=positions.len()`).
///
/// Built by incremental hull insertion in lexicographic order, then Lawson
/// flips until every internal edge is locally Delaunay. Fails when the
/// result would not be unique: a collapsed triangle, a collinear hull
/// triple, or a point on some triangle's circumcircle.
pub fn delaunay(positions: &[Point], tol: &Tolerances) -> Result<Triangulation, KineticError> {
    let n = positions.len();
    if n < 3 {
        return Err(KineticError::DegenerateConfiguration(
            "fewer than three points".into(),
        ));
    }
    let diam = diameter(positions);
    let eps2 = tol.det * diam * diam;
    let eps4 = tol.det * diam.powi(4);
    let p = |l: usize| positions[l - 1];
    for i in 1..=n {
        for j in i + 1..=n {
            if p(i).dist(&p(j)) <= tol.det * diam {
                return Err(KineticError::DegenerateConfiguration(format!(
                    "points {i} and {j} coincide"
                )));
            }
        }
    }

    let mut order: Vec<usize> = (1..=n).collect();
    order.sort_by(|&a, &b| p(a).x.total_cmp(&p(b).x).then(p(a).y.total_cmp(&p(b).y)));

    // Seed triangle: the first two points plus the first point off their line.
    let (s0, s1) = (order[0], order[1]);
    let k = (2..n)
        .find(|&k| orient2d(p(s0), p(s1), p(order[k])).abs() > eps2)
        .ok_or_else(|| KineticError::DegenerateConfiguration("all points collinear".into()))?;
    if k != 2 {
        return Err(KineticError::DegenerateConfiguration(
            "collinear points on the hull".into(),
        ));
    }
    let s2 = order[2];
    let seed = if orient2d(p(s0), p(s1), p(s2)) > 0.0 {
        [s0, s1, s2]
    } else {
        [s0, s2, s1]
    };
    let mut triangles: Vec<[usize; 3]> = vec![seed];
    let mut hull: Vec<usize> = seed.to_vec();

    for &v in &order[3..] {
        let m = hull.len();
        let mut visible = vec![false; m];
        for e in 0..m {
            let (a, b) = (hull[e], hull[(e + 1) % m]);
            let o = orient2d(p(a), p(b), p(v));
            if o.abs() <= eps2 {
                return Err(KineticError::DegenerateConfiguration(format!(
                    "point {v} collinear with hull edge {a}-{b}"
                )));
            }
            visible[e] = o < 0.0;
        }
        // The visible chain is contiguous; find its first edge.
        let first = (0..m)
            .find(|&e| visible[e] && !visible[(e + m - 1) % m])
            .ok_or_else(|| {
                KineticError::DegenerateConfiguration(format!("point {v} inside hull during sweep"))
            })?;
        let mut e = first;
        while visible[e] {
            let (a, b) = (hull[e], hull[(e + 1) % m]);
            triangles.push([b, a, v]);
            e = (e + 1) % m;
        }
        // Vertices strictly inside the visible chain leave the hull.
        let start = hull[first];
        let end = hull[e];
        let mut new_hull = Vec::with_capacity(m + 1);
        let mut idx = e;
        // Walk from the chain end around the non-visible side back to the start.
        loop {
            new_hull.push(hull[idx]);
            if hull[idx] == start {
                break;
            }
            idx = (idx + 1) % m;
        }
        new_hull.push(v);
        debug_assert_eq!(new_hull[0], end);
        hull = new_hull;
    }

    let mut tri = Triangulation::from_oriented(n, triangles);

    // Lawson flips.
    let mut guard = 0usize;
    loop {
        let bad = tri
            .internal_edges()
            .into_iter()
            .find(|q| incircle_det(p(q.u), p(q.v), p(q.w), p(q.z)) > eps4);
        match bad {
            Some(q) => tri = tri.flip(q.diagonal())?,
            None => break,
        }
        guard += 1;
        if guard > 10 * n * n + 100 {
            return Err(KineticError::DegenerateConfiguration(
                "Lawson flips did not terminate".into(),
            ));
        }
    }

    for t in &tri.triangles {
        if orient2d(p(t[0]), p(t[1]), p(t[2])) <= eps2 {
            return Err(KineticError::DegenerateConfiguration(format!(
                "collapsed triangle {t:?}"
            )));
        }
    }
    let hull = tri.hull();
    for k in 0..hull.len() {
        let (a, b, c) = (
            hull[k],
            hull[(k + 1) % hull.len()],
            hull[(k + 2) % hull.len()],
        );
        if orient2d(p(a), p(b), p(c)) <= eps2 {
            return Err(KineticError::DegenerateConfiguration(format!(
                "collinear hull triple {a},{b},{c}"
            )));
        }
    }
    for t in &tri.triangles {
        let [a, b, c] = t.map(p);
        for d in 1..=n {
            if t.contains(&d) {
                continue;
            }
            let v = incircle_det(a, b, c, p(d));
            if v.abs() <= eps4 {
                return Err(KineticError::DegenerateConfiguration(format!(
                    "point {d} on the circumcircle of {t:?}"
                )));
            }
            if v > 0.0 {
                return Err(KineticError::DegenerateConfiguration(format!(
                    "point {d} inside the circumcircle of {t:?} after flipping"
                )));
            }
        }
    }
    Ok(tri)
}
