//! Independent oracles shared by the integration suites.
#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};
use std::f64::consts::PI;

use gammaflip_core::kinetic::{
    delaunay, orient2d, Edge, FlipRun, Point, Quad, ScanSettings, Scene, Tolerances, Trajectory,
    Triangulation,
};
use gammaflip_core::recoupling::Level;
use rand::rngs::StdRng;
use rand::Rng;

pub fn circumcircle(a: Point, b: Point, c: Point) -> (Point, f64) {
    let d = 2.0 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
    let sq = |p: Point| p.x * p.x + p.y * p.y;
    let ux = (sq(a) * (b.y - c.y) + sq(b) * (c.y - a.y) + sq(c) * (a.y - b.y)) / d;
    let uy = (sq(a) * (c.x - b.x) + sq(b) * (a.x - c.x) + sq(c) * (b.x - a.x)) / d;
    let center = Point::new(ux, uy);
    (center, center.dist(&a))
}

/// Every triple whose circumcircle contains no other point, as sorted
/// label triples. `None` if some point is too close to a circle to call.
pub fn empty_circle_triangles(points: &[Point]) -> Option<BTreeSet<[usize; 3]>> {
    let n = points.len();
    let mut out = BTreeSet::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (a, b, c) = (points[i], points[j], points[k]);
                let area = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
                if area.abs() < 1e-6 {
                    return None;
                }
                let (center, radius) = circumcircle(a, b, c);
                let mut empty = true;
                for (m, p) in points.iter().enumerate() {
                    if m == i || m == j || m == k {
                        continue;
                    }
                    let gap = p.dist(&center) - radius;
                    if gap.abs() < 1e-6 * radius.max(1.0) {
                        return None;
                    }
                    empty &= gap > 0.0;
                }
                if empty {
                    out.insert([i + 1, j + 1, k + 1]);
                }
            }
        }
    }
    Some(out)
}

pub fn sorted_triangles<'a>(tris: impl Iterator<Item = &'a [usize; 3]>) -> BTreeSet<[usize; 3]> {
    tris.map(|t| {
        let mut t = *t;
        t.sort_unstable();
        t
    })
    .collect()
}

pub fn fixed_scene(points: &[Point]) -> Scene {
    Scene::new(
        0.0,
        1.0,
        points
            .iter()
            .map(|p| Trajectory::Fixed { point: [p.x, p.y] })
            .collect(),
    )
    .unwrap()
}

/// Random scene: hull points near a circle of radius 3, and one or two
/// interior points circling inside it.
pub fn random_scene(rng: &mut StdRng) -> Scene {
    let hull = rng.random_range(4..=5);
    let mut points = Vec::new();
    for k in 0..hull {
        let a = 2.0 * PI * k as f64 / hull as f64 + rng.random_range(-0.25..0.25);
        points.push(Trajectory::Fixed {
            point: [3.0 * a.cos(), 3.0 * a.sin()],
        });
    }
    for _ in 0..rng.random_range(1..=2) {
        points.push(Trajectory::Circular {
            center: [rng.random_range(-0.4..0.4), rng.random_range(-0.4..0.4)],
            radius: rng.random_range(0.3..0.8),
            phase: rng.random_range(0.0..2.0 * PI),
            angular_velocity: if rng.random_bool(0.5) { 1.0 } else { -1.0 },
        });
    }
    Scene::new(0.0, 2.0 * PI, points).unwrap()
}

fn cocircularity(scene: &Scene, quad: [usize; 4], t: f64) -> f64 {
    let p = scene.positions(t);
    let (center, radius) = circumcircle(p[quad[0] - 1], p[quad[1] - 1], p[quad[2] - 1]);
    p[quad[3] - 1].dist(&center) - radius
}

/// Event time from dense sampling of the quad's cocircularity gap around
/// `guess`, refined by bisection on the sampled bracket.
pub fn sampled_root(scene: &Scene, quad: [usize; 4], guess: f64) -> Option<f64> {
    let half = 1e-3;
    let steps = 20_000;
    let f = |t: f64| cocircularity(scene, quad, t);
    let mut best: Option<f64> = None;
    let mut prev = (guess - half, f(guess - half));
    for k in 1..=steps {
        let t = guess - half + 2.0 * half * k as f64 / steps as f64;
        let v = f(t);
        if prev.1.signum() != v.signum() {
            let (mut lo, mut hi, flo) = (prev.0, t, prev.1);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if f(mid).signum() == flo.signum() {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let root = 0.5 * (lo + hi);
            if best.is_none_or(|b| (b - guess).abs() > (root - guess).abs()) {
                best = Some(root);
            }
        }
        prev = (t, v);
    }
    best
}

pub fn check_run_against_oracles(scene: &Scene, run: &FlipRun) {
    let eps = ScanSettings::default().tol.time;
    for e in &run.events {
        let root = sampled_root(scene, e.quad, e.time).expect("sign change near the event");
        assert!(
            (root - e.time).abs() < 10.0 * eps,
            "event at {} vs oracle {}",
            e.time,
            root
        );
    }
    // Between events, the tracked triangulation is the Delaunay one.
    let mut times = vec![scene.t_start];
    times.extend(run.events.iter().map(|e| e.time));
    times.push(scene.t_end);
    for w in times.windows(2) {
        for frac in [0.25, 0.5, 0.75] {
            let t = w[0] + frac * (w[1] - w[0]);
            if let Some(expected) = empty_circle_triangles(&scene.positions(t)) {
                assert_eq!(
                    sorted_triangles(run.state_at(t).triangles()),
                    expected,
                    "t = {t}"
                );
            }
        }
    }
}

/// All triangulations of `points` reachable by geometric flips from the
/// Delaunay one, which is all of them.
pub fn all_triangulations(points: &[Point]) -> Vec<Triangulation> {
    let start = delaunay(points, &Tolerances::default()).expect("generic points");
    let mut seen = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(t) = queue.pop_front() {
        for q in t.internal_edges() {
            if convex(points, &q) {
                let next = t.flip(q.diagonal()).unwrap();
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
    }
    seen.into_iter().collect()
}

/// Convex polygon with slightly uneven radii, so no four vertices are
/// cocircular.
pub fn polygon(n: usize, radius: f64) -> Vec<Point> {
    (0..n)
        .map(|k| {
            let a = 2.0 * PI * k as f64 / n as f64 + 0.1;
            let r = radius * [1.0, 1.07, 0.93, 1.11, 0.96, 1.04][k % 6];
            Point::new(r * a.cos(), r * a.sin())
        })
        .collect()
}

pub fn convex(points: &[Point], q: &Quad) -> bool {
    let p = |k: usize| points[k - 1];
    orient2d(p(q.u), p(q.z), p(q.w)) > 0.0 && orient2d(p(q.z), p(q.v), p(q.w)) > 0.0
}

/// Point sets whose triangulations have at most nine edges.
pub fn small_point_sets() -> Vec<Vec<Point>> {
    let mut sets = vec![
        polygon(3, 1.0),
        polygon(4, 1.0),
        polygon(5, 1.0),
        polygon(6, 1.0),
    ];
    let mut tri_plus = polygon(3, 2.0);
    tri_plus.push(Point::new(0.1, 0.05));
    sets.push(tri_plus.clone());
    tri_plus.push(Point::new(-0.3, 0.2));
    sets.push(tri_plus);
    let mut quad_plus = polygon(4, 2.0);
    quad_plus.push(Point::new(0.2, -0.1));
    sets.push(quad_plus);
    sets
}

/// Brute-force colourings: every tuple of colours in `0..=max` over the
/// sorted edge list, kept when all triangles are admissible, in
/// lexicographic order. Any colour above `r − 2` fails the sum bound
/// together with the triangle inequality, so `max = r − 2` loses nothing.
pub fn brute_force(t: &Triangulation, level: &Level, max: u32) -> Vec<Vec<u32>> {
    let edges: Vec<Edge> = t.edges().into_iter().collect();
    let pos = |a: usize, b: usize| edges.iter().position(|e| *e == Edge::new(a, b)).unwrap();
    let tris: Vec<[usize; 3]> = t
        .triangles()
        .map(|x| [pos(x[0], x[1]), pos(x[1], x[2]), pos(x[2], x[0])])
        .collect();
    let mut out = Vec::new();
    let mut c = vec![0u32; edges.len()];
    loop {
        if tris
            .iter()
            .all(|x| level.admissible(c[x[0]], c[x[1]], c[x[2]]))
        {
            out.push(c.clone());
        }
        let mut k = edges.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if c[k] < max {
                c[k] += 1;
                break;
            }
            c[k] = 0;
        }
    }
}

pub fn random_convex_pentagon(rng: &mut StdRng) -> [Point; 5] {
    let mut angles: Vec<f64> = (0..5)
        .map(|k| 2.0 * PI * k as f64 / 5.0 + rng.random_range(-0.4..0.4))
        .collect();
    angles.sort_by(f64::total_cmp);
    let (sx, sy, shear) = (
        rng.random_range(0.5..2.0),
        rng.random_range(0.5..2.0),
        rng.random_range(-0.5..0.5),
    );
    let mut pts = angles
        .iter()
        .map(|a| Point::new(sx * a.cos() + shear * a.sin(), sy * a.sin()));
    let mut out = [Point::new(0.0, 0.0); 5];
    for slot in &mut out {
        *slot = pts.next().unwrap();
    }
    // Shuffle labels so the convex order is not the label order.
    for k in (1..5).rev() {
        out.swap(k, rng.random_range(0..=k));
    }
    out
}

/// A random Delaunay triangulation with a pair of flippable quads sharing
/// no triangle, preferring quads that share a boundary edge. Returns the
/// triangulation, both old diagonals and whether the quads share an edge.
pub fn commuting_instance(rng: &mut StdRng, n: usize) -> (Triangulation, Edge, Edge, bool) {
    loop {
        let pts: Vec<Point> = (0..n)
            .map(|_| Point::new(rng.random_range(0.0..1.0), rng.random_range(0.0..1.0)))
            .collect();
        let Ok(t) = delaunay(&pts, &Tolerances::default()) else {
            continue;
        };
        let quads = t.internal_edges();
        let mut best: Option<(bool, Edge, Edge)> = None;
        for (k, q1) in quads.iter().enumerate() {
            for q2 in &quads[k + 1..] {
                let t1: BTreeSet<[usize; 3]> = q1.triangles().into_iter().collect();
                if q2.triangles().iter().any(|x| t1.contains(x))
                    || !convex(&pts, q1)
                    || !convex(&pts, q2)
                {
                    continue;
                }
                let b1: BTreeSet<Edge> = q1.boundary().into_iter().collect();
                let shares = q2.boundary().iter().any(|e| b1.contains(e));
                if best.is_none_or(|b| shares && !b.0) {
                    best = Some((shares, q1.diagonal(), q2.diagonal()));
                }
            }
        }
        if let Some((shares, e1, e2)) = best {
            return (t, e1, e2, shares);
        }
    }
}
