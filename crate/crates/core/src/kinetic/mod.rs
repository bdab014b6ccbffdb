//! Kinetic Delaunay triangulations of moving points.
//!
//! [`flip_word`] follows the Delaunay triangulation of a [`Scene`] through
//! time. Each flip is found as a root of the incircle function of an
//! internal edge's quad, isolated by sampling and bisection, and recorded as
//! a generator of Γₙ⁴.

mod geometry;
mod scene;
mod triangulation;

pub use geometry::{diameter, incircle, incircle_det, orient2d, Point, Sign, Tolerances};
pub use scene::{Scene, Trajectory};
pub use triangulation::{delaunay, Edge, Quad, Triangulation};

use serde::Serialize;
use thiserror::Error;

use crate::gamma::{canonicalize_generator, GammaWord};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KineticError {
    #[error("degenerate triangle: points are collinear")]
    DegenerateTriangle,
    #[error("degenerate configuration: {0}")]
    DegenerateConfiguration(String),
    #[error("invalid scene: {0}")]
    InvalidScene(String),
    #[error("edge {0} is not an internal edge")]
    NotFlippable(Edge),
    #[error("hull changes at t = {time}: {detail}")]
    HullChange { time: f64, detail: String },
    #[error("triangle {triangle:?} collapses at t = {time}")]
    TriangleCollapse { time: f64, triangle: [usize; 3] },
    #[error("flip events coincide near t = {time} (edges {first} and {second})")]
    SimultaneousEvents {
        time: f64,
        first: Edge,
        second: Edge,
    },
    #[error("more than {0} flip events")]
    TooManyEvents(usize),
}

/// A flip of the quad `quad` (counterclockwise, smallest label first).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlipEvent {
    pub time: f64,
    pub quad: [usize; 4],
    pub old_diagonal: Edge,
    pub new_diagonal: Edge,
}

/// Sampling controls for root isolation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanSettings {
    pub tol: Tolerances,
    /// Coarse sampling step as a fraction of the scene's duration.
    pub coarse_fraction: f64,
    pub max_events: usize,
}

impl Default for ScanSettings {
    fn default() -> Self {
        ScanSettings {
            tol: Tolerances::default(),
            coarse_fraction: 1.0 / 2048.0,
            max_events: 10_000,
        }
    }
}

impl ScanSettings {
    /// `min(coarse, quarter of the shortest circular period)`.
    pub fn step(&self, scene: &Scene) -> f64 {
        let coarse = (scene.t_end - scene.t_start) * self.coarse_fraction;
        match scene.shortest_period() {
            Some(p) => coarse.min(p / 4.0),
            None => coarse,
        }
    }
}

pub fn delaunay_at(scene: &Scene, t: f64, tol: &Tolerances) -> Result<Triangulation, KineticError> {
    delaunay(&scene.positions(t), tol)
}

#[derive(Debug, Clone, Copy)]
enum Monitor {
    /// Incircle of the quad around an internal edge; healthy while negative.
    Flip(Quad),
    /// Orientation of a triangle; healthy while positive.
    Triangle([usize; 3], bool),
    /// Convexity at a hull vertex; healthy while positive.
    HullTurn([usize; 3]),
}

impl Monitor {
    /// Signed value normalized so that healthy is negative.
    fn value(&self, p: &[Point], scale: f64) -> f64 {
        let at = |l: usize| p[l - 1];
        match *self {
            Monitor::Flip(q) => incircle_det(at(q.u), at(q.v), at(q.w), at(q.z)) / (scale * scale),
            Monitor::Triangle([a, b, c], _) | Monitor::HullTurn([a, b, c]) => {
                -orient2d(at(a), at(b), at(c)) / scale
            }
        }
    }
}

fn monitors(tri: &Triangulation) -> Vec<Monitor> {
    let mut out: Vec<Monitor> = tri
        .internal_edges()
        .into_iter()
        .map(Monitor::Flip)
        .collect();
    let hull_edges = tri.hull_edges();
    for t in tri.triangles() {
        let on_hull = hull_edges
            .iter()
            .any(|&(u, v, _)| t.contains(&u) && t.contains(&v));
        out.push(Monitor::Triangle(*t, on_hull));
    }
    let hull = tri.hull();
    let h = hull.len();
    for k in 0..h {
        out.push(Monitor::HullTurn([
            hull[k],
            hull[(k + 1) % h],
            hull[(k + 2) % h],
        ]));
    }
    out
}

fn eval_all(scene: &Scene, ms: &[Monitor], t: f64) -> Vec<f64> {
    let p = scene.positions(t);
    let d = diameter(&p);
    let scale = d * d;
    ms.iter().map(|m| m.value(&p, scale)).collect()
}

fn eval_one(scene: &Scene, m: &Monitor, t: f64) -> f64 {
    let p = scene.positions(t);
    let d = diameter(&p);
    m.value(&p, d * d)
}

/// Smallest `t` in `(lo, hi]` with `f(t) >= 0`, to within `eps`, given
/// `f(lo) < 0 <= f(hi)`.
fn bisect(mut lo: f64, mut hi: f64, eps: f64, f: impl Fn(f64) -> f64) -> f64 {
    while hi - lo > eps {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// The earliest flip after `t`, or `None` if the triangulation survives to
/// `t_end`. `tri` must be the Delaunay triangulation just after `t`.
pub fn next_flip(
    scene: &Scene,
    t: f64,
    tri: &Triangulation,
    settings: &ScanSettings,
) -> Result<Option<FlipEvent>, KineticError> {
    let ms = monitors(tri);
    let step = settings.step(scene);
    let eps = settings.tol.time;
    let mut prev_t = t;
    let prev = eval_all(scene, &ms, t);
    // A monitor sitting at zero right after its own flip is armed once it
    // turns healthy.
    let mut armed: Vec<bool> = prev.iter().map(|v| *v < 0.0).collect();
    while prev_t < scene.t_end {
        let cur_t = (prev_t + step).min(scene.t_end);
        let cur = eval_all(scene, &ms, cur_t);
        let crossed: Vec<usize> = (0..ms.len())
            .filter(|&i| armed[i] && cur[i] >= 0.0)
            .collect();
        if !crossed.is_empty() {
            let mut roots: Vec<(f64, usize)> = crossed
                .iter()
                .map(|&i| {
                    (
                        bisect(prev_t, cur_t, eps, |s| eval_one(scene, &ms[i], s)),
                        i,
                    )
                })
                .collect();
            roots.sort_by(|a, b| a.0.total_cmp(&b.0));
            let (time, first) = roots[0];
            // Any other armed monitor failing shortly after `time` is a
            // coincident event.
            let probe = (time + 2.0 * eps).min(scene.t_end);
            let at_probe = eval_all(scene, &ms, probe);
            let clash = (0..ms.len())
                .filter(|&i| i != first && armed[i])
                .find(|&i| {
                    at_probe[i] >= 0.0
                        || roots
                            .iter()
                            .any(|&(r, j)| j == i && (r - time).abs() <= eps)
                });
            if let Some(other) = clash {
                if let (Monitor::Flip(a), Monitor::Flip(b)) = (ms[first], ms[other]) {
                    return Err(KineticError::SimultaneousEvents {
                        time,
                        first: a.diagonal(),
                        second: b.diagonal(),
                    });
                }
            }
            return match ms[first] {
                Monitor::Flip(q) => Ok(Some(FlipEvent {
                    time,
                    quad: q.cycle_from_min(),
                    old_diagonal: q.diagonal(),
                    new_diagonal: q.other_diagonal(),
                })),
                Monitor::Triangle(tr, true) => Err(KineticError::HullChange {
                    time,
                    detail: format!("triangle {tr:?} on the hull collapses"),
                }),
                Monitor::Triangle(tr, false) => {
                    Err(KineticError::TriangleCollapse { time, triangle: tr })
                }
                Monitor::HullTurn(h) => Err(KineticError::HullChange {
                    time,
                    detail: format!("hull vertices {h:?} become collinear"),
                }),
            };
        }
        for i in 0..ms.len() {
            if !armed[i] && cur[i] < 0.0 {
                armed[i] = true;
            }
        }
        prev_t = cur_t;
    }
    Ok(None)
}

/// Result of following a scene from `t_start` to `t_end`.
#[derive(Debug, Clone)]
pub struct FlipRun {
    pub word: GammaWord,
    pub events: Vec<FlipEvent>,
    /// Initial triangulation followed by the one after each event.
    pub states: Vec<Triangulation>,
}

impl FlipRun {
    pub fn initial(&self) -> &Triangulation {
        &self.states[0]
    }

    pub fn last(&self) -> &Triangulation {
        self.states.last().expect("at least the initial state")
    }

    pub fn is_closed_loop(&self) -> bool {
        self.initial() == self.last()
    }

    /// Number of distinct triangulations visited.
    pub fn distinct_triangulations(&self) -> usize {
        let set: std::collections::BTreeSet<_> = self.states.iter().collect();
        set.len()
    }

    /// The triangulation in force at time `t`.
    pub fn state_at(&self, t: f64) -> &Triangulation {
        let k = self.events.iter().take_while(|e| e.time <= t).count();
        &self.states[k]
    }
}

pub fn flip_word(scene: &Scene, settings: &ScanSettings) -> Result<FlipRun, KineticError> {
    scene.validate()?;
    let mut tri = delaunay_at(scene, scene.t_start, &settings.tol)?;
    let mut t = scene.t_start;
    let mut word = GammaWord::identity(scene.n);
    let mut events = Vec::new();
    let mut states = vec![tri.clone()];
    while let Some(ev) = next_flip(scene, t, &tri, settings)? {
        if events.len() >= settings.max_events {
            return Err(KineticError::TooManyEvents(settings.max_events));
        }
        tri = tri.flip(ev.old_diagonal)?;
        let g = canonicalize_generator(scene.n, ev.quad)
            .expect("quad labels are distinct and in range");
        word.push(g).expect("same n");
        t = ev.time;
        events.push(ev);
        states.push(tri.clone());
    }
    Ok(FlipRun {
        word,
        events,
        states,
    })
}

/// Sampled triangulation for external plotting.
#[derive(Debug, Clone, Serialize)]
pub struct Frame {
    pub t: f64,
    pub positions: Vec<[f64; 2]>,
    pub triangles: Vec<[usize; 3]>,
}

/// `count` evenly spaced snapshots over the scene's interval.
pub fn frames(scene: &Scene, run: &FlipRun, count: usize) -> Vec<Frame> {
    let span = scene.t_end - scene.t_start;
    (0..count)
        .map(|k| {
            let t = if count <= 1 {
                scene.t_start
            } else {
                scene.t_start + span * k as f64 / (count - 1) as f64
            };
            Frame {
                t,
                positions: scene.positions(t).iter().map(|p| [p.x, p.y]).collect(),
                triangles: run.state_at(t).triangles().copied().collect(),
            }
        })
        .collect()
}

/// Smallest observed distance from a non-generic situation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Margin {
    pub value: f64,
    pub time: f64,
}

impl Margin {
    fn none() -> Self {
        Margin {
            value: f64::INFINITY,
            time: f64::NAN,
        }
    }

    fn offer(&mut self, value: f64, time: f64) {
        if value < self.value {
            self.value = value;
            self.time = time;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GenericityReport {
    /// Five points on a common circle or line: for each 5-subset, the second
    /// smallest normalized |incircle| among its 4-subsets.
    pub cocircular5: Margin,
    /// Closest pair of cocircularity times from different 4-subsets.
    pub coincident_events: Margin,
    /// Smallest normalized orientation at hull vertices and between hull
    /// edges and the remaining points.
    pub hull_collinearity: Margin,
}

impl GenericityReport {
    pub fn all_above(&self, threshold: f64) -> bool {
        self.cocircular5.value > threshold
            && self.coincident_events.value > threshold
            && self.hull_collinearity.value > threshold
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..=n {
            cur.push(x);
            rec(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, n, k, &mut Vec::new(), &mut out);
    out
}

fn lifted(p: &[Point], s: &[usize], scale: f64) -> f64 {
    incircle_det(p[s[0] - 1], p[s[1] - 1], p[s[2] - 1], p[s[3] - 1]) / scale
}

/// Convex hull labels, counterclockwise (monotone chain).
fn convex_hull(p: &[Point]) -> Vec<usize> {
    let mut idx: Vec<usize> = (1..=p.len()).collect();
    idx.sort_by(|&a, &b| {
        p[a - 1]
            .x
            .total_cmp(&p[b - 1].x)
            .then(p[a - 1].y.total_cmp(&p[b - 1].y))
    });
    let mut hull: Vec<usize> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &usize>> = if pass == 0 {
            Box::new(idx.iter())
        } else {
            Box::new(idx.iter().rev())
        };
        for &i in iter {
            while hull.len() >= start + 2 {
                let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
                if orient2d(p[a - 1], p[b - 1], p[i - 1]) <= 0.0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(i);
        }
        hull.pop();
    }
    hull
}

/// Scans `samples` evenly spaced times for near-violations of genericity.
pub fn validate_genericity(
    scene: &Scene,
    samples: usize,
    settings: &ScanSettings,
) -> GenericityReport {
    let samples = samples.max(2);
    let span = scene.t_end - scene.t_start;
    let times: Vec<f64> = (0..samples)
        .map(|k| scene.t_start + span * k as f64 / (samples - 1) as f64)
        .collect();
    let quads = subsets(scene.n, 4);
    let fives = subsets(scene.n, 5);

    let mut cocircular5 = Margin::none();
    let mut hull_collinearity = Margin::none();
    let mut roots: Vec<(f64, usize)> = Vec::new();
    let mut prev: Option<(f64, Vec<f64>)> = None;

    for &t in &times {
        let p = scene.positions(t);
        let d = diameter(&p);
        let scale4 = d.powi(4);
        let vals: Vec<f64> = quads.iter().map(|s| lifted(&p, s, scale4)).collect();

        for five in &fives {
            let mut v: Vec<f64> = (0..5)
                .map(|skip| {
                    let s: Vec<usize> = five
                        .iter()
                        .enumerate()
                        .filter(|(k, _)| *k != skip)
                        .map(|(_, x)| *x)
                        .collect();
                    lifted(&p, &s, scale4).abs()
                })
                .collect();
            v.sort_by(|a, b| a.total_cmp(b));
            cocircular5.offer(v[1], t);
        }

        let hull = convex_hull(&p);
        let h = hull.len();
        let scale2 = d * d;
        for k in 0..h {
            let (a, b, c) = (hull[k], hull[(k + 1) % h], hull[(k + 2) % h]);
            hull_collinearity.offer(orient2d(p[a - 1], p[b - 1], p[c - 1]) / scale2, t);
            for w in 1..=scene.n {
                if !hull.contains(&w) {
                    hull_collinearity.offer(orient2d(p[a - 1], p[b - 1], p[w - 1]) / scale2, t);
                }
            }
        }

        if let Some((pt, pv)) = &prev {
            for (q, s) in quads.iter().enumerate() {
                if (pv[q] < 0.0) != (vals[q] < 0.0) {
                    let f = |x: f64| {
                        let pp = scene.positions(x);
                        let dd = diameter(&pp).powi(4);
                        let v = lifted(&pp, s, dd);
                        if pv[q] < 0.0 {
                            v
                        } else {
                            -v
                        }
                    };
                    roots.push((bisect(*pt, t, settings.tol.time, f), q));
                }
            }
        }
        prev = Some((t, vals));
    }

    let mut coincident_events = Margin::none();
    roots.sort_by(|a, b| a.0.total_cmp(&b.0));
    for w in roots.windows(2) {
        if w[0].1 != w[1].1 {
            coincident_events.offer(w[1].0 - w[0].0, w[0].0);
        }
    }
    GenericityReport {
        cocircular5,
        coincident_events,
        hull_collinearity,
    }
}
