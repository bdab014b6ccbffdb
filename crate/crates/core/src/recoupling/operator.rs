use std::collections::BTreeSet;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::kinetic::{
    flip_word, orient2d, Edge, FlipEvent, FlipRun, Point, ScanSettings, Scene, Triangulation,
};

use super::{ColouringBasis, Level, RecouplingError};

/// A linear map between colouring spaces. Columns index the domain basis,
/// rows the codomain basis.
#[derive(Debug, Clone)]
pub struct FlipOperator {
    pub domain: ColouringBasis,
    pub codomain: ColouringBasis,
    pub matrix: DMatrix<Complex64>,
}

impl FlipOperator {
    pub fn identity(basis: &ColouringBasis) -> FlipOperator {
        FlipOperator {
            domain: basis.clone(),
            codomain: basis.clone(),
            matrix: DMatrix::identity(basis.len(), basis.len()),
        }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &FlipOperator) -> Result<FlipOperator, RecouplingError> {
        if other.domain.triangulation() != self.codomain.triangulation() {
            return Err(RecouplingError::ShapeMismatch(
                "composed operators do not share a triangulation".into(),
            ));
        }
        Ok(FlipOperator {
            domain: self.domain.clone(),
            codomain: other.codomain.clone(),
            matrix: sparse_left_product(&other.matrix, &self.matrix),
        })
    }

    /// Largest entrywise deviation from the identity.
    pub fn identity_deviation(&self) -> f64 {
        let n = self.matrix.nrows();
        if n != self.matrix.ncols() {
            return f64::INFINITY;
        }
        max_abs(&(&self.matrix - DMatrix::<Complex64>::identity(n, n)))
    }

    pub fn to_json(&self) -> MatrixRecord {
        let edge_list = |b: &ColouringBasis| b.edges().iter().map(|e| [e.a, e.b]).collect();
        let mut data = Vec::with_capacity(self.matrix.len());
        for i in 0..self.matrix.nrows() {
            for j in 0..self.matrix.ncols() {
                let z = self.matrix[(i, j)];
                data.push([z.re, z.im]);
            }
        }
        MatrixRecord {
            rows: self.matrix.nrows(),
            cols: self.matrix.ncols(),
            domain_edges: edge_list(&self.domain),
            codomain_edges: edge_list(&self.codomain),
            domain_basis: self.domain.colourings().to_vec(),
            codomain_basis: self.codomain.colourings().to_vec(),
            data,
        }
    }
}

/// Serialized operator: row-major `[re, im]` entries plus basis metadata.
#[derive(Debug, Clone, Serialize)]
pub struct MatrixRecord {
    pub rows: usize,
    pub cols: usize,
    pub domain_edges: Vec<[usize; 2]>,
    pub codomain_edges: Vec<[usize; 2]>,
    pub domain_basis: Vec<Vec<u32>>,
    pub codomain_basis: Vec<Vec<u32>>,
    pub data: Vec<[f64; 2]>,
}

/// `a * b`, skipping zero entries of `a`. Flip operators have at most
/// `r − 1` nonzeros per column, so this beats the dense product.
fn sparse_left_product(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let zero = Complex64::new(0.0, 0.0);
    let nonzeros = a.iter().filter(|z| **z != zero).count();
    if nonzeros * 8 > a.len() {
        return a * b;
    }
    let mut out = DMatrix::<Complex64>::zeros(a.nrows(), b.ncols());
    for k in 0..a.ncols() {
        for i in 0..a.nrows() {
            let x = a[(i, k)];
            if x == zero {
                continue;
            }
            for j in 0..b.ncols() {
                out[(i, j)] += x * b[(k, j)];
            }
        }
    }
    out
}

pub fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// The operator of a single diagonal flip taking `before` to `after`.
///
/// For the quad `u, z, v, w` with old diagonal `j = uv` and new diagonal
/// `i = zw`, the entry at `(g, f)` is `{g(uz) g(zv) g(i); f(vw) f(wu) f(j)}`
/// when `g` and `f` agree off the diagonals, and zero otherwise.
pub fn flip_operator(
    before: &ColouringBasis,
    after: &ColouringBasis,
    level: &Level,
) -> Result<FlipOperator, RecouplingError> {
    let old: BTreeSet<Edge> = before.edges().iter().copied().collect();
    let new: BTreeSet<Edge> = after.edges().iter().copied().collect();
    let removed: Vec<Edge> = old.difference(&new).copied().collect();
    let added: Vec<Edge> = new.difference(&old).copied().collect();
    let (&[j], &[i]) = (removed.as_slice(), added.as_slice()) else {
        return Err(RecouplingError::ShapeMismatch(format!(
            "triangulations differ in {} removed and {} added edges",
            removed.len(),
            added.len()
        )));
    };
    let quad = before
        .triangulation()
        .quad(j)
        .filter(|q| q.other_diagonal() == i)
        .ok_or_else(|| {
            RecouplingError::ShapeMismatch(format!("{j} and {i} are not diagonals of one quad"))
        })?;
    if before.triangulation().flip(j)? != *after.triangulation() {
        return Err(RecouplingError::ShapeMismatch(format!(
            "flipping {j} does not give the target triangulation"
        )));
    }
    let [a, b, c, d] = quad
        .boundary()
        .map(|e| before.edge_position(e).expect("boundary edge"));
    let j_pos = before.edge_position(j).expect("old diagonal");
    let i_pos = after.edge_position(i).expect("new diagonal");
    // Where each target edge's colour comes from in a source colouring.
    let source: Vec<Option<usize>> = after
        .edges()
        .iter()
        .map(|e| {
            if *e == i {
                None
            } else {
                before.edge_position(*e)
            }
        })
        .collect();

    let mut matrix = DMatrix::<Complex64>::zeros(after.len(), before.len());
    let mut g = vec![0u32; after.edges().len()];
    for (col, f) in before.colourings().iter().enumerate() {
        for (k, s) in source.iter().enumerate() {
            if let Some(p) = s {
                g[k] = f[*p];
            }
        }
        for x in 0..=level.max_colour() {
            g[i_pos] = x;
            if let Some(row) = after.index_of(&g) {
                matrix[(row, col)] = level.six_j(f[a], f[b], x, f[c], f[d], f[j_pos]);
            }
        }
    }
    Ok(FlipOperator {
        domain: before.clone(),
        codomain: after.clone(),
        matrix,
    })
}

/// [`flip_operator`] checked against a recorded event.
pub fn flip_operator_for_event(
    before: &ColouringBasis,
    after: &ColouringBasis,
    event: &FlipEvent,
    level: &Level,
) -> Result<FlipOperator, RecouplingError> {
    let quad =
        before
            .triangulation()
            .quad(event.old_diagonal)
            .ok_or(RecouplingError::ShapeMismatch(format!(
                "event edge {} is not internal",
                event.old_diagonal
            )))?;
    if quad.other_diagonal() != event.new_diagonal || quad.cycle_from_min() != event.quad {
        return Err(RecouplingError::ShapeMismatch(format!(
            "event at t = {} does not match the triangulation",
            event.time
        )));
    }
    flip_operator(before, after, level)
}

/// Composes the flip operators along a sequence of triangulations,
/// `A_m ⋯ A_1`.
pub fn compose_path(
    states: &[Triangulation],
    level: &Level,
) -> Result<FlipOperator, RecouplingError> {
    let first = states
        .first()
        .ok_or_else(|| RecouplingError::ShapeMismatch("empty path".into()))?;
    let mut basis = ColouringBasis::new(first, level);
    let mut total = FlipOperator::identity(&basis);
    for next in &states[1..] {
        let next_basis = ColouringBasis::new(next, level);
        total = total.then(&flip_operator(&basis, &next_basis, level)?)?;
        basis = next_basis;
    }
    Ok(total)
}

/// Operator of a recorded run whose first and last triangulations agree.
pub fn run_operator(run: &FlipRun, level: &Level) -> Result<FlipOperator, RecouplingError> {
    if !run.is_closed_loop() {
        return Err(RecouplingError::NotClosedLoop);
    }
    let mut basis = ColouringBasis::new(run.initial(), level);
    let mut total = FlipOperator::identity(&basis);
    for (event, next) in run.events.iter().zip(&run.states[1..]) {
        let next_basis = ColouringBasis::new(next, level);
        total = total.then(&flip_operator_for_event(&basis, &next_basis, event, level)?)?;
        basis = next_basis;
    }
    Ok(total)
}

/// Simulates `scene` and returns the braid operator `A(β)` with its run.
pub fn braid_operator(
    scene: &Scene,
    level: &Level,
    settings: &ScanSettings,
) -> Result<(FlipOperator, FlipRun), RecouplingError> {
    let run = flip_word(scene, settings)?;
    let op = run_operator(&run, level)?;
    Ok((op, run))
}

/// Dimension of the kernel of `M − λI`, counted as singular values below
/// `tol · σ_max`.
pub fn eigen_multiplicity(matrix: &DMatrix<Complex64>, lambda: Complex64, tol: f64) -> usize {
    let n = matrix.nrows();
    if n == 0 {
        return 0;
    }
    let shifted = matrix - DMatrix::<Complex64>::identity(n, n) * lambda;
    let sv = shifted.singular_values();
    let top = sv.iter().copied().fold(0.0, f64::max);
    if top == 0.0 {
        return n;
    }
    sv.iter().filter(|&&s| s < tol * top).count()
}

/// Labels of `points` (1-based) in counterclockwise convex order, or `None`
/// if some point is not a strict hull vertex.
fn convex_order(points: &[Point]) -> Option<Vec<usize>> {
    let n = points.len();
    let cx = points.iter().map(|p| p.x).sum::<f64>() / n as f64;
    let cy = points.iter().map(|p| p.y).sum::<f64>() / n as f64;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        let ai = (points[i].y - cy).atan2(points[i].x - cx);
        let aj = (points[j].y - cy).atan2(points[j].x - cx);
        ai.total_cmp(&aj)
    });
    let convex = (0..n).all(|k| {
        orient2d(
            points[order[k]],
            points[order[(k + 1) % n]],
            points[order[(k + 2) % n]],
        ) > 0.0
    });
    convex.then(|| order.into_iter().map(|k| k + 1).collect())
}

/// Runs the five flips around a convex pentagon and returns the largest
/// entrywise deviation of the composite from the identity.
pub fn verify_pentagon(level: &Level, points: &[Point; 5]) -> Result<f64, RecouplingError> {
    let v = convex_order(points).ok_or(RecouplingError::NotConvex)?;
    let start = Triangulation::from_oriented(
        5,
        [[v[0], v[1], v[2]], [v[0], v[2], v[3]], [v[0], v[3], v[4]]],
    );
    let diagonals = [(0, 2), (0, 3), (1, 3), (1, 4), (2, 4)];
    let mut states = vec![start];
    for (p, q) in diagonals {
        let next = states
            .last()
            .expect("nonempty")
            .flip(Edge::new(v[p], v[q]))?;
        states.push(next);
    }
    if states.last() != states.first() {
        return Err(RecouplingError::NotClosedLoop);
    }
    Ok(compose_path(&states, level)?.identity_deviation())
}

/// Flips two internal edges with disjoint quads in both orders and returns
/// the largest entrywise difference of the two composites.
pub fn verify_commutation(
    level: &Level,
    tri: &Triangulation,
    e1: Edge,
    e2: Edge,
) -> Result<f64, RecouplingError> {
    let q1 = tri.quad(e1).ok_or(RecouplingError::Kinetic(
        crate::kinetic::KineticError::NotFlippable(e1),
    ))?;
    let q2 = tri.quad(e2).ok_or(RecouplingError::Kinetic(
        crate::kinetic::KineticError::NotFlippable(e2),
    ))?;
    let t1: BTreeSet<[usize; 3]> = q1.triangles().into_iter().collect();
    if q2.triangles().iter().any(|t| t1.contains(t)) {
        return Err(RecouplingError::ShapeMismatch(format!(
            "quads of {e1} and {e2} share a triangle"
        )));
    }
    let a = tri.flip(e1)?;
    let ab = a.flip(e2)?;
    let b = tri.flip(e2)?;
    let ba = b.flip(e1)?;
    let p1 = compose_path(&[tri.clone(), a, ab], level)?;
    let p2 = compose_path(&[tri.clone(), b, ba], level)?;
    Ok(max_abs(&(&p1.matrix - &p2.matrix)))
}
