use serde::{Deserialize, Serialize};

use super::KineticError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dist(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

impl From<[f64; 2]> for Point {
    fn from([x, y]: [f64; 2]) -> Self {
        Point { x, y }
    }
}

/// Numerical thresholds. `det` is relative: orientation values are compared
/// against `det·D²` and incircle values against `det·D⁴`, with `D` the
/// configuration diameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub det: f64,
    pub time: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            det: 1e-9,
            time: 1e-9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

/// Twice the signed area of `abc`; positive for counterclockwise.
pub fn orient2d(a: Point, b: Point, c: Point) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

/// Lifted incircle determinant. Positive when `d` lies inside the circle
/// through `a, b, c` given counterclockwise.
pub fn incircle_det(a: Point, b: Point, c: Point, d: Point) -> f64 {
    let row = |p: Point| {
        let (x, y) = (p.x - d.x, p.y - d.y);
        (x, y, x * x + y * y)
    };
    let (ax, ay, aw) = row(a);
    let (bx, by, bw) = row(b);
    let (cx, cy, cw) = row(c);
    ax * (by * cw - bw * cy) - ay * (bx * cw - bw * cx) + aw * (bx * cy - by * cx)
}

pub fn diameter(points: &[Point]) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            d = d.max(points[i].dist(&points[j]));
        }
    }
    d
}

/// Incircle sign with the tolerance scaled by the diameter of the four
/// points. The orientation of `a, b, c` is normalized, so clockwise input is
/// accepted too.
pub fn incircle(
    a: Point,
    b: Point,
    c: Point,
    d: Point,
    tol: &Tolerances,
) -> Result<Sign, KineticError> {
    let diam = diameter(&[a, b, c, d]);
    let o = orient2d(a, b, c);
    if o.abs() <= tol.det * diam * diam {
        return Err(KineticError::DegenerateTriangle);
    }
    let v = incircle_det(a, b, c, d) * o.signum();
    let scale = diam.powi(4);
    Ok(if v.abs() <= tol.det * scale {
        Sign::Zero
    } else if v > 0.0 {
        Sign::Positive
    } else {
        Sign::Negative
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Circumcenter by solving the perpendicular-bisector system directly.
    fn circumcenter(a: Point, b: Point, c: Point) -> (Point, f64) {
        let d = 2.0 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
        let a2 = a.x * a.x + a.y * a.y;
        let b2 = b.x * b.x + b.y * b.y;
        let c2 = c.x * c.x + c.y * c.y;
        let ux = (a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y)) / d;
        let uy = (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / d;
        let center = Point::new(ux, uy);
        (center, center.dist(&a))
    }

    #[test]
    fn roots_of_unity_are_cocircular() {
        let tol = Tolerances::default();
        let p = [
            Point::new(1.0, 0.0),
            Point::new(0.0, 1.0),
            Point::new(-1.0, 0.0),
            Point::new(0.0, -1.0),
        ];
        assert_eq!(incircle(p[0], p[1], p[2], p[3], &tol).unwrap(), Sign::Zero);
    }

    #[test]
    fn center_is_inside() {
        let tol = Tolerances::default();
        let s = 3f64.sqrt() / 2.0;
        let (a, b, c) = (
            Point::new(1.0, 0.0),
            Point::new(-0.5, s),
            Point::new(-0.5, -s),
        );
        assert_eq!(
            incircle(a, b, c, Point::new(0.0, 0.0), &tol).unwrap(),
            Sign::Positive
        );
        assert_eq!(
            incircle(a, c, b, Point::new(0.0, 0.0), &tol).unwrap(),
            Sign::Positive
        );
        assert_eq!(
            incircle(a, b, c, Point::new(3.0, 0.0), &tol).unwrap(),
            Sign::Negative
        );
    }

    #[test]
    fn rectangle_corner_is_on_circle() {
        let tol = Tolerances::default();
        let (a, b, c, d) = (
            Point::new(0.0, 0.0),
            Point::new(4.0, 0.0),
            Point::new(0.0, 3.0),
            Point::new(4.0, 3.0),
        );
        let (center, radius) = circumcenter(a, b, c);
        assert!((center.dist(&d) - radius).abs() < 1e-12);
        assert_eq!(incircle(a, b, c, d, &tol).unwrap(), Sign::Zero);
    }

    #[test]
    fn collinear_triangle_is_rejected() {
        let tol = Tolerances::default();
        let r = incircle(
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(2.0, 0.0),
            Point::new(0.0, 1.0),
            &tol,
        );
        assert!(matches!(r, Err(KineticError::DegenerateTriangle)));
    }

    #[test]
    fn agrees_with_circumcenter_distance() {
        let tol = Tolerances::default();
        let pts = [
            (
                Point::new(0.1, 0.2),
                Point::new(2.0, -0.3),
                Point::new(0.7, 1.9),
                Point::new(1.0, 0.5),
            ),
            (
                Point::new(0.1, 0.2),
                Point::new(2.0, -0.3),
                Point::new(0.7, 1.9),
                Point::new(3.0, 3.0),
            ),
            (
                Point::new(-1.0, 0.0),
                Point::new(1.0, 0.1),
                Point::new(0.0, 0.4),
                Point::new(0.0, -2.0),
            ),
        ];
        for (a, b, c, d) in pts {
            let (center, radius) = circumcenter(a, b, c);
            let inside = center.dist(&d) < radius;
            let s = incircle(a, b, c, d, &tol).unwrap();
            assert_eq!(s == Sign::Positive, inside);
        }
    }
}
