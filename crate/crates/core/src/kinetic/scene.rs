use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::geometry::Point;
use super::KineticError;

/// Motion of a single labelled point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Trajectory {
    Fixed {
        point: [f64; 2],
    },
    Linear {
        start: [f64; 2],
        velocity: [f64; 2],
    },
    /// `center + radius·(cos(phase + ω t), sin(phase + ω t))`.
    Circular {
        center: [f64; 2],
        radius: f64,
        #[serde(default)]
        phase: f64,
        angular_velocity: f64,
    },
}

impl Trajectory {
    pub fn at(&self, t: f64) -> Point {
        match *self {
            Trajectory::Fixed { point } => point.into(),
            Trajectory::Linear { start, velocity } => {
                Point::new(start[0] + velocity[0] * t, start[1] + velocity[1] * t)
            }
            Trajectory::Circular {
                center,
                radius,
                phase,
                angular_velocity,
            } => {
                let a = phase + angular_velocity * t;
                Point::new(center[0] + radius * a.cos(), center[1] + radius * a.sin())
            }
        }
    }

    /// Period of a rotating point, `None` otherwise.
    pub fn period(&self) -> Option<f64> {
        match *self {
            Trajectory::Circular {
                angular_velocity, ..
            } if angular_velocity != 0.0 => Some(2.0 * PI / angular_velocity.abs()),
            _ => None,
        }
    }

    /// The same path traversed backwards: `at'(t) = at(pivot − t)`.
    fn reversed(&self, pivot: f64) -> Trajectory {
        match *self {
            Trajectory::Fixed { point } => Trajectory::Fixed { point },
            Trajectory::Linear { start, velocity } => Trajectory::Linear {
                start: [
                    start[0] + velocity[0] * pivot,
                    start[1] + velocity[1] * pivot,
                ],
                velocity: [-velocity[0], -velocity[1]],
            },
            Trajectory::Circular {
                center,
                radius,
                phase,
                angular_velocity,
            } => Trajectory::Circular {
                center,
                radius,
                phase: phase + angular_velocity * pivot,
                angular_velocity: -angular_velocity,
            },
        }
    }

    fn validate(&self) -> Result<(), String> {
        let finite = |v: &[f64]| v.iter().all(|x| x.is_finite());
        match self {
            Trajectory::Fixed { point } if finite(point) => Ok(()),
            Trajectory::Linear { start, velocity } if finite(start) && finite(velocity) => Ok(()),
            Trajectory::Circular {
                center,
                radius,
                phase,
                angular_velocity,
            } if finite(center) && finite(&[*radius, *phase, *angular_velocity]) => {
                if *radius > 0.0 {
                    Ok(())
                } else {
                    Err(format!("circular radius must be positive, got {radius}"))
                }
            }
            other => Err(format!("non-finite trajectory parameters: {other:?}")),
        }
    }
}

/// `n` labelled trajectories over `[t_start, t_end]`. Point `k` (1-based) is
/// `points[k - 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scene {
    pub n: usize,
    pub t_start: f64,
    pub t_end: f64,
    pub points: Vec<Trajectory>,
}

impl Scene {
    pub fn new(t_start: f64, t_end: f64, points: Vec<Trajectory>) -> Result<Scene, KineticError> {
        let scene = Scene {
            n: points.len(),
            t_start,
            t_end,
            points,
        };
        scene.validate()?;
        Ok(scene)
    }

    pub fn from_json(text: &str) -> Result<Scene, KineticError> {
        let scene: Scene =
            serde_json::from_str(text).map_err(|e| KineticError::InvalidScene(e.to_string()))?;
        scene.validate()?;
        Ok(scene)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scene serializes")
    }

    /// Structural checks. General position at `t_start` is checked when the
    /// initial triangulation is built.
    pub fn validate(&self) -> Result<(), KineticError> {
        if self.n != self.points.len() {
            return Err(KineticError::InvalidScene(format!(
                "n = {} but {} trajectories",
                self.n,
                self.points.len()
            )));
        }
        if self.n < 4 {
            return Err(KineticError::InvalidScene(format!(
                "need at least 4 points, got {}",
                self.n
            )));
        }
        if !(self.t_start.is_finite() && self.t_end.is_finite() && self.t_start < self.t_end) {
            return Err(KineticError::InvalidScene(format!(
                "bad time range [{}, {}]",
                self.t_start, self.t_end
            )));
        }
        for (k, tr) in self.points.iter().enumerate() {
            tr.validate()
                .map_err(|e| KineticError::InvalidScene(format!("point {}: {e}", k + 1)))?;
        }
        let p = self.positions(self.t_start);
        for i in 0..self.n {
            for j in i + 1..self.n {
                if p[i] == p[j] {
                    return Err(KineticError::InvalidScene(format!(
                        "points {} and {} coincide at t_start",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn positions(&self, t: f64) -> Vec<Point> {
        self.points.iter().map(|tr| tr.at(t)).collect()
    }

    pub fn shortest_period(&self) -> Option<f64> {
        self.points
            .iter()
            .filter_map(|t| t.period())
            .min_by(|a, b| a.total_cmp(b))
    }

    /// Time reversal over the same interval.
    pub fn reversed(&self) -> Scene {
        let pivot = self.t_start + self.t_end;
        Scene {
            n: self.n,
            t_start: self.t_start,
            t_end: self.t_end,
            points: self.points.iter().map(|t| t.reversed(pivot)).collect(),
        }
    }

    pub fn with_t_end(&self, t_end: f64) -> Scene {
        Scene {
            t_end,
            ..self.clone()
        }
    }
}
