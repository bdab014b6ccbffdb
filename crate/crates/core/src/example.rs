//! The rotating-pair configuration: an equilateral outer triangle on the
//! unit circle, a fixed centre point, and a fifth point circling the centre
//! at radius 1/3. One full turn is the pure braid `b12` on five strands.

use std::f64::consts::PI;

use crate::kinetic::{Scene, Trajectory};

/// Labels: 1 centre, 2 orbiting point, 3 and 4 the upper and lower outer
/// vertices, 5 the outer vertex on the positive x-axis. `turns` full
/// revolutions of point 2, starting on the positive x-axis.
pub fn rotating_pair_scene(turns: f64) -> Scene {
    let s = 3f64.sqrt() / 2.0;
    Scene::new(
        0.0,
        2.0 * PI * turns,
        vec![
            Trajectory::Fixed { point: [0.0, 0.0] },
            Trajectory::Circular {
                center: [0.0, 0.0],
                radius: 1.0 / 3.0,
                phase: 0.0,
                angular_velocity: 1.0,
            },
            Trajectory::Fixed { point: [-0.5, s] },
            Trajectory::Fixed { point: [-0.5, -s] },
            Trajectory::Fixed { point: [1.0, 0.0] },
        ],
    )
    .expect("valid scene")
}
