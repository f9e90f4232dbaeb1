//! Control-point smoothing and curve sampling.

use crate::geometry::Point;

/// Inserts the midpoint between every consecutive pair of points,
/// `smoothing - 1` times. A factor of 1 returns the input unchanged.
pub fn smooth_control_points(points: &[Point], smoothing: u32) -> Vec<Point> {
    let mut current = points.to_vec();
    for _ in 1..smoothing.max(1) {
        if current.len() < 2 {
            break;
        }
        let mut next = Vec::with_capacity(2 * current.len() - 1);
        for w in current.windows(2) {
            next.push(w[0]);
            next.push(w[0].midpoint(w[1]));
        }
        next.push(*current.last().unwrap());
        current = next;
    }
    current
}

/// Samples a clamped uniform cubic B-spline over `control_points`
/// (first and last point tripled), `samples_per_segment` points per knot
/// span. Two control points are returned unchanged.
pub fn curve_polyline(control_points: &[Point], samples_per_segment: usize) -> Vec<Point> {
    if control_points.len() <= 2 {
        return control_points.to_vec();
    }
    let first = control_points[0];
    let last = *control_points.last().unwrap();
    let mut q = Vec::with_capacity(control_points.len() + 4);
    q.extend([first, first]);
    q.extend_from_slice(control_points);
    q.extend([last, last]);

    let samples = samples_per_segment.max(2);
    let mut out = Vec::with_capacity((q.len() - 3) * samples + 1);
    for seg in q.windows(4) {
        for j in 0..samples {
            let u = j as f64 / samples as f64;
            out.push(eval_segment(seg, u));
        }
    }
    out.push(last);
    out[0] = first;
    out
}

fn eval_segment(p: &[Point], u: f64) -> Point {
    let u2 = u * u;
    let u3 = u2 * u;
    let b0 = (1.0 - u).powi(3) / 6.0;
    let b1 = (3.0 * u3 - 6.0 * u2 + 4.0) / 6.0;
    let b2 = (-3.0 * u3 + 3.0 * u2 + 3.0 * u + 1.0) / 6.0;
    let b3 = u3 / 6.0;
    p[0] * b0 + p[1] * b1 + p[2] * b2 + p[3] * b3
}
