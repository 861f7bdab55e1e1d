//! Spreading edge endpoints around a node so no two share a point.

/// Smallest angular gap, in degrees, between endpoints on one node.
pub const MIN_SEPARATION: f64 = 10.0;

fn normalize(deg: f64) -> f64 {
    let d = (deg + 180.0).rem_euclid(360.0) - 180.0;
    if d >= 180.0 {
        d - 360.0
    } else {
        d
    }
}

/// Spread endpoint angles (degrees, screen coordinates) so that any two are
/// at least `min(10, 360 / k)` degrees apart around the circle.
///
/// Sorted angles are pushed forward greedily, trying each one as the start of
/// the sweep and keeping the placement that moves angles least. If no start
/// fits, endpoints are spaced evenly from the smallest angle. A single angle
/// is returned unchanged. Output order matches input order.
pub fn place_arrowheads(angles: &[f64]) -> Vec<f64> {
    let k = angles.len();
    if k < 2 {
        return angles.to_vec();
    }
    let sep = MIN_SEPARATION.min(360.0 / k as f64);
    let norm: Vec<f64> = angles.iter().map(|&a| normalize(a)).collect();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| norm[a].total_cmp(&norm[b]).then(a.cmp(&b)));

    let mut best: Option<(f64, Vec<f64>)> = None;
    for start in 0..k {
        let mut placed = vec![0.0; k];
        let mut moved = 0.0;
        let mut prev = f64::NEG_INFINITY;
        let mut first = 0.0;
        for step in 0..k {
            let i = order[(start + step) % k];
            let base = if start + step >= k { norm[i] + 360.0 } else { norm[i] };
            let a = if step == 0 { base } else { base.max(prev + sep) };
            if step == 0 {
                first = a;
            }
            moved += a - base;
            placed[i] = a;
            prev = a;
        }
        if prev - first <= 360.0 - sep + 1e-9 && best.as_ref().map_or(true, |(m, _)| moved < *m - 1e-12) {
            best = Some((moved, placed));
        }
    }
    let placed = match best {
        Some((_, placed)) => placed,
        None => {
            let step = 360.0 / k as f64;
            let mut placed = vec![0.0; k];
            for (rank, &i) in order.iter().enumerate() {
                placed[i] = norm[order[0]] + rank as f64 * step;
            }
            placed
        }
    };
    placed.into_iter().map(normalize).collect()
}

/// Where a ray from the center of a `w` by `h` box at `deg` degrees leaves it.
pub fn perimeter_point(cx: f64, cy: f64, w: f64, h: f64, deg: f64) -> (f64, f64) {
    let (s, c) = deg.to_radians().sin_cos();
    let tx = if c.abs() < 1e-12 { f64::INFINITY } else { (w / 2.0) / c.abs() };
    let ty = if s.abs() < 1e-12 { f64::INFINITY } else { (h / 2.0) / s.abs() };
    let t = tx.min(ty);
    (cx + t * c, cy + t * s)
}

/// Smallest circular distance between two angles, in degrees.
pub fn angular_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(360.0);
    d.min(360.0 - d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn min_gap(v: &[f64]) -> f64 {
        let mut m = f64::INFINITY;
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                m = m.min(angular_gap(v[i], v[j]));
            }
        }
        m
    }

    #[test]
    fn single_edge_keeps_incidence_angle() {
        assert_eq!(place_arrowheads(&[37.5]), vec![37.5]);
    }

    #[test]
    fn identical_directions_split() {
        let out = place_arrowheads(&[90.0, 90.0]);
        assert!(angular_gap(out[0], out[1]) >= 10.0 - 1e-9);
        assert_eq!(out[0], 90.0);
    }

    #[test]
    fn thirty_six_edges_exactly_ten_apart() {
        let out = place_arrowheads(&vec![0.0; 36]);
        assert!(min_gap(&out) >= 10.0 - 1e-9);
    }

    #[test]
    fn more_than_thirty_six_relax_evenly() {
        let out = place_arrowheads(&vec![45.0; 40]);
        assert!(min_gap(&out) >= 9.0 - 1e-9);
    }

    #[test]
    fn wraparound_neighbours_respected() {
        let out = place_arrowheads(&[179.0, -179.0, 178.0]);
        assert!(min_gap(&out) >= 10.0 - 1e-9, "{out:?}");
    }

    #[test]
    fn perimeter_points() {
        assert_eq!(perimeter_point(0.0, 0.0, 60.0, 40.0, 0.0), (30.0, 0.0));
        let (x, y) = perimeter_point(0.0, 0.0, 60.0, 40.0, 90.0);
        assert!(x.abs() < 1e-9 && (y - 20.0).abs() < 1e-9);
        let (x, y) = perimeter_point(10.0, 10.0, 20.0, 20.0, 45.0);
        assert!((x - 20.0).abs() < 1e-9 && (y - 20.0).abs() < 1e-9);
    }
}
