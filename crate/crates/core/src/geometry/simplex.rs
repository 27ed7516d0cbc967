/// Euclidean projection of `y` onto `{v >= 0, sum v = scale}` by sorting.
pub fn project_simplex(y: &[f64], scale: f64) -> Vec<f64> {
    let mut u = y.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    let mut theta = 0.0;
    for (j, &v) in u.iter().enumerate() {
        cum += v;
        let t = (cum - scale) / (j + 1) as f64;
        if v - t > 0.0 {
            theta = t;
        }
    }
    y.iter().map(|v| (v - theta).max(0.0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::block::dist_sq;
    use proptest::prelude::*;

    #[test]
    fn known_projections() {
        assert_eq!(project_simplex(&[0.2, 0.8], 1.0), vec![0.2, 0.8]);
        assert_eq!(project_simplex(&[2.0, 0.0], 1.0), vec![1.0, 0.0]);
        let p = project_simplex(&[1.0, 1.0, 1.0], 1.5);
        assert!(p.iter().all(|v| (v - 0.5).abs() < 1e-15));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn projection_is_feasible_and_closest(
            y in prop::collection::vec(-3.0f64..3.0, 1..8),
            scale in 0.1f64..3.0,
            probe in prop::collection::vec(0.0f64..1.0, 8),
        ) {
            let p = project_simplex(&y, scale);
            prop_assert!(p.iter().all(|v| *v >= 0.0));
            prop_assert!((p.iter().sum::<f64>() - scale).abs() <= 1e-12 * scale.max(1.0) * y.len() as f64);
            // any other simplex point is no closer
            let w = &probe[..y.len()];
            let z: f64 = w.iter().sum::<f64>().max(1e-9);
            let q: Vec<f64> = w.iter().map(|v| v / z * scale).collect();
            prop_assert!(dist_sq(&p, &y) <= dist_sq(&q, &y) + 1e-12);
        }
    }
}
