use ergm_core::model::{
    boundary_derivatives, critical_direction, kruskal_katona_upper_bound, lower_boundary_segment,
    razborov_lower_bound, segment_index, turan_point,
};
use proptest::prelude::*;

#[test]
fn joints_are_continuous() {
    for k in 1..=30u32 {
        let e = k as f64 / (k + 1) as f64;
        let left = lower_boundary_segment(k, e);
        let right = lower_boundary_segment(k + 1, e);
        assert!((left - right).abs() <= 1e-12, "k={k}: {left} vs {right}");
        assert!((left - turan_point(k).unwrap().t).abs() <= 1e-12);
    }
}

#[test]
fn segments_are_strictly_concave() {
    for k in 2..=30u32 {
        let lo = (k - 1) as f64 / k as f64;
        let hi = k as f64 / (k + 1) as f64;
        let h = (hi - lo) / 101.0;
        for i in 1..=100 {
            let e = lo + i as f64 * h;
            let second = lower_boundary_segment(k, e + h) - 2.0 * lower_boundary_segment(k, e)
                + lower_boundary_segment(k, e - h);
            assert!(second < 0.0, "k={k} i={i}: {second}");
        }
    }
}

/// `o_k · (v_{k+1} − v_k)` in exact rational arithmetic.
fn normality_numerator(k: i128) -> i128 {
    // v_k = (k/(k+1), k(k−1)/(k+1)²), o_k = (1, −(k+1)(k+2)/(k(3k+5))).
    // Multiply through by k(3k+5)(k+1)²(k+2)².
    let de_num = (k + 1) * (k + 1) - k * (k + 2); // over (k+1)(k+2)
    let dt_num = (k + 1) * k * (k + 1) * (k + 1) - k * (k - 1) * (k + 2) * (k + 2); // over (k+1)²(k+2)²
    let o1_num = k * (3 * k + 5);
    let o2_num = -(k + 1) * (k + 2);
    o1_num * de_num * (k + 1) * (k + 2) + o2_num * dt_num
}

#[test]
fn critical_direction_is_normal_to_hull_segments() {
    for k in 1..=30u32 {
        assert_eq!(normality_numerator(k as i128), 0, "k={k}");
        let o = critical_direction(k).unwrap();
        let (v, w) = (turan_point(k).unwrap(), turan_point(k + 1).unwrap());
        let dot = o[0] * (w.e - v.e) + o[1] * (w.t - v.t);
        assert!(dot.abs() <= 1e-15, "k={k}: {dot}");
    }
}

/// One-sided difference with the `√h` term of a square-root endpoint
/// cancelled: `2·D(h/4) − D(h)`.
fn one_sided(f: impl Fn(f64) -> f64, e: f64, h: f64) -> f64 {
    let d = |h: f64| (f(e + h) - f(e)) / h;
    2.0 * d(h / 4.0) - d(h)
}

#[test]
fn derivatives_match_one_sided_differences() {
    let g = |e: f64| razborov_lower_bound(e).unwrap();
    for k in 1..=30u32 {
        let e = turan_point(k).unwrap().e;
        let (left, right) = boundary_derivatives(k).unwrap();
        // Segments shrink like 1/k², so the step does too.
        let h = 1e-4 / ((k + 1) * (k + 2)) as f64;
        let fd_left = one_sided(g, e, -h);
        let fd_right = one_sided(g, e, h);
        assert!((fd_left - left).abs() < 1e-5, "k={k}: {fd_left} vs {left}");
        assert!((fd_right - right).abs() < 1e-5, "k={k}: {fd_right} vs {right}");
    }
}

#[test]
fn joints_report_lower_segment() {
    assert_eq!(segment_index(0.5).unwrap(), Some(1));
    assert_eq!(segment_index(2.0 / 3.0).unwrap(), Some(2));
    assert_eq!(segment_index(0.6).unwrap(), Some(2));
    assert_eq!(segment_index(1.0).unwrap(), None);
    assert!(segment_index(1.5).is_err());
}

proptest! {
    #[test]
    fn feasible_region_is_a_sandwich(e in 0.0f64..=1.0) {
        let lo = razborov_lower_bound(e).unwrap();
        let hi = kruskal_katona_upper_bound(e).unwrap();
        prop_assert!(lo >= 0.0);
        prop_assert!(lo <= hi + 1e-15);
    }

    #[test]
    fn lower_boundary_is_monotone(e in 0.0f64..0.999, d in 0.0f64..0.001) {
        let lo = razborov_lower_bound(e).unwrap();
        let hi = razborov_lower_bound((e + d).min(1.0)).unwrap();
        prop_assert!(hi >= lo - 1e-14);
    }
}
