use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use tfloc::asymmetry::fraenkel_line;
use tfloc::deficit_lab::{beta, indicator_autocorrelation_line, BetaParams};
use tfloc::hs_engine::{coherent_overlap_closed, hs_norm_sq_grid, GridMethod, Stencil};
use tfloc::hyperbolic::{ball_pair_functional, d_hyp, hyp_pair_functional, hyp_rearrange, CauchyWavelet, HypPoint, HypRegion};
use tfloc::phase_space::io::{read_region, write_region};
use tfloc::phase_space::{disc_rect_area, GridField, GridRegion, GridSpec, IntervalSet, RadialRegion, Shape};
use tfloc::rearrange::rearrange_region;
use tfloc::spectral::{schatten_norm, spectrum};
use tfloc::stft::{demo_setup, quadratic_form_check};

fn small_mask(nx: usize, ny: usize) -> impl Strategy<Value = GridRegion> {
    proptest::collection::vec(any::<bool>(), nx * ny).prop_map(move |mut m| {
        if !m.iter().any(|&b| b) {
            m[0] = true;
        }
        GridRegion::new(GridSpec::new([-0.6, -0.6], 0.1, nx, ny).unwrap(), m).unwrap()
    })
}

fn interval_union() -> impl Strategy<Value = IntervalSet> {
    proptest::collection::vec((0.05f64..1.0, 0.1f64..1.5), 1..5).prop_map(|pieces| {
        let mut t = 0.0;
        let v = pieces
            .into_iter()
            .map(|(gap, len)| {
                t += gap;
                let a = t;
                t += len;
                (a, t)
            })
            .collect();
        IntervalSet::new(v).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn overlap_is_hermitian_with_gaussian_modulus(a in -4.0f64..4.0, b in -4.0f64..4.0, c in -4.0f64..4.0, d in -4.0f64..4.0) {
        let (z, w) = ([a, b], [c, d]);
        let k = coherent_overlap_closed(z, w);
        prop_assert!((k - coherent_overlap_closed(w, z).conj()).norm() < 1e-14);
        let d2 = (a - c).powi(2) + (b - d).powi(2);
        prop_assert!((k.norm_sqr() - (-PI * d2).exp()).abs() < 1e-14);
    }

    #[test]
    fn union_and_intersection_measures(a in small_mask(12, 12), b in small_mask(12, 12)) {
        let u = a.union(&b).unwrap();
        let i = a.intersection(&b).unwrap();
        prop_assert!((u.measure() + i.measure() - a.measure() - b.measure()).abs() < 1e-12);
    }

    #[test]
    fn region_files_round_trip(a in small_mask(13, 7)) {
        let mut bytes = Vec::new();
        write_region(&a, &mut bytes).unwrap();
        prop_assert_eq!(read_region(bytes.as_slice()).unwrap(), a);
    }

    #[test]
    fn disc_rect_area_is_additive(cx in -1.0f64..1.0, cy in -1.0f64..1.0, r in 0.1f64..2.0, split in -1.5f64..1.5) {
        let whole = disc_rect_area([cx, cy], r, [-1.5, 1.5], [-1.0, 2.0]);
        let parts = disc_rect_area([cx, cy], r, [-1.5, split], [-1.0, 2.0]) + disc_rect_area([cx, cy], r, [split, 1.5], [-1.0, 2.0]);
        prop_assert!((whole - parts).abs() < 1e-12);
        prop_assert!(whole <= PI * r * r + 1e-12);
    }

    #[test]
    fn rearrangement_preserves_measure(radii in proptest::collection::vec(0.01f64..2.0, 2..8)) {
        let mut sorted = radii.clone();
        sorted.sort_by(f64::total_cmp);
        sorted.dedup();
        prop_assume!(sorted.len() >= 2);
        let annuli: Vec<(f64, f64)> = sorted.chunks_exact(2).map(|c| (c[0], c[1])).collect();
        let region = RadialRegion::new(2, annuli).unwrap();
        let star = rearrange_region(&region).unwrap();
        prop_assert!((star.measure() - region.measure()).abs() <= 1e-12 * region.measure());
    }

    #[test]
    fn grid_methods_agree(values in proptest::collection::vec(0.0f64..1.0, 64)) {
        let spec = GridSpec::new([0.0, 0.0], 0.15, 8, 8).unwrap();
        let f = GridField::from_real(spec, values).unwrap();
        for stencil in [Stencil::Point, Stencil::CellAverage] {
            let a = hs_norm_sq_grid(&f, GridMethod::Direct, stencil).unwrap().hs_sq;
            let b = hs_norm_sq_grid(&f, GridMethod::Convolution, stencil).unwrap().hs_sq;
            prop_assert!((a - b).abs() <= 1e-12 * a.max(1e-300));
        }
    }

    #[test]
    fn hs_norm_is_bounded_by_l2(values in proptest::collection::vec(0.0f64..1.0, 64)) {
        let spec = GridSpec::new([0.0, 0.0], 0.15, 8, 8).unwrap();
        let f = GridField::from_real(spec, values).unwrap();
        let hs = hs_norm_sq_grid(&f, GridMethod::Convolution, Stencil::CellAverage).unwrap().hs_sq;
        prop_assert!(hs <= f.l2_norm_sq() * (1.0 + 1e-12));
    }

    #[test]
    fn line_asymmetry_is_translation_invariant(set in interval_union(), shift in -5.0f64..5.0) {
        let a = fraenkel_line(&set).unwrap().alpha;
        let b = fraenkel_line(&set.translated(shift)).unwrap().alpha;
        prop_assert!((0.0..=2.0).contains(&a));
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn indicator_autocorrelation_grows_under_rearrangement(set in interval_union(), b in 0.01f64..3.0) {
        let t = indicator_autocorrelation_line(&set, b).unwrap();
        let ts = indicator_autocorrelation_line(&set.rearranged().unwrap(), b).unwrap();
        prop_assert!(ts >= t - 1e-12 * ts);
    }

    #[test]
    fn weight_increases_below_one(s in 0.001f64..1.0, t in 0.001f64..1.0) {
        let p = BetaParams::new(1);
        let (lo, hi) = if s < t { (s, t) } else { (t, s) };
        prop_assert!(beta(lo, &p).unwrap() <= beta(hi, &p).unwrap());
    }

    #[test]
    fn hyperbolic_distance_is_invariant_and_metric(
        x in proptest::collection::vec(-3.0f64..3.0, 3),
        s in proptest::collection::vec(0.05f64..5.0, 3),
        a in 0.1f64..10.0,
        b in -5.0f64..5.0,
    ) {
        let p: Vec<HypPoint> = (0..3).map(|k| HypPoint::new(x[k], s[k]).unwrap()).collect();
        let d01 = d_hyp(p[0], p[1]);
        prop_assert!((d_hyp(p[0].affine(a, b), p[1].affine(a, b)) - d01).abs() <= 1e-10 * d01.max(1.0));
        prop_assert!((d01 - d_hyp(p[1], p[0])).abs() < 1e-14);
        prop_assert!(d_hyp(p[0], p[2]) <= d01 + d_hyp(p[1], p[2]) + 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn schatten_norms_bounded_by_measure(region in small_mask(12, 12)) {
        let s = spectrum(&region, 500).unwrap();
        prop_assert!(s.lambda_max() <= 1.0 + 1e-9);
        for p in [1.0, 2.0, 4.0] {
            prop_assert!(schatten_norm(&s.eigenvalues, p) <= region.measure().powf(1.0 / p) * (1.0 + 1e-9));
        }
    }

    #[test]
    fn ball_maximizes_operator_norm(region in small_mask(10, 10)) {
        let spec = *region.spec();
        let mask = (0..spec.len())
            .map(|k| {
                let (i, j) = spec.cell(k);
                (2..8).contains(&i) && (2..8).contains(&j) && region.contains_cell(k)
            })
            .collect();
        let inner = GridRegion::new(spec, mask).unwrap();
        prop_assume!(inner.count() > 0);
        let region = inner;
        let star = region.nearest_cells([0.0, 0.0]).unwrap();
        let l = spectrum(&region, 500).unwrap().lambda_max();
        let ls = spectrum(&star, 500).unwrap().lambda_max();
        prop_assert!(l <= ls * (1.0 + 0.02), "{l} > {ls}");
    }

    #[test]
    fn localized_energy_below_operator_norm(coeffs in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..5), radius in 0.3f64..1.2) {
        let c: Vec<Complex64> = coeffs.iter().enumerate().map(|(k, &(a, b))| Complex64::new(a, b) * 0.6f64.powi(k as i32)).collect();
        prop_assume!(c.iter().any(|z| z.norm() > 1e-3));
        let (half, dt, spec) = demo_setup();
        let f = tfloc::stft::hermite_signal(&c, half, dt).unwrap();
        let disc = Shape::ball([0.0, 0.0], radius).unwrap().rasterize(&spec).unwrap();
        let q = quadratic_form_check(&f, &disc).unwrap();
        let lmax = spectrum(&disc, 6000).unwrap().lambda_max();
        prop_assert!(q.gap < 1e-3);
        prop_assert!(q.lhs / f.norm_sq() <= lmax + 1e-3);
    }

    #[test]
    fn hyperbolic_riesz_monotonicity(
        a in proptest::collection::vec(any::<bool>(), 96),
        b in proptest::collection::vec(any::<bool>(), 96),
    ) {
        prop_assume!(a.iter().any(|&v| v) && b.iter().any(|&v| v));
        let spec = GridSpec::new([-0.8, 0.4], 0.2, 8, 12).unwrap();
        let (ra, rb) = (HypRegion::new(spec, a).unwrap(), HypRegion::new(spec, b).unwrap());
        let w = CauchyWavelet::new(1.0).unwrap();
        let g = |c: f64| w.kernel_cosh(c);
        let lhs = hyp_pair_functional(&ra, &rb, &g, 3).unwrap();
        let rhs = ball_pair_functional(hyp_rearrange(&ra).unwrap().radius, hyp_rearrange(&rb).unwrap().radius, &g).unwrap();
        prop_assert!(lhs <= rhs * (1.0 + 1e-3), "{lhs} > {rhs}");
    }
}
