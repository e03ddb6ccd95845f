use ahfsr_core::image::{
    bicubic_resize, convolve, gaussian_kernel, gradient_magnitude, nearest_resize, rgb_to_ycbcr, ring_mask,
    ycbcr_to_rgb, ColorRange, ImagePlane, RgbImage,
};
use ahfsr_core::sr::SrConfig;
use ahfsr_core::tiling::{fill_boundary, plan_tiling, stitch};
use proptest::prelude::*;

fn plane(rows: usize, cols: usize, seed: u64) -> ImagePlane {
    ImagePlane::from_fn(rows, cols, |r, c| {
        let h = (r as u64 * 7919 + c as u64 * 104_729 + seed * 15_485_863) % 1009;
        h as f64 / 1008.0
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn resizers_preserve_constants(v in 0.0f64..1.0, r in 1usize..12, c in 1usize..12, dr in 1usize..30, dc in 1usize..30) {
        let p = ImagePlane::filled(r, c, v);
        let b = bicubic_resize(&p, dr, dc);
        prop_assert!(b.data().iter().all(|&x| (x - v).abs() <= 1e-12));
        let n = nearest_resize(&p, dr, dc);
        prop_assert!(n.data().iter().all(|&x| x == v));
    }

    #[test]
    fn gaussian_blur_keeps_constant_images(v in -2.0f64..2.0, r in 1usize..10, c in 1usize..10) {
        let p = ImagePlane::filled(r, c, v);
        let k = gaussian_kernel(5, 1.0).unwrap();
        let out = convolve(&p, &k);
        prop_assert!((out.mean() - v).abs() <= 1e-12);
    }

    #[test]
    fn ring_mask_sees_only_the_gradient(seed in 0u64..1000, shift in -0.5f64..0.5, t in 0.0f64..0.3) {
        let b = plane(9, 11, seed);
        let shifted = b.map(|x| x + shift);
        prop_assert_eq!(gradient_magnitude(&b).max_abs_diff(&gradient_magnitude(&shifted)).unwrap() <= 1e-12, true);
        prop_assert_eq!(ring_mask(&b, t).unwrap(), ring_mask(&shifted, t).unwrap());
    }

    #[test]
    fn color_round_trip(seed in 0u64..1000, full in any::<bool>()) {
        let range = if full { ColorRange::Full } else { ColorRange::Studio };
        let rgb = RgbImage::new(plane(4, 5, seed), plane(4, 5, seed + 1), plane(4, 5, seed + 2)).unwrap();
        let back = ycbcr_to_rgb(&rgb_to_ycbcr(&rgb, range), range);
        prop_assert!(back.r.max_abs_diff(&rgb.r).unwrap() <= 1e-9);
        prop_assert!(back.g.max_abs_diff(&rgb.g).unwrap() <= 1e-9);
        prop_assert!(back.b.max_abs_diff(&rgb.b).unwrap() <= 1e-9);
    }

    #[test]
    fn stitching_restrictions_reproduces_the_plane(rows in 1usize..20, cols in 1usize..20, s in 2usize..4, seed in 0u64..100) {
        let grid = plan_tiling((rows, cols), 6, 2, s).unwrap();
        let (fr, fc) = grid.fine_dims();
        let global = plane(fr, fc, seed);
        let fp = grid.fine_patch_size();
        let patches: Vec<_> = grid
            .origins()
            .iter()
            .map(|&(r, c)| ((r, c), global.crop(r * s, c * s, fp, fp).unwrap()))
            .collect();
        let stitched = stitch(&patches, &grid).unwrap();
        for r in 0..fr {
            for c in 0..fc {
                if grid.is_covered(r, c) {
                    prop_assert!((stitched.get(r, c) - global.get(r, c)).abs() <= 1e-12);
                } else {
                    prop_assert_eq!(stitched.get(r, c), 0.0);
                }
            }
        }
        // boundary fill leaves nothing unassigned
        let fallback = ImagePlane::filled(fr, fc, 7.0);
        let filled = fill_boundary(&stitched, &fallback, &grid).unwrap();
        for r in 0..fr {
            for c in 0..fc {
                let expect = if grid.is_covered(r, c) { global.get(r, c) } else { 7.0 };
                prop_assert!((filled.get(r, c) - expect).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn tiling_is_deterministic(rows in 1usize..40, cols in 1usize..40, s in 2usize..6) {
        let a = plan_tiling((rows, cols), 6, 2, s).unwrap();
        let b = plan_tiling((rows, cols), 6, 2, s).unwrap();
        prop_assert_eq!(a.origins(), b.origins());
        prop_assert_eq!(a.weight_map(), b.weight_map());
    }
}

#[test]
fn default_config_is_valid() {
    let cfg = SrConfig::default();
    cfg.validate().unwrap();
    assert_eq!(cfg.offset_count(), 36);
}
