use std::collections::HashSet;

use checkerboard::centers::center_of_m0;
use checkerboard::render::{default_parameter_window, label_color, render, Palette, Plane, RenderSpec};
use checkerboard::{GridSpec, Label, MapParams};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn origin() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn dynamical(n: u32, d: u32, lambda: f64, half: f64, res: usize, palette: Palette) -> RenderSpec {
    let p = MapParams::real(n, d, lambda).unwrap();
    RenderSpec::new(Plane::Dynamical(p), GridSpec::new(origin(), half, res).unwrap(), 1000, palette).unwrap()
}

fn connecting_colors(spec: &RenderSpec, count: usize) -> usize {
    let img = render(spec).unwrap();
    let palette: HashSet<[u8; 3]> = (0..count as u32).map(|j| label_color(Label::Connecting(j), count)).collect();
    let seen: HashSet<[u8; 3]> = img.pixels.chunks(3).map(|c| [c[0], c[1], c[2]]).filter(|c| palette.contains(c)).collect();
    seen.len()
}

#[test]
fn checkerboard_labels_show_seven_blobs() {
    let spec = dynamical(4, 3, 0.18, 1.5, 512, Palette::RegionLabels);
    assert_eq!(connecting_colors(&spec, 7), 7);
}

#[test]
fn five_blobs_at_the_three_two_center() {
    let lambda = center_of_m0(3, 2).unwrap().lambda.re;
    let spec = dynamical(3, 2, lambda, 1.5, 512, Palette::RegionLabels);
    assert_eq!(connecting_colors(&spec, 5), 5);
}

#[test]
fn cantor_locus_renders_all_red() {
    let img = render(&dynamical(2, 1, 5.0, 8.0, 256, Palette::EscapeShade)).unwrap();
    assert!(img.pixels.chunks(3).all(|c| c[0] > 0 && c[1] == 0 && c[2] == 0));
}

#[test]
fn renders_are_byte_identical_across_thread_counts() {
    let spec = dynamical(4, 3, 0.18, 1.5, 256, Palette::EscapeShade);
    let a = render(&spec).unwrap().to_ppm();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
    let b = pool.install(|| render(&spec).unwrap().to_ppm());
    assert_eq!(a, b);
    let labels = dynamical(4, 3, 0.18, 1.5, 256, Palette::RegionLabels);
    assert_eq!(render(&labels).unwrap().to_ppm(), pool.install(|| render(&labels).unwrap().to_ppm()));
}

fn parameter_image(n: u32, d: u32, res: usize) -> (GridSpec, checkerboard::render::Image) {
    let grid = default_parameter_window(n, d, res).unwrap();
    let spec = RenderSpec::new(Plane::Parameter { n, d }, grid, 300, Palette::EscapeShade).unwrap();
    (grid, render(&spec).unwrap())
}

#[test]
fn parameter_plane_mirror_symmetry_is_exact() {
    for (n, d) in [(3, 3), (4, 4), (13, 7)] {
        let (_, img) = parameter_image(n, d, 256);
        for y in 0..256 {
            for x in 0..256 {
                assert_eq!(img.pixel(x, y), img.pixel(x, 255 - y), "({n},{d}) at {x},{y}");
            }
        }
    }
}

#[test]
fn parameter_plane_rotation_symmetry() {
    for (n, d) in [(4, 4), (13, 7)] {
        let (grid, img) = parameter_image(n, d, 512);
        let nu = checkerboard::map::root_of_unity((n - 1) as u64, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let (mut agree, mut total) = (0, 0);
        while total < 1000 {
            let (x, y) = (rng.gen_range(0..512), rng.gen_range(0..512));
            let Some((rx, ry)) = grid.pixel_of(nu * grid.point(x, y)) else { continue };
            total += 1;
            // Nearest-pixel resampling shifts escape counts by one near level lines,
            // so agreement is judged on escaping versus non-escaping.
            let escaped = |p: [u8; 3]| p[0] > 0;
            agree += (escaped(img.pixel(x, y)) == escaped(img.pixel(rx, ry))) as usize;
        }
        assert!(agree * 100 >= total * 99, "({n},{d}) {agree}/{total}");
    }
}

#[test]
fn principal_mandelbrot_sets_are_black() {
    // The centers themselves never escape.
    for (n, d) in [(3, 3), (4, 4), (13, 7)] {
        let (grid, img) = parameter_image(n, d, 512);
        for center in checkerboard::centers::all_centers(n, d).unwrap() {
            let (x, y) = grid.pixel_of(center.lambda).unwrap();
            assert_eq!(img.pixel(x, y), [0, 0, 0], "({n},{d}) k={}", center.k);
        }
    }
}
