//! Random instance generators shared by the integration tests.
#![allow(dead_code)]

use coronakit::kernels::{ComplexPoint, DomainKind, KernelSpec, PointSet};
use coronakit::C64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// One representative of every kernel family, in dimension 2 where allowed.
pub fn families() -> Vec<KernelSpec> {
    vec![
        KernelSpec::szego_disk(),
        KernelSpec::hardy_ball(2),
        KernelSpec::bergman_ball(2),
        KernelSpec::hardy_polydisc(2),
        KernelSpec::bergman_polydisc(2),
        KernelSpec::besov_sobolev_disk(0.5, 2.0, 0.0, 256),
    ]
}

pub fn disk_point(rng: &mut impl Rng, r_max: f64) -> C64 {
    C64::from_polar(r_max * rng.gen::<f64>().sqrt(), rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI))
}

pub fn random_point(rng: &mut impl Rng, spec: &KernelSpec, r_max: f64) -> ComplexPoint {
    let d = spec.domain();
    match d.kind {
        DomainKind::Disk => ComplexPoint::scalar(disk_point(rng, r_max)),
        DomainKind::Polydisc => ComplexPoint::new((0..d.dim).map(|_| disk_point(rng, r_max)).collect()),
        DomainKind::Ball => {
            let v: Vec<C64> = (0..d.dim).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(1e-12);
            let r = r_max * rng.gen::<f64>().powf(1.0 / (2 * d.dim) as f64);
            ComplexPoint::new(v.into_iter().map(|z| z * (r / norm)).collect())
        }
    }
}

/// Random points at mutual distance at least `sep`.
pub fn random_set(rng: &mut impl Rng, spec: &KernelSpec, size: usize, r_max: f64, sep: f64) -> PointSet {
    let mut pts: Vec<ComplexPoint> = Vec::with_capacity(size);
    while pts.len() < size {
        let p = random_point(rng, spec, r_max);
        if pts.iter().all(|q| q.distance(&p) >= sep) {
            pts.push(p);
        }
    }
    PointSet::new(spec.domain(), pts).unwrap()
}

pub fn random_values(rng: &mut impl Rng, n: usize) -> Vec<C64> {
    (0..n).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

pub struct BezoutInstance {
    pub gram: coronakit::rkhs::GramMatrix,
    pub phi: coronakit::rkhs::SampleFunction,
    pub base: Vec<ComplexPoint>,
    pub c: f64,
}

/// Random Bezout data: `size` points of a random family, `channels` random
/// multiplier values, `shifts` base points (drawn from the sample set when
/// `base_in_set`), and `c` half the smallest pointwise max modulus.
pub fn bezout_instance(
    rng: &mut impl Rng,
    size: usize,
    channels: usize,
    shifts: usize,
    base_in_set: bool,
) -> BezoutInstance {
    let spec = families()[rng.gen_range(0..6)];
    let pts = random_set(rng, &spec, size, 0.85, 0.08);
    let gram = coronakit::rkhs::build_gram(&spec, &pts).unwrap();
    let phi = coronakit::rkhs::SampleFunction::vector((0..channels).map(|_| random_values(rng, size)).collect());
    let c =
        (0..size).map(|i| phi.channels.iter().map(|ch| ch[i].norm()).fold(0.0, f64::max)).fold(f64::INFINITY, f64::min)
            * 0.5;
    let base = (0..shifts)
        .map(|m| if base_in_set { pts.points[m % size].clone() } else { random_point(rng, &spec, 0.85) })
        .collect();
    BezoutInstance { gram, phi, base, c }
}

pub fn random_simplex(rng: &mut impl Rng, dim: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..dim).map(|_| -rng.gen::<f64>().max(1e-300).ln()).collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}

/// Proptest settings without the regression-file lookup, which cannot find
/// a crate root from an integration test.
pub fn config(cases: u32) -> proptest::test_runner::Config {
    proptest::test_runner::Config { cases, failure_persistence: None, ..Default::default() }
}
