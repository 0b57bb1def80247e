use torix_core::fan::{hirzebruch, random_smooth_blowup_tower};
use torix_core::positivity::SweepEngine;
use rand::{Rng, SeedableRng};

fn main() {
    let fan = random_smooth_blowup_tower(&hirzebruch(1), 32, 3).unwrap();
    println!("rays: {:?}", fan.data().rays);
    println!("cones: {:?}", fan.data().max_cones);
    let engine = SweepEngine::new(&fan).unwrap();
    let d = fan.num_rays();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    let mut histogram = std::collections::BTreeMap::new();
    for _ in 0..2_000_00 {
        let coeffs: Vec<i64> = (0..d).map(|_| rng.gen_range(-2..=8)).collect();
        let (min, _) = engine.min_degree(&coeffs);
        if (0..=6).contains(&min) {
            *histogram.entry(min).or_insert(0usize) += 1;
        }
    }
    println!("min-degree histogram: {histogram:?}");
    // Unit degrees per wall for structure.
    for i in 0..d {
        let mut c = vec![0i64; d];
        c[i] = 1;
        println!("unit {i}: {:?}", engine.degrees(&c));
    }
}
