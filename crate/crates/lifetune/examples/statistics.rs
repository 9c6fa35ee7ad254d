//! The statistics toolkit on constructed data: exact and approximate Wilcoxon
//! rank-sum, A12, Scott-Knott groups, speedup along the budget axis.
//!
//! ```bash
//! cargo run -p lifetune --example statistics
//! ```

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lifetune::core::{Direction, PerformanceObjective, TrajectoryPoint};
use lifetune::stats::{
    a12, exact_rank_sum_p, normal_approx_rank_sum_p, scott_knott, speedup, summarize,
    wilcoxon_rank_sum, SampleSet, Speedup, SplitAcceptance,
};

fn main() {
    // exact enumeration for small samples, normal approximation for larger
    let a = [1.0, 2.0, 3.0];
    let b = [4.0, 5.0, 6.0];
    println!("wilcoxon exact p for fully separated triples: {}", exact_rank_sum_p(&a, &b));
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let big_a: Vec<f64> = (0..40).map(|_| rng.random::<f64>()).collect();
    let big_b: Vec<f64> = (0..40).map(|_| rng.random::<f64>() + 0.3).collect();
    println!(
        "wilcoxon approx p for shifted 40-sample sets: {:.6}",
        normal_approx_rank_sum_p(&big_a, &big_b)
    );
    println!(
        "dispatching wrapper picks the right branch: {:.6}",
        wilcoxon_rank_sum(&big_a, &big_b).unwrap()
    );

    println!("\nA12(identical) = {}", a12(&a, &a));
    println!("A12(dominant)  = {}", a12(&b, &a));

    // Scott-Knott: two statistically similar sets share rank 1
    let noise = |rng: &mut ChaCha8Rng| rng.random::<f64>() * 0.5;
    let sets = vec![
        SampleSet::new("A", (0..400).map(|_| 10.0 + noise(&mut rng)).collect()),
        SampleSet::new("B", (0..400).map(|_| 10.0 + noise(&mut rng)).collect()),
        SampleSet::new("C", (0..400).map(|_| 20.0 + noise(&mut rng)).collect()),
        SampleSet::new("D", (0..400).map(|_| 30.0 + noise(&mut rng)).collect()),
    ];
    let objective = PerformanceObjective::new(Direction::Minimize, "runtime_s");
    println!("\nscott-knott groups (minimize):");
    for group in scott_knott(&sets, &objective, SplitAcceptance::EffectSize).unwrap() {
        println!("  rank {} -> {:?}", group.rank, group.labels);
    }

    // speedup: how many measurements the baseline needs vs the candidate
    let step = |points: &[(u32, f64)]| -> Vec<TrajectoryPoint> {
        points
            .iter()
            .map(|&(measurements, best)| TrajectoryPoint { measurements, best })
            .collect()
    };
    let baseline = vec![step(&[(1, 9.0), (40, 4.0), (80, 2.0)]); 10];
    let candidate = vec![step(&[(1, 8.0), (20, 2.0)]); 10];
    match speedup(&baseline, &candidate, &objective, 80, 99.0, 99.0).unwrap() {
        Speedup::Ratio(s) => println!("\nspeedup s = {s}"),
        Speedup::NotReached => println!("\nspeedup s = N/A"),
    }

    let summary = summarize(&[1.0, 2.0, 3.0]);
    println!("summary of [1,2,3]: mean {} std {}", summary.mean, summary.std);
}
