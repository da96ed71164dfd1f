//! Timing harness: seeded random square instances per size, median wall
//! time per solver. Values are recorded so a fixed seed can be shown to
//! regenerate the same instances run over run.

use std::time::Instant;

use otinf::{solve_kantorovich, solve_monge, Marginals};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::gen::random_cost;
use crate::report::Format;

#[derive(Debug, Serialize)]
pub struct BenchReport {
    pub bench: Vec<SizeReport>,
}

#[derive(Debug, Serialize)]
pub struct SizeReport {
    pub size: usize,
    pub trials: usize,
    pub monge_median_ms: f64,
    pub kantorovich_median_ms: f64,
    pub monge_values: Vec<f64>,
    pub kantorovich_values: Vec<f64>,
}

pub fn run(sizes: &[usize], trials: usize, seed: u64) -> otinf::Result<BenchReport> {
    let mut bench = Vec::new();
    for &size in sizes {
        let mut monge_ms = Vec::new();
        let mut kant_ms = Vec::new();
        let mut monge_values = Vec::new();
        let mut kantorovich_values = Vec::new();
        for trial in 0..trials {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((size as u64) << 20) ^ trial as u64);
            let cost = random_cost(size, size, &mut rng);

            let start = Instant::now();
            let monge = solve_monge(&cost)?;
            monge_ms.push(start.elapsed().as_secs_f64() * 1e3);
            monge_values.push(monge.value);

            let marg = Marginals::uniform(&cost);
            let start = Instant::now();
            let kant = solve_kantorovich(&cost, &marg)?;
            kant_ms.push(start.elapsed().as_secs_f64() * 1e3);
            kantorovich_values.push(kant.value);
        }
        bench.push(SizeReport {
            size,
            trials,
            monge_median_ms: median(monge_ms),
            kantorovich_median_ms: median(kant_ms),
            monge_values,
            kantorovich_values,
        });
    }
    Ok(BenchReport { bench })
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(|x, y| x.partial_cmp(y).expect("finite times"));
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

impl BenchReport {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string(self).expect("report serializes"),
            Format::Text => self
                .bench
                .iter()
                .map(|s| {
                    format!(
                        "size {}: monge median {:.3} ms, kantorovich median {:.3} ms ({} trials)",
                        s.size, s.monge_median_ms, s.kantorovich_median_ms, s.trials
                    )
                })
                .collect::<Vec<_>>()
                .join("\n"),
        }
    }
}
