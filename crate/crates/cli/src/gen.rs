//! Seeded random instance generation, shared by `bench` and the test
//! suites. Costs are full-precision uniform draws from [0,1), so ties have
//! probability ~0 and sweeps run their worst-case length.

use otinf::CostMatrix;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn random_cost(rows: usize, cols: usize, rng: &mut impl Rng) -> CostMatrix {
    let data = (0..rows * cols).map(|_| rng.gen::<f64>()).collect();
    CostMatrix::new(rows, cols, data).expect("uniform draws are finite")
}

/// Positive rational weights over a shared denominator <= `max_denom`, with
/// exactly equal total mass on both sides.
pub fn random_weight_texts(
    n: usize,
    m: usize,
    max_denom: u32,
    rng: &mut impl Rng,
) -> (Vec<String>, Vec<String>) {
    let q = rng.gen_range(1..=max_denom);
    let total = (n.max(m) as u32) * rng.gen_range(1..=5);
    let a = composition(total, n, rng);
    let b = composition(total, m, rng);
    let texts = |parts: Vec<u32>| parts.iter().map(|u| format!("{u}/{q}")).collect();
    (texts(a), texts(b))
}

/// Split `total` into `parts` positive integers, uniformly over compositions.
fn composition(total: u32, parts: usize, rng: &mut impl Rng) -> Vec<u32> {
    assert!(total as usize >= parts && parts > 0);
    let mut cuts: Vec<u32> = (1..total).collect();
    cuts.shuffle(rng);
    let mut chosen: Vec<u32> = cuts.into_iter().take(parts - 1).collect();
    chosen.sort_unstable();
    chosen.push(total);
    let mut prev = 0;
    chosen
        .into_iter()
        .map(|c| {
            let part = c - prev;
            prev = c;
            part
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn compositions_are_positive_and_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let parts = rng.gen_range(1..=6);
            let total = parts as u32 * rng.gen_range(1..=5);
            let comp = composition(total, parts, &mut rng);
            assert_eq!(comp.len(), parts);
            assert!(comp.iter().all(|&u| u > 0));
            assert_eq!(comp.iter().sum::<u32>(), total);
        }
    }

    #[test]
    fn weight_texts_have_equal_mass() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let (a, b) = random_weight_texts(3, 5, 100, &mut rng);
            let sum = |texts: &[String]| {
                texts
                    .iter()
                    .map(|t| otinf::parse_rational(t).unwrap())
                    .fold(num_rational::BigRational::from_integer(0.into()), |x, y| {
                        x + y
                    })
            };
            assert_eq!(sum(&a), sum(&b));
        }
    }

    #[test]
    fn seeded_generation_is_reproducible() {
        let a = random_cost(4, 4, &mut ChaCha8Rng::seed_from_u64(3));
        let b = random_cost(4, 4, &mut ChaCha8Rng::seed_from_u64(3));
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(a.get(i, j), b.get(i, j));
            }
        }
    }
}
