//! Property tests tying the production solvers to independent oracles and
//! to the structural promises of the types: exact marginals, canonical edge
//! order, two-sided stopping certificates, and agreement between every
//! method that claims to compute the same number.

use num_bigint::BigInt;
use num_rational::BigRational;
use otinf::flow::check_coup;
use otinf::matching::{extend_matching, max_matching, Matching};
use otinf::oracle::{brute_force_monge, independent_feasibility, threshold_scan};
use otinf::{
    argsort_edges, check_perm, solve_bisect, solve_kantorovich_with, solve_monge_with,
    solve_relaxed, validate_problem, CostMatrix, Marginals, Plan, SupportMask, SweepMode,
};
use proptest::collection::vec;
use proptest::prelude::*;

fn small_square() -> impl Strategy<Value = (usize, Vec<f64>)> {
    (1usize..=6).prop_flat_map(|n| (Just(n), vec(-100.0f64..100.0, n * n)))
}

fn tied_square() -> impl Strategy<Value = (usize, Vec<f64>)> {
    (1usize..=6).prop_flat_map(|n| (Just(n), vec((0u8..4).prop_map(f64::from), n * n)))
}

fn rect() -> impl Strategy<Value = (usize, usize, Vec<f64>)> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(n, m)| (Just(n), Just(m), vec(-50.0f64..50.0, n * m)))
}

fn rect_with_weights() -> impl Strategy<Value = (usize, usize, Vec<f64>, Vec<u32>, Vec<u32>)> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(n, m)| {
        (
            Just(n),
            Just(m),
            vec((0u8..6).prop_map(f64::from), n * m),
            vec(1u32..10, n),
            vec(1u32..10, m),
        )
    })
}

fn mask() -> impl Strategy<Value = (usize, usize, Vec<bool>)> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(n, m)| (Just(n), Just(m), vec(any::<bool>(), n * m)))
}

fn square_mask() -> impl Strategy<Value = (usize, Vec<bool>)> {
    (1usize..=5).prop_flat_map(|n| (Just(n), vec(any::<bool>(), n * n)))
}

fn build_mask(n: usize, m: usize, cells: &[bool]) -> SupportMask {
    let mut support = SupportMask::empty(n, m);
    for i in 0..n {
        for j in 0..m {
            if cells[i * m + j] {
                support.admit(i, j);
            }
        }
    }
    support
}

/// Weights u_i / sum(u), so both sides hold total mass exactly 1.
fn build_marginals(cost: &CostMatrix, a_units: &[u32], b_units: &[u32]) -> Marginals {
    let texts = |units: &[u32]| {
        let total: u32 = units.iter().sum();
        units
            .iter()
            .map(|u| format!("{u}/{total}"))
            .collect::<Vec<_>>()
    };
    validate_problem(cost, &texts(a_units), &texts(b_units)).unwrap()
}

/// Maximum matching size by bare recursion; shares nothing with the
/// augmenting-path code under test.
fn recursive_matching_size(support: &SupportMask, row: usize, used: &mut [bool]) -> usize {
    if row == support.rows() {
        return 0;
    }
    let mut best = recursive_matching_size(support, row + 1, used);
    for col in 0..support.cols() {
        if support.contains(row, col) && !used[col] {
            used[col] = true;
            best = best.max(1 + recursive_matching_size(support, row + 1, used));
            used[col] = false;
        }
    }
    best
}

fn brute_matching_size(support: &SupportMask) -> usize {
    recursive_matching_size(support, 0, &mut vec![false; support.cols()])
}

proptest! {
    #[test]
    fn sorted_edges_form_a_canonical_permutation((n, m, data) in rect()) {
        let cost = CostMatrix::new(n, m, data).unwrap();
        let edges = argsort_edges(&cost);
        prop_assert_eq!(edges.len(), n * m);

        let mut seen: Vec<(usize, usize)> = edges.iter().collect();
        for t in 1..edges.len() {
            let prev = edges.get(t - 1);
            let here = edges.get(t);
            let (vp, vh) = (cost.get(prev.0, prev.1), cost.get(here.0, here.1));
            prop_assert!(vp < vh || (vp == vh && prev < here));
        }
        seen.sort_unstable();
        let all: Vec<(usize, usize)> =
            (0..n).flat_map(|i| (0..m).map(move |j| (i, j))).collect();
        prop_assert_eq!(seen, all);
        prop_assert_eq!(argsort_edges(&cost), edges);
    }

    #[test]
    fn ties_come_out_row_major((n, data) in tied_square()) {
        let cost = CostMatrix::new(n, n, data).unwrap();
        let edges = argsort_edges(&cost);
        for t in 1..edges.len() {
            let prev = edges.get(t - 1);
            let here = edges.get(t);
            if cost.get(prev.0, prev.1) == cost.get(here.0, here.1) {
                prop_assert!(prev < here);
            }
        }
    }

    #[test]
    fn scaled_weights_are_exact((n, m, data, au, bu) in rect_with_weights()) {
        let cost = CostMatrix::new(n, m, data).unwrap();
        let marg = build_marginals(&cost, &au, &bu);
        let d = BigRational::from_integer(BigInt::from(marg.scale()));
        for (w, &s) in marg.source().iter().zip(marg.scaled_source()) {
            prop_assert_eq!(w * &d, BigRational::from_integer(BigInt::from(s)));
        }
        for (w, &s) in marg.target().iter().zip(marg.scaled_target()) {
            prop_assert_eq!(w * &d, BigRational::from_integer(BigInt::from(s)));
        }
        let supply: i64 = marg.scaled_source().iter().sum();
        let demand: i64 = marg.scaled_target().iter().sum();
        prop_assert_eq!(supply, demand);
        prop_assert_eq!(supply, marg.total_scaled());
    }

    #[test]
    fn matching_size_matches_recursion((n, m, cells) in mask()) {
        let support = build_mask(n, m, &cells);
        prop_assert_eq!(max_matching(&support).size(), brute_matching_size(&support));
    }

    #[test]
    fn perfect_matching_iff_brute_says_so((n, cells) in square_mask()) {
        let support = build_mask(n, n, &cells);
        let brute_perfect = brute_matching_size(&support) == n;
        match check_perm(&support).unwrap() {
            Some(sigma) => {
                prop_assert!(brute_perfect);
                for (i, j) in sigma.pairs() {
                    prop_assert!(support.contains(i, j));
                }
            }
            None => prop_assert!(!brute_perfect),
        }
    }

    #[test]
    fn missing_matchings_leave_a_starved_row_subset((n, cells) in square_mask()) {
        let support = build_mask(n, n, &cells);
        if check_perm(&support).unwrap().is_none() {
            // Some row set must have a strictly smaller neighborhood.
            let starved = (1u32..1 << n).any(|subset| {
                let mut reach = 0u32;
                for i in 0..n {
                    if subset & (1 << i) != 0 {
                        reach |= support
                            .row_neighbors(i)
                            .fold(0u32, |acc, j| acc | 1 << j);
                    }
                }
                reach.count_ones() < subset.count_ones()
            });
            prop_assert!(starved);
        }
    }

    #[test]
    fn incremental_matching_tracks_scratch_solves((n, m, cells) in mask()) {
        let full = build_mask(n, m, &cells);
        let mut growing = SupportMask::empty(n, m);
        let mut matching = Matching::empty(n, m);
        let mut last = 0;
        for i in 0..n {
            for j in 0..m {
                if full.contains(i, j) {
                    growing.admit(i, j);
                    matching = extend_matching(&growing, matching, (i, j));
                    let scratch = max_matching(&growing).size();
                    prop_assert_eq!(matching.size(), scratch);
                    prop_assert!(scratch >= last && scratch <= last + 1);
                    last = scratch;
                }
            }
        }
    }

    #[test]
    fn flow_and_cut_feasibility_agree((n, m, cells, au, bu) in
        (1usize..=5, 1usize..=5).prop_flat_map(|(n, m)| {
            (Just(n), Just(m), vec(any::<bool>(), n * m), vec(1u32..10, n), vec(1u32..10, m))
        }))
    {
        let cost = CostMatrix::new(n, m, vec![1.0; n * m]).unwrap();
        let marg = build_marginals(&cost, &au, &bu);
        let support = build_mask(n, m, &cells);
        let by_cut = independent_feasibility(&support, &marg).unwrap();
        match check_coup(&support, &marg) {
            Some(coupling) => {
                prop_assert!(by_cut);
                prop_assert_eq!(coupling.row_sums(n), marg.source());
                prop_assert_eq!(coupling.col_sums(m), marg.target());
                for (i, j) in coupling.support() {
                    prop_assert!(support.contains(i, j));
                }
            }
            None => prop_assert!(!by_cut),
        }
    }

    #[test]
    fn uniform_square_coupling_iff_permutation((n, cells) in square_mask()) {
        let support = build_mask(n, n, &cells);
        let cost = CostMatrix::new(n, n, vec![1.0; n * n]).unwrap();
        let marg = Marginals::uniform(&cost);
        prop_assert_eq!(
            check_perm(&support).unwrap().is_some(),
            check_coup(&support, &marg).is_some()
        );
    }

    #[test]
    fn monge_equals_brute_force((n, data) in small_square()) {
        let cost = CostMatrix::new(n, n, data).unwrap();
        let report = solve_monge_with(&cost, SweepMode::Batched).unwrap();
        prop_assert_eq!(report.value, brute_force_monge(&cost).unwrap());
    }

    #[test]
    fn monge_equals_brute_force_under_heavy_ties((n, data) in tied_square()) {
        let cost = CostMatrix::new(n, n, data).unwrap();
        let report = solve_monge_with(&cost, SweepMode::Batched).unwrap();
        prop_assert_eq!(report.value, brute_force_monge(&cost).unwrap());
    }

    #[test]
    fn monge_report_is_internally_consistent((n, data) in tied_square()) {
        let cost = CostMatrix::new(n, n, data).unwrap();
        let edges = argsort_edges(&cost);
        for mode in [SweepMode::Batched, SweepMode::PerEdge] {
            let report = solve_monge_with(&cost, mode).unwrap();
            let (wi, wj) = report.witness_edge;
            prop_assert_eq!(report.value, cost.get(wi, wj));
            prop_assert!(report.plan.contains(wi, wj));
            prop_assert_eq!(report.plan.bottleneck(&cost), report.value);
            prop_assert!(report.iterations >= 1 && report.iterations <= n * n);

            let k = report.iterations;
            let before = SupportMask::prefix(n, n, &edges, k - 1);
            let after = SupportMask::prefix(n, n, &edges, k);
            prop_assert!(check_perm(&before).unwrap().is_none());
            prop_assert!(check_perm(&after).unwrap().is_some());

            prop_assert_eq!(&solve_monge_with(&cost, mode).unwrap(), &report);
        }
        let batched = solve_monge_with(&cost, SweepMode::Batched).unwrap();
        let per_edge = solve_monge_with(&cost, SweepMode::PerEdge).unwrap();
        prop_assert_eq!(batched.value, per_edge.value);
        prop_assert_eq!(batched.iterations, per_edge.iterations);
        prop_assert_eq!(batched.witness_edge, per_edge.witness_edge);
    }

    #[test]
    fn kantorovich_and_its_rivals_agree((n, m, data, au, bu) in rect_with_weights()) {
        let cost = CostMatrix::new(n, m, data).unwrap();
        let marg = build_marginals(&cost, &au, &bu);
        let edges = argsort_edges(&cost);

        let sweep = solve_kantorovich_with(&cost, &marg, SweepMode::Batched).unwrap();
        let literal = solve_kantorovich_with(&cost, &marg, SweepMode::PerEdge).unwrap();
        let bisect = solve_bisect(&cost, &marg).unwrap();
        let scan = threshold_scan(&cost, &marg).unwrap();

        prop_assert_eq!(sweep.value, literal.value);
        prop_assert_eq!(sweep.value, bisect.value);
        prop_assert_eq!(sweep.value, scan);
        prop_assert_eq!(sweep.iterations, literal.iterations);
        prop_assert_eq!(sweep.iterations, bisect.iterations);
        prop_assert_eq!(sweep.witness_edge, literal.witness_edge);
        prop_assert_eq!(sweep.witness_edge, bisect.witness_edge);

        for report in [&sweep, &literal, &bisect] {
            let (wi, wj) = report.witness_edge;
            prop_assert_eq!(report.value, cost.get(wi, wj));
            prop_assert!(report.plan.contains(wi, wj));
            prop_assert_eq!(report.plan.bottleneck(&cost), report.value);
            prop_assert!(report.iterations >= 1 && report.iterations <= n * m);
            match &report.plan {
                Plan::Coupling(coupling) => {
                    prop_assert_eq!(coupling.row_sums(n), marg.source());
                    prop_assert_eq!(coupling.col_sums(m), marg.target());
                }
                _ => prop_assert!(false, "expected a coupling plan"),
            }

            let k = report.iterations;
            let before = SupportMask::prefix(n, m, &edges, k - 1);
            let after = SupportMask::prefix(n, m, &edges, k);
            prop_assert!(check_coup(&before, &marg).is_none());
            prop_assert!(check_coup(&after, &marg).is_some());
        }

        prop_assert_eq!(
            &solve_kantorovich_with(&cost, &marg, SweepMode::Batched).unwrap(),
            &sweep
        );
    }

    #[test]
    fn uniform_square_kantorovich_is_monge((n, data) in small_square()) {
        let cost = CostMatrix::new(n, n, data).unwrap();
        let marg = Marginals::uniform(&cost);
        let kant = solve_kantorovich_with(&cost, &marg, SweepMode::Batched).unwrap();
        let monge = solve_monge_with(&cost, SweepMode::Batched).unwrap();
        prop_assert_eq!(kant.value, monge.value);
        prop_assert_eq!(kant.iterations, monge.iterations);
        prop_assert_eq!(kant.witness_edge, monge.witness_edge);
    }

    #[test]
    fn monge_commutes_with_exact_monotone_maps((n, data) in small_square()) {
        // Multiplying by a power of two only shifts exponents, so the
        // transform is exact and strictly increasing.
        let cost = CostMatrix::new(n, n, data).unwrap();
        let scaled = cost.map(|v| 4.0 * v).unwrap();
        let base = solve_monge_with(&cost, SweepMode::Batched).unwrap();
        let after = solve_monge_with(&scaled, SweepMode::Batched).unwrap();
        prop_assert_eq!(after.value, 4.0 * base.value);
        prop_assert_eq!(after.witness_edge, base.witness_edge);
        prop_assert_eq!(after.iterations, base.iterations);
        prop_assert_eq!(&after.plan, &base.plan);
    }

    #[test]
    fn monge_commutes_with_cubing_small_integers((n, data) in tied_square()) {
        // Entries are integers below 4, so cubes stay exact in f64 and the
        // map is increasing; ties are preserved, not just order.
        let cost = CostMatrix::new(n, n, data).unwrap();
        let cubed = cost.map(|v| v * v * v).unwrap();
        let base = solve_monge_with(&cost, SweepMode::Batched).unwrap();
        let after = solve_monge_with(&cubed, SweepMode::Batched).unwrap();
        prop_assert_eq!(after.value, base.value.powi(3));
        prop_assert_eq!(after.witness_edge, base.witness_edge);
        prop_assert_eq!(after.iterations, base.iterations);
        prop_assert_eq!(&after.plan, &base.plan);
    }

    #[test]
    fn relaxed_stays_under_the_assignment_value((n, data) in
        (1usize..=5).prop_flat_map(|n| (Just(n), vec(0.0f64..10.0, n * n))))
    {
        let cost = CostMatrix::new(n, n, data).unwrap();
        let eps = 1e-7;
        let sol = solve_relaxed(&cost, eps).unwrap();
        let monge = solve_monge_with(&cost, SweepMode::Batched).unwrap();

        prop_assert!(sol.value <= monge.value + 1e-6);
        prop_assert!(sol.value >= 0.0);
        prop_assert!(sol.tolerance <= eps);
        for i in 0..n {
            let row: f64 = (0..n).map(|j| sol.plan_entry(i, j)).sum();
            let col: f64 = (0..n).map(|j| sol.plan_entry(j, i)).sum();
            prop_assert!((row - 1.0).abs() <= 1e-9);
            prop_assert!((col - 1.0).abs() <= 1e-9);
        }
        prop_assert!(sol.weighted_bottleneck(&cost) <= sol.value + sol.tolerance + 1e-12);
    }

    #[test]
    fn relaxed_sees_free_diagonals((n, data) in
        (2usize..=5).prop_flat_map(|n| (Just(n), vec(0.5f64..10.0, n * n))))
    {
        let mut data = data;
        for i in 0..n {
            data[i * n + i] = 0.0;
        }
        let cost = CostMatrix::new(n, n, data).unwrap();
        let sol = solve_relaxed(&cost, 1e-7).unwrap();
        prop_assert_eq!(sol.value, 0.0);
        prop_assert_eq!(sol.tolerance, 0.0);
        prop_assert_eq!(sol.probes, 1);
    }
}
