use dmed_core::divergence::{dmin_discrete, dmin_samples};
use dmed_core::moments::{dmin_sup_gap, dminm, feasibility, moments_of};
use dmed_core::simulator::{aggregate, five_beta_arms, run_replications};
use dmed_core::{dmin_empirical_plugin, DiscreteDistribution, FeasibilityStatus, MomentVector, PolicyKind};

fn dist(atoms: &[(f64, f64)]) -> DiscreteDistribution {
    let (s, w) = atoms.iter().copied().unzip();
    DiscreteDistribution::new(s, w).unwrap()
}

// Every law on {0, x, 1} with the moments of `f` sits between the two
// extremes; x is swept over a grid.
#[test]
fn three_point_family_is_bracketed() {
    let f = dist(&[(0.1, 0.3), (0.35, 0.4), (0.8, 0.3)]);
    let m = moments_of(&f, 2);
    let mu = 0.7;
    let inf = dminm(&m, mu).unwrap();
    let sup = inf + dmin_sup_gap(&m, mu).unwrap();
    let (m1, m2) = (m.get(1), m.get(2));
    let mut seen = 0;
    for i in 1..1000 {
        let x = i as f64 / 1000.0;
        // weights: w1 x + w2 = m1, w1 x^2 + w2 = m2
        let w1 = (m1 - m2) / (x - x * x);
        let w2 = m1 - w1 * x;
        let w0 = 1.0 - w1 - w2;
        if w0 < 0.0 || w1 < 0.0 || w2 < 0.0 {
            continue;
        }
        let v = dmin_discrete(&dist(&[(0.0, w0), (x, w1), (1.0, w2)]), mu).value;
        assert!(v >= inf - 1e-9 && v <= sup + 1e-9, "x = {x}: {v} outside [{inf}, {sup}]");
        seen += 1;
    }
    assert!(seen > 100);
}

#[test]
fn plugin_paths_agree() {
    let xs: Vec<f64> = (0..200).map(|i| ((i * 37) % 101) as f64 / 101.0).collect();
    for mu in [0.3, 0.6, 0.9, 0.999] {
        let a = dmin_empirical_plugin(&xs, mu).unwrap();
        let b = dmin_samples(&xs, mu).unwrap();
        assert!((a.value - b.value).abs() < 1e-10, "mu {mu}");
        assert_eq!(a.at_boundary, b.at_boundary);
    }
}

#[test]
fn feasibility_of_moment_families() {
    let m = MomentVector::new(vec![0.5, 0.3]).unwrap();
    assert_eq!(feasibility(&m).status, FeasibilityStatus::Interior);
    let boundary = MomentVector::new(vec![0.5, 0.25]).unwrap();
    assert_eq!(feasibility(&boundary).status, FeasibilityStatus::Boundary);
    assert!(dminm(&MomentVector::new(vec![0.5, 0.6]).unwrap(), 0.6).is_err());
}

#[test]
fn small_campaign_round_trip() {
    let arms = five_beta_arms();
    let traces = run_replications(&arms, PolicyKind::DmedMM(2), 300, 4, 1).unwrap();
    let summary = aggregate(&traces).unwrap();
    assert_eq!(summary.runs, 4);
    assert_eq!(summary.checkpoints, vec![1, 3, 10, 30, 100, 300]);
    for t in &traces {
        assert_eq!(t.pulls.iter().sum::<u64>(), 300);
    }
    let single = aggregate(&traces[..1]).unwrap();
    assert_eq!(single.mean, traces[0].regret);
}
