mod common;

use common::{by_name, old_efficiency_direct, starter};
use lincorr::bounds::{efficiency, solve_h_in_req, BoundKind, MinEntropyRate, OldBound, OutputBound};
use lincorr::weights::WeightDistribution;
use lincorr::NewBound;

const H_OUT1: f64 = 0.999;

fn rate(h: f64) -> MinEntropyRate {
    MinEntropyRate::new(h).unwrap()
}

fn old_eff(n: usize, k: usize, d: usize, h: f64) -> f64 {
    efficiency(&OldBound::new(n, k, d).unwrap(), H_OUT1, rate(h)).unwrap()
}

#[test]
fn old_bound_efficiencies_general_table() {
    let rows: [(f64, usize, usize, usize, f64, f64); 9] = [
        (0.1, 511, 31, 219, 0.60665234, 5e-9),
        (0.2, 254, 31, 96, 0.61022, 5e-6),
        (0.3, 255, 47, 85, 0.61437, 5e-6),
        (0.4, 126, 29, 42, 0.57538, 5e-6),
        (0.5, 127, 35, 36, 0.55117, 5e-6),
        (0.6, 87, 29, 24, 0.55554, 5e-6),
        (0.7, 59, 23, 16, 0.55688, 5e-6),
        (0.8, 46, 22, 12, 0.59781, 5e-6),
        (0.9, 63, 35, 12, 0.61727, 5e-6),
    ];
    for (h, n, k, d, want, tol) in rows {
        let got = old_eff(n, k, d, h);
        assert!((got - want).abs() <= tol, "[{n},{k},{d}] at {h}: {got} vs {want}");
        assert!((got - old_efficiency_direct(n, k, d, h)).abs() < 1e-12);
    }
}

#[test]
fn old_bound_efficiencies_cyclic_table() {
    let rows: [(f64, usize, usize, usize, f64); 8] = [
        (0.2, 255, 29, 95, 0.56862),
        (0.3, 255, 47, 85, 0.61437),
        (0.4, 127, 29, 43, 0.57086),
        (0.5, 127, 35, 36, 0.55117),
        (0.6, 127, 42, 32, 0.55117),
        (0.7, 55, 21, 15, 0.54543),
        (0.8, 23, 11, 8, 0.59779),
        (0.9, 63, 35, 12, 0.61727),
    ];
    for (h, n, k, d, want) in rows {
        let got = old_eff(n, k, d, h);
        assert!((got - want).abs() <= 5e-6, "[{n},{k},{d}] at {h}: {got} vs {want}");
    }
}

#[test]
fn bch511_new_bound_efficiency_from_bundled_distribution() {
    let c = by_name(&starter(), "bch511_31");
    let wd = c.wd.as_ref().expect("bundled bch511_31 distribution");
    let b = NewBound::new(wd, 31).unwrap();
    let got = efficiency(&b, H_OUT1, rate(0.1)).unwrap();
    assert!((got - 0.60665360).abs() <= 5e-9, "{got}");
}

#[test]
fn reed_muller_old_bound_requirements() {
    let req = |n, k, d| {
        solve_h_in_req(&OldBound::new(n, k, d).unwrap(), H_OUT1)
            .unwrap()
            .h_in
            .value()
    };
    assert!((req(256, 93, 32) - 0.854297).abs() <= 1e-6);
    // with the new requirements 0.407964 and 0.274447 the old bound
    // certifies less than k - 1 bits, i.e. nothing per output bit
    for (n, k, d, h) in [(256, 93, 32, 0.407964), (512, 130, 64, 0.274447)] {
        let b = OldBound::new(n, k, d).unwrap().total(rate(h)).value();
        assert!(b - (k as f64 - 1.0) <= 0.0, "[{n},{k},{d}] {b}");
    }
    // consistency of the headline percentages with the old requirement
    let old = req(512, 130, 64);
    assert!(((old - 0.274447) / old - 0.6162).abs() < 5e-4);
}

#[test]
fn rm19_relative_improvement() {
    let wd = WeightDistribution::from_u64(&{
        let mut a = vec![0u64; 513];
        a[0] = 1;
        a[256] = 1022;
        a[512] = 1;
        a
    })
    .unwrap();
    let new = solve_h_in_req(&NewBound::new(&wd, 10).unwrap(), H_OUT1).unwrap().h_in.value();
    let old = solve_h_in_req(&OldBound::new(512, 10, 256).unwrap(), H_OUT1).unwrap().h_in.value();
    let rel = (old - new) / old;
    assert!((0.00005..=0.0002).contains(&rel), "{rel}");
    assert!((old - 0.0394722).abs() < 1e-6);
    assert_eq!(BoundKind::OldMinDistance.as_str(), "old");
}
