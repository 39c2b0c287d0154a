//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

mod common;

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_complex::Complex64;

use denomlab::analytic::{
    eta_density, eta_survival, hall_h, moment_m_closed, moment_m_quadrature, quad::integrate_real, scale_l_to_s,
};
use denomlab::farey::{count_in_query, farey_distance, level_for_sigma};
use denomlab::qmin::{qmin_1d_fast, qmin_bruteforce_oracle, qmin_nd_search, search_cap};
use denomlab::resonance::resonance_scaling_experiment;
use denomlab::stats::rng::prng_u64;
use denomlab::stats::{
    ks_distance, ks_two_sample, pigeonhole_experiment, qmin_distribution_experiment, qmin_moment_experiment,
    void_statistic_experiment, EmpiricalCdf, PigeonholePlan, PlanSpec,
};
use denomlab::{FareyLevel, Norm, QueryRegion, Rational, RegionSpec};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

struct Gen {
    seed: u64,
    next: u64,
}

impl Gen {
    fn new(seed: u64) -> Self {
        Gen { seed, next: 0 }
    }
    fn below(&mut self, m: u64) -> u64 {
        self.next += 1;
        prng_u64(self.seed, self.next) % m
    }
    fn unit(&mut self, den: u64) -> Rational {
        Rational::new(self.below(den) as i64, den as i64).unwrap()
    }
}

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d).unwrap()
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn m1() -> f64 {
    16.0 / (PI * PI)
}

fn plan(json: &str) -> denomlab::stats::ExperimentPlan {
    PlanSpec::from_json(json).unwrap().experiment_plan().unwrap().0
}

fn constant_check() -> Outcome {
    let out = common::run(&["analytic", "--fn", "M", "--at", "1"]);
    let v: serde_json::Value = match serde_json::from_slice(&out.stdout) {
        Ok(v) => v,
        Err(e) => return outcome(false, format!("unreadable output: {e}")),
    };
    let value = v["value"].as_f64().unwrap_or(f64::NAN);
    let err = (value - m1()).abs();
    outcome(out.status.success() && err <= 1e-8, format!("M(1) = {value:.12}, |error| = {err:.2e}"))
}

fn normalization() -> Outcome {
    let m0 = moment_m_quadrature(c(0.0, 0.0)).unwrap().value;
    let s_eta = |s: f64| s * eta_density(s).unwrap();
    let tail_from = 1e4;
    let mean = integrate_real(s_eta, 0.0, 1.0, 1e-15)
        + integrate_real(s_eta, 1.0, 2.0, 1e-15)
        + integrate_real(s_eta, 2.0, 4.0, 1e-15)
        + integrate_real(s_eta, 4.0, tail_from, 1e-15)
        + 12.0 / (PI * PI) / tail_from;
    let closed = moment_m_closed(c(1.0, 0.0)).unwrap().value.re;
    let (e0, e1) = ((m0 - 1.0).norm(), (mean - closed).abs());
    outcome(e0 <= 1e-9 && e1 <= 1e-8, format!("|M(0) - 1| = {e0:.2e}, |∫ s η - M(1)| = {e1:.2e}"))
}

fn closed_vs_quadrature() -> Outcome {
    let alphas = [c(-1.9, 0.0), c(-1.0, 0.0), c(-0.5, 0.0), c(0.5, 0.0), c(1.0, 0.0), c(1.5, 0.0), c(1.9, 0.0), c(0.5, 1.0), c(0.5, -1.0)];
    let worst = alphas
        .iter()
        .map(|&a| (moment_m_closed(a).unwrap().value - moment_m_quadrature(a).unwrap().value).norm())
        .fold(0.0, f64::max);
    outcome(worst <= 1e-7, format!("max |closed - quadrature| = {worst:.2e} over 9 exponents"))
}

fn branch_continuity() -> Outcome {
    let eps = 1e-14;
    let mut jump: f64 = 0.0;
    for t in [1.0, 0.25] {
        let s = 3.0 / (PI * PI * t);
        jump = jump.max((hall_h(s * (1.0 - eps)).unwrap().value - hall_h(s * (1.0 + eps)).unwrap().value).abs());
    }
    for s in [1.0, 2.0] {
        jump = jump.max((eta_density(s * (1.0 - eps)).unwrap() - eta_density(s * (1.0 + eps)).unwrap()).abs());
    }
    let mut monotone = true;
    let mut nonneg = true;
    let mut last = f64::INFINITY;
    for i in 0..10_000 {
        let s = 1e-3 + 10.0 * i as f64 / 10_000.0;
        let h = hall_h(s).unwrap().value;
        monotone &= h <= last;
        last = h;
        nonneg &= eta_density(8.0 * i as f64 / 10_000.0).unwrap() >= 0.0;
    }
    let s = 1e3;
    let tail = s * s * s * eta_density(s).unwrap() / (12.0 / (PI * PI));
    let pass = jump <= 1e-12 && monotone && nonneg && (tail - 1.0).abs() <= 0.01;
    outcome(
        pass,
        format!("max jump {jump:.1e}, H nonincreasing: {monotone}, η >= 0: {nonneg}, s³η(s)π²/12 at 10³ = {tail:.6}"),
    )
}

fn oracle_equivalence() -> Outcome {
    let mut g = Gen::new(2024);
    let regions_1d = ["interval:0,1", "interval:-1/2,1/2:oo", "interval:0,1:cc", "interval:-1/3,2/5:oc", "ball:1/2", "ball:1/3@1/5:o"];
    let mut mismatches = 0;
    for _ in 0..10_000 {
        let spec: RegionSpec = regions_1d[g.below(regions_1d.len() as u64) as usize].parse().unwrap();
        let e = 1 + g.below(5) as u32;
        let delta = r(1 + g.below(9) as i64, 10i64.pow(e));
        let q = QueryRegion::new(&spec, vec![g.unit(1_000_003)], delta).unwrap();
        if Some(qmin_1d_fast(&q).unwrap()) != qmin_bruteforce_oracle(&q, search_cap(&q)) {
            mismatches += 1;
        }
    }
    let regions_2d = ["box:0,1;0,1", "box:-1/2,1/2;0,1:oo", "ball:1/2", "ball:1/2:sup:o", "ball:1/2:l1", "ball:2/3@1/5,-1/7:l2:o"];
    let regions_3d = ["box:0,1;0,1;0,1", "box:-1/2,1/2;0,1;0,2/3:cc", "ball:1/2", "ball:1/2:l1:o", "ball:1/3:sup"];
    let mut nd_mismatches = 0;
    for i in 0..1000 {
        let (n, pool, dmax) = if i % 2 == 0 { (2, &regions_2d[..], 60) } else { (3, &regions_3d[..], 15) };
        let spec: RegionSpec = pool[g.below(pool.len() as u64) as usize].parse().unwrap();
        let x = (0..n).map(|_| g.unit(10_007)).collect();
        let delta = r(1, 3 + g.below(dmax) as i64);
        let q = QueryRegion::new(&spec, x, delta).unwrap();
        if Some(qmin_nd_search(&q).unwrap()) != qmin_bruteforce_oracle(&q, search_cap(&q)) {
            nd_mismatches += 1;
        }
    }
    outcome(
        mismatches == 0 && nd_mismatches == 0,
        format!("1D: {mismatches} mismatches in 10000; nD: {nd_mismatches} mismatches in 1000"),
    )
}

fn grid_distribution() -> Outcome {
    let p = plan(r#"{"n": 1, "mode": "grid-discrete", "N": 3000, "delta": "1/3000", "region": "interval:0,1:co", "x0": ["0"]}"#);
    let d = qmin_distribution_experiment(&p, &[]).unwrap();
    let ks = ks_distance(&d.scaled, |l| 1.0 - eta_survival(l));
    outcome(ks <= 0.05, format!("KS distance {ks:.4} over {} grid points", d.q.len()))
}

fn first_moment() -> Outcome {
    let one = c(1.0, 0.0);
    let grid = qmin_moment_experiment(&plan(r#"{"n": 1, "mode": "grid-discrete", "N": 100000}"#), one).unwrap().re;
    let cont = qmin_moment_experiment(
        &plan(r#"{"n": 1, "delta": "1/10000000000", "samples": 1000000, "seed": 1}"#),
        one,
    )
    .unwrap()
    .re;
    let (eg, ec) = ((grid / m1() - 1.0).abs(), (cont / m1() - 1.0).abs());
    outcome(
        eg <= 0.02 && ec <= 0.02,
        format!("grid N=10⁵: {grid:.6} ({:.3}%), continuous δ=10⁻¹⁰: {cont:.6} ({:.3}%)", 100.0 * eg, 100.0 * ec),
    )
}

fn void_model() -> Outcome {
    let v = PlanSpec::from_json(r#"{"n": 1, "Q": 1000, "L": 1, "samples": 100000, "seed": 1}"#).unwrap().void_plan().unwrap();
    let h = void_statistic_experiment(&v).unwrap();
    let (p0, model) = (h.frequency(0), 1.0 - 3.0 / (PI * PI));
    let s = scale_l_to_s(1.0, 1);
    outcome((p0 - model).abs() <= 0.02, format!("P0 = {p0:.5} vs {model:.5} (s = {s:.6})"))
}

fn structural_identities() -> Outcome {
    let sigma_level = Rational::from_f64_exact(level_for_sigma(1, 1000.0)).unwrap();
    let cases = [
        (FareyLevel::integer(1, 2).unwrap(), 4u64),
        (FareyLevel::new(1, sigma_level).unwrap(), 1000),
        (FareyLevel::integer(2, 8).unwrap(), 32),
    ];
    let mut tiling = Vec::new();
    for (level, grid_n) in cases {
        let n = level.dim;
        let h = pigeonhole_experiment(&PigeonholePlan::tiling(level, grid_n, vec![Rational::zero(); n]).unwrap()).unwrap();
        tiling.push((h.tiling_identity_holds(), h.farey_total));
    }
    let mut g = Gen::new(77);
    let norms = [Norm::Sup, Norm::L1, Norm::L2];
    let mut disagreements = 0;
    for i in 0..1000 {
        let n = 1 + i % 2;
        let q_max = 2 + g.below(if n == 1 { 60 } else { 12 });
        let level = FareyLevel::integer(n, q_max).unwrap();
        let norm = norms[g.below(3) as usize];
        let x: Vec<Rational> = (0..n).map(|_| g.unit(9973)).collect();
        let s = r(1 + g.below(300) as i64, 100);
        // radius s σ_Q^{-1/n}, rounded to an exact binary fraction
        let sigma = level.normalization().sigma_q;
        let radius = Rational::from_f64_exact(s.to_f64() * sigma.powf(-1.0 / n as f64)).unwrap();
        let ball: RegionSpec = format!("ball:1:{norm}:c").parse().unwrap();
        let empty = count_in_query(&level, &QueryRegion::new(&ball, x.clone(), radius.clone()).unwrap()).unwrap() == 0;
        if empty != farey_distance(&x, &level, norm).unwrap().exceeds(&radius) {
            disagreements += 1;
        }
    }
    let pass = tiling.iter().all(|t| t.0) && disagreements == 0;
    let totals: Vec<String> = tiling.iter().map(|t| format!("{}:{}", t.1, if t.0 { "ok" } else { "broken" })).collect();
    outcome(pass, format!("tiling #F_Q [{}], void/distance disagreements {disagreements} in 1000", totals.join(", ")))
}

fn resonance_scaling() -> Outcome {
    let rhos: Vec<Rational> = [100i64, 1000, 10_000, 100_000].iter().map(|&d| r(1, d)).collect();
    let res = resonance_scaling_experiment(2, &rhos, 10_000, 1).unwrap();
    let slope = res.slope().unwrap_or(f64::NAN);
    let censored: u64 = res.rows.iter().map(|r| r.censored).sum();
    outcome(
        (slope + 1.0 / 3.0).abs() <= 0.05,
        format!("median slope {slope:.4} (target -1/3), {censored} censored samples"),
    )
}

fn higher_dimension_collapse() -> Outcome {
    let a = qmin_distribution_experiment(&plan(r#"{"n": 2, "delta": "1/10000", "samples": 10000, "seed": 11}"#), &[]).unwrap();
    let b = qmin_distribution_experiment(&plan(r#"{"n": 2, "delta": "1/100000", "samples": 10000, "seed": 12}"#), &[]).unwrap();
    let ks = ks_two_sample(&a.scaled, &b.scaled);
    let pooled = EmpiricalCdf::new(a.scaled.values().iter().chain(b.scaled.values()).copied().collect()).unwrap();
    let slope = tail_slope(&pooled, 2.0, 8.0);
    let pass = ks <= 0.05 && slope.is_some_and(|s| (-4.5..=-1.5).contains(&s));
    outcome(pass, format!("two-sample KS {ks:.4}, tail slope over [2, 8]: {slope:.3?}"))
}

/// Least-squares slope of `ln E(L)` against `ln L` on a geometric grid.
fn tail_slope(e: &EmpiricalCdf, lo: f64, hi: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = (0..=12)
        .map(|i| lo * (hi / lo).powf(i as f64 / 12.0))
        .filter_map(|l| {
            let s = e.survival(l);
            (s > 0.0).then(|| (l.ln(), s.ln()))
        })
        .collect();
    if pts.len() < 3 {
        return None;
    }
    let m = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / m, pts.iter().map(|p| p.1).sum::<f64>() / m);
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    Some(sxy / sxx)
}

fn determinism() -> Outcome {
    let single = common::golden_mismatches(1);
    let eight = common::golden_mismatches(8);
    let n = common::invocations().len();
    outcome(
        single.is_empty() && eight.is_empty() && n == 10,
        format!("{n} invocations; mismatches at 1 thread {single:?}, at 8 threads {eight:?}"),
    )
}

fn main() {
    let criteria: [(&str, u64, fn() -> Outcome); 12] = [
        ("constant M(1) = 16/π² from the command line", 1, constant_check),
        ("normalization of η and its first moment", 1, normalization),
        ("closed form against quadrature for M(α)", 5, closed_vs_quadrature),
        ("branch continuity, monotonicity and tail of H and η", 1, branch_continuity),
        ("fast smallest-denominator search against brute force", 60, oracle_equivalence),
        ("grid distribution of N^(-1/2) q_min against η", 30, grid_distribution),
        ("first moment of the rescaled q_min, grid and continuous", 300, first_moment),
        ("void frequency at Q = 1000, L = 1", 60, void_model),
        ("tiling identity and void/distance equivalence", 60, structural_identities),
        ("resonance order scaling exponent", 180, resonance_scaling),
        ("collapse and tail of the n = 2 law", 180, higher_dimension_collapse),
        ("byte-identical golden outputs across thread counts", 120, determinism),
    ];
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = check();
        let took = start.elapsed();
        let in_time = took <= Duration::from_secs(*limit);
        let pass = out.pass && in_time;
        if !pass {
            failed += 1;
        }
        println!(
            "[{:>2}] {} {name}: {} ({:.2}s of {limit}s)",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            out.detail,
            took.as_secs_f64()
        );
    }
    println!("{} of {} acceptance criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
