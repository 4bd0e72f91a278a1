// Temporary calibration probe; removed before release.
use lpp::dp::{max_weight_table_upto, PathMode};
use lpp::model::{default_arithmetic_model, default_uniform_model};
use lpp::regen::*;
use lpp::seed::derive_rng;
use lpp::window::{SeedProvenance, WeightWindow};

#[test]
#[ignore]
fn probe_uniform_density() {
    let model = default_uniform_model();
    for c in [0.3f64, 0.4, 0.5, 0.6, 0.7, 0.8] {
        let config = RenewalConfig::new(c, c, 40, 40).unwrap();
        let mut n_cycles = 0u64;
        let mut tau_sum = 0i64;
        let mut max_tau = 0i64;
        let mut mark_viol = 0u64;
        let windows = 60u64;
        let n = 600i64;
        for idx in 0..windows {
            let mut rng = derive_rng(606, "probe-unif", idx);
            let w = WeightWindow::sample(&model, 0, n, &mut rng, SeedProvenance::manual()).unwrap();
            let renewal = detect_renewal(&w, &config);
            for cy in extract_cycles(&w, &renewal) {
                n_cycles += 1;
                tau_sum += cy.tau;
                max_tau = max_tau.max(cy.tau);
                for (i, &m) in cy.marks.iter().enumerate() {
                    if m < c * (i + 1) as f64 {
                        mark_viol += 1;
                    }
                }
            }
        }
        println!(
            "c={c}: cycles={n_cycles} Etau={:.2} max_tau={max_tau} mark_viol={mark_viol}",
            tau_sum as f64 / n_cycles.max(1) as f64
        );
    }
}

#[test]
#[ignore]
fn probe_cycle_stats() {
    for (model, tag) in
        [(default_arithmetic_model(), "arith"), (default_uniform_model(), "unif")]
    {
        let interval = estimate_admissible_interval(
            &model,
            &AdmissibleParams { window_len: 256, replicas: 48, margin: 24 },
            2024,
        )
        .unwrap();
        let (c1, c2) = interval.default_constants();
        println!(
            "{tag}: interval=({:.4},{:.4}) gamma={:.4} V={:.4} -> c1={c1:.4} c2={c2:.4}",
            interval.low, interval.high, interval.gamma_plus, interval.v_hat
        );
        let config = RenewalConfig::new(c1, c2, 40, 40).unwrap();
        let mut n_cycles = 0u64;
        let mut n_long = 0u64;
        let mut mark_viol = 0u64;
        let mut s2_viol = 0u64;
        let mut decomp_viol = 0u64;
        let mut tau_sum = 0i64;
        let mut max_tau = 0i64;
        let n = 400i64;
        let windows = 300u64;
        for idx in 0..windows {
            let mut rng = derive_rng(505, "probe", idx);
            let w = WeightWindow::sample(&model, 0, n, &mut rng, SeedProvenance::manual()).unwrap();
            let renewal = detect_renewal(&w, &config);
            let cycles = extract_cycles(&w, &renewal);
            for c in &cycles {
                n_cycles += 1;
                tau_sum += c.tau;
                max_tau = max_tau.max(c.tau);
                if c.tau > 40 {
                    n_long += 1;
                }
                for (i, &m) in c.marks.iter().enumerate() {
                    if m < c1 * (i + 1) as f64 {
                        mark_viol += 1;
                    }
                }
                let head = c.marks[..c.marks.len() - 1].iter().copied().fold(0.0, f64::max);
                if head > c.zeta {
                    s2_viol += 1;
                }
            }
            if !renewal.is_empty() {
                let direct = max_weight_table_upto(&w, 0, n, PathMode::All)[n as usize];
                let mut sum = max_weight_table_upto(&w, 0, renewal[0], PathMode::All)
                    [renewal[0] as usize];
                for p in renewal.windows(2) {
                    sum = sum
                        + max_weight_table_upto(&w, p[0], p[1], PathMode::All)
                            [(p[1] - p[0]) as usize];
                }
                let last = *renewal.last().unwrap();
                sum = sum + max_weight_table_upto(&w, last, n, PathMode::All)[(n - last) as usize];
                let (d, s) = (direct.expect_finite(), sum.expect_finite());
                if (d - s).abs() > 1e-9 {
                    decomp_viol += 1;
                }
            }
        }
        println!(
            "{tag}: windows={windows} cycles={n_cycles} Etau={:.2} max_tau={max_tau} long(>40)={n_long} mark_viol={mark_viol} s2_viol={s2_viol} decomp_viol={decomp_viol}",
            tau_sum as f64 / n_cycles as f64
        );
    }
}
