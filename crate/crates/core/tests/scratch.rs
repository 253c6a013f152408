//! Throwaway experiment runner for tuning acceptance parameters.

mod common;

use common::*;
use contour_codec::losses::{fit_descriptor, FitOptions, InitMode, LossConfig};
use contour_codec::{
    chamfer_distance, count_self_intersections, decode, decode_polar, encode, encode_polar,
    geometry, resample, Polygon,
};

#[test]
#[ignore]
fn experiment_polar_vs_complex() {
    for f in nonstar_fixtures() {
        let poly = Polygon::new(f.points.iter().copied()).unwrap();
        let n_pts = 201;
        let target = resample(&poly, n_pts).unwrap();
        println!("=== fixture {} ===", f.name);
        for budget in [8usize, 16, 32] {
            let n = (budget / 2 - 1) / 2;
            let m = (budget - 1) / 2;
            let d = encode(&target, n).unwrap();
            let complex_cd =
                chamfer_distance(decode(&d, n_pts).unwrap().points(), target.points()).unwrap();
            let pd = encode_polar(&poly, f.center, m, 720).unwrap();
            let dec = decode_polar(&pd, n_pts).unwrap();
            let polar_cd = chamfer_distance(dec.samples.points(), target.points()).unwrap();
            println!(
                "budget {budget}: complex(n={n}) {complex_cd:.3}  polar(m={m}) {polar_cd:.3}  star={} ratio {:.2}",
                pd.star_shaped(),
                polar_cd / complex_cd
            );
        }
    }
}

#[test]
#[ignore]
fn experiment_ablation() {
    let f = nonstar_u();
    let poly = Polygon::new(f.points.iter().copied()).unwrap();
    let n = 12;
    let n_pts = 60;
    let steps: usize = std::env::var("STEPS").map(|v| v.parse().unwrap()).unwrap_or(3000);
    let step_size: f64 = std::env::var("STEP").map(|v| v.parse().unwrap()).unwrap_or(0.05);
    let lp: f64 = std::env::var("LP").map(|v| v.parse().unwrap()).unwrap_or(0.5);
    let lc: f64 = std::env::var("LC").map(|v| v.parse().unwrap()).unwrap_or(2.5);
    println!("steps={steps} step={step_size} lp={lp} lc={lc}");
    let init_env = std::env::var("INIT").unwrap_or_default();
    for seed in [1u64, 2, 3] {
        let init = if init_env == "cold" { InitMode::ColdCircle } else { InitMode::Random { seed } };
        let opts = FitOptions::new(steps, step_size).with_init(init);
        let decay: usize = std::env::var("DECAY").map(|v| v.parse().unwrap()).unwrap_or(2000);
        let both = LossConfig {
            lambda_perim: lp,
            lambda_coeff: lc,
            perim_decay_iteration: Some(decay),
            ..LossConfig::default()
        };
        let no_coeff = LossConfig {
            lambda_perim: lp,
            lambda_coeff: 0.0,
            perim_decay_iteration: Some(decay),
            ..LossConfig::default()
        };
        let none = LossConfig {
            lambda_coeff: 0.0,
            lambda_perim: 0.0,
            ..LossConfig::default()
        };
        for (name, cfg) in [("both", both), ("no_coeff", no_coeff), ("none", none)] {
            match fit_descriptor(&poly, n, n_pts, &cfg, &opts) {
                Ok(fit) => {
                    let dec = decode(&fit.descriptor, n_pts).unwrap();
                    let si = count_self_intersections(dec.points());
                    let turning = geometry::total_turning(dec.points());
                    println!(
                        "seed {seed} {name:>9}: chamfer {:>10.4} self-int {si:>3} turning {:>7.3} (x pi)",
                        fit.final_chamfer,
                        turning / std::f64::consts::PI
                    );
                }
                Err(e) => println!("seed {seed} {name:>9}: ERROR {e}"),
            }
        }
    }
}

#[test]
#[ignore]
fn experiment_decay() {
    for f in nonstar_fixtures() {
        let poly = Polygon::new(f.points.iter().copied()).unwrap();
        let n = 12;
        let n_pts = 60;
        let steps = 4000;
        let step_size = 0.05;
        for lambda_perim in [0.1, 0.5, 1.0] {
            let opts = FitOptions::new(steps, step_size);
            let decay = LossConfig {
                lambda_perim,
                perim_decay_iteration: Some(2000),
                lambda_coeff: 0.0,
                ..LossConfig::default()
            };
            let no_decay = LossConfig {
                perim_decay_iteration: None,
                ..decay.clone()
            };
            let fit_d = fit_descriptor(&poly, n, n_pts, &decay, &opts).unwrap();
            let fit_n = fit_descriptor(&poly, n, n_pts, &no_decay, &opts).unwrap();
            println!(
                "{}: lp={lambda_perim} decayed {:.6} no-decay {:.6}  better={}",
                f.name,
                fit_d.final_chamfer,
                fit_n.final_chamfer,
                fit_d.final_chamfer < fit_n.final_chamfer
            );
        }
    }
}
