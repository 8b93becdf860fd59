//! One handler per subcommand; each returns the JSON report.

use std::path::Path;
use std::sync::Arc;

use kzm_core::invariants::{tensor_of_weights, TensorSystem};
use kzm_core::kz::{braid_loop, default_basepoint, full_rotation, kz_system, parallel_transport, ConfigPath, Mode};
use kzm_core::lie::{build_algebra, BasisElement, LieAlgebraData, Weight};
use kzm_core::numerics::{eigenvalues_general, rational_to_f64, C64};
use kzm_core::rep::irrep;
use kzm_core::sugawara::{
    affine_bracket_check, generator_from_name, l0_grading_check, lx_commutator_check, truncated_module,
    virasoro_bracket_check, CheckOutcome, GENERATORS,
};
use kzm_core::symbols::run_symbol_trials;
use kzm_core::verlinde::{compare_invariants, fusion_ring};
use serde_json::{json, Value};

use crate::config::{ArithmeticMode, ConfigError, RunConfig};
use crate::json;

type Outcome = Result<Value, ConfigError>;

fn algebra_of(cfg: &RunConfig) -> Result<Arc<LieAlgebraData>, ConfigError> {
    Ok(Arc::new(build_algebra(cfg.series, cfg.rank)?))
}

fn weights_json(ws: &[Weight]) -> Value {
    Value::Array(ws.iter().map(|w| json!(w.0)).collect())
}

pub fn write_json_file(path: &Path, value: &Value) -> Result<(), ConfigError> {
    let text = serde_json::to_string(value).expect("JSON values serialize");
    std::fs::write(path, text + "\n")
        .map_err(|e| ConfigError::Validation(format!("cannot write {}: {e}", path.display())))
}

fn basis_label(b: &BasisElement, alg: &LieAlgebraData) -> String {
    let root = |k: &usize| {
        let r = &alg.positive_roots[*k];
        r.0.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
    };
    match b {
        BasisElement::E(k) => format!("E[{}]", root(k)),
        BasisElement::F(k) => format!("F[{}]", root(k)),
        BasisElement::H(i) => format!("H{}", i + 1),
    }
}

pub fn algebra_info(cfg: &RunConfig) -> Outcome {
    let alg = algebra_of(cfg)?;
    let mut out = json!({
        "series": alg.series.to_string(),
        "rank": alg.rank,
        "dim": alg.dim,
        "dual_coxeter": alg.dual_coxeter,
        "cartan_matrix": alg.cartan_matrix,
        "highest_root": alg.highest_root.0,
        "weyl_vector": alg.weyl_vector.0,
        "positive_roots": weights_json(&alg.positive_roots),
    });
    if let Some(level) = cfg.level {
        let ws = alg.level_weights(level as u32);
        out["level"] = json!(level);
        out["level_weights"] = weights_json(&ws);
    }
    Ok(out)
}

pub fn rep_build(cfg: &RunConfig, emit: Option<&Path>) -> Outcome {
    let alg = algebra_of(cfg)?;
    let lambda = cfg.weights.first().cloned().unwrap_or_else(|| Weight::zero(alg.rank));
    let rep = irrep(&alg, &lambda)?;
    let cas = rep.casimir();
    let mut out = json!({
        "rank": alg.rank,
        "highest_weight": lambda.0,
        "dim": rep.dim,
        "weyl_dimension": json::rational(&alg.weyl_dimension(&lambda)),
        "casimir": json::rational(&cas.eigenvalue),
        "casimir_is_scalar": cas.is_scalar,
        "weights": weights_json(&rep.weights),
    });
    if let Some(path) = emit {
        let mats: serde_json::Map<String, Value> = alg
            .basis
            .iter()
            .zip(&rep.matrices)
            .map(|(b, m)| (basis_label(b, &alg), json::rational_matrix(m)))
            .collect();
        let file = json!({
            "highest_weight": lambda.0,
            "dim": rep.dim,
            "matrices": mats,
            "contravariant_form": json::rational_matrix(&rep.contravariant_form),
        });
        write_json_file(path, &file)?;
        out["emitted"] = json!(path.display().to_string());
    }
    Ok(out)
}

fn tensor(cfg: &RunConfig) -> Result<TensorSystem, ConfigError> {
    if cfg.weights.is_empty() {
        return Err(ConfigError::Validation("at least one weight is required".into()));
    }
    let alg = algebra_of(cfg)?;
    Ok(tensor_of_weights(&alg, &cfg.weights)?)
}

pub fn invariants(cfg: &RunConfig) -> Outcome {
    let sys = tensor(cfg)?;
    let inv = sys.invariant_basis();
    Ok(json!({
        "rank": cfg.rank,
        "weights": weights_json(&cfg.weights),
        "ambient_dim": sys.dim,
        "dim_invariants": inv.dim(),
        "character_dim": count(sys.invariant_dimension()),
        "omega_sum_scalar": json::rational(&sys.omega_sum_scalar()),
    }))
}

fn kz_mode(cfg: &RunConfig) -> Mode {
    match cfg.mode {
        ArithmeticMode::Exact => Mode::Exact,
        ArithmeticMode::Float => Mode::Float,
    }
}

pub fn kz_flatness(cfg: &RunConfig) -> Outcome {
    let sys = tensor(cfg)?;
    let kappa = cfg.kappa.unwrap_or(C64::new((cfg.rank + 1) as f64 + 1.0, 0.0));
    let kz = kz_system(sys, kappa, kz_mode(cfg))?;
    let report = kz.flatness_residual();
    let residual = match &report.residual {
        kzm_core::kz::FlatnessResidual::Exact(r) => json::rational(r),
        kzm_core::kz::FlatnessResidual::Float(x) => json::float(*x),
    };
    Ok(json!({
        "mode": if kz.mode() == Mode::Exact { "exact" } else { "float" },
        "weights": weights_json(&cfg.weights),
        "dim_invariants": kz.dim(),
        "relations": report.relations,
        "residual": residual,
        "flat": report.residual.is_zero(),
    }))
}

/// Parse "A12,A23" (1-based) or "full".
fn parse_braid(text: &str, n: usize) -> Result<Vec<(usize, usize)>, ConfigError> {
    text.split(',')
        .map(|g| {
            let g = g.trim();
            let digits = g.strip_prefix('A').or_else(|| g.strip_prefix('a'));
            let bad = || ConfigError::Validation(format!("bad braid generator '{g}'; expected e.g. A12"));
            let digits = digits.ok_or_else(bad)?;
            let (i, j) = if let Some((a, b)) = digits.split_once('_') {
                (a.parse::<usize>().map_err(|_| bad())?, b.parse::<usize>().map_err(|_| bad())?)
            } else if digits.len() == 2 {
                let d: Vec<usize> = digits.chars().filter_map(|c| c.to_digit(10)).map(|d| d as usize).collect();
                if d.len() != 2 {
                    return Err(bad());
                }
                (d[0], d[1])
            } else {
                return Err(bad());
            };
            if i == 0 || j == 0 || i >= j || j > n {
                return Err(ConfigError::Validation(format!(
                    "generator '{g}' needs 1 <= i < j <= {n}"
                )));
            }
            Ok((i - 1, j - 1))
        })
        .collect()
}

pub fn kz_monodromy(cfg: &RunConfig, braid: &str, emit: Option<&Path>) -> Outcome {
    let sys = tensor(cfg)?;
    let n = sys.len();
    let kappa = cfg.kappa.expect("monodromy requires kappa");
    let tol = cfg.tolerance.expect("monodromy requires a tolerance");
    let kz = kz_system(sys, kappa, kz_mode(cfg))?;
    let base = default_basepoint(n);
    let full = braid.trim() == "full";
    let gens = if full { Vec::new() } else { parse_braid(braid, n)? };
    let path = if full {
        full_rotation(&base)?
    } else {
        let mut path = ConfigPath::constant();
        for &(i, j) in &gens {
            let lp = braid_loop(&base, i, j)?;
            path = if path.segments.is_empty() { lp } else { path.then(&lp)? };
        }
        path
    };
    let hol = parallel_transport(&kz, &path, tol)?;
    let det = if kz.dim() == 0 { C64::new(1.0, 0.0) } else { hol.matrix.determinant() };
    let expected_det = if full {
        let s = kz.full_twist_scalar();
        (0..kz.dim()).fold(C64::new(1.0, 0.0), |acc, _| acc * s)
    } else {
        gens.iter()
            .fold(C64::new(1.0, 0.0), |acc, &(i, j)| acc * kz.expected_generator_determinant(i, j))
    };
    let mut out = json!({
        "braid": braid,
        "kappa": json::complex(&kappa),
        "tol": json::float(tol),
        "dim_invariants": kz.dim(),
        "basepoint": json::complexes(&base),
        "matrix": json::complex_matrix(&hol.matrix),
        "estimated_error": json::float(hol.estimated_error),
        "steps_taken": hol.steps_taken,
        "determinant": json::complex(&det),
        "expected_determinant": json::complex(&expected_det),
    });
    // the exact Omega spectrum needs the exact restriction
    if let ([(i, j)], Mode::Exact) = (gens.as_slice(), kz.mode()) {
        let mus = kz.omega_spectrum(*i, *j)?;
        let two_pi_i = C64::new(0.0, 2.0 * std::f64::consts::PI);
        let expected: Vec<C64> = mus.iter().map(|m| (two_pi_i * rational_to_f64(m) / kappa).exp()).collect();
        let computed = if kz.dim() == 0 { vec![] } else { eigenvalues_general(&hol.matrix)? };
        out["spectrum"] = json!({
            "omega_eigenvalues": json::rationals(&mus),
            "expected": json::complexes(&expected),
            "computed": json::complexes(&computed),
            "max_deviation": json::float(kzm_core::kz::match_spectra(&expected, &computed)),
        });
    }
    if let Some(p) = emit {
        let file = json!({
            "matrix": json::complex_matrix(&hol.matrix),
            "estimated_error": json::float(hol.estimated_error),
            "steps_taken": hol.steps_taken,
        });
        write_json_file(p, &file)?;
    }
    Ok(out)
}

fn outcome_json(o: &CheckOutcome) -> Value {
    json!({ "residual": json::rational(&o.residual), "blocks": o.blocks_checked })
}

pub fn sugawara_check(level: i64, weight: i64, depth: usize, pairs: Option<&[(i64, i64)]>) -> Outcome {
    let module = truncated_module(level, weight, depth)?;
    let d = depth as i64;
    let default_pairs: Vec<(i64, i64)> = {
        let b = d.min(2);
        (-b..=b)
            .flat_map(|p| (-b..=b).map(move |q| (p, q)))
            .filter(|(p, q)| (p + q).abs() <= d)
            .collect()
    };
    let pairs = pairs.map(|p| p.to_vec()).unwrap_or(default_pairs);
    let mut passed = true;
    let mut vir = Vec::new();
    for (p, q) in pairs {
        let o = virasoro_bracket_check(&module, p, q)?;
        passed &= o.passed();
        vir.push(json!({ "p": p, "q": q, "residual": json::rational(&o.residual), "blocks": o.blocks_checked }));
    }
    let affine = affine_bracket_check(&module);
    passed &= affine.passed();
    let b = d.min(2);
    let mut lx = Vec::new();
    for name in GENERATORS {
        let x = generator_from_name(name)?;
        let mut worst = CheckOutcome { residual: Default::default(), blocks_checked: 0 };
        for n in -b..=b {
            for k in -d..=d {
                if (n + k).abs() > d {
                    continue;
                }
                let o = lx_commutator_check(&module, n, x, k)?;
                if o.residual > worst.residual {
                    worst.residual = o.residual.clone();
                }
                worst.blocks_checked += o.blocks_checked;
            }
        }
        passed &= worst.passed();
        lx.push(json!({ "generator": name, "residual": json::rational(&worst.residual), "blocks": worst.blocks_checked }));
    }
    let l0 = l0_grading_check(&module)?;
    passed &= l0.passed();
    Ok(json!({
        "level": level,
        "weight": weight,
        "depth": depth,
        "graded_dims": module.graded_dims(),
        "central_charge": json::rational(&module.central_charge()),
        "conformal_weight": json::rational(&module.conformal_weight()),
        "affine": outcome_json(&affine),
        "virasoro": vir,
        "lx": lx,
        "l0_grading": outcome_json(&l0),
        "passed": passed,
    }))
}

pub fn symbols_check(rank: usize, trials: usize, seed: u64) -> Outcome {
    let r = run_symbol_trials(rank, trials, seed)?;
    Ok(json!({
        "rank": rank,
        "trials": trials,
        "seed": seed,
        "passed": r.passed(),
        "failures": r.failures,
        "exact_max_deviation": r.exact_max_deviation.as_ref().map(json::rational),
        "float_max_deviation": json::float(r.float_max_deviation),
        "cocycle_max_deviation": json::rational(&r.cocycle_max_deviation),
        "cross_term_max_deviation": json::rational(&r.cross_max_deviation),
    }))
}

/// Counts beyond u64 fall back to decimal strings.
fn count(n: u128) -> Value {
    u64::try_from(n).map(Value::from).unwrap_or_else(|_| Value::String(n.to_string()))
}

pub fn verlinde(level: i64, labels: &[i64], scan_levels: i64) -> Outcome {
    let cmp = compare_invariants(level, labels, scan_levels)?;
    let ring = fusion_ring(level)?;
    let s = ring.verlinde_sum(labels)?;
    Ok(json!({
        "level": level,
        "weights": labels,
        "rank": count(cmp.rank),
        "dim_invariants": count(cmp.dim_invariants),
        "equal": cmp.equal,
        "stabilization_level": cmp.stabilization_level,
        "ranks_by_level": cmp.ranks_by_level.iter().map(|(l, r)| json!([l, count(*r)])).collect::<Vec<_>>(),
        "verlinde_sum": json::float(s),
        "fusion_max_deviation": json::float(ring.max_deviation),
    }))
}
