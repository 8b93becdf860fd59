//! Acceptance gate: one PASS/FAIL line per criterion, with wall-clock limits.

use std::f64::consts::PI;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use kzm_core::invariants::tensor_of_weights;
use kzm_core::kz::{braid_monodromy, default_basepoint, kz_system, parallel_transport, ConfigPath, Mode};
use kzm_core::lie::{build_algebra, LieAlgebraData, Series, Weight};
use kzm_core::numerics::{eigenvalues_general, ComplexMatrix, Rational, C64};
use kzm_core::rep::irrep;
use kzm_core::sugawara::{full_check, truncated_module};
use kzm_core::symbols::{cocycle_evaluation, residue_side, LaurentGVector, ResidueBasis, ResidueValue};
use kzm_core::verlinde::{compare_invariants, fusion_ring};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use rand_chacha::ChaCha8Rng;

fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

fn a(rank: usize) -> Arc<LieAlgebraData> {
    Arc::new(build_algebra(Series::A, rank).unwrap())
}

fn a1_weights(labels: &[i64]) -> Vec<Weight> {
    labels.iter().map(|&m| Weight(vec![m])).collect()
}

/// `c_m = m (m + 2) / 2`, the sl_2 Casimir with the normalized form.
fn sl2_casimir(m: i64) -> Rational {
    rat(m * (m + 2), 2)
}

/// Nondecreasing tuples of labels in `1..=max` of length `n`.
fn sorted_tuples(n: usize, max: i64) -> Vec<Vec<i64>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for t in sorted_tuples(n - 1, max) {
        let lo = t.last().copied().unwrap_or(1);
        for m in lo..=max {
            let mut u = t.clone();
            u.push(m);
            out.push(u);
        }
    }
    out
}

fn ambient(labels: &[i64]) -> i64 {
    labels.iter().map(|m| m + 1).product()
}

type Verdict = Result<String, String>;

fn flatness() -> Verdict {
    let g = a(1);
    let tuples: Vec<Vec<i64>> = (2..=5)
        .flat_map(|n| sorted_tuples(n, 8))
        .filter(|t| ambient(t) <= 4096 && t.iter().sum::<i64>() % 2 == 0)
        .collect();
    let systems = tuples.len();
    tuples.par_iter().try_for_each(|labels| {
        let sys = tensor_of_weights(&g, &a1_weights(labels)).map_err(|e| e.to_string())?;
        let kz = kz_system(sys, C64::new(3.0, 0.0), Mode::Exact).map_err(|e| e.to_string())?;
        let r = kz.flatness_residual();
        if r.residual.is_zero() {
            Ok(())
        } else {
            Err(format!("A1 {labels:?}: residual {:?}", r.residual))
        }
    })?;
    let g2 = a(2);
    let ws = vec![Weight(vec![1, 0]), Weight(vec![0, 1]), Weight(vec![1, 1])];
    let sys = tensor_of_weights(&g2, &ws).map_err(|e| e.to_string())?;
    let kz = kz_system(sys, C64::new(4.0, 0.0), Mode::Exact).map_err(|e| e.to_string())?;
    if kz.dim() == 0 || !kz.flatness_residual().residual.is_zero() {
        return Err("A2 (w1, w2, w1+w2) not flat or trivial".into());
    }
    Ok(format!("{systems} A1 systems and A2 (w1, w2, w1+w2), residual 0"))
}

fn max_from_identity(m: &ComplexMatrix) -> f64 {
    (m - &ComplexMatrix::identity(m.rows())).max_norm()
}

fn contractible_loop() -> Verdict {
    let sys = tensor_of_weights(&a(1), &a1_weights(&[1, 1, 1, 1])).unwrap();
    let kz = kz_system(sys, C64::new(3.0, 0.0), Mode::Float).unwrap();
    let base = default_basepoint(4);
    let corner = |dz: C64| {
        let mut z = base.clone();
        z[0] += dz;
        z
    };
    let corners = [
        corner(C64::new(0.0, 0.0)),
        corner(C64::new(0.0, 0.6)),
        corner(C64::new(-1.5, 0.6)),
        corner(C64::new(-1.5, 0.0)),
    ];
    let path = ConfigPath::polygon(&corners).map_err(|e| e.to_string())?;
    let hol = parallel_transport(&kz, &path, 1e-8).map_err(|e| e.to_string())?;
    let dev = max_from_identity(&hol.matrix);
    if dev < 1e-7 {
        Ok(format!("|M - I|_max = {dev:.2e}"))
    } else {
        Err(format!("|M - I|_max = {dev:.2e}"))
    }
}

/// Greedy nearest match; the largest matched distance.
fn spectrum_distance(expected: &[C64], computed: &[C64]) -> f64 {
    assert_eq!(expected.len(), computed.len());
    let mut pool = computed.to_vec();
    let mut worst: f64 = 0.0;
    for e in expected {
        let (k, d) = pool
            .iter()
            .enumerate()
            .map(|(k, c)| (k, (c - e).norm()))
            .fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
        worst = worst.max(d);
        pool.remove(k);
    }
    worst
}

fn monodromy_spectra() -> Verdict {
    let g = a(1);
    let mut cases = 0;
    let mut worst: f64 = 0.0;
    let mut tuples = Vec::new();
    for x in 1..=2 {
        for y in 1..=2 {
            tuples.push(vec![x, y]);
            for z in 1..=2 {
                tuples.push(vec![x, y, z]);
            }
        }
    }
    for labels in tuples {
        let sys = tensor_of_weights(&g, &a1_weights(&labels)).unwrap();
        let dim = sys.invariant_dimension() as usize;
        if dim == 0 {
            continue;
        }
        for kappa in [3.0, 4.0, 3.5] {
            let kz = kz_system(sys.clone(), C64::new(kappa, 0.0), Mode::Exact).unwrap();
            let n = labels.len();
            for i in 0..n {
                for j in i + 1..n {
                    // sl_2 invariants of V_i x V_j x V_k sit in the V_k-isotypic part of V_i x V_j
                    let nu = if n == 2 { Rational::zero() } else { sl2_casimir(labels[3 - i - j]) };
                    let mu = (nu - sl2_casimir(labels[i]) - sl2_casimir(labels[j])) / rat(2, 1);
                    let mu = kzm_core::numerics::rational_to_f64(&mu);
                    let expected = vec![(C64::new(0.0, 2.0 * PI * mu / kappa)).exp(); dim];
                    let hol = braid_monodromy(&kz, i, j, &default_basepoint(n), 1e-10).map_err(|e| e.to_string())?;
                    let computed = eigenvalues_general(&hol.matrix).map_err(|e| e.to_string())?;
                    let d = spectrum_distance(&expected, &computed);
                    worst = worst.max(d);
                    if d >= 1e-6 {
                        return Err(format!("{labels:?}, kappa {kappa}, A{}{}: deviation {d:.2e}", i + 1, j + 1));
                    }
                    cases += 1;
                }
            }
        }
    }
    Ok(format!("{cases} generator spectra, max deviation {worst:.2e}"))
}

fn sugawara() -> Verdict {
    let mut checked = 0;
    for level in 1..=2 {
        for m in 0..=level {
            let module = truncated_module(level, m, 4).map_err(|e| e.to_string())?;
            if module.central_charge() != rat(3 * level, level + 2) {
                return Err(format!("level {level}: central charge {}", module.central_charge()));
            }
            let report = full_check(&module, 4).map_err(|e| e.to_string())?;
            if !report.passed() {
                return Err(format!("level {level}, weight {m}: {report:?}"));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} modules at depth 4, all residuals 0"))
}

/// `sum_k kappa(X_k, X_{m-k})` with the sl_2 form written out in (e, f, h) coordinates.
fn sl2_pairing_sum(phi: &LaurentGVector, m: i64) -> Rational {
    let form = |x: &[Rational], y: &[Rational]| {
        &x[0] * &y[1] + &x[1] * &y[0] + rat(2, 1) * &x[2] * &y[2]
    };
    let mut acc = Rational::zero();
    for (k, x) in &phi.support {
        if let Some(y) = phi.support.get(&(m - k)) {
            acc += form(x, y);
        }
    }
    acc
}

fn symbols() -> Verdict {
    let g = a(1);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let bases = [
        ResidueBasis::Symbolic(g.orthonormal_basis_symbolic(0).unwrap()),
        ResidueBasis::Symbolic(g.orthonormal_basis_symbolic(1).unwrap()),
    ];
    let float_basis = ResidueBasis::Float(g.orthonormal_basis_float(&[0]).unwrap());
    for trial in 0..100 {
        let mut entries = Vec::new();
        for k in -4..=4 {
            if rng.gen_bool(0.5) {
                let v: Vec<Rational> = (0..3).map(|_| rat(rng.gen_range(-6..=6), rng.gen_range(1..=5))).collect();
                entries.push((k, v));
            }
        }
        let phi = LaurentGVector::from_entries(&g, entries).unwrap();
        let m = rng.gen_range(-3..=3);
        let level = rng.gen_range(1..=3);
        let sum = sl2_pairing_sum(&phi, m);
        let expected = &sum / rat(2 * (level + 2), 1);
        for b in &bases {
            let got = residue_side(&phi, m, level, b).map_err(|e| e.to_string())?;
            if got.as_rational() != Some(expected.clone()) || !matches!(got, ResidueValue::Exact(_)) {
                return Err(format!("trial {trial}: residue side {got:?}, closed form {expected}"));
            }
        }
        let f = residue_side(&phi, m, level, &float_basis).map_err(|e| e.to_string())?;
        let scale = 1.0 + kzm_core::numerics::rational_to_f64(&expected).abs();
        if f.deviation_from(&expected) > 1e-12 * scale {
            return Err(format!("trial {trial}: float residue off by {:.2e}", f.deviation_from(&expected)));
        }
        if cocycle_evaluation(&phi, m) != sum {
            return Err(format!("trial {trial}: cocycle evaluation differs"));
        }
    }
    Ok("100 trials exact in two symbolic bases, float within 1e-12".into())
}

/// Independent S-matrix sum for sl_2 at level `l`.
fn s_matrix_rank(level: i64, labels: &[i64]) -> f64 {
    let k = (level + 2) as f64;
    let s = |x: i64, y: i64| (2.0 / k).sqrt() * (PI * ((x + 1) * (y + 1)) as f64 / k).sin();
    (0..=level)
        .map(|x| {
            let mut term = s(0, x).powi(2 - labels.len() as i32);
            for &w in labels {
                term *= s(w, x);
            }
            term
        })
        .sum()
}

/// `dim Inv` by counting weight 0 minus weight 2 states of the tensor product.
fn sl2_invariants_by_weights(labels: &[i64]) -> u128 {
    let mut counts = std::collections::HashMap::from([(0i64, 1u128)]);
    for &m in labels {
        let mut next = std::collections::HashMap::new();
        for (w, c) in counts {
            for j in 0..=m {
                *next.entry(w + m - 2 * j).or_insert(0) += c;
            }
        }
        counts = next;
    }
    counts.get(&0).copied().unwrap_or(0) - counts.get(&2).copied().unwrap_or(0)
}

fn verlinde() -> Verdict {
    let mut tuples = 0;
    let mut worst: f64 = 0.0;
    for level in 1..=8i64 {
        let ring = fusion_ring(level).map_err(|e| e.to_string())?;
        let top = level.min(4);
        for n in 0..=6 {
            let mut all = vec![vec![]];
            for _ in 0..n {
                all = all
                    .into_iter()
                    .flat_map(|t: Vec<i64>| {
                        let lo = t.last().copied().unwrap_or(0);
                        (lo..=top).map(move |m| {
                            let mut u = t.clone();
                            u.push(m);
                            u
                        })
                    })
                    .collect();
            }
            for labels in all {
                let rank = ring.rank(&labels, 0).map_err(|e| e.to_string())?;
                let s = s_matrix_rank(level, &labels);
                let dev = (s - rank as f64).abs();
                worst = worst.max(dev);
                if dev >= 1e-9 {
                    return Err(format!("level {level} {labels:?}: rank {rank}, S-sum {s}"));
                }
                let dim = sl2_invariants_by_weights(&labels);
                let cmp = compare_invariants(level, &labels, 32).map_err(|e| e.to_string())?;
                if rank > dim || cmp.dim_invariants != dim {
                    return Err(format!("level {level} {labels:?}: rank {rank}, dim A {dim}"));
                }
                let Some(stable) = cmp.stabilization_level else {
                    return Err(format!("level {level} {labels:?}: no stabilization"));
                };
                if fusion_ring(stable).unwrap().rank(&labels, 0).unwrap() != dim {
                    return Err(format!("level {level} {labels:?}: stabilization level {stable} is wrong"));
                }
                tuples += 1;
            }
        }
    }
    Ok(format!("{tuples} tuples, max S-sum deviation {worst:.1e}"))
}

/// Rank of a dense rational matrix by plain Gaussian elimination.
fn rank_of(mut rows: Vec<Vec<Rational>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = Rational::one() / &rows[rank][c];
        let pivot: Vec<Rational> = rows[rank].iter().map(|x| x * &inv).collect();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        rows[rank] = pivot;
        rank += 1;
    }
    rank
}

/// Invariants of `(C^2)^{2m}` as the kernel of the raising operator on weight-0 bitstrings.
fn brute_force_catalan(m: usize) -> usize {
    let n = 2 * m;
    let zero: Vec<u32> = (0u32..1 << n).filter(|b| b.count_ones() as usize == m).collect();
    let two: Vec<u32> = (0u32..1 << n).filter(|b| b.count_ones() as usize == m - 1).collect();
    let pos = |b: u32| two.iter().position(|&t| t == b).unwrap();
    // bit set = lowered vector; e clears one bit at a time
    let mut rows = vec![vec![Rational::zero(); zero.len()]; two.len()];
    for (col, &b) in zero.iter().enumerate() {
        for k in 0..n {
            if b & (1 << k) != 0 {
                rows[pos(b & !(1 << k))][col] += Rational::one();
            }
        }
    }
    zero.len() - rank_of(rows)
}

fn representations() -> Verdict {
    let g1 = a(1);
    for m in 0..=8 {
        let rep = irrep(&g1, &Weight(vec![m])).unwrap();
        let want = kzm_core::numerics::RationalMatrix::identity(rep.dim).scale(&sl2_casimir(m));
        if rep.casimir_matrix() != want {
            return Err(format!("A1 m={m}: Casimir is not {}", sl2_casimir(m)));
        }
    }
    let g2 = a(2);
    let mut a2 = 0;
    for x in 0..=4i64 {
        for y in 0..=4i64 {
            if (x + 1) * (y + 1) * (x + y + 2) / 2 > 15 {
                continue;
            }
            let rep = irrep(&g2, &Weight(vec![x, y])).unwrap();
            let c = rat(2 * (x * x + y * y + x * y + 3 * x + 3 * y), 3);
            let want = kzm_core::numerics::RationalMatrix::identity(rep.dim).scale(&c);
            if rep.casimir_matrix() != want {
                return Err(format!("A2 ({x},{y}): Casimir is not {c}"));
            }
            a2 += 1;
        }
    }
    let catalan = [1usize, 1, 2, 5, 14, 42];
    for m in 1..=5 {
        let sys = tensor_of_weights(&g1, &a1_weights(&vec![1; 2 * m])).unwrap();
        let lib = sys.invariant_basis().dim();
        let brute = brute_force_catalan(m);
        if lib != catalan[m] || brute != catalan[m] {
            return Err(format!("m={m}: library {lib}, brute force {brute}, Catalan {}", catalan[m]));
        }
    }
    Ok(format!("A1 m <= 8, {a2} A2 weights, Catalan m <= 5"))
}

fn determinism() -> Verdict {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_kzm"))
            .args(["selftest", "--seed", "7"])
            .output()
            .map_err(|e| e.to_string())
    };
    let first = run()?;
    let second = run()?;
    if !first.status.success() {
        return Err(format!("selftest exited with {}", first.status));
    }
    if first.stdout != second.stdout {
        return Err("outputs differ".into());
    }
    Ok(format!("{} identical bytes", first.stdout.len()))
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Verdict); 8] = [
        ("exact flatness", Duration::from_secs(60), flatness),
        ("contractible loop holonomy", Duration::from_secs(10), contractible_loop),
        ("local monodromy spectrum", Duration::from_secs(30), monodromy_spectra),
        ("Sugawara and Virasoro identities", Duration::from_secs(120), sugawara),
        ("residue symbol identity", Duration::from_secs(5), symbols),
        ("fusion ranks", Duration::from_secs(30), verlinde),
        ("representation layer", Duration::from_secs(60), representations),
        ("selftest determinism", Duration::from_secs(60), determinism),
    ];
    let mut failures = 0;
    for (k, (name, limit, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = f();
        let elapsed = start.elapsed();
        let (ok, detail) = match verdict {
            Ok(d) if elapsed <= *limit => (true, d),
            Ok(d) => (false, format!("{d}; over the {:.0} s limit", limit.as_secs_f64())),
            Err(d) => (false, d),
        };
        failures += usize::from(!ok);
        println!(
            "criterion {} {:<34} {} ({:.2} s) {}",
            k + 1,
            name,
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            detail
        );
    }
    if failures > 0 {
        std::process::exit(1);
    }
}
