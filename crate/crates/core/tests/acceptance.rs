//! Acceptance criteria. Runs without the libtest harness so every criterion
//! prints exactly one PASS/FAIL line; the process fails if any criterion does.

use std::panic::{self, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_traits::{One, Signed, Zero};
use rand::Rng;

use opclass::classes::{self, rr_block};
use opclass::extensions::{self, minimal_extension, positivity_forms, povm_moment_check};
use opclass::linalg::{self, c, norm_inf, ComplexMatrix, ComplexVector, DEFAULT_TOL};
use opclass::rational::{int, pow, ratio, ExactRational};
use opclass::registry;
use opclass::sample;
use opclass::shift::{self, Tail, WeightSequence};
use opclass::toeplitz::{self, MatrixSymbol, ToeplitzClass};

type Check = std::result::Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

/// Determinant by cofactor expansion along the first row.
fn det(m: &[Vec<ExactRational>]) -> ExactRational {
    let n = m.len();
    if n == 0 {
        return ExactRational::one();
    }
    let mut total = ExactRational::zero();
    for col in 0..n {
        let minor: Vec<Vec<ExactRational>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != col)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let term = &m[0][col] * det(&minor);
        if col % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn constant_tail(prefix: &[ExactRational]) -> WeightSequence {
    WeightSequence::with_constant_tail(prefix.to_vec(), int(1)).unwrap()
}

fn tail_constant(w: &WeightSequence) -> Option<ExactRational> {
    match w.canonical().tail() {
        Tail::Constant(c) => Some(c.clone()),
        Tail::Periodic(_) => None,
    }
}

fn criterion_1() -> Check {
    let (r, s) = (ratio(4, 5), ratio(9, 10));
    let out =
        shift::derive_quasinormal_continuation(2, &[int(1), r.clone(), s.clone()], 5).map_err(|e| e.to_string())?;
    let expected = [&r / &s, pow(&s, 2), &r / pow(&s, 2), pow(&s, 3), &r / pow(&s, 3)];
    ensure!(out[3..] == expected, "got {:?}", &out[3..]);
    ensure!(
        out[5] == ratio(80, 81) && out[7] == ratio(800, 729),
        "numeric values differ"
    );
    Ok(())
}

fn criterion_2() -> Check {
    let mut rng = sample::rng(2);
    for trial in 0..20 {
        let seed: Vec<ExactRational> = if trial == 0 {
            vec![int(1), ratio(4, 5), ratio(9, 10), ratio(7, 10), ratio(3, 5)]
        } else {
            std::iter::once(int(1))
                .chain((0..4).map(|_| ratio(rng.gen_range(1..40), rng.gen_range(1..40))))
                .collect()
        };
        let (r, s, t, u) = (&seed[1], &seed[2], &seed[3], &seed[4]);
        let expected = [
            r * s / (t * u),
            pow(t, 2),
            pow(u, 2) / r,
            pow(r, 2) * s / (pow(t, 2) * pow(u, 2)),
            pow(t, 3),
            pow(u, 3) / pow(r, 2),
            pow(r, 3) * s / (pow(t, 3) * pow(u, 3)),
        ];
        let out = shift::derive_quasinormal_continuation(3, &seed, expected.len()).map_err(|e| e.to_string())?;
        ensure!(out[5..] == expected[..], "seed {seed:?}: got {:?}", &out[5..]);
    }
    Ok(())
}

/// Seeds of the form `2^a 3^b`, so both bounded and escaping continuations
/// occur, plus seeds cut from an exactly periodic sequence with period `p | n`.
fn periodicity_seed<R: Rng>(rng: &mut R, n: usize) -> Vec<ExactRational> {
    let atom = |rng: &mut R| {
        let (a, b) = (rng.gen_range(-2i32..=2), rng.gen_range(-1i32..=1));
        let two = if a >= 0 { int(1 << a) } else { ratio(1, 1 << -a) };
        let three = if b >= 0 { int(3i64.pow(b as u32)) } else { ratio(1, 3) };
        two * three
    };
    if rng.gen_bool(0.3) {
        let divisors: Vec<usize> = (1..=n).filter(|p| n.is_multiple_of(*p)).collect();
        let p = divisors[rng.gen_range(0..divisors.len())];
        let cycle: Vec<ExactRational> = (0..p).map(|_| atom(rng)).collect();
        (0..2 * n - 1).map(|j| cycle[j % p].clone()).collect()
    } else {
        (0..2 * n - 1).map(|_| atom(rng)).collect()
    }
}

fn criterion_3() -> Check {
    let mut rng = sample::rng(3);
    for n in 2..=4 {
        let mut bounded = 0;
        for _ in 0..500 {
            let seed = periodicity_seed(&mut rng, n);
            let probe = shift::boundedness_forces_periodicity_probe(n, &seed, 1e6, 500).map_err(|e| e.to_string())?;
            // In log coordinates the recurrence has characteristic polynomial
            // (1 + z + ... + z^{n-1})(1 - z^n): bounded exactly when the seed
            // already repeats with period n.
            let seed_periodic = (0..n - 1).all(|j| seed[j] == seed[j + n]);
            match (&probe.escaped_at, &probe.periodic_within) {
                (None, Some(fit)) => {
                    ensure!(fit.residual == 0.0 && fit.period <= n, "n={n} seed {seed:?}: {fit:?}");
                    ensure!(seed_periodic, "n={n} seed {seed:?} stayed bounded without repeating");
                    bounded += 1;
                }
                (Some(_), _) => ensure!(!seed_periodic, "n={n} periodic seed {seed:?} escaped"),
                (None, None) => return Err(format!("n={n}: no verdict for {seed:?}")),
            }
        }
        ensure!(bounded > 0, "n={n}: no bounded continuation was sampled");
    }
    Ok(())
}

fn criterion_4() -> Check {
    let prefix = [ratio(1, 2), ratio(3, 4)];
    let w = constant_tail(&prefix);
    ensure!(shift::is_hyponormal_shift(&w).holds, "weights are non-decreasing");
    ensure!(!shift::is_subnormal_shift(&w).holds, "claimed subnormal");
    let two = shift::is_n_subnormal_shift(&w, 2).map_err(|e| e.to_string())?;
    ensure!(two.holds, "2-subnormal failed: {:?}", two.components);
    let oracle = [
        constant_tail(&[&prefix[0] * &prefix[1]]),
        constant_tail(&[&prefix[1] * int(1)]),
    ];
    ensure!(
        oracle[0].prefix() == [ratio(3, 8)] && oracle[1].prefix() == [ratio(3, 4)],
        "oracle"
    );
    for (got, want) in two.decomposition.components.iter().zip(&oracle) {
        ensure!(got.same_weights(want), "component {got:?}");
    }
    let probe = shift::quadratic_hyponormality_probe(&w, &shift::default_s_grid(), 40, DEFAULT_TOL)
        .map_err(|e| e.to_string())?;
    ensure!(probe.refuted && probe.worst_min_eigenvalue < -1e-8, "probe: {probe:?}");
    Ok(())
}

fn criterion_5() -> Check {
    let (a, b, cc) = (ratio(1, 2), ratio(3, 5), ratio(7, 10));
    let w = constant_tail(&[a.clone(), b.clone(), cc.clone()]);
    let three = shift::is_n_subnormal_shift(&w, 3).map_err(|e| e.to_string())?;
    ensure!(three.holds, "3-subnormal failed");
    let expected = [&a * &b * &cc, &b * &cc, cc.clone()];
    for (got, x) in three.decomposition.components.iter().zip(&expected) {
        ensure!(
            got.same_weights(&constant_tail(std::slice::from_ref(x))),
            "component {got:?}"
        );
        ensure!(tail_constant(got) == Some(int(1)), "component tail");
    }

    ensure!(
        !shift::is_n_subnormal_shift(&w, 2).map_err(|e| e.to_string())?.holds,
        "2-subnormal held"
    );
    let bad = constant_tail(&[&a * &b, cc.clone()]);
    let first = &w.decompose_power(2).map_err(|e| e.to_string())?.components[0];
    ensure!(first.same_weights(&bad), "first component {first:?}");
    ensure!(!shift::is_subnormal_shift(&bad).holds, "component claimed subnormal");
    let k2 = shift::is_k_hyponormal_shift(&bad, 2, None).map_err(|e| e.to_string())?;
    ensure!(!k2.holds && k2.failing_m == Some(0), "k=2 Hankel verdict {k2:?}");

    let x = pow(&(&a * &b), 2);
    let y = &x * pow(&cc, 2);
    let gamma = [int(1), x.clone(), y.clone(), y.clone(), y.clone()];
    let hankel: Vec<Vec<ExactRational>> = (0..3).map(|i| (0..3).map(|j| gamma[i + j].clone()).collect()).collect();
    ensure!(
        hankel == shift::normalized_hankel(&bad, 2, 0),
        "Hankel matrix differs from the moments"
    );
    let d = det(&hankel);
    ensure!(d.is_negative(), "determinant {d} is not negative");
    ensure!(
        d == -(&y * pow(&(&x - &y), 2)),
        "determinant {d} differs from -y(x-y)^2"
    );
    Ok(())
}

fn self_commutator_oracle(t: &ComplexMatrix) -> ComplexMatrix {
    t.adjoint() * t - t * t.adjoint()
}

fn criterion_6() -> Check {
    let m = linalg::real_matrix(&[&[1.0, 2.0], &[0.0, -1.0]]);
    ensure!(norm_inf(&(&m * &m - linalg::identity(2))) < 1e-15, "M^2 != I");
    ensure!(
        classes::is_n_normal(&m, 2, DEFAULT_TOL).unwrap().verdict.holds,
        "M not 2-normal"
    );
    ensure!(!classes::is_normal(&m, DEFAULT_TOL).unwrap().holds, "M normal");

    let nil = linalg::real_matrix(&[&[0.0, 1.0], &[0.0, 0.0]]);
    for k in 1..=5 {
        let v = classes::bram_halmos_block_psd(&nil, 2, k, DEFAULT_TOL).unwrap();
        ensure!(v.holds, "Bram-Halmos block fails at k={k}");
    }
    let hypo = classes::is_hyponormal(&nil, DEFAULT_TOL).unwrap();
    ensure!(!hypo.holds, "nilpotent claimed hyponormal");
    let psd = linalg::is_psd(&self_commutator_oracle(&nil), DEFAULT_TOL).unwrap();
    let witness = ComplexVector::from_vec(psd.witness_vector.clone().ok_or("no witness")?);
    let value = (witness.adjoint() * self_commutator_oracle(&nil) * &witness)[(0, 0)].re;
    ensure!(value < -0.5, "witness value {value}");

    let p = linalg::real_diag(&[1.0, 0.0]);
    let mut t = linalg::zeros(4, 4);
    t.view_mut((0, 0), (2, 2)).copy_from(&linalg::identity(2));
    t.view_mut((0, 2), (2, 2)).copy_from(&p);
    t.view_mut((2, 2), (2, 2)).copy_from(&(-linalg::identity(2)));
    ensure!(norm_inf(&(&t * &t - linalg::identity(4))) < 1e-15, "block square != I");
    ensure!(
        classes::is_n_normal(&t, 2, DEFAULT_TOL).unwrap().verdict.holds,
        "block not 2-normal"
    );
    ensure!(
        !classes::is_hyponormal(&t, DEFAULT_TOL).unwrap().holds,
        "block hyponormal"
    );
    Ok(())
}

fn criterion_7() -> Check {
    let mut rng = sample::rng(7);
    let mut tested = 0;
    for i in 0..100 {
        let dim = 1 + i % 4;
        let a_dim = rng.gen_range(0..3);
        let mut form = sample::rr_form(&mut rng, dim, a_dim);
        if i % 10 == 9 {
            // Tiny C still passes the construction but sits under the cutoff.
            form.c_block *= c(1e-8, 0.0);
        }
        let z = match form.build(DEFAULT_TOL) {
            Ok(z) => z,
            Err(_) => rr_block(&form.b_block, &form.c_block),
        };
        let nn = classes::is_n_normal(&z, 2, DEFAULT_TOL).unwrap();
        ensure!(
            nn.verdict.holds && nn.verdict.residual <= 1e-9,
            "case {i}: residual {}",
            nn.verdict.residual
        );
        if norm_inf(&form.c_block) > 1e-6 {
            tested += 1;
            ensure!(
                !classes::is_hyponormal(&z, DEFAULT_TOL).unwrap().holds,
                "case {i}: hyponormal"
            );
            let off = z.nrows() - 2 * dim;
            let block = self_commutator_oracle(&z).view((off, off), (dim, dim)).into_owned();
            let defect = norm_inf(&(block + &form.c_block * form.c_block.adjoint()));
            ensure!(defect <= 1e-9, "case {i}: block defect {defect}");
        }
    }
    ensure!(tested >= 80, "only {tested} constructions had nonzero C");
    Ok(())
}

fn criterion_8() -> Check {
    let mut rng = sample::rng(8);
    let mut harness = Vec::new();
    for i in 0..100 {
        let spec = sample::rr_extension_spec(&mut rng, 1 + i % 3, i % 3);
        let ext = minimal_extension(&spec, DEFAULT_TOL).map_err(|e| e.to_string())?;
        let again = minimal_extension(&ext.to_spec(spec.n()).map_err(|e| e.to_string())?, DEFAULT_TOL)
            .map_err(|e| e.to_string())?;
        ensure!(again.dim() == ext.dim(), "case {i}: not idempotent");

        let povm = povm_moment_check(&spec, 4, 1e-9).map_err(|e| e.to_string())?;
        ensure!(povm.within_tolerance, "case {i}: POVM residuals {:?}", povm.residuals);

        let t = spec.restriction();
        let a = linalg::power(&t, spec.n());
        let cst = linalg::spectral_norm(&a).powi(2);
        for _ in 0..20 {
            let size = rng.gen_range(1..=4);
            let xs: Vec<ComplexVector> = (0..size)
                .map(|_| sample::vector(&mut rng, spec.subspace_dim()))
                .collect();
            let (shifted, base) = positivity_forms(&t, spec.n(), &xs);
            let scale = 1.0 + cst.powi(size as i32 + 1) * xs.iter().map(|x| x.norm_squared()).sum::<f64>();
            ensure!(
                shifted <= cst * base + 1e-9 * scale,
                "case {i}: {shifted} > {cst} * {base}"
            );
        }

        harness.push(
            extensions::subn_power_quasinormal_theorem_harness(&spec, 2, 3, DEFAULT_TOL).map_err(|e| e.to_string())?,
        );
    }
    let summary = extensions::harness_summary(&harness);
    ensure!(summary.flags == 0, "harness flags: {summary:?}");
    Ok(())
}

fn criterion_9() -> Check {
    let n = linalg::real_matrix(&[&[0.0, 1.0], &[0.0, 0.0]]);
    let symbols = [
        MatrixSymbol::constant(n.clone()).unwrap(),
        MatrixSymbol::monomial(1, n).unwrap(),
    ];
    for (i, symbol) in symbols.iter().enumerate() {
        let trunc = toeplitz::assemble(symbol, 16).map_err(|e| e.to_string())?;
        let square = &trunc.matrix * &trunc.matrix;
        ensure!(
            square.iter().all(|z| *z == c(0.0, 0.0)),
            "symbol {i}: T^2 not exactly 0"
        );
        let two = toeplitz::truncated_class_probe(&trunc, ToeplitzClass::NNormal { n: 2 }, DEFAULT_TOL).unwrap();
        ensure!(two.verdict.holds, "symbol {i}: not 2-normal");
        let hypo = toeplitz::truncated_class_probe(&trunc, ToeplitzClass::Hyponormal, DEFAULT_TOL).unwrap();
        ensure!(!hypo.verdict.holds, "symbol {i}: interior hyponormal");
        let normal = toeplitz::symbol_is_normal_ae(symbol, toeplitz::DEFAULT_GRID_POINTS, DEFAULT_TOL).unwrap();
        ensure!(!normal.normal, "symbol {i}: normal a.e.");
        ensure!(
            (normal.max_residual - 1.0).abs() < 1e-12,
            "symbol {i}: residual {}",
            normal.max_residual
        );
    }
    Ok(())
}

fn criterion_10() -> Check {
    let out = Command::new(env!("CARGO_BIN_EXE_opclass"))
        .args(["--json", "-", "registry", "run"])
        .output()
        .map_err(|e| e.to_string())?;
    ensure!(out.status.code() == Some(0), "exit status {:?}", out.status);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let verdicts = doc["verdicts"].as_array().ok_or("no verdicts")?;
    let names: Vec<&str> = verdicts.iter().filter_map(|v| v["name"].as_str()).collect();
    let builtin = registry::builtin_entries();
    ensure!(
        names.len() == builtin.len(),
        "{} of {} entries reported",
        names.len(),
        builtin.len()
    );
    for entry in &builtin {
        ensure!(names.contains(&entry.name.as_str()), "missing entry {}", entry.name);
    }
    ensure!(verdicts.iter().all(|v| v["holds"] == true), "an entry failed");
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [(&str, Duration, fn() -> Check); 10] = [
        ("quasinormal continuation, n = 2", Duration::from_secs(1), criterion_1),
        ("quasinormal continuation, n = 3", Duration::from_secs(1), criterion_2),
        (
            "bounded continuations are periodic",
            Duration::from_secs(60),
            criterion_3,
        ),
        ("shift (1/2, 3/4, 1, ...) dossier", Duration::from_secs(10), criterion_4),
        (
            "shift (1/2, 3/5, 7/10, 1, ...) dossier",
            Duration::from_secs(10),
            criterion_5,
        ),
        ("matrix examples", Duration::from_secs(3), criterion_6),
        ("square roots of normal operators", Duration::from_secs(30), criterion_7),
        ("minimal extension suite", Duration::from_secs(60), criterion_8),
        ("nilpotent Toeplitz symbols", Duration::from_secs(5), criterion_9),
        ("registry run", Duration::from_secs(180), criterion_10),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|e| Err(format!("panicked: {:?}", e.downcast_ref::<String>())));
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|_| {
            if elapsed <= *limit {
                Ok(())
            } else {
                Err(format!("took longer than {limit:?}"))
            }
        });
        match outcome {
            Ok(()) => println!("PASS {:>2} {name} ({:.3} s)", i + 1, elapsed.as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({:.3} s): {why}", i + 1, elapsed.as_secs_f64());
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
