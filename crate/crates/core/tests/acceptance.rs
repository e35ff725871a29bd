//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits nonzero if any failed.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use realab::classify::classify_corpus;
use realab::components::{cohomology_invariant_factors, pi0_via_cohomology, pi0_via_glue};
use realab::io::{emit_lattice, gen_random, random_lattice, random_unimodular, LatticeDocument};
use realab::isogeny::{decide_imaginary_isogeny, verify_imaginary_isogeny, verify_no_isogeny, Decision, NoIsogeny};
use realab::kernel::{ExactMatrix, ExactScalar, Field};
use realab::lattice::{embed, split, verify_isomorphism, RealLattice};
use realab::polarization::{
    bidual_witness, construct_default, decide_polarizable, descent_compatible, dual_lattice, h_to_s,
    phi_h_lands_in_dual, s_to_h, symmetrize, verify_no_certificate, verify_polarization, HermitianForm,
    PolarizabilityCertificate, PolarizationForm, SearchBudget,
};

const FIELDS: [Field; 4] = [Field::Rational, Field::Quadratic(2), Field::Quadratic(3), Field::Quadratic(5)];

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn sqrt2() -> ExactScalar {
    ExactScalar::sqrt_of(Field::Quadratic(2)).unwrap()
}

fn ratio(p: i64, q: i64) -> ExactScalar {
    ExactScalar::from_ratio(p, q)
}

fn random_rational(rng: &mut impl Rng) -> BigRational {
    BigRational::new(rng.gen_range(-5i64..=5).into(), rng.gen_range(1i64..=3).into())
}

fn random_scalar(field: Field, rng: &mut impl Rng) -> ExactScalar {
    let a = random_rational(rng);
    let b = if field == Field::Rational { BigRational::from_integer(0.into()) } else { random_rational(rng) };
    ExactScalar::new(field, a, b).unwrap()
}

/// `A·Aᵀ + I` for a random `A`, always positive definite.
fn random_pd(field: Field, g: usize, rng: &mut impl Rng) -> ExactMatrix {
    let entries: Vec<ExactScalar> = (0..g * g).map(|_| random_scalar(field, rng)).collect();
    let a = ExactMatrix::new(field, g, g, entries).unwrap();
    &(&a * &a.transpose()) + &ExactMatrix::identity(field, g)
}

// 1. one-dimensional table
fn criterion_1() -> Outcome {
    let mut checked = 0;
    for field in FIELDS {
        for alpha in [ratio(1, 1), ratio(3, 2), ratio(7, 5)]
            .into_iter()
            .chain(ExactScalar::sqrt_of(field).map(|s| &s * &ratio(2, 3)))
        {
            let rect = RealLattice::rectangular(&alpha, field).unwrap();
            let diamond = RealLattice::diamond(&alpha, field).unwrap();
            ensure!(pi0_via_glue(&rect).unwrap().order() == BigInt::from(2), "rectangular {alpha} not 2 components");
            ensure!(pi0_via_glue(&diamond).unwrap().is_connected(), "diamond {alpha} not connected");
            ensure!(pi0_via_cohomology(&rect).unwrap().order() == BigInt::from(2), "rectangular {alpha} (cohomology)");
            ensure!(pi0_via_cohomology(&diamond).unwrap().is_connected(), "diamond {alpha} (cohomology)");
            checked += 2;
        }
    }
    Ok(format!("{checked} normal forms: diamond 1 component, rectangular 2"))
}

// 2. two component-group computations agree
fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let per_g = 1000;
    let mut trivial = 0;
    for g in 1..=5 {
        for i in 0..per_g {
            let l = random_lattice(g, FIELDS[i % FIELDS.len()], &mut rng);
            let glue = pi0_via_glue(&l).unwrap();
            let cohomology = pi0_via_cohomology(&l).map_err(|e| format!("g={g}: {e}"))?;
            ensure!(glue == cohomology, "g={g}: glue rank {} vs cohomology rank {}", glue.f2_rank, cohomology.f2_rank);
            let factors = cohomology_invariant_factors(&l).unwrap();
            ensure!(
                factors.iter().all(|f| *f == BigInt::from(1) || *f == BigInt::from(2)),
                "g={g}: invariant factors {factors:?}"
            );
            ensure!(glue.f2_rank <= g, "g={g}: rank {} exceeds g", glue.f2_rank);
            if l.glue().is_trivial() {
                trivial += 1;
                ensure!(glue.f2_rank == g, "g={g}: trivial glue but rank {}", glue.f2_rank);
            }
        }
    }
    Ok(format!("{} lattices (g = 1..5, {trivial} with trivial glue)", 5 * per_g))
}

// 3. rectangular corpus over Q(√2) splits into the two rational-ratio classes
fn criterion_3() -> Outcome {
    let field = Field::Quadratic(2);
    let qs = [(1, 1), (2, 1), (3, 1), (5, 1), (7, 1), (1, 2), (1, 3), (2, 3), (3, 4), (5, 2)];
    let one_plus = &ExactScalar::one() + &sqrt2();
    let mut corpus = Vec::new();
    for base in [sqrt2(), one_plus] {
        for (p, q) in qs {
            corpus.push(RealLattice::rectangular(&(&base * &ratio(p, q)), field).unwrap());
        }
    }
    let c = classify_corpus(&corpus, 10_000).map_err(|e| e.to_string())?;
    let expected: Vec<Vec<usize>> = vec![(0..10).collect(), (10..20).collect()];
    ensure!(c.classes == expected, "classes {:?}", c.classes);
    ensure!(c.unknown_pairs().next().is_none(), "unknown verdicts at g = 1");
    let (mut yes, mut no) = (0, 0);
    for d in &c.decisions {
        let (a, b) = (&corpus[d.left], &corpus[d.right]);
        match &d.decision {
            Decision::Yes(u) => {
                ensure!(u.is_unimodular(), "witness for {}/{} not unimodular", d.left, d.right);
                ensure!(verify_imaginary_isogeny(a, b, u).unwrap(), "witness {}/{} fails", d.left, d.right);
                yes += 1;
            }
            Decision::No(reason) => {
                ensure!(
                    matches!(reason, NoIsogeny::IrrationalRatio(_) | NoIsogeny::TrivialSolutionSpace),
                    "unexpected certificate {reason:?}"
                );
                ensure!(verify_no_isogeny(a, b, reason).unwrap(), "certificate {}/{} fails", d.left, d.right);
                no += 1;
            }
            Decision::Unknown { .. } => return Err("unknown verdict".into()),
        }
    }
    Ok(format!("2 classes of 10; {yes} verified Yes, {no} verified No"))
}

// 4. rectangular and diamond forms with the same α are isogenous
fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for i in 0..10 {
        let field = [Field::Quadratic(2), Field::Quadratic(3), Field::Quadratic(5), Field::Quadratic(7)][i % 4];
        let alpha = loop {
            let a = random_scalar(field, &mut rng);
            if !a.is_zero() {
                break a.abs();
            }
        };
        let rect = RealLattice::rectangular(&alpha, field).unwrap();
        let diamond = RealLattice::diamond(&alpha, field).unwrap();
        match decide_imaginary_isogeny(&rect, &diamond, 10_000).unwrap() {
            Decision::Yes(u) => {
                ensure!(verify_imaginary_isogeny(&rect, &diamond, &u).unwrap(), "witness fails for alpha = {alpha}")
            }
            other => return Err(format!("alpha = {alpha}: {other:?}")),
        }
    }
    Ok("10 random alpha, all Yes with verified witness".into())
}

// 5. polarization suite
fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut verified: Vec<(RealLattice, ExactMatrix)> = Vec::new();

    // (a)
    for i in 0..100 {
        let l = random_lattice(1 + i % 4, Field::Rational, &mut rng);
        let s = construct_default(&l).unwrap().ok_or("construct_default declined a rational lattice")?;
        ensure!(verify_polarization(&l, s.matrix()).unwrap(), "(a) default witness fails");
        verified.push((l, s.matrix().clone()));
    }

    // (b)
    let field = Field::Quadratic(2);
    let one = ExactScalar::one;
    let skew = RealLattice::new(
        field,
        ExactMatrix::from_rows(field, vec![vec![one(), sqrt2()], vec![ExactScalar::zero(), one()]]).unwrap(),
        realab::lattice::GlueGroup::trivial(2),
    )
    .unwrap();
    match decide_polarizable(&skew, &SearchBudget::default()).unwrap() {
        PolarizabilityCertificate::No(q) => {
            ensure!(q == ExactMatrix::one_hot(field, 2, 2, (0, 0)), "(b) certificate {q}");
            ensure!(verify_no_certificate(&skew, &q).unwrap(), "(b) certificate does not re-verify");
        }
        other => return Err(format!("(b) expected No, got {other:?}")),
    }

    let mut found = 0;
    for i in 0..30 {
        let l = random_lattice(1 + i % 2, FIELDS[1 + i % 3], &mut rng);
        if let PolarizabilityCertificate::Yes(s) = decide_polarizable(&l, &SearchBudget::default()).unwrap() {
            ensure!(verify_polarization(&l, s.matrix()).unwrap(), "search witness fails");
            verified.push((l, s.matrix().clone()));
            found += 1;
        }
    }

    // (c)
    for (l, s) in &verified {
        let h = s_to_h(l, &PolarizationForm::new(s.clone()).unwrap()).unwrap();
        let dual = dual_lattice(l).unwrap();
        ensure!(phi_h_lands_in_dual(l, &h, &dual).unwrap(), "(c) phi_H(Lambda) not in dual");
        ensure!(descent_compatible(l, &h).unwrap(), "(c) not descent compatible");
    }

    // (d)
    for i in 0..100 {
        let g = 1 + i % 4;
        let field = FIELDS[i % FIELDS.len()];
        let l = random_lattice(g, field, &mut rng);
        let s = PolarizationForm::new(random_pd(field, g, &mut rng)).unwrap();
        let back = h_to_s(&l, &s_to_h(&l, &s).unwrap()).unwrap();
        ensure!(back == s, "(d) roundtrip changed {}", s.matrix());
    }

    // (e) integral H = N·(S + √−1·Q) with a small antisymmetric Q; needs rational
    // values of E, so only rational periods
    let mut symmetrized = 0;
    for (l, s) in verified.iter().filter(|(l, _)| l.g() >= 2 && l.has_rational_period()).cycle().take(100) {
        let g = l.g();
        let f = l.field();
        let mut q = ExactMatrix::zeros(f, g, g);
        for i in 0..g {
            for j in i + 1..g {
                let v = ratio(rng.gen_range(-3..=3), 50);
                q = &q + &(&ExactMatrix::one_hot(f, g, g, (i, j)) - &ExactMatrix::one_hot(f, g, g, (j, i))).scale(&v);
            }
        }
        let Ok(h) = HermitianForm::new(s.clone(), q.clone()) else { continue };
        if !h.is_positive_definite() {
            continue;
        }
        let n = BigRational::from_integer(h.values_on(l).unwrap().common_denominator());
        let h = HermitianForm::new(s.scale_rational(&n), q.scale_rational(&n)).unwrap();
        let out = symmetrize(l, &h).map_err(|e| format!("(e) {e}"))?;
        ensure!(out.is_theta_compatible(), "(e) symmetrized form not theta-compatible");
        symmetrized += 1;
    }
    ensure!(symmetrized >= 50, "(e) only {symmetrized} forms exercised");

    Ok(format!(
        "(a) 100 defaults, (b) No with Q = e11, (c) {} forms ({found} found by search), (d) 100 roundtrips, (e) {symmetrized} symmetrized",
        verified.len()
    ))
}

// 6. split ∘ embed and random basis changes
fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for i in 0..500 {
        let g = 1 + i % 4;
        let l = random_lattice(g, FIELDS[i % FIELDS.len()], &mut rng);
        let d = embed(&l);
        let (back, _) = split(&d).map_err(|e| format!("split(embed) failed: {e}"))?;
        ensure!(back == l, "split(embed(L)) != L for\n{}", emit_lattice(&LatticeDocument::new("l", l)));
        let w = random_unimodular(2 * g, 6, &mut rng);
        let rebased = d.rebased(&w).map_err(|e| format!("rebase rejected: {e}"))?;
        let (again, _) = split(&rebased).map_err(|e| format!("split after basis change failed: {e}"))?;
        ensure!(again.g() == g, "rank changed");
        ensure!(again == l, "basis change altered the split form");
    }
    Ok("500 roundtrips (g <= 4), 500 rebased splits".into())
}

// 7a. biduality
fn criterion_7a() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..100 {
        let l = random_lattice(1 + i % 3, FIELDS[i % FIELDS.len()], &mut rng);
        let (bidual, u) = bidual_witness(&l).unwrap().ok_or("evaluation map is not an isomorphism")?;
        ensure!(verify_isomorphism(&l, &bidual, &u).unwrap(), "witness does not verify");
    }
    Ok("100 lattices (g <= 3), bidual isomorphic with verified witness".into())
}

// 7b. dual of a rectangular lattice
fn criterion_7b() -> Outcome {
    let field = Field::Quadratic(2);
    for alpha in [sqrt2(), &ExactScalar::one() + &sqrt2(), ratio(2, 1)] {
        let dual = dual_lattice(&RealLattice::rectangular(&alpha, field).unwrap()).unwrap().lattice;
        let expected = RealLattice::rectangular(&alpha.inverse().unwrap(), field).unwrap();
        ensure!(
            dual == expected,
            "alpha = {alpha}: dual has F = {}, expected F = {}",
            dual.period(),
            expected.period()
        );
    }
    Ok("dual of rectangular(alpha) is rectangular(1/alpha)".into())
}

// 8. determinism
fn criterion_8() -> Outcome {
    let texts = |seed| -> Vec<String> {
        FIELDS.iter().flat_map(|&f| gen_random(3, f, seed, 5).unwrap()).map(|d| emit_lattice(&d)).collect()
    };
    ensure!(texts(8) == texts(8), "gen_random differs between runs");

    let lattices: Vec<RealLattice> = gen_random(3, Field::Quadratic(2), 8, 4).unwrap().into_iter().map(|d| d.lattice).collect();
    let budget = SearchBudget { iterations: 300, restarts: 2, seed: 8 };
    for l in &lattices {
        let a = decide_polarizable(l, &budget).unwrap();
        let b = decide_polarizable(l, &budget).unwrap();
        ensure!(a == b, "polarization search differs between runs");
    }
    let a = classify_corpus(&lattices, 500).unwrap();
    let b = classify_corpus(&lattices, 500).unwrap();
    ensure!(a.classes == b.classes && a.decisions == b.decisions, "classification differs between runs");

    let dir = std::env::temp_dir().join(format!("realab-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("corpus.lat");
    let corpus: Vec<String> = gen_random(2, Field::Quadratic(3), 9, 4)
        .unwrap()
        .iter()
        .map(emit_lattice)
        .collect();
    std::fs::write(&file, corpus.join("\n")).unwrap();
    let file = file.to_str().unwrap();
    let commands: Vec<Vec<&str>> = vec![
        vec!["gen-random", "--g", "4", "--field", "Q(sqrt 7)", "--count", "3"],
        vec!["validate", file],
        vec!["components", file],
        vec!["embed", file],
        vec!["dual", file],
        vec!["polarize", "find", file],
        vec!["classify-corpus", file],
    ];
    let mut runs = 0;
    for cmd in &commands {
        let mut args = vec!["--seed", "8", "--budget", "400"];
        args.extend(cmd.iter().copied());
        let run = || Command::new(env!("CARGO_BIN_EXE_realab")).args(&args).output().unwrap();
        let (x, y) = (run(), run());
        ensure!(x.stdout == y.stdout && x.status.code() == y.status.code(), "`{}` output differs", cmd.join(" "));
        runs += 1;
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok(format!("library calls and {runs} CLI commands byte-identical across runs"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("1", criterion_1),
        ("2", criterion_2),
        ("3", criterion_3),
        ("4", criterion_4),
        ("5", criterion_5),
        ("6", criterion_6),
        ("7a", criterion_7a),
        ("7b", criterion_7b),
        ("8", criterion_8),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| f == name) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("criterion {name}: PASS ({secs:.1}s) {msg}"),
            Err(msg) => {
                failed += 1;
                println!("criterion {name}: FAIL ({secs:.1}s) {msg}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
