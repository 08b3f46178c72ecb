//! Acceptance criteria. Runs without the libtest harness so every criterion
//! prints its own line; exits nonzero if any criterion fails.

use std::time::{Duration, Instant};

use hyperdet_core::arith::{BigRational, RationalFunction, Ring};
use hyperdet_core::asm::{count_formula, enumerate};
use hyperdet_core::dyson::{dyson_coefficient, dyson_prefactor};
use hyperdet_core::hyper::PhiConvention;
use hyperdet_core::symfun::{elementary_e, one_row_g, Macdonald, Partition};
use hyperdet_core::verify::{identity_grid, Status, VerificationReport, Verifier};
use hyperdet_core::Limits;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn all_pass(reports: &[VerificationReport]) -> Result<(), String> {
    match reports.iter().find(|r| r.status != Status::Pass) {
        None => Ok(()),
        Some(r) => Err(format!("{} {} failed: {}", r.identity, r.parameters, r.witness)),
    }
}

fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn asm_counts() -> Outcome {
    let expected = [1u32, 2, 7, 42, 429, 7436];
    for (n, &want) in (1..=6).zip(&expected) {
        let got = enumerate(n).map_err(|e| e.to_string())?.count();
        ensure(
            got == want as usize,
            format!("|Alt_{n}| enumerated {got}, expected {want}"),
        )?;
        ensure(count_formula(n) == want.into(), format!("product formula at n = {n}"))?;
    }
    Ok("1, 2, 7, 42, 429, 7436".into())
}

fn lambda_vandermonde(v: &Verifier) -> Outcome {
    let reports: Vec<_> = (1..=5).map(|n| v.lambda_vandermonde(n)).collect();
    all_pass(&reports)?;
    Ok("n = 1..5 symbolic equality".into())
}

fn det3_display(v: &Verifier) -> Outcome {
    let r = v.det3_display();
    ensure(
        r.status == Status::DiscrepancyDocumented,
        format!("status {:?}: {}", r.status, r.witness),
    )?;
    ensure(r.witness["permutation_terms_match"] == true, "permutation terms differ")?;
    ensure(
        r.witness["computed_coefficient"] == "λ^2 - λ",
        "non-permutation coefficient",
    )?;
    ensure(
        r.witness["vandermonde_x1x2x3_coefficient"] == "λ^2 - λ",
        "λ-Vandermonde witness",
    )?;
    Ok("six permutation terms verbatim; λ(λ-1) computed vs λ(1-λ) printed".into())
}

fn limit_to_cayley(v: &Verifier) -> Outcome {
    let mut count = 0;
    for n in 1..=3 {
        for m in 1..=2 {
            for c in PhiConvention::ALL {
                let r = v.limit_to_cayley(n, m, c);
                all_pass(std::slice::from_ref(&r))?;
                count += r.witness["trials_passed"].as_u64().unwrap_or(0);
            }
        }
    }
    ensure(count >= 20, "fewer than 20 trials")?;
    Ok(format!(
        "{count} random hypermatrices, n ≤ 3, 2m ∈ {{2,4}}, both conventions"
    ))
}

fn rectangular_grid(v: &Verifier) -> Outcome {
    let mut uniform = Vec::new();
    for c in PhiConvention::ALL {
        let failing: Vec<_> = identity_grid()
            .into_iter()
            .filter(|&(k, s, m)| v.rectangular_hyperdet_raw(k, s, m, c).status != Status::Pass)
            .collect();
        if failing.is_empty() {
            uniform.push(c);
        }
        println!("      {c}: {} failing grid points {failing:?}", failing.len());
    }
    ensure(
        uniform.len() == 1,
        format!("conventions passing everywhere: {uniform:?}"),
    )?;

    let q1 = one_row_g(1, 1);
    let one_plus_q: RationalFunction = "1 + q".parse().unwrap();
    let worked = q1.mul(&q1).sub(&one_row_g(2, 1)).scale(&one_plus_q);
    ensure(worked == elementary_e(2).scale(&one_plus_q), "e2 = h1^2 - h2 at t = q")?;
    Ok(format!(
        "{} grid points, winner `{}`",
        identity_grid().len(),
        uniform[0]
    ))
}

fn dyson_grid(engine: &Macdonald) -> Outcome {
    let limits = Limits::default();
    for (k, s, m) in identity_grid() {
        let lhs = dyson_coefficient(k, s, m, &limits).map_err(|e| e.to_string())?;
        let q = engine.q(&Partition::rectangle(k, s), m).map_err(|e| e.to_string())?;
        ensure(lhs == q.scale(&dyson_prefactor(s, m)), format!("({k}, {s}, {m})"))?;
    }
    Ok(format!("{} grid points", identity_grid().len()))
}

fn schur_pfaffian(v: &Verifier) -> Outcome {
    let xs = |n: i64| (1..=n).map(|x| rational(x, 1)).collect::<Vec<_>>();
    let r4 = v.schur_pfaffian(&xs(4));
    all_pass(std::slice::from_ref(&r4))?;
    ensure(
        r4.witness["lhs"] == "1/1050" && r4.witness["rhs"] == "1/1050",
        "n = 4 value",
    )?;
    let r6 = v.schur_pfaffian(&xs(6));
    all_pass(std::slice::from_ref(&r6))?;
    let mut product = rational(1, 1);
    for j in 1..=6 {
        for i in 1..j {
            product *= rational(j - i, j + i);
        }
    }
    ensure(
        r6.witness["rhs"] == product.to_string().as_str(),
        "n = 6 product formula",
    )?;
    Ok(format!("n = 4: 1/1050, n = 6: {product}"))
}

fn jack_limit(v: &Verifier) -> Outcome {
    let reports: Vec<_> = identity_grid()
        .into_iter()
        .map(|(k, s, m)| v.jack_limit(k, s, m, PhiConvention::ProofConsistent))
        .collect();
    all_pass(&reports)?;
    let at_one = dyson_prefactor(2, 2).eval(&rational(1, 1)).map_err(|e| e.to_string())?;
    ensure(
        at_one == rational(6, 1),
        format!("(q;q)_4/(q;q)_2^2 at q = 1 is {at_one}"),
    )?;
    Ok("pole-free on the grid; (q;q)_4/(q;q)_2^2 -> 6".into())
}

fn macdonald_engine(v: &Verifier) -> Outcome {
    let mut reports = Vec::new();
    for m in 1..=3 {
        reports.push(v.macdonald_orthogonality(6, m));
        reports.push(v.one_row_closed_form(6, m));
    }
    reports.push(v.schur_degeneration(5));
    all_pass(&reports)?;
    Ok("orthogonal to weight 6, one-row forms to j = 6, Schur to weight 5".into())
}

type Criterion<'a> = (&'static str, Duration, Box<dyn Fn() -> Outcome + 'a>);

fn main() {
    let engine = Macdonald::new(Limits::default());
    let v = Verifier::new(&engine);
    let criteria: Vec<Criterion<'_>> = vec![
        ("1 ASM counts", Duration::from_secs(10), Box::new(asm_counts)),
        (
            "2 λ-Vandermonde",
            Duration::from_secs(60),
            Box::new(|| lambda_vandermonde(&v)),
        ),
        (
            "3 3×3 display discrepancy",
            Duration::from_secs(60),
            Box::new(|| det3_display(&v)),
        ),
        (
            "4 λ → 1 limit",
            Duration::from_secs(60),
            Box::new(|| limit_to_cayley(&v)),
        ),
        (
            "5 rectangular hyperdeterminant",
            Duration::from_secs(600),
            Box::new(|| rectangular_grid(&v)),
        ),
        (
            "6 q-Dyson oracle",
            Duration::from_secs(600),
            Box::new(|| dyson_grid(&engine)),
        ),
        (
            "7 Schur Pfaffian",
            Duration::from_secs(10),
            Box::new(|| schur_pfaffian(&v)),
        ),
        ("8 q → 1 limit", Duration::from_secs(30), Box::new(|| jack_limit(&v))),
        (
            "9 Macdonald engine",
            Duration::from_secs(300),
            Box::new(|| macdonald_engine(&v)),
        ),
    ];
    let mut failed = 0;
    for (name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if took > limit => Err(format!("{msg}, but took {took:.2?} (limit {limit:?})")),
            other => other,
        };
        match outcome {
            Ok(msg) => println!("PASS  criterion {name}: {msg} [{took:.2?}]"),
            Err(msg) => {
                failed += 1;
                println!("FAIL  criterion {name}: {msg} [{took:.2?}]");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
