//! Acceptance criteria 1 to 11. Each criterion prints one line
//! `criterion NN PASS|FAIL <title> (<elapsed>) <detail>`; the process exits
//! nonzero when any criterion fails.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use eqiw::arith::pow_mod;
use eqiw::fitcalc::checks::{
    check_ann_fit, check_four_term, random_element, random_four_term, random_gamma_module, random_presentation,
};
use eqiw::fitcalc::{fit_gamma_module, fit_gamma_module_minors, FiniteModule};
use eqiw::grp::{AbGroup, TruncAlgebra, TruncElem};
use eqiw::harness::emc::delta_part;
use eqiw::harness::{ingest_fixture, integrality_battery, run_fixture, twist_check, EmcConfig, IntegralityConfig, TwistConfig};
use eqiw::iwasawa::{associated_check, interpolate_from_values, interpolation_nodes, weierstrass_prepare, AdmissibleQuotient};
use eqiw::iwasawa::interpolate::rational_mod;
use eqiw::lfun::tower::coherence_check;
use eqiw::lfun::{theta_st, AbelianField};
use eqiw::motive::{random_motive, split_pm, tate_module, torsion_points, transition_down, transition_up};
use eqiw::Verdict;

const LIMIT_THETA: Duration = Duration::from_secs(1);
const LIMIT_BRUMER_STARK: Duration = Duration::from_secs(1);
const LIMIT_INTEGRALITY: Duration = Duration::from_secs(60);
const LIMIT_TWIST: Duration = Duration::from_secs(10);
const LIMIT_COHERENCE: Duration = Duration::from_secs(30);
const LIMIT_FITTING: Duration = Duration::from_secs(120);
const LIMIT_FOUR_TERM: Duration = Duration::from_secs(60);
const LIMIT_MOTIVE: Duration = Duration::from_secs(60);
const LIMIT_WEIERSTRASS: Duration = Duration::from_secs(60);
const LIMIT_INTERPOLATION: Duration = Duration::from_secs(10);
const LIMIT_DELTA: Duration = Duration::from_secs(30);

const SEED: u64 = 20_240_601;

type Outcome = Result<(bool, String), String>;

fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// Θ_{S,T}(0) for Q(ζ_f) from Hurwitz values ζ(0, a/f) = 1/2 − a/f, keyed by
/// residues: the partial zeta value of a sits on σ_a^{-1}, δ_T = ∏(1 − ℓσ_ℓ^{-1}).
fn hurwitz_theta(f: u64, t_primes: &[u64]) -> BTreeMap<u64, BigRational> {
    let units: Vec<u64> = (1..f).filter(|a| a.gcd(&f) == 1).collect();
    let inverse = |a: u64| units.iter().copied().find(|&b| a * b % f == 1).expect("unit");
    let mut theta: BTreeMap<u64, BigRational> = BTreeMap::new();
    for &a in &units {
        let value = BigRational::new(BigInt::one(), BigInt::from(2)) - BigRational::new(BigInt::from(a), BigInt::from(f));
        *theta.entry(inverse(a)).or_insert_with(BigRational::zero) += value;
    }
    let multiply = |x: &BTreeMap<u64, BigRational>, ell: u64| {
        let mut out = x.clone();
        let g = inverse(ell % f);
        for (&a, c) in x {
            *out.entry(a * g % f).or_insert_with(BigRational::zero) -= c * BigRational::from_integer(BigInt::from(ell));
        }
        out
    };
    for &ell in t_primes {
        theta = multiply(&theta, ell);
    }
    theta
}

fn compare_with_hurwitz(f: u64, s: &[u64], t: &[u64]) -> Result<bool, String> {
    let field = AbelianField::cyclotomic(f).map_err(err)?;
    let computed = theta_st(&field, s, t, 1).map_err(err)?;
    let oracle = hurwitz_theta(f, t);
    for (a, c) in oracle {
        let idx = field.artin(a as i64).ok_or("residue outside the group")?;
        if computed.elem.coeffs()[idx] != c {
            return Ok(false);
        }
    }
    Ok(true)
}

fn criterion_theta() -> Outcome {
    let field = AbelianField::cyclotomic(4).map_err(err)?;
    let theta = theta_st(&field, &[2], &[3], 1).map_err(err)?;
    let sigma = field.artin(3).ok_or("no σ")?;
    let identity = field.artin(1).ok_or("no identity")?;
    let mut expected = vec![BigRational::zero(); 2];
    expected[identity] = BigRational::one();
    expected[sigma] = -BigRational::one();
    let exact = theta.elem.coeffs() == expected.as_slice();
    let hurwitz = compare_with_hurwitz(4, &[2], &[3])? && compare_with_hurwitz(7, &[7], &[2])?;
    Ok((exact && hurwitz, format!("Q(i): 1 - sigma {exact}; Hurwitz oracle {hurwitz}")))
}

/// Class number of discriminant d < 0 by counting reduced forms.
fn class_number(d: i64) -> usize {
    let mut count = 0;
    let mut a = 1i64;
    while 3 * a * a <= -d {
        for b in -a + 1..=a {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (a == c && b < 0) || a.gcd(&b).gcd(&c) != 1 {
                continue;
            }
            count += 1;
        }
        a += 1;
    }
    count
}

fn criterion_brumer_stark() -> Outcome {
    let good = run_fixture(&ingest_fixture(&fixture_path("bs_qsqrt-23_p3.json")).map_err(err)?).map_err(err)?;
    let bad = run_fixture(&ingest_fixture(&fixture_path("bs_qsqrt-23_p3_corrupted.json")).map_err(err)?).map_err(err)?;
    let h = class_number(-23);
    let ok = h == 3 && good.overall() == Verdict::Pass && bad.overall() == Verdict::Fail;
    Ok((ok, format!("h(-23) = {h}; Z/3 fixture {:?}; Z/9 fixture {:?}", good.overall(), bad.overall())))
}

fn criterion_integrality() -> Outcome {
    let report = integrality_battery(&IntegralityConfig::default()).map_err(err)?;
    let counts = &report.certificates["counts"];
    let failures = counts["failures"].as_u64().ok_or("counts missing")?;
    let instances = counts["instances"].as_u64().ok_or("counts missing")?;
    let ok = failures == 0 && instances > 0 && report.verdict_of("integrality") == Some(Verdict::Pass);
    Ok((ok, format!("{} fields, {instances} instances, {failures} failures, {} not applicable", counts["fields"], counts["not_applicable"])))
}

fn criterion_twist() -> Outcome {
    let report = twist_check(&TwistConfig::default()).map_err(err)?;
    let rows = report.certificates["instances"].as_array().map_or(0, Vec::len);
    let ok = report.verdict_of("delta_twist") == Some(Verdict::Pass) && rows == 6;
    Ok((ok, format!("{rows} tower instances, verdict {:?}", report.overall())))
}

fn criterion_coherence() -> Outcome {
    let field = AbelianField::cyclotomic(4).map_err(err)?;
    let mut all = true;
    let mut count = 0;
    for level in 1..=2u32 {
        for m in 1..=3u32 {
            let report = coherence_check(&field, &[2, 3], &[5], 3, level, m).map_err(err)?;
            all &= report.holds;
            count += 1;
        }
    }
    Ok((all, format!("{count} projections over Q(i), p = 3, S = {{2,3}}, T = {{5}}")))
}

fn group_for(index: usize) -> AbGroup {
    match index % 7 {
        0 => AbGroup::trivial(),
        1 => AbGroup::cyclic(2),
        2 => AbGroup::cyclic(3),
        3 => AbGroup::cyclic(4),
        4 => AbGroup::new(vec![2, 2], None).expect("group"),
        5 => AbGroup::cyclic(5),
        _ => AbGroup::cyclic(6),
    }
}

fn criterion_fitting() -> Outcome {
    const PRESENTATIONS: usize = 200;
    const GAMMA_MODULES: usize = 100;
    const N_PREC: u32 = 6;
    const MAX_SIZE: usize = 4;
    const GAMMA_T_PREC: usize = 6;
    let mut rng = StdRng::seed_from_u64(SEED);
    let mut failures = Vec::new();
    for sample in 0..PRESENTATIONS {
        let alg = TruncAlgebra::group_ring(3, N_PREC, &group_for(sample)).map_err(err)?;
        let pres = random_presentation(&mut rng, &alg, MAX_SIZE);
        let fit = pres.fitting_ideal().map_err(err)?;
        let (gens, rels) = (pres.generators(), pres.relations());
        let r = random_element(&mut rng, &alg, 5);
        let weights: Vec<TruncElem> = (0..rels).map(|_| random_element(&mut rng, &alg, 3)).collect();
        let mut variants = vec![pres.pad_free_summand(), pres.add_redundant_relation(&weights)];
        if gens > 1 {
            let (a, b) = (rng.gen_range(0..gens), rng.gen_range(0..gens));
            if a != b {
                variants.push(pres.add_row_multiple(a, b, &r));
            }
        }
        if rels > 1 {
            let (a, b) = (rng.gen_range(0..rels), rng.gen_range(0..rels));
            if a != b {
                variants.push(pres.add_column_multiple(a, b, &r));
                variants.push(pres.swap_columns(a, b));
            }
        }
        for variant in &variants {
            if !variant.fitting_ideal().map_err(err)?.equals(&fit).map_err(err)? {
                failures.push(format!("invariance at sample {sample}"));
            }
        }
        let verdict = check_ann_fit(&FiniteModule::from_presentation(&pres)).map_err(err)?;
        if !(verdict.ann_power_in_fit && verdict.fit_in_ann) {
            failures.push(format!("Ann/Fit at sample {sample}"));
        }
    }
    let base = TruncAlgebra::group_ring(3, N_PREC, &AbGroup::cyclic(2)).map_err(err)?;
    for sample in 0..GAMMA_MODULES {
        let rank = rng.gen_range(1..=3);
        let module = random_gamma_module(&mut rng, &base, rank);
        let fast = fit_gamma_module(&module, GAMMA_T_PREC).map_err(err)?;
        let minors = fit_gamma_module_minors(&module, GAMMA_T_PREC).map_err(err)?;
        if !fast.equals(&minors).map_err(err)? {
            failures.push(format!("Γ-module {sample}"));
        }
    }
    Ok((
        failures.is_empty(),
        format!("{PRESENTATIONS} presentations, {GAMMA_MODULES} Γ-modules; failures {failures:?}"),
    ))
}

fn criterion_four_term() -> Outcome {
    const SAMPLES: usize = 50;
    const N_PREC: u32 = 6;
    let mut rng = StdRng::seed_from_u64(SEED + 7);
    let alg = TruncAlgebra::group_ring(3, N_PREC, &AbGroup::cyclic(2)).map_err(err)?;
    let mut holds = 0;
    for _ in 0..SAMPLES {
        let seq = random_four_term(&mut rng, &alg, 2);
        let verdict = check_four_term(&seq).map_err(err)?;
        if verdict.exact && verdict.pd_ok && verdict.identity_holds {
            holds += 1;
        }
    }
    Ok((holds == SAMPLES, format!("{holds}/{SAMPLES} exact sequences satisfy the identity")))
}

fn criterion_motive() -> Outcome {
    const SAMPLES: usize = 50;
    let mut rng = StdRng::seed_from_u64(SEED + 8);
    let mut failures = Vec::new();
    for sample in 0..SAMPLES {
        let p = if rng.gen_bool(0.5) { 3 } else { 5 };
        let rank = rng.gen_range(0..=2);
        let corank = rng.gen_range(usize::from(rank == 0)..=4 - rank);
        let motive = random_motive(&mut rng, p, rank, corank, 2).map_err(err)?;
        let size = (rank + corank) as u64;
        for n in 1..=3u32 {
            let torsion = torsion_points(&motive, n).map_err(err)?;
            let order = torsion.log_order() == u64::from(n) * size && torsion.order_formula_holds();
            let split = split_pm(&motive, &torsion).map_err(err)?;
            let (plus, minus) = split.total.log_orders();
            let pm = plus + minus == torsion.log_order() && split.is_direct(&torsion);
            if !(order && torsion.is_exact().map_err(err)? && pm) {
                failures.push(format!("torsion {sample}/{n}"));
            }
        }
        let tate = tate_module(&motive, 3).map_err(err)?;
        if !(1..=3).all(|k| tate.reduces_to_torsion(&motive, k).unwrap_or(false)) {
            failures.push(format!("tate {sample}"));
        }
        for (low, high) in [(1u32, 2u32), (1, 3), (2, 3)] {
            let down = transition_down(&motive, high, low).map_err(err)?;
            let up = transition_up(&motive, low, high).map_err(err)?;
            let round = up.compose(&down).map_err(err)?;
            let factor = p.pow(high - low);
            let scalar = round
                .matrix
                .iter()
                .enumerate()
                .all(|(i, row)| row.iter().enumerate().all(|(k, &x)| x == if i == k { factor % p.pow(low) } else { 0 }));
            let ok = down.is_surjective().map_err(err)?
                && up.is_injective().map_err(err)?
                && down.is_equivariant(&motive).map_err(err)?
                && up.is_equivariant(&motive).map_err(err)?
                && (size == 0 || scalar);
            if !ok {
                failures.push(format!("transition {sample} {low}<->{high}"));
            }
        }
    }
    Ok((failures.is_empty(), format!("{SAMPLES} motives, r + s ≤ 4; failures {failures:?}")))
}

fn criterion_weierstrass() -> Outcome {
    const SAMPLES: usize = 100;
    const N_PREC: u32 = 6;
    const T_PREC: usize = 10;
    let mut rng = StdRng::seed_from_u64(SEED + 9);
    let group = AbGroup::new(vec![2], Some(vec![1])).map_err(err)?;
    let alg = TruncAlgebra::series(3, N_PREC, &group, T_PREC).map_err(err)?;
    let quotient = AdmissibleQuotient::minus(3, &group).map_err(err)?;
    let modulus = 3u64.pow(N_PREC);
    let half = pow_mod(2, modulus / 3 * 2 - 1, modulus);
    let minus_idempotent = TruncElem::one(&alg).sub(&TruncElem::group_element(&alg, 1)).scale(half);
    let t_plus_p = TruncElem::t(&alg).add(&TruncElem::from_int(&alg, 3));
    let mut failures = Vec::new();
    let mut done = 0;
    while done < SAMPLES {
        let series = random_element(&mut rng, &alg, 40);
        let odd = |deg: usize| (series.zp_coeff(deg, 0) + modulus - series.zp_coeff(deg, 1)) % modulus;
        let Some(lambda) = (0..T_PREC).find(|&deg| odd(deg) % 3 != 0) else { continue };
        done += 1;
        let prep = weierstrass_prepare(&series, &quotient).map_err(err)?;
        let product = prep.unit.mul(&prep.poly) == minus_idempotent.mul(&series);
        let lambdas = prep.lambdas();
        let lambda_ok = lambdas.len() == 1 && lambdas[0].1 == lambda;
        let unit = TruncElem::one(&alg).add(&random_element(&mut rng, &alg, 4).mul(&TruncElem::t(&alg)));
        let assoc = associated_check(&series, &unit.mul(&series), &quotient).map_err(err)?;
        let shifted = associated_check(&series, &t_plus_p.mul(&series), &quotient).map_err(err)?;
        if !(product && lambda_ok && assoc && !shifted) {
            failures.push(format!("sample {done}: U·f {product}, λ {lambda_ok}, unit {assoc}, (t+p) {shifted}"));
        }
    }
    Ok((failures.is_empty(), format!("{SAMPLES} μ = 0 series; failures {failures:?}")))
}

fn v3(x: &BigInt) -> u32 {
    let mut x = x.abs();
    let three = BigInt::from(3);
    let mut v = 0;
    while !x.is_zero() && (&x % &three).is_zero() {
        x /= &three;
        v += 1;
    }
    v
}

fn criterion_interpolation() -> Outcome {
    const SAMPLES: usize = 20;
    const INPUT_PREC: u32 = 30;
    const DEGREE: usize = 5;
    let nodes = interpolation_nodes(&BigInt::from(4), &[1, 2, 3, 4, 5, 6]);
    let oracle: u32 = (0..nodes.len())
        .flat_map(|i| (i + 1..nodes.len()).map(move |k| (i, k)))
        .map(|(i, k)| v3(&(&nodes[k] - &nodes[i])))
        .sum();
    let modulus = BigInt::from(3).pow(INPUT_PREC);
    let mut rng = StdRng::seed_from_u64(SEED + 10);
    let mut failures = Vec::new();
    for sample in 0..SAMPLES {
        let coeffs: Vec<i64> = (0..=DEGREE).map(|_| rng.gen_range(-1000..=1000)).collect();
        let values: Vec<BigRational> = nodes
            .iter()
            .map(|x| {
                let exact = coeffs.iter().rev().fold(BigInt::zero(), |acc, &c| acc * x + BigInt::from(c));
                BigRational::from_integer(exact.mod_floor(&modulus))
            })
            .collect();
        let result = interpolate_from_values(3, &nodes, &values, DEGREE + 1, Some(INPUT_PREC)).map_err(err)?;
        let certified = result.certified_precision.ok_or("no certified precision")?;
        let loss_ok = INPUT_PREC - certified == oracle && result.vandermonde_valuation == oracle;
        let target = 3u64.pow(certified);
        let recovered = coeffs
            .iter()
            .zip(&result.coeffs)
            .all(|(&c, got)| rational_mod(got, 3, certified) == Some(c.rem_euclid(target as i64) as u64));
        if !(loss_ok && recovered) {
            failures.push(sample);
        }
    }
    Ok((failures.is_empty(), format!("v_3(det V) oracle {oracle}, certified {} digits; failures {failures:?}", INPUT_PREC - oracle)))
}

fn criterion_delta() -> Outcome {
    let config = EmcConfig::default();
    let (holds, certificate) = delta_part(&config).map_err(err)?;
    let count = certificate["instances"].as_array().map_or(0, Vec::len);
    Ok((holds && count == 7, format!("{count} T-sets over Q(i)(μ_3), (N, M) = ({}, {})", config.n_prec, config.t_prec)))
}

fn main() -> ExitCode {
    let criteria: Vec<(&str, Duration, fn() -> Outcome)> = vec![
        ("theta_ST(Q(i), {2}, {3}, 1) = 1 - sigma", LIMIT_THETA, criterion_theta),
        ("Brumer-Stark fixtures: Z/3 passes, Z/9 fails", LIMIT_BRUMER_STARK, criterion_brumer_stark),
        ("integrality battery", LIMIT_INTEGRALITY, criterion_integrality),
        ("Delta twist identity on two towers", LIMIT_TWIST, criterion_twist),
        ("tower coherence", LIMIT_COHERENCE, criterion_coherence),
        ("Fitting invariance, Ann/Fit, Gamma-module routes", LIMIT_FITTING, criterion_fitting),
        ("four-term Fitting identity", LIMIT_FOUR_TERM, criterion_four_term),
        ("1-motive torsion, Tate module, transitions, +/- split", LIMIT_MOTIVE, criterion_motive),
        ("Weierstrass preparation and association", LIMIT_WEIERSTRASS, criterion_weierstrass),
        ("interpolation precision loss", LIMIT_INTERPOLATION, criterion_interpolation),
        ("Delta-module Fitting ideal", LIMIT_DELTA, criterion_delta),
    ];
    let mut failed = 0;
    for (index, (title, limit, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok((holds, detail)) => (holds && elapsed <= limit, detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let timing = if elapsed <= limit { String::new() } else { format!(" over limit {limit:?};") };
        println!(
            "criterion {:02} {} {title} ({elapsed:.2?} of {limit:?}){timing} {detail}",
            index + 1,
            if ok { "PASS" } else { "FAIL" }
        );
        failed += usize::from(!ok);
    }
    println!("acceptance: {} of 11 criteria passed", 11 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
