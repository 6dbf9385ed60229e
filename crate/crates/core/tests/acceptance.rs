//! Acceptance suite: prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::path::Path;
use std::sync::Arc;
use std::time::{Duration, Instant};

use cherednik::groups::{Character, GroupSpec, ReflectionGroup};
use cherednik::jobs::{run_job, JobSpec};
use cherednik::params::{is_regular_by_degrees, regularity_probe, Regularity};
use cherednik::pbw::{reflection_class_count, AlgebraContext, FiltrationKind, Parameter, PBWElement};
use cherednik::rank1::{
    check_pushforward_holonomic, find_stable_ladders, is_reducible, singular_cycle, CyclicDatum, LaurentModule,
    SingularCycle, TwistP,
};
use cherednik::representations::{bernstein_filtration_dims, gk_dimension, holonomicity, ModuleModel};
use cherednik::scalars::{rat, CycloNumber};
use cherednik::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

const FAMILIES: [&str; 5] = ["cyclic:2", "cyclic:3", "cyclic:4", "minus-id:2", "s3-reflection"];

fn random_context(name: &str, rng: &mut ChaCha8Rng) -> Arc<AlgebraContext> {
    let group = Arc::new(ReflectionGroup::close(GroupSpec::named(name).unwrap()).unwrap());
    let classes = reflection_class_count(&group.find_reflections());
    let n = group.field_order();
    let values = (0..classes)
        .map(|_| {
            let num = rng.gen_range(-7i64..=7);
            let den = rng.gen_range(1i64..=7);
            CycloNumber::from_rational(rat(num, den), n)
        })
        .collect();
    AlgebraContext::new(group, Parameter::new(values)).unwrap()
}

fn named(name: &str, c: (i64, i64)) -> Arc<AlgebraContext> {
    let group = GroupSpec::named(name).unwrap();
    let n = group.cyclotomic_order;
    AlgebraContext::named(name, &[CycloNumber::from_rational(rat(c.0, c.1), n)]).unwrap()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut lines = Vec::new();
    for name in FAMILIES {
        let ctx = random_context(name, &mut rng);
        let report = ctx.verify_associativity(500, 1000 + lines.len() as u64);
        if !report.passed() {
            return Err(format!("{name}: {} associativity failures", report.failures.len()));
        }
        lines.push(format!("{name} 500/500"));
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(120) {
        return Err(format!("runtime {elapsed:?} exceeds 120 s"));
    }
    Ok(format!("{} in {:.1?}", lines.join(", "), elapsed))
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut compared = 0;
    for name in FAMILIES {
        let ctx = random_context(name, &mut rng);
        for _ in 0..200 {
            let a = ctx.random_element(&mut rng, 2, 3);
            let b = ctx.random_element(&mut rng, 2, 3);
            if a.is_zero() || b.is_zero() {
                continue;
            }
            let ab = ctx.mul(&a, &b);
            for kind in [FiltrationKind::Bernstein, FiltrationKind::Geometric] {
                let (sa, sb) = (a.principal_symbol(kind).unwrap(), b.principal_symbol(kind).unwrap());
                if let Some(prod) = ctx.symbol_product(&sa, &sb) {
                    compared += 1;
                    let sab = ab.principal_symbol(kind).map_err(|e| format!("{name}: {e}"))?;
                    if sab != prod {
                        return Err(format!("{name}: symbol of a product differs from product of symbols"));
                    }
                }
            }
        }
        let zero = ctx_with_zero(name);
        for i in 0..zero.rank() {
            for j in 0..zero.rank() {
                let comm = &zero.mul(&zero.y(i), &zero.x(j)) - &zero.mul(&zero.x(j), &zero.y(i));
                let expected = if i == j { zero.one() } else { PBWElement::zero() };
                if comm != expected {
                    return Err(format!("{name}: [y{},x{}] != delta at c = 0", i + 1, j + 1));
                }
            }
        }
    }
    Ok(format!("{compared} nonzero symbol products agree; c = 0 gives [y,x] = <x,y>"))
}

fn ctx_with_zero(name: &str) -> Arc<AlgebraContext> {
    let group = GroupSpec::named(name).unwrap();
    AlgebraContext::named(name, &[CycloNumber::zero(group.cyclotomic_order)]).unwrap()
}

fn gk_of(m: &ModuleModel, window: usize) -> Result<u32, String> {
    let h = bernstein_filtration_dims(m, &m.default_generators(), window).map_err(|e| e.to_string())?;
    gk_dimension(&h).map(|r| r.gk_dim).map_err(|e| e.to_string())
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let ctx = named("cyclic:2", (1, 3));
    let triv = Character::trivial(ctx.group());
    let verma = gk_of(&ModuleModel::verma(ctx.clone(), triv.clone(), 40).unwrap(), 24)?;
    let regular = gk_of(&ModuleModel::regular(ctx.clone(), 40), 16)?;
    let half = named("cyclic:2", (1, 2));
    let fin = ModuleModel::verma_quotient(half.clone(), Character::trivial(half.group()), 1).map_err(|e| e.to_string())?;
    let finite = gk_of(&fin, 24)?;

    let sign = Character::from_generator_values(half.group(), &[CycloNumber::from_int(-1, 2)]).unwrap();
    let weyl = named("trivial:1", (0, 1));
    let a = ModuleModel::external_tensor(
        ModuleModel::verma(half.clone(), sign, 40).unwrap(),
        ModuleModel::verma(weyl.clone(), Character::trivial(weyl.group()), 40).unwrap(),
    )
    .unwrap();
    let b = ModuleModel::external_tensor(fin, ModuleModel::regular(weyl, 40)).unwrap();
    let example = ModuleModel::direct_sum(vec![a, b]).unwrap();
    let example_gk = gk_of(&example, 16)?;
    let holonomic = holonomicity(&example, 16).map_err(|e| e.to_string())?.holonomic;
    let got = (verma, regular, finite, example_gk, holonomic);
    if got != (1, 2, 0, 2, false) {
        return Err(format!("(Verma, regular, finite, example GK, example holonomic) = {got:?}"));
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(60) {
        return Err(format!("runtime {elapsed:?} exceeds 60 s"));
    }
    Ok(format!("Verma 1, regular 2, finite 0, product example GK 2 and not holonomic, {elapsed:.1?}"))
}

fn criterion_4() -> Outcome {
    for k in -9i64..=9 {
        let c = rat(k, 2);
        let by_degrees = is_regular_by_degrees(&[2], &c).is_regular();
        let ctx = named("cyclic:2", (k, 2));
        let probe = regularity_probe(&ctx, 20).map_err(|e| e.to_string())?;
        let by_probe = probe.regularity != Regularity::NotRegular;
        let expected = k % 2 == 0;
        if by_degrees != expected || by_probe != expected {
            return Err(format!("c = {k}/2: degrees {by_degrees}, probe {by_probe}, expected {expected}"));
        }
    }
    Ok("19 values of c = k/2 agree; not regular exactly for odd k".into())
}

fn generic_datum(m: u32) -> CyclicDatum {
    let c = [rat(1, 7), rat(1, 11)];
    CyclicDatum::new(m, (0..m as usize - 1).map(|i| CycloNumber::from_rational(c[i].clone(), m)).collect()).unwrap()
}

fn criterion_5() -> Outcome {
    let mut discrepancies = Vec::new();
    let mut checked = 0;
    for m in [2u32, 3] {
        let datum = generic_datum(m);
        let mut twists = Vec::new();
        for a in 0..=2 * m as i64 {
            for b in [0, 1] {
                twists.push(format!("{a}*x^-1 + {b}*x^{}", m - 1));
            }
        }
        for a in 1..=3 {
            twists.push(format!("{a}*x^-{}", m + 1));
        }
        for src in twists {
            let twist = TwistP::parse(&src, m).unwrap();
            let criterion = is_reducible(&datum, &twist).map_err(|e| e.to_string())?;
            let module = LaurentModule::new(datum.clone(), twist).map_err(|e| e.to_string())?;
            let ladders = find_stable_ladders(&module, 12).map_err(|e| e.to_string())?.ladders;
            checked += 1;
            let agrees = criterion.reducible == !ladders.is_empty()
                && criterion.ladder.map_or(true, |t| ladders == vec![t]);
            if !agrees {
                discrepancies.push(format!("m = {m}, p = {src}: criterion {:?}, ladders {ladders:?}", criterion.ladder));
            }
        }
    }
    if discrepancies.is_empty() {
        Ok(format!("{checked} grid points agree, discrepancy list empty"))
    } else {
        Err(discrepancies.join("; "))
    }
}

fn criterion_6() -> Outcome {
    let samples: [(u32, (i64, i64), &str); 12] = [
        (2, (1, 3), "0"),
        (2, (1, 3), "x"),
        (2, (1, 3), "x^-1"),
        (2, (1, 3), "2*x^-1 + x"),
        (2, (2, 7), "1/2*x^-1 + x^3"),
        (2, (-1, 5), "-x^-1"),
        (3, (1, 7), "0"),
        (3, (1, 7), "x^2"),
        (3, (1, 5), "x^-1 + x^5"),
        (3, (2, 9), "3*x^-1"),
        (4, (1, 7), "x^3"),
        (4, (1, 9), "1/3*x^-1 + x^7"),
    ];
    for (m, c, p) in samples {
        let datum = CyclicDatum::constant(m, CycloNumber::from_rational(rat(c.0, c.1), m)).unwrap();
        let module = LaurentModule::new(datum, TwistP::parse(p, m).unwrap()).map_err(|e| e.to_string())?;
        let cycle = singular_cycle(&module).map_err(|e| e.to_string())?;
        if cycle != SingularCycle::new(1, 1) {
            return Err(format!("m = {m}, p = {p}: cycle {:?}", cycle.components));
        }
    }
    Ok("12 samples give zero_section 1 + zero_fiber 1".into())
}

fn criterion_7() -> Outcome {
    let twists = ["0", "x^-1", "2*x^-1", "x", "2*x^-1 + x", "x^-3", "1/2*x^-1", "x^3", "-x^-1", "x^-3 + x"];
    let mut alarms = Vec::new();
    let mut cases = 0;
    for c in [(1i64, 3i64), (1, 5)] {
        let datum = CyclicDatum::constant(2, CycloNumber::from_rational(rat(c.0, c.1), 2)).unwrap();
        for p in twists {
            cases += 1;
            match check_pushforward_holonomic(&datum, &TwistP::parse(p, 2).unwrap()) {
                Ok(r) if r.gk == 1 => {}
                Ok(r) => alarms.push(format!("c = {}/{}, p = {p}: GK {}", c.0, c.1, r.gk)),
                Err(Error::Falsification(msg)) => alarms.push(format!("FALSIFICATION: {msg}")),
                Err(e) => return Err(format!("c = {}/{}, p = {p}: {e}", c.0, c.1)),
            }
        }
    }
    if alarms.is_empty() {
        Ok(format!("{cases} cases with GK 1, 0 alarms"))
    } else {
        Err(format!("{} alarms: {}", alarms.len(), alarms.join("; ")))
    }
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut checked = 0;
    for name in FAMILIES {
        let ctx = random_context(name, &mut rng);
        let verma = ModuleModel::verma(ctx.clone(), Character::trivial(ctx.group()), 20).unwrap();
        let report = verma.check_relations(15).map_err(|e| format!("{name}: {e}"))?;
        if !report.failures.is_empty() {
            return Err(format!("{name}: {} failures, first {}", report.failures.len(), report.failures[0]));
        }
        checked += report.checked;
    }
    Ok(format!("{checked} generator-pair checks on Verma modules up to degree 15"))
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for name in FAMILIES {
        let ctx = random_context(name, &mut rng);
        let opp = ctx.opposite_context().unwrap();
        for _ in 0..200 {
            let a = ctx.random_element(&mut rng, 2, 3);
            let b = ctx.random_element(&mut rng, 2, 3);
            let (dual, fa) = ctx.fourier_image(&a).unwrap();
            let (back_ctx, ffa) = dual.fourier_image(&fa).unwrap();
            if ffa != a || back_ctx.is_fourier_dual() {
                return Err(format!("{name}: fourier(fourier(e)) != e"));
            }
            let (_, oab) = ctx.opposite_image(&ctx.mul(&a, &b)).unwrap();
            let (_, oa) = ctx.opposite_image(&a).unwrap();
            let (_, ob) = ctx.opposite_image(&b).unwrap();
            if oab != opp.mul(&ob, &oa) {
                return Err(format!("{name}: opposite is not an anti-homomorphism"));
            }
        }
    }
    let z3 = AlgebraContext::named("cyclic:3", &[
        CycloNumber::from_rational(rat(1, 2), 3),
        CycloNumber::from_rational(rat(1, 5), 3),
    ])
    .unwrap();
    let bar = z3.opposite_parameter();
    if bar.values() != [z3.parameter().value(1).clone(), z3.parameter().value(0).clone()] {
        return Err("parameter transposition on Z/3 is not (c1, c2) -> (c2, c1)".into());
    }
    let s = z3.g(1);
    let (_, image) = z3.opposite_image(&s).unwrap();
    if image != z3.g(2) {
        return Err("opposite(s) != s^-1 on Z/3".into());
    }
    Ok("fourier involutive and opposite anti-multiplicative on 200 pairs x 5 contexts; Z/3 transposition verified".into())
}

fn criterion_10() -> Outcome {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../cli/tests/golden");
    let mut jobs: Vec<_> = std::fs::read_dir(&dir)
        .map_err(|e| e.to_string())?
        .map(|e| e.unwrap().path())
        .filter(|p| p.to_string_lossy().ends_with(".job.json"))
        .collect();
    jobs.sort();
    if jobs.is_empty() {
        return Err("no golden jobs found".into());
    }
    for job in &jobs {
        let spec = JobSpec::from_json(&std::fs::read_to_string(job).unwrap()).map_err(|e| e.to_string())?;
        let first = run_job(&spec).to_json();
        let second = run_job(&spec).to_json();
        let golden = std::fs::read_to_string(job.to_string_lossy().replace(".job.json", ".out.json")).unwrap();
        if first != second || first != golden {
            return Err(format!("{} does not reproduce", job.display()));
        }
    }
    Ok(format!("{} golden reports reproduce byte-identically", jobs.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("PBW consistency", criterion_1),
        ("graded isomorphism", criterion_2),
        ("GK table", criterion_3),
        ("regularity agreement", criterion_4),
        ("rank-1 reducibility", criterion_5),
        ("singular cycle", criterion_6),
        ("pushforward holonomicity", criterion_7),
        ("module axioms", criterion_8),
        ("structure maps", criterion_9),
        ("determinism", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let status = if outcome.is_ok() { "PASS" } else { "FAIL" };
        let detail = outcome.unwrap_or_else(|e| {
            failed += 1;
            e
        });
        println!("criterion {:>2} {status} {name} ({:.1?}): {detail}", i + 1, start.elapsed());
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
