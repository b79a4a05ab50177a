//! Acceptance checks, one line per criterion. Runs without the libtest
//! harness so the report is always printed.

mod common;

use std::collections::BTreeMap;
use std::time::Instant;

use khv_core::corpus::TABLE_KNOTS;
use khv_core::expansion::{
    birman_lin, extremal_term, has_extremal_witness, jones_taylor, series_reconstruct, v_n, vassiliev_value,
};
use khv_core::homology::{differential, homology_ranks, KhComplex};
use khv_core::polynomials::{check_skein_triple, jones_from_bracket, jones_from_kh, khovanov_polynomial};
use khv_core::statecube::enumerate_enhanced;
use khv_core::{BigradedRanks, Corpus, Diagram, Rational, Ring};
use num_bigint::BigInt;

type Check = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Check + 'a>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ranks(d: &Diagram) -> Result<BigradedRanks, String> {
    homology_ranks(d, Ring::Rationals).map_err(|e| e.to_string())
}

fn golden_table(corpus: &Corpus) -> Check {
    let start = Instant::now();
    let report = corpus.verify_table();
    let elapsed = start.elapsed();
    ensure(report.all_pass() && report.total() == 49, || report.to_string())?;
    ensure(elapsed.as_secs_f64() < 10.0, || format!("took {elapsed:?}"))?;
    Ok(format!("{}/{} rows match in {:.2?}", report.passed(), report.total(), elapsed))
}

fn jones_oracle(corpus: &Corpus) -> Check {
    for e in corpus.entries() {
        let from_kh = jones_from_kh(&khovanov_polynomial(&ranks(&e.diagram)?));
        let from_bracket = jones_from_bracket(&e.diagram).map_err(|x| x.to_string())?;
        ensure(from_kh == from_bracket, || format!("{}: Kh gives {from_kh}, bracket gives {from_bracket}", e.name))?;
    }
    Ok(format!("{} diagrams", corpus.entries().len()))
}

fn series_route(corpus: &Corpus) -> Check {
    for e in corpus.entries() {
        let r = ranks(&e.diagram)?;
        let rows = series_reconstruct(&khovanov_polynomial(&r), 5);
        for (n, row) in rows.iter().enumerate() {
            let closed = v_n(&r, n);
            ensure(row.same_terms(&closed), || format!("{} v_{n}: series {row} vs closed form {closed}", e.name))?;
        }
    }
    Ok(format!("{} diagrams, n <= 5", corpus.entries().len()))
}

fn vassiliev_route(corpus: &Corpus) -> Check {
    for e in corpus.entries() {
        let r = ranks(&e.diagram)?;
        let taylor = jones_taylor(&jones_from_kh(&khovanov_polynomial(&r)), 5);
        for (n, want) in taylor.iter().enumerate() {
            let got = vassiliev_value(&v_n(&r, n));
            ensure(&got == want, || format!("{} n={n}: v_n(-1,1) = {got}, Taylor coefficient {want}", e.name))?;
        }
    }
    let spot = |name: &str, want: i64| -> Result<(), String> {
        let e = corpus.load(name).map_err(|x| x.to_string())?;
        let computed = vassiliev_value(&v_n(&ranks(&e.diagram)?, 2));
        let printed = vassiliev_value(&e.expected_vn[2]);
        let want = Rational::from_integer(want.into());
        ensure(computed == want && printed == want, || format!("{name}: computed {computed}, table {printed}"))
    };
    spot("4_1", 25)?;
    spot("3_1", -23)?;
    Ok("v_2(4_1) = 25, v_2(3_1) = -23".into())
}

/// Checks d∘d = 0 twice: on the assembled blocks, and state by state from
/// the single-state differential.
fn chain_complex_sound(d: &Diagram) -> Result<(), String> {
    let complex = KhComplex::new(d).map_err(|e| e.to_string())?;
    complex.check_d_squared().map_err(|e| e.to_string())?;
    for s in enumerate_enhanced(d) {
        let mut acc = BTreeMap::new();
        for (t, c) in differential(d, &s) {
            ensure(t.bidegree() == (s.i() + 1, s.j()), || format!("{s:?} maps to {:?}", t.bidegree()))?;
            for (u, c2) in differential(d, &t) {
                *acc.entry(u).or_insert(0i64) += c * c2;
            }
        }
        ensure(acc.values().all(|&v| v == 0), || format!("d(d({s:?})) != 0"))?;
    }
    Ok(())
}

fn chain_complex(corpus: &Corpus) -> Check {
    for e in corpus.entries() {
        chain_complex_sound(&e.diagram).map_err(|m| format!("{}: {m}", e.name))?;
    }
    let random = common::random_diagrams(0x5eed, 200, 6);
    for (pd, d) in &random {
        ensure(d.n_crossings() <= 6, || format!("{pd} too large"))?;
        chain_complex_sound(d).map_err(|m| format!("{pd}: {m}"))?;
    }
    Ok(format!("{} corpus + {} random diagrams", corpus.entries().len(), random.len()))
}

fn invariance(corpus: &Corpus) -> Check {
    let load = |n: &str| corpus.load(n).map(|e| e.diagram.clone()).map_err(|e| e.to_string());
    let trefoil = ranks(&load("3_1")?)?;
    let braid = ranks(&load("3_1_braid")?)?;
    ensure(trefoil == braid, || format!("3_1 {trefoil:?} vs 4-crossing trefoil {braid:?}"))?;
    let mirror = ranks(&load("3_1")?.mirror())?;
    ensure(mirror == trefoil.reflected(), || format!("mirror ranks {mirror:?}"))?;
    let fig8 = ranks(&load("4_1")?)?;
    ensure(fig8 == fig8.reflected(), || format!("4_1 not symmetric: {fig8:?}"))?;
    Ok("two trefoil codes agree; mirror duality; 4_1 self-dual".into())
}

fn skein(corpus: &Corpus) -> Check {
    let j = |n: &str| -> Result<_, String> {
        let e = corpus.load(n).map_err(|x| x.to_string())?;
        jones_from_bracket(&e.diagram).map_err(|x| x.to_string())
    };
    let (trefoil, unknot, hopf) = (j("3_1")?, j("unknot")?, j("hopf")?);
    ensure(check_skein_triple(&trefoil, &unknot, &hopf), || "trefoil triple fails".into())?;
    let (kp, kn, unlink) = (j("unknot_kink_pos")?, j("unknot_kink_neg")?, j("unlink")?);
    ensure(check_skein_triple(&kp, &kn, &unlink), || "kink triple fails".into())?;
    ensure(!check_skein_triple(&unknot, &trefoil, &hopf), || "permuted triple passes".into())?;
    Ok("trefoil and kink triples hold; permuted triple fails".into())
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::from(1), |a, k| a * k)
}

fn extremal() -> Check {
    let mut by_m = Vec::new();
    for m in [2i64, 3, 4] {
        let j = -4 * m - 1;
        // the witness at the bottom, plus unrelated higher classes
        let r: BigradedRanks =
            [((-2 * m, j), 1), ((-1, j + 4), 2), ((0, 1), 1), ((0, -1), 1), ((3, 9), 1)].into_iter().collect();
        ensure(has_extremal_witness(&r, m), || format!("m={m}: witness not detected"))?;
        let mut terms = Vec::new();
        for n in 0..=5u32 {
            let e = extremal_term(&v_n(&r, n as usize)).map_err(|x| x.to_string())?;
            let want = Rational::new(BigInt::from(j).pow(n), factorial(n));
            let ok = e.j_min == j && e.coeff.len() == 1 && e.coeff.get(&(-2 * m)) == Some(&want);
            ensure(ok, || format!("m={m} n={n}: got {e}, expected {want}*t^{}", -2 * m))?;
            terms.push(e);
        }
        by_m.push(terms);
    }
    for n in 0..=5 {
        for a in 0..by_m.len() {
            for b in a + 1..by_m.len() {
                ensure(by_m[a][n] != by_m[b][n], || format!("n={n}: extremal terms coincide"))?;
            }
        }
    }
    Ok("m = 2, 3, 4; n <= 5".into())
}

fn birman_lin_check(corpus: &Corpus) -> Check {
    let mut u2 = BTreeMap::new();
    for e in corpus.entries().iter().filter(|e| e.components == 1) {
        let v = jones_from_kh(&khovanov_polynomial(&ranks(&e.diagram)?)).normalized().map_err(|x| x.to_string())?;
        let u = birman_lin(&v, 2);
        let (zero, one) = (Rational::from_integer(0.into()), Rational::from_integer(1.into()));
        ensure(u.u(0) == &one && u.u(1) == &zero, || format!("{}: u = {u}", e.name))?;
        u2.insert(e.name.clone(), u.u(2).clone());
    }
    for (name, want) in [("3_1", -3), ("4_1", 3)] {
        let want = Rational::from_integer(want.into());
        ensure(u2.get(name) == Some(&want), || format!("{name}: u_2 = {:?}", u2.get(name)))?;
    }
    Ok(format!("{} knots; u_2(3_1) = -3, u_2(4_1) = 3", u2.len()))
}

fn main() {
    let corpus = Corpus::embedded();
    assert!(TABLE_KNOTS.iter().all(|k| corpus.load(k).is_ok()));
    let criteria: Vec<Criterion> = vec![
        ("golden table", Box::new(|| golden_table(&corpus))),
        ("Jones oracle equivalence", Box::new(|| jones_oracle(&corpus))),
        ("closed form equals series substitution", Box::new(|| series_route(&corpus))),
        ("v_n(-1, 1) equals Taylor coefficients of J(e^y)", Box::new(|| vassiliev_route(&corpus))),
        ("chain complex soundness", Box::new(|| chain_complex(&corpus))),
        ("invariance", Box::new(|| invariance(&corpus))),
        ("skein relation", Box::new(|| skein(&corpus))),
        ("extremal-term mechanism", Box::new(extremal)),
        ("Birman-Lin coefficients", Box::new(|| birman_lin_check(&corpus))),
    ];
    let mut failed = 0;
    for (k, (title, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: {title} ... PASS ({detail})", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: {title} ... FAIL\n{why}", k + 1);
            }
        }
    }
    println!("{}/{} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
