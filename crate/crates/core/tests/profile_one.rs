mod common;
use common::*;
use std::time::Instant;
use vvmf::forms::RepAnalysis;
use vvmf::rep::Repn;

#[test]
#[ignore]
fn profile_single_members() {
    let t0 = Instant::now();
    let rep = s7_rep().tensor_char(5).unwrap();
    println!("build twisted s7: {:?}", t0.elapsed());
    let t0 = Instant::now();
    let an = RepAnalysis::analyze(rep.clone(), None, asserted_good(), fast_caps()).unwrap();
    println!("analyze twisted s7: {:?}", t0.elapsed());
    let t0 = Instant::now();
    let gw = an.generator_weights().unwrap();
    println!("weights (y = {:?}): {:?}", gw.y, t0.elapsed());
    let t0 = Instant::now();
    for k in 2..=60i64 {
        an.euler_standard(k).unwrap();
    }
    println!("euler sweep 2..60: {:?}", t0.elapsed());
    let t0 = Instant::now();
    let dual_an =
        RepAnalysis::analyze(rep.dual().unwrap(), None, asserted_good(), fast_caps()).unwrap();
    println!("dual analyze: {:?}", t0.elapsed());
    let t0 = Instant::now();
    for k in 3..=26i64 {
        dual_an.euler_cusp(k).unwrap();
    }
    println!("dual cusp euler sweep: {:?}", t0.elapsed());
}

#[test]
#[ignore]
fn profile_corpus_classes() {
    let mut cases: Vec<(&str, Repn)> = vec![
        ("s7", s7_rep()),
        ("s7 x chi^3", s7_rep().tensor_char(3).unwrap()),
        ("gamma2", gamma2_rep()),
        ("gamma2 x chi^7", gamma2_rep().tensor_char(7).unwrap()),
        ("cyclic12 perm", cyclic_regular_perm(12)),
        ("cyclic12 sum", cyclic_regular_sum(12)),
        ("cyclic12 sum x chi^5", cyclic_regular_sum(12).tensor_char(5).unwrap()),
        ("chi2 + s7", Repn::character(2).direct_sum(&s7_rep()).unwrap()),
    ];
    for (_, (e1, e2), (m1, m2), eps, _, _) in all_rows().into_iter().take(2) {
        cases.push(("row", two_dim_rep(e1, e2, m1, m2, eps)));
    }
    for (name, rep) in cases {
        let t0 = Instant::now();
        let an = RepAnalysis::analyze(rep.clone(), None, asserted_good(), fast_caps()).unwrap();
        let t_an = t0.elapsed();
        let t0 = Instant::now();
        let gw = an.generator_weights().unwrap();
        let t_gw = t0.elapsed();
        let t0 = Instant::now();
        for k in 2..=60i64 {
            an.euler_standard(k).unwrap();
        }
        let t_euler = t0.elapsed();
        let t0 = Instant::now();
        let dual_an =
            RepAnalysis::analyze(rep.dual().unwrap(), None, asserted_good(), fast_caps()).unwrap();
        for k in 3..=26i64 {
            dual_an.euler_cusp(k).unwrap();
        }
        let t_dual = t0.elapsed();
        println!(
            "{:22} analyze {:>10.1?}  weights {:>10.1?} (resolved {})  euler {:>10.1?}  dual {:>10.1?}",
            name,
            t_an,
            t_gw,
            gw.weight_multiset().is_ok(),
            t_euler,
            t_dual
        );
    }
}
