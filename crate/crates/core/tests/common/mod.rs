//! Shared constructions for the integration suites: the worked examples
//! (the S7 quotient, the level-2 coset action, the cyclic regular actions)
//! and explicit two-dimensional matrix models realizing prescribed
//! T-eigenvalues, R-eigenvalues, and parity.
#![allow(dead_code)]

use vvmf::exact::{rat, rational_to_i64, CycMatrix, Cyclotomic, Rational};
use vvmf::forms::{Assertions, Caps};
use vvmf::rep::Repn;

/// Trace-zero part of the 7-point action with T -> (17256)(34),
/// S -> (14)(27)(35).
pub fn s7_rep() -> Repn {
    Repn::from_permutations(
        7,
        &[vec![1, 4], vec![2, 7], vec![3, 5]],
        &[vec![1, 7, 2, 5, 6], vec![3, 4]],
        true,
    )
    .unwrap()
}

pub fn s7_descriptor() -> &'static str {
    r#"{"type":"permutation","degree":7,"S":[[1,4],[2,7],[3,5]],"T":[[1,7,2,5,6],[3,4]],"subtract_trivial":true}"#
}

/// Left-regular action on the six cosets of the principal congruence
/// subgroup of level 2: S -> (14)(26)(35), T -> (15)(24)(36).
pub fn gamma2_rep() -> Repn {
    Repn::from_permutations(
        6,
        &[vec![1, 4], vec![2, 6], vec![3, 5]],
        &[vec![1, 5], vec![2, 4], vec![3, 6]],
        false,
    )
    .unwrap()
}

pub fn gamma2_descriptor() -> &'static str {
    r#"{"type":"permutation","degree":6,"S":[[1,4],[2,6],[3,5]],"T":[[1,5],[2,4],[3,6]]}"#
}

/// Regular representation of Z/n (n | 12) as a permutation action:
/// T shifts by +1 and S by -3 on residues.
pub fn cyclic_regular_perm(n: usize) -> Repn {
    assert!(12 % n == 0);
    let cycles_of_shift = |shift: usize| -> Vec<Vec<usize>> {
        let mut seen = vec![false; n];
        let mut cycles = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x + 1);
                x = (x + shift) % n;
            }
            if cycle.len() > 1 {
                cycles.push(cycle);
            }
        }
        cycles
    };
    Repn::from_permutations(
        n,
        &cycles_of_shift((n - 3 % n) % n),
        &cycles_of_shift(1 % n),
        false,
    )
    .unwrap()
}

/// The same representation presented as the direct sum of its characters
/// chi^{12i/n}.
pub fn cyclic_regular_sum(n: usize) -> Repn {
    assert!(12 % n == 0);
    let mut rep = Repn::character(0);
    for i in 1..n {
        rep = rep.direct_sum(&Repn::character((12 * i / n) as i64)).unwrap();
    }
    rep
}

/// Build a 2-dimensional representation with T-eigenvalues e^{2 pi i e1},
/// e^{2 pi i e2} (distinct), R-eigenvalues xi^{m1}, xi^{m2}, and
/// rho(S^2) = eps, as T = diag(lambda_1, lambda_2) and S = (a 1; c -a) with
/// a = Tr R / (lambda_1 - lambda_2), c = eps - a^2.
pub fn two_dim_rep(e1: Rational, e2: Rational, m1: i64, m2: i64, eps: i64) -> Repn {
    let root = |r: &Rational| {
        let q = rational_to_i64(&Rational::from_integer(r.denom().clone())).unwrap();
        let p = rational_to_i64(&Rational::from_integer(r.numer().clone())).unwrap();
        Cyclotomic::root_of_unity(q as u32, p)
    };
    let l1 = root(&e1);
    let l2 = root(&e2);
    let xi = |m: i64| Cyclotomic::root_of_unity(6, m);
    let tr_r = xi(m1).add(&xi(m2));
    let a = tr_r.div(&l1.sub(&l2)).expect("distinct eigenvalues");
    let c = Cyclotomic::from_int(eps).sub(&a.mul(&a));
    let s = CycMatrix::from_rows(vec![
        vec![a.clone(), Cyclotomic::one(1)],
        vec![c, a.neg()],
    ])
    .unwrap();
    let t = CycMatrix::from_rows(vec![
        vec![l1, Cyclotomic::zero(1)],
        vec![Cyclotomic::zero(1), l2],
    ])
    .unwrap();
    Repn::from_matrices(s, t).expect("model satisfies the relations")
}

/// The nine two-dimensional good rows as
/// (tr_l, (e1, e2), (m1, m2), eps, k1, k2): trace data of rho(R), rho(R^2)
/// is determined by the xi-powers (m1, m2).
#[allow(clippy::type_complexity)]
pub fn all_rows() -> Vec<(Rational, (Rational, Rational), (i64, i64), i64, i64, i64)> {
    vec![
        (rat(1, 3), (rat(1, 12), rat(1, 4)), (3, 5), -1, 1, 3),
        (rat(1, 2), (rat(1, 6), rat(1, 3)), (2, 4), 1, 2, 4),
        (rat(2, 3), (rat(1, 4), rat(5, 12)), (3, 1), -1, 3, 5),
        (rat(5, 6), (rat(1, 3), rat(1, 2)), (2, 0), 1, 4, 6),
        (rat(1, 1), (rat(1, 4), rat(3, 4)), (1, 5), -1, 5, 7),
        (rat(7, 6), (rat(1, 2), rat(2, 3)), (0, 4), 1, 6, 8),
        (rat(4, 3), (rat(7, 12), rat(3, 4)), (3, 5), -1, 7, 9),
        (rat(3, 2), (rat(2, 3), rat(5, 6)), (2, 4), 1, 8, 10),
        (rat(5, 3), (rat(3, 4), rat(11, 12)), (3, 1), -1, 9, 11),
    ]
}

/// The order-24 model on which every y-resolution rule is blocked.
pub fn unresolvable_rep() -> Repn {
    two_dim_rep(rat(1, 24), rat(23, 24), 1, 5, -1)
}

pub fn asserted_good() -> Assertions {
    Assertions {
        good: true,
        positive: true,
        ..Assertions::default()
    }
}

/// Caps that skip the expensive image closure; classification then relies
/// on assertions.
pub fn fast_caps() -> Caps {
    Caps {
        order_cap: 200,
        closure_cap: 1,
    }
}

/// Render a representation's matrices as a descriptor JSON document.
pub fn matrices_descriptor_json(rep: &Repn, assert_block: Option<&str>) -> String {
    use vvmf::exact::format_rational;
    let order = rep.s_mat().order();
    let matrix = |m: &CycMatrix| -> String {
        let rows: Vec<String> = (0..m.rows())
            .map(|i| {
                let entries: Vec<String> = (0..m.cols())
                    .map(|j| {
                        let coeffs: Vec<String> = m
                            .at(i, j)
                            .coeffs()
                            .iter()
                            .map(|c| format!("\"{}\"", format_rational(c)))
                            .collect();
                        format!("{{\"coeffs\": [{}]}}", coeffs.join(", "))
                    })
                    .collect();
                format!("[{}]", entries.join(", "))
            })
            .collect();
        format!("[{}]", rows.join(", "))
    };
    let assert_part = match assert_block {
        Some(a) => format!(", \"assert\": {}", a),
        None => String::new(),
    };
    format!(
        "{{\"type\": \"matrices\", \"cyclotomic_order\": {}, \"S\": {}, \"T\": {}{}}}",
        order,
        matrix(rep.s_mat()),
        matrix(rep.t_mat()),
        assert_part
    )
}
