//! Representations of SL2(Z) given by exact matrices for the generators
//!
//!   T = (1 1; 0 1),   S = (0 -1; 1 0),   R = S*T = (0 -1; 1 1),
//!
//! subject to the defining relations S^4 = I, R^6 = I, S^2 = R^3, with S^2
//! central. Every constructor verifies the relations exactly and caches the
//! trace tables Tr(S^j) and Tr(R^j) that all downstream formulas consume.
//!
//! A representation may carry *virtual* character summands to subtract: a
//! trace-zero permutation quotient is stored as the full permutation matrices
//! together with the list of removed characters, and every derived scalar
//! quantity (traces, eigenvalue multiplicities, fixed-space dimension)
//! subtracts the corresponding contribution linearly. No complement basis is
//! ever materialized.

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use crate::exact::{rational_to_i64, CycMatrix, Cyclotomic, ExactError, Rational};

#[derive(Debug, Clone, Error)]
pub enum RepError {
    #[error("relation violated: {relation}")]
    RelationViolation { relation: &'static str },
    #[error("malformed cycles: {0}")]
    MalformedCycles(String),
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// chi is the character of eta^2: chi(T) = zeta_12, chi(S) = -i = zeta_12^9,
/// chi(R) = zeta_12^10.
pub fn chi_t(a: i64) -> Cyclotomic {
    Cyclotomic::root_of_unity(12, a)
}

pub fn chi_s(a: i64) -> Cyclotomic {
    Cyclotomic::root_of_unity(12, 9 * a)
}

pub fn chi_r(a: i64) -> Cyclotomic {
    Cyclotomic::root_of_unity(12, 10 * a)
}

/// Outcome of the breadth-first image closure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FiniteImage {
    Finite(u64),
    Unknown,
}

/// Parity decomposition data: ranks and generator traces of the even and odd
/// parts of rho, on which rho(S^2) acts as +1 and -1 respectively.
#[derive(Debug, Clone)]
pub struct ParityData {
    pub d_plus: usize,
    pub d_minus: usize,
    pub s_plus: Cyclotomic,
    pub s_minus: Cyclotomic,
    pub r1_plus: Cyclotomic,
    pub r1_minus: Cyclotomic,
    pub r2_plus: Cyclotomic,
    pub r2_minus: Cyclotomic,
}

/// Eigenvalue multiplicities: `alpha[s]` counts the eigenvalue i^s of rho(S),
/// `beta[r]` counts xi^r of rho(R) with xi = e^{2 pi i/6}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EigMultiplicities {
    pub alpha: [usize; 4],
    pub beta: [usize; 6],
}

#[derive(Clone, Debug)]
pub struct Repn {
    s: CycMatrix,
    t: CycMatrix,
    r: CycMatrix,
    /// Character exponents (mod 12) of virtual summands to subtract.
    subtracted: Vec<u8>,
    /// Direct-sum provenance; empty for atoms. Consumers may exploit
    /// summand-wise additivity of derived invariants.
    parts: Vec<Repn>,
    /// Raw traces Tr(S^j), j = 0..=3, before virtual subtraction.
    tr_s: [Cyclotomic; 4],
    /// Raw traces Tr(R^j), j = 0..=5.
    tr_r: [Cyclotomic; 6],
}

impl Repn {
    /// Build and validate a representation from matrices for S and T.
    pub fn from_matrices(s: CycMatrix, t: CycMatrix) -> Result<Repn, RepError> {
        Self::build(s, t, Vec::new(), Vec::new())
    }

    fn build(
        s: CycMatrix,
        t: CycMatrix,
        subtracted: Vec<u8>,
        parts: Vec<Repn>,
    ) -> Result<Repn, RepError> {
        if !s.is_square() || !t.is_square() || s.rows() != t.rows() {
            return Err(ExactError::Shape(format!(
                "S is {}x{}, T is {}x{}",
                s.rows(),
                s.cols(),
                t.rows(),
                t.cols()
            ))
            .into());
        }
        let r = s.mul(&t)?;
        let s2 = s.pow(2)?;
        if !s.pow(4)?.is_identity() {
            return Err(RepError::RelationViolation { relation: "S^4 = I" });
        }
        if !r.pow(6)?.is_identity() {
            return Err(RepError::RelationViolation { relation: "R^6 = I" });
        }
        if s2 != r.pow(3)? {
            return Err(RepError::RelationViolation {
                relation: "S^2 = R^3",
            });
        }
        if s2.mul(&t)? != t.mul(&s2)? {
            return Err(RepError::RelationViolation {
                relation: "S^2 T = T S^2",
            });
        }
        let tr_s = [
            Cyclotomic::from_int(s.rows() as i64),
            s.trace()?,
            s2.trace()?,
            s.pow(3)?.trace()?,
        ];
        let mut tr_r = Vec::with_capacity(6);
        let mut rp = CycMatrix::identity(r.rows(), r.order());
        for _ in 0..6 {
            tr_r.push(rp.trace()?);
            rp = rp.mul(&r)?;
        }
        let tr_r: [Cyclotomic; 6] = tr_r
            .try_into()
            .map_err(|_| RepError::Inconsistent("trace table".into()))?;
        Ok(Repn {
            s,
            t,
            r,
            subtracted,
            parts,
            tr_s,
            tr_r,
        })
    }

    /// The one-dimensional trivial representation.
    pub fn trivial() -> Repn {
        Self::character(0)
    }

    /// The character chi^a, as 1x1 matrices over Q(zeta_12).
    pub fn character(a: i64) -> Repn {
        let s = CycMatrix::from_rows(vec![vec![chi_s(a)]]).expect("1x1");
        let t = CycMatrix::from_rows(vec![vec![chi_t(a)]]).expect("1x1");
        Self::from_matrices(s, t).expect("characters satisfy the relations")
    }

    /// Permutation representation on 1..=degree from disjoint cycles for S
    /// and T. With `subtract_trivial`, all derived scalar data reports the
    /// virtual complement of the trivial summand.
    pub fn from_permutations(
        degree: usize,
        s_cycles: &[Vec<usize>],
        t_cycles: &[Vec<usize>],
        subtract_trivial: bool,
    ) -> Result<Repn, RepError> {
        if degree == 0 {
            return Err(RepError::MalformedCycles("degree must be positive".into()));
        }
        let s_perm = cycles_to_perm(degree, s_cycles)?;
        let t_perm = cycles_to_perm(degree, t_cycles)?;
        let s = perm_matrix(&s_perm);
        let t = perm_matrix(&t_perm);
        let subtracted = if subtract_trivial { vec![0u8] } else { Vec::new() };
        Self::build(s, t, subtracted, Vec::new())
    }

    /// Block-diagonal direct sum; virtual subtractions and provenance are
    /// carried along.
    pub fn direct_sum(&self, other: &Repn) -> Result<Repn, RepError> {
        let s = self.s.direct_sum(&other.s);
        let t = self.t.direct_sum(&other.t);
        let mut subtracted = self.subtracted.clone();
        subtracted.extend_from_slice(&other.subtracted);
        let parts = vec![self.clone(), other.clone()];
        Self::build(s, t, subtracted, parts)
    }

    /// Tensor with the character chi^a: S -> (-i)^a S, T -> zeta_12^a T.
    pub fn tensor_char(&self, a: i64) -> Result<Repn, RepError> {
        let s = self.s.scale_cyc(&chi_s(a));
        let t = self.t.scale_cyc(&chi_t(a));
        let subtracted = self
            .subtracted
            .iter()
            .map(|&x| ((x as i64 + a).rem_euclid(12)) as u8)
            .collect();
        let parts = self
            .parts
            .iter()
            .map(|p| p.tensor_char(a))
            .collect::<Result<Vec<_>, _>>()?;
        Self::build(s, t, subtracted, parts)
    }

    /// Dual representation: g -> transpose(g^{-1}).
    pub fn dual(&self) -> Result<Repn, RepError> {
        let s = self.s.inverse()?.transpose();
        let t = self.t.inverse()?.transpose();
        let subtracted = self
            .subtracted
            .iter()
            .map(|&x| ((12 - x as i64).rem_euclid(12)) as u8)
            .collect();
        let parts = self
            .parts
            .iter()
            .map(|p| p.dual())
            .collect::<Result<Vec<_>, _>>()?;
        Self::build(s, t, subtracted, parts)
    }

    /// Virtual dimension (matrix size minus subtracted summands).
    pub fn dim(&self) -> usize {
        self.s.rows() - self.subtracted.len()
    }

    pub fn matrix_dim(&self) -> usize {
        self.s.rows()
    }

    pub fn s_mat(&self) -> &CycMatrix {
        &self.s
    }

    pub fn t_mat(&self) -> &CycMatrix {
        &self.t
    }

    pub fn r_mat(&self) -> &CycMatrix {
        &self.r
    }

    pub fn subtracted(&self) -> &[u8] {
        &self.subtracted
    }

    pub fn parts(&self) -> &[Repn] {
        &self.parts
    }

    /// Tr rho(S^j) with virtual summands removed.
    pub fn trace_s(&self, j: usize) -> Cyclotomic {
        let mut t = self.tr_s[j % 4].clone();
        for &a in &self.subtracted {
            t = t.sub(&chi_s(a as i64 * j as i64));
        }
        t
    }

    /// Tr rho(R^j) with virtual summands removed.
    pub fn trace_r(&self, j: usize) -> Cyclotomic {
        let mut t = self.tr_r[j % 6].clone();
        for &a in &self.subtracted {
            t = t.sub(&chi_r(a as i64 * j as i64));
        }
        t
    }

    /// Decompose into even and odd parts, via Tr rho^{+-}(g) =
    /// (Tr rho(g) +- Tr rho(S^2 g))/2 and the identities S^2 S^j = S^{j+2},
    /// S^2 R^j = R^{j+3}.
    pub fn parity_split(&self) -> Result<ParityData, RepError> {
        let d = self.dim() as i64;
        let eps = self
            .trace_s(2)
            .as_rational()
            .and_then(|r| rational_to_i64(&r))
            .ok_or_else(|| {
                RepError::Inconsistent("Tr rho(S^2) is not a rational integer".into())
            })?;
        let half = Rational::new(1.into(), 2.into());
        let pair = |a: Cyclotomic, b: Cyclotomic| (a.add(&b).scale(&half), a.sub(&b).scale(&half));
        let (s_plus, s_minus) = pair(self.trace_s(1), self.trace_s(3));
        let (r1_plus, r1_minus) = pair(self.trace_r(1), self.trace_r(4));
        let (r2_plus, r2_minus) = pair(self.trace_r(2), self.trace_r(5));
        let dp = d + eps;
        let dm = d - eps;
        if dp < 0 || dm < 0 || dp % 2 != 0 || dm % 2 != 0 {
            return Err(RepError::Inconsistent(format!(
                "parity ranks from d = {}, Tr S^2 = {} are not nonnegative integers",
                d, eps
            )));
        }
        Ok(ParityData {
            d_plus: (dp / 2) as usize,
            d_minus: (dm / 2) as usize,
            s_plus,
            s_minus,
            r1_plus,
            r1_minus,
            r2_plus,
            r2_minus,
        })
    }

    /// Eigenvalue multiplicities of rho(S) and rho(R) by discrete Fourier
    /// sums over the trace tables: mult(e^{2 pi i s/m}) =
    /// (1/m) sum_j zeta_m^{-sj} Tr rho(g)^j.
    pub fn eig_multiplicities(&self) -> Result<EigMultiplicities, RepError> {
        let alpha_vec = dft_multiplicities(4, |j| self.trace_s(j))?;
        let beta_vec = dft_multiplicities(6, |j| self.trace_r(j))?;
        let total_a: usize = alpha_vec.iter().sum();
        let total_b: usize = beta_vec.iter().sum();
        if total_a != self.dim() || total_b != self.dim() {
            return Err(RepError::Inconsistent(
                "eigenvalue multiplicities do not sum to the dimension".into(),
            ));
        }
        Ok(EigMultiplicities {
            alpha: alpha_vec.try_into().unwrap(),
            beta: beta_vec.try_into().unwrap(),
        })
    }

    /// Dimension of the invariant subspace: the common kernel of S - I and
    /// T - I, minus one per subtracted trivial summand.
    pub fn fixed_space_dim(&self) -> Result<usize, RepError> {
        let n = self.matrix_dim();
        let order = self.s.order();
        let id = CycMatrix::identity(n, order);
        let stacked = self.s.sub(&id)?.vstack(&self.t.sub(&id)?)?;
        let k = stacked.kernel_dim();
        let removed = self.subtracted.iter().filter(|&&a| a % 12 == 0).count();
        if k < removed {
            return Err(RepError::Inconsistent(
                "virtual trivial summands exceed the invariant subspace".into(),
            ));
        }
        Ok(k - removed)
    }

    /// Breadth-first closure of <S, T> under multiplication. Returns the
    /// group order if the closure completes within `cap` elements.
    pub fn certify_finite_image(&self, cap: usize) -> FiniteImage {
        let order = self.s.order();
        let n = self.matrix_dim();
        let id = CycMatrix::identity(n, order);
        let gens = [self.s.clone(), self.t.clone()];
        let mut seen: HashMap<Vec<Rational>, ()> = HashMap::new();
        seen.insert(id.flat_key(), ());
        let mut queue = VecDeque::from([id]);
        while let Some(m) = queue.pop_front() {
            for g in &gens {
                let next = match m.mul(g).and_then(|x| x.embed(order)) {
                    Ok(x) => x,
                    Err(_) => return FiniteImage::Unknown,
                };
                let key = next.flat_key();
                if !seen.contains_key(&key) {
                    if seen.len() >= cap {
                        return FiniteImage::Unknown;
                    }
                    seen.insert(key, ());
                    queue.push_back(next);
                }
            }
        }
        FiniteImage::Finite(seen.len() as u64)
    }
}

/// DFT extraction of eigenvalue multiplicities for an operator of order
/// dividing m, given its power traces.
fn dft_multiplicities(
    m: usize,
    trace: impl Fn(usize) -> Cyclotomic,
) -> Result<Vec<usize>, RepError> {
    let traces: Vec<Cyclotomic> = (0..m).map(&trace).collect();
    let mut mults = Vec::with_capacity(m);
    for s in 0..m {
        let mut sum = Cyclotomic::zero(m as u32);
        for (j, tr) in traces.iter().enumerate() {
            let w = Cyclotomic::root_of_unity(m as u32, -((s * j) as i64));
            sum = sum.add(&w.mul(tr));
        }
        let val = sum.scale(&Rational::new(1.into(), (m as i64).into()));
        let as_int = val
            .as_rational()
            .and_then(|r| rational_to_i64(&r))
            .filter(|&x| x >= 0)
            .ok_or_else(|| {
                RepError::Inconsistent(format!(
                    "eigenvalue multiplicity for exponent {} is not a nonnegative integer: {}",
                    s, val
                ))
            })?;
        mults.push(as_int as usize);
    }
    Ok(mults)
}

fn cycles_to_perm(degree: usize, cycles: &[Vec<usize>]) -> Result<Vec<usize>, RepError> {
    let mut perm: Vec<usize> = (0..degree).collect();
    let mut used = vec![false; degree];
    for cycle in cycles {
        if cycle.is_empty() {
            continue;
        }
        for &x in cycle {
            if x == 0 || x > degree {
                return Err(RepError::MalformedCycles(format!(
                    "entry {} out of range 1..={}",
                    x, degree
                )));
            }
            if used[x - 1] {
                return Err(RepError::MalformedCycles(format!(
                    "entry {} appears more than once",
                    x
                )));
            }
            used[x - 1] = true;
        }
        for w in 0..cycle.len() {
            let from = cycle[w] - 1;
            let to = cycle[(w + 1) % cycle.len()] - 1;
            perm[from] = to;
        }
    }
    Ok(perm)
}

fn perm_matrix(perm: &[usize]) -> CycMatrix {
    let n = perm.len();
    let mut m = CycMatrix::zeros(n, n, 1);
    for (i, &img) in perm.iter().enumerate() {
        *m.at_mut(img, i) = Cyclotomic::one(1);
    }
    m
}

#[cfg(test)]
pub(crate) mod test_reps {
    use super::Repn;

    /// The trace-zero part of the 7-point S7 action with T -> (17256)(34)
    /// and S -> (14)(27)(35).
    pub fn s7_rep() -> Repn {
        Repn::from_permutations(
            7,
            &[vec![1, 4], vec![2, 7], vec![3, 5]],
            &[vec![1, 7, 2, 5, 6], vec![3, 4]],
            true,
        )
        .unwrap()
    }

    /// Left-regular action of S3 on the six cosets of Gamma(2), with
    /// S -> (14)(26)(35) and T -> (15)(24)(36); S*T has order 3.
    pub fn gamma2_rep() -> Repn {
        Repn::from_permutations(
            6,
            &[vec![1, 4], vec![2, 6], vec![3, 5]],
            &[vec![1, 5], vec![2, 4], vec![3, 6]],
            false,
        )
        .unwrap()
    }

    /// Regular representation of Z/n (n | 12) on residues: T shifts by +1,
    /// S shifts by -3.
    pub fn cyclic_regular_rep(n: usize) -> Repn {
        assert!(12 % n == 0);
        let cycle_of_shift = |shift: usize| -> Vec<Vec<usize>> {
            // decompose i -> i + shift (mod n) into cycles on 1..=n
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
            &cycle_of_shift((n - 3 % n) % n),
            &cycle_of_shift(1 % n),
            false,
        )
        .unwrap()
    }
}
