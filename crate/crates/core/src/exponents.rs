//! Spectra of rho(T) and choices of exponents L with rho(T) = e^{2 pi i L}.
//!
//! L is represented by its spectrum only: pairs (exponent, Jordan block
//! size) refined by parity, never an explicit matrix. Every downstream
//! formula consumes Tr L, its parity parts, and the exponent multiset; the
//! conjugating data in the classification of matrix logarithms yields
//! isomorphic extensions and is therefore redundant.
//!
//! Eigenvalues of rho(T) are restricted to roots of unity (rho(T)
//! quasi-unipotent), which keeps everything in exact cyclotomic arithmetic.
//! Callers with other representations supply the spectrum explicitly.

use thiserror::Error;

use crate::exact::{
    rat_int, rational_ceil, rational_floor, rational_frac, rational_to_i64, CycMatrix, Cyclotomic,
    Rational,
};
use crate::rep::{chi_s, chi_t, RepError, Repn};

#[derive(Debug, Clone, Error)]
pub enum SpectrumError {
    #[error("rho(T) is not quasi-unipotent within cap {cap}; supply an explicit spectrum")]
    NotQuasiUnipotentWithinCap { cap: usize },
    #[error("invalid spectrum: {0}")]
    Invalid(String),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Exact(#[from] crate::exact::ExactError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

/// One group of eigenvalue data of rho(T): the eigenvalue is
/// e^{2 pi i rotation} with rotation in [0,1), occurring in `mult` Jordan
/// blocks of size `block` inside the even or odd part of rho.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumEntry {
    pub rotation: Rational,
    pub block: usize,
    pub parity: Parity,
    pub mult: usize,
}

/// The spectrum of rho(T), with the detected order n (least n with
/// rho(T)^n = I, or with rho(T)^n - I nilpotent in the non-semisimple case).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TSpectrum {
    pub order: u32,
    pub entries: Vec<SpectrumEntry>,
}

impl TSpectrum {
    pub fn dim(&self) -> usize {
        self.entries.iter().map(|e| e.block * e.mult).sum()
    }

    pub fn dim_of_parity(&self, p: Parity) -> usize {
        self.entries
            .iter()
            .filter(|e| e.parity == p)
            .map(|e| e.block * e.mult)
            .sum()
    }

    pub(crate) fn sorted(mut self) -> Self {
        self.entries
            .sort_by(|a, b| (&a.rotation, a.block, a.parity).cmp(&(&b.rotation, b.block, b.parity)));
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntervalKind {
    /// [c, c+1)
    ClosedOpen,
    /// (c, c+1]
    OpenClosed,
}

/// A half-open interval of length one, the target for exponent real parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lower: Rational,
    pub kind: IntervalKind,
}

impl Interval {
    pub fn closed_open(lower: Rational) -> Interval {
        Interval {
            lower,
            kind: IntervalKind::ClosedOpen,
        }
    }

    pub fn open_closed(lower: Rational) -> Interval {
        Interval {
            lower,
            kind: IntervalKind::OpenClosed,
        }
    }

    /// The unique representative of `rotation + Z` inside the interval.
    pub fn lift(&self, rotation: &Rational) -> Rational {
        let t = match self.kind {
            IntervalKind::ClosedOpen => rational_ceil(&(&self.lower - rotation)),
            IntervalKind::OpenClosed => rational_floor(&(&self.lower + &rat_int(1) - rotation)),
        };
        rotation + Rational::from_integer(t)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let upper = &self.lower + rat_int(1);
        match self.kind {
            IntervalKind::ClosedOpen => *x >= self.lower && *x < upper,
            IntervalKind::OpenClosed => *x > self.lower && *x <= upper,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentEntry {
    pub exponent: Rational,
    pub block: usize,
    pub parity: Parity,
    pub mult: usize,
}

/// A choice of exponents for rho relative to an interval: the spectrum of an
/// endomorphism L with rho(T) = e^{2 pi i L} whose eigenvalues have real
/// part in the interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentChoice {
    pub interval: Interval,
    pub entries: Vec<ExponentEntry>,
    pub tr_l: Rational,
    pub tr_l_plus: Rational,
    pub tr_l_minus: Rational,
}

impl ExponentChoice {
    /// Exponents listed with multiplicity (a Jordan block of size b
    /// contributes b equal diagonal entries).
    pub fn exponent_multiset(&self) -> Vec<Rational> {
        let mut out = Vec::new();
        for e in &self.entries {
            for _ in 0..e.block * e.mult {
                out.push(e.exponent.clone());
            }
        }
        out.sort();
        out
    }

    pub fn has_rotation_zero(&self) -> bool {
        self.entries
            .iter()
            .any(|e| rational_frac(&e.exponent).is_integer() && e.mult > 0)
    }
}

/// Compute the spectrum of rho(T).
///
/// Semisimple case: the least n <= cap with rho(T)^n = I is found by
/// iterating powers; the multiplicity of e^{2 pi i m/n} is the Fourier sum
/// (1/n) sum_j zeta_n^{-mj} Tr rho(T)^j, refined by parity through the
/// projected traces (1/n) sum_j zeta_n^{-mj} Tr((I +- rho(S^2))/2 rho(T)^j).
///
/// Otherwise the least n <= cap with rho(T)^n - I nilpotent produces Jordan
/// data by exact rank computations of powers of (rho(T) - lambda), again
/// refined by parity.
pub fn t_spectrum(rep: &Repn, cap: usize) -> Result<TSpectrum, SpectrumError> {
    let n_mat = rep.matrix_dim();
    let order = rep.t_mat().order();
    let t = rep.t_mat();
    let s2 = rep.s_mat().pow(2)?;

    // First pass: look for finite order, caching plain and projected traces.
    let mut traces: Vec<Cyclotomic> = vec![Cyclotomic::from_int(n_mat as i64)];
    let mut s2_traces: Vec<Cyclotomic> = vec![s2.trace()?];
    let mut power = t.clone();
    let mut found_order: Option<u32> = None;
    for j in 1..=cap {
        if power.is_identity() {
            found_order = Some(j as u32);
            break;
        }
        traces.push(power.trace()?);
        s2_traces.push(s2.mul(&power)?.trace()?);
        power = power.mul(t)?.embed(order)?;
    }

    if let Some(n) = found_order {
        return semisimple_spectrum(rep, n, &traces, &s2_traces);
    }

    // Second pass: least n with (T^n - I) nilpotent.
    let id = CycMatrix::identity(n_mat, order);
    let mut tn = t.clone();
    for n in 1..=cap {
        let m = tn.sub(&id)?;
        if is_nilpotent(&m, n_mat)? {
            return jordan_spectrum(rep, n as u32, &s2);
        }
        tn = tn.mul(t)?.embed(order)?;
    }
    Err(SpectrumError::NotQuasiUnipotentWithinCap { cap })
}

fn is_nilpotent(m: &CycMatrix, dim: usize) -> Result<bool, SpectrumError> {
    let mut k = 1usize;
    let mut p = m.clone();
    while k < dim {
        p = p.mul(&p)?;
        k *= 2;
    }
    Ok(p.is_zero())
}

fn semisimple_spectrum(
    rep: &Repn,
    n: u32,
    traces: &[Cyclotomic],
    s2_traces: &[Cyclotomic],
) -> Result<TSpectrum, SpectrumError> {
    let parity = rep.parity_split()?;
    let half = Rational::new(1.into(), 2.into());
    let scale = Rational::new(1.into(), (n as i64).into());
    let mut entries = Vec::new();
    let mut seen_plus = 0usize;
    let mut seen_minus = 0usize;
    for m in 0..n as usize {
        let mut sum_plus = Cyclotomic::zero(n);
        let mut sum_minus = Cyclotomic::zero(n);
        for j in 0..n as usize {
            let w = Cyclotomic::root_of_unity(n, -((m * j) as i64));
            // Adjusted traces: subtract each virtual chi^a contribution.
            let mut tr = traces[j].clone();
            let mut tr2 = s2_traces[j].clone();
            for &a in rep.subtracted() {
                let chi_tj = chi_t(a as i64 * j as i64);
                tr = tr.sub(&chi_tj);
                // chi^a(S^2 T^j) = chi^a(S)^2 chi^a(T^j)
                tr2 = tr2.sub(&chi_s(2 * a as i64).mul(&chi_tj));
            }
            let plus = tr.add(&tr2).scale(&half);
            let minus = tr.sub(&tr2).scale(&half);
            sum_plus = sum_plus.add(&w.mul(&plus));
            sum_minus = sum_minus.add(&w.mul(&minus));
        }
        for (sum, parity_tag) in [(sum_plus, Parity::Even), (sum_minus, Parity::Odd)] {
            let mult = sum
                .scale(&scale)
                .as_rational()
                .and_then(|r| rational_to_i64(&r))
                .filter(|&x| x >= 0)
                .ok_or_else(|| {
                    SpectrumError::Invalid(format!(
                        "multiplicity of rotation {}/{} is not a nonnegative integer",
                        m, n
                    ))
                })? as usize;
            if mult > 0 {
                match parity_tag {
                    Parity::Even => seen_plus += mult,
                    Parity::Odd => seen_minus += mult,
                }
                entries.push(SpectrumEntry {
                    rotation: Rational::new((m as i64).into(), (n as i64).into()),
                    block: 1,
                    parity: parity_tag,
                    mult,
                });
            }
        }
    }
    if seen_plus != parity.d_plus || seen_minus != parity.d_minus {
        return Err(SpectrumError::Invalid(
            "parity-refined multiplicities do not sum to the parity ranks".into(),
        ));
    }
    Ok(TSpectrum { order: n, entries }.sorted())
}

fn jordan_spectrum(rep: &Repn, n: u32, s2: &CycMatrix) -> Result<TSpectrum, SpectrumError> {
    if !rep.subtracted().is_empty() {
        return Err(SpectrumError::Invalid(
            "virtual subtraction is only supported for semisimple rho(T)".into(),
        ));
    }
    let dim = rep.matrix_dim();
    let base_order = rep.t_mat().order();
    let order = num_integer::lcm(base_order, n);
    let t = rep.t_mat().embed(order)?;
    let id = CycMatrix::identity(dim, order);
    // Parity projectors (I +- S^2)/2 commute with T.
    let half = Rational::new(1.into(), 2.into());
    let s2e = s2.embed(order)?;
    let proj_plus = id.add(&s2e)?.scale(&half);
    let proj_minus = id.sub(&s2e)?.scale(&half);

    let mut entries = Vec::new();
    let mut total = 0usize;
    for m in 0..n as usize {
        let lam = Cyclotomic::root_of_unity(n, m as i64).embed(order)?;
        let shifted = t.sub(&id.scale_cyc(&lam).embed(order)?)?;
        for (proj, parity) in [(&proj_plus, Parity::Even), (&proj_minus, Parity::Odd)] {
            // r_j = rank((T - lambda)^j P); the count of blocks of size >= j
            // is r_{j-1} - r_j.
            let mut ranks = vec![proj.rank()];
            let mut pw = proj.clone();
            loop {
                pw = shifted.mul(&pw)?;
                let r = pw.rank();
                let stable = *ranks.last().unwrap() == r;
                ranks.push(r);
                if r == 0 || stable {
                    break;
                }
            }
            let ge: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
            for size in 1..=ge.len() {
                let count = ge[size - 1] - ge.get(size).copied().unwrap_or(0);
                if count > 0 {
                    total += size * count;
                    entries.push(SpectrumEntry {
                        rotation: Rational::new((m as i64).into(), (n as i64).into()),
                        block: size,
                        parity,
                        mult: count,
                    });
                }
            }
        }
    }
    if total != dim {
        return Err(SpectrumError::Invalid(format!(
            "Jordan data covers dimension {} of {}",
            total, dim
        )));
    }
    Ok(TSpectrum { order: n, entries }.sorted())
}

/// Lift each rotation into the interval; Tr L and its parity parts follow.
pub fn choose_exponents(spec: &TSpectrum, interval: Interval) -> ExponentChoice {
    let mut entries = Vec::new();
    let mut tr_l = Rational::from_integer(0.into());
    let mut tr_plus = tr_l.clone();
    let mut tr_minus = tr_l.clone();
    for e in &spec.entries {
        let exponent = interval.lift(&e.rotation);
        debug_assert!(interval.contains(&exponent));
        let weight = Rational::from_integer(((e.block * e.mult) as i64).into());
        let contribution = &exponent * &weight;
        tr_l += &contribution;
        match e.parity {
            Parity::Even => tr_plus += &contribution,
            Parity::Odd => tr_minus += &contribution,
        }
        entries.push(ExponentEntry {
            exponent,
            block: e.block,
            parity: e.parity,
            mult: e.mult,
        });
    }
    entries.sort_by(|a, b| (&a.exponent, a.block, a.parity).cmp(&(&b.exponent, b.block, b.parity)));
    ExponentChoice {
        interval,
        entries,
        tr_l,
        tr_l_plus: tr_plus,
        tr_l_minus: tr_minus,
    }
}

/// Exponents relative to [0, 1): holomorphic vector valued modular forms.
pub fn standard_exponents(spec: &TSpectrum) -> ExponentChoice {
    choose_exponents(spec, Interval::closed_open(rat_int(0)))
}

/// Exponents relative to (0, 1]: cusp forms.
pub fn cusp_exponents(spec: &TSpectrum) -> ExponentChoice {
    choose_exponents(spec, Interval::open_closed(rat_int(0)))
}

/// Exponents relative to [n/12, n/12 + 1): the image of multiplication by
/// eta^{2n}.
pub fn eta_shifted(spec: &TSpectrum, n: i64) -> ExponentChoice {
    choose_exponents(
        spec,
        Interval::closed_open(Rational::new(n.into(), 12.into())),
    )
}
