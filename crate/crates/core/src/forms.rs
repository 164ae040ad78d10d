//! The holomorphic theory of vector valued modular forms for a
//! representation rho of SL2(Z): Euler characteristics of the bundles of
//! weight-k forms, dimension formulas, free-module generator weights, roots,
//! and splitting types over P(4,6).
//!
//! Everything is evaluated symbolically in small cyclotomic fields and only
//! then coerced to integers, with hard failures on non-integrality, so any
//! drift in traces or exponents surfaces immediately. Euler characteristics
//! are computed along two independent routes (the parity-selected closed
//! formula and the fixed-point Riemann-Roch formula of [`crate::wpline`])
//! and asserted equal.
//!
//! Weight-one dimensions are first-class *undetermined* values: the quantity
//! y = dim S_1(rho-dual) has no general formula, and this module encodes
//! only the legitimate escape routes (parity vanishing, the eta-multiplication
//! isomorphism when the exponent layout permits it, nonnegativity pinning
//! from the multiplicity table, summand-wise additivity, and an explicit
//! user override).

use thiserror::Error;

use crate::exact::{
    rat, rat_int, rational_frac, rational_to_i64, Cyclotomic, ExactError, Rational,
};
use crate::exponents::{
    cusp_exponents, standard_exponents, t_spectrum, ExponentChoice, IntervalKind, Parity,
    SpectrumError, TSpectrum,
};
use crate::rep::{chi_s, chi_t, EigMultiplicities, FiniteImage, ParityData, RepError, Repn};
use crate::wpline::{euler_rr_p46, SplittingType, WplineError};

#[derive(Debug, Clone, Error)]
pub enum FormsError {
    #[error("integrality failure in {what}: got {value}")]
    IntegralityFailure { what: String, value: String },
    #[error("weight-{weight} generator multiplicity is negative ({value})")]
    NegativeMultiplicity { weight: u8, value: i64 },
    #[error("dim S_1 of the dual is undetermined (pinned only to {lo}..={hi})")]
    YUndetermined { lo: usize, hi: usize },
    #[error("inconsistent input: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error(transparent)]
    Wpline(#[from] WplineError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// How firmly a classification property is known.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certainty {
    Certified,
    Asserted,
    Unknown,
}

impl Certainty {
    pub fn established(self) -> bool {
        matches!(self, Certainty::Certified | Certainty::Asserted)
    }
}

/// Classification certificates for a representation. Finite image implies
/// good implies positive; unitarizable implies positive. Where no
/// certificate is derivable the user may assert a property, and the flag
/// records the difference.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassFlags {
    pub finite_image: FiniteImage,
    pub good: Certainty,
    pub positive: Certainty,
    pub unitarizable: Certainty,
}

/// User-supplied assertions for properties with no decision procedure.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Assertions {
    pub good: bool,
    pub positive: bool,
    pub unitarizable: bool,
    /// Explicit override for y = dim S_1(rho-dual).
    pub y_override: Option<usize>,
}

/// Enumeration caps: T-order detection and image-closure size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub order_cap: usize,
    pub closure_cap: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            order_cap: 1000,
            closure_cap: 20000,
        }
    }
}

/// Certificate propagation: run the image closure, then fold in assertions.
pub fn classify(rep: &Repn, caps: Caps, assertions: &Assertions) -> ClassFlags {
    let finite_image = rep.certify_finite_image(caps.closure_cap);
    let certified = matches!(finite_image, FiniteImage::Finite(_));
    let lift = |asserted: bool| {
        if certified {
            Certainty::Certified
        } else if asserted {
            Certainty::Asserted
        } else {
            Certainty::Unknown
        }
    };
    let good = lift(assertions.good);
    let unitarizable = lift(assertions.unitarizable);
    let positive = if good == Certainty::Certified || unitarizable == Certainty::Certified {
        Certainty::Certified
    } else if assertions.positive || good == Certainty::Asserted || unitarizable == Certainty::Asserted
    {
        Certainty::Asserted
    } else {
        Certainty::Unknown
    };
    ClassFlags {
        finite_image,
        good,
        positive,
        unitarizable,
    }
}

/// y = dim S_1(rho-dual), either exactly or pinned to a range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum YValue {
    Exact(usize),
    Range { lo: usize, hi: usize },
}

impl YValue {
    pub fn exact(self) -> Option<usize> {
        match self {
            YValue::Exact(v) => Some(v),
            YValue::Range { .. } => None,
        }
    }

    pub fn bounds(self) -> (usize, usize) {
        match self {
            YValue::Exact(v) => (v, v),
            YValue::Range { lo, hi } => (lo, hi),
        }
    }

    fn add(self, other: YValue) -> YValue {
        let (al, ah) = self.bounds();
        let (bl, bh) = other.bounds();
        if al == ah && bl == bh {
            YValue::Exact(al + bl)
        } else {
            YValue::Range {
                lo: al + bl,
                hi: ah + bh,
            }
        }
    }
}

/// Reliability of a reported quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Exact,
    ConditionalOnPositivity,
    Undetermined,
}

/// Multiplicity of one generator weight, exact or bracketed by an
/// unresolved y.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightRow {
    Exact(usize),
    Range { lo: usize, hi: usize },
}

impl WeightRow {
    fn bounds(self) -> (usize, usize) {
        match self {
            WeightRow::Exact(v) => (v, v),
            WeightRow::Range { lo, hi } => (lo, hi),
        }
    }

    fn add(self, other: WeightRow) -> WeightRow {
        let (al, ah) = self.bounds();
        let (bl, bh) = other.bounds();
        if al == ah && bl == bh {
            WeightRow::Exact(al + bl)
        } else {
            WeightRow::Range {
                lo: al + bl,
                hi: ah + bh,
            }
        }
    }

    pub fn exact(self) -> Option<usize> {
        match self {
            WeightRow::Exact(v) => Some(v),
            WeightRow::Range { .. } => None,
        }
    }
}

/// The free-module data of M(rho) over M(1): multiplicities of the
/// generator weights 0..=11, the invariant dimension x = dim M_0, and
/// y = dim S_1(rho-dual).
#[derive(Debug, Clone)]
pub struct GeneratorWeights {
    pub rows: [WeightRow; 12],
    pub x: usize,
    pub y: YValue,
    pub status: Status,
    pub tr_l: Rational,
}

impl GeneratorWeights {
    /// The weights k_1 <= ... <= k_d with multiplicity; errors when y is
    /// unresolved.
    pub fn weight_multiset(&self) -> Result<Vec<u8>, FormsError> {
        let mut out = Vec::new();
        for (w, row) in self.rows.iter().enumerate() {
            match row {
                WeightRow::Exact(m) => out.extend(std::iter::repeat(w as u8).take(*m)),
                WeightRow::Range { .. } => {
                    let (lo, hi) = self.y.bounds();
                    return Err(FormsError::YUndetermined { lo, hi });
                }
            }
        }
        Ok(out)
    }

    /// The roots a_j = -k_j, descending.
    pub fn roots(&self) -> Result<Vec<i64>, FormsError> {
        Ok(self
            .weight_multiset()?
            .into_iter()
            .map(|w| -(w as i64))
            .collect())
    }
}

/// One row of a dimension report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DimEntry {
    pub k: i64,
    pub dim: Option<usize>,
    pub status: Status,
}

#[derive(Debug, Clone)]
pub struct DimReport {
    pub cusp: bool,
    pub entries: Vec<DimEntry>,
}

/// Numerator of the Hilbert-Poincare series and its expansion:
/// P(X) = (sum_j X^{k_j}) / ((1-X^4)(1-X^6)).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertData {
    pub numerator: [usize; 12],
    pub series: Vec<usize>,
}

/// A bundle of weight-k vector valued modular forms: the representation
/// together with a weight and a choice of exponents. By the decomposition
/// theorem this datum determines the bundle up to isomorphism.
#[derive(Debug, Clone)]
pub struct BundleSpec {
    pub rep: Repn,
    pub weight: i64,
    pub exponents: ExponentChoice,
}

/// Result of dualizing a bundle: the bundle of the stated representation
/// and weight, with standard or cusp exponents.
#[derive(Debug, Clone)]
pub struct DualSpec {
    pub rep: Repn,
    pub weight: i64,
    pub cusp: bool,
}

/// A representation analyzed once: parity split, eigenvalue multiplicities,
/// T-spectrum, canonical exponent choices, invariants, certificates.
#[derive(Clone)]
pub struct RepAnalysis {
    pub rep: Repn,
    pub parity: ParityData,
    pub mults: EigMultiplicities,
    pub spectrum: TSpectrum,
    pub standard: ExponentChoice,
    pub cusp: ExponentChoice,
    /// dim of the invariant subspace (= dim M_0 for good representations).
    pub x: usize,
    pub flags: ClassFlags,
    assertions: Assertions,
    caps: Caps,
}

impl RepAnalysis {
    pub fn analyze(
        rep: Repn,
        spectrum_override: Option<TSpectrum>,
        assertions: Assertions,
        caps: Caps,
    ) -> Result<RepAnalysis, FormsError> {
        let flags = classify(&rep, caps, &assertions);
        Self::analyze_with_flags(rep, spectrum_override, assertions, caps, flags)
    }

    fn analyze_with_flags(
        rep: Repn,
        spectrum_override: Option<TSpectrum>,
        assertions: Assertions,
        caps: Caps,
        flags: ClassFlags,
    ) -> Result<RepAnalysis, FormsError> {
        let parity = rep.parity_split()?;
        let mults = rep.eig_multiplicities()?;
        let spectrum = match spectrum_override {
            Some(spec) => {
                validate_spectrum(&spec, &parity)?;
                spec.sorted()
            }
            None => t_spectrum(&rep, caps.order_cap)?,
        };
        let standard = standard_exponents(&spectrum);
        let cusp = cusp_exponents(&spectrum);
        let x = rep.fixed_space_dim()?;
        Ok(RepAnalysis {
            rep,
            parity,
            mults,
            spectrum,
            standard,
            cusp,
            x,
            flags,
            assertions,
            caps,
        })
    }

    /// Analyze a representation derived from this one (dual, twist, or
    /// summand). Classification certainty transfers: goodness and positivity
    /// are stable under character twists by definition, under direct
    /// summands, and under duals for every representation in scope here; the
    /// image closure is not re-enumerated.
    fn derived(&self, rep: Repn) -> Result<RepAnalysis, FormsError> {
        let assertions = Assertions {
            y_override: None,
            ..self.assertions
        };
        let flags = ClassFlags {
            finite_image: FiniteImage::Unknown,
            ..self.flags
        };
        Self::analyze_with_flags(rep, None, assertions, self.caps, flags)
    }

    /// chi of the weight-k bundle with the given exponents, via the
    /// parity-selected closed formula, cross-checked against the fixed-point
    /// Riemann-Roch formula on P(4,6).
    pub fn euler_char(&self, k: i64, choice: &ExponentChoice) -> Result<i64, FormsError> {
        let a = self.euler_corollary(k, choice)?;
        let b = self.euler_riemann_roch(k, choice)?;
        if a != b {
            return Err(FormsError::IntegralityFailure {
                what: format!("euler characteristic routes at weight {}", k),
                value: format!("{} vs {}", a, b),
            });
        }
        rational_to_i64(&a).ok_or_else(|| FormsError::IntegralityFailure {
            what: format!("euler characteristic at weight {}", k),
            value: a.to_string(),
        })
    }

    pub fn euler_standard(&self, k: i64) -> Result<i64, FormsError> {
        self.euler_char(k, &self.standard.clone())
    }

    pub fn euler_cusp(&self, k: i64) -> Result<i64, FormsError> {
        self.euler_char(k, &self.cusp.clone())
    }

    /// Parity-selected formula: for even k only the even part contributes,
    ///
    ///   chi = (5+k) d+/12 + i^k s+/4 + xi^k r1+/(3(1-zeta))
    ///       + zeta^k r2+/(3(1-zeta^{-1})) - Tr L+,
    ///
    /// and for odd k the same expression in the odd data.
    fn euler_corollary(&self, k: i64, choice: &ExponentChoice) -> Result<Rational, FormsError> {
        let even = k.rem_euclid(2) == 0;
        let p = &self.parity;
        let (dd, s_tr, r1, r2, trl) = if even {
            (p.d_plus, &p.s_plus, &p.r1_plus, &p.r2_plus, &choice.tr_l_plus)
        } else {
            (
                p.d_minus,
                &p.s_minus,
                &p.r1_minus,
                &p.r2_minus,
                &choice.tr_l_minus,
            )
        };
        let zeta = Cyclotomic::root_of_unity(3, 1);
        let one = Cyclotomic::one(3);
        let inv_3_1mz = one.sub(&zeta).scale(&rat(3, 1)).inv()?;
        let inv_3_1mzi = one.sub(&zeta.pow(2)?).scale(&rat(3, 1)).inv()?;
        let mut total =
            Cyclotomic::from_rational(rat((5 + k) * dd as i64, 12) - trl.clone());
        total = total.add(&Cyclotomic::root_of_unity(4, k).mul(s_tr).scale(&rat(1, 4)));
        total = total.add(&Cyclotomic::root_of_unity(6, k).mul(r1).mul(&inv_3_1mz));
        total = total.add(&Cyclotomic::root_of_unity(3, k).mul(r2).mul(&inv_3_1mzi));
        total.as_rational().ok_or_else(|| FormsError::IntegralityFailure {
            what: format!("closed euler formula at weight {}", k),
            value: format!("{}", total),
        })
    }

    /// Riemann-Roch route: determinant degrees from dk - 12 Tr L, parity
    /// ranks swapped for odd k, and stacky-point traces i^k rho(S),
    /// zeta^k rho(R^2), xi^k rho(R) with their inverses.
    fn euler_riemann_roch(&self, k: i64, choice: &ExponentChoice) -> Result<Rational, FormsError> {
        let p = &self.parity;
        let d = self.rep.dim() as i64;
        let trl12 = twelve_times(&choice.tr_l, "12 Tr L")?;
        let trl12_plus = twelve_times(&choice.tr_l_plus, "12 Tr L+")?;
        let trl12_minus = twelve_times(&choice.tr_l_minus, "12 Tr L-")?;
        let det = d * k - trl12;
        let even = k.rem_euclid(2) == 0;
        let (rank_plus, rank_minus, det_plus, det_minus) = if even {
            (
                p.d_plus as i64,
                p.d_minus as i64,
                k * p.d_plus as i64 - trl12_plus,
                k * p.d_minus as i64 - trl12_minus,
            )
        } else {
            (
                p.d_minus as i64,
                p.d_plus as i64,
                k * p.d_minus as i64 - trl12_minus,
                k * p.d_plus as i64 - trl12_plus,
            )
        };
        let tr_i = Cyclotomic::root_of_unity(4, k).mul(&self.rep.trace_s(1));
        let tr_neg_i = Cyclotomic::root_of_unity(4, -k).mul(&self.rep.trace_s(3));
        let tr_zeta = Cyclotomic::root_of_unity(3, k).mul(&self.rep.trace_r(2));
        let tr_zeta_inv = Cyclotomic::root_of_unity(3, -k).mul(&self.rep.trace_r(4));
        let tr_xi = Cyclotomic::root_of_unity(6, k).mul(&self.rep.trace_r(1));
        let tr_xi_inv = Cyclotomic::root_of_unity(6, -k).mul(&self.rep.trace_r(5));
        Ok(euler_rr_p46(
            d,
            det,
            rank_plus,
            rank_minus,
            det_plus,
            det_minus,
            &tr_i,
            &tr_neg_i,
            &tr_zeta,
            &tr_zeta_inv,
            &tr_xi,
            &tr_xi_inv,
        )?)
    }

    /// Degree of the determinant line bundle: det of the weight-k bundle is
    /// the line bundle of weight dk - 12 Tr L.
    pub fn det_twist(&self, k: i64, choice: &ExponentChoice) -> Result<i64, FormsError> {
        let trl12 = twelve_times(&choice.tr_l, "12 Tr L")?;
        Ok(self.rep.dim() as i64 * k - trl12)
    }

    /// A nonzero section with linearly independent components forces
    /// k >= 12 Tr L / d + 1 - d.
    pub fn min_weight_bound(&self, choice: &ExponentChoice) -> Rational {
        let d = self.rep.dim() as i64;
        choice.tr_l.clone() * rat(12, 1) / rat(d, 1) + rat(1 - d, 1)
    }

    /// y = dim S_1(rho-dual), by the first applicable rule:
    /// (i) even representations have no odd-weight forms;
    /// (additivity) summand decompositions resolve summand-wise;
    /// (ii) when rho-dual(T) avoids eigenvalue 1, S_1 = M_1 of the dual, and
    ///      when no T-rotation of (dual x chi) lies strictly inside
    ///      (0, 1/12), multiplication by eta^2 identifies M_1(dual) with
    ///      S_2(dual x chi), whose dimension is chi(S-bar_2) plus the
    ///      invariant dimension of its dual (this step needs goodness);
    /// (iii) nonnegativity pinning from the odd-weight multiplicity table;
    /// (iv) an explicit user override.
    pub fn resolve_y(&self) -> Result<YValue, FormsError> {
        if self.parity.d_minus == 0 {
            return Ok(YValue::Exact(0));
        }
        if let Some(parts) = self.decompose()? {
            let mut total = YValue::Exact(0);
            for part in parts {
                let an = self.derived(part)?;
                total = total.add(an.resolve_y()?);
            }
            return Ok(total);
        }
        if self.flags.good.established() {
            let dual = self.derived(self.rep.dual()?)?;
            if !dual.standard.has_rotation_zero() {
                let sigma = self.derived(dual.rep.tensor_char(1)?)?;
                let blocked = sigma
                    .spectrum
                    .entries
                    .iter()
                    .any(|e| e.rotation > rat_int(0) && e.rotation < rat(1, 12));
                if !blocked {
                    let chi_s2 = sigma.euler_char(2, &sigma.cusp.clone())?;
                    let invariants = sigma.rep.dual()?.fixed_space_dim()? as i64;
                    let y = chi_s2 + invariants;
                    if y < 0 {
                        return Err(FormsError::Inconsistent(format!(
                            "dim S_2 of the eta-shift target evaluated to {}",
                            y
                        )));
                    }
                    return Ok(YValue::Exact(y as usize));
                }
            }
        }
        let odd = self.odd_row_bases()?;
        // m_1 = odd[0] + y, m_5 = odd[2] - y, m_7 = odd[3] - y, m_11 = y;
        // all must be nonnegative integers.
        for (idx, weight) in [(1usize, 3u8), (4usize, 9u8)] {
            if odd[idx] < 0 {
                return Err(FormsError::NegativeMultiplicity {
                    weight,
                    value: odd[idx],
                });
            }
        }
        if odd[2] < 0 || odd[3] < 0 {
            return Err(FormsError::Inconsistent(
                "upper pinning bounds for y are negative".into(),
            ));
        }
        let lo = 0.max(-odd[0]) as usize;
        let hi = odd[2].min(odd[3]) as usize;
        if lo > hi {
            return Err(FormsError::Inconsistent(format!(
                "y is pinned to the empty range {}..={}",
                lo, hi
            )));
        }
        if lo == hi {
            return Ok(YValue::Exact(lo));
        }
        if let Some(y) = self.assertions.y_override {
            if y < lo || y > hi {
                return Err(FormsError::Inconsistent(format!(
                    "asserted y = {} falls outside the pinned range {}..={}",
                    y, lo, hi
                )));
            }
            return Ok(YValue::Exact(y));
        }
        Ok(YValue::Range { lo, hi })
    }

    /// The generator-weight multiplicities of M(rho) as a free module over
    /// M(1), from the twelve-row table evaluated in Q(zeta_3), with
    /// summand-wise additivity where a decomposition is available.
    pub fn generator_weights(&self) -> Result<GeneratorWeights, FormsError> {
        let status = if self.flags.positive == Certainty::Certified {
            Status::Exact
        } else {
            Status::ConditionalOnPositivity
        };
        let gw = if let Some(parts) = self.decompose()? {
            let mut rows = [WeightRow::Exact(0); 12];
            let mut x = 0usize;
            let mut y = YValue::Exact(0);
            for part in parts {
                let an = self.derived(part)?;
                let g = an.generator_weights()?;
                for w in 0..12 {
                    rows[w] = rows[w].add(g.rows[w]);
                }
                x += g.x;
                y = y.add(g.y);
            }
            GeneratorWeights {
                rows,
                x,
                y,
                status,
                tr_l: self.standard.tr_l.clone(),
            }
        } else {
            self.leaf_generator_weights(status)?
        };
        self.check_weight_identities(&gw)?;
        Ok(gw)
    }

    /// Direct evaluation of the even and odd multiplicity tables.
    fn leaf_generator_weights(&self, status: Status) -> Result<GeneratorWeights, FormsError> {
        let even = self.even_row_values()?;
        let odd = self.odd_row_bases()?;
        let y = self.resolve_y()?;
        let mut rows = [WeightRow::Exact(0); 12];
        // Even weights 0, 2, 4, 6, 8, 10 carry no y.
        for (i, &value) in even.iter().enumerate() {
            let w = 2 * i;
            if value < 0 {
                return Err(FormsError::NegativeMultiplicity {
                    weight: w as u8,
                    value,
                });
            }
            rows[w] = WeightRow::Exact(value as usize);
        }
        // Odd weights 1, 3, 5, 7, 9, 11 have y-coefficients +1,0,-1,-1,0,+1.
        let coeffs: [i64; 6] = [1, 0, -1, -1, 0, 1];
        let (ylo, yhi) = y.bounds();
        for (i, (&base, &coeff)) in odd.iter().zip(coeffs.iter()).enumerate() {
            let w = 2 * i + 1;
            let (lo, hi) = match coeff {
                0 => (base, base),
                1 => (base + ylo as i64, base + yhi as i64),
                -1 => (base - yhi as i64, base - ylo as i64),
                _ => unreachable!(),
            };
            if lo < 0 {
                return Err(FormsError::NegativeMultiplicity {
                    weight: w as u8,
                    value: lo,
                });
            }
            rows[w] = if lo == hi {
                WeightRow::Exact(lo as usize)
            } else {
                WeightRow::Range {
                    lo: lo as usize,
                    hi: hi as usize,
                }
            };
        }
        Ok(GeneratorWeights {
            rows,
            x: self.x,
            y,
            status,
            tr_l: self.standard.tr_l.clone(),
        })
    }

    /// Even-table rows for weights 0, 2, 4, 6, 8, 10 (exact integers).
    fn even_row_values(&self) -> Result<[i64; 6], FormsError> {
        let p = &self.parity;
        let z = Cyclotomic::root_of_unity(3, 1);
        let one = Cyclotomic::one(3);
        let x = rat_int(self.x as i64);
        let d = rat_int(p.d_plus as i64);
        let trl = self.standard.tr_l_plus.clone();
        let s = &p.s_plus;
        let r1 = &p.r1_plus;
        let r2 = &p.r2_plus;
        let z_minus_1 = z.sub(&one).scale(&rat(1, 9));
        let z_plus_2 = z.add(&Cyclotomic::from_int(2)).scale(&rat(1, 9));
        let two_z_plus_1 = z.scale(&rat(2, 1)).add(&one).scale(&rat(1, 9));
        let third = rat(1, 3);

        let m0 = self.x as i64;
        let m2 = to_int(
            "weight-2 multiplicity",
            &Cyclotomic::from_rational(rat(7, 12) * &d - rat(1, 4) * rat_s(s)? - &trl)
                .add(&z_minus_1.mul(r1))
                .sub(&z_plus_2.mul(r2)),
        )?;
        let m4 = to_int(
            "weight-4 multiplicity",
            &Cyclotomic::from_rational(rat(3, 4) * &d + rat(1, 4) * rat_s(s)? - &x - &trl)
                .sub(&two_z_plus_1.mul(&r1.sub(r2))),
        )?;
        let m6 = to_int(
            "weight-6 multiplicity",
            &Cyclotomic::from_rational(&third * &d - &x)
                .add(&r1.add(r2).scale(&third)),
        )?;
        let m8 = to_int(
            "weight-8 multiplicity",
            &Cyclotomic::from_rational(rat(-1, 4) * &d + rat(1, 4) * rat_s(s)? + &trl)
                .add(&two_z_plus_1.mul(&r1.sub(r2))),
        )?;
        let m10 = to_int(
            "weight-10 multiplicity",
            &Cyclotomic::from_rational(rat(-5, 12) * &d - rat(1, 4) * rat_s(s)? + &x + &trl)
                .sub(&z_plus_2.mul(r1))
                .add(&z_minus_1.mul(r2)),
        )?;
        Ok([m0, m2, m4, m6, m8, m10])
    }

    /// Odd-table rows for weights 1, 3, 5, 7, 9, 11 with y removed: the
    /// actual multiplicities are these plus (y, 0, -y, -y, 0, y).
    fn odd_row_bases(&self) -> Result<[i64; 6], FormsError> {
        let p = &self.parity;
        let z = Cyclotomic::root_of_unity(3, 1);
        let one = Cyclotomic::one(3);
        let i = Cyclotomic::root_of_unity(4, 1);
        let d = rat_int(p.d_minus as i64);
        let trl = self.standard.tr_l_minus.clone();
        let s = &p.s_minus;
        let r1 = &p.r1_minus;
        let r2 = &p.r2_minus;
        let z_minus_1 = z.sub(&one).scale(&rat(1, 9));
        let z_plus_2 = z.add(&Cyclotomic::from_int(2)).scale(&rat(1, 9));
        let two_z_plus_1 = z.scale(&rat(2, 1)).add(&one).scale(&rat(1, 9));
        let i_quarter = i.scale(&rat(1, 4));

        let m1 = to_int(
            "weight-1 base multiplicity",
            &Cyclotomic::from_rational(rat(1, 2) * &d - &trl)
                .add(&i_quarter.mul(s))
                .add(&two_z_plus_1.mul(&r1.add(r2))),
        )?;
        let m3 = to_int(
            "weight-3 multiplicity",
            &Cyclotomic::from_rational(rat(2, 3) * &d - &trl)
                .sub(&i_quarter.mul(s))
                .sub(&z_plus_2.mul(r1))
                .sub(&z_minus_1.mul(r2)),
        )?;
        let m5 = to_int(
            "weight-5 base multiplicity",
            &Cyclotomic::from_rational(rat(1, 3) * &d)
                .sub(&z.scale(&rat(1, 3)).mul(r1))
                .sub(&z.add(&one).scale(&rat(1, 3)).mul(r2)),
        )?;
        let m7 = to_int(
            "weight-7 base multiplicity",
            &Cyclotomic::from_rational(rat(-1, 6) * &d + &trl)
                .sub(&i_quarter.mul(s))
                .add(&z_plus_2.mul(r1))
                .add(&z_minus_1.mul(r2)),
        )?;
        let m9 = to_int(
            "weight-9 multiplicity",
            &Cyclotomic::from_rational(rat(-1, 3) * &d + &trl)
                .add(&i_quarter.mul(s))
                .add(&z_minus_1.mul(r1))
                .add(&z_plus_2.mul(r2)),
        )?;
        let m11 = 0i64;
        Ok([m1, m3, m5, m7, m9, m11])
    }

    /// Sum rule and congruence restrictions: sum k_j = 12 Tr L, the weights
    /// reduced mod 4 realize the eigenvalue multiplicities of rho(S), and
    /// mod 6 those of rho(R). Range rows are checked by bracketing.
    fn check_weight_identities(&self, gw: &GeneratorWeights) -> Result<(), FormsError> {
        let trl12 = twelve_times(&gw.tr_l, "12 Tr L")?;
        let mut sum_lo = 0i64;
        let mut sum_hi = 0i64;
        let mut mod4_lo = [0i64; 4];
        let mut mod4_hi = [0i64; 4];
        let mut mod6_lo = [0i64; 6];
        let mut mod6_hi = [0i64; 6];
        for (w, row) in gw.rows.iter().enumerate() {
            let (lo, hi) = row.bounds();
            sum_lo += w as i64 * lo as i64;
            sum_hi += w as i64 * hi as i64;
            // weight w corresponds to the root -w
            let s4 = (-(w as i64)).rem_euclid(4) as usize;
            let r6 = (-(w as i64)).rem_euclid(6) as usize;
            mod4_lo[s4] += lo as i64;
            mod4_hi[s4] += hi as i64;
            mod6_lo[r6] += lo as i64;
            mod6_hi[r6] += hi as i64;
        }
        if !(sum_lo <= trl12 && trl12 <= sum_hi) {
            return Err(FormsError::Inconsistent(format!(
                "sum of generator weights {}..{} misses 12 Tr L = {}",
                sum_lo, sum_hi, trl12
            )));
        }
        for s in 0..4 {
            let alpha = self.mults.alpha[s] as i64;
            if !(mod4_lo[s] <= alpha && alpha <= mod4_hi[s]) {
                return Err(FormsError::Inconsistent(format!(
                    "mod-4 congruence class {} carries {}..{} weights, expected alpha = {}",
                    s, mod4_lo[s], mod4_hi[s], alpha
                )));
            }
        }
        for r in 0..6 {
            let beta = self.mults.beta[r] as i64;
            if !(mod6_lo[r] <= beta && beta <= mod6_hi[r]) {
                return Err(FormsError::Inconsistent(format!(
                    "mod-6 congruence class {} carries {}..{} weights, expected beta = {}",
                    r, mod6_lo[r], mod6_hi[r], beta
                )));
            }
        }
        Ok(())
    }

    /// Decompose into summands where a decomposition is visible: recorded
    /// direct-sum parts, or the simultaneous character decomposition when S
    /// and T commute and act semisimply.
    fn decompose(&self) -> Result<Option<Vec<Repn>>, FormsError> {
        if !self.rep.parts().is_empty() {
            return Ok(Some(self.rep.parts().to_vec()));
        }
        if self.rep.matrix_dim() <= 1 {
            return Ok(None);
        }
        let s = self.rep.s_mat();
        let t = self.rep.t_mat();
        if s.mul(t)? != t.mul(s)? {
            return Ok(None);
        }
        if self.spectrum.entries.iter().any(|e| e.block > 1) {
            return Ok(None);
        }
        let n = self.rep.matrix_dim();
        let order = num_integer::lcm(s.order(), 12);
        let se = s.embed(order)?;
        let te = t.embed(order)?;
        let id = crate::exact::CycMatrix::identity(n, order);
        let mut mults = [0usize; 12];
        let mut total = 0usize;
        for a in 0..12usize {
            let stacked = se
                .sub(&id.scale_cyc(&chi_s(a as i64)))?
                .vstack(&te.sub(&id.scale_cyc(&chi_t(a as i64)))?)?;
            let m = stacked.kernel_dim();
            mults[a] = m;
            total += m;
        }
        if total != n {
            return Ok(None);
        }
        for &sub in self.rep.subtracted() {
            let a = sub as usize % 12;
            if mults[a] == 0 {
                return Err(FormsError::Inconsistent(
                    "virtual summand missing from the character decomposition".into(),
                ));
            }
            mults[a] -= 1;
        }
        let mut parts = Vec::new();
        for (a, &m) in mults.iter().enumerate() {
            for _ in 0..m {
                parts.push(Repn::character(a as i64));
            }
        }
        Ok(Some(parts))
    }

    /// Dimension table for weights k_lo..=k_hi of holomorphic forms
    /// (cusp = false) or cusp forms (cusp = true).
    pub fn dims(&self, k_lo: i64, k_hi: i64, cusp: bool) -> Result<DimReport, FormsError> {
        let positive_ok = self.flags.positive.established();
        let good_ok = self.flags.good.established();
        let d = self.rep.dim() as i64;
        // Unconditional regimes: h^1 vanishes by the minimal-weight bound of
        // the dual data, making the euler characteristic the dimension with
        // no positivity hypothesis.
        let bound_modular = rat(d + 1, 1) + self.standard.tr_l.clone() * rat(12, 1) / rat(d, 1);
        let trl_dual_std: Rational = self
            .spectrum
            .entries
            .iter()
            .map(|e| {
                rational_frac(&(-e.rotation.clone())) * rat((e.block * e.mult) as i64, 1)
            })
            .sum();
        let bound_cusp = rat(d + 1, 1) - trl_dual_std * rat(12, 1) / rat(d, 1);

        let conditional = |certified: Certainty| {
            if certified == Certainty::Certified {
                Status::Exact
            } else {
                Status::ConditionalOnPositivity
            }
        };

        // Weight-one data, computed lazily.
        let mut weights_cache: Option<GeneratorWeights> = None;
        let mut dual_y_cache: Option<YValue> = None;

        let mut entries = Vec::new();
        for k in k_lo..=k_hi {
            let entry = if !cusp {
                if k >= 2 {
                    let unconditional = rat(k, 1) > bound_modular;
                    if positive_ok || unconditional {
                        let dim = self.euler_standard(k)?;
                        let status = if unconditional {
                            Status::Exact
                        } else {
                            conditional(self.flags.positive)
                        };
                        DimEntry {
                            k,
                            dim: Some(dim.max(0) as usize),
                            status,
                        }
                    } else {
                        DimEntry {
                            k,
                            dim: None,
                            status: Status::Undetermined,
                        }
                    }
                } else if k == 1 {
                    if positive_ok {
                        if weights_cache.is_none() {
                            weights_cache = Some(self.generator_weights()?);
                        }
                        let gw = weights_cache.as_ref().unwrap();
                        match gw.rows[1] {
                            WeightRow::Exact(m) => DimEntry {
                                k,
                                dim: Some(m),
                                status: conditional(self.flags.positive),
                            },
                            WeightRow::Range { .. } => DimEntry {
                                k,
                                dim: None,
                                status: Status::Undetermined,
                            },
                        }
                    } else {
                        DimEntry {
                            k,
                            dim: None,
                            status: Status::Undetermined,
                        }
                    }
                } else if k == 0 {
                    if good_ok {
                        DimEntry {
                            k,
                            dim: Some(self.x),
                            status: conditional(self.flags.good),
                        }
                    } else {
                        DimEntry {
                            k,
                            dim: None,
                            status: Status::Undetermined,
                        }
                    }
                } else if positive_ok {
                    DimEntry {
                        k,
                        dim: Some(0),
                        status: conditional(self.flags.positive),
                    }
                } else {
                    DimEntry {
                        k,
                        dim: None,
                        status: Status::Undetermined,
                    }
                }
            } else {
                // cusp forms
                if k >= 3 {
                    let unconditional = rat(k, 1) > bound_cusp;
                    if positive_ok || unconditional {
                        let dim = self.euler_cusp(k)?;
                        let status = if unconditional {
                            Status::Exact
                        } else {
                            conditional(self.flags.positive)
                        };
                        DimEntry {
                            k,
                            dim: Some(dim.max(0) as usize),
                            status,
                        }
                    } else {
                        DimEntry {
                            k,
                            dim: None,
                            status: Status::Undetermined,
                        }
                    }
                } else if k == 2 {
                    if positive_ok {
                        let chi = self.euler_cusp(2)?;
                        let inv = self.rep.dual()?.fixed_space_dim()? as i64;
                        DimEntry {
                            k,
                            dim: Some((chi + inv).max(0) as usize),
                            status: conditional(self.flags.positive),
                        }
                    } else {
                        DimEntry {
                            k,
                            dim: None,
                            status: Status::Undetermined,
                        }
                    }
                } else if k == 1 {
                    // dim S_1(rho) = y(rho-dual) by definition.
                    if positive_ok {
                        if dual_y_cache.is_none() {
                            let dual = self.derived(self.rep.dual()?)?;
                            dual_y_cache = Some(dual.resolve_y()?);
                        }
                        match dual_y_cache.unwrap() {
                            YValue::Exact(v) => DimEntry {
                                k,
                                dim: Some(v),
                                status: conditional(self.flags.positive),
                            },
                            YValue::Range { .. } => DimEntry {
                                k,
                                dim: None,
                                status: Status::Undetermined,
                            },
                        }
                    } else {
                        DimEntry {
                            k,
                            dim: None,
                            status: Status::Undetermined,
                        }
                    }
                } else if k == 0 {
                    if good_ok {
                        DimEntry {
                            k,
                            dim: Some(0),
                            status: conditional(self.flags.good),
                        }
                    } else {
                        DimEntry {
                            k,
                            dim: None,
                            status: Status::Undetermined,
                        }
                    }
                } else if positive_ok {
                    DimEntry {
                        k,
                        dim: Some(0),
                        status: conditional(self.flags.positive),
                    }
                } else {
                    DimEntry {
                        k,
                        dim: None,
                        status: Status::Undetermined,
                    }
                }
            };
            entries.push(entry);
        }
        Ok(DimReport { cusp, entries })
    }

    /// Hilbert numerator N(X) = sum_j X^{k_j} and the expansion of
    /// N(X)/((1-X^4)(1-X^6)) to the requested order, cross-checked against
    /// the euler-characteristic route.
    pub fn hilbert(&self, k_max: usize) -> Result<HilbertData, FormsError> {
        let gw = self.generator_weights()?;
        let weights = gw.weight_multiset()?;
        let mut numerator = [0usize; 12];
        for w in &weights {
            numerator[*w as usize] += 1;
        }
        // series * (1 - X^4)(1 - X^6) = N:
        // series[k] = N[k] + series[k-4] + series[k-6] - series[k-10].
        let mut series = vec![0i64; k_max + 1];
        for k in 0..=k_max {
            let mut v = if k < 12 { numerator[k] as i64 } else { 0 };
            if k >= 4 {
                v += series[k - 4];
            }
            if k >= 6 {
                v += series[k - 6];
            }
            if k >= 10 {
                v -= series[k - 10];
            }
            if v < 0 {
                return Err(FormsError::Inconsistent(format!(
                    "Hilbert series coefficient at {} is negative",
                    k
                )));
            }
            series[k] = v;
        }
        for k in 2..=k_max.min(60) as i64 {
            let via_euler = self.euler_standard(k)?;
            if via_euler != series[k as usize] {
                return Err(FormsError::Inconsistent(format!(
                    "Hilbert expansion and euler characteristic disagree at weight {}: {} vs {}",
                    k, series[k as usize], via_euler
                )));
            }
        }
        Ok(HilbertData {
            numerator,
            series: series.into_iter().map(|v| v as usize).collect(),
        })
    }

    /// Splitting type of the weight-k bundle: O(k - k_j) over the generator
    /// weights.
    pub fn splitting(&self, k: i64) -> Result<SplittingType, FormsError> {
        let gw = self.generator_weights()?;
        let weights = gw.weight_multiset()?;
        Ok(SplittingType::new(
            weights.into_iter().map(|w| k - w as i64).collect(),
        ))
    }
}

fn validate_spectrum(spec: &TSpectrum, parity: &ParityData) -> Result<(), FormsError> {
    for e in &spec.entries {
        if e.rotation < rat_int(0) || e.rotation >= rat_int(1) {
            return Err(FormsError::Inconsistent(format!(
                "spectrum rotation {} outside [0, 1)",
                e.rotation
            )));
        }
        if e.block == 0 || e.mult == 0 {
            return Err(FormsError::Inconsistent(
                "spectrum entries need positive block size and multiplicity".into(),
            ));
        }
    }
    if spec.dim_of_parity(Parity::Even) != parity.d_plus
        || spec.dim_of_parity(Parity::Odd) != parity.d_minus
    {
        return Err(FormsError::Inconsistent(
            "spectrum parity dimensions do not match the representation".into(),
        ));
    }
    Ok(())
}

/// chi of an arbitrary bundle specification.
pub fn euler_char(spec: &BundleSpec) -> Result<i64, FormsError> {
    let analysis = RepAnalysis::analyze(
        spec.rep.clone(),
        None,
        Assertions::default(),
        Caps {
            closure_cap: 1,
            ..Caps::default()
        },
    )?;
    analysis.euler_char(spec.weight, &spec.exponents)
}

/// Dualize a weight-k bundle whose exponents were chosen relative to
/// [a/12, a/12 + 1) or (a/12, a/12 + 1]: the dual is the cusp-form bundle
/// (first case) or the holomorphic-form bundle (second case) of
/// (rho-dual x chi^a) in weight a + 12 - k.
pub fn dual_spec(rep: &Repn, weight: i64, choice: &ExponentChoice, a: i64) -> Result<DualSpec, FormsError> {
    let expected_lower = rat(a, 12);
    if choice.interval.lower != expected_lower {
        return Err(FormsError::Inconsistent(format!(
            "exponents were chosen relative to lower endpoint {}, not a/12 = {}",
            choice.interval.lower, expected_lower
        )));
    }
    let twisted = rep.dual()?.tensor_char(a)?;
    Ok(DualSpec {
        rep: twisted,
        weight: a + 12 - weight,
        cusp: choice.interval.kind == IntervalKind::ClosedOpen,
    })
}

/// Generator weights of the ring of scalar modular forms for a finite-index
/// subgroup, from the permutation representation on its cosets (no trivial
/// subtraction). The first weight is always 0.
pub fn subgroup_generator_weights(rep: &Repn, caps: Caps) -> Result<Vec<usize>, FormsError> {
    if !rep.subtracted().is_empty() {
        return Err(FormsError::Inconsistent(
            "coset actions must keep the trivial summand".into(),
        ));
    }
    let analysis = RepAnalysis::analyze(rep.clone(), None, Assertions::default(), caps)?;
    if !analysis.flags.good.established() {
        return Err(FormsError::Inconsistent(
            "the coset action did not certify a finite image; raise the closure cap".into(),
        ));
    }
    let weights = analysis.generator_weights()?.weight_multiset()?;
    let out: Vec<usize> = weights.into_iter().map(|w| w as usize).collect();
    if out.first() != Some(&0) {
        return Err(FormsError::Inconsistent(
            "coset-action weights must start at 0".into(),
        ));
    }
    Ok(out)
}

fn to_int(what: &str, value: &Cyclotomic) -> Result<i64, FormsError> {
    value
        .as_rational()
        .and_then(|r| rational_to_i64(&r))
        .ok_or_else(|| FormsError::IntegralityFailure {
            what: what.to_string(),
            value: format!("{}", value),
        })
}

fn rat_s(c: &Cyclotomic) -> Result<Rational, FormsError> {
    c.as_rational().ok_or_else(|| FormsError::IntegralityFailure {
        what: "parity trace expected to be rational".into(),
        value: format!("{}", c),
    })
}

fn twelve_times(r: &Rational, what: &str) -> Result<i64, FormsError> {
    rational_to_i64(&(r * rat(12, 1))).ok_or_else(|| FormsError::IntegralityFailure {
        what: what.to_string(),
        value: r.to_string(),
    })
}
