//! Analysis reports: a deterministic JSON-serializable summary of everything
//! the engine derives from a representation descriptor. All rationals are
//! rendered as `p/q` strings; multisets are sorted; struct fields serialize
//! in a fixed order, so re-serializing a report is byte-identical.

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::descriptor::{parse_descriptor, DescriptorError, ParsedDescriptor};
use crate::exact::{format_rational, Cyclotomic};
use crate::exponents::{ExponentChoice, IntervalKind, Parity};
use crate::forms::{
    Caps, Certainty, DimReport, FormsError, GeneratorWeights, RepAnalysis, Status, WeightRow,
    YValue,
};
use crate::rep::FiniteImage;

#[derive(Debug, Serialize, Clone, PartialEq, Eq)]
pub struct CycJson {
    pub order: u32,
    pub coeffs: Vec<String>,
}

impl CycJson {
    fn of(c: &Cyclotomic) -> CycJson {
        CycJson {
            order: c.order(),
            coeffs: c.coeffs().iter().map(format_rational).collect(),
        }
    }
}

#[derive(Debug, Serialize, Clone)]
pub struct FlagsJson {
    pub finite_image: String,
    pub good: String,
    pub positive: String,
    pub unitarizable: String,
}

fn certainty_str(c: Certainty) -> String {
    match c {
        Certainty::Certified => "certified",
        Certainty::Asserted => "asserted",
        Certainty::Unknown => "unknown",
    }
    .to_string()
}

#[derive(Debug, Serialize, Clone)]
pub struct TracesJson {
    pub s: Vec<CycJson>,
    pub r: Vec<CycJson>,
}

#[derive(Debug, Serialize, Clone)]
pub struct ParityJson {
    pub d_plus: usize,
    pub d_minus: usize,
    pub s_plus: CycJson,
    pub s_minus: CycJson,
    pub r1_plus: CycJson,
    pub r1_minus: CycJson,
    pub r2_plus: CycJson,
    pub r2_minus: CycJson,
}

#[derive(Debug, Serialize, Clone)]
pub struct MultsJson {
    pub alpha: [usize; 4],
    pub beta: [usize; 6],
}

#[derive(Debug, Serialize, Clone)]
pub struct SpectrumEntryJson {
    pub rotation: String,
    pub block: usize,
    pub parity: String,
    pub mult: usize,
}

#[derive(Debug, Serialize, Clone)]
pub struct SpectrumJson {
    pub order: u32,
    pub entries: Vec<SpectrumEntryJson>,
}

#[derive(Debug, Serialize, Clone)]
pub struct ExponentEntryJson {
    pub exponent: String,
    pub block: usize,
    pub parity: String,
    pub mult: usize,
}

#[derive(Debug, Serialize, Clone)]
pub struct ExponentsJson {
    pub interval: String,
    pub entries: Vec<ExponentEntryJson>,
    pub tr_l: String,
    pub tr_l_plus: String,
    pub tr_l_minus: String,
}

impl ExponentsJson {
    fn of(choice: &ExponentChoice) -> ExponentsJson {
        let lo = format_rational(&choice.interval.lower);
        let hi = format_rational(&(&choice.interval.lower + crate::exact::rat_int(1)));
        let interval = match choice.interval.kind {
            IntervalKind::ClosedOpen => format!("[{},{})", lo, hi),
            IntervalKind::OpenClosed => format!("({},{}]", lo, hi),
        };
        ExponentsJson {
            interval,
            entries: choice
                .entries
                .iter()
                .map(|e| ExponentEntryJson {
                    exponent: format_rational(&e.exponent),
                    block: e.block,
                    parity: parity_str(e.parity),
                    mult: e.mult,
                })
                .collect(),
            tr_l: format_rational(&choice.tr_l),
            tr_l_plus: format_rational(&choice.tr_l_plus),
            tr_l_minus: format_rational(&choice.tr_l_minus),
        }
    }
}

fn parity_str(p: Parity) -> String {
    match p {
        Parity::Even => "+",
        Parity::Odd => "-",
    }
    .to_string()
}

fn status_str(s: Status) -> String {
    match s {
        Status::Exact => "exact",
        Status::ConditionalOnPositivity => "conditional-on-positivity",
        Status::Undetermined => "undetermined",
    }
    .to_string()
}

#[derive(Debug, Serialize, Clone)]
pub struct WeightRowJson {
    pub weight: u8,
    pub mult: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub range: Option<[usize; 2]>,
}

#[derive(Debug, Serialize, Clone)]
pub struct WeightsJson {
    pub status: String,
    pub x: usize,
    pub y: YJson,
    pub rows: Vec<WeightRowJson>,
    /// Present when y is exact: the weights with multiplicity, ascending.
    pub weights: Option<Vec<u8>>,
    pub roots: Option<Vec<i64>>,
}

#[derive(Debug, Serialize, Clone)]
pub struct YJson {
    pub exact: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub range: Option<[usize; 2]>,
}

impl WeightsJson {
    fn of(gw: &GeneratorWeights) -> WeightsJson {
        let resolved = gw.weight_multiset().ok();
        let status = if resolved.is_none() {
            status_str(Status::Undetermined)
        } else {
            status_str(gw.status)
        };
        WeightsJson {
            status,
            x: gw.x,
            y: match gw.y {
                YValue::Exact(v) => YJson {
                    exact: Some(v),
                    range: None,
                },
                YValue::Range { lo, hi } => YJson {
                    exact: None,
                    range: Some([lo, hi]),
                },
            },
            rows: gw
                .rows
                .iter()
                .enumerate()
                .filter(|(_, row)| !matches!(row, WeightRow::Exact(0)))
                .map(|(w, row)| match row {
                    WeightRow::Exact(m) => WeightRowJson {
                        weight: w as u8,
                        mult: Some(*m),
                        range: None,
                    },
                    WeightRow::Range { lo, hi } => WeightRowJson {
                        weight: w as u8,
                        mult: None,
                        range: Some([*lo, *hi]),
                    },
                })
                .collect(),
            roots: gw.roots().ok(),
            weights: resolved,
        }
    }
}

#[derive(Debug, Serialize, Clone)]
pub struct DimEntryJson {
    pub k: i64,
    pub dim: Option<usize>,
    pub status: String,
}

fn dim_report_json(report: &DimReport) -> Vec<DimEntryJson> {
    report
        .entries
        .iter()
        .map(|e| DimEntryJson {
            k: e.k,
            dim: e.dim,
            status: status_str(e.status),
        })
        .collect()
}

/// The full analysis report.
#[derive(Debug, Serialize, Clone)]
pub struct Report {
    pub descriptor_sha256: String,
    pub dim: usize,
    pub flags: FlagsJson,
    pub traces: TracesJson,
    pub parity: ParityJson,
    pub eig_multiplicities: MultsJson,
    pub t_spectrum: SpectrumJson,
    pub standard_exponents: ExponentsJson,
    pub cusp_exponents: ExponentsJson,
    pub invariants_dim: usize,
    pub weights: WeightsJson,
    pub dims_modular: Vec<DimEntryJson>,
    pub dims_cusp: Vec<DimEntryJson>,
}

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error(transparent)]
    Descriptor(#[from] DescriptorError),
    #[error(transparent)]
    Forms(#[from] FormsError),
}

/// Everything `analyze` needs: the analysis object plus the rendered report.
pub struct AnalysisBundle {
    pub analysis: RepAnalysis,
    pub report: Report,
}

pub fn sha256_hex(input: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(input.as_bytes());
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{:02x}", b)).collect()
}

/// Parse a descriptor and run the full analysis pipeline.
pub fn analyze_input(input: &str, caps: Caps) -> Result<AnalysisBundle, ReportError> {
    let parsed = parse_descriptor(input)?;
    analyze_parsed(input, parsed, caps)
}

pub fn analyze_parsed(
    raw_input: &str,
    parsed: ParsedDescriptor,
    caps: Caps,
) -> Result<AnalysisBundle, ReportError> {
    let analysis = RepAnalysis::analyze(
        parsed.rep,
        parsed.spectrum_override,
        parsed.assertions,
        caps,
    )?;
    let report = build_report(raw_input, &analysis)?;
    Ok(AnalysisBundle { analysis, report })
}

pub fn build_report(raw_input: &str, analysis: &RepAnalysis) -> Result<Report, ReportError> {
    let gw = analysis.generator_weights()?;
    let dims_modular = analysis.dims(0, 12, false)?;
    let dims_cusp = analysis.dims(0, 12, true)?;
    let finite_image = match analysis.flags.finite_image {
        FiniteImage::Finite(n) => format!("finite({})", n),
        FiniteImage::Unknown => "unknown".to_string(),
    };
    Ok(Report {
        descriptor_sha256: sha256_hex(raw_input),
        dim: analysis.rep.dim(),
        flags: FlagsJson {
            finite_image,
            good: certainty_str(analysis.flags.good),
            positive: certainty_str(analysis.flags.positive),
            unitarizable: certainty_str(analysis.flags.unitarizable),
        },
        traces: TracesJson {
            s: (0..4).map(|j| CycJson::of(&analysis.rep.trace_s(j))).collect(),
            r: (0..6).map(|j| CycJson::of(&analysis.rep.trace_r(j))).collect(),
        },
        parity: ParityJson {
            d_plus: analysis.parity.d_plus,
            d_minus: analysis.parity.d_minus,
            s_plus: CycJson::of(&analysis.parity.s_plus),
            s_minus: CycJson::of(&analysis.parity.s_minus),
            r1_plus: CycJson::of(&analysis.parity.r1_plus),
            r1_minus: CycJson::of(&analysis.parity.r1_minus),
            r2_plus: CycJson::of(&analysis.parity.r2_plus),
            r2_minus: CycJson::of(&analysis.parity.r2_minus),
        },
        eig_multiplicities: MultsJson {
            alpha: analysis.mults.alpha,
            beta: analysis.mults.beta,
        },
        t_spectrum: SpectrumJson {
            order: analysis.spectrum.order,
            entries: analysis
                .spectrum
                .entries
                .iter()
                .map(|e| SpectrumEntryJson {
                    rotation: format_rational(&e.rotation),
                    block: e.block,
                    parity: parity_str(e.parity),
                    mult: e.mult,
                })
                .collect(),
        },
        standard_exponents: ExponentsJson::of(&analysis.standard),
        cusp_exponents: ExponentsJson::of(&analysis.cusp),
        invariants_dim: analysis.x,
        weights: WeightsJson::of(&gw),
        dims_modular: dim_report_json(&dims_modular),
        dims_cusp: dim_report_json(&dims_cusp),
    })
}

/// True when any reported quantity is undetermined.
pub fn has_undetermined(report: &Report) -> bool {
    report.weights.status == "undetermined"
        || report
            .dims_modular
            .iter()
            .chain(report.dims_cusp.iter())
            .any(|e| e.status == "undetermined")
}

#[cfg(test)]
mod tests {
    use super::*;

    const S7_INPUT: &str = r#"{
        "type": "permutation",
        "degree": 7,
        "S": [[1,4],[2,7],[3,5]],
        "T": [[1,7,2,5,6],[3,4]],
        "subtract_trivial": true
    }"#;

    #[test]
    fn s7_report_content() {
        let bundle = analyze_input(S7_INPUT, Caps::default()).unwrap();
        let r = &bundle.report;
        assert_eq!(r.dim, 6);
        assert_eq!(r.flags.finite_image, "finite(5040)");
        assert_eq!(r.flags.good, "certified");
        assert_eq!(r.weights.weights, Some(vec![2, 4, 4, 6, 6, 8]));
        assert_eq!(r.weights.roots, Some(vec![-2, -4, -4, -6, -6, -8]));
        assert_eq!(r.standard_exponents.tr_l, "5/2");
        assert_eq!(r.eig_multiplicities.alpha, [3, 0, 3, 0]);
        assert!(!has_undetermined(r));
    }

    #[test]
    fn report_serialization_is_deterministic() {
        let a = analyze_input(S7_INPUT, Caps::default()).unwrap();
        let b = analyze_input(S7_INPUT, Caps::default()).unwrap();
        let ja = serde_json::to_string_pretty(&a.report).unwrap();
        let jb = serde_json::to_string_pretty(&b.report).unwrap();
        assert_eq!(ja, jb);
        assert!(ja.contains("\"5/2\""));
    }

    #[test]
    fn undetermined_weights_are_flagged() {
        // The order-24 model with all y-resolution rules blocked, fed
        // through the JSON descriptor path.
        use crate::exact::rat;
        let rep = crate::forms::test_rows::two_dim_rep(rat(1, 24), rat(23, 24), 1, 5, -1);
        let input = matrices_descriptor_json(&rep, r#"{"good": true, "positive": true}"#);
        let bundle = analyze_input(
            &input,
            Caps {
                order_cap: 100,
                closure_cap: 50,
            },
        )
        .unwrap();
        assert!(has_undetermined(&bundle.report));
        assert_eq!(bundle.report.weights.y.range, Some([0, 1]));
    }

    /// Render a representation's matrices as a descriptor document.
    pub(crate) fn matrices_descriptor_json(rep: &crate::rep::Repn, assert_block: &str) -> String {
        let order = rep.s_mat().order();
        let matrix = |m: &crate::exact::CycMatrix| -> String {
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
        format!(
            "{{\"type\": \"matrices\", \"cyclotomic_order\": {}, \"S\": {}, \"T\": {}, \"assert\": {}}}",
            order,
            matrix(rep.s_mat()),
            matrix(rep.t_mat()),
            assert_block
        )
    }
}
