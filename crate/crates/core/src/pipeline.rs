//! End-to-end orchestration: validate a diagram, run the base complex, lift
//! genus-zero diagrams to their branched double cover, run the equivariant
//! analysis, and assemble a deterministic report.

use serde::Serialize;
use thiserror::Error;

use crate::cover::{lift_diagram, solve_monodromy, CoverError};
use crate::diagram::bridge::{two_bridge, BridgeError, BridgeSpec};
use crate::diagram::grid::{from_grid, GridError, GridSpec};
use crate::diagram::{Diagram, DiagramError};
use crate::equivariant::{
    build_equivariant, localized_ranks, verify_corollaries, BorelReport, EquivariantError,
    VerdictError, VerdictSet,
};
use crate::floer::differential::{build_complex, FloerError};
use crate::floer::domains::DomainSolver;
use crate::floer::ranks::{
    alexander_polynomial, deconvolve_v_factors, hfk_tilde, laurent_to_string,
    normalize_class_alexander, GradedRanks, RankError,
};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("invalid bridge parameters: {0}")]
    Bridge(#[from] BridgeError),
    #[error("invalid grid: {0}")]
    Grid(#[from] GridError),
    #[error("{0}")]
    Diagram(#[from] DiagramError),
    #[error("cover requires genus-0 base (this diagram has genus {})", match .0 { Some(g) => g.to_string(), None => "undefined".into() })]
    CoverRequiresGenusZero(Option<u32>),
    #[error("{0}")]
    Cover(#[from] CoverError),
    #[error("{0}")]
    Floer(#[from] FloerError),
    #[error("{0}")]
    Equivariant(#[from] EquivariantError),
    #[error("{0}")]
    Rank(#[from] RankError),
    #[error("{0}")]
    Verdict(#[from] VerdictError),
    #[error("diagram is not weakly admissible")]
    NotAdmissible,
}

#[derive(Clone, Copy, Debug)]
pub struct ComputeOptions {
    /// lift genus-zero diagrams to the branched double cover
    pub lift: bool,
    /// per-coordinate bound override for the admissibility lattice search
    pub max_domain_coeff: Option<i64>,
}

impl Default for ComputeOptions {
    fn default() -> Self {
        ComputeOptions {
            lift: true,
            max_domain_coeff: None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DiagramStats {
    pub points: usize,
    pub edges: usize,
    pub regions: usize,
    pub genus: u32,
    pub basepoint_pairs: usize,
    pub nice: bool,
    pub weakly_admissible: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RankEntry {
    pub class: usize,
    pub alexander: i64,
    pub maslov: i64,
    pub rank: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassSummary {
    pub label: String,
    pub tilde_rank: usize,
    /// absolute gradings when the symmetric normalization applied
    pub alexander_normalized: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComplexReport {
    pub stats: DiagramStats,
    pub generators: usize,
    pub spin_c_classes: usize,
    /// invariant factors of H_1 of the underlying 3-manifold
    pub h1_invariant_factors: Vec<String>,
    pub classes: Vec<ClassSummary>,
    pub ranks: Vec<RankEntry>,
    pub tilde_total: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct AlexanderReport {
    pub polynomial: String,
    /// coefficient list from the lowest exponent upward
    pub coefficients: Vec<i64>,
    pub min_exponent: i64,
    pub determinant: u64,
    pub hat_profile: Vec<(i64, usize)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoverSection {
    pub complex: ComplexReport,
    pub invariant_generators: usize,
    pub canonical_class: usize,
    pub borel: BorelReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub input: String,
    pub base: ComplexReport,
    pub alexander: Option<AlexanderReport>,
    pub cover: Option<CoverSection>,
    pub verdicts: Option<VerdictSet>,
    /// wall-clock milliseconds; excluded from JSON so identical inputs
    /// produce byte-identical reports
    #[serde(skip)]
    pub timing_ms: Option<u128>,
}

fn stats(d: &Diagram, max_coeff: Option<i64>) -> DiagramStats {
    let (nice, _) = d.is_nice();
    DiagramStats {
        points: d.num_points(),
        edges: d.num_edges(),
        regions: d.num_regions(),
        genus: d.genus().unwrap_or(u32::MAX),
        basepoint_pairs: d.n_pairs(),
        nice,
        weakly_admissible: d.is_weakly_admissible(max_coeff),
    }
}

fn complex_report(
    d: &Diagram,
    ranks: &GradedRanks,
    complex: &crate::floer::differential::FloerComplex,
    max_coeff: Option<i64>,
) -> ComplexReport {
    let mut entries = Vec::new();
    for (class, cr) in ranks.classes.iter().enumerate() {
        for (&(a, m), &r) in &cr.ranks {
            entries.push(RankEntry {
                class,
                alexander: a,
                maslov: m,
                rank: r,
            });
        }
    }
    ComplexReport {
        stats: stats(d, max_coeff),
        generators: complex.gens.len(),
        spin_c_classes: complex.partition.num_classes(),
        h1_invariant_factors: complex
            .partition
            .h1
            .group_factors
            .iter()
            .map(|f| f.to_string())
            .collect(),
        classes: ranks
            .classes
            .iter()
            .map(|cr| ClassSummary {
                label: cr.label.clone(),
                tilde_rank: cr.total(),
                alexander_normalized: cr.alexander_shift.is_some(),
            })
            .collect(),
        ranks: entries,
        tilde_total: ranks.total(),
    }
}

/// Full pipeline on an explicit, already validated diagram.
pub fn compute_diagram(
    d: &Diagram,
    input: &str,
    opts: ComputeOptions,
) -> Result<Report, PipelineError> {
    let start = std::time::Instant::now();
    let (nice, offending) = d.is_nice();
    if !nice {
        return Err(FloerError::NotNice(offending.iter().map(|r| r.0).collect()).into());
    }
    if !d.is_weakly_admissible(opts.max_domain_coeff) {
        return Err(PipelineError::NotAdmissible);
    }

    let solver = DomainSolver::new(d);
    let base_complex = build_complex(d, &solver, None)?;
    let mut base_ranks = hfk_tilde(&base_complex, d.n_pairs());
    let single_class = base_ranks.classes.len() == 1;
    let mut alexander = None;
    if single_class {
        normalize_class_alexander(&mut base_ranks, 0, d.n_pairs())?;
        let (delta, det) = alexander_polynomial(&base_ranks)?;
        let profile = base_ranks.classes[0].alexander_profile();
        let hat = deconvolve_v_factors(&profile, d.n_pairs())?;
        let (min_exponent, coefficients) = match delta.first_key_value() {
            None => (0, Vec::new()),
            Some((&lo, _)) => {
                let hi = *delta.last_key_value().expect("nonempty").0;
                let coeffs = (lo..=hi).map(|e| *delta.get(&e).unwrap_or(&0)).collect();
                (lo, coeffs)
            }
        };
        alexander = Some(AlexanderReport {
            polynomial: laurent_to_string(&delta),
            coefficients,
            min_exponent,
            determinant: det,
            hat_profile: hat.into_iter().collect(),
        });
    }
    let base_report = complex_report(d, &base_ranks, &base_complex, opts.max_domain_coeff);

    let mut cover_section = None;
    let mut verdicts = None;
    if opts.lift {
        if d.genus() != Some(0) {
            return Err(PipelineError::CoverRequiresGenusZero(d.genus()));
        }
        let monodromy = solve_monodromy(d)?;
        let covered = lift_diagram(d, &monodromy)?;
        let cover_solver = DomainSolver::new(&covered.cover);
        let eq = build_equivariant(&covered, &cover_solver)?;
        let mut cover_ranks = hfk_tilde(&eq.complex, covered.cover.n_pairs());
        normalize_class_alexander(&mut cover_ranks, eq.canonical_class, covered.cover.n_pairs())?;
        let shift = cover_ranks.classes[eq.canonical_class]
            .alexander_shift
            .unwrap_or(0);
        let borel = localized_ranks(&eq, shift)?;
        if single_class {
            verdicts = Some(verify_corollaries(
                &base_ranks,
                &cover_ranks,
                &borel,
                eq.canonical_class,
            )?);
        }
        let invariant_generators = eq
            .tau
            .iter()
            .enumerate()
            .filter(|&(i, &t)| i == t)
            .count();
        cover_section = Some(CoverSection {
            complex: complex_report(
                &covered.cover,
                &cover_ranks,
                &eq.complex,
                opts.max_domain_coeff,
            ),
            invariant_generators,
            canonical_class: eq.canonical_class,
            borel,
        });
    }

    Ok(Report {
        schema: 1,
        input: input.to_string(),
        base: base_report,
        alexander,
        cover: cover_section,
        verdicts,
        timing_ms: Some(start.elapsed().as_millis()),
    })
}

pub fn compute_two_bridge(p: i64, q: i64, opts: ComputeOptions) -> Result<Report, PipelineError> {
    let spec = BridgeSpec::new(p, q)?;
    let d = two_bridge(&spec)?;
    compute_diagram(&d, &format!("two-bridge b({p}, {q})"), opts)
}

pub fn compute_grid(spec: &GridSpec, opts: ComputeOptions) -> Result<Report, PipelineError> {
    let d = from_grid(spec)?;
    compute_diagram(&d, &format!("grid diagram of size {}", spec.size), opts)
}

/// Renders the report as human-readable text.
pub fn render_text(report: &Report) -> String {
    let mut out = String::new();
    let push = |out: &mut String, s: String| {
        out.push_str(&s);
        out.push('\n');
    };
    push(&mut out, format!("input: {}", report.input));
    let stats = |s: &DiagramStats| {
        format!(
            "points {}, edges {}, regions {}, genus {}, n = {} pairs, nice {}, admissible {}",
            s.points, s.edges, s.regions, s.genus, s.basepoint_pairs, s.nice, s.weakly_admissible
        )
    };
    push(&mut out, format!("base:  {}", stats(&report.base.stats)));
    push(
        &mut out,
        format!(
            "base:  {} generators, {} spin^c class(es), tilde rank {}",
            report.base.generators, report.base.spin_c_classes, report.base.tilde_total
        ),
    );
    if let Some(alex) = &report.alexander {
        push(
            &mut out,
            format!(
                "base:  Alexander polynomial {}, determinant {}",
                alex.polynomial, alex.determinant
            ),
        );
        let hk: Vec<String> = alex
            .hat_profile
            .iter()
            .map(|(a, r)| format!("A={a}: {r}"))
            .collect();
        push(&mut out, format!("base:  hat ranks {}", hk.join(", ")));
    }
    if let Some(cover) = &report.cover {
        push(
            &mut out,
            format!("cover: {}", stats(&cover.complex.stats)),
        );
        push(
            &mut out,
            format!(
                "cover: {} generators, {} spin^c class(es), {} invariant, tilde (E^1) rank {}",
                cover.complex.generators,
                cover.complex.spin_c_classes,
                cover.invariant_generators,
                cover.complex.tilde_total
            ),
        );
        push(
            &mut out,
            format!(
                "cover: |H_1| factors [{}], canonical class {}",
                cover.complex.h1_invariant_factors.join(", "),
                cover.canonical_class
            ),
        );
        push(
            &mut out,
            format!(
                "borel: E^1 total {}, localized total {}",
                cover.borel.e1_total, cover.borel.localized_total
            ),
        );
        for s in &cover.borel.strata {
            push(
                &mut out,
                format!(
                    "borel: orbit {} A={}: dim {}, E^1 {}, localized {}",
                    s.orbit, s.alexander, s.dimension, s.e1_rank, s.localized_rank
                ),
            );
        }
    }
    if let Some(v) = &report.verdicts {
        let mut line = |v: &crate::equivariant::Verdict| {
            push(
                &mut out,
                format!(
                    "verdict [{}]: {} ({} {} {})",
                    if v.holds { "ok" } else { "FAIL" },
                    v.description,
                    v.lhs,
                    v.relation,
                    v.rhs
                ),
            );
        };
        line(&v.localization_total);
        for sub in &v.localization_per_alexander {
            line(sub);
        }
        line(&v.rank_inequality);
        line(&v.canonical_rank_inequality);
        for sub in &v.alexander_inequalities {
            line(sub);
        }
        line(&v.top_grading_hat_inequality);
        push(&mut out, format!("verdicts all hold: {}", v.all_hold));
    }
    if let Some(ms) = report.timing_ms {
        push(&mut out, format!("timing: {ms} ms"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknot_end_to_end() {
        let report = compute_two_bridge(1, 1, ComputeOptions::default()).unwrap();
        assert_eq!(report.base.tilde_total, 2);
        let cover = report.cover.as_ref().unwrap();
        assert_eq!(cover.borel.e1_total, 2);
        assert_eq!(cover.borel.localized_total, 2);
        let v = report.verdicts.as_ref().unwrap();
        assert!(v.all_hold);
        let alex = report.alexander.as_ref().unwrap();
        assert_eq!(alex.determinant, 1);
    }

    #[test]
    fn trefoil_end_to_end() {
        let report = compute_two_bridge(3, 1, ComputeOptions::default()).unwrap();
        assert_eq!(report.base.tilde_total, 6);
        let alex = report.alexander.as_ref().unwrap();
        assert_eq!(alex.determinant, 3);
        assert_eq!(alex.hat_profile, vec![(-1, 1), (0, 1), (1, 1)]);
        let cover = report.cover.as_ref().unwrap();
        assert_eq!(cover.complex.spin_c_classes, 3);
        assert_eq!(cover.borel.localized_total, 6);
        assert!(report.verdicts.as_ref().unwrap().all_hold);
    }

    #[test]
    fn grid_input_is_base_only_and_lift_refused() {
        let spec = GridSpec::new(2, vec![0, 1], vec![1, 0]).unwrap();
        let base_only = compute_grid(
            &spec,
            ComputeOptions {
                lift: false,
                max_domain_coeff: None,
            },
        )
        .unwrap();
        assert_eq!(base_only.base.tilde_total, 2);
        assert!(base_only.cover.is_none());
        let err = compute_grid(&spec, ComputeOptions::default()).unwrap_err();
        assert!(matches!(err, PipelineError::CoverRequiresGenusZero(Some(1))));
    }
}
