//! The induced involution on the lifted complex, the equivariant complex
//! over F2\[q\] with total differential `d + (1 + tau)q`, localized ranks over
//! the fraction field, and the executable localization and rank-inequality
//! verdicts.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{F2Matrix, F2Poly, PolyMatrix};
use crate::cover::CoveredDiagram;
use crate::diagram::CurveId;
use crate::floer::differential::{build_complex, FloerComplex, FloerError};
use crate::floer::domains::DomainSolver;
use crate::floer::ranks::{deconvolve_v_factors, GradedRanks, RankError};
use crate::floer::Generator;

#[derive(Debug, Error)]
pub enum EquivariantError {
    #[error(transparent)]
    Floer(#[from] FloerError),
    #[error(transparent)]
    Rank(#[from] RankError),
    #[error("tau does not commute with the differential; witness generator {0}")]
    ChainMapViolation(usize),
    #[error("invariant generators fall into {0} spin^c classes, expected one canonical class")]
    CanonicalClassAmbiguous(usize),
    #[error("conjugation does not map class {0} onto a single class")]
    ConjugationIllDefined(usize),
    #[error("cannot align gradings across the self-conjugate class {0}")]
    SelfConjugateMisaligned(usize),
    #[error("equivariant differential does not square to zero on block {0}")]
    TotalDifferentialSquare(usize),
    #[error("tau changes the ({0}) grading of generator {1}")]
    TauGradingLeak(&'static str, usize),
    #[error("{0}")]
    Internal(String),
}

/// The permutation induced on generators by applying the deck involution
/// pointwise to each matching.
pub fn tau_sharp(cov: &CoveredDiagram, complex: &FloerComplex) -> Vec<usize> {
    let d = &cov.cover;
    let alpha_slot: BTreeMap<CurveId, usize> = d
        .alpha_curves()
        .enumerate()
        .map(|(i, c)| (c, i))
        .collect();
    complex
        .gens
        .iter()
        .map(|g| {
            let mut image = vec![crate::diagram::PointId(usize::MAX); g.points.len()];
            for &p in &g.points {
                let tp = cov.tau_point[p.0];
                let slot = alpha_slot[&d.point(tp).alpha];
                image[slot] = tp;
            }
            let image_gen = Generator { points: image };
            complex.index[&image_gen.points]
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct Orbit {
    /// one class index, or a conjugate pair
    pub classes: Vec<usize>,
    pub canonical: bool,
}

#[derive(Clone, Debug)]
pub struct Block {
    pub orbit: usize,
    /// anchor-relative Alexander grading of the block
    pub alexander: i64,
    pub members: Vec<usize>,
    pub total: PolyMatrix,
    pub vertical: F2Matrix,
}

/// The equivariant complex of a cover, with tau-aligned gradings and the
/// total differential assembled per (orbit, Alexander stratum) block.
pub struct EquivariantComplex {
    pub complex: FloerComplex,
    pub tau: Vec<usize>,
    pub canonical_class: usize,
    pub conjugate_class: Vec<usize>,
    pub orbits: Vec<Orbit>,
    pub blocks: Vec<Block>,
}

pub fn build_equivariant(
    cov: &CoveredDiagram,
    solver: &DomainSolver,
) -> Result<EquivariantComplex, EquivariantError> {
    let d = &cov.cover;
    let complex = build_complex(d, solver, None)?;
    let tau = tau_sharp(cov, &complex);
    let n = complex.gens.len();

    for (i, &ti) in tau.iter().enumerate() {
        if tau[ti] != i {
            return Err(EquivariantError::Internal(format!(
                "tau is not an involution at generator {i}"
            )));
        }
    }

    // tau must commute with the differential (chain map)
    for x in 0..n {
        for y in 0..n {
            if complex.differential.get(y, x) != complex.differential.get(tau[y], tau[x]) {
                return Err(EquivariantError::ChainMapViolation(x));
            }
        }
    }

    // canonical class: the class of the invariant generators
    let invariant: Vec<usize> = (0..n).filter(|&i| tau[i] == i).collect();
    let mut canon_classes: Vec<usize> = invariant
        .iter()
        .map(|&i| complex.partition.labels[i])
        .collect();
    canon_classes.sort_unstable();
    canon_classes.dedup();
    if canon_classes.len() != 1 {
        return Err(EquivariantError::CanonicalClassAmbiguous(
            canon_classes.len(),
        ));
    }
    let canonical_class = canon_classes[0];

    // conjugation on classes
    let num_classes = complex.partition.num_classes();
    let mut conjugate_class = vec![usize::MAX; num_classes];
    for i in 0..n {
        let (c, tc) = (complex.partition.labels[i], complex.partition.labels[tau[i]]);
        if conjugate_class[c] == usize::MAX {
            conjugate_class[c] = tc;
        } else if conjugate_class[c] != tc {
            return Err(EquivariantError::ConjugationIllDefined(c));
        }
    }
    if conjugate_class[canonical_class] != canonical_class {
        return Err(EquivariantError::ConjugationIllDefined(canonical_class));
    }

    // re-anchor so that gradings are tau-aligned: the canonical class at an
    // invariant generator, each conjugate pair at (anchor, tau(anchor))
    let mut complex = complex;
    let mut anchors = vec![usize::MAX; num_classes];
    anchors[canonical_class] = invariant[0];
    for c in 0..num_classes {
        if anchors[c] != usize::MAX {
            continue;
        }
        let anchor = (0..n)
            .find(|&i| complex.partition.labels[i] == c)
            .ok_or_else(|| EquivariantError::Internal(format!("empty class {c}")))?;
        anchors[c] = anchor;
        let cc = conjugate_class[c];
        if cc != c && anchors[cc] == usize::MAX {
            anchors[cc] = tau[anchor];
        }
    }
    if anchors != complex.anchors {
        let gens = complex.gens.clone();
        let mut gradings = Vec::with_capacity(n);
        for (i, g) in gens.iter().enumerate() {
            let anchor = &gens[anchors[complex.partition.labels[i]]];
            let (dm, da) = solver
                .relative_gradings(d, g, anchor)
                .ok_or_else(|| EquivariantError::Internal("anchor class mismatch".into()))?;
            if !dm.is_integer() || !da.is_integer() {
                return Err(EquivariantError::Internal(format!(
                    "non-integral grading at generator {i}"
                )));
            }
            gradings.push((da.to_integer(), dm.to_integer()));
        }
        complex.gradings = gradings;
        complex.anchors = anchors;
    }

    // with aligned anchors tau preserves both gradings; for a
    // self-conjugate class this is exactly the alignment being verified
    for i in 0..n {
        let (a, m) = complex.gradings[i];
        let (ta, tm) = complex.gradings[tau[i]];
        if a != ta {
            let c = complex.partition.labels[i];
            if conjugate_class[c] == c {
                return Err(EquivariantError::SelfConjugateMisaligned(c));
            }
            return Err(EquivariantError::TauGradingLeak("Alexander", i));
        }
        if m != tm {
            return Err(EquivariantError::TauGradingLeak("Maslov", i));
        }
    }

    // orbits of conjugation
    let mut orbits: Vec<Orbit> = Vec::new();
    let mut orbit_of_class = vec![usize::MAX; num_classes];
    for c in 0..num_classes {
        if orbit_of_class[c] != usize::MAX {
            continue;
        }
        let cc = conjugate_class[c];
        let idx = orbits.len();
        orbit_of_class[c] = idx;
        let mut classes = vec![c];
        if cc != c {
            orbit_of_class[cc] = idx;
            classes.push(cc);
        }
        orbits.push(Orbit {
            classes,
            canonical: c == canonical_class,
        });
    }

    // blocks per (orbit, Alexander stratum)
    let mut members: BTreeMap<(usize, i64), Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        let orbit = orbit_of_class[complex.partition.labels[i]];
        members
            .entry((orbit, complex.gradings[i].0))
            .or_default()
            .push(i);
    }
    let q = F2Poly::q();
    let mut blocks = Vec::new();
    for ((orbit, alexander), gens_here) in members {
        let m = gens_here.len();
        let pos: BTreeMap<usize, usize> = gens_here
            .iter()
            .enumerate()
            .map(|(k, &g)| (g, k))
            .collect();
        let mut vertical = F2Matrix::zero(m, m);
        let mut total = PolyMatrix::zero(m, m);
        for (c, &x) in gens_here.iter().enumerate() {
            for (r, &y) in gens_here.iter().enumerate() {
                if complex.differential.get(y, x) {
                    vertical.set(r, c, true);
                    total.add_assign(r, c, &F2Poly::one());
                }
            }
            // (1 + tau) q: q at x and at tau(x); they cancel when x is fixed
            if tau[x] != x {
                let r = *pos.get(&tau[x]).ok_or_else(|| {
                    EquivariantError::Internal(
                        "tau leaves an (orbit, Alexander) block".into(),
                    )
                })?;
                total.add_assign(c, c, &q);
                total.add_assign(r, c, &q);
            }
        }
        blocks.push(Block {
            orbit,
            alexander,
            members: gens_here,
            total,
            vertical,
        });
    }

    // the total differential squares to zero, symbolically
    for (b, block) in blocks.iter().enumerate() {
        if !block.total.mul(&block.total).is_zero() {
            return Err(EquivariantError::TotalDifferentialSquare(b));
        }
    }

    Ok(EquivariantComplex {
        complex,
        tau,
        canonical_class,
        conjugate_class,
        orbits,
        blocks,
    })
}

/// Localized and E^1 ranks per (orbit, Alexander stratum).
#[derive(Clone, Debug, Serialize)]
pub struct StratumRanks {
    pub orbit: usize,
    /// absolute for the canonical orbit once shifted, else anchor-relative
    pub alexander: i64,
    pub dimension: usize,
    pub e1_rank: usize,
    pub localized_rank: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct BorelReport {
    pub orbits: Vec<OrbitReport>,
    pub strata: Vec<StratumRanks>,
    pub e1_total: usize,
    pub localized_total: usize,
    pub canonical_orbit: usize,
    /// shift applied to canonical-orbit Alexander gradings (absolute = relative + shift)
    pub canonical_shift: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitReport {
    pub classes: Vec<String>,
    pub canonical: bool,
    pub e1_rank: usize,
    pub localized_rank: usize,
}

impl BorelReport {
    /// Localized rank per absolute Alexander grading of the canonical orbit.
    pub fn canonical_localized_profile(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for s in &self.strata {
            if s.orbit == self.canonical_orbit && s.localized_rank > 0 {
                *out.entry(s.alexander).or_insert(0) += s.localized_rank;
            }
        }
        out
    }

    /// E^1 (tilde) rank per absolute Alexander grading of the canonical orbit.
    pub fn canonical_e1_profile(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for s in &self.strata {
            if s.orbit == self.canonical_orbit && s.e1_rank > 0 {
                *out.entry(s.alexander).or_insert(0) += s.e1_rank;
            }
        }
        out
    }
}

/// Computes E^1 and localized ranks of every block. `canonical_shift` moves
/// the canonical orbit's Alexander gradings to their absolute values (it
/// comes from the symmetric normalization of the cover's graded ranks).
pub fn localized_ranks(
    eq: &EquivariantComplex,
    canonical_shift: i64,
) -> Result<BorelReport, EquivariantError> {
    let mut strata = Vec::new();
    let mut orbit_e1 = vec![0usize; eq.orbits.len()];
    let mut orbit_loc = vec![0usize; eq.orbits.len()];
    for block in &eq.blocks {
        let dim = block.members.len();
        let e1 = dim - 2 * block.vertical.rank();
        let localized = dim - 2 * block.total.rank_over_fraction_field();
        if localized > e1 {
            return Err(EquivariantError::Internal(format!(
                "localized rank {localized} exceeds E1 rank {e1}"
            )));
        }
        if localized % 2 != dim % 2 {
            return Err(EquivariantError::Internal(
                "localized rank parity disagrees with block dimension".into(),
            ));
        }
        let canonical = eq.orbits[block.orbit].canonical;
        if !canonical && localized != 0 {
            return Err(EquivariantError::Internal(format!(
                "non-canonical orbit {} has localized rank {localized}",
                block.orbit
            )));
        }
        orbit_e1[block.orbit] += e1;
        orbit_loc[block.orbit] += localized;
        strata.push(StratumRanks {
            orbit: block.orbit,
            alexander: block.alexander + if canonical { canonical_shift } else { 0 },
            dimension: dim,
            e1_rank: e1,
            localized_rank: localized,
        });
    }
    let orbits: Vec<OrbitReport> = eq
        .orbits
        .iter()
        .enumerate()
        .map(|(i, o)| OrbitReport {
            classes: o
                .classes
                .iter()
                .map(|&c| eq.complex.partition.class_labels[c].clone())
                .collect(),
            canonical: o.canonical,
            e1_rank: orbit_e1[i],
            localized_rank: orbit_loc[i],
        })
        .collect();
    let canonical_orbit = eq
        .orbits
        .iter()
        .position(|o| o.canonical)
        .expect("canonical orbit exists");
    Ok(BorelReport {
        e1_total: orbit_e1.iter().sum(),
        localized_total: orbit_loc.iter().sum(),
        orbits,
        strata,
        canonical_orbit,
        canonical_shift,
    })
}

/// One comparison with the numbers that prove it.
#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub description: String,
    pub lhs: i64,
    pub relation: String,
    pub rhs: i64,
    pub holds: bool,
}

fn verdict(description: impl Into<String>, lhs: i64, relation: &str, rhs: i64) -> Verdict {
    let holds = match relation {
        "==" => lhs == rhs,
        ">=" => lhs >= rhs,
        "<=" => lhs <= rhs,
        other => unreachable!("unknown relation {other}"),
    };
    Verdict {
        description: description.into(),
        lhs,
        relation: relation.into(),
        rhs,
        holds,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerdictSet {
    pub localization_total: Verdict,
    pub localization_per_alexander: Vec<Verdict>,
    pub rank_inequality: Verdict,
    pub canonical_rank_inequality: Verdict,
    pub alexander_inequalities: Vec<Verdict>,
    pub top_grading_hat_inequality: Verdict,
    pub all_hold: bool,
}

#[derive(Debug, Error)]
pub enum VerdictError {
    #[error("basepoint pair counts differ: base n = {0}, cover n = {1}")]
    MismatchedN(usize, usize),
    #[error(transparent)]
    Rank(#[from] RankError),
    #[error("{0}")]
    Internal(String),
}

/// Evaluates the localization equality and the three rank-inequality
/// corollaries from the base ranks, the cover ranks and the Borel report.
/// Both rank inputs must already carry absolute Alexander gradings.
pub fn verify_corollaries(
    base: &GradedRanks,
    cover: &GradedRanks,
    borel: &BorelReport,
    canonical_class: usize,
) -> Result<VerdictSet, VerdictError> {
    if base.n_pairs != cover.n_pairs {
        return Err(VerdictError::MismatchedN(base.n_pairs, cover.n_pairs));
    }
    let n = base.n_pairs;
    if base.classes.len() != 1 {
        return Err(VerdictError::Internal(format!(
            "base diagram has {} spin^c classes, expected one",
            base.classes.len()
        )));
    }
    let base_profile = base.classes[0].alexander_profile();
    let base_total = base.total() as i64;
    let v_scale = 1i64 << (n - 1);

    let localization_total = verdict(
        "localized Borel rank equals the base tilde rank",
        borel.localized_total as i64,
        "==",
        base_total,
    );

    let loc_profile = borel.canonical_localized_profile();
    let mut localization_per_alexander = Vec::new();
    let mut keys: Vec<i64> = loc_profile
        .keys()
        .chain(base_profile.keys())
        .copied()
        .collect();
    keys.sort_unstable();
    keys.dedup();
    for a in keys {
        localization_per_alexander.push(verdict(
            format!("localized rank at Alexander grading {a} matches the base"),
            *loc_profile.get(&a).unwrap_or(&0) as i64,
            "==",
            *base_profile.get(&a).unwrap_or(&0) as i64,
        ));
    }

    // hat-rank totals: tilde / 2^(n-1)
    let cover_tilde_total: i64 = cover.total() as i64;
    if cover_tilde_total % v_scale != 0 || base_total % v_scale != 0 {
        return Err(VerdictError::Internal(
            "tilde ranks are not divisible by the V-factor dimension".into(),
        ));
    }
    let rank_inequality = verdict(
        "total hat rank of the cover dominates the base hat rank",
        cover_tilde_total / v_scale,
        ">=",
        base_total / v_scale,
    );

    let canonical_tilde: i64 = cover.classes[canonical_class].total() as i64;
    if canonical_tilde % v_scale != 0 {
        return Err(VerdictError::Internal(
            "canonical tilde rank is not divisible by the V-factor dimension".into(),
        ));
    }
    let canonical_rank_inequality = verdict(
        "canonical spin^c hat rank dominates the base hat rank",
        canonical_tilde / v_scale,
        ">=",
        base_total / v_scale,
    );

    // per-Alexander tilde inequality in the canonical class
    let canon_profile = cover.classes[canonical_class].alexander_profile();
    let mut alexander_inequalities = Vec::new();
    let mut keys: Vec<i64> = canon_profile
        .keys()
        .chain(base_profile.keys())
        .copied()
        .collect();
    keys.sort_unstable();
    keys.dedup();
    for a in keys {
        alexander_inequalities.push(verdict(
            format!("canonical tilde rank at Alexander grading {a} dominates the base"),
            *canon_profile.get(&a).unwrap_or(&0) as i64,
            ">=",
            *base_profile.get(&a).unwrap_or(&0) as i64,
        ));
    }

    // top-grading hat inequality
    let canon_hat = deconvolve_v_factors(&canon_profile, n)?;
    let base_hat = deconvolve_v_factors(&base_profile, n)?;
    let (&top, &top_rank) = canon_hat
        .last_key_value()
        .ok_or_else(|| VerdictError::Internal("canonical hat rank is zero".into()))?;
    let top_grading_hat_inequality = verdict(
        format!("canonical hat rank at the top grading {top} dominates the base"),
        top_rank as i64,
        ">=",
        *base_hat.get(&top).unwrap_or(&0) as i64,
    );

    let all_hold = localization_total.holds
        && localization_per_alexander.iter().all(|v| v.holds)
        && rank_inequality.holds
        && canonical_rank_inequality.holds
        && alexander_inequalities.iter().all(|v| v.holds)
        && top_grading_hat_inequality.holds;
    Ok(VerdictSet {
        localization_total,
        localization_per_alexander,
        rank_inequality,
        canonical_rank_inequality,
        alexander_inequalities,
        top_grading_hat_inequality,
        all_hold,
    })
}
