//! Graded homology ranks, absolute Alexander normalization, the Alexander
//! polynomial via the graded Euler characteristic, and division by the
//! two-dimensional vector space V placed in bigradings (0,0) and (-1,-1).

use std::collections::BTreeMap;

use thiserror::Error;

use crate::algebra::F2Matrix;

use super::differential::FloerComplex;

#[derive(Debug, Error)]
pub enum RankError {
    #[error("class {0} rank profile admits no symmetric normalization: {1}")]
    NotSymmetric(usize, String),
    #[error("graded Euler characteristic is not divisible by (1 - 1/t)^(n-1)")]
    NotDivisible,
    #[error("Alexander polynomial does not normalize to Delta(1) = 1: {0}")]
    BadNormalization(String),
    #[error("alexander_polynomial requires a single spin^c class, got {0}")]
    MultipleClasses(usize),
    #[error("rank profile is not divisible by the V-factor profile")]
    VDivision,
}

/// Homology ranks per (spin^c class, Alexander, relative Maslov).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedRanks {
    pub n_pairs: usize,
    pub classes: Vec<ClassRanks>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassRanks {
    pub label: String,
    /// (A, M) -> rank; A absolute after normalization, else anchor-relative
    pub ranks: BTreeMap<(i64, i64), usize>,
    /// shift applied to anchor-relative Alexander gradings, when normalized
    pub alexander_shift: Option<i64>,
}

impl ClassRanks {
    pub fn total(&self) -> usize {
        self.ranks.values().sum()
    }

    /// Rank per Alexander grading, Maslov collapsed.
    pub fn alexander_profile(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for (&(a, _), &r) in &self.ranks {
            *out.entry(a).or_insert(0) += r;
        }
        out.retain(|_, r| *r > 0);
        out
    }
}

impl GradedRanks {
    pub fn total(&self) -> usize {
        self.classes.iter().map(ClassRanks::total).sum()
    }
}

/// Homology of the complex, graded by (class, A, M). Ranks use the identity
/// dim H = dim ker - rank im computed per M-stratum.
pub fn hfk_tilde(complex: &FloerComplex, n_pairs: usize) -> GradedRanks {
    let mut classes = Vec::new();
    for class in 0..complex.partition.num_classes() {
        let members: Vec<usize> = (0..complex.gens.len())
            .filter(|&i| complex.partition.labels[i] == class)
            .collect();
        // strata (A, M) -> member list
        let mut strata: BTreeMap<(i64, i64), Vec<usize>> = BTreeMap::new();
        for &i in &members {
            strata.entry(complex.gradings[i]).or_default().push(i);
        }
        let block = |from: &[usize], to: &[usize]| -> F2Matrix {
            let mut m = F2Matrix::zero(to.len(), from.len());
            for (c, &x) in from.iter().enumerate() {
                for (r, &y) in to.iter().enumerate() {
                    if complex.differential.get(y, x) {
                        m.set(r, c, true);
                    }
                }
            }
            m
        };
        let empty: Vec<usize> = Vec::new();
        let mut ranks: BTreeMap<(i64, i64), usize> = BTreeMap::new();
        for (&(a, m), gens_here) in &strata {
            let below = strata.get(&(a, m - 1)).unwrap_or(&empty);
            let above = strata.get(&(a, m + 1)).unwrap_or(&empty);
            let d_out = block(gens_here, below);
            let d_in = block(above, gens_here);
            let h = gens_here.len() - d_out.rank() - d_in.rank();
            if h > 0 {
                ranks.insert((a, m), h);
            }
        }
        classes.push(ClassRanks {
            label: complex.partition.class_labels[class].clone(),
            ranks,
            alexander_shift: None,
        });
    }
    GradedRanks { n_pairs, classes }
}

/// Shifts the Alexander gradings of one class so the rank profile satisfies
/// rank(a) = rank(-(n-1) - a), the hat-symmetry transported through the
/// V-factors. Fails loudly when the profile has no symmetric placement.
pub fn normalize_class_alexander(
    ranks: &mut GradedRanks,
    class: usize,
    n_pairs: usize,
) -> Result<(), RankError> {
    let cr = &mut ranks.classes[class];
    if cr.ranks.is_empty() {
        return Ok(());
    }
    let profile: BTreeMap<i64, usize> = cr.alexander_profile();
    let (&amin, _) = profile.first_key_value().expect("nonempty");
    let (&amax, _) = profile.last_key_value().expect("nonempty");
    // center the support at -(n-1)/2: shift = target_center - center
    let target2 = -(n_pairs as i64 - 1); // 2 * target center
    let center2 = amin + amax; // 2 * current center
    if (target2 - center2) % 2 != 0 {
        return Err(RankError::NotSymmetric(
            class,
            format!("support [{amin}, {amax}] cannot center at {target2}/2"),
        ));
    }
    let shift = (target2 - center2) / 2;
    for (&a, &r) in &profile {
        let mirrored = center2 - a;
        if profile.get(&mirrored) != Some(&r) {
            return Err(RankError::NotSymmetric(
                class,
                format!("rank({a}) != rank({mirrored})"),
            ));
        }
    }
    cr.ranks = cr
        .ranks
        .iter()
        .map(|(&(a, m), &r)| ((a + shift, m), r))
        .collect();
    cr.alexander_shift = Some(shift);
    Ok(())
}

/// Integer Laurent polynomial, exponent -> coefficient.
pub type Laurent = BTreeMap<i64, i64>;

fn laurent_trim(p: &mut Laurent) {
    p.retain(|_, c| *c != 0);
}

fn laurent_mul(a: &Laurent, b: &Laurent) -> Laurent {
    let mut out = Laurent::new();
    for (&ea, &ca) in a {
        for (&eb, &cb) in b {
            *out.entry(ea + eb).or_insert(0) += ca * cb;
        }
    }
    laurent_trim(&mut out);
    out
}

/// Exact division in the Laurent ring; None when the division leaves a
/// remainder. Shifts both sides into the polynomial ring so the division
/// terminates.
fn laurent_div(num: &Laurent, den: &Laurent) -> Option<Laurent> {
    if num.is_empty() {
        return Some(Laurent::new());
    }
    let (&nbot, _) = num.first_key_value().expect("nonempty");
    let (&dbot, _) = den.first_key_value()?;
    let (&dtop, &dlead) = den.last_key_value()?;
    let dden_deg = dtop - dbot;
    let mut rem: Laurent = num.iter().map(|(&e, &c)| (e - nbot, c)).collect();
    let mut quo = Laurent::new();
    while let Some((&ntop, &nlead)) = rem.last_key_value() {
        if ntop < dden_deg {
            return None; // nonzero remainder of lower degree
        }
        if nlead % dlead != 0 {
            return None;
        }
        let c = nlead / dlead;
        let e = ntop - dden_deg;
        quo.insert(e + nbot - dbot, c);
        for (&de, &dc) in den {
            *rem.entry(de - dbot + e).or_insert(0) -= c * dc;
        }
        laurent_trim(&mut rem);
    }
    Some(quo)
}

/// The Alexander polynomial from normalized tilde ranks: graded Euler
/// characteristic divided by (1 - t^{-1})^{n-1}, symmetrized with
/// Delta(1) = 1. Also returns the determinant |Delta(-1)|.
pub fn alexander_polynomial(ranks: &GradedRanks) -> Result<(Laurent, u64), RankError> {
    if ranks.classes.len() != 1 {
        return Err(RankError::MultipleClasses(ranks.classes.len()));
    }
    let cr = &ranks.classes[0];
    let mut chi = Laurent::new();
    for (&(a, m), &r) in &cr.ranks {
        let sign = if m.rem_euclid(2) == 0 { 1 } else { -1 };
        *chi.entry(a).or_insert(0) += sign * r as i64;
    }
    laurent_trim(&mut chi);
    let v_factor: Laurent = [(0i64, 1i64), (-1, -1)].into_iter().collect();
    let mut den = Laurent::from([(0i64, 1i64)]);
    for _ in 1..ranks.n_pairs {
        den = laurent_mul(&den, &v_factor);
    }
    let mut delta = laurent_div(&chi, &den).ok_or(RankError::NotDivisible)?;
    // normalize sign so Delta(1) = 1, then verify the symmetry
    let at_one: i64 = delta.values().sum();
    match at_one {
        1 => {}
        -1 => {
            for c in delta.values_mut() {
                *c = -*c;
            }
        }
        other => {
            return Err(RankError::BadNormalization(format!(
                "Delta(1) = {other}"
            )))
        }
    }
    if !delta.is_empty() {
        let (&lo, _) = delta.first_key_value().expect("nonempty");
        let (&hi, _) = delta.last_key_value().expect("nonempty");
        if (lo + hi) % 2 != 0 {
            return Err(RankError::BadNormalization(
                "support cannot be centered".into(),
            ));
        }
        let shift = (lo + hi) / 2;
        if shift != 0 {
            delta = delta.into_iter().map(|(e, c)| (e - shift, c)).collect();
        }
        for (&e, &c) in &delta {
            if delta.get(&-e) != Some(&c) {
                return Err(RankError::BadNormalization(format!(
                    "coefficient asymmetry at t^{e}"
                )));
            }
        }
    }
    let det: i64 = delta
        .iter()
        .map(|(&e, &c)| if e.rem_euclid(2) == 0 { c } else { -c })
        .sum();
    Ok((delta, det.unsigned_abs()))
}

/// Divides an Alexander rank profile by the V-factor profile (1 + u^{-1})
/// taken n-1 times, recovering the hat-flavor ranks per grading.
pub fn deconvolve_v_factors(
    profile: &BTreeMap<i64, usize>,
    n_pairs: usize,
) -> Result<BTreeMap<i64, usize>, RankError> {
    let mut rem: BTreeMap<i64, i64> = profile
        .iter()
        .map(|(&a, &r)| (a, r as i64))
        .collect();
    rem.retain(|_, v| *v != 0);
    let mut v = Laurent::from([(0i64, 1i64)]);
    let v_factor: Laurent = [(0i64, 1i64), (-1, 1)].into_iter().collect();
    for _ in 1..n_pairs {
        v = laurent_mul(&v, &v_factor);
    }
    let quo = laurent_div(&rem, &v).ok_or(RankError::VDivision)?;
    let mut out = BTreeMap::new();
    for (e, c) in quo {
        if c < 0 {
            return Err(RankError::VDivision);
        }
        if c > 0 {
            out.insert(e, c as usize);
        }
    }
    Ok(out)
}

/// Renders a Laurent polynomial in the variable t.
pub fn laurent_to_string(p: &Laurent) -> String {
    if p.is_empty() {
        return "0".into();
    }
    let mut parts = Vec::new();
    for (&e, &c) in p.iter().rev() {
        let term = match (c, e) {
            (c, 0) => format!("{c}"),
            (1, 1) => "t".into(),
            (-1, 1) => "-t".into(),
            (c, 1) => format!("{c}*t"),
            (1, e) => format!("t^{e}"),
            (-1, e) => format!("-t^{e}"),
            (c, e) => format!("{c}*t^{e}"),
        };
        parts.push(term);
    }
    parts.join(" + ").replace("+ -", "- ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laurent(pairs: &[(i64, i64)]) -> Laurent {
        pairs.iter().copied().collect()
    }

    #[test]
    fn laurent_division_exact_and_failing() {
        let num = laurent(&[(1, 1), (0, -1), (-1, -1), (-2, 1)]); // (t-1+1/t... ) arbitrary
        let den = laurent(&[(0, 1), (-1, -1)]);
        let quo = laurent_div(&num, &den).unwrap();
        assert_eq!(laurent_mul(&quo, &den), num);
        assert!(laurent_div(&laurent(&[(0, 1)]), &laurent(&[(0, 2)])).is_none());
    }

    #[test]
    fn deconvolution_recovers_hat_profile() {
        // hat = {1:1, 0:1, -1:1} tensored with one V factor
        let tilde: BTreeMap<i64, usize> =
            [(1, 1), (0, 2), (-1, 2), (-2, 1)].into_iter().collect();
        let hat = deconvolve_v_factors(&tilde, 2).unwrap();
        assert_eq!(hat, [(1, 1), (0, 1), (-1, 1)].into_iter().collect());
        let bad: BTreeMap<i64, usize> = [(1, 1), (0, 1), (-1, 1)].into_iter().collect();
        assert!(deconvolve_v_factors(&bad, 2).is_err());
    }
}
