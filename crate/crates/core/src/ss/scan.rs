use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

use super::page::{BigradedPage, Differential};
use super::SsError;
use crate::exact::{smith_normal_form, IntegerMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExclusionReason {
    SourceZero,
    TargetZero,
    Parity,
    UnitColumnProtected,
}

impl fmt::Display for ExclusionReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExclusionReason::SourceZero => "source_zero",
            ExclusionReason::TargetZero => "target_zero",
            ExclusionReason::Parity => "parity",
            ExclusionReason::UnitColumnProtected => "unit_column_protected",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exclusion {
    pub differential: Differential,
    pub reason: ExclusionReason,
}

/// The outcome of an exclusion scan through total degree `through`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollapseCertificate {
    pub through: i64,
    pub exclusions: Vec<Exclusion>,
    pub unresolved: Vec<Differential>,
    /// Forced differentials that contradict a protected column.
    pub contradictions: Vec<Differential>,
    /// Forced differentials that are not contradictions.
    pub forced: Vec<Differential>,
}

impl CollapseCertificate {
    pub fn collapses(&self) -> bool {
        self.unresolved.is_empty() && self.contradictions.is_empty() && self.forced.is_empty()
    }

    pub fn reason_counts(&self) -> BTreeMap<ExclusionReason, usize> {
        let mut out = BTreeMap::new();
        for e in &self.exclusions {
            *out.entry(e.reason).or_insert(0) += 1;
        }
        out
    }

    /// Exclusions for `d^r` with both ends nonzero, i.e. those that need an
    /// argument beyond a zero target.
    pub fn nontrivial_exclusions(&self) -> impl Iterator<Item = &Exclusion> {
        self.exclusions.iter().filter(|e| e.reason != ExclusionReason::TargetZero)
    }
}

impl fmt::Display for CollapseCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.exclusions {
            let d = e.differential;
            writeln!(f, "d^{} {:?} -> {:?}: {}", d.r, d.source, d.target, e.reason)?;
        }
        for d in &self.unresolved {
            writeln!(f, "d^{} {:?} -> {:?}: UNRESOLVED", d.r, d.source, d.target)?;
        }
        for d in &self.contradictions {
            writeln!(f, "d^{} {:?} -> {:?}: CONTRADICTION (protected column)", d.r, d.source, d.target)?;
        }
        for d in &self.forced {
            writeln!(f, "d^{} {:?} -> {:?}: FORCED", d.r, d.source, d.target)?;
        }
        write!(f, "through total degree {}: {}", self.through, if self.collapses() { "collapse" } else { "no collapse" })
    }
}

/// Column 0 is declared to survive: nothing in it may be hit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitColumnConstraint {
    pub cells: Vec<(usize, i64)>,
    /// Forced differentials into column 0.
    pub contradictions: Vec<Differential>,
}

pub fn protect_unit_column(page: &BigradedPage) -> UnitColumnConstraint {
    UnitColumnConstraint {
        cells: page.cells.keys().copied().filter(|(s, _)| *s == 0).collect(),
        contradictions: page.forced.iter().copied().filter(|d| d.target.0 == 0 && page.is_nonzero(0, d.target.1)).collect(),
    }
}

/// Whether `v` lies in the subgroup of `Z^2` spanned by `gens`.
pub fn lattice_contains(gens: &[(i64, i64)], v: (i64, i64)) -> bool {
    if gens.is_empty() {
        return v == (0, 0);
    }
    let m = IntegerMatrix::from_fn(2, gens.len(), |i, j| BigInt::from(if i == 0 { gens[j].0 } else { gens[j].1 }));
    let snf = smith_normal_form(&m);
    let w = snf.u.apply(&[BigInt::from(v.0), BigInt::from(v.1)]).expect("2x2 transform");
    (0..2).all(|i| {
        let d = if i < gens.len() { snf.d[(i, i)].clone() } else { BigInt::zero() };
        if d.is_zero() {
            w[i].is_zero()
        } else {
            (&w[i] % &d).is_zero()
        }
    })
}

/// The lattice spanned by differences of support cells.
pub fn support_lattice(support: &[(usize, i64)]) -> Vec<(i64, i64)> {
    match support.first() {
        None => vec![],
        Some(&(s0, t0)) => support.iter().skip(1).map(|&(s, t)| (s as i64 - s0 as i64, t - t0)).collect(),
    }
}

/// For each `2 ≤ r ≤ max_s`, whether `(-r, r-1)` lies outside the lattice
/// spanned by the page's support, so that no `d^r` can connect two
/// nonzero cells.
pub fn parity_exclusions(page: &BigradedPage) -> Vec<(usize, bool)> {
    let lattice = support_lattice(&page.support());
    (2..=page.max_s).map(|r| (r, !lattice_contains(&lattice, (-(r as i64), r as i64 - 1)))).collect()
}

/// Checks every `d^r`, `r ≥ 2`, out of a nonzero cell of total degree at
/// most `page.complete_total`. A differential is excluded when its target
/// is zero, when its bidegree is not in the lattice spanned by the
/// page's support (so no two nonzero cells are that far apart), or when
/// it hits a protected column 0.
pub fn exclusion_scan(page: &BigradedPage, protection: Option<&UnitColumnConstraint>) -> Result<CollapseCertificate, SsError> {
    let through = page.complete_total;
    let unknown: Vec<(usize, i64)> =
        page.unknown.iter().copied().filter(|(s, t)| *s as i64 + t <= through && *s <= page.max_s).collect();
    if !unknown.is_empty() {
        return Err(SsError::UnknownCellsInWindow(unknown));
    }
    let support = page.support();
    let parity_excluded: BTreeMap<usize, bool> = parity_exclusions(page).into_iter().collect();
    let per_source: Vec<(Vec<Exclusion>, Vec<Differential>)> = support
        .par_iter()
        .map(|&(s, t)| {
            let mut ex = Vec::new();
            let mut unresolved = Vec::new();
            for r in 2..=s {
                let d = Differential::from_source(r, s, t).expect("r ≤ s");
                let (ts, tt) = d.target;
                let reason = if !page.is_nonzero(ts, tt) {
                    Some(ExclusionReason::TargetZero)
                } else if parity_excluded[&r] {
                    Some(ExclusionReason::Parity)
                } else if ts == 0 && protection.is_some() {
                    Some(ExclusionReason::UnitColumnProtected)
                } else {
                    None
                };
                match reason {
                    Some(reason) => ex.push(Exclusion { differential: d, reason }),
                    None => unresolved.push(d),
                }
            }
            (ex, unresolved)
        })
        .collect();
    let mut exclusions = Vec::new();
    let mut unresolved = Vec::new();
    for (e, u) in per_source {
        exclusions.extend(e);
        unresolved.extend(u);
    }
    let contradictions = protection.map(|p| p.contradictions.clone()).unwrap_or_default();
    let forced = page.forced.iter().copied().filter(|d| !contradictions.contains(d)).collect();
    // a forced differential is no longer "excluded"
    exclusions.retain(|e| !page.forced.contains(&e.differential));
    Ok(CollapseCertificate { through, exclusions, unresolved, contradictions, forced })
}

/// Nonzero cells grouped by total degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollisionReport {
    pub through: i64,
    pub degrees: BTreeMap<i64, Vec<(usize, i64)>>,
}

impl CollisionReport {
    /// At most one contributor: no extension problem.
    pub fn extension_free(&self, n: i64) -> bool {
        self.degrees.get(&n).is_none_or(|c| c.len() <= 1)
    }

    pub fn multi_contributor_degrees(&self) -> Vec<i64> {
        self.degrees.iter().filter(|(_, c)| c.len() > 1).map(|(n, _)| *n).collect()
    }
}

pub fn degree_collision_check(page: &BigradedPage) -> CollisionReport {
    let mut degrees: BTreeMap<i64, Vec<(usize, i64)>> = BTreeMap::new();
    for (s, t) in page.support() {
        degrees.entry(s as i64 + t).or_default().push((s, t));
    }
    CollisionReport { through: page.complete_total, degrees }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::FGAbelianGroup;

    #[test]
    fn lattice_membership() {
        assert!(!lattice_contains(&[(0, 2), (1, 2)], (-2, 1)));
        assert!(lattice_contains(&[(0, 2), (1, 2)], (-3, 2)));
        assert!(lattice_contains(&[], (0, 0)));
        assert!(!lattice_contains(&[], (1, 0)));
    }

    #[test]
    fn compatible_pair_stays_unresolved() {
        let mut page = BigradedPage::new(4, 10, 10, Some(3));
        page.insert(0, 1, FGAbelianGroup::cyclic(3));
        page.insert(2, 0, FGAbelianGroup::cyclic(3));
        let cert = exclusion_scan(&page, None).unwrap();
        assert!(!cert.collapses());
        assert_eq!(cert.unresolved, vec![Differential { r: 2, source: (2, 0), target: (0, 1) }]);
    }

    #[test]
    fn unit_column_contradiction() {
        let mut page = BigradedPage::new(4, 10, 10, None);
        page.insert(0, 2, FGAbelianGroup::free(1));
        page.insert(3, 0, FGAbelianGroup::free(1));
        page.forced.push(Differential { r: 3, source: (3, 0), target: (0, 2) });
        let c = protect_unit_column(&page);
        assert_eq!(c.contradictions.len(), 1);
        let cert = exclusion_scan(&page, Some(&c)).unwrap();
        assert!(!cert.collapses());
        let empty = BigradedPage::new(4, 10, 10, None);
        assert!(protect_unit_column(&empty).cells.is_empty());
    }

    #[test]
    fn unknown_cells_are_errors() {
        let mut page = BigradedPage::new(4, 10, 10, None);
        page.mark_unknown(1, 3);
        assert!(matches!(exclusion_scan(&page, None), Err(SsError::UnknownCellsInWindow(_))));
    }
}
