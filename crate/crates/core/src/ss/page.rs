use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

use crate::exact::FGAbelianGroup;
use crate::homological::BigradedGroups;

/// Multiplication by a designated even element `u` on the page: the
/// internal-degree shift `|u|` and the cells `(s, t)` on which
/// `u: E_{s,t} -> E_{s,t+|u|}` is onto.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleStructure {
    pub element: String,
    pub degree: i64,
    pub surjective: BTreeSet<(usize, i64)>,
}

/// A differential `d^r: E_{s,t} -> E_{s-r, t+r-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Differential {
    pub r: usize,
    pub source: (usize, i64),
    pub target: (usize, i64),
}

impl Differential {
    /// `None` when the target would lie in negative filtration.
    pub fn from_source(r: usize, s: usize, t: i64) -> Option<Self> {
        (r <= s).then_some(Differential { r, source: (s, t), target: (s - r, t + r as i64 - 1) })
    }
}

/// One page of a homologically graded spectral sequence with
/// differentials of bidegree `(-r, r-1)`.
///
/// Cells outside `s ≤ max_s`, `0 ≤ t ≤ max_t`, or listed in `unknown`,
/// are unknown rather than zero. Scans and assembly only look at total
/// degrees `≤ complete_total`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BigradedPage {
    pub max_s: usize,
    pub max_t: i64,
    pub complete_total: i64,
    pub field: Option<u64>,
    #[serde(with = "cells")]
    pub cells: BTreeMap<(usize, i64), FGAbelianGroup>,
    pub unknown: BTreeSet<(usize, i64)>,
    pub labels: BTreeMap<String, (usize, i64)>,
    pub module: Option<ModuleStructure>,
    /// Differentials known from outside input to be nonzero.
    pub forced: Vec<Differential>,
}

mod cells {
    use crate::exact::FGAbelianGroup;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use std::collections::BTreeMap;

    #[derive(Serialize, Deserialize)]
    struct Cell {
        s: usize,
        t: i64,
        group: String,
    }

    pub fn serialize<S: Serializer>(cells: &BTreeMap<(usize, i64), FGAbelianGroup>, ser: S) -> Result<S::Ok, S::Error> {
        let v: Vec<Cell> = cells.iter().map(|(&(s, t), g)| Cell { s, t, group: g.to_string() }).collect();
        v.serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<BTreeMap<(usize, i64), FGAbelianGroup>, D::Error> {
        Vec::<Cell>::deserialize(de)?
            .into_iter()
            .map(|c| c.group.parse().map(|g| ((c.s, c.t), g)).map_err(serde::de::Error::custom))
            .collect()
    }
}

impl BigradedPage {
    pub fn new(max_s: usize, max_t: i64, complete_total: i64, field: Option<u64>) -> Self {
        BigradedPage {
            max_s,
            max_t,
            complete_total: complete_total.min(max_t),
            field,
            cells: BTreeMap::new(),
            unknown: BTreeSet::new(),
            labels: BTreeMap::new(),
            module: None,
            forced: Vec::new(),
        }
    }

    /// A page from computed groups. `connectivity` is a `c` with
    /// `E_{s,t} = 0` whenever `s > 0` and `t < c·s`; it bounds the total
    /// degrees in which the window sees every cell.
    pub fn from_groups(groups: &BigradedGroups, connectivity: i64) -> Self {
        let complete = ((groups.max_s as i64 + 1) * (connectivity + 1) - 1).min(groups.max_t);
        let mut page = BigradedPage::new(groups.max_s, groups.max_t, complete, groups.field);
        for (&(s, t), g) in &groups.cells {
            page.insert(s, t, g.clone());
        }
        page
    }

    pub fn insert(&mut self, s: usize, t: i64, g: FGAbelianGroup) {
        if g.is_zero() {
            self.cells.remove(&(s, t));
        } else {
            self.cells.insert((s, t), g);
        }
    }

    pub fn mark_unknown(&mut self, s: usize, t: i64) {
        self.unknown.insert((s, t));
    }

    pub fn label(&mut self, name: &str, s: usize, t: i64) {
        self.labels.insert(name.to_string(), (s, t));
    }

    pub fn is_known(&self, s: usize, t: i64) -> bool {
        s <= self.max_s && (0..=self.max_t).contains(&t) && !self.unknown.contains(&(s, t))
    }

    /// The group at a known cell, `None` for unknown cells.
    pub fn get(&self, s: usize, t: i64) -> Option<FGAbelianGroup> {
        self.is_known(s, t).then(|| self.cells.get(&(s, t)).cloned().unwrap_or_default())
    }

    pub fn is_nonzero(&self, s: usize, t: i64) -> bool {
        self.cells.contains_key(&(s, t))
    }

    /// Nonzero cells of total degree `n`, by increasing filtration.
    pub fn total_degree_cells(&self, n: i64) -> Vec<(usize, i64, FGAbelianGroup)> {
        self.cells
            .iter()
            .filter(|((s, t), _)| *s as i64 + t == n)
            .map(|(&(s, t), g)| (s, t, g.clone()))
            .collect()
    }

    /// Nonzero cells with total degree at most `complete_total`.
    pub fn support(&self) -> Vec<(usize, i64)> {
        self.cells.keys().copied().filter(|(s, t)| *s as i64 + t <= self.complete_total).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("pages serialize")
    }
}
