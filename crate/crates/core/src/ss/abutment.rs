use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

use super::page::BigradedPage;
use super::scan::CollapseCertificate;
use super::SsError;
use crate::exact::{ext_z, FGAbelianGroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtensionRule {
    /// `Ext(top layer, assembled lower part) = 0`, so the extension splits.
    SplitIfFreeTop,
    /// A single nonzero layer in the total degree.
    DegreeCollisionForcesTrivial,
    /// Multiplication by the page's module element maps every layer of a
    /// split filtration piece in a lower degree onto the corresponding
    /// layer here, so the piece here is split too.
    ModulePropagation,
    ExplicitOverride,
}

impl fmt::Display for ExtensionRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExtensionRule::SplitIfFreeTop => "split_if_free_top",
            ExtensionRule::DegreeCollisionForcesTrivial => "degree_collision_forces_trivial",
            ExtensionRule::ModulePropagation => "module_propagation",
            ExtensionRule::ExplicitOverride => "explicit_override",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Override {
    pub group: FGAbelianGroup,
    pub justification: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionPolicy {
    pub rules: Vec<ExtensionRule>,
    pub overrides: BTreeMap<i64, Override>,
}

impl ExtensionPolicy {
    pub fn new(rules: &[ExtensionRule]) -> Self {
        ExtensionPolicy { rules: rules.to_vec(), overrides: BTreeMap::new() }
    }

    pub fn standard() -> Self {
        ExtensionPolicy::new(&[ExtensionRule::DegreeCollisionForcesTrivial, ExtensionRule::SplitIfFreeTop])
    }

    pub fn with_override(mut self, degree: i64, group: FGAbelianGroup, justification: &str) -> Self {
        if !self.rules.contains(&ExtensionRule::ExplicitOverride) {
            self.rules.push(ExtensionRule::ExplicitOverride);
        }
        self.overrides.insert(degree, Override { group, justification: justification.to_string() });
        self
    }

    fn allows(&self, rule: ExtensionRule) -> bool {
        self.rules.contains(&rule)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layer {
    pub s: usize,
    pub t: i64,
    pub group: FGAbelianGroup,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub filtration: usize,
    pub rule: ExtensionRule,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbutmentDegree {
    pub degree: i64,
    pub layers: Vec<Layer>,
    /// `None` when an extension is unresolved.
    pub group: Option<FGAbelianGroup>,
    pub steps: Vec<Step>,
    /// The largest filtration through which the degree is known to be the
    /// direct sum of its layers.
    pub split_through: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Abutment {
    pub degrees: BTreeMap<i64, AbutmentDegree>,
}

impl Abutment {
    pub fn group(&self, n: i64) -> Option<&FGAbelianGroup> {
        self.degrees.get(&n).and_then(|d| d.group.as_ref())
    }

    /// Degrees whose extensions need outside input.
    pub fn unresolved(&self) -> Vec<i64> {
        self.degrees.values().filter(|d| d.group.is_none()).map(|d| d.degree).collect()
    }
}

fn layer_order(layers: &[Layer]) -> (usize, BigInt) {
    layers.iter().fold((0, BigInt::one()), |(r, o), l| {
        let torsion: BigInt = l.group.torsion().iter().product();
        (r + l.group.free_rank(), o * torsion)
    })
}

/// Solves the extension problems of an `E^∞` page bottom-up in each total
/// degree `< page.complete_total`, applying only the rules in `policy`.
/// The top complete degree is left out: differentials into it start one
/// degree higher, outside the scanned window.
pub fn assemble_abutment(
    page: &BigradedPage,
    certificate: &CollapseCertificate,
    policy: &ExtensionPolicy,
) -> Result<Abutment, SsError> {
    if !certificate.collapses() {
        return Err(SsError::CollapseNotCertified);
    }
    let mut degrees: BTreeMap<i64, AbutmentDegree> = BTreeMap::new();
    for n in 0..page.complete_total.min(certificate.through) {
        let layers: Vec<Layer> =
            page.total_degree_cells(n).into_iter().map(|(s, t, group)| Layer { s, t, group }).collect();
        let mut steps = Vec::new();
        if let Some(o) = policy.overrides.get(&n).filter(|_| policy.allows(ExtensionRule::ExplicitOverride)) {
            steps.push(Step { filtration: layers.last().map_or(0, |l| l.s), rule: ExtensionRule::ExplicitOverride, note: o.justification.clone() });
            degrees.insert(n, AbutmentDegree { degree: n, layers, group: Some(o.group.clone()), steps, split_through: None });
            continue;
        }
        if layers.len() <= 1 {
            let ok = layers.is_empty() || policy.allows(ExtensionRule::DegreeCollisionForcesTrivial);
            let group = ok.then(|| layers.first().map(|l| l.group.clone()).unwrap_or_default());
            if let Some(l) = layers.first().filter(|_| ok) {
                steps.push(Step {
                    filtration: l.s,
                    rule: ExtensionRule::DegreeCollisionForcesTrivial,
                    note: format!("only contributor is E∞_{{{},{}}}", l.s, l.t),
                });
            }
            let split_through = group.as_ref().map(|_| layers.first().map_or(usize::MAX, |l| l.s));
            degrees.insert(n, AbutmentDegree { degree: n, layers, group, steps, split_through });
            continue;
        }
        let mut acc = layers[0].group.clone();
        let mut split_through = Some(layers[0].s);
        let mut resolved = true;
        for (j, layer) in layers.iter().enumerate().skip(1) {
            // Over a field page the abutment is a vector space, so Ext vanishes.
            let vanishes = match page.field {
                Some(p) => Some(format!("Ext over F_{p} vanishes")),
                None => ext_z(&layer.group, &acc).is_zero().then(|| format!("Ext({}, {}) = 0", layer.group, acc)),
            };
            if let Some(note) = vanishes.filter(|_| policy.allows(ExtensionRule::SplitIfFreeTop)) {
                steps.push(Step { filtration: layer.s, rule: ExtensionRule::SplitIfFreeTop, note });
                acc = acc.direct_sum(&layer.group);
                if split_through.is_some() {
                    split_through = Some(layer.s);
                }
                continue;
            }
            if policy.allows(ExtensionRule::ModulePropagation) && split_through.is_some() {
                if let Some(note) = propagate(page, &degrees, n, &layers[..=j]) {
                    steps.push(Step { filtration: layer.s, rule: ExtensionRule::ModulePropagation, note });
                    acc = acc.direct_sum(&layer.group);
                    split_through = Some(layer.s);
                    continue;
                }
            }
            resolved = false;
            break;
        }
        let group = resolved.then_some(acc);
        if let Some(g) = &group {
            debug_assert_eq!(layer_order(&layers), (g.free_rank(), g.torsion().iter().product()));
        }
        degrees.insert(n, AbutmentDegree { degree: n, layers, group, steps, split_through: split_through.filter(|_| resolved) });
    }
    Ok(Abutment { degrees })
}

/// Finds a lower degree `n - i|u|` whose filtration piece through the top
/// of `layers` is split and maps onto every layer here.
fn propagate(page: &BigradedPage, done: &BTreeMap<i64, AbutmentDegree>, n: i64, layers: &[Layer]) -> Option<String> {
    let module = page.module.as_ref()?;
    let top = layers.last()?.s;
    let mut i = 1;
    while n - i * module.degree >= 0 {
        let n0 = n - i * module.degree;
        let lower = done.get(&n0)?;
        if lower.split_through.is_some_and(|st| st >= top) {
            let onto = layers.iter().all(|l| {
                let t0 = n0 - l.s as i64;
                page.is_nonzero(l.s, t0) && (0..i).all(|k| module.surjective.contains(&(l.s, t0 + k * module.degree)))
            });
            if onto {
                return Some(format!("{}^{} maps the split filtration-{} piece of degree {} onto this one", module.element, i, top, n0));
            }
        }
        i += 1;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ss::{exclusion_scan, ModuleStructure};

    fn page_with(cells: &[(usize, i64, FGAbelianGroup)]) -> BigradedPage {
        let mut page = BigradedPage::new(6, 20, 20, None);
        for (s, t, g) in cells {
            page.insert(*s, *t, g.clone());
        }
        page
    }

    fn collapsed(page: &BigradedPage) -> CollapseCertificate {
        let mut c = exclusion_scan(page, None).unwrap();
        c.unresolved.clear();
        c
    }

    #[test]
    fn free_top_splits() {
        let page = page_with(&[(1, 8, FGAbelianGroup::cyclic(2)), (3, 6, FGAbelianGroup::free(1))]);
        let a = assemble_abutment(&page, &collapsed(&page), &ExtensionPolicy::standard()).unwrap();
        assert_eq!(a.group(9).unwrap().to_string(), "Z ⊕ Z/2");
    }

    #[test]
    fn torsion_on_torsion_is_unresolved() {
        let page = page_with(&[(1, 2, FGAbelianGroup::cyclic(3)), (3, 0, FGAbelianGroup::cyclic(3))]);
        let a = assemble_abutment(&page, &collapsed(&page), &ExtensionPolicy::standard()).unwrap();
        assert_eq!(a.unresolved(), vec![3]);
        let policy = ExtensionPolicy::standard().with_override(3, FGAbelianGroup::cyclic(9), "given");
        let a = assemble_abutment(&page, &collapsed(&page), &policy).unwrap();
        assert_eq!(a.group(3), Some(&FGAbelianGroup::cyclic(9)));
    }

    #[test]
    fn propagation_along_u() {
        let z2 = FGAbelianGroup::cyclic(2);
        let mut page = page_with(&[
            (1, 8, z2.clone()),
            (3, 6, FGAbelianGroup::free(1)),
            (1, 10, z2.clone()),
            (3, 8, z2.clone()),
        ]);
        page.module = Some(ModuleStructure { element: "u".into(), degree: 2, surjective: [(1, 8), (3, 6)].into() });
        let mut policy = ExtensionPolicy::standard();
        let a = assemble_abutment(&page, &collapsed(&page), &policy).unwrap();
        assert_eq!(a.unresolved(), vec![11]);
        policy.rules.push(ExtensionRule::ModulePropagation);
        let a = assemble_abutment(&page, &collapsed(&page), &policy).unwrap();
        assert_eq!(a.group(11).unwrap().to_string(), "(Z/2)^2");
    }
}
