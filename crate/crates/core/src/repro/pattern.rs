use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::exact::{p_adic_valuation, CoefficientRing, FGAbelianGroup};
use crate::graded::{realize, GradedError, GradedRingPresentation, Polynomial, Term};
use crate::ss::BigradedPage;

/// One tensor factor of a closed-form answer, by its generator degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Factor {
    Polynomial { name: String, degree: i64 },
    Exterior { name: String, degree: i64 },
    DividedPower { name: String, degree: i64 },
    /// `k[z]/z^height`.
    Truncated { name: String, degree: i64, height: u32 },
}

impl Factor {
    pub fn polynomial(name: &str, degree: i64) -> Self {
        Factor::Polynomial { name: name.into(), degree }
    }

    pub fn exterior(name: &str, degree: i64) -> Self {
        Factor::Exterior { name: name.into(), degree }
    }

    pub fn divided_power(name: &str, degree: i64) -> Self {
        Factor::DividedPower { name: name.into(), degree }
    }

    pub fn truncated(name: &str, degree: i64, height: u32) -> Self {
        Factor::Truncated { name: name.into(), degree, height }
    }

    pub fn degree(&self) -> i64 {
        match self {
            Factor::Polynomial { degree, .. }
            | Factor::Exterior { degree, .. }
            | Factor::DividedPower { degree, .. }
            | Factor::Truncated { degree, .. } => *degree,
        }
    }

    fn name(&self) -> &str {
        match self {
            Factor::Polynomial { name, .. }
            | Factor::Exterior { name, .. }
            | Factor::DividedPower { name, .. }
            | Factor::Truncated { name, .. } => name,
        }
    }

    /// Ranks of the factor in degrees `0..=max`.
    fn ranks(&self, max: i64) -> Vec<usize> {
        let mut out = vec![0; max as usize + 1];
        let d = self.degree();
        let bound = match self {
            Factor::Exterior { .. } => 2,
            Factor::Truncated { height, .. } => *height as i64,
            _ => i64::MAX,
        };
        let mut k = 0;
        while k < bound && k * d <= max {
            out[(k * d) as usize] += 1;
            k += 1;
        }
        out
    }
}

impl std::fmt::Display for Factor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Factor::Polynomial { name, degree } => write!(f, "P({name}, {degree})"),
            Factor::Exterior { name, degree } => write!(f, "Λ({name}, {degree})"),
            Factor::DividedPower { name, degree } => write!(f, "Γ({name}, {degree})"),
            Factor::Truncated { name, degree, height } => write!(f, "P({name}, {degree})/{name}^{height}"),
        }
    }
}

/// `base ⊗ factor_1 ⊗ ... ⊗ factor_n`, where the base is the coefficient
/// ring in degree 0 unless a presentation is given.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorPattern {
    pub coefficients: CoefficientRing,
    #[serde(default)]
    pub base: Option<GradedRingPresentation>,
    pub factors: Vec<Factor>,
}

/// Generator degrees `start, start + step, start + 2 step, ...`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Progression {
    pub start: i64,
    pub step: i64,
}

/// `R ⋉ M⟨y_0, y_1, ...⟩`: the ring `R` plus a copy of the cyclic module
/// `M` on each generator `y_i`, with all products of the `y_i` zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareZeroPattern {
    pub base: GradedRingPresentation,
    /// `M = R/I`, given as `R` with the relations of `I` appended.
    pub module: GradedRingPresentation,
    pub generators: Progression,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "pattern", rename_all = "snake_case")]
pub enum ClosedFormPattern {
    Tensor(TensorPattern),
    SquareZero(SquareZeroPattern),
    /// `Z_(p)` in degree 0, `Z/p^{v_p(t)+1}` in degree `2pt`, zero elsewhere.
    AnswerRing { prime: u64 },
}

fn unit_group(ring: CoefficientRing) -> FGAbelianGroup {
    match ring {
        CoefficientRing::PrimeField(p) => FGAbelianGroup::elementary(p, 1),
        _ => FGAbelianGroup::free(1),
    }
}

fn base_groups(base: Option<&GradedRingPresentation>, ring: CoefficientRing, max: i64) -> Result<Vec<FGAbelianGroup>, GradedError> {
    match base {
        Some(b) => {
            let r = realize(b, max)?;
            Ok((0..=max).map(|d| r.group(d)).collect())
        }
        None => Ok((0..=max).map(|d| if d == 0 { unit_group(ring) } else { FGAbelianGroup::zero() }).collect()),
    }
}

fn convolve(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = vec![0; a.len()];
    for (i, x) in a.iter().enumerate().filter(|(_, x)| **x > 0) {
        for (j, y) in b.iter().enumerate().take(a.len() - i) {
            out[i + j] += x * y;
        }
    }
    out
}

impl TensorPattern {
    pub fn new(coefficients: CoefficientRing, factors: Vec<Factor>) -> Self {
        TensorPattern { coefficients, base: None, factors }
    }

    /// Ranks of the tensor product of the factors alone.
    pub fn factor_ranks(&self, max: i64) -> Vec<usize> {
        let mut acc = vec![0; max as usize + 1];
        acc[0] = 1;
        for f in &self.factors {
            acc = convolve(&acc, &f.ranks(max));
        }
        acc
    }

    pub fn describe(&self) -> String {
        let base = match &self.base {
            Some(b) => describe_presentation(b),
            None => self.coefficients.to_string(),
        };
        let parts: Vec<String> = self.factors.iter().map(|f| f.to_string()).collect();
        if parts.is_empty() {
            base
        } else {
            format!("{base} ⊗ {}", parts.join(" ⊗ "))
        }
    }
}

impl ClosedFormPattern {
    /// The group in every degree `0..=max`.
    pub fn expand(&self, max: i64) -> Result<Vec<FGAbelianGroup>, GradedError> {
        if max < 0 {
            return Err(GradedError::NegativeCutoff(max));
        }
        match self {
            ClosedFormPattern::Tensor(t) => {
                let base = base_groups(t.base.as_ref(), t.coefficients, max)?;
                let ranks = t.factor_ranks(max);
                Ok((0..=max as usize)
                    .map(|n| {
                        (0..=n).fold(FGAbelianGroup::zero(), |acc, k| {
                            if ranks[k] == 0 {
                                acc
                            } else {
                                acc.direct_sum(&base[n - k].power(ranks[k]))
                            }
                        })
                    })
                    .collect())
            }
            ClosedFormPattern::SquareZero(sq) => {
                let r = realize(&sq.base, max)?;
                let m = realize(&sq.module, max)?;
                let Progression { start, step } = sq.generators;
                Ok((0..=max)
                    .map(|n| {
                        let mut g = r.group(n);
                        let mut y = start;
                        while y <= n {
                            g = g.direct_sum(&m.group(n - y));
                            if step <= 0 {
                                break;
                            }
                            y += step;
                        }
                        g
                    })
                    .collect())
            }
            ClosedFormPattern::AnswerRing { prime } => {
                let p = *prime;
                Ok((0..=max)
                    .map(|n| {
                        if n == 0 {
                            FGAbelianGroup::free(1)
                        } else if n % (2 * p as i64) == 0 {
                            let t = (n / (2 * p as i64)) as u64;
                            FGAbelianGroup::cyclic(BigInt::from(p).pow(p_adic_valuation(t, p) + 1))
                        } else {
                            FGAbelianGroup::zero()
                        }
                    })
                    .collect())
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            ClosedFormPattern::Tensor(t) => t.describe(),
            ClosedFormPattern::SquareZero(sq) => format!(
                "{} ⋉ {}⟨y_i⟩, |y_i| = {} + {}i",
                describe_presentation(&sq.base),
                describe_presentation(&sq.module),
                sq.generators.start,
                sq.generators.step
            ),
            ClosedFormPattern::AnswerRing { prime } => format!("Z_({prime}) ⊕ ⨁_t Z/{prime}^(v(t)+1) in degree 2·{prime}·t"),
        }
    }
}

fn describe_polynomial(f: &Polynomial) -> String {
    let mut out = String::new();
    for (i, Term(c, exps)) in f.iter().enumerate() {
        let mono: Vec<String> =
            exps.iter().filter(|(_, e)| *e > 0).map(|(n, e)| if *e == 1 { n.clone() } else { format!("{n}^{e}") }).collect();
        let mag = c.magnitude().to_string();
        let sign = if c.sign() == num_bigint::Sign::Minus { "-" } else if i > 0 { "+" } else { "" };
        let coeff = if mono.is_empty() || mag != "1" { mag } else { String::new() };
        if i > 0 {
            out.push(' ');
        }
        out.push_str(sign);
        if i > 0 {
            out.push(' ');
        }
        out.push_str(&coeff);
        out.push_str(&mono.join(""));
    }
    out
}

/// `base[gens]/(relations)`.
pub fn describe_presentation(p: &GradedRingPresentation) -> String {
    let gens: Vec<&str> = p.generators.iter().map(|g| g.name.as_str()).collect();
    let mut out = p.base.to_string();
    if !gens.is_empty() {
        out.push_str(&format!("[{}]", gens.join(", ")));
    }
    if !p.relations.is_empty() {
        let rels: Vec<String> = p.relations.iter().map(describe_polynomial).collect();
        out.push_str(&format!("/({})", rels.join(", ")));
    }
    out
}

/// Renders a group with free summands named after the coefficient ring.
pub fn render_group(g: &FGAbelianGroup, ring: CoefficientRing) -> String {
    if g.is_zero() {
        return "0".into();
    }
    match ring {
        CoefficientRing::Integers => g.to_string(),
        CoefficientRing::IntegersLocalizedAt(p) => {
            let mut parts = Vec::new();
            match g.free_rank() {
                0 => {}
                1 => parts.push(format!("Z_({p})")),
                r => parts.push(format!("(Z_({p}))^{r}")),
            }
            let torsion = FGAbelianGroup::new(0, g.torsion().iter().cloned());
            if !torsion.is_zero() {
                parts.push(torsion.to_string());
            }
            parts.join(" ⊕ ")
        }
        CoefficientRing::PrimeField(p) => match g.num_generators() {
            1 => format!("F_{p}"),
            n => format!("(F_{p})^{n}"),
        },
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchRow {
    pub degree: i64,
    pub computed: Option<FGAbelianGroup>,
    pub expected: FGAbelianGroup,
    pub matches: bool,
}

/// Products of positive-filtration classes, checked on an `E^∞` page.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareZeroCheck {
    pub holds: bool,
    pub pairs_checked: usize,
    /// Cell pairs whose product could land on a nonzero cell.
    pub obstructions: Vec<((usize, i64), (usize, i64))>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchReport {
    pub rows: Vec<MatchRow>,
    pub square_zero: Option<SquareZeroCheck>,
}

impl MatchReport {
    pub fn all_match(&self) -> bool {
        self.rows.iter().all(|r| r.matches) && self.square_zero.as_ref().is_none_or(|c| c.holds)
    }

    pub fn mismatches(&self) -> Vec<i64> {
        self.rows.iter().filter(|r| !r.matches).map(|r| r.degree).collect()
    }
}

/// A product of classes from cells `(s1, t1)` and `(s2, t2)` has filtration
/// at least `s1 + s2` in total degree `n1 + n2`; if every such cell is
/// zero, products of positive-filtration classes vanish.
pub fn square_zero_by_filtration(page: &BigradedPage, through: i64) -> SquareZeroCheck {
    let positive: Vec<(usize, i64)> = page.support().into_iter().filter(|(s, _)| *s > 0).collect();
    let mut pairs = 0;
    let mut obstructions = Vec::new();
    for (i, &(s1, t1)) in positive.iter().enumerate() {
        for &(s2, t2) in &positive[i..] {
            let n = (s1 + s2) as i64 + t1 + t2;
            if n > through {
                continue;
            }
            pairs += 1;
            if page.total_degree_cells(n).iter().any(|(s, _, _)| *s >= s1 + s2) {
                obstructions.push(((s1, t1), (s2, t2)));
            }
        }
    }
    SquareZeroCheck { holds: obstructions.is_empty(), pairs_checked: pairs, obstructions }
}

/// Compares computed groups (`None` = not determined) with a pattern in
/// every degree `0..=max`. For a square-zero pattern and a supplied
/// `E^∞` page, also checks that products of positive-filtration classes
/// vanish.
pub fn match_pattern(
    computed: &[Option<FGAbelianGroup>],
    pattern: &ClosedFormPattern,
    max: i64,
    filtration: Option<&BigradedPage>,
) -> Result<MatchReport, GradedError> {
    let expected = pattern.expand(max)?;
    let rows = expected
        .into_iter()
        .enumerate()
        .map(|(d, e)| {
            let c = computed.get(d).cloned().flatten();
            let matches = c.as_ref() == Some(&e);
            MatchRow { degree: d as i64, computed: c, expected: e, matches }
        })
        .collect();
    let square_zero = match (pattern, filtration) {
        (ClosedFormPattern::SquareZero(_), Some(page)) => Some(square_zero_by_filtration(page, max)),
        _ => None,
    };
    Ok(MatchReport { rows, square_zero })
}

/// The factors of `Tor^A(F_p, F_p)` for `A` the tensor product of
/// `factors` over `F_p`, through degree `max`: each truncated polynomial
/// `k[z]/z^h` contributes `Λ(|z|+1) ⊗ Γ(h|z|+2)`, a polynomial factor
/// contributes `Λ(|z|+1)`, and `Γ(y)` splits as `⊗_k k[γ_{p^k}]/γ_{p^k}^p`.
pub fn tor_factors(factors: &[Factor], p: u64, max: i64) -> Vec<Factor> {
    let mut out = Vec::new();
    let push_truncated = |name: &str, d: i64, h: u32, out: &mut Vec<Factor>| {
        if d + 1 <= max {
            out.push(Factor::exterior(&format!("σ{name}"), d + 1));
        }
        if h as i64 * d + 2 <= max {
            out.push(Factor::divided_power(&format!("φ{name}"), h as i64 * d + 2));
        }
    };
    for f in factors {
        let name = f.name().to_string();
        match f {
            Factor::Exterior { degree, .. } if degree % 2 != 0 => {
                if degree + 1 <= max {
                    out.push(Factor::divided_power(&format!("σ{name}"), degree + 1));
                }
            }
            Factor::Exterior { degree, .. } => push_truncated(&name, *degree, 2, &mut out),
            Factor::Truncated { degree, height, .. } => push_truncated(&name, *degree, *height, &mut out),
            Factor::Polynomial { degree, .. } => {
                if degree + 1 <= max {
                    out.push(Factor::exterior(&format!("σ{name}"), degree + 1));
                }
            }
            Factor::DividedPower { degree, .. } => {
                let mut d = *degree;
                let mut k = 0;
                while d <= max {
                    push_truncated(&format!("{name}_[{k}]"), d, p as u32, &mut out);
                    d *= p as i64;
                    k += 1;
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::poly;

    #[test]
    fn gamma_tensor_lambda_dimensions() {
        let f3 = CoefficientRing::prime_field(3).unwrap();
        let pat = ClosedFormPattern::Tensor(TensorPattern::new(f3, vec![Factor::divided_power("y", 6), Factor::exterior("z", 7)]));
        let g = pat.expand(20).unwrap();
        let dims: Vec<usize> = g.iter().map(|x| x.num_generators()).collect();
        for d in 0..=20 {
            let expected = usize::from([0, 6, 7, 12, 13, 18, 19].contains(&d));
            assert_eq!(dims[d], expected, "degree {d}");
        }
    }

    #[test]
    fn square_zero_with_zero_module_is_the_base() {
        let z = CoefficientRing::Integers;
        let base = GradedRingPresentation::new(z, &[("u", 2)], vec![]);
        let module = GradedRingPresentation::new(z, &[("u", 2)], vec![poly(&[(1, &[])])]);
        let sq = ClosedFormPattern::SquareZero(SquareZeroPattern { base: base.clone(), module, generators: Progression { start: 3, step: 6 } });
        let plain = ClosedFormPattern::Tensor(TensorPattern { coefficients: z, base: Some(base), factors: vec![] });
        assert_eq!(sq.expand(20).unwrap(), plain.expand(20).unwrap());
    }

    #[test]
    fn answer_ring_orders() {
        let g = ClosedFormPattern::AnswerRing { prime: 3 }.expand(60).unwrap();
        assert_eq!(g[12], FGAbelianGroup::cyclic(3));
        assert_eq!(g[18], FGAbelianGroup::cyclic(9));
        assert_eq!(g[54], FGAbelianGroup::cyclic(27));
        assert!(g[13].is_zero());
    }

    #[test]
    fn tor_of_divided_powers() {
        // Tor over Γ_{F_2}(y_4) through 24: Λ(5) Γ(10) Λ(9) Γ(18) Λ(17)
        let f = tor_factors(&[Factor::divided_power("y", 4)], 2, 24);
        let degrees: Vec<i64> = f.iter().map(Factor::degree).collect();
        assert_eq!(degrees, vec![5, 10, 9, 18, 17]);
    }

    #[test]
    fn rendering() {
        let g = FGAbelianGroup::new(1, [BigInt::from(2)]);
        assert_eq!(render_group(&g, CoefficientRing::IntegersLocalizedAt(3)), "Z_(3) ⊕ Z/2");
        assert_eq!(render_group(&FGAbelianGroup::elementary(2, 3), CoefficientRing::PrimeField(2)), "(F_2)^3");
    }
}
