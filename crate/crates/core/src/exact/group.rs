use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use super::snf::dense_invariant_factors;
use super::{ExactError, IntegerMatrix};

/// A finitely generated abelian group `Z^r ⊕ Z/t_1 ⊕ ... ⊕ Z/t_k` in
/// invariant-factor form: every `t_i > 1` and `t_i | t_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FGAbelianGroup {
    free_rank: usize,
    #[serde(with = "crate::exact::serde_int::vec")]
    torsion: Vec<BigInt>,
}

impl Default for FGAbelianGroup {
    fn default() -> Self {
        Self::zero()
    }
}

impl FGAbelianGroup {
    /// Builds the group `Z^free_rank ⊕ ⊕ Z/c` for arbitrary cyclic orders
    /// `c`; a zero order contributes a free summand and units are dropped.
    pub fn new<T: Into<BigInt>>(free_rank: usize, cyclic_orders: impl IntoIterator<Item = T>) -> Self {
        let mut extra_free = 0;
        let mut orders = Vec::new();
        for c in cyclic_orders {
            let c: BigInt = c.into();
            let c = c.abs();
            if c.is_zero() {
                extra_free += 1;
            } else if !c.is_one() {
                orders.push(c);
            }
        }
        let torsion = normalize_torsion(orders);
        FGAbelianGroup { free_rank: free_rank + extra_free, torsion }
    }

    pub fn zero() -> Self {
        FGAbelianGroup { free_rank: 0, torsion: Vec::new() }
    }

    pub fn free(rank: usize) -> Self {
        FGAbelianGroup { free_rank: rank, torsion: Vec::new() }
    }

    /// `Z/n`, with `Z/0 = Z`.
    pub fn cyclic<T: Into<BigInt>>(n: T) -> Self {
        Self::new(0, [n.into()])
    }

    /// The `F_p`-vector space of dimension `dim`, viewed as a group.
    pub fn elementary(p: u64, dim: usize) -> Self {
        FGAbelianGroup { free_rank: 0, torsion: vec![BigInt::from(p); dim] }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Minimal number of generators.
    pub fn num_generators(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    /// The order of a finite group, `None` if the group is infinite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.torsion.iter().fold(BigInt::one(), |acc, t| acc * t))
    }

    pub fn direct_sum(&self, other: &FGAbelianGroup) -> FGAbelianGroup {
        let orders = self.torsion.iter().chain(other.torsion.iter()).cloned();
        FGAbelianGroup::new(self.free_rank + other.free_rank, orders)
    }

    /// Keeps the free part and the `p`-power part of each invariant factor.
    pub fn localize_at_p(&self, p: u64) -> FGAbelianGroup {
        let p_big = BigInt::from(p);
        let orders = self.torsion.iter().map(|t| {
            let mut part = BigInt::one();
            let mut rest = t.clone();
            while rest.is_multiple_of(&p_big) {
                rest /= &p_big;
                part *= &p_big;
            }
            part
        });
        FGAbelianGroup::new(self.free_rank, orders)
    }

    /// Number of invariant factors divisible by `p`; equals
    /// `dim_{F_p}(G ⊗ F_p) - rank G`.
    pub fn p_torsion_count(&self, p: u64) -> usize {
        let p_big = BigInt::from(p);
        self.torsion.iter().filter(|t| t.is_multiple_of(&p_big)).count()
    }

    /// Exponents `a` of the cyclic summands `Z/p^a` of the `p`-primary part,
    /// in increasing order.
    pub fn p_exponents(&self, p: u64) -> Vec<u32> {
        let p_big = BigInt::from(p);
        self.torsion
            .iter()
            .filter_map(|t| {
                let mut a = 0;
                let mut rest = t.clone();
                while rest.is_multiple_of(&p_big) {
                    rest /= &p_big;
                    a += 1;
                }
                (a > 0).then_some(a)
            })
            .collect()
    }

    /// `dim_{F_p}(G ⊗ F_p)`.
    pub fn mod_p_dimension(&self, p: u64) -> usize {
        self.free_rank + self.p_torsion_count(p)
    }

    /// Elementary divisors as `(prime, exponent)` pairs, sorted.
    pub fn primary_decomposition(&self) -> Vec<(BigInt, u32)> {
        let mut out = Vec::new();
        for t in &self.torsion {
            for (q, e) in factor(t) {
                out.push((q, e));
            }
        }
        out.sort();
        out
    }

    /// `G ⊗ Z/n`.
    pub fn tensor_cyclic(&self, n: &BigInt) -> FGAbelianGroup {
        let mut orders: Vec<BigInt> = vec![n.clone(); self.free_rank];
        orders.extend(self.torsion.iter().map(|t| t.gcd(n)));
        FGAbelianGroup::new(0, orders)
    }

    pub fn tensor(&self, other: &FGAbelianGroup) -> FGAbelianGroup {
        let free = self.free_rank * other.free_rank;
        let mut orders = Vec::new();
        for _ in 0..self.free_rank {
            orders.extend(other.torsion.iter().cloned());
        }
        for _ in 0..other.free_rank {
            orders.extend(self.torsion.iter().cloned());
        }
        for a in &self.torsion {
            for b in &other.torsion {
                orders.push(a.gcd(b));
            }
        }
        FGAbelianGroup::new(free, orders)
    }

    /// Direct sum of `n` copies.
    pub fn power(&self, n: usize) -> FGAbelianGroup {
        let orders = (0..n).flat_map(|_| self.torsion.iter().cloned());
        FGAbelianGroup::new(self.free_rank * n, orders)
    }
}

/// `Ext^1_Z(a, b)`.
pub fn ext_z(a: &FGAbelianGroup, b: &FGAbelianGroup) -> FGAbelianGroup {
    let mut out = FGAbelianGroup::zero();
    for m in &a.torsion {
        out = out.direct_sum(&b.tensor_cyclic(m));
    }
    out
}

/// `Tor_1^Z(a, b)`.
pub fn tor_z(a: &FGAbelianGroup, b: &FGAbelianGroup) -> FGAbelianGroup {
    let orders = a.torsion.iter().flat_map(|m| b.torsion.iter().map(move |n| m.gcd(n)));
    FGAbelianGroup::new(0, orders)
}

fn normalize_torsion(orders: Vec<BigInt>) -> Vec<BigInt> {
    if orders.len() <= 1 {
        return orders;
    }
    let n = orders.len();
    let m = IntegerMatrix::diagonal(n, n, &orders);
    dense_invariant_factors(&m).into_iter().filter(|d| !d.is_one()).collect()
}

fn factor(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut rest = n.abs();
    let mut out = Vec::new();
    let mut q = BigInt::from(2u32);
    while &q * &q <= rest {
        let mut e = 0;
        while rest.is_multiple_of(&q) {
            rest /= &q;
            e += 1;
        }
        if e > 0 {
            out.push((q.clone(), e));
        }
        q += 1u32;
    }
    if rest > BigInt::one() {
        out.push((rest, 1));
    }
    out
}

impl fmt::Display for FGAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        let mut i = 0;
        while i < self.torsion.len() {
            let t = &self.torsion[i];
            let mut j = i;
            while j < self.torsion.len() && &self.torsion[j] == t {
                j += 1;
            }
            let k = j - i;
            parts.push(if k == 1 { format!("Z/{t}") } else { format!("(Z/{t})^{k}") });
            i = j;
        }
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

impl FromStr for FGAbelianGroup {
    type Err = ExactError;

    /// Parses the `Display` format, e.g. `Z^2 ⊕ (Z/2)^3 ⊕ Z/4`. A plain `+`
    /// is accepted as a separator as well.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ExactError::GroupParse(s.to_string());
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero());
        }
        let mut free = 0usize;
        let mut orders: Vec<BigInt> = Vec::new();
        for part in s.split(['⊕', '+']) {
            let part = part.trim();
            let (base, mult) = match part.rsplit_once('^') {
                Some((b, m)) => (b.trim(), m.trim().parse::<usize>().map_err(|_| bad())?),
                None => (part, 1),
            };
            let base = base.trim_start_matches('(').trim_end_matches(')');
            if base == "Z" {
                free += mult;
            } else if let Some(n) = base.strip_prefix("Z/") {
                let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
                if n.is_zero() {
                    free += mult;
                } else {
                    orders.extend(std::iter::repeat_n(n, mult));
                }
            } else if base == "0" {
            } else {
                return Err(bad());
            }
        }
        Ok(FGAbelianGroup::new(free, orders))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> FGAbelianGroup {
        s.parse().unwrap()
    }

    #[test]
    fn normal_form() {
        assert_eq!(FGAbelianGroup::new(0, [2, 3]), FGAbelianGroup::cyclic(6));
        assert_eq!(FGAbelianGroup::new(1, [4, 6, 1, 0]).to_string(), "Z^2 ⊕ Z/2 ⊕ Z/12");
        assert_eq!(FGAbelianGroup::new(0, [2, 2, 4]).to_string(), "(Z/2)^2 ⊕ Z/4");
        assert_eq!(FGAbelianGroup::zero().to_string(), "0");
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["0", "Z", "Z^3", "Z/2", "Z ⊕ (Z/2)^2", "Z^2 ⊕ Z/3 ⊕ Z/9"] {
            assert_eq!(g(s).to_string(), s);
        }
        assert_eq!(g("Z + Z/2"), g("Z ⊕ Z/2"));
        assert!("Q".parse::<FGAbelianGroup>().is_err());
    }

    #[test]
    fn localization() {
        assert_eq!(g("Z ⊕ Z/12").localize_at_p(2), g("Z ⊕ Z/4"));
        assert_eq!(g("Z/6").localize_at_p(5), g("0"));
        assert_eq!(g("Z/9").localize_at_p(3), g("Z/9"));
    }

    #[test]
    fn ext_and_tor() {
        assert_eq!(ext_z(&g("Z"), &g("Z/2")), g("0"));
        assert_eq!(ext_z(&g("Z/4"), &g("Z/6")), g("Z/2"));
        assert_eq!(ext_z(&g("Z/2"), &g("Z")), g("Z/2"));
        assert_eq!(tor_z(&g("Z/3"), &g("Z/3")), g("Z/3"));
        assert_eq!(tor_z(&g("Z"), &g("Z/3")), g("0"));
    }

    #[test]
    fn counts() {
        let h = g("Z ⊕ Z/2 ⊕ Z/12 ⊕ Z/72");
        assert_eq!(h.p_torsion_count(2), 3);
        assert_eq!(h.p_torsion_count(3), 2);
        assert_eq!(h.p_exponents(2), vec![1, 2, 3]);
        assert_eq!(h.mod_p_dimension(3), 3);
        assert_eq!(g("Z/12").order(), Some(BigInt::from(12)));
        assert_eq!(g("Z").order(), None);
        assert_eq!(
            g("Z/12").primary_decomposition(),
            vec![(BigInt::from(2), 2), (BigInt::from(3), 1)]
        );
        assert_eq!(g("Z ⊕ Z/2").tensor(&g("Z ⊕ Z/4")), g("Z ⊕ (Z/2)^2 ⊕ Z/4"));
    }
}
