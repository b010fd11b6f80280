use num_bigint::BigInt;
use std::collections::HashMap;

use super::complex::FGChainComplex;
use super::HomologicalError;
use crate::exact::{CoefficientRing, SparseMatrix};

/// The Hochschild complex of the DGA `Z{1, τ}`, `|τ| = 1`, `τ² = 0`,
/// `dτ = x`, whose homology is Shukla homology of `Z/x` over `Z`.
///
/// Chains in total degree `N` are tensors `a_0 ⊗ … ⊗ a_n` of `1` and `τ`
/// with `n + #τ = N`; the complex is indexed by `s = N` with a single
/// internal degree `t = 0`. The differential is `b + (-1)^n δ`, where `b`
/// is the cyclic Hochschild boundary and `δ` applies `d` with Koszul signs.
#[derive(Clone, Debug)]
pub struct ShuklaComplex {
    x: BigInt,
    bases: Vec<Vec<Vec<bool>>>,
    index: Vec<HashMap<Vec<bool>, usize>>,
    complex: FGChainComplex,
}

fn basis(total: usize) -> Vec<Vec<bool>> {
    let mut out = Vec::new();
    for n in 0..=total {
        let k = total - n;
        if k > n + 1 {
            continue;
        }
        let len = n + 1;
        for mask in 0u64..(1u64 << len) {
            if mask.count_ones() as usize == k {
                out.push((0..len).map(|i| mask >> (len - 1 - i) & 1 == 1).collect());
            }
        }
    }
    out
}

fn boundary(b: &[bool], x: &BigInt) -> Vec<(Vec<bool>, BigInt)> {
    let n = b.len() - 1;
    let mut out = Vec::new();
    let n_sign = if n % 2 == 0 { 1 } else { -1 };
    let mut taus_before = 0;
    for i in 0..=n {
        if b[i] {
            let sign = if taus_before % 2 == 0 { n_sign } else { -n_sign };
            let mut t = b.to_vec();
            t[i] = false;
            out.push((t, x * sign));
            taus_before += 1;
        }
    }
    if n >= 1 {
        for i in 0..n {
            if b[i] && b[i + 1] {
                continue;
            }
            let mut t = b[..i].to_vec();
            t.push(b[i] || b[i + 1]);
            t.extend_from_slice(&b[i + 2..]);
            out.push((t, BigInt::from(if i % 2 == 0 { 1 } else { -1 })));
        }
        if !(b[n] && b[0]) {
            let before = b[..n].iter().filter(|&&y| y).count();
            let odd = (n + if b[n] { before } else { 0 }) % 2 == 1;
            let mut t = vec![b[n] || b[0]];
            t.extend_from_slice(&b[1..n]);
            out.push((t, BigInt::from(if odd { -1 } else { 1 })));
        }
    }
    out
}

impl ShuklaComplex {
    /// The complex through total degree `max_degree`.
    pub fn new(x: impl Into<BigInt>, max_degree: usize) -> Result<Self, HomologicalError> {
        let x = x.into();
        let bases: Vec<Vec<Vec<bool>>> = (0..=max_degree).map(basis).collect();
        let index: Vec<HashMap<Vec<bool>, usize>> =
            bases.iter().map(|b| b.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect()).collect();
        let complex = FGChainComplex::new(
            CoefficientRing::Integers,
            max_degree,
            0,
            |s, _| bases[s].len(),
            |s, _| {
                let cols = bases[s]
                    .iter()
                    .map(|b| {
                        let mut acc: HashMap<usize, BigInt> = HashMap::new();
                        for (t, c) in boundary(b, &x) {
                            *acc.entry(index[s - 1][&t]).or_default() += c;
                        }
                        let mut col: Vec<(usize, BigInt)> = acc.into_iter().filter(|(_, c)| *c != BigInt::from(0)).collect();
                        col.sort();
                        col
                    })
                    .collect();
                SparseMatrix::from_columns(bases[s - 1].len(), cols)
            },
        )?;
        Ok(ShuklaComplex { x, bases, index, complex })
    }

    pub fn complex(&self) -> &FGChainComplex {
        &self.complex
    }

    pub fn x(&self) -> &BigInt {
        &self.x
    }

    pub fn basis(&self, degree: usize) -> &[Vec<bool>] {
        &self.bases[degree]
    }

    /// `Σ_i (-1)^i τ^{⊗i} ⊗ 1 ⊗ τ^{⊗(m-i)}` in total degree `2m`.
    pub fn cycle(&self, m: usize) -> Result<Vec<BigInt>, HomologicalError> {
        let s = 2 * m;
        if s > self.complex.max_s() {
            return Err(HomologicalError::CutoffExceedsInput { requested: s as i64, available: self.complex.max_s() as i64 });
        }
        let mut v = vec![BigInt::from(0); self.bases[s].len()];
        for i in 0..=m {
            let mut t = vec![true; m + 1];
            t[i] = false;
            v[self.index[s][&t]] += if i % 2 == 0 { 1 } else { -1 };
        }
        Ok(v)
    }

    pub fn label(&self, degree: usize, k: usize) -> String {
        self.bases[degree][k].iter().map(|&b| if b { "τ" } else { "1" }).collect::<Vec<_>>().join("⊗")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::FGAbelianGroup;
    use crate::homological::verify_cycle;

    #[test]
    fn homology_is_z_mod_x_in_even_degrees() {
        let c = ShuklaComplex::new(3, 9).unwrap();
        for s in 0..9 {
            let expected = if s % 2 == 0 { FGAbelianGroup::cyclic(3) } else { FGAbelianGroup::zero() };
            assert_eq!(c.complex().homology_at(s, 0), expected, "degree {s}");
        }
    }

    #[test]
    fn explicit_cycles_generate() {
        let c = ShuklaComplex::new(2, 7).unwrap();
        for m in 1..=3 {
            let v = verify_cycle(c.complex(), 2 * m, 0, &c.cycle(m).unwrap()).unwrap();
            assert!(v.is_cycle && !v.is_boundary && v.generates, "m = {m}");
        }
    }
}
