//! Stored dimensions for the higher iterates, which have no closed form in
//! the scenario beyond the Künneth rules. Regenerate with
//! `THH_REGENERATE_GOLDEN=1 cargo test -p thh-core --test golden`.

use std::fmt::Write as _;
use std::sync::Arc;

use super::common::field_algebra;
use super::{tor_factors, Factor, Result, TensorPattern};
use crate::exact::CoefficientRing;
use crate::graded::{poly, GradedRingPresentation};
use crate::homological::iterated_tor;

pub const FORMAT_VERSION: &str = "v1";
pub const GOLDEN_MAX_DEGREE: i64 = 24;
pub const GOLDEN_PRIMES: &[u64] = &[2, 3];

const ITERATE_P2: &str = include_str!("../../tests/golden/v1/iterate_p2.csv");
const ITERATE_P3: &str = include_str!("../../tests/golden/v1/iterate_p3.csv");

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldenRow {
    pub degree: i64,
    pub n2: usize,
    pub n3: usize,
}

/// `Λ_{F_p}(ε)` with `|ε| = 3`.
pub fn iterate_start(p: u64, max: i64) -> Result<Arc<dyn crate::graded::BasedAlgebra>> {
    let f = CoefficientRing::PrimeField(p);
    field_algebra(&GradedRingPresentation::new(f, &[("e", 3)], vec![poly(&[(1, &[("e", 2)])])]), max)
}

/// Dimensions of the first three iterates through degree `max`.
pub fn iterate_dimensions(p: u64, max: i64) -> Result<[Vec<usize>; 3]> {
    let stages = iterated_tor(iterate_start(p, max)?, 3, max as usize, max)?;
    Ok([stages[0].total_dimensions(), stages[1].total_dimensions(), stages[2].total_dimensions()])
}

/// The closed-form factors of the `n`-th iterate.
pub fn iterate_factors(p: u64, n: usize, max: i64) -> Vec<Factor> {
    let mut f = vec![Factor::exterior("ε", 3)];
    for _ in 0..n {
        f = tor_factors(&f, p, max);
    }
    f
}

pub fn render(p: u64, max: i64, n2: &[usize], n3: &[usize]) -> String {
    let f = CoefficientRing::PrimeField(p);
    let k2 = TensorPattern::new(f, iterate_factors(p, 2, max)).factor_ranks(max);
    let k3 = TensorPattern::new(f, iterate_factors(p, 3, max)).factor_ranks(max);
    let agrees = n2.get(..=max as usize) == Some(&k2[..]) && n3.get(..=max as usize) == Some(&k3[..]);
    let mut out = String::new();
    let _ = writeln!(out, "# F_{p}-dimensions of the second and third iterated Tor starting from Λ(ε), |ε| = 3");
    let _ = writeln!(out, "# computed by the bar construction at each stage, format {FORMAT_VERSION}");
    let _ = writeln!(
        out,
        "# {} the Künneth closed form through degree {max}",
        if agrees { "agrees with" } else { "DIFFERS from" }
    );
    out.push_str("degree,n2,n3\n");
    for d in 0..=max as usize {
        let _ = writeln!(out, "{d},{},{}", n2[d], n3[d]);
    }
    out
}

pub fn parse(text: &str) -> Vec<GoldenRow> {
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("degree") && !l.trim().is_empty())
        .filter_map(|l| {
            let mut it = l.split(',').map(|x| x.trim().parse::<i64>().ok());
            Some(GoldenRow { degree: it.next()??, n2: it.next()?? as usize, n3: it.next()?? as usize })
        })
        .collect()
}

/// The stored rows for a prime, if any.
pub fn stored(p: u64) -> Option<Vec<GoldenRow>> {
    let text = match p {
        2 => ITERATE_P2,
        3 => ITERATE_P3,
        _ => return None,
    };
    Some(parse(text)).filter(|rows| !rows.is_empty())
}
