use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::Arc;

use super::augmented::{AugModule, AugmentedAlgebra, Combination};
use super::complex::{AugmentedComplex, FGChainComplex};
use super::HomologicalError;
use crate::exact::SparseMatrix;
use crate::graded::GradedElement;

/// A basis tuple `m_α [e_{i_1} | ... | e_{i_s}] n_β` of the bar complex over
/// the ground ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BarTuple {
    pub left: usize,
    pub entries: Vec<usize>,
    pub right: usize,
}

/// A chain in bidegree `(s, t)`, in the coordinates of the integral basis
/// of that chain group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chain {
    pub s: usize,
    pub t: i64,
    #[serde(with = "crate::exact::serde_int::vec")]
    pub coords: Vec<BigInt>,
}

/// The two-sided bar complex `B(M, A, N)` with `B_s = M ⊗ Ā^{⊗s} ⊗ N`
/// over the ground ring, truncated to `s ≤ S` and internal degree `≤ T`.
///
/// The differential is `Σ_{i=0}^{s} (-1)^{ε_i} d_i` with
/// `ε_i = |m| + Σ_{j ≤ i} (|a_j| + 1)`, where `d_0` and `d_s` are the
/// module actions and the inner faces multiply neighbours.
#[derive(Clone, Debug)]
pub struct BarComplex {
    algebra: Arc<AugmentedAlgebra>,
    left: AugModule,
    right: AugModule,
    max_s: usize,
    max_t: i64,
    tuples: Vec<Vec<(BarTuple, i64)>>,
    tuple_index: Vec<HashMap<BarTuple, usize>>,
    /// Per `(s, t)`: the integral basis as `(tuple, ground basis index)`.
    cells: Vec<Vec<Vec<(usize, usize)>>>,
    cell_index: Vec<Vec<HashMap<(usize, usize), usize>>>,
    complex: FGChainComplex,
}

impl BarComplex {
    pub fn new(
        algebra: Arc<AugmentedAlgebra>,
        left: AugModule,
        right: AugModule,
        max_s: usize,
        max_t: i64,
    ) -> Result<Self, HomologicalError> {
        if max_t > algebra.max_degree() {
            return Err(HomologicalError::CutoffExceedsInput { requested: max_t, available: algebra.max_degree() });
        }
        let ground = algebra.ground().clone();
        let mut tuples: Vec<Vec<(BarTuple, i64)>> = vec![Vec::new(); max_s + 1];
        for l in 0..left.rank() {
            for r in 0..right.rank() {
                let base = left.degree(l) + right.degree(r);
                if base > max_t {
                    continue;
                }
                let mut stack = vec![(Vec::<usize>::new(), base)];
                while let Some((entries, deg)) = stack.pop() {
                    let s = entries.len();
                    if s < max_s {
                        for i in 1..algebra.rank() {
                            let d = deg + algebra.degree(i);
                            if d <= max_t {
                                let mut e = entries.clone();
                                e.push(i);
                                stack.push((e, d));
                            }
                        }
                    }
                    tuples[s].push((BarTuple { left: l, entries, right: r }, deg));
                }
            }
        }
        for list in tuples.iter_mut() {
            list.sort_by(|a, b| (a.1, &a.0.left, &a.0.entries, &a.0.right).cmp(&(b.1, &b.0.left, &b.0.entries, &b.0.right)));
        }
        let tuple_index: Vec<HashMap<BarTuple, usize>> =
            tuples.iter().map(|l| l.iter().enumerate().map(|(i, (t, _))| (t.clone(), i)).collect()).collect();
        let mut cells = Vec::new();
        let mut cell_index = Vec::new();
        for list in &tuples {
            let mut per_t = Vec::new();
            let mut per_t_index = Vec::new();
            for t in 0..=max_t {
                let mut basis = Vec::new();
                for (k, (_, deg)) in list.iter().enumerate() {
                    for b in 0..ground.dim(t - deg) {
                        basis.push((k, b));
                    }
                }
                let index: HashMap<(usize, usize), usize> = basis.iter().enumerate().map(|(i, x)| (*x, i)).collect();
                per_t.push(basis);
                per_t_index.push(index);
            }
            cells.push(per_t);
            cell_index.push(per_t_index);
        }
        // boundaries of tuples over the ground ring
        let mut faces: Vec<Vec<Vec<(usize, GradedElement)>>> = vec![Vec::new()];
        for s in 1..=max_s {
            let mut per = Vec::with_capacity(tuples[s].len());
            for (tuple, _) in &tuples[s] {
                per.push(tuple_boundary(&algebra, &left, &right, tuple, &tuple_index[s - 1])?);
            }
            faces.push(per);
        }
        let dims = |s: usize, t: i64| cells[s][t as usize].len();
        let diff = |s: usize, t: i64| -> SparseMatrix {
            let rows = cells[s - 1][t as usize].len();
            let mut columns = Vec::with_capacity(cells[s][t as usize].len());
            for &(k, b) in &cells[s][t as usize] {
                let deg = tuples[s][k].1;
                let basis_el = GradedElement::basis(t - deg, ground.dim(t - deg), b);
                let mut col: Vec<(usize, BigInt)> = Vec::new();
                for (k2, c) in &faces[s][k] {
                    let prod = ground.mul(c, &basis_el).expect("within ground cutoff");
                    for (b2, x) in prod.coords.iter().enumerate() {
                        if !x.is_zero() {
                            col.push((cell_index[s - 1][t as usize][&(*k2, b2)], x.clone()));
                        }
                    }
                }
                columns.push(col);
            }
            SparseMatrix::from_columns(rows, columns)
        };
        let complex = FGChainComplex::new(ground.base(), max_s, max_t, dims, diff)?;
        Ok(BarComplex { algebra, left, right, max_s, max_t, tuples, tuple_index, cells, cell_index, complex })
    }

    pub fn complex(&self) -> &FGChainComplex {
        &self.complex
    }

    pub fn algebra(&self) -> &AugmentedAlgebra {
        &self.algebra
    }

    pub fn max_s(&self) -> usize {
        self.max_s
    }

    pub fn max_t(&self) -> i64 {
        self.max_t
    }

    pub fn tuples(&self, s: usize) -> &[(BarTuple, i64)] {
        &self.tuples[s]
    }

    /// The integral basis at `(s, t)` as `(tuple index, ground basis index)`.
    pub fn cell_basis(&self, s: usize, t: i64) -> &[(usize, usize)] {
        &self.cells[s][t as usize]
    }

    pub fn tuple_label(&self, s: usize, k: usize) -> String {
        let (tuple, _) = &self.tuples[s][k];
        let inner: Vec<&str> = tuple.entries.iter().map(|&i| self.algebra.label(i)).collect();
        format!("{}[{}]{}", self.left.label(tuple.left), inner.join("|"), self.right.label(tuple.right))
    }

    /// Multiplication by a ground element on `B_s`, from internal degree `t`
    /// to `t + |element|`.
    pub fn ground_action(&self, element: &GradedElement, s: usize, t: i64) -> Result<SparseMatrix, HomologicalError> {
        let t2 = t + element.degree;
        if t2 > self.max_t {
            return Err(HomologicalError::CutoffExceedsInput { requested: t2, available: self.max_t });
        }
        let ground = self.algebra.ground();
        let index = &self.cell_index[s][t2 as usize];
        let mut cols = Vec::new();
        for &(k, b) in &self.cells[s][t as usize] {
            let gdeg = t - self.tuples[s][k].1;
            let prod = ground.mul(element, &GradedElement::basis(gdeg, ground.dim(gdeg), b))?;
            cols.push(
                prod.coords
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(b2, x)| (index[&(k, b2)], x.clone()))
                    .collect(),
            );
        }
        Ok(SparseMatrix::from_columns(index.len(), cols))
    }

    /// The chain `Σ c · tuple` with integer coefficients on tuples whose
    /// ground coefficient is the unit.
    pub fn chain_from_tuples(&self, s: usize, t: i64, terms: &[(BarTuple, i64)]) -> Result<Chain, HomologicalError> {
        let mut coords = vec![BigInt::zero(); self.cells[s][t as usize].len()];
        for (tuple, c) in terms {
            let k = *self.tuple_index[s].get(tuple).ok_or(HomologicalError::NotInComplex)?;
            if self.tuples[s][k].1 != t {
                return Err(HomologicalError::WrongDegree { s, t, expected: t as usize, found: self.tuples[s][k].1 as usize });
            }
            coords[self.cell_index[s][t as usize][&(k, 0)]] += *c;
        }
        Ok(Chain { s, t, coords })
    }

    /// The bar resolution `B(A, A, k) -> k` with its augmentation.
    pub fn bar_resolution(algebra: Arc<AugmentedAlgebra>, max_s: usize, max_t: i64) -> Result<AugmentedComplex, HomologicalError> {
        let regular = AugModule::regular(&algebra);
        let ground = algebra.ground().clone();
        let bar = BarComplex::new(algebra, regular, AugModule::ground(), max_s, max_t)?;
        let module_dims: Vec<usize> = (0..=max_t).map(|t| ground.dim(t)).collect();
        let augmentation = (0..=max_t)
            .map(|t| {
                let cols = bar.cells[0][t as usize]
                    .iter()
                    .map(|&(k, b)| {
                        if bar.tuples[0][k].0.left == 0 {
                            vec![(b, BigInt::one())]
                        } else {
                            vec![]
                        }
                    })
                    .collect();
                SparseMatrix::from_columns(module_dims[t as usize], cols)
            })
            .collect();
        Ok(AugmentedComplex { complex: bar.complex.clone(), module_dims, augmentation })
    }

    /// The shuffle product of two chains of `B(k, A, k)` over a ground ring
    /// concentrated in degree 0.
    pub fn shuffle_product(&self, a: &Chain, b: &Chain) -> Result<Chain, HomologicalError> {
        if !self.left.is_trivial() || !self.right.is_trivial() || self.left.rank() != 1 || self.right.rank() != 1 {
            return Err(HomologicalError::Unsupported("shuffle products need B(k, A, k)".into()));
        }
        if self.algebra.ground().dim(0) != 1 || (1..=self.max_t).any(|d| self.algebra.ground().dim(d) > 0) {
            return Err(HomologicalError::Unsupported("shuffle products need a ground ring in degree 0".into()));
        }
        for c in [a, b] {
            if !self.is_cycle(c)? {
                return Err(HomologicalError::NotACycle);
            }
        }
        let (s, t) = (a.s + b.s, a.t + b.t);
        if s > self.max_s || t > self.max_t {
            return Err(HomologicalError::CutoffExceedsInput { requested: t, available: self.max_t });
        }
        let mut out = vec![BigInt::zero(); self.cells[s][t as usize].len()];
        for (x, cx) in self.chain_terms(a) {
            for (y, cy) in self.chain_terms(b) {
                let coeff = &cx * &cy;
                for (entries, negative) in shuffles(&x, &y, &|i| self.algebra.degree(i)) {
                    let tuple = BarTuple { left: 0, entries, right: 0 };
                    let k = self.tuple_index[s][&tuple];
                    let idx = self.cell_index[s][t as usize][&(k, 0)];
                    if negative {
                        out[idx] -= &coeff;
                    } else {
                        out[idx] += &coeff;
                    }
                }
            }
        }
        if let Some(p) = self.complex.base().field_characteristic() {
            let p = BigInt::from(p);
            for c in &mut out {
                *c = c.mod_floor(&p);
            }
        }
        Ok(Chain { s, t, coords: out })
    }

    pub fn is_cycle(&self, c: &Chain) -> Result<bool, HomologicalError> {
        let image = self.complex.apply(c.s, c.t, &c.coords)?;
        Ok(match self.complex.base().field_characteristic() {
            Some(p) => image.iter().all(|x| x.mod_floor(&BigInt::from(p)).is_zero()),
            None => image.iter().all(Zero::is_zero),
        })
    }

    fn chain_terms(&self, c: &Chain) -> Vec<(Vec<usize>, BigInt)> {
        self.cells[c.s][c.t as usize]
            .iter()
            .zip(&c.coords)
            .filter(|(_, x)| !x.is_zero())
            .map(|(&(k, _), x)| (self.tuples[c.s][k].0.entries.clone(), x.clone()))
            .collect()
    }
}

/// All shuffles of `x` and `y`, with the Koszul sign for suspended
/// degrees `|a| + 1` (true means negative).
pub fn shuffles(x: &[usize], y: &[usize], degree: &dyn Fn(usize) -> i64) -> Vec<(Vec<usize>, bool)> {
    let mut out = Vec::new();
    let n = x.len() + y.len();
    let mut choose = Vec::with_capacity(x.len());
    fn rec(
        x: &[usize],
        y: &[usize],
        n: usize,
        start: usize,
        choose: &mut Vec<usize>,
        degree: &dyn Fn(usize) -> i64,
        out: &mut Vec<(Vec<usize>, bool)>,
    ) {
        if choose.len() == x.len() {
            let mut entries = Vec::with_capacity(n);
            let (mut xi, mut yi) = (0, 0);
            let mut parity = 0i64;
            // y-entries already placed, with their suspended parities
            let mut y_odd_placed = 0i64;
            for pos in 0..n {
                if xi < x.len() && choose[xi] == pos {
                    let a = degree(x[xi]) + 1;
                    parity += (a % 2) * y_odd_placed;
                    entries.push(x[xi]);
                    xi += 1;
                } else {
                    let b = degree(y[yi]) + 1;
                    y_odd_placed += b % 2;
                    entries.push(y[yi]);
                    yi += 1;
                }
            }
            out.push((entries, parity % 2 != 0));
            return;
        }
        let remaining = x.len() - choose.len();
        for pos in start..=(n - remaining) {
            choose.push(pos);
            rec(x, y, n, pos + 1, choose, degree, out);
            choose.pop();
        }
    }
    rec(x, y, n, 0, &mut choose, degree, &mut out);
    out
}

fn tuple_boundary(
    algebra: &AugmentedAlgebra,
    left: &AugModule,
    right: &AugModule,
    tuple: &BarTuple,
    target_index: &HashMap<BarTuple, usize>,
) -> Result<Vec<(usize, GradedElement)>, HomologicalError> {
    let ground = algebra.ground();
    let s = tuple.entries.len();
    let mut acc: HashMap<usize, GradedElement> = HashMap::new();
    let mut add = |t: BarTuple, c: GradedElement, negative: bool| -> Result<(), HomologicalError> {
        let Some(&k) = target_index.get(&t) else {
            return Ok(());
        };
        let c = if negative { ground.scale(&-BigInt::one(), &c) } else { c };
        let entry = acc.entry(k).or_insert_with(|| ground.zero(c.degree));
        *entry = ground.add(entry, &c);
        Ok(())
    };
    let m_deg = left.degree(tuple.left);
    let mut eps = m_deg;
    // d_0: right action of e_{i_1} on m, m · a = (-1)^{|m||a|} a · m
    let a1 = tuple.entries[0];
    let sign0 = (m_deg * algebra.degree(a1)) % 2 != 0;
    for (l, c) in left.act_by(ground, &vec![(a1, ground.one())], tuple.left)? {
        let t = BarTuple { left: l, entries: tuple.entries[1..].to_vec(), right: tuple.right };
        add(t, c, (eps % 2 != 0) ^ sign0)?;
    }
    for i in 0..s {
        eps += algebra.degree(tuple.entries[i]) + 1;
        if i + 1 < s {
            for (l, c) in algebra.basis_product(tuple.entries[i], tuple.entries[i + 1]) {
                let mut entries = tuple.entries[..i].to_vec();
                entries.push(l);
                entries.extend_from_slice(&tuple.entries[i + 2..]);
                let t = BarTuple { left: tuple.left, entries, right: tuple.right };
                add(t, c, eps % 2 != 0)?;
            }
        }
    }
    // d_s: left action of e_{i_s} on n
    let last = tuple.entries[s - 1];
    let comb: Combination = vec![(last, ground.one())];
    for (l, c) in right.act_by(ground, &comb, tuple.right)? {
        let t = BarTuple { left: tuple.left, entries: tuple.entries[..s - 1].to_vec(), right: l };
        add(t, c, eps % 2 != 0)?;
    }
    let mut out: Vec<(usize, GradedElement)> = acc.into_iter().filter(|(_, c)| !ground.is_zero(c)).collect();
    out.sort_by_key(|(k, _)| *k);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{CoefficientRing, FGAbelianGroup};
    use crate::homological::augmented::Ground;
    use crate::homological::complex::{homology, validate_resolution};

    fn f(p: u64) -> CoefficientRing {
        CoefficientRing::prime_field(p).unwrap()
    }

    #[test]
    fn exterior_on_even_class_gives_divided_power_pattern() {
        let a = Arc::new(AugmentedAlgebra::exterior(Ground::point(f(2)), 2, "x2", 30).unwrap());
        let bar = BarComplex::new(a, AugModule::ground(), AugModule::ground(), 8, 30).unwrap();
        let h = homology(bar.complex());
        for s in 0..8 {
            for t in 0..=30 {
                let expected = if t == 2 * s as i64 { 1 } else { 0 };
                assert_eq!(h.get(s, t).num_generators(), expected, "({s},{t})");
            }
        }
    }

    #[test]
    fn base_ring_has_no_higher_tor() {
        let a = Arc::new(AugmentedAlgebra::from_structure(
            Ground::point(CoefficientRing::Integers),
            vec![0],
            vec!["1".into()],
            |_, _| vec![],
            vec![Ground::point(CoefficientRing::Integers).one()],
            10,
        )
        .unwrap());
        let bar = BarComplex::new(a, AugModule::ground(), AugModule::ground(), 4, 10).unwrap();
        let h = homology(bar.complex());
        assert_eq!(h.get(0, 0), FGAbelianGroup::free(1));
        assert_eq!(h.cells.len(), 1);
    }

    #[test]
    fn bar_resolutions_are_exact() {
        for (ground, deg) in [(Ground::point(f(3)), 2), (Ground::point(CoefficientRing::Integers), 3)] {
            let a = Arc::new(AugmentedAlgebra::exterior(ground.clone(), deg, "e", 16).unwrap());
            let r = BarComplex::bar_resolution(a, 5, 16).unwrap();
            assert!(validate_resolution(&r, 5, 16).exact);
        }
        let a = Arc::new(AugmentedAlgebra::truncated(Ground::point(f(5)), 2, 4, 16).unwrap());
        let r = BarComplex::bar_resolution(a, 4, 16).unwrap();
        assert!(validate_resolution(&r, 4, 16).exact);
    }

    #[test]
    fn shuffle_square_of_odd_class() {
        let a = Arc::new(AugmentedAlgebra::exterior(Ground::point(CoefficientRing::Integers), 1, "e", 20).unwrap());
        let bar = BarComplex::new(a, AugModule::ground(), AugModule::ground(), 6, 20).unwrap();
        let x = bar.chain_from_tuples(1, 1, &[(BarTuple { left: 0, entries: vec![1], right: 0 }, 1)]).unwrap();
        let x2 = bar.shuffle_product(&x, &x).unwrap();
        // [e] * [e] = 2 [e|e], since |e| + 1 is even
        assert_eq!(x2.coords, vec![BigInt::from(2)]);
    }

    #[test]
    fn shuffles_reject_non_cycles() {
        let a = Arc::new(AugmentedAlgebra::truncated(Ground::point(CoefficientRing::Integers), 2, 3, 12).unwrap());
        let bar = BarComplex::new(a, AugModule::ground(), AugModule::ground(), 4, 12).unwrap();
        let uu = bar.chain_from_tuples(2, 4, &[(BarTuple { left: 0, entries: vec![1, 1], right: 0 }, 1)]).unwrap();
        let u = bar.chain_from_tuples(1, 2, &[(BarTuple { left: 0, entries: vec![1], right: 0 }, 1)]).unwrap();
        assert!(matches!(bar.shuffle_product(&uu, &u), Err(HomologicalError::NotACycle)));
        assert!(bar.shuffle_product(&u, &u).is_ok());
    }
}
