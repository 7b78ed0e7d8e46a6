//! Finitely generated modules over the valuation ring inside K^d:
//! triangular free bases by valuation-pivot elimination, subspace
//! intersection and quotient, elementary divisors, and reduction
//! dimensions. Everything is exact; pivots always take an entry of
//! minimal valuation so that every elimination coefficient stays in the
//! valuation ring and the module span is preserved.

use crate::field::Field;
use crate::valued_field::{Val, ValuedField};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("vector has length {got}, ambient dimension is {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("lattices do not span compatible subspaces")]
    SpanMismatch,
}

type Vector<K> = Vec<<K as Field>::Elem>;

/// Free module over the valuation ring, stored as a triangular basis with
/// strictly increasing pivot columns and pivot entries normalized to
/// powers of the uniformizer.
#[derive(Clone, Debug)]
pub struct Lattice<K: ValuedField> {
    field: K,
    ambient: usize,
    basis: Vec<Vector<K>>,
    pivots: Vec<usize>,
}

impl<K: ValuedField> PartialEq for Lattice<K> {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.basis == other.basis
    }
}

/// Builds the canonical triangular basis of the module generated by the
/// given vectors.
pub fn lattice_basis<K: ValuedField>(
    field: &K,
    gens: &[Vector<K>],
) -> Result<Lattice<K>, LatticeError> {
    let ambient = gens.first().map_or(0, Vec::len);
    for g in gens {
        if g.len() != ambient {
            return Err(LatticeError::DimensionMismatch {
                expected: ambient,
                got: g.len(),
            });
        }
    }
    Ok(Lattice::reduce(field.clone(), ambient, gens.to_vec()))
}

impl<K: ValuedField> Lattice<K> {
    /// The standard lattice: valuation-ring span of the unit vectors.
    pub fn standard(field: K, dim: usize) -> Self {
        let basis = (0..dim)
            .map(|i| {
                let mut v = vec![field.zero(); dim];
                v[i] = field.one();
                v
            })
            .collect();
        Lattice {
            field,
            ambient: dim,
            basis,
            pivots: (0..dim).collect(),
        }
    }

    pub fn with_ambient(field: K, ambient: usize) -> Self {
        Lattice {
            field,
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    fn reduce(field: K, ambient: usize, mut rows: Vec<Vector<K>>) -> Self {
        let mut basis: Vec<Vector<K>> = Vec::new();
        let mut pivots: Vec<usize> = Vec::new();
        for col in 0..ambient {
            // remaining row with entry of minimal valuation in this column
            let mut best: Option<(usize, i64)> = None;
            for (r, row) in rows.iter().enumerate() {
                if let Val::Finite(v) = field.valuation(&row[col]) {
                    if best.map_or(true, |(_, bv)| v < bv) {
                        best = Some((r, v));
                    }
                }
            }
            let Some((r, _)) = best else { continue };
            let mut pivot_row = rows.swap_remove(r);
            // eliminate the column from every other remaining row; the
            // quotient is integral because the pivot valuation is minimal
            for row in rows.iter_mut() {
                if field.is_zero(&row[col]) {
                    continue;
                }
                let f = field
                    .div(&row[col], &pivot_row[col])
                    .expect("pivot is nonzero");
                for j in 0..ambient {
                    let delta = field.mul(&f, &pivot_row[j]);
                    row[j] = field.sub(&row[j], &delta);
                }
            }
            rows.retain(|row| row.iter().any(|x| !field.is_zero(x)));
            // normalize the pivot entry to a power of the uniformizer
            let (_, unit) = field
                .unit_normalize(&pivot_row[col])
                .expect("pivot is nonzero");
            let ui = field.inv(&unit).expect("unit part is invertible");
            for x in pivot_row.iter_mut() {
                *x = field.mul(&ui, x);
            }
            basis.push(pivot_row);
            pivots.push(col);
        }
        Lattice {
            field,
            ambient,
            basis,
            pivots,
        }
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector<K>] {
        &self.basis
    }

    /// Coordinates of `w` in the triangular basis, or `None` if `w` is
    /// outside the K-span.
    fn coordinates(&self, w: &Vector<K>) -> Option<Vec<K::Elem>> {
        assert_eq!(w.len(), self.ambient, "ambient dimension mismatch");
        let f = &self.field;
        let mut rest = w.clone();
        let mut coords = Vec::with_capacity(self.rank());
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            let c = f.div(&rest[p], &row[p]).expect("pivot is nonzero");
            for j in 0..self.ambient {
                let delta = f.mul(&c, &row[j]);
                rest[j] = f.sub(&rest[j], &delta);
            }
            coords.push(c);
        }
        rest.iter().all(|x| f.is_zero(x)).then_some(coords)
    }

    /// Membership in the module: the coordinates exist and are integral.
    pub fn contains(&self, w: &Vector<K>) -> bool {
        match self.coordinates(w) {
            None => false,
            Some(coords) => coords
                .iter()
                .all(|c| self.field.valuation(c) >= Val::Finite(0)),
        }
    }

    /// Membership in the K-span.
    pub fn span_contains(&self, w: &Vector<K>) -> bool {
        self.coordinates(w).is_some()
    }

    /// Whether this module is a lattice in the subspace spanned by the
    /// given vectors, i.e. its K-span equals that subspace. (Finite
    /// generation and boundedness are automatic here.)
    pub fn is_lattice_in(&self, subspace: &[Vector<K>]) -> bool {
        let sub = field_rref(&self.field, subspace, self.ambient);
        if sub.len() != self.rank() {
            return false;
        }
        // mutual containment of spans
        self.basis
            .iter()
            .all(|b| reduces_to_zero(&self.field, &sub, b))
            && subspace.iter().all(|v| self.span_contains(v))
    }

    /// The module `M ∩ V'` for a subspace `V'`: solve the annihilating
    /// linear forms of `V'` on the basis coordinates and saturate over the
    /// valuation ring via diagonalization, so the result is the full
    /// intersection and not a finite-index sublattice.
    pub fn intersect_with_subspace(&self, subspace: &[Vector<K>]) -> Lattice<K> {
        let f = &self.field;
        let forms = nullspace(f, subspace, self.ambient);
        let r = self.rank();
        // forms applied to the basis vectors
        let a: Vec<Vector<K>> = forms
            .iter()
            .map(|l| {
                (0..r)
                    .map(|i| dot(f, l, &self.basis[i]))
                    .collect::<Vec<_>>()
            })
            .collect();
        let (_, cols) = val_smith(f, a, r);
        let kernel_cols = cols;
        let mut gens = Vec::new();
        for c in kernel_cols {
            let mut v = vec![f.zero(); self.ambient];
            for (i, ci) in c.iter().enumerate() {
                for j in 0..self.ambient {
                    let delta = f.mul(ci, &self.basis[i][j]);
                    v[j] = f.add(&v[j], &delta);
                }
            }
            if v.iter().any(|x| !f.is_zero(x)) {
                gens.push(v);
            }
        }
        Lattice::reduce(f.clone(), self.ambient, gens)
    }

    /// Image of this module in the quotient space `K^d / V'`, with quotient
    /// coordinates given by the lexicographically first standard basis
    /// vectors completing `V'`.
    pub fn quotient_by_subspace(&self, subspace: &[Vector<K>]) -> Lattice<K> {
        let f = &self.field;
        let sub = field_rref(f, subspace, self.ambient);
        let s = sub.len();
        let d = self.ambient;
        // greedy complement by standard basis vectors
        let mut complete = sub.clone();
        let mut chosen = Vec::new();
        for j in 0..d {
            if complete.len() == d {
                break;
            }
            let mut e = vec![f.zero(); d];
            e[j] = f.one();
            if !reduces_to_zero(f, &complete, &e) {
                complete = field_rref_extend(f, complete, e);
                chosen.push(j);
            }
        }
        debug_assert_eq!(s + chosen.len(), d);
        // columns of the change-of-basis matrix: V' basis then unit vectors
        let mut q_cols: Vec<Vector<K>> = sub;
        for &j in &chosen {
            let mut e = vec![f.zero(); d];
            e[j] = f.one();
            q_cols.push(e);
        }
        let gens: Vec<Vector<K>> = self
            .basis
            .iter()
            .map(|b| {
                let z = solve_columns(f, &q_cols, b).expect("columns form a basis");
                z[s..].to_vec()
            })
            .collect();
        Lattice::reduce(f.clone(), d - s, gens)
    }

    /// Reduction dimension over the residue field and the unramifiedness
    /// flag relative to the ambient space. For a free module over a
    /// discrete valuation ring the reduction dimension is the rank.
    pub fn reduction_dim(&self) -> ReductionDim {
        ReductionDim {
            dim: self.rank(),
            unramified: self.rank() == self.ambient,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize, serde::Deserialize)]
pub struct ReductionDim {
    pub dim: usize,
    pub unramified: bool,
}

/// Sorted valuations `e_1 <= ... <= e_r` with `M/N` isomorphic to the sum
/// of `O_v / pi^{e_i}`; defined whenever the two modules span the same
/// subspace. All entries are nonnegative exactly when `N` is contained in
/// `M`.
pub fn elementary_divisors<K: ValuedField>(
    n: &Lattice<K>,
    m: &Lattice<K>,
) -> Result<Vec<i64>, LatticeError> {
    if n.rank() != m.rank() || n.ambient() != m.ambient() {
        return Err(LatticeError::SpanMismatch);
    }
    let f = n.field();
    let mut coords = Vec::new();
    for b in n.basis() {
        let Some(c) = m.coordinates(b) else {
            return Err(LatticeError::SpanMismatch);
        };
        coords.push(c);
    }
    let (mut divisors, _) = val_smith(f, coords, m.rank());
    if divisors.len() != m.rank() {
        return Err(LatticeError::SpanMismatch);
    }
    divisors.sort_unstable();
    Ok(divisors)
}

fn dot<K: Field>(f: &K, a: &[K::Elem], b: &[K::Elem]) -> K::Elem {
    let mut acc = f.zero();
    for (x, y) in a.iter().zip(b) {
        acc = f.add(&acc, &f.mul(x, y));
    }
    acc
}

/// Reduced row echelon form of the span of the given vectors (over the
/// field, no integrality), rows sorted by pivot column.
fn field_rref<K: Field>(f: &K, rows: &[Vec<K::Elem>], width: usize) -> Vec<Vec<K::Elem>> {
    let mut out: Vec<Vec<K::Elem>> = Vec::new();
    for row in rows {
        assert_eq!(row.len(), width, "row width mismatch");
        out = field_rref_extend(f, out, row.clone());
    }
    out
}

/// Inserts one vector into an rref basis, reducing it first.
fn field_rref_extend<K: Field>(
    f: &K,
    mut basis: Vec<Vec<K::Elem>>,
    mut row: Vec<K::Elem>,
) -> Vec<Vec<K::Elem>> {
    let lead = |r: &Vec<K::Elem>| r.iter().position(|x| !f.is_zero(x));
    for b in &basis {
        let p = lead(b).expect("basis rows are nonzero");
        if !f.is_zero(&row[p]) {
            let c = row[p].clone();
            for j in 0..row.len() {
                let delta = f.mul(&c, &b[j]);
                row[j] = f.sub(&row[j], &delta);
            }
        }
    }
    let Some(p) = lead(&row) else {
        return basis;
    };
    let inv = f.inv(&row[p]).expect("lead is nonzero");
    for x in row.iter_mut() {
        *x = f.mul(&inv, x);
    }
    for b in basis.iter_mut() {
        if !f.is_zero(&b[p]) {
            let c = b[p].clone();
            for j in 0..row.len() {
                let delta = f.mul(&c, &row[j]);
                b[j] = f.sub(&b[j], &delta);
            }
        }
    }
    basis.push(row);
    basis.sort_by_key(|r| lead(r).expect("nonzero"));
    basis
}

fn reduces_to_zero<K: Field>(f: &K, rref: &[Vec<K::Elem>], v: &[K::Elem]) -> bool {
    let mut row = v.to_vec();
    for b in rref {
        let p = b.iter().position(|x| !f.is_zero(x)).expect("nonzero row");
        if !f.is_zero(&row[p]) {
            let c = row[p].clone();
            for j in 0..row.len() {
                let delta = f.mul(&c, &b[j]);
                row[j] = f.sub(&row[j], &delta);
            }
        }
    }
    row.iter().all(|x| f.is_zero(x))
}

/// Basis of `{ x : rows * x = 0 }`.
fn nullspace<K: Field>(f: &K, rows: &[Vec<K::Elem>], width: usize) -> Vec<Vec<K::Elem>> {
    let rref = field_rref(f, rows, width);
    let pivots: Vec<usize> = rref
        .iter()
        .map(|r| r.iter().position(|x| !f.is_zero(x)).expect("nonzero row"))
        .collect();
    let mut out = Vec::new();
    for free in 0..width {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![f.zero(); width];
        v[free] = f.one();
        for (r, &p) in rref.iter().zip(&pivots) {
            v[p] = f.neg(&r[free]);
        }
        out.push(v);
    }
    out
}

/// Solves `sum_j z_j * cols[j] = rhs` for square invertible column sets.
fn solve_columns<K: Field>(f: &K, cols: &[Vec<K::Elem>], rhs: &[K::Elem]) -> Option<Vec<K::Elem>> {
    let d = rhs.len();
    let n = cols.len();
    // gaussian elimination on the augmented (d x (n+1)) system
    let mut m: Vec<Vec<K::Elem>> = (0..d)
        .map(|i| {
            let mut row: Vec<K::Elem> = cols.iter().map(|c| c[i].clone()).collect();
            row.push(rhs[i].clone());
            row
        })
        .collect();
    let mut pivot_rows = Vec::new();
    for c in 0..n {
        let Some(r) = (0..d).find(|&r| !pivot_rows.contains(&r) && !f.is_zero(&m[r][c])) else {
            return None;
        };
        let inv = f.inv(&m[r][c]).expect("nonzero");
        for x in m[r].iter_mut() {
            *x = f.mul(&inv, x);
        }
        for r2 in 0..d {
            if r2 != r && !f.is_zero(&m[r2][c]) {
                let k = m[r2][c].clone();
                for j in 0..=n {
                    let delta = f.mul(&k, &m[r][j]);
                    m[r2][j] = f.sub(&m[r2][j], &delta);
                }
            }
        }
        pivot_rows.push(r);
    }
    // consistency: rows without pivots must have zero rhs
    for r in 0..d {
        if !pivot_rows.contains(&r) && !f.is_zero(&m[r][n]) {
            return None;
        }
    }
    let mut z = vec![f.zero(); n];
    for (c, &r) in pivot_rows.iter().enumerate() {
        z[c] = m[r][n].clone();
    }
    Some(z)
}

/// Diagonalizes a matrix over the valuation ring by row and column
/// operations with minimal-valuation pivoting; every transform coefficient
/// is integral. Returns the sorted diagonal valuations and a basis of the
/// kernel module `{ x integral-or-not : A x = 0 }` expressed through the
/// accumulated (integrally invertible) column transform — the kernel basis
/// columns span a saturated module.
fn val_smith<K: ValuedField>(
    f: &K,
    mut a: Vec<Vec<K::Elem>>,
    cols: usize,
) -> (Vec<i64>, Vec<Vec<K::Elem>>) {
    let rows = a.len();
    // column transform as a list of column vectors (length `cols`)
    let mut v: Vec<Vec<K::Elem>> = (0..cols)
        .map(|j| {
            let mut e = vec![f.zero(); cols];
            e[j] = f.one();
            e
        })
        .collect();
    let mut rank = 0;
    while rank < rows && rank < cols {
        // minimal-valuation pivot in the trailing submatrix
        let mut best: Option<(usize, usize, i64)> = None;
        for i in rank..rows {
            for j in rank..cols {
                if let Val::Finite(val) = f.valuation(&a[i][j]) {
                    if best.map_or(true, |(_, _, bv)| val < bv) {
                        best = Some((i, j, val));
                    }
                }
            }
        }
        let Some((pi, pj, pv)) = best else { break };
        a.swap(rank, pi);
        if pj != rank {
            for row in a.iter_mut() {
                row.swap(rank, pj);
            }
            v.swap(rank, pj);
        }
        // clear the column below with integral factors
        for i in (rank + 1)..rows {
            if f.is_zero(&a[i][rank]) {
                continue;
            }
            let factor = f.div(&a[i][rank], &a[rank][rank]).expect("pivot nonzero");
            for j in rank..cols {
                let delta = f.mul(&factor, &a[rank][j]);
                a[i][j] = f.sub(&a[i][j], &delta);
            }
        }
        // clear the row to the right with integral factors, mirrored on v
        for j in (rank + 1)..cols {
            if f.is_zero(&a[rank][j]) {
                continue;
            }
            let factor = f.div(&a[rank][j], &a[rank][rank]).expect("pivot nonzero");
            for i in rank..rows {
                let delta = f.mul(&factor, &a[i][rank]);
                a[i][j] = f.sub(&a[i][j], &delta);
            }
            let vr = v[rank].clone();
            for (x, y) in v[j].iter_mut().zip(&vr) {
                let delta = f.mul(&factor, y);
                *x = f.sub(x, &delta);
            }
        }
        debug_assert_eq!(f.valuation(&a[rank][rank]), Val::Finite(pv));
        rank += 1;
    }
    let divisors: Vec<i64> = (0..rank)
        .map(|i| {
            f.valuation(&a[i][i])
                .finite()
                .expect("diagonal pivot is nonzero")
        })
        .collect();
    let kernel = v.split_off(rank);
    (divisors, kernel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::valued_field::PAdic;
    use num_rational::BigRational;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn k2() -> PAdic {
        PAdic::new(2).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn vecs(data: &[&[(i64, i64)]]) -> Vec<Vec<BigRational>> {
        data.iter()
            .map(|row| row.iter().map(|&(n, d)| rat(n, d)).collect())
            .collect()
    }

    #[test]
    fn basis_with_denominators() {
        let k = k2();
        let gens = vecs(&[&[(1, 1), (0, 1)], &[(0, 1), (1, 1)], &[(1, 2), (1, 2)]]);
        let m = lattice_basis(&k, &gens).unwrap();
        assert_eq!(m.rank(), 2);
        let std2 = Lattice::standard(k.clone(), 2);
        let div = elementary_divisors(&m, &std2).unwrap();
        assert_eq!(div, vec![-1, 0]);
    }

    #[test]
    fn basis_single_and_empty() {
        let k = k2();
        let m = lattice_basis(&k, &vecs(&[&[(0, 1), (3, 1)]])).unwrap();
        assert_eq!(m.rank(), 1);
        // basis is (0, 3) up to a unit
        assert!(m.contains(&vec![rat(0, 1), rat(3, 1)]));
        assert!(!m.contains(&vec![rat(0, 1), rat(1, 2)]));
        assert!(m.contains(&vec![rat(0, 1), rat(1, 1)])); // 1 = 3 * (1/3), 1/3 a unit
        let empty = lattice_basis(&k, &[]).unwrap();
        assert_eq!(empty.rank(), 0);
    }

    #[test]
    fn dimension_mismatch() {
        let k = k2();
        let gens = vec![vec![rat(1, 1)], vec![rat(1, 1), rat(0, 1)]];
        assert_eq!(
            lattice_basis(&k, &gens).err(),
            Some(LatticeError::DimensionMismatch {
                expected: 1,
                got: 2
            })
        );
    }

    #[test]
    fn is_lattice_in_examples() {
        let k = k2();
        let std2 = Lattice::standard(k.clone(), 2);
        let full = vecs(&[&[(1, 1), (0, 1)], &[(0, 1), (1, 1)]]);
        assert!(std2.is_lattice_in(&full));
        let line = vecs(&[&[(1, 1), (1, 1)]]);
        let m1 = lattice_basis(&k, &vecs(&[&[(1, 1), (0, 1)]])).unwrap();
        assert!(!m1.is_lattice_in(&full));
        let diag = lattice_basis(&k, &line).unwrap();
        assert!(diag.is_lattice_in(&line));
    }

    #[test]
    fn intersect_standard_with_diagonal() {
        let k = k2();
        let std2 = Lattice::standard(k.clone(), 2);
        let line = vecs(&[&[(1, 1), (1, 1)]]);
        let int = std2.intersect_with_subspace(&line);
        assert_eq!(int.rank(), 1);
        assert!(int.contains(&vec![rat(1, 1), rat(1, 1)]));
        // saturation: (1,1)/2 is not in the standard lattice, so not here
        assert!(!int.contains(&vec![rat(1, 2), rat(1, 2)]));
    }

    #[test]
    fn intersect_with_denominator_lattice() {
        let k = k2();
        let m = lattice_basis(&k, &vecs(&[&[(1, 2), (1, 2)], &[(0, 1), (1, 1)]])).unwrap();
        let line = vecs(&[&[(1, 1), (1, 1)]]);
        let int = m.intersect_with_subspace(&line);
        assert_eq!(int.rank(), 1);
        assert!(int.contains(&vec![rat(1, 2), rat(1, 2)]));
        assert!(!int.contains(&vec![rat(1, 4), rat(1, 4)]));
    }

    #[test]
    fn intersect_trivial_cases() {
        let k = k2();
        let std2 = Lattice::standard(k.clone(), 2);
        let zero = std2.intersect_with_subspace(&[]);
        assert_eq!(zero.rank(), 0);
        let whole = vecs(&[&[(1, 1), (0, 1)], &[(0, 1), (1, 1)]]);
        let same = std2.intersect_with_subspace(&whole);
        assert_eq!(same, std2);
    }

    #[test]
    fn quotient_examples() {
        let k = k2();
        let std2 = Lattice::standard(k.clone(), 2);
        let line = vecs(&[&[(1, 1), (1, 1)]]);
        let q = std2.quotient_by_subspace(&line);
        assert_eq!(q.ambient(), 1);
        assert_eq!(q.rank(), 1);
        assert!(q.contains(&vec![rat(1, 1)]));
        assert!(!q.contains(&vec![rat(1, 2)]));
        // V' = 0 gives M itself
        let same = std2.quotient_by_subspace(&[]);
        assert_eq!(same, std2);
        // V' = ambient gives rank 0
        let whole = vecs(&[&[(1, 1), (0, 1)], &[(0, 1), (1, 1)]]);
        assert_eq!(std2.quotient_by_subspace(&whole).rank(), 0);
    }

    #[test]
    fn elementary_divisors_examples() {
        let k = k2();
        let std2 = Lattice::standard(k.clone(), 2);
        // N = 2M
        let n = lattice_basis(&k, &vecs(&[&[(2, 1), (0, 1)], &[(0, 1), (2, 1)]])).unwrap();
        assert_eq!(elementary_divisors(&n, &std2).unwrap(), vec![1, 1]);
        // N = M
        assert_eq!(elementary_divisors(&std2, &std2).unwrap(), vec![0, 0]);
        // diagonal (2, 8)
        let n = lattice_basis(&k, &vecs(&[&[(2, 1), (0, 1)], &[(0, 1), (8, 1)]])).unwrap();
        assert_eq!(elementary_divisors(&n, &std2).unwrap(), vec![1, 3]);
        // span mismatch
        let line = lattice_basis(&k, &vecs(&[&[(1, 1), (0, 1)]])).unwrap();
        assert_eq!(
            elementary_divisors(&line, &std2).err(),
            Some(LatticeError::SpanMismatch)
        );
    }

    #[test]
    fn reduction_dim_examples() {
        let k = k2();
        assert_eq!(
            Lattice::standard(k.clone(), 2).reduction_dim(),
            ReductionDim {
                dim: 2,
                unramified: true
            }
        );
        let line = lattice_basis(&k, &vecs(&[&[(1, 1), (0, 1)]])).unwrap();
        assert_eq!(
            line.reduction_dim(),
            ReductionDim {
                dim: 1,
                unramified: false
            }
        );
        let m = lattice_basis(
            &k,
            &vecs(&[&[(1, 1), (0, 1)], &[(0, 1), (1, 1)], &[(1, 2), (1, 2)]]),
        )
        .unwrap();
        assert_eq!(m.reduction_dim().dim, 2);
        assert!(m.reduction_dim().unramified);
    }

    fn random_vector(k: &PAdic, rng: &mut ChaCha8Rng, d: usize) -> Vec<BigRational> {
        use crate::field::Field;
        use crate::valued_field::ValuedField;
        (0..d)
            .map(|_| {
                let x = k.random(rng, 9);
                let shift = rng.random_range(-2i64..=2);
                k.mul(&x, &k.pi_pow(shift))
            })
            .collect()
    }

    fn random_full_lattice(k: &PAdic, rng: &mut ChaCha8Rng, d: usize) -> Lattice<PAdic> {
        loop {
            let gens: Vec<_> = (0..d).map(|_| random_vector(k, rng, d)).collect();
            let m = lattice_basis(k, &gens).unwrap();
            if m.rank() == d {
                return m;
            }
        }
    }

    #[test]
    fn lemma_roundtrip_random() {
        // rank(M) = rank(M ∩ V') + rank(M / M ∩ V') for random full
        // lattices and random subspaces
        let k = k2();
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        for _ in 0..60 {
            let m = random_full_lattice(&k, &mut rng, 3);
            let s = rng.random_range(1..=2usize);
            let sub: Vec<_> = (0..s).map(|_| random_vector(&k, &mut rng, 3)).collect();
            let sub_rank = field_rref(&k, &sub, 3).len();
            let int = m.intersect_with_subspace(&sub);
            let quot = m.quotient_by_subspace(&sub);
            assert_eq!(int.rank(), sub_rank);
            assert_eq!(int.rank() + quot.rank(), m.rank());
            // the intersection is a lattice in V'
            assert!(int.is_lattice_in(&sub));
            // saturation: no basis vector of the intersection is divisible
            for b in int.basis() {
                let halved: Vec<_> = b
                    .iter()
                    .map(|x| k.div(x, &k.from_int(2)).unwrap())
                    .collect();
                assert!(!(m.contains(&halved)));
            }
        }
    }

    #[test]
    fn divisors_nonnegative_iff_contained() {
        let k = k2();
        let mut rng = ChaCha8Rng::seed_from_u64(103);
        for _ in 0..60 {
            let m = random_full_lattice(&k, &mut rng, 3);
            // integral random combinations of m's basis give N ⊆ M
            let gens: Vec<_> = (0..3)
                .map(|_| {
                    let mut v = vec![k.zero(); 3];
                    for b in m.basis() {
                        let c = k.from_int(rng.random_range(-4..=4i64));
                        for j in 0..3 {
                            let delta = k.mul(&c, &b[j]);
                            v[j] = k.add(&v[j], &delta);
                        }
                    }
                    v
                })
                .collect();
            let n = lattice_basis(&k, &gens).unwrap();
            if n.rank() != 3 {
                continue;
            }
            let div = elementary_divisors(&n, &m).unwrap();
            assert!(div.iter().all(|&e| e >= 0), "divisors {div:?}");
            assert!(n.basis().iter().all(|b| m.contains(b)));
            // scaling down one basis vector breaks containment and the sign
            let mut bad_gens = n.basis().to_vec();
            for x in bad_gens[0].iter_mut() {
                *x = k.div(x, &k.from_int(4)).unwrap();
            }
            let bad = lattice_basis(&k, &bad_gens).unwrap();
            let bad_div = elementary_divisors(&bad, &m).unwrap();
            let contained = bad.basis().iter().all(|b| m.contains(b));
            assert_eq!(bad_div.iter().all(|&e| e >= 0), contained);
        }
    }

    #[test]
    fn divisors_consistent_with_index() {
        // det-based cross-check: the sum of the divisors of N in M equals
        // v(det of the coordinate matrix)
        let k = k2();
        let mut rng = ChaCha8Rng::seed_from_u64(107);
        for _ in 0..40 {
            let m = random_full_lattice(&k, &mut rng, 2);
            let n = random_full_lattice(&k, &mut rng, 2);
            let div = elementary_divisors(&n, &m).unwrap();
            let c0 = m.coordinates(&n.basis()[0].clone()).unwrap();
            let c1 = m.coordinates(&n.basis()[1].clone()).unwrap();
            let det = k.sub(&k.mul(&c0[0], &c1[1]), &k.mul(&c0[1], &c1[0]));
            let vdet = k.valuation(&det).finite().expect("nonzero det");
            assert_eq!(div.iter().sum::<i64>(), vdet);
        }
    }
}
