//! Representations of bound quivers: string and band modules, direct sums,
//! morphisms and Hom spaces by exact linear algebra.

use std::sync::Arc;

use crate::error::{FieldError, RepError};
use crate::field::Field;
use crate::matrix::Matrix;
use crate::quiver::GentleQuiver;
use crate::word::Word;

/// Where a basis vector comes from: summand index, position `i` along the
/// walk, and copy index `j` (always 0 for string summands).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BasisLabel {
    pub summand: usize,
    pub position: usize,
    pub copy: usize,
}

/// One indecomposable summand, stored in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Summand<E> {
    String(Word),
    /// Band class representative, parameter adjusted to that representative, block size.
    Band { word: Word, lambda: E, d: usize },
}

impl<E: Clone> Summand<E> {
    pub fn render<F: Field<Elem = E>>(&self, q: &GentleQuiver, f: &F) -> String {
        match self {
            Summand::String(w) => format!("M({})", w.render(q)),
            Summand::Band { word, lambda, d } => {
                format!("B({}; {}; {})", word.render(q), f.render(lambda), d)
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct Representation<F: Field> {
    quiver: Arc<GentleQuiver>,
    field: F,
    dims: Vec<usize>,
    maps: Vec<Matrix<F::Elem>>,
    labels: Vec<Vec<BasisLabel>>,
    ledger: Option<Vec<Summand<F::Elem>>>,
}

impl<F: Field> Representation<F> {
    /// A representation from raw data; maps are `dim(target) x dim(source)`.
    pub fn new(
        quiver: Arc<GentleQuiver>,
        field: F,
        dims: Vec<usize>,
        maps: Vec<Matrix<F::Elem>>,
    ) -> Result<Self, RepError> {
        if dims.len() != quiver.vertex_count() || maps.len() != quiver.arrow_count() {
            return Err(RepError::DimensionMismatch(
                "need one space per vertex and one map per arrow".into(),
            ));
        }
        for (a, m) in maps.iter().enumerate() {
            let (s, t) = (quiver.source(a), quiver.target(a));
            if m.rows() != dims[t] || m.cols() != dims[s] {
                return Err(RepError::DimensionMismatch(format!(
                    "map at {} is {}x{}, expected {}x{}",
                    quiver.label(a),
                    m.rows(),
                    m.cols(),
                    dims[t],
                    dims[s]
                )));
            }
        }
        let labels = dims
            .iter()
            .map(|&d| {
                (0..d)
                    .map(|i| BasisLabel {
                        summand: 0,
                        position: i,
                        copy: 0,
                    })
                    .collect()
            })
            .collect();
        Ok(Representation {
            quiver,
            field,
            dims,
            maps,
            labels,
            ledger: None,
        })
    }

    pub fn zero(quiver: Arc<GentleQuiver>, field: F) -> Self {
        let dims = vec![0; quiver.vertex_count()];
        let maps = (0..quiver.arrow_count())
            .map(|_| Matrix::zero(&field, 0, 0))
            .collect();
        Representation {
            labels: vec![Vec::new(); dims.len()],
            quiver,
            field,
            dims,
            maps,
            ledger: Some(Vec::new()),
        }
    }

    pub fn quiver(&self) -> &Arc<GentleQuiver> {
        &self.quiver
    }
    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }
    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }
    pub fn map(&self, arrow: usize) -> &Matrix<F::Elem> {
        &self.maps[arrow]
    }
    pub fn maps(&self) -> &[Matrix<F::Elem>] {
        &self.maps
    }
    pub fn labels(&self, v: usize) -> &[BasisLabel] {
        &self.labels[v]
    }
    pub fn ledger(&self) -> Option<&[Summand<F::Elem>]> {
        self.ledger.as_deref()
    }
    pub fn forget_ledger(mut self) -> Self {
        self.ledger = None;
        self
    }

    /// Whether every relation acts as zero.
    pub fn satisfies_relations(&self) -> bool {
        self.quiver.relations().iter().all(|&(a, b)| {
            let t = self.quiver.target(b);
            let s = self.quiver.source(a);
            if self.dims[t] == 0 || self.dims[s] == 0 {
                return true;
            }
            self.maps[b].mul(&self.maps[a], &self.field).is_zero(&self.field)
        })
    }

    /// The representation from a string, basis `x_0..x_k` with `x_i` at `v_i`.
    pub fn string_module(quiver: Arc<GentleQuiver>, field: F, w: &Word) -> Result<Self, RepError> {
        w.check_string(&quiver)?;
        let q: &GentleQuiver = &quiver;
        let vs = w.vertices(q);
        let mut dims = vec![0; q.vertex_count()];
        let mut slot = Vec::with_capacity(vs.len());
        let mut labels = vec![Vec::new(); q.vertex_count()];
        for (i, &v) in vs.iter().enumerate() {
            slot.push(dims[v]);
            dims[v] += 1;
            labels[v].push(BasisLabel {
                summand: 0,
                position: i,
                copy: 0,
            });
        }
        let mut maps: Vec<Matrix<F::Elem>> = (0..q.arrow_count())
            .map(|a| Matrix::zero(&field, dims[q.target(a)], dims[q.source(a)]))
            .collect();
        for (i, l) in w.letters().iter().enumerate() {
            // Letter i joins x_i and x_{i+1}.
            let (from, to) = if l.inverse { (i + 1, i) } else { (i, i + 1) };
            let m = &mut maps[l.arrow];
            let v = field.add(m.get(slot[to], slot[from]), &field.one());
            m.set(slot[to], slot[from], v);
        }
        Ok(Representation {
            quiver: quiver.clone(),
            field,
            dims,
            maps,
            labels,
            ledger: Some(vec![Summand::String(w.canonical(q))]),
        })
    }

    /// The band representation with parameter `lambda` and block size `d`.
    /// The closing letter carries the Jordan block: `J_d(lambda)` when it is
    /// direct, `J_d(lambda^-1)` read backwards when it is inverse.
    pub fn band_module(
        quiver: Arc<GentleQuiver>,
        field: F,
        w: &Word,
        lambda: F::Elem,
        d: usize,
    ) -> Result<Self, RepError> {
        w.check_band(&quiver)?;
        if field.is_zero(&lambda) {
            return Err(FieldError::ZeroScalar(field.render(&lambda)).into());
        }
        if d == 0 {
            return Err(RepError::DimensionMismatch("band block size must be positive".into()));
        }
        let q: &GentleQuiver = &quiver;
        let vs = w.vertices(q);
        let k = w.len();
        let mut dims = vec![0; q.vertex_count()];
        let mut slot = Vec::with_capacity(k);
        let mut labels = vec![Vec::new(); q.vertex_count()];
        for (i, &v) in vs.iter().take(k).enumerate() {
            slot.push(dims[v]);
            dims[v] += d;
            for j in 0..d {
                labels[v].push(BasisLabel {
                    summand: 0,
                    position: i,
                    copy: j,
                });
            }
        }
        let idx = |i: usize, j: usize| slot[i] + j;
        let mut maps: Vec<Matrix<F::Elem>> = (0..q.arrow_count())
            .map(|a| Matrix::zero(&field, dims[q.target(a)], dims[q.source(a)]))
            .collect();
        let one = field.one();
        for (i, l) in w.letters().iter().enumerate() {
            let m = &mut maps[l.arrow];
            if i + 1 < k {
                let (from, to) = if l.inverse { (i + 1, i) } else { (i, i + 1) };
                for j in 0..d {
                    let v = field.add(m.get(idx(to, j), idx(from, j)), &one);
                    m.set(idx(to, j), idx(from, j), v);
                }
            } else {
                // Closing letter between x_{k-1} and x_0.
                let (from, to, scalar) = if l.inverse {
                    (0, k - 1, field.inv(&lambda).expect("lambda is nonzero"))
                } else {
                    (k - 1, 0, lambda.clone())
                };
                for j in 0..d {
                    let v = field.add(m.get(idx(to, j), idx(from, j)), &scalar);
                    m.set(idx(to, j), idx(from, j), v);
                    if j + 1 < d {
                        let v = field.add(m.get(idx(to, j + 1), idx(from, j)), &one);
                        m.set(idx(to, j + 1), idx(from, j), v);
                    }
                }
            }
        }
        let (canon, inverted) = w.canonical_band(q);
        let lam = if inverted {
            field.inv(&lambda).expect("lambda is nonzero")
        } else {
            lambda
        };
        Ok(Representation {
            quiver: quiver.clone(),
            field,
            dims,
            maps,
            labels,
            ledger: Some(vec![Summand::Band {
                word: canon,
                lambda: lam,
                d,
            }]),
        })
    }

    /// Block diagonal sum; ledgers concatenate when all parts carry one.
    pub fn direct_sum(parts: &[Representation<F>]) -> Result<Self, RepError> {
        let first = parts.first().ok_or_else(|| {
            RepError::DimensionMismatch("direct sum of nothing; use Representation::zero".into())
        })?;
        if parts.iter().any(|p| p.quiver != first.quiver || p.field != first.field) {
            return Err(RepError::MixedQuivers);
        }
        let q = first.quiver.clone();
        let f = first.field.clone();
        let n = q.vertex_count();
        let mut dims = vec![0; n];
        for p in parts {
            for v in 0..n {
                dims[v] += p.dims[v];
            }
        }
        let mut maps: Vec<Matrix<F::Elem>> = (0..q.arrow_count())
            .map(|a| Matrix::zero(&f, dims[q.target(a)], dims[q.source(a)]))
            .collect();
        let mut offset = vec![0; n];
        let mut labels = vec![Vec::new(); n];
        let mut summand_offset = 0;
        let mut ledger = Some(Vec::new());
        for p in parts {
            for a in 0..q.arrow_count() {
                let (s, t) = (q.source(a), q.target(a));
                let src = &p.maps[a];
                for r in 0..src.rows() {
                    for c in 0..src.cols() {
                        maps[a].set(offset[t] + r, offset[s] + c, src.get(r, c).clone());
                    }
                }
            }
            for v in 0..n {
                for l in &p.labels[v] {
                    labels[v].push(BasisLabel {
                        summand: l.summand + summand_offset,
                        ..*l
                    });
                }
                offset[v] += p.dims[v];
            }
            match (&mut ledger, &p.ledger) {
                (Some(acc), Some(l)) => {
                    acc.extend(l.iter().cloned());
                    summand_offset += l.len();
                }
                _ => {
                    ledger = None;
                    summand_offset += 1;
                }
            }
        }
        Ok(Representation {
            quiver: q,
            field: f,
            dims,
            maps,
            labels,
            ledger,
        })
    }

    /// `self` repeated `k` times.
    pub fn power(&self, k: usize) -> Self {
        if k == 0 {
            return Representation::zero(self.quiver.clone(), self.field.clone());
        }
        Representation::direct_sum(&vec![self.clone(); k]).expect("copies share a quiver")
    }

    pub fn same_quiver(&self, other: &Representation<F>) -> Result<(), RepError> {
        if self.quiver != other.quiver || self.field != other.field {
            Err(RepError::MixedQuivers)
        } else {
            Ok(())
        }
    }
}

/// A family of linear maps, one per vertex, `dim Y_q x dim X_q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism<E> {
    pub maps: Vec<Matrix<E>>,
}

impl<E: Clone + PartialEq> Morphism<E> {
    pub fn zero<F: Field<Elem = E>>(f: &F, x: &Representation<F>, y: &Representation<F>) -> Self {
        Morphism {
            maps: x
                .dims
                .iter()
                .zip(&y.dims)
                .map(|(&dx, &dy)| Matrix::zero(f, dy, dx))
                .collect(),
        }
    }

    pub fn is_zero<F: Field<Elem = E>>(&self, f: &F) -> bool {
        self.maps.iter().all(|m| m.is_zero(f))
    }

    pub fn add_scaled<F: Field<Elem = E>>(&mut self, other: &Self, s: &E, f: &F) {
        for (a, b) in self.maps.iter_mut().zip(&other.maps) {
            a.add_scaled(b, s, f);
        }
    }

    pub fn compose<F: Field<Elem = E>>(&self, after: &Self, f: &F) -> Self {
        Morphism {
            maps: self
                .maps
                .iter()
                .zip(&after.maps)
                .map(|(a, b)| b.mul(a, f))
                .collect(),
        }
    }
}

/// Checks `Y_a phi_{s(a)} = phi_{t(a)} X_a` for every arrow.
pub fn check_morphism<F: Field>(
    x: &Representation<F>,
    y: &Representation<F>,
    phi: &Morphism<F::Elem>,
) -> Result<(), RepError> {
    x.same_quiver(y)?;
    let q = &x.quiver;
    let f = &x.field;
    for v in 0..q.vertex_count() {
        let m = &phi.maps[v];
        if m.rows() != y.dims[v] || m.cols() != x.dims[v] {
            return Err(RepError::DimensionMismatch(format!(
                "component at {} has the wrong shape",
                q.vertex_name(v)
            )));
        }
    }
    for a in 0..q.arrow_count() {
        let (s, t) = (q.source(a), q.target(a));
        let left = y.maps[a].mul(&phi.maps[s], f);
        let right = phi.maps[t].mul(&x.maps[a], f);
        if left != right {
            return Err(RepError::NotAMorphism(q.label(a).to_string()));
        }
    }
    Ok(())
}

/// A basis of `Hom(X, Y)`, the kernel of the commutativity equations.
pub fn hom_space<F: Field>(
    x: &Representation<F>,
    y: &Representation<F>,
) -> Result<Vec<Morphism<F::Elem>>, RepError> {
    x.same_quiver(y)?;
    let q = &x.quiver;
    let f = &x.field;
    let n = q.vertex_count();
    // Unknowns: entries of phi_v, row-major, vertex after vertex.
    let mut offset = vec![0; n + 1];
    for v in 0..n {
        offset[v + 1] = offset[v] + y.dims[v] * x.dims[v];
    }
    let unknowns = offset[n];
    if unknowns == 0 {
        return Ok(Vec::new());
    }
    let var = |v: usize, r: usize, c: usize| offset[v] + r * x.dims[v] + c;
    let mut rows: Vec<Vec<F::Elem>> = Vec::new();
    for a in 0..q.arrow_count() {
        let (s, t) = (q.source(a), q.target(a));
        let (xa, ya) = (&x.maps[a], &y.maps[a]);
        // (Y_a phi_s - phi_t X_a)[r][c] = 0, a dim Y_t x dim X_s system.
        for r in 0..y.dims[t] {
            for c in 0..x.dims[s] {
                let mut row = vec![f.zero(); unknowns];
                let mut nonzero = false;
                for k in 0..y.dims[s] {
                    let coef = ya.get(r, k);
                    if !f.is_zero(coef) {
                        let i = var(s, k, c);
                        row[i] = f.add(&row[i], coef);
                        nonzero = true;
                    }
                }
                for k in 0..x.dims[t] {
                    let coef = xa.get(k, c);
                    if !f.is_zero(coef) {
                        let i = var(t, r, k);
                        row[i] = f.sub(&row[i], coef);
                        nonzero = true;
                    }
                }
                if nonzero {
                    rows.push(row);
                }
            }
        }
    }
    let kernel = if rows.is_empty() {
        (0..unknowns)
            .map(|i| {
                let mut v = vec![f.zero(); unknowns];
                v[i] = f.one();
                v
            })
            .collect()
    } else {
        let nrows = rows.len();
        Matrix::from_rows(nrows, unknowns, rows.concat()).kernel(f)
    };
    Ok(kernel
        .into_iter()
        .map(|vec| Morphism {
            maps: (0..n)
                .map(|v| {
                    Matrix::from_fn(y.dims[v], x.dims[v], |r, c| vec[var(v, r, c)].clone())
                })
                .collect(),
        })
        .collect())
}

pub fn hom_dim<F: Field>(x: &Representation<F>, y: &Representation<F>) -> Result<usize, RepError> {
    Ok(hom_space(x, y)?.len())
}

/// `End(X)` as a list of basis endomorphisms.
pub fn end_space<F: Field>(x: &Representation<F>) -> Result<Vec<Morphism<F::Elem>>, RepError> {
    hom_space(x, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::quiver::quiver_from_parts;

    fn square() -> Arc<GentleQuiver> {
        Arc::new(
            GentleQuiver::new(
                quiver_from_parts(
                    "sq",
                    &["1", "2", "3"],
                    &[("a", "1", "2"), ("b", "1", "2"), ("c", "2", "3"), ("d", "2", "3")],
                    &[("a", "c"), ("b", "d")],
                )
                .unwrap(),
            )
            .unwrap(),
        )
    }

    #[test]
    fn string_module_matrices() {
        let q = square();
        let f = Rationals;
        let w = Word::parse_string(&q, "c^-1 d a").unwrap();
        let m = Representation::string_module(q.clone(), f, &w).unwrap();
        assert_eq!(m.dims(), &[1, 2, 1]);
        let one = f.one();
        let zero = f.zero();
        assert_eq!(m.map(q.arrow("a").unwrap()).entries(), &[one.clone(), zero.clone()]);
        assert_eq!(m.map(q.arrow("c").unwrap()).entries(), &[zero.clone(), one.clone()]);
        assert_eq!(m.map(q.arrow("d").unwrap()).entries(), &[one.clone(), zero.clone()]);
        assert!(m.map(q.arrow("b").unwrap()).is_zero(&f));
        assert!(m.satisfies_relations());
    }

    #[test]
    fn band_module_blocks() {
        let q = square();
        let f = PrimeField::new(5).unwrap();
        let w = Word::parse(&q, "b^-1 c^-1 d a").unwrap();
        let m = Representation::band_module(q.clone(), f, &w, 2, 2).unwrap();
        assert_eq!(m.dims(), &[2, 4, 2]);
        assert!(m.satisfies_relations());
        // b maps x_0 into the x_3 block by J_2(2^-1) = J_2(3).
        let b = m.map(q.arrow("b").unwrap());
        assert_eq!(b.row(2), &[3, 0]);
        assert_eq!(b.row(3), &[1, 3]);
    }

    #[test]
    fn endomorphisms_of_a_band_are_local() {
        let q = square();
        let f = PrimeField::new(5).unwrap();
        let w = Word::parse(&q, "b^-1 c^-1 d a").unwrap();
        let m = Representation::band_module(q, f, &w, 3, 2).unwrap();
        // End(M(w, lambda, d)) is k[t]/t^d.
        assert_eq!(hom_dim(&m, &m).unwrap(), 2);
    }

    #[test]
    fn hom_space_elements_commute() {
        let q = square();
        let f = Rationals;
        let x = Representation::string_module(q.clone(), f, &Word::parse_string(&q, "d a").unwrap()).unwrap();
        let y = Representation::string_module(q.clone(), f, &Word::Lazy(1)).unwrap();
        let sum = Representation::direct_sum(&[x.clone(), y.clone()]).unwrap();
        for phi in hom_space(&sum, &sum).unwrap() {
            check_morphism(&sum, &sum, &phi).unwrap();
        }
        assert_eq!(sum.ledger().unwrap().len(), 2);
    }
}
