use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::algebra::WeilAlgebra;
use super::kaehler::{KaehlerForm, KaehlerModule};
use super::linalg::{rank, rref, Rref};
use super::monomial::{monomials_up_to, Monomial};
use super::WeilError;

/// The part of the function algebra of the tangent bundle `T D^m(l)` that is
/// linear in the fibre coordinates `y1..ym`.
///
/// Spanned by `μ·y_i` with `deg μ <= l`, modulo the δ-linear parts of
/// `(ε_{i1} + δ y_{i1}) ⋯ (ε_{i(l+1)} + δ y_{i(l+1)})` over all index tuples.
#[derive(Clone, Debug)]
pub struct TangentSlice {
    m: usize,
    l: u32,
    candidates: Vec<(Monomial, usize)>,
    index: BTreeMap<(Monomial, usize), usize>,
    reduced: Rref,
    basis: Vec<(Monomial, usize)>,
}

/// An element of a [`TangentSlice`] as coordinates over its candidates.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentFunction {
    pub coeffs: Vec<BigRational>,
}

impl TangentSlice {
    pub fn new(disk: &WeilAlgebra) -> Result<TangentSlice, WeilError> {
        if !disk.is_disk() || disk.generators() == 0 {
            return Err(WeilError::Unsupported("tangent slices exist only for plain disks D(m,l)".into()));
        }
        let (m, l) = (disk.generators(), disk.order());
        let candidates: Vec<(Monomial, usize)> = monomials_up_to(m, l)
            .into_iter()
            .flat_map(|mu| (0..m).map(move |i| (mu.clone(), i)))
            .collect();
        let n = candidates.len();
        let index: BTreeMap<(Monomial, usize), usize> =
            candidates.iter().enumerate().map(|(k, c)| (c.clone(), n - 1 - k)).collect();

        let mut rows = Vec::new();
        let mut tuple = vec![0usize; l as usize + 1];
        loop {
            let mut row = vec![BigRational::zero(); n];
            for k in 0..tuple.len() {
                let mut exps = vec![0u32; m];
                for (j, &g) in tuple.iter().enumerate() {
                    if j != k {
                        exps[g] += 1;
                    }
                }
                row[index[&(Monomial(exps), tuple[k])]] += BigRational::one();
            }
            rows.push(row);
            if !next_tuple(&mut tuple, m) {
                break;
            }
        }
        let reduced = rref(rows, n);
        let basis = candidates.iter().filter(|c| !reduced.is_pivot(index[*c])).cloned().collect();
        Ok(TangentSlice { m, l, candidates, index, reduced, basis })
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[(Monomial, usize)] {
        &self.basis
    }

    pub fn candidates(&self) -> &[(Monomial, usize)] {
        &self.candidates
    }

    pub fn generators(&self) -> usize {
        self.m
    }

    pub fn order(&self) -> u32 {
        self.l
    }

    /// The function `μ·y_i`, unreduced.
    pub fn function(&self, mu: &Monomial, i: usize) -> Option<TangentFunction> {
        let col = *self.index.get(&(mu.clone(), i))?;
        let mut coeffs = vec![BigRational::zero(); self.candidates.len()];
        coeffs[self.candidates.len() - 1 - col] = BigRational::one();
        Some(TangentFunction { coeffs })
    }

    pub fn reduce(&self, f: &TangentFunction) -> TangentFunction {
        let n = self.candidates.len();
        let mut v: Vec<BigRational> = (0..n).map(|c| f.coeffs[n - 1 - c].clone()).collect();
        self.reduced.reduce(&mut v);
        TangentFunction { coeffs: (0..n).map(|k| v[n - 1 - k].clone()).collect() }
    }

    pub fn is_zero(&self, f: &TangentFunction) -> bool {
        self.reduce(f).coeffs.iter().all(Zero::is_zero)
    }

    /// Rank of a family of functions modulo the slice relations.
    pub fn rank_of(&self, fs: &[TangentFunction]) -> usize {
        let rows: Vec<Vec<BigRational>> = fs.iter().map(|f| self.reduce(f).coeffs).collect();
        rank(rows, self.candidates.len())
    }

    pub fn display(&self, f: &TangentFunction) -> String {
        let terms: Vec<String> = self
            .candidates
            .iter()
            .zip(&f.coeffs)
            .filter(|(_, c)| !c.is_zero())
            .map(|((mu, i), c)| {
                let y = format!("y{}", i + 1);
                let body = if mu.is_one() { y } else { format!("{mu}*{y}") };
                if c.is_one() {
                    body
                } else {
                    format!("{c}*{body}")
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

fn next_tuple(t: &mut [usize], m: usize) -> bool {
    for slot in t.iter_mut().rev() {
        *slot += 1;
        if *slot < m {
            return true;
        }
        *slot = 0;
    }
    false
}

impl fmt::Display for TangentSlice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shown: Vec<String> = self
            .basis
            .iter()
            .map(|(mu, i)| if mu.is_one() { format!("y{}", i + 1) } else { format!("{mu}*y{}", i + 1) })
            .collect();
        write!(f, "T(D({},{}))_lin = span{{{}}}", self.m, self.l, shown.join(", "))
    }
}

/// Sends `f_i·dε_i` to `f_i·y_i` and reduces in the slice.
pub fn form_to_tangent_function(
    module: &KaehlerModule,
    slice: &TangentSlice,
    form: &KaehlerForm,
) -> Result<TangentFunction, WeilError> {
    let alg = module.algebra();
    if alg.generators() != slice.generators() || alg.order() != slice.order() || !alg.is_disk() {
        return Err(WeilError::AlgebraMismatch(alg.spec_string(), format!("D({},{})", slice.generators(), slice.order())));
    }
    let mut coeffs = vec![BigRational::zero(); slice.candidates().len()];
    for ((mu, i), c) in module.free_basis().iter().zip(&form.coeffs) {
        if c.is_zero() {
            continue;
        }
        let f = slice.function(mu, *i).expect("disk basis monomials are slice candidates");
        for (x, y) in coeffs.iter_mut().zip(f.coeffs) {
            *x += c * y;
        }
    }
    Ok(slice.reduce(&TangentFunction { coeffs }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(m: usize, l: u32) -> (KaehlerModule, TangentSlice) {
        let d = WeilAlgebra::disk(m, l).unwrap();
        (KaehlerModule::new(&d), TangentSlice::new(&d).unwrap())
    }

    #[test]
    fn dual_numbers_slice() {
        let s = TangentSlice::new(&WeilAlgebra::dual_numbers()).unwrap();
        assert_eq!(s.dimension(), 1);
        assert_eq!(s.display(&TangentFunction { coeffs: s.reduce(&s.function(&Monomial(vec![0]), 0).unwrap()).coeffs }), "y1");
    }

    #[test]
    fn second_order_line_slice() {
        let s = TangentSlice::new(&WeilAlgebra::disk(1, 2).unwrap()).unwrap();
        let shown: Vec<String> = s.basis().iter().map(|(mu, _)| mu.to_string()).collect();
        assert_eq!(shown, ["1", "e1"]);
    }

    #[test]
    fn quotients_unsupported() {
        let q = WeilAlgebra::parse_spec("D(2,2);rel=e1*e2").unwrap();
        assert!(matches!(TangentSlice::new(&q), Err(WeilError::Unsupported(_))));
    }

    #[test]
    fn dimensions_agree_with_kaehler_forms() {
        for m in 1..=3 {
            for l in 0..=3 {
                let (k, s) = pair(m, l);
                assert_eq!(k.dimension(), s.dimension(), "D({m},{l})");
            }
        }
    }

    #[test]
    fn killed_form_maps_to_zero() {
        let (k, s) = pair(1, 1);
        let w = k.form(&Monomial(vec![1]), 0).unwrap();
        assert!(s.is_zero(&form_to_tangent_function(&k, &s, &w).unwrap()));
        let images: Vec<TangentFunction> = k
            .basis()
            .iter()
            .map(|(mu, i)| form_to_tangent_function(&k, &s, &k.form(mu, *i).unwrap()).unwrap())
            .collect();
        assert_eq!(s.rank_of(&images), k.dimension());
    }
}
