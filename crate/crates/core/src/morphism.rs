//! Plots as algebra morphisms between thickened Cartesian algebras.
//!
//! A morphism `C^∞(ℝ^k) ⊗ O(D) → C^∞(ℝ^j) ⊗ O(D')` is stored by the images
//! of its generators only; every other function is carried along by
//! truncated Taylor extension.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::expr::{Expr, Number, ZeroTest};
use crate::weil::monomial::{generator_index, generator_name};
use crate::weil::{taylor_extend_in, WeilAlgebra, WeilElement, WeilError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MorphismError {
    #[error(transparent)]
    Weil(#[from] WeilError),
    #[error("duplicate generator name `{0}`")]
    DuplicateName(String),
    #[error("`{0}` is reserved for nilpotent generators")]
    ReservedName(String),
    #[error("no image given for generator `{0}`")]
    MissingImage(String),
    #[error("image given for unknown generator `{0}`")]
    UnexpectedImage(String),
    #[error("variable `{0}` is not a generator")]
    UnknownVariable(String),
    #[error("relation `{relation}` is not preserved: it maps to {residue}")]
    RelationViolated { relation: String, residue: String },
    #[error("nilpotent generator `{generator}` maps to `{image}`, which has a nonzero scalar part")]
    NotNilpotent { generator: String, image: String },
    #[error("cannot compose: target {0} differs from source {1}")]
    SpecMismatch(String, String),
    #[error("the target is not ℝ")]
    NotScalarTarget,
    #[error("the target is not the dual numbers")]
    NotDualNumbers,
    #[error("tangent vectors have different base points")]
    BaseMismatch,
    #[error("expected {expected} components, found {found}")]
    Arity { expected: usize, found: usize },
}

/// `C^∞(ℝ^k) ⊗ O(D)`: named smooth coordinates and a Weil algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct ThickenedSpec {
    smooth: Vec<String>,
    weil: Arc<WeilAlgebra>,
}

impl ThickenedSpec {
    pub fn new<S: Into<String>>(smooth: impl IntoIterator<Item = S>, weil: Arc<WeilAlgebra>) -> Result<Self, MorphismError> {
        let smooth: Vec<String> = smooth.into_iter().map(Into::into).collect();
        let mut seen = BTreeSet::new();
        for s in &smooth {
            if generator_index(s).is_some() {
                return Err(MorphismError::ReservedName(s.clone()));
            }
            if !seen.insert(s.clone()) {
                return Err(MorphismError::DuplicateName(s.clone()));
            }
        }
        Ok(ThickenedSpec { smooth, weil })
    }

    /// `C^∞(ℝ^k)` without thickening.
    pub fn cartesian<S: Into<String>>(smooth: impl IntoIterator<Item = S>) -> Result<Self, MorphismError> {
        Self::new(smooth, WeilAlgebra::trivial())
    }

    /// A thickened point `O(D)`.
    pub fn infinitesimal(weil: Arc<WeilAlgebra>) -> Self {
        ThickenedSpec { smooth: Vec::new(), weil }
    }

    /// `ℝ`, the algebra of the point.
    pub fn point() -> Self {
        Self::infinitesimal(WeilAlgebra::trivial())
    }

    pub fn smooth(&self) -> &[String] {
        &self.smooth
    }

    pub fn weil(&self) -> &Arc<WeilAlgebra> {
        &self.weil
    }

    /// Smooth generators followed by `e1..em`.
    pub fn generator_names(&self) -> Vec<String> {
        let mut out = self.smooth.clone();
        out.extend((0..self.weil.generators()).map(generator_name));
        out
    }

    pub fn is_point(&self) -> bool {
        self.smooth.is_empty() && self.weil.dim() == 1
    }

    fn is_dual_numbers(&self) -> bool {
        *self.weil == *WeilAlgebra::dual_numbers()
    }

    /// Reads an element of this algebra from an expression in its generators.
    pub fn element(&self, e: &Expr) -> Result<WeilElement, MorphismError> {
        self.check_vars(e)?;
        Ok(WeilElement::from_expr(&self.weil, e)?)
    }

    fn check_vars(&self, e: &Expr) -> Result<(), MorphismError> {
        let names = self.generator_names();
        match e.free_vars().into_iter().find(|v| !names.contains(v)) {
            Some(v) => Err(MorphismError::UnknownVariable(v)),
            None => Ok(()),
        }
    }
}

impl fmt::Display for ThickenedSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.smooth.is_empty(), self.weil.generators() == 0) {
            (true, true) => f.write_str("R"),
            (true, false) => write!(f, "O({})", self.weil),
            (false, true) => write!(f, "C^inf({})", self.smooth.join(",")),
            (false, false) => write!(f, "C^inf({}) x O({})", self.smooth.join(","), self.weil),
        }
    }
}

/// An algebra morphism given by the images of the source generators.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraMorphism {
    source: ThickenedSpec,
    target: ThickenedSpec,
    /// Smooth generators first, then `e1..em`, as in [`ThickenedSpec::generator_names`].
    images: Vec<WeilElement>,
}

impl AlgebraMorphism {
    /// Builds and validates a morphism from generator images.
    pub fn new(
        source: ThickenedSpec,
        target: ThickenedSpec,
        images: &BTreeMap<String, WeilElement>,
    ) -> Result<AlgebraMorphism, MorphismError> {
        let names = source.generator_names();
        if let Some(extra) = images.keys().find(|k| !names.contains(k)) {
            return Err(MorphismError::UnexpectedImage(extra.clone()));
        }
        let mut ordered = Vec::with_capacity(names.len());
        for name in &names {
            let img = images.get(name).ok_or_else(|| MorphismError::MissingImage(name.clone()))?;
            if img.algebra() != target.weil() {
                return Err(WeilError::AlgebraMismatch(target.weil().spec_string(), img.algebra().spec_string()).into());
            }
            for c in img.coeff_exprs() {
                target.check_vars(&c)?;
            }
            ordered.push(img.clone());
        }
        let phi = AlgebraMorphism { source, target, images: ordered };
        phi.validate()?;
        Ok(phi)
    }

    /// As [`AlgebraMorphism::new`], with images written as expressions in the
    /// target generators.
    pub fn from_exprs(
        source: ThickenedSpec,
        target: ThickenedSpec,
        images: &BTreeMap<String, Expr>,
    ) -> Result<AlgebraMorphism, MorphismError> {
        let mut els = BTreeMap::new();
        for (k, e) in images {
            els.insert(k.clone(), target.element(e)?);
        }
        AlgebraMorphism::new(source, target, &els)
    }

    /// The identity of `spec`.
    pub fn identity(spec: &ThickenedSpec) -> AlgebraMorphism {
        let images = spec
            .generator_names()
            .iter()
            .map(|n| spec.element(&Expr::var(n.clone())).expect("generators are elements"))
            .collect();
        AlgebraMorphism { source: spec.clone(), target: spec.clone(), images }
    }

    /// The pullback `f^*: C^∞(ℝ^m) → C^∞(ℝ^n)` of a smooth map `f: ℝ^n → ℝ^m`
    /// with components `f` written in the `domain` coordinates.
    pub fn pullback<S: AsRef<str>>(domain: &[S], codomain: &[S], f: &[Expr]) -> Result<AlgebraMorphism, MorphismError> {
        if f.len() != codomain.len() {
            return Err(MorphismError::Arity { expected: codomain.len(), found: f.len() });
        }
        let source = ThickenedSpec::cartesian(codomain.iter().map(|s| s.as_ref().to_string()))?;
        let target = ThickenedSpec::cartesian(domain.iter().map(|s| s.as_ref().to_string()))?;
        let images = codomain.iter().map(|s| s.as_ref().to_string()).zip(f.iter().cloned()).collect();
        AlgebraMorphism::from_exprs(source, target, &images)
    }

    /// The evaluation morphism `C^∞(ℝ^k) → ℝ` at `point`.
    pub fn evaluation<S: AsRef<str>>(coords: &[S], point: &[Expr]) -> Result<AlgebraMorphism, MorphismError> {
        if coords.len() != point.len() {
            return Err(MorphismError::Arity { expected: coords.len(), found: point.len() });
        }
        let source = ThickenedSpec::cartesian(coords.iter().map(|s| s.as_ref().to_string()))?;
        let images = coords.iter().map(|s| s.as_ref().to_string()).zip(point.iter().cloned()).collect();
        AlgebraMorphism::from_exprs(source, ThickenedSpec::point(), &images)
    }

    pub fn source(&self) -> &ThickenedSpec {
        &self.source
    }

    pub fn target(&self) -> &ThickenedSpec {
        &self.target
    }

    pub fn image(&self, generator: &str) -> Option<&WeilElement> {
        let k = self.source.generator_names().iter().position(|n| n == generator)?;
        Some(&self.images[k])
    }

    pub fn images(&self) -> BTreeMap<String, WeilElement> {
        self.source.generator_names().into_iter().zip(self.images.iter().cloned()).collect()
    }

    /// Checks that nilpotent generators go to nilpotent elements and that
    /// every defining relation of the source maps to zero.
    pub fn validate(&self) -> Result<(), MorphismError> {
        let zero = ZeroTest::default();
        let k = self.source.smooth.len();
        let nil = &self.images[k..];
        for (i, img) in nil.iter().enumerate() {
            if !zero.is_zero(&img.scalar_part()) {
                return Err(MorphismError::NotNilpotent { generator: generator_name(i), image: img.to_string() });
            }
        }
        let tw = self.target.weil();
        for rel in self.source.weil.ideal_generators() {
            let mut acc = WeilElement::zero(tw);
            for (mono, c) in &rel.terms {
                let mut term = WeilElement::from_rational(tw, c.clone());
                for (i, &e) in mono.0.iter().enumerate() {
                    if e > 0 {
                        term = term.mul(&nil[i].powi(e)?)?;
                    }
                }
                acc = acc.add(&term)?;
            }
            if !acc.coeff_exprs().iter().all(|c| zero.is_zero(c)) {
                return Err(MorphismError::RelationViolated { relation: rel.to_string(), residue: acc.to_string() });
            }
        }
        Ok(())
    }

    /// Extends the morphism to an arbitrary function of the source generators.
    pub fn apply(&self, f: &Expr) -> Result<WeilElement, MorphismError> {
        self.source.check_vars(f)?;
        let names = self.source.generator_names();
        Ok(taylor_extend_in(self.target.weil(), f, &names, &self.images)?)
    }

    /// `self ∘ inner`: first `inner`, then `self`.
    pub fn compose(&self, inner: &AlgebraMorphism) -> Result<AlgebraMorphism, MorphismError> {
        if inner.target != self.source {
            return Err(MorphismError::SpecMismatch(inner.target.to_string(), self.source.to_string()));
        }
        let mut images = BTreeMap::new();
        for (name, img) in inner.source.generator_names().into_iter().zip(&inner.images) {
            images.insert(name, self.apply(&img.to_expr())?);
        }
        AlgebraMorphism::new(inner.source.clone(), self.target.clone(), &images)
    }

    /// The point of `ℝ^k` that a morphism `C^∞(ℝ^k) → ℝ` evaluates at.
    pub fn milnor_point(&self) -> Result<Vec<Number>, MorphismError> {
        if !self.target.is_point() || self.source.weil.generators() != 0 {
            return Err(MorphismError::NotScalarTarget);
        }
        self.images
            .iter()
            .map(|img| img.scalar_part().as_number().ok_or(MorphismError::NotScalarTarget))
            .collect()
    }

    /// Splits a morphism into the dual numbers as `p(f) + ε·X_p(f)`.
    pub fn tangent_decompose(&self) -> Result<TangentVector, MorphismError> {
        if !self.target.is_dual_numbers() {
            return Err(MorphismError::NotDualNumbers);
        }
        let k = self.source.smooth.len();
        let base = self.images[..k].iter().map(|i| i.coeff_expr(0)).collect();
        let components = self.images[..k].iter().map(|i| i.coeff_expr(1)).collect();
        Ok(TangentVector { base, components })
    }

    /// Rescales a tangent vector by precomposing with `ε ↦ t·ε`.
    pub fn tangent_scale(&self, t: &Expr) -> Result<AlgebraMorphism, MorphismError> {
        if !self.target.is_dual_numbers() {
            return Err(MorphismError::NotDualNumbers);
        }
        let target = &self.target;
        let mut images = BTreeMap::new();
        for s in target.smooth() {
            images.insert(s.clone(), Expr::var(s.clone()));
        }
        images.insert(generator_name(0), Expr::mul([t.clone(), Expr::var(generator_name(0))]));
        let scale = AlgebraMorphism::from_exprs(target.clone(), target.clone(), &images)?;
        scale.compose(self)
    }

    /// Sum of two tangent vectors at the same base point: the pair defines a
    /// morphism into `D(2,1)`, restricted along the diagonal `ε1, ε2 ↦ ε`.
    pub fn tangent_add(&self, other: &AlgebraMorphism) -> Result<AlgebraMorphism, MorphismError> {
        if !self.target.is_dual_numbers() || !other.target.is_dual_numbers() {
            return Err(MorphismError::NotDualNumbers);
        }
        if self.source != other.source || self.target != other.target {
            return Err(MorphismError::SpecMismatch(self.source.to_string(), other.source.to_string()));
        }
        let zero = ZeroTest::default();
        let k = self.source.smooth.len();
        for (a, b) in self.images[..k].iter().zip(&other.images[..k]) {
            if !zero.is_zero(&(a.scalar_part() - b.scalar_part())) {
                return Err(MorphismError::BaseMismatch);
            }
        }
        let plane = ThickenedSpec::new(self.target.smooth.clone(), WeilAlgebra::disk(2, 1)?)?;
        let (e1, e2) = (Expr::var(generator_name(0)), Expr::var(generator_name(1)));
        let mut images = BTreeMap::new();
        for (name, (a, b)) in self.source.generator_names().into_iter().zip(self.images.iter().zip(&other.images)) {
            let img = Expr::add([a.coeff_expr(0), a.coeff_expr(1) * e1.clone(), b.coeff_expr(1) * e2.clone()]);
            images.insert(name, img);
        }
        let joint = AlgebraMorphism::from_exprs(self.source.clone(), plane.clone(), &images)?;
        let mut diag = BTreeMap::new();
        for s in plane.smooth() {
            diag.insert(s.clone(), Expr::var(s.clone()));
        }
        diag.insert(generator_name(0), Expr::var(generator_name(0)));
        diag.insert(generator_name(1), Expr::var(generator_name(0)));
        let diagonal = AlgebraMorphism::from_exprs(plane, self.target.clone(), &diag)?;
        diagonal.compose(&joint)
    }
}

impl fmt::Display for AlgebraMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}:", self.source, self.target)?;
        for (name, img) in self.source.generator_names().iter().zip(&self.images) {
            write!(f, " {name} |-> {img};")?;
        }
        Ok(())
    }
}

/// Applies the Weil-bundle functor of `f: ℝ^n → ℝ^m` to a `D`-point
/// `φ: C^∞(ℝ^n) → target`, giving `φ ∘ f^*`.
pub fn weil_bundle_map<S: AsRef<str>>(
    f: &[Expr],
    domain: &[S],
    codomain: &[S],
    phi: &AlgebraMorphism,
) -> Result<AlgebraMorphism, MorphismError> {
    let pull = AlgebraMorphism::pullback(domain, codomain, f)?;
    phi.compose(&pull)
}

/// A tangent vector `(p, X)`: base point and components.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TangentVector {
    pub base: Vec<Expr>,
    pub components: Vec<Expr>,
}

impl TangentVector {
    /// The morphism `x_i ↦ p_i + X_i·ε` from `C^∞(ℝ^k)` into the dual numbers,
    /// tensored with the smooth coordinates the data depends on.
    pub fn to_morphism<S: AsRef<str>>(&self, coords: &[S], params: &[S]) -> Result<AlgebraMorphism, MorphismError> {
        if coords.len() != self.base.len() || coords.len() != self.components.len() {
            return Err(MorphismError::Arity { expected: coords.len(), found: self.base.len() });
        }
        let source = ThickenedSpec::cartesian(coords.iter().map(|s| s.as_ref().to_string()))?;
        let target = ThickenedSpec::new(params.iter().map(|s| s.as_ref().to_string()), WeilAlgebra::dual_numbers())?;
        let eps = Expr::var(generator_name(0));
        let images = coords
            .iter()
            .zip(self.base.iter().zip(&self.components))
            .map(|(c, (p, x))| (c.as_ref().to_string(), p.clone() + x.clone() * eps.clone()))
            .collect();
        AlgebraMorphism::from_exprs(source, target, &images)
    }
}

impl fmt::Display for TangentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: &[Expr]| v.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(", ");
        write!(f, "({}; {})", show(&self.base), show(&self.components))
    }
}

/// `(φ(t0, ·), ∂_t φ(t0, ·))` for a path with parameter `t`.
pub fn path_restrict(path: &[Expr], t: &str, t0: &Expr) -> TangentVector {
    TangentVector {
        base: path.iter().map(|p| p.subs_var(t, t0)).collect(),
        components: path.iter().map(|p| p.differentiate(t).subs_var(t, t0)).collect(),
    }
}

/// The plot `t ↦ t0 + ε` of a path: a morphism from `C^∞(ℝ^k)` (coordinates
/// `names`) into the dual numbers over the path's remaining variables.
pub fn path_plot<S: AsRef<str>>(names: &[S], path: &[Expr], t: &str, t0: &Expr) -> Result<AlgebraMorphism, MorphismError> {
    if names.len() != path.len() {
        return Err(MorphismError::Arity { expected: names.len(), found: path.len() });
    }
    let params: Vec<String> = path.iter().flat_map(|p| p.free_vars()).filter(|v| v != t).collect::<BTreeSet<_>>().into_iter().collect();
    let target = ThickenedSpec::new(params, WeilAlgebra::dual_numbers())?;
    let shifted = target.element(&(t0.clone() + Expr::var(generator_name(0))))?;
    let mut images = BTreeMap::new();
    for (name, p) in names.iter().zip(path) {
        let img = taylor_extend_in(target.weil(), p, &[t], std::slice::from_ref(&shifted))?;
        images.insert(name.as_ref().to_string(), img);
    }
    let source = ThickenedSpec::cartesian(names.iter().map(|s| s.as_ref().to_string()))?;
    AlgebraMorphism::new(source, target, &images)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecRepr {
    smooth: Vec<String>,
    weil: WeilAlgebra,
}

impl Serialize for ThickenedSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SpecRepr { smooth: self.smooth.clone(), weil: (*self.weil).clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ThickenedSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = SpecRepr::deserialize(d)?;
        ThickenedSpec::new(repr.smooth, Arc::new(repr.weil)).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MorphismRepr {
    source: ThickenedSpec,
    target: ThickenedSpec,
    images: BTreeMap<String, Vec<Expr>>,
}

/// `{"source", "target", "images": {generator: [coefficient, ...]}}`, the
/// coefficients listed over the target algebra's basis.
impl Serialize for AlgebraMorphism {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MorphismRepr {
            source: self.source.clone(),
            target: self.target.clone(),
            images: self.images().into_iter().map(|(k, v)| (k, v.coeff_exprs())).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for AlgebraMorphism {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = MorphismRepr::deserialize(d)?;
        let weil = repr.target.weil().clone();
        let mut images = BTreeMap::new();
        for (k, coeffs) in repr.images {
            let el = WeilElement::from_coeffs(weil.clone(), crate::weil::Coeffs::Symbolic(coeffs)).map_err(D::Error::custom)?;
            images.insert(k, el.demote());
        }
        AlgebraMorphism::new(repr.source, repr.target, &images).map_err(D::Error::custom)
    }
}

/// Coefficientwise sum of tangent components; the reference for `tangent_add`.
pub fn add_components(a: &TangentVector, b: &TangentVector) -> Vec<Expr> {
    a.components.iter().zip(&b.components).map(|(x, y)| x.clone() + y.clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn map(pairs: &[(&str, &str)]) -> BTreeMap<String, Expr> {
        pairs.iter().map(|(k, v)| (k.to_string(), parse(v).unwrap())).collect()
    }

    fn disk(m: usize, l: u32) -> ThickenedSpec {
        ThickenedSpec::infinitesimal(WeilAlgebra::disk(m, l).unwrap())
    }

    #[test]
    fn squaring_the_generator_is_valid() {
        let phi = AlgebraMorphism::from_exprs(disk(1, 1), disk(1, 2), &map(&[("e1", "e1^2")]));
        assert!(phi.is_ok());
        let bad = AlgebraMorphism::from_exprs(disk(1, 2), disk(1, 3), &map(&[("e1", "e1")]));
        assert!(matches!(bad, Err(MorphismError::RelationViolated { .. })));
    }

    #[test]
    fn nonzero_scalar_part_rejected() {
        let r = AlgebraMorphism::from_exprs(disk(1, 1), disk(1, 1), &map(&[("e1", "1 + e1")]));
        assert!(matches!(r, Err(MorphismError::NotNilpotent { .. })));
    }

    #[test]
    fn apply_on_dual_numbers() {
        let src = ThickenedSpec::cartesian(["x"]).unwrap();
        let phi = AlgebraMorphism::from_exprs(src.clone(), disk(1, 1), &map(&[("x", "3 + e1")])).unwrap();
        assert_eq!(phi.apply(&parse("x^2").unwrap()).unwrap().to_string(), "9 + 6*e1");

        let tgt = ThickenedSpec::new(["x"], WeilAlgebra::dual_numbers()).unwrap();
        let psi = AlgebraMorphism::from_exprs(src, tgt, &map(&[("x", "x + e1")])).unwrap();
        assert_eq!(psi.apply(&parse("sin(x)").unwrap()).unwrap().to_string(), "sin(x) + cos(x)*e1");
    }

    #[test]
    fn collapse_to_scalar_part() {
        let src = ThickenedSpec::new(["a", "b"], WeilAlgebra::dual_numbers()).unwrap();
        let tgt = ThickenedSpec::cartesian(["a", "b"]).unwrap();
        let phi = AlgebraMorphism::from_exprs(src, tgt, &map(&[("a", "a"), ("b", "b"), ("e1", "0")])).unwrap();
        assert_eq!(phi.apply(&parse("a + b*e1").unwrap()).unwrap().to_string(), "a");
    }

    #[test]
    fn composition() {
        let sq = AlgebraMorphism::from_exprs(disk(1, 1), disk(1, 2), &map(&[("e1", "e1^2")])).unwrap();
        let id1 = AlgebraMorphism::identity(&disk(1, 1));
        let id2 = AlgebraMorphism::identity(&disk(1, 2));
        assert_eq!(sq.compose(&id1).unwrap(), sq);
        assert_eq!(id2.compose(&sq).unwrap(), sq);
        assert!(matches!(id1.compose(&sq), Err(MorphismError::SpecMismatch(..))));
    }

    #[test]
    fn milnor_round_trip() {
        let ev = AlgebraMorphism::evaluation(&["x", "y"], &[Expr::int(2), Expr::int(-1)]).unwrap();
        assert_eq!(ev.milnor_point().unwrap(), vec![Number::int(2), Number::int(-1)]);
    }

    #[test]
    fn tangent_operations() {
        let src = ThickenedSpec::cartesian(["x"]).unwrap();
        let v = AlgebraMorphism::from_exprs(src.clone(), disk(1, 1), &map(&[("x", "3 + e1")])).unwrap();
        let w = AlgebraMorphism::from_exprs(src.clone(), disk(1, 1), &map(&[("x", "3 + 4*e1")])).unwrap();
        let t = v.tangent_decompose().unwrap();
        assert_eq!(t.base, vec![Expr::int(3)]);
        assert_eq!(t.components, vec![Expr::int(1)]);
        assert_eq!(v.tangent_scale(&Expr::int(2)).unwrap().tangent_decompose().unwrap().components, vec![Expr::int(2)]);
        assert_eq!(v.tangent_scale(&Expr::zero()).unwrap().tangent_decompose().unwrap().components, vec![Expr::zero()]);
        assert_eq!(v.tangent_add(&w).unwrap().tangent_decompose().unwrap().components, vec![Expr::int(5)]);
        let u = AlgebraMorphism::from_exprs(src, disk(1, 1), &map(&[("x", "2 + e1")])).unwrap();
        assert_eq!(v.tangent_add(&u).unwrap_err(), MorphismError::BaseMismatch);
    }

    #[test]
    fn classical_pushforward() {
        let src = ThickenedSpec::cartesian(["x"]).unwrap();
        let v = AlgebraMorphism::from_exprs(src, disk(1, 1), &map(&[("x", "3 + 5*e1")])).unwrap();
        let pushed = weil_bundle_map(&[parse("x^2").unwrap()], &["x"], &["y"], &v).unwrap();
        assert_eq!(pushed.image("y").unwrap().to_string(), "9 + 30*e1");
    }

    #[test]
    fn path_restriction_matches_dual_substitution() {
        let path = [parse("sin(x - t)").unwrap()];
        let tv = path_restrict(&path, "t", &Expr::zero());
        assert_eq!(tv.base[0].to_string(), "sin(x)");
        assert_eq!(tv.components[0].to_string(), "-cos(x)");
        let plot = path_plot(&["u"], &path, "t", &Expr::zero()).unwrap();
        assert_eq!(plot.tangent_decompose().unwrap(), tv);
    }

    #[test]
    fn json_round_trip() {
        let src = ThickenedSpec::cartesian(["x"]).unwrap();
        let tgt = ThickenedSpec::new(["x"], WeilAlgebra::disk(1, 2).unwrap()).unwrap();
        let phi = AlgebraMorphism::from_exprs(src, tgt, &map(&[("x", "x + e1 - 1/2*e1^2")])).unwrap();
        let back: AlgebraMorphism = crate::json::from_json_str(&serde_json::to_string(&phi).unwrap()).unwrap();
        assert_eq!(back, phi);
    }
}
