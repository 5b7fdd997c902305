//! Context-aware feature models, products, context assignments, and the
//! polynomial valid-product check. A plain feature model is the special
//! case with an empty context set.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{Assignment, Formula, VarName};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("`{0}` is declared both as a context and as a feature")]
    ContextFeatureOverlap(VarName),
    #[error("formula variable `{0}` is neither a context nor a feature")]
    UndeclaredVariable(VarName),
    #[error("optional-marked `{0}` is not a declared feature")]
    OptionalNotFeature(VarName),
    #[error("context assignment mentions `{0}`, which is not a context of the model")]
    StrayContext(VarName),
    #[error("product selects `{0}`, which is not a feature of the model")]
    StrayFeature(VarName),
}

/// A context-aware feature model: contexts, features, the subset of
/// features the modeler marked optional, and the constraint formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaFM {
    contexts: BTreeSet<VarName>,
    features: BTreeSet<VarName>,
    optional: BTreeSet<VarName>,
    formula: Formula,
}

impl CaFM {
    pub fn new(
        contexts: BTreeSet<VarName>,
        features: BTreeSet<VarName>,
        optional: BTreeSet<VarName>,
        formula: Formula,
    ) -> Result<CaFM, ModelError> {
        if let Some(v) = contexts.intersection(&features).next() {
            return Err(ModelError::ContextFeatureOverlap(v.clone()));
        }
        for v in formula.vars() {
            if !contexts.contains(&v) && !features.contains(&v) {
                return Err(ModelError::UndeclaredVariable(v));
            }
        }
        if let Some(v) = optional.difference(&features).next() {
            return Err(ModelError::OptionalNotFeature(v.clone()));
        }
        Ok(CaFM { contexts, features, optional, formula })
    }

    pub fn contexts(&self) -> &BTreeSet<VarName> {
        &self.contexts
    }

    pub fn features(&self) -> &BTreeSet<VarName> {
        &self.features
    }

    pub fn optional(&self) -> &BTreeSet<VarName> {
        &self.optional
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    pub fn validate_context(&self, d: &ContextAssignment) -> Result<(), ModelError> {
        match d.truthy.difference(&self.contexts).next() {
            Some(v) => Err(ModelError::StrayContext(v.clone())),
            None => Ok(()),
        }
    }

    pub fn validate_product_shape(&self, p: &Product) -> Result<(), ModelError> {
        match p.selected.difference(&self.features).next() {
            Some(v) => Err(ModelError::StrayFeature(v.clone())),
            None => Ok(()),
        }
    }

    /// The total assignment induced by a context assignment and a product:
    /// listed variables true, all other declared variables false.
    pub fn induced_assignment(&self, d: &ContextAssignment, p: &Product) -> Assignment {
        self.contexts
            .iter()
            .map(|c| (c.clone(), d.truthy.contains(c)))
            .chain(self.features.iter().map(|f| (f.clone(), p.selected.contains(f))))
            .collect()
    }
}

/// The contexts externally set to true; all others are false.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ContextAssignment {
    pub truthy: BTreeSet<VarName>,
}

impl ContextAssignment {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn of(names: impl IntoIterator<Item = VarName>) -> Self {
        ContextAssignment { truthy: names.into_iter().collect() }
    }
}

/// The features selected in a configuration.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Product {
    pub selected: BTreeSet<VarName>,
}

impl Product {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn of(names: impl IntoIterator<Item = VarName>) -> Self {
        Product { selected: names.into_iter().collect() }
    }
}

/// Whether product `p` is valid in context `d`: the assignment setting
/// exactly the members of `d` and `p` true satisfies the model formula.
/// Linear in the size of the formula.
pub fn validate_product(m: &CaFM, d: &ContextAssignment, p: &Product) -> Result<bool, ModelError> {
    m.validate_context(d)?;
    m.validate_product_shape(p)?;
    let a = m.induced_assignment(d, p);
    Ok(m.formula.evaluate(&a).expect("assignment is total over the formula"))
}

/// The model formula with every context variable fixed by `d` and constants
/// folded; the result mentions only features (or is a constant).
///
/// `d` must satisfy [`CaFM::validate_context`].
pub fn ground(m: &CaFM, d: &ContextAssignment) -> Formula {
    debug_assert!(m.validate_context(d).is_ok());
    let ctx: Assignment = m
        .contexts
        .iter()
        .map(|c| (c.clone(), d.truthy.contains(c)))
        .collect();
    m.formula.substitute(&ctx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn name(s: &str) -> VarName {
        VarName::new(s).unwrap()
    }

    fn names(items: &[&str]) -> BTreeSet<VarName> {
        items.iter().map(|s| name(s)).collect()
    }

    /// The eCall emergency-call model (no contexts).
    pub fn ecall_fm() -> CaFM {
        let formula = Formula::parse(
            "eCall & (eCall -> eCallEurope | eCallRussia) & (eCall -> GPS | GLONASS) \
             & !(GPS & GLONASS) & (eCallEurope -> eCall) & (eCallRussia -> eCall) \
             & (GPS -> eCall) & (GLONASS -> eCall) & (eCallEurope -> GPS) \
             & (eCallRussia -> GLONASS)",
        )
        .unwrap();
        CaFM::new(
            BTreeSet::new(),
            names(&["eCall", "eCallEurope", "GPS", "eCallRussia", "GLONASS"]),
            BTreeSet::new(),
            formula,
        )
        .unwrap()
    }

    /// The eCall model extended with the Location context.
    pub fn ecall_cafm() -> CaFM {
        let base = ecall_fm();
        let formula = Formula::and(
            Formula::and(
                base.formula().clone(),
                Formula::parse("Location -> eCallRussia").unwrap(),
            ),
            Formula::parse("!Location -> !eCallRussia").unwrap(),
        );
        CaFM::new(
            names(&["Location"]),
            base.features().clone(),
            BTreeSet::new(),
            formula,
        )
        .unwrap()
    }

    #[test]
    fn cafm_invariants_enforced() {
        let err = CaFM::new(
            names(&["x"]),
            names(&["x"]),
            BTreeSet::new(),
            Formula::var("x"),
        )
        .unwrap_err();
        assert_eq!(err, ModelError::ContextFeatureOverlap(name("x")));

        let err = CaFM::new(BTreeSet::new(), names(&["a"]), BTreeSet::new(), Formula::var("b"))
            .unwrap_err();
        assert_eq!(err, ModelError::UndeclaredVariable(name("b")));

        let err = CaFM::new(
            BTreeSet::new(),
            names(&["a"]),
            names(&["b"]),
            Formula::var("a"),
        )
        .unwrap_err();
        assert_eq!(err, ModelError::OptionalNotFeature(name("b")));
    }

    #[test]
    fn ecall_valid_product_in_russia() {
        let m = ecall_cafm();
        let d = ContextAssignment::of([name("Location")]);
        let p = Product::of([name("eCall"), name("eCallRussia"), name("GLONASS")]);
        assert_eq!(validate_product(&m, &d, &p), Ok(true));
    }

    #[test]
    fn ecall_russia_product_invalid_outside_russia() {
        let m = ecall_cafm();
        let d = ContextAssignment::empty();
        let p = Product::of([name("eCall"), name("eCallRussia"), name("GLONASS")]);
        assert_eq!(validate_product(&m, &d, &p), Ok(false));
    }

    #[test]
    fn ecall_empty_product_invalid() {
        let m = ecall_cafm();
        assert_eq!(
            validate_product(&m, &ContextAssignment::empty(), &Product::empty()),
            Ok(false)
        );
    }

    #[test]
    fn stray_variables_are_named() {
        let m = ecall_cafm();
        let err = validate_product(
            &m,
            &ContextAssignment::of([name("Weather")]),
            &Product::empty(),
        )
        .unwrap_err();
        assert_eq!(err, ModelError::StrayContext(name("Weather")));

        let err = validate_product(
            &m,
            &ContextAssignment::empty(),
            &Product::of([name("Location")]),
        )
        .unwrap_err();
        assert_eq!(err, ModelError::StrayFeature(name("Location")));
    }

    #[test]
    fn ground_forces_ecall_russia() {
        let m = ecall_cafm();
        let g = ground(&m, &ContextAssignment::of([name("Location")]));
        assert!(!g.vars().contains(&name("Location")));
        // Location = true leaves the conjunct forcing eCallRussia.
        let product = Product::of([name("eCall"), name("eCallRussia"), name("GLONASS")]);
        let a = Assignment::from_true_set(m.features(), &product.selected);
        assert_eq!(g.evaluate(&a), Ok(true));
        let without = Product::of([name("eCall"), name("eCallEurope"), name("GPS")]);
        let a = Assignment::from_true_set(m.features(), &without.selected);
        assert_eq!(g.evaluate(&a), Ok(false));
    }

    #[test]
    fn ground_without_contexts_is_identity() {
        let m = ecall_fm();
        assert_eq!(ground(&m, &ContextAssignment::empty()), *m.formula());
    }

    #[test]
    fn ground_can_collapse_to_constant() {
        let m = CaFM::new(names(&["Location"]), BTreeSet::new(), BTreeSet::new(), Formula::var("Location")).unwrap();
        assert_eq!(ground(&m, &ContextAssignment::empty()), Formula::Const(false));
    }

    #[test]
    fn validate_product_agrees_with_ground_plus_evaluate() {
        let m = ecall_cafm();
        let feats: Vec<VarName> = m.features().iter().cloned().collect();
        let ctxs: Vec<VarName> = m.contexts().iter().cloned().collect();
        for cmask in 0u32..1 << ctxs.len() {
            let d = ContextAssignment::of(
                ctxs.iter()
                    .enumerate()
                    .filter(|(i, _)| cmask >> i & 1 == 1)
                    .map(|(_, c)| c.clone()),
            );
            let g = ground(&m, &d);
            for fmask in 0u32..1 << feats.len() {
                let p = Product::of(
                    feats
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| fmask >> i & 1 == 1)
                        .map(|(_, f)| f.clone()),
                );
                let a = Assignment::from_true_set(m.features(), &p.selected);
                assert_eq!(
                    validate_product(&m, &d, &p).unwrap(),
                    g.evaluate(&a).unwrap(),
                );
            }
        }
    }
}
