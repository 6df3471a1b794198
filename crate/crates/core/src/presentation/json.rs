use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{
    labels_with_prefix, AssocAlgebra, Bimodule, CommutativeAlgebra, LieAlgebra, LieModule, Presentation, Tensor3,
};
use crate::error::{Error, Result};
use crate::scalar::{FieldSpec, Scalar};

type Nested = Vec<Vec<Vec<String>>>;

/// On-disk presentation document. Structure constants are dense nested
/// arrays of scalar strings.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationFile {
    /// One of `commutative_algebra`, `algebra`, `bimodule`, `lie_algebra`,
    /// `lie_module`. When absent it is inferred from the fields present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    pub field: FieldSpec,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mult: Option<Nested>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bracket: Option<Nested>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_action: Option<Nested>,
    /// Left action; for Lie modules this is the action of `L`.
    #[serde(default, skip_serializing_if = "Option::is_none", alias = "action")]
    pub left: Option<Nested>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right: Option<Nested>,
}

pub fn load_presentation_file(path: &Path) -> Result<PresentationFile> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn parse_nested(field: FieldSpec, nested: &Nested, dims: [usize; 3], what: &str) -> Result<Tensor3> {
    let parsed = nested
        .iter()
        .map(|row| {
            row.iter()
                .map(|v| v.iter().map(|s| Scalar::parse(s, field)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Tensor3::from_nested(field, parsed, dims, what)
}

fn outer_len(nested: &Nested) -> usize {
    nested.len()
}

fn require<'a, T>(x: &'a Option<T>, what: &str) -> Result<&'a T> {
    x.as_ref().ok_or_else(|| Error::Shape(format!("missing field {what:?}")))
}

/// The action of `A` on an algebra-like object when none is given: scalars
/// when `A` is one-dimensional, the regular action when the object has the
/// same multiplication table as `A`.
pub(crate) fn default_a_action(a: &CommutativeAlgebra, dim: usize, mult: Option<&Tensor3>) -> Result<Tensor3> {
    let field = a.field;
    if a.dim() == 1 {
        // e_0 = c 1_A with c = e_0 e_0 coefficient
        let c = a.mult.get(0, 0, 0).clone();
        let mut t = Tensor3::zero(field, [1, dim, dim]);
        for j in 0..dim {
            t.set(0, j, j, c.clone());
        }
        return Ok(t);
    }
    if let Some(m) = mult {
        if *m == a.mult {
            return Ok(a.mult.clone());
        }
    }
    Err(Error::Shape("missing a_action: only defaulted when A is one-dimensional or the table equals A's".into()))
}

impl PresentationFile {
    fn labels(&self, prefix: &str) -> Vec<String> {
        self.labels.clone().unwrap_or_else(|| labels_with_prefix(prefix, self.dim))
    }

    fn unit(&self) -> Result<Vec<Scalar>> {
        let u = require(&self.unit, "unit")?;
        let v = u.iter().map(|s| Scalar::parse(s, self.field)).collect::<Result<Vec<_>>>()?;
        if v.len() != self.dim {
            return Err(Error::Shape(format!("unit: expected length {}, got {}", self.dim, v.len())));
        }
        Ok(v)
    }

    pub fn inferred_kind(&self) -> &str {
        if let Some(k) = &self.kind {
            return k;
        }
        if self.bracket.is_some() {
            "lie_algebra"
        } else if self.right.is_some() {
            "bimodule"
        } else if self.left.is_some() {
            "lie_module"
        } else if self.a_action.is_some() {
            "algebra"
        } else {
            "commutative_algebra"
        }
    }

    pub fn to_commutative(&self) -> Result<CommutativeAlgebra> {
        let n = self.dim;
        let mult = parse_nested(self.field, require(&self.mult, "mult")?, [n, n, n], "mult")?;
        CommutativeAlgebra::new(self.field, self.labels("e"), mult, self.unit()?)
    }

    pub fn to_algebra(&self, a: &CommutativeAlgebra) -> Result<AssocAlgebra> {
        let n = self.dim;
        let mult = parse_nested(self.field, require(&self.mult, "mult")?, [n, n, n], "mult")?;
        let a_action = match &self.a_action {
            Some(t) => parse_nested(self.field, t, [a.dim(), n, n], "a_action")?,
            None => default_a_action(a, n, Some(&mult))?,
        };
        AssocAlgebra::new(self.field, self.labels("r"), mult, self.unit()?, a_action)
    }

    pub fn to_bimodule(&self, r: &AssocAlgebra) -> Result<Bimodule> {
        let n = self.dim;
        let left = parse_nested(self.field, require(&self.left, "left")?, [r.dim(), n, n], "left")?;
        let right = parse_nested(self.field, require(&self.right, "right")?, [n, r.dim(), n], "right")?;
        Bimodule::new(self.field, self.labels("m"), left, right)
    }

    pub fn to_lie(&self, a: &CommutativeAlgebra) -> Result<LieAlgebra> {
        let n = self.dim;
        let bracket = parse_nested(self.field, require(&self.bracket, "bracket")?, [n, n, n], "bracket")?;
        let a_action = match &self.a_action {
            Some(t) => parse_nested(self.field, t, [a.dim(), n, n], "a_action")?,
            None => default_a_action(a, n, None)?,
        };
        LieAlgebra::new(self.field, self.labels("x"), bracket, a_action)
    }

    pub fn to_lie_module(&self, a: &CommutativeAlgebra, l: &LieAlgebra) -> Result<LieModule> {
        let n = self.dim;
        let action = parse_nested(self.field, require(&self.left, "left")?, [l.dim(), n, n], "left")?;
        let a_action = match &self.a_action {
            Some(t) => parse_nested(self.field, t, [a.dim(), n, n], "a_action")?,
            None => default_a_action(a, n, None)?,
        };
        LieModule::new(self.field, self.labels("m"), action, a_action)
    }

    /// Parse without context. Inputs whose shape depends on another
    /// presentation (all but commutative algebras) need the outer
    /// dimension from the arrays themselves.
    pub fn to_presentation(&self, context: &[&Presentation]) -> Result<Presentation> {
        let find_a = || {
            context.iter().find_map(|p| match p {
                Presentation::Commutative(a) => Some(a),
                _ => None,
            })
        };
        match self.inferred_kind() {
            "commutative_algebra" => Ok(Presentation::Commutative(self.to_commutative()?)),
            "algebra" => {
                let a = find_a().ok_or_else(|| Error::Shape("an A-algebra needs A".into()))?;
                Ok(Presentation::Algebra(self.to_algebra(a)?))
            }
            "bimodule" => {
                let r = context
                    .iter()
                    .find_map(|p| match p {
                        Presentation::Algebra(r) => Some(r),
                        _ => None,
                    })
                    .ok_or_else(|| Error::Shape("a bimodule needs R".into()))?;
                Ok(Presentation::Bimodule(self.to_bimodule(r)?))
            }
            "lie_algebra" => {
                let a = find_a().ok_or_else(|| Error::Shape("a Lie A-algebra needs A".into()))?;
                Ok(Presentation::Lie(self.to_lie(a)?))
            }
            "lie_module" => {
                let a = find_a().ok_or_else(|| Error::Shape("a Lie module needs A".into()))?;
                let l = context
                    .iter()
                    .find_map(|p| match p {
                        Presentation::Lie(l) => Some(l),
                        _ => None,
                    })
                    .ok_or_else(|| Error::Shape("a Lie module needs L".into()))?;
                Ok(Presentation::LieModule(self.to_lie_module(a, l)?))
            }
            other => Err(Error::Parse(format!("unknown presentation kind {other:?}"))),
        }
    }

    /// Outer dimension of the acting algebra recorded in the arrays, if any.
    pub fn acting_dim(&self) -> Option<usize> {
        self.a_action.as_ref().or(self.left.as_ref()).map(outer_len)
    }

    pub fn from_presentation(p: &Presentation) -> PresentationFile {
        match p {
            Presentation::Commutative(a) => PresentationFile {
                kind: Some(p.kind().into()),
                field: a.field,
                dim: a.dim(),
                labels: Some(a.labels.clone()),
                mult: Some(a.mult.to_nested()),
                unit: Some(a.unit.iter().map(|x| x.to_string()).collect()),
                ..Default::default()
            },
            Presentation::Algebra(r) => PresentationFile {
                kind: Some(p.kind().into()),
                field: r.field,
                dim: r.dim(),
                labels: Some(r.labels.clone()),
                mult: Some(r.mult.to_nested()),
                unit: Some(r.unit.iter().map(|x| x.to_string()).collect()),
                a_action: Some(r.a_action.to_nested()),
                ..Default::default()
            },
            Presentation::Bimodule(m) => PresentationFile {
                kind: Some(p.kind().into()),
                field: m.field,
                dim: m.dim(),
                labels: Some(m.labels.clone()),
                left: Some(m.left.to_nested()),
                right: Some(m.right.to_nested()),
                ..Default::default()
            },
            Presentation::Lie(l) => PresentationFile {
                kind: Some(p.kind().into()),
                field: l.field,
                dim: l.dim(),
                labels: Some(l.labels.clone()),
                bracket: Some(l.bracket.to_nested()),
                a_action: Some(l.a_action.to_nested()),
                ..Default::default()
            },
            Presentation::LieModule(m) => PresentationFile {
                kind: Some(p.kind().into()),
                field: m.field,
                dim: m.dim(),
                labels: Some(m.labels.clone()),
                left: Some(m.action.to_nested()),
                a_action: Some(m.a_action.to_nested()),
                ..Default::default()
            },
        }
    }
}

impl Default for FieldSpec {
    fn default() -> Self {
        FieldSpec::Rationals
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::builtins;

    #[test]
    fn roundtrip_all_kinds() {
        let f = FieldSpec::prime(5).unwrap();
        let a = builtins::dual_numbers(f);
        let r = builtins::algebra_role("dual_numbers", f, &[], &a).unwrap();
        let m = builtins::module_role("regular", &r).unwrap();
        let k = builtins::base_field(f);
        let l = builtins::sl2(f, &k);
        let pa = Presentation::Commutative(a.clone());
        let pr = Presentation::Algebra(r.clone());
        let pk = Presentation::Commutative(k.clone());
        let pl = Presentation::Lie(l.clone());
        let cases: Vec<(Presentation, Vec<&Presentation>)> = vec![
            (pa.clone(), vec![]),
            (pr.clone(), vec![&pa]),
            (Presentation::Bimodule(m), vec![&pr]),
            (pl.clone(), vec![&pk]),
            (Presentation::LieModule(builtins::lie_module_role("trivial_module", &k, &l).unwrap()), vec![&pk, &pl]),
        ];
        for (p, ctx) in cases {
            let file = PresentationFile::from_presentation(&p);
            let text = serde_json::to_string(&file).unwrap();
            let back: PresentationFile = serde_json::from_str(&text).unwrap();
            assert_eq!(back.to_presentation(&ctx).unwrap(), p);
        }
    }

    #[test]
    fn missing_a_action_defaults() {
        let text = r#"{"field":"Q","dim":2,"mult":[[["1","0"],["0","1"]],[["0","1"],["0","0"]]],"unit":["1","0"]}"#;
        let file: PresentationFile = serde_json::from_str(text).unwrap();
        let k = builtins::base_field(FieldSpec::Rationals);
        let r = file.to_algebra(&k).unwrap();
        assert!(r.validate(&k).is_valid());
        let d = file.to_commutative().unwrap();
        let r2 = file.to_algebra(&d).unwrap();
        assert_eq!(r2.a_action, d.mult);
        let kk = builtins::k_times_k(FieldSpec::Rationals);
        assert!(matches!(file.to_algebra(&kk), Err(Error::Shape(_))));
    }

    #[test]
    fn ragged_arrays_are_shape_errors() {
        let text = r#"{"field":"Q","dim":2,"mult":[[["1","0"]],[["0","1"],["0","0"]]],"unit":["1","0"]}"#;
        let file: PresentationFile = serde_json::from_str(text).unwrap();
        assert!(matches!(file.to_commutative(), Err(Error::Shape(_))));
    }
}
