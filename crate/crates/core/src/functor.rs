//! Functors between finite categories, and natural transformations.
//!
//! A [`FunctorData`] is self-contained: it owns (shared) handles to both its
//! domain and codomain, so values can be passed around, composed, and
//! compared without threading category references separately.

use std::sync::Arc;

use crate::category::{FinCategory, MorId, MorInfo, ObjId};
use crate::error::{Error, Result};

/// Pointer-or-structural equality, in that order. Distinct `Arc`s wrapping
/// equal categories must behave as the same category everywhere.
pub fn same_category(a: &Arc<FinCategory>, b: &Arc<FinCategory>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A functor as explicit object and morphism tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctorData {
    dom: Arc<FinCategory>,
    cod: Arc<FinCategory>,
    obj_map: Vec<ObjId>,
    mor_map: Vec<MorId>,
}

impl FunctorData {
    /// Build a functor, checking shape only: table lengths, index ranges,
    /// and that each morphism image has the endpoints forced by the object
    /// table. Preservation of identities and composites is checked by
    /// [`validate`](FunctorData::validate).
    pub fn new(
        dom: Arc<FinCategory>,
        cod: Arc<FinCategory>,
        obj_map: Vec<ObjId>,
        mor_map: Vec<MorId>,
    ) -> Result<FunctorData> {
        if obj_map.len() != dom.object_count() {
            return Err(Error::invalid(format!(
                "object table has {} entries for {} objects",
                obj_map.len(),
                dom.object_count()
            )));
        }
        if mor_map.len() != dom.morphism_count() {
            return Err(Error::invalid(format!(
                "morphism table has {} entries for {} morphisms",
                mor_map.len(),
                dom.morphism_count()
            )));
        }
        for &o in &obj_map {
            if o.0 >= cod.object_count() {
                return Err(Error::invalid(format!("object image {o} out of range")));
            }
        }
        for (i, &f) in mor_map.iter().enumerate() {
            if f.0 >= cod.morphism_count() {
                return Err(Error::invalid(format!("morphism image {f} out of range")));
            }
            let m = MorId(i);
            if cod.src(f) != obj_map[dom.src(m).0] || cod.tgt(f) != obj_map[dom.tgt(m).0] {
                return Err(Error::invalid(format!(
                    "image of {} has endpoints inconsistent with the object table",
                    dom.morphism_label(m)
                )));
            }
        }
        Ok(FunctorData {
            dom,
            cod,
            obj_map,
            mor_map,
        })
    }

    /// The identity functor on `cat`.
    pub fn identity(cat: &Arc<FinCategory>) -> FunctorData {
        FunctorData {
            dom: Arc::clone(cat),
            cod: Arc::clone(cat),
            obj_map: cat.objects().collect(),
            mor_map: cat.morphisms().collect(),
        }
    }

    pub fn dom(&self) -> &Arc<FinCategory> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<FinCategory> {
        &self.cod
    }

    #[inline]
    pub fn on_obj(&self, o: ObjId) -> ObjId {
        self.obj_map[o.0]
    }

    #[inline]
    pub fn on_mor(&self, f: MorId) -> MorId {
        self.mor_map[f.0]
    }

    pub fn obj_table(&self) -> &[ObjId] {
        &self.obj_map
    }

    pub fn mor_table(&self) -> &[MorId] {
        &self.mor_map
    }

    /// Every functor-law violation, as human-readable findings.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for o in self.dom.objects() {
            let want = self.cod.identity(self.on_obj(o));
            let got = self.on_mor(self.dom.identity(o));
            if got != want {
                out.push(format!(
                    "identity of {:?} maps to {:?}, not the identity of its image",
                    self.dom.object_label(o),
                    self.cod.morphism_label(got),
                ));
            }
        }
        for f in self.dom.morphisms() {
            for &g in self.dom.morphisms_from(self.dom.tgt(f)) {
                let Some(gf) = self.dom.compose(g, f) else { continue };
                let want = self.cod.compose(self.on_mor(g), self.on_mor(f));
                if want != Some(self.on_mor(gf)) {
                    out.push(format!(
                        "composite {:?} ∘ {:?} is not preserved",
                        self.dom.morphism_label(g),
                        self.dom.morphism_label(f),
                    ));
                }
            }
        }
        out
    }

    /// Err on the first functor-law violation.
    pub fn validate(&self) -> Result<()> {
        match self.violations().first() {
            None => Ok(()),
            Some(v) => Err(Error::invalid(format!("not a functor: {v}"))),
        }
    }

    /// `g ∘ self` (apply `self` first). Fails if `self`'s codomain is not
    /// `g`'s domain.
    pub fn then(&self, g: &FunctorData) -> Result<FunctorData> {
        if !same_category(&self.cod, &g.dom) {
            return Err(Error::invalid(
                "functor composition: codomain/domain mismatch",
            ));
        }
        Ok(FunctorData {
            dom: Arc::clone(&self.dom),
            cod: Arc::clone(&g.cod),
            obj_map: self.obj_map.iter().map(|&o| g.on_obj(o)).collect(),
            mor_map: self.mor_map.iter().map(|&f| g.on_mor(f)).collect(),
        })
    }
}

/// A natural transformation between two parallel functors.
///
/// Construction verifies naturality outright — a `NatTrans` value is always
/// a genuine natural transformation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NatTrans {
    src: FunctorData,
    tgt: FunctorData,
    components: Vec<MorId>,
}

impl NatTrans {
    pub fn new(src: FunctorData, tgt: FunctorData, components: Vec<MorId>) -> Result<NatTrans> {
        if !same_category(src.dom(), tgt.dom()) || !same_category(src.cod(), tgt.cod()) {
            return Err(Error::invalid(
                "natural transformation: functors are not parallel",
            ));
        }
        let a = src.dom();
        let b = src.cod();
        if components.len() != a.object_count() {
            return Err(Error::invalid(format!(
                "{} components for {} objects",
                components.len(),
                a.object_count()
            )));
        }
        for o in a.objects() {
            let c = components[o.0];
            if c.0 >= b.morphism_count() {
                return Err(Error::invalid(format!("component {c} out of range")));
            }
            if b.src(c) != src.on_obj(o) || b.tgt(c) != tgt.on_obj(o) {
                return Err(Error::invalid(format!(
                    "component at {:?} has wrong endpoints",
                    a.object_label(o)
                )));
            }
        }
        for f in a.morphisms() {
            let (x, y) = (a.src(f), a.tgt(f));
            let left = b.compose(tgt.on_mor(f), components[x.0]);
            let right = b.compose(components[y.0], src.on_mor(f));
            if left.is_none() || left != right {
                return Err(Error::invalid(format!(
                    "naturality square fails at {:?}",
                    a.morphism_label(f)
                )));
            }
        }
        Ok(NatTrans {
            src,
            tgt,
            components,
        })
    }

    pub fn src(&self) -> &FunctorData {
        &self.src
    }

    pub fn tgt(&self) -> &FunctorData {
        &self.tgt
    }

    #[inline]
    pub fn component(&self, o: ObjId) -> MorId {
        self.components[o.0]
    }

    pub fn components(&self) -> &[MorId] {
        &self.components
    }

    /// True when every component is invertible.
    pub fn is_isomorphism(&self) -> bool {
        self.components
            .iter()
            .all(|&c| self.src.cod().is_isomorphism(c).is_some())
    }
}

/// The full subcategory of `c` on the given objects (sorted, deduplicated),
/// together with its inclusion functor. Labels are inherited.
pub fn full_subcategory(
    c: &Arc<FinCategory>,
    objects: &[ObjId],
) -> Result<(Arc<FinCategory>, FunctorData)> {
    let mut objs = objects.to_vec();
    objs.sort_unstable();
    objs.dedup();
    if objs.len() != objects.len() {
        return Err(Error::invalid(
            "full subcategory: object list must be strictly ascending",
        ));
    }
    if let Some(o) = objs.iter().find(|o| o.0 >= c.object_count()) {
        return Err(Error::invalid(format!("object {o} out of range")));
    }
    let mut obj_back = vec![None; c.object_count()];
    for (i, &o) in objs.iter().enumerate() {
        obj_back[o.0] = Some(ObjId(i));
    }
    let mut mor_keep: Vec<MorId> = Vec::new();
    let mut mor_back = vec![None; c.morphism_count()];
    for m in c.morphisms() {
        if obj_back[c.src(m).0].is_some() && obj_back[c.tgt(m).0].is_some() {
            mor_back[m.0] = Some(MorId(mor_keep.len()));
            mor_keep.push(m);
        }
    }
    let labels = objs
        .iter()
        .map(|&o| c.object_label(o).to_string())
        .collect();
    let mors = mor_keep
        .iter()
        .map(|&m| MorInfo {
            src: obj_back[c.src(m).0].unwrap(),
            tgt: obj_back[c.tgt(m).0].unwrap(),
            label: c.morphism_label(m).to_string(),
        })
        .collect();
    let identities = objs
        .iter()
        .map(|&o| mor_back[c.identity(o).0].unwrap())
        .collect();
    let composition: Vec<((MorId, MorId), MorId)> = c
        .composition_pairs()
        .into_iter()
        .filter_map(|((g, f), gf)| {
            match (mor_back[g.0], mor_back[f.0], mor_back[gf.0]) {
                (Some(g2), Some(f2), Some(gf2)) => Some(((g2, f2), gf2)),
                _ => None,
            }
        })
        .collect();
    let sub = Arc::new(FinCategory::new(labels, mors, identities, composition)?);
    let include = FunctorData::new(Arc::clone(&sub), Arc::clone(c), objs, mor_keep)?;
    Ok((sub, include))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::CategoryBuilder;

    fn chain3() -> Arc<FinCategory> {
        let mut b = CategoryBuilder::new();
        let x = b.object("x");
        let y = b.object("y");
        let z = b.object("z");
        b.identity(x, "1x");
        b.identity(y, "1y");
        b.identity(z, "1z");
        let f = b.morphism("f", x, y);
        let g = b.morphism("g", y, z);
        let gf = b.morphism("gf", x, z);
        b.compose_rule(g, f, gf);
        Arc::new(b.build().unwrap())
    }

    #[test]
    fn identity_functor_validates_and_composes() {
        let c = chain3();
        let id = FunctorData::identity(&c);
        assert!(id.validate().is_ok());
        let again = id.then(&id).unwrap();
        assert_eq!(again, id);
    }

    #[test]
    fn broken_composite_is_detected() {
        let c = chain3();
        let id = FunctorData::identity(&c);
        // Redirect gf to the identity on x: endpoints break, `new` refuses.
        let mut mor_map: Vec<MorId> = c.morphisms().collect();
        let gf = c.morphism_by_label("gf").unwrap();
        mor_map[gf.0] = c.identity(ObjId(0));
        assert!(FunctorData::new(
            Arc::clone(&c),
            Arc::clone(&c),
            c.objects().collect(),
            mor_map
        )
        .is_err());

        // Collapse everything onto x: shape-valid, but g∘f is no longer
        // preserved... actually a constant functor IS a functor; check that
        // it passes, as a guard against over-eager validation.
        let const_obj: Vec<ObjId> = c.objects().map(|_| ObjId(0)).collect();
        let const_mor: Vec<MorId> = c.morphisms().map(|_| c.identity(ObjId(0))).collect();
        let k = FunctorData::new(Arc::clone(&c), Arc::clone(&c), const_obj, const_mor).unwrap();
        assert!(k.validate().is_ok());
        assert_eq!(id.then(&k).unwrap(), k);
    }

    #[test]
    fn naturality_is_enforced() {
        // Two functors walking-arrow -> chain3: F picks f: x->y, G picks the
        // composite path x->z; the candidate with a non-commuting square
        // must be rejected.
        let mut wb = CategoryBuilder::new();
        let a0 = wb.object("a");
        let a1 = wb.object("b");
        wb.identity(a0, "1a");
        wb.identity(a1, "1b");
        wb.morphism("u", a0, a1);
        let w = Arc::new(wb.build().unwrap());

        let c = chain3();
        let f = c.morphism_by_label("f").unwrap();
        let g = c.morphism_by_label("g").unwrap();
        let gf = c.morphism_by_label("gf").unwrap();
        let (x, y, z) = (ObjId(0), ObjId(1), ObjId(2));

        let top = FunctorData::new(
            Arc::clone(&w),
            Arc::clone(&c),
            vec![x, y],
            vec![c.identity(x), c.identity(y), f],
        )
        .unwrap();
        let bottom = FunctorData::new(
            Arc::clone(&w),
            Arc::clone(&c),
            vec![x, z],
            vec![c.identity(x), c.identity(z), gf],
        )
        .unwrap();

        // Components id_x at a and g at b: square commutes (g∘f = gf∘id).
        let ok = NatTrans::new(top.clone(), bottom.clone(), vec![c.identity(x), g]);
        assert!(ok.is_ok());
        assert!(!ok.unwrap().is_isomorphism());

        // A component with the right endpoints cannot be found for a broken
        // square here, so break parallelism instead: src != tgt domain.
        assert_eq!(w.as_ref().object_count(), 2);
        let not_parallel = NatTrans::new(
            top.clone(),
            FunctorData::identity(&c),
            vec![c.identity(x), g],
        );
        assert!(not_parallel.is_err());

        // And a wrong-endpoint component is refused.
        let bad = NatTrans::new(top, bottom, vec![c.identity(x), c.identity(z)]);
        assert!(bad.is_err());
    }

    #[test]
    fn arc_identity_vs_structural_identity() {
        let c1 = chain3();
        let c2 = chain3();
        assert!(!Arc::ptr_eq(&c1, &c2));
        assert!(same_category(&c1, &c2));
        let id1 = FunctorData::identity(&c1);
        let id2 = FunctorData::identity(&c2);
        assert!(id1.then(&id2).is_ok());
    }
}
