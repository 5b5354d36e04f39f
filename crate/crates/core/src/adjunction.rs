//! Adjunction data for a functor `p : E -> B`, possibly restricted to a
//! subset of base objects, and its synthesis from displacements.
//!
//! Finite truncations rarely carry a total left adjoint — the adjoint's
//! image tends to outgrow the category that was generated. The data here
//! therefore names the base objects on which the left adjoint is available
//! and carries exactly the components that type-check there; validation
//! proves the triangle identities and the hom-set bijection on everything
//! it holds. Passing every base object yields the ordinary total notion.
//!
//! `left_adjoint_via_displacements` builds this data with no closed-form
//! knowledge: it freely adjoins an initial object to both ends of `p`,
//! displaces the new initial object along each morphism `0 -> b`, and reads
//! the adjoint off the apexes and their universal property.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::budget::SearchBudget;
use crate::category::{MorId, ObjId};
use crate::displacement::{displace, mediate, DisplacementResult};
use crate::error::{Error, Result};
use crate::functor::{full_subcategory, FunctorData, NatTrans};
use crate::join::join_functor;

/// A (possibly base-restricted) left adjoint to `right`, with unit and
/// counit components and a validated universal property.
#[derive(Debug, Clone)]
pub struct AdjunctionData {
    right: FunctorData,
    /// Strictly ascending objects of the base category carrying the data.
    base_objects: Vec<ObjId>,
    /// Left adjoint on objects, parallel to `base_objects`.
    left_obj: Vec<ObjId>,
    /// Left adjoint on every base morphism between base objects.
    left_mor: BTreeMap<MorId, MorId>,
    /// Unit components `b -> p(Γb)`, parallel to `base_objects`.
    unit: Vec<MorId>,
    /// Counit components `Γp(e) -> e`, for each `e` with `p(e)` in the base.
    counit: BTreeMap<ObjId, MorId>,
}

impl AdjunctionData {
    /// Assemble and fully validate adjunction data. Everything checkable is
    /// checked: coverage and typing of all four tables, functoriality of
    /// the left adjoint, naturality of unit and counit, both triangle
    /// identities wherever they type-check, and the transpose bijection
    /// `Hom(Γb, e) ≅ Hom(b, p(e))` on every pair.
    pub fn new(
        right: FunctorData,
        base_objects: Vec<ObjId>,
        left_obj: Vec<ObjId>,
        left_mor: BTreeMap<MorId, MorId>,
        unit: Vec<MorId>,
        counit: BTreeMap<ObjId, MorId>,
    ) -> Result<AdjunctionData> {
        let adj = AdjunctionData {
            right,
            base_objects,
            left_obj,
            left_mor,
            unit,
            counit,
        };
        adj.validate()?;
        Ok(adj)
    }

    pub fn right(&self) -> &FunctorData {
        &self.right
    }

    pub fn base_objects(&self) -> &[ObjId] {
        &self.base_objects
    }

    /// Is the whole base category covered?
    pub fn is_total(&self) -> bool {
        self.base_objects.len() == self.right.cod().object_count()
    }

    fn base_index(&self, b: ObjId) -> Option<usize> {
        self.base_objects.binary_search(&b).ok()
    }

    pub fn left_on_obj(&self, b: ObjId) -> Option<ObjId> {
        self.base_index(b).map(|i| self.left_obj[i])
    }

    pub fn left_on_mor(&self, g: MorId) -> Option<MorId> {
        self.left_mor.get(&g).copied()
    }

    pub fn unit_at(&self, b: ObjId) -> Option<MorId> {
        self.base_index(b).map(|i| self.unit[i])
    }

    pub fn counit_at(&self, e: ObjId) -> Option<MorId> {
        self.counit.get(&e).copied()
    }

    /// Transpose `t : Γb -> e` to the base: `p(t) ∘ η_b`.
    pub fn transpose_to_base(&self, b: ObjId, t: MorId) -> Result<MorId> {
        let ec = self.right.dom().as_ref();
        let bc = self.right.cod().as_ref();
        let (gb, eta) = match (self.left_on_obj(b), self.unit_at(b)) {
            (Some(gb), Some(eta)) => (gb, eta),
            _ => return Err(Error::invalid(format!("object {b} is not in the base"))),
        };
        if ec.src(t) != gb {
            return Err(Error::invalid(
                "morphism to transpose must start at the left adjoint's value",
            ));
        }
        Ok(bc
            .compose(self.right.on_mor(t), eta)
            .expect("unit composes with the image"))
    }

    /// Transpose `q : b -> p(e)` back to the total category: the unique
    /// `t : Γb -> e` with `p(t) ∘ η_b = q`. Data that fails uniqueness is
    /// stale and reported as a certificate mismatch.
    pub fn transpose_to_total(&self, b: ObjId, e: ObjId, q: MorId) -> Result<MorId> {
        let ec = self.right.dom().as_ref();
        let bc = self.right.cod().as_ref();
        let (gb, eta) = match (self.left_on_obj(b), self.unit_at(b)) {
            (Some(gb), Some(eta)) => (gb, eta),
            _ => return Err(Error::invalid(format!("object {b} is not in the base"))),
        };
        if bc.src(q) != b || bc.tgt(q) != self.right.on_obj(e) {
            return Err(Error::invalid(
                "transpose source must run from the base object to the image",
            ));
        }
        let mut hits = ec
            .hom_set(gb, e)
            .iter()
            .copied()
            .filter(|&t| bc.compose(self.right.on_mor(t), eta) == Some(q));
        match (hits.next(), hits.next()) {
            (Some(t), None) => Ok(t),
            _ => Err(Error::CertificateMismatch(
                "transpose is not uniquely realized — adjunction data is stale".into(),
            )),
        }
    }

    /// Package the left adjoint as a functor from the full subcategory on
    /// the base objects, with the unit as a natural transformation from the
    /// inclusion to `Γ;p`.
    pub fn left_functor(&self) -> Result<(FunctorData, NatTrans)> {
        let (sub, inclusion) = full_subcategory(self.right.cod(), &self.base_objects)?;
        let gamma = FunctorData::new(
            Arc::clone(&sub),
            Arc::clone(self.right.dom()),
            self.left_obj.clone(),
            inclusion
                .mor_table()
                .iter()
                .map(|g| self.left_mor[g])
                .collect(),
        )?;
        gamma.validate()?;
        let unit = NatTrans::new(
            inclusion,
            gamma.then(&self.right)?,
            self.unit.clone(),
        )?;
        Ok((gamma, unit))
    }

    /// The counit as a natural transformation `Γp ⇒ id`, available when the
    /// data is total.
    pub fn counit_nat(&self) -> Result<NatTrans> {
        if !self.is_total() {
            return Err(Error::invalid(
                "counit is a natural transformation only for a total adjunction",
            ));
        }
        let (gamma, _) = self.left_functor()?;
        let ec = self.right.dom();
        NatTrans::new(
            self.right.then(&gamma)?,
            FunctorData::identity(ec),
            ec.objects().map(|e| self.counit[&e]).collect(),
        )
    }

    fn validate(&self) -> Result<()> {
        self.right.validate()?;
        let ec = self.right.dom().as_ref();
        let bc = self.right.cod().as_ref();

        if self.base_objects.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("base objects must be strictly ascending"));
        }
        if self.base_objects.iter().any(|b| b.0 >= bc.object_count()) {
            return Err(Error::invalid("base object out of range"));
        }
        if self.left_obj.len() != self.base_objects.len()
            || self.unit.len() != self.base_objects.len()
        {
            return Err(Error::invalid(
                "left adjoint and unit tables must parallel the base objects",
            ));
        }

        // Typing of objects and units.
        for (i, &b) in self.base_objects.iter().enumerate() {
            let gb = self.left_obj[i];
            if gb.0 >= ec.object_count() {
                return Err(Error::invalid(format!("left value {gb} out of range")));
            }
            let eta = self.unit[i];
            if eta.0 >= bc.morphism_count()
                || bc.src(eta) != b
                || bc.tgt(eta) != self.right.on_obj(gb)
            {
                return Err(Error::invalid(format!(
                    "unit at {} must run from it to the image of the left value",
                    bc.object_label(b)
                )));
            }
        }

        // The left adjoint must cover exactly the base-to-base morphisms.
        let in_base = |o: ObjId| self.base_objects.binary_search(&o).is_ok();
        for g in bc.morphisms() {
            let covered = in_base(bc.src(g)) && in_base(bc.tgt(g));
            match self.left_mor.get(&g) {
                None if covered => {
                    return Err(Error::invalid(format!(
                        "left adjoint misses base morphism {}",
                        bc.morphism_label(g)
                    )))
                }
                Some(_) if !covered => {
                    return Err(Error::invalid(format!(
                        "left adjoint defined on non-base morphism {}",
                        bc.morphism_label(g)
                    )))
                }
                Some(&gg) => {
                    let (s, t) = (
                        self.left_on_obj(bc.src(g)).unwrap(),
                        self.left_on_obj(bc.tgt(g)).unwrap(),
                    );
                    if gg.0 >= ec.morphism_count() || ec.src(gg) != s || ec.tgt(gg) != t {
                        return Err(Error::invalid(format!(
                            "left image of {} has wrong endpoints",
                            bc.morphism_label(g)
                        )));
                    }
                    // unit naturality: p(Γg) ∘ η_src = η_tgt ∘ g
                    let i = self.base_index(bc.src(g)).unwrap();
                    let j = self.base_index(bc.tgt(g)).unwrap();
                    if bc.compose(self.right.on_mor(gg), self.unit[i])
                        != bc.compose(self.unit[j], g)
                    {
                        return Err(Error::invalid(format!(
                            "unit is not natural at {}",
                            bc.morphism_label(g)
                        )));
                    }
                }
                None => {}
            }
        }

        // Functoriality on the base subcategory.
        for (i, &b) in self.base_objects.iter().enumerate() {
            if self.left_mor[&bc.identity(b)] != ec.identity(self.left_obj[i]) {
                return Err(Error::invalid("left adjoint breaks an identity"));
            }
        }
        for (&g1, &gg1) in &self.left_mor {
            for (&g2, &gg2) in &self.left_mor {
                if bc.src(g2) != bc.tgt(g1) {
                    continue;
                }
                let g21 = bc.compose(g2, g1).expect("composable base pair");
                if self.left_mor.get(&g21) != Some(&ec.compose(gg2, gg1).unwrap()) {
                    return Err(Error::invalid("left adjoint breaks a composition"));
                }
            }
        }

        // Counit coverage, typing, naturality.
        for e in ec.objects() {
            let covered = in_base(self.right.on_obj(e));
            match self.counit.get(&e) {
                None if covered => {
                    return Err(Error::invalid(format!(
                        "counit misses {}",
                        ec.object_label(e)
                    )))
                }
                Some(_) if !covered => {
                    return Err(Error::invalid(format!(
                        "counit defined at {} whose image is outside the base",
                        ec.object_label(e)
                    )))
                }
                Some(&ep) => {
                    let gpe = self.left_on_obj(self.right.on_obj(e)).unwrap();
                    if ep.0 >= ec.morphism_count() || ec.src(ep) != gpe || ec.tgt(ep) != e {
                        return Err(Error::invalid(format!(
                            "counit at {} has wrong endpoints",
                            ec.object_label(e)
                        )));
                    }
                }
                None => {}
            }
        }
        for f in ec.morphisms() {
            let (e1, e2) = (ec.src(f), ec.tgt(f));
            let (Some(&ep1), Some(&ep2)) = (self.counit.get(&e1), self.counit.get(&e2)) else {
                continue;
            };
            let gpf = self.left_mor[&self.right.on_mor(f)];
            if ec.compose(f, ep1) != ec.compose(ep2, gpf) {
                return Err(Error::invalid(format!(
                    "counit is not natural at {}",
                    ec.morphism_label(f)
                )));
            }
        }

        // Triangle identities, wherever both sides type-check.
        for e in ec.objects() {
            let Some(&ep) = self.counit.get(&e) else { continue };
            let b = self.right.on_obj(e);
            let i = self.base_index(b).unwrap();
            if bc.compose(self.right.on_mor(ep), self.unit[i]) != Some(bc.identity(b)) {
                return Err(Error::invalid(format!(
                    "second triangle identity fails at {}",
                    ec.object_label(e)
                )));
            }
        }
        for (i, _) in self.base_objects.iter().enumerate() {
            let gb = self.left_obj[i];
            let eta = self.unit[i];
            let (Some(&geta), Some(&ep)) = (self.left_mor.get(&eta), self.counit.get(&gb))
            else {
                continue;
            };
            if ec.compose(ep, geta) != Some(ec.identity(gb)) {
                return Err(Error::invalid(format!(
                    "first triangle identity fails at {}",
                    ec.object_label(gb)
                )));
            }
        }

        // The transpose bijection on every (base object, total object) pair.
        for (i, &b) in self.base_objects.iter().enumerate() {
            let gb = self.left_obj[i];
            let eta = self.unit[i];
            for e in ec.objects() {
                let mut images: Vec<MorId> = ec
                    .hom_set(gb, e)
                    .iter()
                    .map(|&t| {
                        bc.compose(self.right.on_mor(t), eta)
                            .expect("transpose composes")
                    })
                    .collect();
                images.sort_unstable();
                let before = images.len();
                images.dedup();
                let mut expected: Vec<MorId> =
                    bc.hom_set(b, self.right.on_obj(e)).to_vec();
                expected.sort_unstable();
                if images.len() != before || images != expected {
                    return Err(Error::invalid(format!(
                        "transposition is not a bijection at ({}, {})",
                        bc.object_label(b),
                        ec.object_label(e)
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Synthesize the left adjoint on the whole base category, if every
/// displacement of the adjoined initial object exists.
pub fn left_adjoint_via_displacements(
    p: &FunctorData,
    budget: &SearchBudget,
) -> Result<Option<AdjunctionData>> {
    let base: Vec<ObjId> = p.cod().objects().collect();
    left_adjoint_via_displacements_on(p, &base, budget)
}

/// Synthesize the left adjoint on the listed base objects by displacing a
/// freely adjoined initial object along each `0 -> b`, reading Γ off the
/// apexes and the unit off the base units, and mediating everything else
/// through the displacement's universal property. `Ok(None)` means some
/// displacement is genuinely absent — the adjoint does not exist there.
pub fn left_adjoint_via_displacements_on(
    p: &FunctorData,
    base_objects: &[ObjId],
    budget: &SearchBudget,
) -> Result<Option<AdjunctionData>> {
    p.validate()?;
    let ec = p.dom().as_ref();
    let bc = p.cod().as_ref();
    let mut base = base_objects.to_vec();
    base.sort_unstable();
    base.dedup();
    if base.iter().any(|b| b.0 >= bc.object_count()) {
        return Err(Error::invalid("base object out of range"));
    }

    let jf = join_functor(p);
    let zero_e = jf.dom.zero;

    let mut disp: BTreeMap<ObjId, DisplacementResult> = BTreeMap::new();
    for &b in &base {
        let eps = jf.cod.from_zero(jf.cod.embed.on_obj(b));
        match displace(&jf.functor, zero_e, eps, budget)? {
            None => return Ok(None),
            Some(r) => {
                disp.insert(b, r);
            }
        }
    }

    let retract_obj = |o: ObjId| jf.dom.inner_of_obj(o).expect("apex avoids the free initial");
    let left_obj: Vec<ObjId> = base.iter().map(|&b| retract_obj(disp[&b].apex)).collect();
    let unit: Vec<MorId> = base
        .iter()
        .map(|&b| {
            jf.cod
                .inner_of_mor(disp[&b].base_unit)
                .expect("base unit lands in the embedded copy")
        })
        .collect();

    let in_base = |o: ObjId| base.binary_search(&o).is_ok();
    let mut left_mor = BTreeMap::new();
    for g in bc.morphisms() {
        if !in_base(bc.src(g)) || !in_base(bc.tgt(g)) {
            continue;
        }
        let r = &disp[&bc.src(g)];
        let r2 = &disp[&bc.tgt(g)];
        let j = base.binary_search(&bc.tgt(g)).unwrap();
        let q = jf
            .cod
            .embed
            .on_mor(bc.compose(unit[j], g).expect("unit follows g"));
        let t = mediate(&jf.functor, r, r2.unit, q)?;
        left_mor.insert(
            g,
            jf.dom
                .inner_of_mor(t)
                .expect("mediator runs between embedded objects"),
        );
    }

    let mut counit = BTreeMap::new();
    for e in ec.objects() {
        let b = p.on_obj(e);
        if !in_base(b) {
            continue;
        }
        let r = &disp[&b];
        let h = jf.dom.from_zero(jf.dom.embed.on_obj(e));
        let q = jf.cod.joined.identity(jf.cod.embed.on_obj(b));
        let t = mediate(&jf.functor, r, h, q)?;
        counit.insert(
            e,
            jf.dom
                .inner_of_mor(t)
                .expect("counit runs between embedded objects"),
        );
    }

    AdjunctionData::new(p.clone(), base, left_obj, left_mor, unit, counit).map(Some)
}

/// Compare two adjunctions for the same right functor over the same base:
/// returns the family of comparison morphisms `Γ₁b -> Γ₂b` when they are a
/// natural isomorphism, `None` when the adjunctions genuinely disagree.
pub fn natural_comparison(
    a: &AdjunctionData,
    b: &AdjunctionData,
) -> Result<Option<Vec<MorId>>> {
    if a.right != b.right || a.base_objects != b.base_objects {
        return Err(Error::invalid(
            "comparison requires the same right functor and base",
        ));
    }
    let ec = a.right.dom().as_ref();
    let mut comps = Vec::with_capacity(a.base_objects.len());
    for (i, &ob) in a.base_objects.iter().enumerate() {
        let t = a.transpose_to_total(ob, b.left_obj[i], b.unit[i])?;
        if ec.is_isomorphism(t).is_none() {
            return Ok(None);
        }
        comps.push(t);
    }
    // naturality of the comparison against both left actions
    for (&g, &ga) in &a.left_mor {
        let gb = b.left_mor[&g];
        let i = a.base_index(a.right.cod().src(g)).unwrap();
        let j = a.base_index(a.right.cod().tgt(g)).unwrap();
        if ec.compose(comps[j], ga) != ec.compose(gb, comps[i]) {
            return Ok(None);
        }
    }
    Ok(Some(comps))
}
