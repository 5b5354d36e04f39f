//! The explicit pseudopullback of a family of functors with common codomain.
//!
//! For `p_j : E_j -> B`, the total category has as objects the tuples
//! `(b, (e_j), (iso_j : b ≅ p_j(e_j)))` — an object of the base together
//! with one object per component and an isomorphism cone — and as morphisms
//! the tuples `(σ : b -> c, (σ_j : e_j -> e_j'))` whose squares commute:
//! `iso'_j ∘ σ = p_j(σ_j) ∘ iso_j`. Projections to each component and the
//! canonical first-coordinate projection to the base come verified, along
//! with natural isomorphisms `canonical ⇒ p_j ∘ τ_j` whose components are
//! the stored cone isomorphisms.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::budget::SearchBudget;
use crate::category::{FinCategory, MorId, MorInfo, ObjId};
use crate::equivalence::{
    is_essentially_surjective, is_fully_faithful, witness_from_half, EquivalenceWitness,
};
use crate::error::{Error, Result};
use crate::functor::{same_category, FunctorData, NatTrans};

/// One object of the total category: a base object with a cone of
/// isomorphisms onto the component images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeObject {
    pub base: ObjId,
    /// Per component: `(e_j, iso_j : base -> p_j(e_j))`.
    pub parts: Vec<(ObjId, MorId)>,
}

#[derive(Clone, Debug)]
pub struct PseudoPullback {
    pub components: Vec<FunctorData>,
    pub total: Arc<FinCategory>,
    /// `τ_j : total -> E_j`.
    pub projections: Vec<FunctorData>,
    /// First-coordinate projection `total -> B`.
    pub canonical: FunctorData,
    /// Invertible `canonical ⇒ p_j ∘ τ_j`, components the cone isos.
    pub witnesses: Vec<NatTrans>,
    /// Cone data per total object, indexed by `ObjId`.
    pub cones: Vec<ConeObject>,
    /// Per total morphism: the base morphism and the component morphisms.
    mor_parts: Vec<(MorId, Vec<MorId>)>,
    obj_lookup: BTreeMap<(ObjId, Vec<(ObjId, MorId)>), ObjId>,
    mor_lookup: BTreeMap<(ObjId, ObjId, Vec<MorId>), MorId>,
}

impl PseudoPullback {
    pub fn cone(&self, o: ObjId) -> &ConeObject {
        &self.cones[o.0]
    }

    /// Total object with the given base and `(e_j, iso_j)` parts, if any.
    pub fn find_object(&self, base: ObjId, parts: &[(ObjId, MorId)]) -> Option<ObjId> {
        self.obj_lookup.get(&(base, parts.to_vec())).copied()
    }

    /// The base and component morphisms of a total morphism.
    pub fn parts_of(&self, m: MorId) -> (MorId, &[MorId]) {
        let (sigma, parts) = &self.mor_parts[m.0];
        (*sigma, parts)
    }

    /// Total morphism between the given cones with the given components.
    pub fn find_morphism(&self, src: ObjId, tgt: ObjId, parts: &[MorId]) -> Option<MorId> {
        self.mor_lookup.get(&(src, tgt, parts.to_vec())).copied()
    }
}

/// Build the explicit pseudopullback of a nonempty family with common
/// codomain. Object and morphism counts (composition entries included) are
/// charged against `budget.pspb_objects` / `budget.pspb_morphisms`.
pub fn pseudopullback(
    family: &[FunctorData],
    budget: &SearchBudget,
) -> Result<PseudoPullback> {
    if family.is_empty() {
        return Err(Error::invalid("pseudopullback needs a nonempty family"));
    }
    let base = Arc::clone(family[0].cod());
    for p in &family[1..] {
        if !same_category(p.cod(), &base) {
            return Err(Error::invalid(
                "pseudopullback family must share one codomain",
            ));
        }
    }

    // Objects: for each b, the cartesian product over j of the pairs
    // (e_j, iso : b -> p_j(e_j)).
    let mut cones: Vec<ConeObject> = Vec::new();
    for b in base.objects() {
        let mut choices: Vec<Vec<(ObjId, MorId)>> = Vec::with_capacity(family.len());
        for p in family {
            let ec = p.dom().as_ref();
            let mut pairs = Vec::new();
            for e in ec.objects() {
                for &iso in base.hom_set(b, p.on_obj(e)) {
                    if base.is_isomorphism(iso).is_some() {
                        pairs.push((e, iso));
                    }
                }
            }
            choices.push(pairs);
        }
        if choices.iter().any(|c| c.is_empty()) {
            continue;
        }
        let mut idx = vec![0usize; choices.len()];
        loop {
            let parts: Vec<(ObjId, MorId)> =
                idx.iter().zip(&choices).map(|(&i, c)| c[i]).collect();
            if cones.len() >= budget.pspb_objects {
                return Err(Error::BudgetExceeded {
                    what: "pseudopullback cone objects".into(),
                    needed: cones.len() + 1,
                    cap: budget.pspb_objects,
                });
            }
            cones.push(ConeObject { base: b, parts });
            // advance odometer, rightmost fastest
            let mut k = choices.len();
            loop {
                if k == 0 {
                    break;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < choices[k].len() {
                    break;
                }
                idx[k] = 0;
                if k == 0 {
                    k = usize::MAX;
                    break;
                }
            }
            if k == usize::MAX {
                break;
            }
        }
    }

    let object_labels: Vec<String> = cones
        .iter()
        .map(|c| {
            let mut s = base.object_label(c.base).to_string();
            for (j, &(e, iso)) in c.parts.iter().enumerate() {
                s.push('|');
                s.push_str(family[j].dom().object_label(e));
                s.push('~');
                s.push_str(base.morphism_label(iso));
            }
            s
        })
        .collect();
    let mut obj_lookup = BTreeMap::new();
    for (i, c) in cones.iter().enumerate() {
        obj_lookup.insert((c.base, c.parts.clone()), ObjId(i));
    }

    // Morphisms: for each ordered cone pair and each base morphism σ, the
    // component maps are constrained to p_j(σ_j) = iso'_j ∘ σ ∘ iso_j⁻¹;
    // enumerate every tuple of preimages.
    let mut mors: Vec<MorInfo> = Vec::new();
    let mut mor_parts: Vec<(MorId, Vec<MorId>)> = Vec::new();
    let mut mor_lookup = BTreeMap::new();
    let mut charged = 0usize;
    let charge = |charged: &mut usize, amount: usize| -> Result<()> {
        *charged += amount;
        if *charged > budget.pspb_morphisms {
            return Err(Error::BudgetExceeded {
                what: "pseudopullback morphisms and composites".into(),
                needed: *charged,
                cap: budget.pspb_morphisms,
            });
        }
        Ok(())
    };
    for (xi, x) in cones.iter().enumerate() {
        for (yi, y) in cones.iter().enumerate() {
            for &sigma in base.hom_set(x.base, y.base) {
                // per component, all σ_j with the required image
                let mut choices: Vec<Vec<MorId>> = Vec::with_capacity(family.len());
                for (j, p) in family.iter().enumerate() {
                    let (e, iso) = x.parts[j];
                    let (e2, iso2) = y.parts[j];
                    let inv = base
                        .is_isomorphism(iso)
                        .expect("cone components are isomorphisms by construction");
                    let need = base
                        .compose(iso2, sigma)
                        .and_then(|m| base.compose(m, inv))
                        .expect("cone endpoints line up");
                    let ec = p.dom().as_ref();
                    let cands: Vec<MorId> = ec
                        .hom_set(e, e2)
                        .iter()
                        .copied()
                        .filter(|&s| p.on_mor(s) == need)
                        .collect();
                    choices.push(cands);
                }
                if choices.iter().any(|c| c.is_empty()) {
                    continue;
                }
                let mut idx = vec![0usize; choices.len()];
                loop {
                    let parts: Vec<MorId> =
                        idx.iter().zip(&choices).map(|(&i, c)| c[i]).collect();
                    charge(&mut charged, 1)?;
                    let id = MorId(mors.len());
                    let mut label = format!(
                        "{}>{}:{}",
                        xi,
                        yi,
                        base.morphism_label(sigma)
                    );
                    for (j, &s) in parts.iter().enumerate() {
                        label.push('|');
                        label.push_str(family[j].dom().morphism_label(s));
                    }
                    mors.push(MorInfo {
                        src: ObjId(xi),
                        tgt: ObjId(yi),
                        label,
                    });
                    mor_lookup.insert((ObjId(xi), ObjId(yi), parts.clone()), id);
                    mor_parts.push((sigma, parts));
                    let mut k = choices.len();
                    loop {
                        if k == 0 {
                            break;
                        }
                        k -= 1;
                        idx[k] += 1;
                        if idx[k] < choices[k].len() {
                            break;
                        }
                        idx[k] = 0;
                        if k == 0 {
                            k = usize::MAX;
                            break;
                        }
                    }
                    if k == usize::MAX {
                        break;
                    }
                }
            }
        }
    }

    // Identities and composition, componentwise.
    let mut identities = Vec::with_capacity(cones.len());
    for (i, c) in cones.iter().enumerate() {
        let parts: Vec<MorId> = c
            .parts
            .iter()
            .zip(family)
            .map(|(&(e, _), p)| p.dom().identity(e))
            .collect();
        let id = mor_lookup
            .get(&(ObjId(i), ObjId(i), parts))
            .copied()
            .ok_or_else(|| Error::invalid("identity tuple missing from total category"))?;
        identities.push(id);
    }
    let mut by_src: Vec<Vec<MorId>> = vec![Vec::new(); cones.len()];
    for (i, m) in mors.iter().enumerate() {
        by_src[m.src.0].push(MorId(i));
    }
    let mut composition: Vec<((MorId, MorId), MorId)> = Vec::new();
    for (fi, f) in mors.iter().enumerate() {
        for &g in &by_src[f.tgt.0] {
            let (sf, pf) = &mor_parts[fi];
            let (sg, pg) = &mor_parts[g.0];
            let sigma = base
                .compose(*sg, *sf)
                .ok_or_else(|| Error::invalid("base composite missing"))?;
            let mut parts = Vec::with_capacity(pf.len());
            for (j, p) in family.iter().enumerate() {
                let c = p
                    .dom()
                    .compose(pg[j], pf[j])
                    .ok_or_else(|| Error::invalid("component composite missing"))?;
                parts.push(c);
            }
            let gf = mor_lookup
                .get(&(f.src, mors[g.0].tgt, parts))
                .copied()
                .ok_or_else(|| {
                    Error::invalid("total category not closed under composition")
                })?;
            // the square determines the base morphism from the components
            debug_assert_eq!(mor_parts[gf.0].0, sigma);
            charge(&mut charged, 1)?;
            composition.push(((g, MorId(fi)), gf));
        }
    }

    let total = Arc::new(FinCategory::new(
        object_labels,
        mors,
        identities,
        composition,
    )?);

    // Projections, canonical functor, and the invertible comparison
    // transformations; all construction-verified again here.
    let canonical = FunctorData::new(
        Arc::clone(&total),
        Arc::clone(&base),
        cones.iter().map(|c| c.base).collect(),
        mor_parts.iter().map(|(s, _)| *s).collect(),
    )?;
    canonical.validate()?;
    let mut projections = Vec::with_capacity(family.len());
    let mut witnesses = Vec::with_capacity(family.len());
    for (j, p) in family.iter().enumerate() {
        let tau = FunctorData::new(
            Arc::clone(&total),
            Arc::clone(p.dom()),
            cones.iter().map(|c| c.parts[j].0).collect(),
            mor_parts.iter().map(|(_, parts)| parts[j]).collect(),
        )?;
        tau.validate()?;
        let composed = tau.then(p)?;
        let w = NatTrans::new(
            canonical.clone(),
            composed,
            cones.iter().map(|c| c.parts[j].1).collect(),
        )?;
        if !w.is_isomorphism() {
            return Err(Error::invalid(
                "cone components failed the isomorphism re-check",
            ));
        }
        projections.push(tau);
        witnesses.push(w);
    }

    Ok(PseudoPullback {
        components: family.to_vec(),
        total,
        projections,
        canonical,
        witnesses,
        cones,
        mor_parts,
        obj_lookup,
        mor_lookup,
    })
}

/// A candidate pseudopullback square: a corner with two legs over a cospan
/// of functors, commuting up to an invertible natural transformation
/// `witness : down_left ∘ left ⇒ down_right ∘ right`.
#[derive(Clone)]
pub struct PseudoSquare {
    pub left: FunctorData,
    pub right: FunctorData,
    pub down_left: FunctorData,
    pub down_right: FunctorData,
    pub witness: NatTrans,
}

/// Decide whether the square exhibits its corner as the pseudopullback of
/// the cospan: builds the explicit model, forms the comparison functor from
/// the corner, and checks it is an equivalence. `Ok(None)` means the square
/// is not a pseudopullback; the witness proves that it is.
pub fn verify_pseudopullback_square(
    sq: &PseudoSquare,
    budget: &SearchBudget,
) -> Result<Option<EquivalenceWitness>> {
    let corner = Arc::clone(sq.left.dom());
    if !same_category(sq.right.dom(), &corner) {
        return Err(Error::invalid("square legs must share their corner"));
    }
    if !same_category(sq.down_left.cod(), sq.down_right.cod()) {
        return Err(Error::invalid("square cospan must share its codomain"));
    }
    if *sq.witness.src() != sq.left.then(&sq.down_left)?
        || *sq.witness.tgt() != sq.right.then(&sq.down_right)?
    {
        return Err(Error::invalid(
            "square witness must run from down_left∘left to down_right∘right",
        ));
    }
    if !sq.witness.is_isomorphism() {
        return Err(Error::invalid("square witness must be invertible"));
    }
    let pp = pseudopullback(
        &[sq.down_left.clone(), sq.down_right.clone()],
        budget,
    )?;
    let base = sq.down_left.cod();

    // Comparison: x ↦ (p1(q1 x), [(q1 x, id), (q2 x, witness_x)]).
    let mut obj_map = Vec::with_capacity(corner.object_count());
    for x in corner.objects() {
        let b = sq.down_left.on_obj(sq.left.on_obj(x));
        let parts = [
            (sq.left.on_obj(x), base.identity(b)),
            (sq.right.on_obj(x), sq.witness.component(x)),
        ];
        match pp.find_object(b, &parts) {
            Some(o) => obj_map.push(o),
            None => {
                return Err(Error::invalid(
                    "comparison image missing from the explicit model",
                ))
            }
        }
    }
    let mut mor_map = Vec::with_capacity(corner.morphism_count());
    for m in corner.morphisms() {
        let src = obj_map[corner.src(m).0];
        let tgt = obj_map[corner.tgt(m).0];
        let parts = [sq.left.on_mor(m), sq.right.on_mor(m)];
        match pp.find_morphism(src, tgt, &parts) {
            Some(t) => mor_map.push(t),
            None => {
                return Err(Error::invalid(
                    "comparison image of a morphism missing from the model",
                ))
            }
        }
    }
    let comparison = FunctorData::new(
        Arc::clone(&corner),
        Arc::clone(&pp.total),
        obj_map,
        mor_map,
    )?;
    comparison.validate()?;
    if !is_fully_faithful(&comparison) || !is_essentially_surjective(&comparison) {
        return Ok(None);
    }
    Ok(Some(witness_from_half(&comparison)?))
}
