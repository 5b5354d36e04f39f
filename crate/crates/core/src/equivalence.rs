//! Equivalence checking between finite categories.
//!
//! A functor is half of an equivalence exactly when it is fully faithful and
//! essentially surjective, and in that case a quasi-inverse can be read off
//! directly. So the search enumerates functors (with incremental pruning),
//! tests those two properties, and *constructs* the full witness — two
//! functors and the two natural isomorphisms — rather than searching for all
//! four pieces blindly. Every constructed piece is re-verified on the way
//! out by the `FunctorData`/`NatTrans` constructors.

use std::sync::Arc;

use crate::budget::SearchBudget;
use crate::category::{FinCategory, MorId, ObjId};
use crate::error::{Error, Result};
use crate::functor::{FunctorData, NatTrans};

/// A verified equivalence: both directions and both round-trip
/// isomorphisms (each pointing at the identity functor).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceWitness {
    pub forward: FunctorData,
    pub backward: FunctorData,
    /// `backward ∘ forward ⇒ Id` on the domain.
    pub roundtrip_dom: NatTrans,
    /// `forward ∘ backward ⇒ Id` on the codomain.
    pub roundtrip_cod: NatTrans,
}

/// Search for an equivalence between two categories.
///
/// Candidate functors are enumerated in object-table order, then
/// morphism-table order; the first fully faithful, essentially surjective
/// candidate is completed into a witness. `Ok(None)` means the exhaustive
/// search finished with no equivalence. Category sizes are capped by
/// `budget.equiv_objects` / `equiv_morphisms`, and the number of search
/// nodes by `budget.equiv_candidates`.
pub fn check_equivalence(
    c: &Arc<FinCategory>,
    d: &Arc<FinCategory>,
    budget: &SearchBudget,
) -> Result<Option<EquivalenceWitness>> {
    for (cat, name) in [(c, "domain"), (d, "codomain")] {
        if cat.object_count() > budget.equiv_objects {
            return Err(Error::BudgetExceeded {
                what: format!("equivalence search over the {name} category's objects"),
                needed: cat.object_count(),
                cap: budget.equiv_objects,
            });
        }
        if cat.morphism_count() > budget.equiv_morphisms {
            return Err(Error::BudgetExceeded {
                what: format!("equivalence search over the {name} category's morphisms"),
                needed: cat.morphism_count(),
                cap: budget.equiv_morphisms,
            });
        }
    }

    // Cheap necessary condition: matching counts of isomorphism classes.
    if iso_class_count(c) != iso_class_count(d) {
        return Ok(None);
    }

    let mut nodes = 0usize;
    let mut found: Option<FunctorData> = None;
    enumerate_functors(c, d, budget, &mut nodes, &mut |f| {
        if is_fully_faithful(f) && is_essentially_surjective(f) {
            found = Some(f.clone());
            true // stop
        } else {
            false
        }
    })?;

    match found {
        None => Ok(None),
        Some(f) => Ok(Some(witness_from_half(&f)?)),
    }
}

/// Convenience wrapper: just the verdict.
pub fn are_equivalent(
    c: &Arc<FinCategory>,
    d: &Arc<FinCategory>,
    budget: &SearchBudget,
) -> Result<bool> {
    Ok(check_equivalence(c, d, budget)?.is_some())
}

fn iso_class_count(c: &FinCategory) -> usize {
    let mut reps: Vec<ObjId> = Vec::new();
    for o in c.objects() {
        if !reps.iter().any(|&r| c.find_isomorphism(r, o).is_some()) {
            reps.push(o);
        }
    }
    reps.len()
}

/// Is the hom-set map of `f` bijective for every pair of objects?
pub fn is_fully_faithful(f: &FunctorData) -> bool {
    let c = f.dom().as_ref();
    let d = f.cod().as_ref();
    for a in c.objects() {
        for b in c.objects() {
            let hom = c.hom_set(a, b);
            let mut images: Vec<MorId> = hom.iter().map(|&m| f.on_mor(m)).collect();
            images.sort_unstable();
            images.dedup();
            if images.len() != hom.len()
                || images.len() != d.hom_set(f.on_obj(a), f.on_obj(b)).len()
            {
                return false;
            }
        }
    }
    true
}

/// Is every codomain object isomorphic to an object in the image of `f`?
pub fn is_essentially_surjective(f: &FunctorData) -> bool {
    let c = f.dom().as_ref();
    let d = f.cod().as_ref();
    d.objects().all(|y| {
        c.objects()
            .any(|a| d.find_isomorphism(f.on_obj(a), y).is_some())
    })
}

/// Complete a fully faithful, essentially surjective functor into a full
/// equivalence witness. Errs with `CertificateMismatch` if the premises do
/// not actually hold.
pub fn witness_from_half(f: &FunctorData) -> Result<EquivalenceWitness> {
    let c = f.dom();
    let d = f.cod();

    let unique_preimage = |a: ObjId, b: ObjId, target: MorId| -> Result<MorId> {
        let mut hits = c
            .hom_set(a, b)
            .iter()
            .copied()
            .filter(|&m| f.on_mor(m) == target);
        match (hits.next(), hits.next()) {
            (Some(m), None) => Ok(m),
            _ => Err(Error::CertificateMismatch(format!(
                "functor is not fully faithful at {}",
                d.morphism_label(target)
            ))),
        }
    };

    // backward on objects: least preimage up to isomorphism, with the
    // least witnessing isomorphism forward(back(y)) -> y.
    let mut back_obj = Vec::with_capacity(d.object_count());
    let mut cod_components = Vec::with_capacity(d.object_count());
    for y in d.objects() {
        let hit = c
            .objects()
            .find_map(|a| d.find_isomorphism(f.on_obj(a), y).map(|iso| (a, iso)));
        let (a, iso) = hit.ok_or_else(|| {
            Error::CertificateMismatch(format!(
                "no object maps near {} — not essentially surjective",
                d.object_label(y)
            ))
        })?;
        back_obj.push(a);
        cod_components.push(iso);
    }

    // backward on morphisms: the unique lift of xi_y'⁻¹ ∘ g ∘ xi_y.
    let mut back_mor = Vec::with_capacity(d.morphism_count());
    for g in d.morphisms() {
        let (y, y2) = (d.src(g), d.tgt(g));
        let xi = cod_components[y.0];
        let xi2_inv = d
            .is_isomorphism(cod_components[y2.0])
            .ok_or_else(|| Error::CertificateMismatch("witness component not invertible".into()))?;
        let conj = d
            .compose_path(&[xi, g, xi2_inv])
            .ok_or_else(|| Error::CertificateMismatch("conjugation does not compose".into()))?;
        back_mor.push(unique_preimage(back_obj[y.0], back_obj[y2.0], conj)?);
    }
    let backward = FunctorData::new(Arc::clone(d), Arc::clone(c), back_obj, back_mor)?;
    backward.validate()?;

    // Round-trip on the codomain: components are the xi_y themselves.
    let fb = backward.then(f)?;
    let roundtrip_cod = NatTrans::new(fb, FunctorData::identity(d), cod_components.clone())?;

    // Round-trip on the domain: the unique lifts of xi_{f(a)}.
    let mut dom_components = Vec::with_capacity(c.object_count());
    for a in c.objects() {
        let y = f.on_obj(a);
        dom_components.push(unique_preimage(backward.on_obj(y), a, cod_components[y.0])?);
    }
    let bf = f.then(&backward)?;
    let roundtrip_dom = NatTrans::new(bf, FunctorData::identity(c), dom_components)?;

    if !roundtrip_dom.is_isomorphism() || !roundtrip_cod.is_isomorphism() {
        return Err(Error::CertificateMismatch(
            "round-trip transformation is not invertible".into(),
        ));
    }

    Ok(EquivalenceWitness {
        forward: f.clone(),
        backward,
        roundtrip_dom,
        roundtrip_cod,
    })
}

/// Enumerate all functors `c -> d` in (object table, morphism table) order,
/// feeding each to `visit`; stop early when `visit` returns true.
///
/// Identity morphisms are never assigned explicitly — they are forced by
/// the object table. Composition constraints are checked as soon as all
/// three participants of a composable pair are assigned.
pub fn enumerate_functors(
    c: &Arc<FinCategory>,
    d: &Arc<FinCategory>,
    budget: &SearchBudget,
    nodes: &mut usize,
    visit: &mut dyn FnMut(&FunctorData) -> bool,
) -> Result<bool> {
    let n = c.object_count();
    let non_ids: Vec<MorId> = c.morphisms().filter(|&m| !c.is_identity(m)).collect();

    // Composition triples among non-identity morphisms, indexed by the
    // *position* of each participant in `non_ids` (usize::MAX = identity /
    // not applicable — the constraint is then handled by endpoint forcing).
    let pos_of = {
        let mut v = vec![usize::MAX; c.morphism_count()];
        for (i, &m) in non_ids.iter().enumerate() {
            v[m.0] = i;
        }
        v
    };
    let mut triples: Vec<(usize, usize, usize, MorId, MorId, MorId)> = Vec::new();
    for &fm in &non_ids {
        for &gm in c.morphisms_from(c.tgt(fm)) {
            if c.is_identity(gm) {
                continue;
            }
            let gf = c.compose(gm, fm).expect("validated category");
            if c.is_identity(gf) {
                // still a constraint: images must compose to an identity
                triples.push((pos_of[gm.0], pos_of[fm.0], usize::MAX, gm, fm, gf));
            } else {
                triples.push((pos_of[gm.0], pos_of[fm.0], pos_of[gf.0], gm, fm, gf));
            }
        }
    }

    let mut obj_map = vec![ObjId(0); n];
    let mut mor_assign: Vec<Option<MorId>> = vec![None; non_ids.len()];

    struct MorAssign<'a> {
        c: &'a Arc<FinCategory>,
        d: &'a Arc<FinCategory>,
        budget: &'a SearchBudget,
        non_ids: &'a [MorId],
        triples: &'a [(usize, usize, usize, MorId, MorId, MorId)],
        obj_map: &'a [ObjId],
    }

    impl MorAssign<'_> {
        fn run(
            &self,
            nodes: &mut usize,
            visit: &mut dyn FnMut(&FunctorData) -> bool,
            mor_assign: &mut Vec<Option<MorId>>,
            i: usize,
        ) -> Result<bool> {
            let (c, d) = (self.c, self.d);
            if i == self.non_ids.len() {
                let mut mor_map = vec![MorId(0); c.morphism_count()];
                for o in c.objects() {
                    mor_map[c.identity(o).0] = d.identity(self.obj_map[o.0]);
                }
                for (j, &m) in self.non_ids.iter().enumerate() {
                    mor_map[m.0] = mor_assign[j].unwrap();
                }
                let f = FunctorData::new(
                    Arc::clone(c),
                    Arc::clone(d),
                    self.obj_map.to_vec(),
                    mor_map,
                )?;
                debug_assert!(f.validate().is_ok());
                return Ok(visit(&f));
            }
            let m = self.non_ids[i];
            let candidates: Vec<MorId> = d
                .hom_set(self.obj_map[c.src(m).0], self.obj_map[c.tgt(m).0])
                .to_vec();
            'cands: for v in candidates {
                *nodes += 1;
                if *nodes > self.budget.equiv_candidates {
                    return Err(Error::BudgetExceeded {
                        what: "enumerating functor candidates".into(),
                        needed: *nodes,
                        cap: self.budget.equiv_candidates,
                    });
                }
                mor_assign[i] = Some(v);
                for &(pg, pf, pgf, _gm, _fm, gf) in self.triples {
                    let Some(ig) = mor_assign[pg] else { continue };
                    let Some(if_) = mor_assign[pf] else { continue };
                    let want = if pgf == usize::MAX {
                        d.identity(self.obj_map[c.src(gf).0])
                    } else {
                        match mor_assign[pgf] {
                            Some(x) => x,
                            None => continue,
                        }
                    };
                    if d.compose(ig, if_) != Some(want) {
                        mor_assign[i] = None;
                        continue 'cands;
                    }
                }
                if self.run(nodes, visit, mor_assign, i + 1)? {
                    return Ok(true);
                }
                mor_assign[i] = None;
            }
            Ok(false)
        }
    }

    // Odometer over object assignments.
    let dn = d.object_count();
    if n == 0 {
        let f = FunctorData::new(Arc::clone(c), Arc::clone(d), vec![], vec![])?;
        return Ok(visit(&f));
    }
    if dn == 0 {
        return Ok(false);
    }
    loop {
        *nodes += 1;
        if *nodes > budget.equiv_candidates {
            return Err(Error::BudgetExceeded {
                what: "enumerating functor candidates".into(),
                needed: *nodes,
                cap: budget.equiv_candidates,
            });
        }
        let search = MorAssign {
            c,
            d,
            budget,
            non_ids: &non_ids,
            triples: &triples,
            obj_map: &obj_map,
        };
        if search.run(nodes, visit, &mut mor_assign, 0)? {
            return Ok(true);
        }
        // increment odometer
        let mut j = 0;
        loop {
            obj_map[j].0 += 1;
            if obj_map[j].0 < dn {
                break;
            }
            obj_map[j] = ObjId(0);
            j += 1;
            if j == n {
                return Ok(false);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::CategoryBuilder;
    use crate::instances::{discrete, walking_arrow, FinSetCat};

    /// Two objects joined by a pair of mutually inverse morphisms.
    fn walking_iso() -> Arc<FinCategory> {
        let mut b = CategoryBuilder::new();
        let a = b.object("a");
        let z = b.object("b");
        let ia = b.identity(a, "1a");
        let iz = b.identity(z, "1b");
        let u = b.morphism("u", a, z);
        let v = b.morphism("v", z, a);
        b.compose_rule(u, v, iz);
        b.compose_rule(v, u, ia);
        Arc::new(b.build().unwrap())
    }

    #[test]
    fn category_is_equivalent_to_itself() {
        let c = walking_arrow();
        let w = check_equivalence(&c, &c, &SearchBudget::default())
            .unwrap()
            .expect("identity equivalence");
        assert_eq!(w.forward, FunctorData::identity(&c));
        assert!(w.roundtrip_dom.is_isomorphism());
        assert!(w.roundtrip_cod.is_isomorphism());
    }

    #[test]
    fn walking_iso_collapses_to_a_point() {
        let c = walking_iso();
        let pt = discrete(1);
        let w = check_equivalence(&c, &pt, &SearchBudget::default())
            .unwrap()
            .expect("contractible groupoid is equivalent to the point");
        // Both objects land on the point; the backward functor picks the
        // least preimage; round-trips are isos by construction.
        assert_eq!(w.backward.on_obj(ObjId(0)), ObjId(0));
        assert!(w.roundtrip_dom.is_isomorphism());

        // And the other way round, with the point as domain.
        assert!(are_equivalent(&pt, &c, &SearchBudget::default()).unwrap());
    }

    #[test]
    fn discrete_categories_of_different_size_differ() {
        let d2 = discrete(2);
        let d1 = discrete(1);
        assert!(!are_equivalent(&d2, &d1, &SearchBudget::default()).unwrap());
        assert!(!are_equivalent(&d1, &d2, &SearchBudget::default()).unwrap());
        assert!(are_equivalent(&d2, &d2, &SearchBudget::default()).unwrap());
    }

    #[test]
    fn truncated_sets_at_one_are_the_walking_arrow() {
        let fs = FinSetCat::new(1);
        let w = walking_arrow();
        let witness = check_equivalence(&fs.cat, &w, &SearchBudget::default())
            .unwrap()
            .expect("one non-identity arrow each way");
        assert!(witness.forward.validate().is_ok());
        assert!(witness.backward.validate().is_ok());
    }

    #[test]
    fn arrow_is_not_equivalent_to_the_point_or_the_pair() {
        let w = walking_arrow();
        assert!(!are_equivalent(&w, &discrete(1), &SearchBudget::default()).unwrap());
        assert!(!are_equivalent(&w, &discrete(2), &SearchBudget::default()).unwrap());
    }

    #[test]
    fn oversized_input_is_a_budget_error() {
        let d6 = discrete(6);
        match check_equivalence(&d6, &d6, &SearchBudget::default()) {
            Err(Error::BudgetExceeded { cap: 5, .. }) => {}
            other => panic!("expected object-budget refusal, got {other:?}"),
        }
    }

    #[test]
    fn functor_enumeration_counts_match_hand_counts() {
        // Functors from the walking arrow into itself: pick two objects
        // x <= y (3 monotone pairs) — each determines the arrow image.
        let w = walking_arrow();
        let mut count = 0usize;
        let mut nodes = 0;
        enumerate_functors(&w, &w, &SearchBudget::generous(), &mut nodes, &mut |_| {
            count += 1;
            false
        })
        .unwrap();
        assert_eq!(count, 3);

        // Functors discrete(2) -> walking arrow: 4 object assignments.
        let d2 = discrete(2);
        count = 0;
        nodes = 0;
        enumerate_functors(&d2, &w, &SearchBudget::generous(), &mut nodes, &mut |_| {
            count += 1;
            false
        })
        .unwrap();
        assert_eq!(count, 4);
    }
}
