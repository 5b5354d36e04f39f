//! Freely adjoining an initial object, and the bridge decomposition.
//!
//! `join_one(C)` builds the category `C` plus one new object `zero` with
//! exactly one morphism `zero -> x` for every object `x` (and nothing into
//! `zero` but its identity). A functor into a joined category — a *bridge* —
//! is the same thing as a partition of its domain into a part mapped onto
//! `zero` and a part mapped into the embedded copy, with no morphisms from
//! the plus part back into the minus part; `decompose_bridge` and
//! `assemble_bridge` convert between the two presentations exactly, and the
//! decomposition's defining square is re-verified as a pseudopullback.

use std::sync::Arc;

use crate::budget::SearchBudget;
use crate::category::{FinCategory, MorId, MorInfo, ObjId};
use crate::equivalence::{
    is_essentially_surjective, is_fully_faithful, witness_from_half, EquivalenceWitness,
};
use crate::error::{Error, Result};
use crate::functor::{full_subcategory, same_category, FunctorData, NatTrans};
use crate::pseudopullback::{pseudopullback, verify_pseudopullback_square, PseudoSquare};

/// A category with a distinguished freely-adjoined initial object.
#[derive(Debug, Clone)]
pub struct JoinedCategory {
    pub inner: Arc<FinCategory>,
    pub joined: Arc<FinCategory>,
    /// The adjoined strictly-initial object.
    pub zero: ObjId,
    /// Full and faithful inclusion of `inner` onto the complement of `zero`.
    pub embed: FunctorData,
    obj_back: Vec<Option<ObjId>>,
    mor_back: Vec<Option<MorId>>,
}

impl JoinedCategory {
    /// The inner object a joined object came from (`None` for `zero`).
    pub fn inner_of_obj(&self, o: ObjId) -> Option<ObjId> {
        self.obj_back[o.0]
    }

    /// The inner morphism a joined morphism came from (`None` for the
    /// adjoined morphisms and `id_zero`).
    pub fn inner_of_mor(&self, m: MorId) -> Option<MorId> {
        self.mor_back[m.0]
    }

    /// The unique morphism `zero -> x`.
    pub fn from_zero(&self, x: ObjId) -> MorId {
        self.joined.hom_set(self.zero, x)[0]
    }
}

fn fresh_label(taken: &dyn Fn(&str) -> bool, base: String) -> String {
    let mut label = base;
    while taken(&label) {
        label.push('_');
    }
    label
}

/// Adjoin a free initial object to `c`. The new object takes the highest
/// index, so the embedding preserves indices; the adjoined morphisms
/// `zero -> x` follow the original morphisms in object order, and `id_zero`
/// comes last.
pub fn join_one(c: &Arc<FinCategory>) -> JoinedCategory {
    let n = c.object_count();
    let m = c.morphism_count();
    let mut labels: Vec<String> = c.objects().map(|o| c.object_label(o).to_string()).collect();
    labels.push(fresh_label(
        &|s| c.object_by_label(s).is_some(),
        "zero".to_string(),
    ));
    let zero = ObjId(n);

    let mut mors: Vec<MorInfo> = c
        .morphisms()
        .map(|f| MorInfo {
            src: c.src(f),
            tgt: c.tgt(f),
            label: c.morphism_label(f).to_string(),
        })
        .collect();
    for o in c.objects() {
        mors.push(MorInfo {
            src: zero,
            tgt: o,
            label: fresh_label(
                &|s| c.morphism_by_label(s).is_some(),
                format!("z_{}", c.object_label(o)),
            ),
        });
    }
    mors.push(MorInfo {
        src: zero,
        tgt: zero,
        label: fresh_label(&|s| c.morphism_by_label(s).is_some(), "id_zero".to_string()),
    });
    let id_zero = MorId(m + n);

    let mut identities: Vec<MorId> = c.objects().map(|o| c.identity(o)).collect();
    identities.push(id_zero);

    let z = |o: ObjId| MorId(m + o.0);
    let mut composition = c.composition_pairs();
    for f in c.morphisms() {
        composition.push(((f, z(c.src(f))), z(c.tgt(f))));
    }
    for o in c.objects() {
        composition.push(((z(o), id_zero), z(o)));
    }
    composition.push(((id_zero, id_zero), id_zero));

    let joined = Arc::new(
        FinCategory::new(labels, mors, identities, composition)
            .expect("join of a valid category is valid"),
    );
    let embed = FunctorData::new(
        Arc::clone(c),
        Arc::clone(&joined),
        c.objects().collect(),
        c.morphisms().collect(),
    )
    .expect("index-preserving embedding");
    let obj_back = (0..n + 1)
        .map(|i| if i < n { Some(ObjId(i)) } else { None })
        .collect();
    let mor_back = (0..m + n + 1)
        .map(|i| if i < m { Some(MorId(i)) } else { None })
        .collect();
    JoinedCategory {
        inner: Arc::clone(c),
        joined,
        zero,
        embed,
        obj_back,
        mor_back,
    }
}

/// Recognize an arbitrary category as a joined one: find the strictly
/// initial object and present the complement as the inner category.
pub fn recognize_join(c: &Arc<FinCategory>) -> Result<JoinedCategory> {
    let mut zero = None;
    'outer: for z in c.objects() {
        for x in c.objects() {
            if c.hom_set(z, x).len() != 1 {
                continue 'outer;
            }
            if x != z && !c.hom_set(x, z).is_empty() {
                continue 'outer;
            }
        }
        zero = Some(z);
        break;
    }
    let zero = zero.ok_or_else(|| {
        Error::MalformedJoin("no strictly initial object found".into())
    })?;
    let rest: Vec<ObjId> = c.objects().filter(|&o| o != zero).collect();
    let (inner, embed) = full_subcategory(c, &rest)?;
    let mut obj_back = vec![None; c.object_count()];
    for (i, &o) in rest.iter().enumerate() {
        obj_back[o.0] = Some(ObjId(i));
    }
    let mut mor_back = vec![None; c.morphism_count()];
    for (i, &m) in embed.mor_table().iter().enumerate() {
        mor_back[m.0] = Some(MorId(i));
    }
    Ok(JoinedCategory {
        inner,
        joined: Arc::clone(c),
        zero,
        embed,
        obj_back,
        mor_back,
    })
}

/// A functor together with the joins of its endpoints and its extension
/// between them.
#[derive(Debug, Clone)]
pub struct JoinedFunctor {
    pub dom: JoinedCategory,
    pub cod: JoinedCategory,
    /// The extension: restricts to the original functor on the embedded
    /// copies and sends `zero` to `zero`.
    pub functor: FunctorData,
}

/// Extend `p` over the joins of its domain and codomain.
pub fn join_functor(p: &FunctorData) -> JoinedFunctor {
    let dom = join_one(p.dom());
    let cod = join_one(p.cod());
    let n = p.dom().object_count();
    let m_cod = p.cod().morphism_count();
    let mut obj_map: Vec<ObjId> = p.obj_table().to_vec();
    obj_map.push(cod.zero);
    let mut mor_map: Vec<MorId> = p.mor_table().to_vec();
    for o in 0..n {
        // adjoined zero -> o goes to the adjoined zero -> p(o)
        mor_map.push(MorId(m_cod + p.on_obj(ObjId(o)).0));
    }
    mor_map.push(MorId(m_cod + p.cod().object_count())); // id_zero
    let functor = FunctorData::new(
        Arc::clone(&dom.joined),
        Arc::clone(&cod.joined),
        obj_map,
        mor_map,
    )
    .expect("join extension is a functor");
    debug_assert!(functor.violations().is_empty());
    JoinedFunctor { dom, cod, functor }
}

/// A bridge functor presented as a partition plus a functor on the plus
/// part.
#[derive(Debug, Clone)]
pub struct BridgeDecomposition {
    pub ambient: Arc<FinCategory>,
    /// Objects mapped to `zero`, ascending.
    pub a_minus: Vec<ObjId>,
    /// The complement, ascending.
    pub a_plus: Vec<ObjId>,
    /// Full subcategory on `a_plus`.
    pub plus_part: Arc<FinCategory>,
    /// Inclusion of the plus part into the ambient category.
    pub plus_embed: FunctorData,
    /// The functor's restriction, landing in the inner category.
    pub f_plus: FunctorData,
}

/// Decompose a functor into a joined category. The defining square
/// (plus part over the cospan `f`, `embed`) is re-verified to be a
/// pseudopullback; `budget` governs that check.
pub fn decompose_bridge(
    f: &FunctorData,
    j: &JoinedCategory,
    budget: &SearchBudget,
) -> Result<BridgeDecomposition> {
    if !same_category(f.cod(), &j.joined) {
        return Err(Error::MalformedJoin(
            "functor codomain is not the given joined category".into(),
        ));
    }
    let a = f.dom();
    let a_minus: Vec<ObjId> = a.objects().filter(|&o| f.on_obj(o) == j.zero).collect();
    let a_plus: Vec<ObjId> = a.objects().filter(|&o| f.on_obj(o) != j.zero).collect();
    // Structurally impossible for a functor into a join, since nothing maps
    // into zero; asserted for the partition contract all the same.
    for m in a.morphisms() {
        if a_plus.binary_search(&a.src(m)).is_ok() && a_minus.binary_search(&a.tgt(m)).is_ok()
        {
            return Err(Error::InvalidPartition {
                reason: format!(
                    "morphism {} runs from the plus part to the minus part",
                    a.morphism_label(m)
                ),
            });
        }
    }
    let (plus_part, plus_embed) = full_subcategory(a, &a_plus)?;
    let obj_map: Vec<ObjId> = plus_embed
        .obj_table()
        .iter()
        .map(|&o| {
            j.inner_of_obj(f.on_obj(o))
                .expect("plus-part object lands in the embedded copy")
        })
        .collect();
    let mor_map: Vec<MorId> = plus_embed
        .mor_table()
        .iter()
        .map(|&m| {
            j.inner_of_mor(f.on_mor(m))
                .expect("plus-part morphism lands in the embedded copy")
        })
        .collect();
    let f_plus = FunctorData::new(
        Arc::clone(&plus_part),
        Arc::clone(&j.inner),
        obj_map,
        mor_map,
    )?;
    f_plus.validate()?;

    // The lemma's square: the plus part is the pseudopullback of the
    // cospan (f, embed), witnessed by identities.
    let witness = NatTrans::new(
        plus_embed.then(f)?,
        f_plus.then(&j.embed)?,
        plus_embed
            .obj_table()
            .iter()
            .map(|&o| j.joined.identity(f.on_obj(o)))
            .collect(),
    )?;
    let square = PseudoSquare {
        left: plus_embed.clone(),
        right: f_plus.clone(),
        down_left: f.clone(),
        down_right: j.embed.clone(),
        witness,
    };
    match verify_pseudopullback_square(&square, budget)? {
        Some(_) => {}
        None => {
            return Err(Error::CertificateMismatch(
                "bridge square failed its pseudopullback verification".into(),
            ))
        }
    }
    Ok(BridgeDecomposition {
        ambient: Arc::clone(a),
        a_minus,
        a_plus,
        plus_part,
        plus_embed,
        f_plus,
    })
}

/// Rebuild the bridge functor from a partition and a plus-part functor.
/// `f_plus` must be defined on the full subcategory of `ambient` on the
/// complement of `a_minus` and land in `j.inner`.
pub fn assemble_bridge(
    j: &JoinedCategory,
    ambient: &Arc<FinCategory>,
    a_minus: &[ObjId],
    f_plus: &FunctorData,
) -> Result<FunctorData> {
    let mut minus = a_minus.to_vec();
    minus.sort_unstable();
    minus.dedup();
    if minus.len() != a_minus.len() {
        return Err(Error::InvalidPartition {
            reason: "minus part must be strictly ascending".into(),
        });
    }
    if let Some(o) = minus.iter().find(|o| o.0 >= ambient.object_count()) {
        return Err(Error::InvalidPartition {
            reason: format!("object {o} out of range"),
        });
    }
    let a_plus: Vec<ObjId> = ambient
        .objects()
        .filter(|o| minus.binary_search(o).is_err())
        .collect();
    for m in ambient.morphisms() {
        if a_plus.binary_search(&ambient.src(m)).is_ok()
            && minus.binary_search(&ambient.tgt(m)).is_ok()
        {
            return Err(Error::InvalidPartition {
                reason: format!(
                    "morphism {} runs from the plus part to the minus part",
                    ambient.morphism_label(m)
                ),
            });
        }
    }
    let (plus_part, plus_embed) = full_subcategory(ambient, &a_plus)?;
    if !same_category(f_plus.dom(), &plus_part) {
        return Err(Error::InvalidPartition {
            reason: "plus-part functor domain does not match the full subcategory".into(),
        });
    }
    if !same_category(f_plus.cod(), &j.inner) {
        return Err(Error::InvalidPartition {
            reason: "plus-part functor must land in the inner category".into(),
        });
    }
    let mut plus_pos = vec![None; ambient.object_count()];
    for (i, &o) in a_plus.iter().enumerate() {
        plus_pos[o.0] = Some(ObjId(i));
    }
    let mut mor_pos = vec![None; ambient.morphism_count()];
    for (i, &m) in plus_embed.mor_table().iter().enumerate() {
        mor_pos[m.0] = Some(MorId(i));
    }
    let obj_map: Vec<ObjId> = ambient
        .objects()
        .map(|o| match plus_pos[o.0] {
            Some(i) => j.embed.on_obj(f_plus.on_obj(i)),
            None => j.zero,
        })
        .collect();
    let mor_map: Vec<MorId> = ambient
        .morphisms()
        .map(|m| match mor_pos[m.0] {
            Some(i) => j.embed.on_mor(f_plus.on_mor(i)),
            None => {
                let t = obj_map[ambient.tgt(m).0];
                if t == j.zero {
                    j.joined.identity(j.zero)
                } else {
                    j.from_zero(t)
                }
            }
        })
        .collect();
    let f = FunctorData::new(
        Arc::clone(ambient),
        Arc::clone(&j.joined),
        obj_map,
        mor_map,
    )?;
    f.validate()?;
    Ok(f)
}

/// Does joining commute with the pseudopullback of this family? Builds both
/// sides and verifies the canonical comparison functor from the join of the
/// pseudopullback to the pseudopullback of the joined family; the witness
/// is the proof.
pub fn check_join_preserves_pseudopullback(
    family: &[FunctorData],
    budget: &SearchBudget,
) -> Result<Option<EquivalenceWitness>> {
    let pp = pseudopullback(family, budget)?;
    let jpp = join_one(&pp.total);
    let joined: Vec<JoinedFunctor> = family.iter().map(join_functor).collect();
    let jf: Vec<FunctorData> = joined.iter().map(|jf| jf.functor.clone()).collect();
    let pp2 = pseudopullback(&jf, budget)?;
    let bj = &joined[0].cod; // join of the common codomain

    // Comparison on objects: embedded cones keep their data (indices are
    // preserved by the embeddings); zero goes to the all-zero cone.
    let mut obj_map = Vec::with_capacity(jpp.joined.object_count());
    for o in jpp.joined.objects() {
        let target = match jpp.inner_of_obj(o) {
            Some(inner) => {
                let cone = pp.cone(inner);
                let parts: Vec<(ObjId, MorId)> = cone.parts.clone();
                pp2.find_object(cone.base, &parts)
            }
            None => {
                let parts: Vec<(ObjId, MorId)> = joined
                    .iter()
                    .map(|jf| {
                        (
                            jf.dom.zero,
                            bj.joined.identity(bj.zero),
                        )
                    })
                    .collect();
                pp2.find_object(bj.zero, &parts)
            }
        };
        match target {
            Some(t) => obj_map.push(t),
            None => {
                return Err(Error::CertificateMismatch(
                    "comparison object missing from the joined pseudopullback".into(),
                ))
            }
        }
    }
    let mut mor_map = Vec::with_capacity(jpp.joined.morphism_count());
    for m in jpp.joined.morphisms() {
        let src = obj_map[jpp.joined.src(m).0];
        let tgt = obj_map[jpp.joined.tgt(m).0];
        let parts: Vec<MorId> = match jpp.inner_of_mor(m) {
            Some(inner) => {
                let (_, ps) = pp.parts_of(inner);
                ps.to_vec()
            }
            None => {
                // adjoined morphism zero -> cone (or id_zero): component j is
                // the unique joined morphism out of zero
                joined
                    .iter()
                    .enumerate()
                    .map(|(jdx, jf)| {
                        let e = pp2.cone(tgt).parts[jdx].0;
                        if e == jf.dom.zero {
                            jf.dom.joined.identity(jf.dom.zero)
                        } else {
                            jf.dom.from_zero(e)
                        }
                    })
                    .collect()
            }
        };
        match pp2.find_morphism(src, tgt, &parts) {
            Some(t) => mor_map.push(t),
            None => {
                return Err(Error::CertificateMismatch(
                    "comparison morphism missing from the joined pseudopullback".into(),
                ))
            }
        }
    }
    let comparison = FunctorData::new(
        Arc::clone(&jpp.joined),
        Arc::clone(&pp2.total),
        obj_map,
        mor_map,
    )?;
    comparison.validate()?;
    if !is_fully_faithful(&comparison) || !is_essentially_surjective(&comparison) {
        return Ok(None);
    }
    Ok(Some(witness_from_half(&comparison)?))
}
