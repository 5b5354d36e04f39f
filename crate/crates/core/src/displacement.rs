//! The direct displacement search.
//!
//! Given `p : E -> B`, an object `e` of `E`, and `eps : p(e) -> b` in `B`,
//! a *displacement* of `e` along `eps` is a morphism `unit : e -> apex`
//! together with `base_unit : b -> p(apex)` satisfying
//! `p(unit) = base_unit ∘ eps`, such that for every `h : e -> d` and every
//! `q : b -> p(d)` with `q ∘ eps = p(h)` there is exactly one `t : apex -> d`
//! with `t ∘ unit = h` and `p(t) ∘ base_unit = q`.
//!
//! Equivalently: the assignment `t ↦ p(t) ∘ base_unit` is, for every `h`, a
//! bijection from `{t | t ∘ unit = h}` onto `{q | q ∘ eps = p(h)}`, natural
//! in `h`. The search enumerates candidate pairs in ascending id order and
//! returns the first pair for which every bijection holds; the bijection
//! family's naturality squares are then re-verified literally, although they
//! are forced by functoriality.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::budget::SearchBudget;
use crate::category::{FinCategory, MorId, MorInfo, ObjId};
use crate::error::{Error, Result};
use crate::functor::FunctorData;

/// Search effort counters, reported with every result.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Certificate {
    /// Candidate unit morphisms examined.
    pub comma_objects: usize,
    /// Candidate (unit, base unit) pairs examined.
    pub candidates_examined: usize,
    /// Individual bijection elements checked.
    pub bijection_pairs: usize,
    /// Naturality squares verified literally on the accepted candidate.
    pub naturality_checks: usize,
}

/// A verified displacement of `source` along `along`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisplacementResult {
    pub source: ObjId,
    /// `along : p(source) -> b`, in the codomain of `p`.
    pub along: MorId,
    /// `unit : source -> apex`, in the domain of `p`.
    pub unit: MorId,
    pub apex: ObjId,
    /// `base_unit : b -> p(apex)`, with `p(unit) = base_unit ∘ along`.
    pub base_unit: MorId,
    pub certificate: Certificate,
}

fn check_inputs(p: &FunctorData, e: ObjId, eps: MorId) -> Result<()> {
    let ec = p.dom();
    let bc = p.cod();
    if e.0 >= ec.object_count() {
        return Err(Error::invalid(format!("object {e} out of range")));
    }
    if eps.0 >= bc.morphism_count() {
        return Err(Error::invalid(format!("morphism {eps} out of range")));
    }
    if bc.src(eps) != p.on_obj(e) {
        return Err(Error::invalid(format!(
            "displacement direction must start at the image of {:?}",
            ec.object_label(e)
        )));
    }
    Ok(())
}

/// Does `(alpha, u)` satisfy every bijection? Counts work into `cert`.
fn candidate_ok(
    p: &FunctorData,
    e: ObjId,
    eps: MorId,
    alpha: MorId,
    u: MorId,
    cert: &mut Certificate,
) -> bool {
    let ec = p.dom().as_ref();
    let bc = p.cod().as_ref();
    let x = ec.tgt(alpha);
    let b = bc.tgt(eps);
    for &h in ec.morphisms_from(e) {
        let d = ec.tgt(h);
        let ph = p.on_mor(h);
        // images of {t | t∘alpha = h} under t ↦ p(t)∘u
        let mut images: Vec<MorId> = Vec::new();
        for &t in ec.hom_set(x, d) {
            if ec.compose(t, alpha) == Some(h) {
                match bc.compose(p.on_mor(t), u) {
                    Some(q) => images.push(q),
                    None => return false,
                }
            }
        }
        let total = images.len();
        images.sort_unstable();
        images.dedup();
        if images.len() != total {
            return false; // not injective
        }
        let mut b_count = 0usize;
        for &q in bc.hom_set(b, bc.tgt(ph)) {
            if bc.compose(q, eps) == Some(ph) {
                b_count += 1;
                // every q must be hit (surjectivity via membership + counts)
                if images.binary_search(&q).is_err() {
                    return false;
                }
            }
        }
        cert.bijection_pairs += b_count.max(total);
        if b_count != total {
            return false;
        }
    }
    true
}

/// Literal re-verification of the naturality squares of the bijection
/// family at `(alpha, u)`: for every `h : e -> d`, every `s : d -> d'`, and
/// every `t` with `t ∘ alpha = h`, the two routes
/// `p(s ∘ t) ∘ u` and `p(s) ∘ (p(t) ∘ u)` must agree.
fn naturality_sweep(
    p: &FunctorData,
    e: ObjId,
    alpha: MorId,
    u: MorId,
    cert: &mut Certificate,
) -> bool {
    let ec = p.dom().as_ref();
    let bc = p.cod().as_ref();
    let x = ec.tgt(alpha);
    for &h in ec.morphisms_from(e) {
        let d = ec.tgt(h);
        let ts: Vec<MorId> = ec
            .hom_set(x, d)
            .iter()
            .copied()
            .filter(|&t| ec.compose(t, alpha) == Some(h))
            .collect();
        for &s in ec.morphisms_from(d) {
            cert.naturality_checks += 1;
            for &t in &ts {
                let st = match ec.compose(s, t) {
                    Some(m) => m,
                    None => return false,
                };
                let left = bc.compose(p.on_mor(st), u);
                let right = bc
                    .compose(p.on_mor(t), u)
                    .and_then(|q| bc.compose(p.on_mor(s), q));
                if left.is_none() || left != right {
                    return false;
                }
            }
        }
    }
    true
}

fn search(
    p: &FunctorData,
    e: ObjId,
    eps: MorId,
    budget: &SearchBudget,
    limit: usize,
) -> Result<Vec<DisplacementResult>> {
    check_inputs(p, e, eps)?;
    let ec = p.dom().as_ref();
    let bc = p.cod().as_ref();
    let b = bc.tgt(eps);

    let mut cert = Certificate::default();
    let mut out = Vec::new();
    for &alpha in ec.morphisms_from(e) {
        cert.comma_objects += 1;
        if cert.comma_objects > budget.comma_objects {
            return Err(Error::BudgetExceeded {
                what: "examining candidate displacement units".into(),
                needed: cert.comma_objects,
                cap: budget.comma_objects,
            });
        }
        let x = ec.tgt(alpha);
        let pa = p.on_mor(alpha);
        for &u in bc.hom_set(b, p.on_obj(x)) {
            if bc.compose(u, eps) != Some(pa) {
                continue;
            }
            cert.candidates_examined += 1;
            if candidate_ok(p, e, eps, alpha, u, &mut cert) {
                if !naturality_sweep(p, e, alpha, u, &mut cert) {
                    return Err(Error::CertificateMismatch(
                        "bijection family failed its naturality sweep".into(),
                    ));
                }
                out.push(DisplacementResult {
                    source: e,
                    along: eps,
                    unit: alpha,
                    apex: x,
                    base_unit: u,
                    certificate: cert.clone(),
                });
                if out.len() >= limit {
                    return Ok(out);
                }
            }
        }
    }
    Ok(out)
}

/// Find the displacement of `e` along `eps` under `p`, if it exists.
///
/// Deterministic: returns the candidate with the least unit morphism id,
/// breaking ties by least base unit. `Ok(None)` is a definitive negative —
/// the whole candidate space was examined.
pub fn displace(
    p: &FunctorData,
    e: ObjId,
    eps: MorId,
    budget: &SearchBudget,
) -> Result<Option<DisplacementResult>> {
    Ok(search(p, e, eps, budget, 1)?.into_iter().next())
}

/// Collect up to `limit` corepresenting pairs for the same displacement.
/// They are all isomorphic (see [`mediate`]); useful for uniqueness checks.
pub fn displace_all(
    p: &FunctorData,
    e: ObjId,
    eps: MorId,
    budget: &SearchBudget,
    limit: usize,
) -> Result<Vec<DisplacementResult>> {
    search(p, e, eps, budget, limit)
}

/// Re-verify a displacement result from scratch: endpoint typing, the
/// factorization equation, every bijection, and the naturality sweep.
pub fn verify_displacement(p: &FunctorData, r: &DisplacementResult) -> Result<()> {
    check_inputs(p, r.source, r.along)?;
    let ec = p.dom().as_ref();
    let bc = p.cod().as_ref();
    if ec.src(r.unit) != r.source || ec.tgt(r.unit) != r.apex {
        return Err(Error::CertificateMismatch("unit endpoints are wrong".into()));
    }
    if bc.src(r.base_unit) != bc.tgt(r.along) || bc.tgt(r.base_unit) != p.on_obj(r.apex) {
        return Err(Error::CertificateMismatch(
            "base unit endpoints are wrong".into(),
        ));
    }
    if bc.compose(r.base_unit, r.along) != Some(p.on_mor(r.unit)) {
        return Err(Error::CertificateMismatch(
            "base unit does not factor the unit's image".into(),
        ));
    }
    let mut cert = Certificate::default();
    if !candidate_ok(p, r.source, r.along, r.unit, r.base_unit, &mut cert) {
        return Err(Error::CertificateMismatch(
            "a displacement bijection fails".into(),
        ));
    }
    if !naturality_sweep(p, r.source, r.unit, r.base_unit, &mut cert) {
        return Err(Error::CertificateMismatch(
            "bijection family failed its naturality sweep".into(),
        ));
    }
    Ok(())
}

/// The universal factorization: for `h : source -> d` and `q : b -> p(d)`
/// with `q ∘ along = p(h)`, the unique `t : apex -> d` with `t ∘ unit = h`
/// and `p(t) ∘ base_unit = q`.
pub fn mediate(
    p: &FunctorData,
    r: &DisplacementResult,
    h: MorId,
    q: MorId,
) -> Result<MorId> {
    let ec = p.dom().as_ref();
    let bc = p.cod().as_ref();
    if ec.src(h) != r.source {
        return Err(Error::invalid("factorization target must start at the source"));
    }
    if bc.compose(q, r.along) != Some(p.on_mor(h)) {
        return Err(Error::invalid(
            "base morphism does not restrict to the image of the target",
        ));
    }
    let mut hits = ec
        .hom_set(r.apex, ec.tgt(h))
        .iter()
        .copied()
        .filter(|&t| {
            ec.compose(t, r.unit) == Some(h)
                && bc.compose(p.on_mor(t), r.base_unit) == Some(q)
        });
    match (hits.next(), hits.next()) {
        (Some(t), None) => Ok(t),
        (None, _) => Err(Error::CertificateMismatch(
            "no mediating morphism — displacement certificate is stale".into(),
        )),
        _ => Err(Error::CertificateMismatch(
            "mediating morphism is not unique — displacement certificate is stale".into(),
        )),
    }
}

/// Why one displacement instance disqualifies `p` from being an opfibration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OpfibFailure {
    /// No displacement of `object` along `along` exists.
    Missing,
    /// The displacement exists but its base unit is not invertible.
    BaseUnitNotInvertible,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpfibrationReport {
    pub object: ObjId,
    pub along: MorId,
    pub reason: OpfibFailure,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpfibrationVerdict {
    pub is_opfibration: bool,
    pub failures: Vec<OpfibrationReport>,
    /// Displacements performed while checking.
    pub instances_checked: usize,
}

/// Exhaustively test whether every object of the domain can be displaced
/// along every morphism out of its image, with invertible base unit — the
/// defining property of an opfibration, phrased through displacements.
pub fn is_street_opfibration(
    p: &FunctorData,
    budget: &SearchBudget,
) -> Result<OpfibrationVerdict> {
    let ec = p.dom().as_ref();
    let bc = p.cod().as_ref();
    let mut failures = Vec::new();
    let mut instances = 0usize;
    for e in ec.objects() {
        for &eps in bc.morphisms_from(p.on_obj(e)) {
            instances += 1;
            match displace(p, e, eps, budget)? {
                None => failures.push(OpfibrationReport {
                    object: e,
                    along: eps,
                    reason: OpfibFailure::Missing,
                }),
                Some(r) => {
                    if bc.is_isomorphism(r.base_unit).is_none() {
                        failures.push(OpfibrationReport {
                            object: e,
                            along: eps,
                            reason: OpfibFailure::BaseUnitNotInvertible,
                        });
                    }
                }
            }
        }
    }
    Ok(OpfibrationVerdict {
        is_opfibration: failures.is_empty(),
        failures,
        instances_checked: instances,
    })
}

/// The category of morphisms out of a fixed object, with commuting
/// triangles as morphisms.
///
/// Object `i` of `comma` stands for the ambient morphism `tagging[i]`
/// (ascending id order over `morphisms_from(base_obj)`), and a comma
/// morphism from `h1` to `h2` stands for an ambient `t` with
/// `t ∘ h1 = h2`. The projection sends `h : e -> x` to `x` and a triangle
/// to its `t`.
#[derive(Debug, Clone)]
pub struct CommaUnder {
    pub base_obj: ObjId,
    pub comma: Arc<FinCategory>,
    pub projection: FunctorData,
    /// Ambient morphism each comma object stands for.
    pub tagging: Vec<MorId>,
    obj_of: BTreeMap<MorId, ObjId>,
    mor_of: BTreeMap<(ObjId, MorId), MorId>,
}

impl CommaUnder {
    /// The comma object standing for the ambient morphism `h` out of the
    /// base object.
    pub fn find_object(&self, h: MorId) -> Option<ObjId> {
        self.obj_of.get(&h).copied()
    }

    /// The comma morphism out of `src` whose projection is the ambient
    /// morphism `t` (the triangle's target is determined by composition).
    pub fn find_morphism(&self, src: ObjId, t: MorId) -> Option<MorId> {
        self.mor_of.get(&(src, t)).copied()
    }
}

/// Build the comma category of morphisms out of `e`.
pub fn comma_under(c: &Arc<FinCategory>, e: ObjId) -> Result<CommaUnder> {
    if e.0 >= c.object_count() {
        return Err(Error::invalid(format!("object {e} out of range")));
    }
    let tagging: Vec<MorId> = c.morphisms_from(e).to_vec();
    let labels: Vec<String> = tagging
        .iter()
        .map(|&h| c.morphism_label(h).to_string())
        .collect();
    let mut obj_of = BTreeMap::new();
    for (i, &h) in tagging.iter().enumerate() {
        obj_of.insert(h, ObjId(i));
    }

    // Morphisms (h1 -> h2) are the t with t ∘ h1 = h2; the source index
    // plus t pin the triangle down, so they make a unique label.
    let mut mors = Vec::new();
    let mut proj_mor = Vec::new();
    let mut mor_of = BTreeMap::new();
    let mut by_triangle = BTreeMap::new();
    for (i1, &h1) in tagging.iter().enumerate() {
        for (i2, &h2) in tagging.iter().enumerate() {
            for &t in c.hom_set(c.tgt(h1), c.tgt(h2)) {
                if c.compose(t, h1) != Some(h2) {
                    continue;
                }
                let id = MorId(mors.len());
                mors.push(MorInfo {
                    src: ObjId(i1),
                    tgt: ObjId(i2),
                    label: format!("[{i1}]{}", c.morphism_label(t)),
                });
                proj_mor.push(t);
                mor_of.insert((ObjId(i1), t), id);
                by_triangle.insert((i1, i2, t), id);
            }
        }
    }

    let identities: Vec<MorId> = tagging
        .iter()
        .enumerate()
        .map(|(i, &h)| mor_of[&(ObjId(i), c.identity(c.tgt(h)))])
        .collect();

    let mut composition = Vec::new();
    for (&(i1, _i2, t1), &m1) in &by_triangle {
        let mid = mors[m1.0].tgt.0;
        for (&(j1, j2, t2), &m2) in &by_triangle {
            if j1 != mid {
                continue;
            }
            let t21 = c.compose(t2, t1).expect("triangle legs compose");
            composition.push(((m2, m1), by_triangle[&(i1, j2, t21)]));
        }
    }

    let comma = Arc::new(FinCategory::new(labels, mors, identities, composition)?);
    let projection = FunctorData::new(
        Arc::clone(&comma),
        Arc::clone(c),
        tagging.iter().map(|&h| c.tgt(h)).collect(),
        proj_mor,
    )?;
    projection.validate()?;
    Ok(CommaUnder {
        base_obj: e,
        comma,
        projection,
        tagging,
        obj_of,
        mor_of,
    })
}

/// The functor between comma categories that applies `p` to every
/// triangle: `(e ↓ dom p) -> (p(e) ↓ cod p)`.
pub fn induced_comma_functor(p: &FunctorData, e: ObjId) -> Result<FunctorData> {
    p.validate()?;
    let dom = comma_under(p.dom(), e)?;
    let cod = comma_under(p.cod(), p.on_obj(e))?;
    let obj_map: Vec<ObjId> = dom
        .tagging
        .iter()
        .map(|&h| {
            cod.find_object(p.on_mor(h))
                .expect("image of a morphism out of e starts at p(e)")
        })
        .collect();
    let mor_map: Vec<MorId> = dom
        .comma
        .morphisms()
        .map(|m| {
            let src = obj_map[dom.comma.src(m).0];
            let t = p.on_mor(dom.projection.on_mor(m));
            cod.find_morphism(src, t)
                .expect("p preserves commuting triangles")
        })
        .collect();
    let f = FunctorData::new(
        Arc::clone(&dom.comma),
        Arc::clone(&cod.comma),
        obj_map,
        mor_map,
    )?;
    f.validate()?;
    Ok(f)
}

/// Re-derive the base unit from a displacement result and certify it:
/// checks the factorization `p(unit) = base_unit ∘ eps` and re-verifies
/// that `t ↦ p(t) ∘ base_unit` is a bijection at the unit itself, with the
/// identity landing on the stored base unit. A stale or tampered result
/// fails with `CertificateMismatch`.
pub fn extract_unit(p: &FunctorData, r: &DisplacementResult, eps: MorId) -> Result<MorId> {
    let ec = p.dom().as_ref();
    let bc = p.cod().as_ref();
    check_inputs(p, r.source, eps)?;
    if eps != r.along {
        return Err(Error::CertificateMismatch(
            "result was produced for a different displacement direction".into(),
        ));
    }
    if r.unit.0 >= ec.morphism_count()
        || ec.src(r.unit) != r.source
        || ec.tgt(r.unit) != r.apex
        || r.base_unit.0 >= bc.morphism_count()
        || bc.src(r.base_unit) != bc.tgt(eps)
        || bc.tgt(r.base_unit) != p.on_obj(r.apex)
    {
        return Err(Error::CertificateMismatch(
            "result endpoints do not fit the ambient categories".into(),
        ));
    }
    if bc.compose(r.base_unit, eps) != Some(p.on_mor(r.unit)) {
        return Err(Error::CertificateMismatch(
            "base unit does not factor the unit's image through eps".into(),
        ));
    }
    let mut cert = Certificate::default();
    if !candidate_ok(p, r.source, eps, r.unit, r.base_unit, &mut cert) {
        return Err(Error::CertificateMismatch(
            "stored pair no longer passes its bijection certificate".into(),
        ));
    }
    // The bijection at the unit itself sends the identity on the apex to
    // p(id) ∘ base_unit = base_unit; candidate_ok just confirmed that map
    // is injective onto the factorizations, so the base unit is the unique
    // image of the identity.
    debug_assert_eq!(
        bc.compose(p.on_mor(ec.identity(r.apex)), r.base_unit),
        Some(r.base_unit)
    );
    Ok(r.base_unit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::SearchBudget;
    use crate::instances::{FinSetCat, MSetAction, MSetCat, Monoid, PointedCat};

    #[test]
    fn identity_functor_displaces_everything_along_itself() {
        // Under the identity functor, displacing e along eps just moves e to
        // the target of eps: apex = tgt(eps) and the base unit is invertible
        // (the chosen representative may differ from (eps, id) by an
        // isomorphism, since the search prefers least ids).
        let fs = FinSetCat::new(2);
        let p = FunctorData::identity(&fs.cat);
        let budget = SearchBudget::generous();
        for eps in fs.cat.morphisms() {
            let e = fs.cat.src(eps);
            let r = displace(&p, e, eps, &budget)
                .unwrap()
                .expect("identity functor displaces everywhere");
            assert_eq!(r.apex, fs.cat.tgt(eps));
            assert!(fs.cat.is_isomorphism(r.base_unit).is_some());
            assert_eq!(
                fs.cat.compose(r.base_unit, eps),
                Some(p.on_mor(r.unit))
            );
            verify_displacement(&p, &r).unwrap();
        }
    }

    #[test]
    fn pointed_sets_displace_to_the_expected_carrier() {
        // Displacing a pointed set (X, x0) along eps : X -> Y yields the
        // carrier Y pointed at eps(x0), up to isomorphism; the search lands
        // on the basepoint-0 representative, with invertible base unit.
        let pc = PointedCat::new(3);
        let budget = SearchBudget::generous();
        let mut ran = 0usize;
        for e in pc.cat.objects() {
            let src_size = pc.carrier(e);
            for &eps in pc.fin.cat.morphisms_from(pc.fin.object(src_size)) {
                let tgt_size = pc.fin.size_of(pc.fin.cat.tgt(eps));
                let r = displace(&pc.forget, e, eps, &budget)
                    .unwrap()
                    .expect("pointed forgetful functor displaces everywhere");
                assert_eq!(r.apex, pc.object(tgt_size, 0).unwrap());
                assert!(pc.fin.cat.is_isomorphism(r.base_unit).is_some());
                verify_displacement(&pc.forget, &r).unwrap();
                ran += 1;
            }
        }
        assert_eq!(ran, 142); // one per (object, eps) pair
    }

    #[test]
    fn pointed_forgetful_functor_is_an_opfibration() {
        let pc = PointedCat::new(2);
        let verdict = is_street_opfibration(&pc.forget, &SearchBudget::generous()).unwrap();
        assert!(verdict.is_opfibration, "failures: {:?}", verdict.failures);
        // P1b0 sees 3 morphisms out of S1; P2b0 and P2b1 see 5 out of S2
        assert_eq!(verdict.instances_checked, 3 + 5 + 5);
    }

    /// Independent oracle: the displacement of an involution-set `(X, a)`
    /// along `eps : X -> Y` is the quotient of `Y ⊔ (swap copy of Y) ⊔ X`
    /// ... computed directly as the pushout of free objects: carrier =
    /// (2·|Y| + |X|) / (relations gluing both group translates of eps(x)
    /// to x). Returns (carrier size, number of 2-cycles), an iso invariant.
    fn z2_pushforward_shape(x_act: &MSetAction, eps: &[usize], y: usize) -> (usize, usize) {
        // elements: 0..y = (e, j); y..2y = (g, j); 2y..2y+x = X itself
        let x = x_act.carrier;
        let total = 2 * y + x;
        let mut parent: Vec<usize> = (0..total).collect();
        fn find(p: &mut Vec<usize>, a: usize) -> usize {
            if p[a] != a {
                let r = find(p, p[a]);
                p[a] = r;
            }
            p[a]
        }
        let union = |p: &mut Vec<usize>, a: usize, b: usize| {
            let (ra, rb) = (find(p, a), find(p, b));
            p[ra] = rb;
        };
        for (i, &ei) in eps.iter().enumerate() {
            union(&mut parent, ei, 2 * y + i); // (e, eps(i)) ~ i
            union(&mut parent, y + ei, 2 * y + x_act.act[1][i]); // (g, eps(i)) ~ g·i
        }
        // involution on classes: swaps the two translates, acts as a on X
        let mut reps: Vec<usize> = (0..total)
            .filter(|&a| find(&mut parent, a) == a)
            .collect();
        reps.sort_unstable();
        let class_of = |p: &mut Vec<usize>, a: usize, reps: &[usize]| -> usize {
            let r = find(p, a);
            reps.binary_search(&r).unwrap()
        };
        let mut invol = vec![0usize; reps.len()];
        for a in 0..total {
            let image = if a < y {
                a + y
            } else if a < 2 * y {
                a - y
            } else {
                2 * y + x_act.act[1][a - 2 * y]
            };
            invol[class_of(&mut parent, a, &reps)] = class_of(&mut parent, image, &reps);
        }
        let two_cycles = (0..reps.len())
            .filter(|&c| invol[c] != c && invol[invol[c]] == c && c < invol[c])
            .count();
        (reps.len(), two_cycles)
    }

    #[test]
    fn involution_sets_match_the_pushforward_oracle() {
        let ms = MSetCat::new(Monoid::cyclic_group(2), 3).unwrap();
        let budget = SearchBudget::generous();
        for e in ms.cat.objects() {
            let act = ms.actions[e.0].clone();
            for &eps in ms.fin.cat.morphisms_from(ms.fin.object(act.carrier)) {
                let y = ms.fin.size_of(ms.fin.cat.tgt(eps));
                let (size, cycles) = z2_pushforward_shape(&act, &ms.fin.images(eps), y);
                let got = displace(&ms.forget, e, eps, &budget).unwrap();
                if size <= 3 {
                    let r = got.expect("pushforward fits the truncation");
                    let apex_act = &ms.actions[r.apex.0];
                    let apex_cycles = (0..apex_act.carrier)
                        .filter(|&i| apex_act.act[1][i] != i && i < apex_act.act[1][i])
                        .count();
                    assert_eq!((apex_act.carrier, apex_cycles), (size, cycles));
                    verify_displacement(&ms.forget, &r).unwrap();
                } else {
                    assert!(got.is_none(), "apex of size {size} cannot exist here");
                }
            }
        }
    }

    #[test]
    fn involution_forgetful_functor_is_not_an_opfibration() {
        // (1, trivial) pushed along 1 -> 2 needs a 3-element carrier: with
        // carriers up to 3 the displacement exists but its base unit is not
        // invertible; truncated at 2 it is missing entirely.
        let ms3 = MSetCat::new(Monoid::cyclic_group(2), 3).unwrap();
        let verdict = is_street_opfibration(&ms3.forget, &SearchBudget::generous()).unwrap();
        assert!(!verdict.is_opfibration);
        assert!(verdict
            .failures
            .iter()
            .any(|f| f.reason == OpfibFailure::BaseUnitNotInvertible));

        let ms2 = MSetCat::new(Monoid::cyclic_group(2), 2).unwrap();
        let verdict = is_street_opfibration(&ms2.forget, &SearchBudget::generous()).unwrap();
        assert!(!verdict.is_opfibration);
        assert!(verdict
            .failures
            .iter()
            .any(|f| f.reason == OpfibFailure::Missing));
    }

    #[test]
    fn all_corepresenting_pairs_are_uniquely_isomorphic() {
        let fs = FinSetCat::new(2);
        let p = FunctorData::identity(&fs.cat);
        let budget = SearchBudget::generous();
        for eps in fs.cat.morphisms() {
            let e = fs.cat.src(eps);
            let all = displace_all(&p, e, eps, &budget, 8).unwrap();
            assert!(!all.is_empty());
            let first = &all[0];
            for other in &all[1..] {
                // the mediator from `first` to `other`'s data is invertible
                let t = mediate(&p, first, other.unit, other.base_unit).unwrap();
                assert!(fs.cat.is_isomorphism(t).is_some());
            }
        }
    }

    #[test]
    fn mediate_recovers_factorizations() {
        let pc = PointedCat::new(3);
        let budget = SearchBudget::generous();
        // e = ({0,1}, 0), eps = inclusion into {0,1,2}.
        let e = pc.object(2, 0).unwrap();
        let eps = pc.fin.func(2, 3, &[0, 1]);
        let r = displace(&pc.forget, e, eps, &budget).unwrap().unwrap();
        // For each (h, q), the mediator exists, is unique, and factors both.
        let ec = pc.cat.as_ref();
        let bc = pc.fin.cat.as_ref();
        let mut seen = 0usize;
        for &h in ec.morphisms_from(e) {
            let ph = pc.forget.on_mor(h);
            for &q in bc.hom_set(bc.tgt(eps), pc.forget.on_obj(ec.tgt(h))) {
                if bc.compose(q, eps) != Some(ph) {
                    continue;
                }
                let t = mediate(&pc.forget, &r, h, q).unwrap();
                assert_eq!(ec.compose(t, r.unit), Some(h));
                assert_eq!(bc.compose(pc.forget.on_mor(t), r.base_unit), Some(q));
                seen += 1;
            }
        }
        assert!(seen > 0);
    }

    #[test]
    fn tight_budget_fails_loudly() {
        let fs = FinSetCat::new(3);
        let p = FunctorData::identity(&fs.cat);
        let budget = SearchBudget {
            comma_objects: 2,
            ..SearchBudget::default()
        };
        // displacing S3 along a late morphism must scan past 2 candidates
        let e = fs.object(3);
        let eps = fs.func(3, 3, &[2, 1, 0]);
        match displace(&p, e, eps, &budget) {
            Err(Error::BudgetExceeded { cap: 2, .. }) => {}
            other => panic!("expected budget refusal, got {other:?}"),
        }
    }

    #[test]
    fn certificates_report_effort() {
        let fs = FinSetCat::new(2);
        let p = FunctorData::identity(&fs.cat);
        let eps = fs.func(1, 2, &[0]);
        let r = displace(&p, fs.object(1), eps, &SearchBudget::generous())
            .unwrap()
            .unwrap();
        let c = &r.certificate;
        assert!(c.comma_objects > 0);
        assert!(c.candidates_examined > 0);
        assert!(c.bijection_pairs > 0);
        assert!(c.naturality_checks > 0);
    }

    #[test]
    fn comma_of_small_shapes() {
        use crate::instances::{discrete, walking_arrow};
        // one object, one morphism under a discrete point
        let cu = comma_under(&discrete(1), ObjId(0)).unwrap();
        assert_eq!(cu.comma.object_count(), 1);
        assert_eq!(cu.comma.morphism_count(), 1);

        // the walking arrow under 0: objects id_0 and the arrow, one
        // non-identity triangle id_0 -> arrow
        let cu = comma_under(&walking_arrow(), ObjId(0)).unwrap();
        assert_eq!(cu.comma.object_count(), 2);
        assert_eq!(cu.comma.morphism_count(), 3);
        assert!(cu.comma.validate().violations.is_empty());
        for o in cu.comma.objects() {
            assert_eq!(
                cu.projection.on_obj(o),
                walking_arrow().tgt(cu.tagging[o.0])
            );
        }
    }

    #[test]
    fn comma_under_an_initial_object_recovers_the_category() {
        let fs = FinSetCat::new(2);
        let cu = comma_under(&fs.cat, fs.object(0)).unwrap();
        assert_eq!(cu.comma.object_count(), fs.cat.object_count());
        assert_eq!(cu.comma.morphism_count(), fs.cat.morphism_count());
        let w = crate::equivalence::check_equivalence(
            &cu.comma,
            &fs.cat,
            &SearchBudget::generous(),
        )
        .unwrap();
        assert!(w.is_some());
    }

    #[test]
    fn induced_comma_functor_of_identity_is_an_isomorphism() {
        let fs = FinSetCat::new(2);
        let p = FunctorData::identity(&fs.cat);
        let f = induced_comma_functor(&p, fs.object(1)).unwrap();
        assert_eq!(f, FunctorData::identity(f.dom()));
    }

    #[test]
    fn induced_comma_functor_matches_hand_counts_for_pointed_sets() {
        let pc = PointedCat::new(3);
        let e = pc.object(2, 0).unwrap();
        let f = induced_comma_functor(&pc.forget, e).unwrap();
        // out of the 2-element pointed set: 1 map to size 1, 2 each to the
        // two pointed sets of size 2, 3 each to the three of size 3
        assert_eq!(f.dom().object_count(), 1 + 2 * 2 + 3 * 3);
        // out of a 2-element set: 1 map to size 1, 4 to size 2, 9 to size 3
        assert_eq!(f.cod().object_count(), 1 + 4 + 9);
        f.validate().unwrap();
    }

    #[test]
    fn extract_unit_replays_the_certificate() {
        let pc = PointedCat::new(3);
        let e = pc.object(2, 0).unwrap();
        let eps = pc.fin.func(2, 3, &[1, 0]);
        let r = displace(&pc.forget, e, eps, &SearchBudget::generous())
            .unwrap()
            .unwrap();
        assert_eq!(extract_unit(&pc.forget, &r, eps).unwrap(), r.base_unit);

        // identity direction: the base unit is forced to be the identity
        let id_eps = pc.fin.cat.identity(pc.forget.on_obj(e));
        let r_id = displace(&pc.forget, e, id_eps, &SearchBudget::generous())
            .unwrap()
            .unwrap();
        let u = extract_unit(&pc.forget, &r_id, id_eps).unwrap();
        assert_eq!(u, pc.fin.cat.identity(pc.fin.object(2)));

        // wrong direction is refused
        match extract_unit(&pc.forget, &r, id_eps) {
            Err(Error::CertificateMismatch(_)) => {}
            other => panic!("expected CertificateMismatch, got {other:?}"),
        }
        // tampered base unit is refused
        let mut bad = r.clone();
        bad.base_unit = pc.fin.func(3, 3, &[0, 0, 0]);
        match extract_unit(&pc.forget, &bad, eps) {
            Err(Error::CertificateMismatch(_)) => {}
            other => panic!("expected CertificateMismatch, got {other:?}"),
        }
    }
}
