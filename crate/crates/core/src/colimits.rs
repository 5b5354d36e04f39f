//! Colimit searches in finite categories: generic finite diagrams, (wide)
//! pushouts, chain colimits under a stabilization reading, and the
//! two-interleaved-chains comparison.
//!
//! All searches are exhaustive over the (finite) category and return the
//! first universal cocone in a deterministic order, re-verified against
//! every cocone they enumerated. Budgets bound the enumeration; hitting a
//! cap is a loud error, never a silent truncation.

use std::sync::Arc;

use crate::budget::SearchBudget;
use crate::category::{CategoryBuilder, FinCategory, MorId, ObjId};
use crate::error::{Error, Result};
use crate::functor::FunctorData;

/// A cocone over a diagram: an apex and one leg per diagram object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cocone {
    pub apex: ObjId,
    pub legs: Vec<MorId>,
}

/// Colimit of an arbitrary finite diagram, presented as a functor from a
/// shape category.
///
/// Enumerates every cocone over the diagram (bounded by `budget.cocones`),
/// then returns the first cocone — apexes ascending, legs in hom-set order —
/// that admits exactly one mediator to every enumerated cocone. `Ok(None)`
/// means the colimit genuinely does not exist in the codomain category.
pub fn colimit(diagram: &FunctorData, budget: &SearchBudget) -> Result<Option<Cocone>> {
    let c = diagram.cod().as_ref();
    let cocones = enumerate_cocones(diagram, budget)?;

    'candidates: for cand in &cocones {
        for other in &cocones {
            let mediators = c
                .hom_set(cand.apex, other.apex)
                .iter()
                .filter(|&&t| {
                    cand.legs
                        .iter()
                        .zip(&other.legs)
                        .all(|(&l, &l2)| c.compose(t, l) == Some(l2))
                })
                .count();
            if mediators != 1 {
                continue 'candidates;
            }
        }
        return Ok(Some(cand.clone()));
    }
    Ok(None)
}

/// Every cocone over the diagram, apexes ascending and legs in hom-set
/// order. This is the search space all the colimit operations quantify
/// over; `budget.cocones` bounds the partial assignments explored.
pub fn enumerate_cocones(diagram: &FunctorData, budget: &SearchBudget) -> Result<Vec<Cocone>> {
    let shape = diagram.dom().as_ref();
    let c = diagram.cod().as_ref();
    let k = shape.object_count();
    let arrows: Vec<(usize, usize, MorId)> = shape
        .morphisms()
        .filter(|&u| !shape.is_identity(u))
        .map(|u| (shape.src(u).0, shape.tgt(u).0, diagram.on_mor(u)))
        .collect();

    let mut cocones: Vec<Cocone> = Vec::new();
    let mut nodes = 0usize;
    for apex in c.objects() {
        let homs: Vec<&[MorId]> = (0..k)
            .map(|j| c.hom_set(diagram.on_obj(ObjId(j)), apex))
            .collect();
        if homs.iter().any(|h| h.is_empty()) {
            continue;
        }
        collect_cocones(c, apex, &homs, &arrows, budget, &mut nodes, &mut cocones)?;
    }
    Ok(cocones)
}

struct CoconeSearch<'a> {
    c: &'a FinCategory,
    apex: ObjId,
    homs: &'a [&'a [MorId]],
    arrows: &'a [(usize, usize, MorId)],
    budget: &'a SearchBudget,
}

impl CoconeSearch<'_> {
    fn extend(
        &self,
        nodes: &mut usize,
        legs: &mut Vec<MorId>,
        out: &mut Vec<Cocone>,
    ) -> Result<()> {
        let j = legs.len();
        if j == self.homs.len() {
            *nodes += 1;
            if *nodes > self.budget.cocones {
                return Err(Error::BudgetExceeded {
                    what: "enumerating cocones".into(),
                    needed: *nodes,
                    cap: self.budget.cocones,
                });
            }
            out.push(Cocone {
                apex: self.apex,
                legs: legs.clone(),
            });
            return Ok(());
        }
        'next: for &m in self.homs[j] {
            *nodes += 1;
            if *nodes > self.budget.cocones {
                return Err(Error::BudgetExceeded {
                    what: "enumerating cocones".into(),
                    needed: *nodes,
                    cap: self.budget.cocones,
                });
            }
            legs.push(m);
            // Compatibility along every shape arrow with both ends assigned.
            for &(s, t, img) in self.arrows {
                if s <= j && t <= j && self.c.compose(legs[t], img) != Some(legs[s]) {
                    legs.pop();
                    continue 'next;
                }
            }
            self.extend(nodes, legs, out)?;
            legs.pop();
        }
        Ok(())
    }
}

fn collect_cocones(
    c: &FinCategory,
    apex: ObjId,
    homs: &[&[MorId]],
    arrows: &[(usize, usize, MorId)],
    budget: &SearchBudget,
    nodes: &mut usize,
    out: &mut Vec<Cocone>,
) -> Result<()> {
    let search = CoconeSearch {
        c,
        apex,
        homs,
        arrows,
        budget,
    };
    let mut legs = Vec::with_capacity(homs.len());
    search.extend(nodes, legs.as_mut(), out)
}

/// A wide pushout: the colimit of a family of morphisms out of one object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WidePushout {
    pub apex: ObjId,
    /// One injection per family member, from that member's target.
    pub injections: Vec<MorId>,
    /// The common composite `injections[j] ∘ family[j]` from the base.
    pub corner: MorId,
}

/// Colimit of the star diagram `base -> tgt(family[j])` for all `j`.
///
/// An empty family yields the base itself. `Ok(None)` when the colimit does
/// not exist in this (possibly truncated) category.
pub fn wide_pushout(
    c: &Arc<FinCategory>,
    base: ObjId,
    family: &[MorId],
    budget: &SearchBudget,
) -> Result<Option<WidePushout>> {
    for &f in family {
        if c.src(f) != base {
            return Err(Error::invalid(format!(
                "wide pushout family member {f} does not start at the base"
            )));
        }
    }
    if family.is_empty() {
        return Ok(Some(WidePushout {
            apex: base,
            injections: vec![],
            corner: c.identity(base),
        }));
    }

    // Star shape: object 0 is the center, objects 1..=k the tips.
    let mut b = CategoryBuilder::new();
    let center = b.object("c");
    b.identity(center, "idc");
    let mut spokes = Vec::new();
    for j in 0..family.len() {
        let tip = b.object(format!("t{j}"));
        b.identity(tip, format!("idt{j}"));
        spokes.push(b.morphism(format!("s{j}"), center, tip));
    }
    let shape = Arc::new(b.build().expect("star shape is a category"));

    let mut obj_map = vec![base];
    obj_map.extend(family.iter().map(|&f| c.tgt(f)));
    let mut mor_map = vec![MorId(0); shape.morphism_count()];
    for o in shape.objects() {
        mor_map[shape.identity(o).0] = c.identity(obj_map[o.0]);
    }
    for (j, &s) in spokes.iter().enumerate() {
        mor_map[s.0] = family[j];
    }
    let diagram = FunctorData::new(Arc::clone(&shape), Arc::clone(c), obj_map, mor_map)?;

    Ok(colimit(&diagram, budget)?.map(|cc| WidePushout {
        apex: cc.apex,
        injections: cc.legs[1..].to_vec(),
        corner: cc.legs[0],
    }))
}

/// Pushout of the span `tgt(f) <- base -> tgt(g)`: a two-member wide pushout.
pub fn pushout(
    c: &Arc<FinCategory>,
    f: MorId,
    g: MorId,
    budget: &SearchBudget,
) -> Result<Option<WidePushout>> {
    if c.src(f) != c.src(g) {
        return Err(Error::invalid("pushout legs must share their source"));
    }
    wide_pushout(c, c.src(f), &[f, g], budget)
}

/// Colimit of a chain read as the visible window of an eventually-constant
/// sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainColimit {
    pub apex: ObjId,
    /// One leg per chain object, into the apex.
    pub legs: Vec<MorId>,
    /// First index from which every link is invertible.
    pub stabilized_at: usize,
}

/// Colimit of `objects[0] -> objects[1] -> ...` under the stabilization
/// reading: the window must end in invertible links (so the sequence is
/// taken to be constant beyond it), and the apex is the first object of the
/// invertible tail. Legs before the apex are forward link composites; legs
/// after it are composites of link inverses. The result is re-verified to
/// be universal over every cocone of the window.
///
/// A window whose final link is not invertible carries no evidence of
/// stabilization: `Err(NotStabilized)`. A single-object window is its own
/// colimit.
pub fn chain_colimit(
    c: &FinCategory,
    objects: &[ObjId],
    links: &[MorId],
    budget: &SearchBudget,
) -> Result<ChainColimit> {
    if objects.is_empty() {
        return Err(Error::invalid("chain must contain at least one object"));
    }
    if links.len() + 1 != objects.len() {
        return Err(Error::invalid(format!(
            "{} links for {} chain objects",
            links.len(),
            objects.len()
        )));
    }
    for (j, &l) in links.iter().enumerate() {
        if c.src(l) != objects[j] || c.tgt(l) != objects[j + 1] {
            return Err(Error::invalid(format!(
                "link {j} does not join chain objects {j} and {}",
                j + 1
            )));
        }
    }

    let inverses: Vec<Option<MorId>> = links.iter().map(|&l| c.is_isomorphism(l)).collect();
    if inverses.last().is_some_and(|i| i.is_none()) {
        return Err(Error::NotStabilized {
            stages: objects.len(),
        });
    }
    let k0 = (0..links.len())
        .rev()
        .take_while(|&j| inverses[j].is_some())
        .last()
        .unwrap_or(links.len());
    let apex = objects[k0];

    let mut legs = Vec::with_capacity(objects.len());
    for j in 0..objects.len() {
        let leg = if j == k0 {
            c.identity(apex)
        } else if j < k0 {
            c.compose_path(&links[j..k0])
                .ok_or_else(|| Error::invalid("chain links do not compose"))?
        } else {
            let path: Vec<MorId> = (k0..j).rev().map(|i| inverses[i].unwrap()).collect();
            c.compose_path(&path)
                .ok_or_else(|| Error::invalid("chain link inverses do not compose"))?
        };
        legs.push(leg);
    }

    // Cocone property, then universality against every window cocone.
    for (j, &l) in links.iter().enumerate() {
        if c.compose(legs[j + 1], l) != Some(legs[j]) {
            return Err(Error::CertificateMismatch(
                "chain colimit legs do not form a cocone".into(),
            ));
        }
    }
    let mut nodes = 0usize;
    let mut cocones: Vec<Cocone> = Vec::new();
    for y in c.objects() {
        let homs: Vec<&[MorId]> = objects.iter().map(|&o| c.hom_set(o, y)).collect();
        if homs.iter().any(|h| h.is_empty()) {
            continue;
        }
        let arrows: Vec<(usize, usize, MorId)> =
            links.iter().enumerate().map(|(j, &l)| (j, j + 1, l)).collect();
        collect_cocones(c, y, &homs, &arrows, budget, &mut nodes, &mut cocones)?;
    }
    for other in &cocones {
        let mediators = c
            .hom_set(apex, other.apex)
            .iter()
            .filter(|&&t| {
                legs.iter()
                    .zip(&other.legs)
                    .all(|(&l, &l2)| c.compose(t, l) == Some(l2))
            })
            .count();
        if mediators != 1 {
            return Err(Error::CertificateMismatch(format!(
                "chain colimit apex admits {mediators} mediators to a window cocone"
            )));
        }
    }

    Ok(ChainColimit {
        apex,
        legs,
        stabilized_at: k0,
    })
}

/// Two chains of equal length crossing each other: `up[k]` runs from the
/// lower chain to the upper one at stage `k`, `down[k]` returns one stage
/// later. Each chain's own links are the induced zig-zag composites:
/// `lower_link[k] = down[k] ∘ up[k]` and `upper_link[k] = up[k+1] ∘ down[k]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossingData {
    pub lower: Vec<ObjId>,
    pub upper: Vec<ObjId>,
    /// `up[k] : lower[k] -> upper[k]`; one per stage.
    pub up: Vec<MorId>,
    /// `down[k] : upper[k] -> lower[k+1]`; one per link.
    pub down: Vec<MorId>,
}

/// Outcome of [`check_crossing`]: both chain colimits and the mutually
/// inverse mediators between them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossingReport {
    pub lower_colimit: ChainColimit,
    pub upper_colimit: ChainColimit,
    /// Mediator from the lower colimit to the upper one.
    pub forward: MorId,
    /// Its inverse.
    pub backward: MorId,
}

impl CrossingData {
    fn validate(&self, c: &FinCategory) -> Result<usize> {
        let n1 = self.lower.len();
        if n1 < 2 {
            return Err(Error::MalformedCrossing {
                index: 0,
                reason: "need at least two stages to compare limiting behavior".into(),
            });
        }
        if self.upper.len() != n1 || self.up.len() != n1 || self.down.len() != n1 - 1 {
            return Err(Error::MalformedCrossing {
                index: 0,
                reason: format!(
                    "expected {n1} upper objects, {n1} up maps, {} down maps; got {}, {}, {}",
                    n1 - 1,
                    self.upper.len(),
                    self.up.len(),
                    self.down.len()
                ),
            });
        }
        for k in 0..n1 {
            if c.src(self.up[k]) != self.lower[k] || c.tgt(self.up[k]) != self.upper[k] {
                return Err(Error::MalformedCrossing {
                    index: k,
                    reason: "up map does not join the chains at this stage".into(),
                });
            }
        }
        for k in 0..n1 - 1 {
            if c.src(self.down[k]) != self.upper[k] || c.tgt(self.down[k]) != self.lower[k + 1] {
                return Err(Error::MalformedCrossing {
                    index: k,
                    reason: "down map does not return to the lower chain at the next stage".into(),
                });
            }
        }
        Ok(n1 - 1)
    }
}

/// Verify that two crossing chains share their limiting object: compute both
/// stabilized chain colimits and produce the mutually inverse mediators
/// induced by the crossing maps.
///
/// Both chains must stabilize inside the window (`NotStabilized` otherwise).
/// Once they do, the isomorphism is forced; any failure past that point is
/// a `CertificateMismatch`.
pub fn check_crossing(
    c: &FinCategory,
    data: &CrossingData,
    budget: &SearchBudget,
) -> Result<CrossingReport> {
    let n = data.validate(c)?;

    let compose2 = |g: MorId, f: MorId, what: &str, k: usize| -> Result<MorId> {
        c.compose(g, f).ok_or_else(|| Error::MalformedCrossing {
            index: k,
            reason: format!("{what} does not compose"),
        })
    };
    let mut lower_links = Vec::with_capacity(n);
    let mut upper_links = Vec::with_capacity(n);
    for k in 0..n {
        lower_links.push(compose2(data.down[k], data.up[k], "down ∘ up", k)?);
        upper_links.push(compose2(data.up[k + 1], data.down[k], "up ∘ down", k)?);
    }

    let lower_colimit = chain_colimit(c, &data.lower, &lower_links, budget)?;
    let upper_colimit = chain_colimit(c, &data.upper, &upper_links, budget)?;

    // forward: lower apex -> upper apex, the mediator of the cocone
    // (upper legs ∘ up). Built directly at the lower apex, where the leg
    // is the identity; verified as a mediator everywhere after.
    let ka = lower_colimit.stabilized_at;
    let forward = c
        .compose(upper_colimit.legs[ka], data.up[ka])
        .ok_or_else(|| Error::CertificateMismatch("forward mediator does not compose".into()))?;
    for j in 0..=n {
        let want = c.compose(upper_colimit.legs[j], data.up[j]);
        if c.compose(forward, lower_colimit.legs[j]) != want || want.is_none() {
            return Err(Error::CertificateMismatch(format!(
                "forward mediator fails at stage {j}"
            )));
        }
    }

    // backward: upper apex -> lower apex via the next down map. The upper
    // chain's stabilization index is at most n-1, so down[kb] exists.
    let kb = upper_colimit.stabilized_at;
    let backward = c
        .compose(lower_colimit.legs[kb + 1], data.down[kb])
        .ok_or_else(|| Error::CertificateMismatch("backward mediator does not compose".into()))?;
    for j in 0..n {
        let want = c.compose(lower_colimit.legs[j + 1], data.down[j]);
        if c.compose(backward, upper_colimit.legs[j]) != want || want.is_none() {
            return Err(Error::CertificateMismatch(format!(
                "backward mediator fails at stage {j}"
            )));
        }
    }

    let idl = c.identity(lower_colimit.apex);
    let idu = c.identity(upper_colimit.apex);
    if c.compose(backward, forward) != Some(idl) || c.compose(forward, backward) != Some(idu) {
        return Err(Error::CertificateMismatch(
            "crossing mediators are not mutually inverse".into(),
        ));
    }

    Ok(CrossingReport {
        lower_colimit,
        upper_colimit,
        forward,
        backward,
    })
}
