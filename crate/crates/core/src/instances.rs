//! Built-in instance constructors: truncated categories of finite sets,
//! pointed sets, monoid actions, and a few tiny shapes.
//!
//! These give the test suites and the CLI a shared supply of concrete,
//! fully materialized categories with stable labels. Object and morphism
//! ids are deterministic functions of the construction parameters, so
//! expected values can be frozen in tests.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::category::{FinCategory, MorId, MorInfo, ObjId};
use crate::error::{Error, Result};
use crate::functor::FunctorData;

/// Number of functions from an `a`-element set to a `b`-element set,
/// with the empty function counted (so `0^0 = 1`).
fn count_fns(a: usize, b: usize) -> usize {
    if a == 0 {
        1
    } else {
        b.pow(a as u32)
    }
}

/// Encode a function as its rank: big-endian digits base `b`.
fn fn_rank(images: &[usize], b: usize) -> usize {
    images.iter().fold(0, |acc, &x| {
        debug_assert!(x < b);
        acc * b + x
    })
}

/// Inverse of [`fn_rank`] for a function `a -> b`.
fn fn_images(mut rank: usize, a: usize, b: usize) -> Vec<usize> {
    let mut out = vec![0; a];
    for i in (0..a).rev() {
        if b > 0 {
            out[i] = rank % b;
            rank /= b;
        }
    }
    out
}

/// Odometer over all functions `a -> b` in rank order. Yields `None` after
/// the last one. An empty-domain function is yielded once.
struct FnIter {
    a: usize,
    b: usize,
    next_rank: usize,
    total: usize,
}

impl FnIter {
    fn new(a: usize, b: usize) -> FnIter {
        FnIter {
            a,
            b,
            next_rank: 0,
            total: count_fns(a, b),
        }
    }
}

impl Iterator for FnIter {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        if self.next_rank >= self.total {
            return None;
        }
        let images = fn_images(self.next_rank, self.a, self.b);
        self.next_rank += 1;
        Some(images)
    }
}

fn compose_images(g: &[usize], f: &[usize]) -> Vec<usize> {
    f.iter().map(|&x| g[x]).collect()
}

// ---------------------------------------------------------------------------
// Finite sets, truncated by size.
// ---------------------------------------------------------------------------

/// The category of sets of size `0..=max_size` and all functions between
/// them, with decoding helpers.
///
/// Objects are `S0..S{max_size}` in order (so `ObjId(k)` is the `k`-element
/// set). Morphisms are grouped by `(source size, target size)` in
/// lexicographic order and, within a group, ordered by function rank;
/// the label of rank `r` from `Sa` to `Sb` is `f{a}to{b}n{r}`.
#[derive(Clone)]
pub struct FinSetCat {
    pub cat: Arc<FinCategory>,
    pub max_size: usize,
    offsets: BTreeMap<(usize, usize), usize>,
}

impl FinSetCat {
    pub fn new(max_size: usize) -> FinSetCat {
        let object_labels: Vec<String> = (0..=max_size).map(|k| format!("S{k}")).collect();
        let mut mors = Vec::new();
        let mut offsets = BTreeMap::new();
        for a in 0..=max_size {
            for b in 0..=max_size {
                offsets.insert((a, b), mors.len());
                for r in 0..count_fns(a, b) {
                    mors.push(MorInfo {
                        src: ObjId(a),
                        tgt: ObjId(b),
                        label: format!("f{a}to{b}n{r}"),
                    });
                }
            }
        }
        let identities: Vec<MorId> = (0..=max_size)
            .map(|k| {
                let images: Vec<usize> = (0..k).collect();
                MorId(offsets[&(k, k)] + fn_rank(&images, k))
            })
            .collect();

        let mut composition = Vec::new();
        for a in 0..=max_size {
            for b in 0..=max_size {
                for c in 0..=max_size {
                    let fo = offsets[&(a, b)];
                    let go = offsets[&(b, c)];
                    let ho = offsets[&(a, c)];
                    for (fr, fi) in FnIter::new(a, b).enumerate() {
                        for (gr, gi) in FnIter::new(b, c).enumerate() {
                            let hr = fn_rank(&compose_images(&gi, &fi), c);
                            composition.push(((MorId(go + gr), MorId(fo + fr)), MorId(ho + hr)));
                        }
                    }
                }
            }
        }

        let cat = FinCategory::from_parts(object_labels, mors, identities, composition)
            .expect("generated instance is structurally sound");
        FinSetCat {
            cat: Arc::new(cat),
            max_size,
            offsets,
        }
    }

    /// The `size`-element set.
    pub fn object(&self, size: usize) -> ObjId {
        assert!(size <= self.max_size);
        ObjId(size)
    }

    pub fn size_of(&self, o: ObjId) -> usize {
        o.0
    }

    /// Look up the morphism with the given image tuple.
    pub fn func(&self, a: usize, b: usize, images: &[usize]) -> MorId {
        assert_eq!(images.len(), a);
        MorId(self.offsets[&(a, b)] + fn_rank(images, b))
    }

    /// Decode a morphism back into its image tuple.
    pub fn images(&self, f: MorId) -> Vec<usize> {
        let a = self.cat.src(f).0;
        let b = self.cat.tgt(f).0;
        fn_images(f.0 - self.offsets[&(a, b)], a, b)
    }
}

// ---------------------------------------------------------------------------
// Pointed sets, truncated by carrier size.
// ---------------------------------------------------------------------------

/// Pointed sets with carriers `{0..k-1}`, `1 <= k <= max_size`, every choice
/// of basepoint as a separate object, and basepoint-preserving functions.
///
/// Comes bundled with the forgetful functor into [`FinSetCat::new`]`(max_size)`.
/// Objects are labeled `P{k}b{bp}`; a morphism whose underlying function has
/// rank `r` is labeled `p{j}b{b1}to{k}b{b2}n{r}`.
#[derive(Clone)]
pub struct PointedCat {
    pub cat: Arc<FinCategory>,
    pub fin: FinSetCat,
    pub forget: FunctorData,
    carriers: Vec<usize>,
    basepoints: Vec<usize>,
    by_rank: BTreeMap<(ObjId, ObjId, usize), MorId>,
}

impl PointedCat {
    pub fn new(max_size: usize) -> PointedCat {
        assert!(max_size >= 1);
        let fin = FinSetCat::new(max_size);

        let mut object_labels = Vec::new();
        let mut carriers = Vec::new();
        let mut basepoints = Vec::new();
        for k in 1..=max_size {
            for bp in 0..k {
                object_labels.push(format!("P{k}b{bp}"));
                carriers.push(k);
                basepoints.push(bp);
            }
        }
        let n = object_labels.len();

        let mut mors = Vec::new();
        let mut underlying = Vec::new();
        let mut by_rank = BTreeMap::new();
        for s in 0..n {
            for t in 0..n {
                let (j, b1) = (carriers[s], basepoints[s]);
                let (k, b2) = (carriers[t], basepoints[t]);
                for (r, images) in FnIter::new(j, k).enumerate() {
                    if images[b1] != b2 {
                        continue;
                    }
                    let id = MorId(mors.len());
                    by_rank.insert((ObjId(s), ObjId(t), r), id);
                    mors.push(MorInfo {
                        src: ObjId(s),
                        tgt: ObjId(t),
                        label: format!("p{j}b{b1}to{k}b{b2}n{r}"),
                    });
                    underlying.push(fin.func(j, k, &images));
                }
            }
        }

        let identities: Vec<MorId> = (0..n)
            .map(|o| {
                let k = carriers[o];
                let images: Vec<usize> = (0..k).collect();
                by_rank[&(ObjId(o), ObjId(o), fn_rank(&images, k))]
            })
            .collect();

        let mut composition = Vec::new();
        for (fi, f) in mors.iter().enumerate() {
            for (gi, g) in mors.iter().enumerate() {
                if f.tgt != g.src {
                    continue;
                }
                let fu = fin.images(underlying[fi]);
                let gu = fin.images(underlying[gi]);
                let h = compose_images(&gu, &fu);
                let hr = fn_rank(&h, carriers[g.tgt.0]);
                composition.push((
                    (MorId(gi), MorId(fi)),
                    by_rank[&(f.src, g.tgt, hr)],
                ));
            }
        }

        let cat = Arc::new(
            FinCategory::from_parts(object_labels, mors, identities, composition)
                .expect("generated instance is structurally sound"),
        );
        let forget = FunctorData::new(
            Arc::clone(&cat),
            Arc::clone(&fin.cat),
            carriers.iter().map(|&k| ObjId(k)).collect(),
            underlying,
        )
        .expect("forgetful functor is well-typed");

        PointedCat {
            cat,
            fin,
            forget,
            carriers,
            basepoints,
            by_rank,
        }
    }

    /// The object with carrier `{0..k-1}` and basepoint `bp`.
    pub fn object(&self, k: usize, bp: usize) -> Option<ObjId> {
        (0..self.carriers.len())
            .map(ObjId)
            .find(|&o| self.carriers[o.0] == k && self.basepoints[o.0] == bp)
    }

    pub fn carrier(&self, o: ObjId) -> usize {
        self.carriers[o.0]
    }

    pub fn basepoint(&self, o: ObjId) -> usize {
        self.basepoints[o.0]
    }

    /// Look up a morphism by its underlying image tuple.
    pub fn mor_by_images(&self, src: ObjId, tgt: ObjId, images: &[usize]) -> Option<MorId> {
        let r = fn_rank(images, self.carriers[tgt.0]);
        self.by_rank.get(&(src, tgt, r)).copied()
    }

    pub fn images(&self, f: MorId) -> Vec<usize> {
        self.fin.images(self.forget.on_mor(f))
    }
}

// ---------------------------------------------------------------------------
// Finite monoids and their actions.
// ---------------------------------------------------------------------------

/// A finite monoid given by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monoid {
    labels: Vec<String>,
    unit: usize,
    mul: Vec<usize>,
}

impl Monoid {
    pub fn new(labels: Vec<String>, unit: usize, mul: Vec<usize>) -> Result<Monoid> {
        let n = labels.len();
        if unit >= n || mul.len() != n * n || mul.iter().any(|&x| x >= n) {
            return Err(Error::invalid("malformed monoid table"));
        }
        let m = Monoid { labels, unit, mul };
        for a in 0..n {
            if m.mul(a, unit) != a || m.mul(unit, a) != a {
                return Err(Error::invalid("monoid unit is not neutral"));
            }
            for b in 0..n {
                for c in 0..n {
                    if m.mul(m.mul(a, b), c) != m.mul(a, m.mul(b, c)) {
                        return Err(Error::invalid("monoid multiplication not associative"));
                    }
                }
            }
        }
        Ok(m)
    }

    /// The cyclic monoid on a generator `x` with `x^(index+period) = x^index`.
    /// `cyclic(0, n)` is the cyclic group of order `n`.
    pub fn cyclic(index: usize, period: usize) -> Monoid {
        assert!(period >= 1);
        let n = index + period;
        let norm = |t: usize| if t < n { t } else { index + (t - index) % period };
        let labels = (0..n)
            .map(|i| match i {
                0 => "e".to_string(),
                1 => "x".to_string(),
                i => format!("x{i}"),
            })
            .collect();
        let mut mul = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                mul[a * n + b] = norm(a + b);
            }
        }
        Monoid {
            labels,
            unit: 0,
            mul,
        }
    }

    pub fn cyclic_group(order: usize) -> Monoid {
        Monoid::cyclic(0, order)
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.size() + b]
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }
}

/// One monoid action: a carrier `{0..carrier-1}` and, per monoid element,
/// the function it acts by.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MSetAction {
    pub carrier: usize,
    pub act: Vec<Vec<usize>>,
}

/// Actions of a fixed finite monoid on sets of size `0..=max_size`, with all
/// equivariant maps, bundled with the forgetful functor into
/// [`FinSetCat::new`]`(max_size)`.
///
/// Object labels are `A{k}` (trivial action data) or `A{k}_{code}` where
/// `code` concatenates the image digits of every non-unit element's function.
/// Morphisms are labeled `q{i}to{j}n{r}` by object indices and underlying
/// function rank.
#[derive(Clone)]
pub struct MSetCat {
    pub monoid: Monoid,
    pub cat: Arc<FinCategory>,
    pub fin: FinSetCat,
    pub forget: FunctorData,
    pub actions: Vec<MSetAction>,
    by_rank: BTreeMap<(ObjId, ObjId, usize), MorId>,
}

/// Cap on the raw tuples enumerated while listing the actions of one
/// carrier size; keeps `MSetCat::new` from exploding on large monoids.
const MSET_ENUM_CAP: usize = 2_000_000;

impl MSetCat {
    pub fn new(monoid: Monoid, max_size: usize) -> Result<MSetCat> {
        let fin = FinSetCat::new(max_size);
        let nm = monoid.size();

        // Enumerate actions per carrier size, unit element forced to act as
        // the identity, by an odometer over the remaining elements' functions.
        let mut actions: Vec<MSetAction> = Vec::new();
        for k in 0..=max_size {
            let per_elem = count_fns(k, k);
            let free_elems = nm - 1;
            let raw_total = per_elem.checked_pow(free_elems as u32).ok_or_else(|| {
                Error::BudgetExceeded {
                    what: format!("enumerating actions on {k} elements"),
                    needed: usize::MAX,
                    cap: MSET_ENUM_CAP,
                }
            })?;
            if raw_total > MSET_ENUM_CAP {
                return Err(Error::BudgetExceeded {
                    what: format!("enumerating actions on {k} elements"),
                    needed: raw_total,
                    cap: MSET_ENUM_CAP,
                });
            }
            let others: Vec<usize> = (0..nm).filter(|&a| a != monoid.unit()).collect();
            for raw in 0..raw_total {
                let mut act = vec![Vec::new(); nm];
                act[monoid.unit()] = (0..k).collect();
                let mut rest = raw;
                for &a in &others {
                    act[a] = fn_images(rest % per_elem, k, k);
                    rest /= per_elem;
                }
                let homomorphic = (0..nm).all(|a| {
                    (0..nm).all(|b| {
                        let ab = monoid.mul(a, b);
                        (0..k).all(|x| act[a][act[b][x]] == act[ab][x])
                    })
                });
                if homomorphic {
                    actions.push(MSetAction { carrier: k, act });
                }
            }
        }

        let object_labels: Vec<String> = actions
            .iter()
            .map(|a| {
                let code: String = (0..nm)
                    .filter(|&e| e != monoid.unit())
                    .flat_map(|e| a.act[e].iter().map(|d| d.to_string()))
                    .collect();
                if code.is_empty() {
                    format!("A{}", a.carrier)
                } else {
                    format!("A{}_{code}", a.carrier)
                }
            })
            .collect();
        let n = actions.len();

        let mut mors = Vec::new();
        let mut underlying = Vec::new();
        let mut by_rank = BTreeMap::new();
        for s in 0..n {
            for t in 0..n {
                let (j, k) = (actions[s].carrier, actions[t].carrier);
                for (r, images) in FnIter::new(j, k).enumerate() {
                    let equivariant = (0..nm).all(|e| {
                        (0..j).all(|x| images[actions[s].act[e][x]] == actions[t].act[e][images[x]])
                    });
                    if !equivariant {
                        continue;
                    }
                    let id = MorId(mors.len());
                    by_rank.insert((ObjId(s), ObjId(t), r), id);
                    mors.push(MorInfo {
                        src: ObjId(s),
                        tgt: ObjId(t),
                        label: format!("q{s}to{t}n{r}"),
                    });
                    underlying.push(fin.func(j, k, &images));
                }
            }
        }

        let identities: Vec<MorId> = (0..n)
            .map(|o| {
                let k = actions[o].carrier;
                let images: Vec<usize> = (0..k).collect();
                by_rank[&(ObjId(o), ObjId(o), fn_rank(&images, k))]
            })
            .collect();

        let mut composition = Vec::new();
        for (fi, f) in mors.iter().enumerate() {
            for (gi, g) in mors.iter().enumerate() {
                if f.tgt != g.src {
                    continue;
                }
                let fu = fin.images(underlying[fi]);
                let gu = fin.images(underlying[gi]);
                let h = compose_images(&gu, &fu);
                let hr = fn_rank(&h, actions[g.tgt.0].carrier);
                composition.push(((MorId(gi), MorId(fi)), by_rank[&(f.src, g.tgt, hr)]));
            }
        }

        let cat = Arc::new(
            FinCategory::from_parts(object_labels, mors, identities, composition)
                .expect("generated instance is structurally sound"),
        );
        let forget = FunctorData::new(
            Arc::clone(&cat),
            Arc::clone(&fin.cat),
            actions.iter().map(|a| ObjId(a.carrier)).collect(),
            underlying,
        )
        .expect("forgetful functor is well-typed");

        Ok(MSetCat {
            monoid,
            cat,
            fin,
            forget,
            actions,
            by_rank,
        })
    }

    /// Look up an object by its action data.
    pub fn object_by_action(&self, action: &MSetAction) -> Option<ObjId> {
        self.actions
            .iter()
            .position(|a| a == action)
            .map(ObjId)
    }

    pub fn mor_by_images(&self, src: ObjId, tgt: ObjId, images: &[usize]) -> Option<MorId> {
        let r = fn_rank(images, self.actions[tgt.0].carrier);
        self.by_rank.get(&(src, tgt, r)).copied()
    }

    pub fn images(&self, f: MorId) -> Vec<usize> {
        self.fin.images(self.forget.on_mor(f))
    }
}

// ---------------------------------------------------------------------------
// Tiny shapes.
// ---------------------------------------------------------------------------

/// The discrete category on `n` objects `d0..d{n-1}`.
pub fn discrete(n: usize) -> Arc<FinCategory> {
    let object_labels: Vec<String> = (0..n).map(|i| format!("d{i}")).collect();
    let mors: Vec<MorInfo> = (0..n)
        .map(|i| MorInfo {
            src: ObjId(i),
            tgt: ObjId(i),
            label: format!("id_d{i}"),
        })
        .collect();
    let identities: Vec<MorId> = (0..n).map(MorId).collect();
    let composition: Vec<_> = (0..n).map(|i| ((MorId(i), MorId(i)), MorId(i))).collect();
    Arc::new(
        FinCategory::from_parts(object_labels, mors, identities, composition)
            .expect("generated instance is structurally sound"),
    )
}

/// The walking arrow: objects `x`, `y`, one morphism `f : x -> y`.
pub fn walking_arrow() -> Arc<FinCategory> {
    let mut b = crate::category::CategoryBuilder::new();
    let x = b.object("x");
    let y = b.object("y");
    b.identity(x, "id_x");
    b.identity(y, "id_y");
    b.morphism("f", x, y);
    Arc::new(b.build().expect("generated instance is sound"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fin_set_counts_match_power_sums() {
        for max in 0..=4usize {
            let fs = FinSetCat::new(max);
            assert_eq!(fs.cat.object_count(), max + 1);
            let expect: usize = (0..=max)
                .flat_map(|a| (0..=max).map(move |b| count_fns(a, b)))
                .sum();
            assert_eq!(fs.cat.morphism_count(), expect);
        }
        assert_eq!(FinSetCat::new(3).cat.morphism_count(), 60);
        assert_eq!(FinSetCat::new(4).cat.morphism_count(), 499);
    }

    #[test]
    fn fin_set_laws_hold() {
        for max in 0..=3usize {
            let fs = FinSetCat::new(max);
            let report = fs.cat.validate();
            assert!(report.is_valid(), "violations: {:?}", report.violations);
        }
    }

    #[test]
    fn fin_set_composition_is_function_composition() {
        let fs = FinSetCat::new(3);
        let f = fs.func(2, 3, &[1, 2]);
        let g = fs.func(3, 2, &[0, 0, 1]);
        let gf = fs.cat.compose(g, f).unwrap();
        assert_eq!(fs.images(gf), vec![0, 1]);
        // round-trip every morphism through encode/decode
        for m in fs.cat.morphisms() {
            let a = fs.cat.src(m).0;
            let b = fs.cat.tgt(m).0;
            assert_eq!(fs.func(a, b, &fs.images(m)), m);
        }
    }

    #[test]
    fn fin_set_initial_and_isos() {
        let fs = FinSetCat::new(3);
        assert_eq!(fs.cat.find_initial(), Some(fs.object(0)));
        let isos = fs
            .cat
            .hom_set(fs.object(2), fs.object(2))
            .iter()
            .filter(|&&m| fs.cat.is_isomorphism(m).is_some())
            .count();
        assert_eq!(isos, 2); // the two permutations of a 2-element set
        assert_eq!(fs.cat.hom_set(fs.object(2), fs.object(2)).len(), 4);
        // no morphism into the empty set except its identity
        assert_eq!(fs.cat.morphisms_into(fs.object(0)).len(), 1);
    }

    #[test]
    fn pointed_counts_and_laws() {
        let pc = PointedCat::new(3);
        assert_eq!(pc.cat.object_count(), 6); // (1,0) (2,0) (2,1) (3,0) (3,1) (3,2)
        // sum over carriers j,k and basepoints: k^(j-1) each
        let expect: usize = (1..=3usize)
            .flat_map(|j| (1..=3usize).map(move |k| j * k * count_fns(j - 1, k)))
            .sum();
        assert_eq!(pc.cat.morphism_count(), expect);
        assert_eq!(expect, 142);
        let report = pc.cat.validate();
        assert!(report.is_valid(), "violations: {:?}", report.violations);
        assert!(pc.forget.validate().is_ok());
    }

    #[test]
    fn pointed_forget_is_faithful_and_loses_basepoint() {
        let pc = PointedCat::new(2);
        // faithful: distinct morphisms in one hom-set have distinct images
        for a in pc.cat.objects() {
            for b in pc.cat.objects() {
                let hom = pc.cat.hom_set(a, b);
                let mut imgs: Vec<MorId> = hom.iter().map(|&m| pc.forget.on_mor(m)).collect();
                imgs.sort();
                imgs.dedup();
                assert_eq!(imgs.len(), hom.len());
            }
        }
        // not full: the swap 2 -> 2 does not preserve basepoint 0 -> 0
        let p2 = pc.object(2, 0).unwrap();
        assert!(pc.mor_by_images(p2, p2, &[1, 0]).is_none());
        assert!(pc.mor_by_images(p2, p2, &[0, 0]).is_some());
    }

    #[test]
    fn involution_counts_follow_the_recurrence() {
        // Actions of the order-2 group on k points = involutions; their
        // count satisfies t(k) = t(k-1) + (k-1) t(k-2).
        let z2 = Monoid::cyclic_group(2);
        let ms = MSetCat::new(z2, 4).unwrap();
        let mut t = vec![1usize, 1];
        for k in 2..=4 {
            let next = t[k - 1] + (k - 1) * t[k - 2];
            t.push(next);
        }
        for (k, &want) in t.iter().enumerate() {
            let got = ms.actions.iter().filter(|a| a.carrier == k).count();
            assert_eq!(got, want, "involutions on {k} points");
        }
        assert_eq!(ms.cat.object_count(), 18);
    }

    #[test]
    fn mset_laws_hold_small() {
        let z2 = Monoid::cyclic_group(2);
        let ms = MSetCat::new(z2, 3).unwrap();
        assert_eq!(ms.cat.object_count(), 8);
        let report = ms.cat.validate();
        assert!(report.is_valid(), "violations: {:?}", report.violations);
        assert!(ms.forget.validate().is_ok());
    }

    #[test]
    fn mset_morphisms_are_exactly_the_equivariant_maps() {
        let z2 = Monoid::cyclic_group(2);
        let ms = MSetCat::new(z2, 3).unwrap();
        for s in ms.cat.objects() {
            for t in ms.cat.objects() {
                let (aj, ak) = (&ms.actions[s.0], &ms.actions[t.0]);
                let brute = FnIter::new(aj.carrier, ak.carrier)
                    .filter(|u| {
                        (0..aj.carrier).all(|x| u[aj.act[1][x]] == ak.act[1][u[x]])
                    })
                    .count();
                assert_eq!(ms.cat.hom_set(s, t).len(), brute);
            }
        }
    }

    #[test]
    fn cyclic_monoid_tables_are_lawful() {
        for (i, p) in [(0, 1), (0, 2), (0, 4), (1, 1), (1, 2), (2, 1), (1, 3)] {
            let m = Monoid::cyclic(i, p);
            assert_eq!(m.size(), i + p);
            // Monoid::new re-checks unit and associativity
            assert!(Monoid::new(
                (0..m.size()).map(|e| m.label(e).to_string()).collect(),
                m.unit(),
                (0..m.size())
                    .flat_map(|a| (0..m.size()).map(move |b| (a, b)))
                    .map(|(a, b)| m.mul(a, b))
                    .collect(),
            )
            .is_ok());
        }
        // x^3 = x in cyclic(1, 2)
        let m = Monoid::cyclic(1, 2);
        let x = 1;
        assert_eq!(m.mul(m.mul(x, x), x), x);
    }

    #[test]
    fn tiny_shapes() {
        let d = discrete(3);
        assert_eq!(d.object_count(), 3);
        assert_eq!(d.morphism_count(), 3);
        assert!(d.validate().is_valid());
        let w = walking_arrow();
        assert_eq!(w.morphism_count(), 3);
        assert!(w.validate().is_valid());
        assert_eq!(w.find_initial(), Some(ObjId(0)));
    }
}
