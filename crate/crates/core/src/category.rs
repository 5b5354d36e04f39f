//! Finite categories with explicit, fully materialized composition tables.
//!
//! Everything downstream — functors, comma constructions, displacement
//! searches, descent — works over [`FinCategory`]. The representation is
//! deliberately dumb: objects and morphisms are dense indices, composition is
//! a total lookup table over composable pairs. That keeps every search
//! exhaustive and every verdict decidable by enumeration.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::error::{Error, Result};

/// Index of an object in its category.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ObjId(pub usize);

/// Index of a morphism in its category.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MorId(pub usize);

impl fmt::Display for ObjId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "o{}", self.0)
    }
}

impl fmt::Display for MorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m{}", self.0)
    }
}

/// Source, target and display label of one morphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorInfo {
    pub src: ObjId,
    pub tgt: ObjId,
    pub label: String,
}

/// Morphism count at or below which the composition table is stored densely
/// (m*m array) rather than as a map. 2048^2 u32 = 16 MiB worst case.
const DENSE_LIMIT: usize = 4096;
const DENSE_NONE: u32 = u32::MAX;

enum ComposeTable {
    Dense(Vec<u32>),
    Sparse(BTreeMap<(u32, u32), u32>),
}

/// A finite category: labeled objects, labeled morphisms, chosen identities,
/// and a composition table keyed by `(g, f)` for `g ∘ f` (apply `f` first).
///
/// Construction with [`FinCategory::from_parts`] enforces only *structural*
/// sanity (indices in range, labels unique, one identity per object, keys
/// unique). The categorical laws — identities neutral, composition total on
/// composable pairs and only on them, associativity — are checked by
/// [`FinCategory::validate`], so a loaded instance can be inspected for law
/// violations instead of being rejected opaquely.
pub struct FinCategory {
    object_labels: Vec<String>,
    mors: Vec<MorInfo>,
    identities: Vec<MorId>,
    table: ComposeTable,
    // Derived lookups, built once at construction.
    out_of: Vec<Vec<MorId>>,
    into_: Vec<Vec<MorId>>,
    hom: BTreeMap<(ObjId, ObjId), Vec<MorId>>,
    obj_by_label: BTreeMap<String, ObjId>,
    mor_by_label: BTreeMap<String, MorId>,
}

impl PartialEq for FinCategory {
    fn eq(&self, other: &Self) -> bool {
        self.object_labels == other.object_labels
            && self.mors == other.mors
            && self.identities == other.identities
            && self.composition_pairs() == other.composition_pairs()
    }
}
impl Eq for FinCategory {}

impl fmt::Debug for FinCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinCategory")
            .field("objects", &self.object_labels.len())
            .field("morphisms", &self.mors.len())
            .finish()
    }
}

impl FinCategory {
    /// Build a category from raw parts, checking structural sanity only.
    ///
    /// `composition` maps `(g, f)` to `g ∘ f`. Duplicate keys, out-of-range
    /// ids, duplicate labels, or an identities list not matching the object
    /// list are hard errors; law violations are left for [`validate`].
    ///
    /// [`validate`]: FinCategory::validate
    pub fn from_parts(
        object_labels: Vec<String>,
        mors: Vec<MorInfo>,
        identities: Vec<MorId>,
        composition: impl IntoIterator<Item = ((MorId, MorId), MorId)>,
    ) -> Result<FinCategory> {
        let n = object_labels.len();
        let m = mors.len();
        if identities.len() != n {
            return Err(Error::invalid(format!(
                "identities list has {} entries for {} objects",
                identities.len(),
                n
            )));
        }
        for (i, mi) in mors.iter().enumerate() {
            if mi.src.0 >= n || mi.tgt.0 >= n {
                return Err(Error::invalid(format!(
                    "morphism {} ({:?}) has endpoint out of range",
                    i, mi.label
                )));
            }
        }
        for (o, &id) in identities.iter().enumerate() {
            if id.0 >= m {
                return Err(Error::invalid(format!(
                    "identity of object {o} is out of range"
                )));
            }
        }

        let mut obj_by_label = BTreeMap::new();
        for (i, l) in object_labels.iter().enumerate() {
            if obj_by_label.insert(l.clone(), ObjId(i)).is_some() {
                return Err(Error::invalid(format!("duplicate object label {l:?}")));
            }
        }
        let mut mor_by_label = BTreeMap::new();
        for (i, mi) in mors.iter().enumerate() {
            if mor_by_label.insert(mi.label.clone(), MorId(i)).is_some() {
                return Err(Error::invalid(format!(
                    "duplicate morphism label {:?}",
                    mi.label
                )));
            }
        }

        let mut table = if m <= DENSE_LIMIT {
            ComposeTable::Dense(vec![DENSE_NONE; m * m])
        } else {
            ComposeTable::Sparse(BTreeMap::new())
        };
        for ((g, f), gf) in composition {
            if g.0 >= m || f.0 >= m || gf.0 >= m {
                return Err(Error::invalid(format!(
                    "composition entry ({g}, {f}) -> {gf} out of range"
                )));
            }
            let dup = match &mut table {
                ComposeTable::Dense(v) => {
                    let slot = &mut v[g.0 * m + f.0];
                    let dup = *slot != DENSE_NONE;
                    *slot = gf.0 as u32;
                    dup
                }
                ComposeTable::Sparse(map) => map
                    .insert((g.0 as u32, f.0 as u32), gf.0 as u32)
                    .is_some(),
            };
            if dup {
                return Err(Error::invalid(format!(
                    "duplicate composition entry for ({g}, {f})"
                )));
            }
        }

        let mut out_of = vec![Vec::new(); n];
        let mut into_ = vec![Vec::new(); n];
        let mut hom: BTreeMap<(ObjId, ObjId), Vec<MorId>> = BTreeMap::new();
        for (i, mi) in mors.iter().enumerate() {
            out_of[mi.src.0].push(MorId(i));
            into_[mi.tgt.0].push(MorId(i));
            hom.entry((mi.src, mi.tgt)).or_default().push(MorId(i));
        }

        Ok(FinCategory {
            object_labels,
            mors,
            identities,
            table,
            out_of,
            into_,
            hom,
            obj_by_label,
            mor_by_label,
        })
    }

    /// [`from_parts`](FinCategory::from_parts) followed by a full
    /// [`validate`](FinCategory::validate); any violation is an error.
    pub fn new(
        object_labels: Vec<String>,
        mors: Vec<MorInfo>,
        identities: Vec<MorId>,
        composition: impl IntoIterator<Item = ((MorId, MorId), MorId)>,
    ) -> Result<FinCategory> {
        let cat = FinCategory::from_parts(object_labels, mors, identities, composition)?;
        let report = cat.validate();
        if let Some(v) = report.violations.first() {
            return Err(Error::invalid(format!(
                "category law violation ({} total), first: {v}",
                report.violations.len()
            )));
        }
        Ok(cat)
    }

    pub fn object_count(&self) -> usize {
        self.object_labels.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.mors.len()
    }

    pub fn objects(&self) -> impl Iterator<Item = ObjId> {
        (0..self.object_labels.len()).map(ObjId)
    }

    pub fn morphisms(&self) -> impl Iterator<Item = MorId> {
        (0..self.mors.len()).map(MorId)
    }

    pub fn object_label(&self, o: ObjId) -> &str {
        &self.object_labels[o.0]
    }

    pub fn morphism_label(&self, f: MorId) -> &str {
        &self.mors[f.0].label
    }

    pub fn src(&self, f: MorId) -> ObjId {
        self.mors[f.0].src
    }

    pub fn tgt(&self, f: MorId) -> ObjId {
        self.mors[f.0].tgt
    }

    pub fn mor_info(&self, f: MorId) -> &MorInfo {
        &self.mors[f.0]
    }

    pub fn identity(&self, o: ObjId) -> MorId {
        self.identities[o.0]
    }

    pub fn is_identity(&self, f: MorId) -> bool {
        self.identities[self.src(f).0] == f
    }

    pub fn object_by_label(&self, label: &str) -> Option<ObjId> {
        self.obj_by_label.get(label).copied()
    }

    pub fn morphism_by_label(&self, label: &str) -> Option<MorId> {
        self.mor_by_label.get(label).copied()
    }

    /// `g ∘ f` (apply `f` first), or `None` if the pair is not composable
    /// or the table has no entry for it.
    #[inline]
    pub fn compose(&self, g: MorId, f: MorId) -> Option<MorId> {
        match &self.table {
            ComposeTable::Dense(v) => {
                let x = v[g.0 * self.mors.len() + f.0];
                (x != DENSE_NONE).then_some(MorId(x as usize))
            }
            ComposeTable::Sparse(map) => map
                .get(&(g.0 as u32, f.0 as u32))
                .map(|&x| MorId(x as usize)),
        }
    }

    /// Compose a path given in *application order*:
    /// `compose_path(&[f, g, h]) = h ∘ g ∘ f`. Empty paths are rejected —
    /// callers must supply the identity of the intended object themselves.
    pub fn compose_path(&self, path: &[MorId]) -> Option<MorId> {
        let (&first, rest) = path.split_first()?;
        rest.iter().try_fold(first, |acc, &g| self.compose(g, acc))
    }

    /// All morphisms `a -> b`, in ascending id order.
    pub fn hom_set(&self, a: ObjId, b: ObjId) -> &[MorId] {
        self.hom.get(&(a, b)).map_or(&[], |v| v.as_slice())
    }

    /// All morphisms with source `a`, in ascending id order.
    pub fn morphisms_from(&self, a: ObjId) -> &[MorId] {
        &self.out_of[a.0]
    }

    /// All morphisms with target `b`, in ascending id order.
    pub fn morphisms_into(&self, b: ObjId) -> &[MorId] {
        &self.into_[b.0]
    }

    /// If `f` is invertible, its (unique) two-sided inverse.
    pub fn is_isomorphism(&self, f: MorId) -> Option<MorId> {
        let (a, b) = (self.src(f), self.tgt(f));
        self.hom_set(b, a).iter().copied().find(|&g| {
            self.compose(g, f) == Some(self.identity(a))
                && self.compose(f, g) == Some(self.identity(b))
        })
    }

    /// Whether objects `a` and `b` are isomorphic; returns a witness `a -> b`.
    pub fn find_isomorphism(&self, a: ObjId, b: ObjId) -> Option<MorId> {
        self.hom_set(a, b)
            .iter()
            .copied()
            .find(|&f| self.is_isomorphism(f).is_some())
    }

    /// Least object with exactly one morphism to every object, if any.
    pub fn find_initial(&self) -> Option<ObjId> {
        self.objects()
            .find(|&i| self.objects().all(|b| self.hom_set(i, b).len() == 1))
    }

    /// The composition table as explicit `((g, f), g∘f)` triples.
    pub fn composition_pairs(&self) -> Vec<((MorId, MorId), MorId)> {
        let m = self.mors.len();
        match &self.table {
            ComposeTable::Dense(v) => {
                let mut out = Vec::new();
                for g in 0..m {
                    for f in 0..m {
                        let x = v[g * m + f];
                        if x != DENSE_NONE {
                            out.push(((MorId(g), MorId(f)), MorId(x as usize)));
                        }
                    }
                }
                out
            }
            ComposeTable::Sparse(map) => map
                .iter()
                .map(|(&(g, f), &x)| {
                    (
                        (MorId(g as usize), MorId(f as usize)),
                        MorId(x as usize),
                    )
                })
                .collect(),
        }
    }

    /// Check the category laws and report every violation found.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();

        for o in self.objects() {
            let id = self.identity(o);
            if self.src(id) != o || self.tgt(id) != o {
                violations.push(Violation::IdentityWrongEndpoints {
                    object: o,
                    identity: id,
                });
            }
        }

        // Composition entries exist exactly for composable pairs, with the
        // induced endpoints; identities are neutral.
        for g in self.morphisms() {
            for f in self.morphisms() {
                let composable = self.tgt(f) == self.src(g);
                match self.compose(g, f) {
                    None if composable => {
                        violations.push(Violation::CompositionMissing { g, f });
                    }
                    Some(gf) if !composable => {
                        violations.push(Violation::CompositionSpurious { g, f, entry: gf });
                    }
                    Some(gf) if self.src(gf) != self.src(f) || self.tgt(gf) != self.tgt(g) => {
                        violations.push(Violation::CompositionEndpoints { g, f, entry: gf });
                    }
                    Some(_) => {}
                    None => {}
                }
            }
        }

        for f in self.morphisms() {
            let (a, b) = (self.src(f), self.tgt(f));
            if self.compose(f, self.identity(a)) != Some(f)
                || self.compose(self.identity(b), f) != Some(f)
            {
                violations.push(Violation::IdentityNotNeutral { morphism: f });
            }
        }

        // Associativity over all composable triples. Skip if the table is
        // already inconsistent enough that composites are missing — the
        // violations above cover that.
        'assoc: for f in self.morphisms() {
            for &g in self.morphisms_from(self.tgt(f)) {
                let Some(gf) = self.compose(g, f) else { continue };
                for &h in self.morphisms_from(self.tgt(g)) {
                    let (Some(hg), Some(h_gf)) = (self.compose(h, g), self.compose(h, gf))
                    else {
                        continue;
                    };
                    if self.compose(hg, f) != Some(h_gf) {
                        violations.push(Violation::NotAssociative { h, g, f });
                        if violations.len() > 1000 {
                            break 'assoc;
                        }
                    }
                }
            }
        }

        ValidationReport { violations }
    }
}

/// One category-law violation, with enough context to locate it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("identity of {object} is {identity}, whose endpoints are not ({object}, {object})")]
    IdentityWrongEndpoints { object: ObjId, identity: MorId },
    #[error("{morphism} is not fixed by composition with identities")]
    IdentityNotNeutral { morphism: MorId },
    #[error("composable pair ({g}, {f}) has no composition entry")]
    CompositionMissing { g: MorId, f: MorId },
    #[error("non-composable pair ({g}, {f}) has a composition entry {entry}")]
    CompositionSpurious { g: MorId, f: MorId, entry: MorId },
    #[error("composite of ({g}, {f}) is {entry}, whose endpoints are wrong")]
    CompositionEndpoints { g: MorId, f: MorId, entry: MorId },
    #[error("associativity fails on ({h}, {g}, {f})")]
    NotAssociative { h: MorId, g: MorId, f: MorId },
}

/// Outcome of [`FinCategory::validate`]: empty means the laws hold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Incremental construction helper for hand-written categories.
///
/// Composites may be declared in any order; identities are registered
/// per object and their composition entries with everything else are
/// filled in automatically by [`CategoryBuilder::build`].
#[derive(Default)]
pub struct CategoryBuilder {
    object_labels: Vec<String>,
    mors: Vec<MorInfo>,
    identities: Vec<Option<MorId>>,
    composition: Vec<((MorId, MorId), MorId)>,
}

impl CategoryBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn object(&mut self, label: impl Into<String>) -> ObjId {
        self.object_labels.push(label.into());
        self.identities.push(None);
        ObjId(self.object_labels.len() - 1)
    }

    /// Add a non-identity morphism `src -> tgt`.
    pub fn morphism(&mut self, label: impl Into<String>, src: ObjId, tgt: ObjId) -> MorId {
        self.mors.push(MorInfo {
            src,
            tgt,
            label: label.into(),
        });
        MorId(self.mors.len() - 1)
    }

    /// Add the identity of `o` as a fresh morphism.
    pub fn identity(&mut self, o: ObjId, label: impl Into<String>) -> MorId {
        let id = self.morphism(label, o, o);
        self.identities[o.0] = Some(id);
        id
    }

    /// Declare `g ∘ f = gf` for a non-identity pair; identity composites
    /// are derived automatically.
    pub fn compose_rule(&mut self, g: MorId, f: MorId, gf: MorId) {
        self.composition.push(((g, f), gf));
    }

    /// Finish: fills in identity composites, then validates fully.
    pub fn build(self) -> Result<FinCategory> {
        let mut identities = Vec::with_capacity(self.identities.len());
        for (i, id) in self.identities.iter().enumerate() {
            match id {
                Some(m) => identities.push(*m),
                None => {
                    return Err(Error::invalid(format!(
                        "object {:?} has no identity declared",
                        self.object_labels[i]
                    )))
                }
            }
        }
        let mut composition = self.composition;
        for (i, mi) in self.mors.iter().enumerate() {
            let f = MorId(i);
            let (ia, ib) = (identities[mi.src.0], identities[mi.tgt.0]);
            if f != ia {
                composition.push(((f, ia), f));
            }
            if f != ib || f == ia {
                // second disjunct: the identity composed with itself
                composition.push(((ib, f), f));
            }
        }
        FinCategory::new(self.object_labels, self.mors, identities, composition)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `x --f--> y` with identities: the smallest non-discrete category.
    fn walking_arrow() -> FinCategory {
        let mut b = CategoryBuilder::new();
        let x = b.object("x");
        let y = b.object("y");
        b.identity(x, "id_x");
        b.identity(y, "id_y");
        b.morphism("f", x, y);
        b.build().unwrap()
    }

    #[test]
    fn walking_arrow_structure() {
        let c = walking_arrow();
        assert_eq!(c.object_count(), 2);
        assert_eq!(c.morphism_count(), 3);
        let (x, y) = (ObjId(0), ObjId(1));
        let f = c.morphism_by_label("f").unwrap();
        assert_eq!(c.hom_set(x, y), &[f]);
        assert_eq!(c.hom_set(y, x), &[]);
        assert_eq!(c.compose(f, c.identity(x)), Some(f));
        assert_eq!(c.compose(c.identity(y), f), Some(f));
        assert_eq!(c.compose(f, f), None);
        assert_eq!(c.find_initial(), Some(x));
        assert!(c.is_isomorphism(f).is_none());
        assert!(c.is_isomorphism(c.identity(x)).is_some());
    }

    #[test]
    fn compose_path_is_application_order() {
        // Chain x -> y -> z: compose_path(&[f, g]) must be g∘f.
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
        let c = b.build().unwrap();
        assert_eq!(c.compose_path(&[f, g]), Some(gf));
        assert_eq!(c.compose_path(&[g, f]), None);
        assert_eq!(c.compose_path(&[f]), Some(f));
        assert_eq!(c.compose_path(&[]), None);
    }

    #[test]
    fn validate_reports_missing_composite() {
        // Same chain but with the (g, f) entry withheld.
        let mors = vec![
            MorInfo { src: ObjId(0), tgt: ObjId(0), label: "1x".into() },
            MorInfo { src: ObjId(1), tgt: ObjId(1), label: "1y".into() },
            MorInfo { src: ObjId(2), tgt: ObjId(2), label: "1z".into() },
            MorInfo { src: ObjId(0), tgt: ObjId(1), label: "f".into() },
            MorInfo { src: ObjId(1), tgt: ObjId(2), label: "g".into() },
            MorInfo { src: ObjId(0), tgt: ObjId(2), label: "gf".into() },
        ];
        let ids = vec![MorId(0), MorId(1), MorId(2)];
        let mut comp = Vec::new();
        for (i, mi) in mors.iter().enumerate() {
            let f = MorId(i);
            if mi.src == mi.tgt && ids.contains(&f) {
                continue;
            }
            comp.push(((f, ids[mi.src.0]), f));
            comp.push(((ids[mi.tgt.0], f), f));
        }
        for &o in &ids {
            comp.push(((o, o), o));
        }
        let c = FinCategory::from_parts(
            vec!["x".into(), "y".into(), "z".into()],
            mors,
            ids,
            comp,
        )
        .unwrap();
        let report = c.validate();
        assert_eq!(
            report.violations,
            vec![Violation::CompositionMissing { g: MorId(4), f: MorId(3) }]
        );
    }

    #[test]
    fn validate_reports_bad_identity_and_spurious_entry() {
        // One object whose "identity" is an endomorphism that is not neutral.
        let mors = vec![
            MorInfo { src: ObjId(0), tgt: ObjId(0), label: "e".into() },
            MorInfo { src: ObjId(0), tgt: ObjId(0), label: "1".into() },
        ];
        // e∘e = 1 makes e non-neutral as the chosen identity.
        let comp = vec![
            ((MorId(0), MorId(0)), MorId(1)),
            ((MorId(0), MorId(1)), MorId(0)),
            ((MorId(1), MorId(0)), MorId(0)),
            ((MorId(1), MorId(1)), MorId(1)),
        ];
        let c = FinCategory::from_parts(vec!["x".into()], mors, vec![MorId(0)], comp).unwrap();
        let report = c.validate();
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::IdentityNotNeutral { .. })));
        assert!(!report.is_valid());
    }

    #[test]
    fn from_parts_rejects_duplicates_and_ranges() {
        let err = FinCategory::from_parts(
            vec!["x".into(), "x".into()],
            vec![],
            vec![],
            vec![],
        );
        assert!(err.is_err());

        let err = FinCategory::from_parts(
            vec!["x".into()],
            vec![MorInfo { src: ObjId(0), tgt: ObjId(3), label: "f".into() }],
            vec![MorId(0)],
            vec![],
        );
        assert!(err.is_err());
    }
}
