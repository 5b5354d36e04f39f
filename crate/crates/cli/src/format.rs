//! File formats: categories, functors, marked classes, and adjunction
//! synthesis requests, all as hand-editable JSON keyed by label.
//!
//! Morphisms are referenced by name everywhere; numeric ids are an
//! in-memory concern. Identity composites (`f ∘ id` and `id ∘ f`) are
//! filled in automatically on load, so files only list the interesting
//! entries, and emission drops them again for symmetry.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use despla_core::{Error as EngineError, FinCategory, FunctorData, MorId, MorInfo, ObjId};
use serde::{Deserialize, Serialize};

/// Anything that makes an input file unusable: missing file, bad JSON,
/// unresolved names, or category/functor law violations.
#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("{0}")]
    Data(String),
}

impl LoadError {
    pub fn data(msg: impl Into<String>) -> LoadError {
        LoadError::Data(msg.into())
    }
}

fn engine(err: EngineError) -> LoadError {
    LoadError::Data(err.to_string())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorEntry {
    pub name: String,
    pub src: String,
    pub tgt: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompositionEntry {
    pub after: String,
    pub before: String,
    pub equals: String,
}

/// A finite category on disk. `identities` maps object labels to morphism
/// names already listed under `morphisms`; `composition` lists `after ∘
/// before = equals` for non-identity pairs.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryFile {
    pub objects: Vec<String>,
    pub morphisms: Vec<MorEntry>,
    pub identities: BTreeMap<String, String>,
    pub composition: Vec<CompositionEntry>,
}

/// A category referenced either by path (relative to the referencing file)
/// or written out inline.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CatRef {
    Path(String),
    Inline(Box<CategoryFile>),
}

/// A functor on disk: object and morphism maps by label. Identity
/// morphisms may be omitted from `on_morphisms`; they are forced by the
/// object map.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorFile {
    pub dom: CatRef,
    pub cod: CatRef,
    pub on_objects: BTreeMap<String, String>,
    pub on_morphisms: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FunRef {
    Path(String),
    Inline(Box<FunctorFile>),
}

/// Marked morphism classes by name, with an optional weak-equivalence
/// class for transfer checking.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarksFile {
    pub cofibrations: Vec<String>,
    pub trivial_cofibrations: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weak_equivalences: Option<Vec<String>>,
}

/// A request to synthesize an adjunction: the right (forgetful) functor
/// plus the base objects its left adjoint should cover (all of them when
/// omitted).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdjunctionFile {
    pub right: FunRef,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub base: Option<Vec<String>>,
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, LoadError> {
    let text = std::fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| LoadError::Json {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_category_file(path: &Path) -> Result<CategoryFile, LoadError> {
    read_json(path)
}

pub fn read_functor_file(path: &Path) -> Result<FunctorFile, LoadError> {
    read_json(path)
}

pub fn read_marks_file(path: &Path) -> Result<MarksFile, LoadError> {
    read_json(path)
}

pub fn read_adjunction_file(path: &Path) -> Result<AdjunctionFile, LoadError> {
    read_json(path)
}

/// Object labels, morphisms, identities, and composition entries, ready
/// for [`FinCategory::from_parts`].
pub type CategoryParts = (Vec<String>, Vec<MorInfo>, Vec<MorId>, Vec<((MorId, MorId), MorId)>);

/// Assemble the raw parts of a category file: labels, morphisms, chosen
/// identities, and the composition list with identity composites filled in.
/// Structural errors (bad names, duplicates) are reported here; law
/// violations are left to the caller so `validate` can list them.
pub fn category_parts(cf: &CategoryFile) -> Result<CategoryParts, LoadError> {
    let mut obj_ids: BTreeMap<&str, ObjId> = BTreeMap::new();
    for (i, label) in cf.objects.iter().enumerate() {
        if obj_ids.insert(label, ObjId(i)).is_some() {
            return Err(LoadError::data(format!("duplicate object {label:?}")));
        }
    }
    let mut mor_ids: BTreeMap<&str, MorId> = BTreeMap::new();
    let mut mors = Vec::with_capacity(cf.morphisms.len());
    for (i, m) in cf.morphisms.iter().enumerate() {
        if mor_ids.insert(&m.name, MorId(i)).is_some() {
            return Err(LoadError::data(format!("duplicate morphism {:?}", m.name)));
        }
        let look = |label: &str| {
            obj_ids.get(label).copied().ok_or_else(|| {
                LoadError::data(format!("morphism {:?} uses unknown object {label:?}", m.name))
            })
        };
        mors.push(MorInfo {
            src: look(&m.src)?,
            tgt: look(&m.tgt)?,
            label: m.name.clone(),
        });
    }

    let mut identities = Vec::with_capacity(cf.objects.len());
    for label in &cf.objects {
        let name = cf.identities.get(label).ok_or_else(|| {
            LoadError::data(format!("object {label:?} has no identity entry"))
        })?;
        let id = mor_ids.get(name.as_str()).copied().ok_or_else(|| {
            LoadError::data(format!("identity of {label:?} names unknown morphism {name:?}"))
        })?;
        identities.push(id);
    }

    let mor = |name: &str| {
        mor_ids
            .get(name)
            .copied()
            .ok_or_else(|| LoadError::data(format!("composition entry names unknown morphism {name:?}")))
    };
    let mut composition = Vec::with_capacity(cf.composition.len());
    let mut listed = BTreeSet::new();
    for e in &cf.composition {
        let (g, f, gf) = (mor(&e.after)?, mor(&e.before)?, mor(&e.equals)?);
        composition.push(((g, f), gf));
        listed.insert((g, f));
    }
    // Identity composites are forced; fill in whichever the file omits.
    for (i, mi) in mors.iter().enumerate() {
        let f = MorId(i);
        let (ia, ib) = (identities[mi.src.0], identities[mi.tgt.0]);
        for (g, h) in [(f, ia), (ib, f)] {
            if listed.insert((g, h)) {
                composition.push(((g, h), f));
            }
        }
    }
    Ok((cf.objects.clone(), mors, identities, composition))
}

/// Load a category file all the way to a law-checked [`FinCategory`].
pub fn category_from_file(cf: &CategoryFile) -> Result<Arc<FinCategory>, LoadError> {
    let (labels, mors, identities, composition) = category_parts(cf)?;
    FinCategory::new(labels, mors, identities, composition)
        .map(Arc::new)
        .map_err(engine)
}

fn resolve_cat(r: &CatRef, base_dir: &Path) -> Result<Arc<FinCategory>, LoadError> {
    match r {
        CatRef::Path(p) => {
            let full = base_dir.join(p);
            category_from_file(&read_category_file(&full)?)
        }
        CatRef::Inline(cf) => category_from_file(cf),
    }
}

/// Domain, codomain, object map, and morphism map, ready for
/// [`FunctorData::new`].
pub type FunctorTables = (Arc<FinCategory>, Arc<FinCategory>, Vec<ObjId>, Vec<MorId>);

/// Resolve a functor file's names to raw mapping tables, without checking
/// functoriality. Path references resolve relative to `base_dir` (the
/// referencing file's directory).
pub fn functor_tables(ff: &FunctorFile, base_dir: &Path) -> Result<FunctorTables, LoadError> {
    let dom = resolve_cat(&ff.dom, base_dir)?;
    let cod = resolve_cat(&ff.cod, base_dir)?;

    let mut obj_map = Vec::with_capacity(dom.object_count());
    for o in dom.objects() {
        let label = dom.object_label(o);
        let image = ff.on_objects.get(label).ok_or_else(|| {
            LoadError::data(format!("object {label:?} is not mapped"))
        })?;
        obj_map.push(cod.object_by_label(image).ok_or_else(|| {
            LoadError::data(format!("object {label:?} maps to unknown {image:?}"))
        })?);
    }
    for named in ff.on_objects.keys() {
        if dom.object_by_label(named).is_none() {
            return Err(LoadError::data(format!(
                "on_objects names unknown object {named:?}"
            )));
        }
    }

    let mut mor_map = Vec::with_capacity(dom.morphism_count());
    for f in dom.morphisms() {
        let label = dom.morphism_label(f);
        let image = match ff.on_morphisms.get(label) {
            Some(image) => cod.morphism_by_label(image).ok_or_else(|| {
                LoadError::data(format!("morphism {label:?} maps to unknown {image:?}"))
            })?,
            // An identity left implicit is forced by the object map.
            None if dom.is_identity(f) => cod.identity(obj_map[dom.src(f).0]),
            None => {
                return Err(LoadError::data(format!(
                    "morphism {label:?} is not mapped"
                )))
            }
        };
        mor_map.push(image);
    }
    for named in ff.on_morphisms.keys() {
        if dom.morphism_by_label(named).is_none() {
            return Err(LoadError::data(format!(
                "on_morphisms names unknown morphism {named:?}"
            )));
        }
    }

    Ok((dom, cod, obj_map, mor_map))
}

/// Load a functor file all the way to validated [`FunctorData`].
pub fn functor_from_file(ff: &FunctorFile, base_dir: &Path) -> Result<FunctorData, LoadError> {
    let (dom, cod, obj_map, mor_map) = functor_tables(ff, base_dir)?;
    let p = FunctorData::new(dom, cod, obj_map, mor_map).map_err(engine)?;
    p.validate().map_err(engine)?;
    Ok(p)
}

pub fn load_functor(path: &Path) -> Result<FunctorData, LoadError> {
    let ff = read_functor_file(path)?;
    functor_from_file(&ff, path.parent().unwrap_or(Path::new(".")))
}

fn resolve_fun(r: &FunRef, base_dir: &Path) -> Result<FunctorData, LoadError> {
    match r {
        FunRef::Path(p) => load_functor(&base_dir.join(p)),
        FunRef::Inline(ff) => functor_from_file(ff, base_dir),
    }
}

/// Resolved contents of an adjunction request: the right functor and the
/// base objects to synthesize the left adjoint on.
pub fn adjunction_parts(
    af: &AdjunctionFile,
    base_dir: &Path,
) -> Result<(FunctorData, Vec<ObjId>), LoadError> {
    let right = resolve_fun(&af.right, base_dir)?;
    let base = match &af.base {
        None => right.cod().objects().collect(),
        Some(labels) => {
            let mut base = Vec::with_capacity(labels.len());
            for l in labels {
                base.push(right.cod().object_by_label(l).ok_or_else(|| {
                    LoadError::data(format!("base names unknown object {l:?}"))
                })?);
            }
            base
        }
    };
    Ok((right, base))
}

/// Resolve one name list against a category.
pub fn resolve_morphisms(
    c: &FinCategory,
    names: &[String],
    what: &str,
) -> Result<BTreeSet<MorId>, LoadError> {
    let mut out = BTreeSet::new();
    for n in names {
        let m = c.morphism_by_label(n).ok_or_else(|| {
            LoadError::data(format!("{what} names unknown morphism {n:?}"))
        })?;
        out.insert(m);
    }
    Ok(out)
}

/// Serialize a category, listing only non-identity composition entries;
/// the forced identity composites come back on load.
pub fn category_to_file(c: &FinCategory) -> CategoryFile {
    let morphisms = c
        .morphisms()
        .map(|f| MorEntry {
            name: c.morphism_label(f).to_string(),
            src: c.object_label(c.src(f)).to_string(),
            tgt: c.object_label(c.tgt(f)).to_string(),
        })
        .collect();
    let identities = c
        .objects()
        .map(|o| {
            (
                c.object_label(o).to_string(),
                c.morphism_label(c.identity(o)).to_string(),
            )
        })
        .collect();
    let composition = c
        .composition_pairs()
        .into_iter()
        .filter(|&((g, f), _)| !c.is_identity(g) && !c.is_identity(f))
        .map(|((g, f), gf)| CompositionEntry {
            after: c.morphism_label(g).to_string(),
            before: c.morphism_label(f).to_string(),
            equals: c.morphism_label(gf).to_string(),
        })
        .collect();
    CategoryFile {
        objects: c.objects().map(|o| c.object_label(o).to_string()).collect(),
        morphisms,
        identities,
        composition,
    }
}

/// Serialize a functor with both categories inline. Identity images are
/// left implicit.
pub fn functor_to_file(p: &FunctorData) -> FunctorFile {
    let dom = p.dom().as_ref();
    let cod = p.cod().as_ref();
    FunctorFile {
        dom: CatRef::Inline(Box::new(category_to_file(dom))),
        cod: CatRef::Inline(Box::new(category_to_file(cod))),
        on_objects: dom
            .objects()
            .map(|o| {
                (
                    dom.object_label(o).to_string(),
                    cod.object_label(p.on_obj(o)).to_string(),
                )
            })
            .collect(),
        on_morphisms: dom
            .morphisms()
            .filter(|&f| !dom.is_identity(f))
            .map(|f| {
                (
                    dom.morphism_label(f).to_string(),
                    cod.morphism_label(p.on_mor(f)).to_string(),
                )
            })
            .collect(),
    }
}
