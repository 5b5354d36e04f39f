//! Builtin instance generators. Output is deterministic: the same
//! parameters always produce byte-identical files.

use std::path::PathBuf;
use std::sync::Arc;

use despla_core::{
    join_one, walking_arrow, CategoryBuilder, Error as EngineError, FinSetCat, FunctorData, MSetCat,
    Monoid, MorId, ObjId, PointedCat,
};

use crate::format::{category_to_file, functor_to_file};
use crate::report::CliError;

pub const MAX_FINSET: usize = 4;
pub const MAX_MONOID_ORDER: usize = 4;
pub const MAX_CARRIER: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Kind {
    /// Sets of size up to the given bound and all functions.
    Finset,
    /// Pointed sets and their forgetful functor to finset.
    Pointed,
    /// Z/n-actions and their forgetful functor to finset.
    Mset,
    /// Two objects and one non-identity arrow.
    WalkingArrow,
    /// A bridge: the walking arrow plus an isolated object collapsed
    /// onto the freely adjoined initial object of the joined arrow.
    JoinDemo,
}

fn over_budget(what: &str, needed: usize, cap: usize) -> CliError {
    CliError::Engine(EngineError::BudgetExceeded {
        what: what.to_string(),
        needed,
        cap,
    })
}

/// The bridge demo: walking arrow plus an isolated object `w`, mapped
/// into the join of the walking arrow with `w` collapsed to the adjoined
/// initial object.
fn join_demo() -> FunctorData {
    let wa = walking_arrow();
    let j = join_one(&wa);

    let mut b = CategoryBuilder::new();
    let x = b.object("x");
    let y = b.object("y");
    let w = b.object("w");
    let id_x = b.identity(x, "id_x");
    let id_y = b.identity(y, "id_y");
    let id_w = b.identity(w, "id_w");
    let f = b.morphism("f", x, y);
    let dom = Arc::new(b.build().expect("generated instance is sound"));

    let e = &j.embed;
    let wa_f = wa.morphism_by_label("f").expect("walking arrow has f");
    let mut obj_map = vec![ObjId(0); dom.object_count()];
    obj_map[x.0] = e.on_obj(ObjId(0));
    obj_map[y.0] = e.on_obj(ObjId(1));
    obj_map[w.0] = j.zero;
    let mut mor_map = vec![MorId(0); dom.morphism_count()];
    mor_map[id_x.0] = j.joined.identity(obj_map[x.0]);
    mor_map[id_y.0] = j.joined.identity(obj_map[y.0]);
    mor_map[id_w.0] = j.joined.identity(j.zero);
    mor_map[f.0] = e.on_mor(wa_f);

    let q = FunctorData::new(dom, Arc::clone(&j.joined), obj_map, mor_map)
        .expect("generated instance is sound");
    q.validate().expect("generated instance is sound");
    q
}

/// Render the requested instance to JSON and a one-line description.
pub fn run(
    kind: Kind,
    size: Option<usize>,
    carrier: Option<usize>,
) -> Result<(String, String), CliError> {
    if carrier.is_some() && kind != Kind::Mset {
        return Err(CliError::usage("--carrier only applies to mset"));
    }
    if size.is_some() && matches!(kind, Kind::WalkingArrow | Kind::JoinDemo) {
        return Err(CliError::usage("this kind takes no size parameter"));
    }

    let (value, human) = match kind {
        Kind::Finset => {
            let n = size.unwrap_or(3);
            if n > MAX_FINSET {
                return Err(over_budget("generating finset", n, MAX_FINSET));
            }
            let fs = FinSetCat::new(n);
            let human = format!(
                "finset {n}: {} objects, {} morphisms",
                fs.cat.object_count(),
                fs.cat.morphism_count()
            );
            (serde_json::to_value(category_to_file(&fs.cat)), human)
        }
        Kind::Pointed => {
            let n = size.unwrap_or(3);
            if n > MAX_FINSET {
                return Err(over_budget("generating pointed sets", n, MAX_FINSET));
            }
            if n == 0 {
                return Err(CliError::usage("pointed sets need size at least 1"));
            }
            let pc = PointedCat::new(n);
            let human = format!(
                "pointed {n}: forgetful functor, {} objects over {}",
                pc.cat.object_count(),
                pc.fin.cat.object_count()
            );
            (serde_json::to_value(functor_to_file(&pc.forget)), human)
        }
        Kind::Mset => {
            let order = size.unwrap_or(2);
            let k = carrier.unwrap_or(2);
            if order > MAX_MONOID_ORDER {
                return Err(over_budget("generating mset monoid", order, MAX_MONOID_ORDER));
            }
            if order == 0 {
                return Err(CliError::usage("cyclic groups need order at least 1"));
            }
            if k > MAX_CARRIER {
                return Err(over_budget("generating mset carriers", k, MAX_CARRIER));
            }
            let ms = MSetCat::new(Monoid::cyclic_group(order), k)
                .map_err(CliError::Engine)?;
            let human = format!(
                "mset Z/{order} carrier {k}: forgetful functor, {} objects over {}",
                ms.cat.object_count(),
                ms.fin.cat.object_count()
            );
            (serde_json::to_value(functor_to_file(&ms.forget)), human)
        }
        Kind::WalkingArrow => {
            let wa = walking_arrow();
            let human = format!(
                "walking arrow: {} objects, {} morphisms",
                wa.object_count(),
                wa.morphism_count()
            );
            (serde_json::to_value(category_to_file(&wa)), human)
        }
        Kind::JoinDemo => {
            let q = join_demo();
            let human = format!(
                "join demo: bridge functor, {} objects onto {}",
                q.dom().object_count(),
                q.cod().object_count()
            );
            (serde_json::to_value(functor_to_file(&q)), human)
        }
    };
    let mut text = serde_json::to_string_pretty(&value.expect("generated files serialize"))
        .expect("generated files serialize");
    text.push('\n');
    Ok((text, human))
}

/// Write the generated file to the path or standard output.
pub fn write_out(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| {
            CliError::Load(crate::format::LoadError::Io {
                path: path.clone(),
                source,
            })
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
