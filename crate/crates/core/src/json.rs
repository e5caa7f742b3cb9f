//! JSON descriptors for groups, stacks, functions, morphisms and G-sets.
//!
//! Rationals are written as `"p/q"` strings (`"p"` for integers). A stack
//! reference inside a function or morphism descriptor is either a path,
//! resolved relative to the referring file, or an inline stack descriptor.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groupcat::{FiniteGroup, GroupExpr, GroupHom};
use crate::orbifold::FiniteGSet;
use crate::pushpull::{RemainderMap, StabData, StackMorphism, StratumMap};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::strata::{ConstructibleFn, StratifiedStack, Stratum};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum GroupDesc {
    Trivial,
    Finite { labels: Vec<String>, table: Vec<Vec<usize>> },
    Torus { rank: u32 },
    Unipotent { dim: u32 },
    Gl { n: u32 },
    Product { factors: Vec<GroupDesc> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StratumDesc {
    pub id: String,
    pub chi: i64,
    #[serde(default = "trivial_desc")]
    pub stabilizer: GroupDesc,
}

fn trivial_desc() -> GroupDesc {
    GroupDesc::Trivial
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StackDesc {
    pub strata: Vec<StratumDesc>,
    #[serde(default)]
    pub remainder: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StackRef {
    Path(String),
    Inline(StackDesc),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalDesc {
    Int(i64),
    Text(String),
}

impl RationalDesc {
    fn parse(&self) -> Result<Rational> {
        match self {
            RationalDesc::Int(n) => Ok(crate::rational::int(*n)),
            RationalDesc::Text(s) => parse_rational(s),
        }
    }

    fn from_rational(r: &Rational) -> Self {
        RationalDesc::Text(format_rational(r))
    }
}

fn zero_desc() -> RationalDesc {
    RationalDesc::Text("0".into())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionDesc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stack: Option<StackRef>,
    pub values: IndexMap<String, RationalDesc>,
    #[serde(default = "zero_desc")]
    pub default: RationalDesc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementRef {
    Index(usize),
    Label(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomDesc {
    pub images: Vec<ElementRef>,
    /// Required only where no stratum fixes the groups (the remainder).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<GroupDesc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<GroupDesc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase", deny_unknown_fields)]
pub enum StabDesc {
    Lean { kernel_chi: i64, quotient_chi: i64 },
    Rich { hom: HomDesc },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapEntryDesc {
    pub to: String,
    pub fiber_chi: i64,
    pub stab: StabDesc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RemainderDesc {
    pub fiber_chi: i64,
    pub stab: StabDesc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismDesc {
    pub source: StackRef,
    pub target: StackRef,
    pub map: IndexMap<String, MapEntryDesc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub remainder: Option<RemainderDesc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GSetDesc {
    pub group: GroupDesc,
    pub size: usize,
    pub action: Vec<Vec<usize>>,
}

// ---- groups ---------------------------------------------------------------

pub fn group_from_desc(d: &GroupDesc) -> Result<GroupExpr> {
    Ok(match d {
        GroupDesc::Trivial => GroupExpr::Trivial,
        GroupDesc::Finite { labels, table } => {
            GroupExpr::finite(FiniteGroup::from_table(labels.clone(), table.clone())?)
        }
        GroupDesc::Torus { rank } => GroupExpr::torus(*rank),
        GroupDesc::Unipotent { dim } => GroupExpr::unipotent(*dim),
        GroupDesc::Gl { n } => GroupExpr::gl(*n),
        GroupDesc::Product { factors } => {
            if factors.is_empty() {
                return Err(Error::Parse("product with no factors".into()));
            }
            GroupExpr::product(factors.iter().map(group_from_desc).collect::<Result<_>>()?)
        }
    })
}

pub fn finite_group_desc(g: &FiniteGroup) -> GroupDesc {
    GroupDesc::Finite { labels: g.labels().to_vec(), table: g.table().to_vec() }
}

pub fn group_to_desc(g: &GroupExpr) -> GroupDesc {
    match g {
        GroupExpr::Trivial => GroupDesc::Trivial,
        GroupExpr::Finite(f) => finite_group_desc(f),
        GroupExpr::Torus(rank) => GroupDesc::Torus { rank: *rank },
        GroupExpr::Unipotent(dim) => GroupDesc::Unipotent { dim: *dim },
        GroupExpr::GL(n) => GroupDesc::Gl { n: *n },
        GroupExpr::Product(fs) => GroupDesc::Product { factors: fs.iter().map(group_to_desc).collect() },
    }
}

fn finite_from_desc(d: &GroupDesc) -> Result<FiniteGroup> {
    group_from_desc(d)?
        .as_finite()
        .map(|g| g.into_owned())
        .ok_or_else(|| Error::Parse("expected a finite group".into()))
}

// ---- stacks ---------------------------------------------------------------

pub fn stack_from_desc(d: &StackDesc) -> Result<StratifiedStack> {
    let strata = d
        .strata
        .iter()
        .map(|s| Ok(Stratum::new(s.id.clone(), s.chi, group_from_desc(&s.stabilizer)?)))
        .collect::<Result<_>>()?;
    StratifiedStack::new(strata, d.remainder)
}

pub fn stack_to_desc(x: &StratifiedStack) -> StackDesc {
    StackDesc {
        strata: x
            .strata()
            .iter()
            .map(|s| StratumDesc { id: s.id.clone(), chi: s.coarse_chi, stabilizer: group_to_desc(&s.stabilizer) })
            .collect(),
        remainder: x.has_remainder(),
    }
}

/// Reads a JSON file and deserializes it.
pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn from_str<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn to_string_pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("descriptors serialize")
}

fn base_dir(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

pub fn read_stack(path: &Path) -> Result<StratifiedStack> {
    stack_from_desc(&read_json(path)?)
}

pub fn resolve_stack(r: &StackRef, base: &Path) -> Result<Arc<StratifiedStack>> {
    match r {
        StackRef::Path(p) => read_stack(&base.join(p)).map(Arc::new),
        StackRef::Inline(d) => stack_from_desc(d).map(Arc::new),
    }
}

// ---- functions ------------------------------------------------------------

pub fn function_from_desc(d: &FunctionDesc, stack: Arc<StratifiedStack>) -> Result<ConstructibleFn> {
    let values = d
        .values
        .iter()
        .map(|(id, v)| Ok((id.as_str(), v.parse()?)))
        .collect::<Result<Vec<_>>>()?;
    ConstructibleFn::from_map(stack, values, d.default.parse()?)
}

pub fn function_to_desc(f: &ConstructibleFn, stack: Option<StackRef>) -> FunctionDesc {
    FunctionDesc {
        stack,
        values: f
            .stack()
            .strata()
            .iter()
            .zip(f.values())
            .map(|(s, v)| (s.id.clone(), RationalDesc::from_rational(v)))
            .collect(),
        default: RationalDesc::from_rational(f.default_value()),
    }
}

/// Loads a function file. When `context` is given the function must live on
/// that stack (its own `stack` field, if any, must agree); otherwise the
/// `stack` field is required.
pub fn read_function(path: &Path, context: Option<Arc<StratifiedStack>>) -> Result<ConstructibleFn> {
    let d: FunctionDesc = read_json(path)?;
    let own = d.stack.as_ref().map(|r| resolve_stack(r, &base_dir(path))).transpose()?;
    let stack = match (context, own) {
        (Some(c), Some(o)) if *c != *o => return Err(Error::StackMismatch),
        (Some(c), _) => c,
        (None, Some(o)) => o,
        (None, None) => return Err(Error::Parse(format!("{}: function names no stack", path.display()))),
    };
    function_from_desc(&d, stack)
}

// ---- morphisms ------------------------------------------------------------

fn element(g: &FiniteGroup, r: &ElementRef) -> Result<usize> {
    match r {
        ElementRef::Index(i) => Ok(*i),
        ElementRef::Label(l) => g.index_of(l).ok_or_else(|| Error::Parse(format!("unknown element {l:?}"))),
    }
}

fn hom_from_desc(d: &HomDesc, source: FiniteGroup, target: FiniteGroup) -> Result<GroupHom> {
    let images = d.images.iter().map(|r| element(&target, r)).collect::<Result<_>>()?;
    GroupHom::new(source, target, images)
}

fn stab_from_desc(d: &StabDesc, source: &GroupExpr, target: &GroupExpr, at: &str) -> Result<StabData> {
    match d {
        StabDesc::Lean { kernel_chi, quotient_chi } => Ok(StabData::lean(*kernel_chi, *quotient_chi)),
        StabDesc::Rich { hom } => {
            let src = match &hom.source {
                Some(g) => finite_from_desc(g)?,
                None => source.as_finite().ok_or_else(|| Error::NonFiniteStabilizer(at.to_string()))?.into_owned(),
            };
            let tgt = match &hom.target {
                Some(g) => finite_from_desc(g)?,
                None => target.as_finite().ok_or_else(|| Error::NonFiniteStabilizer(at.to_string()))?.into_owned(),
            };
            Ok(StabData::Rich(hom_from_desc(hom, src, tgt)?))
        }
    }
}

fn stab_to_desc(s: &StabData, with_groups: bool) -> StabDesc {
    match s {
        StabData::Lean { kernel_chi, quotient_chi } => {
            StabDesc::Lean { kernel_chi: *kernel_chi, quotient_chi: *quotient_chi }
        }
        StabData::Rich(h) => StabDesc::Rich {
            hom: HomDesc {
                images: h.images().iter().map(|&i| ElementRef::Index(i)).collect(),
                source: with_groups.then(|| finite_group_desc(h.source())),
                target: with_groups.then(|| finite_group_desc(h.target())),
            },
        },
    }
}

pub fn morphism_from_parts(
    d: &MorphismDesc,
    source: Arc<StratifiedStack>,
    target: Arc<StratifiedStack>,
) -> Result<StackMorphism> {
    let mut slots: Vec<Option<StratumMap>> = vec![None; source.len()];
    for (id, e) in &d.map {
        let i = source.position(id)?;
        let to = target.position(&e.to)?;
        let stab = stab_from_desc(&e.stab, &source.stratum(i).stabilizer, &target.stratum(to).stabilizer, id)?;
        slots[i] = Some(StratumMap { to, fiber_chi: e.fiber_chi, stab });
    }
    let map = slots
        .into_iter()
        .enumerate()
        .map(|(i, r)| r.ok_or_else(|| Error::Parse(format!("stratum {:?} is not mapped", source.stratum(i).id))))
        .collect::<Result<_>>()?;
    let remainder = d
        .remainder
        .as_ref()
        .map(|r| {
            let stab = match &r.stab {
                StabDesc::Rich { hom } if hom.source.is_none() || hom.target.is_none() => {
                    return Err(Error::Parse("rich remainder data must name both groups".into()))
                }
                s => stab_from_desc(s, &GroupExpr::Trivial, &GroupExpr::Trivial, "remainder")?,
            };
            Ok(RemainderMap { fiber_chi: r.fiber_chi, stab })
        })
        .transpose()?;
    StackMorphism::new(source, target, map, remainder)
}

pub fn read_morphism(path: &Path) -> Result<(StackMorphism, MorphismDesc)> {
    let d: MorphismDesc = read_json(path)?;
    let base = base_dir(path);
    let source = resolve_stack(&d.source, &base)?;
    let target = resolve_stack(&d.target, &base)?;
    Ok((morphism_from_parts(&d, source, target)?, d))
}

pub fn morphism_to_desc(m: &StackMorphism, source: StackRef, target: StackRef) -> MorphismDesc {
    let map = m
        .source()
        .strata()
        .iter()
        .zip(m.records())
        .map(|(s, r)| {
            let entry = MapEntryDesc {
                to: m.target().stratum(r.to).id.clone(),
                fiber_chi: r.fiber_chi,
                stab: stab_to_desc(&r.stab, false),
            };
            (s.id.clone(), entry)
        })
        .collect();
    let remainder = m
        .remainder()
        .map(|r| RemainderDesc { fiber_chi: r.fiber_chi, stab: stab_to_desc(&r.stab, true) });
    MorphismDesc { source, target, map, remainder }
}

pub fn morphism_to_inline_desc(m: &StackMorphism) -> MorphismDesc {
    morphism_to_desc(
        m,
        StackRef::Inline(stack_to_desc(m.source())),
        StackRef::Inline(stack_to_desc(m.target())),
    )
}

// ---- G-sets ---------------------------------------------------------------

pub fn gset_from_desc(d: &GSetDesc) -> Result<FiniteGSet> {
    FiniteGSet::new(finite_from_desc(&d.group)?, d.size, d.action.clone())
}

pub fn gset_to_desc(a: &FiniteGSet) -> GSetDesc {
    GSetDesc { group: finite_group_desc(a.group()), size: a.size(), action: a.action().to_vec() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupcat::library::symmetric;
    use crate::rational::{int, ratio};

    #[test]
    fn parses_documented_descriptors() {
        let g: GroupDesc = from_str(r#"{"kind":"finite","labels":["e","a"],"table":[[0,1],[1,0]]}"#).unwrap();
        let z2 = FiniteGroup::from_table(vec!["e".into(), "a".into()], vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(group_from_desc(&g).unwrap(), GroupExpr::finite(z2));
        for (text, expected) in [
            (r#"{"kind":"torus","rank":2}"#, GroupExpr::Torus(2)),
            (r#"{"kind":"unipotent","dim":0}"#, GroupExpr::Trivial),
            (r#"{"kind":"gl","n":3}"#, GroupExpr::GL(3)),
            (r#"{"kind":"trivial"}"#, GroupExpr::Trivial),
            (
                r#"{"kind":"product","factors":[{"kind":"torus","rank":1},{"kind":"gl","n":2}]}"#,
                GroupExpr::Product(vec![GroupExpr::Torus(1), GroupExpr::GL(2)]),
            ),
        ] {
            assert_eq!(group_from_desc(&from_str(text).unwrap()).unwrap(), expected);
        }
        assert!(from_str::<GroupDesc>(r#"{"kind":"torus","rank":1,"extra":0}"#).is_err());

        let s: StackDesc = from_str(
            r#"{"strata":[{"id":"s0","chi":1,"stabilizer":{"kind":"torus","rank":1}}],"remainder":false}"#,
        )
        .unwrap();
        let x = Arc::new(stack_from_desc(&s).unwrap());
        let f: FunctionDesc = from_str(r#"{"stack":"x.json","values":{"s0":"3/2"},"default":"0"}"#).unwrap();
        assert_eq!(function_from_desc(&f, x).unwrap().value(0), &ratio(3, 2));
    }

    #[test]
    fn morphism_descriptor() {
        let text = r#"{
            "source": {"strata":[{"id":"pt","chi":1}]},
            "target": {"strata":[{"id":"pt","chi":1,"stabilizer":{"kind":"finite","labels":["e","a"],"table":[[0,1],[1,0]]}}]},
            "map": {"pt": {"to":"pt","fiber_chi":1,"stab":{"mode":"rich","hom":{"images":["e"]}}}}
        }"#;
        let d: MorphismDesc = from_str(text).unwrap();
        let m = morphism_from_parts(
            &d,
            resolve_stack(&d.source, Path::new(".")).unwrap(),
            resolve_stack(&d.target, Path::new(".")).unwrap(),
        )
        .unwrap();
        assert_eq!(crate::pushpull::m_phi(&m, 0).unwrap(), int(2));

        let lean = r#"{"source":{"strata":[{"id":"s0","chi":2}]},"target":{"strata":[{"id":"t0","chi":1}]},
            "map":{"s0":{"to":"t0","fiber_chi":2,"stab":{"mode":"lean","kernel_chi":1,"quotient_chi":1}}}}"#;
        let d: MorphismDesc = from_str(lean).unwrap();
        let m = morphism_from_parts(
            &d,
            resolve_stack(&d.source, Path::new(".")).unwrap(),
            resolve_stack(&d.target, Path::new(".")).unwrap(),
        )
        .unwrap();
        assert_eq!(morphism_to_inline_desc(&m), d);
    }

    #[test]
    fn gset_descriptor() {
        let a = crate::orbifold::FiniteGSet::natural(symmetric(3)).unwrap();
        let d = gset_to_desc(&a);
        let text = to_string_pretty(&d);
        assert_eq!(gset_from_desc(&from_str(&text).unwrap()).unwrap(), a);
    }
}
