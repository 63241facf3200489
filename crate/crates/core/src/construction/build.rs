use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::term::{TypeArg, TypeTerm};
use crate::hierarchy::ClassTable;
use crate::operators::{intervals, partial_product, wildcards, OperatorError, ProductElement};
use crate::poset::{BoundedPoset, ElementId, Poset};

pub use crate::operators::WildcardPolicy;

pub const DEFAULT_BUDGET: usize = 100_000;

/// Which argument operator feeds the product at each level.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArgMode {
    #[default]
    Wildcards,
    Intervals,
}

impl fmt::Display for ArgMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ArgMode::Wildcards => "wildcards",
            ArgMode::Intervals => "intervals",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BuildOptions {
    pub depth: usize,
    pub arg_mode: ArgMode,
    pub wc_policy: WildcardPolicy,
    /// Largest number of elements any level may have.
    pub budget: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self {
            depth: 1,
            arg_mode: ArgMode::Wildcards,
            wc_policy: WildcardPolicy::Paper,
            budget: DEFAULT_BUDGET,
        }
    }
}

impl BuildOptions {
    pub fn new(depth: usize, arg_mode: ArgMode) -> Self {
        Self {
            depth,
            arg_mode,
            ..Self::default()
        }
    }

    pub fn with_policy(mut self, policy: WildcardPolicy) -> Self {
        self.wc_policy = policy;
        self
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuildError {
    #[error(
        "level {level} would have {} elements, over the budget of {budget} (sizes so far: {sizes:?})",
        sizes.last().copied().unwrap_or_default()
    )]
    BudgetExceeded {
        budget: usize,
        level: usize,
        /// Element counts of levels 0..=level, the last one being the level
        /// that was refused.
        sizes: Vec<usize>,
    },
    #[error("level {level}: {source}")]
    Operator {
        level: usize,
        #[source]
        source: OperatorError,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelStats {
    pub elements: usize,
    pub covers: usize,
}

/// A finite stage of the subtyping order, with every element named by a type.
#[derive(Clone, Debug)]
pub struct SubtypingPoset {
    poset: BoundedPoset,
    terms: Vec<TypeTerm>,
    index: HashMap<TypeTerm, ElementId>,
    depth: usize,
    arg_mode: ArgMode,
    wc_policy: WildcardPolicy,
}

impl SubtypingPoset {
    fn new(
        poset: Poset,
        terms: Vec<TypeTerm>,
        depth: usize,
        opts: &BuildOptions,
    ) -> Result<Self, OperatorError> {
        let labels = terms.iter().map(ToString::to_string).collect();
        let poset = poset
            .relabel(labels)
            .expect("one term per element")
            .bounded()
            .map_err(OperatorError::NotBounded)?;
        let index = terms
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), poset.id(i).expect("in range")))
            .collect();
        Ok(Self {
            poset,
            terms,
            index,
            depth,
            arg_mode: opts.arg_mode,
            wc_policy: opts.wc_policy,
        })
    }

    pub fn poset(&self) -> &BoundedPoset {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn arg_mode(&self) -> ArgMode {
        self.arg_mode
    }

    pub fn wc_policy(&self) -> WildcardPolicy {
        self.wc_policy
    }

    pub fn terms(&self) -> &[TypeTerm] {
        &self.terms
    }

    pub fn term(&self, id: ElementId) -> &TypeTerm {
        &self.terms[id.index()]
    }

    pub fn elements(&self) -> impl ExactSizeIterator<Item = ElementId> + '_ {
        self.poset.elements()
    }

    /// The element named by `t`. Under the semantic policy `? super Object`
    /// is found as `Object`.
    pub fn find(&self, t: &TypeTerm) -> Option<ElementId> {
        self.index
            .get(t)
            .or_else(|| self.index.get(&t.canonical()))
            .copied()
    }

    /// `a <: b` when both are materialized.
    pub fn leq(&self, a: &TypeTerm, b: &TypeTerm) -> Option<bool> {
        Some(self.poset.le(self.find(a)?, self.find(b)?))
    }

    pub fn stats(&self) -> LevelStats {
        LevelStats {
            elements: self.len(),
            covers: self.poset.covers().len(),
        }
    }

    /// Positions of `smaller`'s elements in `self`, if `smaller` embeds.
    pub fn embedding_of(&self, smaller: &SubtypingPoset) -> Option<Vec<ElementId>> {
        let map: Vec<ElementId> = smaller
            .terms
            .iter()
            .map(|t| self.index.get(t).copied())
            .collect::<Option<_>>()?;
        smaller.poset.embeds_into(&self.poset, &map).then_some(map)
    }

    pub fn to_dot(&self) -> String {
        self.poset.to_dot(&format!("S{}", self.depth))
    }

    pub fn to_json(&self) -> SubtypingJson {
        let mut upper: Vec<Vec<usize>> = vec![Vec::new(); self.len()];
        for &(lo, hi) in self.poset.covers() {
            upper[lo.index()].push(hi.index());
        }
        SubtypingJson {
            depth: self.depth,
            arg_mode: self.arg_mode,
            wc_policy: self.wc_policy,
            elements: self
                .terms
                .iter()
                .zip(upper)
                .enumerate()
                .map(|(id, (t, covers))| ElementJson {
                    id,
                    term: t.clone(),
                    depth: t.depth(),
                    covers,
                })
                .collect(),
        }
    }
}

/// Export format: each element with the ids of the elements covering it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubtypingJson {
    pub depth: usize,
    pub arg_mode: ArgMode,
    pub wc_policy: WildcardPolicy,
    pub elements: Vec<ElementJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementJson {
    pub id: usize,
    pub term: TypeTerm,
    pub depth: usize,
    pub covers: Vec<usize>,
}

/// Builds `S_0, ..., S_k`. `S_0` is the subclassing order on non-generic
/// classes; each further level pairs the generic classes with the arguments
/// built over the previous level.
pub fn build_levels(
    table: &ClassTable,
    opts: &BuildOptions,
) -> Result<Vec<SubtypingPoset>, BuildError> {
    let classes = table.subclassing();
    let c = classes.poset();
    let generic = classes.generic();
    let plain: Vec<ElementId> = c.elements().filter(|&e| !classes.is_generic(e)).collect();

    let s0_terms: Vec<TypeTerm> = plain
        .iter()
        .map(|&e| TypeTerm::plain(classes.name(e)))
        .collect();
    if s0_terms.len() > opts.budget {
        return Err(BuildError::BudgetExceeded {
            budget: opts.budget,
            level: 0,
            sizes: vec![s0_terms.len()],
        });
    }
    let s0 = SubtypingPoset::new(c.restrict(&plain), s0_terms, 0, opts)
        .map_err(|source| BuildError::Operator { level: 0, source })?;
    let mut levels = vec![s0];

    for level in 1..=opts.depth {
        let prev = levels.last().expect("S_0 exists");
        let args = match opts.arg_mode {
            ArgMode::Wildcards => wildcards(&prev.poset, opts.wc_policy),
            ArgMode::Intervals => Ok(intervals(&prev.poset)),
        }
        .map_err(|source| BuildError::Operator { level, source })?;

        let size = plain.len() + generic.len() * args.poset.len();
        if size > opts.budget {
            let mut sizes: Vec<usize> = levels.iter().map(SubtypingPoset::len).collect();
            sizes.push(size);
            return Err(BuildError::BudgetExceeded {
                budget: opts.budget,
                level,
                sizes,
            });
        }

        let arg_terms: Vec<TypeArg> = args
            .args
            .iter()
            .map(|a| {
                TypeArg::with_kind(
                    prev.term(a.lower).clone(),
                    prev.term(a.upper).clone(),
                    a.kind,
                )
            })
            .collect();
        let product = partial_product(c, generic, &args.poset)
            .map_err(|source| BuildError::Operator { level, source })?;
        let terms = product
            .elements
            .iter()
            .map(|e| match *e {
                ProductElement::Plain(p) => TypeTerm::plain(classes.name(p)),
                ProductElement::Pair { class, arg } => {
                    TypeTerm::applied(classes.name(class), arg_terms[arg.index()].clone())
                }
            })
            .collect();
        let next = SubtypingPoset::new(product.poset, terms, level, opts)
            .map_err(|source| BuildError::Operator { level, source })?;
        levels.push(next);
    }
    Ok(levels)
}

/// The last level of [`build_levels`].
pub fn build_subtyping(
    table: &ClassTable,
    opts: &BuildOptions,
) -> Result<SubtypingPoset, BuildError> {
    Ok(build_levels(table, opts)?
        .pop()
        .expect("at least S_0 is built"))
}
