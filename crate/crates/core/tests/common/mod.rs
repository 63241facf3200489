//! Random inputs and brute-force reference computations shared by the
//! integration tests and the acceptance runner.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use genord::construction::{TypeArg, TypeTerm};
use genord::hierarchy::{ClassDecl, ClassTable, NULL, OBJECT};
use genord::poset::Poset;
use rand::rngs::StdRng;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};

pub const SAMPLE: &str = include_str!("../fixtures/sample.classes");
pub const LISTS: &str = include_str!("../fixtures/lists.classes");

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("e{i}")).collect()
}

pub fn chain(n: usize) -> Poset {
    Poset::chain(names(n))
}

/// Random edges `i -> j` with `i < j`, each present with probability `p`.
pub fn random_edges(rng: &mut impl Rng, n: usize, p: f64) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(p) {
                edges.push((i, j));
            }
        }
    }
    edges
}

pub fn random_poset(rng: &mut impl Rng, max: usize) -> (Poset, Vec<(usize, usize)>) {
    let n = rng.random_range(1..=max);
    let p = rng.random_range(0.05..0.5);
    let edges = random_edges(rng, n, p);
    let poset = Poset::from_covers(names(n), edges.clone()).expect("i < j edges are acyclic");
    (poset, edges)
}

/// Adds a fresh bottom below and top above every element.
pub fn random_bounded_poset(rng: &mut impl Rng, max_inner: usize) -> Poset {
    let n = rng.random_range(0..=max_inner);
    let density = rng.random_range(0.05..0.5);
    let mut edges: Vec<(usize, usize)> = random_edges(rng, n, density)
        .into_iter()
        .map(|(a, b)| (a + 1, b + 1))
        .collect();
    for i in 1..=n {
        edges.push((0, i));
        edges.push((i, n + 1));
    }
    edges.push((0, n + 1));
    Poset::from_covers(names(n + 2), edges).expect("acyclic")
}

/// Reachability over raw edges, computed by depth-first search.
pub fn reachable(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut succ = vec![Vec::new(); n];
    for &(a, b) in edges {
        succ[a].push(b);
    }
    (0..n)
        .map(|start| {
            let mut seen = vec![false; n];
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                if !std::mem::replace(&mut seen[v], true) {
                    stack.extend(&succ[v]);
                }
            }
            seen
        })
        .collect()
}

pub fn brute_comparable_pairs(n: usize, edges: &[(usize, usize)]) -> BTreeSet<(usize, usize)> {
    let r = reachable(n, edges);
    let mut out = BTreeSet::new();
    for (a, row) in r.iter().enumerate() {
        for (b, &hit) in row.iter().enumerate() {
            if hit {
                out.insert((a, b));
            }
        }
    }
    out
}

/// Number of distinct intervals among `[bot, t]`, `[t, top]`, `[t, t]`.
pub fn brute_distinct_wildcard_intervals(p: &Poset) -> usize {
    let top = p.greatest().expect("bounded");
    let bot = p.least().expect("bounded");
    let mut set = HashSet::new();
    for t in p.elements() {
        set.insert((bot, t));
        set.insert((t, top));
        set.insert((t, t));
    }
    set.len()
}

/// A random class table. Non-generic classes only extend non-generic ones;
/// about 40% of classes are generic.
pub fn random_table(rng: &mut impl Rng, max_classes: usize) -> ClassTable {
    let n = rng.random_range(1..=max_classes);
    let mut decls: Vec<ClassDecl> = Vec::new();
    for i in 0..n {
        let name = format!("K{i}");
        let generic = rng.random_bool(0.4);
        let mut supers: Vec<&str> = vec![OBJECT];
        supers.extend(
            decls
                .iter()
                .filter(|d| generic || d.param.is_none())
                .map(|d| d.name.as_str()),
        );
        let sup = (*supers.choose(rng).expect("Object is always there")).to_owned();
        decls.push(if generic {
            ClassDecl::generic(name, sup)
        } else {
            ClassDecl::plain(name, sup)
        });
    }
    ClassTable::new(decls).expect("generated tables are valid")
}

fn plain_classes(table: &ClassTable) -> Vec<String> {
    table
        .class_names()
        .into_iter()
        .filter(|c| !table.is_generic(c))
        .map(str::to_owned)
        .collect()
}

fn generic_classes(table: &ClassTable) -> Vec<String> {
    table.generic_classes().map(|d| d.name.clone()).collect()
}

/// A random admittable term of nesting depth at most `depth`.
pub fn random_term(rng: &mut impl Rng, table: &ClassTable, depth: usize) -> TypeTerm {
    let generics = generic_classes(table);
    if depth == 0 || generics.is_empty() || rng.random_bool(0.35) {
        let plain = plain_classes(table);
        return TypeTerm::plain(plain.choose(rng).expect("Object and Null"));
    }
    let class = generics.choose(rng).expect("non-empty");
    TypeTerm::applied(class, random_arg(rng, table, depth - 1))
}

pub fn random_arg(rng: &mut impl Rng, table: &ClassTable, depth: usize) -> TypeArg {
    match rng.random_range(0..5) {
        0 => TypeArg::exact(random_term(rng, table, depth)),
        1 => TypeArg::unbounded(),
        2 => TypeArg::extends(random_term(rng, table, depth)),
        3 => TypeArg::super_of(random_term(rng, table, depth)),
        _ => TypeArg::interval(
            random_term(rng, table, depth),
            random_term(rng, table, depth),
        ),
    }
}

/// Ancestors of each class by walking declared superclasses; independent of
/// the poset machinery.
pub fn class_le(table: &ClassTable, a: &str, b: &str) -> bool {
    if a == NULL || b == OBJECT || a == b {
        return true;
    }
    let mut cur = a;
    while let Some(d) = table.get(cur) {
        if d.superclass == b {
            return true;
        }
        cur = &d.superclass;
    }
    false
}
