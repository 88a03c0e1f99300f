//! Fill-reducing ordering by minimum degree on the symmetrised pattern.
//!
//! Rows with identical closed neighbourhoods (all DOFs of one element, or the
//! two time-coefficients of a DOF in the block systems) are merged into
//! weighted supervariables before elimination, which keeps the explicit
//! elimination graph small.

use std::collections::{BTreeSet, HashMap};

use super::CsrMatrix;
use crate::scalar::Real;

/// Returns `perm` with `perm[k]` = original index eliminated at step `k`.
pub fn minimum_degree<T: Real>(a: &CsrMatrix<T>) -> Vec<usize> {
    let n = a.nrows();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for (j, _) in a.row(i) {
            if i != j {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }

    // supervariable detection on closed neighbourhoods
    let mut group_of = vec![0usize; n];
    let mut members: Vec<Vec<usize>> = Vec::new();
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    for i in 0..n {
        let mut closed = adj[i].clone();
        if let Err(pos) = closed.binary_search(&i) {
            closed.insert(pos, i);
        }
        let g = *index.entry(closed).or_insert_with(|| {
            members.push(Vec::new());
            members.len() - 1
        });
        group_of[i] = g;
        members[g].push(i);
    }
    let ng = members.len();
    let weight: Vec<usize> = members.iter().map(Vec::len).collect();
    let mut gadj: Vec<Vec<usize>> = vec![Vec::new(); ng];
    for i in 0..n {
        let gi = group_of[i];
        for &j in &adj[i] {
            let gj = group_of[j];
            if gi != gj {
                gadj[gi].push(gj);
            }
        }
    }
    for list in &mut gadj {
        list.sort_unstable();
        list.dedup();
    }
    drop(adj);

    let degree_of = |list: &[usize]| list.iter().map(|&g| weight[g]).sum::<usize>();
    let mut degree: Vec<usize> = gadj.iter().map(|l| degree_of(l)).collect();
    let mut queue: BTreeSet<(usize, usize)> = (0..ng).map(|g| (degree[g], g)).collect();
    let mut eliminated = vec![false; ng];
    let mut perm = Vec::with_capacity(n);

    while let Some((_, s)) = queue.pop_first() {
        eliminated[s] = true;
        perm.extend_from_slice(&members[s]);
        let nbrs = std::mem::take(&mut gadj[s]);
        for &u in &nbrs {
            let merged = merge_without(&gadj[u], &nbrs, s, u);
            gadj[u] = merged;
            let d = degree_of(&gadj[u]);
            if d != degree[u] {
                queue.remove(&(degree[u], u));
                degree[u] = d;
                queue.insert((d, u));
            }
        }
        debug_assert!(nbrs.iter().all(|&u| !eliminated[u]));
    }
    perm
}

// Sorted union of `a` and `b`, dropping `skip_a` and `skip_b`.
fn merge_without(a: &[usize], b: &[usize], skip_a: usize, skip_b: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let next = match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) if x == y => {
                i += 1;
                j += 1;
                x
            }
            (Some(&x), Some(&y)) if x < y => {
                i += 1;
                x
            }
            (Some(_), Some(&y)) => {
                j += 1;
                y
            }
            (Some(&x), None) => {
                i += 1;
                x
            }
            (None, Some(&y)) => {
                j += 1;
                y
            }
            (None, None) => unreachable!(),
        };
        if next != skip_a && next != skip_b {
            out.push(next);
        }
    }
    out
}
