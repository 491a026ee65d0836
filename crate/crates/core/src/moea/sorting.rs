//! Constrained nondominated sorting, crowding distance and truncation.

use std::cmp::Ordering;

use super::{Objectives, Solution};

/// Ranks solutions into fronts under constraint domination.
///
/// Feasible solutions come first, ranked by Pareto domination. Infeasible
/// ones follow, one front per distinct violation level in ascending order.
pub fn constrained_fronts(objs: &[Objectives]) -> Vec<Vec<usize>> {
    let (feasible, mut infeasible): (Vec<usize>, Vec<usize>) = (0..objs.len()).partition(|&i| objs[i].is_feasible());

    let mut fronts = pareto_fronts(objs, &feasible);

    infeasible.sort_by(|&a, &b| objs[a].violation.total_cmp(&objs[b].violation).then(a.cmp(&b)));
    let mut level: Vec<usize> = Vec::new();
    for i in infeasible {
        if let Some(&last) = level.last() {
            if objs[last].violation != objs[i].violation {
                fronts.push(std::mem::take(&mut level));
            }
        }
        level.push(i);
    }
    if !level.is_empty() {
        fronts.push(level);
    }
    fronts
}

fn pareto_fronts(objs: &[Objectives], members: &[usize]) -> Vec<Vec<usize>> {
    let n = members.len();
    let mut dominated_by = vec![0usize; n];
    let mut dominates: Vec<Vec<usize>> = vec![Vec::new(); n];
    for a in 0..n {
        for b in (a + 1)..n {
            let (oa, ob) = (&objs[members[a]], &objs[members[b]]);
            if oa.dominates(ob) {
                dominates[a].push(b);
                dominated_by[b] += 1;
            } else if ob.dominates(oa) {
                dominates[b].push(a);
                dominated_by[a] += 1;
            }
        }
    }
    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| dominated_by[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &a in &current {
            for &b in &dominates[a] {
                dominated_by[b] -= 1;
                if dominated_by[b] == 0 {
                    next.push(b);
                }
            }
        }
        next.sort_unstable();
        fronts.push(current.iter().map(|&i| members[i]).collect());
        current = next;
    }
    fronts
}

/// Crowding distance of each member of `front`, aligned with `front`.
pub fn crowding_distance(objs: &[Objectives], front: &[usize]) -> Vec<f64> {
    let n = front.len();
    let mut dist = vec![0.0; n];
    if n <= 2 {
        return vec![f64::INFINITY; n];
    }
    for m in 0..2 {
        let key = |i: usize| objs[front[i]].pair()[m];
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| key(a).total_cmp(&key(b)).then(a.cmp(&b)));
        let span = key(order[n - 1]) - key(order[0]);
        dist[order[0]] = f64::INFINITY;
        dist[order[n - 1]] = f64::INFINITY;
        if span > 0.0 && span.is_finite() {
            for w in 1..n - 1 {
                dist[order[w]] += (key(order[w + 1]) - key(order[w - 1])) / span;
            }
        }
    }
    dist
}

fn lexicographic(a: &[f64], b: &[f64]) -> Ordering {
    a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
}

/// Reduces an evaluated population to `n` members by rank, then crowding
/// distance within the last admitted front. Ties in crowding distance go to
/// the smaller decision vector, then to the earlier member. Survivors keep
/// their relative order.
pub fn truncate(pop: Vec<Solution>, n: usize) -> Vec<Solution> {
    if pop.len() <= n {
        return pop;
    }
    let objs: Vec<Objectives> = pop.iter().map(|s| *s.obj()).collect();
    let mut keep: Vec<usize> = Vec::with_capacity(n);
    for front in constrained_fronts(&objs) {
        let room = n - keep.len();
        if front.len() <= room {
            keep.extend(&front);
        } else {
            let cd = crowding_distance(&objs, &front);
            let mut order: Vec<usize> = (0..front.len()).collect();
            order.sort_by(|&a, &b| {
                cd[b]
                    .total_cmp(&cd[a])
                    .then_with(|| lexicographic(&pop[front[a]].x, &pop[front[b]].x))
                    .then(front[a].cmp(&front[b]))
            });
            keep.extend(order[..room].iter().map(|&k| front[k]));
        }
        if keep.len() == n {
            break;
        }
    }
    keep.sort_unstable();
    let mut slots: Vec<Option<Solution>> = pop.into_iter().map(Some).collect();
    keep.into_iter().map(|i| slots[i].take().expect("index kept twice")).collect()
}
