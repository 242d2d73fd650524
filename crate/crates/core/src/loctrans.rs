//! Local transitivity: `W4`/`L4` witnesses, the cyclic ordering of a locally
//! transitive tournament, and recovery of the carousel labelling.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits;
use crate::error::{Error, Result};
use crate::tournament::Tournament;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ObstructionKind {
    W4,
    L4,
}

/// A `W4` (apex beats a 3-cycle) or `L4` (a 3-cycle beats the apex).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Obstruction {
    pub kind: ObstructionKind,
    /// Sorted ascending.
    pub vertices: [usize; 4],
    pub apex: usize,
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} on {:?} with apex {}", self.kind, self.vertices, self.apex)
    }
}

/// Lexicographically least 3-cycle `(a, b, c)`, `a < b < c`, inside `mask`.
fn least_cycle_in(t: &Tournament, mask: &[u64]) -> Option<[usize; 3]> {
    let members: Vec<usize> = bits::ones(mask).collect();
    for (ai, &a) in members.iter().enumerate() {
        let in_a = t.in_row(a);
        for &b in &members[ai + 1..] {
            // a → b needs b → c → a; b → a needs a → c → b
            let c = if t.beats(a, b) {
                bits::first_common_after(mask, t.out_row(b), &in_a, b)
            } else {
                bits::first_common_after(mask, t.out_row(a), &t.in_row(b), b)
            };
            if let Some(c) = c {
                return Some([a, b, c]);
            }
        }
    }
    None
}

fn has_cycle_in(t: &Tournament, mask: &[u64]) -> bool {
    // acyclic iff the restricted outdegrees are exactly 0, 1, …, k−1
    let k = bits::count(mask);
    let mut seen = vec![false; k];
    for w in bits::ones(mask) {
        let d = bits::and_count(t.out_row(w), mask);
        if seen[d] {
            return true;
        }
        seen[d] = true;
    }
    false
}

fn obstruction_at(t: &Tournament, v: usize) -> Option<Obstruction> {
    let out = t.out_row(v).to_vec();
    let inn = t.in_row(v);
    let w4 = if has_cycle_in(t, &out) { least_cycle_in(t, &out) } else { None };
    let l4 = if has_cycle_in(t, &inn) { least_cycle_in(t, &inn) } else { None };
    let pick = match (w4, l4) {
        (Some(a), Some(b)) if b < a => Some((ObstructionKind::L4, b)),
        (Some(a), _) => Some((ObstructionKind::W4, a)),
        (None, Some(b)) => Some((ObstructionKind::L4, b)),
        (None, None) => None,
    };
    pick.map(|(kind, cyc)| {
        let mut vertices = [v, cyc[0], cyc[1], cyc[2]];
        vertices.sort_unstable();
        Obstruction { kind, vertices, apex: v }
    })
}

/// The witness with the lowest apex and, for that apex, the lexicographically
/// least 3-cycle in its out- or in-neighbourhood; `None` iff `t` is locally
/// transitive.
pub fn find_obstruction(t: &Tournament) -> Option<Obstruction> {
    (0..t.order())
        .into_par_iter()
        .find_map_first(|v| obstruction_at(t, v))
}

pub fn is_locally_transitive(t: &Tournament) -> bool {
    find_obstruction(t).is_none()
}

/// A permutation of the vertices read cyclically.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CyclicOrder(Vec<usize>);

impl CyclicOrder {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; order.len()];
        for &v in &order {
            if v >= order.len() || seen[v] {
                return Err(Error::InvalidOrder(format!(
                    "{order:?} is not a permutation of 0..{}",
                    order.len()
                )));
            }
            seen[v] = true;
        }
        Ok(Self(order))
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn reversed(&self) -> Self {
        Self(self.0.iter().rev().copied().collect())
    }

    /// `positions()[v]` is the index of `v` in the sequence.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.0.len()];
        for (j, &v) in self.0.iter().enumerate() {
            pos[v] = j;
        }
        pos
    }

    /// True iff, for every `v`, the `d⁺(v)` positions following `v` hold
    /// exactly `N⁺(v)`.
    pub fn is_out_interval_order(&self, t: &Tournament) -> bool {
        let n = self.0.len();
        if n != t.order() {
            return false;
        }
        let pos = self.positions();
        (0..n).all(|v| {
            (1..=t.out_degree(v)).all(|j| t.beats(v, self.0[(pos[v] + j) % n]))
        })
    }
}

/// Members of `mask` sorted so that earlier vertices beat later ones.
fn sort_by_beats(t: &Tournament, mask: &[u64]) -> Option<Vec<usize>> {
    let k = bits::count(mask);
    let mut slots = vec![usize::MAX; k];
    for w in bits::ones(mask) {
        let d = bits::and_count(t.out_row(w), mask);
        let slot = k - 1 - d;
        if slots[slot] != usize::MAX {
            return None;
        }
        slots[slot] = w;
    }
    Some(slots)
}

/// Cyclic order `0, N⁺(0), N⁻(0)` with both neighbourhoods sorted by the beat
/// relation. Every out-neighbourhood of a locally transitive tournament is an
/// interval following its vertex in this order; that is re-checked before
/// returning.
pub fn brouwer_order(t: &Tournament) -> Result<CyclicOrder> {
    if let Some(ob) = find_obstruction(t) {
        return Err(Error::NotLocallyTransitive(ob));
    }
    let root = 0;
    let cycle_error = |mask: &[u64]| {
        let cyc = least_cycle_in(t, mask).expect("sorting only fails on a cycle");
        let mut vertices = [root, cyc[0], cyc[1], cyc[2]];
        vertices.sort_unstable();
        let kind = if t.beats(root, cyc[0]) { ObstructionKind::W4 } else { ObstructionKind::L4 };
        Error::NotLocallyTransitive(Obstruction { kind, vertices, apex: root })
    };
    let out = t.out_row(root).to_vec();
    let inn = t.in_row(root);
    let mut order = vec![root];
    order.extend(sort_by_beats(t, &out).ok_or_else(|| cycle_error(&out))?);
    order.extend(sort_by_beats(t, &inn).ok_or_else(|| cycle_error(&inn))?);
    let order = CyclicOrder::new(order)?;
    assert!(
        order.is_out_interval_order(t),
        "cyclic order of a locally transitive tournament failed the interval check"
    );
    Ok(order)
}

/// A bijection `map[v]` from `V(t)` onto the vertices of `carousel(n)`.
pub fn carousel_isomorphism(t: &Tournament) -> Result<Vec<usize>> {
    let n = t.order();
    if n % 2 == 0 {
        return Err(Error::EvenOrder(n));
    }
    let half = (n - 1) / 2;
    if let Some(vertex) = (0..n).find(|&v| t.out_degree(v) != half) {
        return Err(Error::NotBalanced { vertex, outdegree: t.out_degree(vertex) });
    }
    let order = brouwer_order(t)?;
    let map = order.positions();
    for u in 0..n {
        for v in 0..n {
            if u != v {
                let forward = (map[v] + n - map[u]) % n;
                assert_eq!(
                    t.beats(u, v),
                    (1..=half).contains(&forward),
                    "carousel labelling disagrees on ({u}, {v})"
                );
            }
        }
    }
    Ok(map)
}

/// Fraction of vertices whose outdegree is more than `eps·n` away from `(n−1)/2`.
pub fn balance_deficiency(t: &Tournament, eps: f64) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!("eps {eps} must be positive")));
    }
    let n = t.order() as f64;
    let mid = (n - 1.0) / 2.0;
    let off = (0..t.order())
        .filter(|&v| (t.out_degree(v) as f64 - mid).abs() > eps * n)
        .count();
    Ok(off as f64 / n)
}

/// Fraction of pairs whose arc disagrees with the carousel laid along `order`
/// (each vertex beating the next `(n−1)/2`), minimized over `order` and its
/// reversal.
pub fn flip_distance_given_order(t: &Tournament, order: &CyclicOrder) -> Result<f64> {
    let n = t.order();
    if n % 2 == 0 {
        return Err(Error::EvenOrder(n));
    }
    if order.len() != n {
        return Err(Error::InvalidOrder(format!(
            "order has {} vertices, tournament has {n}",
            order.len()
        )));
    }
    if n == 1 {
        return Ok(0.0);
    }
    let backward = |seq: &[usize]| -> usize {
        (0..n)
            .into_par_iter()
            .map(|j| {
                (1..=(n - 1) / 2)
                    .filter(|&d| t.beats(seq[(j + d) % n], seq[j]))
                    .count()
            })
            .sum()
    };
    let best = backward(order.as_slice()).min(backward(order.reversed().as_slice()));
    Ok(best as f64 / t.arc_count() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::quad_counts;
    use crate::generators::{carousel, digraphon_sample, random_uniform, transitive};
    use crate::tournament::SmallClass4;
    use proptest::prelude::*;
    use rand::seq::SliceRandom;

    fn shuffled(t: &Tournament, seed: u64) -> (Tournament, Vec<usize>) {
        let mut perm: Vec<usize> = (0..t.order()).collect();
        perm.shuffle(&mut crate::generators::rng_from_seed(seed));
        (t.relabel(&perm).unwrap(), perm)
    }

    fn check_witness(t: &Tournament, ob: &Obstruction) {
        let sub = t.induced(&ob.vertices).unwrap();
        let expected = match ob.kind {
            ObstructionKind::W4 => SmallClass4::W4,
            ObstructionKind::L4 => SmallClass4::L4,
        };
        assert_eq!(sub.classify4().unwrap(), expected);
        let others = ob.vertices.iter().filter(|&&w| w != ob.apex);
        match ob.kind {
            ObstructionKind::W4 => assert!(others.clone().all(|&w| t.beats(ob.apex, w))),
            ObstructionKind::L4 => assert!(others.clone().all(|&w| t.beats(w, ob.apex))),
        }
    }

    #[test]
    fn obstruction_examples() {
        assert_eq!(find_obstruction(&carousel(9).unwrap()), None);
        assert_eq!(find_obstruction(&transitive(7).unwrap()), None);
        let w4 = SmallClass4::W4.representative();
        assert_eq!(
            find_obstruction(&w4),
            Some(Obstruction { kind: ObstructionKind::W4, vertices: [0, 1, 2, 3], apex: 0 })
        );
        let l4 = SmallClass4::L4.representative();
        assert_eq!(
            find_obstruction(&l4),
            Some(Obstruction { kind: ObstructionKind::L4, vertices: [0, 1, 2, 3], apex: 0 })
        );
        assert_eq!(find_obstruction(&SmallClass4::R4.representative()), None);
    }

    #[test]
    fn brouwer_order_examples() {
        let order = brouwer_order(&carousel(7).unwrap()).unwrap();
        assert_eq!(order.as_slice(), &[0, 1, 2, 3, 4, 5, 6]);
        let (t, _) = shuffled(&carousel(9).unwrap(), 3);
        assert!(brouwer_order(&t).unwrap().is_out_interval_order(&t));
        assert!(matches!(
            brouwer_order(&SmallClass4::W4.representative()),
            Err(Error::NotLocallyTransitive(_))
        ));
        assert_eq!(brouwer_order(&transitive(5).unwrap()).unwrap(), CyclicOrder::identity(5));
        assert_eq!(brouwer_order(&transitive(1).unwrap()).unwrap(), CyclicOrder::identity(1));
    }

    #[test]
    fn carousel_isomorphism_examples() {
        let (t, _) = shuffled(&carousel(11).unwrap(), 8);
        let map = carousel_isomorphism(&t).unwrap();
        let r = carousel(11).unwrap();
        let mapped = t.arcs().filter(|&(u, v)| r.beats(map[u], map[v])).count();
        assert_eq!(mapped, 55);
        assert_eq!(carousel_isomorphism(&carousel(5).unwrap()).unwrap(), vec![0, 1, 2, 3, 4]);
        assert!(matches!(
            carousel_isomorphism(&transitive(5).unwrap()),
            Err(Error::NotBalanced { .. })
        ));
        assert_eq!(carousel_isomorphism(&transitive(4).unwrap()), Err(Error::EvenOrder(4)));
    }

    #[test]
    fn balance_examples() {
        assert_eq!(balance_deficiency(&carousel(101).unwrap(), 0.001).unwrap(), 0.0);
        assert!((balance_deficiency(&transitive(100).unwrap(), 0.1).unwrap() - 0.8).abs() < 1e-15);
        assert_eq!(balance_deficiency(&transitive(100).unwrap(), 1.0).unwrap(), 0.0);
        assert!(balance_deficiency(&transitive(10).unwrap(), 0.0).is_err());
    }

    #[test]
    fn flip_distance_examples() {
        let r7 = carousel(7).unwrap();
        let id = CyclicOrder::identity(7);
        assert_eq!(flip_distance_given_order(&r7, &id).unwrap(), 0.0);
        let flipped = r7.with_reversed(2, 3).unwrap();
        assert!((flip_distance_given_order(&flipped, &id).unwrap() - 1.0 / 21.0).abs() < 1e-15);
        let t = random_uniform(101, 5).unwrap();
        let d = flip_distance_given_order(&t, &CyclicOrder::identity(101)).unwrap();
        assert!((d - 0.5).abs() < 0.1, "{d}");
        assert_eq!(
            flip_distance_given_order(&transitive(4).unwrap(), &CyclicOrder::identity(4)),
            Err(Error::EvenOrder(4))
        );
        assert!(CyclicOrder::new(vec![0, 0, 1]).is_err());
    }

    #[test]
    fn carousel_order_has_zero_flip_distance() {
        for m in (1..=201).step_by(2) {
            let t = carousel(m).unwrap();
            let order = brouwer_order(&t).unwrap();
            assert_eq!(flip_distance_given_order(&t, &order).unwrap(), 0.0, "m={m}");
        }
    }

    #[test]
    fn circular_samples_are_locally_transitive() {
        for seed in 0..10 {
            let t = digraphon_sample(60, seed).unwrap();
            let order = brouwer_order(&t).unwrap();
            assert!(order.is_out_interval_order(&t));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn obstruction_iff_w4_or_l4(n in 4usize..40, seed in any::<u64>(), circular in any::<bool>()) {
            let t = if circular {
                digraphon_sample(n, seed).unwrap()
            } else {
                random_uniform(n, seed).unwrap()
            };
            let q = quad_counts(&t).unwrap();
            match find_obstruction(&t) {
                None => prop_assert!(q.w4 == 0 && q.l4 == 0),
                Some(ob) => {
                    prop_assert!(q.w4 + q.l4 > 0);
                    check_witness(&t, &ob);
                }
            }
        }

        #[test]
        fn short_flip_breaks_a_carousel(half in 2usize..30, seed in any::<u64>(), x in any::<usize>(), d in any::<usize>()) {
            let m = 2 * half + 1;
            let (x, d) = (x % m, 1 + d % (half - 1));
            let flipped = carousel(m).unwrap().with_reversed(x, (x + d) % m).unwrap();
            let (t, _) = shuffled(&flipped, seed);
            let ob = find_obstruction(&t).expect("flipped carousel has an obstruction");
            check_witness(&t, &ob);
        }

        #[test]
        fn longest_flip_stays_locally_transitive(half in 1usize..30, x in any::<usize>()) {
            let m = 2 * half + 1;
            let x = x % m;
            let t = carousel(m).unwrap().with_reversed(x, (x + half) % m).unwrap();
            prop_assert!(find_obstruction(&t).is_none());
            prop_assert!(brouwer_order(&t).unwrap().is_out_interval_order(&t));
            let is_not_balanced = matches!(carousel_isomorphism(&t), Err(Error::NotBalanced { .. }));
            prop_assert!(is_not_balanced);
        }
    }
}
