//! Exact subtournament counts of order 3 and 4, per-arc flag statistics and
//! their empirical distributions.
//!
//! For an arc `u → v` every third vertex `w` falls in exactly one flag:
//!
//! | flag | arcs            |
//! |------|-----------------|
//! | `o`  | `u→w`, `v→w`    |
//! | `i`  | `w→u`, `w→v`    |
//! | `tr` | `u→w`, `w→v`    |
//! | `c`  | `v→w`, `w→u`    |
//!
//! Only `o = |N⁺(u) ∩ N⁺(v)|` needs a word-wise intersection; the other three
//! follow from the degrees. All counting is integer-exact and reductions over
//! vertices or arcs are order independent, so results do not depend on the
//! rayon schedule.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits;
use crate::error::{Error, Result};
use crate::tournament::{class4_from_scores, SmallClass4, Tournament};

/// `C(n, k)`, exact.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for j in 0..k {
        acc = acc * (n - j) as u128 / (j + 1) as u128;
    }
    acc as u64
}

fn require_order(t: &Tournament, required: usize) -> Result<()> {
    if t.order() < required {
        Err(Error::OrderTooSmall { required, actual: t.order() })
    } else {
        Ok(())
    }
}

/// An exact density `num / den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Density {
    pub num: u64,
    pub den: u64,
}

impl Density {
    pub fn value(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ArcFlagCounts {
    pub o: usize,
    pub i: usize,
    pub tr: usize,
    pub c: usize,
}

impl ArcFlagCounts {
    pub fn total(&self) -> usize {
        self.o + self.i + self.tr + self.c
    }

    pub fn get(&self, sel: FlagSelector) -> usize {
        match sel {
            FlagSelector::O => self.o,
            FlagSelector::I => self.i,
            FlagSelector::Tr => self.tr,
            FlagSelector::C => self.c,
            FlagSelector::OI => self.o + self.i,
            FlagSelector::CTr => self.c + self.tr,
        }
    }
}

/// A single flag or one of the two flag sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FlagSelector {
    O,
    I,
    Tr,
    C,
    OI,
    CTr,
}

impl FlagSelector {
    pub const ALL: [FlagSelector; 6] = [Self::O, Self::I, Self::Tr, Self::C, Self::OI, Self::CTr];
    pub const SINGLE: [FlagSelector; 4] = [Self::O, Self::I, Self::Tr, Self::C];
    pub const COMBINED: [FlagSelector; 2] = [Self::OI, Self::CTr];

    pub fn name(self) -> &'static str {
        match self {
            Self::O => "o",
            Self::I => "i",
            Self::Tr => "tr",
            Self::C => "c",
            Self::OI => "oi",
            Self::CTr => "ctr",
        }
    }

    pub fn is_combined(self) -> bool {
        matches!(self, Self::OI | Self::CTr)
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for FlagSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FlagSelector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.name() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::InvalidParameter(format!("unknown flag {s:?}")))
    }
}

/// Flag counts for the arc `u → v`.
pub fn arc_flag_counts(t: &Tournament, u: usize, v: usize) -> Result<ArcFlagCounts> {
    for vertex in [u, v] {
        if vertex >= t.order() {
            return Err(Error::VertexOutOfRange { vertex, n: t.order() });
        }
    }
    if u == v || !t.beats(u, v) {
        return Err(Error::NotAnArc(u, v));
    }
    Ok(flags_unchecked(t, u, v, t.out_degree(u), t.out_degree(v)))
}

#[inline]
fn flags_unchecked(t: &Tournament, u: usize, v: usize, du: usize, dv: usize) -> ArcFlagCounts {
    let o = bits::and_count(t.out_row(u), t.out_row(v));
    let tr = du - 1 - o;
    let c = dv - o;
    let i = t.order() - 2 - o - tr - c;
    ArcFlagCounts { o, i, tr, c }
}

/// Flag counts of every arc, in [`Tournament::arcs`] order.
pub fn all_arc_flag_counts(t: &Tournament) -> Vec<((usize, usize), ArcFlagCounts)> {
    let n = t.order();
    let degrees = t.out_degrees();
    (0..n)
        .into_par_iter()
        .flat_map_iter(|u| {
            let degrees = &degrees;
            (u + 1..n).map(move |v| {
                let (a, b) = if t.beats(u, v) { (u, v) } else { (v, u) };
                ((a, b), flags_unchecked(t, a, b, degrees[a], degrees[b]))
            })
        })
        .collect()
}

/// Folds `f` over the flag counts of every arc, reducing with `combine`.
fn fold_arcs<A, F, C>(t: &Tournament, init: A, f: F, combine: C) -> A
where
    A: Clone + Send + Sync,
    F: Fn(&mut A, ArcFlagCounts) + Sync + Send,
    C: Fn(A, A) -> A + Sync + Send,
{
    let n = t.order();
    let degrees = t.out_degrees();
    (0..n)
        .into_par_iter()
        .map(|u| {
            let mut acc = init.clone();
            for v in t.out_neighbours(u) {
                f(&mut acc, flags_unchecked(t, u, v, degrees[u], degrees[v]));
            }
            acc
        })
        .reduce(|| init.clone(), combine)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleCounts {
    pub n: usize,
    pub tr3: u64,
    pub c3: u64,
    pub triples: u64,
}

impl TripleCounts {
    pub fn p_tr3(&self) -> Density {
        Density { num: self.tr3, den: self.triples }
    }

    pub fn p_c3(&self) -> Density {
        Density { num: self.c3, den: self.triples }
    }
}

/// Transitive triples are counted at their source: `tr3 = Σ_v C(d⁺(v), 2)`.
pub fn triple_counts(t: &Tournament) -> Result<TripleCounts> {
    require_order(t, 3)?;
    let n = t.order() as u64;
    let triples = binomial(n, 3);
    let tr3: u64 = (0..t.order()).map(|v| binomial(t.out_degree(v) as u64, 2)).sum();
    Ok(TripleCounts { n: t.order(), tr3, c3: triples - tr3, triples })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadCounts {
    pub n: usize,
    pub tr4: u64,
    pub w4: u64,
    pub l4: u64,
    pub r4: u64,
    pub quads: u64,
}

impl QuadCounts {
    pub fn count(&self, class: SmallClass4) -> u64 {
        match class {
            SmallClass4::Tr4 => self.tr4,
            SmallClass4::W4 => self.w4,
            SmallClass4::L4 => self.l4,
            SmallClass4::R4 => self.r4,
        }
    }

    pub fn density(&self, class: SmallClass4) -> Density {
        Density { num: self.count(class), den: self.quads }
    }
}

/// Counts `(tr3, c3)` of the subtournament induced on `mask`.
fn masked_triples(t: &Tournament, mask: &[u64]) -> (u64, u64) {
    let k = bits::count(mask) as u64;
    let tr3: u64 = bits::ones(mask)
        .map(|w| binomial(bits::and_count(t.out_row(w), mask) as u64, 2))
        .sum();
    (tr3, binomial(k, 3) - tr3)
}

/// Exact order-4 counts.
///
/// A 4-set with a vertex of outdegree 3 is `TR4` or `W4` according to whether
/// the other three are transitive or cyclic; with a vertex of indegree 3 and
/// a cyclic rest it is `L4`. Summing inner triple counts over `N⁺(v)` and
/// `N⁻(v)` therefore counts each of those classes exactly once; `R4` is the
/// remainder.
pub fn quad_counts(t: &Tournament) -> Result<QuadCounts> {
    require_order(t, 4)?;
    let quads = binomial(t.order() as u64, 4);
    let (tr4, w4, l4) = (0..t.order())
        .into_par_iter()
        .map(|v| {
            let (tr_out, c_out) = masked_triples(t, t.out_row(v));
            let (_, c_in) = masked_triples(t, &t.in_row(v));
            (tr_out, c_out, c_in)
        })
        .reduce(|| (0, 0, 0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2));
    Ok(QuadCounts { n: t.order(), tr4, w4, l4, r4: quads - tr4 - w4 - l4, quads })
}

/// Triple and quadruple counts together with their normalizing binomials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountProfile {
    pub triples: TripleCounts,
    pub quads: QuadCounts,
}

impl CountProfile {
    pub fn n(&self) -> usize {
        self.triples.n
    }

    pub fn to_json(&self) -> serde_json::Value {
        let t = &self.triples;
        let q = &self.quads;
        serde_json::json!({
            "schema": 1,
            "n": t.n,
            "tr3": t.tr3,
            "c3": t.c3,
            "tr4": q.tr4,
            "w4": q.w4,
            "l4": q.l4,
            "r4": q.r4,
            "binom3": t.triples,
            "binom4": q.quads,
            "p_tr3": t.p_tr3().value(),
            "p_c3": t.p_c3().value(),
            "p_tr4": q.density(SmallClass4::Tr4).value(),
            "p_w4": q.density(SmallClass4::W4).value(),
            "p_l4": q.density(SmallClass4::L4).value(),
            "p_r4": q.density(SmallClass4::R4).value(),
        })
    }
}

pub fn count_profile(t: &Tournament) -> Result<CountProfile> {
    Ok(CountProfile { triples: triple_counts(t)?, quads: quad_counts(t)? })
}

/// Frequencies from uniformly sampled 4-subsets (with replacement).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledQuadDensities {
    pub samples: u64,
    pub seed: u64,
    /// Hits per class in `SmallClass4::ALL` order.
    pub hits: [u64; 4],
}

impl SampledQuadDensities {
    pub fn density(&self, class: SmallClass4) -> f64 {
        self.hits[class as usize] as f64 / self.samples as f64
    }

    /// Binomial standard error `sqrt(p(1−p)/samples)`.
    pub fn std_error(&self, class: SmallClass4) -> f64 {
        let p = self.density(class);
        (p * (1.0 - p) / self.samples as f64).sqrt()
    }

    pub fn to_json(&self, n: usize) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        map.insert("schema".into(), 1.into());
        map.insert("n".into(), n.into());
        map.insert("mode".into(), "sampled".into());
        map.insert("samples".into(), self.samples.into());
        map.insert("seed".into(), self.seed.into());
        for class in SmallClass4::ALL {
            let key = class.to_string().to_lowercase();
            map.insert(format!("p_{key}"), self.density(class).into());
            map.insert(format!("se_{key}"), self.std_error(class).into());
        }
        serde_json::Value::Object(map)
    }
}

const SAMPLE_CHUNK: u64 = 1 << 14;

/// Classifies `samples` uniform 4-subsets. Sample chunk `k` draws from stream
/// `k` of the seeded generator, so the result is independent of scheduling.
pub fn sampled_quad_densities(
    t: &Tournament,
    samples: u64,
    seed: u64,
) -> Result<SampledQuadDensities> {
    require_order(t, 4)?;
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be at least 1".into()));
    }
    let n = t.order();
    let chunks = samples.div_ceil(SAMPLE_CHUNK);
    let hits = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk);
            let len = SAMPLE_CHUNK.min(samples - chunk * SAMPLE_CHUNK);
            let mut hits = [0u64; 4];
            for _ in 0..len {
                let q = sample_distinct4(&mut rng, n);
                hits[classify_quad(t, q) as usize] += 1;
            }
            hits
        })
        .reduce(
            || [0; 4],
            |a, b| [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]],
        );
    Ok(SampledQuadDensities { samples, seed, hits })
}

fn sample_distinct4<R: Rng>(rng: &mut R, n: usize) -> [usize; 4] {
    let mut q = [0; 4];
    let mut k = 0;
    while k < 4 {
        let x = rng.gen_range(0..n);
        if !q[..k].contains(&x) {
            q[k] = x;
            k += 1;
        }
    }
    q
}

fn classify_quad(t: &Tournament, q: [usize; 4]) -> SmallClass4 {
    let mut scores = [0usize; 4];
    for a in 0..4 {
        for b in a + 1..4 {
            if t.beats(q[a], q[b]) {
                scores[a] += 1;
            } else {
                scores[b] += 1;
            }
        }
    }
    scores.sort_unstable();
    class4_from_scores(&scores).expect("a 4-vertex tournament has one of four score sequences")
}

/// Per-arc sums of each flag selector `g`: `Σ g`, `Σ g²` and `Σ g(g−1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ArcMomentSums {
    pub n: usize,
    pub arcs: u64,
    pub sum: [u128; 6],
    pub sum_sq: [u128; 6],
    pub sum_falling: [u128; 6],
}

impl ArcMomentSums {
    pub fn sum(&self, sel: FlagSelector) -> u128 {
        self.sum[sel.index()]
    }

    pub fn sum_sq(&self, sel: FlagSelector) -> u128 {
        self.sum_sq[sel.index()]
    }

    pub fn sum_falling(&self, sel: FlagSelector) -> u128 {
        self.sum_falling[sel.index()]
    }
}

pub fn arc_moment_sums(t: &Tournament) -> Result<ArcMomentSums> {
    require_order(t, 3)?;
    let init = ArcMomentSums { n: t.order(), ..Default::default() };
    Ok(fold_arcs(
        t,
        init,
        |acc, f| {
            acc.arcs += 1;
            for sel in FlagSelector::ALL {
                let g = f.get(sel) as u128;
                acc.sum[sel.index()] += g;
                acc.sum_sq[sel.index()] += g * g;
                acc.sum_falling[sel.index()] += g * g.saturating_sub(1);
            }
        },
        |mut a, b| {
            a.arcs += b.arcs;
            for k in 0..6 {
                a.sum[k] += b.sum[k];
                a.sum_sq[k] += b.sum_sq[k];
                a.sum_falling[k] += b.sum_falling[k];
            }
            a
        },
    ))
}

/// Sorted per-arc values `count / (n−2)` of one flag selector.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDistribution {
    pub selector: FlagSelector,
    /// `n − 2`, the normalizer of every value.
    pub denom: usize,
    /// Raw per-arc counts, ascending.
    pub counts: Vec<u32>,
}

impl EmpiricalDistribution {
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        let d = self.denom as f64;
        self.counts.iter().map(move |&c| c as f64 / d)
    }

    pub fn mean(&self) -> f64 {
        let s: u128 = self.counts.iter().map(|&c| c as u128).sum();
        s as f64 / (self.len() as f64 * self.denom as f64)
    }

    /// Plain second moment `E[value²]`.
    pub fn second_moment(&self) -> f64 {
        let s: u128 = self.counts.iter().map(|&c| c as u128 * c as u128).sum();
        s as f64 / (self.len() as f64 * (self.denom as f64).powi(2))
    }

    /// `E[g(g−1)] / ((n−2)(n−3))`; `None` when `n < 4`.
    pub fn factorial_second_moment(&self) -> Option<f64> {
        if self.denom < 2 {
            return None;
        }
        let s: u128 = self
            .counts
            .iter()
            .map(|&c| c as u128 * (c as u128).saturating_sub(1))
            .sum();
        Some(s as f64 / (self.len() as f64 * self.denom as f64 * (self.denom - 1) as f64))
    }

    /// Distinct counts with multiplicities, ascending.
    pub fn count_multiplicities(&self) -> Vec<(u32, usize)> {
        let mut out: Vec<(u32, usize)> = Vec::new();
        for &c in &self.counts {
            match out.last_mut() {
                Some((v, m)) if *v == c => *m += 1,
                _ => out.push((c, 1)),
            }
        }
        out
    }

    /// `value,count` CSV, one row per distinct value.
    pub fn to_value_csv(&self) -> String {
        let mut out = String::from("value,count\n");
        for (c, m) in self.count_multiplicities() {
            out.push_str(&format!("{},{}\n", c as f64 / self.denom as f64, m));
        }
        out
    }

    /// Equal-width histogram of the values over `[0, 1]`; the last bin is closed.
    pub fn histogram(&self, bins: usize) -> Result<Vec<(f64, f64, usize)>> {
        if bins == 0 {
            return Err(Error::InvalidParameter("bins must be at least 1".into()));
        }
        let mut hist = vec![0usize; bins];
        for v in self.values() {
            let b = ((v * bins as f64).floor() as usize).min(bins - 1);
            hist[b] += 1;
        }
        Ok(hist
            .into_iter()
            .enumerate()
            .map(|(b, c)| (b as f64 / bins as f64, (b + 1) as f64 / bins as f64, c))
            .collect())
    }

    pub fn to_histogram_csv(&self, bins: usize) -> Result<String> {
        let mut out = String::from("bin_lo,bin_hi,count\n");
        for (lo, hi, c) in self.histogram(bins)? {
            out.push_str(&format!("{lo},{hi},{c}\n"));
        }
        Ok(out)
    }
}

/// One value per arc for the chosen flag selector.
pub fn arc_flag_distribution(t: &Tournament, sel: FlagSelector) -> Result<EmpiricalDistribution> {
    require_order(t, 3)?;
    let mut counts: Vec<u32> = fold_arcs(
        t,
        Vec::new(),
        |acc, f| acc.push(f.get(sel) as u32),
        |mut a, mut b| {
            a.append(&mut b);
            a
        },
    );
    counts.par_sort_unstable();
    Ok(EmpiricalDistribution { selector: sel, denom: t.order() - 2, counts })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReferenceDistribution {
    /// Uniform on `[0, q]`.
    UniformOnInterval { q: f64 },
    PointMass { p: f64 },
}

impl ReferenceDistribution {
    pub fn cdf(&self, x: f64) -> f64 {
        match *self {
            Self::UniformOnInterval { q } => (x / q).clamp(0.0, 1.0),
            Self::PointMass { p } => {
                if x >= p {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// `lim_{y↑x} F(y)`.
    pub fn cdf_left(&self, x: f64) -> f64 {
        match *self {
            Self::UniformOnInterval { .. } => self.cdf(x),
            Self::PointMass { p } => {
                if x > p {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    fn atoms(&self) -> Option<f64> {
        match *self {
            Self::UniformOnInterval { .. } => None,
            Self::PointMass { p } => Some(p),
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Self::UniformOnInterval { q } if !(q > 0.0 && q <= 1.0) => Err(
                Error::InvalidParameter(format!("uniform upper end {q} not in (0, 1]")),
            ),
            Self::PointMass { p } if !(0.0..=1.0).contains(&p) => {
                Err(Error::InvalidParameter(format!("point mass {p} not in [0, 1]")))
            }
            _ => Ok(()),
        }
    }
}

pub fn ks_distance(d: &EmpiricalDistribution, r: &ReferenceDistribution) -> Result<f64> {
    let values: Vec<f64> = d.values().collect();
    ks_distance_sorted(&values, r)
}

/// Sup-distance between the empirical CDF of ascending `values` and `r`,
/// checked on both sides of every jump of either CDF.
pub fn ks_distance_sorted(values: &[f64], r: &ReferenceDistribution) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyDistribution);
    }
    r.validate()?;
    let n = values.len() as f64;
    let mut sup: f64 = 0.0;
    let mut i = 0;
    while i < values.len() {
        let x = values[i];
        let mut j = i;
        while j < values.len() && values[j] == x {
            j += 1;
        }
        sup = sup
            .max((i as f64 / n - r.cdf_left(x)).abs())
            .max((j as f64 / n - r.cdf(x)).abs());
        i = j;
    }
    if let Some(p) = r.atoms() {
        let below = values.partition_point(|&v| v < p) as f64 / n;
        let upto = values.partition_point(|&v| v <= p) as f64 / n;
        sup = sup.max(below - r.cdf_left(p)).max((upto - r.cdf(p)).abs());
    }
    Ok(sup)
}
