//! Packed tournament representation, induced subtournaments and the order-3 /
//! order-4 isomorphism classes.
//!
//! Adjacency is stored as a full `n × n` bit matrix, one word-packed row per
//! vertex, so `N⁺(u)` is a row read and `N⁻(u)` is its complement minus `u`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bits::{self, Word};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Tournament {
    n: usize,
    words: usize,
    rows: Vec<Word>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum SmallClass3 {
    Tr3,
    C3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum SmallClass4 {
    Tr4,
    W4,
    L4,
    R4,
}

impl SmallClass4 {
    pub const ALL: [SmallClass4; 4] = [Self::Tr4, Self::W4, Self::L4, Self::R4];

    /// Sorted score sequence of the class.
    pub fn score_sequence(self) -> [usize; 4] {
        match self {
            Self::Tr4 => [0, 1, 2, 3],
            Self::W4 => [1, 1, 1, 3],
            Self::L4 => [0, 2, 2, 2],
            Self::R4 => [1, 1, 2, 2],
        }
    }

    /// A fixed labelled member of the class.
    pub fn representative(self) -> Tournament {
        let arcs: &[(usize, usize)] = match self {
            Self::Tr4 => &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
            Self::W4 => &[(0, 1), (0, 2), (0, 3), (1, 2), (2, 3), (3, 1)],
            Self::L4 => &[(1, 0), (2, 0), (3, 0), (1, 2), (2, 3), (3, 1)],
            // carousel(5) restricted to {0,1,2,3}
            Self::R4 => &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (3, 0)],
        };
        Tournament::from_arc_list(4, arcs).expect("class representatives are tournaments")
    }
}

impl fmt::Display for SmallClass3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Tr3 => "TR3",
            Self::C3 => "C3",
        })
    }
}

impl fmt::Display for SmallClass4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Tr4 => "TR4",
            Self::W4 => "W4",
            Self::L4 => "L4",
            Self::R4 => "R4",
        })
    }
}

impl Tournament {
    /// Builds a tournament by asking `u_beats_v(u, v)` once for every pair
    /// `u < v`, in lexicographic order.
    pub fn from_fn(n: usize, mut u_beats_v: impl FnMut(usize, usize) -> bool) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyTournament);
        }
        let words = bits::words_for(n);
        let mut rows = vec![0; n * words];
        for u in 0..n {
            for v in u + 1..n {
                let (a, b) = if u_beats_v(u, v) { (u, v) } else { (v, u) };
                bits::set(&mut rows[a * words..(a + 1) * words], b);
            }
        }
        Ok(Self { n, words, rows })
    }

    pub fn from_arc_list(n: usize, arcs: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyTournament);
        }
        let words = bits::words_for(n);
        let mut rows = vec![0; n * words];
        for &(u, v) in arcs {
            for vertex in [u, v] {
                if vertex >= n {
                    return Err(Error::VertexOutOfRange { vertex, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            bits::set(&mut rows[u * words..(u + 1) * words], v);
        }
        let t = Self { n, words, rows };
        t.validate()?;
        Ok(t)
    }

    fn validate(&self) -> Result<()> {
        for u in 0..self.n {
            if self.beats(u, u) {
                return Err(Error::SelfLoop(u));
            }
            for v in u + 1..self.n {
                match (self.beats(u, v), self.beats(v, u)) {
                    (true, true) => return Err(Error::ConflictingArc(u, v)),
                    (false, false) => return Err(Error::MissingArc(u, v)),
                    _ => {}
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    /// Number of 64-bit words per adjacency row.
    #[inline]
    pub fn row_words(&self) -> usize {
        self.words
    }

    #[inline]
    pub fn beats(&self, u: usize, v: usize) -> bool {
        bits::get(self.out_row(u), v)
    }

    /// Packed out-neighbourhood `N⁺(u)`.
    #[inline]
    pub fn out_row(&self, u: usize) -> &[Word] {
        &self.rows[u * self.words..(u + 1) * self.words]
    }

    /// Packed in-neighbourhood `N⁻(u)`.
    pub fn in_row(&self, u: usize) -> Vec<Word> {
        let mut row = bits::full(self.n);
        for (w, o) in row.iter_mut().zip(self.out_row(u)) {
            *w &= !o;
        }
        bits::clear(&mut row, u);
        row
    }

    #[inline]
    pub fn out_degree(&self, u: usize) -> usize {
        bits::count(self.out_row(u))
    }

    #[inline]
    pub fn in_degree(&self, u: usize) -> usize {
        self.n - 1 - self.out_degree(u)
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        (0..self.n).map(|u| self.out_degree(u)).collect()
    }

    pub fn out_neighbours(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        bits::ones(self.out_row(u))
    }

    /// All arcs `(u, v)` with `u → v`, ordered lexicographically by `(min, max)` pair.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            (u + 1..self.n).map(move |v| if self.beats(u, v) { (u, v) } else { (v, u) })
        })
    }

    pub fn arc_count(&self) -> usize {
        self.n * (self.n - 1) / 2
    }

    /// Nondecreasing outdegree list.
    pub fn score_sequence(&self) -> Vec<usize> {
        let mut s = self.out_degrees();
        s.sort_unstable();
        s
    }

    /// Subtournament on `subset`, relabelled by ascending original index.
    /// Duplicate entries are ignored.
    pub fn induced(&self, subset: &[usize]) -> Result<Tournament> {
        let mut verts = subset.to_vec();
        verts.sort_unstable();
        verts.dedup();
        if let Some(&vertex) = verts.iter().find(|&&v| v >= self.n) {
            return Err(Error::VertexOutOfRange { vertex, n: self.n });
        }
        Tournament::from_fn(verts.len(), |a, b| self.beats(verts[a], verts[b]))
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Tournament> {
        let mut inverse = vec![usize::MAX; self.n];
        if perm.len() != self.n {
            return Err(Error::InvalidParameter(format!(
                "permutation has length {}, expected {}",
                perm.len(),
                self.n
            )));
        }
        for (v, &p) in perm.iter().enumerate() {
            if p >= self.n || inverse[p] != usize::MAX {
                return Err(Error::InvalidParameter("not a permutation".into()));
            }
            inverse[p] = v;
        }
        Tournament::from_fn(self.n, |a, b| self.beats(inverse[a], inverse[b]))
    }

    /// Copy with the arc between `u` and `v` reversed.
    pub fn with_reversed(&self, u: usize, v: usize) -> Result<Tournament> {
        for vertex in [u, v] {
            if vertex >= self.n {
                return Err(Error::VertexOutOfRange { vertex, n: self.n });
            }
        }
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        let mut t = self.clone();
        let (a, b) = if self.beats(u, v) { (u, v) } else { (v, u) };
        let w = t.words;
        bits::clear(&mut t.rows[a * w..(a + 1) * w], b);
        bits::set(&mut t.rows[b * w..(b + 1) * w], a);
        Ok(t)
    }

    /// Copy with every arc reversed.
    pub fn reversed(&self) -> Tournament {
        Tournament::from_fn(self.n, |u, v| self.beats(v, u)).expect("order is nonzero")
    }

    pub fn classify3(&self) -> Result<SmallClass3> {
        if self.n != 3 {
            return Err(Error::WrongOrder { expected: 3, actual: self.n });
        }
        Ok(if (0..3).any(|u| self.out_degree(u) == 2) {
            SmallClass3::Tr3
        } else {
            SmallClass3::C3
        })
    }

    pub fn classify4(&self) -> Result<SmallClass4> {
        if self.n != 4 {
            return Err(Error::WrongOrder { expected: 4, actual: self.n });
        }
        let s = self.score_sequence();
        let class = class4_from_scores(&s).ok_or(Error::UnrecognizedScoreSequence(s))?;
        debug_assert!(is_isomorphic(self, &class.representative()));
        Ok(class)
    }

    /// Canonical text form: `n` followed by `n` rows of `'0'`/`'1'`.
    pub fn to_trn(&self) -> String {
        let mut out = String::with_capacity(self.n * (self.n + 1) + 16);
        out.push_str(&self.n.to_string());
        out.push('\n');
        for u in 0..self.n {
            out.extend((0..self.n).map(|v| if self.beats(u, v) { '1' } else { '0' }));
            out.push('\n');
        }
        out
    }

    pub fn parse_trn(text: &str) -> Result<Tournament> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "empty input".into(),
        })?;
        let n: usize = header.trim().parse().map_err(|_| Error::Parse {
            line: 1,
            message: format!("expected vertex count, found {header:?}"),
        })?;
        if n == 0 {
            return Err(Error::EmptyTournament);
        }
        let words = bits::words_for(n);
        let mut rows = vec![0; n * words];
        for u in 0..n {
            let (idx, line) = lines.next().ok_or(Error::Parse {
                line: u + 2,
                message: format!("expected {n} rows, found {u}"),
            })?;
            let line = line.trim_end_matches('\r');
            if line.len() != n {
                return Err(Error::Parse {
                    line: idx + 1,
                    message: format!("row has {} characters, expected {n}", line.len()),
                });
            }
            let row = &mut rows[u * words..(u + 1) * words];
            for (v, ch) in line.bytes().enumerate() {
                match ch {
                    b'0' => {}
                    b'1' => bits::set(row, v),
                    other => {
                        return Err(Error::Parse {
                            line: idx + 1,
                            message: format!("unexpected character {:?}", other as char),
                        })
                    }
                }
            }
        }
        if let Some((idx, _)) = lines.find(|(_, l)| !l.trim().is_empty()) {
            return Err(Error::Parse {
                line: idx + 1,
                message: "trailing content after last row".into(),
            });
        }
        let t = Tournament { n, words, rows };
        t.validate()?;
        Ok(t)
    }

    /// One `u v` line per arc `u → v`, in [`Tournament::arcs`] order.
    pub fn to_arc_list(&self) -> String {
        let mut out = String::new();
        for (u, v) in self.arcs() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    /// Parses whitespace-separated `u v` pairs. Without an explicit order, `n`
    /// is one more than the largest vertex mentioned (1 for an empty list).
    pub fn parse_arc_list(text: &str, n: Option<usize>) -> Result<Tournament> {
        let mut arcs = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parse = |s: &str| {
                usize::from_str(s).map_err(|_| Error::Parse {
                    line: idx + 1,
                    message: format!("expected vertex index, found {s:?}"),
                })
            };
            match fields.as_slice() {
                [u, v] => arcs.push((parse(u)?, parse(v)?)),
                _ => {
                    return Err(Error::Parse {
                        line: idx + 1,
                        message: "expected two vertex indices".into(),
                    })
                }
            }
        }
        let n = n.unwrap_or_else(|| arcs.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(1));
        Tournament::from_arc_list(n, &arcs)
    }
}

impl fmt::Debug for Tournament {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n <= 16 {
            write!(f, "Tournament({})", self.to_trn().replace('\n', " ").trim_end())
        } else {
            write!(f, "Tournament(n={})", self.n)
        }
    }
}

pub(crate) fn class4_from_scores(sorted: &[usize]) -> Option<SmallClass4> {
    SmallClass4::ALL
        .into_iter()
        .find(|c| c.score_sequence() == sorted)
}

/// Brute-force isomorphism test over all `n!` bijections; only meant for tiny orders.
pub fn is_isomorphic(a: &Tournament, b: &Tournament) -> bool {
    if a.order() != b.order() || a.score_sequence() != b.score_sequence() {
        return false;
    }
    let n = a.order();
    let mut perm: Vec<usize> = (0..n).collect();
    let matches = |p: &[usize]| {
        (0..n).all(|u| (0..n).all(|v| u == v || a.beats(u, v) == b.beats(p[u], p[v])))
    };
    loop {
        if matches(&perm) {
            return true;
        }
        if !next_permutation(&mut perm) {
            return false;
        }
    }
}

/// Lexicographic successor; `false` once the sequence is the last permutation.
pub fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}
