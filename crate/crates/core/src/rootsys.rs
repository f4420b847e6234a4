//! Catalog of the simply-laced finite root systems A_n, D_n, E6, E7, E8 in
//! Bourbaki numbering.
//!
//! Vertices are labelled 1..=rank in the public notation (words, printed
//! matrices) and stored 0-based in vectors such as [`Coloring`].

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    D,
    E,
}

/// A validated (family, rank) pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RootSystemId {
    family: Family,
    rank: usize,
}

impl RootSystemId {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
        };
        if !ok {
            let rule = match family {
                Family::A => "A_n requires n >= 1",
                Family::D => "D_n requires n >= 4",
                Family::E => "E_n requires n in {6, 7, 8}",
            };
            return Err(Error::InvalidRootSystem(format!("{family:?}{rank}: {rule}")));
        }
        Ok(RootSystemId { family, rank })
    }

    pub fn a(n: usize) -> Self {
        Self::new(Family::A, n).expect("A_n needs n >= 1")
    }

    pub fn d(n: usize) -> Self {
        Self::new(Family::D, n).expect("D_n needs n >= 4")
    }

    pub fn e(n: usize) -> Self {
        Self::new(Family::E, n).expect("E_n needs n in 6..=8")
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }
}

impl fmt::Display for RootSystemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.family, self.rank)
    }
}

impl FromStr for RootSystemId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('D') => Family::D,
            Some('E') => Family::E,
            _ => return Err(Error::Parse(format!("unknown root system {s:?}; expected A<n>, D<n>, E6, E7 or E8"))),
        };
        let rest = chars.as_str().trim_start_matches('_');
        let rank = rest
            .parse::<usize>()
            .map_err(|_| Error::Parse(format!("bad rank in {s:?}")))?;
        RootSystemId::new(family, rank)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Black,
    White,
}

/// Vertex colouring, indexed 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring(pub Vec<Color>);

impl Coloring {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn color(&self, v: usize) -> Color {
        self.0[v]
    }

    /// 0-based vertices of the given colour, ascending.
    pub fn class(&self, c: Color) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &col)| col == c)
            .map(|(i, _)| i)
            .collect()
    }

    /// Checks that no edge joins two vertices of the same colour.
    pub fn check_proper(&self, edges: &[(usize, usize)]) -> Result<()> {
        for &(i, j) in edges {
            if self.0[i] == self.0[j] {
                return Err(Error::ImproperColoring(i + 1, j + 1));
            }
        }
        Ok(())
    }
}

/// Everything the catalog knows about one root system.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootSystemData {
    pub id: RootSystemId,
    pub rank: usize,
    pub cartan: IntMatrix,
    /// 0-based unordered vertex pairs.
    pub edges: Vec<(usize, usize)>,
    pub h: u32,
    pub exponents: Vec<u32>,
    pub coloring: Coloring,
}

/// Dynkin edges in Bourbaki numbering, 0-based.
pub fn dynkin_edges(id: RootSystemId) -> Vec<(usize, usize)> {
    let n = id.rank;
    match id.family {
        Family::A => (0..n - 1).map(|i| (i, i + 1)).collect(),
        Family::D => {
            // chain 1-2-...-(n-1), with n attached to n-2
            let mut e: Vec<_> = (0..n - 2).map(|i| (i, i + 1)).collect();
            e.push((n - 3, n - 1));
            e
        }
        Family::E => {
            // 1-3-4-...-n with 2 attached to 4
            let mut e = vec![(0, 2)];
            e.extend((2..n - 1).map(|i| (i, i + 1)));
            e.push((1, 3));
            e
        }
    }
}

/// Cartan matrix 2I − adjacency of the Dynkin tree.
pub fn cartan_matrix(id: RootSystemId) -> IntMatrix {
    let n = id.rank;
    let mut a = IntMatrix::diagonal(&vec![2; n]);
    for (i, j) in dynkin_edges(id) {
        a.set(i, j, -1);
        a.set(j, i, -1);
    }
    a
}

/// Coxeter number and sorted exponents.
pub fn exponents(id: RootSystemId) -> (u32, Vec<u32>) {
    let n = id.rank as u32;
    match id.family {
        Family::A => (n + 1, (1..=n).collect()),
        Family::D => {
            let mut e: Vec<u32> = (0..n - 1).map(|i| 2 * i + 1).collect();
            e.push(n - 1);
            e.sort_unstable();
            (2 * n - 2, e)
        }
        Family::E => match n {
            6 => (12, vec![1, 4, 5, 7, 8, 11]),
            7 => (18, vec![1, 5, 7, 9, 11, 13, 17]),
            _ => (30, vec![1, 7, 11, 13, 17, 19, 23, 29]),
        },
    }
}

/// Breadth-first 2-colouring of a graph, seeded with vertex 0 white.
/// Fails on an odd cycle; every component gets its own white seed.
pub fn two_coloring(n: usize, edges: &[(usize, usize)]) -> Result<Coloring> {
    let mut adj = vec![Vec::new(); n];
    for &(i, j) in edges {
        adj[i].push(j);
        adj[j].push(i);
    }
    let mut col: Vec<Option<Color>> = vec![None; n];
    for seed in 0..n {
        if col[seed].is_some() {
            continue;
        }
        col[seed] = Some(Color::White);
        let mut queue = VecDeque::from([seed]);
        while let Some(v) = queue.pop_front() {
            let other = match col[v] {
                Some(Color::White) => Color::Black,
                _ => Color::White,
            };
            for &u in &adj[v] {
                match col[u] {
                    None => {
                        col[u] = Some(other);
                        queue.push_back(u);
                    }
                    Some(c) if c != other => return Err(Error::ImproperColoring(v + 1, u + 1)),
                    _ => {}
                }
            }
        }
    }
    Ok(Coloring(col.into_iter().map(|c| c.unwrap_or(Color::White)).collect()))
}

/// Proper colouring of the Dynkin tree, vertex 1 white.
pub fn bipartition(id: RootSystemId) -> Coloring {
    two_coloring(id.rank, &dynkin_edges(id)).expect("Dynkin diagrams are trees")
}

/// Edges of Γ(A): pairs i < j with a_ij ≠ 0.
pub fn graph_edges(a: &IntMatrix) -> Vec<(usize, usize)> {
    let n = a.n();
    let mut e = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if a.get(i, j) != 0 || a.get(j, i) != 0 {
                e.push((i, j));
            }
        }
    }
    e
}

pub fn data(id: RootSystemId) -> RootSystemData {
    let (h, exps) = exponents(id);
    RootSystemData {
        id,
        rank: id.rank,
        cartan: cartan_matrix(id),
        edges: dynkin_edges(id),
        h,
        exponents: exps,
        coloring: bipartition(id),
    }
}

/// The systems exercised by the test suites: A1..A8, D4..D8, E6, E7, E8.
pub fn catalog() -> Vec<RootSystemId> {
    let mut v: Vec<_> = (1..=8).map(RootSystemId::a).collect();
    v.extend((4..=8).map(RootSystemId::d));
    v.extend((6..=8).map(RootSystemId::e));
    v
}

/// Coxeter number and exponent multiset of a join of root systems.
///
/// The join Coxeter element is `(−1)^(r−1) ⊗ C_i`, so its eigenvalues are
/// `exp 2πi(Σ k_i/h_i + (r−1)/2)`. Each tuple contributes `k` with
/// `k/h ≡ Σ k_i/h_i + (r−1)/2 (mod 1)`, where `h` is the order of that
/// element (the smallest common denominator). For three factors one of which
/// is A1 this is `Σ k_i/h_i = (h + k)/h`.
pub fn join_exponent_arithmetic(ids: &[RootSystemId]) -> Result<(u32, Vec<u32>)> {
    if ids.is_empty() {
        return Err(Error::Domain("join of an empty list".into()));
    }
    let data: Vec<(u32, Vec<u32>)> = ids.iter().map(|&id| exponents(id)).collect();
    let mut denom: u64 = 2;
    for (h, _) in &data {
        denom = lcm(denom, *h as u64);
    }
    let shift = (ids.len() as u64 - 1) * denom / 2;
    let mut numerators = vec![shift % denom];
    for (h, exps) in &data {
        let step = denom / *h as u64;
        numerators = numerators
            .iter()
            .flat_map(|&acc| exps.iter().map(move |&k| (acc + k as u64 * step) % denom))
            .collect();
    }
    let g = numerators.iter().fold(denom, |g, &x| gcd(g, x));
    let h = denom / g;
    let mut exps: Vec<u32> = numerators.iter().map(|&x| (x / g) as u32).collect();
    exps.sort_unstable();
    Ok((h as u32, exps))
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invalid_ranks_rejected() {
        assert!(RootSystemId::new(Family::A, 0).is_err());
        assert!(RootSystemId::new(Family::D, 3).is_err());
        assert!(RootSystemId::new(Family::E, 9).is_err());
        let msg = RootSystemId::new(Family::E, 5).unwrap_err().to_string();
        assert!(msg.contains("{6, 7, 8}"), "{msg}");
    }

    #[test]
    fn parse_ids() {
        assert_eq!("E8".parse::<RootSystemId>().unwrap(), RootSystemId::e(8));
        assert_eq!("a4".parse::<RootSystemId>().unwrap(), RootSystemId::a(4));
        assert!("Z9".parse::<RootSystemId>().is_err());
        assert!("E9".parse::<RootSystemId>().is_err());
        assert!("D".parse::<RootSystemId>().is_err());
    }

    #[test]
    fn e8_cartan_matches_bourbaki_table() {
        let expected = IntMatrix::from_rows(&[
            [2, 0, -1, 0, 0, 0, 0, 0],
            [0, 2, 0, -1, 0, 0, 0, 0],
            [-1, 0, 2, -1, 0, 0, 0, 0],
            [0, -1, -1, 2, -1, 0, 0, 0],
            [0, 0, 0, -1, 2, -1, 0, 0],
            [0, 0, 0, 0, -1, 2, -1, 0],
            [0, 0, 0, 0, 0, -1, 2, -1],
            [0, 0, 0, 0, 0, 0, -1, 2],
        ])
        .unwrap();
        assert_eq!(cartan_matrix(RootSystemId::e(8)), expected);
    }

    #[test]
    fn a1_is_two() {
        assert_eq!(cartan_matrix(RootSystemId::a(1)), IntMatrix::diagonal(&[2]));
        assert_eq!(exponents(RootSystemId::a(1)), (2, vec![1]));
    }

    #[test]
    fn e8_exponents() {
        assert_eq!(
            exponents(RootSystemId::e(8)),
            (30, vec![1, 7, 11, 13, 17, 19, 23, 29])
        );
    }

    #[test]
    fn catalog_invariants() {
        for id in catalog() {
            let d = data(id);
            assert!(d.cartan.is_symmetric(), "{id}");
            assert!((0..d.rank).all(|i| d.cartan.get(i, i) == 2));
            assert_eq!(d.edges.len(), d.rank - 1, "{id} tree edge count");
            assert_eq!(d.exponents.len(), d.rank);
            assert_eq!(d.exponents[0], 1);
            assert_eq!(*d.exponents.last().unwrap(), d.h - 1);
            let sum: u32 = d.exponents.iter().sum();
            assert_eq!(2 * sum, d.rank as u32 * d.h, "{id} exponent sum");
            d.coloring.check_proper(&d.edges).unwrap();
            assert_eq!(d.coloring.color(0), Color::White);
            assert_eq!(graph_edges(&d.cartan).len(), d.rank - 1);
        }
    }

    #[test]
    fn path_colorings() {
        use Color::*;
        assert_eq!(bipartition(RootSystemId::a(2)).0, vec![White, Black]);
        assert_eq!(bipartition(RootSystemId::a(3)).0, vec![White, Black, White]);
        let e8 = bipartition(RootSystemId::e(8));
        assert_eq!(e8.class(White), vec![0, 3, 5, 7]);
        assert_eq!(e8.class(Black), vec![1, 2, 4, 6]);
    }

    #[test]
    fn odd_cycle_cannot_be_colored() {
        assert!(two_coloring(3, &[(0, 1), (1, 2), (2, 0)]).is_err());
    }

    #[test]
    fn join_exponents() {
        let (h, e) =
            join_exponent_arithmetic(&[RootSystemId::a(4), RootSystemId::a(2), RootSystemId::a(1)])
                .unwrap();
        assert_eq!((h, e), exponents(RootSystemId::e(8)));
        let (h, e) =
            join_exponent_arithmetic(&[RootSystemId::a(3), RootSystemId::a(2), RootSystemId::a(1)])
                .unwrap();
        assert_eq!((h, e), exponents(RootSystemId::e(6)));
        assert_eq!(join_exponent_arithmetic(&[RootSystemId::a(1)]).unwrap(), (2, vec![1]));
        // A2 * A2 is D4.
        assert_eq!(
            join_exponent_arithmetic(&[RootSystemId::a(2), RootSystemId::a(2)]).unwrap(),
            exponents(RootSystemId::d(4))
        );
        assert!(join_exponent_arithmetic(&[]).is_err());
    }

    #[test]
    fn e8_join_formula_enumeration() {
        // i/5 + j/3 + 1/2 = (30 + k)/30, enumerated directly.
        let mut ks = Vec::new();
        for i in 1..=4 {
            for j in 1..=2 {
                ks.push(6 * i + 10 * j + 15 - 30);
            }
        }
        ks.sort_unstable();
        assert_eq!(ks, vec![1, 7, 11, 13, 17, 19, 23, 29]);
    }
}
