//! Gabrielov moves on distinguished bases and the factorizations of E8 and
//! E6 through the joins `A4*A2*A1` and `A3*A2*A1`.
//!
//! A [`BasedLattice`] stores its basis vectors as the rows of an integer
//! matrix, written in the coordinates of an ambient lattice with Gram matrix
//! `ambient`. All pairings `(x, y)` use the ambient form.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{reflection, reflection_product, standard_polarization, PolarizedLattice};
use crate::matrix::{kron_vec, IntMatrix};
use crate::rootsys::{cartan_matrix, RootSystemId};

/// Word producing the E8 basis from the factorized basis of `A4*A2*A1`.
pub const E8_WORD: &str = "g2g1b4b3a3a4b4a5a6a7a1a2a3a4b6b3a1";
/// Word producing the E6 basis from the factorized basis of `A3*A2*A1`.
pub const E6_WORD: &str = "g4g1a1a2a3a4b6b3a1";

/// Reference change-of-basis matrix for E8 (columns: Bourbaki simple
/// roots in the tensor basis).
pub const G_E8_PRINTED: [[i64; 8]; 8] = [
    [0, 0, 0, 1, -1, 0, 0, 0],
    [-1, 1, 0, 0, 0, 0, 0, 0],
    [0, 0, -1, 1, 0, 0, 0, 0],
    [-1, 1, -1, 0, 0, 1, 0, 0],
    [0, 1, -1, 0, 0, 0, 1, 0],
    [-1, 1, -1, 0, 0, 0, 1, 0],
    [0, 1, -1, 0, 0, 0, 0, 1],
    [0, 1, -1, 0, 0, 0, 0, 0],
];

pub const G_E6_PRINTED: [[i64; 6]; 6] = [
    [0, -1, 1, 0, 0, 0],
    [-1, 0, 1, 0, 0, 0],
    [0, -1, 0, 1, 0, 0],
    [-1, 0, 0, 0, 1, 0],
    [0, 0, 0, 0, 0, 1],
    [-1, 0, 0, 0, 0, 1],
];

/// Reference conjugator with `w⁻¹ C_BW w = C_G` for E8.
pub const W_E8_PRINTED: [usize; 16] = [7, 5, 3, 2, 6, 4, 5, 1, 3, 2, 4, 1, 3, 2, 1, 2];
/// Reference E6 conjugator. It does not satisfy the identity; see
/// [`e6_conjugator_report`].
pub const V_E6_PRINTED: [usize; 9] = [5, 3, 2, 4, 1, 3, 3, 1, 2];

/// Gabrielov's labelling of E8: chain 1-2-3-5-6-7-8 with 4 attached to 3.
pub const E8_GABRIELOV_EDGES: [(usize, usize); 7] = [(1, 2), (2, 3), (3, 5), (5, 6), (6, 7), (7, 8), (3, 4)];

/// Bourbaki label `i` (1-based) sits at Gabrielov label `GABRIELOV_OF_BOURBAKI[i-1]`.
pub const GABRIELOV_OF_BOURBAKI: [usize; 8] = [1, 4, 2, 3, 5, 6, 7, 8];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MoveKind {
    Alpha,
    Beta,
    Gamma,
}

/// One move with a 1-based index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Move {
    pub kind: MoveKind,
    pub index: usize,
}

impl Move {
    pub fn alpha(m: usize) -> Self {
        Move { kind: MoveKind::Alpha, index: m }
    }

    pub fn beta(m: usize) -> Self {
        Move { kind: MoveKind::Beta, index: m }
    }

    pub fn gamma(m: usize) -> Self {
        Move { kind: MoveKind::Gamma, index: m }
    }

    /// Inverse move in rank `rank`: `α_m⁻¹ = β_{m+1}`, `β_m⁻¹ = α_{m−1}`
    /// (cyclically), `γ_m⁻¹ = γ_m`. Valid for `σ = −1` whenever the two
    /// vectors involved have square 2.
    pub fn inverse(&self, rank: usize) -> Move {
        match self.kind {
            MoveKind::Alpha => Move::beta(self.index % rank + 1),
            MoveKind::Beta => Move::alpha((self.index + rank - 2) % rank + 1),
            MoveKind::Gamma => *self,
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.kind {
            MoveKind::Alpha => 'a',
            MoveKind::Beta => 'b',
            MoveKind::Gamma => 'g',
        };
        write!(f, "{c}{}", self.index)
    }
}

/// A word in the moves, written as printed: `"g2g1b4"` means `γ2 γ1 β4`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveWord(pub Vec<Move>);

impl MoveWord {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn repeat(m: Move, times: usize) -> Self {
        MoveWord(vec![m; times])
    }

    pub fn inverse(&self, rank: usize) -> Self {
        MoveWord(self.0.iter().rev().map(|m| m.inverse(rank)).collect())
    }
}

impl FromStr for MoveWord {
    type Err = Error;

    /// Accepts `a`/`b`/`g` or `α`/`β`/`γ` followed by a decimal index;
    /// whitespace and `∘` are ignored.
    fn from_str(s: &str) -> Result<Self> {
        let mut moves = Vec::new();
        let mut chars = s.chars().filter(|c| !c.is_whitespace() && *c != '∘').peekable();
        while let Some(c) = chars.next() {
            let kind = match c {
                'a' | 'α' => MoveKind::Alpha,
                'b' | 'β' => MoveKind::Beta,
                'g' | 'γ' => MoveKind::Gamma,
                other => return Err(Error::Parse(format!("unexpected '{other}' in move word {s:?}"))),
            };
            let mut digits = String::new();
            while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                digits.push(*d);
                chars.next();
            }
            let index: usize = digits
                .parse()
                .map_err(|_| Error::Parse(format!("move without index in {s:?}")))?;
            if index == 0 {
                return Err(Error::Parse("move indices are 1-based".into()));
            }
            moves.push(Move { kind, index });
        }
        Ok(MoveWord(moves))
    }
}

impl fmt::Display for MoveWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for m in &self.0 {
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompositionOrder {
    LeftmostFirst,
    RightmostFirst,
}

/// Sign and composition conventions for the move formulas
/// `x_m' = x_{m+1} + σ (x_{m+1}, x_m) x_m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conventions {
    pub sigma: i64,
    pub order: CompositionOrder,
}

impl Default for Conventions {
    /// `σ = −1`, rightmost move first: the only combination under which the
    /// E8 word yields a root basis.
    fn default() -> Self {
        Conventions { sigma: -1, order: CompositionOrder::RightmostFirst }
    }
}

impl Conventions {
    pub fn all() -> [Conventions; 4] {
        let mut out = [Conventions::default(); 4];
        let mut k = 0;
        for sigma in [1, -1] {
            for order in [CompositionOrder::LeftmostFirst, CompositionOrder::RightmostFirst] {
                out[k] = Conventions { sigma, order };
                k += 1;
            }
        }
        out
    }

    pub fn flags(&self) -> Vec<String> {
        let order = match self.order {
            CompositionOrder::LeftmostFirst => "leftmost-first",
            CompositionOrder::RightmostFirst => "rightmost-first",
        };
        vec![format!("sigma={:+}", self.sigma), order.to_string()]
    }
}

/// Ambient Gram matrix plus an ordered basis (rows of `basis`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasedLattice {
    pub ambient: IntMatrix,
    pub basis: IntMatrix,
}

impl BasedLattice {
    pub fn new(ambient: IntMatrix, basis: IntMatrix) -> Result<Self> {
        if ambient.n() != basis.n() {
            return Err(Error::Dimension(format!(
                "ambient form is {}x{0}, basis {}x{1}",
                ambient.n(),
                basis.n()
            )));
        }
        Ok(BasedLattice { ambient, basis })
    }

    /// The standard basis `f_1, ..., f_n` of the ambient lattice.
    pub fn standard(ambient: IntMatrix) -> Self {
        let basis = IntMatrix::identity(ambient.n());
        BasedLattice { ambient, basis }
    }

    pub fn rank(&self) -> usize {
        self.basis.n()
    }

    /// Gram matrix of the current basis, `X A Xᵗ`.
    pub fn gram(&self) -> Result<IntMatrix> {
        self.basis.checked_mul(&self.ambient)?.checked_mul(&self.basis.transpose())
    }

    fn pair(&self, i: usize, j: usize) -> Result<i64> {
        self.ambient.bilinear(self.basis.row(i), self.basis.row(j))
    }

    fn combo(&self, keep: usize, coeff: i64, other: usize) -> Result<Vec<i64>> {
        self.basis
            .row(keep)
            .iter()
            .zip(self.basis.row(other))
            .map(|(&a, &b)| coeff.checked_mul(b).and_then(|t| a.checked_add(t)).ok_or(Error::Overflow))
            .collect()
    }

    fn check_neighbour_move(&self, m: usize) -> Result<usize> {
        if self.rank() < 2 {
            return Err(Error::Domain("alpha and beta moves need rank >= 2".into()));
        }
        self.check_index(m)
    }

    fn check_index(&self, m: usize) -> Result<usize> {
        if m == 0 || m > self.rank() {
            return Err(Error::Index { index: m, rank: self.rank() });
        }
        Ok(m - 1)
    }

    /// `α_m`: `x_m' = x_{m+1} + σ (x_{m+1}, x_m) x_m`, `x_{m+1}' = x_m`.
    pub fn alpha(&self, m: usize, sigma: i64) -> Result<Self> {
        let i = self.check_neighbour_move(m)?;
        let j = (i + 1) % self.rank();
        let c = self.pair(j, i)?;
        let new_i = self.combo(j, sigma * c, i)?;
        let old_i = self.basis.row(i).to_vec();
        let mut out = self.clone();
        out.basis.set_row(i, &new_i);
        out.basis.set_row(j, &old_i);
        Ok(out)
    }

    /// `β_m`: `x_{m−1}' = x_m`, `x_m' = x_{m−1} + σ (x_{m−1}, x_m) x_m`.
    pub fn beta(&self, m: usize, sigma: i64) -> Result<Self> {
        let i = self.check_neighbour_move(m)?;
        let j = (i + self.rank() - 1) % self.rank();
        let c = self.pair(j, i)?;
        let new_i = self.combo(j, sigma * c, i)?;
        let old_i = self.basis.row(i).to_vec();
        let mut out = self.clone();
        out.basis.set_row(j, &old_i);
        out.basis.set_row(i, &new_i);
        Ok(out)
    }

    /// `γ_m`: `x_m' = −x_m`.
    pub fn gamma(&self, m: usize) -> Result<Self> {
        let i = self.check_index(m)?;
        let neg: Vec<i64> = self.basis.row(i).iter().map(|x| -x).collect();
        let mut out = self.clone();
        out.basis.set_row(i, &neg);
        Ok(out)
    }

    pub fn apply(&self, mv: Move, sigma: i64) -> Result<Self> {
        match mv.kind {
            MoveKind::Alpha => self.alpha(mv.index, sigma),
            MoveKind::Beta => self.beta(mv.index, sigma),
            MoveKind::Gamma => self.gamma(mv.index),
        }
    }

    pub fn apply_word(&self, word: &MoveWord, conv: Conventions) -> Result<Self> {
        let step = |acc: Self, mv: &Move| acc.apply(*mv, conv.sigma);
        match conv.order {
            CompositionOrder::RightmostFirst => word.0.iter().rev().try_fold(self.clone(), step),
            CompositionOrder::LeftmostFirst => word.0.iter().try_fold(self.clone(), step),
        }
    }
}

/// Word in the simple reflections, 1-based; `[7, 5]` is `s7 s5`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeylWord(pub Vec<usize>);

impl WeylWord {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for WeylWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "e");
        }
        for i in &self.0 {
            write!(f, "s{i}")?;
        }
        Ok(())
    }
}

impl FromStr for WeylWord {
    type Err = Error;

    /// Parses `"s7s5s3"`, `"s7 ∘ s5"`, or a whitespace/comma separated index
    /// list. `"e"` or the empty string is the identity.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.is_empty() || t == "e" {
            return Ok(WeylWord::default());
        }
        t.split(|c: char| c == 's' || c == '∘' || c == ',' || c.is_whitespace())
            .filter(|p| !p.is_empty())
            .map(|p| match p.parse::<usize>() {
                Ok(0) | Err(_) => Err(Error::Parse(format!("bad reflection index {p:?} in {s:?}"))),
                Ok(i) => Ok(i),
            })
            .collect::<Result<Vec<_>>>()
            .map(WeylWord)
    }
}

/// Matrix of the simple reflection `s_i` (1-based) for a catalog system.
pub fn simple_reflection(id: RootSystemId, i: usize) -> Result<IntMatrix> {
    if i == 0 || i > id.rank() {
        return Err(Error::Index { index: i, rank: id.rank() });
    }
    Ok(reflection(&cartan_matrix(id), i - 1))
}

/// Matrix of a Weyl word for the Cartan matrix `a`: the ordered product of
/// the reflection matrices.
pub fn weyl_matrix(a: &IntMatrix, w: &WeylWord) -> Result<IntMatrix> {
    if let Some(&i) = w.0.iter().find(|&&i| i == 0 || i > a.n()) {
        return Err(Error::Index { index: i, rank: a.n() });
    }
    let idx: Vec<usize> = w.0.iter().map(|i| i - 1).collect();
    reflection_product(a, &idx)
}

pub fn weyl_apply(id: RootSystemId, w: &WeylWord) -> Result<IntMatrix> {
    weyl_matrix(&cartan_matrix(id), w)
}

/// Default word-length cap for [`find_conjugator`].
pub const CONJUGATOR_MAX_LEN: usize = 20;

/// Breadth-first search for `w` with `w⁻¹ C1 w = C2`, returning the
/// shortlex-least such word of length at most `max_len`, or `None`.
/// Group elements are deduplicated by exact matrix, so the search visits
/// each element once at its shortlex-least word.
pub fn find_conjugator(a: &IntMatrix, c1: &IntMatrix, c2: &IntMatrix, max_len: usize) -> Result<Option<WeylWord>> {
    let n = a.n();
    if c1.n() != n || c2.n() != n {
        return Err(Error::Dimension("conjugator search needs matching dimensions".into()));
    }
    let gens: Vec<IntMatrix> = (0..n).map(|i| reflection(a, i)).collect();
    let start = IntMatrix::identity(n);
    let mut seen = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([(start, Vec::<usize>::new())]);
    while let Some((m, word)) = queue.pop_front() {
        if c1.checked_mul(&m)? == m.checked_mul(c2)? {
            return Ok(Some(WeylWord(word)));
        }
        if word.len() == max_len {
            continue;
        }
        for (i, s) in gens.iter().enumerate() {
            let next = m.checked_mul(s)?;
            if seen.insert(next.clone()) {
                let mut w = word.clone();
                w.push(i + 1);
                queue.push_back((next, w));
            }
        }
    }
    Ok(None)
}

/// Outcome of one exact identity check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity: String,
    pub status: Status,
    pub max_abs_deviation: f64,
    pub convention_flags: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn passed(self) -> bool {
        self == Status::Pass
    }
}

impl IdentityReport {
    fn exact(identity: &str, lhs: &IntMatrix, rhs: &IntMatrix, conv: Conventions) -> Result<Self> {
        let dev = lhs.max_abs_diff(rhs)?;
        Ok(IdentityReport {
            identity: identity.to_string(),
            status: Status::from_bool(dev == 0),
            max_abs_deviation: dev as f64,
            convention_flags: conv.flags(),
        })
    }
}

/// Isomorphisms between two Gram matrices viewed as labelled graphs:
/// every `p` with `from[p[i], p[j]] == to[i, j]` for all `i, j`.
pub fn graph_isomorphisms(from: &IntMatrix, to: &IntMatrix) -> Vec<Vec<usize>> {
    let n = to.n();
    if from.n() != n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut p = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn extend(
        from: &IntMatrix,
        to: &IntMatrix,
        p: &mut Vec<usize>,
        used: &mut [bool],
        out: &mut Vec<Vec<usize>>,
    ) {
        let i = p.len();
        if i == to.n() {
            out.push(p.clone());
            return;
        }
        for c in 0..to.n() {
            if used[c] || from.get(c, c) != to.get(i, i) {
                continue;
            }
            if (0..i).all(|k| from.get(c, p[k]) == to.get(i, k) && from.get(p[k], c) == to.get(k, i)) {
                used[c] = true;
                p.push(c);
                extend(from, to, p, used, out);
                p.pop();
                used[c] = false;
            }
        }
    }
    extend(from, to, &mut p, &mut used, &mut out);
    out
}

/// A change of basis from a join lattice to a root lattice, with the data
/// needed to re-check it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Factorization {
    pub target: RootSystemId,
    pub factors: Vec<RootSystemId>,
    pub word: MoveWord,
    pub conventions: Conventions,
    /// Ambient form `A_*` of the join.
    pub ambient: IntMatrix,
    /// `C_* = C_1 ⊗ C_2 ⊗ ...` of the factors.
    pub coxeter_star: IntMatrix,
    /// Basis after the word, rows in Gabrielov order.
    pub basis: IntMatrix,
    /// 0-based: Bourbaki vertex `i` is Gabrielov vertex `relabel[i]`.
    pub relabel: Vec<usize>,
    /// Columns are the Bourbaki simple roots in the tensor basis.
    pub g: IntMatrix,
}

impl Factorization {
    /// `Gᵗ A_* G = A(target)`.
    pub fn gram_report(&self) -> Result<IdentityReport> {
        let lhs = self.g.transpose().checked_mul(&self.ambient)?.checked_mul(&self.g)?;
        IdentityReport::exact(
            &format!("G^t A_* G = A({})", self.target),
            &lhs,
            &cartan_matrix(self.target),
            self.conventions,
        )
    }

    /// `G⁻¹ C_* G = s1 s3 s4 s2 s5 ...`.
    pub fn coxeter_report(&self) -> Result<IdentityReport> {
        let lhs = conjugate(&self.g, &self.coxeter_star)?;
        let rhs = weyl_apply(self.target, &gabrielov_coxeter_word(self.target.rank()))?;
        IdentityReport::exact(
            &format!("G^-1 C_* G = C_G({})", self.target),
            &lhs,
            &rhs,
            self.conventions,
        )
    }

    pub fn printed_report(&self, printed: &IntMatrix) -> Result<IdentityReport> {
        IdentityReport::exact(&format!("G({}) = printed", self.target), &self.g, printed, self.conventions)
    }

    pub fn printed(&self) -> Option<IntMatrix> {
        match self.target.rank() {
            8 => Some(IntMatrix::from_rows(&G_E8_PRINTED).expect("square constant")),
            6 => Some(IntMatrix::from_rows(&G_E6_PRINTED).expect("square constant")),
            _ => None,
        }
    }

    pub fn reports(&self) -> Result<Vec<IdentityReport>> {
        let mut out = vec![self.gram_report()?, self.coxeter_report()?];
        if let Some(p) = self.printed() {
            out.push(self.printed_report(&p)?);
        }
        Ok(out)
    }
}

/// `s1 s3 s4 s2 s5 s6 ... s_r`: the Coxeter element in Gabrielov order,
/// written in Bourbaki labels.
pub fn gabrielov_coxeter_word(rank: usize) -> WeylWord {
    let mut w = vec![1, 3, 4, 2];
    w.extend(5..=rank);
    WeylWord(w)
}

/// `M⁻¹ C M` for unimodular `M`.
pub fn conjugate(m: &IntMatrix, c: &IntMatrix) -> Result<IntMatrix> {
    m.inverse_unimodular()?.checked_mul(c)?.checked_mul(m)
}

/// Ambient form and `C_*` of the join of `factors`, in the tensor basis.
pub fn join_of(factors: &[RootSystemId]) -> Result<(IntMatrix, IntMatrix)> {
    let lattices = factors
        .iter()
        .map(|&id| standard_polarization(&cartan_matrix(id)))
        .collect::<Result<Vec<_>>>()?;
    let joined = PolarizedLattice::join_all(&lattices)?;
    let mut cstar = IntMatrix::identity(1);
    for l in &lattices {
        let c = l.coxeter()?;
        let c = c.matrix().ok_or_else(|| Error::Domain("factor Coxeter element is not integral".into()))?;
        cstar = cstar.kron(c)?;
    }
    Ok((joined.cartan().clone(), cstar))
}

/// Runs `word` on the factorized basis of the join of `factors` and matches
/// the resulting Gram matrix to `A(target)`. Among the graph isomorphisms the
/// first one satisfying the Coxeter identity is chosen, which fixes the
/// diagram symmetry of E6.
pub fn factorize(target: RootSystemId, factors: &[RootSystemId], word: &MoveWord, conv: Conventions) -> Result<Factorization> {
    let (ambient, coxeter_star) = join_of(factors)?;
    if ambient.n() != target.rank() {
        return Err(Error::Factorization(format!(
            "join has rank {}, {target} has rank {}",
            ambient.n(),
            target.rank()
        )));
    }
    let based = BasedLattice::standard(ambient.clone()).apply_word(word, conv)?;
    let gram = based.gram()?;
    let a = cartan_matrix(target);
    let isos = graph_isomorphisms(&gram, &a);
    if isos.is_empty() {
        return Err(Error::Factorization(format!(
            "word {word} under {:?} gives a Gram matrix not isomorphic to A({target}):\n{gram}",
            conv.flags()
        )));
    }
    let columns = based.basis.transpose();
    let want = weyl_apply(target, &gabrielov_coxeter_word(target.rank()))?;
    let mut fallback = None;
    for relabel in isos {
        let g = columns.select_columns(&relabel)?;
        let f = Factorization {
            target,
            factors: factors.to_vec(),
            word: word.clone(),
            conventions: conv,
            ambient: ambient.clone(),
            coxeter_star: coxeter_star.clone(),
            basis: based.basis.clone(),
            relabel,
            g,
        };
        if conjugate(&f.g, &coxeter_star)? == want {
            return Ok(f);
        }
        fallback.get_or_insert(f);
    }
    Ok(fallback.expect("at least one isomorphism"))
}

pub fn e8_factorization() -> Result<Factorization> {
    e8_factorization_with(Conventions::default())
}

pub fn e8_factorization_with(conv: Conventions) -> Result<Factorization> {
    let word: MoveWord = E8_WORD.parse()?;
    factorize(RootSystemId::e(8), &[RootSystemId::a(4), RootSystemId::a(2), RootSystemId::a(1)], &word, conv)
}

pub fn e6_factorization() -> Result<Factorization> {
    e6_factorization_with(Conventions::default())
}

pub fn e6_factorization_with(conv: Conventions) -> Result<Factorization> {
    let word: MoveWord = E6_WORD.parse()?;
    factorize(RootSystemId::e(6), &[RootSystemId::a(3), RootSystemId::a(2), RootSystemId::a(1)], &word, conv)
}

/// Roots of `A_n` in simple-root coordinates, from the `e_i − e_j` model.
/// Positive roots come first, ordered by `(i, j)`.
pub fn a_n_roots(n: usize) -> Vec<Vec<i64>> {
    let mut pos = Vec::new();
    for i in 0..n {
        for j in i + 1..=n {
            let mut v = vec![0; n];
            v[i..j].iter_mut().for_each(|x| *x = 1);
            pos.push(v);
        }
    }
    let neg: Vec<Vec<i64>> = pos.iter().map(|v| v.iter().map(|x| -x).collect()).collect();
    pos.extend(neg);
    pos
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootImage {
    pub domain_size: usize,
    pub image_size: usize,
    pub all_norm_2: bool,
}

/// Maps every `x ⊗ y ⊗ z` with `x, y, z` roots of the factors into the
/// target root lattice through `G⁻¹` and counts distinct images.
pub fn root_image(f: &Factorization) -> Result<RootImage> {
    let ginv = f.g.inverse_unimodular()?;
    let a = cartan_matrix(f.target);
    let mut products: Vec<Vec<i64>> = vec![vec![1]];
    for id in &f.factors {
        let roots = a_n_roots(id.rank());
        products = products
            .iter()
            .flat_map(|p| roots.iter().map(move |r| kron_vec(p, r)))
            .collect();
    }
    let mut image = HashSet::new();
    let mut all_norm_2 = true;
    for t in &products {
        let v = ginv.mul_vec(t)?;
        all_norm_2 &= a.bilinear(&v, &v)? == 2;
        image.insert(v);
    }
    Ok(RootImage { domain_size: products.len(), image_size: image.len(), all_norm_2 })
}

pub fn root_image_count() -> Result<RootImage> {
    root_image(&e8_factorization()?)
}

/// `γ2 γ1 = α1⁶` on the standard basis of `A4 * A2 * A1`.
pub fn gamma_alpha_report(conv: Conventions) -> Result<IdentityReport> {
    let (ambient, _) = join_of(&[RootSystemId::a(4), RootSystemId::a(2), RootSystemId::a(1)])?;
    let b = BasedLattice::standard(ambient);
    let lhs = b.apply_word(&"g2g1".parse()?, conv)?;
    let rhs = b.apply_word(&MoveWord::repeat(Move::alpha(1), 6), conv)?;
    IdentityReport::exact("gamma2 gamma1 = alpha1^6", &lhs.basis, &rhs.basis, conv)
}

/// Checks `w⁻¹ C_BW w = C_G` for the given word.
pub fn conjugator_report(id: RootSystemId, w: &WeylWord, c_bw: &IntMatrix) -> Result<IdentityReport> {
    let a = cartan_matrix(id);
    let m = weyl_matrix(&a, w)?;
    let lhs = conjugate(&m, c_bw)?;
    let rhs = weyl_apply(id, &gabrielov_coxeter_word(id.rank()))?;
    IdentityReport::exact(&format!("w^-1 C_BW w = C_G({id}) for w = {w}"), &lhs, &rhs, Conventions::default())
}

/// Verification of the printed E6 conjugator, with a searched replacement
/// when it fails.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConjugatorCheck {
    pub printed: WeylWord,
    pub printed_report: IdentityReport,
    pub repaired: Option<WeylWord>,
    pub repaired_report: Option<IdentityReport>,
}

pub fn e6_conjugator_report(max_len: usize) -> Result<ConjugatorCheck> {
    let id = RootSystemId::e(6);
    let a = cartan_matrix(id);
    let c_bw = crate::lattice::bipartite_coxeter(&a, &crate::rootsys::bipartition(id))?;
    let printed = WeylWord(V_E6_PRINTED.to_vec());
    let printed_report = conjugator_report(id, &printed, &c_bw)?;
    let (repaired, repaired_report) = if printed_report.status.passed() {
        (None, None)
    } else {
        let c_g = weyl_apply(id, &gabrielov_coxeter_word(6))?;
        match find_conjugator(&a, &c_bw, &c_g, max_len)? {
            Some(w) => {
                let r = conjugator_report(id, &w, &c_bw)?;
                (Some(w), Some(r))
            }
            None => (None, None),
        }
    };
    Ok(ConjugatorCheck { printed, printed_report, repaired, repaired_report })
}
