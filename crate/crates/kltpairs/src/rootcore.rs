//! Exact root-datum arithmetic: Cartan matrices, positive roots and coroots,
//! Weyl words, weight-lattice pairings, and parabolic data.
//!
//! Convention, fixed once: `cartan[i][j] = <alpha_j, alpha_i^vee>`. Weights
//! are stored in the simple-root basis; coroots in the simple-coroot basis.

use crate::linalg;
use crate::{Error, Rat, Result};
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

const RANK_CAP: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimpleType {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl SimpleType {
    fn letter(self) -> char {
        match self {
            SimpleType::A => 'A',
            SimpleType::B => 'B',
            SimpleType::C => 'C',
            SimpleType::D => 'D',
            SimpleType::E => 'E',
            SimpleType::F => 'F',
            SimpleType::G => 'G',
        }
    }

    fn valid_rank(self, n: usize) -> bool {
        if n == 0 || n > RANK_CAP {
            return false;
        }
        match self {
            SimpleType::A => true,
            SimpleType::B => n >= 2,
            SimpleType::C => n >= 2,
            SimpleType::D => n >= 3,
            SimpleType::E => (6..=8).contains(&n),
            SimpleType::F => n == 4,
            SimpleType::G => n == 2,
        }
    }

    /// Closed-form count of positive roots.
    pub fn positive_root_count(self, n: usize) -> usize {
        match self {
            SimpleType::A => n * (n + 1) / 2,
            SimpleType::B | SimpleType::C => n * n,
            SimpleType::D => n * (n - 1),
            SimpleType::E => match n {
                6 => 36,
                7 => 63,
                _ => 120,
            },
            SimpleType::F => 24,
            SimpleType::G => 6,
        }
    }
}

/// What to build a root system from: a list of named simple components, or an
/// explicit integer matrix claimed to be a Cartan matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RootSystemSpec {
    Named(Vec<(SimpleType, usize)>),
    Explicit(Vec<Vec<i64>>),
}

impl FromStr for RootSystemSpec {
    type Err = Error;

    /// Grammar: components joined by `x`, each `<letter><rank>`, e.g. `A3`,
    /// `B2xA1`, `G2`.
    fn from_str(s: &str) -> Result<Self> {
        let mut components = Vec::new();
        for part in s.trim().split(['x', 'X']) {
            let part = part.trim();
            let mut chars = part.chars();
            let letter = chars
                .next()
                .ok_or_else(|| Error::Parse(format!("empty component in {s:?}")))?;
            let ty = match letter.to_ascii_uppercase() {
                'A' => SimpleType::A,
                'B' => SimpleType::B,
                'C' => SimpleType::C,
                'D' => SimpleType::D,
                'E' => SimpleType::E,
                'F' => SimpleType::F,
                'G' => SimpleType::G,
                c => return Err(Error::Parse(format!("unknown type letter {c:?}"))),
            };
            let rank: usize = chars
                .as_str()
                .parse()
                .map_err(|_| Error::Parse(format!("bad rank in component {part:?}")))?;
            if !ty.valid_rank(rank) {
                return Err(Error::UnsupportedRank(format!(
                    "{}{rank} (rank cap {RANK_CAP} per component)",
                    ty.letter()
                )));
            }
            components.push((ty, rank));
        }
        Ok(RootSystemSpec::Named(components))
    }
}

impl RootSystemSpec {
    pub fn cartan_matrix(&self) -> Result<Vec<Vec<i64>>> {
        match self {
            RootSystemSpec::Named(components) => {
                if components.is_empty() {
                    return Err(Error::Parse("empty root-system spec".into()));
                }
                let blocks: Vec<Vec<Vec<i64>>> = components
                    .iter()
                    .map(|&(ty, n)| {
                        if ty.valid_rank(n) {
                            Ok(cartan_block(ty, n))
                        } else {
                            Err(Error::UnsupportedRank(format!("{}{n}", ty.letter())))
                        }
                    })
                    .collect::<Result<_>>()?;
                let total: usize = blocks.iter().map(Vec::len).sum();
                let mut m = vec![vec![0i64; total]; total];
                let mut off = 0;
                for b in &blocks {
                    for (i, row) in b.iter().enumerate() {
                        for (j, &v) in row.iter().enumerate() {
                            m[off + i][off + j] = v;
                        }
                    }
                    off += b.len();
                }
                Ok(m)
            }
            RootSystemSpec::Explicit(m) => {
                validate_cartan(m)?;
                Ok(m.clone())
            }
        }
    }
}

/// Cartan block with `cartan[i][j] = <alpha_j, alpha_i^vee>`, Bourbaki node
/// numbering.
fn cartan_block(ty: SimpleType, n: usize) -> Vec<Vec<i64>> {
    let mut m = vec![vec![0i64; n]; n];
    for i in 0..n {
        m[i][i] = 2;
    }
    let mut link = |i: usize, j: usize| {
        m[i][j] = -1;
        m[j][i] = -1;
    };
    match ty {
        SimpleType::A => {
            for i in 1..n {
                link(i - 1, i);
            }
        }
        SimpleType::B => {
            for i in 1..n {
                link(i - 1, i);
            }
            // alpha_n short: <alpha_{n-1}, alpha_n^vee> = -2.
            m[n - 1][n - 2] = -2;
        }
        SimpleType::C => {
            for i in 1..n {
                link(i - 1, i);
            }
            // alpha_n long: <alpha_n, alpha_{n-1}^vee> = -2.
            m[n - 2][n - 1] = -2;
        }
        SimpleType::D => {
            for i in 1..n - 1 {
                link(i - 1, i);
            }
            link(n - 3, n - 1);
        }
        SimpleType::E => {
            // Bourbaki: chain 1-3-4-5-...-n with node 2 hanging off node 4.
            link(0, 2);
            for i in 3..n {
                link(i - 1, i);
            }
            link(1, 3);
        }
        SimpleType::F => {
            link(0, 1);
            link(1, 2);
            link(2, 3);
            // alpha_3, alpha_4 short: <alpha_2, alpha_3^vee> = -2.
            m[2][1] = -2;
        }
        SimpleType::G => {
            link(0, 1);
            // alpha_1 short: <alpha_2, alpha_1^vee> = -3.
            m[0][1] = -3;
        }
    }
    m
}

/// Finite-type check for an explicit matrix: shape constraints, then
/// symmetrizability and positive-definiteness of the symmetrization.
fn validate_cartan(m: &[Vec<i64>]) -> Result<()> {
    let n = m.len();
    if n == 0 {
        return Err(Error::InvalidCartan("empty matrix".into()));
    }
    for (i, row) in m.iter().enumerate() {
        if row.len() != n {
            return Err(Error::InvalidCartan("matrix is not square".into()));
        }
        if row[i] != 2 {
            return Err(Error::InvalidCartan(format!("diagonal entry {} != 2", row[i])));
        }
        for (j, &v) in row.iter().enumerate() {
            if j != i {
                if v > 0 {
                    return Err(Error::InvalidCartan(format!(
                        "positive off-diagonal entry at ({i},{j})"
                    )));
                }
                if (v == 0) != (m[j][i] == 0) {
                    return Err(Error::InvalidCartan(format!(
                        "zero pattern not symmetric at ({i},{j})"
                    )));
                }
            }
        }
    }
    // Connected components, each capped at RANK_CAP.
    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut stack = vec![start];
        let mut size = 0;
        seen[start] = true;
        while let Some(i) = stack.pop() {
            size += 1;
            for j in 0..n {
                if j != i && m[i][j] != 0 && !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        if size > RANK_CAP {
            return Err(Error::UnsupportedRank(format!(
                "component of size {size} exceeds the cap of {RANK_CAP}"
            )));
        }
    }
    // Symmetrizer d_i > 0 with d_i m[i][j] = d_j m[j][i], by graph traversal.
    let mut d = vec![None::<Rat>; n];
    for start in 0..n {
        if d[start].is_some() {
            continue;
        }
        d[start] = Some(Rat::one());
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            let di = d[i].expect("set before push");
            for j in 0..n {
                if j == i || m[i][j] == 0 {
                    continue;
                }
                let dj = di * Rat::new(m[i][j], m[j][i]);
                match d[j] {
                    None => {
                        d[j] = Some(dj);
                        stack.push(j);
                    }
                    Some(existing) => {
                        if existing != dj {
                            return Err(Error::InvalidCartan("not symmetrizable".into()));
                        }
                    }
                }
            }
        }
    }
    // Positive definiteness of D*M via leading principal minors.
    let sym: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| d[i].expect("all set") * Rat::from_integer(m[i][j]))
                .collect()
        })
        .collect();
    for k in 1..=n {
        let minor: Vec<Vec<Rat>> = sym[..k].iter().map(|row| row[..k].to_vec()).collect();
        if !linalg::det(&minor).is_positive() {
            return Err(Error::InvalidCartan(
                "symmetrization is not positive definite (not finite type)".into(),
            ));
        }
    }
    Ok(())
}

/// A weight, stored in the simple-root basis with exact rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Weight {
    coords: Vec<Rat>,
}

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight {
            coords: vec![Rat::zero(); rank],
        }
    }

    pub fn from_root_basis(coords: Vec<Rat>) -> Self {
        Weight { coords }
    }

    pub fn root_coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| *a + *b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        Weight {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| *a - *b)
                .collect(),
        }
    }

    pub fn scale(&self, c: Rat) -> Weight {
        Weight {
            coords: self.coords.iter().map(|a| *a * c).collect(),
        }
    }
}

/// A word in the simple reflections, as 0-based simple-root indices. Applied
/// to weights letter by letter, right to left.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WeylWord {
    pub letters: Vec<usize>,
}

impl WeylWord {
    pub fn new(letters: Vec<usize>) -> Self {
        WeylWord { letters }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> WeylWord {
        WeylWord {
            letters: self.letters.iter().rev().copied().collect(),
        }
    }
}

impl fmt::Display for WeylWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        let parts: Vec<String> = self.letters.iter().map(|i| format!("s{}", i + 1)).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// The combinatorial stand-in for (G, B, T): Cartan matrix, positive roots
/// and coroots (index-aligned), and fundamental weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootDatum {
    rank: usize,
    cartan: Vec<Vec<i64>>,
    positive_roots: Vec<Vec<i64>>,
    positive_coroots: Vec<Vec<i64>>,
    fundamental_weights: Vec<Weight>,
    root_index: BTreeMap<Vec<i64>, usize>,
}

/// Builds the root datum: positive roots by reflection closure from the
/// simple roots, coroots carried along through the dual reflections.
pub fn build_root_system(spec: &RootSystemSpec) -> Result<RootDatum> {
    let cartan = spec.cartan_matrix()?;
    let n = cartan.len();

    let mut pairs: Vec<(Vec<i64>, Vec<i64>)> = (0..n)
        .map(|i| {
            let mut e = vec![0i64; n];
            e[i] = 1;
            (e.clone(), e)
        })
        .collect();
    let mut seen: BTreeSet<Vec<i64>> = pairs.iter().map(|(r, _)| r.clone()).collect();
    let mut frontier = pairs.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for (root, coroot) in &frontier {
            for k in 0..n {
                let r = reflect_root_raw(&cartan, k, root);
                if r.iter().all(|&c| c >= 0) && !seen.contains(&r) {
                    let c = reflect_coroot_raw(&cartan, k, coroot);
                    seen.insert(r.clone());
                    next.push((r.clone(), c.clone()));
                    pairs.push((r, c));
                }
            }
        }
        if pairs.len() > 1000 {
            return Err(Error::InvalidCartan(
                "reflection closure did not stabilize".into(),
            ));
        }
        frontier = next;
    }
    pairs.sort_by_key(|(r, _)| (r.iter().sum::<i64>(), r.clone()));
    let root_index = pairs
        .iter()
        .enumerate()
        .map(|(i, (r, _))| (r.clone(), i))
        .collect();

    // Fundamental weights: rows of (C^T)^{-1}.
    let ct: Vec<Vec<Rat>> = (0..n)
        .map(|i| (0..n).map(|j| Rat::from_integer(cartan[j][i])).collect())
        .collect();
    let inv = linalg::invert(&ct)
        .ok_or_else(|| Error::InvalidCartan("Cartan matrix is singular".into()))?;
    let fundamental_weights = inv.into_iter().map(Weight::from_root_basis).collect();

    let (positive_roots, positive_coroots) = pairs.into_iter().unzip();
    Ok(RootDatum {
        rank: n,
        cartan,
        positive_roots,
        positive_coroots,
        fundamental_weights,
        root_index,
    })
}

fn pairing_with_simple_raw(cartan: &[Vec<i64>], i: usize, coords: &[i64]) -> i64 {
    coords.iter().zip(&cartan[i]).map(|(c, a)| c * a).sum()
}

fn reflect_root_raw(cartan: &[Vec<i64>], k: usize, root: &[i64]) -> Vec<i64> {
    let p = pairing_with_simple_raw(cartan, k, root);
    let mut out = root.to_vec();
    out[k] -= p;
    out
}

fn reflect_coroot_raw(cartan: &[Vec<i64>], k: usize, coroot: &[i64]) -> Vec<i64> {
    // <alpha_k, gamma^vee> = sum_j gamma_j cartan[j][k].
    let p: i64 = coroot
        .iter()
        .enumerate()
        .map(|(j, c)| c * cartan[j][k])
        .sum();
    let mut out = coroot.to_vec();
    out[k] -= p;
    out
}

impl RootDatum {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    pub fn positive_coroots(&self) -> &[Vec<i64>] {
        &self.positive_coroots
    }

    pub fn num_positive_roots(&self) -> usize {
        self.positive_roots.len()
    }

    pub fn root_index(&self, root: &[i64]) -> Option<usize> {
        self.root_index.get(root).copied()
    }

    pub fn simple_root(&self, i: usize) -> Weight {
        let mut coords = vec![Rat::zero(); self.rank];
        coords[i] = Rat::one();
        Weight { coords }
    }

    pub fn fundamental_weight(&self, i: usize) -> &Weight {
        &self.fundamental_weights[i]
    }

    /// rho = sum of fundamental weights.
    pub fn rho(&self) -> Weight {
        self.fundamental_weights
            .iter()
            .fold(Weight::zero(self.rank), |acc, w| acc.add(w))
    }

    pub fn weight_from_fundamental(&self, coeffs: &[Rat]) -> Result<Weight> {
        if coeffs.len() != self.rank {
            return Err(Error::DimensionMismatch);
        }
        Ok(coeffs
            .iter()
            .zip(&self.fundamental_weights)
            .fold(Weight::zero(self.rank), |acc, (c, w)| {
                acc.add(&w.scale(*c))
            }))
    }

    /// Coordinates in the fundamental-weight basis: u_i = <w, alpha_i^vee>.
    pub fn to_fundamental(&self, w: &Weight) -> Vec<Rat> {
        (0..self.rank)
            .map(|i| {
                w.coords
                    .iter()
                    .zip(&self.cartan[i])
                    .map(|(c, a)| *c * Rat::from_integer(*a))
                    .sum()
            })
            .collect()
    }

    pub fn weight_from_root(&self, root: &[i64]) -> Weight {
        Weight {
            coords: root.iter().map(|&c| Rat::from_integer(c)).collect(),
        }
    }

    /// Exact <w, beta^vee>, bilinear in both arguments.
    pub fn pairing(&self, w: &Weight, coroot: &[i64]) -> Result<Rat> {
        if w.coords.len() != self.rank || coroot.len() != self.rank {
            return Err(Error::DimensionMismatch);
        }
        let mut acc = Rat::zero();
        for (i, &b) in coroot.iter().enumerate() {
            if b == 0 {
                continue;
            }
            for (j, c) in w.coords.iter().enumerate() {
                acc += *c * Rat::from_integer(b * self.cartan[i][j]);
            }
        }
        Ok(acc)
    }

    pub fn reflect_weight(&self, k: usize, w: &Weight) -> Weight {
        let p: Rat = w
            .coords
            .iter()
            .zip(&self.cartan[k])
            .map(|(c, a)| *c * Rat::from_integer(*a))
            .sum();
        let mut coords = w.coords.clone();
        coords[k] -= p;
        Weight { coords }
    }

    /// Applies the word letter by letter, right to left.
    pub fn weyl_apply(&self, word: &WeylWord, w: &Weight) -> Weight {
        let mut out = w.clone();
        for &k in word.letters.iter().rev() {
            out = self.reflect_weight(k, &out);
        }
        out
    }

    pub fn weyl_apply_root(&self, word: &WeylWord, root: &[i64]) -> Vec<i64> {
        let mut out = root.to_vec();
        for &k in word.letters.iter().rev() {
            out = reflect_root_raw(&self.cartan, k, &out);
        }
        out
    }

    pub fn weyl_apply_coroot(&self, word: &WeylWord, coroot: &[i64]) -> Vec<i64> {
        let mut out = coroot.to_vec();
        for &k in word.letters.iter().rev() {
            out = reflect_coroot_raw(&self.cartan, k, &out);
        }
        out
    }

    /// Indices of `{ beta in R+ : word^{-1}(beta) < 0 }`.
    pub fn inversion_set(&self, word: &WeylWord) -> BTreeSet<usize> {
        let winv = word.inverse();
        self.positive_roots
            .iter()
            .enumerate()
            .filter(|(_, root)| {
                let img = self.weyl_apply_root(&winv, root);
                img.iter().all(|&c| c <= 0)
            })
            .map(|(i, _)| i)
            .collect()
    }

    pub fn is_reduced(&self, word: &WeylWord) -> bool {
        self.inversion_set(word).len() == word.len()
    }

    /// Root height: sum of simple-root coefficients.
    pub fn height(root: &[i64]) -> i64 {
        root.iter().sum()
    }

    /// The action matrix of the word on simple-root coordinates.
    fn word_matrix(&self, word: &WeylWord) -> Vec<Vec<i64>> {
        // Column j = word(alpha_j).
        let n = self.rank;
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let mut e = vec![0i64; n];
            e[j] = 1;
            cols.push(self.weyl_apply_root(word, &e));
        }
        (0..n).map(|i| (0..n).map(|j| cols[j][i]).collect()).collect()
    }

    /// Greedy reduced word for the longest element of the standard parabolic
    /// subgroup generated by `gens`: append the smallest s_i that still goes
    /// up, until every generator goes down.
    fn longest_word_of(&self, gens: &BTreeSet<usize>) -> WeylWord {
        let mut word = WeylWord::default();
        loop {
            let mut extended = false;
            for &i in gens {
                let mut e = vec![0i64; self.rank];
                e[i] = 1;
                let img = self.weyl_apply_root(&word, &e);
                if img.iter().all(|&c| c >= 0) {
                    word.letters.push(i);
                    extended = true;
                    break;
                }
            }
            if !extended {
                return word;
            }
        }
    }

    /// A reduced word for the element given as an action matrix, by peeling
    /// left descents (smallest index first).
    fn reduced_word_of_matrix(&self, m: &[Vec<i64>]) -> WeylWord {
        let n = self.rank;
        let to_rat = |m: &[Vec<i64>]| -> Vec<Vec<Rat>> {
            m.iter()
                .map(|r| r.iter().map(|&x| Rat::from_integer(x)).collect())
                .collect()
        };
        let mut cur = m.to_vec();
        let mut inv: Vec<Vec<i64>> = linalg::invert(&to_rat(m))
            .expect("Weyl action matrices are invertible")
            .iter()
            .map(|row| row.iter().map(|r| *r.numer()).collect())
            .collect();
        let identity: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        let mut letters = Vec::new();
        while cur != identity {
            // Left descent: column i of the inverse is a negative root.
            let i = (0..n)
                .find(|&i| (0..n).all(|r| inv[r][i] <= 0))
                .expect("non-identity element has a left descent");
            letters.push(i);
            // cur <- s_i * cur; inv <- inv * s_i.
            for col in 0..n {
                let column: Vec<i64> = (0..n).map(|r| cur[r][col]).collect();
                let refl = reflect_root_raw(&self.cartan, i, &column);
                for r in 0..n {
                    cur[r][col] = refl[r];
                }
            }
            let si = {
                let mut s = identity.clone();
                for j in 0..n {
                    let mut e = vec![0i64; n];
                    e[j] = 1;
                    let r = reflect_root_raw(&self.cartan, i, &e);
                    for row in 0..n {
                        s[row][j] = r[row];
                    }
                }
                s
            };
            let mut next = vec![vec![0i64; n]; n];
            for r in 0..n {
                for c in 0..n {
                    next[r][c] = (0..n).map(|k| inv[r][k] * si[k][c]).sum();
                }
            }
            inv = next;
        }
        WeylWord::new(letters)
    }

    /// Derived data for a parabolic subgroup with simple roots `I`.
    pub fn parabolic(&self, i_set: &BTreeSet<usize>) -> Result<ParabolicData> {
        for &i in i_set {
            if i >= self.rank {
                return Err(Error::DimensionMismatch);
            }
        }
        let levi_positive_roots: Vec<usize> = self
            .positive_roots
            .iter()
            .enumerate()
            .filter(|(_, root)| {
                root.iter()
                    .enumerate()
                    .all(|(j, &c)| c == 0 || i_set.contains(&j))
            })
            .map(|(i, _)| i)
            .collect();
        let levi_root_sum = levi_positive_roots
            .iter()
            .fold(Weight::zero(self.rank), |acc, &k| {
                acc.add(&self.weight_from_root(&self.positive_roots[k]))
            });
        let two_rho_superp = self.rho().scale(Rat::from_integer(2)).sub(&levi_root_sum);
        let w0_levi_word = self.longest_word_of(i_set);

        // w0P is pinned operationally: the reduced word of w_{0,P} * w_0,
        // whose inversion set is exactly R+ \ R+_I.
        let all: BTreeSet<usize> = (0..self.rank).collect();
        let w0_word = self.longest_word_of(&all);
        let m_levi = self.word_matrix(&w0_levi_word);
        let m_w0 = self.word_matrix(&w0_word);
        let n = self.rank;
        let mut m = vec![vec![0i64; n]; n];
        for r in 0..n {
            for c in 0..n {
                m[r][c] = (0..n).map(|k| m_levi[r][k] * m_w0[k][c]).sum();
            }
        }
        let w0p_word = self.reduced_word_of_matrix(&m);

        let complement: BTreeSet<usize> = (0..self.num_positive_roots())
            .filter(|k| !levi_positive_roots.contains(k))
            .collect();
        assert_eq!(
            self.inversion_set(&w0p_word),
            complement,
            "w0P inversion set must be R+ minus R+_I"
        );

        Ok(ParabolicData {
            i_set: i_set.clone(),
            levi_positive_roots,
            levi_root_sum,
            two_rho_superp,
            w0p_word,
            w0_levi_word,
        })
    }
}

/// Stand-in for a parabolic subgroup P containing B: the subset I of simple
/// roots plus everything derived from it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParabolicData {
    pub i_set: BTreeSet<usize>,
    /// Indices into `positive_roots` of R+_I.
    pub levi_positive_roots: Vec<usize>,
    /// rho_P = sum over R+_I of gamma (the full sum, not the half sum).
    pub levi_root_sum: Weight,
    /// 2 rho^P = 2 rho - rho_P.
    pub two_rho_superp: Weight,
    /// Reduced word with inversion set R+ \ R+_I; its length is dim G/P.
    pub w0p_word: WeylWord,
    /// Reduced word for w_{0,P}, the longest element of W_P.
    pub w0_levi_word: WeylWord,
}

impl ParabolicData {
    pub fn complement_indices(&self, datum: &RootDatum) -> Vec<usize> {
        (0..datum.num_positive_roots())
            .filter(|k| !self.levi_positive_roots.contains(k))
            .collect()
    }

    /// Simple roots outside I, in index order.
    pub fn boundary_simples(&self, datum: &RootDatum) -> Vec<usize> {
        (0..datum.rank()).filter(|i| !self.i_set.contains(i)).collect()
    }
}

pub fn datum_from_str(s: &str) -> Result<RootDatum> {
    build_root_system(&s.parse::<RootSystemSpec>()?)
}

/// Parses a simple-root name `a<k>` (1-based) into a 0-based index.
pub fn parse_simple(s: &str, rank: usize) -> Result<usize> {
    let t = s.trim();
    let k: usize = t
        .strip_prefix(['a', 'A'])
        .and_then(|n| n.parse().ok())
        .ok_or_else(|| Error::Parse(format!("expected a simple root like \"a1\", got {s:?}")))?;
    if k == 0 || k > rank {
        return Err(Error::Parse(format!(
            "simple root {t:?} out of range for rank {rank}"
        )));
    }
    Ok(k - 1)
}
