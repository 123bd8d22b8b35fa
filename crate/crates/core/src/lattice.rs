//! Finite bounded lattices of security levels, plus the blame copy used by
//! `weaken`.
//!
//! Levels are dense indices into a [`Lattice`]. Protection annotations in
//! types and terms carry an [`Index`], an element of the product lattice
//! `levels x blames`. A pure level `l` embeds as `(l, bottom_B)` and a blame
//! `!l` as `(bottom_L, beta(l))`, so every index comparison is a single
//! product-lattice comparison.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("`{0}` and `{1}` have no least upper bound")]
    NoJoin(String, String),
    #[error("`{0}` and `{1}` have no greatest lower bound")]
    NoMeet(String, String),
    #[error("order contains a cycle through `{0}` and `{1}`")]
    CycleInOrder(String, String),
    #[error("element `{0}` declared twice")]
    DuplicateElement(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("lattice has no elements")]
    Empty,
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
}

impl LatticeError {
    /// True for the two "missing bound" failures.
    pub fn is_not_a_lattice(&self) -> bool {
        matches!(self, LatticeError::NoJoin(..) | LatticeError::NoMeet(..))
    }
}

/// A level of the configured lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Level(pub u16);

impl Level {
    fn ix(self) -> usize {
        self.0 as usize
    }
}

/// How the blame copy is ordered relative to the levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum BlameMode {
    /// `beta` preserves joins and meets.
    #[default]
    Preserve,
    /// `beta` exchanges joins and meets.
    Flip,
}

impl std::str::FromStr for BlameMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "preserve" => Ok(BlameMode::Preserve),
            "flip" => Ok(BlameMode::Flip),
            other => Err(format!("unknown blame order `{other}` (expected preserve|flip)")),
        }
    }
}

/// Element of the product lattice `levels x blames`.
///
/// `blame` holds the level `b` whose blame `beta(b)` forms the blame
/// component; `None` stands for the bottom of the blame lattice. Indices are
/// only built through [`Lattice`] so that the bottom blame is always `None`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Index {
    pub level: Level,
    pub blame: Option<Level>,
}

#[derive(Debug, Clone)]
pub struct Lattice {
    names: Vec<String>,
    by_name: HashMap<String, Level>,
    leq: Vec<Vec<bool>>,
    join: Vec<Vec<Level>>,
    meet: Vec<Vec<Level>>,
    bottom: Level,
    top: Level,
    mode: BlameMode,
}

impl Lattice {
    /// Builds a lattice from element names and declared order pairs `a <= b`.
    ///
    /// The order is closed reflexively and transitively before the join and
    /// meet tables are computed.
    pub fn from_order<S: AsRef<str>>(
        elements: &[S],
        pairs: &[(S, S)],
    ) -> Result<Lattice, LatticeError> {
        if elements.is_empty() {
            return Err(LatticeError::Empty);
        }
        let mut names = Vec::with_capacity(elements.len());
        let mut by_name = HashMap::new();
        for (i, e) in elements.iter().enumerate() {
            let e = e.as_ref().to_string();
            if by_name.insert(e.clone(), Level(i as u16)).is_some() {
                return Err(LatticeError::DuplicateElement(e));
            }
            names.push(e);
        }
        let n = names.len();
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for (a, b) in pairs {
            let a = *by_name
                .get(a.as_ref())
                .ok_or_else(|| LatticeError::UnknownElement(a.as_ref().to_string()))?;
            let b = *by_name
                .get(b.as_ref())
                .ok_or_else(|| LatticeError::UnknownElement(b.as_ref().to_string()))?;
            leq[a.ix()][b.ix()] = true;
        }
        // Warshall
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if leq[i][j] && leq[j][i] {
                    return Err(LatticeError::CycleInOrder(names[i].clone(), names[j].clone()));
                }
            }
        }

        let mut join = vec![vec![Level(0); n]; n];
        let mut meet = vec![vec![Level(0); n]; n];
        for i in 0..n {
            for j in 0..n {
                let ub: Vec<usize> = (0..n).filter(|&k| leq[i][k] && leq[j][k]).collect();
                let lub = ub.iter().copied().find(|&k| ub.iter().all(|&m| leq[k][m]));
                join[i][j] = match lub {
                    Some(k) => Level(k as u16),
                    None => return Err(LatticeError::NoJoin(names[i].clone(), names[j].clone())),
                };
                let lb: Vec<usize> = (0..n).filter(|&k| leq[k][i] && leq[k][j]).collect();
                let glb = lb.iter().copied().find(|&k| lb.iter().all(|&m| leq[m][k]));
                meet[i][j] = match glb {
                    Some(k) => Level(k as u16),
                    None => return Err(LatticeError::NoMeet(names[i].clone(), names[j].clone())),
                };
            }
        }
        let bottom = (0..n).fold(0, |acc, k| meet[acc][k].ix());
        let top = (0..n).fold(0, |acc, k| join[acc][k].ix());
        Ok(Lattice {
            names,
            by_name,
            leq,
            join,
            meet,
            bottom: Level(bottom as u16),
            top: Level(top as u16),
            mode: BlameMode::Preserve,
        })
    }

    /// The two-point chain `L <= H`.
    pub fn two() -> Lattice {
        Lattice::from_order(&["L", "H"], &[("L", "H")]).expect("two-point chain")
    }

    /// The diamond `bot <= L, R <= top`.
    pub fn diamond() -> Lattice {
        Lattice::from_order(
            &["bot", "L", "R", "top"],
            &[("bot", "L"), ("bot", "R"), ("L", "top"), ("R", "top")],
        )
        .expect("diamond")
    }

    pub fn builtin(name: &str) -> Option<Lattice> {
        match name {
            "two" => Some(Lattice::two()),
            "diamond" => Some(Lattice::diamond()),
            _ => None,
        }
    }

    /// Parses the line-oriented lattice format:
    ///
    /// ```text
    /// # comment
    /// elements a b c
    /// leq a b
    /// ```
    pub fn parse(source: &str) -> Result<Lattice, LatticeError> {
        let mut elements: Vec<String> = Vec::new();
        let mut pairs: Vec<(String, String)> = Vec::new();
        for (no, raw) in source.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut words = line.split_whitespace();
            match words.next() {
                Some("elements") => elements.extend(words.map(str::to_string)),
                Some("leq") => {
                    let ws: Vec<&str> = words.collect();
                    if ws.len() != 2 {
                        return Err(LatticeError::Syntax {
                            line: no + 1,
                            msg: "`leq` takes exactly two elements".into(),
                        });
                    }
                    pairs.push((ws[0].to_string(), ws[1].to_string()));
                }
                Some(other) => {
                    return Err(LatticeError::Syntax {
                        line: no + 1,
                        msg: format!("unknown directive `{other}`"),
                    })
                }
                None => {}
            }
        }
        Lattice::from_order(&elements, &pairs)
    }

    /// A built-in name, or lattice-file source text.
    pub fn load(source: &str) -> Result<Lattice, LatticeError> {
        match Lattice::builtin(source.trim()) {
            Some(l) => Ok(l),
            None => Lattice::parse(source),
        }
    }

    pub fn with_blame_mode(mut self, mode: BlameMode) -> Lattice {
        self.mode = mode;
        self
    }

    pub fn blame_mode(&self) -> BlameMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn levels(&self) -> impl Iterator<Item = Level> + '_ {
        (0..self.names.len()).map(|i| Level(i as u16))
    }

    pub fn name(&self, l: Level) -> &str {
        &self.names[l.ix()]
    }

    pub fn level_named(&self, name: &str) -> Result<Level, LatticeError> {
        self.by_name
            .get(name)
            .copied()
            .ok_or_else(|| LatticeError::UnknownElement(name.to_string()))
    }

    pub fn bottom(&self) -> Level {
        self.bottom
    }

    pub fn top(&self) -> Level {
        self.top
    }

    pub fn leq(&self, a: Level, b: Level) -> bool {
        self.leq[a.ix()][b.ix()]
    }

    pub fn join(&self, a: Level, b: Level) -> Level {
        self.join[a.ix()][b.ix()]
    }

    pub fn meet(&self, a: Level, b: Level) -> Level {
        self.meet[a.ix()][b.ix()]
    }

    // ---- blame component -------------------------------------------------

    /// The level whose blame is the bottom of the blame lattice.
    pub fn blame_bottom_level(&self) -> Level {
        match self.mode {
            BlameMode::Preserve => self.bottom,
            BlameMode::Flip => self.top,
        }
    }

    fn blame_top_level(&self) -> Level {
        match self.mode {
            BlameMode::Preserve => self.top,
            BlameMode::Flip => self.bottom,
        }
    }

    fn blame_level(&self, b: Option<Level>) -> Level {
        b.unwrap_or_else(|| self.blame_bottom_level())
    }

    fn canon_blame(&self, b: Level) -> Option<Level> {
        (b != self.blame_bottom_level()).then_some(b)
    }

    /// Order on blames, `beta(a) <=_B beta(b)`.
    pub fn blame_leq(&self, a: Level, b: Level) -> bool {
        match self.mode {
            BlameMode::Preserve => self.leq(a, b),
            BlameMode::Flip => self.leq(b, a),
        }
    }

    /// `beta^-1(beta(a) join_B beta(b))`.
    pub fn blame_join(&self, a: Level, b: Level) -> Level {
        match self.mode {
            BlameMode::Preserve => self.join(a, b),
            BlameMode::Flip => self.meet(a, b),
        }
    }

    pub fn blame_meet(&self, a: Level, b: Level) -> Level {
        match self.mode {
            BlameMode::Preserve => self.meet(a, b),
            BlameMode::Flip => self.join(a, b),
        }
    }

    // ---- indices ---------------------------------------------------------

    pub fn index(&self, l: Level) -> Index {
        Index { level: l, blame: None }
    }

    pub fn bottom_index(&self) -> Index {
        self.index(self.bottom)
    }

    pub fn top_index(&self) -> Index {
        Index {
            level: self.top,
            blame: self.canon_blame(self.blame_top_level()),
        }
    }

    /// `beta(l)`, the blame copy of a level.
    pub fn beta(&self, l: Level) -> Index {
        Index {
            level: self.bottom,
            blame: self.canon_blame(l),
        }
    }

    /// Inverse of [`Lattice::beta`]; `None` if `i` has a non-bottom level
    /// component.
    pub fn beta_inv(&self, i: Index) -> Option<Level> {
        (i.level == self.bottom).then(|| self.blame_level(i.blame))
    }

    /// Level of the blame component of `i` (the blame lattice's bottom
    /// maps to `blame_bottom_level`).
    pub fn blame_component(&self, i: Index) -> Level {
        self.blame_level(i.blame)
    }

    pub fn is_pure_level(&self, i: Index) -> bool {
        i.blame.is_none()
    }

    pub fn ileq(&self, a: Index, b: Index) -> bool {
        self.leq(a.level, b.level) && self.blame_leq(self.blame_level(a.blame), self.blame_level(b.blame))
    }

    pub fn ijoin(&self, a: Index, b: Index) -> Index {
        Index {
            level: self.join(a.level, b.level),
            blame: self.canon_blame(self.blame_join(self.blame_level(a.blame), self.blame_level(b.blame))),
        }
    }

    pub fn imeet(&self, a: Index, b: Index) -> Index {
        Index {
            level: self.meet(a.level, b.level),
            blame: self.canon_blame(self.blame_meet(self.blame_level(a.blame), self.blame_level(b.blame))),
        }
    }

    pub fn is_bottom(&self, i: Index) -> bool {
        i == self.bottom_index()
    }

    /// Every element of the product lattice.
    pub fn all_indices(&self) -> Vec<Index> {
        let mut out = Vec::new();
        for l in self.levels() {
            for b in self.levels() {
                out.push(Index { level: l, blame: self.canon_blame(b) });
            }
        }
        out
    }

    /// Every pure level as an index.
    pub fn level_indices(&self) -> Vec<Index> {
        self.levels().map(|l| self.index(l)).collect()
    }

    /// Resolves `name` or `!name`.
    pub fn index_named(&self, name: &str) -> Result<Index, LatticeError> {
        match name.strip_prefix('!') {
            Some(b) => Ok(self.beta(self.level_named(b)?)),
            None => Ok(self.index(self.level_named(name)?)),
        }
    }

    /// Renders an index; mixed indices print as `l|!b`.
    pub fn show_index(&self, i: Index) -> String {
        let mut parts = Vec::new();
        if i.level != self.bottom || i.blame.is_none() {
            parts.push(self.name(i.level).to_string());
        }
        if let Some(b) = i.blame {
            parts.push(format!("!{}", self.name(b)));
        }
        parts.join("|")
    }

    pub fn display_index(&self, i: Index) -> impl fmt::Display + '_ {
        IndexDisplay { lat: self, i }
    }
}

struct IndexDisplay<'a> {
    lat: &'a Lattice,
    i: Index,
}

impl fmt::Display for IndexDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.lat.show_index(self.i))
    }
}
