//! H-words: words over an alphabet where every pair of consecutive
//! characters must be an allowed pair, reconfigured one character at a
//! time.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use crate::error::{NclError, Result};
use crate::search::SolverLimits;

/// Symbols are indices into `HRelation::alphabet`.
pub type Word = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HRelation {
    /// Ordered alphabet; BFS tries symbols in this order.
    pub alphabet: Vec<String>,
    pub allowed: BTreeSet<(usize, usize)>,
}

impl HRelation {
    pub fn new(alphabet: &[&str], allowed: &[(&str, &str)]) -> Result<Self> {
        let mut h = HRelation {
            alphabet: alphabet.iter().map(|s| s.to_string()).collect(),
            allowed: BTreeSet::new(),
        };
        let mut sorted = h.alphabet.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(NclError::InvalidInstance(
                "duplicate alphabet symbol".into(),
            ));
        }
        for (a, b) in allowed {
            let p = (h.symbol(a)?, h.symbol(b)?);
            h.allowed.insert(p);
        }
        Ok(h)
    }

    pub fn symbol(&self, s: &str) -> Result<usize> {
        self.alphabet
            .iter()
            .position(|x| x == s)
            .ok_or_else(|| NclError::InvalidInstance(format!("unknown symbol {s}")))
    }

    pub fn size(&self) -> usize {
        self.alphabet.len()
    }

    pub fn allows(&self, a: usize, b: usize) -> bool {
        self.allowed.contains(&(a, b))
    }

    /// Parses a word given as symbols, or as one token spelling
    /// single-character symbols.
    pub fn word(&self, tokens: &[&str]) -> Result<Word> {
        if tokens.len() == 1 && self.symbol(tokens[0]).is_err() {
            return tokens[0]
                .chars()
                .map(|c| self.symbol(&c.to_string()))
                .collect();
        }
        tokens.iter().map(|t| self.symbol(t)).collect()
    }

    /// Word text: concatenated when every symbol is one character,
    /// space-separated otherwise.
    pub fn spell(&self, w: &[usize]) -> String {
        let single = self.alphabet.iter().all(|s| s.chars().count() == 1);
        let parts: Vec<&str> = w.iter().map(|&i| self.alphabet[i].as_str()).collect();
        if single {
            parts.concat()
        } else {
            parts.join(" ")
        }
    }
}

pub fn is_hword(h: &HRelation, w: &[usize]) -> bool {
    w.iter().all(|&c| c < h.size()) && w.windows(2).all(|p| h.allows(p[0], p[1]))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HGoal {
    Word(Word),
    /// Some word with `symbol` at `position` (0-based).
    Target {
        position: usize,
        symbol: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HWordInstance {
    pub h: HRelation,
    pub start: Word,
    pub goal: HGoal,
}

impl HWordInstance {
    pub fn validate(&self) -> Result<()> {
        if !is_hword(&self.h, &self.start) {
            return Err(NclError::InvalidInstance("start is not an H-word".into()));
        }
        match &self.goal {
            HGoal::Word(w) => {
                if !is_hword(&self.h, w) {
                    return Err(NclError::InvalidInstance("goal is not an H-word".into()));
                }
                if w.len() != self.start.len() {
                    return Err(NclError::InvalidInstance(
                        "start and goal lengths differ".into(),
                    ));
                }
            }
            HGoal::Target { position, symbol } => {
                if *position >= self.start.len() || *symbol >= self.h.size() {
                    return Err(NclError::InvalidInstance("target out of range".into()));
                }
            }
        }
        Ok(())
    }

    /// Solves with the matching BFS oracle.
    pub fn solve(&self, limits: SolverLimits) -> Result<Option<Vec<Word>>> {
        match &self.goal {
            HGoal::Word(w) => solve_hword_reconfig(&self.h, &self.start, w, limits),
            HGoal::Target { position, symbol } => {
                solve_hword_target(&self.h, &self.start, *position, *symbol, limits)
            }
        }
    }
}

fn bfs(
    h: &HRelation,
    ws: &[usize],
    limits: SolverLimits,
    done: impl Fn(&[usize]) -> bool,
) -> Result<Option<Vec<Word>>> {
    if !is_hword(h, ws) {
        return Err(NclError::InvalidInstance("start is not an H-word".into()));
    }
    let start: Word = ws.to_vec();
    let mut parent: HashMap<Word, Option<Word>> = HashMap::from([(start.clone(), None)]);
    let mut q = VecDeque::from([(start, 0usize)]);
    while let Some((w, d)) = q.pop_front() {
        if done(&w) {
            let mut path = vec![w.clone()];
            let mut cur = w;
            while let Some(Some(p)) = parent.get(&cur) {
                path.push(p.clone());
                cur = p.clone();
            }
            path.reverse();
            return Ok(Some(path));
        }
        if limits.max_len.is_some_and(|l| d >= l) {
            continue;
        }
        for i in 0..w.len() {
            for s in 0..h.size() {
                if s == w[i] {
                    continue;
                }
                if (i > 0 && !h.allows(w[i - 1], s)) || (i + 1 < w.len() && !h.allows(s, w[i + 1]))
                {
                    continue;
                }
                let mut n = w.clone();
                n[i] = s;
                if !parent.contains_key(&n) {
                    if limits.max_states.is_some_and(|m| parent.len() as u64 >= m) {
                        return Err(NclError::LimitExceeded {
                            what: "H-word state",
                            limit: limits.max_states.unwrap(),
                        });
                    }
                    parent.insert(n.clone(), Some(w.clone()));
                    q.push_back((n, d + 1));
                }
            }
        }
    }
    Ok(None)
}

/// Shortest sequence of H-words from `ws` to `wg`, each differing from the
/// previous in exactly one position.
pub fn solve_hword_reconfig(
    h: &HRelation,
    ws: &[usize],
    wg: &[usize],
    limits: SolverLimits,
) -> Result<Option<Vec<Word>>> {
    if !is_hword(h, wg) {
        return Err(NclError::InvalidInstance("goal is not an H-word".into()));
    }
    if ws.len() != wg.len() {
        return Err(NclError::InvalidInstance(
            "start and goal lengths differ".into(),
        ));
    }
    bfs(h, ws, limits, |w| w == wg)
}

/// Shortest sequence from `ws` to any H-word with `sym` at `pos`.
pub fn solve_hword_target(
    h: &HRelation,
    ws: &[usize],
    pos: usize,
    sym: usize,
    limits: SolverLimits,
) -> Result<Option<Vec<Word>>> {
    if pos >= ws.len() || sym >= h.size() {
        return Err(NclError::InvalidInstance("target out of range".into()));
    }
    bfs(h, ws, limits, |w| w[pos] == sym)
}

/// Reads the instance format: `alphabet a b c`, `pair a b`, `start w`,
/// then `goal w` or `target <pos> <sym>`. `#` starts a comment.
pub fn parse_instance(text: &str) -> Result<HWordInstance> {
    let mut alphabet: Option<Vec<String>> = None;
    let mut pairs: Vec<(String, String, usize)> = Vec::new();
    let mut start: Option<(Vec<String>, usize)> = None;
    let mut goal: Option<(Vec<String>, usize)> = None;
    let mut target: Option<(usize, String, usize)> = None;
    let err = |line: usize, msg: &str| NclError::Parse {
        line,
        msg: msg.to_string(),
    };
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        let rest: Vec<String> = toks[1..].iter().map(|s| s.to_string()).collect();
        match toks[0] {
            "alphabet" => {
                if alphabet.is_some() {
                    return Err(err(line, "alphabet given twice"));
                }
                alphabet = Some(rest);
            }
            "pair" => {
                if rest.len() != 2 {
                    return Err(err(line, "pair takes two symbols"));
                }
                pairs.push((rest[0].clone(), rest[1].clone(), line));
            }
            "start" => start = Some((rest, line)),
            "goal" => goal = Some((rest, line)),
            "target" => {
                if rest.len() != 2 {
                    return Err(err(line, "target takes a position and a symbol"));
                }
                let p = rest[0].parse().map_err(|_| err(line, "bad position"))?;
                target = Some((p, rest[1].clone(), line));
            }
            other => return Err(err(line, &format!("unknown record {other}"))),
        }
    }
    let alphabet = alphabet.ok_or_else(|| err(0, "missing alphabet"))?;
    let names: Vec<&str> = alphabet.iter().map(|s| s.as_str()).collect();
    let mut h = HRelation::new(&names, &[]).map_err(|e| err(0, &e.to_string()))?;
    for (a, b, line) in pairs {
        let p = (
            h.symbol(&a).map_err(|e| err(line, &e.to_string()))?,
            h.symbol(&b).map_err(|e| err(line, &e.to_string()))?,
        );
        h.allowed.insert(p);
    }
    let as_word = |h: &HRelation, (toks, line): &(Vec<String>, usize)| -> Result<Word> {
        let t: Vec<&str> = toks.iter().map(|s| s.as_str()).collect();
        h.word(&t).map_err(|e| err(*line, &e.to_string()))
    };
    let start = as_word(&h, &start.ok_or_else(|| err(0, "missing start"))?)?;
    let goal = match (goal, target) {
        (Some(g), None) => HGoal::Word(as_word(&h, &g)?),
        (None, Some((position, s, line))) => HGoal::Target {
            position,
            symbol: h.symbol(&s).map_err(|e| err(line, &e.to_string()))?,
        },
        _ => return Err(err(0, "exactly one of goal and target is required")),
    };
    let inst = HWordInstance { h, start, goal };
    inst.validate()?;
    Ok(inst)
}

pub fn print_instance(inst: &HWordInstance) -> String {
    let h = &inst.h;
    let mut s = format!("alphabet {}\n", h.alphabet.join(" "));
    for &(a, b) in &h.allowed {
        let _ = writeln!(s, "pair {} {}", h.alphabet[a], h.alphabet[b]);
    }
    let word = |w: &[usize]| {
        w.iter()
            .map(|&c| h.alphabet[c].as_str())
            .collect::<Vec<_>>()
            .join(" ")
    };
    let _ = writeln!(s, "start {}", word(&inst.start));
    match &inst.goal {
        HGoal::Word(w) => {
            let _ = writeln!(s, "goal {}", word(w));
        }
        HGoal::Target { position, symbol } => {
            let _ = writeln!(s, "target {position} {}", h.alphabet[*symbol]);
        }
    }
    s
}
