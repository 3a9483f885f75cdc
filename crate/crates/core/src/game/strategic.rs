use serde::{Deserialize, Serialize};

use super::BimatrixGame;
use crate::error::{invalid, Error, Result};

/// Upper bound on the number of pure profiles a dense table may hold.
pub const MAX_PROFILES: usize = 10_000_000;

/// Strategy choice for every player.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PureProfile {
    pub choices: Vec<usize>,
}

impl PureProfile {
    pub fn new(choices: Vec<usize>) -> Self {
        Self { choices }
    }
}

impl From<Vec<usize>> for PureProfile {
    fn from(choices: Vec<usize>) -> Self {
        Self { choices }
    }
}

/// N-player finite game with a dense payoff table.
///
/// Profiles are mixed-radix integers with the first player as the most
/// significant digit; entry `k * n + i` of the table is player `i`'s payoff
/// at profile `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct StrategicGame {
    strategy_counts: Vec<usize>,
    strides: Vec<usize>,
    payoffs: Vec<f64>,
}

fn profile_space(counts: &[usize]) -> Result<(usize, Vec<usize>)> {
    if counts.is_empty() {
        return Err(invalid("a game needs at least one player"));
    }
    if counts.contains(&0) {
        return Err(invalid("every player needs at least one strategy"));
    }
    let mut strides = vec![1; counts.len()];
    let mut total: usize = 1;
    for i in (0..counts.len()).rev() {
        strides[i] = total;
        total = total
            .checked_mul(counts[i])
            .filter(|t| *t <= MAX_PROFILES)
            .ok_or_else(|| Error::Capacity(format!("more than {MAX_PROFILES} profiles")))?;
    }
    Ok((total, strides))
}

impl StrategicGame {
    pub fn new(strategy_counts: Vec<usize>, payoffs: Vec<f64>) -> Result<Self> {
        let (total, strides) = profile_space(&strategy_counts)?;
        let n = strategy_counts.len();
        if payoffs.len() != total * n {
            return Err(invalid(format!(
                "payoff table has {} entries, expected {} profiles x {} players",
                payoffs.len(),
                total,
                n
            )));
        }
        if payoffs.iter().any(|v| !v.is_finite()) {
            return Err(invalid("payoffs must be finite"));
        }
        Ok(Self {
            strategy_counts,
            strides,
            payoffs,
        })
    }

    /// Builds the table by evaluating `f` at every profile in index order.
    pub fn from_fn(strategy_counts: Vec<usize>, mut f: impl FnMut(&[usize]) -> Vec<f64>) -> Result<Self> {
        let (total, _) = profile_space(&strategy_counts)?;
        let n = strategy_counts.len();
        let mut payoffs = Vec::with_capacity(total * n);
        let mut choice = vec![0usize; n];
        for k in 0..total {
            let u = f(&choice);
            if u.len() != n {
                return Err(invalid(format!("profile {k} has {} payoffs, expected {n}", u.len())));
            }
            payoffs.extend(u);
            for i in (0..n).rev() {
                choice[i] += 1;
                if choice[i] < strategy_counts[i] {
                    break;
                }
                choice[i] = 0;
            }
        }
        Self::new(strategy_counts, payoffs)
    }

    pub fn from_bimatrix(g: &BimatrixGame) -> Self {
        Self::from_fn(vec![g.rows(), g.cols()], |s| vec![g.a().get(s[0], s[1]), g.b().get(s[0], s[1])])
            .expect("bimatrix dimensions are valid")
    }

    pub fn player_count(&self) -> usize {
        self.strategy_counts.len()
    }

    pub fn strategy_counts(&self) -> &[usize] {
        &self.strategy_counts
    }

    pub fn profile_count(&self) -> usize {
        self.payoffs.len() / self.player_count()
    }

    pub fn payoff_table(&self) -> &[f64] {
        &self.payoffs
    }

    pub fn encode(&self, choices: &[usize]) -> Result<usize> {
        if choices.len() != self.player_count() {
            return Err(Error::Dimension {
                expected: self.player_count(),
                got: choices.len(),
            });
        }
        let mut k = 0;
        for (i, (&c, &m)) in choices.iter().zip(&self.strategy_counts).enumerate() {
            if c >= m {
                return Err(invalid(format!("player {i} has no strategy {c}")));
            }
            k += c * self.strides[i];
        }
        Ok(k)
    }

    pub fn decode(&self, profile: usize) -> Vec<usize> {
        (0..self.player_count()).map(|i| self.choice(profile, i)).collect()
    }

    #[inline]
    pub fn choice(&self, profile: usize, player: usize) -> usize {
        (profile / self.strides[player]) % self.strategy_counts[player]
    }

    /// Index of the profile where `player` switches to `strategy`.
    #[inline]
    pub fn deviate(&self, profile: usize, player: usize, strategy: usize) -> usize {
        let cur = self.choice(profile, player);
        profile - cur * self.strides[player] + strategy * self.strides[player]
    }

    #[inline]
    pub fn payoff(&self, profile: usize, player: usize) -> f64 {
        self.payoffs[profile * self.player_count() + player]
    }

    pub fn payoffs_at(&self, profile: usize) -> &[f64] {
        let n = self.player_count();
        &self.payoffs[profile * n..(profile + 1) * n]
    }

    pub fn payoff_of(&self, profile: &PureProfile) -> Result<&[f64]> {
        Ok(self.payoffs_at(self.encode(&profile.choices)?))
    }

    /// Subgame keeping, for each player, only the listed strategies.
    pub fn restrict(&self, keep: &[Vec<usize>]) -> Result<Self> {
        if keep.len() != self.player_count() {
            return Err(Error::Dimension {
                expected: self.player_count(),
                got: keep.len(),
            });
        }
        for (i, k) in keep.iter().enumerate() {
            if k.is_empty() || k.iter().any(|s| *s >= self.strategy_counts[i]) {
                return Err(invalid(format!("bad strategy subset for player {i}")));
            }
        }
        let counts = keep.iter().map(Vec::len).collect();
        Self::from_fn(counts, |s| {
            let orig: Vec<usize> = s.iter().zip(keep).map(|(&c, k)| k[c]).collect();
            let k = self.encode(&orig).expect("restricted profile is valid");
            self.payoffs_at(k).to_vec()
        })
    }
}

/// Game among `coalition` with everyone else frozen at `anchor`.
///
/// Players of the reduced game are the coalition members in increasing order.
pub fn reduced_game(game: &StrategicGame, coalition: &[usize], anchor: &PureProfile) -> Result<StrategicGame> {
    let n = game.player_count();
    let mut members: Vec<usize> = coalition.to_vec();
    members.sort_unstable();
    members.dedup();
    if members.is_empty() || members.len() >= n {
        return Err(invalid("coalition must be a nonempty proper subset of players"));
    }
    if members.iter().any(|&j| j >= n) {
        return Err(invalid("coalition names a nonexistent player"));
    }
    game.encode(&anchor.choices)?;
    let counts = members.iter().map(|&j| game.strategy_counts[j]).collect();
    StrategicGame::from_fn(counts, |sigma| {
        let mut full = anchor.choices.clone();
        for (&j, &c) in members.iter().zip(sigma) {
            full[j] = c;
        }
        let k = game.encode(&full).expect("valid profile");
        members.iter().map(|&j| game.payoff(k, j)).collect()
    })
}
