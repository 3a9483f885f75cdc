use rand::Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{invalid, Result};
use crate::game::io::{Game, GameFile};
use crate::game::{BimatrixGame, Matrix, StrategicGame};
use crate::mechanisms::StagHuntSpec;
use crate::rng::stream;

pub const MAX_MATRIX_DIM: usize = 500;
pub const MAX_STAG_HUNT_PLAYERS: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GameKind {
    Symmetric,
    Bimatrix,
    StagHunt,
    Strategic,
}

#[derive(Clone, Debug, PartialEq)]
pub enum GeneratedGame {
    /// Played as `(C, Cᵀ)`.
    Symmetric(Matrix),
    Bimatrix(BimatrixGame),
    StagHunt(StagHuntSpec),
    Strategic(StrategicGame),
}

impl GeneratedGame {
    /// Hex SHA-256 of the canonical JSON form (first 16 digits).
    pub fn hash(&self) -> String {
        let text = match self {
            GeneratedGame::Symmetric(c) => serde_json::to_string(&GameFile::from(&Game::Symmetric(c.clone()))),
            GeneratedGame::Bimatrix(g) => serde_json::to_string(&GameFile::from(&Game::Bimatrix(g.clone()))),
            GeneratedGame::StagHunt(s) => serde_json::to_string(s),
            GeneratedGame::Strategic(g) => serde_json::to_string(&GameFile::from(g)),
        }
        .expect("games serialize");
        let digest = Sha256::digest(text.as_bytes());
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }
}

fn uniform_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| rng.random::<f64>())
}

/// Random game of the given kind, deterministic in `seed`.
///
/// `dims` is `[n]` for symmetric games and stag hunts (players), `[m, n]`
/// for bimatrix games and the strategy counts for strategic games.
/// Matrix entries are i.i.d. uniform on `[0, 1]`.
pub fn gen_random_game(kind: GameKind, dims: &[usize], seed: u64) -> Result<GeneratedGame> {
    let mut rng = stream(seed, 0);
    match kind {
        GameKind::Symmetric => {
            let [n] = dims else {
                return Err(invalid("symmetric games take one dimension"));
            };
            check_dim(*n)?;
            Ok(GeneratedGame::Symmetric(uniform_matrix(&mut rng, *n, *n)))
        }
        GameKind::Bimatrix => {
            let [m, n] = dims else {
                return Err(invalid("bimatrix games take two dimensions"));
            };
            check_dim(*m)?;
            check_dim(*n)?;
            let a = uniform_matrix(&mut rng, *m, *n);
            let b = uniform_matrix(&mut rng, *m, *n);
            Ok(GeneratedGame::Bimatrix(BimatrixGame::new(a, b)?))
        }
        GameKind::StagHunt => {
            let [n] = dims else {
                return Err(invalid("stag hunts take the player count"));
            };
            if !(2..=MAX_STAG_HUNT_PLAYERS).contains(n) {
                return Err(invalid(format!("stag hunts need 2..={MAX_STAG_HUNT_PLAYERS} players")));
            }
            Ok(GeneratedGame::StagHunt(random_stag_hunt(&mut rng, *n)?))
        }
        GameKind::Strategic => {
            let counts = dims.to_vec();
            let players = counts.len();
            let g = StrategicGame::from_fn(counts, |_| (0..players).map(|_| rng.random::<f64>()).collect())?;
            Ok(GeneratedGame::Strategic(g))
        }
    }
}

fn check_dim(n: usize) -> Result<()> {
    if n == 0 || n > MAX_MATRIX_DIM {
        return Err(invalid(format!("matrix dimensions must lie in 1..={MAX_MATRIX_DIM}")));
    }
    Ok(())
}

/// Sorted strictly increasing benefits on `[-1, 2]` with `c` drawn strictly
/// between the smallest and the largest.
pub fn random_stag_hunt<R: Rng>(rng: &mut R, n: usize) -> Result<StagHuntSpec> {
    loop {
        let mut b: Vec<f64> = (0..n).map(|_| -1.0 + 3.0 * rng.random::<f64>()).collect();
        b.sort_by(f64::total_cmp);
        if b.windows(2).any(|w| w[1] <= w[0]) || b[n - 1] - b[0] < 1e-3 {
            continue;
        }
        let t = 0.05 + 0.9 * rng.random::<f64>();
        let c = b[0] + t * (b[n - 1] - b[0]);
        if b.iter().any(|v| (v - c).abs() < 1e-9) {
            continue;
        }
        return StagHuntSpec::new(n, b, c);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_in_seed() {
        for kind in [GameKind::Symmetric, GameKind::StagHunt] {
            let a = gen_random_game(kind, &[3], 11).unwrap();
            let b = gen_random_game(kind, &[3], 11).unwrap();
            assert_eq!(a, b);
            assert_eq!(a.hash(), b.hash());
            assert_ne!(a.hash(), gen_random_game(kind, &[3], 12).unwrap().hash());
        }
        let g = gen_random_game(GameKind::Bimatrix, &[2, 3], 5).unwrap();
        assert_eq!(g, gen_random_game(GameKind::Bimatrix, &[2, 3], 5).unwrap());
        let s = gen_random_game(GameKind::Strategic, &[2, 2, 3], 5).unwrap();
        assert!(matches!(s, GeneratedGame::Strategic(ref g) if g.profile_count() == 12));
    }

    #[test]
    fn entries_in_unit_interval() {
        let GeneratedGame::Symmetric(c) = gen_random_game(GameKind::Symmetric, &[6], 1).unwrap() else {
            panic!()
        };
        assert!(c.min() >= 0.0 && c.max() <= 1.0);
    }

    #[test]
    fn stag_hunts_are_valid() {
        for seed in 0..50 {
            let GeneratedGame::StagHunt(s) = gen_random_game(GameKind::StagHunt, &[4], seed).unwrap() else {
                panic!()
            };
            s.validate().unwrap();
        }
        assert!(gen_random_game(GameKind::StagHunt, &[1], 0).is_err());
        assert!(gen_random_game(GameKind::Symmetric, &[0], 0).is_err());
    }
}
