//! Instance families and timing runs behind `kncomp bench`.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::{ArithError, Counted, Field, ModField, Rationals};
use crate::dispatch::CountError;
use crate::graph::{Graph, Problem};
use crate::oracle::{random_labeled_tree_with, CentShape};
use crate::qt::{self, QtError};
use crate::tree::{self, TreeError};

/// Fresh primes to try before giving up on a modular run.
pub const PRIME_RETRIES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Path,
    Star,
    Caterpillar,
    RandomTree,
    RandomQt,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::Path,
        Family::Star,
        Family::Caterpillar,
        Family::RandomTree,
        Family::RandomQt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Path => "path",
            Family::Star => "star",
            Family::Caterpillar => "caterpillar",
            Family::RandomTree => "random-tree",
            Family::RandomQt => "random-qt",
        }
    }

    /// An instance with about `size` vertices (exactly `size` for the tree families).
    pub fn instance(self, size: usize, seed: u64) -> Graph {
        let size = size.max(1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        match self {
            Family::Path => Graph::path(size),
            Family::Star => Graph::star(size),
            Family::Caterpillar => {
                // spine 1..=s, legs s+1.. hung round-robin on the spine
                let spine = size.div_ceil(2);
                let mut edges: Vec<_> = (1..spine).map(|u| (u, u + 1)).collect();
                edges.extend((spine + 1..=size).map(|v| (v - spine, v)));
                Graph::from_edges(size, &edges).expect("caterpillar is simple")
            }
            Family::RandomTree => random_labeled_tree_with(size, &mut rng),
            Family::RandomQt => {
                let shape = CentShape::random_sized(size, 1, &mut rng);
                let mut ids: Vec<usize> = (1..=shape.vertex_count()).collect();
                ids.shuffle(&mut rng);
                shape.expand_with(&ids)
            }
        }
    }

    fn is_tree_family(self) -> bool {
        self != Family::RandomQt
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown family {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub size: usize,
    pub millis: f64,
    pub ops: u64,
}

fn engine_in<F: Field>(family: Family, p: &Problem, field: &F) -> Result<F::Elem, CountError> {
    if family.is_tree_family() {
        Ok(tree::count_kn_minus_tree_in(p, field)?)
    } else {
        Ok(qt::count_kn_minus_qt_in(p, field)?)
    }
}

fn recoverable(e: &CountError) -> bool {
    matches!(
        e,
        CountError::Tree(
            TreeError::ZeroPivot { .. } | TreeError::Arith(ArithError::DivisionByZero)
        ) | CountError::Qt(QtError::ZeroPivot { .. } | QtError::Arith(ArithError::DivisionByZero))
    )
}

/// Times one engine run on `K_{v+1} - H` where `H` is the family instance on `v` vertices.
///
/// With `mod_p` the engine runs over a random 62-bit prime field, retrying with a
/// fresh prime when a residue vanishes; otherwise it runs over the rationals.
pub fn measure(
    family: Family,
    size: usize,
    mod_p: bool,
    seed: u64,
) -> Result<BenchRow, CountError> {
    let h = family.instance(size, seed);
    let p = Problem::new(h.vertex_count() + 1, h)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    if !mod_p {
        let counted = Counted::new(&Rationals);
        let start = Instant::now();
        engine_in(family, &p, &counted)?;
        return Ok(BenchRow {
            size,
            millis: start.elapsed().as_secs_f64() * 1e3,
            ops: counted.ops(),
        });
    }
    for _ in 0..PRIME_RETRIES {
        let field = ModField::random(&mut rng);
        let counted = Counted::new(&field);
        let start = Instant::now();
        match engine_in(family, &p, &counted) {
            Ok(_) => {
                return Ok(BenchRow {
                    size,
                    millis: start.elapsed().as_secs_f64() * 1e3,
                    ops: counted.ops(),
                })
            }
            Err(e) if recoverable(&e) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(ArithError::PrimeRetriesExhausted(PRIME_RETRIES).into())
}

/// Sizes are measured one after another, never concurrently.
pub fn run(
    family: Family,
    sizes: &[usize],
    mod_p: bool,
    seed: u64,
) -> Result<Vec<BenchRow>, CountError> {
    sizes
        .iter()
        .map(|&s| measure(family, s, mod_p, seed))
        .collect()
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from("size,millis,ops\n");
    for r in rows {
        out.push_str(&format!("{},{:.3},{}\n", r.size, r.millis, r.ops));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn families_build() {
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
            let g = f.instance(50, 1);
            if f.is_tree_family() {
                assert!(g.is_tree(), "{f}");
                assert_eq!(g.vertex_count(), 50);
            } else {
                qt::recognize_and_build_cent_tree(&g).unwrap();
            }
        }
        assert_eq!(Family::Caterpillar.instance(1, 0), Graph::empty(1));
    }

    #[test]
    fn size_one_runs() {
        for f in Family::ALL {
            let rows = run(f, &[1], true, 3).unwrap();
            assert_eq!(rows.len(), 1);
        }
        let rows = run(Family::Path, &[1, 5], false, 3).unwrap();
        assert!(to_csv(&rows).starts_with("size,millis,ops\n1,"));
    }
}
