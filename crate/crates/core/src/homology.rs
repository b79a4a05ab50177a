//! The bigraded Khovanov chain complex of a diagram and its homology ranks.
//!
//! `C^{i,j}` is spanned by the enhanced states of bidegree `(i, j)`. The
//! differential switches one positive marker to negative and relabels the
//! affected circles:
//!
//! ```text
//! merge   (+,+) → +    (+,−), (−,+) → −    (−,−) → 0
//! split   + → (+,−) + (−,+)                − → (−,−)
//! ```
//!
//! with sign `(−1)^k`, `k` the number of negative markers at crossings that
//! precede the switched one in PD order.

use std::borrow::Cow;
use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use thiserror::Error;

use crate::diagram::{Diagram, Sign};
use crate::matrix::IntMatrix;
use crate::statecube::{cube_circles, resolve, CircleSet, EnhancedState, State};

/// Crossing budget for homology computations.
pub const MAX_HOMOLOGY_CROSSINGS: usize = 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ring {
    Rationals,
    Gf2,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error("diagram has {crossings} crossings; at most {max} are supported")]
    TooLarge { crossings: usize, max: usize },
    #[error("d∘d is nonzero on C^({i},{j})")]
    NonNilpotent { i: i64, j: i64 },
}

/// Ranks of `H^{i,j}`. Absent bidegrees have rank zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BigradedRanks(BTreeMap<(i64, i64), u64>);

impl BigradedRanks {
    pub fn new() -> BigradedRanks {
        BigradedRanks::default()
    }

    pub fn get(&self, i: i64, j: i64) -> u64 {
        self.0.get(&(i, j)).copied().unwrap_or(0)
    }

    /// Sets a rank; zero removes the entry.
    pub fn set(&mut self, i: i64, j: i64, rank: u64) {
        if rank == 0 {
            self.0.remove(&(i, j));
        } else {
            self.0.insert((i, j), rank);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = ((i64, i64), u64)> + '_ {
        self.0.iter().map(|(&k, &v)| (k, v))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn total_rank(&self) -> u64 {
        self.0.values().sum()
    }

    /// Quantum gradings with a nonzero rank, ascending.
    pub fn q_degrees(&self) -> Vec<i64> {
        let mut js: Vec<i64> = self.0.keys().map(|&(_, j)| j).collect();
        js.sort_unstable();
        js.dedup();
        js
    }

    /// `Σ_i (−1)^i rank H^{i,j}` for each `j`.
    pub fn euler_by_q(&self) -> BTreeMap<i64, i64> {
        let mut out = BTreeMap::new();
        for (&(i, j), &r) in &self.0 {
            *out.entry(j).or_insert(0) += if i % 2 == 0 { r as i64 } else { -(r as i64) };
        }
        out.retain(|_, v| *v != 0);
        out
    }

    /// The table reflected through the origin, `(i, j) ↦ (−i, −j)`.
    pub fn reflected(&self) -> BigradedRanks {
        BigradedRanks(self.0.iter().map(|(&(i, j), &r)| ((-i, -j), r)).collect())
    }
}

impl FromIterator<((i64, i64), u64)> for BigradedRanks {
    fn from_iter<I: IntoIterator<Item = ((i64, i64), u64)>>(iter: I) -> Self {
        let mut r = BigradedRanks::new();
        for ((i, j), v) in iter {
            let cur = r.get(i, j);
            r.set(i, j, cur + v);
        }
        r
    }
}

/// Enhanced states bucketed by bidegree, in enumeration order.
#[derive(Clone, Debug, Default)]
pub struct ChainBasis {
    buckets: BTreeMap<(i64, i64), Vec<EnhancedState>>,
}

impl ChainBasis {
    pub fn from_states(states: impl IntoIterator<Item = EnhancedState>) -> ChainBasis {
        let mut buckets: BTreeMap<(i64, i64), Vec<EnhancedState>> = BTreeMap::new();
        for s in states {
            buckets.entry(s.bidegree()).or_default().push(s);
        }
        ChainBasis { buckets }
    }

    pub fn bucket(&self, i: i64, j: i64) -> &[EnhancedState] {
        self.buckets.get(&(i, j)).map_or(&[], Vec::as_slice)
    }

    pub fn bidegrees(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.buckets.keys().copied()
    }

    pub fn dim(&self, i: i64, j: i64) -> usize {
        self.bucket(i, j).len()
    }

    pub fn total_dim(&self) -> usize {
        self.buckets.values().map(Vec::len).sum()
    }
}

/// Applies the differential to one enhanced state, given the circle sets
/// of its state and of every state one marker switch away.
fn apply_differential<'c>(
    d: &Diagram,
    s: &EnhancedState,
    circles_of: impl Fn(State) -> Cow<'c, CircleSet>,
) -> Vec<(EnhancedState, i64)> {
    let state = s.state();
    let old = circles_of(state);
    let mut out = Vec::new();
    for (k, crossing) in d.crossings().iter().enumerate() {
        if state.marker(k) == Sign::Negative {
            continue;
        }
        let target = state.switched(k);
        let new = circles_of(target);
        let eps = if state.negatives_before(k).is_multiple_of(2) { 1 } else { -1 };
        let [a, b, c, _] = crossing.edges();
        let (old_ab, old_cd) = (old.circle_of(a), old.circle_of(c));
        let (new_ad, new_bc) = (new.circle_of(a), new.circle_of(b));

        // Signs of circles away from the crossing carry over unchanged.
        let mut base = 0u64;
        for nc in 0..new.count() {
            if nc == new_ad || nc == new_bc {
                continue;
            }
            let oc = match new.first_label(nc) {
                Some(l) => old.circle_of(l),
                None => old.edge_circles() + (nc - new.edge_circles()),
            };
            if s.circle_sign(oc) == Sign::Negative {
                base |= 1 << nc;
            }
        }
        let minus = |c: usize| s.circle_sign(c) == Sign::Negative;
        let mut emit = |mask: u64| {
            out.push((EnhancedState::new(d, target, new.count(), mask), eps));
        };

        if old_ab != old_cd {
            debug_assert_eq!(new_ad, new_bc);
            match (minus(old_ab), minus(old_cd)) {
                (false, false) => emit(base),
                (true, true) => {}
                _ => emit(base | 1 << new_ad),
            }
        } else {
            debug_assert_ne!(new_ad, new_bc);
            if minus(old_ab) {
                emit(base | 1 << new_ad | 1 << new_bc);
            } else {
                emit(base | 1 << new_bc);
                emit(base | 1 << new_ad);
            }
        }
    }
    out
}

/// The differential of a single enhanced state as a formal integer
/// combination of enhanced states one homological degree up.
pub fn differential(d: &Diagram, s: &EnhancedState) -> Vec<(EnhancedState, i64)> {
    apply_differential(d, s, |st| Cow::Owned(resolve(d, st)))
}

/// The chain complex of a diagram with all differential blocks assembled.
pub struct KhComplex<'a> {
    diagram: &'a Diagram,
    basis: ChainBasis,
    /// `d^{i,j}` as a `dim C^{i+1,j} × dim C^{i,j}` matrix.
    blocks: BTreeMap<(i64, i64), IntMatrix>,
}

impl<'a> KhComplex<'a> {
    pub fn new(d: &'a Diagram) -> Result<KhComplex<'a>, HomologyError> {
        if d.n_crossings() > MAX_HOMOLOGY_CROSSINGS {
            return Err(HomologyError::TooLarge { crossings: d.n_crossings(), max: MAX_HOMOLOGY_CROSSINGS });
        }
        let circles = cube_circles(d);
        let n = d.n_crossings();
        let states: Vec<EnhancedState> = (0..circles.len() as u64)
            .into_par_iter()
            .flat_map_iter(|b| {
                let s = State::from_bits(b, n);
                let c = circles[b as usize].count();
                (0..1u64 << c).map(move |m| EnhancedState::new(d, s, c, m))
            })
            .collect();
        let basis = ChainBasis::from_states(states);

        let index: HashMap<(i64, i64), HashMap<EnhancedState, usize>> =
            basis.buckets.iter().map(|(&k, v)| (k, v.iter().enumerate().map(|(n, &s)| (s, n)).collect())).collect();
        let empty = HashMap::new();

        let blocks = basis
            .buckets
            .par_iter()
            .map(|(&(i, j), sources)| {
                let targets = index.get(&(i + 1, j)).unwrap_or(&empty);
                let mut entries = Vec::new();
                for (col, s) in sources.iter().enumerate() {
                    for (t, coeff) in apply_differential(d, s, |st| Cow::Borrowed(&circles[st.bits() as usize])) {
                        debug_assert_eq!(t.bidegree(), (i + 1, j));
                        let row = targets[&t];
                        entries.push((row, col, coeff));
                    }
                }
                ((i, j), IntMatrix::from_triplets(targets.len(), sources.len(), entries))
            })
            .collect();

        Ok(KhComplex { diagram: d, basis, blocks })
    }

    pub fn diagram(&self) -> &Diagram {
        self.diagram
    }

    pub fn basis(&self) -> &ChainBasis {
        &self.basis
    }

    /// `d^{i,j} : C^{i,j} → C^{i+1,j}`.
    pub fn block(&self, i: i64, j: i64) -> IntMatrix {
        self.blocks.get(&(i, j)).cloned().unwrap_or_else(|| IntMatrix::zeros(self.basis.dim(i + 1, j), 0))
    }

    /// Checks `d^{i+1,j} ∘ d^{i,j} = 0` on every block.
    pub fn check_d_squared(&self) -> Result<(), HomologyError> {
        self.blocks.par_iter().try_for_each(|(&(i, j), m)| match self.blocks.get(&(i + 1, j)) {
            Some(next) if !next.mul(m).is_zero() => Err(HomologyError::NonNilpotent { i, j }),
            _ => Ok(()),
        })
    }

    pub fn ranks(&self, ring: Ring) -> BigradedRanks {
        let rank_of = |m: &IntMatrix| match ring {
            Ring::Rationals => m.rank(),
            Ring::Gf2 => m.rank_gf2(),
        };
        let block_ranks: BTreeMap<(i64, i64), usize> = self.blocks.par_iter().map(|(&k, m)| (k, rank_of(m))).collect();
        self.basis
            .bidegrees()
            .map(|(i, j)| {
                let dim = self.basis.dim(i, j);
                let out = block_ranks.get(&(i, j)).copied().unwrap_or(0);
                let inc = block_ranks.get(&(i - 1, j)).copied().unwrap_or(0);
                ((i, j), (dim - out - inc) as u64)
            })
            .collect()
    }
}

/// Ranks of Khovanov homology over the chosen coefficients, after checking
/// that the assembled differential squares to zero.
pub fn homology_ranks(d: &Diagram, ring: Ring) -> Result<BigradedRanks, HomologyError> {
    let complex = KhComplex::new(d)?;
    complex.check_d_squared()?;
    Ok(complex.ranks(ring))
}
