//! States, their circles, and enhanced states with their `(i, j)` gradings.
//!
//! Marker convention: the positive marker at a crossing `X(a,b,c,d)` joins
//! `a–b` and `c–d` (the Kauffman A-smoothing); the negative marker joins
//! `a–d` and `b–c`. At a positive crossing the positive marker is the
//! oriented resolution.

use rayon::prelude::*;

use crate::diagram::{Diagram, Sign};

/// Upper bound imposed by the `u64` marker and circle-sign masks.
pub const MAX_STATE_CROSSINGS: usize = 62;

/// One marker per crossing. Bit `k` set means a negative marker at crossing `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State {
    bits: u64,
    len: u8,
}

impl State {
    pub fn all_positive(n: usize) -> State {
        assert!(n <= MAX_STATE_CROSSINGS, "too many crossings for a state");
        State { bits: 0, len: n as u8 }
    }

    pub fn from_bits(bits: u64, n: usize) -> State {
        assert!(n <= MAX_STATE_CROSSINGS, "too many crossings for a state");
        assert!(n == 64 || bits >> n == 0, "marker bits beyond the crossing count");
        State { bits, len: n as u8 }
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn marker(&self, k: usize) -> Sign {
        if self.bits >> k & 1 == 1 {
            Sign::Negative
        } else {
            Sign::Positive
        }
    }

    pub fn n_negative(&self) -> usize {
        self.bits.count_ones() as usize
    }

    /// `σ(s)`: positive markers minus negative markers.
    pub fn sigma(&self) -> i64 {
        self.len as i64 - 2 * self.n_negative() as i64
    }

    /// The same state with the marker at `k` flipped.
    pub fn switched(&self, k: usize) -> State {
        State { bits: self.bits ^ (1 << k), len: self.len }
    }

    /// Negative markers at crossings with index below `k`.
    pub fn negatives_before(&self, k: usize) -> usize {
        (self.bits & ((1u64 << k) - 1)).count_ones() as usize
    }
}

/// The circles of a smoothed diagram. Circles through crossings are indexed
/// by increasing minimal edge label; crossingless loops follow.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircleSet {
    edge_circle: Vec<u32>,
    /// Minimal edge label of each circle through a crossing.
    first_label: Vec<u32>,
    edge_circles: usize,
    free_loops: usize,
}

impl CircleSet {
    pub fn count(&self) -> usize {
        self.edge_circles + self.free_loops
    }

    /// Circles that pass through at least one crossing.
    pub fn edge_circles(&self) -> usize {
        self.edge_circles
    }

    pub fn free_loops(&self) -> usize {
        self.free_loops
    }

    /// Circle containing the edge with this (1-based) label.
    pub fn circle_of(&self, label: u32) -> usize {
        self.edge_circle[label as usize - 1] as usize
    }

    /// Smallest edge label on circle `c`, or `None` for a free loop.
    pub fn first_label(&self, c: usize) -> Option<u32> {
        self.first_label.get(c).copied()
    }

    /// Edge labels on circle `c`, ascending; empty for a free loop.
    pub fn members(&self, c: usize) -> Vec<u32> {
        (1..=self.edge_circle.len() as u32).filter(|&l| self.circle_of(l) == c).collect()
    }
}

fn find(parent: &mut [u32], mut x: u32) -> u32 {
    while parent[x as usize] != x {
        let p = parent[x as usize];
        parent[x as usize] = parent[p as usize];
        x = p;
    }
    x
}

fn union(parent: &mut [u32], a: u32, b: u32) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        parent[hi as usize] = lo;
    }
}

/// Smooths every crossing according to `s` and traces the resulting circles.
pub fn resolve(d: &Diagram, s: State) -> CircleSet {
    assert_eq!(s.len(), d.n_crossings(), "state does not match the diagram");
    let mut parent: Vec<u32> = (0..d.n_edges() as u32).collect();
    for (k, c) in d.crossings().iter().enumerate() {
        let [a, b, cc, dd] = c.edges().map(|l| l - 1);
        match s.marker(k) {
            Sign::Positive => {
                union(&mut parent, a, b);
                union(&mut parent, cc, dd);
            }
            Sign::Negative => {
                union(&mut parent, a, dd);
                union(&mut parent, b, cc);
            }
        }
    }
    // union keeps the smaller index as root, so roots are minimal labels and
    // first appearance in label order gives the circle order.
    let mut index = vec![u32::MAX; parent.len()];
    let mut edge_circle = vec![0; parent.len()];
    let mut first_label = Vec::new();
    for l in 0..parent.len() as u32 {
        let r = find(&mut parent, l) as usize;
        if index[r] == u32::MAX {
            index[r] = first_label.len() as u32;
            first_label.push(l + 1);
        }
        edge_circle[l as usize] = index[r];
    }
    CircleSet { edge_circle, edge_circles: first_label.len(), first_label, free_loops: d.free_loops() }
}

/// A state together with a sign on each of its circles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EnhancedState {
    state: State,
    /// Bit `c` set means circle `c` carries the sign `-`.
    minus: u64,
    circles: u8,
    i: i64,
    j: i64,
}

impl EnhancedState {
    pub fn new(d: &Diagram, state: State, circles: usize, minus: u64) -> EnhancedState {
        assert!(circles < 64, "too many circles");
        assert!(minus >> circles == 0, "sign bits beyond the circle count");
        let w = d.writhe();
        let twice_i = w - state.sigma();
        debug_assert_eq!(twice_i % 2, 0);
        let i = twice_i / 2;
        let tau = circles as i64 - 2 * minus.count_ones() as i64;
        EnhancedState { state, minus, circles: circles as u8, i, j: w + i + tau }
    }

    pub fn state(&self) -> State {
        self.state
    }

    pub fn n_circles(&self) -> usize {
        self.circles as usize
    }

    pub fn minus_mask(&self) -> u64 {
        self.minus
    }

    pub fn circle_sign(&self, c: usize) -> Sign {
        if self.minus >> c & 1 == 1 {
            Sign::Negative
        } else {
            Sign::Positive
        }
    }

    pub fn circle_signs(&self) -> Vec<Sign> {
        (0..self.n_circles()).map(|c| self.circle_sign(c)).collect()
    }

    /// `τ(S)`: the sum of the circle signs.
    pub fn tau(&self) -> i64 {
        self.circles as i64 - 2 * self.minus.count_ones() as i64
    }

    pub fn i(&self) -> i64 {
        self.i
    }

    pub fn j(&self) -> i64 {
        self.j
    }

    pub fn bidegree(&self) -> (i64, i64) {
        (self.i, self.j)
    }
}

/// Number of states of a diagram, `2^n`.
pub fn state_count(d: &Diagram) -> u64 {
    assert!(d.n_crossings() <= MAX_STATE_CROSSINGS, "too many crossings for a state");
    1u64 << d.n_crossings()
}

/// Circle sets of all states, indexed by the state's marker bits.
pub fn cube_circles(d: &Diagram) -> Vec<CircleSet> {
    let n = d.n_crossings();
    (0..state_count(d)).into_par_iter().map(|b| resolve(d, State::from_bits(b, n))).collect()
}

/// All enhanced states: states in binary-counter order over PD crossing
/// indices, and within a state, sign masks in counter order.
pub fn enumerate_enhanced(d: &Diagram) -> impl Iterator<Item = EnhancedState> + '_ {
    let n = d.n_crossings();
    (0..state_count(d)).flat_map(move |b| {
        let s = State::from_bits(b, n);
        let c = resolve(d, s).count();
        (0..1u64 << c).map(move |m| EnhancedState::new(d, s, c, m))
    })
}

/// Parallel version of [`enumerate_enhanced`] with the same order.
pub fn enumerate_enhanced_par(d: &Diagram) -> Vec<EnhancedState> {
    let n = d.n_crossings();
    (0..state_count(d))
        .into_par_iter()
        .flat_map_iter(|b| {
            let s = State::from_bits(b, n);
            let c = resolve(d, s).count();
            (0..1u64 << c).map(move |m| EnhancedState::new(d, s, c, m))
        })
        .collect()
}
