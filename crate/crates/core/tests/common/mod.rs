#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use khv_core::diagram::parse_pd;
use khv_core::Diagram;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// PD code of the closure of a braid on `strands` strands. Generator `k > 0`
/// is `σ_k`, `k < 0` its inverse. Strands no crossing touches become `U`.
pub fn braid_closure_pd(word: &[i32], strands: usize) -> String {
    let mut next = 0u32;
    let mut fresh = || {
        next += 1;
        next
    };
    let start: Vec<u32> = (0..strands).map(|_| fresh()).collect();
    let mut cur = start.clone();
    let mut xs: Vec<[u32; 4]> = Vec::new();
    // segment label -> next segment along the strand
    let mut succ: BTreeMap<u32, u32> = BTreeMap::new();
    for &g in word {
        let k = g.unsigned_abs() as usize - 1;
        let (a, b) = (cur[k], cur[k + 1]);
        let (na, nb) = (fresh(), fresh());
        if g > 0 {
            xs.push([b, nb, na, a]);
        } else {
            xs.push([a, b, nb, na]);
        }
        succ.insert(b, na);
        succ.insert(a, nb);
        cur[k] = na;
        cur[k + 1] = nb;
    }
    let alias: BTreeMap<u32, u32> = cur.iter().zip(&start).map(|(&c, &s)| (c, s)).collect();
    let al = |e: u32| *alias.get(&e).unwrap_or(&e);
    let xs: Vec<[u32; 4]> = xs.iter().map(|x| x.map(al)).collect();
    let succ: BTreeMap<u32, u32> = succ.into_iter().map(|(k, v)| (al(k), al(v))).collect();

    let used: BTreeSet<u32> = xs.iter().flatten().copied().collect();
    let free = start.iter().filter(|s| !used.contains(s)).count();
    let mut relabel: BTreeMap<u32, u32> = BTreeMap::new();
    for &e0 in &used {
        let mut e = e0;
        while !relabel.contains_key(&e) {
            let n = relabel.len() as u32 + 1;
            relabel.insert(e, n);
            e = succ[&e];
        }
    }
    let mut parts: Vec<String> = xs
        .iter()
        .map(|x| {
            let [a, b, c, d] = x.map(|e| relabel[&e]);
            format!("X({a},{b},{c},{d})")
        })
        .collect();
    parts.extend(std::iter::repeat_n("U".to_string(), free));
    parts.join(" ")
}

pub fn braid_closure(word: &[i32], strands: usize) -> Diagram {
    parse_pd(&braid_closure_pd(word, strands)).expect("braid closures are valid diagrams")
}

/// A random braid closure with at most `max_crossings` crossings.
pub fn random_braid(rng: &mut StdRng, max_crossings: usize) -> (Vec<i32>, usize) {
    let strands = rng.gen_range(1..=4usize);
    let len = if strands == 1 { 0 } else { rng.gen_range(0..=max_crossings) };
    let word = (0..len)
        .map(|_| {
            let k = rng.gen_range(1..strands as i32);
            if rng.gen_bool(0.5) {
                k
            } else {
                -k
            }
        })
        .collect();
    (word, strands)
}

pub fn random_diagrams(seed: u64, count: usize, max_crossings: usize) -> Vec<(String, Diagram)> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let (word, strands) = random_braid(&mut rng, max_crossings);
            let pd = braid_closure_pd(&word, strands);
            let d = parse_pd(&pd).unwrap_or_else(|e| panic!("{pd}: {e}"));
            (pd, d)
        })
        .collect()
}

pub const RIGHT_TREFOIL: &str = "X(4,2,5,1) X(6,4,1,3) X(2,6,3,5)";
pub const FIGURE_EIGHT: &str = "X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)";
pub const HOPF: &str = "X(3,2,4,1) X(2,3,1,4)";
