//! Oriented link diagrams given as planar-diagram (PD) codes.
//!
//! A crossing `X(a,b,c,d)` lists its four edge labels counterclockwise,
//! starting at the incoming under-strand, so the under-strand runs `a → c`
//! and the over-strand joins `b` and `d`. The over-strand direction is not
//! part of the code; it is recovered by walking each link component and
//! propagating the orientation fixed by the under-strands it passes through.
//! Components that never pass under anything fall back to the edge-label
//! succession rule (label `e` flows into `e + 1`, cyclically).
//!
//! A crossing is positive when its over-strand runs `d → b`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Crossing {
    edges: [u32; 4],
    sign: Sign,
}

impl Crossing {
    /// Edge labels counterclockwise from the incoming under-strand.
    pub fn edges(&self) -> [u32; 4] {
        self.edges
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn under_in(&self) -> u32 {
        self.edges[0]
    }

    pub fn under_out(&self) -> u32 {
        self.edges[2]
    }

    pub fn over_in(&self) -> u32 {
        match self.sign {
            Sign::Positive => self.edges[3],
            Sign::Negative => self.edges[1],
        }
    }

    pub fn over_out(&self) -> u32 {
        match self.sign {
            Sign::Positive => self.edges[1],
            Sign::Negative => self.edges[3],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("malformed PD term at byte {pos}: {msg}")]
    MalformedTerm { pos: usize, msg: String },
    #[error("edge label {label} appears {count} time(s); labels must be 1..={n_edges}, each exactly twice")]
    EdgeDegree { label: u32, count: usize, n_edges: usize },
    #[error("no consistent orientation for the component through edge {label}")]
    OrientationConflict { label: u32 },
    #[error("PD code is not planar: a connected piece with {crossings} crossing(s) has {faces} face(s), expected {}", crossings + 2)]
    NonPlanar { crossings: usize, faces: usize },
}

/// A validated oriented link diagram.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Diagram {
    crossings: Vec<Crossing>,
    n_edges: usize,
    components: usize,
    free_loops: usize,
}

impl Diagram {
    /// The crossingless unknot.
    pub fn unknot() -> Diagram {
        Diagram { crossings: Vec::new(), n_edges: 0, components: 1, free_loops: 1 }
    }

    /// Validates raw crossing tuples (each read counterclockwise from the
    /// incoming under-strand) plus a number of crossingless loops.
    pub fn from_tuples(tuples: &[[u32; 4]], free_loops: usize) -> Result<Diagram, DiagramError> {
        if tuples.is_empty() && free_loops == 0 {
            return Err(DiagramError::MalformedTerm { pos: 0, msg: "empty diagram".into() });
        }
        let n_edges = 2 * tuples.len();
        check_degrees(tuples, n_edges)?;

        let darts = DartTable::new(tuples, n_edges);
        let (head, cycles) = orient(tuples, &darts)?;
        check_planar(tuples, &darts)?;

        let crossings = tuples
            .iter()
            .enumerate()
            .map(|(x, &edges)| {
                // Over-strand arriving at position 3 means it runs d → b.
                let sign = if head[4 * x + 3] { Sign::Positive } else { Sign::Negative };
                Crossing { edges, sign }
            })
            .collect();

        Ok(Diagram { crossings, n_edges, components: cycles + free_loops, free_loops })
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn n_crossings(&self) -> usize {
        self.crossings.len()
    }

    pub fn n_edges(&self) -> usize {
        self.n_edges
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn free_loops(&self) -> usize {
        self.free_loops
    }

    pub fn is_knot(&self) -> bool {
        self.components == 1
    }

    pub fn writhe(&self) -> i64 {
        self.crossings.iter().map(|c| c.sign.value()).sum()
    }

    pub fn n_positive(&self) -> usize {
        self.crossings.iter().filter(|c| c.sign == Sign::Positive).count()
    }

    pub fn n_negative(&self) -> usize {
        self.n_crossings() - self.n_positive()
    }

    /// Swaps over and under at every crossing. The tuple is rotated so that
    /// it again starts at the (new) incoming under-strand.
    pub fn mirror(&self) -> Diagram {
        let crossings = self
            .crossings
            .iter()
            .map(|c| {
                let [a, b, cc, d] = c.edges;
                let edges = match c.sign {
                    Sign::Positive => [d, a, b, cc],
                    Sign::Negative => [b, cc, d, a],
                };
                Crossing { edges, sign: c.sign.flip() }
            })
            .collect();
        Diagram { crossings, ..self.clone() }
    }

    pub fn to_pd(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for c in &self.crossings {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            let [a, b, cc, d] = c.edges;
            write!(f, "X({a},{b},{cc},{d})")?;
        }
        for _ in 0..self.free_loops {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            f.write_str("U")?;
        }
        Ok(())
    }
}

impl FromStr for Diagram {
    type Err = DiagramError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_pd(s)
    }
}

/// Parses whitespace-separated `X(a,b,c,d)` terms and `U` terms (one per
/// crossingless unknotted component). Square brackets are accepted in place
/// of parentheses, as are comma separators between terms.
pub fn parse_pd(text: &str) -> Result<Diagram, DiagramError> {
    let mut cur = Cursor { s: text.as_bytes(), pos: 0 };
    let mut tuples = Vec::new();
    let mut loops = 0;
    loop {
        cur.skip_separators();
        match cur.peek() {
            None => break,
            Some(b'X') => {
                cur.pos += 1;
                tuples.push(cur.crossing()?);
            }
            Some(b'U') => {
                cur.pos += 1;
                cur.skip_ws();
                // tolerate `U()` / `U[]`
                if let Some(open @ (b'(' | b'[')) = cur.peek() {
                    cur.pos += 1;
                    cur.skip_ws();
                    cur.expect(closing(open))?;
                }
                loops += 1;
            }
            Some(c) => {
                return Err(cur.error(format!("unexpected character {:?}", c as char)));
            }
        }
    }
    Diagram::from_tuples(&tuples, loops)
}

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

fn closing(open: u8) -> u8 {
    if open == b'(' {
        b')'
    } else {
        b']'
    }
}

impl Cursor<'_> {
    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn error(&self, msg: String) -> DiagramError {
        DiagramError::MalformedTerm { pos: self.pos, msg }
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn skip_separators(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace() || c == b',') {
            self.pos += 1;
        }
    }

    fn expect(&mut self, want: u8) -> Result<(), DiagramError> {
        match self.peek() {
            Some(c) if c == want => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => Err(self.error(format!("expected {:?}, found {:?}", want as char, c as char))),
            None => Err(self.error(format!("expected {:?}, found end of input", want as char))),
        }
    }

    fn number(&mut self) -> Result<u32, DiagramError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an edge label".into()));
        }
        let digits = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii digits");
        digits
            .parse()
            .map_err(|_| DiagramError::MalformedTerm { pos: start, msg: format!("edge label {digits} out of range") })
    }

    fn crossing(&mut self) -> Result<[u32; 4], DiagramError> {
        self.skip_ws();
        let open = match self.peek() {
            Some(c @ (b'(' | b'[')) => c,
            _ => return Err(self.error("expected '(' after X".into())),
        };
        self.pos += 1;
        let mut labels = Vec::with_capacity(4);
        loop {
            self.skip_ws();
            labels.push(self.number()?);
            self.skip_ws();
            match self.peek() {
                Some(b',') => self.pos += 1,
                Some(c) if c == closing(open) => {
                    self.pos += 1;
                    break;
                }
                Some(c) => return Err(self.error(format!("unexpected character {:?} in crossing", c as char))),
                None => return Err(self.error("unterminated crossing".into())),
            }
        }
        <[u32; 4]>::try_from(labels.as_slice()).map_err(|_| DiagramError::MalformedTerm {
            pos: self.pos,
            msg: format!("a crossing needs 4 edge labels, found {}", labels.len()),
        })
    }
}

fn check_degrees(tuples: &[[u32; 4]], n_edges: usize) -> Result<(), DiagramError> {
    let mut count = vec![0usize; n_edges + 1];
    for &l in tuples.iter().flatten() {
        let l_us = l as usize;
        if l == 0 || l_us > n_edges {
            let count = tuples.iter().flatten().filter(|&&m| m == l).count();
            return Err(DiagramError::EdgeDegree { label: l, count, n_edges });
        }
        count[l_us] += 1;
    }
    match (1..=n_edges).find(|&l| count[l] != 2) {
        Some(l) => Err(DiagramError::EdgeDegree { label: l as u32, count: count[l], n_edges }),
        None => Ok(()),
    }
}

/// Dart `4x + p` is position `p` of crossing `x`.
struct DartTable {
    label: Vec<u32>,
    partner: Vec<usize>,
}

impl DartTable {
    fn new(tuples: &[[u32; 4]], n_edges: usize) -> DartTable {
        let label: Vec<u32> = tuples.iter().flatten().copied().collect();
        let mut first = vec![usize::MAX; n_edges + 1];
        let mut partner = vec![usize::MAX; label.len()];
        for (d, &l) in label.iter().enumerate() {
            let f = &mut first[l as usize];
            if *f == usize::MAX {
                *f = d;
            } else {
                partner[d] = *f;
                partner[*f] = d;
            }
        }
        DartTable { label, partner }
    }

    fn through(d: usize) -> usize {
        (d & !3) | ((d + 2) & 3)
    }
}

/// Returns, per dart, whether the oriented edge arrives there, and the
/// number of link components that pass through crossings.
fn orient(tuples: &[[u32; 4]], darts: &DartTable) -> Result<(Vec<bool>, usize), DiagramError> {
    let n_darts = 4 * tuples.len();
    let mut head = vec![false; n_darts];
    let mut seen = vec![false; n_darts];
    let mut cycles = 0;

    for start in 0..n_darts {
        if seen[start] {
            continue;
        }
        cycles += 1;
        // Walk: arrive at `arr`, pass through the crossing, leave along the
        // next edge and arrive at its far end.
        let mut arrivals = Vec::new();
        let mut arr = start;
        loop {
            arrivals.push(arr);
            let exit = DartTable::through(arr);
            seen[arr] = true;
            seen[exit] = true;
            arr = darts.partner[exit];
            if arr == start {
                break;
            }
        }

        let forward_votes = arrivals.iter().any(|&d| d % 4 == 0);
        let backward_votes = arrivals.iter().any(|&d| d % 4 == 2);
        let forward = match (forward_votes, backward_votes) {
            (true, true) => {
                return Err(DiagramError::OrientationConflict { label: darts.label[start] });
            }
            (true, false) => true,
            (false, true) => false,
            (false, false) => label_succession_agrees(&arrivals, darts),
        };
        for &a in &arrivals {
            let exit = DartTable::through(a);
            head[a] = forward;
            head[exit] = !forward;
        }
    }
    Ok((head, cycles))
}

/// For components that only ever pass over: true if walking in the recorded
/// direction follows increasing labels at least as often as decreasing ones.
fn label_succession_agrees(arrivals: &[usize], darts: &DartTable) -> bool {
    let labels: Vec<u32> = arrivals.iter().map(|&d| darts.label[d]).collect();
    let lo = *labels.iter().min().expect("nonempty walk");
    let hi = *labels.iter().max().expect("nonempty walk");
    let succ = |a: u32, b: u32| b == a + 1 || (a == hi && b == lo);
    let k = labels.len();
    let (mut fwd, mut bwd) = (0, 0);
    for i in 0..k {
        let (a, b) = (labels[i], labels[(i + 1) % k]);
        if succ(a, b) {
            fwd += 1;
        }
        if succ(b, a) {
            bwd += 1;
        }
    }
    fwd >= bwd
}

fn check_planar(tuples: &[[u32; 4]], darts: &DartTable) -> Result<(), DiagramError> {
    let n = tuples.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for d in 0..4 * n {
        let (a, b) = (find(&mut parent, d / 4), find(&mut parent, darts.partner[d] / 4));
        if a != b {
            parent[a] = b;
        }
    }

    let mut crossings = vec![0usize; n];
    let mut faces = vec![0usize; n];
    for x in 0..n {
        let r = find(&mut parent, x);
        crossings[r] += 1;
    }
    let mut seen = vec![false; 4 * n];
    for start in 0..4 * n {
        if seen[start] {
            continue;
        }
        let mut d = start;
        while !seen[d] {
            seen[d] = true;
            let p = darts.partner[d];
            d = (p & !3) | ((p + 1) & 3);
        }
        let r = find(&mut parent, start / 4);
        faces[r] += 1;
    }
    for r in 0..n {
        if crossings[r] > 0 && faces[r] != crossings[r] + 2 {
            return Err(DiagramError::NonPlanar { crossings: crossings[r], faces: faces[r] });
        }
    }
    Ok(())
}
