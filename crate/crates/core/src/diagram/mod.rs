//! Planar diagrams: PD codes, projection of lattice polygons, and
//! Reidemeister simplification.
//!
//! A crossing stores its four incident edge labels counterclockwise,
//! starting from the incoming under-strand:
//!
//! ```text
//!     3   2
//!      \ /
//!       \      = X[e0, e1, e2, e3]
//!      / \
//!     0   1
//! ```
//!
//! The under-strand runs 0 -> 2. The crossing is positive when the
//! over-strand runs 3 -> 1 and negative when it runs 1 -> 3.

mod pdtext;
mod project;
mod simplify;

pub use project::{project, project_components, ProjectionSeed};
pub use simplify::{reduce_r1_r2, simplify};

use rustc_hash::FxHashMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("invalid PD code: {0}")]
    InvalidPd(String),
    #[error("no generic projection direction found after {0} attempts")]
    NoGenericDirection(usize),
    #[error("diagram is disconnected")]
    DisconnectedDiagram,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn value(self) -> i32 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn flipped(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Crossing {
    pub edges: [u32; 4],
    pub sign: Sign,
}

impl Crossing {
    pub fn new(edges: [u32; 4], sign: Sign) -> Self {
        Self { edges, sign }
    }

    /// Slot where the over-strand enters.
    pub fn over_in(&self) -> u8 {
        match self.sign {
            Sign::Positive => 3,
            Sign::Negative => 1,
        }
    }

    pub fn is_incoming(&self, slot: u8) -> bool {
        slot == 0 || slot == self.over_in()
    }

    /// The same crossing with the other strand on top.
    pub fn switched(&self) -> Crossing {
        let e = self.edges;
        match self.sign {
            Sign::Positive => Crossing::new([e[3], e[0], e[1], e[2]], Sign::Negative),
            Sign::Negative => Crossing::new([e[1], e[2], e[3], e[0]], Sign::Positive),
        }
    }

    /// Slot pairing of the orientation-respecting smoothing.
    pub fn oriented_smoothing(&self) -> [u8; 4] {
        match self.sign {
            // 0 -> 1 and 3 -> 2
            Sign::Positive => [1, 0, 3, 2],
            // 0 -> 3 and 1 -> 2
            Sign::Negative => [3, 2, 1, 0],
        }
    }

    /// Slot pairing of the smoothing that does not respect orientation.
    pub fn unoriented_smoothing(&self) -> [u8; 4] {
        match self.sign {
            Sign::Positive => [3, 2, 1, 0],
            Sign::Negative => [1, 0, 3, 2],
        }
    }
}

/// How a crossing is treated when a diagram is re-assembled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Resolution {
    Keep,
    /// Change which strand is on top.
    Switch,
    /// Delete the crossing, letting both strands pass straight through
    /// (used by Reidemeister I/II removals).
    Pass,
    /// Delete the crossing, joining slots by the given involution.
    Join([u8; 4]),
}

/// Planar diagram of an oriented link.
///
/// Invariants: edge labels are `0..2n`, each appearing exactly twice,
/// once at an incoming and once at an outgoing slot; labels are
/// consecutive along each component. `loops` counts crossingless
/// components.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PdCode {
    crossings: Vec<Crossing>,
    loops: u32,
}

/// One end of an edge: crossing index and slot.
pub type Port = (usize, u8);

impl PdCode {
    pub fn unknot() -> Self {
        Self::unlink(1)
    }

    pub fn unlink(n: u32) -> Self {
        Self { crossings: Vec::new(), loops: n }
    }

    /// Builds a diagram from oriented crossings. Labels may be arbitrary;
    /// they are renumbered along components.
    pub fn from_crossings(crossings: Vec<Crossing>, loops: u32) -> Result<Self, DiagramError> {
        let raw: Vec<[u32; 4]> = crossings.iter().map(|c| c.edges).collect();
        let occ = occurrences(&raw)?;
        for (label, ports) in &occ {
            let ins = ports.iter().filter(|&&(c, s)| crossings[c].is_incoming(s)).count();
            if ins != 1 {
                return Err(DiagramError::InvalidPd(format!(
                    "edge {label} is not oriented consistently"
                )));
            }
        }
        let starts: Vec<Port> = crossings
            .iter()
            .enumerate()
            .flat_map(|(i, c)| [(i, 0u8), (i, c.over_in())])
            .collect();
        let keep = vec![true; crossings.len()];
        let (d, _) = assemble(&raw, &occ, |_, s| (s + 2) % 4, &keep, &starts, loops);
        d.check_planar()?;
        Ok(d)
    }

    /// Builds a diagram from unoriented PD 4-tuples (under-strand on slots
    /// 0/2, slot 0 incoming). Orientation of over-strands is inferred by
    /// walking each component.
    pub fn from_pd_tuples(tuples: &[[u32; 4]], loops: u32) -> Result<Self, DiagramError> {
        let occ = occurrences(tuples)?;
        let mut starts: Vec<Port> = (0..tuples.len()).map(|i| (i, 0u8)).collect();
        starts.extend((0..tuples.len()).map(|i| (i, 1u8)));
        let keep = vec![true; tuples.len()];
        let (d, under_in) = assemble(tuples, &occ, |_, s| (s + 2) % 4, &keep, &starts, loops);
        // every under-strand must be entered at its declared slot 0
        if let Some(i) = under_in.iter().position(|&s| s != 0) {
            return Err(DiagramError::InvalidPd(format!(
                "crossing {i}: under-strand direction contradicts its component"
            )));
        }
        d.check_planar()?;
        Ok(d)
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn free_loops(&self) -> u32 {
        self.loops
    }

    pub fn writhe(&self) -> i32 {
        self.crossings.iter().map(|c| c.sign.value()).sum()
    }

    pub fn n_components(&self) -> usize {
        self.component_ranges().len() + self.loops as usize
    }

    /// `(tail, head)` port of every edge, indexed by label.
    pub fn edge_ends(&self) -> Vec<(Port, Port)> {
        let mut ends = vec![((usize::MAX, 0u8), (usize::MAX, 0u8)); 2 * self.crossings.len()];
        for (i, c) in self.crossings.iter().enumerate() {
            for s in 0..4u8 {
                let e = c.edges[s as usize] as usize;
                if c.is_incoming(s) {
                    ends[e].1 = (i, s);
                } else {
                    ends[e].0 = (i, s);
                }
            }
        }
        ends
    }

    /// Label ranges `[start, end)` of the components that have crossings.
    pub fn component_ranges(&self) -> Vec<(u32, u32)> {
        if self.crossings.is_empty() {
            return Vec::new();
        }
        let ends = self.edge_ends();
        let n = ends.len() as u32;
        let mut out = Vec::new();
        let mut start = 0u32;
        while start < n {
            let mut e = start;
            loop {
                let (c, s) = ends[e as usize].1;
                let next = self.crossings[c].edges[((s + 2) % 4) as usize];
                if next == start {
                    break;
                }
                e = next;
            }
            out.push((start, e + 1));
            start = e + 1;
        }
        out
    }

    /// Component index (among components with crossings) of every label.
    pub fn edge_components(&self) -> Vec<usize> {
        let mut comp = vec![0usize; 2 * self.crossings.len()];
        for (k, (a, b)) in self.component_ranges().into_iter().enumerate() {
            for e in a..b {
                comp[e as usize] = k;
            }
        }
        comp
    }

    /// Re-assembles the diagram after resolving crossings. Orientation is
    /// preserved wherever the resolution allows it.
    pub fn resolve(&self, actions: &[Resolution]) -> PdCode {
        assert_eq!(actions.len(), self.crossings.len());
        let crossings: Vec<Crossing> = self
            .crossings
            .iter()
            .zip(actions)
            .map(|(c, a)| if *a == Resolution::Switch { c.switched() } else { *c })
            .collect();
        let raw: Vec<[u32; 4]> = crossings.iter().map(|c| c.edges).collect();
        let occ = occurrences(&raw).expect("valid diagram");
        let keep: Vec<bool> = actions
            .iter()
            .map(|a| matches!(a, Resolution::Keep | Resolution::Switch))
            .collect();
        let partner = |c: usize, s: u8| match actions[c] {
            Resolution::Keep | Resolution::Switch | Resolution::Pass => (s + 2) % 4,
            Resolution::Join(p) => p[s as usize],
        };
        let mut starts: Vec<Port> = Vec::with_capacity(4 * crossings.len());
        for (i, c) in crossings.iter().enumerate() {
            if keep[i] {
                starts.push((i, 0));
                starts.push((i, c.over_in()));
            }
        }
        assemble(&raw, &occ, partner, &keep, &starts, self.loops).0
    }

    pub fn switch_crossing(&self, i: usize) -> PdCode {
        let mut actions = vec![Resolution::Keep; self.crossings.len()];
        actions[i] = Resolution::Switch;
        self.resolve(&actions)
    }

    pub fn smooth_crossing(&self, i: usize, pairing: [u8; 4]) -> PdCode {
        let mut actions = vec![Resolution::Keep; self.crossings.len()];
        actions[i] = Resolution::Join(pairing);
        self.resolve(&actions)
    }

    /// Mirror image: every crossing switched.
    pub fn mirror(&self) -> PdCode {
        let crossings = self.crossings.iter().map(|c| c.switched()).collect();
        PdCode { crossings, loops: self.loops }
    }

    /// Reverses the orientation of every component.
    pub fn reversed(&self) -> PdCode {
        let crossings = self
            .crossings
            .iter()
            .map(|c| {
                let e = c.edges;
                // under-strand now enters at old slot 2; rotate by two
                Crossing::new([e[2], e[3], e[0], e[1]], c.sign)
            })
            .collect::<Vec<_>>();
        PdCode::from_crossings(crossings, self.loops).expect("reversal keeps validity")
    }

    /// Reverses the orientation of one component (indexed as in
    /// [`PdCode::component_ranges`]).
    pub fn reverse_component(&self, k: usize) -> PdCode {
        let comp = self.edge_components();
        let crossings = self
            .crossings
            .iter()
            .map(|c| {
                let e = c.edges;
                let under = comp[e[0] as usize] == k;
                let over = comp[e[c.over_in() as usize] as usize] == k;
                let edges = if under { [e[2], e[3], e[0], e[1]] } else { e };
                let sign = if under != over { c.sign.flipped() } else { c.sign };
                Crossing::new(edges, sign)
            })
            .collect();
        PdCode::from_crossings(crossings, self.loops).expect("reversal keeps validity")
    }

    /// Disjoint union (split diagram).
    pub fn disjoint_union(&self, other: &PdCode) -> PdCode {
        let shift = 2 * self.crossings.len() as u32;
        let mut crossings = self.crossings.clone();
        crossings.extend(other.crossings.iter().map(|c| {
            let e = c.edges;
            Crossing::new([e[0] + shift, e[1] + shift, e[2] + shift, e[3] + shift], c.sign)
        }));
        PdCode::from_crossings(crossings, self.loops + other.loops).expect("union of valid diagrams")
    }

    /// Connected sum of two knot diagrams, cutting both at their label-0 edge.
    pub fn connected_sum(&self, other: &PdCode) -> PdCode {
        if self.crossings.is_empty() {
            return other.clone();
        }
        if other.crossings.is_empty() {
            return self.clone();
        }
        let n1 = 2 * self.crossings.len() as u32;
        let n2 = 2 * other.crossings.len() as u32;
        let big = n1 + n2;
        // edge 0 of self becomes two edges: tail part keeps label 0, head part
        // gets `big`; edge 0 of other likewise gets `n1` and `big + 1`.
        let ends1 = self.edge_ends();
        let ends2 = other.edge_ends();
        let mut crossings: Vec<Crossing> = self.crossings.clone();
        let (h1c, h1s) = ends1[0].1;
        crossings[h1c].edges[h1s as usize] = big;
        let off = crossings.len();
        for c in &other.crossings {
            let e = c.edges;
            crossings.push(Crossing::new([e[0] + n1, e[1] + n1, e[2] + n1, e[3] + n1], c.sign));
        }
        let (h2c, h2s) = ends2[0].1;
        crossings[off + h2c].edges[h2s as usize] = big + 1;
        // tail of self's edge 0 feeds into head of other's edge 0 and vice versa
        let (t2c, t2s) = ends2[0].0;
        crossings[off + t2c].edges[t2s as usize] = big;
        let (t1c, t1s) = ends1[0].0;
        crossings[t1c].edges[t1s as usize] = big + 1;
        PdCode::from_crossings(crossings, self.loops + other.loops).expect("connected sum is valid")
    }

    /// Faces of the underlying 4-valent plane graph, each given by the
    /// corners it touches: `(crossing, k)` is the corner between slots
    /// `k` and `k+1`.
    pub fn faces(&self) -> Vec<Vec<Port>> {
        let n = self.crossings.len();
        let occ = self.port_partner();
        let mut seen = vec![[false; 4]; n];
        let mut faces = Vec::new();
        for c in 0..n {
            for s in 0..4u8 {
                if seen[c][s as usize] {
                    continue;
                }
                let mut face = Vec::new();
                let (mut cc, mut ss) = (c, s);
                while !seen[cc][ss as usize] {
                    seen[cc][ss as usize] = true;
                    let (nc, ns) = occ[cc][ss as usize];
                    let turn = (ns + 3) % 4;
                    face.push((nc, turn));
                    cc = nc;
                    ss = turn;
                }
                faces.push(face);
            }
        }
        faces
    }

    /// For each port, the port at the other end of its edge.
    pub fn port_partner(&self) -> Vec<[Port; 4]> {
        let ends = self.edge_ends();
        let mut out = vec![[(0usize, 0u8); 4]; self.crossings.len()];
        for (tail, head) in ends {
            out[tail.0][tail.1 as usize] = head;
            out[head.0][head.1 as usize] = tail;
        }
        out
    }

    /// Whether the crossings form a single connected plane graph.
    pub fn is_connected_graph(&self) -> bool {
        let n = self.crossings.len();
        if n == 0 {
            return true;
        }
        let partner = self.port_partner();
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(c) = stack.pop() {
            for s in 0..4 {
                let (nc, _) = partner[c][s];
                if !seen[nc] {
                    seen[nc] = true;
                    stack.push(nc);
                }
            }
        }
        seen.iter().all(|&b| b)
    }

    /// Connected pieces of the crossing graph, without free loops.
    pub fn split_pieces(&self) -> Vec<PdCode> {
        let n = self.crossings.len();
        let partner = self.port_partner();
        let mut piece = vec![usize::MAX; n];
        let mut out = Vec::new();
        for start in 0..n {
            if piece[start] != usize::MAX {
                continue;
            }
            let mut members = vec![start];
            piece[start] = out.len();
            let mut i = 0;
            while i < members.len() {
                let c = members[i];
                i += 1;
                for s in 0..4 {
                    let (nc, _) = partner[c][s];
                    if piece[nc] == usize::MAX {
                        piece[nc] = out.len();
                        members.push(nc);
                    }
                }
            }
            members.sort_unstable();
            let cs = members.iter().map(|&c| self.crossings[c]).collect();
            out.push(PdCode::from_crossings(cs, 0).expect("piece of a valid diagram"));
        }
        out
    }

    /// Euler-characteristic check on each connected piece of the graph.
    fn check_planar(&self) -> Result<(), DiagramError> {
        let n = self.crossings.len();
        if n == 0 {
            return Ok(());
        }
        let partner = self.port_partner();
        let mut piece = vec![usize::MAX; n];
        let mut pieces = 0;
        for start in 0..n {
            if piece[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            piece[start] = pieces;
            while let Some(c) = stack.pop() {
                for s in 0..4 {
                    let (nc, _) = partner[c][s];
                    if piece[nc] == usize::MAX {
                        piece[nc] = pieces;
                        stack.push(nc);
                    }
                }
            }
            pieces += 1;
        }
        let mut v = vec![0i64; pieces];
        let mut f = vec![0i64; pieces];
        for c in 0..n {
            v[piece[c]] += 1;
        }
        for face in self.faces() {
            f[piece[face[0].0]] += 1;
        }
        for k in 0..pieces {
            // V - E + F = 2 with E = 2V
            if f[k] - v[k] != 2 {
                return Err(DiagramError::InvalidPd("diagram is not planar".into()));
            }
        }
        Ok(())
    }

    pub(crate) fn from_parts_unchecked(crossings: Vec<Crossing>, loops: u32) -> PdCode {
        PdCode { crossings, loops }
    }
}

type Occurrences = FxHashMap<u32, Vec<Port>>;

fn occurrences(raw: &[[u32; 4]]) -> Result<Occurrences, DiagramError> {
    let mut occ: Occurrences = FxHashMap::default();
    for (i, c) in raw.iter().enumerate() {
        for s in 0..4u8 {
            occ.entry(c[s as usize]).or_default().push((i, s));
        }
    }
    for (label, ports) in &occ {
        if ports.len() != 2 {
            return Err(DiagramError::InvalidPd(format!(
                "edge {label} appears {} times",
                ports.len()
            )));
        }
    }
    Ok(occ)
}

/// Walks every strand of a (partially resolved) diagram and emits a fresh
/// oriented diagram with labels consecutive along components.
///
/// `partner(c, s)` gives the exit slot for a strand arriving at slot `s`
/// of crossing `c`; `keep[c]` says whether `c` survives. Components are
/// oriented by the first start port that reaches them. Also returns the
/// (old) slot at which each kept crossing's under-strand is entered.
fn assemble(
    raw: &[[u32; 4]],
    occ: &Occurrences,
    partner: impl Fn(usize, u8) -> u8,
    keep: &[bool],
    starts: &[Port],
    loops: u32,
) -> (PdCode, Vec<u8>) {
    let n = raw.len();
    let mut new_index = vec![usize::MAX; n];
    let mut m = 0;
    for i in 0..n {
        if keep[i] {
            new_index[i] = m;
            m += 1;
        }
    }
    let other_end = |c: usize, s: u8| -> Port {
        let ports = &occ[&raw[c][s as usize]];
        if ports[0] == (c, s) {
            ports[1]
        } else {
            ports[0]
        }
    };
    let mut visited = vec![[false; 4]; n];
    let mut labels = vec![[u32::MAX; 4]; m];
    let mut under_arrival = vec![u8::MAX; m];
    let mut over_arrival = vec![u8::MAX; m];
    let mut next_label = 0u32;

    for &(c0, s0) in starts {
        if visited[c0][s0 as usize] {
            continue;
        }
        let mut arrive = (c0, s0);
        let mut incoming: Option<u32> = None;
        loop {
            let (c, s) = arrive;
            let t = partner(c, s);
            visited[c][s as usize] = true;
            visited[c][t as usize] = true;
            if keep[c] {
                let k = new_index[c];
                if let Some(l) = incoming {
                    labels[k][s as usize] = l;
                }
                if s % 2 == 0 {
                    under_arrival[k] = s;
                } else {
                    over_arrival[k] = s;
                }
                labels[k][t as usize] = next_label;
                incoming = Some(next_label);
                next_label += 1;
            }
            let next = other_end(c, t);
            if next == (c0, s0) {
                labels[new_index[c0]][s0 as usize] = incoming.expect("start is kept");
                break;
            }
            arrive = next;
        }
    }

    let mut extra_loops = 0;
    for c in 0..n {
        for s in 0..4u8 {
            if visited[c][s as usize] {
                continue;
            }
            let mut arrive = (c, s);
            loop {
                let (cc, ss) = arrive;
                let t = partner(cc, ss);
                visited[cc][ss as usize] = true;
                visited[cc][t as usize] = true;
                let next = other_end(cc, t);
                if next == (c, s) {
                    break;
                }
                arrive = next;
            }
            extra_loops += 1;
        }
    }

    let crossings = (0..m)
        .map(|k| {
            let r = under_arrival[k];
            let o = over_arrival[k];
            debug_assert!(r < 4 && o < 4, "every kept crossing is traversed twice");
            let l = labels[k];
            let edges = [
                l[r as usize],
                l[((1 + r) % 4) as usize],
                l[((2 + r) % 4) as usize],
                l[((3 + r) % 4) as usize],
            ];
            let sign = if (o + 4 - r) % 4 == 3 { Sign::Positive } else { Sign::Negative };
            Crossing::new(edges, sign)
        })
        .collect();
    (PdCode { crossings, loops: loops + extra_loops }, under_arrival)
}

impl PdCode {
    /// Closure of the two-strand braid `sigma_1^n`: the torus knot or link
    /// `T(2, n)`, with both strands of a link running the same way.
    pub fn torus_2(n: i32) -> PdCode {
        assert!(n != 0, "T(2,0) is the unlink");
        let m = n.unsigned_abs();
        // strand labels by level; the first strand starts on the left and
        // changes side at every crossing
        let side = |level: u32, right: bool| -> u32 {
            let level = level % m;
            if (level % 2 == 0) != right {
                1 + level
            } else {
                m + 1 + level
            }
        };
        let tuples: Vec<[u32; 4]> =
            (1..=m).map(|i| [side(i - 1, true), side(i, true), side(i, false), side(i - 1, false)]).collect();
        let d = PdCode::from_pd_tuples(&tuples, 0).expect("braid closure is a valid diagram");
        if n > 0 {
            d
        } else {
            d.mirror()
        }
    }
}


#[cfg(test)]
mod tests {
    use super::samples::*;
    use super::*;

    #[test]
    fn trefoil_structure() {
        let t = right_trefoil();
        assert_eq!(t.crossing_count(), 3);
        assert_eq!(t.n_components(), 1);
        assert_eq!(t.writhe(), 3);
        assert_eq!(t.faces().len(), 5);
        assert_eq!(t.mirror().writhe(), -3);
    }

    #[test]
    fn figure_eight_writhe_zero() {
        assert_eq!(figure_eight().writhe(), 0);
    }

    #[test]
    fn smoothing_trefoil_gives_hopf_link() {
        let t = right_trefoil();
        let c = t.crossings()[0];
        let s = t.smooth_crossing(0, c.oriented_smoothing());
        assert_eq!(s.crossing_count(), 2);
        assert_eq!(s.n_components(), 2);
        assert_eq!(s.writhe(), 2);
        let u = t.smooth_crossing(0, c.unoriented_smoothing());
        assert_eq!(u.n_components(), 1);
    }

    #[test]
    fn passing_a_kink_leaves_a_loop() {
        let k = kinked_unknot();
        let d = k.resolve(&[Resolution::Pass]);
        assert_eq!(d.crossing_count(), 0);
        assert_eq!(d.free_loops(), 1);
    }

    #[test]
    fn rejects_bad_labels() {
        assert!(PdCode::from_pd_tuples(&[[1, 2, 3, 4]], 0).is_err());
    }

    #[test]
    fn connected_sum_of_trefoils() {
        let t = right_trefoil();
        let g = t.connected_sum(&t);
        assert_eq!(g.crossing_count(), 6);
        assert_eq!(g.n_components(), 1);
        assert_eq!(g.writhe(), 6);
        assert!(g.is_connected_graph());
        let s = t.disjoint_union(&t);
        assert_eq!(s.n_components(), 2);
        assert!(!s.is_connected_graph());
    }
}
