//! Clopen subsets of Cantor space as canonical sets of binary-tree nodes.
//!
//! A node is a finite binary string; it denotes the basic clopen set of all
//! infinite sequences extending it. A [`NodeSet`] is canonical when no node is
//! a prefix of another and no two siblings are both present, so structural
//! equality coincides with set equality.

use std::cmp::Ordering;
use std::fmt;

use rand::Rng;

use crate::rational::{dyadic, Rational};

pub const MAX_DEPTH: u8 = 60;

/// A binary string of length `depth`; the first symbol is the most
/// significant of the low `depth` bits of `path`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Node {
    depth: u8,
    path: u64,
}

impl Node {
    pub const ROOT: Node = Node { depth: 0, path: 0 };

    pub fn new(depth: u8, path: u64) -> Option<Node> {
        if depth > MAX_DEPTH || (depth < 64 && path >> depth != 0) {
            return None;
        }
        Some(Node { depth, path })
    }

    pub fn depth(self) -> u8 {
        self.depth
    }

    pub fn path(self) -> u64 {
        self.path
    }

    pub fn child(self, bit: u8) -> Node {
        debug_assert!(self.depth < MAX_DEPTH);
        Node {
            depth: self.depth + 1,
            path: (self.path << 1) | u64::from(bit & 1),
        }
    }

    pub fn parent(self) -> Option<Node> {
        (self.depth > 0).then(|| Node {
            depth: self.depth - 1,
            path: self.path >> 1,
        })
    }

    fn is_sibling_of(self, other: Node) -> bool {
        self.depth == other.depth && self.depth > 0 && self.path ^ other.path == 1
    }

    /// Prefix-or-equal.
    pub fn is_prefix_of(self, other: Node) -> bool {
        self.depth <= other.depth && other.path >> (other.depth - self.depth) == self.path
    }

    /// Lebesgue measure of the basic clopen set.
    pub fn measure(self) -> Rational {
        dyadic(u32::from(self.depth))
    }

    pub fn parse(text: &str) -> Option<Node> {
        if text == "e" || text == "ε" || text.is_empty() {
            return Some(Node::ROOT);
        }
        if text.len() > MAX_DEPTH as usize {
            return None;
        }
        let mut node = Node::ROOT;
        for c in text.chars() {
            node = node.child(match c {
                '0' => 0,
                '1' => 1,
                _ => return None,
            });
        }
        Some(node)
    }
}

impl Ord for Node {
    /// Lexicographic order on strings; a prefix sorts before its extensions.
    fn cmp(&self, other: &Self) -> Ordering {
        let d = self.depth.min(other.depth);
        let a = self.path >> (self.depth - d);
        let b = other.path >> (other.depth - d);
        a.cmp(&b).then(self.depth.cmp(&other.depth))
    }
}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.depth == 0 {
            return f.write_str("e");
        }
        for i in (0..self.depth).rev() {
            f.write_str(if self.path >> i & 1 == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Canonical finite union of basic clopen sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct NodeSet(Vec<Node>);

impl NodeSet {
    pub fn empty() -> Self {
        NodeSet(Vec::new())
    }

    pub fn full() -> Self {
        NodeSet(vec![Node::ROOT])
    }

    pub fn from_nodes(nodes: impl IntoIterator<Item = Node>) -> Self {
        NodeSet(canonicalize(nodes.into_iter().collect()))
    }

    pub fn single(node: Node) -> Self {
        NodeSet(vec![node])
    }

    pub fn nodes(&self) -> &[Node] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.0 == [Node::ROOT]
    }

    pub fn max_depth(&self) -> u8 {
        self.0.iter().map(|n| n.depth).max().unwrap_or(0)
    }

    pub fn join(&self, other: &NodeSet) -> NodeSet {
        let mut all = Vec::with_capacity(self.0.len() + other.0.len());
        all.extend_from_slice(&self.0);
        all.extend_from_slice(&other.0);
        NodeSet(canonicalize(all))
    }

    pub fn meet(&self, other: &NodeSet) -> NodeSet {
        let mut out = Vec::new();
        for &x in &self.0 {
            for &y in &other.0 {
                if x.is_prefix_of(y) {
                    out.push(y);
                } else if y.is_prefix_of(x) {
                    out.push(x);
                }
            }
        }
        NodeSet(canonicalize(out))
    }

    pub fn complement(&self) -> NodeSet {
        let mut out = Vec::new();
        complement_under(Node::ROOT, &self.0, &mut out);
        NodeSet(canonicalize(out))
    }

    pub fn symdiff(&self, other: &NodeSet) -> NodeSet {
        self.meet(&other.complement())
            .join(&other.meet(&self.complement()))
    }

    pub fn leq(&self, other: &NodeSet) -> bool {
        // canonical form: a node covered by `other` has an ancestor-or-self in it
        self.0
            .iter()
            .all(|&x| other.0.iter().any(|&y| y.is_prefix_of(x)))
    }

    pub fn is_disjoint(&self, other: &NodeSet) -> bool {
        self.0.iter().all(|&x| {
            other
                .0
                .iter()
                .all(|&y| !x.is_prefix_of(y) && !y.is_prefix_of(x))
        })
    }

    pub fn lebesgue(&self) -> Rational {
        self.0.iter().map(|n| n.measure()).sum()
    }

    /// The same set written as nodes of depth at least `depth`. Not canonical;
    /// used to expose finer decompositions.
    pub fn refine_to(&self, depth: u8) -> Vec<Node> {
        let mut out = Vec::new();
        for &n in &self.0 {
            if n.depth >= depth {
                out.push(n);
            } else {
                let extra = depth - n.depth;
                for tail in 0..(1u64 << extra) {
                    out.push(Node {
                        depth,
                        path: (n.path << extra) | tail,
                    });
                }
            }
        }
        out
    }

    /// Uniformly random union of depth-`depth` nodes (`depth <= 12`).
    pub fn random<R: Rng + ?Sized>(rng: &mut R, depth: u8) -> NodeSet {
        let depth = depth.min(12);
        let count = 1u64 << depth;
        let nodes = (0..count)
            .filter(|_| rng.gen::<bool>())
            .map(|path| Node { depth, path });
        NodeSet::from_nodes(nodes)
    }
}

impl fmt::Display for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{n}")?;
        }
        f.write_str("}")
    }
}

fn complement_under(prefix: Node, nodes: &[Node], out: &mut Vec<Node>) {
    if nodes.is_empty() {
        out.push(prefix);
        return;
    }
    if nodes[0] == prefix {
        return;
    }
    let left = prefix.child(0);
    let split = nodes.partition_point(|n| left.is_prefix_of(*n));
    complement_under(left, &nodes[..split], out);
    complement_under(prefix.child(1), &nodes[split..], out);
}

/// Sort, drop nodes below another node, then merge complete sibling pairs.
pub fn canonicalize(mut nodes: Vec<Node>) -> Vec<Node> {
    nodes.sort_unstable();
    nodes.dedup();
    let mut stack: Vec<Node> = Vec::with_capacity(nodes.len());
    for n in nodes {
        if let Some(&top) = stack.last() {
            if top.is_prefix_of(n) {
                continue;
            }
        }
        let mut cur = n;
        while let Some(&top) = stack.last() {
            if top.is_sibling_of(cur) {
                stack.pop();
                cur = cur.parent().expect("siblings have a parent");
            } else {
                break;
            }
        }
        stack.push(cur);
    }
    stack
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(nodes: &[&str]) -> NodeSet {
        NodeSet::from_nodes(nodes.iter().map(|s| Node::parse(s).unwrap()))
    }

    #[test]
    fn siblings_merge() {
        assert_eq!(set(&["0", "1"]), NodeSet::full());
        assert_eq!(set(&["00", "01"]), set(&["0"]));
        assert_eq!(set(&["00", "01", "1"]), NodeSet::full());
        assert_eq!(set(&["0", "01", "011"]), set(&["0"]));
    }

    #[test]
    fn complement_and_measure() {
        let a = set(&["01", "1"]);
        assert_eq!(a.complement(), set(&["00"]));
        assert_eq!(NodeSet::empty().complement(), NodeSet::full());
        assert_eq!(NodeSet::full().complement(), NodeSet::empty());
        assert_eq!(a.lebesgue(), crate::rational::ratio(3, 4));
    }

    #[test]
    fn meet_and_order() {
        let a = set(&["0"]);
        let b = set(&["01", "11"]);
        assert_eq!(a.meet(&b), set(&["01"]));
        assert!(set(&["01"]).leq(&a));
        assert!(!b.leq(&a));
        assert!(set(&["10"]).is_disjoint(&a));
        assert_eq!(a.symdiff(&a), NodeSet::empty());
    }

    #[test]
    fn node_order_is_lexicographic() {
        let mut v: Vec<Node> = ["1", "0", "01", "e", "00"]
            .iter()
            .map(|s| Node::parse(s).unwrap())
            .collect();
        v.sort();
        let s: Vec<String> = v.iter().map(|n| n.to_string()).collect();
        assert_eq!(s, ["e", "0", "00", "01", "1"]);
    }
}
