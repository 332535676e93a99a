use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Label of an input tail.
pub type Marking = u32;

/// Index of a flag (half-edge) in a [`RootedTree`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Flag(pub usize);

/// Oriented rooted tree given by flags, vertices, a boundary map and an
/// involution on flags.
///
/// Orbits of size two of the involution are edges; fixed points are tails.
/// Exactly one tail is the root (output); every other tail is an input and
/// carries a [`Marking`]. The orientation toward the root is derived on demand.
///
/// Equality and hashing are up to isomorphism preserving the root and the
/// input labels, through the canonical [`Nested`] form.
#[derive(Clone)]
pub struct RootedTree {
    boundary: Vec<usize>,
    involution: Vec<usize>,
    vertex_count: usize,
    root: usize,
    inputs: BTreeMap<Marking, usize>,
}

/// Canonical nested form of a rooted tree: the input labels at a vertex and
/// the subtrees hanging from it, both sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Nested {
    pub inputs: Vec<Marking>,
    pub children: Vec<Nested>,
}

impl Nested {
    pub fn new(mut inputs: Vec<Marking>, children: Vec<Nested>) -> Self {
        inputs.sort_unstable();
        let mut children: Vec<Nested> = children.into_iter().map(Nested::canonical).collect();
        children.sort();
        Nested { inputs, children }
    }

    pub fn canonical(self) -> Self {
        Nested::new(self.inputs, self.children)
    }

    pub fn in_degree(&self) -> usize {
        self.inputs.len() + self.children.len()
    }

    pub fn vertex_count(&self) -> usize {
        1 + self.children.iter().map(Nested::vertex_count).sum::<usize>()
    }

    /// All input labels, sorted.
    pub fn markings(&self) -> Vec<Marking> {
        let mut out = Vec::new();
        self.collect_markings(&mut out);
        out.sort_unstable();
        out
    }

    fn collect_markings(&self, out: &mut Vec<Marking>) {
        out.extend_from_slice(&self.inputs);
        for c in &self.children {
            c.collect_markings(out);
        }
    }
}

/// Parent/child structure derived from the root.
pub(crate) struct Layout {
    /// Incoming flags of each vertex: input tails and edge halves toward children.
    pub incoming: Vec<Vec<usize>>,
    /// Vertices in breadth-first order from the root.
    pub order: Vec<usize>,
}

impl RootedTree {
    /// Builds a tree from raw flag data, checking every structural invariant.
    pub fn from_parts(
        boundary: Vec<usize>,
        involution: Vec<usize>,
        vertex_count: usize,
        root: usize,
        inputs: BTreeMap<Marking, usize>,
    ) -> Result<Self> {
        let t = RootedTree {
            boundary,
            involution,
            vertex_count,
            root,
            inputs,
        };
        t.check()?;
        Ok(t)
    }

    fn check(&self) -> Result<()> {
        let nf = self.boundary.len();
        let bad = |m: &str| Err(Error::Tree(m.to_string()));
        if self.involution.len() != nf {
            return bad("boundary and involution have different lengths");
        }
        if self.vertex_count == 0 {
            return bad("no vertices");
        }
        if self.boundary.iter().any(|&v| v >= self.vertex_count) {
            return bad("boundary points outside the vertex set");
        }
        for (f, &g) in self.involution.iter().enumerate() {
            if g >= nf || self.involution[g] != f {
                return bad("involution is not an involution");
            }
            if g != f && self.boundary[g] == self.boundary[f] {
                return bad("edge is a loop");
            }
        }
        if self.root >= nf || self.involution[self.root] != self.root {
            return bad("root is not a tail");
        }
        let tails: BTreeSet<usize> = (0..nf)
            .filter(|&f| self.involution[f] == f && f != self.root)
            .collect();
        let labelled: BTreeSet<usize> = self.inputs.values().copied().collect();
        if labelled.len() != self.inputs.len() || labelled != tails {
            return bad("input labels are not a bijection onto the non-root tails");
        }
        let edges = (0..nf).filter(|&f| self.involution[f] > f).count();
        if self.vertex_count != edges + 1 {
            return bad("vertex count is not edge count plus one");
        }
        // connectivity from the root vertex
        let mut at: Vec<Vec<usize>> = vec![Vec::new(); self.vertex_count];
        for (f, &v) in self.boundary.iter().enumerate() {
            at[v].push(f);
        }
        let mut seen = vec![false; self.vertex_count];
        let mut queue = VecDeque::from([self.boundary[self.root]]);
        seen[self.boundary[self.root]] = true;
        while let Some(v) = queue.pop_front() {
            for &f in &at[v] {
                let w = self.boundary[self.involution[f]];
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return bad("tree is not connected");
        }
        Ok(())
    }

    /// One vertex with the given input labels.
    pub fn corolla<I: IntoIterator<Item = Marking>>(labels: I) -> Result<Self> {
        let labels: Vec<Marking> = labels.into_iter().collect();
        let n = labels.len();
        let mut inputs = BTreeMap::new();
        for (i, &s) in labels.iter().enumerate() {
            if inputs.insert(s, i + 1).is_some() {
                return Err(Error::Tree(format!("duplicate marking {s}")));
            }
        }
        RootedTree::from_parts(
            vec![0; n + 1],
            (0..=n).collect(),
            1,
            0,
            inputs,
        )
    }

    /// The operad unit: one vertex, one input labelled 1.
    pub fn unit() -> Self {
        RootedTree::corolla([1]).expect("single label")
    }

    pub fn flag_count(&self) -> usize {
        self.boundary.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.vertex_count - 1
    }

    pub fn root_tail(&self) -> Flag {
        Flag(self.root)
    }

    pub fn root_vertex(&self) -> usize {
        self.boundary[self.root]
    }

    pub fn boundary(&self, f: Flag) -> usize {
        self.boundary[f.0]
    }

    pub fn involution(&self, f: Flag) -> Flag {
        Flag(self.involution[f.0])
    }

    pub fn is_tail(&self, f: Flag) -> bool {
        self.involution[f.0] == f.0
    }

    /// Number of input tails.
    pub fn arity(&self) -> usize {
        self.inputs.len()
    }

    /// Input labels in increasing order.
    pub fn markings(&self) -> Vec<Marking> {
        self.inputs.keys().copied().collect()
    }

    pub fn input_flag(&self, s: Marking) -> Option<Flag> {
        self.inputs.get(&s).map(|&f| Flag(f))
    }

    /// One flag of each edge, the one at the vertex nearer the root.
    pub fn edges(&self) -> Vec<Flag> {
        let lay = self.layout();
        let mut out = Vec::new();
        for v in &lay.order {
            for &f in &lay.incoming[*v] {
                if !self.is_tail(Flag(f)) {
                    out.push(Flag(f));
                }
            }
        }
        out
    }

    pub(crate) fn layout(&self) -> Layout {
        let mut at: Vec<Vec<usize>> = vec![Vec::new(); self.vertex_count];
        for (f, &v) in self.boundary.iter().enumerate() {
            at[v].push(f);
        }
        let mut out_flag = vec![usize::MAX; self.vertex_count];
        let mut incoming = vec![Vec::new(); self.vertex_count];
        let mut order = Vec::with_capacity(self.vertex_count);
        let r = self.root_vertex();
        out_flag[r] = self.root;
        let mut queue = VecDeque::from([r]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &f in &at[v] {
                if f == out_flag[v] {
                    continue;
                }
                incoming[v].push(f);
                let g = self.involution[f];
                if g != f {
                    let w = self.boundary[g];
                    out_flag[w] = g;
                    queue.push_back(w);
                }
            }
        }
        Layout {
            incoming,
            order,
        }
    }

    /// Incoming flag count of every vertex (input tails plus child edges).
    pub fn in_degrees(&self) -> Vec<usize> {
        self.layout().incoming.iter().map(Vec::len).collect()
    }

    /// Every vertex has at least two incoming flags.
    pub fn is_stable(&self) -> bool {
        self.in_degrees().iter().all(|&k| k >= 2)
    }

    pub fn to_nested(&self) -> Nested {
        let lay = self.layout();
        let label: BTreeMap<usize, Marking> = self.inputs.iter().map(|(&s, &f)| (f, s)).collect();
        fn build(
            t: &RootedTree,
            lay: &Layout,
            label: &BTreeMap<usize, Marking>,
            v: usize,
        ) -> Nested {
            let mut inputs = Vec::new();
            let mut children = Vec::new();
            for &f in &lay.incoming[v] {
                if t.involution[f] == f {
                    inputs.push(label[&f]);
                } else {
                    children.push(build(t, lay, label, t.boundary[t.involution[f]]));
                }
            }
            Nested::new(inputs, children)
        }
        build(self, &lay, &label, self.root_vertex())
    }

    /// Builds the flag representation of a nested tree. Flags and vertices are
    /// numbered in depth-first order; flag 0 is the root tail.
    pub fn from_nested(nested: &Nested) -> Result<Self> {
        let mut boundary = Vec::new();
        let mut involution = Vec::new();
        let mut inputs = BTreeMap::new();
        let mut vertex_count = 0;
        // root tail
        boundary.push(0);
        involution.push(0);
        fn walk(
            node: &Nested,
            out_flag: usize,
            boundary: &mut Vec<usize>,
            involution: &mut Vec<usize>,
            inputs: &mut BTreeMap<Marking, usize>,
            vertex_count: &mut usize,
        ) -> Result<()> {
            let v = *vertex_count;
            *vertex_count += 1;
            boundary[out_flag] = v;
            for &s in &node.inputs {
                let f = boundary.len();
                boundary.push(v);
                involution.push(f);
                if inputs.insert(s, f).is_some() {
                    return Err(Error::Tree(format!("duplicate marking {s}")));
                }
            }
            for child in &node.children {
                let f = boundary.len();
                boundary.push(v);
                involution.push(f + 1);
                // child's outgoing flag; boundary fixed up by the recursive call
                boundary.push(usize::MAX);
                involution.push(f);
                walk(child, f + 1, boundary, involution, inputs, vertex_count)?;
            }
            Ok(())
        }
        walk(
            nested,
            0,
            &mut boundary,
            &mut involution,
            &mut inputs,
            &mut vertex_count,
        )?;
        RootedTree::from_parts(boundary, involution, vertex_count, 0, inputs)
    }

    /// Grafts the root tail of `tau` onto the input tail `input` of `sigma`,
    /// forming a new edge. Input labels of the two trees must not collide.
    pub fn graft(tau: &RootedTree, sigma: &RootedTree, input: Flag) -> Result<RootedTree> {
        if input.0 >= sigma.flag_count() {
            return Err(Error::Tree(format!("flag {} is not in the tree", input.0)));
        }
        if input.0 == sigma.root {
            return Err(Error::Tree("cannot graft onto the root tail".into()));
        }
        if !sigma.is_tail(input) {
            return Err(Error::Tree(format!("flag {} is not a tail", input.0)));
        }
        let fs = sigma.flag_count();
        let vs = sigma.vertex_count;
        let mut boundary = sigma.boundary.clone();
        let mut involution = sigma.involution.clone();
        boundary.extend(tau.boundary.iter().map(|&v| v + vs));
        involution.extend(tau.involution.iter().map(|&g| g + fs));
        let tau_root = tau.root + fs;
        involution[input.0] = tau_root;
        involution[tau_root] = input.0;
        let mut inputs: BTreeMap<Marking, usize> = sigma
            .inputs
            .iter()
            .filter(|&(_, &f)| f != input.0)
            .map(|(&s, &f)| (s, f))
            .collect();
        for (&s, &f) in &tau.inputs {
            if inputs.insert(s, f + fs).is_some() {
                return Err(Error::Tree(format!("marking {s} occurs in both trees")));
            }
        }
        RootedTree::from_parts(boundary, involution, vs + tau.vertex_count, sigma.root, inputs)
    }

    /// Contracts the edge containing flag `e`, merging its two vertices.
    pub fn contract_edge(&self, e: Flag) -> Result<RootedTree> {
        if e.0 >= self.flag_count() {
            return Err(Error::Tree(format!("flag {} is not in the tree", e.0)));
        }
        let a = e.0;
        let b = self.involution[a];
        if a == b {
            return Err(Error::Tree(format!("flag {a} is a tail, not an edge")));
        }
        let (va, vb) = (self.boundary[a], self.boundary[b]);
        let keep_v = va.min(vb);
        let drop_v = va.max(vb);
        let vmap = |v: usize| -> usize {
            let v = if v == drop_v { keep_v } else { v };
            if v > drop_v {
                v - 1
            } else {
                v
            }
        };
        let mut fmap = vec![usize::MAX; self.flag_count()];
        let mut next = 0;
        for (f, slot) in fmap.iter_mut().enumerate() {
            if f != a && f != b {
                *slot = next;
                next += 1;
            }
        }
        let mut boundary = Vec::with_capacity(next);
        let mut involution = Vec::with_capacity(next);
        for f in 0..self.flag_count() {
            if f == a || f == b {
                continue;
            }
            boundary.push(vmap(self.boundary[f]));
            involution.push(fmap[self.involution[f]]);
        }
        let inputs = self.inputs.iter().map(|(&s, &f)| (s, fmap[f])).collect();
        RootedTree::from_parts(
            boundary,
            involution,
            self.vertex_count - 1,
            fmap[self.root],
            inputs,
        )
    }

    /// Contracts every edge: the corolla on the same markings.
    pub fn contract_all(&self) -> RootedTree {
        RootedTree::corolla(self.markings()).expect("markings are distinct")
    }

    /// Relabels the inputs through an injective map defined on every marking.
    pub fn relabel(&self, map: &BTreeMap<Marking, Marking>) -> Result<RootedTree> {
        let mut inputs = BTreeMap::new();
        for (&s, &f) in &self.inputs {
            let t = *map
                .get(&s)
                .ok_or_else(|| Error::Tree(format!("relabeling misses marking {s}")))?;
            if inputs.insert(t, f).is_some() {
                return Err(Error::Tree(format!("relabeling is not injective at {t}")));
            }
        }
        let mut out = self.clone();
        out.inputs = inputs;
        Ok(out)
    }

    /// Relabels the inputs `1..=n` as `offset+1..=offset+n` in increasing order.
    fn standardized(&self, offset: Marking) -> RootedTree {
        let map: BTreeMap<Marking, Marking> = self
            .markings()
            .into_iter()
            .enumerate()
            .map(|(i, s)| (s, offset + i as Marking + 1))
            .collect();
        self.relabel(&map).expect("order-preserving map is injective")
    }

    /// Acts on the input labels by `pi`, which must map the marking set onto itself.
    pub fn permute_markings(&self, pi: &Permutation) -> Result<RootedTree> {
        let domain: BTreeSet<Marking> = self.inputs.keys().copied().collect();
        let image: BTreeSet<Marking> = domain.iter().map(|&s| pi.apply(s)).collect();
        if image != domain {
            return Err(Error::Permutation(format!(
                "{pi} does not preserve the marking set {domain:?}"
            )));
        }
        let map = domain.iter().map(|&s| (s, pi.apply(s))).collect();
        self.relabel(&map)
    }

    /// Operad composition: grafts `args[k]` into the `k`-th input of `self`
    /// (inputs ordered by label) and contracts the new edges. The result has
    /// inputs `1..=N`, numbered block by block in argument order, each block in
    /// the label order of its argument.
    pub fn compose(&self, args: &[RootedTree]) -> Result<RootedTree> {
        if args.len() != self.arity() {
            return Err(Error::Arity {
                expected: self.arity(),
                got: args.len(),
            });
        }
        let total: usize = args.iter().map(RootedTree::arity).sum();
        // park the outer labels above every argument label
        let parked = self.standardized(total as Marking);
        let mut acc = parked;
        let mut offset = 0;
        for (k, arg) in args.iter().enumerate() {
            let slot = total as Marking + k as Marking + 1;
            let flag = acc.input_flag(slot).expect("parked label exists");
            let piece = arg.standardized(offset);
            offset += arg.arity() as Marking;
            let grafted = RootedTree::graft(&piece, &acc, flag)?;
            acc = grafted.contract_edge(flag)?;
        }
        Ok(acc)
    }

    /// Forgets the input `s` and contracts the vertices that become unstable
    /// into their mother. A root left with a single child edge absorbs that child.
    pub fn forget_marking(&self, s: Marking) -> Result<RootedTree> {
        if !self.inputs.contains_key(&s) {
            return Err(Error::Tree(format!("no input labelled {s}")));
        }
        if self.arity() == 1 {
            return Err(Error::Tree("cannot forget the only marking".into()));
        }
        fn strip(node: &Nested, s: Marking) -> Nested {
            let inputs: Vec<Marking> = node.inputs.iter().copied().filter(|&x| x != s).collect();
            let mut children = Vec::new();
            let mut inputs = inputs;
            for c in &node.children {
                let c = strip(c, s);
                if c.in_degree() == 0 {
                    // the child carried only `s`
                    continue;
                }
                if c.in_degree() == 1 {
                    // unstable child: its single incoming flag moves to the mother
                    if let Some(&x) = c.inputs.first() {
                        inputs.push(x);
                    } else {
                        children.push(c.children.into_iter().next().expect("one child"));
                    }
                } else {
                    children.push(c);
                }
            }
            Nested::new(inputs, children)
        }
        let mut root = strip(&self.to_nested(), s);
        while root.inputs.is_empty() && root.children.len() == 1 {
            root = root.children.pop().expect("one child");
        }
        RootedTree::from_nested(&root)
    }

    /// Nested JSON form `{"inputs":[...],"children":[...]}`, canonical.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_nested()).expect("nested form serializes")
    }

    pub fn from_json(s: &str) -> Result<RootedTree> {
        let nested: Nested =
            serde_json::from_str(s).map_err(|e| Error::Parse(format!("tree: {e}")))?;
        RootedTree::from_nested(&nested)
    }

    /// Markings sitting below each edge, i.e. the proper subsets `S'` whose
    /// boundary divisors contain this stratum.
    pub fn edge_subsets(&self) -> Vec<Vec<Marking>> {
        fn walk(node: &Nested, out: &mut Vec<Vec<Marking>>) -> Vec<Marking> {
            let mut all = node.inputs.clone();
            for c in &node.children {
                let sub = walk(c, out);
                out.push(sub.clone());
                all.extend(sub);
            }
            all.sort_unstable();
            all
        }
        let mut out = Vec::new();
        walk(&self.to_nested(), &mut out);
        out.sort();
        out
    }
}

impl PartialEq for RootedTree {
    fn eq(&self, other: &Self) -> bool {
        self.to_nested() == other.to_nested()
    }
}

impl Eq for RootedTree {}

impl Hash for RootedTree {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.to_nested().hash(state);
    }
}

impl fmt::Debug for RootedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RootedTree({})", self)
    }
}

/// Bracket notation: `(1 2 (3 4))` is a root with inputs 1, 2 and one child
/// carrying inputs 3, 4.
impl fmt::Display for Nested {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        let inputs = self.inputs.iter().map(|s| s.to_string());
        let children = self.children.iter().map(|c| c.to_string());
        let parts: Vec<String> = inputs.chain(children).collect();
        write!(f, "{})", parts.join(" "))
    }
}

impl fmt::Display for RootedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_nested())
    }
}

impl Serialize for RootedTree {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_nested().serialize(s)
    }
}

impl<'de> Deserialize<'de> for RootedTree {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let n = Nested::deserialize(d)?;
        RootedTree::from_nested(&n).map_err(serde::de::Error::custom)
    }
}
