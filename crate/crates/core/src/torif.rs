//! Expression calculus for torifications and constructible torifications.
//!
//! A [`TorifExpr`] is built from split tori `G_m^k` by disjoint unions,
//! products and complements. Its *atoms* are the tori obtained by flattening
//! unions and multiplying out products; a complement keeps the atoms of its
//! ambient expression and records, for every atom it removes, which ambient
//! atom the removed piece sits in.
//!
//! Only combinatorial data is modelled. Whether a complement is an honest
//! locally closed immersion cannot be decided from this data, so validity is
//! the structural rule that every removed atom lies in an ambient atom of
//! strictly larger dimension.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::binomial;
use serde::{Deserialize, Serialize};

use crate::error::{range, Error, Result};
use crate::genseries::open_stratum_class;
use crate::motive::{blowup_class, MotClass};
use crate::treeop::RootedTree;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum TorifExpr {
    /// The split torus `G_m^dim`.
    Torus { dim: u32 },
    /// Disjoint union; the empty union is the empty set.
    Union { parts: Vec<TorifExpr> },
    /// Cartesian product; the empty product is a point.
    Product { factors: Vec<TorifExpr> },
    /// `ambient` minus `removed`. `assignment[i]` is the ambient atom that
    /// contains the `i`-th atom of `removed`.
    Complement {
        ambient: Box<TorifExpr>,
        removed: Box<TorifExpr>,
        assignment: Vec<usize>,
    },
}

/// Result of [`TorifExpr::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct Validation {
    pub ok: bool,
    pub diagnostics: Vec<String>,
}

impl TorifExpr {
    pub fn torus(dim: u32) -> Self {
        TorifExpr::Torus { dim }
    }

    pub fn point() -> Self {
        TorifExpr::Torus { dim: 0 }
    }

    pub fn union(parts: Vec<TorifExpr>) -> Self {
        TorifExpr::Union { parts }
    }

    pub fn product(factors: Vec<TorifExpr>) -> Self {
        TorifExpr::Product { factors }
    }

    pub fn complement(ambient: TorifExpr, removed: TorifExpr, assignment: Vec<usize>) -> Self {
        TorifExpr::Complement {
            ambient: Box::new(ambient),
            removed: Box::new(removed),
            assignment,
        }
    }

    /// Dimensions of the atoms, in a fixed order.
    pub fn atoms(&self) -> Vec<u32> {
        match self {
            TorifExpr::Torus { dim } => vec![*dim],
            TorifExpr::Union { parts } => parts.iter().flat_map(TorifExpr::atoms).collect(),
            TorifExpr::Product { factors } => {
                factors.iter().fold(vec![0], |acc, f| {
                    let fa = f.atoms();
                    acc.iter()
                        .flat_map(|a| fa.iter().map(move |b| a + b))
                        .collect()
                })
            }
            TorifExpr::Complement { ambient, .. } => ambient.atoms(),
        }
    }

    /// Largest atom dimension; `None` for the empty set.
    pub fn dim(&self) -> Option<u32> {
        self.atoms().into_iter().max()
    }

    /// Grothendieck class: tori to `T^k`, unions to sums, products to
    /// products, complements to differences.
    pub fn eval_class(&self) -> Result<MotClass> {
        let v = self.validate();
        if !v.ok {
            return Err(Error::Torification(v.diagnostics.join("; ")));
        }
        Ok(self.class_unchecked())
    }

    fn class_unchecked(&self) -> MotClass {
        match self {
            TorifExpr::Torus { dim } => MotClass::t().pow(*dim),
            TorifExpr::Union { parts } => parts.iter().map(TorifExpr::class_unchecked).sum(),
            TorifExpr::Product { factors } => {
                factors.iter().map(TorifExpr::class_unchecked).product()
            }
            TorifExpr::Complement {
                ambient, removed, ..
            } => ambient.class_unchecked() - removed.class_unchecked(),
        }
    }

    /// Checks the complement rule everywhere in the expression.
    pub fn validate(&self) -> Validation {
        let mut diagnostics = Vec::new();
        self.collect_diagnostics("$", &mut diagnostics);
        Validation {
            ok: diagnostics.is_empty(),
            diagnostics,
        }
    }

    fn collect_diagnostics(&self, path: &str, out: &mut Vec<String>) {
        match self {
            TorifExpr::Torus { .. } => {}
            TorifExpr::Union { parts } => {
                for (i, p) in parts.iter().enumerate() {
                    p.collect_diagnostics(&format!("{path}.parts[{i}]"), out);
                }
            }
            TorifExpr::Product { factors } => {
                for (i, f) in factors.iter().enumerate() {
                    f.collect_diagnostics(&format!("{path}.factors[{i}]"), out);
                }
            }
            TorifExpr::Complement {
                ambient,
                removed,
                assignment,
            } => {
                ambient.collect_diagnostics(&format!("{path}.ambient"), out);
                removed.collect_diagnostics(&format!("{path}.removed"), out);
                let amb = ambient.atoms();
                let rem = removed.atoms();
                if assignment.len() != rem.len() {
                    out.push(format!(
                        "{path}: {} removed atoms but {} assignments",
                        rem.len(),
                        assignment.len()
                    ));
                    return;
                }
                for (i, (&target, &rd)) in assignment.iter().zip(&rem).enumerate() {
                    match amb.get(target) {
                        None => out.push(format!(
                            "{path}: removed atom {i} assigned to missing ambient atom {target}"
                        )),
                        Some(&ad) if rd >= ad => out.push(format!(
                            "{path}: removed atom {i} of dimension {rd} does not fit in ambient atom {target} of dimension {ad}"
                        )),
                        _ => {}
                    }
                }
            }
        }
    }
}

/// A labelled piece of a constructible torification.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Piece {
    pub label: String,
    pub expr: TorifExpr,
}

/// A decomposition into pieces of the class generated by `G_m` under products,
/// disjoint unions and complements, with its total class cached.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstructibleTorification {
    pieces: Vec<Piece>,
    total_class: MotClass,
}

impl ConstructibleTorification {
    pub fn new(pieces: Vec<Piece>) -> Result<Self> {
        let mut total = MotClass::zero();
        for p in &pieces {
            total += &p.expr.eval_class()?;
        }
        Ok(ConstructibleTorification {
            pieces,
            total_class: total,
        })
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn total_class(&self) -> &MotClass {
        &self.total_class
    }

    /// The class is a non-negative combination of torus classes.
    pub fn is_f1_constructible(&self) -> bool {
        self.total_class.is_effective_torus_class()
    }

    /// Recomputes the total from the pieces.
    pub fn recomputed_class(&self) -> MotClass {
        self.pieces
            .iter()
            .map(|p| p.expr.eval_class().expect("pieces were validated"))
            .sum()
    }

    /// Sorted atom dimensions of each piece, as a sorted list.
    fn signature(&self) -> Vec<Vec<u32>> {
        let mut sig: Vec<Vec<u32>> = self
            .pieces
            .iter()
            .map(|p| {
                let mut a = p.expr.atoms();
                a.sort_unstable();
                a
            })
            .collect();
        sig.sort();
        sig
    }

    fn piece_index(&self, label: &str) -> Option<usize> {
        self.pieces.iter().position(|p| p.label == label)
    }
}

/// Part of a piece: a subvariety strictly inside one piece, given by its own
/// expression.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialPiece {
    pub piece: usize,
    pub sub: TorifExpr,
}

/// A subvariety described through a torification: whole pieces plus parts of
/// pieces.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Selection {
    pub whole: Vec<usize>,
    pub partial: Vec<PartialPiece>,
}

impl Selection {
    pub fn pieces(whole: Vec<usize>) -> Self {
        Selection {
            whole,
            partial: Vec::new(),
        }
    }

    fn check(&self, ct: &ConstructibleTorification) -> Result<()> {
        let n = ct.pieces.len();
        let mut seen = BTreeSet::new();
        for &i in self.whole.iter().chain(self.partial.iter().map(|p| &p.piece)) {
            if i >= n {
                return Err(Error::Torification(format!(
                    "selection names piece {i}, torification has {n}"
                )));
            }
            if !seen.insert(i) {
                return Err(Error::Torification(format!("piece {i} selected twice")));
            }
        }
        for p in &self.partial {
            let sd = p.sub.dim();
            let pd = ct.pieces[p.piece].expr.dim();
            if sd > pd {
                return Err(Error::Torification(format!(
                    "part of piece {} has larger dimension than the piece",
                    p.piece
                )));
            }
        }
        Ok(())
    }

    /// Class of the selected subvariety.
    pub fn class(&self, ct: &ConstructibleTorification) -> Result<MotClass> {
        self.check(ct)?;
        let mut c = MotClass::zero();
        for &i in &self.whole {
            c += &ct.pieces[i].expr.eval_class()?;
        }
        for p in &self.partial {
            c += &p.sub.eval_class()?;
        }
        Ok(c)
    }
}

/// `sub` is strongly complemented iff it is a union of whole pieces: then it and
/// its complement both inherit decompositions from `ct` and both inclusions
/// respect them.
pub fn is_strongly_complemented(ct: &ConstructibleTorification, sub: &Selection) -> Result<bool> {
    sub.check(ct)?;
    Ok(sub.partial.is_empty())
}

/// Cells of `P^d`: `A^k` split into the tori where a fixed set of coordinates
/// is nonzero. Labels are `c{k}:{mask}`.
fn proj_cells(d: u32) -> Vec<(u32, u32, TorifExpr)> {
    let mut out = Vec::new();
    for k in 0..=d {
        for mask in 0u32..(1 << k) {
            out.push((k, mask, TorifExpr::torus(mask.count_ones())));
        }
    }
    out
}

/// Torification of `P^d` along its cell decomposition: `2^{d+1} - 1` tori.
pub fn torify_proj_space(d: i64) -> Result<ConstructibleTorification> {
    if !(0..=20).contains(&d) {
        return Err(range("d", d, "0 <= d <= 20"));
    }
    let pieces = proj_cells(d as u32)
        .into_iter()
        .map(|(k, mask, expr)| Piece {
            label: format!("c{k}:{mask:b}"),
            expr,
        })
        .collect();
    ConstructibleTorification::new(pieces)
}

/// Torification of a tree of `P^1`'s: the root contributes two points and a
/// `G_m`; every other vertex a point and a `G_m` (its remaining point is the
/// node already counted on the mother).
pub fn torify_tree_curve(tau: &RootedTree) -> Result<ConstructibleTorification> {
    if !tau.is_stable() {
        return Err(Error::Unstable(tau.to_string()));
    }
    let mut pieces = vec![
        Piece {
            label: "v0:0".into(),
            expr: TorifExpr::point(),
        },
        Piece {
            label: "v0:inf".into(),
            expr: TorifExpr::point(),
        },
        Piece {
            label: "v0:gm".into(),
            expr: TorifExpr::torus(1),
        },
    ];
    for v in 1..tau.vertex_count() {
        pieces.push(Piece {
            label: format!("v{v}:pt"),
            expr: TorifExpr::point(),
        });
        pieces.push(Piece {
            label: format!("v{v}:gm"),
            expr: TorifExpr::torus(1),
        });
    }
    ConstructibleTorification::new(pieces)
}

/// `A^d` minus the origin and the all-ones point: the tori of `A^d` with at
/// least one nonzero coordinate, the big torus losing the point `1`.
fn affine_minus_two_points(d: u32) -> TorifExpr {
    let mut parts = Vec::new();
    for mask in 1u32..(1 << d) {
        let k = mask.count_ones();
        if k == d {
            parts.push(TorifExpr::complement(
                TorifExpr::torus(d),
                TorifExpr::point(),
                vec![0],
            ));
        } else {
            parts.push(TorifExpr::torus(k));
        }
    }
    if parts.len() == 1 {
        parts.pop().expect("one part")
    } else {
        TorifExpr::union(parts)
    }
}

/// Configurations of `k` distinct points of `X`, built fibrewise: the `j`-th
/// point ranges over `X` minus the `j - 1` earlier points, which are placed in
/// the top-dimensional atom of `X`.
fn configurations(x: &TorifExpr, k: usize) -> TorifExpr {
    let atoms = x.atoms();
    let top = atoms
        .iter()
        .enumerate()
        .max_by_key(|&(_, &d)| d)
        .map(|(i, _)| i)
        .unwrap_or(0);
    let mut factors = Vec::new();
    for j in 0..k {
        if j == 0 {
            factors.push(x.clone());
        } else {
            factors.push(TorifExpr::complement(
                x.clone(),
                TorifExpr::union(vec![TorifExpr::point(); j]),
                vec![top; j],
            ));
        }
    }
    TorifExpr::product(factors)
}

/// Constructible torification of the open stratum `TH_{d,n}`: a direction in
/// `P^{d-1}` for the second point times configurations of the other `n - 2`
/// points in `A^d` minus two points. For `d = 1` this is `M_{0,n+1}`, and for
/// `n = 3` it is `G_m` minus a point.
pub fn constructible_open_stratum(d: i64, n: i64) -> Result<ConstructibleTorification> {
    if !(1..=20).contains(&d) {
        return Err(range("d", d, "1 <= d <= 20"));
    }
    if n < 2 {
        return Err(range("n", n, "n >= 2"));
    }
    let du = d as u32;
    let conf = configurations(&affine_minus_two_points(du), (n - 2) as usize);
    let expr = if du == 1 {
        match conf {
            TorifExpr::Product { mut factors } if factors.len() == 1 => {
                factors.pop().expect("one factor")
            }
            other => other,
        }
    } else {
        let dirs = TorifExpr::union(
            proj_cells(du - 1)
                .into_iter()
                .map(|(_, _, e)| e)
                .collect(),
        );
        TorifExpr::product(vec![dirs, conf])
    };
    let ct = ConstructibleTorification::new(vec![Piece {
        label: format!("TH({d},{n})"),
        expr,
    }])?;
    if ct.total_class() != &open_stratum_class(d, n)? {
        return Err(Error::Invariant(format!(
            "open stratum expression for ({d},{n}) has the wrong class"
        )));
    }
    Ok(ct)
}

/// Torification of `(P^d)^n`. With `sheared = false` every cell carries the
/// product torification. With `sheared = true` the cells `(A^k)^n` lying over
/// the deepest diagonal use coordinates `x_1, x_2 - x_1, ..., x_n - x_1`, so the
/// diagonal becomes a union of whole pieces.
pub fn torify_proj_power(d: i64, n: i64, sheared: bool) -> Result<ConstructibleTorification> {
    if !(0..=6).contains(&d) {
        return Err(range("d", d, "0 <= d <= 6"));
    }
    if !(1..=6).contains(&n) {
        return Err(range("n", n, "1 <= n <= 6"));
    }
    let cells = proj_cells(d as u32);
    let mut pieces = Vec::new();
    let mut idx = vec![0usize; n as usize];
    loop {
        let chosen: Vec<&(u32, u32, TorifExpr)> = idx.iter().map(|&i| &cells[i]).collect();
        let same_cell = chosen.iter().all(|c| c.0 == chosen[0].0);
        let shear = sheared && same_cell && n > 1;
        let label = chosen
            .iter()
            .map(|(k, mask, _)| format!("c{k}:{mask:b}"))
            .collect::<Vec<_>>()
            .join("x")
            + if shear { "'" } else { "" };
        let dim: u32 = chosen.iter().map(|c| c.1.count_ones()).sum();
        pieces.push(Piece {
            label,
            expr: TorifExpr::torus(dim),
        });
        // odometer
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return ConstructibleTorification::new(pieces);
            }
            idx[pos] += 1;
            if idx[pos] < cells.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// The deepest diagonal of `(P^d)^n` as a selection in [`torify_proj_power`].
pub fn diagonal_selection(ct: &ConstructibleTorification, d: i64, n: i64, sheared: bool) -> Result<Selection> {
    let cells = proj_cells(d as u32);
    let mut sel = Selection::default();
    for (k, mask, _) in &cells {
        if sheared {
            // first coordinate free, differences zero
            let label = std::iter::once(format!("c{k}:{mask:b}"))
                .chain((1..n).map(|_| format!("c{k}:0")))
                .collect::<Vec<_>>()
                .join("x")
                + if n > 1 { "'" } else { "" };
            let i = ct
                .piece_index(&label)
                .ok_or_else(|| Error::Torification(format!("no piece {label}")))?;
            sel.whole.push(i);
        } else {
            let label = vec![format!("c{k}:{mask:b}"); n as usize].join("x");
            let i = ct
                .piece_index(&label)
                .ok_or_else(|| Error::Torification(format!("no piece {label}")))?;
            if *mask == 0 || n == 1 {
                sel.whole.push(i);
            } else {
                sel.partial.push(PartialPiece {
                    piece: i,
                    sub: TorifExpr::torus(mask.count_ones()),
                });
            }
        }
    }
    Ok(sel)
}

/// Decomposition of the blowup along a strongly complemented center of the
/// given codimension: pieces off the center are kept, and each center piece is
/// replaced by its product with the torification of `P^{codim-1}`.
pub fn blowup_decomposition(
    ct: &ConstructibleTorification,
    center: &Selection,
    codim: i64,
) -> Result<ConstructibleTorification> {
    if codim < 1 {
        return Err(range("codim", codim, "codim >= 1"));
    }
    if !is_strongly_complemented(ct, center)? {
        return Err(Error::NotComplemented(format!(
            "{} pieces are only partly selected",
            center.partial.len()
        )));
    }
    let fiber = torify_proj_space(codim - 1)?;
    let in_center: BTreeSet<usize> = center.whole.iter().copied().collect();
    let mut pieces = Vec::new();
    for (i, p) in ct.pieces.iter().enumerate() {
        if !in_center.contains(&i) {
            pieces.push(p.clone());
            continue;
        }
        for q in fiber.pieces() {
            pieces.push(Piece {
                label: format!("{}*{}", p.label, q.label),
                expr: TorifExpr::product(vec![p.expr.clone(), q.expr.clone()]),
            });
        }
    }
    let out = ConstructibleTorification::new(pieces)?;
    let expected = blowup_class(ct.total_class(), &center.class(ct)?, codim)?;
    if out.total_class() != &expected {
        return Err(Error::Invariant("blowup decomposition class mismatch".into()));
    }
    Ok(out)
}

/// Equivalence levels that can be compared from combinatorial data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShadowLevel {
    /// Identical labelled piece lists.
    Strong,
    /// Same multiset of piece signatures (sorted atom dimensions).
    Weak,
}

/// Combinatorial shadow of equivalence between two torifications. A `true`
/// answer at the weak level is necessary, not sufficient, for an actual weak
/// equivalence.
pub fn equiv_shadow(
    a: &ConstructibleTorification,
    b: &ConstructibleTorification,
    level: ShadowLevel,
) -> bool {
    if a.total_class() != b.total_class() {
        return false;
    }
    match level {
        ShadowLevel::Strong => a.pieces == b.pieces,
        ShadowLevel::Weak => a.signature() == b.signature(),
    }
}

/// Number of pieces of [`torify_proj_space`] of each dimension.
pub fn proj_piece_dims(d: u32) -> BTreeMap<u32, u64> {
    let mut out = BTreeMap::new();
    for k in 0..=d {
        for j in 0..=k {
            *out.entry(j).or_insert(0) += binomial(k as u64, j as u64);
        }
    }
    out
}
