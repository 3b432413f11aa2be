//! Triangular Z-basis of a sparse integer row lattice, with certificates.
//!
//! Row `i` of the basis vanishes on the pivot columns of rows `0..i`, so a
//! target is reduced by the rows in order and every step is forced.
//!
//! Construction has two phases. Generator rows are first reduced one at a
//! time against the unit-pivot rows found so far: a row that vanishes is
//! redundant, and a row left with an entry of absolute value one becomes a
//! new unit-pivot row. Reduction by unit pivots is exact and never multiplies
//! a row. The rows left without unit entries are then eliminated together,
//! right-looking: first on unit entries of the shortest rows, then column by
//! column dividing by the entry of least absolute value, until one row
//! survives per column.
//!
//! Every basis row keeps a recipe over the generators and earlier rows, so
//! membership coefficients over the basis unfold into coefficients over the
//! generators.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use super::{IntMatrix, Order, SmithForm, SparseRow};

#[derive(Clone, Debug)]
pub struct BasisRow {
    pub vector: SparseRow,
    pub pivot: u32,
    /// Index of this row's recipe in the history.
    pub version: u32,
}

impl BasisRow {
    pub fn pivot_value(&self) -> &BigInt {
        self.vector.get(self.pivot).expect("pivot entry present")
    }
}

#[derive(Clone, Debug)]
pub struct EchelonBasis {
    columns: usize,
    generators: usize,
    rows: Vec<BasisRow>,
    // Recipe of each row version: indices below `generators` name
    // generators, index `generators + v` names version `v`.
    history: Vec<SparseRow>,
    row_of_pivot: Vec<Option<u32>>,
    // Word-sized copies of rows whose entries all fit.
    small: Vec<Option<Vec<(u32, i64)>>>,
}

/// Outcome of reducing a target against the basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reduction {
    /// Coefficients over the generator rows.
    Member(SparseRow),
    NotMember,
}

/// Generator rows reduced in parallel before being taken in order.
const CHUNK: usize = 256;

/// Rows touched by one elimination step are updated in parallel from here.
const PARALLEL_THRESHOLD: usize = 32;

/// `e_g - sum q * version`, over generators then versions.
fn quotients_recipe(g: u32, offset: u32, quotients: Vec<(u32, BigInt)>) -> Vec<(u32, BigInt)> {
    let mut out = Vec::with_capacity(quotients.len() + 1);
    out.push((g, BigInt::one()));
    out.extend(quotients.into_iter().map(|(v, q)| (offset + v, -q)));
    out
}

fn recipe_from(g: u32, offset: u32, quotients: Vec<(u32, BigInt)>) -> SparseRow {
    SparseRow::from_pairs(quotients_recipe(g, offset, quotients))
}

/// Result of reducing as far as possible without touching the basis.
struct Advance {
    vector: SparseRow,
    // (version, quotient) pairs subtracted.
    quotients: Vec<(u32, BigInt)>,
    // Row index where a pivot failed to divide, if any.
    conflict: Option<usize>,
}

/// `a / b` rounded to nearest, so the remainder is at most `|b| / 2`.
fn nearest_quotient(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_mod_floor(b);
    // r carries the sign of b; step past the midpoint.
    if (&r + &r).abs() > b.abs() {
        q + 1
    } else {
        q
    }
}

fn small_copy(row: &SparseRow) -> Option<Vec<(u32, i64)>> {
    row.entries()
        .iter()
        .map(|(c, v)| v.to_i64().map(|v| (*c, v)))
        .collect()
}

struct Active {
    vector: SparseRow,
    // Coefficients over the eliminator's inputs.
    combo: SparseRow,
    alive: bool,
}

type LengthHeap = BinaryHeap<Reverse<(usize, u32)>>;

/// Right-looking elimination of the rows left without unit entries.
struct Eliminator {
    columns: usize,
    active: Vec<Active>,
    // Rows that may hold an entry in each column; can be stale.
    col_rows: Vec<Vec<u32>>,
    done: Vec<(SparseRow, u32, SparseRow)>,
}

impl Eliminator {
    fn new(columns: usize, rows: Vec<SparseRow>) -> Eliminator {
        let mut col_rows = vec![Vec::new(); columns];
        let active = rows
            .into_iter()
            .enumerate()
            .map(|(i, vector)| {
                for (c, _) in vector.entries() {
                    col_rows[*c as usize].push(i as u32);
                }
                Active {
                    alive: !vector.is_empty(),
                    vector,
                    combo: SparseRow::unit(i as u32),
                }
            })
            .collect();
        Eliminator {
            columns,
            active,
            col_rows,
            done: Vec::new(),
        }
    }

    /// Alive rows with a nonzero entry in `col`, ascending.
    fn rows_in_column(&mut self, col: u32) -> Vec<u32> {
        let mut ids = std::mem::take(&mut self.col_rows[col as usize]);
        ids.sort_unstable();
        ids.dedup();
        ids.retain(|&i| {
            let a = &self.active[i as usize];
            a.alive && a.vector.get(col).is_some()
        });
        self.col_rows[col as usize] = ids.clone();
        ids
    }

    /// `row_i += q_i * row_p` for each `(i, q_i)`.
    fn apply(&mut self, p: u32, updates: Vec<(u32, BigInt)>, mut heap: Option<&mut LengthHeap>) {
        let pivot_vec = self.active[p as usize].vector.clone();
        let pivot_combo = self.active[p as usize].combo.clone();
        let compute = |(i, q): &(u32, BigInt), a: &Active| {
            let mut v = a.vector.clone();
            v.add_scaled(q, &pivot_vec);
            let mut c = a.combo.clone();
            c.add_scaled(q, &pivot_combo);
            (*i, v, c)
        };
        let active = &self.active;
        let results: Vec<(u32, SparseRow, SparseRow)> = if updates.len() >= PARALLEL_THRESHOLD {
            updates.par_iter().map(|u| compute(u, &active[u.0 as usize])).collect()
        } else {
            updates.iter().map(|u| compute(u, &active[u.0 as usize])).collect()
        };
        for (i, v, c) in results {
            for (col, _) in pivot_vec.entries() {
                if self.active[i as usize].vector.get(*col).is_none() && v.get(*col).is_some() {
                    self.col_rows[*col as usize].push(i);
                }
            }
            let a = &mut self.active[i as usize];
            a.vector = v;
            a.combo = c;
            if a.vector.is_empty() {
                a.alive = false;
                a.combo = SparseRow::new();
            } else if let Some(h) = heap.as_deref_mut() {
                h.push(Reverse((a.vector.len(), i)));
            }
        }
    }

    fn retire(&mut self, p: u32, col: u32) {
        let a = &mut self.active[p as usize];
        a.alive = false;
        let mut vector = std::mem::take(&mut a.vector);
        let mut combo = std::mem::take(&mut a.combo);
        if vector.get(col).expect("pivot entry").is_negative() {
            vector.negate();
            combo.negate();
        }
        self.col_rows[col as usize].clear();
        self.done.push((vector, col, combo));
    }

    fn unit_phase(&mut self) {
        let mut heap: LengthHeap = self
            .active
            .iter()
            .enumerate()
            .filter(|(_, a)| a.alive)
            .map(|(i, a)| Reverse((a.vector.len(), i as u32)))
            .collect();
        while let Some(Reverse((len, id))) = heap.pop() {
            let a = &self.active[id as usize];
            if !a.alive || a.vector.len() != len {
                continue;
            }
            let choice = a
                .vector
                .entries()
                .iter()
                .filter(|(_, v)| v.abs().is_one())
                .map(|(c, _)| (self.col_rows[*c as usize].len(), *c))
                .min();
            // Rows without unit entries wait; they are pushed again if a
            // later step changes them.
            let Some((_, col)) = choice else { continue };
            let pivot_value = self.active[id as usize].vector.get(col).unwrap().clone();
            let updates: Vec<(u32, BigInt)> = self
                .rows_in_column(col)
                .into_iter()
                .filter(|&i| i != id)
                .map(|i| {
                    let v = self.active[i as usize].vector.get(col).unwrap();
                    (i, -(v * &pivot_value))
                })
                .collect();
            self.apply(id, updates, Some(&mut heap));
            self.retire(id, col);
        }
    }

    fn euclid_phase(&mut self) {
        loop {
            let alive: Vec<u32> = (0..self.active.len() as u32)
                .filter(|&i| self.active[i as usize].alive)
                .collect();
            if alive.is_empty() {
                return;
            }
            let mut counts = vec![0usize; self.columns];
            for &i in &alive {
                for (c, _) in self.active[i as usize].vector.entries() {
                    counts[*c as usize] += 1;
                }
            }
            let col = (0..self.columns)
                .filter(|&c| counts[c] > 0)
                .min_by_key(|&c| (counts[c], c))
                .expect("alive rows are nonzero") as u32;
            let mut ids: Vec<u32> = alive
                .into_iter()
                .filter(|&i| self.active[i as usize].vector.get(col).is_some())
                .collect();
            while ids.len() > 1 {
                let value = |i: u32| self.active[i as usize].vector.get(col).unwrap();
                let p = *ids
                    .iter()
                    .min_by(|&&a, &&b| value(a).abs().cmp(&value(b).abs()).then(a.cmp(&b)))
                    .unwrap();
                let pv = value(p).clone();
                let updates: Vec<(u32, BigInt)> = ids
                    .iter()
                    .filter(|&&i| i != p)
                    .map(|&i| (i, -nearest_quotient(value(i), &pv)))
                    .collect();
                self.apply(p, updates, None);
                ids.retain(|&i| i == p || self.active[i as usize].vector.get(col).is_some());
            }
            self.retire(ids[0], col);
        }
    }
}

impl EchelonBasis {
    /// Builds the basis of the lattice spanned by `rows`.
    pub fn from_rows<'a, I>(columns: usize, rows: I) -> EchelonBasis
    where
        I: IntoIterator<Item = &'a SparseRow>,
    {
        let rows: Vec<&SparseRow> = rows.into_iter().collect();
        assert!(
            rows.iter()
                .all(|r| r.entries().last().map_or(true, |(c, _)| (*c as usize) < columns)),
            "row exceeds the ambient dimension"
        );
        let mut weight = vec![0usize; columns];
        for r in &rows {
            for (c, _) in r.entries() {
                weight[*c as usize] += 1;
            }
        }
        let mut basis = EchelonBasis {
            columns,
            generators: rows.len(),
            rows: Vec::new(),
            history: Vec::new(),
            row_of_pivot: vec![None; columns],
            small: Vec::new(),
        };
        let offset = rows.len() as u32;
        // (generator, residue, quotients so far, basis rows reduced by)
        let mut pending: Vec<(u32, SparseRow, Vec<(u32, BigInt)>, usize)> = Vec::new();
        for (n, chunk) in rows.chunks(CHUNK).enumerate() {
            let mark = basis.rows.len();
            let advanced: Vec<Advance> = chunk.par_iter().map(|r| basis.advance(r, 0)).collect();
            for (i, first) in advanced.into_iter().enumerate() {
                let g = (n * CHUNK + i) as u32;
                // Catch up with rows added earlier in this chunk.
                let Advance { vector, quotients, .. } = basis.advance(&first.vector, mark);
                if vector.is_empty() {
                    continue;
                }
                let mut all = first.quotients;
                all.extend(quotients);
                let unit = vector
                    .entries()
                    .iter()
                    .filter(|(_, x)| x.abs().is_one())
                    .min_by_key(|(c, _)| (weight[*c as usize], *c))
                    .map(|(c, _)| *c);
                match unit {
                    Some(col) => {
                        let recipe = recipe_from(g, offset, all);
                        basis.push_row(vector, col, recipe);
                    }
                    None => pending.push((g, vector, all, basis.rows.len())),
                }
            }
        }
        let units = basis.rows.len();
        let (inputs, recipes): (Vec<SparseRow>, Vec<Vec<(u32, BigInt)>>) = pending
            .into_par_iter()
            .filter_map(|(g, v, mut quotients, from)| {
                let Advance { vector, quotients: more, .. } = basis.advance(&v, from);
                if vector.is_empty() {
                    return None;
                }
                quotients.extend(more);
                Some((vector, quotients_recipe(g, offset, quotients)))
            })
            .unzip();
        let mut e = Eliminator::new(columns, inputs);
        e.unit_phase();
        e.euclid_phase();
        for (vector, pivot, combo) in e.done {
            let mut recipe: Vec<(u32, BigInt)> = Vec::new();
            for (j, c) in combo.entries() {
                recipe.extend(recipes[*j as usize].iter().map(|(k, v)| (*k, c * v)));
            }
            basis.push_row(vector, pivot, SparseRow::from_pairs(recipe));
        }
        debug_assert!(basis.rows[units..].iter().all(|r| {
            basis.rows[..units].iter().all(|u| r.vector.get(u.pivot).is_none())
        }));
        basis
    }

    fn push_row(&mut self, mut vector: SparseRow, pivot: u32, mut recipe: SparseRow) {
        if vector.get(pivot).expect("pivot entry").is_negative() {
            vector.negate();
            recipe.negate();
        }
        self.history.push(recipe);
        let version = (self.history.len() - 1) as u32;
        self.row_of_pivot[pivot as usize] = Some(self.rows.len() as u32);
        self.small.push(small_copy(&vector));
        self.rows.push(BasisRow {
            vector,
            pivot,
            version,
        });
    }

    /// Reduces `v` by rows `from..` until a pivot fails to divide.
    fn advance(&self, v: &SparseRow, from: usize) -> Advance {
        self.advance_small(v, from)
            .unwrap_or_else(|| self.advance_big(v, from))
    }

    fn advance_small(&self, v: &SparseRow, from: usize) -> Option<Advance> {
        let mut ws = vec![0i64; self.columns];
        let mut touched: Vec<u32> = Vec::with_capacity(v.len() * 4);
        for (c, x) in v.entries() {
            ws[*c as usize] = x.to_i64()?;
            touched.push(*c);
        }
        let mut quotients = Vec::new();
        let mut conflict = None;
        for (i, (row, small)) in self.rows.iter().zip(&self.small).enumerate().skip(from) {
            let b = ws[row.pivot as usize];
            if b == 0 {
                continue;
            }
            let small = small.as_ref()?;
            let a = row.pivot_value().to_i64()?;
            if b % a != 0 {
                conflict = Some(i);
                break;
            }
            let q = b / a;
            for &(c, x) in small {
                let slot = &mut ws[c as usize];
                if *slot == 0 {
                    touched.push(c);
                }
                *slot = slot.checked_sub(q.checked_mul(x)?)?;
            }
            quotients.push((row.version, BigInt::from(q)));
        }
        touched.sort_unstable();
        touched.dedup();
        let vector = SparseRow::from_pairs(
            touched
                .into_iter()
                .filter(|c| ws[*c as usize] != 0)
                .map(|c| (c, BigInt::from(ws[c as usize]))),
        );
        Some(Advance {
            vector,
            quotients,
            conflict,
        })
    }

    fn advance_big(&self, v: &SparseRow, from: usize) -> Advance {
        let mut ws = v.to_dense(self.columns);
        let mut quotients = Vec::new();
        let mut conflict = None;
        for (i, row) in self.rows.iter().enumerate().skip(from) {
            let b = &ws[row.pivot as usize];
            if b.is_zero() {
                continue;
            }
            let (q, rem) = b.div_rem(row.pivot_value());
            if !rem.is_zero() {
                conflict = Some(i);
                break;
            }
            for (c, x) in row.vector.entries() {
                ws[*c as usize] -= &q * x;
            }
            quotients.push((row.version, q));
        }
        Advance {
            vector: SparseRow::from_dense(&ws),
            quotients,
            conflict,
        }
    }

    /// Rebuilds from stored parts; `None` if they are inconsistent.
    pub fn from_parts(
        columns: usize,
        generators: usize,
        rows: Vec<BasisRow>,
        history: Vec<SparseRow>,
    ) -> Option<EchelonBasis> {
        let mut seen = vec![false; columns];
        for r in &rows {
            let p = r.pivot as usize;
            if p >= columns
                || seen[p]
                || !r.vector.get(r.pivot).map_or(false, Signed::is_positive)
                || r.vector.entries().last().map_or(true, |(c, _)| *c as usize >= columns)
                || r.version as usize >= history.len()
            {
                return None;
            }
            seen[p] = true;
        }
        for (i, r) in rows.iter().enumerate() {
            if rows[..i].iter().any(|e| r.vector.get(e.pivot).is_some()) {
                return None;
            }
        }
        for (v, recipe) in history.iter().enumerate() {
            if recipe
                .entries()
                .iter()
                .any(|(k, _)| *k as usize >= generators + v)
            {
                return None;
            }
        }
        let mut row_of_pivot = vec![None; columns];
        for (i, r) in rows.iter().enumerate() {
            row_of_pivot[r.pivot as usize] = Some(i as u32);
        }
        let small = rows.iter().map(|r| small_copy(&r.vector)).collect();
        Some(EchelonBasis {
            columns,
            generators,
            rows,
            history,
            row_of_pivot,
            small,
        })
    }

    pub fn columns(&self) -> usize {
        self.columns
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn generator_count(&self) -> usize {
        self.generators
    }

    /// Basis rows in reduction order.
    pub fn rows(&self) -> &[BasisRow] {
        &self.rows
    }

    /// Recipes of all row versions.
    pub fn history(&self) -> &[SparseRow] {
        &self.history
    }

    pub fn pivot_columns(&self) -> Vec<u32> {
        self.rows.iter().map(|r| r.pivot).collect()
    }

    pub fn row_for_pivot(&self, col: u32) -> Option<&BasisRow> {
        self.row_of_pivot[col as usize].map(|i| &self.rows[i as usize])
    }

    /// Exact word-sized membership test; `None` when a value leaves `i128`.
    pub fn quick_contains(&self, target: &SparseRow) -> Option<bool> {
        let mut ws = vec![0i128; self.columns];
        let mut nonzero = 0usize;
        for (c, v) in target.entries() {
            ws[*c as usize] = v.to_i128()?;
            nonzero += 1;
        }
        for (row, small) in self.rows.iter().zip(&self.small) {
            if nonzero == 0 {
                return Some(true);
            }
            let b = ws[row.pivot as usize];
            if b == 0 {
                continue;
            }
            let small = small.as_ref()?;
            let a = row.pivot_value().to_i128().expect("small row");
            if b % a != 0 {
                return Some(false);
            }
            let q = b / a;
            for &(c, v) in small {
                let slot = &mut ws[c as usize];
                let before = *slot != 0;
                *slot = slot.checked_sub(q.checked_mul(v as i128)?)?;
                match (before, *slot != 0) {
                    (true, false) => nonzero -= 1,
                    (false, true) => nonzero += 1,
                    _ => {}
                }
            }
        }
        Some(nonzero == 0)
    }

    /// Reduces `target`; on success returns its coefficients over the
    /// generator rows.
    pub fn reduce(&self, target: &SparseRow) -> Reduction {
        if self.quick_contains(target) == Some(false) {
            return Reduction::NotMember;
        }
        let adv = self.advance_big(target, 0);
        if adv.conflict.is_some() || !adv.vector.is_empty() {
            return Reduction::NotMember;
        }
        Reduction::Member(self.unfold(adv.quotients))
    }

    /// Expresses `sum q * version` over the generators.
    fn unfold(&self, terms: Vec<(u32, BigInt)>) -> SparseRow {
        let g = self.generators as u32;
        let mut pending: BTreeMap<u32, BigInt> = BTreeMap::new();
        for (v, q) in terms {
            *pending.entry(v).or_insert_with(BigInt::zero) += q;
        }
        let mut out: Vec<(u32, BigInt)> = Vec::new();
        // Recipes only refer to earlier versions, so the latest pending
        // version is final when popped.
        while let Some((v, a)) = pending.pop_last() {
            if a.is_zero() {
                continue;
            }
            for (k, c) in self.history[v as usize].entries() {
                if *k < g {
                    out.push((*k, &a * c));
                } else {
                    *pending.entry(*k - g).or_insert_with(BigInt::zero) += &a * c;
                }
            }
        }
        SparseRow::from_pairs(out)
    }

    pub fn contains(&self, target: &SparseRow) -> bool {
        match self.quick_contains(target) {
            Some(answer) => answer,
            None => matches!(self.reduce(target), Reduction::Member(_)),
        }
    }

    /// Least positive multiple of `target` in the lattice, or infinite when
    /// `target` leaves the rational span. Whenever a pivot does not divide
    /// the current entry, the residual is scaled by the smallest factor that
    /// makes the step exact; the product of these factors is the order.
    pub fn order_of(&self, target: &SparseRow) -> Order {
        let mut ws = target.to_dense(self.columns);
        let mut order = BigInt::one();
        for row in &self.rows {
            let b = ws[row.pivot as usize].clone();
            if b.is_zero() {
                continue;
            }
            let a = row.pivot_value();
            let g = b.gcd(a);
            let scale = a / &g;
            if !scale.is_one() {
                for v in ws.iter_mut().filter(|v| !v.is_zero()) {
                    *v *= &scale;
                }
                order *= &scale;
            }
            let q = &b / &g;
            for (c, v) in row.vector.entries() {
                ws[*c as usize] -= &q * v;
            }
        }
        if ws.iter().any(|v| !v.is_zero()) {
            return Order::Infinite;
        }
        Order::from_bigint(&order)
    }

    /// Structure of `Z^columns / lattice`: free rank and the invariant
    /// factors greater than one.
    ///
    /// A basis row with a unit pivot splits off a trivial summand once its
    /// pivot column is cleared from the earlier rows; only the rows with
    /// larger pivots go through a dense Smith reduction.
    pub fn quotient_structure(&self) -> (usize, Vec<BigInt>) {
        let mut rows: Vec<SparseRow> = self.rows.iter().map(|r| r.vector.clone()).collect();
        let is_unit: Vec<bool> = self.rows.iter().map(|r| r.pivot_value().is_one()).collect();
        // Later rows vanish on earlier pivots, so clearing from the last unit
        // row backwards never brings a cleared column back.
        for i in (0..rows.len()).rev() {
            if !is_unit[i] {
                continue;
            }
            let p = self.rows[i].pivot;
            let (head, tail) = rows.split_at_mut(i);
            let src = &tail[0];
            for row in head.iter_mut() {
                if let Some(v) = row.get(p).cloned() {
                    row.add_scaled(&-v, src);
                }
            }
        }
        let units = is_unit.iter().filter(|&&u| u).count();
        let kept = self.columns - units;
        let remaining: Vec<&SparseRow> = rows
            .iter()
            .zip(&is_unit)
            .filter(|(_, &u)| !u)
            .map(|(r, _)| r)
            .collect();
        if remaining.is_empty() {
            return (kept, Vec::new());
        }
        let mut touched: Vec<u32> = remaining
            .iter()
            .flat_map(|r| r.entries().iter().map(|(c, _)| *c))
            .collect();
        touched.sort_unstable();
        touched.dedup();
        let dense: Vec<Vec<BigInt>> = remaining
            .iter()
            .map(|r| {
                touched
                    .iter()
                    .map(|c| r.get(*c).cloned().unwrap_or_else(BigInt::zero))
                    .collect()
            })
            .collect();
        let m = IntMatrix::new(touched.len(), dense).expect("rectangular");
        let SmithForm { invariants, .. } = super::snf(&m);
        let free = kept - invariants.len();
        let torsion = invariants.into_iter().filter(|d| !d.is_one()).collect();
        (free, torsion)
    }

    /// Dense copy of the basis rows in reduction order.
    pub fn to_matrix(&self) -> IntMatrix {
        IntMatrix::new(
            self.columns,
            self.rows.iter().map(|r| r.vector.to_dense(self.columns)).collect(),
        )
        .expect("rectangular")
    }
}
