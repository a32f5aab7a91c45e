//! Small dense linear programs and a deterministic two-phase primal simplex
//! solver with Bland's anti-cycling rule.
//!
//! The solver targets the master problems of the follow-the-leader learner
//! and assorted test oracles: dense tableaus, no factorization, no warm
//! starts. Determinism matters more than speed here — identical inputs must
//! yield bit-identical solutions, which Bland's rule guarantees by fixing the
//! pivot sequence.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::CoreError;
use crate::math;
use crate::types::DecisionVector;

const PIVOT_TOL: f64 = 1e-9;
const FEAS_TOL: f64 = 1e-7;
const MAX_PIVOTS: usize = 200_000;

/// A dense linear program in minimization form:
///
/// ```text
/// min  objective · x
/// s.t. eq_lhs x == eq_rhs
///      ub_lhs x <= ub_rhs
///      var_lower <= x <= var_upper   (entries may be -inf / +inf)
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct DenseLp {
    pub objective: Vec<f64>,
    pub eq_lhs: Vec<Vec<f64>>,
    pub eq_rhs: Vec<f64>,
    pub ub_lhs: Vec<Vec<f64>>,
    pub ub_rhs: Vec<f64>,
    pub var_lower: Vec<f64>,
    pub var_upper: Vec<f64>,
}

impl DenseLp {
    /// An LP over `n` free variables with no rows; constraints are pushed on.
    pub fn new(objective: Vec<f64>) -> Self {
        let n = objective.len();
        Self {
            objective,
            eq_lhs: Vec::new(),
            eq_rhs: Vec::new(),
            ub_lhs: Vec::new(),
            ub_rhs: Vec::new(),
            var_lower: vec![f64::NEG_INFINITY; n],
            var_upper: vec![f64::INFINITY; n],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn push_eq(&mut self, coeffs: Vec<f64>, rhs: f64) {
        debug_assert_eq!(coeffs.len(), self.num_vars());
        self.eq_lhs.push(coeffs);
        self.eq_rhs.push(rhs);
    }

    pub fn push_ub(&mut self, coeffs: Vec<f64>, rhs: f64) {
        debug_assert_eq!(coeffs.len(), self.num_vars());
        self.ub_lhs.push(coeffs);
        self.ub_rhs.push(rhs);
    }

    fn validate(&self) -> Result<(), CoreError> {
        let n = self.num_vars();
        if n == 0 {
            return Err(CoreError::InvalidParameter("LP must have at least one variable".into()));
        }
        if self.eq_lhs.len() != self.eq_rhs.len() || self.ub_lhs.len() != self.ub_rhs.len() {
            return Err(CoreError::InvalidParameter("row/rhs count mismatch".into()));
        }
        if self.var_lower.len() != n || self.var_upper.len() != n {
            return Err(CoreError::DimensionMismatch { expected: n, got: self.var_lower.len() });
        }
        for row in self.eq_lhs.iter().chain(self.ub_lhs.iter()) {
            if row.len() != n {
                return Err(CoreError::DimensionMismatch { expected: n, got: row.len() });
            }
            if row.iter().any(|x| !x.is_finite()) {
                return Err(CoreError::NonFinite("LP row"));
            }
        }
        if self.objective.iter().any(|x| !x.is_finite()) {
            return Err(CoreError::NonFinite("LP objective"));
        }
        if self.eq_rhs.iter().chain(self.ub_rhs.iter()).any(|x| !x.is_finite()) {
            return Err(CoreError::NonFinite("LP right-hand side"));
        }
        for j in 0..n {
            let (lo, hi) = (self.var_lower[j], self.var_upper[j]);
            if lo.is_nan() || hi.is_nan() || lo == f64::INFINITY || hi == f64::NEG_INFINITY {
                return Err(CoreError::NonFinite("variable bound"));
            }
            if lo > hi {
                return Err(CoreError::InvalidParameter(format!("variable {j} has lower bound above upper bound")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Solver outcome. `point` and `value` are meaningful only when `status` is
/// [`LpStatus::Optimal`]; the point then satisfies every constraint within
/// `1e-7` (scaled by the row magnitude).
#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub point: Vec<f64>,
    pub value: f64,
}

/// How an original variable maps into the nonnegative standard form.
#[derive(Debug, Clone, Copy)]
enum VarMap {
    /// x = shift + z_col
    Shifted { col: usize, shift: f64 },
    /// x = shift - z_col  (upper-bounded only)
    Flipped { col: usize, shift: f64 },
    /// x = z_pos - z_neg  (free)
    Split { pos: usize, neg: usize },
}

/// Two-phase dense primal simplex. Statuses are returned, not raised; only
/// numerical breakdown and malformed input are errors.
pub fn solve_lp(lp: &DenseLp) -> Result<LpSolution, CoreError> {
    lp.validate()?;
    let n = lp.num_vars();

    // Map variables onto nonnegative standard-form columns.
    let mut maps: Vec<VarMap> = Vec::with_capacity(n);
    let mut num_cols = 0usize;
    // Extra rows produced by two-sided finite bounds: z_col <= hi - lo.
    let mut bound_rows: Vec<(usize, f64)> = Vec::new();
    for j in 0..n {
        let (lo, hi) = (lp.var_lower[j], lp.var_upper[j]);
        if lo.is_finite() {
            maps.push(VarMap::Shifted { col: num_cols, shift: lo });
            if hi.is_finite() {
                bound_rows.push((num_cols, hi - lo));
            }
            num_cols += 1;
        } else if hi.is_finite() {
            maps.push(VarMap::Flipped { col: num_cols, shift: hi });
            num_cols += 1;
        } else {
            maps.push(VarMap::Split { pos: num_cols, neg: num_cols + 1 });
            num_cols += 2;
        }
    }

    // Rewrite a row over original variables into standard-form columns and a
    // corrected right-hand side.
    let rewrite = |coeffs: &[f64], rhs: f64| -> (Vec<f64>, f64) {
        let mut out = vec![0.0; num_cols];
        let mut b = rhs;
        for (j, &a) in coeffs.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            match maps[j] {
                VarMap::Shifted { col, shift } => {
                    out[col] += a;
                    b -= a * shift;
                }
                VarMap::Flipped { col, shift } => {
                    out[col] -= a;
                    b -= a * shift;
                }
                VarMap::Split { pos, neg } => {
                    out[pos] += a;
                    out[neg] -= a;
                }
            }
        }
        (out, b)
    };

    // Assemble rows: equalities first, then inequalities (with slack), then
    // bound rows (with slack).
    let num_ub = lp.ub_lhs.len() + bound_rows.len();
    let num_rows = lp.eq_lhs.len() + num_ub;
    let total_cols = num_cols + num_ub; // structural + slacks
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(num_rows);
    let mut rhs: Vec<f64> = Vec::with_capacity(num_rows);
    let mut slack_col_of_row: Vec<Option<usize>> = Vec::with_capacity(num_rows);

    for (r, row) in lp.eq_lhs.iter().enumerate() {
        let (mut z, b) = rewrite(row, lp.eq_rhs[r]);
        z.resize(total_cols, 0.0);
        rows.push(z);
        rhs.push(b);
        slack_col_of_row.push(None);
    }
    let mut slack_cursor = num_cols;
    for (r, row) in lp.ub_lhs.iter().enumerate() {
        let (mut z, b) = rewrite(row, lp.ub_rhs[r]);
        z.resize(total_cols, 0.0);
        z[slack_cursor] = 1.0;
        rows.push(z);
        rhs.push(b);
        slack_col_of_row.push(Some(slack_cursor));
        slack_cursor += 1;
    }
    for &(col, ub) in &bound_rows {
        let mut z = vec![0.0; total_cols];
        z[col] = 1.0;
        z[slack_cursor] = 1.0;
        rows.push(z);
        rhs.push(ub);
        slack_col_of_row.push(Some(slack_cursor));
        slack_cursor += 1;
    }

    // Make every rhs nonnegative; a negated inequality row loses its slack as
    // a valid initial basis column.
    let m = rows.len();
    for i in 0..m {
        if rhs[i] < 0.0 {
            for v in rows[i].iter_mut() {
                *v = -*v;
            }
            rhs[i] = -rhs[i];
            slack_col_of_row[i] = None;
        }
    }

    // Phase 1: artificials for rows without a usable slack basis.
    let mut art_cols: Vec<usize> = Vec::new();
    let mut basis: Vec<usize> = Vec::with_capacity(m);
    let mut width = total_cols;
    for i in 0..m {
        match slack_col_of_row[i] {
            Some(s) => basis.push(s),
            None => {
                for (k, row) in rows.iter_mut().enumerate() {
                    row.push(if k == i { 1.0 } else { 0.0 });
                }
                art_cols.push(width);
                basis.push(width);
                width += 1;
            }
        }
    }
    let is_artificial = |col: usize| col >= total_cols;

    let mut tableau = Tableau { rows, rhs, basis, width };

    if !art_cols.is_empty() {
        let mut phase1_cost = vec![0.0; width];
        for &c in &art_cols {
            phase1_cost[c] = 1.0;
        }
        let status = tableau.run_simplex(&phase1_cost, &|_| false)?;
        debug_assert!(status.is_none(), "phase 1 is bounded below by zero");
        let infeas = tableau.objective_value(&phase1_cost);
        if infeas > FEAS_TOL {
            return Ok(LpSolution { status: LpStatus::Infeasible, point: Vec::new(), value: f64::NAN });
        }
        tableau.drive_out_artificials(total_cols)?;
    }

    // Phase 2 over the original (transformed) objective.
    let mut phase2_cost = vec![0.0; width];
    for (j, &c) in lp.objective.iter().enumerate() {
        if c == 0.0 {
            continue;
        }
        match maps[j] {
            VarMap::Shifted { col, .. } => phase2_cost[col] += c,
            VarMap::Flipped { col, .. } => phase2_cost[col] -= c,
            VarMap::Split { pos, neg } => {
                phase2_cost[pos] += c;
                phase2_cost[neg] -= c;
            }
        }
    }
    if tableau.run_simplex(&phase2_cost, &is_artificial)?.is_some() {
        return Ok(LpSolution { status: LpStatus::Unbounded, point: Vec::new(), value: f64::NEG_INFINITY });
    }

    // Extract the standard-form point, then undo the variable mapping.
    let z = tableau.primal_point();
    let mut x = vec![0.0; n];
    for (j, map) in maps.iter().enumerate() {
        x[j] = match *map {
            VarMap::Shifted { col, shift } => shift + z[col],
            VarMap::Flipped { col, shift } => shift - z[col],
            VarMap::Split { pos, neg } => z[pos] - z[neg],
        };
    }

    verify_point(lp, &x)?;
    let value = math::dot(&lp.objective, &x);
    Ok(LpSolution { status: LpStatus::Optimal, point: x, value })
}

/// Check the returned vertex against every constraint; a violation indicates
/// numerical breakdown and is surfaced instead of silently returned.
fn verify_point(lp: &DenseLp, x: &[f64]) -> Result<(), CoreError> {
    for (i, row) in lp.eq_lhs.iter().enumerate() {
        let lhs = math::dot(row, x);
        let tol = FEAS_TOL * (1.0 + lp.eq_rhs[i].abs());
        if (lhs - lp.eq_rhs[i]).abs() > tol {
            return Err(CoreError::InvalidParameter(format!(
                "simplex returned a point violating equality row {i} by {:e}",
                (lhs - lp.eq_rhs[i]).abs()
            )));
        }
    }
    for (i, row) in lp.ub_lhs.iter().enumerate() {
        let lhs = math::dot(row, x);
        let tol = FEAS_TOL * (1.0 + lp.ub_rhs[i].abs());
        if lhs - lp.ub_rhs[i] > tol {
            return Err(CoreError::InvalidParameter(format!(
                "simplex returned a point violating inequality row {i} by {:e}",
                lhs - lp.ub_rhs[i]
            )));
        }
    }
    for j in 0..lp.num_vars() {
        let tol = FEAS_TOL * (1.0 + x[j].abs());
        if x[j] < lp.var_lower[j] - tol || x[j] > lp.var_upper[j] + tol {
            return Err(CoreError::InvalidParameter(format!("simplex returned a point violating bounds of variable {j}")));
        }
    }
    Ok(())
}

struct Tableau {
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    /// Bland-rule simplex for the given costs. Returns `Some(col)` when the
    /// problem is unbounded along `col`, `None` at an optimum. Columns for
    /// which `banned` holds never enter the basis.
    fn run_simplex(&mut self, cost: &[f64], banned: &dyn Fn(usize) -> bool) -> Result<Option<usize>, CoreError> {
        let m = self.rows.len();
        for _ in 0..MAX_PIVOTS {
            let reduced = self.reduced_costs(cost);
            // Bland: smallest-index column with negative reduced cost.
            let mut entering = None;
            for j in 0..self.width {
                if banned(j) {
                    continue;
                }
                if reduced[j] < -PIVOT_TOL {
                    entering = Some(j);
                    break;
                }
            }
            let Some(col) = entering else {
                return Ok(None);
            };
            // Ratio test; ties take the row whose basic variable has the
            // smallest index (Bland's leaving rule).
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..m {
                let a = self.rows[i][col];
                if a > PIVOT_TOL {
                    let ratio = self.rhs[i] / a;
                    match leave {
                        None => leave = Some((i, ratio)),
                        Some((best_i, best_r)) => {
                            if ratio < best_r || (ratio == best_r && self.basis[i] < self.basis[best_i]) {
                                leave = Some((i, ratio));
                            }
                        }
                    }
                }
            }
            let Some((row, _)) = leave else {
                return Ok(Some(col));
            };
            self.pivot(row, col)?;
        }
        Err(CoreError::LpIterationLimit { iterations: MAX_PIVOTS })
    }

    fn reduced_costs(&self, cost: &[f64]) -> Vec<f64> {
        let mut reduced = cost.to_vec();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = cost[b];
            if cb != 0.0 {
                for j in 0..self.width {
                    reduced[j] -= cb * self.rows[i][j];
                }
            }
        }
        reduced
    }

    fn objective_value(&self, cost: &[f64]) -> f64 {
        self.basis
            .iter()
            .enumerate()
            .map(|(i, &b)| cost[b] * self.rhs[i])
            .sum()
    }

    fn pivot(&mut self, row: usize, col: usize) -> Result<(), CoreError> {
        let p = self.rows[row][col];
        if p.abs() <= PIVOT_TOL {
            return Err(CoreError::LpSingularPivot { row, col, value: p });
        }
        let inv = 1.0 / p;
        for v in self.rows[row].iter_mut() {
            *v *= inv;
        }
        self.rhs[row] *= inv;
        self.rows[row][col] = 1.0;
        for i in 0..self.rows.len() {
            if i == row {
                continue;
            }
            let factor = self.rows[i][col];
            if factor == 0.0 {
                continue;
            }
            let (pivot_row, target_row) = if i < row {
                let (a, b) = self.rows.split_at_mut(row);
                (&b[0], &mut a[i])
            } else {
                let (a, b) = self.rows.split_at_mut(i);
                (&a[row], &mut b[0])
            };
            for j in 0..self.width {
                target_row[j] -= factor * pivot_row[j];
            }
            target_row[col] = 0.0;
            self.rhs[i] -= factor * self.rhs[row];
        }
        self.basis[row] = col;
        Ok(())
    }

    /// After phase 1, pivot artificial variables out of the basis; rows where
    /// no structural column is available are redundant and get blanked.
    fn drive_out_artificials(&mut self, structural_cols: usize) -> Result<(), CoreError> {
        for i in 0..self.rows.len() {
            if self.basis[i] < structural_cols {
                continue;
            }
            let mut pivot_col = None;
            for j in 0..structural_cols {
                if self.rows[i][j].abs() > PIVOT_TOL {
                    pivot_col = Some(j);
                    break;
                }
            }
            match pivot_col {
                Some(col) => self.pivot(i, col)?,
                None => {
                    // Redundant constraint: zero the row so it never pivots.
                    for v in self.rows[i].iter_mut() {
                        *v = 0.0;
                    }
                    self.rhs[i] = 0.0;
                }
            }
        }
        Ok(())
    }

    fn primal_point(&self) -> Vec<f64> {
        let mut z = vec![0.0; self.width];
        for (i, &b) in self.basis.iter().enumerate() {
            z[b] = self.rhs[i];
        }
        z
    }
}

/// One observed polyhedral feasible region `{x : a x <= b}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyhedralInstance {
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
}

impl PolyhedralInstance {
    pub fn new(a: Vec<Vec<f64>>, b: Vec<f64>) -> Result<Self, CoreError> {
        if a.len() != b.len() {
            return Err(CoreError::InvalidParameter("row/rhs count mismatch in polyhedron".into()));
        }
        Ok(Self { a, b })
    }

    pub fn num_rows(&self) -> usize {
        self.b.len()
    }

    pub fn dim(&self) -> usize {
        self.a.first().map(|r| r.len()).unwrap_or(0)
    }
}

/// Polyhedral objective set `{c : ineq c <= rhs, eq c == rhs}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyhedralObjectiveSet {
    pub dim: usize,
    pub ineq_lhs: Vec<Vec<f64>>,
    pub ineq_rhs: Vec<f64>,
    pub eq_lhs: Vec<Vec<f64>>,
    pub eq_rhs: Vec<f64>,
}

impl PolyhedralObjectiveSet {
    /// The unit simplex: `-c <= 0` rows plus the normalization equality.
    pub fn unit_simplex(n: usize) -> Self {
        let mut ineq_lhs = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = vec![0.0; n];
            row[i] = -1.0;
            ineq_lhs.push(row);
        }
        Self {
            dim: n,
            ineq_lhs,
            ineq_rhs: vec![0.0; n],
            eq_lhs: vec![vec![1.0; n]],
            eq_rhs: vec![1.0],
        }
    }

    pub fn contains(&self, c: &[f64], tol: f64) -> bool {
        if c.len() != self.dim {
            return false;
        }
        self.ineq_lhs
            .iter()
            .zip(&self.ineq_rhs)
            .all(|(row, &r)| math::dot(row, c) <= r + tol)
            && self
                .eq_lhs
                .iter()
                .zip(&self.eq_rhs)
                .all(|(row, &r)| (math::dot(row, c) - r).abs() <= tol)
    }

    /// Whether this is exactly the canonical unit-simplex encoding produced
    /// by [`PolyhedralObjectiveSet::unit_simplex`].
    pub fn is_unit_simplex(&self) -> bool {
        *self == Self::unit_simplex(self.dim)
    }
}

/// Assemble the follow-the-leader master problem over the revealed history.
///
/// Variables are `(c, y_1, …, y_{t-1})`; the objective is the total duality
/// gap `sum_tau (b_tau · y_tau − c · x_tau)`; each block contributes the dual
/// feasibility equalities `A_tau^T y_tau − c = 0` with `y_tau >= 0`, and the
/// objective set contributes its rows over `c`. The optimal value is zero
/// exactly when some `c` in the set makes every observed decision optimal.
pub fn build_ftl_lp(
    instances: &[PolyhedralInstance],
    decisions: &[DecisionVector],
    f: &PolyhedralObjectiveSet,
) -> Result<DenseLp, CoreError> {
    if instances.is_empty() {
        return Err(CoreError::EmptyHistory);
    }
    if instances.len() != decisions.len() {
        return Err(CoreError::InvalidParameter("history instances and decisions differ in length".into()));
    }
    let n = f.dim;
    for (tau, inst) in instances.iter().enumerate() {
        if inst.dim() != n {
            return Err(CoreError::DimensionMismatch { expected: n, got: inst.dim() });
        }
        if decisions[tau].len() != n {
            return Err(CoreError::DimensionMismatch { expected: n, got: decisions[tau].len() });
        }
    }

    let total_y: usize = instances.iter().map(|i| i.num_rows()).sum();
    let num_vars = n + total_y;

    // Objective: -sum_tau x_tau on the c block, b_tau on each dual block.
    let mut objective = vec![0.0; num_vars];
    for x in decisions {
        for i in 0..n {
            objective[i] -= x[i];
        }
    }
    let mut offset = n;
    for inst in instances {
        for (r, &b) in inst.b.iter().enumerate() {
            objective[offset + r] = b;
        }
        offset += inst.num_rows();
    }

    let mut lp = DenseLp::new(objective);
    // Dual blocks are nonnegative, c stays free (the objective set's rows
    // confine it).
    for j in n..num_vars {
        lp.var_lower[j] = 0.0;
    }

    // A_tau^T y_tau - c = 0, one equality per coordinate per block.
    let mut offset = n;
    for inst in instances {
        let m = inst.num_rows();
        for i in 0..n {
            let mut row = vec![0.0; num_vars];
            row[i] = -1.0;
            for r in 0..m {
                row[offset + r] = inst.a[r][i];
            }
            lp.push_eq(row, 0.0);
        }
        offset += m;
    }

    // Objective-set rows act on the c block only.
    for (row, &r) in f.ineq_lhs.iter().zip(&f.ineq_rhs) {
        let mut full = vec![0.0; num_vars];
        full[..n].copy_from_slice(row);
        lp.push_ub(full, r);
    }
    for (row, &r) in f.eq_lhs.iter().zip(&f.eq_rhs) {
        let mut full = vec![0.0; num_vars];
        full[..n].copy_from_slice(row);
        lp.push_eq(full, r);
    }

    Ok(lp)
}
