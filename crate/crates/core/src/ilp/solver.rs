//! Depth-first branch-and-bound for pure binary programs.
//!
//! Every variable has a *preferred* value: the one that is best for the
//! objective (0 on ties). A node's optimistic bound is the objective of the
//! preferred completion of its free variables. On top of that bound the
//! solver packs rows that the preferred completion violates and that share no
//! repairing variable: each such row forces at least one deviation, so the
//! cheapest deviation per packed row can be added to the bound.
//!
//! When the preferred completion violates no row it is feasible and attains
//! the bound, so the node is solved without further branching. Otherwise the
//! solver branches on a repairing variable of the most expensive violated row.
//! Rows are propagated (bound tightening on partial activities) after every
//! assignment. Everything is deterministic for a fixed model.

use std::collections::VecDeque;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::ilp::{Cmp, IlpModel, Sense};

const EPS: f64 = 1e-7;
const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, Default)]
pub struct SolveOptions {
    pub time_limit: Option<Duration>,
    /// Deterministic budget on branch-and-bound nodes.
    pub node_limit: Option<u64>,
}

impl SolveOptions {
    pub fn unlimited() -> Self {
        Self::default()
    }

    pub fn with_time_limit(limit: Duration) -> Self {
        SolveOptions { time_limit: Some(limit), node_limit: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveStatus {
    Optimal,
    FeasibleIncumbent,
    Infeasible,
    TimeoutNoIncumbent,
}

#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    pub assignment: Option<Vec<bool>>,
    pub objective: Option<f64>,
    pub nodes: u64,
    pub elapsed: Duration,
}

impl SolveOutcome {
    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }

    pub fn value(&self, v: crate::ilp::VarId) -> bool {
        self.assignment.as_ref().is_some_and(|a| a[v.0])
    }
}

pub fn solve(model: &IlpModel, opts: SolveOptions) -> SolveOutcome {
    solve_inner(model, opts, None)
}

/// Like [`solve`], seeded with a known solution. An infeasible `warm` start
/// is ignored.
pub fn solve_from(model: &IlpModel, opts: SolveOptions, warm: &[bool]) -> SolveOutcome {
    solve_inner(model, opts, Some(warm))
}

fn solve_inner(model: &IlpModel, opts: SolveOptions, warm: Option<&[bool]>) -> SolveOutcome {
    let start = Instant::now();
    let sign = if model.sense() == Sense::Maximize { -1.0 } else { 1.0 };
    let mut s = Search::new(model);
    let seed = warm.filter(|x| model.is_feasible(x)).map(|x| (sign * model.evaluate(x), x.to_vec()));
    let (incumbent, complete) = s.run(opts, start, seed);
    let status = match (&incumbent, complete) {
        (Some(_), true) => SolveStatus::Optimal,
        (None, true) => SolveStatus::Infeasible,
        (Some(_), false) => SolveStatus::FeasibleIncumbent,
        (None, false) => SolveStatus::TimeoutNoIncumbent,
    };
    let objective = incumbent.as_ref().map(|(v, _)| sign * v);
    SolveOutcome {
        status,
        assignment: incumbent.map(|(_, x)| x),
        objective,
        nodes: s.nodes,
        elapsed: start.elapsed(),
    }
}

struct Frame {
    var: u32,
    alt: u8,
    mark: usize,
    tried: bool,
}

struct Search {
    // static rows (CSR)
    lo: Vec<f64>,
    hi: Vec<f64>,
    max_abs: Vec<f64>,
    row_start: Vec<usize>,
    row_var: Vec<u32>,
    row_coef: Vec<f64>,
    // static columns
    col_start: Vec<usize>,
    col_row: Vec<u32>,
    col_coef: Vec<f64>,
    // objective in minimisation form
    cost: Vec<f64>,
    pref: Vec<u8>,
    dev: Vec<f64>,
    constant: f64,
    integral: bool,
    // dynamic row state
    fixed: Vec<f64>,
    umin: Vec<f64>,
    umax: Vec<f64>,
    upref: Vec<f64>,
    viol: Vec<u32>,
    viol_pos: Vec<u32>,
    queue: VecDeque<u32>,
    queued: Vec<bool>,
    // dynamic variable state
    value: Vec<i8>,
    trail: Vec<u32>,
    obj_fixed: f64,
    obj_free: f64,
    stamp: Vec<u32>,
    generation: u32,
    nodes: u64,
    incumbent: Option<f64>,
}

impl Search {
    fn new(m: &IlpModel) -> Self {
        let n = m.num_vars();
        let sign = if m.sense() == Sense::Maximize { -1.0 } else { 1.0 };
        let mut cost = vec![0.0; n];
        for &(v, c) in m.objective() {
            cost[v.0] = sign * c;
        }
        let pref: Vec<u8> = cost.iter().map(|&c| u8::from(c < 0.0)).collect();
        let dev: Vec<f64> = cost.iter().map(|c| c.abs()).collect();
        let constant = sign * m.objective_constant();
        let integral = cost.iter().all(|c| c.fract() == 0.0) && constant.fract() == 0.0;

        let rows = m.constraints();
        let mut lo = Vec::with_capacity(rows.len());
        let mut hi = Vec::with_capacity(rows.len());
        let mut max_abs = Vec::with_capacity(rows.len());
        let mut row_start = vec![0];
        let mut row_var = Vec::new();
        let mut row_coef = Vec::new();
        let mut col_count = vec![0usize; n];
        for c in rows {
            let (l, h) = match c.cmp {
                Cmp::Le => (f64::NEG_INFINITY, c.rhs),
                Cmp::Ge => (c.rhs, f64::INFINITY),
                Cmp::Eq => (c.rhs, c.rhs),
            };
            lo.push(l);
            hi.push(h);
            max_abs.push(c.terms.iter().map(|t| t.1.abs()).fold(0.0, f64::max));
            for &(v, a) in &c.terms {
                row_var.push(v.0 as u32);
                row_coef.push(a);
                col_count[v.0] += 1;
            }
            row_start.push(row_var.len());
        }
        let mut col_start = vec![0usize; n + 1];
        for j in 0..n {
            col_start[j + 1] = col_start[j] + col_count[j];
        }
        let mut fill = col_start.clone();
        let mut col_row = vec![0u32; row_var.len()];
        let mut col_coef = vec![0.0; row_var.len()];
        for r in 0..rows.len() {
            for k in row_start[r]..row_start[r + 1] {
                let j = row_var[k] as usize;
                col_row[fill[j]] = r as u32;
                col_coef[fill[j]] = row_coef[k];
                fill[j] += 1;
            }
        }

        let nr = rows.len();
        let mut s = Search {
            lo,
            hi,
            max_abs,
            row_start,
            row_var,
            row_coef,
            col_start,
            col_row,
            col_coef,
            obj_free: cost.iter().map(|&c| c.min(0.0)).sum(),
            cost,
            pref,
            dev,
            constant,
            integral,
            fixed: vec![0.0; nr],
            umin: vec![0.0; nr],
            umax: vec![0.0; nr],
            upref: vec![0.0; nr],
            viol: Vec::new(),
            viol_pos: vec![NONE; nr],
            queue: VecDeque::new(),
            queued: vec![false; nr],
            value: vec![-1; n],
            trail: Vec::with_capacity(n),
            obj_fixed: 0.0,
            stamp: vec![0; n],
            generation: 0,
            nodes: 0,
            incumbent: None,
        };
        for r in 0..nr {
            for k in s.row_start[r]..s.row_start[r + 1] {
                let a = s.row_coef[k];
                let j = s.row_var[k] as usize;
                s.umin[r] += a.min(0.0);
                s.umax[r] += a.max(0.0);
                s.upref[r] += a * f64::from(s.pref[j]);
            }
            s.refresh_violation(r);
        }
        s
    }

    fn refresh_violation(&mut self, r: usize) {
        let act = self.fixed[r] + self.upref[r];
        let bad = act < self.lo[r] - EPS || act > self.hi[r] + EPS;
        let pos = self.viol_pos[r];
        if bad && pos == NONE {
            self.viol_pos[r] = self.viol.len() as u32;
            self.viol.push(r as u32);
        } else if !bad && pos != NONE {
            let last = *self.viol.last().unwrap();
            self.viol.swap_remove(pos as usize);
            if last as usize != r {
                self.viol_pos[last as usize] = pos;
            }
            self.viol_pos[r] = NONE;
        }
    }

    fn assign(&mut self, j: usize, val: u8) {
        debug_assert_eq!(self.value[j], -1);
        self.value[j] = val as i8;
        self.trail.push(j as u32);
        let x = f64::from(val);
        let p = f64::from(self.pref[j]);
        self.obj_fixed += self.cost[j] * x;
        self.obj_free -= self.cost[j].min(0.0);
        for k in self.col_start[j]..self.col_start[j + 1] {
            let r = self.col_row[k] as usize;
            let a = self.col_coef[k];
            self.fixed[r] += a * x;
            self.umin[r] -= a.min(0.0);
            self.umax[r] -= a.max(0.0);
            self.upref[r] -= a * p;
            self.refresh_violation(r);
            if !self.queued[r] {
                self.queued[r] = true;
                self.queue.push_back(r as u32);
            }
        }
    }

    fn unassign_last(&mut self) {
        let j = self.trail.pop().unwrap() as usize;
        let x = f64::from(self.value[j] as u8);
        let p = f64::from(self.pref[j]);
        self.value[j] = -1;
        self.obj_fixed -= self.cost[j] * x;
        self.obj_free += self.cost[j].min(0.0);
        for k in self.col_start[j]..self.col_start[j + 1] {
            let r = self.col_row[k] as usize;
            let a = self.col_coef[k];
            self.fixed[r] -= a * x;
            self.umin[r] += a.min(0.0);
            self.umax[r] += a.max(0.0);
            self.upref[r] += a * p;
            self.refresh_violation(r);
        }
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            self.unassign_last();
        }
    }

    fn clear_queue(&mut self) {
        while let Some(r) = self.queue.pop_front() {
            self.queued[r as usize] = false;
        }
    }

    /// Returns false on conflict.
    fn propagate(&mut self) -> bool {
        while let Some(r) = self.queue.pop_front() {
            let r = r as usize;
            self.queued[r] = false;
            let min_act = self.fixed[r] + self.umin[r];
            let max_act = self.fixed[r] + self.umax[r];
            if min_act > self.hi[r] + EPS || max_act < self.lo[r] - EPS {
                self.clear_queue();
                return false;
            }
            let slack_hi = self.hi[r] - min_act;
            let slack_lo = max_act - self.lo[r];
            if slack_hi + EPS >= self.max_abs[r] && slack_lo + EPS >= self.max_abs[r] {
                continue;
            }
            for k in self.row_start[r]..self.row_start[r + 1] {
                let j = self.row_var[k] as usize;
                if self.value[j] >= 0 {
                    continue;
                }
                let a = self.row_coef[k];
                // value that would break the upper / lower side
                let (bad_hi, bad_lo) = if a > 0.0 { (1u8, 0u8) } else { (0u8, 1u8) };
                let mut forbid = [false; 2];
                if a.abs() > slack_hi + EPS {
                    forbid[bad_hi as usize] = true;
                }
                if a.abs() > slack_lo + EPS {
                    forbid[bad_lo as usize] = true;
                }
                match forbid {
                    [true, true] => {
                        self.clear_queue();
                        return false;
                    }
                    [true, false] => self.assign(j, 1),
                    [false, true] => self.assign(j, 0),
                    [false, false] => {}
                }
                if forbid[0] || forbid[1] {
                    // the row's slacks changed; re-examine it from scratch
                    if !self.queued[r] {
                        self.queued[r] = true;
                        self.queue.push_back(r as u32);
                    }
                    break;
                }
            }
        }
        true
    }

    fn prunes(&self, bound: f64) -> bool {
        match self.incumbent {
            None => false,
            Some(best) if self.integral => bound > best - 1.0 + 1e-6,
            Some(best) => bound >= best - 1e-9 * (1.0 + best.abs()),
        }
    }

    /// Evaluate the current node. Returns the branching decision, or None
    /// when the node is closed (pruned, infeasible, or solved).
    fn evaluate(&mut self, best: &mut Option<(f64, Vec<bool>)>) -> Option<(usize, u8)> {
        let base = self.constant + self.obj_fixed + self.obj_free;
        if self.prunes(base) {
            return None;
        }
        if self.viol.is_empty() {
            let x: Vec<bool> = (0..self.value.len())
                .map(|j| if self.value[j] >= 0 { self.value[j] == 1 } else { self.pref[j] == 1 })
                .collect();
            self.incumbent = Some(base);
            *best = Some((base, x));
            return None;
        }

        self.generation = self.generation.wrapping_add(1);
        if self.generation == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.generation = 1;
        }
        let mut packed = 0.0;
        let mut pick: Option<(f64, usize)> = None;
        for idx in 0..self.viol.len() {
            let r = self.viol[idx] as usize;
            let act = self.fixed[r] + self.upref[r];
            let too_high = act > self.hi[r] + EPS;
            let mut fix = f64::INFINITY;
            let mut disjoint = true;
            for k in self.row_start[r]..self.row_start[r + 1] {
                let j = self.row_var[k] as usize;
                if self.value[j] >= 0 || !self.helps(j, self.row_coef[k], too_high) {
                    continue;
                }
                fix = fix.min(self.dev[j]);
                if self.stamp[j] == self.generation {
                    disjoint = false;
                }
            }
            if fix.is_infinite() {
                return None;
            }
            if disjoint && fix > 0.0 {
                packed += fix;
                for k in self.row_start[r]..self.row_start[r + 1] {
                    let j = self.row_var[k] as usize;
                    if self.value[j] < 0 && self.helps(j, self.row_coef[k], too_high) {
                        self.stamp[j] = self.generation;
                    }
                }
            }
            let better = match pick {
                None => true,
                Some((c, pr)) => fix > c + EPS || ((fix - c).abs() <= EPS && r < pr),
            };
            if better {
                pick = Some((fix, r));
            }
        }
        if self.prunes(base + packed) {
            return None;
        }

        let (_, r) = pick.unwrap();
        let act = self.fixed[r] + self.upref[r];
        let too_high = act > self.hi[r] + EPS;
        let mut choice: Option<usize> = None;
        for k in self.row_start[r]..self.row_start[r + 1] {
            let j = self.row_var[k] as usize;
            if self.value[j] >= 0 || !self.helps(j, self.row_coef[k], too_high) {
                continue;
            }
            choice = match choice {
                Some(c) if self.dev[c] > self.dev[j] + EPS => Some(c),
                Some(c) if (self.dev[c] - self.dev[j]).abs() <= EPS && c < j => Some(c),
                _ => Some(j),
            };
        }
        let j = choice.unwrap();
        // paid deviations are tried last; free ones go straight to the repair
        let first = if self.dev[j] > 0.0 { self.pref[j] } else { 1 - self.pref[j] };
        Some((j, first))
    }

    /// Moving free variable j off its preferred value pushes the row's
    /// activity in the repairing direction.
    fn helps(&self, j: usize, a: f64, too_high: bool) -> bool {
        let delta = if self.pref[j] == 1 { -a } else { a };
        if too_high {
            delta < 0.0
        } else {
            delta > 0.0
        }
    }

    fn run(
        &mut self,
        opts: SolveOptions,
        start: Instant,
        seed: Option<(f64, Vec<bool>)>,
    ) -> (Option<(f64, Vec<bool>)>, bool) {
        self.incumbent = seed.as_ref().map(|s| s.0);
        let mut best = seed;
        for r in 0..self.lo.len() {
            self.queued[r] = true;
            self.queue.push_back(r as u32);
        }
        if !self.propagate() {
            return (best, true);
        }
        let deadline = opts.time_limit.map(|d| start + d);
        let mut stack: Vec<Frame> = Vec::new();
        loop {
            self.nodes += 1;
            if opts.node_limit.is_some_and(|l| self.nodes > l) {
                return (best, false);
            }
            if self.nodes.is_multiple_of(256) && deadline.is_some_and(|d| Instant::now() >= d) {
                return (best, false);
            }
            if let Some((j, first)) = self.evaluate(&mut best) {
                stack.push(Frame { var: j as u32, alt: 1 - first, mark: self.trail.len(), tried: false });
                self.assign(j, first);
                if self.propagate() {
                    continue;
                }
            }
            if !self.backtrack(&mut stack) {
                return (best, true);
            }
        }
    }

    fn backtrack(&mut self, stack: &mut Vec<Frame>) -> bool {
        while let Some(f) = stack.last_mut() {
            let (mark, var, alt, tried) = (f.mark, f.var as usize, f.alt, f.tried);
            f.tried = true;
            self.undo_to(mark);
            if !tried {
                self.assign(var, alt);
                if self.propagate() {
                    return true;
                }
                continue;
            }
            stack.pop();
        }
        false
    }
}
