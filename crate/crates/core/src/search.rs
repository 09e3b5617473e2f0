//! Backtracking search for operation tables satisfying a variety's
//! equations.
//!
//! Every instance of every defining equation (one per variable assignment)
//! is watched on the first undefined table cell its evaluation runs into.
//! Assigning a cell re-evaluates exactly the instances watching it: they
//! either complete (and are compared), move to their next undefined cell, or
//! force a value when one side is known and the other side only lacks its
//! outermost lookup. Watches are pushed onto per-cell stacks and popped on
//! backtracking, so each instance always sits on its current first blocked
//! cell.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{for_each_tuple, table_index, Term, Variety};
use crate::{Error, Limits, Result};

const UNSET: u32 = u32::MAX;

/// Whether to keep searching after a solution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flow {
    Continue,
    Stop,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub solutions: u64,
}

/// A sequence of decisions `(cell, value)` leading to a subtree.
pub type Prefix = Vec<(usize, u32)>;

#[derive(Clone, Debug)]
enum Instr {
    Var(usize),
    App(usize),
}

#[derive(Clone, Debug)]
struct Program {
    lhs: Vec<Instr>,
    rhs: Vec<Instr>,
    vars: usize,
}

enum Eval {
    Value(u32),
    /// First undefined cell, and whether it is the outermost lookup.
    Blocked(usize, bool),
}

#[derive(Clone, Copy, Debug)]
enum Undo {
    Assigned(usize),
    Watched(usize),
}

#[derive(Clone, Debug)]
struct Frame {
    cell: usize,
    next: usize,
    mark: usize,
    scan: usize,
}

/// Table search over a fixed carrier for one variety.
#[derive(Clone, Debug)]
pub struct TableSearch {
    n: usize,
    arities: Vec<usize>,
    offsets: Vec<usize>,
    zero_op: usize,
    tables: Vec<u32>,
    candidates: Vec<Option<Vec<u32>>>,
    pinned: Vec<(usize, u32)>,
    programs: Vec<Program>,
    inst_offsets: Vec<usize>,
    watches: Vec<Vec<u32>>,
    trail: Vec<Undo>,
    queue: Vec<usize>,
    order: Vec<usize>,
    prepared: bool,
    dead: bool,
    nodes: u64,
    max_nodes: u64,
    scratch: Vec<u32>,
    assignment: Vec<usize>,
}

impl TableSearch {
    pub fn new(variety: &Variety, size: usize, limits: &Limits) -> Result<Self> {
        if size > limits.max_carrier {
            return Err(Error::CarrierTooLarge {
                size,
                limit: limits.max_carrier,
            });
        }
        if size == 0 {
            return Err(Error::InvalidData("empty carrier".into()));
        }
        let sig = variety.signature();
        let arities: Vec<usize> = (0..sig.len()).map(|op| sig.arity(op)).collect();
        let mut offsets = Vec::with_capacity(arities.len() + 1);
        let mut total = 0usize;
        for &r in &arities {
            offsets.push(total);
            total += size.pow(r as u32);
        }
        offsets.push(total);
        let programs: Vec<Program> = variety
            .equations()
            .iter()
            .map(|e| Program {
                lhs: compile(&e.lhs),
                rhs: compile(&e.rhs),
                vars: e.vars,
            })
            .collect();
        let mut inst_offsets = Vec::with_capacity(programs.len() + 1);
        let mut count = 0usize;
        for p in &programs {
            inst_offsets.push(count);
            count += size.pow(p.vars as u32);
        }
        inst_offsets.push(count);
        if count > u32::MAX as usize {
            return Err(Error::LimitsExceeded("too many equation instances".into()));
        }
        Ok(TableSearch {
            n: size,
            arities,
            offsets,
            zero_op: sig.zero(),
            tables: vec![UNSET; total],
            candidates: vec![None; total],
            pinned: Vec::new(),
            programs,
            inst_offsets,
            watches: vec![Vec::new(); total],
            trail: Vec::new(),
            queue: Vec::new(),
            order: Vec::new(),
            prepared: false,
            dead: false,
            nodes: 0,
            max_nodes: limits.max_nodes,
            scratch: Vec::new(),
            assignment: Vec::new(),
        })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// Flat cell index of `op(args)`.
    pub fn cell(&self, op: usize, args: &[usize]) -> usize {
        self.offsets[op] + table_index(self.n, args)
    }

    /// Fixes a cell before the search starts.
    pub fn pin(&mut self, op: usize, args: &[usize], value: usize) {
        let c = self.cell(op, args);
        self.pinned.push((c, value as u32));
    }

    /// Restricts the values a cell may take.
    pub fn restrict(&mut self, op: usize, args: &[usize], values: &[usize]) {
        let c = self.cell(op, args);
        let mut v: Vec<u32> = values.iter().map(|&x| x as u32).collect();
        v.sort_unstable();
        v.dedup();
        self.candidates[c] = Some(v);
    }

    /// Visits every solution in the search order.
    pub fn run(&mut self, on_solution: impl FnMut(&[Vec<usize>]) -> Flow) -> Result<SearchStats> {
        self.run_from(&[], on_solution)
    }

    /// Replays `prefix` and searches the subtree below it.
    pub fn run_from(
        &mut self,
        prefix: &[(usize, u32)],
        mut on_solution: impl FnMut(&[Vec<usize>]) -> Flow,
    ) -> Result<SearchStats> {
        let mut stats = SearchStats::default();
        if !self.prepare() {
            return Ok(stats);
        }
        let base = self.trail.len();
        for &(cell, v) in prefix {
            if self.tables[cell] != UNSET {
                if self.tables[cell] != v {
                    self.undo_to(base);
                    return Ok(stats);
                }
                continue;
            }
            if !self.assign_and_propagate(cell, v) {
                self.undo_to(base);
                return Ok(stats);
            }
        }
        let start_nodes = self.nodes;
        let result = self.dfs(usize::MAX, &mut |tables, _| {
            stats.solutions += 1;
            on_solution(tables)
        });
        stats.nodes = self.nodes - start_nodes;
        self.undo_to(base);
        result.map(|_| stats)
    }

    /// Consistent decision prefixes `depth` levels down, in search order.
    /// Searching below each of them visits every solution exactly once.
    pub fn split(&mut self, depth: usize) -> Result<Vec<Prefix>> {
        let mut out = Vec::new();
        if !self.prepare() {
            return Ok(out);
        }
        let base = self.trail.len();
        let result = self.dfs(depth, &mut |_, prefix| {
            out.push(prefix.to_vec());
            Flow::Continue
        });
        self.undo_to(base);
        result.map(|_| out)
    }

    fn prepare(&mut self) -> bool {
        if self.prepared {
            return !self.dead;
        }
        self.prepared = true;
        let zero_cell = self.offsets[self.zero_op];
        self.tables[zero_cell] = 0;
        let pinned = core::mem::take(&mut self.pinned);
        for &(c, v) in &pinned {
            if v as usize >= self.n || (self.tables[c] != UNSET && self.tables[c] != v) {
                self.dead = true;
                return false;
            }
            self.tables[c] = v;
        }
        self.pinned = pinned;
        let mut order: Vec<(usize, usize, usize)> = Vec::new();
        for op in 0..self.arities.len() {
            if op == self.zero_op {
                continue;
            }
            let r = self.arities[op];
            for_each_tuple(self.n, r, |a| {
                let max = a.iter().copied().max().unwrap_or(0);
                order.push((max, op, table_index(self.n, a)));
            });
        }
        order.sort_unstable();
        self.order = order
            .into_iter()
            .map(|(_, op, idx)| self.offsets[op] + idx)
            .collect();
        let total = self.inst_offsets[self.programs.len()];
        for inst in 0..total {
            if !self.visit(inst as u32) {
                self.dead = true;
                return false;
            }
        }
        if !self.propagate() {
            self.dead = true;
            return false;
        }
        // Everything done so far is permanent.
        self.trail.clear();
        true
    }

    /// Depth-first search from the current state. With `depth` finite,
    /// reports prefixes at that depth (or shallower complete assignments)
    /// instead of descending further.
    fn dfs(
        &mut self,
        depth: usize,
        report: &mut dyn FnMut(&[Vec<usize>], &[(usize, u32)]) -> Flow,
    ) -> Result<()> {
        let mut stack: Vec<Frame> = Vec::new();
        let mut decisions: Vec<(usize, u32)> = Vec::new();
        let mut scan = 0usize;
        'descend: loop {
            while scan < self.order.len() && self.tables[self.order[scan]] != UNSET {
                scan += 1;
            }
            if scan == self.order.len() || stack.len() == depth {
                let tables = self.export();
                if report(&tables, &decisions) == Flow::Stop {
                    self.unwind(&stack);
                    return Ok(());
                }
            } else {
                let cell = self.order[scan];
                stack.push(Frame {
                    cell,
                    next: 0,
                    mark: self.trail.len(),
                    scan,
                });
            }
            // Try the next candidate of the innermost open frame.
            loop {
                let Some(frame) = stack.last_mut() else {
                    return Ok(());
                };
                let cell = frame.cell;
                let mark = frame.mark;
                let idx = frame.next;
                let value = match &self.candidates[cell] {
                    Some(c) => c.get(idx).copied(),
                    None => (idx < self.n).then_some(idx as u32),
                };
                if idx > 0 {
                    decisions.pop();
                }
                self.undo_to(mark);
                let Some(value) = value else {
                    stack.pop();
                    continue;
                };
                frame.next += 1;
                self.nodes += 1;
                if self.nodes > self.max_nodes {
                    self.unwind(&stack);
                    return Err(Error::LimitsExceeded(format!(
                        "table search exceeded {} nodes",
                        self.max_nodes
                    )));
                }
                decisions.push((cell, value));
                if self.assign_and_propagate(cell, value) {
                    scan = frame.scan;
                    continue 'descend;
                }
            }
        }
    }

    fn unwind(&mut self, stack: &[Frame]) {
        if let Some(f) = stack.first() {
            self.undo_to(f.mark);
        }
    }

    fn export(&self) -> Vec<Vec<usize>> {
        (0..self.arities.len())
            .map(|op| {
                self.tables[self.offsets[op]..self.offsets[op + 1]]
                    .iter()
                    .map(|&v| v as usize)
                    .collect()
            })
            .collect()
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            match self.trail.pop() {
                Some(Undo::Assigned(c)) => self.tables[c] = UNSET,
                Some(Undo::Watched(c)) => {
                    self.watches[c].pop();
                }
                None => break,
            }
        }
        self.queue.clear();
    }

    fn allowed(&self, cell: usize, v: u32) -> bool {
        (v as usize) < self.n
            && match &self.candidates[cell] {
                Some(c) => c.binary_search(&v).is_ok(),
                None => true,
            }
    }

    fn assign_and_propagate(&mut self, cell: usize, v: u32) -> bool {
        if !self.allowed(cell, v) {
            return false;
        }
        self.tables[cell] = v;
        self.trail.push(Undo::Assigned(cell));
        self.queue.push(cell);
        self.propagate()
    }

    fn propagate(&mut self) -> bool {
        while let Some(c) = self.queue.pop() {
            let mut i = 0;
            while i < self.watches[c].len() {
                let inst = self.watches[c][i];
                i += 1;
                if !self.visit(inst) {
                    self.queue.clear();
                    return false;
                }
            }
        }
        true
    }

    /// Re-evaluates one instance; returns `false` on a contradiction.
    fn visit(&mut self, inst: u32) -> bool {
        let inst_us = inst as usize;
        let e = match self.inst_offsets.binary_search(&inst_us) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        let mut local = inst_us - self.inst_offsets[e];
        let vars = self.programs[e].vars;
        self.assignment.clear();
        self.assignment.resize(vars, 0);
        for k in (0..vars).rev() {
            self.assignment[k] = local % self.n;
            local /= self.n;
        }
        let lhs = self.eval(e, true);
        let rhs = self.eval(e, false);
        match (lhs, rhs) {
            (Eval::Value(a), Eval::Value(b)) => a == b,
            (Eval::Value(a), Eval::Blocked(c, true)) | (Eval::Blocked(c, true), Eval::Value(a)) => {
                self.watch(c, inst);
                if !self.allowed(c, a) {
                    return false;
                }
                self.tables[c] = a;
                self.trail.push(Undo::Assigned(c));
                self.queue.push(c);
                true
            }
            (Eval::Blocked(c, _), _) | (_, Eval::Blocked(c, _)) => {
                self.watch(c, inst);
                true
            }
        }
    }

    fn watch(&mut self, cell: usize, inst: u32) {
        self.watches[cell].push(inst);
        self.trail.push(Undo::Watched(cell));
    }

    fn eval(&mut self, e: usize, left: bool) -> Eval {
        let prog = if left {
            &self.programs[e].lhs
        } else {
            &self.programs[e].rhs
        };
        let stack = &mut self.scratch;
        stack.clear();
        let last = prog.len() - 1;
        for (pc, ins) in prog.iter().enumerate() {
            match *ins {
                Instr::Var(i) => stack.push(self.assignment[i] as u32),
                Instr::App(op) => {
                    let r = self.arities[op];
                    let base = stack.len() - r;
                    let idx = stack[base..]
                        .iter()
                        .fold(0usize, |acc, &a| acc * self.n + a as usize);
                    stack.truncate(base);
                    let cell = self.offsets[op] + idx;
                    let v = self.tables[cell];
                    if v == UNSET {
                        return Eval::Blocked(cell, pc == last);
                    }
                    stack.push(v);
                }
            }
        }
        Eval::Value(stack[0])
    }
}

fn compile(t: &Term) -> Vec<Instr> {
    fn go(t: &Term, out: &mut Vec<Instr>) {
        match t {
            Term::Var(i) => out.push(Instr::Var(*i)),
            Term::App(op, args) => {
                for a in args {
                    go(a, out);
                }
                out.push(Instr::App(*op));
            }
        }
    }
    let mut out = Vec::new();
    go(t, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{FiniteAlgebra, VarietyPresentation};

    fn count(v: &Variety, n: usize) -> u64 {
        let mut s = TableSearch::new(v, n, &Limits::default()).unwrap();
        let mut seen = 0;
        s.run(|t| {
            FiniteAlgebra::new(v.clone(), n, t.to_vec()).unwrap();
            seen += 1;
            Flow::Continue
        })
        .unwrap();
        seen
    }

    #[test]
    fn counts_labelled_groups() {
        // Group tables on {0..n-1} with identity 0: (n-1)! / |Aut| per iso type.
        let g = VarietyPresentation::groups();
        assert_eq!(count(&g, 1), 1);
        assert_eq!(count(&g, 2), 1);
        assert_eq!(count(&g, 3), 1);
        // Z4 (3 labellings) and Klein (1).
        assert_eq!(count(&g, 4), 4);
        assert_eq!(count(&g, 5), 6);
    }

    #[test]
    fn counts_labelled_monoids() {
        // Brute-force counts of associative tables with identity 0.
        let m = VarietyPresentation::monoids();
        assert_eq!(count(&m, 2), 2);
        assert_eq!(count(&m, 3), 11);
        assert_eq!(count(&m, 4), 156);
    }

    #[test]
    fn pins_and_restrictions() {
        let g = VarietyPresentation::abelian_groups();
        let add = g.op("add").unwrap();
        let mut s = TableSearch::new(&g, 4, &Limits::default()).unwrap();
        s.pin(add, &[1, 1], 2);
        let mut found = Vec::new();
        s.run(|t| {
            found.push(t[add].clone());
            Flow::Continue
        })
        .unwrap();
        // 1 generates: 1+1=2 fixes the cyclic table with 1+2=3.
        assert_eq!(found.len(), 1);
        assert_eq!(found[0][4 + 2], 3);
    }

    #[test]
    fn split_covers_every_solution_once() {
        let m = VarietyPresentation::monoids();
        let mut s = TableSearch::new(&m, 3, &Limits::default()).unwrap();
        let mut whole = Vec::new();
        s.run(|t| {
            whole.push(t.to_vec());
            Flow::Continue
        })
        .unwrap();
        let prefixes = s.split(2).unwrap();
        assert!(prefixes.len() > 1);
        let mut parts = Vec::new();
        for p in &prefixes {
            let mut w = s.clone();
            w.run_from(p, |t| {
                parts.push(t.to_vec());
                Flow::Continue
            })
            .unwrap();
        }
        assert_eq!(parts, whole);
    }

    #[test]
    fn node_limit() {
        let g = VarietyPresentation::monoids();
        let limits = Limits {
            max_carrier: 64,
            max_nodes: 3,
        };
        let mut s = TableSearch::new(&g, 4, &limits).unwrap();
        assert!(matches!(
            s.run(|_| Flow::Continue),
            Err(Error::LimitsExceeded(_))
        ));
    }
}
