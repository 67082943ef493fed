//! Two-processor schedule simulation.
//!
//! The master (MB₀) runs software F_p² additions and drives the FSL link; the
//! slave (MB₁) runs KARATSUBA products, reductions and its own additions.
//! Tasks are list-scheduled in insertion order: each starts as soon as its
//! processor is free and its dependencies have finished.

use serde::Serialize;

use super::counter::Op;
use super::cycles::Constants;
use super::symbolic::{recipe, Design, KERNELS};
use crate::error::{Error, Result};

/// FSL cost per word fitted against the target fp6_mul schedule; see
/// [`calibrate`].
pub const DEFAULT_FSL_COST: u64 = 91;

/// Master and slave utilization (percent) measured on the board for each
/// kernel on the dual design.
pub const REFERENCE_UTILIZATION: &[(Op, f64, f64)] = &[
    (Op::Fp6Mul, 90.01, 76.82),
    (Op::Fp12Mul, 97.04, 75.46),
    (Op::CyclotomicSqr, 93.16, 82.98),
    (Op::SparseMul, 84.23, 78.78),
    (Op::DoublingStep, 93.92, 79.01),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Processor {
    Master,
    Slave,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TaskKind {
    Karatsuba,
    Add,
    Red,
    /// FSL words sent (`t`) and received (`r`) by the master.
    Transfer { t: u32, r: u32 },
}

impl TaskKind {
    pub fn cycles(&self, k: &Constants) -> u64 {
        match *self {
            TaskKind::Karatsuba => k.karatsuba_with_transfer,
            TaskKind::Add => k.fp2_add_soft,
            TaskKind::Red => k.fp2_red,
            TaskKind::Transfer { t, r } => t as u64 * k.fsl_t + r as u64 * k.fsl_r,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Task {
    pub name: String,
    pub processor: Processor,
    pub kind: TaskKind,
    pub deps: Vec<usize>,
}

#[derive(Clone, Debug, Default)]
pub struct TaskGraph {
    pub function: String,
    pub tasks: Vec<Task>,
}

impl TaskGraph {
    pub fn new(function: &str) -> TaskGraph {
        TaskGraph { function: function.to_string(), tasks: Vec::new() }
    }

    pub fn push(&mut self, name: &str, processor: Processor, kind: TaskKind, deps: &[usize]) -> usize {
        self.tasks.push(Task { name: name.to_string(), processor, kind, deps: deps.to_vec() });
        self.tasks.len() - 1
    }
}

/// Builds a graph as a sequence of lockstep rows: every task of a row waits
/// for every task of the previous row.
struct Rows {
    graph: TaskGraph,
    prev: Vec<usize>,
}

impl Rows {
    fn new(function: &str) -> Rows {
        Rows { graph: TaskGraph::new(function), prev: Vec::new() }
    }

    fn transfer(&mut self, what: &str, t: u32, r: u32) -> &mut Self {
        let id = self.graph.push(what, Processor::Master, TaskKind::Transfer { t, r }, &self.prev);
        self.prev = vec![id];
        self
    }

    fn work(&mut self, master: &[&str], slave: &[(&str, TaskKind)]) -> &mut Self {
        let deps = std::mem::take(&mut self.prev);
        let mut row = Vec::new();
        for name in master {
            row.push(self.graph.push(name, Processor::Master, TaskKind::Add, &deps));
        }
        for (name, kind) in slave {
            row.push(self.graph.push(name, Processor::Slave, *kind, &deps));
        }
        self.prev = row;
        self
    }

    fn finish(self) -> TaskGraph {
        self.graph
    }
}

use TaskKind::{Add, Karatsuba, Red};

/// F_p⁶ multiplication split over master and slave, row by row.
pub fn fp6_mul_graph() -> TaskGraph {
    let mut g = Rows::new("fp6_mul");
    g.transfer("{a0,b0}", 2, 0)
        .work(&["ta01 = a0 + a1", "tb01 = b0 + b1"], &[("t0 = a0 * b0", Karatsuba)])
        .transfer("{a1,b1}", 2, 0)
        .work(&["ta02 = a0 + a2", "tb02 = b0 + b2"], &[("t1 = a1 * b1", Karatsuba)])
        .transfer("{a2,b2}", 2, 0)
        .work(&["ta12 = a1 + a2", "tb12 = b1 + b2"], &[("t2 = a2 * b2", Karatsuba)])
        .transfer("{ta12,tb12}", 2, 0)
        .work(&[], &[("ta12 = ta12 * tb12", Karatsuba)])
        .transfer("{ta01,tb01,ta12,t1,t2}", 2, 3)
        .work(&["ta12 = ta12 - t1", "ta12 = ta12 - t2"], &[("ta01 = ta01 * tb01", Karatsuba)])
        .transfer("{ta02,tb02,ta01,t0}", 2, 2)
        .work(&["ta01 = ta01 - t0", "ta01 = ta01 - t1"], &[("ta02 = ta02 * tb02", Karatsuba)])
        .transfer("{ta12,ta02}", 1, 1)
        .work(&["ta02 = ta02 - t0", "ta02 = ta02 - t2"], &[("ta12 = ta12 * xi", Red), ("tb01 = t2 * xi", Red)])
        .transfer("{tb01}", 0, 1)
        .work(&["c1 = ta01 + tb01", "c2 = ta02 + t1"], &[("c0 = ta12 + t0", Add)])
        .transfer("{c0}", 0, 1);
    g.finish()
}

/// Lockstep graph reconstructed from a kernel's two target cost
/// decompositions: the master runs the dual design's additions in pairs, the
/// slave first runs the exposed products alone and then spreads the rest of
/// the single-processor work over the master's rows, longest task first.
pub fn reconstructed_graph(op: Op) -> Result<TaskGraph> {
    let mb = recipe(op, Design::Mb)?;
    let dual = recipe(op, Design::TwoMb)?;
    let exposed = dual.karatsuba;
    let mut slave: Vec<TaskKind> = Vec::new();
    slave.extend(std::iter::repeat_n(Karatsuba, (mb.karatsuba - exposed) as usize));
    slave.extend(std::iter::repeat_n(Red, mb.red as usize));
    slave.extend(std::iter::repeat_n(Add, mb.add.saturating_sub(dual.add) as usize));

    let k = Constants::default();
    let n_rows = dual.add.div_ceil(2) as usize;
    let mut loads = vec![0u64; n_rows];
    let mut assigned: Vec<Vec<TaskKind>> = vec![Vec::new(); n_rows];
    // stable sort keeps the Karatsuba, red, add order among equal lengths
    slave.sort_by_key(|t| std::cmp::Reverse(t.cycles(&k)));
    for t in slave {
        let i = (0..n_rows).min_by_key(|&i| (loads[i], i)).expect("at least one row");
        loads[i] += t.cycles(&k);
        assigned[i].push(t);
    }

    // spread the transfers one batch per row
    let n_batches = exposed as usize + n_rows;
    let words = |i: usize| (dual.transfers as usize / n_batches + usize::from(i < dual.transfers as usize % n_batches)) as u32;

    let mut g = Rows::new(op.symbol());
    let mut batch = 0;
    for i in 0..exposed {
        g.transfer("operands", words(batch), 0);
        batch += 1;
        g.work(&[], &[(&format!("product {i}"), Karatsuba)]);
    }
    let mut adds_left = dual.add;
    for (i, tasks) in assigned.iter().enumerate() {
        g.transfer("operands", words(batch), 0);
        batch += 1;
        let m = adds_left.min(2);
        adds_left -= m;
        let master: Vec<String> = (0..m).map(|j| format!("add {}", 2 * i + j as usize)).collect();
        let master: Vec<&str> = master.iter().map(String::as_str).collect();
        let names: Vec<String> = tasks.iter().enumerate().map(|(j, t)| format!("{t:?} {i}.{j}")).collect();
        let slave: Vec<(&str, TaskKind)> = names.iter().map(String::as_str).zip(tasks.iter().copied()).collect();
        g.work(&master, &slave);
    }
    Ok(g.finish())
}

/// The built-in graph for a kernel: the measured schedule for `fp6_mul`,
/// reconstructions for the others.
pub fn kernel_graph(function_id: &str) -> Result<TaskGraph> {
    let op = Op::from_symbol(function_id)
        .filter(|op| KERNELS.contains(op))
        .ok_or_else(|| Error::Unknown { kind: "kernel", name: function_id.to_string() })?;
    if op == Op::Fp6Mul {
        Ok(fp6_mul_graph())
    } else {
        reconstructed_graph(op)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceEntry {
    pub task: String,
    pub processor: Processor,
    #[serde(flatten)]
    pub kind: TaskKind,
    pub start: u64,
    pub end: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScheduleTrace {
    pub function: String,
    pub entries: Vec<TraceEntry>,
    pub critical_path: u64,
    pub master_busy: u64,
    pub slave_busy: u64,
    /// Percent of the critical path.
    pub master_utilization: f64,
    pub slave_utilization: f64,
}

impl ScheduleTrace {
    pub fn on(&self, p: Processor) -> impl Iterator<Item = &TraceEntry> {
        self.entries.iter().filter(move |e| e.processor == p)
    }

    pub fn karatsuba_tasks(&self, p: Processor) -> usize {
        self.on(p).filter(|e| e.kind == Karatsuba).count()
    }

    pub fn add_tasks(&self, p: Processor) -> usize {
        self.on(p).filter(|e| e.kind == Add).count()
    }

    /// FSL words moved over the whole schedule.
    pub fn transfer_words(&self) -> u32 {
        self.entries
            .iter()
            .map(|e| match e.kind {
                TaskKind::Transfer { t, r } => t + r,
                _ => 0,
            })
            .sum()
    }
}

/// List-schedules `graph`. Transfers occupy the master; the slave's busy time
/// is its computation only.
pub fn simulate(graph: &TaskGraph, k: &Constants) -> Result<ScheduleTrace> {
    let n = graph.tasks.len();
    if n == 0 {
        return Err(Error::InvalidArgument("empty task graph".into()));
    }
    for t in &graph.tasks {
        if let Some(&d) = t.deps.iter().find(|&&d| d >= n) {
            return Err(Error::InvalidArgument(format!("task {:?} depends on missing task {d}", t.name)));
        }
    }

    let mut end: Vec<Option<u64>> = vec![None; n];
    let mut free = [0u64; 2];
    let mut busy = [0u64; 2];
    let mut entries = Vec::with_capacity(n);
    let mut done = 0;
    while done < n {
        let next = (0..n).find(|&i| end[i].is_none() && graph.tasks[i].deps.iter().all(|&d| end[d].is_some()));
        let Some(i) = next else {
            return Err(Error::CyclicGraph);
        };
        let task = &graph.tasks[i];
        let p = task.processor as usize;
        let ready = task.deps.iter().map(|&d| end[d].unwrap()).max().unwrap_or(0);
        let start = free[p].max(ready);
        let stop = start + task.kind.cycles(k);
        free[p] = stop;
        busy[p] += stop - start;
        end[i] = Some(stop);
        entries.push(TraceEntry { task: task.name.clone(), processor: task.processor, kind: task.kind, start, end: stop });
        done += 1;
    }

    let critical_path = end.iter().map(|e| e.unwrap()).max().unwrap_or(0);
    let pct = |b: u64| if critical_path == 0 { 0.0 } else { 100.0 * b as f64 / critical_path as f64 };
    Ok(ScheduleTrace {
        function: graph.function.clone(),
        entries,
        critical_path,
        master_busy: busy[0],
        slave_busy: busy[1],
        master_utilization: pct(busy[0]),
        slave_utilization: pct(busy[1]),
    })
}

/// Simulates one of the built-in kernel graphs.
pub fn simulate_dual_schedule(function_id: &str, k: &Constants) -> Result<ScheduleTrace> {
    simulate(&kernel_graph(function_id)?, k)
}

/// Result of fitting the FSL word cost.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Calibration {
    pub fsl_cost: u64,
    pub squared_error: f64,
    pub functions: Vec<String>,
}

/// Picks the integer FSL word cost in `1..=max_cost` minimizing the squared
/// error between simulated and reference utilizations over `functions`.
pub fn calibrate(functions: &[Op], max_cost: u64) -> Result<Calibration> {
    let graphs: Vec<(TaskGraph, f64, f64)> = functions
        .iter()
        .map(|&op| {
            let (_, m, s) = REFERENCE_UTILIZATION
                .iter()
                .find(|(o, _, _)| *o == op)
                .ok_or_else(|| Error::Unknown { kind: "kernel", name: op.symbol().to_string() })?;
            Ok((kernel_graph(op.symbol())?, *m, *s))
        })
        .collect::<Result<_>>()?;
    let mut best: Option<(f64, u64)> = None;
    for c in 1..=max_cost {
        let k = Constants { fsl_t: c, fsl_r: c, ..Constants::default() };
        let mut err = 0.0;
        for (g, m, s) in &graphs {
            let tr = simulate(g, &k)?;
            err += (tr.master_utilization - m).powi(2) + (tr.slave_utilization - s).powi(2);
        }
        if best.is_none_or(|(e, _)| err < e) {
            best = Some((err, c));
        }
    }
    let (squared_error, fsl_cost) = best.ok_or_else(|| Error::InvalidArgument("empty cost range".into()))?;
    Ok(Calibration { fsl_cost, squared_error, functions: functions.iter().map(|o| o.symbol().to_string()).collect() })
}
