//! Operation counting.
//!
//! Counters are owned by an [`OpCounter`] that a [`Ctx`](crate::tower::Ctx)
//! borrows; there is no global state. Every increment is bucketed by whether
//! it happened inside an F_p² operation and whether it happened inside a
//! kernel, so a cost profile can price work at any level without double
//! counting.

use std::cell::Cell;
use std::fmt;
use std::ops::{Add, AddAssign};

use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

/// Hierarchy levels.
///
/// Kernels are the composite functions a hardware design may execute as one
/// unit and price as a whole. Other composite operations are counted but are
/// transparent for bucketing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Fp = 0,
    Fp2 = 1,
    Kernel = 2,
    Composite = 3,
}

macro_rules! ops {
    ($( $variant:ident => ($sym:literal, $level:ident) ),* $(,)?) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum Op { $( $variant ),* }

        impl Op {
            pub const ALL: &'static [Op] = &[ $( Op::$variant ),* ];

            /// Short symbol used in reports and config files.
            pub fn symbol(self) -> &'static str {
                match self { $( Op::$variant => $sym ),* }
            }

            pub fn level(self) -> Level {
                match self { $( Op::$variant => Level::$level ),* }
            }

            pub fn from_symbol(s: &str) -> Option<Op> {
                match s { $( $sym => Some(Op::$variant), )* _ => None }
            }
        }
    };
}

ops! {
    FpAdd => ("a", Fp),
    FpMul => ("m", Fp),
    FpSqr => ("s", Fp),
    FpInv => ("i", Fp),
    FpMulBeta => ("m_beta", Fp),
    Fp2Add => ("a2", Fp2),
    Fp2Mul => ("m2", Fp2),
    Fp2Sqr => ("s2", Fp2),
    Fp2Inv => ("i2", Fp2),
    Fp2MulXi => ("m_xi", Fp2),
    Fp6Mul => ("fp6_mul", Kernel),
    Fp6Sqr => ("fp6_sqr", Composite),
    Fp6Inv => ("fp6_inv", Composite),
    Fp12Mul => ("fp12_mul", Kernel),
    Fp12Sqr => ("fp12_sqr", Composite),
    Fp12Inv => ("fp12_inv", Composite),
    CyclotomicSqr => ("cyclotomic_sqr", Kernel),
    SparseMul => ("sparse_mul", Kernel),
    Frobenius => ("frobenius", Composite),
    DoublingStep => ("doubling_step", Kernel),
    AdditionStep => ("addition_step", Composite),
}

const N_OPS: usize = 21;
const N_BUCKETS: usize = 4;
const IN_FP2: usize = 1;
const IN_KERNEL: usize = 2;

/// Snapshot of counted operations.
///
/// `by_enclosing[op][k]` is the number of `op` executions whose enclosing
/// context was `k`: bit 0 set when inside an F_p² operation, bit 1 set when
/// inside a kernel.
#[derive(Clone, Copy, PartialEq, Eq, Default)]
pub struct OpCounts {
    by_enclosing: [[u64; N_BUCKETS]; N_OPS],
}

impl OpCounts {
    pub fn new() -> Self {
        Self::default()
    }

    /// Every execution of `op`, at any nesting depth.
    pub fn get(&self, op: Op) -> u64 {
        self.by_enclosing[op as usize].iter().sum()
    }

    /// Executions of `op` not nested inside any operation of `level`.
    pub fn outside(&self, op: Op, level: Level) -> u64 {
        let bit = match level {
            Level::Fp => return self.get(op),
            Level::Fp2 => IN_FP2,
            Level::Kernel => IN_KERNEL,
            Level::Composite => return self.get(op),
        };
        (0..N_BUCKETS).filter(|k| k & bit == 0).map(|k| self.by_enclosing[op as usize][k]).sum()
    }

    /// Executions of `op` that a design executing whole operations up to
    /// `level` must pay for: those not nested inside another operation of a
    /// level between `op`'s own and `level`.
    pub fn priced(&self, op: Op, level: Level) -> u64 {
        let mut mask = 0;
        if op.level() <= Level::Fp2 && level >= Level::Fp2 {
            mask |= IN_FP2;
        }
        if op.level() <= Level::Kernel && level >= Level::Kernel {
            mask |= IN_KERNEL;
        }
        (0..N_BUCKETS).filter(|k| k & mask == 0).map(|k| self.by_enclosing[op as usize][k]).sum()
    }

    pub fn bucket(&self, op: Op, enclosing: usize) -> u64 {
        self.by_enclosing[op as usize][enclosing]
    }

    pub fn is_empty(&self) -> bool {
        self.by_enclosing.iter().flatten().all(|&c| c == 0)
    }

    pub fn record(&mut self, op: Op, enclosing: usize, n: u64) {
        self.by_enclosing[op as usize][enclosing] += n;
    }

    /// Nonzero totals in declaration order.
    pub fn totals(&self) -> Vec<(Op, u64)> {
        Op::ALL.iter().map(|&op| (op, self.get(op))).filter(|(_, c)| *c > 0).collect()
    }

    pub fn scaled(&self, k: u64) -> OpCounts {
        let mut out = *self;
        out.by_enclosing.iter_mut().flatten().for_each(|c| *c *= k);
        out
    }
}

impl Add for OpCounts {
    type Output = OpCounts;
    fn add(mut self, rhs: OpCounts) -> OpCounts {
        self += rhs;
        self
    }
}

impl AddAssign for OpCounts {
    fn add_assign(&mut self, rhs: OpCounts) {
        for (a, b) in self.by_enclosing.iter_mut().flatten().zip(rhs.by_enclosing.iter().flatten()) {
            *a += *b;
        }
    }
}

impl fmt::Debug for OpCounts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (op, c) in self.totals() {
            m.entry(&op.symbol(), &c);
        }
        m.finish()
    }
}

impl Serialize for OpCounts {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let totals = self.totals();
        let mut map = s.serialize_map(Some(totals.len()))?;
        for (op, c) in totals {
            map.serialize_entry(op.symbol(), &c)?;
        }
        map.end()
    }
}

/// Live counters for one measurement scope.
///
/// Not `Sync`: one counter per concurrent computation. Child scopes created by
/// [`Ctx::counted`](crate::tower::Ctx::counted) forward every event to their
/// parent, so nested scopes compose additively.
pub struct OpCounter<'p> {
    cells: [[Cell<u64>; N_BUCKETS]; N_OPS],
    depth: [Cell<u32>; 4],
    parent: Option<&'p OpCounter<'p>>,
}

impl Default for OpCounter<'_> {
    fn default() -> Self {
        Self::new()
    }
}

impl<'p> OpCounter<'p> {
    pub fn new() -> Self {
        OpCounter {
            cells: Default::default(),
            depth: Default::default(),
            parent: None,
        }
    }

    pub fn child(parent: &'p OpCounter<'p>) -> Self {
        OpCounter { parent: Some(parent), ..OpCounter::new() }
    }

    fn enclosing(&self) -> usize {
        let mut k = 0;
        if self.depth[Level::Fp2 as usize].get() > 0 {
            k |= IN_FP2;
        }
        if self.depth[Level::Kernel as usize].get() > 0 {
            k |= IN_KERNEL;
        }
        k
    }

    pub(crate) fn bump(&self, op: Op) {
        let mut c = Some(self);
        while let Some(cur) = c {
            let cell = &cur.cells[op as usize][cur.enclosing()];
            cell.set(cell.get() + 1);
            c = cur.parent;
        }
    }

    pub(crate) fn enter(&self, level: Level) {
        let mut c = Some(self);
        while let Some(cur) = c {
            let d = &cur.depth[level as usize];
            d.set(d.get() + 1);
            c = cur.parent;
        }
    }

    pub(crate) fn leave(&self, level: Level) {
        let mut c = Some(self);
        while let Some(cur) = c {
            let d = &cur.depth[level as usize];
            d.set(d.get() - 1);
            c = cur.parent;
        }
    }

    pub fn snapshot(&self) -> OpCounts {
        let mut out = OpCounts::new();
        for (i, row) in self.cells.iter().enumerate() {
            for (k, cell) in row.iter().enumerate() {
                out.by_enclosing[i][k] = cell.get();
            }
        }
        out
    }
}

/// Marks the dynamic extent of a non-leaf operation.
pub struct OpGuard<'a> {
    counter: Option<&'a OpCounter<'a>>,
    level: Level,
}

impl<'a> OpGuard<'a> {
    pub(crate) fn new(counter: Option<&'a OpCounter<'a>>, op: Op) -> Self {
        let level = op.level();
        if let Some(c) = counter {
            c.bump(op);
            c.enter(level);
        }
        OpGuard { counter, level }
    }
}

impl Drop for OpGuard<'_> {
    fn drop(&mut self) {
        if let Some(c) = self.counter {
            c.leave(self.level);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn op_table_is_consistent() {
        assert_eq!(Op::ALL.len(), N_OPS);
        for (i, op) in Op::ALL.iter().enumerate() {
            assert_eq!(*op as usize, i);
            assert_eq!(Op::from_symbol(op.symbol()), Some(*op));
        }
    }

    #[test]
    fn buckets_follow_enclosing_level() {
        let c = OpCounter::new();
        c.bump(Op::FpMul);
        {
            let _g = OpGuard::new(Some(&c), Op::Fp2Mul);
            c.bump(Op::FpMul);
            {
                let _k = OpGuard::new(Some(&c), Op::Fp6Mul);
                c.bump(Op::FpMul);
            }
        }
        let s = c.snapshot();
        {
            let _k = OpGuard::new(Some(&c), Op::Fp6Mul);
            c.bump(Op::FpMul);
        }
        assert_eq!(s.get(Op::FpMul), 3);
        assert_eq!(s.outside(Op::FpMul, Level::Fp2), 1);
        assert_eq!(s.outside(Op::FpMul, Level::Kernel), 2);
        assert_eq!(s.get(Op::Fp2Mul), 1);
        // Fp6Mul was entered while inside an Fp2 op
        assert_eq!(s.bucket(Op::Fp6Mul, IN_FP2), 1);
        let s = c.snapshot();
        assert_eq!(s.outside(Op::FpMul, Level::Fp2), 2);
        assert_eq!(s.bucket(Op::FpMul, IN_KERNEL), 1);
    }

    #[test]
    fn child_scopes_forward_to_parent() {
        let parent = OpCounter::new();
        parent.bump(Op::FpAdd);
        {
            let child = OpCounter::child(&parent);
            child.bump(Op::FpAdd);
            child.bump(Op::FpMul);
            assert_eq!(child.snapshot().get(Op::FpAdd), 1);
        }
        let s = parent.snapshot();
        assert_eq!(s.get(Op::FpAdd), 2);
        assert_eq!(s.get(Op::FpMul), 1);
    }

    #[test]
    fn empty_counts() {
        let c = OpCounter::new();
        assert!(c.snapshot().is_empty());
        assert_eq!(serde_json::to_string(&c.snapshot()).unwrap(), "{}");
    }
}
