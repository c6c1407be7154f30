use std::sync::Arc;

use super::{Domain, GroundFluent, Instance};

/// Upper bound on the number of grounded fluents a single instance may have.
const MAX_GROUNDED: usize = 1 << 28;

/// Row-major placement of every grounded fluent of one instance.
///
/// A fluent `f` with argument types `t1..tk` occupies
/// `|t1| * ... * |tk|` consecutive slots starting at `bases[f]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layout {
    bases: Vec<usize>,
    strides: Vec<Vec<usize>>,
    dims: Vec<Vec<usize>>,
    total: usize,
}

impl Layout {
    pub fn new(dom: &Domain, counts: &[usize]) -> Result<Self, String> {
        let mut bases = Vec::with_capacity(dom.fluents.len());
        let mut strides = Vec::with_capacity(dom.fluents.len());
        let mut dims = Vec::with_capacity(dom.fluents.len());
        let mut total = 0usize;
        for sig in &dom.fluents {
            let d: Vec<usize> = sig.params.iter().map(|&t| counts[t]).collect();
            let mut s = vec![0; d.len()];
            let mut size = 1usize;
            for k in (0..d.len()).rev() {
                s[k] = size;
                size = size
                    .checked_mul(d[k])
                    .filter(|&v| v <= MAX_GROUNDED)
                    .ok_or_else(|| format!("fluent '{}' is too large to ground", sig.name))?;
            }
            bases.push(total);
            total = total
                .checked_add(size)
                .filter(|&v| v <= MAX_GROUNDED)
                .ok_or_else(|| "instance state is too large".to_string())?;
            strides.push(s);
            dims.push(d);
        }
        Ok(Layout {
            bases,
            strides,
            dims,
            total,
        })
    }

    pub fn len(&self) -> usize {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    #[inline]
    pub fn base(&self, fluent: usize) -> usize {
        self.bases[fluent]
    }

    #[inline]
    pub fn strides(&self, fluent: usize) -> &[usize] {
        &self.strides[fluent]
    }

    pub fn offset(&self, gf: &GroundFluent) -> usize {
        self.bases[gf.fluent]
            + gf.args
                .iter()
                .zip(&self.strides[gf.fluent])
                .map(|(a, s)| a * s)
                .sum::<usize>()
    }

    fn decode(&self, offset: usize) -> GroundFluent {
        let fluent = match self.bases.binary_search(&offset) {
            Ok(mut i) => {
                // zero-sized fluents share a base with their successor
                while i + 1 < self.bases.len() && self.bases[i + 1] == offset {
                    i += 1;
                }
                i
            }
            Err(i) => i - 1,
        };
        let mut rem = offset - self.bases[fluent];
        let args = self.strides[fluent]
            .iter()
            .map(|&s| {
                let a = rem / s;
                rem %= s;
                a
            })
            .collect();
        GroundFluent { fluent, args }
    }

    /// Number of grounded fluents of `fluent` (product of its argument ranges).
    pub fn size_of(&self, fluent: usize) -> usize {
        self.dims[fluent].iter().product()
    }
}

/// Total assignment from grounded fluents to integers. Fluents never
/// written read as 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct State {
    layout: Arc<Layout>,
    values: Vec<i64>,
}

impl State {
    pub fn empty(layout: Arc<Layout>) -> Self {
        let values = vec![0; layout.len()];
        State { layout, values }
    }

    pub fn layout(&self) -> &Arc<Layout> {
        &self.layout
    }

    pub fn get(&self, gf: &GroundFluent) -> i64 {
        self.values[self.layout.offset(gf)]
    }

    pub fn set(&mut self, gf: &GroundFluent, v: i64) {
        let o = self.layout.offset(gf);
        self.values[o] = v;
    }

    #[inline]
    pub fn at(&self, offset: usize) -> i64 {
        self.values[offset]
    }

    #[inline]
    pub(crate) fn set_at(&mut self, offset: usize, v: i64) {
        self.values[offset] = v;
    }

    /// Number of stored (non-default) entries.
    pub fn entry_count(&self) -> usize {
        self.values.iter().filter(|&&v| v != 0).count()
    }

    /// Non-default entries in layout order.
    pub fn entries(&self) -> impl Iterator<Item = (GroundFluent, i64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(o, &v)| (self.layout.decode(o), v))
    }
}

pub fn initial_state(inst: &Instance) -> State {
    let mut s = State::empty(inst.layout().clone());
    for (gf, v) in &inst.init {
        s.set(gf, *v);
    }
    s
}

pub fn goals_hold(s: &State, inst: &Instance) -> bool {
    inst.goal_offsets().iter().all(|&(o, v)| s.at(o) == v)
}

/// Sum of squared differences between the state and every goal value.
pub fn goal_distance(s: &State, inst: &Instance) -> u64 {
    inst.goal_offsets()
        .iter()
        .map(|&(o, v)| {
            let d = (s.at(o) as i128 - v as i128).unsigned_abs();
            d.saturating_mul(d).min(u64::MAX as u128) as u64
        })
        .fold(0u64, u64::saturating_add)
}
