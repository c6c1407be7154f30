use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{domain, BenchmarkId};
use crate::model::{Domain, GroundFluent, Instance};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenError {
    #[error("{id} needs size at least {min}, got {size}")]
    TooSmall { id: BenchmarkId, size: usize, min: usize },
    #[error("{id} supports size at most {max}, got {size}")]
    TooLarge { id: BenchmarkId, size: usize, max: usize },
    #[error("generated instance is invalid: {0}")]
    Invalid(String),
}

struct Builder<'a> {
    dom: &'a Domain,
    objects: Vec<Vec<String>>,
    init: Vec<(GroundFluent, i64)>,
    goal: Vec<(GroundFluent, i64)>,
}

impl<'a> Builder<'a> {
    fn new(dom: &'a Domain) -> Self {
        Builder {
            dom,
            objects: vec![Vec::new(); dom.types.len()],
            init: Vec::new(),
            goal: Vec::new(),
        }
    }

    fn objects(&mut self, ty: &str, names: impl IntoIterator<Item = String>) {
        let t = self.dom.type_id(ty).expect("benchmark type");
        self.objects[t].extend(names);
    }

    fn gf(&self, fluent: &str, args: &[usize]) -> GroundFluent {
        GroundFluent {
            fluent: self.dom.fluent_id(fluent).expect("benchmark fluent"),
            args: args.to_vec(),
        }
    }

    fn init(&mut self, fluent: &str, args: &[usize], v: i64) {
        if v != 0 {
            let g = self.gf(fluent, args);
            self.init.push((g, v));
        }
    }

    fn fact(&mut self, fluent: &str, args: &[usize]) {
        self.init(fluent, args, 1);
    }

    fn goal(&mut self, fluent: &str, args: &[usize], v: i64) {
        let g = self.gf(fluent, args);
        self.goal.push((g, v));
    }

    fn build(self, name: String) -> Result<Instance, GenError> {
        Instance::new(self.dom, name, self.objects, self.init, self.goal).map_err(|e| GenError::Invalid(e.to_string()))
    }
}

fn names(prefix: &str, n: usize) -> impl Iterator<Item = String> + '_ {
    (0..n).map(move |i| format!("{prefix}{i}"))
}

fn fibonacci(n: usize) -> i64 {
    let (mut a, mut b) = (0i64, 1i64);
    for _ in 0..n {
        (a, b) = (b, a.wrapping_add(b));
    }
    a
}

/// Generates one instance of `id`. The same `(id, size, seed)` always yields
/// the same instance. `size` is the number of blocks, balls, locations,
/// hosts, nuts, graph nodes or vector elements, and the side of the grid for
/// `visitall`.
pub fn generate(id: BenchmarkId, size: usize, seed: u64) -> Result<Instance, GenError> {
    let min = match id {
        BenchmarkId::Floyd => 2,
        BenchmarkId::Fibonacci => 2,
        _ => 1,
    };
    if size < min {
        return Err(GenError::TooSmall { id, size, min });
    }
    if id == BenchmarkId::Fibonacci && size > 93 {
        return Err(GenError::TooLarge { id, size, max: 93 });
    }
    let dom = domain(id);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((id as u64) << 48));
    let mut b = Builder::new(&dom);
    let n = size;
    match id {
        BenchmarkId::BlocksOntable => {
            b.objects("block", names("b", n));
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            // consecutive blocks of the permutation stack into towers
            let mut towers: Vec<Vec<usize>> = vec![vec![order[0]]];
            for &x in &order[1..] {
                if rng.gen_bool(0.7) {
                    towers.last_mut().unwrap().push(x);
                } else {
                    towers.push(vec![x]);
                }
            }
            b.fact("handempty", &[]);
            for t in &towers {
                b.fact("clear", &[t[0]]);
                for w in t.windows(2) {
                    b.fact("on", &[w[0], w[1]]);
                }
                b.fact("ontable", &[*t.last().unwrap()]);
            }
            for x in 0..n {
                b.goal("ontable", &[x], 1);
            }
        }
        BenchmarkId::Gripper => {
            b.objects("room", ["rooma".to_string(), "roomb".to_string()]);
            b.objects("ball", names("ball", n));
            b.objects("gripper", ["left".to_string(), "right".to_string()]);
            b.fact("at-robby", &[0]);
            for g in 0..2 {
                b.fact("free", &[g]);
            }
            for x in 0..n {
                b.fact("at", &[x, 0]);
                b.goal("at", &[x, 1], 1);
            }
        }
        BenchmarkId::Corridor => {
            b.objects("loc", names("l", n));
            let start = rng.gen_range(0..n);
            let mut goal = rng.gen_range(0..n);
            if n > 1 {
                while goal == start {
                    goal = rng.gen_range(0..n);
                }
            }
            b.fact("at", &[start]);
            for i in 0..n.saturating_sub(1) {
                b.fact("adj", &[i, i + 1]);
                b.fact("adj", &[i + 1, i]);
            }
            b.fact("goal_at", &[goal]);
            b.goal("at", &[goal], 1);
        }
        BenchmarkId::Visitall => {
            b.objects("row", names("r", n));
            b.objects("col", names("c", n));
            b.fact("at-row", &[0]);
            b.fact("at-col", &[0]);
            b.fact("visited", &[0, 0]);
            for i in 0..n - 1 {
                b.fact("next-row", &[i, i + 1]);
                b.fact("next-col", &[i, i + 1]);
            }
            for r in 0..n {
                for c in 0..n {
                    b.goal("visited", &[r, c], 1);
                }
            }
        }
        BenchmarkId::Intrusion => {
            b.objects("host", names("h", n));
            for h in 0..n {
                b.goal("data-stolen", &[h], 1);
            }
        }
        BenchmarkId::Spanner => {
            let locs = n + 2;
            let spanners = n + rng.gen_range(0..=1);
            b.objects("loc", names("l", locs));
            b.objects("man", ["bob".to_string()]);
            b.objects("nut", names("n", n));
            b.objects("spanner", names("s", spanners));
            b.fact("man-at", &[0, 0]);
            for l in 0..locs - 1 {
                b.fact("link", &[l, l + 1]);
            }
            for s in 0..spanners {
                let at = rng.gen_range(0..locs - 1);
                b.fact("spanner-at", &[s, at]);
                b.fact("useable", &[s]);
            }
            for x in 0..n {
                b.fact("nut-at", &[x, locs - 1]);
                b.fact("loose", &[x]);
                b.goal("tightened", &[x], 1);
            }
        }
        BenchmarkId::Floyd => {
            b.objects("node", names("v", n));
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            let (src, dst) = (order[0], order[n - 1]);
            let mut edges = std::collections::BTreeSet::new();
            for w in order.windows(2) {
                edges.insert((w[0], w[1]));
            }
            for _ in 0..n {
                let (x, y) = (rng.gen_range(0..n), rng.gen_range(0..n));
                if x != y && (x, y) != (src, dst) {
                    edges.insert((x, y));
                }
            }
            for (x, y) in edges {
                b.fact("path", &[x, y]);
            }
            b.goal("path", &[src, dst], 1);
        }
        BenchmarkId::Sorting | BenchmarkId::Reverse | BenchmarkId::Select | BenchmarkId::Find => {
            b.objects("pos", names("p", n));
            let hi = if id == BenchmarkId::Find { 3 } else { (2 * n as i64).max(10) };
            let v: Vec<i64> = (0..n).map(|_| rng.gen_range(0..hi)).collect();
            for (i, &x) in v.iter().enumerate() {
                b.init("v", &[i], x);
            }
            match id {
                BenchmarkId::Sorting => {
                    let mut sorted = v.clone();
                    sorted.sort_unstable();
                    for (i, &x) in sorted.iter().enumerate() {
                        b.goal("v", &[i], x);
                    }
                }
                BenchmarkId::Reverse => {
                    for (i, &x) in v.iter().rev().enumerate() {
                        b.goal("v", &[i], x);
                    }
                }
                BenchmarkId::Select => {
                    b.init("best", &[], v[0]);
                    b.goal("best", &[], *v.iter().min().unwrap());
                }
                _ => {
                    let target = rng.gen_range(0..hi);
                    b.init("target", &[], target);
                    b.goal("count", &[], v.iter().filter(|&&x| x == target).count() as i64);
                }
            }
        }
        BenchmarkId::TriangularSum | BenchmarkId::Fibonacci => {
            b.objects("pos", names("p", n));
            for i in 0..n - 1 {
                b.fact("succ", &[i, i + 1]);
            }
            if id == BenchmarkId::TriangularSum {
                for i in 0..n {
                    b.init("v", &[i], i as i64);
                }
                let last = (n - 1) as i64;
                b.goal("v", &[n - 1], last * (last + 1) / 2);
            } else {
                b.init("v", &[1], 1);
                b.goal("v", &[n - 1], fibonacci(n - 1));
            }
        }
    }
    b.build(format!("{}-{size}-s{seed}", id.name()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_per_seed() {
        for id in BenchmarkId::ALL {
            let a = generate(id, 6, 3).unwrap();
            let b = generate(id, 6, 3).unwrap();
            assert_eq!(a, b, "{id}");
        }
        let a = generate(BenchmarkId::Sorting, 20, 1).unwrap();
        let b = generate(BenchmarkId::Sorting, 20, 2).unwrap();
        assert_ne!(a.init, b.init);
    }

    #[test]
    fn sizes_are_honoured() {
        let blocks = generate(BenchmarkId::BlocksOntable, 1000, 0).unwrap();
        assert_eq!(blocks.total_objects(), 1000);
        let gripper = generate(BenchmarkId::Gripper, 5001, 0).unwrap();
        let dom = domain(BenchmarkId::Gripper);
        assert_eq!(gripper.count(dom.type_id("ball").unwrap()), 5001);
        assert_eq!(gripper.count(dom.type_id("room").unwrap()), 2);
    }

    #[test]
    fn fibonacci_bounds() {
        assert_eq!(fibonacci(10), 55);
        assert!(generate(BenchmarkId::Fibonacci, 94, 0).is_err());
        assert!(generate(BenchmarkId::Fibonacci, 93, 0).is_ok());
        assert!(generate(BenchmarkId::Floyd, 1, 0).is_err());
    }
}
