use rand::Rng;
use rand_distr::{Distribution, Exp};

use crate::model::{Label, RootedTree, Subtree};

/// Random binary topology by repeatedly joining a uniformly chosen pair.
pub fn yule_tree<R: Rng + ?Sized>(leaves: &[Label], rng: &mut R) -> RootedTree {
    let mut pool: Vec<Subtree> = leaves.iter().cloned().map(Subtree::Leaf).collect();
    while pool.len() > 1 {
        let i = rng.random_range(0..pool.len());
        let a = pool.swap_remove(i);
        let j = rng.random_range(0..pool.len());
        let b = pool.swap_remove(j);
        pool.push(Subtree::Inner((), vec![a, b]));
    }
    RootedTree::new(pool.pop().expect("at least one leaf")).expect("distinct labels")
}

/// Species tree with edge lengths: vertex `v` has children `children[v]` and
/// an incoming edge of length `length[v]`. Vertex 0 is the root.
#[derive(Debug, Clone)]
pub struct TimedTree {
    pub children: Vec<Vec<usize>>,
    pub length: Vec<f64>,
    pub name: Vec<Option<Label>>,
}

impl TimedTree {
    pub fn to_tree(&self) -> RootedTree {
        fn go(t: &TimedTree, v: usize) -> Subtree {
            match &t.name[v] {
                Some(l) => Subtree::Leaf(l.clone()),
                None => Subtree::Inner((), t.children[v].iter().map(|&c| go(t, c)).collect()),
            }
        }
        RootedTree::new(go(self, 0)).expect("valid species tree")
    }

    /// Edge lengths proportional to the edge count, root-to-deepest-leaf 1.
    pub fn from_topology(tree: &RootedTree) -> Self {
        let depth = tree.depths();
        let height = tree.node_ids().map(|v| depth[v]).max().unwrap_or(0).max(1) as f64;
        TimedTree {
            children: tree.node_ids().map(|v| tree.children(v).to_vec()).collect(),
            length: tree.node_ids().map(|v| if v == 0 { 0.0 } else { 1.0 / height }).collect(),
            name: tree.node_ids().map(|v| tree.label(v).cloned()).collect(),
        }
    }
}

/// Pure-birth tree grown forward in time until it has `names.len()` tips,
/// then run for one more waiting time and scaled to root-to-tip height 1.
pub fn yule_timed_tree<R: Rng + ?Sized>(names: &[Label], rng: &mut R) -> TimedTree {
    let n = names.len();
    let mut children: Vec<Vec<usize>> = vec![Vec::new()];
    let mut birth = vec![0.0];
    let mut length = vec![0.0];
    let mut tips = vec![0usize];
    let mut now = 0.0;
    loop {
        let wait = Exp::new(tips.len() as f64).expect("positive rate").sample(rng);
        now += wait;
        if tips.len() == n {
            break;
        }
        let k = rng.random_range(0..tips.len());
        let v = tips.swap_remove(k);
        length[v] = now - birth[v];
        for _ in 0..2 {
            let c = children.len();
            children.push(Vec::new());
            birth.push(now);
            length.push(0.0);
            children[v].push(c);
            tips.push(c);
        }
    }
    for &v in &tips {
        length[v] = now - birth[v];
    }
    let mut name = vec![None; children.len()];
    tips.sort_unstable();
    for (i, &v) in tips.iter().enumerate() {
        name[v] = Some(names[i].clone());
    }
    let height = now;
    for l in &mut length {
        *l /= height;
    }
    TimedTree { children, length, name }
}
