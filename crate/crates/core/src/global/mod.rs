//! Global product of the reduced task-and-motion products, strategy
//! extraction and dependency classes.

mod product;
mod synth;

use petgraph::unionfind::UnionFind;

pub use product::{build_global_product, find_global_lasso, GlobalProduct};
pub use synth::{minimize_synchronizations, synthesize, AgentStages, Step, Strategy};

use crate::taskprod::TaskMotionProduct;

/// Finest partition of the agents in which `i` and `i'` share a class
/// whenever `i'` belongs to the dependency set of a transition of agent
/// `i`'s task-and-motion product. Classes are sorted by their smallest agent.
pub fn compute_dependency_classes(tms: &[TaskMotionProduct]) -> Vec<Vec<usize>> {
    let n = tms.len();
    let mut uf = UnionFind::<usize>::new(n);
    for tm in tms {
        for d in &tm.dep {
            for j in d.iter() {
                uf.union(tm.agent, j);
            }
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = uf.find(i);
        if slot[r] == usize::MAX {
            slot[r] = classes.len();
            classes.push(Vec::new());
        }
        classes[slot[r]].push(i);
    }
    classes
}
