use std::collections::HashMap;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::sbm::{GroundTruth, Partition};

/// Cached clustering outputs keyed by graph; `None` records a failure.
pub type Memo = HashMap<Graph, Option<Partition>>;

/// Evaluates `f` through a memo, storing the relabeling-invariant form.
pub(crate) fn evaluate<F>(f: &mut F, g: &Graph, memo: &mut Memo) -> Option<Partition>
where
    F: FnMut(&Graph) -> Option<GroundTruth>,
{
    if let Some(v) = memo.get(g) {
        return v.clone();
    }
    let v = f(g).map(|t| t.canonical());
    memo.insert(g.clone(), v.clone());
    v
}

/// Least `k <= cap` such that a graph at Hamming distance `k` from `g` gets a
/// different clustering from `f`, or `cap` if there is none. A failed `f(g)`
/// gives 0; a failed neighbor counts as different.
///
/// `budget` bounds the wall-clock time of the search.
pub fn distance_to_instability<F>(g: &Graph, f: F, cap: usize, budget: Option<Duration>) -> Result<usize>
where
    F: FnMut(&Graph) -> Option<GroundTruth>,
{
    distance_to_instability_memo(g, f, cap, budget, &mut Memo::new())
}

pub fn distance_to_instability_memo<F>(
    g: &Graph,
    mut f: F,
    cap: usize,
    budget: Option<Duration>,
    memo: &mut Memo,
) -> Result<usize>
where
    F: FnMut(&Graph) -> Option<GroundTruth>,
{
    if cap == 0 {
        return Ok(0);
    }
    let Some(base) = evaluate(&mut f, g, memo) else {
        return Ok(0);
    };
    let start = Instant::now();
    let mut evaluated = 1usize;
    for k in 1..=cap {
        for h in g.neighbors_at(k) {
            if let Some(limit) = budget {
                if start.elapsed() > limit {
                    return Err(Error::BudgetExceeded { evaluated });
                }
            }
            evaluated += 1;
            if evaluate(&mut f, &h, memo).as_ref() != Some(&base) {
                return Ok(k);
            }
        }
    }
    Ok(cap)
}
