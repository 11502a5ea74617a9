use super::path::{AlgorithmOutput, ExecutionPath};
use crate::error::{BaxError, Result};

/// Scans every element, then returns the `k` highest-valued ones, best first.
///
/// Ties go to the element that appears earlier in `elements`.
pub fn run_topk<F>(
    elements: &[Vec<f64>],
    k: usize,
    mut f: F,
) -> Result<(ExecutionPath, AlgorithmOutput)>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    if k == 0 || k > elements.len() {
        return Err(BaxError::input(format!(
            "k = {k} out of range for {} elements",
            elements.len()
        )));
    }
    let mut path = ExecutionPath::default();
    let mut values = Vec::with_capacity(elements.len());
    for x in elements {
        let v = f(x)?;
        if v.is_nan() {
            return Err(BaxError::Contract("top-k scan received NaN".into()));
        }
        path.record(x, v);
        values.push(v);
    }
    let mut order: Vec<usize> = (0..elements.len()).collect();
    // stable sort keeps list order among equal values
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    order.truncate(k);
    Ok((
        path,
        AlgorithmOutput::TopK {
            elements: order.iter().map(|&i| elements[i].clone()).collect(),
            values: order.iter().map(|&i| values[i]).collect(),
        },
    ))
}
