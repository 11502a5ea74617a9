use crate::acquisition::{OutputDistance, SampleBundle};
use crate::algorithms::{run_evolution_strategy, AlgorithmOutput, ESConfig};
use crate::domain::BoxDomain;
use crate::error::{BaxError, Result};
use crate::gp::Posterior;

/// Index of the output with the smallest summed distance to all others (lowest index on ties).
pub fn medoid_index(outputs: &[&AlgorithmOutput], distance: &OutputDistance) -> Result<usize> {
    if outputs.is_empty() {
        return Err(BaxError::input("no outputs to summarize"));
    }
    let mut best = (0, f64::INFINITY);
    for (i, a) in outputs.iter().enumerate() {
        let mut total = 0.0;
        for b in outputs {
            total += distance.distance(a, b)?;
        }
        if total < best.1 {
            best = (i, total);
        }
    }
    Ok(best.0)
}

/// The medoid of the bundle's outputs.
pub fn estimate_output(
    bundle: &SampleBundle,
    distance: &OutputDistance,
) -> Result<AlgorithmOutput> {
    let outputs = bundle.outputs();
    Ok(outputs[medoid_index(&outputs, distance)?].clone())
}

/// Runs the evolution strategy on the posterior mean instead of a sample.
pub fn refine_local_opt(
    posterior: &Posterior,
    config: &ESConfig,
    domain: &BoxDomain,
    seed: u64,
) -> Result<AlgorithmOutput> {
    let (_, out) = run_evolution_strategy(config, domain, |x| posterior.mean(x), seed)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::acquisition::BundleDraw;
    use crate::algorithms::ExecutionPath;
    use rand::{Rng, SeedableRng};

    fn opt(x: f64) -> AlgorithmOutput {
        AlgorithmOutput::LocalOpt {
            x_star: vec![x],
            f_star: 0.0,
        }
    }

    #[test]
    fn duplicated_output_wins() {
        let outs = [opt(5.0), opt(1.0), opt(1.0)];
        let refs: Vec<_> = outs.iter().collect();
        let d = OutputDistance::EuclideanOnOptimum {
            scales: vec![1.0, 1.0],
        };
        assert_eq!(medoid_index(&refs, &d).unwrap(), 1);
        assert_eq!(medoid_index(&refs[..1], &d).unwrap(), 0);
    }

    #[test]
    fn matches_exhaustive_scan() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let d = OutputDistance::EuclideanOnOptimum {
            scales: vec![1.0, 1.0],
        };
        for _ in 0..20 {
            let xs: Vec<f64> = (0..9).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let bundle = SampleBundle {
                draws: xs
                    .iter()
                    .enumerate()
                    .map(|(i, &x)| BundleDraw {
                        sample_id: i,
                        path: ExecutionPath::default(),
                        output: opt(x),
                    })
                    .collect(),
            };
            // in one dimension the medoid minimizes the sum of absolute deviations
            let cost = |c: f64| xs.iter().map(|x| (x - c).abs()).sum::<f64>();
            let best = xs.iter().copied().fold(f64::NAN, |b, x| {
                if b.is_nan() || cost(x) < cost(b) {
                    x
                } else {
                    b
                }
            });
            assert_eq!(estimate_output(&bundle, &d).unwrap(), opt(best));
        }
    }
}
