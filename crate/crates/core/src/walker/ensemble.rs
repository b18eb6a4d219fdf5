use super::{simulate_tally, PathLedger, WalkConfig, WalkTally};
use crate::error::Result;
use crate::par::Parallelism;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryOutcome {
    pub trajectory_index: u64,
    pub tally: WalkTally,
    pub path: Option<PathLedger>,
}

/// Runs `trajectories` independent walks on streams
/// `base.trajectory_index .. base.trajectory_index + trajectories`.
///
/// Outcomes come back in stream order, so the merged tally is independent
/// of the worker count.
pub fn run_ensemble(
    base: &WalkConfig,
    trajectories: u64,
    parallelism: &Parallelism,
) -> Result<Vec<TrajectoryOutcome>> {
    base.validate()?;
    let indices: Vec<u64> = (0..trajectories).map(|i| base.trajectory_index + i).collect();
    parallelism
        .map(&indices, |&i| run_one(base, i))
        .into_iter()
        .collect()
}

/// Single-threaded reference for [`run_ensemble`].
pub fn run_ensemble_sequential(
    base: &WalkConfig,
    trajectories: u64,
) -> Result<Vec<TrajectoryOutcome>> {
    base.validate()?;
    (0..trajectories)
        .map(|i| run_one(base, base.trajectory_index + i))
        .collect()
}

fn run_one(base: &WalkConfig, index: u64) -> Result<TrajectoryOutcome> {
    let (tally, path) = simulate_tally(&base.with_trajectory(index))?;
    Ok(TrajectoryOutcome {
        trajectory_index: index,
        tally,
        path,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::PhysicalConstants;
    use crate::kinematics::ParticleSpec;

    #[test]
    fn worker_count_does_not_change_results() {
        let base = WalkConfig::new(
            ParticleSpec::new(1.0, 0.3).unwrap(),
            PhysicalConstants::natural(),
            20_000,
            8,
        );
        let seq = run_ensemble_sequential(&base, 6).unwrap();
        for p in [Parallelism::default(), Parallelism::with_workers(2), Parallelism::sequential()] {
            assert_eq!(run_ensemble(&base, 6, &p).unwrap(), seq);
        }
        let idx: Vec<u64> = seq.iter().map(|o| o.trajectory_index).collect();
        assert_eq!(idx, vec![0, 1, 2, 3, 4, 5]);
    }
}
