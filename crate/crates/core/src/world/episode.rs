use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::random::random_polyline_with;
use super::{Board, PickPlaceCommand, World, WorldError};
use crate::configuration::{simplify, validate, Configuration};
use crate::router::{bidirectional_distance, next_action, project, PlanOutcome, RouterError, RoutingAction};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Converged,
    ActionCapReached,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Step {
    pub action: RoutingAction,
    pub oriented_goal: Configuration,
    pub command: PickPlaceCommand,
    /// Simplified configuration after the command.
    pub configuration: Configuration,
    pub distance_before: usize,
    pub distance_after: usize,
    /// Nanoseconds spent in the planner for this step.
    pub plan_time_ns: u64,
}

#[derive(Clone, Debug)]
pub struct Episode {
    pub initial: Configuration,
    pub goal: Configuration,
    pub steps: Vec<Step>,
    pub outcome: Outcome,
    pub world: World,
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum EpisodeError {
    #[error("max_actions must be at least 1")]
    ZeroCap,
    #[error("goal configuration is invalid at index {0}")]
    InvalidGoal(usize),
    #[error(transparent)]
    Router(#[from] RouterError),
    #[error(transparent)]
    World(#[from] WorldError),
    #[error("step {step}: DOO encodes as {actual}, planner expected {expected}")]
    Disagreement { step: usize, expected: Configuration, actual: Configuration },
    #[error("step {step}: distance went from {before} to {after}")]
    NotDecreasing { step: usize, before: usize, after: usize },
}

/// Plans and executes pick-and-place actions until the DOO matches `goal`
/// (in either direction) or `max_actions` actions have been taken.
///
/// Both sides are compared after simplification. `clock` returns a monotonic
/// time in nanoseconds and is read around each planner call only.
pub fn run_episode(
    mut world: World,
    goal: &Configuration,
    max_actions: usize,
    clock: &mut dyn FnMut() -> u64,
) -> Result<Episode, EpisodeError> {
    if max_actions == 0 {
        return Err(EpisodeError::ZeroCap);
    }
    validate(goal, &world.board.graph).map_err(EpisodeError::InvalidGoal)?;
    let goal = simplify(goal);
    let initial = world.configuration()?;
    let mut current = initial.clone();
    let mut steps = Vec::new();
    let outcome = loop {
        if steps.len() == max_actions {
            break if bidirectional_distance(&current, &goal) == 0 { Outcome::Converged } else { Outcome::ActionCapReached };
        }
        let t0 = clock();
        let plan = next_action(&current, &goal, &world.board.graph);
        let plan_time_ns = clock().saturating_sub(t0);
        let (action, oriented_goal) = match plan? {
            PlanOutcome::Done => break Outcome::Converged,
            PlanOutcome::Next { action, oriented_goal } => (action, oriented_goal),
        };
        let step = steps.len();
        let expected = simplify(&project(&current, &action)?);
        let command = world.realize_action(&action)?;
        world = world.apply_command(&command)?;
        let actual = world.configuration()?;
        if actual != expected {
            return Err(EpisodeError::Disagreement { step, expected, actual });
        }
        let before = bidirectional_distance(&current, &goal);
        let after = bidirectional_distance(&actual, &goal);
        if after >= before {
            return Err(EpisodeError::NotDecreasing { step, before, after });
        }
        steps.push(Step {
            action,
            oriented_goal,
            command,
            configuration: actual.clone(),
            distance_before: before,
            distance_after: after,
            plan_time_ns,
        });
        current = actual;
    };
    Ok(Episode { initial, goal, steps, outcome, world })
}

/// SplitMix64 finalizer, used to derive per-trial seeds.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Clone, Debug, PartialEq)]
pub enum TrialResult {
    /// No valid random DOO could be generated.
    Excluded { reason: String },
    /// The episode stopped with an error.
    Failed { reason: String },
    Ran(Trial),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trial {
    pub initial: Configuration,
    pub goal: Configuration,
    pub outcome: Outcome,
    /// Configuration after each action.
    pub configurations: Vec<Configuration>,
    pub plan_times_ns: Vec<u64>,
}

impl Trial {
    pub fn actions(&self) -> usize {
        self.configurations.len()
    }
}

/// Benchmark trial `index`: draws an initial DOO and a goal DOO from the
/// seed `seed ^ splitmix64(index)` and routes one to the other.
pub fn run_trial(
    board: &Board,
    seed: u64,
    index: u64,
    max_actions: usize,
    length_range: (f64, f64),
    clock: &mut dyn FnMut() -> u64,
) -> TrialResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ splitmix64(index));
    let drawn = random_polyline_with(board, length_range, &mut rng)
        .and_then(|start| Ok((start, random_polyline_with(board, length_range, &mut rng)?)));
    let (start, goal_doo) = match drawn {
        Ok(pair) => pair,
        Err(e) => return TrialResult::Excluded { reason: e.to_string() },
    };
    let prepared = World::new(board.clone(), start).and_then(|w| {
        let goal = w.with_doo(goal_doo)?.configuration()?;
        Ok((w, goal))
    });
    let (world, goal) = match prepared {
        Ok(x) => x,
        Err(e) => return TrialResult::Excluded { reason: e.to_string() },
    };
    match run_episode(world, &goal, max_actions, clock) {
        Ok(ep) => TrialResult::Ran(Trial {
            initial: ep.initial,
            goal: ep.goal,
            outcome: ep.outcome,
            configurations: ep.steps.iter().map(|s| s.configuration.clone()).collect(),
            plan_times_ns: ep.steps.iter().map(|s| s.plan_time_ns).collect(),
        }),
        Err(e) => TrialResult::Failed { reason: e.to_string() },
    }
}
