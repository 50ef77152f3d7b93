//! Assistant policies: the published-forecast update rules and the
//! baselines they are compared against.

pub mod average;
pub mod expodamp;
pub mod kalman;
pub mod naive;
pub mod partpred;
pub mod update;

pub use average::{average_step, AverageState, EmpiricalState};
pub use expodamp::{expodamp_step, ExpodampState};
pub use kalman::{kalman_init, kalman_step, KalmanPolicy, KalmanPolicyState};
pub use naive::naive_step;
pub use partpred::{Branch, PartpredEvent, PartpredState};
pub use update::{update_congestion, update_general, UpdateRule};
