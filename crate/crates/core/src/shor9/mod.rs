//! The nine-wavepacket code: encode, inject a single-channel displacement,
//! decode, read the eight syndrome detectors, classify, feed forward and
//! score the corrected mode.

mod classify;
mod config;
mod ensemble;
mod feedforward;
mod protocol;

pub use classify::{classify, false_alarm_probability, Classification, PairPattern, Verdict};
pub use config::{CodeConfig, ErrorModel, FeedforwardPolicy, DEFAULT_THRESHOLD_SIGMA};
pub use ensemble::{run_ensemble, run_trial, summarize, EnsembleSummary, TrialRecord};
pub use feedforward::{
    detector_sigmas, feedforward, gains_for, readout_detector, residual_form, theory_fidelity, theory_output_power,
    theory_output_variance, DetectorGain, FeedforwardPlan,
};
pub use protocol::{
    condition_on_outcomes, decode9, encode9, inject_error, measure_syndrome, ErrorEvent, Syndrome, DETECTORS,
    MEASUREMENT_ORDER,
};
