//! Window aggregators shared by the batch evaluator and the online monitor.

mod extremum;
mod kth;
mod rmq;

use thiserror::Error;

pub use extremum::{sliding_extremum_batch, Extremum, SlidingExtremum};
pub use kth::{sliding_kth_batch, RankedWindow, SlidingKth};
pub use rmq::AppendRmq;

#[derive(Debug, Error, PartialEq)]
pub enum SlidingError {
    #[error("window reaches offset {hi} but the trace has {len} samples")]
    WindowExceedsTrace { hi: usize, len: usize },
    #[error("rank {k} is outside 1..={width}")]
    RankOutOfRange { k: usize, width: usize },
}
