//! Exact samplers of finite traces and endless prefix streams.

pub mod direct;
pub mod random;
pub mod rejection;
pub mod stream;

pub use direct::{DirectSampler, SampleCost};
pub use random::{sample_bernoulli, sample_geometric, seeded, SeededRng};
pub use rejection::{RejectionSampler, RejectionStats};
pub use stream::{Parameter, PrefixStream, SamplerConfig, StreamStep, UniformSampler};
