//! Exact (perfect) sampling by partially recursive acceptance rejection.
//!
//! A target density `w` over an easy product measure `μ` is sampled one
//! dimension at a time. Each dimension's label is drawn from `μ` and then
//! kept or redrawn by a local test that looks at neighboring dimensions only
//! when it has to, recursively sampling those on demand. Below a
//! model-specific critical parameter the expected work per dimension is
//! bounded, so a full sample costs `O(n)` primitive draws.
//!
//! Models: hard-core, Strauss, autonormal, random cluster (with a Potts
//! coloring step) and uniform rooted spanning trees by cycle popping. The
//! [`oracle`] module holds exact distributions of small instances for
//! checking samplers.
//!
//! ```
//! use prar::{engine::EngineOptions, graph::{Generator, Graph}, rng::RngStream};
//! use prar::sampler::{Method, Sampler};
//!
//! let g = Graph::generate(Generator::Cycle(100)).unwrap();
//! let sampler = Sampler::new("hardcore:lambda=0.5".parse().unwrap(), &g,
//!                            EngineOptions::default(), Method::Prar).unwrap();
//! let mut rng = RngStream::new(7);
//! let (draw, stats) = sampler.draw(None, &mut rng).unwrap();
//! let x = draw.bits(&(0..100).collect::<Vec<_>>()).unwrap();
//! assert!((0..100).all(|i| !(x[i] && x[(i + 1) % 100])));
//! assert!(stats.draws.total() >= 100);
//! ```

pub mod bench;
pub mod cli;
pub mod engine;
pub mod error;
pub mod graph;
pub mod models;
pub mod oracle;
pub mod rng;
pub mod sampler;
pub mod wilson;

pub use error::{Error, Result};
