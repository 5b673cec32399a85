//! Benchmark runner: computes one basis vector with a fresh session and
//! reports wall time plus the number of auxiliary vectors the recursion
//! computed. Timings are reported, never asserted; the recursion counts are
//! the reproducible quantity.

use std::time::Instant;

use crate::alcove::a_plus_of_point;
use crate::canonical::{Mode, SessionOf};
use crate::kl::KLSessionOf;
use crate::laurent::Coeff;
use crate::partition::{Context, Partition};
use crate::Result;

/// Which algorithm a benchmark row exercises.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algo {
    Llt,
    Fast,
    Soergel,
}

impl Algo {
    pub fn name(&self) -> &'static str {
        match self {
            Algo::Llt => "llt",
            Algo::Fast => "fast",
            Algo::Soergel => "soergel",
        }
    }
}

impl std::str::FromStr for Algo {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "llt" => Ok(Algo::Llt),
            "fast" => Ok(Algo::Fast),
            "soergel" => Ok(Algo::Soergel),
            other => Err(crate::Error::BadContext(format!(
                "unknown algorithm {other:?}"
            ))),
        }
    }
}

/// One benchmark measurement.
#[derive(Clone, Debug)]
pub struct BenchRow {
    pub algo: Algo,
    pub k: usize,
    pub l: u32,
    pub mu: Partition,
    pub seconds: f64,
    /// Recursion size: basis vectors that required real computation. For
    /// the Fock-side algorithms this counts tableau-plus-reduction builds
    /// (critical diagrams and column shifts are free rewrites); for the
    /// alcove recursion it counts self-dual elements beyond the
    /// fundamental one.
    pub n_count: u64,
}

/// Run one algorithm on one input with an empty memo.
pub fn run_bench<C: Coeff>(algo: Algo, ctx: Context, mu: &Partition) -> Result<BenchRow> {
    let start = Instant::now();
    let n_count = match algo {
        Algo::Llt | Algo::Fast => {
            let mode = if algo == Algo::Llt {
                Mode::Llt
            } else {
                Mode::Fast
            };
            let mut s: SessionOf<C> = SessionOf::new(ctx, mode);
            s.gcb(mu)?;
            s.work_count()
        }
        Algo::Soergel => {
            let mut s: KLSessionOf<C> = KLSessionOf::new(ctx);
            let top = a_plus_of_point(&ctx.rho_shifted(mu), ctx);
            s.nbar(&top)?;
            s.computed_count() - 1
        }
    };
    Ok(BenchRow {
        algo,
        k: ctx.k(),
        l: ctx.l(),
        mu: mu.clone(),
        seconds: start.elapsed().as_secs_f64(),
        n_count,
    })
}

/// The built-in benchmark suite: four (k, l, μ) inputs at growing scale.
pub fn table1() -> Vec<(Context, Partition)> {
    vec![
        (Context::new(4, 5).unwrap(), Partition::new(vec![20, 10])),
        (Context::new(4, 5).unwrap(), Partition::new(vec![40, 20])),
        (
            Context::new(5, 6).unwrap(),
            Partition::new(vec![36, 24, 12]),
        ),
        (
            Context::new(5, 6).unwrap(),
            Partition::new(vec![72, 48, 24]),
        ),
    ]
}
