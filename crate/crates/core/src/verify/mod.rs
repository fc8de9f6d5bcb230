//! Executable forms of the analysis: the layered directed reduction, the
//! grade-respecting tree check and rooted spider decompositions.

mod dst;
mod grt;
mod spider;

pub use dst::{brute_force_dst, reduce_to_dst, Arc, DstError, DstInstance, DEFAULT_DST_CAP};
pub use grt::check_grt;
pub use spider::{
    check_decomposition, m_optimize, spider_decompose, RootedSpider, SpiderDecomposition,
    SpiderError,
};
