//! Truncated bar and cobar constructions and the MC adjunction between
//! DGLAs and Artinian cdgas.

pub mod bar;
pub mod cobar;
pub mod counit;
pub mod freelie;

pub use bar::{cdga_map_to_mc, mc_to_cdga_map, mc_to_cdga_map_on, BarTruncation};
pub use freelie::FreeLie;
pub use cobar::{dgla_map_to_mc, mc_to_dgla_map, mc_to_dgla_map_on, CobarMap, CobarTruncation};
pub use counit::{counit_cone_weight_cohomology, counit_cone_weight_complex};

use crate::dgla::NilpotentDgla;
use crate::error::Result;
use crate::mcgauge::is_mc;
use crate::qlinalg::Q;

/// Outcome of running all four transports on one degree-1 element.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct AdjunctionReport {
    pub is_mc: bool,
    /// the cobar-side map passed validation
    pub cobar_map_valid: bool,
    /// the bar-side map passed validation
    pub bar_map_valid: bool,
    /// both inverse transports returned the input
    pub roundtrips: bool,
}

impl AdjunctionReport {
    /// Both maps are valid exactly for MC elements and invert correctly.
    pub fn consistent(&self) -> bool {
        self.cobar_map_valid == self.is_mc && self.bar_map_valid == self.is_mc && self.roundtrips
    }
}

pub fn adjunction_check(host: &NilpotentDgla, omega: &[Q], order: usize) -> Result<AdjunctionReport> {
    cobar::check_order(&host.a, order)?;
    let mc = is_mc(host, omega);
    let mut roundtrips = true;
    let cobar_map = match mc_to_dgla_map(host, omega, order) {
        Ok(f) => {
            roundtrips &= dgla_map_to_mc(&f, host)? == omega;
            true
        }
        Err(crate::Error::NotChainMap(_)) => false,
        Err(e) => return Err(e),
    };
    let bar = BarTruncation::new(&host.l, order)?;
    let bar_map = match mc_to_cdga_map_on(&bar, host, omega) {
        Ok(f) => {
            roundtrips &= cdga_map_to_mc(&bar, &f, host)? == omega;
            true
        }
        Err(crate::Error::NotChainMap(_)) => false,
        Err(e) => return Err(e),
    };
    Ok(AdjunctionReport {
        is_mc: mc,
        cobar_map_valid: cobar_map,
        bar_map_valid: bar_map,
        roundtrips,
    })
}
