//! Constructions of DCA(4, n+1; n) with P1 and P2, the ingredients they need,
//! and the bookkeeping of which orders are reachable.

use std::fmt;

use thiserror::Error;

use crate::array::{ArrayError, ArrayKind, ResidueArray};

pub mod compose;
pub mod families;
pub mod spectrum;
pub mod table;

pub use compose::{dca_product, dm_prime, hdm_product, insert_hole};
pub use families::{
    construct_4m, construct_4m_general, construct_6mu, construct_odd, odd_index_for_order,
    odd_intervals, params_odd, FourMFamilyParams, OddFamilyParams, SixMuFamilyParams,
};
pub use spectrum::{spectrum_report, PaperStatus, SpectrumRow};
pub use table::{construct_from_table, odd_even_column, table_third_column, TABLE_ORDERS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("bad index: {0}")]
    BadIndex(String),
    #[error("no stored table for order {0}")]
    UnknownOrder(u32),
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("k={k} columns exceed the prime p={p}")]
    TooManyColumns { k: usize, p: u32 },
    #[error("invalid ingredient: {0}")]
    IngredientInvalid(String),
    #[error("ingredients disagree on k: {left} vs {right}")]
    MismatchedK { left: usize, right: usize },
    #[error("no implemented construction covers order {0}")]
    NoMethod(u32),
    #[error(transparent)]
    Array(#[from] ArrayError),
}

/// A direct construction together with the parameter that selects it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Table { order: u32 },
    OddF { i: u64 },
    FourM { k: u64 },
    SixMu { mu: u64 },
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Table { .. } => "table",
            Method::OddF { .. } => "odd-f",
            Method::FourM { .. } => "four-m",
            Method::SixMu { .. } => "six-mu",
        }
    }

    pub fn order(&self) -> u64 {
        match *self {
            Method::Table { order } => order as u64,
            Method::OddF { i } => {
                let k = 2 * i * i + 7 * i + 6;
                2 * (2 * k + 1)
            }
            Method::FourM { k } => 16 * k + 8,
            Method::SixMu { mu } => 6 * mu + 4,
        }
    }

    /// Builds the reduced array.
    pub fn build(&self) -> Result<ResidueArray, ConstructError> {
        match *self {
            Method::Table { order } => construct_from_table(order),
            Method::OddF { i } => {
                let p = params_odd(i)?;
                construct_odd(p.m, p.f)
            }
            Method::FourM { k } => construct_4m(k),
            Method::SixMu { mu } => construct_6mu(mu),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Table { order } => write!(f, "table order={order}"),
            Method::OddF { i } => write!(f, "odd-f i={i}"),
            Method::FourM { k } => write!(f, "four-m k={k}"),
            Method::SixMu { mu } => write!(f, "six-mu mu={mu}"),
        }
    }
}

/// Every direct method whose parameters are valid for `order`, in dispatch
/// order: table, odd-f, four-m, six-mu.
pub fn applicable_methods(order: u32) -> Vec<Method> {
    let mut out = Vec::new();
    if table_third_column(order).is_some() {
        out.push(Method::Table { order });
    }
    if let Some(i) = odd_index_for_order(order as u64) {
        if params_odd(i).is_ok() {
            out.push(Method::OddF { i });
        }
    }
    if order % 16 == 8 {
        let k = (order as u64 - 8) / 16;
        if FourMFamilyParams::from_index(k).is_ok() {
            out.push(Method::FourM { k });
        }
    }
    if order % 12 == 10 {
        let mu = (order as u64 - 4) / 6;
        if SixMuFamilyParams::new(mu).is_ok() {
            out.push(Method::SixMu { mu });
        }
    }
    out
}

/// The named method's parameter for `order`, or `None` if that family does
/// not reach it.
pub fn method_for(name: &str, order: u32) -> Option<Method> {
    applicable_methods(order).into_iter().find(|m| m.name() == name)
}

/// First applicable direct construction for `order`, as a reduced array.
pub fn construct_auto(order: u32) -> Result<(ResidueArray, Method), ConstructError> {
    for m in applicable_methods(order) {
        if let Ok(a) = m.build() {
            debug_assert_eq!(a.kind(), ArrayKind::Dca);
            return Ok((a, m));
        }
    }
    Err(ConstructError::NoMethod(order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::verify_dca;

    #[test]
    fn auto_dispatch() {
        let (a, m) = construct_auto(26).unwrap();
        assert_eq!(m, Method::OddF { i: 0 });
        assert_eq!(m.to_string(), "odd-f i=0");
        assert_eq!(a.order(), 26);
        let (_, m) = construct_auto(34).unwrap();
        assert_eq!(m.to_string(), "six-mu mu=5");
        let (_, m) = construct_auto(24).unwrap();
        assert_eq!(m.name(), "table");
        assert_eq!(construct_auto(64), Err(ConstructError::NoMethod(64)));
        assert_eq!(construct_auto(7), Err(ConstructError::NoMethod(7)));
    }

    #[test]
    fn method_orders_match_arrays() {
        for order in (6..=400).step_by(2) {
            for m in applicable_methods(order) {
                assert_eq!(m.order(), order as u64, "{m}");
                let a = m.build().unwrap();
                assert_eq!(a.order(), order);
                assert!(verify_dca(&a, true).unwrap().passed(), "{m}");
            }
        }
    }

    #[test]
    fn excluded_indices_fall_through() {
        // i = 2 gives order 114, but the index is excluded.
        let k = 2 * 4 + 14 + 6;
        let order = 2 * (2 * k + 1);
        assert_eq!(odd_index_for_order(order), Some(2));
        assert!(applicable_methods(order as u32).iter().all(|m| m.name() != "odd-f"));
        assert!(method_for("four-m", 24).is_none());
        assert_eq!(method_for("four-m", 40), Some(Method::FourM { k: 2 }));
    }
}
