//! Closed-form character sides and an independent PBW count.

mod pbw;
mod sums;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{EngineError, Result};
use crate::lie_data::{AlgebraSpec, RootSystemData};
use crate::qp_enum::{census_to_series, enumerate_census, WeightSpec};
use crate::series::{geometric_inverse_factor, LevelAccumulator, TruncatedSeries};

pub use pbw::pbw_census;
pub use sums::{char_l_sum, char_n_sum, char_rect_sum, sum_side, ExponentForm, ExponentParts};

/// `∏_{α>0} ∏_{n≥1} (1 − q^n y^α)^{-1}` truncated at `truncation`.
pub fn char_product(rs: &RootSystemData, truncation: u32) -> TruncatedSeries {
    char_product_without(rs, truncation, None)
}

/// [`char_product`] with the root at index `drop` (in ascending height order)
/// left out. Only useful for exercising mismatch reporting.
pub fn char_product_without(rs: &RootSystemData, truncation: u32, drop: Option<usize>) -> TruncatedSeries {
    let mut acc = LevelAccumulator::new(rs.rank(), truncation);
    acc.add_one(0, &vec![0; rs.rank()]);
    for (idx, root) in rs.positive_roots.iter().enumerate() {
        if Some(idx) == drop {
            continue;
        }
        for n in 1..=truncation {
            acc.divide_by_one_minus(root, n);
        }
    }
    acc.into_series()
}

/// The product side built from [`geometric_inverse_factor`] and generic
/// series multiplication; slower, used as a cross-check.
pub fn char_product_by_factors(rs: &RootSystemData, truncation: u32) -> Result<TruncatedSeries> {
    let mut s = TruncatedSeries::one(rs.rank(), truncation);
    for root in &rs.positive_roots {
        s = s.mul(&geometric_inverse_factor(root, 1, truncation)?)?;
    }
    Ok(s)
}

/// Which character computation to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Formula {
    #[serde(rename = "L_sum")]
    LSum,
    #[serde(rename = "N_sum")]
    NSum,
    #[serde(rename = "rect_sum")]
    RectSum,
    #[serde(rename = "product")]
    Product,
    #[serde(rename = "pbw")]
    Pbw,
    #[serde(rename = "census")]
    Census,
}

impl Formula {
    pub fn name(&self) -> &'static str {
        match self {
            Formula::LSum => "L_sum",
            Formula::NSum => "N_sum",
            Formula::RectSum => "rect_sum",
            Formula::Product => "product",
            Formula::Pbw => "pbw",
            Formula::Census => "census",
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Formula {
    type Err = EngineError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "l_sum" => Ok(Formula::LSum),
            "n_sum" => Ok(Formula::NSum),
            "rect_sum" => Ok(Formula::RectSum),
            "product" => Ok(Formula::Product),
            "pbw" => Ok(Formula::Pbw),
            "census" => Ok(Formula::Census),
            _ => Err(EngineError::InvalidArgument(format!("unknown formula {s:?}"))),
        }
    }
}

/// A computed series with its provenance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CharacterSeries {
    pub formula: Formula,
    pub spec: AlgebraSpec,
    pub params: Params,
    pub series: TruncatedSeries,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Params {
    #[serde(rename = "M")]
    pub truncation: u32,
    #[serde(skip_serializing_if = "Option::is_none", flatten)]
    pub weight: Option<WeightSpec>,
}

impl CharacterSeries {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("series serializes")
    }
}

/// Runs `formula`. `L_sum` takes a standard weight, `rect_sum` a rectangular
/// one; `census` takes any weight and defaults to the generalized Verma
/// module; `N_sum`, `product` and `pbw` take none.
pub fn compute(rs: &RootSystemData, formula: Formula, weight: Option<WeightSpec>, truncation: u32) -> Result<CharacterSeries> {
    let (series, weight) = match (formula, weight) {
        (Formula::LSum, Some(w @ WeightSpec::Standard { k })) => (char_l_sum(rs, k, truncation)?, Some(w)),
        (Formula::LSum, Some(w @ WeightSpec::AltE { k })) => (char_l_sum(rs, k, truncation)?, Some(w)),
        (Formula::RectSum, Some(w @ WeightSpec::Rectangular { k0, j, kj })) => {
            (char_rect_sum(rs, k0, j, kj, truncation)?, Some(w))
        }
        (Formula::NSum, None | Some(WeightSpec::GenericVerma)) => (char_n_sum(rs, truncation)?, None),
        (Formula::Product, None | Some(WeightSpec::GenericVerma)) => (char_product(rs, truncation), None),
        (Formula::Pbw, None | Some(WeightSpec::GenericVerma)) => (pbw_census(rs, truncation)?, None),
        (Formula::Census, w) => {
            let w = w.unwrap_or(WeightSpec::GenericVerma);
            (census_to_series(&enumerate_census(rs, &w, truncation)?), Some(w))
        }
        (f, w) => {
            return Err(EngineError::InvalidArgument(format!(
                "formula {f} does not take weight {}",
                w.map(|w| w.to_string()).unwrap_or_else(|| "none".into())
            )))
        }
    };
    Ok(CharacterSeries { formula, spec: rs.spec, params: Params { truncation, weight }, series })
}
