//! Reference distributions and p-value recomputation.

mod special;

pub use special::{ln_beta, ln_gamma, reg_inc_beta, reg_inc_gamma_lower, reg_inc_gamma_upper};

use serde::{Deserialize, Serialize};

use crate::extract::{ParsedResult, RangeViolation, StatKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TailMode {
    TwoTailed,
    OneTailed,
}

/// A p-value recomputed from a reported statistic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecomputedP {
    pub value: f64,
    pub method: StatKind,
    pub tails: TailMode,
}

impl RecomputedP {
    /// The one-tailed counterpart (`p/2`) for sign-symmetric statistics;
    /// other statistics are returned unchanged.
    pub fn one_tailed(self) -> RecomputedP {
        if self.method.is_sign_symmetric() && self.tails == TailMode::TwoTailed {
            RecomputedP {
                value: self.value / 2.0,
                tails: TailMode::OneTailed,
                ..self
            }
        } else {
            self
        }
    }
}

/// Standard normal CDF.
pub fn normal_cdf(z: f64) -> f64 {
    let h = z * z / 2.0;
    let upper = 0.5 * reg_inc_gamma_upper(0.5, h).unwrap_or(0.0);
    if z >= 0.0 {
        1.0 - upper
    } else {
        upper
    }
}

/// Two-tailed normal p-value `2(1 - Φ(|z|))`.
pub fn normal_two_tailed(z: f64) -> f64 {
    if z.is_nan() {
        return f64::NAN;
    }
    reg_inc_gamma_upper(0.5, z * z / 2.0).unwrap_or(f64::NAN)
}

/// Student t CDF with `df` degrees of freedom.
pub fn t_cdf(t: f64, df: f64) -> f64 {
    let tail = 0.5 * t_two_tailed(t, df);
    if t >= 0.0 {
        1.0 - tail
    } else {
        tail
    }
}

/// Two-tailed Student t p-value `2(1 - T_df(|t|))`.
pub fn t_two_tailed(t: f64, df: f64) -> f64 {
    if t.is_infinite() {
        return 0.0;
    }
    let x = df / (df + t * t);
    reg_inc_beta(df / 2.0, 0.5, x).unwrap_or(f64::NAN)
}

/// F distribution CDF.
pub fn f_cdf(f: f64, df1: f64, df2: f64) -> f64 {
    if f <= 0.0 {
        return 0.0;
    }
    let x = df1 * f / (df1 * f + df2);
    reg_inc_beta(df1 / 2.0, df2 / 2.0, x).unwrap_or(f64::NAN)
}

/// Upper tail `1 - F_{df1,df2}(f)`.
pub fn f_upper(f: f64, df1: f64, df2: f64) -> f64 {
    if f <= 0.0 {
        return 1.0;
    }
    let x = df2 / (df2 + df1 * f);
    reg_inc_beta(df2 / 2.0, df1 / 2.0, x).unwrap_or(f64::NAN)
}

/// Chi-square CDF; identical to `P(df/2, x/2)`.
pub fn chisq_cdf(x: f64, df: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    reg_inc_gamma_lower(df / 2.0, x / 2.0).unwrap_or(f64::NAN)
}

/// Upper tail `1 - ChiSq_df(x)`.
pub fn chisq_upper(x: f64, df: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    reg_inc_gamma_upper(df / 2.0, x / 2.0).unwrap_or(f64::NAN)
}

fn positive(df: Option<f64>) -> Option<f64> {
    df.filter(|d| *d > 0.0 && d.is_finite())
}

/// Recomputes the p-value implied by a parsed result.
///
/// Returns `None` when the statistic has no reference distribution here
/// (`U`, `R2`, unknown labels, p-only reports), when a required df is
/// missing, or when the value lies outside the statistic's range.
pub fn recompute_p(result: &ParsedResult, tails: TailMode) -> Option<RecomputedP> {
    let kind = result.kind;
    let value = match kind {
        StatKind::T => {
            let t = result.stat_value?;
            t_two_tailed(t.abs(), positive(result.df1)?)
        }
        StatKind::F => {
            let f = result.stat_value?;
            if f < 0.0 {
                return None;
            }
            f_upper(f, positive(result.df1)?, positive(result.df2)?)
        }
        StatKind::R => {
            let r = result.stat_value?;
            if result.range_violations.contains(&RangeViolation::ROutOfRange) || r.abs() > 1.0 {
                return None;
            }
            let df = positive(result.df1)?;
            if r.abs() == 1.0 {
                0.0
            } else {
                let t = r * (df / (1.0 - r * r)).sqrt();
                t_two_tailed(t.abs(), df)
            }
        }
        StatKind::Z => normal_two_tailed(result.stat_value?.abs()),
        StatKind::Chi2 | StatKind::Q | StatKind::H | StatKind::G2 => {
            let x = result.stat_value?;
            if x < 0.0 {
                return None;
            }
            chisq_upper(x, positive(result.df1)?)
        }
        StatKind::BetaSE => {
            let se = result.se_beta.filter(|se| *se > 0.0)?;
            normal_two_tailed((result.beta? / se).abs())
        }
        StatKind::U | StatKind::R2 | StatKind::POnly | StatKind::Unknown => return None,
    };
    if !value.is_finite() {
        return None;
    }
    let two = RecomputedP {
        value: value.clamp(0.0, 1.0),
        method: kind,
        tails: TailMode::TwoTailed,
    };
    Some(match tails {
        TailMode::TwoTailed => two,
        TailMode::OneTailed => two.one_tailed(),
    })
}

/// `beta / SE` for beta reports, the z used for their recomputation.
pub fn z_estimate(result: &ParsedResult) -> Option<f64> {
    if result.kind != StatKind::BetaSE {
        return None;
    }
    let se = result.se_beta.filter(|se| *se > 0.0)?;
    Some(result.beta? / se)
}
