//! Implied-volatility asymptotics: long-time saddlepoint expansions,
//! short-time ATM machinery, and extreme-strike wing formulas.

pub mod long;
pub mod short;
pub mod wing;
