use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, ExactRational, RationalLit};

/// Eventually periodic tail of a weight sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tail {
    Constant(ExactRational),
    Periodic(Vec<ExactRational>),
}

impl Tail {
    pub fn cycle(&self) -> &[ExactRational] {
        match self {
            Tail::Constant(c) => std::slice::from_ref(c),
            Tail::Periodic(cycle) => cycle,
        }
    }
}

/// Positive weights `alpha_j` of a unilateral weighted shift `e_j -> alpha_j e_{j+1}`:
/// a finite prefix followed by a constant or periodic tail.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "WeightsJson", into = "WeightsJson")]
pub struct WeightSequence {
    prefix: Vec<ExactRational>,
    tail: Tail,
}

impl WeightSequence {
    pub fn new(prefix: Vec<ExactRational>, tail: Tail) -> Result<Self> {
        if let Tail::Periodic(cycle) = &tail {
            if cycle.is_empty() {
                return Err(Error::InvalidArgument("periodic tail must be nonempty".into()));
            }
        }
        let w = WeightSequence { prefix, tail };
        let len = w.prefix.len() + w.tail.cycle().len();
        if let Some(index) = (0..len).find(|&j| !w.weight_at(j).is_positive()) {
            return Err(Error::NonPositiveWeight { index });
        }
        Ok(w)
    }

    pub fn constant(c: ExactRational) -> Result<Self> {
        Self::new(Vec::new(), Tail::Constant(c))
    }

    /// Prefix followed by a constant tail.
    pub fn with_constant_tail(prefix: Vec<ExactRational>, c: ExactRational) -> Result<Self> {
        Self::new(prefix, Tail::Constant(c))
    }

    pub fn periodic(prefix: Vec<ExactRational>, cycle: Vec<ExactRational>) -> Result<Self> {
        Self::new(prefix, Tail::Periodic(cycle))
    }

    /// Parses comma-separated literals, e.g. `"1/2, 0.75"`.
    pub fn parse_list(text: &str) -> Result<Vec<ExactRational>> {
        if text.trim().is_empty() {
            return Ok(Vec::new());
        }
        text.split(',').map(rational::parse_rational).collect()
    }

    pub fn prefix(&self) -> &[ExactRational] {
        &self.prefix
    }

    pub fn tail(&self) -> &Tail {
        &self.tail
    }

    /// Length of the tail cycle (1 for a constant tail).
    pub fn period(&self) -> usize {
        self.tail.cycle().len()
    }

    pub fn weight_at(&self, j: usize) -> ExactRational {
        if j < self.prefix.len() {
            return self.prefix[j].clone();
        }
        let cycle = self.tail.cycle();
        cycle[(j - self.prefix.len()) % cycle.len()].clone()
    }

    pub fn weight_at_f64(&self, j: usize) -> f64 {
        rational::to_f64(&self.weight_at(j))
    }

    /// Index range beyond which nothing new happens: every statement about
    /// consecutive weights that holds on `[0, horizon)` holds everywhere.
    pub fn horizon(&self) -> usize {
        self.prefix.len() + 2 * self.period()
    }

    /// `alpha_j alpha_{j+1} ... alpha_{j+n-1}`.
    pub fn window_product(&self, j: usize, n: usize) -> ExactRational {
        (j..j + n).fold(ExactRational::one(), |acc, i| acc * self.weight_at(i))
    }

    /// `c * alpha`.
    pub fn scaled(&self, c: &ExactRational) -> Result<Self> {
        let prefix = self.prefix.iter().map(|x| x * c).collect();
        let tail = match &self.tail {
            Tail::Constant(t) => Tail::Constant(t * c),
            Tail::Periodic(cycle) => Tail::Periodic(cycle.iter().map(|x| x * c).collect()),
        };
        Self::new(prefix, tail)
    }

    /// Canonical form: minimal tail period, constant tails as `Constant`, and the
    /// shortest prefix.
    pub fn canonical(&self) -> Self {
        let mut cycle = self.tail.cycle().to_vec();
        let p = cycle.len();
        let minimal = (1..=p)
            .find(|d| p.is_multiple_of(*d) && (0..p).all(|i| cycle[i] == cycle[(i + d) % p]))
            .unwrap_or(p);
        cycle.truncate(minimal);
        let mut prefix = self.prefix.clone();
        while let Some(last) = prefix.last() {
            if *last != cycle[cycle.len() - 1] {
                break;
            }
            prefix.pop();
            cycle.rotate_right(1);
        }
        let tail = if cycle.len() == 1 {
            Tail::Constant(cycle.pop().unwrap_or_else(ExactRational::zero))
        } else {
            Tail::Periodic(cycle)
        };
        WeightSequence { prefix, tail }
    }

    /// True when both sequences define the same weights.
    pub fn same_weights(&self, other: &Self) -> bool {
        self.canonical() == other.canonical()
    }

    /// Moments `gamma_0 = 1`, `gamma_{k+1} = alpha_k^2 gamma_k`, for `k <= k_max`.
    pub fn moments(&self, k_max: usize) -> MomentSequence {
        let mut gammas = Vec::with_capacity(k_max + 1);
        gammas.push(ExactRational::one());
        for k in 0..k_max {
            let a = self.weight_at(k);
            let next = &gammas[k] * &a * &a;
            gammas.push(next);
        }
        MomentSequence { gammas }
    }

    /// Unitary equivalence `W^n = W_(0) + ... + W_(n-1)`; component `j` carries the
    /// window products `alpha_{j+mn} ... alpha_{j+mn+n-1}`, `m >= 0`.
    pub fn decompose_power(&self, n: usize) -> Result<PowerDecomposition> {
        if n == 0 {
            return Err(Error::InvalidArgument("power must be at least 1".into()));
        }
        let len = self.prefix.len();
        let p = self.period();
        let tail_cycle = p / p.gcd(&n);
        let components = (0..n)
            .map(|j| {
                let pre = if len > j { (len - j).div_ceil(n) } else { 0 };
                let prefix = (0..pre).map(|m| self.window_product(j + m * n, n)).collect();
                let start = j + pre * n;
                let cycle = (0..tail_cycle).map(|m| self.window_product(start + m * n, n)).collect();
                WeightSequence {
                    prefix,
                    tail: Tail::Periodic(cycle),
                }
                .canonical()
            })
            .collect();
        Ok(PowerDecomposition { n, components })
    }
}

/// `gamma_k = alpha_0^2 ... alpha_{k-1}^2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentSequence {
    pub gammas: Vec<ExactRational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerDecomposition {
    pub n: usize,
    pub components: Vec<WeightSequence>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightsJson {
    #[serde(default)]
    pub prefix: Vec<RationalLit>,
    pub tail: TailJson,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum TailJson {
    Constant(RationalLit),
    Periodic(Vec<RationalLit>),
}

impl TryFrom<WeightsJson> for WeightSequence {
    type Error = Error;

    fn try_from(json: WeightsJson) -> Result<Self> {
        let prefix = json.prefix.into_iter().map(|x| x.0).collect();
        let tail = match json.tail {
            TailJson::Constant(c) => Tail::Constant(c.0),
            TailJson::Periodic(v) => Tail::Periodic(v.into_iter().map(|x| x.0).collect()),
        };
        WeightSequence::new(prefix, tail)
    }
}

impl From<WeightSequence> for WeightsJson {
    fn from(w: WeightSequence) -> Self {
        WeightsJson {
            prefix: w.prefix.into_iter().map(RationalLit).collect(),
            tail: match w.tail {
                Tail::Constant(c) => TailJson::Constant(RationalLit(c)),
                Tail::Periodic(v) => TailJson::Periodic(v.into_iter().map(RationalLit).collect()),
            },
        }
    }
}

impl std::fmt::Display for WeightSequence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let shown: Vec<String> = (0..self.prefix.len() + 2 * self.period())
            .map(|j| rational::format_rational(&self.weight_at(j)))
            .collect();
        write!(f, "({}, ...)", shown.join(", "))
    }
}
