//! Chain specification and the one-excitation Hamiltonian.
//!
//! In the basis |n⟩ (one flipped spin at site n) the XX Hamiltonian with an
//! external field is the real symmetric tridiagonal matrix with `h` on the
//! diagonal and the bond couplings `J` (or `αJ` on impurity bonds) on the
//! first off-diagonals.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A rescaled exchange bond. Bond `b` couples sites `b` and `b + 1`
/// (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Impurity {
    pub bond: usize,
    pub alpha: f64,
}

/// Physical parameters of an open XX chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainSpec {
    pub n_sites: usize,
    pub exchange_j: f64,
    pub field_h: f64,
    pub impurities: Vec<Impurity>,
}

/// Impurity layouts recognised by the analysis routines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Layout {
    Homogeneous,
    /// One impurity on bond 1.
    Single(f64),
    /// Equal impurities on bonds 1 and N-1.
    Mirror(f64),
    Other,
}

impl ChainSpec {
    /// Uniform chain with J = -1, h = 0.
    pub fn homogeneous(n_sites: usize) -> Self {
        ChainSpec {
            n_sites,
            exchange_j: -1.0,
            field_h: 0.0,
            impurities: Vec::new(),
        }
    }

    /// Impurity of strength `alpha` on the first bond.
    pub fn single_impurity(n_sites: usize, alpha: f64) -> Self {
        ChainSpec {
            impurities: vec![Impurity { bond: 1, alpha }],
            ..Self::homogeneous(n_sites)
        }
    }

    /// Equal impurities on the first and the last bond.
    pub fn mirror_impurities(n_sites: usize, alpha: f64) -> Self {
        let mut impurities = vec![Impurity { bond: 1, alpha }];
        if n_sites > 2 {
            impurities.push(Impurity {
                bond: n_sites - 1,
                alpha,
            });
        }
        ChainSpec {
            impurities,
            ..Self::homogeneous(n_sites)
        }
    }

    pub fn with_coupling(mut self, exchange_j: f64) -> Self {
        self.exchange_j = exchange_j;
        self
    }

    pub fn with_field(mut self, field_h: f64) -> Self {
        self.field_h = field_h;
        self
    }

    /// Checks every invariant and returns the spec unchanged.
    pub fn validate(self) -> Result<Self> {
        if self.n_sites < 2 {
            return Err(Error::InvalidN(self.n_sites));
        }
        if self.exchange_j == 0.0 || !self.exchange_j.is_finite() {
            return Err(Error::ZeroCoupling);
        }
        let max = self.n_sites - 1;
        let mut seen = vec![false; max + 1];
        for imp in &self.impurities {
            if imp.bond == 0 || imp.bond > max || seen[imp.bond] {
                return Err(Error::BadBond {
                    bond: imp.bond,
                    max,
                });
            }
            seen[imp.bond] = true;
            if !(imp.alpha >= 0.0) || !imp.alpha.is_finite() {
                return Err(Error::NegativeAlpha(imp.alpha));
            }
        }
        if !self.field_h.is_finite() {
            return Err(Error::BadConfig("field_h must be finite".into()));
        }
        if self.exchange_j > 0.0 {
            log::warn!(
                "exchange_j = {} > 0; the usual convention is J < 0",
                self.exchange_j
            );
        }
        Ok(self)
    }

    /// Coupling multiplier on bond `b` (1-based).
    pub fn bond_alpha(&self, bond: usize) -> f64 {
        self.impurities
            .iter()
            .find(|imp| imp.bond == bond)
            .map_or(1.0, |imp| imp.alpha)
    }

    pub fn layout(&self) -> Layout {
        let n = self.n_sites;
        match self.impurities.as_slice() {
            [] => Layout::Homogeneous,
            [a] if a.bond == 1 => Layout::Single(a.alpha),
            [a, b]
                if a.alpha == b.alpha && {
                    let mut bonds = [a.bond, b.bond];
                    bonds.sort_unstable();
                    bonds == [1, n - 1]
                } =>
            {
                Layout::Mirror(a.alpha)
            }
            _ => Layout::Other,
        }
    }

    /// Same layout with every impurity strength replaced by `alpha`.
    pub fn with_alpha(&self, alpha: f64) -> Self {
        let mut spec = self.clone();
        for imp in &mut spec.impurities {
            imp.alpha = alpha;
        }
        spec
    }
}

/// Compact storage of the N×N one-excitation matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalHamiltonian {
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
}

impl TridiagonalHamiltonian {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// y = H x
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let mut y: Vec<f64> = self.diag.iter().zip(x).map(|(d, v)| d * v).collect();
        for k in 0..n.saturating_sub(1) {
            y[k] += self.offdiag[k] * x[k + 1];
            y[k + 1] += self.offdiag[k] * x[k];
        }
        y
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        let mut m = vec![vec![0.0; n]; n];
        for i in 0..n {
            m[i][i] = self.diag[i];
        }
        for (k, &e) in self.offdiag.iter().enumerate() {
            m[k][k + 1] = e;
            m[k + 1][k] = e;
        }
        m
    }
}

/// Builds the one-excitation matrix of a validated spec.
pub fn build_hamiltonian(spec: &ChainSpec) -> TridiagonalHamiltonian {
    let n = spec.n_sites;
    let diag = vec![spec.field_h; n];
    let offdiag = (1..n)
        .map(|b| spec.bond_alpha(b) * spec.exchange_j)
        .collect();
    TridiagonalHamiltonian { diag, offdiag }
}

/// Partially specified chain, as read from a `key = value` config file.
///
/// Recognised keys: `n_sites`, `exchange_j`, `field_h`, and `impurities`
/// as comma-separated `bond:alpha` pairs. Blank lines and `#` comments are
/// ignored.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SpecConfig {
    pub n_sites: Option<usize>,
    pub exchange_j: Option<f64>,
    pub field_h: Option<f64>,
    pub impurities: Option<Vec<Impurity>>,
}

impl SpecConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = SpecConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::BadConfig(format!("line {}: expected key = value", lineno + 1))
            })?;
            let (key, value) = (key.trim(), value.trim());
            let bad = |what: &str| Error::BadConfig(format!("line {}: bad {what}", lineno + 1));
            match key {
                "n_sites" => cfg.n_sites = Some(value.parse().map_err(|_| bad("n_sites"))?),
                "exchange_j" => {
                    cfg.exchange_j = Some(value.parse().map_err(|_| bad("exchange_j"))?)
                }
                "field_h" => cfg.field_h = Some(value.parse().map_err(|_| bad("field_h"))?),
                "impurities" => {
                    cfg.impurities = Some(parse_impurities(value).map_err(|_| bad("impurities"))?)
                }
                other => {
                    return Err(Error::BadConfig(format!(
                        "line {}: unknown key `{other}`",
                        lineno + 1
                    )))
                }
            }
        }
        Ok(cfg)
    }

    /// Fills unset fields from `base`.
    pub fn into_spec(self, base: ChainSpec) -> ChainSpec {
        ChainSpec {
            n_sites: self.n_sites.unwrap_or(base.n_sites),
            exchange_j: self.exchange_j.unwrap_or(base.exchange_j),
            field_h: self.field_h.unwrap_or(base.field_h),
            impurities: self.impurities.unwrap_or(base.impurities),
        }
    }
}

/// Parses `1:0.4, 5:0.4` into impurities. An empty string yields none.
pub fn parse_impurities(text: &str) -> std::result::Result<Vec<Impurity>, String> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|pair| {
            let (b, a) = pair
                .split_once(':')
                .ok_or_else(|| format!("`{pair}` is not bond:alpha"))?;
            let bond = b.trim().parse().map_err(|_| format!("bad bond `{b}`"))?;
            let alpha = a.trim().parse().map_err(|_| format!("bad alpha `{a}`"))?;
            Ok(Impurity { bond, alpha })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_accepts_single_impurity() {
        let spec = ChainSpec::single_impurity(4, 0.4);
        assert_eq!(spec.clone().validate().unwrap(), spec);
    }

    #[test]
    fn validate_rejects_bad_input() {
        assert_eq!(
            ChainSpec::homogeneous(1).validate(),
            Err(Error::InvalidN(1))
        );
        let mut spec = ChainSpec::homogeneous(4);
        spec.impurities.push(Impurity {
            bond: 4,
            alpha: 0.4,
        });
        assert!(matches!(
            spec.validate(),
            Err(Error::BadBond { bond: 4, .. })
        ));

        let mut spec = ChainSpec::single_impurity(4, 0.4);
        spec.impurities.push(Impurity {
            bond: 1,
            alpha: 0.2,
        });
        assert!(matches!(
            spec.validate(),
            Err(Error::BadBond { bond: 1, .. })
        ));

        assert_eq!(
            ChainSpec::single_impurity(4, -0.1).validate(),
            Err(Error::NegativeAlpha(-0.1))
        );
        assert_eq!(
            ChainSpec::homogeneous(4).with_coupling(0.0).validate(),
            Err(Error::ZeroCoupling)
        );
    }

    #[test]
    fn hamiltonian_matrices() {
        let h = build_hamiltonian(&ChainSpec::homogeneous(4));
        assert_eq!(h.diag, vec![0.0; 4]);
        assert_eq!(h.offdiag, vec![-1.0; 3]);

        let h = build_hamiltonian(&ChainSpec::single_impurity(4, 0.4).with_field(0.5));
        assert_eq!(h.diag, vec![0.5; 4]);
        assert_eq!(h.offdiag, vec![-0.4, -1.0, -1.0]);

        let h = build_hamiltonian(&ChainSpec::mirror_impurities(6, 0.4));
        assert_eq!(h.offdiag, vec![-0.4, -1.0, -1.0, -1.0, -0.4]);
    }

    #[test]
    fn layouts() {
        assert_eq!(ChainSpec::homogeneous(5).layout(), Layout::Homogeneous);
        assert_eq!(
            ChainSpec::single_impurity(5, 0.3).layout(),
            Layout::Single(0.3)
        );
        assert_eq!(
            ChainSpec::mirror_impurities(5, 0.3).layout(),
            Layout::Mirror(0.3)
        );
        let mut spec = ChainSpec::homogeneous(5);
        spec.impurities.push(Impurity {
            bond: 2,
            alpha: 0.3,
        });
        assert_eq!(spec.layout(), Layout::Other);
    }

    #[test]
    fn config_round_trip() {
        let text =
            "# chain\nn_sites = 6\nexchange_j = -1\nfield_h = 0.25\nimpurities = 1:0.4, 5:0.4\n";
        let spec = SpecConfig::parse(text)
            .unwrap()
            .into_spec(ChainSpec::homogeneous(2));
        assert_eq!(spec, ChainSpec::mirror_impurities(6, 0.4).with_field(0.25));
        assert!(SpecConfig::parse("n_sites = x").is_err());
        assert!(SpecConfig::parse("colour = red").is_err());
    }
}
