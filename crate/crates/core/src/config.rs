//! Experiment configuration: a flat TOML document in which every key is
//! required. `ExperimentConfig::default()` reproduces the reference setup
//! (alpha=1e5, lambda=1, sigma=1, dt=1e-2, n=20, t_k=50, s_max=200*t_k,
//! tau=1e-2, Morse C=30, zeta chosen by the number of objectives).

use std::fmt;
use std::path::{Path, PathBuf};

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::adapt::{default_zeta, AdaptConfig, Dynamics};
use crate::cbo::CboConfig;
use crate::error::{Error, Result};
use crate::potential::Potential;
use crate::problems::{BuiltinProblem, Problem};
use crate::scalarize::{default_ideal, Scalarizer};

/// Environment variable consulted for the default output directory.
pub const OUT_DIR_ENV: &str = "SCALAREP_OUT_DIR";

/// A value that is either derived from the problem (`"auto"`) or given explicitly.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Setting<T> {
    Auto(AutoTag),
    Fixed(T),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AutoTag {
    Auto,
}

impl<T: Copy> Setting<T> {
    pub const AUTO: Setting<T> = Setting::Auto(AutoTag::Auto);

    pub fn resolve(self, auto: impl FnOnce() -> T) -> T {
        match self {
            Setting::Auto(_) => auto(),
            Setting::Fixed(v) => v,
        }
    }
}

/// Scalarization exponent; serialized as a number or the string `"inf"`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Exponent(pub f64);

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Exponent;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number >= 1 or \"inf\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Exponent, E> {
                Ok(Exponent(v))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Exponent, E> {
                Ok(Exponent(v as f64))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Exponent, E> {
                Ok(Exponent(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Exponent, E> {
                match v {
                    "inf" | "infinity" => Ok(Exponent(f64::INFINITY)),
                    other => other
                        .parse()
                        .map(Exponent)
                        .map_err(|_| E::custom(format!("bad exponent `{other}`"))),
                }
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PotentialKind {
    Morse,
    Riesz,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitKind {
    /// Das–Dennis lattice.
    Lattice,
    /// Flat random draws (same count as the lattice).
    Uniform,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub problem: String,
    pub dynamics: Dynamics,
    pub potential: PotentialKind,
    pub potential_param: f64,
    pub p: Exponent,
    pub ideal_offset: f64,
    pub tau: f64,
    pub zeta: Setting<f64>,
    pub init: InitKind,
    pub lattice_h: Setting<usize>,
    pub alpha: f64,
    pub lambda: f64,
    pub sigma: f64,
    pub dt: f64,
    pub agents: usize,
    pub t_k: usize,
    pub s_max: usize,
    pub shared_consensus: bool,
    pub oracle_solver: bool,
    pub seed: u64,
    pub repeats: usize,
    pub reference_seed: u64,
    pub reference_size: Setting<usize>,
    pub metric_morse_c: f64,
    pub threads: usize,
    pub out_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let cbo = CboConfig::default();
        ExperimentConfig {
            problem: "lame2_g0.25".into(),
            dynamics: Dynamics::PairwiseNoise,
            potential: PotentialKind::Morse,
            potential_param: 30.0,
            p: Exponent(f64::INFINITY),
            ideal_offset: 0.0,
            tau: 1e-2,
            zeta: Setting::AUTO,
            init: InitKind::Lattice,
            lattice_h: Setting::AUTO,
            alpha: cbo.alpha,
            lambda: cbo.lambda,
            sigma: cbo.sigma,
            dt: cbo.dt,
            agents: cbo.agents,
            t_k: cbo.t_k,
            s_max: cbo.s_max,
            shared_consensus: cbo.shared_consensus,
            oracle_solver: false,
            seed: 0,
            repeats: 1,
            reference_seed: 0x5eed_f407,
            reference_size: Setting::AUTO,
            metric_morse_c: 30.0,
            threads: 0,
            out_dir: PathBuf::from("results"),
        }
    }
}

const TEMPLATE_HEADER: &str = "\
# scalarep experiment configuration. Every key is required.
#
# problem          lame2_g0.25 | lame3_g0.5 | lame3_g2 | idtlz1_3 (lame<m>_g<gamma>)
# dynamics         fixed | grad-image (m = 2 only) | pairwise | pairwise-noise
# potential        morse | riesz; potential_param is C or s
# p                scalarization exponent, a number >= 1 or \"inf\" (Chebyshev)
# ideal_offset     ideal point = problem lower bounds - ideal_offset
# tau, zeta        step length and noise scale (zeta = \"auto\": 1e-9 for m = 2, 1e-6 otherwise)
# init, lattice_h  lattice | uniform; lattice_h = \"auto\" gives 14 (m = 2) or 10 (m = 3)
# alpha .. s_max   consensus solver parameters; s_max must be a multiple of t_k
# oracle_solver    replace the swarm solver by the exact front oracle
# reference_*      IGD reference set (size \"auto\": 2000 for m = 2, 5000 otherwise)
# threads          worker threads, 0 = all cores
";

impl ExperimentConfig {
    pub fn problem(&self) -> Result<BuiltinProblem> {
        self.problem
            .parse()
            .map_err(|e: Error| Error::config("problem", e.to_string()))
    }

    pub fn zeta_for(&self, m: usize) -> f64 {
        self.zeta.resolve(|| default_zeta(m))
    }

    pub fn lattice_h_for(&self, m: usize) -> usize {
        self.lattice_h.resolve(|| match m {
            2 => 14,
            3 => 10,
            _ => 4,
        })
    }

    pub fn reference_size_for(&self, m: usize) -> usize {
        self.reference_size
            .resolve(|| if m == 2 { 2000 } else { 5000 })
    }

    pub fn potential(&self) -> Result<Potential> {
        let pot = match self.potential {
            PotentialKind::Morse => Potential::Morse {
                c: self.potential_param,
            },
            PotentialKind::Riesz => Potential::Riesz {
                s: self.potential_param,
            },
        };
        pot.validated()
            .map_err(|e| Error::config("potential_param", e.to_string()))
    }

    pub fn metric_potential(&self) -> Result<Potential> {
        Potential::morse(self.metric_morse_c)
            .map_err(|e| Error::config("metric_morse_c", e.to_string()))
    }

    pub fn adapt_config(&self, m: usize) -> Result<AdaptConfig> {
        Ok(AdaptConfig {
            dynamics: self.dynamics,
            tau: self.tau,
            zeta: self.zeta_for(m),
            potential: self.potential()?,
        })
    }

    pub fn cbo_config(&self) -> CboConfig {
        CboConfig {
            alpha: self.alpha,
            lambda: self.lambda,
            sigma: self.sigma,
            dt: self.dt,
            agents: self.agents,
            t_k: self.t_k,
            s_max: self.s_max,
            shared_consensus: self.shared_consensus,
        }
    }

    pub fn scalarizer(&self, problem: &BuiltinProblem) -> Result<Scalarizer> {
        if !(self.ideal_offset.is_finite() && self.ideal_offset >= 0.0) {
            return Err(Error::config("ideal_offset", "must be finite and >= 0"));
        }
        Scalarizer::new(self.p.0, default_ideal(problem, self.ideal_offset))
            .map_err(|e| Error::config("p", e.to_string()))
    }

    /// Checks every field before any computation starts.
    pub fn validate(&self) -> Result<()> {
        let problem = self.problem()?;
        let m = problem.m();
        self.scalarizer(&problem)?;
        self.metric_potential()?;
        self.adapt_config(m)?.validate(m).map_err(|e| {
            let field = match e {
                Error::UnsupportedDimension(_) => "dynamics",
                _ if self.tau.is_nan() || self.tau <= 0.0 => "tau",
                _ => "zeta",
            };
            Error::config(field, e.to_string())
        })?;
        self.cbo_config().validate()?;
        if self.oracle_solver && !self.p.0.is_infinite() {
            return Err(Error::config("p", "the oracle solver needs p = \"inf\""));
        }
        if self.lattice_h_for(m) == 0 {
            return Err(Error::config("lattice_h", "must be >= 1"));
        }
        if self.reference_size_for(m) == 0 {
            return Err(Error::config("reference_size", "must be >= 1"));
        }
        if self.repeats == 0 {
            return Err(Error::config("repeats", "must be >= 1"));
        }
        Ok(())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Commented template with all defaults.
    pub fn template() -> String {
        format!("{TEMPLATE_HEADER}\n{}", Self::default().to_toml())
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse {
            path: PathBuf::from("<config>"),
            message: e.to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        toml::from_str(&text).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_reference_setup() {
        let c = ExperimentConfig::default();
        assert_eq!((c.alpha, c.lambda, c.sigma, c.dt), (1e5, 1.0, 1.0, 1e-2));
        assert_eq!((c.agents, c.t_k, c.s_max), (20, 50, 200 * 50));
        assert_eq!(c.tau, 1e-2);
        assert_eq!(c.potential, PotentialKind::Morse);
        assert_eq!(c.potential_param, 30.0);
        assert!(c.p.0.is_infinite());
        assert_eq!(c.zeta_for(2), 1e-9);
        assert_eq!(c.zeta_for(3), 1e-6);
        assert_eq!(c.lattice_h_for(2), 14);
        assert_eq!(c.lattice_h_for(3), 10);
        assert!(c.validate().is_ok());
    }

    #[test]
    fn template_round_trips() {
        let text = ExperimentConfig::template();
        let parsed = ExperimentConfig::from_toml(&text).unwrap();
        assert_eq!(parsed, ExperimentConfig::default());
        assert_eq!(parsed.to_toml(), ExperimentConfig::default().to_toml());
        assert!(text.contains("p = \"inf\""));
        assert!(text.contains("zeta = \"auto\""));
    }

    #[test]
    fn explicit_values_round_trip() {
        let c = ExperimentConfig {
            p: Exponent(2.0),
            zeta: Setting::Fixed(1e-4),
            lattice_h: Setting::Fixed(6),
            dynamics: Dynamics::GradImage,
            ..ExperimentConfig::default()
        };
        let once = c.to_toml();
        let back = ExperimentConfig::from_toml(&once).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.to_toml(), once);
    }

    #[test]
    fn missing_and_unknown_keys_are_rejected() {
        let text = ExperimentConfig::default().to_toml();
        let without_tau: String = text
            .lines()
            .filter(|l| !l.starts_with("tau"))
            .collect::<Vec<_>>()
            .join("\n");
        assert!(ExperimentConfig::from_toml(&without_tau).is_err());
        let extra = format!("{text}\nbogus = 1\n");
        assert!(ExperimentConfig::from_toml(&extra).is_err());
    }

    #[test]
    fn validation_names_the_field() {
        let field = |c: ExperimentConfig| match c.validate() {
            Err(Error::Config { field, .. }) => field,
            other => panic!("expected config error, got {other:?}"),
        };
        let base = ExperimentConfig::default();
        assert_eq!(
            field(ExperimentConfig {
                problem: "zdt1".into(),
                ..base.clone()
            }),
            "problem"
        );
        assert_eq!(
            field(ExperimentConfig {
                problem: "lame3_g2".into(),
                dynamics: Dynamics::GradImage,
                ..base.clone()
            }),
            "dynamics"
        );
        assert_eq!(
            field(ExperimentConfig {
                tau: 0.0,
                ..base.clone()
            }),
            "tau"
        );
        assert_eq!(
            field(ExperimentConfig {
                zeta: Setting::Fixed(0.0),
                ..base.clone()
            }),
            "zeta"
        );
        assert_eq!(
            field(ExperimentConfig {
                s_max: 75,
                ..base.clone()
            }),
            "s_max"
        );
        assert_eq!(
            field(ExperimentConfig {
                p: Exponent(0.5),
                ..base.clone()
            }),
            "p"
        );
        assert_eq!(
            field(ExperimentConfig {
                oracle_solver: true,
                p: Exponent(1.0),
                ..base.clone()
            }),
            "p"
        );
        assert_eq!(field(ExperimentConfig { repeats: 0, ..base }), "repeats");
    }
}
