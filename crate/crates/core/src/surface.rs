//! Rough-surface profiles `x2 = f(x1)` given as short trigonometric sums.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// One additive term of a profile.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Term {
    Const {
        c: f64,
    },
    Sin {
        c: f64,
        freq: f64,
        #[serde(default)]
        phase: f64,
    },
    Cos {
        c: f64,
        freq: f64,
        #[serde(default)]
        phase: f64,
    },
}

impl Term {
    fn eval(&self, x: f64) -> f64 {
        match *self {
            Term::Const { c } => c,
            Term::Sin { c, freq, phase } => c * (freq * x + phase).sin(),
            Term::Cos { c, freq, phase } => c * (freq * x + phase).cos(),
        }
    }

    fn deriv(&self, x: f64) -> f64 {
        match *self {
            Term::Const { .. } => 0.0,
            Term::Sin { c, freq, phase } => c * freq * (freq * x + phase).cos(),
            Term::Cos { c, freq, phase } => -c * freq * (freq * x + phase).sin(),
        }
    }

    fn second_deriv(&self, x: f64) -> f64 {
        match *self {
            Term::Const { .. } => 0.0,
            Term::Sin { c, freq, phase } => -c * freq * freq * (freq * x + phase).sin(),
            Term::Cos { c, freq, phase } => -c * freq * freq * (freq * x + phase).cos(),
        }
    }

    fn upper_bound(&self) -> f64 {
        match *self {
            Term::Const { c } => c,
            Term::Sin { c, .. } | Term::Cos { c, .. } => c.abs(),
        }
    }
}

/// Right-hand piece of a piecewise profile, active for `x1 >= at`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Split {
    pub at: f64,
    pub right: Vec<Term>,
}

/// Closed-form profile description, also the config-file representation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfaceSpec {
    pub terms: Vec<Term>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split: Option<Split>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceProfile {
    id: String,
    spec: SurfaceSpec,
    f_sup: f64,
}

fn sum(terms: &[Term], f: impl Fn(&Term) -> f64) -> f64 {
    terms.iter().map(f).sum()
}

impl SurfaceProfile {
    pub fn custom(id: impl Into<String>, spec: SurfaceSpec) -> Result<Self> {
        let id = id.into();
        let all = spec.terms.iter().chain(spec.split.iter().flat_map(|s| s.right.iter()));
        for t in all {
            let ok = match *t {
                Term::Const { c } => c.is_finite(),
                Term::Sin { c, freq, phase } | Term::Cos { c, freq, phase } => {
                    c.is_finite() && freq.is_finite() && phase.is_finite()
                }
            };
            if !ok {
                return Err(Error::InvalidParameter(format!("non-finite term in surface `{id}`")));
            }
        }
        if spec.terms.is_empty() {
            return Err(Error::InvalidParameter(format!("surface `{id}` has no terms")));
        }
        let mut f_sup = sum(&spec.terms, Term::upper_bound);
        if let Some(s) = &spec.split {
            f_sup = f_sup.max(sum(&s.right, Term::upper_bound));
        }
        Ok(SurfaceProfile { id, spec, f_sup })
    }

    pub fn flat(height: f64) -> Self {
        SurfaceProfile {
            id: "flat".into(),
            spec: SurfaceSpec {
                terms: vec![Term::Const { c: height }],
                split: None,
            },
            f_sup: height,
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn spec(&self) -> &SurfaceSpec {
        &self.spec
    }

    /// Upper bound of `f` over the whole real line.
    pub fn f_sup(&self) -> f64 {
        self.f_sup
    }

    #[inline]
    fn piece(&self, x: f64) -> &[Term] {
        match &self.spec.split {
            Some(s) if x >= s.at => &s.right,
            _ => &self.spec.terms,
        }
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        sum(self.piece(x), |t| t.eval(x))
    }

    /// `f'(x)`; one-sided (right) at a split point.
    #[inline]
    pub fn deriv(&self, x: f64) -> f64 {
        sum(self.piece(x), |t| t.deriv(x))
    }

    #[inline]
    pub fn second_deriv(&self, x: f64) -> f64 {
        sum(self.piece(x), |t| t.second_deriv(x))
    }

    /// Flat profile height, if the profile is a single constant.
    pub fn flat_height(&self) -> Option<f64> {
        match (&self.spec.terms[..], &self.spec.split) {
            ([Term::Const { c }], None) => Some(*c),
            _ => None,
        }
    }
}

/// Profiles used in the numerical studies.
pub fn surface_registry(id: &str) -> Result<SurfaceProfile> {
    let sin = |c: f64, freq: f64, phase: f64| Term::Sin { c, freq, phase };
    let cos = |c: f64, freq: f64| Term::Cos { c, freq, phase: 0.0 };
    let konst = |c: f64| Term::Const { c };
    let spec = match id {
        "f1" => SurfaceSpec {
            terms: vec![konst(0.42), cos(-0.1, 0.75), cos(-0.05, 7.0)],
            split: Some(Split {
                at: 4.0,
                right: vec![konst(0.55)],
            }),
        },
        "f2" => SurfaceSpec {
            terms: vec![konst(0.5), sin(0.14, 0.7 * PI, 0.7 * PI * 0.6)],
            split: None,
        },
        "f3" => SurfaceSpec {
            terms: vec![konst(0.5), sin(0.16, PI, 0.0), sin(0.1, 0.5 * PI, 0.0)],
            split: None,
        },
        "f4" => SurfaceSpec {
            terms: vec![
                konst(0.5),
                sin(0.084, 0.6 * PI, 0.0),
                sin(0.084, 0.48 * PI, 0.0),
                sin(0.03, 1.5 * PI, -1.5 * PI),
            ],
            split: None,
        },
        other => return Err(Error::UnknownSurface(other.to_string())),
    };
    SurfaceProfile::custom(id, spec)
}
