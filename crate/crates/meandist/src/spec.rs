//! JSON descriptions of bodies and profiles.

use meandist_core::bodies::BodyKind;
use meandist_core::extremal::{k_delta, k_prime_delta};
use meandist_core::profiles::Profile;
use meandist_core::ConvexBody;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// A body as written in a spec file, e.g.
/// `{"kind":"ball","center":[0,0],"radius":1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BodySpec {
    Ball { center: Vec<f64>, radius: f64 },
    Ellipsoid { center: Vec<f64>, semi_axes: Vec<f64> },
    Box { lower: Vec<f64>, upper: Vec<f64> },
    Simplex { vertices: Vec<Vec<f64>> },
    Vpolytope { vertices: Vec<Vec<f64>> },
    RegularPolygon { n_sides: usize, circumradius: f64 },
    KDelta { d: usize, delta: f64 },
    KPrimeDelta { d: usize, delta: f64 },
}

impl BodySpec {
    pub fn build(&self) -> Result<ConvexBody, CliError> {
        let body = match self.clone() {
            BodySpec::Ball { center, radius } => ConvexBody::ball(center, radius),
            BodySpec::Ellipsoid { center, semi_axes } => ConvexBody::ellipsoid(center, semi_axes),
            BodySpec::Box { lower, upper } => ConvexBody::cuboid(lower, upper),
            BodySpec::Simplex { vertices } => ConvexBody::simplex(vertices),
            BodySpec::Vpolytope { vertices } => ConvexBody::vpolytope(vertices),
            BodySpec::RegularPolygon { n_sides, circumradius } => ConvexBody::regular_polygon(n_sides, circumradius),
            BodySpec::KDelta { d, delta } => k_delta(d, delta),
            BodySpec::KPrimeDelta { d, delta } => k_prime_delta(d, delta),
        }?;
        Ok(body)
    }

    /// The spec of an existing body. Extremal families come back as the
    /// simplex or box they are.
    pub fn from_body(body: &ConvexBody) -> Self {
        match body.kind().clone() {
            BodyKind::Ball { center, radius } => BodySpec::Ball { center, radius },
            BodyKind::Ellipsoid { center, semi_axes } => BodySpec::Ellipsoid { center, semi_axes },
            BodyKind::Box { lower, upper } => BodySpec::Box { lower, upper },
            BodyKind::Simplex { vertices } => BodySpec::Simplex { vertices },
            BodyKind::VPolytope { vertices } => BodySpec::Vpolytope { vertices },
            BodyKind::RegularPolygon { n_sides, circumradius } => BodySpec::RegularPolygon { n_sides, circumradius },
        }
    }
}

pub fn parse_body_spec(text: &str) -> Result<ConvexBody, CliError> {
    let spec: BodySpec = serde_json::from_str(text).map_err(|e| CliError::Spec(format!("body spec: {e}")))?;
    spec.build()
}

pub fn serialize_body(body: &ConvexBody) -> String {
    serde_json::to_string(&BodySpec::from_body(body)).expect("body specs always serialize")
}

/// `{"d":2,"knots":[...],"f":[...]}`; `f` holds knot values of
/// `h^{1/(d-1)}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileSpec {
    pub d: usize,
    pub knots: Vec<f64>,
    pub f: Vec<f64>,
}

impl ProfileSpec {
    pub fn from_profile(p: &Profile) -> Self {
        Self { d: p.d(), knots: p.knots().to_vec(), f: p.f_values().to_vec() }
    }

    /// Builds the profile and normalizes it.
    pub fn build(&self) -> Result<Profile, CliError> {
        Ok(Profile::new(self.d, self.knots.clone(), self.f.clone())?.normalize()?)
    }
}

pub fn parse_profile_spec(text: &str) -> Result<Profile, CliError> {
    let spec: ProfileSpec = serde_json::from_str(text).map_err(|e| CliError::Spec(format!("profile spec: {e}")))?;
    spec.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_disc_from_json() {
        let b = parse_body_spec(r#"{"kind":"ball","center":[0,0],"radius":1}"#).unwrap();
        assert_eq!(b.dim(), 2);
        assert!((b.volume() - std::f64::consts::PI).abs() < 1e-14);
    }

    #[test]
    fn k_delta_routes_through_the_family_constructor() {
        let b = parse_body_spec(r#"{"kind":"k_delta","d":2,"delta":0.5}"#).unwrap();
        assert_eq!(b.vertices().unwrap(), vec![vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 0.5]]);
        let b = parse_body_spec(r#"{"kind":"k_prime_delta","d":3,"delta":0.5}"#).unwrap();
        assert!((b.volume() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn diagnostics_name_the_problem() {
        let e = parse_body_spec(r#"{"kind":"box","lower":[0,0],"upper":[0,1]}"#).unwrap_err().to_string();
        assert!(e.contains("degenerate box"), "{e}");
        let e = parse_body_spec(r#"{"kind":"torus","r":1}"#).unwrap_err().to_string();
        assert!(e.contains("unknown variant") && e.contains("torus"), "{e}");
        let e = parse_body_spec(r#"{"kind":"ball","center":[0,0],"radius":1,"extra":2}"#).unwrap_err().to_string();
        assert!(e.contains("extra"), "{e}");
        let e = parse_body_spec(r#"{"kind":"simplex","vertices":[[0,0],[1,1],[2,2]]}"#).unwrap_err().to_string();
        assert!(e.contains("simplex") || e.contains("vertices"), "{e}");
    }

    #[test]
    fn profile_round_trip() {
        let p = parse_profile_spec(r#"{"d":2,"knots":[-1,0,1],"f":[0,2,0]}"#).unwrap();
        assert!(p.is_normalized());
        assert!((p.f_at(0.0) - 1.0).abs() < 1e-15);
        let back: ProfileSpec = serde_json::from_str(&serde_json::to_string(&ProfileSpec::from_profile(&p)).unwrap()).unwrap();
        assert_eq!(back.build().unwrap(), p);
    }
}
