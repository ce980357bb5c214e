//! Descriptions of the shapes a configuration can name.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Space {
    Euclidean,
    Spherical,
    Any,
}

impl Space {
    pub fn admits(self, filter: Space) -> bool {
        self == Space::Any || filter == Space::Any || self == filter
    }

    fn delta_rule(self) -> &'static str {
        match self {
            Space::Euclidean => "delta = 0",
            Space::Spherical => "delta > 0",
            Space::Any => "delta >= 0",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Parameter {
    pub name: &'static str,
    #[serde(rename = "type")]
    pub ty: &'static str,
    pub required: bool,
    pub description: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct ShapeEntry {
    pub kind: &'static str,
    pub space: Space,
    pub delta: &'static str,
    pub description: &'static str,
    pub parameters: Vec<Parameter>,
}

const fn param(
    name: &'static str,
    ty: &'static str,
    required: bool,
    description: &'static str,
) -> Parameter {
    Parameter {
        name,
        ty,
        required,
        description,
    }
}

fn entry(
    kind: &'static str,
    space: Space,
    description: &'static str,
    parameters: Vec<Parameter>,
) -> ShapeEntry {
    ShapeEntry {
        kind,
        space,
        delta: space.delta_rule(),
        description,
        parameters,
    }
}

pub fn catalog() -> Vec<ShapeEntry> {
    let center = param(
        "center",
        "float[n+1]",
        false,
        "center; defaults to the origin",
    );
    let pole = param(
        "pole",
        "float[n+2]",
        false,
        "center on the sphere |x|^2 = 1/delta; defaults to the last axis",
    );
    let dim = param(
        "dim",
        "integer",
        false,
        "intrinsic dimension n >= 2 when no center is given; default 2",
    );
    let radius = param(
        "radius",
        "float",
        true,
        "radius (geodesic radius on the sphere)",
    );
    let amplitude = param(
        "amplitude",
        "float",
        true,
        "relative radial perturbation t, |t| < 1, profile (3 w_last^2 - 1)/2",
    );
    vec![
        entry(
            "round_sphere",
            Space::Euclidean,
            "round sphere",
            vec![center.clone(), radius.clone(), dim.clone()],
        ),
        entry(
            "ellipsoid",
            Space::Euclidean,
            "axis-aligned ellipsoid",
            vec![
                center.clone(),
                param("semiaxes", "float[n+1]", true, "positive semi-axes"),
            ],
        ),
        entry(
            "perturbed_sphere",
            Space::Euclidean,
            "radial graph r = radius (1 + t profile) over the unit sphere",
            vec![center, radius.clone(), amplitude.clone(), dim.clone()],
        ),
        entry(
            "geodesic_sphere",
            Space::Spherical,
            "geodesic sphere",
            vec![pole.clone(), radius.clone(), dim.clone()],
        ),
        entry(
            "perturbed_geodesic_sphere",
            Space::Spherical,
            "geodesic radial graph rho = radius (1 + t profile) about the pole",
            vec![pole, radius, amplitude, dim.clone()],
        ),
        entry(
            "point_cloud",
            Space::Any,
            "points read from CSV (one point per row, ambient coordinates); extrinsic radius only",
            vec![param("path", "string", true, "CSV file"), dim],
        ),
    ]
}

pub fn filtered(space: Space) -> Vec<ShapeEntry> {
    catalog()
        .into_iter()
        .filter(|e| e.space.admits(space))
        .collect()
}

pub fn render_text(entries: &[ShapeEntry]) -> String {
    let mut out = String::new();
    for e in entries {
        out.push_str(&format!(
            "{:<27} {:<10} {:<11} {}\n",
            e.kind,
            format!("{:?}", e.space).to_lowercase(),
            e.delta,
            e.description
        ));
        for p in &e.parameters {
            let req = if p.required { "required" } else { "optional" };
            out.push_str(&format!(
                "    {:<10} {:<11} {:<9} {}\n",
                p.name, p.ty, req, p.description
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn listing_sizes() {
        assert!(catalog().len() >= 5);
        let spherical = filtered(Space::Spherical);
        assert!(spherical.iter().all(|e| e.space != Space::Euclidean));
        assert!(spherical.iter().any(|e| e.kind == "geodesic_sphere"));
        assert_eq!(filtered(Space::Any).len(), catalog().len());
    }
}
