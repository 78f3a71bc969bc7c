//! Groups, weights, points and directions given on the command line.

use cartan_git::cartan::CartanBundle;
use cartan_git::hamiltonian::{LinearAction, ProjectivePoint, WeightMatrix};
use cartan_git::lie::{AlgebraElement, KleinPair};
use cartan_git::linalg::{c, CMat};
use clap::Args;
use serde::Serialize;

use crate::Failure;

/// `--group`, `--weights`, `--vector`; unset fields fall back to per-scenario defaults.
#[derive(Args, Debug, Clone, Default, Serialize)]
pub struct TargetArgs {
    /// sl2, sl3, ... (defining action on projective space) or torus
    #[arg(long)]
    pub group: Option<String>,
    /// Torus weights: comma-separated integers, rows separated by ';' for rank > 1
    #[arg(long, allow_hyphen_values = true)]
    pub weights: Option<String>,
    /// Base point as comma-separated real coordinates
    #[arg(long, allow_hyphen_values = true)]
    pub vector: Option<String>,
}

pub enum Group {
    SpecialLinear(usize),
    Torus(WeightMatrix),
}

pub struct Target {
    pub group: Group,
    pub vector: Vec<f64>,
}

pub fn parse_reals(s: &str) -> Result<Vec<f64>, Failure> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Failure::Usage(format!("'{}' is not a finite number", t)))
        })
        .collect()
}

pub fn parse_weights(s: &str) -> Result<WeightMatrix, Failure> {
    let rows = s
        .split(';')
        .map(|row| {
            row.split(',')
                .map(|t| t.trim().parse::<i32>().map_err(|_| Failure::Usage(format!("'{}' is not an integer weight", t))))
                .collect::<Result<Vec<i32>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let w = if rows.len() == 1 {
        WeightMatrix::scalar(&rows[0])
    } else {
        WeightMatrix::new(rows)
    };
    w.map_err(Failure::usage)
}

impl TargetArgs {
    pub fn resolve(&self, group: &str, weights: &str, vector: &str) -> Result<Target, Failure> {
        let name = match (&self.group, &self.weights) {
            (Some(g), _) => g.clone(),
            (None, Some(_)) => "torus".to_string(),
            (None, None) => group.to_string(),
        };
        let group = if name == "torus" {
            Group::Torus(parse_weights(self.weights.as_deref().unwrap_or(weights))?)
        } else if let Some(n) = name.strip_prefix("sl").and_then(|n| n.parse::<usize>().ok()) {
            if self.weights.is_some() {
                return Err(Failure::Usage("--weights only applies to --group torus".into()));
            }
            if !(2..=6).contains(&n) {
                return Err(Failure::Usage(format!("sl{} is outside the supported sizes 2..=6", n)));
            }
            Group::SpecialLinear(n)
        } else {
            return Err(Failure::Usage(format!("unknown group '{}'", name)));
        };
        let default_vector = match &group {
            Group::Torus(w) if self.vector.is_none() && w.rows() != vector.split(',').count() => {
                vec![1.0; w.rows()]
            }
            _ => parse_reals(vector)?,
        };
        let vector = match &self.vector {
            Some(v) => parse_reals(v)?,
            None => default_vector,
        };
        Ok(Target { group, vector })
    }
}

impl Target {
    pub fn action(&self) -> Result<LinearAction, Failure> {
        match &self.group {
            Group::SpecialLinear(n) => {
                LinearAction::defining(KleinPair::sl_su(*n).map_err(Failure::usage)?).map_err(Failure::usage)
            }
            Group::Torus(w) => LinearAction::torus(w.clone()).map_err(Failure::usage),
        }
    }

    pub fn point(&self) -> Result<ProjectivePoint, Failure> {
        ProjectivePoint::from_real(&self.vector).map_err(Failure::usage)
    }

    /// Bundle over the base point, not yet certified.
    pub fn bundle(&self) -> Result<CartanBundle, Failure> {
        let act = self.action()?;
        if act.dim() != self.vector.len() {
            return Err(Failure::Usage(format!(
                "vector has {} coordinates, the action needs {}",
                self.vector.len(),
                act.dim()
            )));
        }
        CartanBundle::new(act, self.point()?).map_err(Failure::usage)
    }

    pub fn size(&self) -> usize {
        match &self.group {
            Group::SpecialLinear(n) => *n,
            Group::Torus(w) => w.rank(),
        }
    }

    pub fn weights(&self) -> Option<&WeightMatrix> {
        match &self.group {
            Group::Torus(w) => Some(w),
            Group::SpecialLinear(_) => None,
        }
    }

    /// A direction in 𝔞: the real diagonal for a torus, otherwise a real
    /// row-major `n × n` matrix (symmetric and traceless lies in `i𝔪`).
    pub fn direction(&self, s: &str, pair: &KleinPair) -> Result<AlgebraElement, Failure> {
        let xs = parse_reals(s)?;
        let n = self.size();
        let m = match &self.group {
            Group::Torus(_) => {
                if xs.len() != n {
                    return Err(Failure::Usage(format!("torus direction needs {} entries", n)));
                }
                CMat::from_diagonal(&cartan_git::linalg::CVec::from_iterator(n, xs.iter().map(|&x| c(x, 0.0))))
            }
            Group::SpecialLinear(_) => {
                if xs.len() != n * n {
                    return Err(Failure::Usage(format!("direction needs {} matrix entries", n * n)));
                }
                CMat::from_iterator(n, n, xs.iter().map(|&x| c(x, 0.0))).transpose()
            }
        };
        let x = AlgebraElement::new(m, pair.ambient_tag()).map_err(Failure::usage)?;
        if !pair.contains_a(&x) {
            return Err(Failure::Usage("direction is not in the complexified algebra".into()));
        }
        Ok(x)
    }

    pub fn label(&self) -> String {
        match &self.group {
            Group::SpecialLinear(n) => format!("sl{}", n),
            Group::Torus(_) => "torus".into(),
        }
    }
}

/// Whether `x ∈ 𝔞` has no component in the compact algebra, i.e. lies in `i𝔪`.
pub fn in_im(pair: &KleinPair, x: &AlgebraElement) -> bool {
    match pair.a_coords(x.matrix()) {
        Ok(v) => v[..pair.dim_g()].iter().all(|g| g.abs() < 1e-12),
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_parse_by_rows() {
        let w = parse_weights("1,1;-1,-1").ok().unwrap();
        assert_eq!((w.rows(), w.rank()), (2, 2));
        assert_eq!(parse_weights("1,-1").ok().unwrap().rows(), 2);
        assert!(parse_weights("1,x").is_err());
    }

    #[test]
    fn reals_reject_garbage() {
        assert!(parse_reals("1,nan").is_err());
        assert_eq!(parse_reals("0.5, -2").ok().unwrap(), vec![0.5, -2.0]);
    }

    #[test]
    fn weights_imply_torus() {
        let t = TargetArgs { weights: Some("2,0,-2".into()), ..Default::default() }
            .resolve("sl2", "", "1,0")
            .ok()
            .unwrap();
        assert!(matches!(t.group, Group::Torus(_)));
        assert_eq!(t.vector, vec![1.0; 3]);
    }
}
