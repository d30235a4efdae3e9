//! JSON wire formats for covariance specs and log-psh product fields.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use gauss_psh_core::{CovarianceSpec, HoloPoly, LogPshProduct};

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ComplexDto {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexDto {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<ComplexDto> for Complex64 {
    fn from(d: ComplexDto) -> Self {
        Complex64::new(d.re, d.im)
    }
}

/// {"rows": [[{"re":..,"im":..}, ...], ...]} — the rows of the map A with
/// X = AG.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CovarianceDto {
    pub rows: Vec<Vec<ComplexDto>>,
}

impl CovarianceDto {
    pub fn from_spec(spec: &CovarianceSpec) -> Self {
        Self {
            rows: spec
                .rows()
                .iter()
                .map(|r| r.iter().map(|&z| z.into()).collect())
                .collect(),
        }
    }

    pub fn to_spec(&self) -> Result<CovarianceSpec, String> {
        CovarianceSpec::new(
            self.rows
                .iter()
                .map(|r| r.iter().map(|&d| d.into()).collect())
                .collect(),
        )
        .map_err(|e| e.to_string())
    }

    pub fn load(path: &Path) -> Result<CovarianceSpec, String> {
        let text = fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        let dto: Self = serde_json::from_str(&text)
            .map_err(|e| format!("bad covariance JSON in {}: {e}", path.display()))?;
        dto.to_spec()
    }
}

/// One monomial of a holomorphic polynomial: coefficient and multi-index.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermDto {
    pub index: Vec<u32>,
    pub re: f64,
    pub im: f64,
}

/// |F|^alpha factor.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FactorDto {
    pub terms: Vec<TermDto>,
    pub alpha: f64,
}

/// {"n":2, "factors":[{"terms":[{"index":[1,0],"re":1,"im":0}], "alpha":2.0}]}
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LogPshDto {
    pub n: usize,
    pub factors: Vec<FactorDto>,
}

impl LogPshDto {
    pub fn from_product(p: &LogPshProduct) -> Self {
        Self {
            n: p.dim(),
            factors: p
                .factors()
                .iter()
                .map(|(poly, alpha)| FactorDto {
                    terms: poly
                        .terms()
                        .iter()
                        .map(|(idx, c)| TermDto { index: idx.clone(), re: c.re, im: c.im })
                        .collect(),
                    alpha: *alpha,
                })
                .collect(),
        }
    }

    pub fn to_product(&self) -> Result<LogPshProduct, String> {
        let factors = self
            .factors
            .iter()
            .map(|f| {
                let terms = f
                    .terms
                    .iter()
                    .map(|t| (t.index.clone(), Complex64::new(t.re, t.im)))
                    .collect();
                HoloPoly::new(self.n, terms).map(|p| (p, f.alpha)).map_err(|e| e.to_string())
            })
            .collect::<Result<Vec<_>, _>>()?;
        LogPshProduct::new(factors).map_err(|e| e.to_string())
    }

    pub fn load(path: &Path) -> Result<LogPshProduct, String> {
        let text = fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        let dto: Self = serde_json::from_str(&text)
            .map_err(|e| format!("bad field JSON in {}: {e}", path.display()))?;
        dto.to_product()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn covariance_roundtrip() {
        let spec = CovarianceSpec::new(vec![
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.5)],
            vec![Complex64::new(-0.25, 0.0), Complex64::new(2.0, 0.0)],
        ])
        .unwrap();
        let json = serde_json::to_string(&CovarianceDto::from_spec(&spec)).unwrap();
        let back: CovarianceDto = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_spec().unwrap(), spec);
    }

    #[test]
    fn product_roundtrip_and_example_schema() {
        let text = r#"{"n":2, "factors":[{"terms":[{"index":[1,0],"re":1,"im":0}], "alpha":2.0}]}"#;
        let dto: LogPshDto = serde_json::from_str(text).unwrap();
        let product = dto.to_product().unwrap();
        assert_eq!(product.dim(), 2);
        let z = gauss_psh_core::ComplexPoint::new(vec![
            Complex64::new(2.0, 0.0),
            Complex64::new(0.0, 0.0),
        ])
        .unwrap();
        assert!((product.eval(&z).unwrap() - 4.0).abs() < 1e-14);
        let back = LogPshDto::from_product(&product).to_product().unwrap();
        assert!((back.eval(&z).unwrap() - 4.0).abs() < 1e-14);
    }
}
