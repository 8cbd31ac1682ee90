//! Residual records produced by every identity check, serialized as a flat
//! JSON object per record.

use num_complex::Complex64;
use serde::ser::{Serialize, SerializeStruct, Serializer};

#[derive(Debug, Clone)]
pub struct ResidualReport {
    pub identity_id: String,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub abs_residual: f64,
    pub rel_residual: f64,
    pub tol: f64,
    pub pass: bool,
    pub n_evals_total: usize,
}

impl ResidualReport {
    pub fn new(
        identity_id: impl Into<String>,
        lhs: Complex64,
        rhs: Complex64,
        tol: f64,
        n_evals_total: usize,
    ) -> Self {
        let abs_residual = (lhs - rhs).norm();
        let scale = lhs.norm().max(rhs.norm());
        let rel_residual = if scale > 0.0 {
            abs_residual / scale
        } else {
            0.0
        };
        let pass = abs_residual <= tol || rel_residual <= tol;
        Self {
            identity_id: identity_id.into(),
            lhs,
            rhs,
            abs_residual,
            rel_residual,
            tol,
            pass,
            n_evals_total,
        }
    }
}

impl Serialize for ResidualReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ResidualReport", 10)?;
        st.serialize_field("identity_id", &self.identity_id)?;
        st.serialize_field("lhs_re", &self.lhs.re)?;
        st.serialize_field("lhs_im", &self.lhs.im)?;
        st.serialize_field("rhs_re", &self.rhs.re)?;
        st.serialize_field("rhs_im", &self.rhs.im)?;
        st.serialize_field("abs_residual", &self.abs_residual)?;
        st.serialize_field("rel_residual", &self.rel_residual)?;
        st.serialize_field("tol", &self.tol)?;
        st.serialize_field("pass", &self.pass)?;
        st.serialize_field("n_evals_total", &self.n_evals_total)?;
        st.end()
    }
}
