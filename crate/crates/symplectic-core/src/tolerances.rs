/// Numerical tolerances shared by the decomposition routines.
///
/// * `symp` — maximum defect accepted when validating a symplectic identity
///   such as `S Omega S^T = Omega`.
/// * `recon` — maximum reconstruction defect accepted when a decomposition is
///   multiplied back together and compared with its input.
/// * `pair` — relative gap below which nearby eigenvalues are treated as a
///   degenerate cluster when pairing symplectic spectra.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub symp: f64,
    pub recon: f64,
    pub pair: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            symp: 1e-8,
            recon: 1e-7,
            pair: 1e-6,
        }
    }
}

impl Tolerances {
    pub fn with_symp(mut self, symp: f64) -> Self {
        self.symp = symp;
        self
    }

    pub fn with_recon(mut self, recon: f64) -> Self {
        self.recon = recon;
        self
    }

    pub fn with_pair(mut self, pair: f64) -> Self {
        self.pair = pair;
        self
    }
}
