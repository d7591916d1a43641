//! JSON file formats for curves, divisors, functions, and Weierstrass data,
//! plus the machine-readable output records of the CLI.

use crate::curve::{FunctionRep, HyperellipticCurve, Place};
use crate::divisor::Divisor;
use crate::error::{Error, Result};
use crate::exactlinalg::Poly;
use crate::torelli::{JClass, Parity, SurfaceInvariants, Verdict, WeierstrassData};
use serde::{Deserialize, Serialize};

/// {"p": 101, "f": [1, 0, 0, 0, 0, 1]} — ascending coefficients, monic.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurveFile {
    pub p: u64,
    pub f: Vec<u64>,
}

impl CurveFile {
    pub fn to_curve(&self) -> Result<HyperellipticCurve> {
        let k = crate::exactlinalg::Fp::new(self.p)?;
        HyperellipticCurve::new(self.p, Poly::from_coeffs(&k, &self.f))
    }

    pub fn from_curve(curve: &HyperellipticCurve) -> Self {
        CurveFile {
            p: curve.field().p(),
            f: curve.f().coeffs().to_vec(),
        }
    }
}

/// "inf" or [x0, y0].
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PlaceRepr {
    Named(String),
    Affine(u64, u64),
}

impl PlaceRepr {
    pub fn to_place(&self) -> Result<Place> {
        match self {
            PlaceRepr::Named(s) if s == "inf" => Ok(Place::Infinity),
            PlaceRepr::Named(s) => Err(Error::MalformedInput(format!(
                "unknown place name {s:?}, expected \"inf\" or [x, y]"
            ))),
            PlaceRepr::Affine(x, y) => Ok(Place::affine(*x, *y)),
        }
    }

    pub fn from_place(place: &Place) -> Self {
        match place {
            Place::Infinity => PlaceRepr::Named("inf".to_string()),
            Place::Affine { x, y } => PlaceRepr::Affine(*x, *y),
        }
    }
}

/// [[place, mult], ...]
pub type DivisorFile = Vec<(PlaceRepr, i64)>;

pub fn divisor_from_file(curve: &HyperellipticCurve, file: &DivisorFile) -> Result<Divisor> {
    let mut pairs = Vec::with_capacity(file.len());
    for (repr, mult) in file {
        pairs.push((repr.to_place()?, *mult));
    }
    Divisor::from_pairs(curve, &pairs)
}

pub fn divisor_to_file(div: &Divisor) -> DivisorFile {
    div.support()
        .map(|(place, mult)| (PlaceRepr::from_place(place), mult))
        .collect()
}

/// {"a": [...], "b": [...], "den": [...]} — (a + b*y)/den, ascending
/// coefficients; an empty den means 1.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FuncFile {
    pub a: Vec<u64>,
    pub b: Vec<u64>,
    pub den: Vec<u64>,
}

impl FuncFile {
    pub fn to_function(&self, curve: &HyperellipticCurve) -> Result<FunctionRep> {
        let k = curve.field();
        let den = if self.den.is_empty() {
            Poly::one()
        } else {
            Poly::from_coeffs(k, &self.den)
        };
        FunctionRep::new(
            k,
            Poly::from_coeffs(k, &self.a),
            Poly::from_coeffs(k, &self.b),
            den,
        )
    }

    pub fn from_function(phi: &FunctionRep) -> Self {
        FuncFile {
            a: phi.a().coeffs().to_vec(),
            b: phi.b().coeffs().to_vec(),
            den: phi.den().coeffs().to_vec(),
        }
    }
}

/// The on-disk form of WeierstrassData.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeierstrassFile {
    pub curve: CurveFile,
    #[serde(rename = "L")]
    pub l: DivisorFile,
    #[serde(rename = "A")]
    pub a: FuncFile,
    #[serde(rename = "B")]
    pub b: FuncFile,
    pub h1_parity: Option<Parity>,
    pub clifford: Option<i64>,
}

impl WeierstrassFile {
    pub fn to_data(&self) -> Result<WeierstrassData> {
        let curve = self.curve.to_curve()?;
        let l_div = divisor_from_file(&curve, &self.l)?;
        let a = self.a.to_function(&curve)?;
        let b = self.b.to_function(&curve)?;
        Ok(WeierstrassData {
            curve,
            l_div,
            a,
            b,
            h1_parity: self.h1_parity,
            clifford: self.clifford,
        })
    }

    pub fn from_data(w: &WeierstrassData) -> Self {
        WeierstrassFile {
            curve: CurveFile::from_curve(&w.curve),
            l: divisor_to_file(&w.l_div),
            a: FuncFile::from_function(&w.a),
            b: FuncFile::from_function(&w.b),
            h1_parity: w.h1_parity,
            clifford: w.clifford,
        }
    }
}

/// Serializable mirror of SurfaceInvariants; `re_verdict` reconstructs the
/// rule-engine input so analyze outputs can be round-tripped.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InvariantsOut {
    pub g: usize,
    pub d: i64,
    pub s: usize,
    pub delta: Option<DivisorFile>,
    pub h0_l: usize,
    pub h0_linv_delta: usize,
    pub h0_l2inv_delta: usize,
    pub j_class: JClass,
    pub l_trivial: bool,
    pub l2_iso_delta: bool,
    pub h1_parity: Option<Parity>,
    pub clifford: Option<i64>,
    pub very_ample: (Option<bool>, Option<bool>),
}

impl InvariantsOut {
    pub fn from_invariants(inv: &SurfaceInvariants) -> Self {
        InvariantsOut {
            g: inv.g,
            d: inv.d,
            s: inv.s,
            delta: inv.delta.as_ref().map(divisor_to_file),
            h0_l: inv.h0_l,
            h0_linv_delta: inv.h0_linv_delta,
            h0_l2inv_delta: inv.h0_l2inv_delta,
            j_class: inv.j_class,
            l_trivial: inv.l_trivial,
            l2_iso_delta: inv.l2_iso_delta,
            h1_parity: inv.h1_parity,
            clifford: inv.clifford,
            very_ample: inv.very_ample,
        }
    }

    pub fn to_invariants(&self) -> SurfaceInvariants {
        SurfaceInvariants {
            g: self.g,
            d: self.d,
            s: self.s,
            delta: None,
            h0_l: self.h0_l,
            h0_linv_delta: self.h0_linv_delta,
            h0_l2inv_delta: self.h0_l2inv_delta,
            j_class: self.j_class,
            l_trivial: self.l_trivial,
            l2_iso_delta: self.l2_iso_delta,
            h1_parity: self.h1_parity,
            clifford: self.clifford,
            very_ample: self.very_ample,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RrOut {
    pub h0: usize,
    pub h1: usize,
    pub basis: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KoszulOut {
    pub dim: usize,
    pub kernel_dim: usize,
    pub incoming_rank: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DualityRow {
    pub p: i64,
    pub q: i64,
    pub defect: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MuOut {
    pub rank: usize,
    pub corank: usize,
    pub surjective: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnalyzeOut {
    pub invariants: InvariantsOut,
    pub verdict: Verdict,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlinalg::Fp;

    #[test]
    fn curve_file_round_trip() {
        let file = CurveFile {
            p: 101,
            f: vec![1, 0, 0, 0, 0, 1],
        };
        let curve = file.to_curve().unwrap();
        assert_eq!(curve.genus(), 2);
        let back = CurveFile::from_curve(&curve);
        assert_eq!(back.p, 101);
        assert_eq!(back.f, file.f);
    }

    #[test]
    fn place_repr_parses_inf_and_pairs() {
        let inf: PlaceRepr = serde_json::from_str("\"inf\"").unwrap();
        assert_eq!(inf.to_place().unwrap(), Place::Infinity);
        let aff: PlaceRepr = serde_json::from_str("[3, 7]").unwrap();
        assert_eq!(aff.to_place().unwrap(), Place::affine(3, 7));
        let bad: PlaceRepr = serde_json::from_str("\"nowhere\"").unwrap();
        assert!(bad.to_place().is_err());
    }

    #[test]
    fn divisor_file_round_trip() {
        let file = CurveFile {
            p: 101,
            f: vec![1, 0, 0, 0, 0, 1],
        };
        let curve = file.to_curve().unwrap();
        let json = "[[\"inf\", 2], [[0, 1], -1]]";
        let parsed: DivisorFile = serde_json::from_str(json).unwrap();
        let div = divisor_from_file(&curve, &parsed).unwrap();
        assert_eq!(div.degree(), 1);
        let back = divisor_to_file(&div);
        let div2 = divisor_from_file(&curve, &back).unwrap();
        assert_eq!(div, div2);
    }

    #[test]
    fn func_file_empty_den_is_one() {
        let k = Fp::new(101).unwrap();
        let curve =
            HyperellipticCurve::new(101, Poly::from_coeffs(&k, &[1, 0, 0, 0, 0, 1])).unwrap();
        let f = FuncFile {
            a: vec![5],
            b: vec![],
            den: vec![],
        };
        let phi = f.to_function(&curve).unwrap();
        assert_eq!(phi, FunctionRep::constant(&k, 5));
    }
}
