//! JSON file formats. Elements are coefficient vectors over `F_p` in the
//! polynomial basis of the field description; polynomials are
//! `{"coeffs": [elem, …]}` in ascending degree; matrices are
//! `{"rows": [[poly, …], …]}`. Every document that holds elements carries its
//! own `"field"`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffield::{FieldCtx, FieldDesc, FieldElem};
use crate::gabidulin::{Decoded, GabCode};
use crate::mglssr::{MgLssrInstance, MgLssrSolution};
use crate::mvinterp::MvInstance;
use crate::skewmat::SkewMatrix;
use crate::skewpoly::SkewPoly;

pub type ElemJson = Vec<u64>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub coeffs: Vec<ElemJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: Vec<Vec<PolyJson>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MgLssrFile {
    pub field: FieldDesc,
    pub s_list: Vec<PolyJson>,
    pub g_list: Vec<PolyJson>,
    pub gammas: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionJson {
    pub lambda: PolyJson,
    pub omegas: Vec<PolyJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MvFile {
    pub field: FieldDesc,
    pub ell: usize,
    pub k: usize,
    pub points: Vec<(ElemJson, Vec<ElemJson>)>,
}

/// Code parameters plus one received word per interleaved component.
/// `messages` and `t` record what the generator used, when known.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GabFile {
    pub field: FieldDesc,
    pub n: usize,
    pub k_list: Vec<usize>,
    pub points: Vec<ElemJson>,
    pub received: Vec<Vec<ElemJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub messages: Option<Vec<PolyJson>>,
}

/// Input to `rowreduce`: a square or rectangular matrix and an optional shift.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub field: FieldDesc,
    pub matrix: MatrixJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecodeReport {
    pub success: bool,
    pub rank_used: Option<usize>,
    pub messages: Vec<PolyJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

pub fn elem_to_json(a: FieldElem, f: &FieldCtx) -> ElemJson {
    f.coeffs(a)
}

pub fn elem_from_json(v: &[u64], f: &FieldCtx) -> Result<FieldElem> {
    f.elem(v)
}

pub fn poly_to_json(p: &SkewPoly, f: &FieldCtx) -> PolyJson {
    PolyJson { coeffs: p.coeffs().iter().map(|&c| elem_to_json(c, f)).collect() }
}

pub fn poly_from_json(p: &PolyJson, f: &FieldCtx) -> Result<SkewPoly> {
    let cs = p.coeffs.iter().map(|c| elem_from_json(c, f)).collect::<Result<Vec<_>>>()?;
    Ok(SkewPoly::from_coeffs(cs))
}

pub fn matrix_to_json(m: &SkewMatrix, f: &FieldCtx) -> MatrixJson {
    MatrixJson {
        rows: m.rows().iter().map(|r| r.entries.iter().map(|p| poly_to_json(p, f)).collect()).collect(),
    }
}

pub fn matrix_from_json(m: &MatrixJson, f: &FieldCtx) -> Result<SkewMatrix> {
    let rows = m
        .rows
        .iter()
        .map(|r| r.iter().map(|p| poly_from_json(p, f)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    SkewMatrix::from_polys(rows)
}

pub fn solution_to_json(sol: &MgLssrSolution, f: &FieldCtx) -> SolutionJson {
    SolutionJson {
        lambda: poly_to_json(&sol.lambda, f),
        omegas: sol.omegas.iter().map(|p| poly_to_json(p, f)).collect(),
    }
}

pub fn solution_from_json(s: &SolutionJson, f: &FieldCtx) -> Result<MgLssrSolution> {
    Ok(MgLssrSolution {
        lambda: poly_from_json(&s.lambda, f)?,
        omegas: s.omegas.iter().map(|p| poly_from_json(p, f)).collect::<Result<_>>()?,
    })
}

impl MgLssrFile {
    pub fn from_instance(inst: &MgLssrInstance, f: &FieldCtx) -> Self {
        MgLssrFile {
            field: f.desc(),
            s_list: inst.s_list().iter().map(|p| poly_to_json(p, f)).collect(),
            g_list: inst.g_list().iter().map(|p| poly_to_json(p, f)).collect(),
            gammas: inst.gammas().to_vec(),
        }
    }

    pub fn load(&self) -> Result<(FieldCtx, MgLssrInstance)> {
        let f = FieldCtx::from_desc(&self.field)?;
        let s = self.s_list.iter().map(|p| poly_from_json(p, &f)).collect::<Result<Vec<_>>>()?;
        let g = self.g_list.iter().map(|p| poly_from_json(p, &f)).collect::<Result<Vec<_>>>()?;
        let inst = MgLssrInstance::new(s, g, self.gammas.clone(), &f)?;
        Ok((f, inst))
    }
}

impl MvFile {
    pub fn from_instance(inst: &MvInstance, f: &FieldCtx) -> Self {
        MvFile {
            field: f.desc(),
            ell: inst.ell(),
            k: inst.k(),
            points: inst
                .points()
                .iter()
                .map(|(x, ys)| (elem_to_json(*x, f), ys.iter().map(|&y| elem_to_json(y, f)).collect()))
                .collect(),
        }
    }

    pub fn load(&self) -> Result<(FieldCtx, MvInstance)> {
        let f = FieldCtx::from_desc(&self.field)?;
        let points = self
            .points
            .iter()
            .map(|(x, ys)| {
                let ys = ys.iter().map(|y| elem_from_json(y, &f)).collect::<Result<Vec<_>>>()?;
                Ok((elem_from_json(x, &f)?, ys))
            })
            .collect::<Result<Vec<_>>>()?;
        let inst = MvInstance::new(self.ell, self.k, points, &f)?;
        Ok((f, inst))
    }
}

impl GabFile {
    pub fn new(code: &GabCode, received: &[Vec<FieldElem>], f: &FieldCtx) -> Self {
        GabFile {
            field: f.desc(),
            n: code.n(),
            k_list: code.k_list().to_vec(),
            points: code.points().iter().map(|&a| elem_to_json(a, f)).collect(),
            received: received.iter().map(|r| r.iter().map(|&a| elem_to_json(a, f)).collect()).collect(),
            t: None,
            messages: None,
        }
    }

    pub fn load(&self) -> Result<(FieldCtx, GabCode, Vec<Vec<FieldElem>>)> {
        let f = FieldCtx::from_desc(&self.field)?;
        let points = self.points.iter().map(|a| elem_from_json(a, &f)).collect::<Result<Vec<_>>>()?;
        let code = GabCode::new(self.n, self.k_list.clone(), points, &f)?;
        let received = self
            .received
            .iter()
            .map(|r| r.iter().map(|a| elem_from_json(a, &f)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok((f, code, received))
    }
}

impl MatrixFile {
    pub fn new(m: &SkewMatrix, shift: Option<Vec<usize>>, f: &FieldCtx) -> Self {
        MatrixFile { field: f.desc(), matrix: matrix_to_json(m, f), shift }
    }

    pub fn load(&self) -> Result<(FieldCtx, SkewMatrix)> {
        let f = FieldCtx::from_desc(&self.field)?;
        let m = matrix_from_json(&self.matrix, &f)?;
        Ok((f, m))
    }
}

impl DecodeReport {
    pub fn from_outcome(out: &std::result::Result<Decoded, crate::gabidulin::DecodingFailure>, f: &FieldCtx) -> Self {
        match out {
            Ok(d) => DecodeReport {
                success: true,
                rank_used: Some(d.rank_used),
                messages: d.messages.iter().map(|p| poly_to_json(p, f)).collect(),
                failure: None,
            },
            Err(e) => DecodeReport { success: false, rank_used: None, messages: Vec::new(), failure: Some(e.to_string()) },
        }
    }
}

/// Pretty JSON text of any serializable document.
pub fn to_string<T: Serialize>(doc: &T) -> String {
    serde_json::to_string_pretty(doc).expect("wire documents always serialize")
}

pub fn from_str<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn field_description_format() {
        let f = FieldCtx::make_field(2, 1, 4, vec![1, 1, 0, 0, 1], 1).unwrap();
        assert_eq!(
            serde_json::to_string(&f.desc()).unwrap(),
            r#"{"p":2,"e":1,"s":4,"modulus":[1,1,0,0,1],"frob_power":1}"#
        );
    }

    #[test]
    fn round_trips() {
        let f = FieldCtx::make_field(2, 1, 4, vec![1, 1, 0, 0, 1], 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        let p = SkewPoly::random(5, &f, &mut rng);
        let txt = to_string(&poly_to_json(&p, &f));
        assert!(txt.contains("\"coeffs\""));
        assert_eq!(poly_from_json(&from_str(&txt).unwrap(), &f).unwrap(), p);

        let g = FieldCtx::with_default_modulus(2, 1, 8, 1).unwrap();
        let inst = MvInstance::random(2, 2, 7, &g, &mut rng).unwrap();
        let doc = MvFile::from_instance(&inst, &g);
        let back: MvFile = from_str(&to_string(&doc)).unwrap();
        assert_eq!(back.load().unwrap().1.points(), inst.points());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(from_str::<PolyJson>("{\"coeffs\": 3"), Err(Error::Format(_))));
        let f = FieldCtx::make_field(2, 1, 4, vec![1, 1, 0, 0, 1], 1).unwrap();
        let bad = PolyJson { coeffs: vec![vec![0, 2]] };
        assert!(matches!(poly_from_json(&bad, &f), Err(Error::Context(_))));
    }
}
