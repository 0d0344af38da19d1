//! JSON structure files: a matrix group given by generators and a
//! group-labelled bivector written as a list of terms.

use orbipoisson::catalog::CatalogEntry;
use orbipoisson::group::MatrixGroup;
use orbipoisson::linalg::Matrix;
use orbipoisson::pbw::StructurePair;
use orbipoisson::polyvec::{monomial_string, wedge, PolyVectorField, TermKey};
use orbipoisson::scalars::{parse_cyclotomic, Cyclotomic};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub conductor: u32,
    pub dimension: usize,
    /// Square matrices with entries in the cyclotomic literal syntax.
    pub generators: Vec<Vec<Vec<String>>>,
    /// Powers of h carried by the linear and the constant part.
    pub hbar_weights: [u32; 2],
    /// Coordinate permutation of the real structure, 1-based.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reality_swap: Option<Vec<usize>>,
    pub structure: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    /// Group element as a word in the generators, 1-based; empty for the
    /// identity.
    pub label: Vec<usize>,
    pub poly: String,
    /// 1-based coordinate indices.
    pub wedge: Vec<usize>,
    pub coeff: String,
}

/// A validated structure file.
pub struct Loaded {
    pub group: MatrixGroup,
    pub pair: StructurePair,
    pub swap: Option<Vec<usize>>,
}

pub struct Limits {
    pub max_group_order: usize,
    pub max_conductor: u32,
}

fn input(msg: String) -> CliError {
    CliError::Input(msg)
}

pub fn parse_json(text: &str) -> Result<StructureFile, CliError> {
    serde_json::from_str(text).map_err(|e| {
        input(format!(
            "structure file, line {} column {}: {}",
            e.line(),
            e.column(),
            e
        ))
    })
}

fn literal(s: &str, m: u32, at: &str) -> Result<Cyclotomic, CliError> {
    parse_cyclotomic(s, m).map_err(|e| input(format!("{at}: {e} in {s:?}")))
}

/// Parses `x1^2*x3` (or `1`) into an exponent vector.
pub fn parse_monomial(s: &str, dim: usize, at: &str) -> Result<Vec<u32>, CliError> {
    let mut exps = vec![0u32; dim];
    let s = s.trim();
    if s == "1" {
        return Ok(exps);
    }
    let mut col = 1;
    for part in s.split('*') {
        let bad = || input(format!("{at}: bad monomial factor {:?} at column {col}", part.trim()));
        let p = part.trim();
        let body = p.strip_prefix('x').ok_or_else(bad)?;
        let (var, e) = match body.split_once('^') {
            Some((v, e)) => (v, e.parse::<u32>().map_err(|_| bad())?),
            None => (body, 1),
        };
        let v: usize = var.parse().map_err(|_| bad())?;
        if v == 0 || v > dim {
            return Err(input(format!("{at}: variable x{v} outside 1..{dim}")));
        }
        exps[v - 1] += e;
        col += part.len() + 1;
    }
    Ok(exps)
}

impl StructureFile {
    pub fn load(&self, limits: &Limits) -> Result<Loaded, CliError> {
        let m = self.conductor;
        let n = self.dimension;
        if m == 0 || m > limits.max_conductor {
            return Err(input(format!(
                "conductor {m} outside 1..{} (set ORBIPOISSON_MAX_CONDUCTOR to raise the cap)",
                limits.max_conductor
            )));
        }
        if n == 0 || n > 16 {
            return Err(input(format!("dimension {n} outside 1..16")));
        }
        let mut gens = Vec::new();
        for (t, g) in self.generators.iter().enumerate() {
            if g.len() != n || g.iter().any(|r| r.len() != n) {
                return Err(input(format!("generators[{t}] is not a {n}x{n} matrix")));
            }
            let rows = g
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    r.iter()
                        .enumerate()
                        .map(|(j, s)| literal(s, m, &format!("generators[{t}][{i}][{j}]")))
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
            gens.push(Matrix::from_rows(rows, m));
        }
        let group = MatrixGroup::generate(&gens, n, m, limits.max_group_order)
            .map_err(|e| input(format!("generators: {e}")))?;

        let mut total = PolyVectorField::zero(n, m);
        for (i, t) in self.structure.iter().enumerate() {
            let at = format!("structure[{i}]");
            let word: Vec<usize> = t
                .label
                .iter()
                .map(|&w| {
                    if w == 0 || w > group.n_generators() {
                        Err(input(format!("{at}.label: no generator {w}")))
                    } else {
                        Ok(w - 1)
                    }
                })
                .collect::<Result<_, _>>()?;
            let label = group.from_word(&word).unwrap();
            let exps = parse_monomial(&t.poly, n, &format!("{at}.poly"))?;
            if t.wedge.len() != 2 || t.wedge.iter().any(|&w| w == 0 || w > n) || t.wedge[0] == t.wedge[1] {
                return Err(input(format!("{at}.wedge: expected two distinct indices in 1..{n}")));
            }
            let idx: Vec<usize> = t.wedge.iter().map(|w| w - 1).collect();
            let c = literal(&t.coeff, m, &format!("{at}.coeff"))?;
            total.add_term(label, exps, &idx, &c);
        }
        let pair = StructurePair::from_total(&total, (self.hbar_weights[0], self.hbar_weights[1]))
            .map_err(|e| input(format!("structure: {e}")))?;

        let swap = match &self.reality_swap {
            None => None,
            Some(s) => {
                let mut seen = vec![false; n];
                for &v in s {
                    if v == 0 || v > n || std::mem::replace(&mut seen[v - 1], true) {
                        return Err(input("reality_swap: not a permutation of 1..dimension".into()));
                    }
                }
                if s.len() != n {
                    return Err(input("reality_swap: not a permutation of 1..dimension".into()));
                }
                Some(s.iter().map(|v| v - 1).collect())
            }
        };
        Ok(Loaded { group, pair, swap })
    }

    pub fn emit(
        name: Option<String>,
        group: &MatrixGroup,
        pair: &StructurePair,
        swap: Option<&[usize]>,
    ) -> StructureFile {
        let n = group.dim();
        let generators = (0..group.n_generators())
            .map(|t| {
                let g = group.matrix(group.generator(t));
                (0..n)
                    .map(|i| (0..n).map(|j| g[(i, j)].to_string()).collect())
                    .collect()
            })
            .collect();
        StructureFile {
            name,
            conductor: group.conductor(),
            dimension: n,
            generators,
            hbar_weights: [pair.weights.0, pair.weights.1],
            reality_swap: swap.map(|s| s.iter().map(|v| v + 1).collect()),
            structure: terms(group, &pair.total()),
        }
    }

    pub fn from_entry(e: &CatalogEntry) -> StructureFile {
        StructureFile::emit(Some(e.name.clone()), &e.group, &e.pair, e.swap.as_deref())
    }
}

pub fn term(group: &MatrixGroup, k: &TermKey, c: &Cyclotomic) -> Term {
    Term {
        label: group.word(k.label).iter().map(|t| t + 1).collect(),
        poly: monomial_string(&k.exps),
        wedge: wedge::indices(k.wedge).iter().map(|i| i + 1).collect(),
        coeff: c.to_string(),
    }
}

/// A polyvector in structure-file term syntax, in canonical order.
pub fn terms(group: &MatrixGroup, x: &PolyVectorField) -> Vec<Term> {
    x.terms().map(|(k, c)| term(group, k, c)).collect()
}

pub fn term_line(t: &Term) -> String {
    format!(
        "label={:?} poly={} wedge={:?} coeff={}",
        t.label, t.poly, t.wedge, t.coeff
    )
}
