//! Tower and pair descriptions (TOML) with line/column diagnostics.

use std::ops::Range;
use std::sync::Arc;

use perftower::algebra::{EtaleCertificate, IntegralityCertificate};
use perftower::tower::{Tower, ZariskianSemantics};
use perftower::{CoefficientRing, Error as CoreError, PresentedAlgebra, PrincipalPair};
use serde::Deserialize;
use toml::Spanned;

#[derive(Debug, thiserror::Error)]
pub enum DescriptionError {
    #[error("{line}:{column}: {message}")]
    At { line: usize, column: usize, message: String },
    #[error("{0}")]
    Schema(String),
}

impl DescriptionError {
    fn at(src: &str, offset: usize, message: impl Into<String>) -> Self {
        let (line, column) = line_column(src, offset);
        DescriptionError::At { line, column, message: message.into() }
    }
}

/// 1-based line and character column of a byte offset.
pub fn line_column(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

type Text = Spanned<String>;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDescription {
    coefficients: Option<Text>,
    p: Option<Spanned<i64>>,
    f0: Option<Text>,
    f1: Option<Text>,
    semantics: Option<Text>,
    #[serde(default)]
    level: Vec<RawLevel>,
    #[serde(default)]
    transition: Vec<RawTransition>,
    pair: Option<RawPair>,
    #[serde(default)]
    parameters: Parameters,
    certificates: Option<RawCertificates>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLevel {
    coefficients: Option<Text>,
    variables: Vec<Text>,
    #[serde(default)]
    relations: Vec<Text>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTransition {
    images: Vec<Text>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPair {
    coefficients: Text,
    #[serde(default)]
    variables: Vec<Text>,
    #[serde(default)]
    relations: Vec<Text>,
    f: Text,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCertificates {
    etale: Option<RawEtale>,
    integrality: Option<Vec<Vec<Text>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEtale {
    kind: Text,
    g: Option<Text>,
    h: Option<Text>,
}

/// Optional run parameters; command-line flags take precedence.
#[derive(Clone, Debug, Default, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct Parameters {
    pub n_max: Option<u32>,
    pub depth: Option<usize>,
    pub level: Option<usize>,
    pub sample_size: Option<usize>,
    pub seed: Option<u64>,
}

pub struct TowerDescription {
    pub tower: Tower,
    pub etale: Option<EtaleCertificate>,
    pub integrality: Option<Vec<IntegralityCertificate>>,
}

pub enum Body {
    Tower(Box<TowerDescription>),
    Pair(Arc<PrincipalPair>),
}

pub struct Description {
    pub body: Body,
    pub parameters: Parameters,
}

struct Ctx<'a> {
    src: &'a str,
}

impl Ctx<'_> {
    /// Maps a core error raised while reading `text` to the file position.
    fn locate(&self, text: &Text, err: CoreError) -> DescriptionError {
        // The span covers the opening quote.
        let start = text.span().start + 1;
        match err {
            CoreError::Parse { column, message } => {
                let offset = text.get_ref().char_indices().nth(column - 1).map_or(text.get_ref().len(), |(b, _)| b);
                DescriptionError::at(self.src, start + offset, message)
            }
            other => DescriptionError::at(self.src, start, other.to_string()),
        }
    }

    fn span_error(&self, span: Range<usize>, message: impl Into<String>) -> DescriptionError {
        DescriptionError::at(self.src, span.start, message)
    }

    fn coeffs(&self, text: &Text) -> Result<CoefficientRing, DescriptionError> {
        CoefficientRing::parse(text.get_ref()).map_err(|e| self.locate(text, e))
    }

    fn algebra(&self, coeffs: &Text, vars: &[Text], rels: &[Text]) -> Result<Arc<PresentedAlgebra>, DescriptionError> {
        let c = self.coeffs(coeffs)?;
        let names: Vec<&str> = vars.iter().map(|v| v.get_ref().as_str()).collect();
        let empty = PresentedAlgebra::present(c.clone(), &names, &[]).map_err(|e| match vars.first() {
            Some(v) => self.locate(v, e),
            None => self.locate(coeffs, e),
        })?;
        let mut polys = Vec::with_capacity(rels.len());
        for r in rels {
            polys.push(empty.ring().parse(r.get_ref()).map_err(|e| self.locate(r, e))?);
        }
        PresentedAlgebra::new(empty.ring().clone(), polys).map_err(|e| self.locate(coeffs, e))
    }
}

pub fn parse_description(src: &str) -> Result<Description, DescriptionError> {
    let raw: RawDescription = toml::from_str(src).map_err(|e| match e.span() {
        Some(span) => DescriptionError::at(src, span.start, e.message().to_string()),
        None => DescriptionError::Schema(e.message().to_string()),
    })?;
    let ctx = Ctx { src };
    if let Some(pair) = raw.pair {
        if !raw.level.is_empty() {
            return Err(DescriptionError::Schema("a description has either levels or a pair, not both".into()));
        }
        let a = ctx.algebra(&pair.coefficients, &pair.variables, &pair.relations)?;
        let f = a.ring().parse(pair.f.get_ref()).map_err(|e| ctx.locate(&pair.f, e))?;
        let pair = PrincipalPair::new(a, f).map_err(|e| ctx.locate(&pair.f, e))?;
        return Ok(Description { body: Body::Pair(pair), parameters: raw.parameters });
    }
    if raw.level.is_empty() {
        return Err(DescriptionError::Schema("missing levels".into()));
    }
    let p = raw.p.ok_or_else(|| DescriptionError::Schema("missing prime `p`".into()))?;
    let prime = u64::try_from(*p.get_ref()).ok().filter(|&q| perftower::coeff::is_prime(q));
    let prime = prime.ok_or_else(|| ctx.span_error(p.span(), format!("p = {} is not prime", p.get_ref())))?;
    let f0_text = raw.f0.ok_or_else(|| DescriptionError::Schema("missing `f0`".into()))?;
    let mut levels = Vec::with_capacity(raw.level.len());
    for (i, l) in raw.level.iter().enumerate() {
        let coeffs = l
            .coefficients
            .as_ref()
            .or(raw.coefficients.as_ref())
            .ok_or_else(|| DescriptionError::Schema(format!("level {i}: missing `coefficients`")))?;
        levels.push(ctx.algebra(coeffs, &l.variables, &l.relations)?);
    }
    if raw.transition.len() + 1 != levels.len() {
        return Err(DescriptionError::Schema(format!(
            "{} levels need {} transitions, found {}",
            levels.len(),
            levels.len() - 1,
            raw.transition.len()
        )));
    }
    let mut maps = Vec::with_capacity(raw.transition.len());
    for (i, t) in raw.transition.iter().enumerate() {
        if t.images.len() != levels[i].nvars() {
            return Err(DescriptionError::Schema(format!(
                "transition {i}: {} images for {} variables",
                t.images.len(),
                levels[i].nvars()
            )));
        }
        let mut images = Vec::with_capacity(t.images.len());
        for im in &t.images {
            images.push(levels[i + 1].ring().parse(im.get_ref()).map_err(|e| ctx.locate(im, e))?);
        }
        let anchor = t.images.first().expect("nonempty when level i has variables");
        let map = perftower::AlgebraMap::new(levels[i].clone(), levels[i + 1].clone(), images)
            .map_err(|e| ctx.locate(anchor, e))?;
        maps.push(map);
    }
    let f0 = levels[0].ring().parse(f0_text.get_ref()).map_err(|e| ctx.locate(&f0_text, e))?;
    let f1 = match &raw.f1 {
        Some(t) => {
            let r1 = levels.get(1).ok_or_else(|| ctx.span_error(t.span(), "f1 needs a level 1"))?;
            Some(r1.ring().parse(t.get_ref()).map_err(|e| ctx.locate(t, e))?)
        }
        None => None,
    };
    let semantics = match &raw.semantics {
        None => ZariskianSemantics::Computed,
        Some(s) => ZariskianSemantics::parse(s.get_ref()).ok_or_else(|| {
            ctx.span_error(s.span(), format!("unknown semantics `{}` (computed, declared, after_zariskization)", s.get_ref()))
        })?,
    };
    let level0 = levels[0].clone();
    let transitions_src: Vec<_> = maps.iter().map(|m| m.source().clone()).collect();
    let tower = Tower::new(levels, maps, f0, f1, semantics, prime).map_err(|e| DescriptionError::Schema(e.to_string()))?;
    let (etale, integrality) = match &raw.certificates {
        None => (None, None),
        Some(c) => {
            let etale = c.etale.as_ref().map(|e| ctx.etale(e, &level0)).transpose()?;
            let integrality = match &c.integrality {
                None => None,
                Some(list) => {
                    if list.len() != transitions_src.len() {
                        return Err(DescriptionError::Schema(format!(
                            "{} integrality certificates for {} transitions",
                            list.len(),
                            transitions_src.len()
                        )));
                    }
                    let mut certs = Vec::with_capacity(list.len());
                    for (src_alg, eqs) in transitions_src.iter().zip(list) {
                        let ring = src_alg.ring().prepend(&[src_alg.ring().fresh_name("T")]);
                        let mut equations = Vec::with_capacity(eqs.len());
                        for e in eqs {
                            equations.push(ring.parse(e.get_ref()).map_err(|err| ctx.locate(e, err))?);
                        }
                        certs.push(IntegralityCertificate { equations });
                    }
                    Some(certs)
                }
            };
            (etale, integrality)
        }
    };
    Ok(Description {
        body: Body::Tower(Box::new(TowerDescription { tower, etale, integrality })),
        parameters: raw.parameters,
    })
}

impl Ctx<'_> {
    fn etale(&self, raw: &RawEtale, r0: &Arc<PresentedAlgebra>) -> Result<EtaleCertificate, DescriptionError> {
        let need = |field: &Option<Text>, name: &str| {
            field.clone().ok_or_else(|| self.span_error(raw.kind.span(), format!("`{}` needs `{name}`", raw.kind.get_ref())))
        };
        match raw.kind.get_ref().as_str() {
            "localization" => {
                let g = need(&raw.g, "g")?;
                Ok(EtaleCertificate::Localization(r0.ring().parse(g.get_ref()).map_err(|e| self.locate(&g, e))?))
            }
            "zariskization" => Ok(EtaleCertificate::Zariskization),
            "standard_etale" => {
                let h = need(&raw.h, "h")?;
                let ring = r0.ring().append(&["z".to_string()]);
                let hp = ring.parse(h.get_ref()).map_err(|e| self.locate(&h, e))?;
                let g = match &raw.g {
                    Some(g) => Some(ring.parse(g.get_ref()).map_err(|e| self.locate(g, e))?),
                    None => None,
                };
                Ok(EtaleCertificate::StandardEtale { h: hp, g })
            }
            other => Err(self.span_error(
                raw.kind.span(),
                format!("unknown certificate kind `{other}` (localization, standard_etale, zariskization)"),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MIXED: &str = include_str!("../examples/mixed_p2.tower");

    fn err(src: &str) -> DescriptionError {
        match parse_description(src) {
            Err(e) => e,
            Ok(_) => panic!("expected an error for {src:?}"),
        }
    }

    fn ok(src: &str) -> Description {
        parse_description(src).unwrap_or_else(|e| panic!("{e}"))
    }

    #[test]
    fn shipped_mixed_tower_parses() {
        let d = ok(MIXED);
        let Body::Tower(t) = d.body else { panic!("tower expected") };
        assert_eq!(t.tower.levels().len(), 4);
        assert_eq!(t.tower.semantics(), ZariskianSemantics::AfterZariskization);
    }

    #[test]
    fn empty_input_is_missing_levels() {
        let err = err("");
        assert_eq!(err.to_string(), "missing levels");
    }

    #[test]
    fn doubled_caret_points_at_the_second_caret() {
        let src = "coefficients = \"Z\"\np = 2\nf0 = \"2\"\n\n[[level]]\nvariables = [\"x\"]\nrelations = [\"x^^2\"]\n";
        let err = err(src);
        let DescriptionError::At { line, column, .. } = err else { panic!("{err}") };
        assert_eq!((line, column), (7, 17));
        assert_eq!(&src.lines().nth(6).unwrap()[16..17], "^");
    }

    #[test]
    fn schema_errors() {
        let non_prime = "coefficients = \"Z\"\np = 4\nf0 = \"2\"\n[[level]]\nvariables = []\n";
        assert!(err(non_prime).to_string().contains("not prime"));
        let ring = "coefficients = \"Q\"\np = 2\nf0 = \"2\"\n[[level]]\nvariables = []\n";
        assert!(err(ring).to_string().contains("unknown coefficient ring"));
        let unknown = "colour = 1\n[[level]]\nvariables = []\n";
        assert!(matches!(err(unknown), DescriptionError::At { line: 1, .. }));
    }

    #[test]
    fn pairs_parse() {
        let src = "[pair]\ncoefficients = \"Z\"\nvariables = [\"y\"]\nrelations = [\"3y\", \"y^2\"]\nf = \"3\"\n";
        let Body::Pair(p) = ok(src).body else { panic!("pair expected") };
        assert!(p.small_torsion());
    }
}
