//! Line-oriented text formats for circuits, tensors and certificates.
//!
//! Tokens are whitespace separated and `#` starts a comment. Elements use
//! the field's text encoding; vectors and matrices are row-major.
//!
//! ```text
//! MPDECOMP v1              MPQUAD v1             TENSOR v1
//! field 2 1                field 2 1             field 2 1
//! dims 2 2 2               n 2                   dims 2 2 3
//! rank 8                   rank 8                entries 1 0 0 ...
//! triple                   triple
//! u 1 0 0 0                a <2n^2 elems>
//! v 1 0 0 0                b <2n^2 elems>
//! w 1 0 0 0                alpha <n^2 elems>
//! ```

use crate::circuits::{BilinearDecomp, BilinearTriple, QuadCircuit, QuadTriple};
use crate::error::{Error, Result};
use crate::field::{make_context, FieldCtx, FieldElem};
use crate::lowerbound::{BoundCertificate, CertKind, CertSource, CertStep};
use crate::matcodes::MatrixCode;
use crate::matspace::{LinForm, Mat};
use crate::rank_oracle::Tensor3;

pub const DECOMP_HEADER: &str = "MPDECOMP v1";
pub const QUAD_HEADER: &str = "MPQUAD v1";
pub const TENSOR_HEADER: &str = "TENSOR v1";
pub const CERT_HEADER: &str = "BOUNDCERT v1";

/// Any parsed artifact, dispatched on the header line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Artifact {
    Decomp(BilinearDecomp),
    Quad(QuadCircuit),
    Tensor(Tensor3),
    Certificate(BoundCertificate),
}

struct Line<'a> {
    no: usize,
    toks: Vec<&'a str>,
}

impl Line<'_> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.no, msg)
    }

    fn keyword(&self) -> &str {
        self.toks[0]
    }

    fn expect_key(&self, key: &str) -> Result<&[&str]> {
        if self.keyword() == key {
            Ok(&self.toks[1..])
        } else {
            Err(self.err(format!("expected `{key}`, found `{}`", self.keyword())))
        }
    }

    fn usize_at(&self, i: usize) -> Result<usize> {
        self.toks
            .get(i)
            .ok_or_else(|| self.err("missing integer"))?
            .parse()
            .map_err(|_| self.err(format!("`{}` is not a nonnegative integer", self.toks[i])))
    }

    fn u64_at(&self, i: usize) -> Result<u64> {
        self.toks
            .get(i)
            .ok_or_else(|| self.err("missing integer"))?
            .parse()
            .map_err(|_| self.err(format!("`{}` is not a nonnegative integer", self.toks[i])))
    }
}

struct Lines<'a> {
    lines: Vec<Line<'a>>,
    pos: usize,
    last_no: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let lines: Vec<Line> = text
            .lines()
            .enumerate()
            .filter_map(|(i, raw)| {
                let body = raw.split('#').next().unwrap_or("");
                let toks: Vec<&str> = body.split_whitespace().collect();
                (!toks.is_empty()).then_some(Line { no: i + 1, toks })
            })
            .collect();
        let last_no = text.lines().count().max(1);
        Lines { lines, pos: 0, last_no }
    }

    fn next(&mut self) -> Result<&Line<'a>> {
        let no = self.last_no;
        let line = self.lines.get(self.pos).ok_or_else(|| Error::parse(no, "unexpected end of input"))?;
        self.pos += 1;
        Ok(line)
    }

    fn peek(&self) -> Option<&Line<'a>> {
        self.lines.get(self.pos)
    }

    fn header(&mut self, expected: &str) -> Result<()> {
        let line = self.next()?;
        if line.toks.join(" ") != expected {
            return Err(line.err(format!("expected header `{expected}`")));
        }
        Ok(())
    }

    fn finish(&self) -> Result<()> {
        match self.peek() {
            Some(l) => Err(l.err(format!("unexpected `{}` after end of data", l.keyword()))),
            None => Ok(()),
        }
    }
}

fn elems(line: &Line, ctx: &FieldCtx, toks: &[&str], expected: usize) -> Result<Vec<FieldElem>> {
    if toks.len() != expected {
        return Err(line.err(format!("expected {expected} elements, found {}", toks.len())));
    }
    toks.iter()
        .map(|t| ctx.parse_elem(t).ok_or_else(|| line.err(format!("`{t}` is not an element of {}", ctx.name()))))
        .collect()
}

fn join(ctx: &FieldCtx, v: &[FieldElem]) -> String {
    v.iter().map(|&e| ctx.format_elem(e)).collect::<Vec<_>>().join(" ")
}

fn keyed(key: &str, ctx: &FieldCtx, v: &[FieldElem]) -> String {
    if v.is_empty() {
        key.to_string()
    } else {
        format!("{key} {}", join(ctx, v))
    }
}

pub fn field_line(ctx: &FieldCtx) -> String {
    if ctx.degree() == 1 {
        format!("field {} 1", ctx.p())
    } else {
        let m: Vec<String> = ctx.modulus().iter().map(u64::to_string).collect();
        format!("field {} {} {}", ctx.p(), ctx.degree(), m.join(" "))
    }
}

fn parse_field(line: &Line) -> Result<FieldCtx> {
    let rest = line.expect_key("field")?;
    if rest.len() < 2 {
        return Err(line.err("field line needs `p d`"));
    }
    let p = line.u64_at(1)?;
    let d = line.usize_at(2)?;
    let ctx = make_context(p, d).map_err(|e| line.err(e.to_string()))?;
    let listed = &rest[2..];
    if !listed.is_empty() || d > 1 {
        let m: Vec<u64> = listed
            .iter()
            .map(|t| t.parse().map_err(|_| line.err(format!("bad modulus coefficient `{t}`"))))
            .collect::<Result<_>>()?;
        if m != ctx.modulus() {
            return Err(line.err(format!(
                "modulus {:?} differs from the canonical modulus {:?} of {}",
                m,
                ctx.modulus(),
                ctx.name()
            )));
        }
    }
    Ok(ctx)
}

fn parse_dims(line: &Line) -> Result<(usize, usize, usize)> {
    line.expect_key("dims")?;
    if line.toks.len() != 4 {
        return Err(line.err("dims line needs three integers"));
    }
    Ok((line.usize_at(1)?, line.usize_at(2)?, line.usize_at(3)?))
}

fn parse_count(line: &Line, key: &str) -> Result<usize> {
    line.expect_key(key)?;
    if line.toks.len() != 2 {
        return Err(line.err(format!("`{key}` needs one integer")));
    }
    line.usize_at(1)
}

fn form_line(lines: &mut Lines, ctx: &FieldCtx, key: &str, len: usize) -> Result<Vec<FieldElem>> {
    let line = lines.next()?;
    let rest = line.expect_key(key)?;
    elems(line, ctx, rest, len)
}

pub fn write_decomp(d: &BilinearDecomp) -> String {
    let f = d.ctx();
    let (n1, n2, n3) = d.dims();
    let mut out = format!("{DECOMP_HEADER}\n{}\ndims {n1} {n2} {n3}\nrank {}\n", field_line(f), d.m());
    for t in d.triples() {
        out.push_str("triple\n");
        out.push_str(&format!("{}\n{}\n{}\n", keyed("u", f, t.u.coeffs()), keyed("v", f, t.v.coeffs()), keyed("w", f, &t.w)));
    }
    out
}

fn parse_decomp_body(lines: &mut Lines, ctx: &FieldCtx, dims: (usize, usize, usize), m: usize) -> Result<BilinearDecomp> {
    let (n1, n2, n3) = dims;
    let mut triples = Vec::with_capacity(m);
    for _ in 0..m {
        lines.next()?.expect_key("triple")?;
        let u = form_line(lines, ctx, "u", n1 * n2)?;
        let v = form_line(lines, ctx, "v", n2 * n3)?;
        let w = form_line(lines, ctx, "w", n1 * n3)?;
        triples.push(BilinearTriple {
            u: LinForm::new(ctx, u)?,
            v: LinForm::new(ctx, v)?,
            w,
        });
    }
    BilinearDecomp::new(ctx, dims, triples)
}

pub fn parse_decomp(text: &str) -> Result<BilinearDecomp> {
    let mut lines = Lines::new(text);
    lines.header(DECOMP_HEADER)?;
    let ctx = parse_field(lines.next()?)?;
    let dims = parse_dims(lines.next()?)?;
    let m = parse_count(lines.next()?, "rank")?;
    let d = parse_decomp_body(&mut lines, &ctx, dims, m)?;
    lines.finish()?;
    Ok(d)
}

pub fn write_quad(q: &QuadCircuit) -> String {
    let f = q.ctx();
    let mut out = format!("{QUAD_HEADER}\n{}\nn {}\nrank {}\n", field_line(f), q.n(), q.m());
    for t in q.triples() {
        out.push_str("triple\n");
        out.push_str(&format!(
            "{}\n{}\n{}\n",
            keyed("a", f, t.a.coeffs()),
            keyed("b", f, t.b.coeffs()),
            keyed("alpha", f, &t.alpha)
        ));
    }
    out
}

pub fn parse_quad(text: &str) -> Result<QuadCircuit> {
    let mut lines = Lines::new(text);
    lines.header(QUAD_HEADER)?;
    let ctx = parse_field(lines.next()?)?;
    let n = parse_count(lines.next()?, "n")?;
    let m = parse_count(lines.next()?, "rank")?;
    let nn = n * n;
    let mut triples = Vec::with_capacity(m);
    for _ in 0..m {
        lines.next()?.expect_key("triple")?;
        let a = form_line(&mut lines, &ctx, "a", 2 * nn)?;
        let b = form_line(&mut lines, &ctx, "b", 2 * nn)?;
        let alpha = form_line(&mut lines, &ctx, "alpha", nn)?;
        triples.push(QuadTriple {
            a: LinForm::new(&ctx, a)?,
            b: LinForm::new(&ctx, b)?,
            alpha,
        });
    }
    lines.finish()?;
    QuadCircuit::new(&ctx, n, triples)
}

pub fn write_tensor(t: &Tensor3) -> String {
    let f = t.ctx();
    let (a, b, c) = t.dims();
    format!(
        "{TENSOR_HEADER}\n{}\ndims {a} {b} {c}\n{}\n",
        field_line(f),
        keyed("entries", f, t.entries())
    )
}

pub fn parse_tensor(text: &str) -> Result<Tensor3> {
    let mut lines = Lines::new(text);
    lines.header(TENSOR_HEADER)?;
    let ctx = parse_field(lines.next()?)?;
    let dims = parse_dims(lines.next()?)?;
    let entries = form_line(&mut lines, &ctx, "entries", dims.0 * dims.1 * dims.2)?;
    lines.finish()?;
    Tensor3::new(&ctx, dims, entries)
}

pub fn write_certificate(c: &BoundCertificate) -> String {
    let f = c.ctx();
    let n = c.n();
    let mut out = format!(
        "{CERT_HEADER}\nkind {}\n{}\nn {n}\ngates {}\nseed {}\n",
        c.kind.name(),
        field_line(f),
        c.m_actual,
        c.seed
    );
    match &c.source {
        CertSource::Code(code) => {
            out.push_str("SOURCE code\n");
            for form in code.forms() {
                out.push_str(&keyed("form", f, form.coeffs()));
                out.push('\n');
            }
        }
        CertSource::Circuit(d) => {
            out.push_str("SOURCE circuit\n");
            for t in d.triples() {
                out.push_str("triple\n");
                out.push_str(&format!("{}\n{}\n{}\n", keyed("u", f, t.u.coeffs()), keyed("v", f, t.v.coeffs()), keyed("w", f, &t.w)));
            }
        }
    }
    for step in &c.steps {
        out.push_str(&format!("STEP {}\n", step.name));
        for m in &step.family {
            out.push_str(&keyed("member", f, m.entries()));
            out.push('\n');
        }
        for (name, m) in &step.mats {
            out.push_str(&keyed(&format!("mat {name}"), f, m.entries()));
            out.push('\n');
        }
        for (name, l) in &step.lists {
            let mut line = format!("list {name}");
            for i in l {
                line.push_str(&format!(" {i}"));
            }
            out.push_str(&line);
            out.push('\n');
        }
        for (name, v) in &step.claims {
            out.push_str(&format!("claim {name} {v}\n"));
        }
    }
    if let Some(t) = c.t {
        out.push_str(&format!("T {t}\n"));
    }
    out.push_str(&format!("BOUND {}\n", c.bound));
    out
}

fn parse_name(line: &Line, key: &str) -> Result<String> {
    let rest = line.expect_key(key)?;
    match rest {
        [name] => Ok(name.to_string()),
        _ => Err(line.err(format!("`{key}` needs exactly one name"))),
    }
}

pub fn parse_certificate(text: &str) -> Result<BoundCertificate> {
    let mut lines = Lines::new(text);
    lines.header(CERT_HEADER)?;
    let line = lines.next()?;
    let kind_name = parse_name(line, "kind")?;
    let kind = CertKind::from_name(&kind_name).ok_or_else(|| line.err(format!("unknown certificate kind `{kind_name}`")))?;
    let ctx = parse_field(lines.next()?)?;
    let n = parse_count(lines.next()?, "n")?;
    let m = parse_count(lines.next()?, "gates")?;
    let seed_line = lines.next()?;
    seed_line.expect_key("seed")?;
    let seed = seed_line.u64_at(1)?;
    let nn = n * n;

    let line = lines.next()?;
    let source = match parse_name(line, "SOURCE")?.as_str() {
        "code" => {
            let mut forms = Vec::with_capacity(m);
            for _ in 0..m {
                forms.push(LinForm::new(&ctx, form_line(&mut lines, &ctx, "form", nn)?)?);
            }
            CertSource::Code(MatrixCode::new(&ctx, n, forms)?)
        }
        "circuit" => CertSource::Circuit(parse_decomp_body(&mut lines, &ctx, (n, n, n), m)?),
        other => return Err(line.err(format!("unknown source `{other}`"))),
    };

    let mut steps: Vec<CertStep> = Vec::new();
    let mut t = None;
    let bound;
    loop {
        let line = lines.next()?;
        match line.keyword() {
            "STEP" => steps.push(CertStep::new(&parse_name(line, "STEP")?)),
            "member" | "mat" | "list" | "claim" => {
                let step = steps.last_mut().ok_or_else(|| line.err("witness line outside a STEP"))?;
                match line.keyword() {
                    "member" => {
                        let e = elems(line, &ctx, &line.toks[1..], nn)?;
                        step.family.push(Mat::from_elems(&ctx, n, n, e)?);
                    }
                    "mat" => {
                        let name = line.toks.get(1).ok_or_else(|| line.err("matrix needs a name"))?;
                        let e = elems(line, &ctx, &line.toks[2..], nn)?;
                        step.mats.push((name.to_string(), Mat::from_elems(&ctx, n, n, e)?));
                    }
                    "list" => {
                        let name = line.toks.get(1).ok_or_else(|| line.err("list needs a name"))?;
                        let l = (2..line.toks.len()).map(|i| line.usize_at(i)).collect::<Result<Vec<_>>>()?;
                        step.lists.push((name.to_string(), l));
                    }
                    _ => {
                        if line.toks.len() != 3 {
                            return Err(line.err("claim needs a name and a value"));
                        }
                        step.claims.push((line.toks[1].to_string(), line.u64_at(2)?));
                    }
                }
            }
            "T" => t = Some(parse_count(line, "T")?),
            "BOUND" => {
                bound = parse_count(line, "BOUND")?;
                break;
            }
            other => return Err(line.err(format!("unexpected `{other}` in certificate"))),
        }
    }
    lines.finish()?;
    Ok(BoundCertificate {
        kind,
        source,
        seed,
        steps,
        t,
        bound,
        m_actual: m,
    })
}

pub fn parse_artifact(text: &str) -> Result<Artifact> {
    let lines = Lines::new(text);
    let first = lines.peek().ok_or_else(|| Error::parse(1, "empty input"))?;
    match first.toks.join(" ").as_str() {
        DECOMP_HEADER => parse_decomp(text).map(Artifact::Decomp),
        QUAD_HEADER => parse_quad(text).map(Artifact::Quad),
        TENSOR_HEADER => parse_tensor(text).map(Artifact::Tensor),
        CERT_HEADER => parse_certificate(text).map(Artifact::Certificate),
        other => Err(first.err(format!("unknown header `{other}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::{naive_decomp, strassen_decomp, to_quadratic};
    use crate::lowerbound::{blaser_certificate, check_certificate, gf2_pipeline, SearchConfig};
    use crate::matcodes::code_from_bilinear;
    use crate::rank_oracle::{karatsuba_tensor, mp_tensor};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn decomp_round_trip_and_layout() {
        let f3 = make_context(3, 1).unwrap();
        let d = strassen_decomp(&f3);
        let text = write_decomp(&d);
        assert!(text.starts_with("MPDECOMP v1\nfield 3 1\ndims 2 2 2\nrank 7\ntriple\nu 1 0 0 1\n"));
        assert_eq!(parse_decomp(&text).unwrap(), d);
        let commented = text.replace("rank 7\n", "rank 7   # seven products\n\n# blank lines are fine\n");
        assert_eq!(parse_decomp(&commented).unwrap(), d);
    }

    #[test]
    fn extension_field_header() {
        let f4 = make_context(2, 2).unwrap();
        let d = naive_decomp(2, &f4);
        let text = write_decomp(&d);
        assert!(text.contains("field 2 2 1 1 1\n"));
        assert_eq!(parse_decomp(&text).unwrap(), d);
        let wrong = text.replace("field 2 2 1 1 1", "field 2 2 1 0 1");
        assert!(matches!(parse_decomp(&wrong), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        assert!(matches!(parse_decomp("MPDECOMP v2\n"), Err(Error::Parse { line: 1, .. })));
        let f2 = make_context(2, 1).unwrap();
        let text = write_decomp(&naive_decomp(2, &f2));
        let bad = text.replacen("u 1 0 0 0", "u 1 0 0 2", 1);
        assert!(matches!(parse_decomp(&bad), Err(Error::Parse { line: 6, .. })));
        let short = text.replacen("v 1 0 0 0", "v 1 0 0", 1);
        assert!(matches!(parse_decomp(&short), Err(Error::Parse { line: 7, .. })));
        let truncated: String = text.lines().take(10).map(|l| format!("{l}\n")).collect();
        assert!(matches!(parse_decomp(&truncated), Err(Error::Parse { .. })));
        assert!(matches!(parse_artifact("HELLO\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn quad_and_tensor_round_trip() {
        let f5 = make_context(5, 1).unwrap();
        let q = to_quadratic(&strassen_decomp(&f5)).unwrap();
        assert_eq!(parse_quad(&write_quad(&q)).unwrap(), q);
        for t in [karatsuba_tensor(&f5), mp_tensor(2, &f5)] {
            assert_eq!(parse_tensor(&write_tensor(&t)).unwrap(), t);
        }
        assert!(matches!(parse_artifact(&write_quad(&q)).unwrap(), Artifact::Quad(_)));
    }

    #[test]
    fn certificate_round_trip() {
        let f2 = make_context(2, 1).unwrap();
        let a = Mat::unit(&f2, 2, 2, 0, 1);
        let b = Mat::unit(&f2, 2, 2, 1, 0);
        let cert = blaser_certificate(&naive_decomp(2, &f2), &a, &b).unwrap();
        let text = write_certificate(&cert);
        let back = parse_certificate(&text).unwrap();
        assert_eq!(back, cert);
        check_certificate(&back).unwrap();
        let code = code_from_bilinear(&strassen_decomp(&f2)).unwrap();
        let cert = gf2_pipeline(&code, 3, &SearchConfig::default()).unwrap();
        let text = write_certificate(&cert);
        assert_eq!(parse_certificate(&text).unwrap(), cert);
        assert_eq!(write_certificate(&parse_certificate(&text).unwrap()), text);
        let tampered = text.replace("BOUND ", "BOUND 1");
        assert!(check_certificate(&parse_certificate(&tampered).unwrap()).is_err());
    }

    proptest! {
        #[test]
        fn random_decomp_round_trip(seed in 0u64..200, p in prop::sample::select(vec![2u64, 3, 5, 7]), d in 1usize..3) {
            let f = make_context(p, d).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let dims = (1 + seed as usize % 3, 1 + (seed as usize / 3) % 3, 1 + (seed as usize / 9) % 3);
            let m = 1 + seed as usize % 4;
            let rv = |len: usize, rng: &mut ChaCha8Rng| (0..len).map(|_| f.random(rng)).collect::<Vec<_>>();
            let triples = (0..m)
                .map(|_| BilinearTriple {
                    u: LinForm::new(&f, rv(dims.0 * dims.1, &mut rng)).unwrap(),
                    v: LinForm::new(&f, rv(dims.1 * dims.2, &mut rng)).unwrap(),
                    w: rv(dims.0 * dims.2, &mut rng),
                })
                .collect();
            let dec = BilinearDecomp::new(&f, dims, triples).unwrap();
            prop_assert_eq!(parse_decomp(&write_decomp(&dec)).unwrap(), dec);
            let t = Tensor3::new(&f, dims, rv(dims.0 * dims.1 * dims.2, &mut rng)).unwrap();
            prop_assert_eq!(parse_tensor(&write_tensor(&t)).unwrap(), t);
        }

        #[test]
        fn random_quad_round_trip(seed in 0u64..100, p in prop::sample::select(vec![2u64, 3])) {
            let f = make_context(p, 1).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = 1 + seed as usize % 2;
            let nn = n * n;
            let rv = |len: usize, rng: &mut ChaCha8Rng| (0..len).map(|_| f.random(rng)).collect::<Vec<_>>();
            let triples = (0..1 + seed as usize % 4)
                .map(|_| QuadTriple {
                    a: LinForm::new(&f, rv(2 * nn, &mut rng)).unwrap(),
                    b: LinForm::new(&f, rv(2 * nn, &mut rng)).unwrap(),
                    alpha: rv(nn, &mut rng),
                })
                .collect();
            let q = QuadCircuit::new(&f, n, triples).unwrap();
            prop_assert_eq!(parse_quad(&write_quad(&q)).unwrap(), q);
        }
    }
}
