//! Text forms of operator windows and excitation states.

use anyhow::{anyhow, bail, Context, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use semifredkin::entanglement::{LocalOperatorSpec, SiteOperator};
use semifredkin::spectra::{
    build_excitation, build_highly_excited, random_excitation_segments, ExcitationSegment, StateVector,
};
use semifredkin::walk::Step;

fn step(text: &str) -> Result<Step> {
    let digits: Vec<u8> = text
        .trim()
        .chars()
        .filter(|c| *c != ',')
        .map(|c| {
            c.to_digit(10)
                .map(|d| d as u8)
                .ok_or_else(|| anyhow!("bad step `{text}`"))
        })
        .collect::<Result<_>>()?;
    match digits[..] {
        [a, b] => Ok(Step::new(a, b)?),
        _ => bail!("a step is two indices, got `{text}`"),
    }
}

fn site_operator(text: &str) -> Result<SiteOperator> {
    let text = text.trim();
    let (name, args) = text
        .strip_suffix(')')
        .and_then(|t| t.split_once('('))
        .ok_or_else(|| anyhow!("expected name(args), got `{text}`"))?;
    match name {
        "flip" => {
            let (ket, bra) = args
                .split_once(';')
                .ok_or_else(|| anyhow!("flip(ket;bra), got `{text}`"))?;
            Ok(SiteOperator::flip(step(ket)?, step(bra)?)?)
        }
        "diag" => Ok(SiteOperator::diagonal(step(args)?)),
        "const" => Ok(SiteOperator::constant(args.trim().parse().context("const(value)")?)),
        other => bail!("unknown site operator `{other}`"),
    }
}

/// `flip(12;31)@2`, or a product `diag(21)*flip(12;31)*diag(12)@3` centred on
/// the given site.
pub fn operator(text: &str) -> Result<LocalOperatorSpec> {
    let (factors, site) = text
        .rsplit_once('@')
        .ok_or_else(|| anyhow!("operator `{text}` needs @site"))?;
    let site: usize = site.trim().parse().with_context(|| format!("site in `{text}`"))?;
    let factors: Vec<SiteOperator> = factors.split('*').map(site_operator).collect::<Result<_>>()?;
    if factors.len().is_multiple_of(2) {
        bail!("a window needs an odd number of factors, got {}", factors.len());
    }
    let radius = factors.len() / 2;
    Ok(LocalOperatorSpec::product(site, radius, factors)?)
}

/// A disconnection eigenstate with its energy and a stable identifier:
/// `he:N:R`, `random:N:K:SEED`, or `segments:L,a,b,h0,h1;...`.
pub fn excitation(text: &str) -> Result<(String, StateVector, usize)> {
    let (kind, rest) = text
        .split_once(':')
        .ok_or_else(|| anyhow!("state `{text}` needs kind:args"))?;
    let numbers = |s: &str| -> Result<Vec<i64>> {
        s.split([':', ','])
            .map(|x| x.trim().parse::<i64>().with_context(|| format!("`{x}` in `{text}`")))
            .collect()
    };
    match kind {
        "he" => match numbers(rest)?[..] {
            [n, r] => Ok((
                format!("he_n{n}_r{r}"),
                build_highly_excited(n as usize, r as usize)?,
                r as usize,
            )),
            _ => bail!("he:N:R"),
        },
        "random" => match numbers(rest)?[..] {
            [n, k, seed] => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed as u64);
                let segs = random_excitation_segments(n as usize, k as usize, &mut rng)?;
                Ok((
                    format!("random_n{n}_k{k}_s{seed}"),
                    build_excitation(&segs)?,
                    k as usize,
                ))
            }
            _ => bail!("random:N:K:SEED"),
        },
        "segments" => {
            let segs = rest
                .split(';')
                .map(|s| match numbers(s)?[..] {
                    [len, a, b, h0, h1] => Ok(ExcitationSegment::new(
                        len as usize,
                        a as u8,
                        b as u8,
                        h0 as i32,
                        h1 as i32,
                    )),
                    _ => bail!("segment is len,a,b,h0,h1, got `{s}`"),
                })
                .collect::<Result<Vec<_>>>()?;
            let k = segs.len() - 1;
            Ok((
                format!("segments_{}", rest.replace([',', ';'], "_")),
                build_excitation(&segs)?,
                k,
            ))
        }
        other => bail!("unknown state kind `{other}`"),
    }
}

/// `1,2,5` or `0.5,1,5`.
pub fn list<T: std::str::FromStr>(text: &str) -> Result<Vec<T>>
where
    T::Err: std::error::Error + Send + Sync + 'static,
{
    text.split(',')
        .map(|x| x.trim().parse::<T>().with_context(|| format!("`{x}` in `{text}`")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn operators() {
        let op = operator("flip(12;31)@2").unwrap();
        assert_eq!((op.site, op.radius, op.label()), (2, 0, "flip(12;31)".to_string()));
        let op = operator("diag(21)*flip(1,2;3,1)*const(2)@3").unwrap();
        assert_eq!((op.first_site(), op.last_site()), (2, 4));
        assert!(operator("diag(21)*diag(12)@3").is_err());
        assert!(operator("flip(12;12)@1").is_err());
        assert!(operator("diag(21)").is_err());
        assert!(operator("diag(44)@1").is_err());
    }

    #[test]
    fn states() {
        let (id, s, k) = excitation("he:5:1").unwrap();
        assert_eq!((id.as_str(), s.sites(), k), ("he_n5_r1", 5, 1));
        let (_, s, k) = excitation("segments:2,1,1,0,0;3,2,1,1,0").unwrap();
        assert_eq!((s.sites(), k), (5, 1));
        let (_, s, k) = excitation("random:6:2:42").unwrap();
        assert_eq!((s.sites(), k), (6, 2));
        assert!(excitation("he:5").is_err());
        assert!(excitation("nope:1").is_err());
    }

    #[test]
    fn lists() {
        assert_eq!(list::<f64>("0.5, 1,5").unwrap(), vec![0.5, 1.0, 5.0]);
        assert!(list::<usize>("1,x").is_err());
    }
}
