//! Turning command-line values into core objects.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use arrovian_core::order::first_alts;
use arrovian_core::reversal::{build_gadget, Enumerator, GadgetSociety, TOY_COUNT};
use arrovian_core::setalg::Algebra;
use arrovian_core::society::{Domain, Society};
use arrovian_core::swf::Swf;
use arrovian_core::ultra::Ultrafilter;
use arrovian_core::Index;

use crate::args::{SocietyArgs, SocietyKind};
use crate::dto::TableFile;

pub struct BuiltSociety {
    pub society: Arc<Society>,
    pub gadget: Option<GadgetSociety>,
}

pub fn enumerator(h: Option<&Path>, toy: Option<u64>) -> Result<Enumerator> {
    match (h, toy) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let values: Vec<u64> =
                serde_json::from_str(&text).with_context(|| format!("{} is not a JSON array of naturals", path.display()))?;
            Ok(Enumerator::table(values)?)
        }
        (None, Some(k)) if k < TOY_COUNT => Ok(Enumerator::toy(k)),
        (None, Some(k)) => bail!("toy enumerator {k} does not exist (0..{TOY_COUNT})"),
        (None, None) => bail!("give --h FILE or --toy K"),
    }
}

pub fn society(args: &SocietyArgs) -> Result<BuiltSociety> {
    let alts = first_alts(args.alts);
    Ok(match args.kind {
        SocietyKind::Finite => BuiltSociety {
            society: Arc::new(Society::finite(args.voters, &alts)?),
            gadget: None,
        },
        SocietyKind::FiniteCofinite => BuiltSociety {
            society: Arc::new(Society::canonical(Arc::new(Algebra::finite_cofinite()), &alts)?),
            gadget: None,
        },
        SocietyKind::Gadget => {
            if args.alts != 3 {
                bail!("the gadget society has exactly 3 alternatives");
            }
            let g = build_gadget(enumerator(args.h.as_deref(), args.toy)?)?;
            BuiltSociety {
                society: g.society(),
                gadget: Some(g),
            }
        }
    })
}

pub fn index(text: &str) -> Result<Index> {
    text.trim()
        .parse()
        .map_err(|e| anyhow!("bad index {text:?}: {e}"))
}

fn points(list: &str) -> Result<Vec<u64>> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().with_context(|| format!("bad voter {s:?}")))
        .collect()
}

/// `set:1,2`, `cofinite:1,2`, `gen:N`, `mask:M` or `index:N`.
pub fn cell(a: &Algebra, spec: &str) -> Result<Index> {
    let (kind, rest) = spec
        .split_once(':')
        .ok_or_else(|| anyhow!("cell {spec:?} needs a kind prefix"))?;
    Ok(match kind {
        "set" => a.finite_set_index(&points(rest)?)?,
        "cofinite" => a.complement_index(&a.finite_set_index(&points(rest)?)?),
        "gen" => a.generator_index(rest.trim().parse()?),
        "mask" => a
            .subset_index(rest.trim().parse()?)
            .ok_or_else(|| anyhow!("masks need a finite society"))?,
        "index" => index(rest)?,
        _ => bail!("unknown cell kind {kind:?}"),
    })
}

pub fn domain(name: &str) -> Result<Domain> {
    match name {
        "weak" => Ok(Domain::Weak),
        "linear" => Ok(Domain::Linear),
        _ => bail!("unknown domain {name:?}"),
    }
}

/// `dictator:D`, `principal:D`, `frechet`, `frechet:STAGE` or `table:FILE`.
pub fn provenance(soc: &Arc<Society>, spec: &str) -> Result<Swf> {
    let (kind, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let alg = soc.algebra_arc();
    Ok(match kind {
        "dictator" => Swf::dictator(soc.clone(), rest.parse().context("dictator:D")?)?,
        "principal" => {
            let u = Ultrafilter::principal(alg, rest.parse().context("principal:D")?)?;
            Swf::from_ultrafilter(soc.clone(), u)
        }
        "frechet" if rest.is_empty() => Swf::from_ultrafilter(soc.clone(), Ultrafilter::frechet(alg)?),
        "frechet" => {
            let u = Ultrafilter::frechet_staged(alg, rest.parse().context("frechet:STAGE")?)?;
            Swf::from_ultrafilter(soc.clone(), u)
        }
        "table" => {
            let text = fs::read_to_string(rest).with_context(|| format!("reading {rest}"))?;
            let file: TableFile = serde_json::from_str(&text).context("table file")?;
            Swf::table(soc.clone(), domain(&file.domain)?, file.outputs)?
        }
        _ => bail!("unknown provenance {spec:?}"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cells_parse() {
        let a = Algebra::finite_cofinite();
        let s = cell(&a, "set:1, 4").unwrap();
        assert_eq!(a.set_at(&s).members_below(10), vec![1, 4]);
        let c = cell(&a, "cofinite:0").unwrap();
        assert_eq!(a.set_at(&c).members_below(3), vec![1, 2]);
        assert_eq!(cell(&a, &format!("index:{s}")).unwrap(), s);
        assert!(cell(&a, "mask:3").is_err());
        assert!(cell(&a, "nonsense").is_err());
        let p = Algebra::powerset(3).unwrap();
        assert_eq!(p.set_at(&cell(&p, "mask:5").unwrap()).members_below(3), vec![0, 2]);
    }

    #[test]
    fn provenances_parse() {
        let soc = Arc::new(Society::finite(2, &first_alts(3)).unwrap());
        assert!(provenance(&soc, "dictator:1").is_ok());
        assert!(provenance(&soc, "principal:0").is_ok());
        assert!(provenance(&soc, "dictator:x").is_err());
        // the Fréchet ultrafilter needs an infinite universe
        assert!(provenance(&soc, "frechet").is_err());
        assert!(provenance(&soc, "table:/nonexistent/file.json").is_err());
    }

    #[test]
    fn enumerator_sources() {
        assert!(enumerator(None, None).is_err());
        assert!(enumerator(None, Some(TOY_COUNT)).is_err());
        assert_eq!(enumerator(None, Some(2)).unwrap(), Enumerator::toy(2));
    }
}
