//! Stable string identifiers for catalog kernels.
//!
//! Grammar (polynomials are comma-separated coefficients, low degree
//! first; characters are indices in `Z/(q−1)`):
//!
//! - `kl:<r>`
//! - `klchars:<j1>,<j2>,...[@<t>]`
//! - `hyp:<chi indices>|<rho indices>[@<t>]` (either side may be empty)
//! - `toric:<a>,<b>,<c>`
//! - `monomial:<a1>,<a2>,...`
//! - `fiber:<poly>`
//! - `ftphase:<poly>`
//! - `rank1:<j>;<f num>/<f den>;<g num>/<g den>` (a `/den` may be omitted)

use super::{builders, CharMultiset, TraceError, TraceTable};
use crate::ffield::{AddChar, Field, MultChar, Poly, PrimeFieldCtx, RationalFn};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KernelSpec {
    Kloosterman {
        r: u32,
    },
    KloostermanChars {
        chars: Vec<u64>,
        t: u64,
    },
    Hypergeometric {
        chi: Vec<u64>,
        rho: Vec<u64>,
        t: u64,
    },
    Toric {
        a: i64,
        b: i64,
        c: i64,
    },
    Monomial {
        a: Vec<u64>,
    },
    Fiber {
        f: Vec<i64>,
    },
    FtPhase {
        f: Vec<i64>,
    },
    RankOne {
        j: u64,
        f_num: Vec<i64>,
        f_den: Vec<i64>,
        g_num: Vec<i64>,
        g_den: Vec<i64>,
    },
}

fn bad(s: &str) -> TraceError {
    TraceError::BadSpec(s.to_string())
}

fn parse_list<T: std::str::FromStr>(s: &str, whole: &str) -> Result<Vec<T>, TraceError> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|p| p.trim().parse::<T>().map_err(|_| bad(whole)))
        .collect()
}

impl KernelSpec {
    pub fn parse(s: &str) -> Result<Self, TraceError> {
        let (kind, rest) = s.split_once(':').ok_or_else(|| bad(s))?;
        match kind {
            "kl" => Ok(KernelSpec::Kloosterman {
                r: rest.parse().map_err(|_| bad(s))?,
            }),
            "klchars" => {
                let (idx, t) = split_at_t(rest, s)?;
                Ok(KernelSpec::KloostermanChars {
                    chars: parse_list(idx, s)?,
                    t,
                })
            }
            "hyp" => {
                let (body, t) = split_at_t(rest, s)?;
                let (chi, rho) = body.split_once('|').ok_or_else(|| bad(s))?;
                Ok(KernelSpec::Hypergeometric {
                    chi: parse_list(chi, s)?,
                    rho: parse_list(rho, s)?,
                    t,
                })
            }
            "toric" => {
                let v: Vec<i64> = parse_list(rest, s)?;
                if v.len() != 3 {
                    return Err(bad(s));
                }
                Ok(KernelSpec::Toric {
                    a: v[0],
                    b: v[1],
                    c: v[2],
                })
            }
            "monomial" => Ok(KernelSpec::Monomial {
                a: parse_list(rest, s)?,
            }),
            "fiber" => Ok(KernelSpec::Fiber {
                f: parse_list(rest, s)?,
            }),
            "ftphase" => Ok(KernelSpec::FtPhase {
                f: parse_list(rest, s)?,
            }),
            "rank1" => {
                let parts: Vec<&str> = rest.split(';').collect();
                if parts.len() != 3 {
                    return Err(bad(s));
                }
                let j = parts[0].parse().map_err(|_| bad(s))?;
                let (f_num, f_den) = parse_fraction(parts[1], s)?;
                let (g_num, g_den) = parse_fraction(parts[2], s)?;
                Ok(KernelSpec::RankOne {
                    j,
                    f_num,
                    f_den,
                    g_num,
                    g_den,
                })
            }
            _ => Err(bad(s)),
        }
    }

    /// Canonical identifier; `parse(label())` round-trips.
    pub fn label(&self) -> String {
        let ints = |v: &[u64]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        let sints = |v: &[i64]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        match self {
            KernelSpec::Kloosterman { r } => format!("kl:{r}"),
            KernelSpec::KloostermanChars { chars, t } => {
                format!("klchars:{}@{t}", ints(chars))
            }
            KernelSpec::Hypergeometric { chi, rho, t } => {
                format!("hyp:{}|{}@{t}", ints(chi), ints(rho))
            }
            KernelSpec::Toric { a, b, c } => format!("toric:{a},{b},{c}"),
            KernelSpec::Monomial { a } => format!("monomial:{}", ints(a)),
            KernelSpec::Fiber { f } => format!("fiber:{}", sints(f)),
            KernelSpec::FtPhase { f } => format!("ftphase:{}", sints(f)),
            KernelSpec::RankOne {
                j,
                f_num,
                f_den,
                g_num,
                g_den,
            } => format!(
                "rank1:{j};{}/{};{}/{}",
                sints(f_num),
                sints(f_den),
                sints(g_num),
                sints(g_den)
            ),
        }
    }

    /// Tabulate over the prime field.
    pub fn tabulate(&self, ctx: &PrimeFieldCtx) -> Result<TraceTable, TraceError> {
        let qm1 = ctx.q() - 1;
        match self {
            KernelSpec::KloostermanChars { chars, t } => builders::kloosterman_chars(
                ctx,
                &CharMultiset::new(qm1, chars),
                AddChar::new(*t),
            ),
            KernelSpec::Hypergeometric { chi, rho, t } => builders::hypergeometric(
                ctx,
                &CharMultiset::new(qm1, chi),
                &CharMultiset::new(qm1, rho),
                AddChar::new(*t),
            ),
            KernelSpec::Toric { a, b, c } => builders::toric_kernel(ctx, *a, *b, *c),
            KernelSpec::Monomial { a } => builders::monomial_product_sum(ctx, a),
            KernelSpec::FtPhase { f } => {
                builders::poly_phase_ft(ctx, &Poly::from_coeffs(ctx, f))
            }
            _ => self.tabulate_in(ctx),
        }
    }

    /// Tabulate over any field implementing [`Field`]; only kernels with a
    /// universal defining formula (Kloosterman, fiber counts, rank-one with
    /// index-scaled characters) support extensions.
    pub fn tabulate_in<F: Field>(&self, field: &F) -> Result<TraceTable, TraceError> {
        match self {
            KernelSpec::Kloosterman { r } => {
                if *r < 1 {
                    return Err(TraceError::EmptyParams);
                }
                Ok(builders::kloosterman(field, *r))
            }
            KernelSpec::Fiber { f } => {
                let p = Poly::from_coeffs(field.base(), f);
                builders::fiber_count(field, &p)
            }
            KernelSpec::RankOne {
                j,
                f_num,
                f_den,
                g_num,
                g_den,
            } => {
                let base = field.base();
                let fr = RationalFn::new(
                    base,
                    Poly::from_coeffs(base, f_num),
                    Poly::from_coeffs(base, f_den),
                )?;
                let gr = RationalFn::new(
                    base,
                    Poly::from_coeffs(base, g_num),
                    Poly::from_coeffs(base, g_den),
                )?;
                builders::rank_one(field, MultChar::new(*j), &fr, &gr)
            }
            _ => Err(TraceError::UnsupportedExtension),
        }
    }

    /// Does this kernel admit extension-field tabulation?
    pub fn supports_extension(&self) -> bool {
        matches!(
            self,
            KernelSpec::Kloosterman { .. } | KernelSpec::Fiber { .. } | KernelSpec::RankOne { .. }
        )
    }
}

impl From<crate::ffield::FieldError> for TraceError {
    fn from(e: crate::ffield::FieldError) -> Self {
        TraceError::BadSpec(e.to_string())
    }
}

fn split_at_t<'a>(rest: &'a str, whole: &str) -> Result<(&'a str, u64), TraceError> {
    match rest.split_once('@') {
        Some((body, t)) => Ok((body, t.parse().map_err(|_| bad(whole))?)),
        None => Ok((rest, 1)),
    }
}

fn parse_fraction(s: &str, whole: &str) -> Result<(Vec<i64>, Vec<i64>), TraceError> {
    match s.split_once('/') {
        Some((n, d)) => Ok((parse_list(n, whole)?, parse_list(d, whole)?)),
        None => Ok((parse_list(s, whole)?, vec![1])),
    }
}
