//! Finite-basis labels for `End(A)` as functions of the size and height of
//! the semilattice `A`, with runnable certificates.
//!
//! The labels restate known results and are not re-derived; the
//! certificates are the finite constructions those results rest on.

use serde::Serialize;

use crate::catalog::cone_embedding;
use crate::semilattice::{endomorphism_semiring_with, EndomorphismBudget, Semilattice};
use crate::structure::{find_nonabelian_nilpotent_subgroup, MAX_SUBGROUP_AMBIENT};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CertificateStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub id: String,
    pub status: CertificateStatus,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    pub name: String,
    pub size: usize,
    pub height: usize,
    pub finitely_based: bool,
    pub nfb: bool,
    pub infb_sufficient: bool,
    pub snfb_sufficient: bool,
    pub certificates: Vec<Certificate>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Labels {
    pub finitely_based: bool,
    pub nfb: bool,
    pub infb_sufficient: bool,
    pub snfb_sufficient: bool,
}

pub fn labels(size: usize, height: usize) -> Labels {
    Labels {
        finitely_based: size <= 2,
        nfb: size >= 3,
        infb_sufficient: height >= 3,
        snfb_sufficient: size >= 5,
    }
}

/// Endomorphism count allowed while building certificates.
pub const CERTIFICATE_BUDGET: EndomorphismBudget = EndomorphismBudget { max_maps: 600 };

fn certificate(id: &str, ok: bool, detail: String) -> Certificate {
    Certificate {
        id: id.into(),
        status: if ok { CertificateStatus::Pass } else { CertificateStatus::Fail },
        detail,
    }
}

fn skipped(id: &str, detail: String) -> Certificate {
    Certificate {
        id: id.into(),
        status: CertificateStatus::Skipped,
        detail,
    }
}

pub fn classify(a: &Semilattice) -> Classification {
    let (size, height) = (a.size(), a.height());
    let l = labels(size, height);
    let mut certificates = Vec::new();
    let end = endomorphism_semiring_with(a, CERTIFICATE_BUDGET);
    if l.finitely_based {
        certificates.push(match &end {
            Ok(end) => {
                let s = &end.semiring;
                let ok = s.ids().all(|x| s.mul(x, x) == x);
                certificate("idempotent-multiplication", ok, format!("all {} elements of {} satisfy x x = x", s.size(), s.name()))
            }
            Err(e) => skipped("idempotent-multiplication", e.to_string()),
        });
    }
    if l.infb_sufficient {
        certificates.push(match cone_embedding(a) {
            Ok(c) => {
                let ok = c.map.is_embedding() && c.max_law && c.compose_law && c.blocks_are_homomorphism;
                certificate(
                    "cone-embedding",
                    ok,
                    format!("End(C3) embeds in {} along the chain {:?}", c.end.semiring.name(), c.chain.map(|v| a.elements()[v as usize].clone())),
                )
            }
            Err(e) => skipped("cone-embedding", e.to_string()),
        });
    }
    if l.snfb_sufficient && height == 2 {
        certificates.push(match &end {
            Ok(end) if end.semiring.size() <= MAX_SUBGROUP_AMBIENT => match find_nonabelian_nilpotent_subgroup(&end.semiring) {
                Ok(Some(g)) => certificate(
                    "dihedral-subgroup",
                    g.order == 8 && g.class == Some(2),
                    format!("subgroup of order {} and class {:?} generated by {:?}", g.order, g.class, g.generators),
                ),
                Ok(None) => certificate("dihedral-subgroup", false, "no nonabelian nilpotent subgroup".into()),
                Err(e) => skipped("dihedral-subgroup", e.to_string()),
            },
            Ok(end) => skipped("dihedral-subgroup", format!("{} has {} elements", end.semiring.name(), end.semiring.size())),
            Err(e) => skipped("dihedral-subgroup", e.to_string()),
        });
    }
    Classification {
        name: a.name().into(),
        size,
        height,
        finitely_based: l.finitely_based,
        nfb: l.nfb,
        infb_sufficient: l.infb_sufficient,
        snfb_sufficient: l.snfb_sufficient,
        certificates,
    }
}
