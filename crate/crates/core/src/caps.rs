//! Resource caps for the exhaustive procedures.
//!
//! Every enumeration in the crate is bounded by one of these limits. The
//! defaults are also the hard maxima: [`Caps::lowered_to`] can only shrink
//! them, and raising requires building the struct explicitly.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Caps {
    /// Largest arity swept over all of `{0,1}^n`.
    pub enumeration: usize,
    /// Longest generator accepted by `partial_sum_set`.
    pub pss_len: usize,
    /// Largest target set for the cover search.
    pub cover_targets: usize,
    /// Largest `k` the cover search may try.
    pub cover_k: usize,
    /// Largest arity for the exact all-Boolean search.
    pub boolean_arity: usize,
    /// Largest arity for the signed-product search.
    pub signed_arity: usize,
    /// Largest arity for materialized no-good systems.
    pub nogood_arity: usize,
    /// Largest N for the LABS polynomial expansion and the standard IP.
    pub labs_expand: usize,
    /// Largest N for the indicator-only LABS model.
    pub labs_indicator_only: usize,
    /// Largest N solved by exhaustive enumeration.
    pub labs_exhaustive: usize,
}

impl Caps {
    pub const MAX: Caps = Caps {
        enumeration: 20,
        pss_len: 24,
        cover_targets: 10,
        cover_k: 8,
        boolean_arity: 4,
        signed_arity: 6,
        nogood_arity: 12,
        labs_expand: 20,
        labs_indicator_only: 8,
        labs_exhaustive: 28,
    };

    /// Caps where every field is `min(self.field, limit)`.
    pub fn lowered_to(&self, limit: usize) -> Caps {
        Caps {
            enumeration: self.enumeration.min(limit),
            pss_len: self.pss_len.min(limit),
            cover_targets: self.cover_targets.min(limit),
            cover_k: self.cover_k.min(limit),
            boolean_arity: self.boolean_arity.min(limit),
            signed_arity: self.signed_arity.min(limit),
            nogood_arity: self.nogood_arity.min(limit),
            labs_expand: self.labs_expand.min(limit),
            labs_indicator_only: self.labs_indicator_only.min(limit),
            labs_exhaustive: self.labs_exhaustive.min(limit),
        }
    }

    pub const NAMES: [&'static str; 10] = [
        "enumeration",
        "pss_len",
        "cover_targets",
        "cover_k",
        "boolean_arity",
        "signed_arity",
        "nogood_arity",
        "labs_expand",
        "labs_indicator_only",
        "labs_exhaustive",
    ];

    fn field_mut(&mut self, name: &str) -> Option<&mut usize> {
        Some(match name {
            "enumeration" => &mut self.enumeration,
            "pss_len" => &mut self.pss_len,
            "cover_targets" => &mut self.cover_targets,
            "cover_k" => &mut self.cover_k,
            "boolean_arity" => &mut self.boolean_arity,
            "signed_arity" => &mut self.signed_arity,
            "nogood_arity" => &mut self.nogood_arity,
            "labs_expand" => &mut self.labs_expand,
            "labs_indicator_only" => &mut self.labs_indicator_only,
            "labs_exhaustive" => &mut self.labs_exhaustive,
            _ => return None,
        })
    }

    /// Sets the cap called `name`. Values above [`Caps::MAX`] are refused
    /// unless `allow_raise` is set.
    pub fn set(&mut self, name: &str, value: usize, allow_raise: bool) -> Result<()> {
        let max = Caps::MAX.clone().field_mut(name).map(|v| *v);
        let (Some(max), Some(field)) = (max, self.field_mut(name)) else {
            return Err(Error::InvalidArgument(format!(
                "unknown cap `{name}` (expected one of {})",
                Caps::NAMES.join(", ")
            )));
        };
        if value > max && !allow_raise {
            return Err(Error::InvalidArgument(format!(
                "cap `{name}` can only be lowered (maximum {max})"
            )));
        }
        *field = value;
        Ok(())
    }

    pub(crate) fn check(what: &'static str, requested: usize, limit: usize) -> Result<()> {
        if requested > limit {
            Err(Error::CapExceeded { what, requested, limit })
        } else {
            Ok(())
        }
    }
}

impl Default for Caps {
    fn default() -> Self {
        Caps::MAX
    }
}
