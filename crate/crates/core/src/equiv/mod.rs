//! Geometric equivalence of faces: canonical labeling of colored graphs,
//! permutation groups, face certificates and the direct affine-basis test.

mod canon;
mod cert;
pub mod group;
mod oracle;

pub use canon::{canonical_form, canonical_positions, isomorphic, CanonicalForm, ColoredGraph};
pub use cert::{
    cut_certificate, face_certificate, schlafli_certificate, schlafli_certificate_with, schlafli_mask_key, schlafli_masks,
    schlafli_subset, Certificate, Scheme,
};
pub use group::{Perm, PermGroup};
pub use oracle::oracle_equivalent;
